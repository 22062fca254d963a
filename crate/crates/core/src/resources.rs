//! Resource files compiled into the library so the tool runs without extra paths.

pub const FRAMES_TSV: &str = include_str!("../data/frames.tsv");
pub const CATEGORIES_DICT: &str = include_str!("../data/categories.dict");
pub const FOOD_TXT: &str = include_str!("../data/food.txt");
pub const GOLDEN_POS: &str = include_str!("../data/golden_pos.tagged");
/// Output of the synthetic generator's default spec (100 positive, 100 negative posts, seed 1).
pub const SYNTHETIC_SEED1: &str = include_str!("../data/synthetic_seed1.jsonl");
