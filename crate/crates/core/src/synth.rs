//! Synthetic scored-post corpora with known structure.
//!
//! Each sentence comes from a template pool of one well-being category and
//! one class, or from an injection (a clause shape placed into an exact
//! share of a class's sentences), or from a shared pool of class-neutral
//! sentences. Templates carry `{slot}` placeholders filled from word lists.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{sentence_id, ClassCounts, PostKind, RawPost};
use crate::lexicons::WellBeing;
use crate::{Error, Polarity, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassPool {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl ClassPool {
    fn of(&self, class: Polarity) -> &[String] {
        match class {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
            Polarity::Neutral => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Injection {
    pub name: String,
    pub class: Polarity,
    /// Share of the class's sentences that receive this injection.
    pub rate: f64,
    pub templates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub positives: usize,
    pub negatives: usize,
    /// Score-5 recordings without reflections.
    pub neutrals: usize,
    pub seed: u64,
    pub max_sentences: usize,
    /// Share of non-injected sentences drawn from the shared pool.
    pub ambiguous_rate: f64,
    /// Share of each class's posts turned into (score-5 recording, reflection) pairs.
    pub reflection_rate: f64,
    pub injections: Vec<Injection>,
    /// Keyed by well-being category name.
    pub pools: BTreeMap<String, ClassPool>,
    pub ambiguous: Vec<String>,
    pub fillers: BTreeMap<String, Vec<String>>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn pool(positive: &[&str], negative: &[&str]) -> ClassPool {
    ClassPool {
        positive: strings(positive),
        negative: strings(negative),
    }
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        let pools = BTreeMap::from([
            (
                "Goal".to_string(),
                pool(
                    &[
                        "I finally did it and I am so proud of my {task}!",
                        "I hope we can do this again, it was amazing.",
                        "I want to go back to the {place} soon, it was great.",
                        "I wanted to try the {food} and it was awesome!",
                    ],
                    &[
                        "I wanted to finish my {task} but I failed again.",
                        "I did nothing useful today and I feel awful.",
                        "I hope this terrible week ends soon.",
                    ],
                ),
            ),
            (
                "Autonomy".to_string(),
                pool(
                    &[
                        "I got to choose my own {activity} today, so fun!",
                        "I finally get to sleep in tomorrow, so happy.",
                        "I decided to skip the {task} and relax at the {place}.",
                    ],
                    &[
                        "I can never avoid the {task} and I hate it.",
                        "My boss made me take the late shift again, ugh.",
                        "They always complain about my {task} and it is frustrating.",
                    ],
                ),
            ),
            (
                "Competence".to_string(),
                pool(
                    &[
                        "Finished my {task} early today!",
                        "I aced my {task}, so proud!",
                        "Finally finished the {task} and it feels great.",
                    ],
                    &[
                        "I messed up my {task} and I feel terrible.",
                        "I couldn't finish my {task} in time.",
                        "The {task} was too difficult and I gave up.",
                    ],
                ),
            ),
            (
                "Connection".to_string(),
                pool(
                    &[
                        "Had dinner with my {kin}, it was lovely.",
                        "Caught up with {friend} over coffee, so fun!",
                        "Spent the whole afternoon with my {kin} at the {place}, amazing.",
                        "Talked with my {kin} for hours, I love that.",
                    ],
                    &[
                        "I miss my {kin} so much.",
                        "My {kin} is sick and I am worried.",
                        "Had a fight with {friend} and I am sad.",
                        "Nobody wanted to talk to me at the party, so lonely.",
                    ],
                ),
            ),
            (
                "Savouring".to_string(),
                pool(
                    &[
                        "I made {food} and it was so yummy!",
                        "We had {food} for lunch, delicious.",
                        "Enjoyed a relaxing walk in the {place}.",
                    ],
                    &[
                        "The {food} tasted bad and now my stomach hurts.",
                        "So tired and exhausted after the long day.",
                        "It was cold and rainy and I felt miserable.",
                    ],
                ),
            ),
        ]);
        let fillers = BTreeMap::from([
            ("kin".to_string(), strings(&["mom", "dad", "sister", "brother", "family", "parents", "cousin", "grandma"])),
            ("friend".to_string(), strings(&["Sam", "Alex", "Jordan", "my roommate", "my friends", "the team"])),
            (
                "task".to_string(),
                strings(&["homework", "paper", "essay", "project", "exam", "presentation", "report", "lab"]),
            ),
            (
                "food".to_string(),
                strings(&["pizza", "pancakes", "ice cream", "sushi", "tacos", "soup", "cookies", "pasta"]),
            ),
            ("place".to_string(), strings(&["park", "beach", "library", "gym", "kitchen", "office", "cafe", "lake"])),
            ("activity".to_string(), strings(&["schedule", "classes", "workout", "plans"])),
        ]);
        SyntheticSpec {
            positives: 100,
            negatives: 100,
            neutrals: 0,
            seed: 1,
            max_sentences: 2,
            ambiguous_rate: 0.1,
            reflection_rate: 0.1,
            injections: vec![
                Injection {
                    name: "obligation".into(),
                    class: Polarity::Negative,
                    rate: 0.5,
                    templates: strings(&[
                        "Ugh, I had to redo my {task}.",
                        "I have to clean the {place} again, so annoying.",
                        "I had to work late and I am stressed.",
                        "I have to wake up early for my {task}, I hate it.",
                    ]),
                },
                Injection {
                    name: "spend_with".into(),
                    class: Polarity::Positive,
                    rate: 0.2,
                    templates: strings(&[
                        "Loved spending time with my {kin}!",
                        "So happy to spend the weekend with {friend}.",
                    ]),
                },
            ],
            pools,
            ambiguous: strings(&[
                "Went to the {place} after class.",
                "Had {food} for dinner.",
                "Talked to my {kin} on the phone.",
                "Worked on my {task} all afternoon.",
            ]),
            fillers,
        }
    }
}

/// What the generator did, for checking downstream counts against.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SynthLog {
    pub posts: ClassCounts,
    pub sentences: ClassCounts,
    pub reflections: usize,
    pub ambiguous: usize,
    /// Injection name to the sentence ids that received it.
    pub injected: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub posts: Vec<RawPost>,
    pub log: SynthLog,
}

fn slots_in(template: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else { break };
        out.push(&rest[open + 1..open + close]);
        rest = &rest[open + close + 1..];
    }
    out
}

impl SyntheticSpec {
    pub fn from_toml_str(content: &str, source: &str) -> Result<SyntheticSpec> {
        toml::from_str(content).map_err(|e| Error::Config(format!("{source}: {}", e.message())))
    }

    pub fn load(path: &std::path::Path) -> Result<SyntheticSpec> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SyntheticSpec::from_toml_str(&content, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("synthetic spec: {m}")));
        for (name, r) in [("ambiguous_rate", self.ambiguous_rate), ("reflection_rate", self.reflection_rate)] {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("{name} {r} outside [0, 1]"));
            }
        }
        if self.max_sentences == 0 {
            return bad("max_sentences must be at least 1".into());
        }
        let mut per_class: BTreeMap<Polarity, f64> = BTreeMap::new();
        for inj in &self.injections {
            if !(0.0..=1.0).contains(&inj.rate) {
                return bad(format!("injection {} rate {} outside [0, 1]", inj.name, inj.rate));
            }
            if inj.class == Polarity::Neutral {
                return bad(format!("injection {} targets the neutral class", inj.name));
            }
            if inj.templates.is_empty() {
                return bad(format!("injection {} has no templates", inj.name));
            }
            *per_class.entry(inj.class).or_default() += inj.rate;
        }
        if per_class.values().any(|&r| r > 1.0 + 1e-12) {
            return bad("injection rates of one class sum above 1".into());
        }
        for name in self.pools.keys() {
            name.parse::<WellBeing>().map_err(|e| Error::Config(format!("synthetic spec: {e}")))?;
        }
        for class in [Polarity::Positive, Polarity::Negative] {
            if self.pools.values().all(|p| p.of(class).is_empty()) {
                return bad(format!("no {class} templates"));
            }
        }
        if self.ambiguous.is_empty() && (self.neutrals > 0 || self.ambiguous_rate > 0.0) {
            return bad("ambiguous pool is empty".into());
        }
        let templates = self
            .pools
            .values()
            .flat_map(|p| p.positive.iter().chain(&p.negative))
            .chain(self.injections.iter().flat_map(|i| &i.templates))
            .chain(&self.ambiguous);
        for t in templates {
            for slot in slots_in(t) {
                if self.fillers.get(slot).is_none_or(|f| f.is_empty()) {
                    return bad(format!("template {t:?} uses slot {{{slot}}} with no fillers"));
                }
            }
        }
        Ok(())
    }

    fn fill(&self, template: &str, rng: &mut ChaCha8Rng) -> String {
        let mut out = String::new();
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            let close = open + rest[open..].find('}').expect("validated template");
            out.push_str(&rest[..open]);
            let words = &self.fillers[&rest[open + 1..close]];
            out.push_str(words.choose(rng).expect("validated fillers"));
            rest = &rest[close + 1..];
        }
        out.push_str(rest);
        out
    }
}

enum Source<'a> {
    Injection(&'a Injection),
    Ambiguous,
    Pool,
}

/// Deterministic per spec (including its seed).
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut classes: Vec<Polarity> = std::iter::repeat_n(Polarity::Positive, spec.positives)
        .chain(std::iter::repeat_n(Polarity::Negative, spec.negatives))
        .chain(std::iter::repeat_n(Polarity::Neutral, spec.neutrals))
        .collect();
    classes.shuffle(&mut rng);
    let n_sentences: Vec<usize> = classes.iter().map(|_| rng.gen_range(1..=spec.max_sentences)).collect();

    // (post, sentence) slots per class, then exact-quota injection.
    let mut sources: Vec<Vec<Option<Source>>> = n_sentences.iter().map(|&n| (0..n).map(|_| None).collect()).collect();
    for class in [Polarity::Positive, Polarity::Negative] {
        let slots: Vec<(usize, usize)> = (0..classes.len())
            .filter(|&p| classes[p] == class)
            .flat_map(|p| (0..n_sentences[p]).map(move |s| (p, s)))
            .collect();
        let total = slots.len();
        for inj in spec.injections.iter().filter(|i| i.class == class) {
            let mut free: Vec<(usize, usize)> =
                slots.iter().copied().filter(|&(p, s)| sources[p][s].is_none()).collect();
            free.shuffle(&mut rng);
            let k = ((inj.rate * total as f64).round() as usize).min(free.len());
            for &(p, s) in &free[..k] {
                sources[p][s] = Some(Source::Injection(inj));
            }
        }
    }

    let mut log = SynthLog::default();
    let mut texts = Vec::with_capacity(classes.len());
    for (p, class) in classes.iter().enumerate() {
        let mut sentences = Vec::with_capacity(n_sentences[p]);
        for (s, slot) in sources[p].iter_mut().enumerate() {
            let source = match slot.take() {
                Some(src) => src,
                None if *class == Polarity::Neutral || rng.gen_bool(spec.ambiguous_rate) => Source::Ambiguous,
                None => Source::Pool,
            };
            let template = match source {
                Source::Injection(inj) => {
                    log.injected.entry(inj.name.clone()).or_default().insert(sentence_id(&post_id(p), s));
                    inj.templates.choose(&mut rng).expect("validated")
                }
                Source::Ambiguous => {
                    log.ambiguous += 1;
                    spec.ambiguous.choose(&mut rng).expect("validated")
                }
                Source::Pool => {
                    let cats: Vec<&ClassPool> = spec.pools.values().filter(|c| !c.of(*class).is_empty()).collect();
                    cats.choose(&mut rng).expect("validated").of(*class).choose(&mut rng).expect("non-empty")
                }
            };
            sentences.push(spec.fill(template, &mut rng));
        }
        log.posts.add(*class, 1);
        log.sentences.add(*class, sentences.len());
        texts.push(sentences.join(" "));
    }

    let mut posts: Vec<RawPost> = classes
        .iter()
        .enumerate()
        .map(|(p, class)| {
            let score = match class {
                Polarity::Positive => rng.gen_range(6..=9),
                Polarity::Negative => rng.gen_range(1..=4),
                Polarity::Neutral => 5,
            };
            RawPost {
                id: post_id(p),
                author_id: format!("u{:02}", rng.gen_range(1..=12)),
                kind: PostKind::Recording,
                score,
                text: std::mem::take(&mut texts[p]),
                parent_id: None,
                timestamp: Some(1_600_000_000 + 3600 * p as i64),
            }
        })
        .collect();

    for class in [Polarity::Positive, Polarity::Negative] {
        let mut members: Vec<usize> = (0..classes.len()).filter(|&p| classes[p] == class).collect();
        members.shuffle(&mut rng);
        let pairs = (spec.reflection_rate * members.len() as f64 / 2.0).floor() as usize;
        for pair in members.chunks(2).take(pairs) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            posts[a].score = 5;
            posts[b].kind = PostKind::Reflection;
            posts[b].parent_id = Some(posts[a].id.clone());
            log.reflections += 1;
        }
    }
    Ok(SyntheticCorpus { posts, log })
}

fn post_id(index: usize) -> String {
    format!("p{:04}", index + 1)
}
