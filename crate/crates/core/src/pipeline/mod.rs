//! Restartable pipeline stages. Each stage reads only the artifacts of
//! earlier stages from the output directory and writes its own artifacts
//! plus a manifest under `manifests/<stage>.json`.

mod config;
mod manifest;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    carve_dev, corpus_stats, label_posts, parse_corpus, post_id_of, sentence_split, split_corpus, write_corpus,
    CorpusSplit, LabeledPost,
};
use crate::eval::{evaluate, report_table, report_tsv, weighted_f1, ExperimentRow};
use crate::features::{
    density_by_class, parse_vectors, rank, sentence_features, write_ranking_tsv, write_vectors, DensityRow,
    FeatureResources, FeatureSpace, LabeledVector, Scheme,
};
use crate::lexicons::{
    parse_category_lexicon, parse_frame_lexicon, parse_gazetteer, CategoryLexicon, Gazetteer, LoadedFrames,
    DEFAULT_COLLAPSE_SYMBOL,
};
use crate::model::{train, LinearModel};
use crate::patterns::{
    accumulate, instantiate, majority_class, report_families, select, sweep, write_pattern_tsv, FamilyQuery,
    FamilyReport, PatternInstance, PatternTable, ThresholdParams,
};
use crate::resources;
use crate::synth::{generate, SyntheticSpec};
use crate::text::{parse_pretagged_str, write_pretagged, ParsedSentence};
use crate::{Error, Polarity, Result};

pub use config::{default_split_sizes, PipelineConfig};
pub use manifest::{sha256_hex, FileDigest, Manifest, MANIFEST_FORMAT, MANIFEST_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Preprocess,
    LearnPatterns,
    Sweep,
    Features,
    Rank,
    Train,
    Eval,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Ingest,
        Stage::Preprocess,
        Stage::LearnPatterns,
        Stage::Sweep,
        Stage::Features,
        Stage::Rank,
        Stage::Train,
        Stage::Eval,
        Stage::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Preprocess => "preprocess",
            Stage::LearnPatterns => "learn-patterns",
            Stage::Sweep => "sweep",
            Stage::Features => "features",
            Stage::Rank => "rank",
            Stage::Train => "train",
            Stage::Eval => "eval",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

/// A stage failure, naming the stage.
#[derive(Debug)]
pub struct StageError {
    pub stage: String,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

const SPLITS: [&str; 3] = ["train", "dev", "test"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SplitFile {
    seed: u64,
    train: BTreeSet<String>,
    dev: BTreeSet<String>,
    test: BTreeSet<String>,
    held_out: BTreeSet<String>,
}

impl SplitFile {
    fn part(&self, name: &str) -> &BTreeSet<String> {
        match name {
            "train" => &self.train,
            "dev" => &self.dev,
            "test" => &self.test,
            _ => &self.held_out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Thresholds {
    theta_f: u64,
    theta_p: f64,
    score: f64,
    eval_split: &'static str,
    default_class: Polarity,
}

#[derive(Deserialize)]
struct ThresholdsIn {
    theta_f: u64,
    theta_p: f64,
}

/// File-name form of a scheme: `unigram`, `framesubset-autonomy-goal`, ...
pub fn scheme_slug(scheme: &Scheme) -> String {
    let mut slug = String::new();
    for c in scheme.display_name().to_lowercase().chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c);
        } else if !slug.ends_with('-') {
            slug.push('-');
        }
    }
    slug.trim_matches('-').to_string()
}

pub struct Pipeline {
    config: PipelineConfig,
}

struct StageRun<'a> {
    out: &'a Path,
    manifest: Manifest,
}

impl StageRun<'_> {
    fn read(&mut self, name: &str, rel: &str) -> Result<String> {
        let path = self.out.join(rel);
        let content = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        self.manifest.inputs.push(FileDigest::of(name, rel, content.as_bytes()));
        Ok(content)
    }

    fn read_external(&mut self, name: &str, path: &Path) -> Result<String> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.manifest
            .inputs
            .push(FileDigest::of(name, &path.display().to_string(), content.as_bytes()));
        Ok(content)
    }

    /// The file at `path`, or the bundled copy when unset.
    fn resource(&mut self, name: &str, path: &Option<PathBuf>, bundled_name: &str, bundled: &str) -> Result<(String, String)> {
        match path {
            Some(p) => Ok((self.read_external(name, p)?, p.display().to_string())),
            None => {
                let label = format!("bundled:{bundled_name}");
                self.manifest.inputs.push(FileDigest::of(name, &label, bundled.as_bytes()));
                Ok((bundled.to_string(), label))
            }
        }
    }

    fn write(&mut self, name: &str, rel: &str, content: &str) -> Result<()> {
        let path = self.out.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        self.manifest.outputs.push(FileDigest::of(name, rel, content.as_bytes()));
        Ok(())
    }
}

struct Lexicons {
    frames: LoadedFrames,
    categories: CategoryLexicon,
    gazetteer: Gazetteer,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Pipeline> {
        config.validate()?;
        Ok(Pipeline { config })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn out_dir(&self) -> &Path {
        &self.config.out_dir
    }

    pub fn manifest_path(&self, stage: &str) -> PathBuf {
        self.config.out_dir.join("manifests").join(format!("{stage}.json"))
    }

    fn config_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.config).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("out_dir");
        }
        v
    }

    /// Runs every stage in order.
    pub fn run_all(&self) -> std::result::Result<Vec<Manifest>, StageError> {
        Stage::ALL.into_iter().map(|s| self.run(s)).collect()
    }

    pub fn run(&self, stage: Stage) -> std::result::Result<Manifest, StageError> {
        log::info!("running stage {stage}");
        self.run_inner(stage).map_err(|error| StageError {
            stage: stage.to_string(),
            error,
        })
    }

    fn run_inner(&self, stage: Stage) -> Result<Manifest> {
        let mut run = StageRun {
            out: &self.config.out_dir,
            manifest: Manifest::new(stage.as_str(), self.config.seed, self.config_json()),
        };
        match stage {
            Stage::Ingest => self.ingest(&mut run)?,
            Stage::Preprocess => self.preprocess(&mut run)?,
            Stage::LearnPatterns => self.learn_patterns(&mut run)?,
            Stage::Sweep => self.sweep(&mut run)?,
            Stage::Features => self.features(&mut run)?,
            Stage::Rank => self.rank(&mut run)?,
            Stage::Train => self.train(&mut run)?,
            Stage::Eval => self.eval(&mut run)?,
            Stage::Report => self.report(&mut run)?,
        }
        let path = self.manifest_path(stage.as_str());
        let parent = path.parent().expect("manifest dir");
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        fs::write(&path, run.manifest.to_json()).map_err(|e| Error::io(&path, e))?;
        Ok(run.manifest)
    }

    fn lexicons(&self, run: &mut StageRun<'_>) -> Result<Lexicons> {
        let cfg = &self.config;
        let (text, source) = run.resource("frames", &cfg.frames, "frames.tsv", resources::FRAMES_TSV)?;
        let frames = parse_frame_lexicon(&text, &source)?;
        for w in &frames.warnings {
            log::warn!("{source}: {w}");
        }
        let (text, source) = run.resource("dict", &cfg.dict, "categories.dict", resources::CATEGORIES_DICT)?;
        let categories = parse_category_lexicon(&text, &source)?;
        let gazetteer = self.gazetteer(run)?;
        Ok(Lexicons {
            frames,
            categories,
            gazetteer,
        })
    }

    fn gazetteer(&self, run: &mut StageRun<'_>) -> Result<Gazetteer> {
        let (text, _) = run.resource("gazetteer", &self.config.gazetteer, "food.txt", resources::FOOD_TXT)?;
        parse_gazetteer(&text, DEFAULT_COLLAPSE_SYMBOL)
    }

    fn ingest(&self, run: &mut StageRun<'_>) -> Result<()> {
        let cfg = &self.config;
        let path = cfg
            .corpus
            .as_ref()
            .ok_or_else(|| Error::Config("--corpus is required for ingest".into()))?;
        let content = run.read_external("corpus", path)?;
        let posts = parse_corpus(&content, &path.display().to_string())?;
        let labeled = label_posts(&posts);
        let n = labeled.iter().filter(|p| p.label != Polarity::Neutral).count();
        let (dtrain, dtest) = default_split_sizes(n);
        let split = split_corpus(&labeled, cfg.train_n.unwrap_or(dtrain), cfg.test_n.unwrap_or(dtest), cfg.seed)?;
        let (train, dev) = carve_dev(&split.train, cfg.dev_fraction, cfg.seed)?;
        let stats = corpus_stats(
            &labeled,
            Some(&CorpusSplit {
                train: train.clone(),
                ..split.clone()
            }),
            Some(&dev),
        );
        let file = SplitFile {
            seed: cfg.seed,
            train,
            dev,
            test: split.test,
            held_out: split.held_out,
        };
        let mut lines = String::new();
        for p in &labeled {
            lines.push_str(&serde_json::to_string(p)?);
            lines.push('\n');
        }
        log::info!("{} posts, {n} labeled", labeled.len());
        run.write("labeled", "ingest/labeled.jsonl", &lines)?;
        run.write("split", "ingest/split.json", &(serde_json::to_string_pretty(&file)? + "\n"))?;
        run.write("stats", "ingest/stats.tsv", &stats.to_tsv())
    }

    fn preprocess(&self, run: &mut StageRun<'_>) -> Result<()> {
        let labeled = parse_labeled(&run.read("labeled", "ingest/labeled.jsonl")?)?;
        let split: SplitFile = serde_json::from_str(&run.read("split", "ingest/split.json")?)?;
        let mut parts: BTreeMap<&str, Vec<ParsedSentence>> = SPLITS.iter().map(|s| (*s, Vec::new())).collect();
        let part_of = |post_id: &str| SPLITS.into_iter().find(|s| split.part(s).contains(post_id));

        if let Some(path) = &self.config.pretagged {
            let content = run.read_external("pretagged", path)?;
            let labels: BTreeMap<&str, Polarity> =
                labeled.iter().map(|p| (p.post.id.as_str(), p.label)).collect();
            for mut s in parse_pretagged_str(&content, &path.display().to_string())? {
                let post = post_id_of(&s.id).to_string();
                if let Some(&label) = labels.get(post.as_str()) {
                    s.label = label;
                }
                if let (Some(part), true) = (part_of(&post), s.label != Polarity::Neutral) {
                    parts.get_mut(part).expect("known part").push(s);
                }
            }
        } else {
            for post in &labeled {
                let Some(part) = part_of(&post.post.id) else { continue };
                for s in sentence_split(post) {
                    parts
                        .get_mut(part)
                        .expect("known part")
                        .push(ParsedSentence::parse(s.id(), &s.text, s.label));
                }
            }
        }
        for (name, sentences) in &parts {
            log::info!("{name}: {} sentences", sentences.len());
            run.write(name, &format!("preprocess/{name}.tagged"), &write_pretagged(sentences))?;
        }
        Ok(())
    }

    fn tagged(&self, run: &mut StageRun<'_>, split: &str) -> Result<Vec<ParsedSentence>> {
        let rel = format!("preprocess/{split}.tagged");
        let content = run.read(split, &rel)?;
        parse_pretagged_str(&content, &rel)
    }

    fn pattern_table(&self, run: &mut StageRun<'_>, gazetteer: &Gazetteer) -> Result<PatternTable> {
        let train: Vec<ParsedSentence> = self.tagged(run, "train")?.iter().map(|s| gazetteer.collapse(s)).collect();
        accumulate(&train)
    }

    fn learn_patterns(&self, run: &mut StageRun<'_>) -> Result<()> {
        let gazetteer = self.gazetteer(run)?;
        let table = self.pattern_table(run, &gazetteer)?;
        log::info!("{} distinct patterns", table.len());
        run.write("patterns", "patterns/patterns.tsv", &write_pattern_tsv(&table))
    }

    fn sweep(&self, run: &mut StageRun<'_>) -> Result<()> {
        let gazetteer = self.gazetteer(run)?;
        let train = self.tagged(run, "train")?;
        let default = majority_class(train.iter().map(|s| s.label));
        let collapsed: Vec<ParsedSentence> = train.iter().map(|s| gazetteer.collapse(s)).collect();
        let table = accumulate(&collapsed)?;
        let eval_split = if self.config.sweep_on_test { "test" } else { "dev" };
        let eval_sentences = self.tagged(run, eval_split)?;
        if eval_sentences.is_empty() {
            return Err(Error::Data(format!(
                "the {eval_split} split is empty; enlarge it or use --sweep-on-test / --dev-fraction"
            )));
        }
        let eval: Vec<(Vec<PatternInstance>, Polarity)> = eval_sentences
            .iter()
            .map(|s| (instantiate(&gazetteer.collapse(s)), s.label))
            .collect();
        let result = sweep(&table, &self.config.grid(), &eval, default, weighted_f1)?;
        log::info!(
            "best theta_f={} theta_p={:.2} weighted F1 {:.4} on {eval_split}",
            result.best.theta_f,
            result.best.theta_p,
            result.best_score
        );
        let t = Thresholds {
            theta_f: result.best.theta_f,
            theta_p: result.best.theta_p,
            score: result.best_score,
            eval_split,
            default_class: default,
        };
        run.write("sweep", "sweep/sweep.tsv", &result.to_tsv())?;
        run.write("thresholds", "sweep/thresholds.json", &(serde_json::to_string_pretty(&t)? + "\n"))
    }

    fn thresholds(&self, run: &mut StageRun<'_>) -> Result<ThresholdParams> {
        let t: ThresholdsIn = serde_json::from_str(&run.read("thresholds", "sweep/thresholds.json")?)?;
        ThresholdParams::new(t.theta_f, t.theta_p)
    }

    fn features(&self, run: &mut StageRun<'_>) -> Result<()> {
        let lex = self.lexicons(run)?;
        let params = self.thresholds(run)?;
        let mut splits: BTreeMap<&str, Vec<ParsedSentence>> = BTreeMap::new();
        for name in SPLITS {
            splits.insert(name, self.tagged(run, name)?);
        }
        let collapsed: Vec<ParsedSentence> = splits["train"].iter().map(|s| lex.gazetteer.collapse(s)).collect();
        let table = accumulate(&collapsed)?;
        let mut selected = select(&table, params, Polarity::Positive);
        selected.extend(select(&table, params, Polarity::Negative));
        let res = FeatureResources {
            frames: Some(&lex.frames),
            categories: Some(&lex.categories),
            patterns: Some(&selected),
            gazetteer: Some(&lex.gazetteer),
        };

        let mut density = Vec::new();
        for scheme in self.config.scheme_list()? {
            let slug = scheme_slug(&scheme);
            let named: BTreeMap<&str, Vec<BTreeMap<String, u32>>> = splits
                .iter()
                .map(|(name, ss)| {
                    let feats = ss.iter().map(|s| sentence_features(s, &scheme, &res)).collect::<Result<Vec<_>>>()?;
                    Ok((*name, feats))
                })
                .collect::<Result<_>>()?;
            let space = FeatureSpace::fit(named["train"].iter().flat_map(|m| m.keys()));
            run.write("space", &format!("features/{slug}/space.txt"), &space.to_text())?;
            for (name, feats) in &named {
                let rows: Vec<LabeledVector> = splits[name]
                    .iter()
                    .zip(feats)
                    .map(|(s, f)| LabeledVector {
                        id: s.id.clone(),
                        label: s.label,
                        vector: space.vectorize(f),
                    })
                    .collect();
                density.extend(density_by_class(&scheme.display_name(), name, &rows)?);
                run.write("vectors", &format!("features/{slug}/{name}.vec"), &write_vectors(&rows))?;
            }
            log::info!("{}: {} features", scheme.display_name(), space.len());
        }
        run.write("density", "features/density.tsv", &DensityRow::tsv(&density))
    }

    fn load_vectors(&self, run: &mut StageRun<'_>, slug: &str, split: &str) -> Result<Vec<LabeledVector>> {
        let rel = format!("features/{slug}/{split}.vec");
        let content = run.read("vectors", &rel)?;
        parse_vectors(&content, &rel)
    }

    fn load_space(&self, run: &mut StageRun<'_>, slug: &str) -> Result<FeatureSpace> {
        let rel = format!("features/{slug}/space.txt");
        let content = run.read("space", &rel)?;
        FeatureSpace::from_text(&content, &rel)
    }

    fn rank(&self, run: &mut StageRun<'_>) -> Result<()> {
        for scheme in self.config.scheme_list()? {
            let slug = scheme_slug(&scheme);
            let space = self.load_space(run, &slug)?;
            let data: Vec<_> = self.load_vectors(run, &slug, "train")?.into_iter().map(|r| (r.vector, r.label)).collect();
            let ranking = rank(&space, &data, self.config.rank_k)?;
            run.write("ranking", &format!("rank/{slug}.tsv"), &write_ranking_tsv(&ranking))?;
        }
        Ok(())
    }

    fn train(&self, run: &mut StageRun<'_>) -> Result<()> {
        let cfg = self.config.train_config();
        for scheme in self.config.scheme_list()? {
            let slug = scheme_slug(&scheme);
            let space = self.load_space(run, &slug)?;
            let data: Vec<_> = self.load_vectors(run, &slug, "train")?.into_iter().map(|r| (r.vector, r.label)).collect();
            let model = train(&scheme, &space, &data, &cfg)?;
            run.write("model", &format!("models/{slug}.model"), &model.to_text())?;
        }
        Ok(())
    }

    fn eval(&self, run: &mut StageRun<'_>) -> Result<()> {
        let mut rows = Vec::new();
        for scheme in self.config.scheme_list()? {
            let slug = scheme_slug(&scheme);
            let rel = format!("models/{slug}.model");
            let model = LinearModel::from_text(&run.read("model", &rel)?, &rel)?;
            if model.scheme != scheme {
                return Err(Error::Data(format!("{rel} was trained for scheme {}", model.scheme)));
            }
            let test = self.load_vectors(run, &slug, "test")?;
            let gold: Vec<Polarity> = test.iter().map(|r| r.label).collect();
            let mut predictions = String::from("sentence_id\tgold\tpredicted\tmargin\n");
            let mut pred = Vec::with_capacity(test.len());
            for r in &test {
                let p = model.predict(&r.vector);
                predictions.push_str(&format!("{}\t{}\t{}\t{:.6}\n", r.id, r.label, p.label, p.margin));
                pred.push(p.label);
            }
            run.write("predictions", &format!("eval/predictions/{slug}.tsv"), &predictions)?;
            rows.push(ExperimentRow {
                scheme: scheme.display_name(),
                report: evaluate(&gold, &pred)?,
            });
        }
        run.write("report", "eval/report.tsv", &report_tsv(&rows))?;
        run.write("table", "eval/report.txt", &report_table(&rows))?;
        run.write("reports", "eval/reports.json", &(serde_json::to_string_pretty(&rows)? + "\n"))
    }

    fn report(&self, run: &mut StageRun<'_>) -> Result<()> {
        let gazetteer = self.gazetteer(run)?;
        let table = self.pattern_table(run, &gazetteer)?;
        let params = ThresholdParams::new(self.config.report_theta_f, self.config.report_theta_p)?;
        let pos = select(&table, params, Polarity::Positive);
        let neg = select(&table, params, Polarity::Negative);
        let mut tsv = String::from(FamilyReport::tsv_header());
        let mut summary = String::new();
        let mut members = String::from("query\tclass\tpattern\tfreq\tp_class\n");
        for q in &self.config.queries {
            let query = FamilyQuery::parse(q)?;
            let report = report_families(&table, &pos, &neg, &query);
            tsv.push_str(&report.tsv_rows());
            summary.push_str(&report.summary());
            summary.push('\n');
            for (p, class) in &report.members {
                let s = &table[p];
                members.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{:.4}\n",
                    report.query,
                    class,
                    p.feature_name(),
                    s.freq(),
                    s.p_class(*class)
                ));
            }
        }
        run.write("families", "report/families.tsv", &tsv)?;
        run.write("members", "report/members.tsv", &members)?;
        run.write("summary", "report/summary.txt", &summary)
    }
}

fn parse_labeled(content: &str) -> Result<Vec<LabeledPost>> {
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse("ingest/labeled.jsonl", i + 1, e.to_string())))
        .collect()
}

/// The configuration recorded in a stage manifest. The output directory is
/// not recorded and comes back as the default.
pub fn config_from_manifest(manifest: &Manifest) -> Result<PipelineConfig> {
    serde_json::from_value(manifest.config.clone())
        .map_err(|e| Error::Config(format!("--from-manifest: {e}")))
}

/// Writes a synthetic corpus to `out`, its generator log to `<out>.log.json`
/// and a manifest to `<out>.manifest.json`.
pub fn run_synth(spec: &SyntheticSpec, out: &Path) -> Result<Manifest> {
    let corpus = generate(spec)?;
    let text = write_corpus(&corpus.posts);
    let log = serde_json::to_string_pretty(&corpus.log)? + "\n";
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .ok_or_else(|| Error::Config(format!("--out: {} is not a file path", out.display())))?;
    let sidecar = |suffix: &str| out.with_file_name(format!("{name}.{suffix}"));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut manifest = Manifest::new("synth", spec.seed, serde_json::to_value(spec)?);
    for (label, path, content) in [("corpus", out.to_path_buf(), &text), ("log", sidecar("log.json"), &log)] {
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        let file = path.file_name().expect("file path").to_string_lossy().into_owned();
        manifest.outputs.push(FileDigest::of(label, &file, content.as_bytes()));
    }
    let mpath = sidecar("manifest.json");
    fs::write(&mpath, manifest.to_json()).map_err(|e| Error::io(&mpath, e))?;
    Ok(manifest)
}
