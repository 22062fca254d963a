use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{select, PatternInstance, PatternTable, ThresholdParams};
use crate::{Error, Polarity, Result};

/// Candidate values for both thresholds; every combination is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub theta_f: Vec<u64>,
    pub theta_p: Vec<f64>,
}

impl Default for SweepGrid {
    /// theta_f 2..=20, theta_p 0.60..=0.95 in steps of 0.05.
    fn default() -> Self {
        SweepGrid {
            theta_f: (2..=20).collect(),
            theta_p: (12..=19).map(|k| (k * 5) as f64 / 100.0).collect(),
        }
    }
}

fn parse_p_range(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split("..").collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    match parts.as_slice() {
        [single] => single.split(',').map(num).collect(),
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if step <= 0.0 || hi < lo {
                return Err(format!("bad range {spec:?}"));
            }
            // integer steps avoid accumulating rounding error
            let n = ((hi - lo) / step + 1e-9).floor() as u64;
            Ok((0..=n).map(|k| ((lo + k as f64 * step) * 1e6).round() / 1e6).collect())
        }
        _ => Err(format!("theta_p wants a list or lo..hi..step, got {spec:?}")),
    }
}

fn parse_f_range(spec: &str) -> std::result::Result<Vec<u64>, String> {
    let num = |s: &str| s.trim().parse::<u64>().map_err(|e| format!("{s:?}: {e}"));
    match spec.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?..=num(hi)?).collect()),
        None => spec.split(',').map(num).collect(),
    }
}

impl SweepGrid {
    /// Parses `f=2..20;p=0.6..0.95..0.05`; lists such as `f=2,5;p=0.7` also work.
    /// A missing part keeps its default.
    pub fn parse(spec: &str) -> Result<SweepGrid> {
        let mut grid = SweepGrid::default();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("grid part {part:?} needs f= or p=")))?;
            match key.trim() {
                "f" => grid.theta_f = parse_f_range(value).map_err(Error::Config)?,
                "p" => grid.theta_p = parse_p_range(value).map_err(Error::Config)?,
                other => return Err(Error::Config(format!("unknown grid key {other:?}"))),
            }
        }
        grid.cells()?;
        Ok(grid)
    }

    /// All cells ordered by theta_f, then theta_p.
    pub fn cells(&self) -> Result<Vec<ThresholdParams>> {
        let mut f = self.theta_f.clone();
        f.sort_unstable();
        f.dedup();
        let mut p = self.theta_p.clone();
        p.sort_by(f64::total_cmp);
        p.dedup();
        let cells: Vec<ThresholdParams> = f
            .iter()
            .flat_map(|&tf| p.iter().map(move |&tp| ThresholdParams::new(tf, tp)))
            .collect::<Result<_>>()?;
        if cells.is_empty() {
            return Err(Error::Config("threshold grid is empty".into()));
        }
        Ok(cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub params: ThresholdParams,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub best: ThresholdParams,
    pub best_score: f64,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("theta_f\ttheta_p\tf1\tbest\n");
        for c in &self.cells {
            let best = c.params == self.best;
            let _ = writeln!(out, "{}\t{:.2}\t{:.6}\t{}", c.params.theta_f, c.params.theta_p, c.score, u8::from(best));
        }
        out
    }
}

/// Labels a sentence by which class's selected patterns occur more often in
/// it; ties and sentences without matches get `default`.
pub fn classify(
    instances: &[PatternInstance],
    positive: &BTreeSet<PatternInstance>,
    negative: &BTreeSet<PatternInstance>,
    default: Polarity,
) -> Polarity {
    let pos = instances.iter().filter(|p| positive.contains(p)).count();
    let neg = instances.iter().filter(|p| negative.contains(p)).count();
    match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => Polarity::Positive,
        std::cmp::Ordering::Less => Polarity::Negative,
        std::cmp::Ordering::Equal => default,
    }
}

/// Evaluates every grid cell (the same thresholds for both classes) and
/// returns the best score, ties going to the lower theta_f then theta_p.
pub fn sweep<S>(
    table: &PatternTable,
    grid: &SweepGrid,
    eval: &[(Vec<PatternInstance>, Polarity)],
    default: Polarity,
    scorer: S,
) -> Result<SweepResult>
where
    S: Fn(&[Polarity], &[Polarity]) -> Result<f64>,
{
    if eval.is_empty() {
        return Err(Error::Data("threshold sweep needs a non-empty evaluation set".into()));
    }
    let gold: Vec<Polarity> = eval.iter().map(|(_, l)| *l).collect();
    let mut cells = Vec::new();
    let mut best: Option<SweepCell> = None;
    for params in grid.cells()? {
        let pos = select(table, params, Polarity::Positive);
        let neg = select(table, params, Polarity::Negative);
        let pred: Vec<Polarity> = eval.iter().map(|(inst, _)| classify(inst, &pos, &neg, default)).collect();
        let cell = SweepCell {
            params,
            score: scorer(&gold, &pred)?,
        };
        if best.is_none_or(|b| cell.score > b.score) {
            best = Some(cell);
        }
        cells.push(cell);
    }
    let best = best.expect("grid has at least one cell");
    Ok(SweepResult {
        best: best.params,
        best_score: best.score,
        cells,
    })
}

/// The more frequent label; ties go to Positive.
pub fn majority_class(labels: impl IntoIterator<Item = Polarity>) -> Polarity {
    let (mut pos, mut neg) = (0usize, 0usize);
    for l in labels {
        match l {
            Polarity::Positive => pos += 1,
            Polarity::Negative => neg += 1,
            Polarity::Neutral => {}
        }
    }
    if neg > pos {
        Polarity::Negative
    } else {
        Polarity::Positive
    }
}
