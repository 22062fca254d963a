//! Per-class and support-weighted precision, recall and F1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Polarity, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Gold rows, predicted columns, Positive first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub positive: ClassMetrics,
    pub negative: ClassMetrics,
    /// Support-weighted averages; `support` is the evaluation-set size.
    pub weighted: ClassMetrics,
    pub confusion: Confusion,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn class_metrics(tp: usize, fp: usize, fn_: usize) -> ClassMetrics {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    ClassMetrics {
        precision,
        recall,
        f1: harmonic(precision, recall),
        support: tp + fn_,
    }
}

impl EvalReport {
    pub fn from_confusion(c: Confusion) -> Result<EvalReport> {
        let n = c.total();
        if n == 0 {
            return Err(Error::Data("cannot evaluate an empty set".into()));
        }
        let positive = class_metrics(c.tp, c.fp, c.fn_);
        let negative = class_metrics(c.tn, c.fn_, c.fp);
        let w = |f: fn(&ClassMetrics) -> f64| {
            (f(&positive) * positive.support as f64 + f(&negative) * negative.support as f64) / n as f64
        };
        let weighted = ClassMetrics {
            precision: w(|m| m.precision),
            recall: w(|m| m.recall),
            f1: w(|m| m.f1),
            support: n,
        };
        Ok(EvalReport {
            positive,
            negative,
            weighted,
            confusion: c,
        })
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.confusion.tp + self.confusion.tn, self.confusion.total())
    }
}

pub fn evaluate(gold: &[Polarity], predicted: &[Polarity]) -> Result<EvalReport> {
    if gold.len() != predicted.len() {
        return Err(Error::Data(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            predicted.len()
        )));
    }
    let mut c = Confusion::default();
    for (g, p) in gold.iter().zip(predicted) {
        match (g, p) {
            (Polarity::Positive, Polarity::Positive) => c.tp += 1,
            (Polarity::Positive, Polarity::Negative) => c.fn_ += 1,
            (Polarity::Negative, Polarity::Positive) => c.fp += 1,
            (Polarity::Negative, Polarity::Negative) => c.tn += 1,
            _ => return Err(Error::Data("neutral labels cannot be evaluated".into())),
        }
    }
    EvalReport::from_confusion(c)
}

/// Support-weighted F1, the score used for threshold sweeps.
pub fn weighted_f1(gold: &[Polarity], predicted: &[Polarity]) -> Result<f64> {
    Ok(evaluate(gold, predicted)?.weighted.f1)
}

/// One evaluated feature scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub scheme: String,
    pub report: EvalReport,
}

fn metric_rows(r: &EvalReport) -> [(&'static str, f64, f64, f64); 3] {
    [
        ("Prec", r.positive.precision, r.negative.precision, r.weighted.precision),
        ("Rec", r.positive.recall, r.negative.recall, r.weighted.recall),
        ("F1", r.positive.f1, r.negative.f1, r.weighted.f1),
    ]
}

/// `scheme, metric, pos, neg, all` with two decimals, three rows per scheme.
pub fn report_tsv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from("scheme\tmetric\tpos\tneg\tall\n");
    for row in rows {
        for (metric, p, n, a) in metric_rows(&row.report) {
            let _ = writeln!(out, "{}\t{metric}\t{p:.2}\t{n:.2}\t{a:.2}", row.scheme);
        }
    }
    out
}

/// Aligned plain-text version of [`report_tsv`] with supports appended.
pub fn report_table(rows: &[ExperimentRow]) -> String {
    let width = rows.iter().map(|r| r.scheme.len()).max().unwrap_or(0).max("Features".len());
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:<6}  {:>5}  {:>5}  {:>5}", "Features", "Metric", "Pos", "Neg", "All");
    let _ = writeln!(out, "{}", "-".repeat(width + 30));
    for row in rows {
        for (i, (metric, p, n, a)) in metric_rows(&row.report).into_iter().enumerate() {
            let name = if i == 0 { row.scheme.as_str() } else { "" };
            let _ = writeln!(out, "{name:<width$}  {metric:<6}  {p:>5.2}  {n:>5.2}  {a:>5.2}");
        }
        let r = &row.report;
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>5}  {:>5}  {:>5}",
            "",
            "n",
            r.positive.support,
            r.negative.support,
            r.weighted.support
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Polarity::{Negative as N, Positive as P};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn perfect_predictions() {
        let g = [P, N, P, P];
        let r = evaluate(&g, &g).unwrap();
        for m in [r.positive, r.negative, r.weighted] {
            assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn hand_computed_positive_class() {
        // TP=3, FP=1, FN=2, TN=0
        let gold = [P, P, P, P, P, N];
        let pred = [P, P, P, N, N, P];
        let r = evaluate(&gold, &pred).unwrap();
        assert!(close(r.positive.precision, 0.75));
        assert!(close(r.positive.recall, 0.6));
        assert!(close(r.positive.f1, 2.0 * 0.75 * 0.6 / 1.35));
        assert_eq!(r.negative.precision, 0.0);
        assert_eq!(r.negative.f1, 0.0);
    }

    #[test]
    fn errors() {
        assert!(evaluate(&[P], &[P, N]).is_err());
        assert!(evaluate(&[], &[]).is_err());
        assert!(evaluate(&[Polarity::Neutral], &[P]).is_err());
    }

    #[test]
    fn table_formats_two_decimals() {
        let r = evaluate(&[P, N, P], &[P, N, N]).unwrap();
        let rows = [ExperimentRow {
            scheme: "Unigram".into(),
            report: r,
        }];
        let tsv = report_tsv(&rows);
        assert_eq!(tsv.lines().count(), 4);
        assert!(tsv.contains("Unigram\tPrec\t1.00\t0.50\t0.83"));
        assert!(report_table(&rows).contains("Unigram"));
    }

    fn labels() -> impl Strategy<Value = (Vec<Polarity>, Vec<Polarity>)> {
        (1usize..60).prop_flat_map(|n| {
            let l = prop::sample::select(vec![P, N]);
            (prop::collection::vec(l.clone(), n), prop::collection::vec(l, n))
        })
    }

    proptest! {
        #[test]
        fn invariants((gold, pred) in labels()) {
            let r = evaluate(&gold, &pred).unwrap();
            prop_assert_eq!(r.confusion.total(), gold.len());
            prop_assert_eq!(r.positive.support + r.negative.support, gold.len());
            for m in [r.positive, r.negative, r.weighted] {
                for v in [m.precision, m.recall, m.f1] {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
            let pairs = [
                (r.positive.precision, r.negative.precision, r.weighted.precision),
                (r.positive.recall, r.negative.recall, r.weighted.recall),
                (r.positive.f1, r.negative.f1, r.weighted.f1),
            ];
            for (a, b, w) in pairs {
                prop_assert!(w >= a.min(b) - 1e-12 && w <= a.max(b) + 1e-12);
            }
            let same = evaluate(&gold, &gold).unwrap();
            prop_assert_eq!(same.weighted.f1, 1.0);
        }
    }
}
