//! Linear max-margin classifier trained by stochastic subgradient descent
//! on the L2-regularized mean hinge loss.
//!
//! The bias is treated as the weight of a constant feature and is
//! regularized with the other weights. The objective is
//! `λ/2·(‖w‖² + b²) + 1/n·Σ max(0, 1 − y(w·x + b))`.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::{FeatureSpace, FeatureVector, Scheme};
use crate::{Error, Polarity, Result};

pub const MODEL_FORMAT: &str = "wellbeing-linear-model";
pub const MODEL_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 1e-4,
            epochs: 20,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub scheme: Scheme,
    pub space: FeatureSpace,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Polarity,
    pub margin: f64,
}

fn sign_of(label: Polarity) -> Result<f64> {
    label
        .sign()
        .ok_or_else(|| Error::Data("neutral examples cannot be used by the classifier".into()))
}

fn dot(w: &[f64], x: &FeatureVector) -> f64 {
    x.iter().map(|(i, c)| w[i as usize] * c as f64).sum()
}

fn check_dims(data: &[(FeatureVector, Polarity)], dim: usize) -> Result<()> {
    for (x, _) in data {
        if let Some(&last) = x.indices.last() {
            if last as usize >= dim {
                return Err(Error::Data(format!(
                    "feature id {last} outside a space of {dim} features"
                )));
            }
        }
    }
    Ok(())
}

/// Regularized mean hinge objective at `(w, b)`.
pub fn objective(data: &[(FeatureVector, Polarity)], weights: &[f64], bias: f64, lambda: f64) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Data("objective of an empty data set".into()));
    }
    check_dims(data, weights.len())?;
    let mut loss = 0.0;
    for (x, label) in data {
        let y = sign_of(*label)?;
        loss += (1.0 - y * (dot(weights, x) + bias)).max(0.0);
    }
    let reg = weights.iter().map(|w| w * w).sum::<f64>() + bias * bias;
    Ok(lambda / 2.0 * reg + loss / data.len() as f64)
}

/// A subgradient of [`objective`]; the gradient where every margin differs from 1.
pub fn subgradient(
    data: &[(FeatureVector, Polarity)],
    weights: &[f64],
    bias: f64,
    lambda: f64,
) -> Result<(Vec<f64>, f64)> {
    if data.is_empty() {
        return Err(Error::Data("subgradient of an empty data set".into()));
    }
    check_dims(data, weights.len())?;
    let n = data.len() as f64;
    let mut g: Vec<f64> = weights.iter().map(|w| lambda * w).collect();
    let mut gb = lambda * bias;
    for (x, label) in data {
        let y = sign_of(*label)?;
        if y * (dot(weights, x) + bias) < 1.0 {
            for (i, c) in x.iter() {
                g[i as usize] -= y * c as f64 / n;
            }
            gb -= y / n;
        }
    }
    Ok((g, gb))
}

/// `w = scale·v`, so the per-step shrink is O(1).
struct Iterate {
    v: Vec<f64>,
    scale: f64,
    bias: f64,
    v_norm2: f64,
}

impl Iterate {
    fn new(dim: usize) -> Iterate {
        Iterate {
            v: vec![0.0; dim],
            scale: 1.0,
            bias: 0.0,
            v_norm2: 0.0,
        }
    }

    fn margin(&self, x: &FeatureVector) -> f64 {
        self.scale * dot(&self.v, x) + self.bias
    }

    fn shrink(&mut self, factor: f64) {
        if factor <= 0.0 {
            self.v.iter_mut().for_each(|v| *v = 0.0);
            self.scale = 1.0;
            self.bias = 0.0;
            self.v_norm2 = 0.0;
            return;
        }
        self.scale *= factor;
        self.bias *= factor;
        if self.scale < 1e-9 {
            self.v.iter_mut().for_each(|v| *v *= self.scale);
            self.v_norm2 *= self.scale * self.scale;
            self.scale = 1.0;
        }
    }

    fn add(&mut self, x: &FeatureVector, coef: f64) {
        let a = coef / self.scale;
        for (i, c) in x.iter() {
            let old = self.v[i as usize];
            let new = old + a * c as f64;
            self.v_norm2 += new * new - old * old;
            self.v[i as usize] = new;
        }
        self.bias += coef;
    }

    fn norm2(&self) -> f64 {
        (self.scale * self.scale * self.v_norm2).max(0.0) + self.bias * self.bias
    }

    fn weights(&self) -> Vec<f64> {
        self.v.iter().map(|v| v * self.scale).collect()
    }
}

/// Trains and also returns the objective after each epoch. The returned
/// model is the best of the epoch-end iterates and their running average,
/// so the history is non-increasing.
pub fn train_traced(
    scheme: &Scheme,
    space: &FeatureSpace,
    data: &[(FeatureVector, Polarity)],
    config: &TrainConfig,
) -> Result<(LinearModel, Vec<f64>)> {
    config.validate()?;
    let dim = space.len();
    check_dims(data, dim)?;
    let ys = data.iter().map(|(_, l)| sign_of(*l)).collect::<Result<Vec<f64>>>()?;
    if !(ys.contains(&1.0) && ys.contains(&-1.0)) {
        return Err(Error::Data("training needs at least one example of each class".into()));
    }

    let lambda = config.lambda;
    let radius2 = 1.0 / lambda;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut it = Iterate::new(dim);
    let mut avg_w = vec![0.0; dim];
    let mut avg_b = 0.0;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut history = Vec::with_capacity(config.epochs);
    let mut t = 0u64;

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let (x, y) = (&data[i].0, ys[i]);
            let violated = y * it.margin(x) < 1.0;
            it.shrink(1.0 - eta * lambda);
            if violated {
                it.add(x, eta * y);
            }
            let n2 = it.norm2();
            if n2 > radius2 {
                it.shrink((radius2 / n2).sqrt());
            }
        }
        let w = it.weights();
        let k = epoch as f64;
        for (a, wi) in avg_w.iter_mut().zip(&w) {
            *a += (wi - *a) / k;
        }
        avg_b += (it.bias - avg_b) / k;
        for (cw, cb) in [(w, it.bias), (avg_w.clone(), avg_b)] {
            let obj = objective(data, &cw, cb, lambda)?;
            if best.as_ref().is_none_or(|b| obj < b.0) {
                best = Some((obj, cw, cb));
            }
        }
        let current = best.as_ref().map(|b| b.0).expect("set above");
        log::debug!("epoch {epoch}: objective {current:.6}");
        history.push(current);
    }

    let (_, weights, bias) = best.expect("epochs >= 1");
    let model = LinearModel {
        scheme: scheme.clone(),
        space: space.clone(),
        weights,
        bias,
        lambda,
        epochs: config.epochs,
        seed: config.seed,
    };
    Ok((model, history))
}

pub fn train(
    scheme: &Scheme,
    space: &FeatureSpace,
    data: &[(FeatureVector, Polarity)],
    config: &TrainConfig,
) -> Result<LinearModel> {
    train_traced(scheme, space, data, config).map(|(m, _)| m)
}

impl LinearModel {
    pub fn margin(&self, x: &FeatureVector) -> f64 {
        x.iter()
            .filter_map(|(i, c)| self.weights.get(i as usize).map(|w| w * c as f64))
            .sum::<f64>()
            + self.bias
    }

    /// Margin exactly zero predicts Positive.
    pub fn predict(&self, x: &FeatureVector) -> Prediction {
        let margin = self.margin(x);
        let label = if margin >= 0.0 {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Prediction { label, margin }
    }

    pub fn space_hash(&self) -> String {
        self.space.hash()
    }

    /// Text serialization: header lines, then one `weight<TAB>feature` line
    /// per feature id, then `end`. Floats use shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MODEL_FORMAT} {MODEL_VERSION}");
        let _ = writeln!(out, "scheme\t{}", self.scheme);
        let _ = writeln!(out, "space\t{}", self.space_hash());
        let _ = writeln!(out, "lambda\t{:?}", self.lambda);
        let _ = writeln!(out, "epochs\t{}", self.epochs);
        let _ = writeln!(out, "seed\t{}", self.seed);
        let _ = writeln!(out, "bias\t{:?}", self.bias);
        let _ = writeln!(out, "features\t{}", self.weights.len());
        for (w, name) in self.weights.iter().zip(self.space.names()) {
            let _ = writeln!(out, "{w:?}\t{name}");
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(content: &str, source: &str) -> Result<LinearModel> {
        let mut lines = content.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(source, 0, format!("truncated model file: missing {what}")))
        };
        let (_, header) = next("header")?;
        let (format, version) = header.split_once(' ').unwrap_or((header, ""));
        if format != MODEL_FORMAT {
            return Err(Error::parse(source, 1, format!("not a model file (header {header:?})")));
        }
        if version != MODEL_VERSION {
            return Err(Error::Version {
                what: "model file",
                found: version.to_string(),
                expected: MODEL_VERSION.to_string(),
            });
        }
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (n, line) = next(key)?;
            match line.split_once('\t') {
                Some((k, v)) if k == key => Ok((n, v.to_string())),
                _ => Err(Error::parse(source, n, format!("expected {key:?} field"))),
            }
        };
        fn num<T: std::str::FromStr>(source: &str, (n, v): (usize, String)) -> Result<T> {
            v.parse().map_err(|_| Error::parse(source, n, format!("bad number {v:?}")))
        }
        let (n, scheme) = field("scheme")?;
        let scheme: Scheme = scheme.parse().map_err(|e: String| Error::parse(source, n, e))?;
        let (hash_line, hash) = field("space")?;
        let lambda: f64 = num(source, field("lambda")?)?;
        let epochs: usize = num(source, field("epochs")?)?;
        let seed: u64 = num(source, field("seed")?)?;
        let bias: f64 = num(source, field("bias")?)?;
        let dim: usize = num(source, field("features")?)?;
        let mut weights = Vec::with_capacity(dim);
        let mut names = String::new();
        for _ in 0..dim {
            let (n, line) = next("weights")?;
            let (w, name) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source, n, "expected weight<TAB>feature"))?;
            weights.push(num::<f64>(source, (n, w.to_string()))?);
            names.push_str(name);
            names.push('\n');
        }
        match next("end marker")? {
            (_, "end") => {}
            (n, _) => return Err(Error::parse(source, n, "expected end marker")),
        }
        let space = FeatureSpace::from_text(&names, source)?;
        if space.hash() != hash {
            return Err(Error::parse(source, hash_line, "feature space hash does not match the feature list"));
        }
        if !(bias.is_finite() && weights.iter().all(|w| w.is_finite())) {
            return Err(Error::parse(source, 0, "non-finite weights"));
        }
        Ok(LinearModel {
            scheme,
            space,
            weights,
            bias,
            lambda,
            epochs,
            seed,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<LinearModel> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        LinearModel::from_text(&content, &path.display().to_string())
    }
}
