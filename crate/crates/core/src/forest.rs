//! Random-forest regression with impurity-decrease importances.
//!
//! Each tree is grown on a bootstrap sample of the training rows. Splits
//! maximise the reduction in mean squared deviation, every feature is a
//! candidate at every node and thresholds sit halfway between adjacent
//! distinct values. Trees grow until a node is pure or has fewer than two
//! samples.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::rng::{stream_rng, StreamRng};

pub const DEFAULT_TREES: usize = 1000;
pub const DEFAULT_FOREST_SEED: u64 = 42;
pub const DEFAULT_SPLIT_SEED: u64 = 1;
pub const DEFAULT_TEST_FRACTION: f64 = 0.3;

#[derive(Debug, Error, PartialEq)]
pub enum ForestError {
    #[error("factor table shape mismatch: {0}")]
    Shape(String),
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("cannot split {0} rows into nonempty train and test sets")]
    DegenerateSplit(usize),
    #[error("training data needs at least {needed} rows, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("forest needs at least one tree")]
    NoTrees,
    #[error("test set is empty")]
    EmptyTest,
    #[error("zero target in row {0}; percentage error undefined")]
    ZeroTarget(usize),
}

type Result<T, E = ForestError> = std::result::Result<T, E>;

/// Annual explanatory factors with the sales target.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTable {
    years: Vec<i32>,
    features: Vec<Vec<f64>>,
    target: Vec<f64>,
    feature_names: Vec<String>,
}

impl FactorTable {
    pub fn new(years: Vec<i32>, features: Vec<Vec<f64>>, target: Vec<f64>, feature_names: Vec<String>) -> Result<Self> {
        if years.len() != features.len() || years.len() != target.len() {
            return Err(ForestError::Shape(format!(
                "{} years, {} feature rows, {} targets",
                years.len(),
                features.len(),
                target.len()
            )));
        }
        if let Some(row) = features.iter().find(|r| r.len() != feature_names.len()) {
            return Err(ForestError::Shape(format!(
                "row with {} features but {} feature names",
                row.len(),
                feature_names.len()
            )));
        }
        let finite = features.iter().flatten().chain(&target).all(|v| v.is_finite());
        if !finite {
            return Err(ForestError::Shape("non-finite cell".into()));
        }
        Ok(Self {
            years,
            features,
            target,
            feature_names,
        })
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Rows at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> FactorTable {
        FactorTable {
            years: indices.iter().map(|&i| self.years[i]).collect(),
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            target: indices.iter().map(|&i| self.target[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Same table with every target multiplied by `factor`.
    pub fn scale_target(&self, factor: f64) -> FactorTable {
        let mut out = self.clone();
        out.target.iter_mut().for_each(|t| *t *= factor);
        out
    }

    /// Same table with column `feature` replaced.
    pub fn with_column(&self, feature: usize, values: &[f64]) -> FactorTable {
        let mut out = self.clone();
        for (row, &v) in out.features.iter_mut().zip(values) {
            row[feature] = v;
        }
        out
    }
}

/// Number of test rows: `round(test_fraction * n)`, kept within `1..n`.
pub fn test_size(n: usize, test_fraction: f64) -> Result<usize> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(ForestError::InvalidFraction(test_fraction));
    }
    if n < 2 {
        return Err(ForestError::DegenerateSplit(n));
    }
    Ok(((test_fraction * n as f64).round() as usize).clamp(1, n - 1))
}

/// Seeded random partition. Each side keeps the table's row order.
pub fn split_data(table: &FactorTable, test_fraction: f64, seed: u64) -> Result<(FactorTable, FactorTable)> {
    let n = table.len();
    if n < 3 {
        return Err(ForestError::DegenerateSplit(n));
    }
    let n_test = test_size(n, test_fraction)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stream_rng(seed, 0));
    let (train, test) = idx.split_at(n - n_test);
    let (mut train, mut test) = (train.to_vec(), test.to_vec());
    train.sort_unstable();
    test.sort_unstable();
    Ok((table.select(&train), table.select(&test)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
        n_samples: usize,
        /// `impurity(parent) - weighted impurity(children)`.
        impurity_decrease: f64,
    },
    Leaf {
        prediction: f64,
        n_samples: usize,
    },
}

impl TreeNode {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { prediction, .. } => return *prediction,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn n_samples(&self) -> usize {
        match self {
            TreeNode::Split { n_samples, .. } | TreeNode::Leaf { n_samples, .. } => *n_samples,
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    /// Adds `(n_samples / root_samples) * impurity_decrease` per split node
    /// to `out[feature]`.
    fn accumulate_importance(&self, root_samples: usize, out: &mut [f64]) {
        if let TreeNode::Split {
            feature,
            left,
            right,
            n_samples,
            impurity_decrease,
            ..
        } = self
        {
            out[*feature] += *n_samples as f64 / root_samples as f64 * impurity_decrease;
            left.accumulate_importance(root_samples, out);
            right.accumulate_importance(root_samples, out);
        }
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
    left: Vec<usize>,
    right: Vec<usize>,
}

fn sse(sum: f64, sum_sq: f64, n: f64) -> f64 {
    (sum_sq - sum * sum / n).max(0.0)
}

#[allow(clippy::needless_range_loop)]
fn find_split(rows: &[&[f64]], y: &[f64], idx: &[usize]) -> Option<BestSplit> {
    let n = idx.len() as f64;
    let total: f64 = idx.iter().map(|&i| y[i]).sum();
    let total_sq: f64 = idx.iter().map(|&i| y[i] * y[i]).sum();
    let parent = sse(total, total_sq, n) / n;
    let n_features = rows[idx[0]].len();

    let mut best: Option<(usize, f64, f64)> = None;
    let mut sorted = idx.to_vec();
    for f in 0..n_features {
        sorted.sort_by(|&a, &b| rows[a][f].total_cmp(&rows[b][f]).then(a.cmp(&b)));
        let (mut ls, mut lsq) = (0.0, 0.0);
        for k in 0..sorted.len() - 1 {
            let yi = y[sorted[k]];
            ls += yi;
            lsq += yi * yi;
            let (a, b) = (rows[sorted[k]][f], rows[sorted[k + 1]][f]);
            if a == b {
                continue;
            }
            let nl = (k + 1) as f64;
            let nr = n - nl;
            let child = (sse(ls, lsq, nl) + sse(total - ls, total_sq - lsq, nr)) / n;
            let gain = parent - child;
            let threshold = a + (b - a) / 2.0;
            if best.is_none_or(|(_, _, g)| gain > g) {
                best = Some((f, threshold, gain));
            }
        }
    }
    let (feature, threshold, gain) = best?;
    let (left, right) = idx.iter().partition(|&&i| rows[i][feature] <= threshold);
    Some(BestSplit {
        feature,
        threshold,
        gain: gain.max(0.0),
        left,
        right,
    })
}

fn grow(rows: &[&[f64]], y: &[f64], idx: Vec<usize>) -> TreeNode {
    let n_samples = idx.len();
    let mean = idx.iter().map(|&i| y[i]).sum::<f64>() / n_samples as f64;
    let pure = idx.iter().all(|&i| y[i] == y[idx[0]]);
    if n_samples < 2 || pure {
        return TreeNode::Leaf {
            prediction: mean,
            n_samples,
        };
    }
    match find_split(rows, y, &idx) {
        None => TreeNode::Leaf {
            prediction: mean,
            n_samples,
        },
        Some(split) => TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            impurity_decrease: split.gain,
            n_samples,
            left: Box::new(grow(rows, y, split.left)),
            right: Box::new(grow(rows, y, split.right)),
        },
    }
}

/// Grows a full regression tree on the given rows, without resampling.
pub fn build_tree(table: &FactorTable, rows: &[usize]) -> TreeNode {
    assert!(!rows.is_empty(), "cannot grow a tree on zero rows");
    let features: Vec<&[f64]> = table.features.iter().map(Vec::as_slice).collect();
    grow(&features, &table.target, rows.to_vec())
}

/// Bootstrap sample of `n` row indices drawn with replacement.
pub fn bootstrap(n: usize, rng: &mut StreamRng) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Grows one tree on a bootstrap resample of `train`.
pub fn fit_tree(train: &FactorTable, rng: &mut StreamRng) -> Result<TreeNode> {
    if train.is_empty() {
        return Err(ForestError::TooFewRows { needed: 1, found: 0 });
    }
    let sample = bootstrap(train.len(), rng);
    Ok(build_tree(train, &sample))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    /// Normalised impurity-decrease importances, one per feature.
    pub importances: Vec<f64>,
    /// False when no tree split at all (constant target); importances are
    /// then all zero.
    pub importances_defined: bool,
    pub feature_names: Vec<String>,
    pub seed: u64,
}

impl ForestModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }

    /// `(name, importance)` pairs sorted by descending importance, ties by
    /// column order.
    pub fn ranking(&self) -> Vec<(String, f64)> {
        let mut pairs: Vec<(usize, f64)> = self.importances.iter().copied().enumerate().collect();
        pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        pairs
            .into_iter()
            .map(|(i, v)| (self.feature_names[i].clone(), v))
            .collect()
    }
}

/// Fits `n_trees` bootstrap trees; tree `k` draws from stream `k` of `seed`.
pub fn fit_forest(train: &FactorTable, n_trees: usize, seed: u64) -> Result<ForestModel> {
    if n_trees == 0 {
        return Err(ForestError::NoTrees);
    }
    if train.is_empty() {
        return Err(ForestError::TooFewRows { needed: 1, found: 0 });
    }
    let trees: Vec<TreeNode> = (0..n_trees)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            fit_tree(train, &mut rng).expect("train is nonempty")
        })
        .collect();
    let mut raw = vec![0.0; train.n_features()];
    for tree in &trees {
        tree.accumulate_importance(tree.n_samples(), &mut raw);
    }
    let total: f64 = raw.iter().sum();
    let importances_defined = total > 0.0;
    let importances = if importances_defined {
        raw.iter().map(|v| v / total).collect()
    } else {
        vec![0.0; raw.len()]
    };
    Ok(ForestModel {
        trees,
        importances,
        importances_defined,
        feature_names: train.feature_names.clone(),
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub mae: f64,
    /// Mean absolute percentage error, in percent.
    pub mape: f64,
    /// `100 - mape`.
    pub accuracy: f64,
}

pub fn evaluate(model: &ForestModel, test: &FactorTable) -> Result<Evaluation> {
    if test.is_empty() {
        return Err(ForestError::EmptyTest);
    }
    if let Some(i) = test.target.iter().position(|&y| y == 0.0) {
        return Err(ForestError::ZeroTarget(i));
    }
    let n = test.len() as f64;
    let (mut abs, mut pct) = (0.0, 0.0);
    for (x, &y) in test.features.iter().zip(&test.target) {
        let err = (model.predict(x) - y).abs();
        abs += err;
        pct += 100.0 * err / y.abs();
    }
    let mape = pct / n;
    Ok(Evaluation {
        mae: abs / n,
        mape,
        accuracy: 100.0 - mape,
    })
}
