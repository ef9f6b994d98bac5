//! Decision tree with information-gain or gain-ratio splits, optional random
//! attribute subsets per node and optional reduced-error pruning.
//!
//! Numeric attributes split in two at midpoints between consecutive distinct
//! sorted values (`value <= threshold` goes left). Nominal attributes split
//! into one branch per category, the missing-value category included.

use serde::{Deserialize, Serialize};

use super::encode::{Column, Encoder};
use super::ClassDistribution;
use crate::data::FeatureVector;
use crate::error::Result;
use crate::rng::{derive_seed, SeededRng};

const MIN_GAIN: f64 = 1e-12;
const PRUNE_STREAM: u64 = 0x50_5255_4e45; // "PRUNE"

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    InfoGain,
    GainRatio,
}

/// Number of attributes drawn at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetSize {
    Count(usize),
    /// `ceil(sqrt(#attributes))`.
    Sqrt,
}

impl SubsetSize {
    fn resolve(self, n_attributes: usize) -> usize {
        match self {
            SubsetSize::Count(k) => k.clamp(1, n_attributes.max(1)),
            SubsetSize::Sqrt => ((n_attributes as f64).sqrt().ceil() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub criterion: SplitCriterion,
    #[serde(default)]
    pub random_subset_size: Option<SubsetSize>,
    #[serde(default)]
    pub rep_pruning: bool,
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
    #[serde(default)]
    pub max_depth: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_min_leaf() -> usize {
    1
}

impl Default for TreeSpec {
    fn default() -> Self {
        TreeSpec {
            criterion: SplitCriterion::GainRatio,
            random_subset_size: None,
            rep_pruning: false,
            min_leaf: 1,
            max_depth: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        counts: Vec<f64>,
    },
    Numeric {
        attribute: usize,
        threshold: f64,
        counts: Vec<f64>,
        left: Box<Node>,
        right: Box<Node>,
    },
    Nominal {
        attribute: usize,
        counts: Vec<f64>,
        children: Vec<Node>,
    },
}

impl Node {
    fn counts(&self) -> &[f64] {
        match self {
            Node::Leaf { counts } | Node::Numeric { counts, .. } | Node::Nominal { counts, .. } => counts,
        }
    }

    fn n_nodes(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Numeric { left, right, .. } => 1 + left.n_nodes() + right.n_nodes(),
            Node::Nominal { children, .. } => 1 + children.iter().map(Node::n_nodes).sum::<usize>(),
        }
    }

    fn child_for(&self, row: &[f64]) -> Option<&Node> {
        match self {
            Node::Leaf { .. } => None,
            Node::Numeric {
                attribute,
                threshold,
                left,
                right,
                ..
            } => Some(if row[*attribute] <= *threshold { left } else { right }),
            Node::Nominal {
                attribute, children, ..
            } => Some(&children[row[*attribute] as usize]),
        }
    }
}

/// Root split of a fitted tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitInfo {
    pub attribute: usize,
    /// `None` for a nominal multiway split.
    pub threshold: Option<f64>,
}

/// Outcome of reduced-error pruning on the held-out fold.
#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    /// Training-row indices of the pruning fold, ascending.
    pub prune_rows: Vec<usize>,
    /// Training-row indices the tree was grown on, ascending.
    pub grow_rows: Vec<usize>,
    pub errors_before: usize,
    pub errors_after: usize,
}

#[derive(Debug, Clone)]
pub struct TreeModel {
    encoder: Encoder,
    root: Node,
    n_classes: usize,
    prune_report: Option<PruneReport>,
}

/// Seeded grow/prune partition used by reduced-error pruning: one third of
/// the rows (rounded down) are held out. Both parts are ascending.
pub fn pruning_partition(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let perm = SeededRng::new(derive_seed(seed, PRUNE_STREAM)).permutation(n);
    let n_prune = n / 3;
    let mut prune = perm[..n_prune].to_vec();
    let mut grow = perm[n_prune..].to_vec();
    prune.sort_unstable();
    grow.sort_unstable();
    (grow, prune)
}

fn entropy(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    if n <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / n;
            -p * p.log2()
        })
        .sum()
}

fn majority(counts: &[f64]) -> usize {
    let mut best = 0;
    for (c, &v) in counts.iter().enumerate() {
        if v > counts[best] {
            best = c;
        }
    }
    best
}

struct Grower<'a> {
    spec: &'a TreeSpec,
    columns: &'a [Column],
    rows: &'a [Vec<f64>],
    classes: &'a [usize],
    n_classes: usize,
    rng: SeededRng,
}

struct Candidate {
    score: f64,
    attribute: usize,
    threshold: Option<f64>,
}

impl Grower<'_> {
    fn counts_of(&self, idx: &[usize]) -> Vec<f64> {
        let mut counts = vec![0.0; self.n_classes];
        for &i in idx {
            counts[self.classes[i]] += 1.0;
        }
        counts
    }

    fn score(&self, gain: f64, branch_sizes: &[f64], n: f64) -> Option<f64> {
        if gain <= MIN_GAIN {
            return None;
        }
        match self.spec.criterion {
            SplitCriterion::InfoGain => Some(gain),
            SplitCriterion::GainRatio => {
                let split_info = entropy(branch_sizes);
                debug_assert!(n > 0.0);
                (split_info > MIN_GAIN).then(|| gain / split_info)
            }
        }
    }

    fn best_numeric(&self, idx: &[usize], attribute: usize, parent_h: f64) -> Option<Candidate> {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| {
            self.rows[a][attribute]
                .partial_cmp(&self.rows[b][attribute])
                .unwrap()
                .then(a.cmp(&b))
        });
        let n = order.len() as f64;
        let total = self.counts_of(idx);
        let mut left = vec![0.0; self.n_classes];
        let min_leaf = self.spec.min_leaf.max(1);
        let mut best: Option<Candidate> = None;
        for pos in 0..order.len() - 1 {
            left[self.classes[order[pos]]] += 1.0;
            let here = self.rows[order[pos]][attribute];
            let next = self.rows[order[pos + 1]][attribute];
            if here == next {
                continue;
            }
            let n_left = pos + 1;
            let n_right = order.len() - n_left;
            if n_left < min_leaf || n_right < min_leaf {
                continue;
            }
            let right: Vec<f64> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let (nl, nr) = (n_left as f64, n_right as f64);
            let gain = parent_h - (nl / n) * entropy(&left) - (nr / n) * entropy(&right);
            if let Some(score) = self.score(gain, &[nl, nr], n) {
                if best.as_ref().is_none_or(|b| score > b.score) {
                    best = Some(Candidate {
                        score,
                        attribute,
                        threshold: Some((here + next) / 2.0),
                    });
                }
            }
        }
        best
    }

    fn best_nominal(&self, idx: &[usize], attribute: usize, categories: usize, parent_h: f64) -> Option<Candidate> {
        let mut branch_counts = vec![vec![0.0; self.n_classes]; categories];
        for &i in idx {
            branch_counts[self.rows[i][attribute] as usize][self.classes[i]] += 1.0;
        }
        let sizes: Vec<f64> = branch_counts.iter().map(|c| c.iter().sum()).collect();
        let nonempty: Vec<f64> = sizes.iter().copied().filter(|&s| s > 0.0).collect();
        let min_leaf = self.spec.min_leaf.max(1) as f64;
        if nonempty.len() < 2 || nonempty.iter().any(|&s| s < min_leaf) {
            return None;
        }
        let n = idx.len() as f64;
        let gain = parent_h
            - branch_counts
                .iter()
                .zip(&sizes)
                .map(|(c, &s)| (s / n) * entropy(c))
                .sum::<f64>();
        self.score(gain, &nonempty, n).map(|score| Candidate {
            score,
            attribute,
            threshold: None,
        })
    }

    fn grow(&mut self, idx: &[usize], depth: usize) -> Node {
        let counts = self.counts_of(idx);
        let pure = counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        let min_leaf = self.spec.min_leaf.max(1);
        let depth_capped = self.spec.max_depth.is_some_and(|d| depth >= d);
        if pure || idx.len() < 2 * min_leaf || depth_capped {
            return Node::Leaf { counts };
        }

        let n_attr = self.columns.len();
        let attributes: Vec<usize> = match self.spec.random_subset_size.map(|s| s.resolve(n_attr)) {
            Some(k) if k < n_attr => self.rng.sample_distinct(n_attr, k),
            _ => (0..n_attr).collect(),
        };

        let parent_h = entropy(&counts);
        let mut best: Option<Candidate> = None;
        for &a in &attributes {
            let cand = match self.columns[a] {
                Column::Numeric { .. } => self.best_numeric(idx, a, parent_h),
                Column::Nominal { categories } => self.best_nominal(idx, a, categories, parent_h),
            };
            if let Some(c) = cand {
                if best.as_ref().is_none_or(|b| c.score > b.score) {
                    best = Some(c);
                }
            }
        }

        let Some(best) = best else {
            return Node::Leaf { counts };
        };
        match best.threshold {
            Some(threshold) => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    idx.iter().partition(|&&i| self.rows[i][best.attribute] <= threshold);
                let left = Box::new(self.grow(&l, depth + 1));
                let right = Box::new(self.grow(&r, depth + 1));
                Node::Numeric {
                    attribute: best.attribute,
                    threshold,
                    counts,
                    left,
                    right,
                }
            }
            None => {
                let Column::Nominal { categories } = self.columns[best.attribute] else {
                    unreachable!("nominal split on a numeric column")
                };
                let mut parts = vec![Vec::new(); categories];
                for &i in idx {
                    parts[self.rows[i][best.attribute] as usize].push(i);
                }
                let children = parts.iter().map(|p| self.grow(p, depth + 1)).collect();
                Node::Nominal {
                    attribute: best.attribute,
                    counts,
                    children,
                }
            }
        }
    }
}

/// Pruning-fold errors of the subtree at `node` after pruning it in place.
/// `fallback` is the class predicted where `node` saw no growing rows.
fn reduced_error_prune(node: &mut Node, rows: &[Vec<f64>], classes: &[usize], idx: &[usize], fallback: usize) -> usize {
    let own = if node.counts().iter().sum::<f64>() > 0.0 {
        majority(node.counts())
    } else {
        fallback
    };
    let leaf_errors = idx.iter().filter(|&&i| classes[i] != own).count();
    let subtree_errors = match node {
        Node::Leaf { .. } => return leaf_errors,
        Node::Numeric {
            attribute,
            threshold,
            left,
            right,
            ..
        } => {
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| rows[i][*attribute] <= *threshold);
            reduced_error_prune(left, rows, classes, &l, own) + reduced_error_prune(right, rows, classes, &r, own)
        }
        Node::Nominal {
            attribute, children, ..
        } => {
            let mut parts = vec![Vec::new(); children.len()];
            for &i in idx {
                parts[rows[i][*attribute] as usize].push(i);
            }
            children
                .iter_mut()
                .zip(&parts)
                .map(|(c, p)| reduced_error_prune(c, rows, classes, p, own))
                .sum()
        }
    };
    if leaf_errors <= subtree_errors {
        *node = Node::Leaf {
            counts: node.counts().to_vec(),
        };
        leaf_errors
    } else {
        subtree_errors
    }
}

impl TreeModel {
    pub(crate) fn fit(
        encoder: Encoder,
        rows: &[&FeatureVector],
        classes: &[usize],
        n_classes: usize,
        spec: &TreeSpec,
    ) -> Result<Self> {
        let encoded: Vec<Vec<f64>> = rows.iter().map(|x| encoder.encode(x)).collect::<Result<_>>()?;
        let n = encoded.len();
        let (grow_idx, prune_idx) = if spec.rep_pruning {
            pruning_partition(n, spec.seed)
        } else {
            ((0..n).collect(), Vec::new())
        };
        // Too few rows to hold any out: grow on everything, skip pruning.
        let pruning = spec.rep_pruning && !prune_idx.is_empty() && !grow_idx.is_empty();
        let grow_idx = if pruning { grow_idx } else { (0..n).collect() };

        let mut grower = Grower {
            spec,
            columns: &encoder.columns,
            rows: &encoded,
            classes,
            n_classes,
            rng: SeededRng::new(spec.seed),
        };
        let mut root = grower.grow(&grow_idx, 0);

        let prune_report = if pruning {
            let before = Self::count_errors(&root, &encoded, classes, &prune_idx);
            let fallback = majority(root.counts());
            let after = reduced_error_prune(&mut root, &encoded, classes, &prune_idx, fallback);
            Some(PruneReport {
                prune_rows: prune_idx,
                grow_rows: grow_idx,
                errors_before: before,
                errors_after: after,
            })
        } else {
            None
        };

        Ok(TreeModel {
            encoder,
            root,
            n_classes,
            prune_report,
        })
    }

    fn leaf_counts<'a>(root: &'a Node, row: &[f64]) -> &'a [f64] {
        let mut node = root;
        let mut last_nonempty = root.counts();
        while let Some(child) = node.child_for(row) {
            node = child;
            if node.counts().iter().sum::<f64>() > 0.0 {
                last_nonempty = node.counts();
            }
        }
        last_nonempty
    }

    fn count_errors(root: &Node, rows: &[Vec<f64>], classes: &[usize], idx: &[usize]) -> usize {
        idx.iter()
            .filter(|&&i| majority(Self::leaf_counts(root, &rows[i])) != classes[i])
            .count()
    }

    pub(crate) fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn n_nodes(&self) -> usize {
        self.root.n_nodes()
    }

    pub fn root_split(&self) -> Option<SplitInfo> {
        match &self.root {
            Node::Leaf { .. } => None,
            Node::Numeric {
                attribute, threshold, ..
            } => Some(SplitInfo {
                attribute: *attribute,
                threshold: Some(*threshold),
            }),
            Node::Nominal { attribute, .. } => Some(SplitInfo {
                attribute: *attribute,
                threshold: None,
            }),
        }
    }

    pub fn prune_report(&self) -> Option<&PruneReport> {
        self.prune_report.as_ref()
    }

    /// Majority class at the reached leaf (lowest index on ties).
    pub fn predict_class(&self, x: &FeatureVector) -> Result<usize> {
        let row = self.encoder.encode(x)?;
        Ok(majority(Self::leaf_counts(&self.root, &row)))
    }

    pub(crate) fn predict_dist(&self, x: &FeatureVector) -> Result<ClassDistribution> {
        let row = self.encoder.encode(x)?;
        let counts = Self::leaf_counts(&self.root, &row);
        Ok(ClassDistribution::laplace(counts))
    }
}
