//! Digraphs, graph signals and the graph families used in the experiments.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, RMatrix};

/// Default cap on the node count of a dense graph.
pub const DEFAULT_MAX_NODES: usize = 2000;

/// Range of random edge weights.
pub const WEIGHT_RANGE: (f64, f64) = (0.5, 1.5);

/// Weighted directed graph stored as a dense adjacency matrix.
///
/// Entry `(i, j)` is the weight of the edge from node `j` to node `i`, so
/// a signal is shifted along the edges by `y = A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    adjacency: RMatrix,
}

impl Digraph {
    pub fn new(adjacency: RMatrix) -> Result<Self> {
        Self::with_max_nodes(adjacency, DEFAULT_MAX_NODES)
    }

    pub fn with_max_nodes(adjacency: RMatrix, max_nodes: usize) -> Result<Self> {
        let n = adjacency.nrows();
        if n != adjacency.ncols() {
            return Err(Error::Dimension(format!(
                "adjacency must be square, got {}x{}",
                n,
                adjacency.ncols()
            )));
        }
        if n == 0 {
            return Err(Error::Dimension("graph needs at least one node".into()));
        }
        if n > max_nodes {
            return Err(Error::Dimension(format!(
                "{n} nodes exceeds the dense limit of {max_nodes}"
            )));
        }
        for j in 0..n {
            for i in 0..n {
                let w = adjacency[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Value(format!(
                        "edge weight a[{i}][{j}] = {w} must be finite and nonnegative"
                    )));
                }
            }
        }
        Ok(Digraph { adjacency })
    }

    /// Builds a graph from `(from, to, weight)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut a = RMatrix::zeros(n, n);
        for &(from, to, w) in edges {
            if from >= n || to >= n {
                return Err(Error::Dimension(format!(
                    "edge {from}->{to} out of range for {n} nodes"
                )));
            }
            a[(to, from)] += w;
        }
        Digraph::new(a)
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &RMatrix {
        &self.adjacency
    }

    pub fn nnz(&self) -> usize {
        self.adjacency.iter().filter(|w| **w != 0.0).count()
    }

    /// ‖AAᵀ − AᵀA‖_max
    pub fn normality_residual(&self) -> f64 {
        let a = &self.adjacency;
        max_abs(&(a * a.transpose() - a.transpose() * a))
    }

    /// Normal to `1e-10·‖A‖²_F`.
    pub fn is_normal(&self) -> bool {
        let f = self.adjacency.norm();
        self.normality_residual() <= 1e-10 * (f * f).max(f64::MIN_POSITIVE)
    }

    /// Row sums, i.e. weighted in-degrees.
    pub fn in_degrees(&self) -> Vec<f64> {
        self.adjacency.row_iter().map(|r| r.sum()).collect()
    }

    /// `D_in⁻¹ A`: every node averages its in-neighbours.
    pub fn row_normalized(&self) -> Result<Digraph> {
        let mut a = self.adjacency.clone();
        for (i, d) in self.in_degrees().into_iter().enumerate() {
            if d <= 0.0 {
                return Err(Error::Validation(format!(
                    "node {i} has zero in-degree; cannot row-normalize"
                )));
            }
            a.row_mut(i).unscale_mut(d);
        }
        Ok(Digraph { adjacency: a })
    }
}

/// Real-valued signal, one entry per node.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    values: Vec<f64>,
}

impl GraphSignal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Value(format!("signal entry {i} is not finite")));
        }
        Ok(GraphSignal { values })
    }

    pub fn zeros(n: usize) -> Self {
        GraphSignal {
            values: vec![0.0; n],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::Dimension(format!(
                "signal has {} entries, graph has {n} nodes",
                self.values.len()
            )));
        }
        Ok(())
    }
}

impl From<GraphSignal> for Vec<f64> {
    fn from(s: GraphSignal) -> Self {
        s.values
    }
}

/// Balanced M-block cyclic graph parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MBlockSpec {
    pub blocks: usize,
    pub nodes_per_block: usize,
    pub weight_seed: u64,
    /// Row-normalize so diffusion averages in-neighbours.
    pub normalize: bool,
}

impl Default for MBlockSpec {
    fn default() -> Self {
        MBlockSpec {
            blocks: 4,
            nodes_per_block: 25,
            weight_seed: 7,
            normalize: true,
        }
    }
}

impl MBlockSpec {
    pub fn n(&self) -> usize {
        self.blocks * self.nodes_per_block
    }

    pub fn block_of(&self, node: usize) -> usize {
        node / self.nodes_per_block
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks < 2 {
            return Err(Error::Validation(format!(
                "an M-block cyclic graph needs M >= 2 blocks, got {}",
                self.blocks
            )));
        }
        if self.nodes_per_block < 1 {
            return Err(Error::Validation("blocks must hold at least one node".into()));
        }
        Ok(())
    }
}

fn require_at_least(name: &str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::Validation(format!("{name} must be >= {min}, got {value}")));
    }
    Ok(())
}

/// Directed cycle `0 → 1 → … → n-1 → 0` with unit weights.
pub fn gen_directed_cycle(n: usize) -> Result<Digraph> {
    require_at_least("n", n, 2)?;
    let mut a = RMatrix::zeros(n, n);
    for i in 0..n {
        a[((i + 1) % n, i)] = 1.0;
    }
    Digraph::new(a)
}

/// Directed path `0 → 1 → … → n-1`; the adjacency is a nilpotent Jordan
/// block and has no eigendecomposition.
pub fn gen_directed_path(n: usize) -> Result<Digraph> {
    require_at_least("n", n, 2)?;
    let mut a = RMatrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i + 1, i)] = 1.0;
    }
    Digraph::new(a)
}

/// `rows × cols` directed torus. Node `(r, c)` has index `r·cols + c` and
/// sends unit-weight edges to its right neighbour `(r, c+1)` and its lower
/// neighbour `(r+1, c)`, both with wrap-around.
pub fn gen_directed_torus(rows: usize, cols: usize) -> Result<Digraph> {
    require_at_least("rows", rows, 2)?;
    require_at_least("cols", cols, 2)?;
    let n = rows * cols;
    let idx = |r: usize, c: usize| (r % rows) * cols + (c % cols);
    let mut a = RMatrix::zeros(n, n);
    for r in 0..rows {
        for c in 0..cols {
            let src = idx(r, c);
            a[(idx(r, c + 1), src)] += 1.0;
            a[(idx(r + 1, c), src)] += 1.0;
        }
    }
    Digraph::new(a)
}

/// M-block cyclic graph: block `b` feeds block `b+1 mod M` through a dense
/// random bipartite layer; nodes within a block are never connected.
pub fn gen_mblock_cyclic(spec: &MBlockSpec) -> Result<Digraph> {
    spec.validate()?;
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.weight_seed);
    let weights = Uniform::new(WEIGHT_RANGE.0, WEIGHT_RANGE.1).expect("valid range");
    let mut a = RMatrix::zeros(n, n);
    // column-major fill so the stream order is fixed
    for j in 0..n {
        let dest_block = (spec.block_of(j) + 1) % spec.blocks;
        let start = dest_block * spec.nodes_per_block;
        for i in start..start + spec.nodes_per_block {
            a[(i, j)] = weights.sample(&mut rng);
        }
    }
    let g = Digraph::new(a)?;
    if spec.normalize {
        g.row_normalized()
    } else {
        Ok(g)
    }
}

/// Erdős–Rényi digraph without self-loops; each ordered pair carries an
/// edge with probability `edge_prob` and a uniform(0.5, 1.5) weight.
pub fn gen_random(n: usize, edge_prob: f64, seed: u64) -> Result<Digraph> {
    require_at_least("n", n, 1)?;
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Validation(format!(
            "edge probability must lie in [0, 1], got {edge_prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = Uniform::new(WEIGHT_RANGE.0, WEIGHT_RANGE.1).expect("valid range");
    let a = DMatrix::from_fn(n, n, |i, j| {
        let present = rng.random::<f64>() < edge_prob;
        let w = weights.sample(&mut rng);
        if i != j && present {
            w
        } else {
            0.0
        }
    });
    Digraph::new(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SignalDistribution {
    #[default]
    StandardNormal,
    Uniform { low: f64, high: f64 },
}

pub fn random_signal(n: usize, seed: u64, distribution: SignalDistribution) -> GraphSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = match distribution {
        SignalDistribution::StandardNormal => {
            (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
        }
        SignalDistribution::Uniform { low, high } => {
            (0..n).map(|_| low + (high - low) * rng.random::<f64>()).collect()
        }
    };
    GraphSignal { values }
}
