//! Bibliographic coupling `B_in = AAᵀ`, co-citation `C_out = AᵀA` and
//! their sum.
//!
//! `B_in` joins nodes that share a common in-link (`b_ij = Σ_k a_ik a_jk`),
//! `C_out` joins nodes that share a common out-link
//! (`c_ij = Σ_k a_ki a_kj`).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::graph::{Digraph, GraphSignal};
use crate::linalg::{sym_eig, RMatrix};

/// Entries below this are treated as absent when finding components.
pub const EDGE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymKind {
    CommonInLink,
    CommonOutLink,
    Bibliometric,
}

#[derive(Debug, Clone)]
pub struct Symmetrization {
    pub kind: SymKind,
    pub matrix: RMatrix,
    pub source: Digraph,
}

fn symmetric_part(m: RMatrix) -> RMatrix {
    let t = m.transpose();
    (m + t) * 0.5
}

pub fn bibliographic_coupling(g: &Digraph) -> Symmetrization {
    let a = g.adjacency();
    Symmetrization {
        kind: SymKind::CommonInLink,
        matrix: symmetric_part(a * a.transpose()),
        source: g.clone(),
    }
}

pub fn co_citation(g: &Digraph) -> Symmetrization {
    let a = g.adjacency();
    Symmetrization {
        kind: SymKind::CommonOutLink,
        matrix: symmetric_part(a.transpose() * a),
        source: g.clone(),
    }
}

pub fn bibliometric(g: &Digraph) -> Symmetrization {
    let b = bibliographic_coupling(g);
    let c = co_citation(g);
    Symmetrization {
        kind: SymKind::Bibliometric,
        matrix: b.matrix + c.matrix,
        source: g.clone(),
    }
}

/// Full quadratic form `xᵀ S x`, diagonal terms included.
pub fn quadratic_variation(s: &Symmetrization, x: &GraphSignal) -> Result<f64> {
    x.check_len(s.matrix.nrows())?;
    let v = DVector::from_column_slice(x.values());
    Ok(v.dot(&(&s.matrix * &v)))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Symmetrization {
    /// Component label per node (smallest node index of the component),
    /// using off-diagonal entries above [`EDGE_THRESHOLD`].
    pub fn components(&self) -> Vec<usize> {
        let n = self.matrix.nrows();
        let mut uf = UnionFind::new(n);
        for j in 0..n {
            for i in 0..j {
                if self.matrix[(i, j)].abs() > EDGE_THRESHOLD {
                    uf.union(i, j);
                }
            }
        }
        (0..n).map(|i| uf.find(i)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Largest eigenvalue and its eigenvector, signed so the entry sum is
    /// nonnegative. For a connected nonnegative matrix every entry is then
    /// nonnegative up to rounding.
    pub fn perron_vector(&self) -> Result<(f64, DVector<f64>)> {
        if self.matrix.iter().any(|x| *x < 0.0) {
            return Err(Error::Validation("Perron vector needs a nonnegative matrix".into()));
        }
        let eig = sym_eig(&self.matrix)?;
        let mut v = eig.vectors.column(0).into_owned();
        if v.sum() < 0.0 {
            v.neg_mut();
        }
        Ok((eig.values[0], v))
    }
}
