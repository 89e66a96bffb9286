use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::GraphSignal;
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Eigenvectors of `P` (left polar factor).
    CommonInLink,
    /// Eigenvectors of `F` (right polar factor).
    CommonOutLink,
    /// Eigenvectors of the orthogonal factor `Q`.
    InFlow,
    /// Frequency-ordered Schur vectors of `A`.
    Schur,
    /// Eigenvectors of a normal `A`.
    Adjacency,
}

impl BasisKind {
    pub fn label(&self) -> &'static str {
        match self {
            BasisKind::CommonInLink => "common_in_link",
            BasisKind::CommonOutLink => "common_out_link",
            BasisKind::InFlow => "in_flow",
            BasisKind::Schur => "schur",
            BasisKind::Adjacency => "adjacency",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Ordered graph Fourier basis; column `k` has frequency `frequencies[k]`
/// and is associated with `eigenvalues[k]`. Columns run from smoothest to
/// most oscillating.
#[derive(Debug, Clone)]
pub struct GftBasis {
    pub kind: BasisKind,
    pub vectors: CMatrix,
    pub frequencies: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
}

impl GftBasis {
    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    pub fn is_real(&self) -> bool {
        self.vectors.iter().all(|z| z.im == 0.0)
    }

    pub fn column(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }

    /// Spectrum `x̂ = Vᴴ x`.
    pub fn forward(&self, x: &GraphSignal) -> Result<Vec<Complex64>> {
        x.check_len(self.vectors.nrows())?;
        Ok(self.forward_slice(x.values()))
    }

    pub(crate) fn forward_slice(&self, x: &[f64]) -> Vec<Complex64> {
        self.vectors
            .column_iter()
            .map(|col| col.iter().zip(x).map(|(v, xi)| v.conj() * xi).sum())
            .collect()
    }

    /// Synthesis `V x̂`.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        if spectrum.len() != self.len() {
            return Err(Error::Dimension(format!(
                "spectrum has {} coefficients, basis has {}",
                spectrum.len(),
                self.len()
            )));
        }
        let s = DVector::from_column_slice(spectrum);
        Ok((&self.vectors * s).iter().copied().collect())
    }
}
