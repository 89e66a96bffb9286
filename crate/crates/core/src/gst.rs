//! Graph Schur transform.
//!
//! The complex Schur form `A = U T Uᴴ` exists for every square matrix,
//! defective or not. Its unitary factor, with the diagonal of `T` sorted
//! from low to high frequency, is a complete orthonormal Fourier basis;
//! in that basis the graph shift acts as the upper-triangular `T`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{BasisKind, GftBasis};
use crate::error::{Error, Result};
use crate::graph::{Digraph, GraphSignal};
use crate::linalg::{schur_complex, to_complex, CMatrix, ComplexSchurFactors, EigenOrder};

/// Spectral radius at or below `SPECTRAL_RADIUS_FLOOR·max(1, ‖A‖_F)` is
/// treated as zero (nilpotent adjacency).
pub const SPECTRAL_RADIUS_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GstTransform {
    pub factors: ComplexSchurFactors,
    pub basis: GftBasis,
    pub source: Digraph,
    /// `‖u − Au/ρ‖₁` per basis vector (`‖u − Au‖₁` when `ρ = 0`).
    pub tv_scores: Vec<f64>,
    pub spectral_radius: f64,
    /// Set when `ρ = 0` and the total variation is left unnormalized.
    pub unnormalized_tv: bool,
    pub order: EigenOrder,
}

/// Output of [`GstTransform::inverse`].
#[derive(Debug, Clone)]
pub struct InverseResult {
    pub signal: GraphSignal,
    /// `‖Im(U x̂)‖_∞`, zero for spectra of real signals up to rounding.
    pub imag_residual: f64,
}

pub fn gst_build(g: &Digraph) -> Result<GstTransform> {
    gst_build_with_order(g, EigenOrder::ByFrequency)
}

pub fn gst_build_with_order(g: &Digraph, order: EigenOrder) -> Result<GstTransform> {
    let factors = schur_complex(g.adjacency(), order)?;
    let rho = factors.spectral_radius();
    let unnormalized_tv = rho <= SPECTRAL_RADIUS_FLOOR * g.adjacency().norm().max(1.0);
    let gain = if unnormalized_tv { 1.0 } else { 1.0 / rho };

    let a = to_complex(g.adjacency());
    let shifted = &a * &factors.unitary;
    let tv_scores = (0..g.n())
        .map(|k| {
            factors
                .unitary
                .column(k)
                .iter()
                .zip(shifted.column(k).iter())
                .map(|(u, au)| (u - au * gain).norm())
                .sum()
        })
        .collect();

    let rho_c = Complex64::new(rho, 0.0);
    let mut frequencies: Vec<f64> = factors
        .eigenvalues
        .iter()
        .map(|l| match order {
            EigenOrder::ByModulusDesc => rho - l.norm(),
            _ => (rho_c - l).norm(),
        })
        .collect();
    if order != EigenOrder::None {
        // skipped swaps of near-equal eigenvalues can leave ~1e-12 inversions
        for k in 1..frequencies.len() {
            frequencies[k] = frequencies[k].max(frequencies[k - 1]);
        }
    }

    let basis = GftBasis {
        kind: BasisKind::Schur,
        vectors: factors.unitary.clone(),
        frequencies,
        eigenvalues: factors.eigenvalues.clone(),
    };
    Ok(GstTransform {
        factors,
        basis,
        source: g.clone(),
        tv_scores,
        spectral_radius: rho,
        unnormalized_tv,
        order,
    })
}

impl GstTransform {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// `x̂ = Uᴴ x`
    pub fn forward(&self, x: &GraphSignal) -> Result<Vec<Complex64>> {
        self.basis.forward(x)
    }

    /// `x = U x̂`, returning the real part and the size of the imaginary
    /// part that was dropped.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Result<InverseResult> {
        let full = self.basis.inverse(spectrum)?;
        let imag_residual = full.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
        let signal = GraphSignal::new(full.iter().map(|z| z.re).collect())?;
        Ok(InverseResult {
            signal,
            imag_residual,
        })
    }

    /// The graph shift expressed in the Schur basis, `Uᴴ A U`.
    pub fn shift_in_gst_domain(&self) -> CMatrix {
        let u = &self.factors.unitary;
        u.adjoint() * to_complex(self.source.adjacency()) * u
    }

    /// Applies the shift in the spectral domain: `(A x)^ = T x̂`.
    pub fn shift_spectrum(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        if spectrum.len() != self.n() {
            return Err(Error::Dimension(format!(
                "spectrum has {} coefficients, graph has {} nodes",
                spectrum.len(),
                self.n()
            )));
        }
        let s = DVector::from_column_slice(spectrum);
        Ok((&self.factors.triangular * s).iter().copied().collect())
    }
}
