//! Left and right polar decompositions `A = PQ = QF` and the three graph
//! Fourier bases they induce.
//!
//! From the SVD `A = UΣVᵀ`: `P = UΣUᵀ`, `Q = UVᵀ`, `F = VΣVᵀ`. `P` and
//! `F` are the principal square roots of `AAᵀ` and `AᵀA`, so their
//! eigenvectors measure variation across nodes sharing in-links and
//! out-links respectively. `Q` is the orthogonal matrix closest to `A`;
//! its eigenvectors measure variation along the direction of flow.

use num_complex::Complex64;

use crate::basis::{BasisKind, GftBasis};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::linalg::{offdiag_mass, schur_complex, svd, to_complex, EigenOrder, RMatrix, SvdFactors};

#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub p: RMatrix,
    pub q: RMatrix,
    pub f: RMatrix,
    pub svd: SvdFactors,
}

fn scaled_gram(vectors: &RMatrix, values: &[f64]) -> RMatrix {
    let mut scaled = vectors.clone();
    for (j, s) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let m = scaled * vectors.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn polar_decompose(g: &Digraph) -> Result<PolarFactors> {
    let svd = svd(g.adjacency())?;
    let p = scaled_gram(&svd.left_vectors, &svd.singular_values);
    let f = scaled_gram(&svd.right_vectors, &svd.singular_values);
    // Zero singular values leave U and V free on the null spaces, but the
    // full square factors still give an orthogonal Q.
    let q = &svd.left_vectors * svd.right_vectors.transpose();
    Ok(PolarFactors { p, q, f, svd })
}

fn psd_basis(kind: BasisKind, vectors: &RMatrix, values: &[f64]) -> GftBasis {
    let top = values.first().copied().unwrap_or(0.0);
    GftBasis {
        kind,
        vectors: to_complex(vectors),
        frequencies: values.iter().map(|s| top - s).collect(),
        eigenvalues: values.iter().map(|s| Complex64::new(*s, 0.0)).collect(),
    }
}

/// Eigenvectors of `P`, largest eigenvalue (smoothest) first.
pub fn common_inlink_basis(pf: &PolarFactors) -> GftBasis {
    psd_basis(BasisKind::CommonInLink, &pf.svd.left_vectors, &pf.svd.singular_values)
}

/// Eigenvectors of `F`, largest eigenvalue (smoothest) first.
pub fn common_outlink_basis(pf: &PolarFactors) -> GftBasis {
    psd_basis(BasisKind::CommonOutLink, &pf.svd.right_vectors, &pf.svd.singular_values)
}

/// Unitary eigenvectors of `Q` ordered by `‖v − Qv‖₁`.
///
/// `Q` is normal, so its complex Schur form is diagonal and the Schur
/// vectors are eigenvectors. Conjugate pairs are kept as two complex
/// columns.
pub fn inflow_basis(pf: &PolarFactors) -> Result<GftBasis> {
    let q = &pf.q;
    let schur = schur_complex(q, EigenOrder::None)?;
    let off = offdiag_mass(&schur.triangular);
    if off > 1e-8 * q.norm() {
        return Err(Error::numerical("Schur form of Q is not diagonal", off));
    }
    let qc = to_complex(q);
    let moved = &qc * &schur.unitary;
    let freq: Vec<f64> = (0..q.ncols())
        .map(|k| {
            schur
                .unitary
                .column(k)
                .iter()
                .zip(moved.column(k).iter())
                .map(|(v, qv)| (v - qv).norm())
                .sum()
        })
        .collect();

    let mut order: Vec<usize> = (0..freq.len()).collect();
    order.sort_by(|&a, &b| freq[a].total_cmp(&freq[b]).then(a.cmp(&b)));
    let vectors = schur.unitary.select_columns(order.iter());
    Ok(GftBasis {
        kind: BasisKind::InFlow,
        vectors,
        frequencies: order.iter().map(|&k| freq[k]).collect(),
        eigenvalues: order.iter().map(|&k| schur.eigenvalues[k]).collect(),
    })
}

/// How the adjacency spectrum relates to the spectra of `P` and `Q`.
///
/// For normal `A` every eigenvalue factors as `λ_a = |λ_a|·e^{iθ_a}` with
/// `|λ_a|` an eigenvalue of `P` and `e^{iθ_a}` an eigenvalue of `Q`. For
/// non-normal `A` the residuals are diagnostics only.
#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub normal: bool,
    /// ‖AAᵀ − AᵀA‖_max
    pub normality_residual: f64,
    /// Max gap between sorted `{|λ_a|}` and sorted `{λ_p}`.
    pub magnitude_residual: f64,
    /// Max distance between `e^{iθ_a}` and its matched `λ_q`, over nonzero `λ_a`.
    pub phase_residual: f64,
    /// `(index into adjacency_eigenvalues, index into q_eigenvalues)`.
    pub pairing: Vec<(usize, usize)>,
    pub adjacency_eigenvalues: Vec<Complex64>,
    pub q_eigenvalues: Vec<Complex64>,
}

impl CorrespondenceReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.normal && self.magnitude_residual <= tol && self.phase_residual <= tol
    }
}

pub fn eigenvalue_correspondence(g: &Digraph, pf: &PolarFactors) -> Result<CorrespondenceReport> {
    let a = schur_complex(g.adjacency(), EigenOrder::None)?;
    let q = schur_complex(&pf.q, EigenOrder::None)?;

    let mut mags: Vec<f64> = a.eigenvalues.iter().map(|l| l.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let mut sv = pf.svd.singular_values.clone();
    sv.sort_by(f64::total_cmp);
    let magnitude_residual = mags.iter().zip(&sv).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()));

    let zero_tol = 1e-8 * a.spectral_radius().max(1.0);
    let mut used = vec![false; q.eigenvalues.len()];
    let mut pairing = Vec::new();
    let mut phase_residual = 0.0_f64;
    for (ia, la) in a.eigenvalues.iter().enumerate() {
        let r = la.norm();
        if r <= zero_tol {
            continue;
        }
        let phase = la / r;
        let best = q
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(iq, _)| !used[*iq])
            .map(|(iq, lq)| (iq, (lq - phase).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        match best {
            Some((iq, d)) => {
                used[iq] = true;
                pairing.push((ia, iq));
                phase_residual = phase_residual.max(d);
            }
            None => phase_residual = f64::INFINITY,
        }
    }

    Ok(CorrespondenceReport {
        normal: g.is_normal(),
        normality_residual: g.normality_residual(),
        magnitude_residual,
        phase_residual,
        pairing,
        adjacency_eigenvalues: a.eigenvalues,
        q_eigenvalues: q.eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_directed_cycle, gen_directed_path, gen_random};
    use crate::linalg::{max_abs, orthogonality_defect, psd_sqrt, unitarity_defect};

    fn check_factors(a: &RMatrix, pf: &PolarFactors) {
        let scale = a.norm().max(1.0);
        assert!((&pf.p * &pf.q - a).norm() <= 1e-9 * scale);
        assert!((&pf.q * &pf.f - a).norm() <= 1e-9 * scale);
        assert!(orthogonality_defect(&pf.q) <= 1e-10);
    }

    #[test]
    fn cycle_factors() {
        let g = gen_directed_cycle(5).unwrap();
        let pf = polar_decompose(&g).unwrap();
        check_factors(g.adjacency(), &pf);
        let id = RMatrix::identity(5, 5);
        assert!(max_abs(&(&pf.p - &id)) < 1e-14);
        assert!(max_abs(&(&pf.f - &id)) < 1e-14);
        assert!(max_abs(&(&pf.q - g.adjacency())) < 1e-14);
    }

    #[test]
    fn psd_input_factors() {
        let a = RMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let g = Digraph::new(a.clone()).unwrap();
        let pf = polar_decompose(&g).unwrap();
        assert!(max_abs(&(&pf.q - RMatrix::identity(3, 3))) < 1e-12);
        assert!(max_abs(&(&pf.p - &a)) < 1e-12);
        assert!(max_abs(&(&pf.f - &a)) < 1e-12);
        let b = inflow_basis(&pf).unwrap();
        assert!(b.frequencies.iter().all(|f| *f < 1e-10));
    }

    #[test]
    fn p_is_sqrt_of_coupling() {
        let g = gen_random(5, 0.6, 21).unwrap();
        let pf = polar_decompose(&g).unwrap();
        let a = g.adjacency();
        let root = psd_sqrt(&(a * a.transpose())).unwrap();
        assert!(max_abs(&(root - &pf.p)) <= 1e-9);
    }

    #[test]
    fn rank_deficient_still_orthogonal() {
        let g = gen_directed_path(6).unwrap();
        let pf = polar_decompose(&g).unwrap();
        check_factors(g.adjacency(), &pf);
    }

    #[test]
    fn psd_bases_rayleigh() {
        let g = gen_random(8, 0.4, 2).unwrap();
        let pf = polar_decompose(&g).unwrap();
        for (basis, m) in [(common_inlink_basis(&pf), &pf.p), (common_outlink_basis(&pf), &pf.f)] {
            assert!(basis.frequencies.windows(2).all(|w| w[0] <= w[1]));
            assert!(unitarity_defect(&basis.vectors) <= 1e-10);
            for k in 0..8 {
                let c = basis.vectors.column(k).map(|z| z.re);
                let rq = c.dot(&(m * &c));
                assert!((rq - basis.eigenvalues[k].re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cycle_inflow_roots_of_unity() {
        let n = 6;
        let g = gen_directed_cycle(n).unwrap();
        let pf = polar_decompose(&g).unwrap();
        let b = inflow_basis(&pf).unwrap();
        assert!(unitarity_defect(&b.vectors) <= 1e-10);
        assert!(b.frequencies[0] < 1e-12);
        assert!((b.eigenvalues[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let c = 1.0 / (n as f64).sqrt();
        assert!(b.vectors.column(0).iter().all(|z| (z - Complex64::new(c, 0.0)).norm() < 1e-12));
        for l in &b.eigenvalues {
            assert!((l.powu(n as u32) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn inflow_frequency_identity() {
        let g = gen_random(9, 0.5, 13).unwrap();
        let pf = polar_decompose(&g).unwrap();
        let b = inflow_basis(&pf).unwrap();
        assert!(b.frequencies.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..9 {
            assert!((b.eigenvalues[k].norm() - 1.0).abs() <= 1e-10);
            let l1: f64 = b.vectors.column(k).iter().map(|z| z.norm()).sum();
            let expect = (Complex64::new(1.0, 0.0) - b.eigenvalues[k]).norm() * l1;
            assert!((b.frequencies[k] - expect).abs() <= 1e-10);
        }
    }

    #[test]
    fn correspondence_flags() {
        let path = gen_directed_path(4).unwrap();
        let rep = eigenvalue_correspondence(&path, &polar_decompose(&path).unwrap()).unwrap();
        assert!(!rep.normal);

        let cyc = gen_directed_cycle(3).unwrap();
        let pf = polar_decompose(&cyc).unwrap();
        let rep = eigenvalue_correspondence(&cyc, &pf).unwrap();
        assert!(rep.normal);
        assert!(rep.holds(1e-8));
        assert!(pf.svd.singular_values.iter().all(|s| (s - 1.0).abs() < 1e-14));
        assert_eq!(rep.pairing.len(), 3);
    }
}
