//! Complex Schur decomposition `A = U T Uᴴ` with eigenvalue reordering.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR sweeps (Wilkinson shift, exceptional shift every tenth
//! iteration on a stalled window). The deflation test and the diagonal
//! swap follow the LAPACK `zlahqr` / `ztrexc` recipes. Written in-crate
//! because the shifted QR has to survive cyclic permutation matrices, on
//! which a plain Wilkinson shift makes no progress.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_square_finite, dominant_index, to_complex, CMatrix, RMatrix};
use crate::error::{Error, Result};

/// Ordering applied to the diagonal of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenOrder {
    /// Ascending `|ρ − λ|` where `ρ` is the spectral radius.
    #[default]
    ByFrequency,
    /// Descending `|λ|`.
    ByModulusDesc,
    /// Whatever order the QR iteration produced.
    None,
}

#[derive(Debug, Clone)]
pub struct ComplexSchurFactors {
    pub unitary: CMatrix,
    pub triangular: CMatrix,
    /// Diagonal of `triangular`.
    pub eigenvalues: Vec<Complex64>,
}

impl ComplexSchurFactors {
    pub fn reconstruct(&self) -> CMatrix {
        &self.unitary * &self.triangular * self.unitary.adjoint()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, l| acc.max(l.norm()))
    }
}

/// Eigenvalues closer than this are not swapped during reordering.
const SWAP_SKIP: f64 = 1e-12;

pub fn schur_complex(a: &RMatrix, order: EigenOrder) -> Result<ComplexSchurFactors> {
    check_square_finite(a, |x| x.is_finite())?;
    schur_complex_of(&to_complex(a), order)
}

pub fn schur_complex_of(a: &CMatrix, order: EigenOrder) -> Result<ComplexSchurFactors> {
    let n = check_square_finite(a, |x| x.re.is_finite() && x.im.is_finite())?;
    let scale = a.norm();

    let mut t = a.clone();
    let mut u = CMatrix::identity(n, n);
    reduce_to_hessenberg(&mut t, &mut u);
    hessenberg_qr(&mut t, &mut u)?;

    match order {
        EigenOrder::None => {}
        EigenOrder::ByFrequency => {
            let rho = (0..n).fold(0.0_f64, |acc, i| acc.max(t[(i, i)].norm()));
            let rho = Complex64::new(rho, 0.0);
            reorder(&mut t, &mut u, |l| (rho - l).norm());
        }
        EigenOrder::ByModulusDesc => reorder(&mut t, &mut u, |l| -l.norm()),
    }

    fix_phases(&mut t, &mut u);

    let residual = (&u * &t * u.adjoint() - a).norm();
    if residual > 1e-9 * scale.max(1.0) {
        return Err(Error::numerical("Schur reconstruction check failed", residual));
    }
    let eigenvalues = (0..n).map(|i| t[(i, i)]).collect();
    Ok(ComplexSchurFactors {
        unitary: u,
        triangular: t,
        eigenvalues,
    })
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Plane rotation `[c s; -s̄ c]` with `c` real that maps `(f, g)` to
/// `(r, 0)`.
#[derive(Debug, Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    fn new(f: Complex64, g: Complex64) -> (Self, Complex64) {
        let gn = g.norm();
        if gn == 0.0 {
            return (
                Givens {
                    c: 1.0,
                    s: Complex64::new(0.0, 0.0),
                },
                f,
            );
        }
        let fnorm = f.norm();
        if fnorm == 0.0 {
            return (
                Givens {
                    c: 0.0,
                    s: g.conj() / gn,
                },
                Complex64::new(gn, 0.0),
            );
        }
        let norm = fnorm.hypot(gn);
        let phase = f / fnorm;
        (
            Givens {
                c: fnorm / norm,
                s: phase * g.conj() / norm,
            },
            phase * norm,
        )
    }

    /// Rows `p`, `q` of `m`, columns in `cols`: `G · m`.
    fn rotate_rows(&self, m: &mut CMatrix, p: usize, q: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = m[(p, j)];
            let y = m[(q, j)];
            m[(p, j)] = x * self.c + self.s * y;
            m[(q, j)] = y * self.c - self.s.conj() * x;
        }
    }

    /// Columns `p`, `q` of `m`, rows in `rows`: `m · Gᴴ`.
    fn rotate_cols(&self, m: &mut CMatrix, p: usize, q: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, p)];
            let y = m[(i, q)];
            m[(i, p)] = x * self.c + self.s.conj() * y;
            m[(i, q)] = y * self.c - self.s * x;
        }
    }
}

fn reduce_to_hessenberg(h: &mut CMatrix, z: &mut CMatrix) {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();

        // H <- (I - 2vvᴴ/|v|²) H
        for j in k + 1..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            let f = s * (2.0 / vnorm2);
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= f * vi;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = zero;
        }
        // H <- H (I - 2vvᴴ/|v|²), same for Z
        for m in [&mut *h, &mut *z] {
            for r in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(i, vi)| m[(r, k + 1 + i)] * vi).sum();
                let f = s * (2.0 / vnorm2);
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] -= f * vi.conj();
                }
            }
        }
    }
}

/// Eigenvalue of the trailing 2×2 block `[a b; c d]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

fn hessenberg_qr(h: &mut CMatrix, z: &mut CMatrix) -> Result<()> {
    let n = h.nrows();
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let itmax = 30 * n.max(10);
    let zero = Complex64::new(0.0, 0.0);

    let mut i = n as isize - 1;
    while i >= 0 {
        let iu = i as usize;
        let mut deflated_at = None;
        for its in 0..=itmax {
            // Scan upward for a negligible subdiagonal entry.
            let mut k = iu;
            while k > 0 {
                let sub = h[(k, k - 1)];
                if cabs1(sub) <= smlnum {
                    break;
                }
                let mut tst = cabs1(h[(k - 1, k - 1)]) + cabs1(h[(k, k)]);
                if tst == 0.0 {
                    if k >= 2 {
                        tst += cabs1(h[(k - 1, k - 2)]);
                    }
                    if k < iu {
                        tst += cabs1(h[(k + 1, k)]);
                    }
                }
                if cabs1(sub) <= ulp * tst {
                    let ab = cabs1(sub).max(cabs1(h[(k - 1, k)]));
                    let ba = cabs1(sub).min(cabs1(h[(k - 1, k)]));
                    let diff = h[(k - 1, k - 1)] - h[(k, k)];
                    let aa = cabs1(h[(k, k)]).max(cabs1(diff));
                    let bb = cabs1(h[(k, k)]).min(cabs1(diff));
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            let l = k;
            if l > 0 {
                h[(l, l - 1)] = zero;
            }
            if l >= iu {
                deflated_at = Some(l);
                break;
            }

            let shift = if its > 0 && its % 10 == 0 {
                h[(iu, iu)] + 0.75 * cabs1(h[(iu, iu - 1)])
            } else {
                wilkinson_shift(
                    h[(iu - 1, iu - 1)],
                    h[(iu - 1, iu)],
                    h[(iu, iu - 1)],
                    h[(iu, iu)],
                )
            };

            // Implicit single-shift sweep over the active window l..=iu.
            let mut x = h[(l, l)] - shift;
            let mut y = h[(l + 1, l)];
            for k in l..iu {
                if k > l {
                    x = h[(k, k - 1)];
                    y = h[(k + 1, k - 1)];
                }
                let (g, r) = Givens::new(x, y);
                if k > l {
                    h[(k, k - 1)] = r;
                    h[(k + 1, k - 1)] = zero;
                }
                g.rotate_rows(h, k, k + 1, k..n);
                g.rotate_cols(h, k, k + 1, 0..(k + 3).min(iu + 1));
                g.rotate_cols(z, k, k + 1, 0..n);
            }
        }
        match deflated_at {
            Some(l) => i = l as isize - 1,
            None => {
                let sub = h[(iu, iu.saturating_sub(1))].norm();
                return Err(Error::numerical(
                    format!("QR iteration did not converge for eigenvalue {iu}"),
                    sub,
                ));
            }
        }
    }
    Ok(())
}

/// Swaps the adjacent diagonal entries `k`, `k+1` of the triangular `t`.
fn swap_adjacent(t: &mut CMatrix, u: &mut CMatrix, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let (g, _) = Givens::new(t[(k, k + 1)], t22 - t11);
    if k + 2 < n {
        g.rotate_rows(t, k, k + 1, k + 2..n);
    }
    g.rotate_cols(t, k, k + 1, 0..k);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    g.rotate_cols(u, k, k + 1, 0..n);
}

/// Selection sort of the diagonal by ascending `key`, realized with
/// adjacent unitary swaps so `t` stays triangular.
fn reorder(t: &mut CMatrix, u: &mut CMatrix, key: impl Fn(Complex64) -> f64) {
    let n = t.nrows();
    for p in 0..n {
        let mut best = p;
        let mut best_key = key(t[(p, p)]);
        for m in p + 1..n {
            let km = key(t[(m, m)]);
            if km < best_key {
                best = m;
                best_key = km;
            }
        }
        for k in (p..best).rev() {
            if (t[(k, k)] - t[(k + 1, k + 1)]).norm() <= SWAP_SKIP {
                continue;
            }
            swap_adjacent(t, u, k);
        }
    }
}

/// Rotates each column of `u` so its dominant entry is real positive and
/// compensates in `t` (`T <- Dᴴ T D`).
fn fix_phases(t: &mut CMatrix, u: &mut CMatrix) {
    let n = u.ncols();
    let mut d = Vec::with_capacity(n);
    for j in 0..n {
        let col = u.column(j);
        let k = dominant_index(col.iter().map(|x| x.norm()));
        let pivot = col[k];
        let phase = if pivot.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            pivot.conj() / pivot.norm()
        };
        d.push(phase);
        for x in u.column_mut(j).iter_mut() {
            *x *= phase;
        }
        // the dominant entry is now real; drop rounding in its imaginary part
        let fixed = u[(k, j)];
        u[(k, j)] = Complex64::new(fixed.norm(), 0.0);
    }
    for j in 0..n {
        for i in 0..=j {
            t[(i, j)] = d[i].conj() * t[(i, j)] * d[j];
        }
    }
}

/// Strictly-lower-triangular Frobenius mass.
pub fn lower_mass(t: &DMatrix<Complex64>) -> f64 {
    let n = t.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in j + 1..n {
            s += t[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Strictly-off-diagonal Frobenius mass.
pub fn offdiag_mass(t: &DMatrix<Complex64>) -> f64 {
    let n = t.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += t[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}
