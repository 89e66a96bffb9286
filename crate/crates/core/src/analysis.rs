//! Diffusion on a digraph and how its spectrum localizes in each basis.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{BasisKind, GftBasis};
use crate::error::{Error, Result};
use crate::graph::{gen_mblock_cyclic, random_signal, Digraph, GraphSignal, MBlockSpec, SignalDistribution};
use crate::gst::gst_build;
use crate::io::write_text;
use crate::linalg::{schur_complex, EigenOrder, RMatrix};
use crate::polar::{common_inlink_basis, inflow_basis, polar_decompose, PolarFactors};

/// Diffusion steps recorded by default.
pub const DEFAULT_STEPS: [usize; 5] = [0, 1, 5, 20, 100];

/// Relative bound on the off-pattern mass in [`mblock_structure_check`].
pub const STRUCTURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `y = A x`
    Raw,
    /// `y = D_in⁻¹ A x`: each node takes the weighted average of its
    /// in-neighbours.
    RowNormalized,
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Raw => "raw",
            OperatorKind::RowNormalized => "row_normalized",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiffusionTrace {
    pub graph: Digraph,
    pub operator_kind: OperatorKind,
    pub steps: Vec<usize>,
    /// `snapshots[i] = Aᵏ x₀` with `k = steps[i]`.
    pub snapshots: Vec<GraphSignal>,
}

impl DiffusionTrace {
    /// `step,node_id,value` in long format.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,node_id,value\n");
        for (k, snap) in self.steps.iter().zip(&self.snapshots) {
            for (i, v) in snap.values().iter().enumerate() {
                let _ = writeln!(out, "{k},{i},{v:e}");
            }
        }
        out
    }
}

/// Runs `y_{k+1} = A y_k` and records the requested steps. Powers of `A`
/// are never formed.
pub fn diffuse(g: &Digraph, x0: &GraphSignal, ks: &[usize], kind: OperatorKind) -> Result<DiffusionTrace> {
    x0.check_len(g.n())?;
    match ks.first() {
        Some(0) => {}
        _ => return Err(Error::Validation("step list must start at 0".into())),
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation(format!("step list must be strictly ascending: {ks:?}")));
    }
    let op = match kind {
        OperatorKind::Raw => g.clone(),
        OperatorKind::RowNormalized => g.row_normalized()?,
    };
    let a = op.adjacency();
    let mut y = DVector::from_column_slice(x0.values());
    let mut snapshots = Vec::with_capacity(ks.len());
    let mut k = 0;
    for &target in ks {
        while k < target {
            y = a * &y;
            k += 1;
        }
        snapshots.push(GraphSignal::new(y.iter().copied().collect())?);
    }
    Ok(DiffusionTrace {
        graph: g.clone(),
        operator_kind: kind,
        steps: ks.to_vec(),
        snapshots,
    })
}

fn l1_deviation(g: &RMatrix, v: &[Complex64], gain: f64) -> Result<f64> {
    if v.len() != g.nrows() {
        return Err(Error::Dimension(format!(
            "vector has {} entries, graph has {} nodes",
            v.len(),
            g.nrows()
        )));
    }
    let mut total = 0.0;
    for i in 0..v.len() {
        let av: Complex64 = g.row(i).iter().zip(v).map(|(a, x)| x * *a).sum();
        total += (v[i] - av * gain).norm();
    }
    Ok(total)
}

/// Adjacency total variation `‖v − Av/ρ‖₁` with `ρ` the spectral radius.
pub fn adjacency_tv(g: &Digraph, v: &[Complex64]) -> Result<f64> {
    let rho = schur_complex(g.adjacency(), EigenOrder::None)?.spectral_radius();
    adjacency_tv_with_radius(g, v, rho)
}

pub fn adjacency_tv_with_radius(g: &Digraph, v: &[Complex64], rho: f64) -> Result<f64> {
    if rho <= crate::gst::SPECTRAL_RADIUS_FLOOR * g.adjacency().norm().max(1.0) {
        return Err(Error::Validation(
            "spectral radius is zero; use adjacency_tv_unnormalized".into(),
        ));
    }
    l1_deviation(g.adjacency(), v, 1.0 / rho)
}

/// `‖v − Av‖₁`
pub fn adjacency_tv_unnormalized(g: &Digraph, v: &[Complex64]) -> Result<f64> {
    l1_deviation(g.adjacency(), v, 1.0)
}

/// `Vᴴ y_k` for every snapshot.
pub fn spectrum_of(trace: &DiffusionTrace, basis: &GftBasis) -> Result<Vec<Vec<Complex64>>> {
    trace.snapshots.iter().map(|s| basis.forward(s)).collect()
}

/// Frequencies closer than this (relative) share a rank.
pub const FREQUENCY_TIE: f64 = 1e-9;

/// Rank of each coefficient in a nondecreasing frequency list: the index of
/// the first coefficient of its run of tied frequencies. Conjugate
/// eigenvector pairs share a frequency and therefore a rank.
pub fn frequency_ranks(frequencies: &[f64]) -> Vec<usize> {
    let mut ranks = Vec::with_capacity(frequencies.len());
    for (k, f) in frequencies.iter().enumerate() {
        let tied = k > 0 && (f - frequencies[k - 1]).abs() <= FREQUENCY_TIE * f.abs().max(1.0);
        ranks.push(if tied { ranks[k - 1] } else { k });
    }
    ranks
}

/// Energy fraction per rank; entries off a run start are zero.
pub fn rank_energy(spectrum: &[Complex64], ranks: &[usize]) -> Vec<f64> {
    let total: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
    let mut out = vec![0.0; spectrum.len()];
    if total == 0.0 {
        return out;
    }
    for (z, &r) in spectrum.iter().zip(ranks) {
        out[r] += z.norm_sqr() / total;
    }
    out
}

/// Concentration measures of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumStats {
    /// `−Σ pᵢ ln pᵢ`, `pᵢ = |x̂ᵢ|²/‖x̂‖²`; `ln n` for the zero spectrum.
    pub entropy: f64,
    /// Energy fraction in the `⌈n/10⌉` largest coefficients.
    pub top_decile: f64,
    /// Frequency rank holding the most energy (see [`frequency_ranks`]).
    pub peak_rank: usize,
    pub zero_energy: bool,
}

/// `ranks` comes from [`frequency_ranks`]; pass `0..n` to rank every
/// coefficient on its own.
pub fn spectrum_stats(spectrum: &[Complex64], ranks: &[usize]) -> SpectrumStats {
    let n = spectrum.len();
    let energy: Vec<f64> = spectrum.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = energy.iter().sum();
    if total == 0.0 || n == 0 {
        return SpectrumStats {
            entropy: (n.max(1) as f64).ln(),
            top_decile: 0.0,
            peak_rank: 0,
            zero_energy: true,
        };
    }
    let p: Vec<f64> = energy.iter().map(|e| e / total).collect();
    let entropy = -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>();
    let mut sorted = p.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let top = n.div_ceil(10);
    let top_decile = sorted[..top].iter().sum::<f64>().min(1.0);
    let peak_rank = crate::linalg::dominant_index(rank_energy(spectrum, ranks).into_iter());
    SpectrumStats {
        entropy: entropy.max(0.0),
        top_decile,
        peak_rank,
        zero_energy: false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationEntry {
    pub basis: BasisKind,
    pub step: usize,
    pub stats: SpectrumStats,
    pub peak_frequency: f64,
    /// See [`rank_energy`].
    pub rank_energy: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocalizationReport {
    pub entries: Vec<LocalizationEntry>,
    pub basis_size: usize,
    pub seed: Option<u64>,
}

impl LocalizationReport {
    pub fn get(&self, basis: BasisKind, step: usize) -> Option<&LocalizationEntry> {
        self.entries.iter().find(|e| e.basis == basis && e.step == step)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("basis,step,entropy,top_decile,peak_rank\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                e.basis, e.step, e.stats.entropy, e.stats.top_decile, e.stats.peak_rank
            );
        }
        out
    }
}

/// Localization of each spectrum in `spectra` (one per step) against a
/// basis with the given frequency ordering.
pub fn localization(
    basis: BasisKind,
    steps: &[usize],
    spectra: &[Vec<Complex64>],
    frequencies: &[f64],
) -> Result<LocalizationReport> {
    if steps.len() != spectra.len() {
        return Err(Error::Dimension(format!(
            "{} steps but {} spectra",
            steps.len(),
            spectra.len()
        )));
    }
    let ranks = frequency_ranks(frequencies);
    let mut entries = Vec::with_capacity(spectra.len());
    for (&step, s) in steps.iter().zip(spectra) {
        if s.len() != frequencies.len() {
            return Err(Error::Dimension(format!(
                "spectrum has {} coefficients, basis has {}",
                s.len(),
                frequencies.len()
            )));
        }
        let stats = spectrum_stats(s, &ranks);
        entries.push(LocalizationEntry {
            basis,
            step,
            stats,
            peak_frequency: frequencies.get(stats.peak_rank).copied().unwrap_or(0.0),
            rank_energy: rank_energy(s, &ranks),
        });
    }
    Ok(LocalizationReport {
        entries,
        basis_size: frequencies.len(),
        seed: None,
    })
}

/// Off-pattern mass of the polar factors of an M-block cyclic graph,
/// each relative to the factor's Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    /// Mass of `Q` outside the block-cyclic support.
    pub q_residual: f64,
    /// Mass of `P` outside the diagonal blocks.
    pub p_residual: f64,
    /// Mass of `F` outside the diagonal blocks.
    pub f_residual: f64,
    pub tolerance: f64,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.q_residual <= self.tolerance
            && self.p_residual <= self.tolerance
            && self.f_residual <= self.tolerance
    }

    pub fn to_csv(&self) -> String {
        format!(
            "factor,residual\nQ,{:e}\nP,{:e}\nF,{:e}\n",
            self.q_residual, self.p_residual, self.f_residual
        )
    }
}

fn off_support_mass(m: &RMatrix, allowed: impl Fn(usize, usize) -> bool) -> f64 {
    let mut off = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !allowed(i, j) {
                off += m[(i, j)] * m[(i, j)];
            }
        }
    }
    let total = m.norm();
    if total == 0.0 {
        0.0
    } else {
        off.sqrt() / total
    }
}

pub fn mblock_structure_check(g: &Digraph, pf: &PolarFactors, spec: &MBlockSpec) -> Result<StructureReport> {
    spec.validate()?;
    if g.n() != spec.n() {
        return Err(Error::Validation(format!(
            "graph has {} nodes but a balanced {}-block layout with {} per block needs {}",
            g.n(),
            spec.blocks,
            spec.nodes_per_block,
            spec.n()
        )));
    }
    let b = |i: usize| spec.block_of(i);
    let cyclic = |i: usize, j: usize| b(i) == (b(j) + 1) % spec.blocks;
    let diagonal = |i: usize, j: usize| b(i) == b(j);
    Ok(StructureReport {
        q_residual: off_support_mass(&pf.q, cyclic),
        p_residual: off_support_mass(&pf.p, diagonal),
        f_residual: off_support_mass(&pf.f, diagonal),
        tolerance: STRUCTURE_TOL,
    })
}

/// Everything produced by one seeded M-block cyclic diffusion run.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub spec: MBlockSpec,
    pub seed: u64,
    pub trace: DiffusionTrace,
    pub localization: LocalizationReport,
    pub structure: StructureReport,
}

impl ExperimentReport {
    /// Writes `localization.csv`, `structure.csv` and `trace.csv`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        write_text(dir.join("localization.csv"), &self.localization.to_csv())?;
        write_text(dir.join("structure.csv"), &self.structure.to_csv())?;
        write_text(dir.join("trace.csv"), &self.trace.to_csv())
    }
}

/// The bases the experiment compares, in report order.
pub const EXPERIMENT_BASES: [BasisKind; 3] = [BasisKind::Schur, BasisKind::CommonInLink, BasisKind::InFlow];

/// Generates the graph, builds the polar and Schur bases of the diffusion
/// operator, diffuses an iid standard normal signal and measures the
/// localization of every snapshot in every basis.
pub fn run_mbcg_experiment(spec: &MBlockSpec, seed: u64, ks: &[usize]) -> Result<ExperimentReport> {
    let raw = gen_mblock_cyclic(&MBlockSpec {
        normalize: false,
        ..*spec
    })?;
    let kind = if spec.normalize {
        OperatorKind::RowNormalized
    } else {
        OperatorKind::Raw
    };
    let op = match kind {
        OperatorKind::Raw => raw.clone(),
        OperatorKind::RowNormalized => raw.row_normalized()?,
    };

    let pf = polar_decompose(&op)?;
    let structure = mblock_structure_check(&op, &pf, spec)?;
    let gst = gst_build(&op)?;
    let inlink = common_inlink_basis(&pf);
    let inflow = inflow_basis(&pf)?;

    let x0 = random_signal(op.n(), seed, SignalDistribution::StandardNormal);
    let trace = diffuse(&raw, &x0, ks, kind)?;

    let mut report = LocalizationReport {
        entries: Vec::new(),
        basis_size: op.n(),
        seed: Some(seed),
    };
    for basis in [&gst.basis, &inlink, &inflow] {
        let spectra = spectrum_of(&trace, basis)?;
        let part = localization(basis.kind, &trace.steps, &spectra, &basis.frequencies)?;
        report.entries.extend(part.entries);
    }

    Ok(ExperimentReport {
        spec: *spec,
        seed,
        trace,
        localization: report,
        structure,
    })
}

/// Seed-averaged localization summary used for the pass/fail checks.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationSummary {
    pub first_step: usize,
    pub last_step: usize,
    /// `(basis, mean entropy at first step, mean entropy at last step)`.
    pub entropy: Vec<(BasisKind, f64, f64)>,
    /// In-flow peak rank at the last step, one per run.
    pub inflow_peak_ranks: Vec<usize>,
    /// Peak of the run-averaged in-flow rank energy at the last step.
    pub inflow_mean_peak_rank: usize,
    pub n: usize,
}

impl LocalizationSummary {
    pub fn from_reports(reports: &[ExperimentReport]) -> Result<Self> {
        let first = reports
            .first()
            .ok_or_else(|| Error::Validation("no experiment runs to summarize".into()))?;
        let first_step = first.trace.steps[0];
        let last_step = *first.trace.steps.last().unwrap_or(&0);
        let lookup = |r: &ExperimentReport, b: BasisKind, k: usize| -> Result<LocalizationEntry> {
            r.localization
                .get(b, k)
                .cloned()
                .ok_or_else(|| Error::Validation(format!("missing {b} entry for step {k}")))
        };
        let m = reports.len() as f64;
        let mut entropy = Vec::new();
        for b in EXPERIMENT_BASES {
            let mut h0 = 0.0;
            let mut h1 = 0.0;
            for r in reports {
                h0 += lookup(r, b, first_step)?.stats.entropy;
                h1 += lookup(r, b, last_step)?.stats.entropy;
            }
            entropy.push((b, h0 / m, h1 / m));
        }
        let inflow_peak_ranks = reports
            .iter()
            .map(|r| lookup(r, BasisKind::InFlow, last_step).map(|e| e.stats.peak_rank))
            .collect::<Result<_>>()?;
        let mut mean_energy = vec![0.0; first.localization.basis_size];
        for r in reports {
            let e = lookup(r, BasisKind::InFlow, last_step)?;
            for (acc, x) in mean_energy.iter_mut().zip(&e.rank_energy) {
                *acc += x / m;
            }
        }
        Ok(LocalizationSummary {
            first_step,
            last_step,
            entropy,
            inflow_peak_ranks,
            inflow_mean_peak_rank: crate::linalg::dominant_index(mean_energy.into_iter()),
            n: first.localization.basis_size,
        })
    }

    /// Relative entropy drop `(H₀ − H_last)/H₀` for `basis`.
    pub fn relative_drop(&self, basis: BasisKind) -> f64 {
        self.entropy
            .iter()
            .find(|(b, _, _)| *b == basis)
            .map(|(_, h0, h1)| if *h0 > 0.0 { (h0 - h1) / h0 } else { 0.0 })
            .unwrap_or(0.0)
    }

    /// Absolute entropy drop `H₀ − H_last` for `basis`.
    pub fn absolute_drop(&self, basis: BasisKind) -> f64 {
        self.entropy
            .iter()
            .find(|(b, _, _)| *b == basis)
            .map(|(_, h0, h1)| h0 - h1)
            .unwrap_or(0.0)
    }

    /// Whether rank `r` lies in the middle 80% of `0..n`.
    pub fn is_mid_rank(&self, r: usize) -> bool {
        let lo = self.n / 10;
        let hi = self.n - self.n / 10;
        (lo..hi).contains(&r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_directed_cycle, gen_directed_path};

    #[test]
    fn diffusion_cases() {
        let g = gen_directed_cycle(6).unwrap();
        let x = random_signal(6, 2, SignalDistribution::StandardNormal);
        let t = diffuse(&g, &x, &[0, 3, 6], OperatorKind::Raw).unwrap();
        assert_eq!(t.snapshots[0], x);
        assert_eq!(t.snapshots[2], x);
        // one step moves node i's value to node i+1
        let t1 = diffuse(&g, &x, &[0, 1], OperatorKind::Raw).unwrap();
        assert_eq!(t1.snapshots[1].values()[1], x.values()[0]);
    }

    #[test]
    fn row_normalized_keeps_constants() {
        let spec = MBlockSpec {
            normalize: false,
            ..MBlockSpec::default()
        };
        let g = gen_mblock_cyclic(&spec).unwrap();
        let x = GraphSignal::new(vec![2.5; 100]).unwrap();
        let t = diffuse(&g, &x, &DEFAULT_STEPS, OperatorKind::RowNormalized).unwrap();
        for s in &t.snapshots {
            assert!(s.values().iter().all(|v| (v - 2.5).abs() < 1e-12));
        }
    }

    #[test]
    fn diffusion_errors() {
        let g = gen_directed_path(3).unwrap();
        let x = GraphSignal::zeros(3);
        let err = diffuse(&g, &x, &[0, 1], OperatorKind::RowNormalized).unwrap_err();
        assert!(err.to_string().contains("node 0"));
        assert!(diffuse(&g, &x, &[1, 2], OperatorKind::Raw).is_err());
        assert!(diffuse(&g, &x, &[0, 2, 2], OperatorKind::Raw).is_err());
        assert!(diffuse(&g, &GraphSignal::zeros(2), &[0], OperatorKind::Raw).is_err());
    }

    #[test]
    fn tv_cases() {
        // Perron vector of the cycle: constant, A v = v
        let g = gen_directed_cycle(5).unwrap();
        let v = vec![Complex64::new(0.3, 0.0); 5];
        assert!(adjacency_tv(&g, &v).unwrap() < 1e-12);
        assert_eq!(adjacency_tv(&g, &[Complex64::new(0.0, 0.0); 5]).unwrap(), 0.0);

        let m = gen_mblock_cyclic(&MBlockSpec::default()).unwrap();
        assert!(adjacency_tv(&m, &vec![Complex64::new(1.0, 0.0); 100]).unwrap() < 1e-10);

        let path = gen_directed_path(4).unwrap();
        assert!(adjacency_tv(&path, &v[..4]).is_err());
        let e0 = [1.0, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0));
        assert_eq!(adjacency_tv_unnormalized(&path, &e0).unwrap(), 2.0);
    }

    #[test]
    fn stats_cases() {
        let mut one_hot = vec![Complex64::new(0.0, 0.0); 20];
        one_hot[7] = Complex64::new(0.0, -3.0);
        let s = spectrum_stats(&one_hot, &(0..20).collect::<Vec<_>>());
        assert_eq!(s.entropy, 0.0);
        assert_eq!(s.top_decile, 1.0);
        assert_eq!(s.peak_rank, 7);

        let flat = vec![Complex64::new(1.0, 0.0); 20];
        let s = spectrum_stats(&flat, &(0..20).collect::<Vec<_>>());
        assert!((s.entropy - 20f64.ln()).abs() < 1e-12);
        assert!((s.top_decile - 0.1).abs() < 1e-12);

        let z = spectrum_stats(&[Complex64::new(0.0, 0.0); 8], &[0; 8]);
        assert!(z.zero_energy);
        assert!((z.entropy - 8f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tied_frequencies_share_rank() {
        let ranks = frequency_ranks(&[0.0, 0.5, 0.5 + 1e-13, 0.9, 1.2, 1.2]);
        assert_eq!(ranks, vec![0, 1, 1, 3, 4, 4]);
        // a conjugate pair outweighs a single larger coefficient once summed
        let c = |x: f64| Complex64::new(x, 0.0);
        let spec = [c(0.0), c(0.6), c(0.6), c(0.8), c(0.0), c(0.0)];
        let st = spectrum_stats(&spec, &ranks);
        assert_eq!(st.peak_rank, 1);
        let e = rank_energy(&spec, &ranks);
        assert!((e[1] - 0.72 / 1.36).abs() < 1e-12 && e[2] == 0.0);
    }

    #[test]
    fn basis_column_gives_one_hot() {
        let g = gen_directed_cycle(5).unwrap();
        let pf = polar_decompose(&g).unwrap();
        let b = inflow_basis(&pf).unwrap();
        // real signal: the real part of a complex column spreads over its conjugate pair
        let x = GraphSignal::new(b.vectors.column(0).iter().map(|z| z.re).collect()).unwrap();
        let t = diffuse(&g, &x, &[0], OperatorKind::Raw).unwrap();
        let s = spectrum_of(&t, &b).unwrap();
        let st = spectrum_stats(&s[0], &frequency_ranks(&b.frequencies));
        assert!(st.entropy < 1e-12 && st.peak_rank == 0);
    }

    #[test]
    fn structure_small_cycle() {
        let spec = MBlockSpec {
            blocks: 2,
            nodes_per_block: 1,
            weight_seed: 0,
            normalize: false,
        };
        let g = gen_mblock_cyclic(&spec).unwrap();
        let pf = polar_decompose(&g).unwrap();
        let r = mblock_structure_check(&g, &pf, &spec).unwrap();
        assert!(r.passes());
        assert!(r.q_residual < 1e-14);

        let bad = MBlockSpec {
            nodes_per_block: 3,
            ..spec
        };
        assert!(mblock_structure_check(&g, &pf, &bad).is_err());
    }

    #[test]
    fn experiment_step_zero_only() {
        let spec = MBlockSpec {
            blocks: 3,
            nodes_per_block: 5,
            weight_seed: 1,
            normalize: true,
        };
        let r = run_mbcg_experiment(&spec, 9, &[0]).unwrap();
        let x0 = random_signal(15, 9, SignalDistribution::StandardNormal);
        assert_eq!(r.trace.snapshots, vec![x0]);
        assert_eq!(r.localization.entries.len(), 3);
        let again = run_mbcg_experiment(&spec, 9, &[0]).unwrap();
        assert_eq!(r.localization.to_csv(), again.localization.to_csv());
    }
}
