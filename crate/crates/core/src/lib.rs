//! Graph Fourier bases for directed graphs.
//!
//! Two families of spectral bases are provided for an arbitrary weighted
//! digraph with adjacency `A` (entry `(i, j)` is the weight of the edge
//! from node `j` to node `i`):
//!
//! * the polar-decomposition bases built from `A = PQ = QF`: eigenvectors
//!   of the PSD factors `P` (common in-links) and `F` (common out-links),
//!   and of the orthogonal factor `Q` (in-flow);
//! * the graph Schur transform, a unitary basis taken from a
//!   frequency-ordered complex Schur form of `A`, which exists even when
//!   `A` is defective.
//!
//! The crate also ships graph generators, a diffusion simulator and
//! spectrum-localization measures, plus the `dgft` command-line tool.

pub mod analysis;
pub mod basis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod gst;
pub mod io;
pub mod linalg;
pub mod polar;
pub mod symmetrize;

pub use analysis::{
    adjacency_tv, adjacency_tv_unnormalized, diffuse, frequency_ranks, localization,
    mblock_structure_check, rank_energy, run_mbcg_experiment, spectrum_of, spectrum_stats,
    DiffusionTrace, ExperimentReport, LocalizationEntry, LocalizationReport,
    LocalizationSummary, OperatorKind, SpectrumStats, StructureReport,
};
pub use basis::{BasisKind, GftBasis};
pub use error::{Error, Result};
pub use graph::{
    gen_directed_cycle, gen_directed_path, gen_directed_torus, gen_mblock_cyclic, gen_random,
    random_signal, Digraph, GraphSignal, MBlockSpec, SignalDistribution,
};
pub use gst::{gst_build, gst_build_with_order, GstTransform, InverseResult};
pub use linalg::{
    psd_sqrt, schur_complex, svd, sym_eig, ComplexSchurFactors, EigenOrder, SvdFactors,
    SymEigFactors,
};
pub use polar::{
    common_inlink_basis, common_outlink_basis, eigenvalue_correspondence, inflow_basis,
    polar_decompose, CorrespondenceReport, PolarFactors,
};
pub use symmetrize::{
    bibliographic_coupling, bibliometric, co_citation, quadratic_variation, SymKind,
    Symmetrization,
};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
