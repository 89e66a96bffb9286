use std::path::Path;
use std::process::{Command, Output};

use digraph_gft::io::{read_matrix_market, read_real_matrix, write_signal_csv};
use digraph_gft::linalg::RMatrix;
use digraph_gft::{gen_directed_cycle, polar_decompose, GraphSignal};

fn dgft(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgft"))
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Complex Matrix Market body as `(row, col, re, im)`.
fn complex_entries(path: &Path) -> Vec<(usize, usize, f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            (t[0].parse().unwrap(), t[1].parse().unwrap(), t[2].parse().unwrap(), t[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn gen_torus_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = dgft(dir.path(), &["gen", "--family", "torus", "--rows", "10", "--cols", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=100 nnz=200 normal=true"));
    let g = read_matrix_market(dir.path().join("graph.mtx")).unwrap();
    assert_eq!(g.n(), 100);
    assert!(g.is_normal());
}

#[test]
fn gen_path_is_defective_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = dgft(dir.path(), &["gen", "--family", "path", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("graph.mtx")).unwrap();
    assert_eq!(text, "%%MatrixMarket matrix coordinate real general\n4 4 3\n2 1 1e0\n3 2 1e0\n4 3 1e0\n");
}

#[test]
fn polar_of_cycle_has_identity_p() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["gen", "--family", "cycle", "--n", "6"]);
    let input = dir.path().join("graph.mtx");
    let o = dgft(dir.path(), &["decompose", "--input", s(&input), "--what", "polar"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let p = read_real_matrix(dir.path().join("P.mtx")).unwrap();
    assert!((p - RMatrix::identity(6, 6)).amax() < 1e-14);
    let q = read_real_matrix(dir.path().join("Q.mtx")).unwrap();
    assert!((q - gen_directed_cycle(6).unwrap().adjacency()).amax() < 1e-14);
    let sv = std::fs::read_to_string(dir.path().join("singular_values.csv")).unwrap();
    assert!(sv.starts_with("rank,value\n"));
    for l in sv.lines().skip(1) {
        let v: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }
}

#[test]
fn schur_of_path_is_strictly_triangular() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["gen", "--family", "path", "--n", "4"]);
    let input = dir.path().join("graph.mtx");
    let o = dgft(dir.path(), &["decompose", "--input", s(&input), "--what", "schur"]);
    assert_eq!(o.status.code(), Some(0));
    let t = complex_entries(&dir.path().join("T.mtx"));
    assert!(!t.is_empty());
    assert!(t.iter().all(|(i, j, _, _)| i < j));
    let header = std::fs::read_to_string(dir.path().join("U.mtx")).unwrap();
    assert!(header.starts_with("%%MatrixMarket matrix coordinate complex general\n4 4 "));
}

#[test]
fn symmetrize_two_path() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["gen", "--family", "path", "--n", "2"]);
    let input = dir.path().join("graph.mtx");
    let o = dgft(dir.path(), &["decompose", "--input", s(&input), "--what", "symmetrize"]);
    assert_eq!(o.status.code(), Some(0));
    let b = read_real_matrix(dir.path().join("B_in.mtx")).unwrap();
    assert_eq!(b, RMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]));
    let c = read_real_matrix(dir.path().join("C_out.mtx")).unwrap();
    assert_eq!(c, RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let both = read_real_matrix(dir.path().join("bibliometric.mtx")).unwrap();
    assert_eq!(both, RMatrix::identity(2, 2));
}

#[test]
fn gft_basis_column_is_one_hot() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["gen", "--family", "cycle", "--n", "5"]);
    let input = dir.path().join("graph.mtx");
    let g = read_matrix_market(&input).unwrap();
    let pf = polar_decompose(&g).unwrap();
    // second eigenvector of P
    let col: Vec<f64> = pf.svd.left_vectors.column(1).iter().copied().collect();
    let sig = dir.path().join("x.csv");
    write_signal_csv(&GraphSignal::new(col).unwrap(), &sig).unwrap();
    let o = dgft(dir.path(), &["gft", "--input", s(&input), "--basis", "p", "--signal", s(&sig)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("parseval") && stdout(&o).contains(" ok"));
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("rank,coeff_real,coeff_imag,eig_real,eig_imag,frequency"));
    for (k, l) in lines.enumerate() {
        let re: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        let expect = if k == 1 { 1.0 } else { 0.0 };
        assert!((re - expect).abs() < 1e-12, "{l}");
    }
}

#[test]
fn gft_zero_signal() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["gen", "--family", "torus", "--rows", "3", "--cols", "3"]);
    let input = dir.path().join("graph.mtx");
    let sig = dir.path().join("zero.csv");
    write_signal_csv(&GraphSignal::zeros(9), &sig).unwrap();
    let o = dgft(dir.path(), &["gft", "--input", s(&input), "--basis", "schur", "--signal", s(&sig)]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    for l in csv.lines().skip(1) {
        let f: Vec<f64> = l.split(',').skip(1).take(2).map(|v| v.parse().unwrap()).collect();
        assert!(f.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage
    assert_eq!(dgft(dir.path(), &["gen", "--family", "wheel"]).status.code(), Some(2));
    assert_eq!(dgft(dir.path(), &["gen", "--family", "cycle", "--n", "1"]).status.code(), Some(2));
    assert_eq!(dgft(dir.path(), &["experiment", "--seeds", "0"]).status.code(), Some(2));
    // I/O
    let missing = dir.path().join("missing.mtx");
    assert_eq!(dgft(dir.path(), &["decompose", "--input", s(&missing)]).status.code(), Some(1));
    let bad = dir.path().join("bad.mtx");
    std::fs::write(&bad, "not a matrix\n").unwrap();
    assert_eq!(dgft(dir.path(), &["decompose", "--input", s(&bad)]).status.code(), Some(1));
    // dimension mismatch between graph and signal
    dgft(dir.path(), &["gen", "--family", "cycle", "--n", "4"]);
    let input = dir.path().join("graph.mtx");
    let sig = dir.path().join("short.csv");
    std::fs::write(&sig, "node_id,value\n0,1\n1,2\n").unwrap();
    let o = dgft(dir.path(), &["gft", "--input", s(&input), "--signal", s(&sig)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn help_documents_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let top = dgft(dir.path(), &["--help"]);
    assert_eq!(top.status.code(), Some(0));
    for sub in ["gen", "decompose", "gft", "experiment"] {
        let h = stdout(&dgft(dir.path(), &[sub, "--help"]));
        for flag in ["--seed", "--out-dir", "--tolerance-profile"] {
            assert!(h.contains(flag), "{sub} help lacks {flag}");
        }
        assert!(h.contains("[default: 0]"), "{sub}");
    }
}

#[test]
fn experiment_single_step_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let o = dgft(dir.path(), &["experiment", "--ks", "0", "--seeds", "2", "--blocks", "3", "--per-block", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("single step"));
    let loc = std::fs::read_to_string(dir.path().join("seed_0/localization.csv")).unwrap();
    assert_eq!(loc.lines().count(), 4);
    let trace = std::fs::read_to_string(dir.path().join("seed_1/trace.csv")).unwrap();
    assert!(trace.starts_with("step,node_id,value\n"));
    assert_eq!(trace.lines().count(), 16);
}

#[test]
fn strict_profile_still_passes_on_clean_input() {
    let dir = tempfile::tempdir().unwrap();
    dgft(dir.path(), &["--seed", "2", "gen", "--family", "random", "--n", "25"]);
    let input = dir.path().join("graph.mtx");
    for what in ["polar", "schur"] {
        let o = dgft(dir.path(), &["--tolerance-profile", "strict", "decompose", "--input", s(&input), "--what", what]);
        assert_eq!(o.status.code(), Some(0), "{what}");
    }
}
