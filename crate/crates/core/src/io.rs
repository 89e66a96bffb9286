//! File formats: Matrix Market coordinate files for graphs and factor
//! matrices, two-column CSV for signals, and the basis/spectrum CSVs.
//!
//! Numbers are written in Rust's shortest round-trip form, so a write
//! followed by a read reproduces every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::basis::GftBasis;
use crate::error::{Error, Result};
use crate::graph::{Digraph, GraphSignal};
use crate::linalg::{CMatrix, RMatrix};

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn format_real_matrix_market(m: &RMatrix) -> String {
    let entries: Vec<(usize, usize, f64)> = m
        .column_iter()
        .enumerate()
        .flat_map(|(j, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(move |(i, v)| (i, j, *v))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(out, "{} {} {:e}", i + 1, j + 1, v);
    }
    out
}

pub fn format_complex_matrix_market(m: &CMatrix) -> String {
    let mut body = String::new();
    let mut nnz = 0;
    for (j, col) in m.column_iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if v.re != 0.0 || v.im != 0.0 {
                nnz += 1;
                let _ = writeln!(body, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im);
            }
        }
    }
    format!(
        "%%MatrixMarket matrix coordinate complex general\n{} {} {}\n{}",
        m.nrows(),
        m.ncols(),
        nnz,
        body
    )
}

pub fn write_real_matrix(m: &RMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_real_matrix_market(m))
}

pub fn write_complex_matrix(m: &CMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_complex_matrix_market(m))
}

pub fn write_matrix_market(g: &Digraph, path: impl AsRef<Path>) -> Result<()> {
    write_real_matrix(g.adjacency(), path)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Digraph> {
    Digraph::new(read_real_matrix(path)?)
}

/// Reads a `coordinate real general` (or `integer general`) file into a
/// dense matrix. Duplicate coordinates are summed.
pub fn read_real_matrix(path: impl AsRef<Path>) -> Result<RMatrix> {
    let path = path.as_ref();
    parse_real_matrix_market(&read_file(path)?, path)
}

pub fn parse_real_matrix_market(text: &str, path: &Path) -> Result<RMatrix> {
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| perr(1, "empty file".into()))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(perr(1, format!("malformed header: {header:?}")));
    }
    if fields[2] != "coordinate" {
        return Err(perr(1, format!("unsupported format {:?}", fields[2])));
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(perr(1, format!("unsupported field {:?}", fields[3])));
    }
    if fields[4] != "general" {
        return Err(perr(1, format!("unsupported symmetry {:?}", fields[4])));
    }

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data
        .next()
        .ok_or_else(|| perr(2, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| perr(size_line, format!("bad size line: {e}")))?;
    if dims.len() != 3 {
        return Err(perr(size_line, format!("size line needs 3 fields, got {}", dims.len())));
    }
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
    let mut m = RMatrix::zeros(rows, cols);
    let mut seen = 0;
    for (line, l) in data {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(perr(line, format!("expected `row col value`, got {l:?}")));
        }
        let i: usize = toks[0].parse().map_err(|e| perr(line, format!("bad row index: {e}")))?;
        let j: usize = toks[1].parse().map_err(|e| perr(line, format!("bad column index: {e}")))?;
        let v: f64 = toks[2].parse().map_err(|e| perr(line, format!("bad value: {e}")))?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(perr(
                line,
                format!("index ({i}, {j}) out of bounds for {rows}x{cols} (indices are 1-based)"),
            ));
        }
        m[(i - 1, j - 1)] += v;
        seen += 1;
    }
    if seen != nnz {
        return Err(perr(size_line, format!("header declares {nnz} entries, found {seen}")));
    }
    Ok(m)
}

pub fn format_signal_csv(x: &GraphSignal) -> String {
    let mut out = String::from("node_id,value\n");
    for (i, v) in x.values().iter().enumerate() {
        let _ = writeln!(out, "{i},{v:e}");
    }
    out
}

pub fn write_signal_csv(x: &GraphSignal, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_signal_csv(x))
}

/// Reads a `node_id,value` CSV with exactly one row per node `0..n`.
pub fn read_signal_csv(path: impl AsRef<Path>, n: usize) -> Result<GraphSignal> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim().replace(' ', "") == "node_id,value" => {}
        Some((line, h)) => return Err(perr(line, format!("expected header `node_id,value`, got {h:?}"))),
        None => return Err(perr(1, "empty file".into())),
    }
    let mut values: Vec<Option<f64>> = vec![None; n];
    for (line, l) in lines {
        let (id, v) = l
            .split_once(',')
            .ok_or_else(|| perr(line, format!("expected `node_id,value`, got {l:?}")))?;
        let id: usize = id.trim().parse().map_err(|e| perr(line, format!("bad node id: {e}")))?;
        let v: f64 = v.trim().parse().map_err(|e| perr(line, format!("bad value: {e}")))?;
        let slot = values
            .get_mut(id)
            .ok_or_else(|| perr(line, format!("node id {id} out of range for {n} nodes")))?;
        if slot.is_some() {
            return Err(perr(line, format!("duplicate node id {id}")));
        }
        *slot = Some(v);
    }
    let missing: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| i)
        .collect();
    if !missing.is_empty() {
        return Err(Error::Validation(format!(
            "{}: missing values for nodes {:?}",
            path.display(),
            missing
        )));
    }
    GraphSignal::new(values.into_iter().map(|v| v.unwrap_or_default()).collect())
}

/// `rank,eig_real,eig_imag,frequency`, one row per basis vector.
pub fn format_basis_csv(basis: &GftBasis) -> String {
    let mut out = String::from("rank,eig_real,eig_imag,frequency\n");
    for (k, (l, f)) in basis.eigenvalues.iter().zip(&basis.frequencies).enumerate() {
        let _ = writeln!(out, "{k},{:e},{:e},{:e}", l.re, l.im, f);
    }
    out
}

/// `rank,coeff_real,coeff_imag,eig_real,eig_imag,frequency`.
pub fn format_spectrum_csv(spectrum: &[Complex64], basis: &GftBasis) -> String {
    let mut out = String::from("rank,coeff_real,coeff_imag,eig_real,eig_imag,frequency\n");
    for (k, c) in spectrum.iter().enumerate() {
        let l = basis.eigenvalues[k];
        let _ = writeln!(out, "{k},{:e},{:e},{:e},{:e},{:e}", c.re, c.im, l.re, l.im, basis.frequencies[k]);
    }
    out
}

pub fn write_basis(basis: &GftBasis, csv_path: impl AsRef<Path>, mtx_path: impl AsRef<Path>) -> Result<()> {
    write_file(csv_path.as_ref(), &format_basis_csv(basis))?;
    if basis.is_real() {
        write_real_matrix(&basis.vectors.map(|z| z.re), mtx_path)
    } else {
        write_complex_matrix(&basis.vectors, mtx_path)
    }
}

pub fn write_spectrum_csv(spectrum: &[Complex64], basis: &GftBasis, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_spectrum_csv(spectrum, basis))
}

pub(crate) fn write_text(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    write_file(path.as_ref(), contents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_mblock_cyclic, MBlockSpec};

    #[test]
    fn round_trip_generated_graph() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.mtx");
        let g = gen_mblock_cyclic(&MBlockSpec::default()).unwrap();
        write_matrix_market(&g, &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn one_based_indexing() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n2 1 1.0\n";
        let m = parse_real_matrix_market(text, Path::new("t")).unwrap();
        assert_eq!(m, RMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn hand_written_three_edges() {
        let text = "%%MatrixMarket matrix coordinate real general\n% comment\n3 3 3\n2 1 0.5\n3 2 2\n1 3 1.25\n";
        let m = parse_real_matrix_market(text, Path::new("t")).unwrap();
        let expected = RMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.25, 0.5, 0.0, 0.0, 0.0, 2.0, 0.0]);
        assert_eq!(m, expected);
    }

    #[test]
    fn malformed_inputs() {
        let p = Path::new("t");
        assert!(parse_real_matrix_market("hello\n1 1 0\n", p).is_err());
        assert!(parse_real_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1\n", p).is_err());
        let oob = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(matches!(parse_real_matrix_market(oob, p), Err(Error::Parse { line: 3, .. })));
        let zero = "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n";
        assert!(parse_real_matrix_market(zero, p).is_err());
        let count = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(parse_real_matrix_market(count, p).is_err());
    }

    #[test]
    fn signal_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let x = GraphSignal::new(vec![0.1, -2.5e-17, 3.0, f64::MAX]).unwrap();
        write_signal_csv(&x, &path).unwrap();
        assert_eq!(read_signal_csv(&path, 4).unwrap(), x);

        let z = GraphSignal::zeros(3);
        write_signal_csv(&z, &path).unwrap();
        assert_eq!(read_signal_csv(&path, 3).unwrap(), z);

        fs::write(&path, "node_id,value\n2,1.5\n0,-1\n1,0.25\n").unwrap();
        assert_eq!(read_signal_csv(&path, 3).unwrap().values(), &[-1.0, 0.25, 1.5]);

        fs::write(&path, "node_id,value\n0,1\n0,2\n").unwrap();
        assert!(read_signal_csv(&path, 2).unwrap_err().to_string().contains("duplicate"));
        fs::write(&path, "node_id,value\n0,1\n").unwrap();
        assert!(read_signal_csv(&path, 2).unwrap_err().to_string().contains("missing"));
    }
}
