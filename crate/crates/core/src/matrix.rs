//! Nonnegative data matrices and factor pairs.
//!
//! The term-document matrix `X` (D×N) is usually stored in compressed sparse
//! column form; the factors `H` (D×K) and `W` (K×N) are dense. Every kernel
//! walks `X` one column at a time and only touches stored nonzeros, so the
//! dense and sparse layouts run the exact same floating-point operations.

use std::io::{BufRead, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Axis, Error, Result};

/// Compressed sparse column storage with nonnegative values.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscMatrix {
    /// Builds from `(row, col, value)` triplets. Duplicate coordinates are
    /// rejected; explicit zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows {
                return Err(Error::DimensionMismatch {
                    axis: Axis::Rows,
                    expected: rows,
                    found: r + 1,
                });
            }
            if c >= cols {
                return Err(Error::DimensionMismatch {
                    axis: Axis::Cols,
                    expected: cols,
                    found: c + 1,
                });
            }
            check_entry(r, c, v)?;
            if v != 0.0 {
                entries.push((c, r, v));
            }
        }
        entries.sort_by_key(|a| (a.0, a.1));
        if let Some(w) = entries
            .windows(2)
            .find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1)
        {
            return Err(Error::InvalidConfig(format!(
                "duplicate matrix entry at ({}, {})",
                w[0].1, w[0].0
            )));
        }
        let mut col_ptr = vec![0usize; cols + 1];
        for &(c, _, _) in &entries {
            col_ptr[c + 1] += 1;
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Ok(CscMatrix {
            rows,
            cols,
            col_ptr,
            row_idx: entries.iter().map(|e| e.1).collect(),
            values: entries.iter().map(|e| e.2).collect(),
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and values stored in column `col`, rows ascending.
    pub fn column(&self, col: usize) -> (&[usize], &[f64]) {
        let span = self.col_ptr[col]..self.col_ptr[col + 1];
        (&self.row_idx[span.clone()], &self.values[span])
    }
}

/// Builds a [`CscMatrix`] one column at a time, rows ascending within a column.
#[derive(Debug)]
pub struct CscBuilder {
    rows: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscBuilder {
    pub fn new(rows: usize) -> Self {
        CscBuilder {
            rows,
            col_ptr: vec![0],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Appends a column. Entries must have strictly increasing row indices.
    pub fn push_column(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<()> {
        let col = self.col_ptr.len() - 1;
        let mut last: Option<usize> = None;
        for (r, v) in entries {
            if r >= self.rows {
                return Err(Error::DimensionMismatch {
                    axis: Axis::Rows,
                    expected: self.rows,
                    found: r + 1,
                });
            }
            if last.is_some_and(|l| r <= l) {
                return Err(Error::InvalidConfig(format!(
                    "column {col}: row indices must be strictly increasing"
                )));
            }
            check_entry(r, col, v)?;
            last = Some(r);
            if v != 0.0 {
                self.row_idx.push(r);
                self.values.push(v);
            }
        }
        self.col_ptr.push(self.values.len());
        Ok(())
    }

    pub fn build(self) -> CscMatrix {
        CscMatrix {
            rows: self.rows,
            cols: self.col_ptr.len() - 1,
            col_ptr: self.col_ptr,
            row_idx: self.row_idx,
            values: self.values,
        }
    }
}

fn check_entry(row: usize, col: usize, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEntry { row, col, value })
    }
}

/// The D×N nonnegative data matrix `X`, dense or sparse.
#[derive(Debug, Clone, PartialEq)]
pub enum DataMatrix {
    Dense(Array2<f64>),
    Sparse(CscMatrix),
}

impl DataMatrix {
    pub fn from_dense(values: Array2<f64>) -> Result<Self> {
        for ((r, c), &v) in values.indexed_iter() {
            check_entry(r, c, v)?;
        }
        Ok(DataMatrix::Dense(values))
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        CscMatrix::from_triplets(rows, cols, triplets).map(DataMatrix::Sparse)
    }

    pub fn nrows(&self) -> usize {
        match self {
            DataMatrix::Dense(a) => a.nrows(),
            DataMatrix::Sparse(s) => s.rows,
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            DataMatrix::Dense(a) => a.ncols(),
            DataMatrix::Sparse(s) => s.cols,
        }
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        match self {
            DataMatrix::Dense(a) => a.iter().filter(|&&v| v != 0.0).count(),
            DataMatrix::Sparse(s) => s.nnz(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, DataMatrix::Sparse(_))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self {
            DataMatrix::Dense(a) => a[[row, col]],
            DataMatrix::Sparse(s) => {
                let (rows, vals) = s.column(col);
                rows.binary_search(&row).map_or(0.0, |i| vals[i])
            }
        }
    }

    /// Nonzero entries of column `col` as `(row, value)`, rows ascending.
    pub fn column_entries(&self, col: usize) -> ColumnEntries<'_> {
        match self {
            DataMatrix::Dense(a) => ColumnEntries::Dense {
                column: a.column(col),
                next: 0,
            },
            DataMatrix::Sparse(s) => {
                let (rows, vals) = s.column(col);
                ColumnEntries::Sparse {
                    rows: rows.iter(),
                    vals: vals.iter(),
                }
            }
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        match self {
            DataMatrix::Dense(a) => a.clone(),
            DataMatrix::Sparse(_) => {
                let mut out = Array2::zeros((self.nrows(), self.ncols()));
                for n in 0..self.ncols() {
                    for (d, v) in self.column_entries(n) {
                        out[[d, n]] = v;
                    }
                }
                out
            }
        }
    }

    pub fn to_sparse(&self) -> DataMatrix {
        match self {
            DataMatrix::Sparse(_) => self.clone(),
            DataMatrix::Dense(_) => {
                let mut b = CscBuilder::new(self.nrows());
                for n in 0..self.ncols() {
                    b.push_column(self.column_entries(n))
                        .expect("entries of a valid matrix");
                }
                DataMatrix::Sparse(b.build())
            }
        }
    }

    /// Squared Frobenius norm.
    pub fn squared_norm(&self) -> f64 {
        (0..self.ncols())
            .flat_map(|n| self.column_entries(n))
            .map(|(_, v)| v * v)
            .sum()
    }

    /// Writes the text snapshot: header `D N nnz`, then `row col value`
    /// triplets (0-indexed, column-major order), one per line.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {} {}", self.nrows(), self.ncols(), self.nnz())?;
        for n in 0..self.ncols() {
            for (d, v) in self.column_entries(n) {
                writeln!(out, "{d} {n} {v}")?;
            }
        }
        out.flush()
    }

    pub fn save_snapshot(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_snapshot(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    /// Parses the text snapshot format into sparse storage.
    pub fn read_snapshot<R: BufRead>(input: R, origin: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut lines = input.lines().enumerate();
        let (rows, cols, nnz) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(parse_err(1, "missing header `D N nnz`".into()));
            };
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let nums: Vec<usize> = fields
                .iter()
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(i + 1, format!("bad header: {e}")))?;
            if nums.len() != 3 {
                return Err(parse_err(i + 1, "header must be `D N nnz`".into()));
            }
            break (nums[0], nums[1], nums[2]);
        };
        let mut triplets = Vec::with_capacity(nnz);
        for (i, line) in lines {
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(i + 1, "expected `row col value`".into()));
            }
            let r = fields[0]
                .parse::<usize>()
                .map_err(|e| parse_err(i + 1, format!("bad row index: {e}")))?;
            let c = fields[1]
                .parse::<usize>()
                .map_err(|e| parse_err(i + 1, format!("bad column index: {e}")))?;
            let v = fields[2]
                .parse::<f64>()
                .map_err(|e| parse_err(i + 1, format!("bad value: {e}")))?;
            if r >= rows || c >= cols {
                return Err(parse_err(
                    i + 1,
                    format!("entry ({r}, {c}) outside {rows}x{cols}"),
                ));
            }
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(parse_err(
                0,
                format!("header declares {nnz} entries, found {}", triplets.len()),
            ));
        }
        DataMatrix::from_triplets(rows, cols, triplets)
    }

    pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_snapshot(std::io::BufReader::new(file), path)
    }
}

impl From<CscMatrix> for DataMatrix {
    fn from(m: CscMatrix) -> Self {
        DataMatrix::Sparse(m)
    }
}

/// Iterator over the nonzero entries of one column.
pub enum ColumnEntries<'a> {
    Dense {
        column: ndarray::ArrayView1<'a, f64>,
        next: usize,
    },
    Sparse {
        rows: std::slice::Iter<'a, usize>,
        vals: std::slice::Iter<'a, f64>,
    },
}

impl Iterator for ColumnEntries<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            ColumnEntries::Dense { column, next } => {
                while *next < column.len() {
                    let d = *next;
                    *next += 1;
                    let v = column[d];
                    if v != 0.0 {
                        return Some((d, v));
                    }
                }
                None
            }
            ColumnEntries::Sparse { rows, vals } => Some((*rows.next()?, *vals.next()?)),
        }
    }
}

/// Basis `H` (D×K) and coefficients `W` (K×N), both nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub h: Array2<f64>,
    pub w: Array2<f64>,
}

impl FactorPair {
    pub fn new(h: Array2<f64>, w: Array2<f64>) -> Result<Self> {
        if h.ncols() != w.nrows() {
            return Err(Error::DimensionMismatch {
                axis: Axis::Rank,
                expected: h.ncols(),
                found: w.nrows(),
            });
        }
        let k = h.ncols();
        let max = h.nrows().min(w.ncols());
        if k == 0 || k > max {
            return Err(Error::InvalidRank { k, max });
        }
        for ((r, c), &v) in h.indexed_iter() {
            check_entry(r, c, v)?;
        }
        for ((r, c), &v) in w.indexed_iter() {
            check_entry(r, c, v)?;
        }
        Ok(FactorPair { h, w })
    }

    pub fn rank(&self) -> usize {
        self.h.ncols()
    }

    pub fn rows(&self) -> usize {
        self.h.nrows()
    }

    pub fn cols(&self) -> usize {
        self.w.ncols()
    }

    /// Errors unless `x` is D×N for this pair's D and N.
    pub fn check_compatible(&self, x: &DataMatrix) -> Result<()> {
        if x.nrows() != self.rows() {
            return Err(Error::DimensionMismatch {
                axis: Axis::Rows,
                expected: x.nrows(),
                found: self.rows(),
            });
        }
        if x.ncols() != self.cols() {
            return Err(Error::DimensionMismatch {
                axis: Axis::Cols,
                expected: x.ncols(),
                found: self.cols(),
            });
        }
        Ok(())
    }

    /// Rescales columns of `H` to unit L2 norm and rows of `W` inversely.
    /// All-zero basis columns are left alone.
    pub fn normalize_basis(&mut self) {
        for k in 0..self.rank() {
            let norm = self.h.column(k).iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                self.h.column_mut(k).mapv_inplace(|v| v / norm);
                self.w.row_mut(k).mapv_inplace(|v| v * norm);
            }
        }
    }
}

/// Column `n` of `HW` into `out`. Shared by every routine that needs the
/// product so that `reconstruct` and the residual kernels agree bit for bit.
pub(crate) fn product_column(h: &Array2<f64>, w: &Array2<f64>, n: usize, out: &mut [f64]) {
    let k_max = h.ncols();
    for (d, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..k_max {
            acc += h[[d, k]] * w[[k, n]];
        }
        *slot = acc;
    }
}

/// Materializes `HW` as a dense matrix.
pub fn reconstruct(f: &FactorPair) -> DataMatrix {
    let (rows, cols) = (f.rows(), f.cols());
    let mut out = Array2::zeros((rows, cols));
    let mut buf = vec![0.0; rows];
    for n in 0..cols {
        product_column(&f.h, &f.w, n, &mut buf);
        for (d, &v) in buf.iter().enumerate() {
            out[[d, n]] = v;
        }
    }
    DataMatrix::Dense(out)
}

/// Squared Euclidean norm of each row of `X - HW`, computed column by column.
pub(crate) fn row_residual_sq(x: &DataMatrix, f: &FactorPair) -> Vec<f64> {
    let rows = x.nrows();
    let mut acc = vec![0.0; rows];
    let mut buf = vec![0.0; rows];
    for n in 0..x.ncols() {
        product_column(&f.h, &f.w, n, &mut buf);
        for v in buf.iter_mut() {
            *v = -*v;
        }
        for (d, xv) in x.column_entries(n) {
            buf[d] += xv;
        }
        for (a, r) in acc.iter_mut().zip(&buf) {
            *a += r * r;
        }
    }
    acc
}

/// Euclidean norm of each feature row of `X - HW`.
pub fn row_residual_norms(x: &DataMatrix, f: &FactorPair) -> Result<Vec<f64>> {
    f.check_compatible(x)?;
    Ok(row_residual_sq(x, f).into_iter().map(f64::sqrt).collect())
}

/// Squared Frobenius norm of `X - HW`.
pub fn residual_sq_norm(x: &DataMatrix, f: &FactorPair) -> Result<f64> {
    f.check_compatible(x)?;
    Ok(row_residual_sq(x, f).iter().sum())
}

/// `diag(a) X Wᵀ` (D×K); `a = None` means unweighted.
pub(crate) fn weighted_x_wt(x: &DataMatrix, w: &Array2<f64>, a: Option<&[f64]>) -> Array2<f64> {
    let k_max = w.nrows();
    let mut out = Array2::zeros((x.nrows(), k_max));
    for n in 0..x.ncols() {
        for (d, xv) in x.column_entries(n) {
            for k in 0..k_max {
                out[[d, k]] += xv * w[[k, n]];
            }
        }
    }
    if let Some(a) = a {
        for (mut row, &ad) in out.rows_mut().into_iter().zip(a) {
            row.mapv_inplace(|v| ad * v);
        }
    }
    out
}

/// `Hᵀ diag(a) X` (K×N); `a = None` means unweighted.
pub(crate) fn weighted_ht_x(h: &Array2<f64>, x: &DataMatrix, a: Option<&[f64]>) -> Array2<f64> {
    let k_max = h.ncols();
    let mut out = Array2::zeros((k_max, x.ncols()));
    for n in 0..x.ncols() {
        for (d, xv) in x.column_entries(n) {
            let v = match a {
                Some(a) => a[d] * xv,
                None => xv,
            };
            for k in 0..k_max {
                out[[k, n]] += h[[d, k]] * v;
            }
        }
    }
    out
}

/// `Hᵀ diag(a) H` (K×K).
pub(crate) fn weighted_gram(h: &Array2<f64>, a: Option<&[f64]>) -> Array2<f64> {
    let k_max = h.ncols();
    let mut out = Array2::zeros((k_max, k_max));
    for d in 0..h.nrows() {
        let ad = a.map_or(1.0, |a| a[d]);
        for i in 0..k_max {
            let hi = ad * h[[d, i]];
            for j in 0..k_max {
                out[[i, j]] += hi * h[[d, j]];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn residual_of_hand_example() {
        let x = DataMatrix::from_dense(array![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let f = FactorPair::new(array![[1.0], [0.0]], array![[1.0, 0.0]]).unwrap();
        assert_eq!(row_residual_norms(&x, &f).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn exact_product_has_zero_residual() {
        let f = FactorPair::new(
            array![[0.3, 1.7], [2.1, 0.0], [0.9, 0.4]],
            array![[1.1, 0.2, 3.3, 0.0], [0.7, 0.6, 0.1, 2.2]],
        )
        .unwrap();
        let x = reconstruct(&f);
        assert!(row_residual_norms(&x, &f)
            .unwrap()
            .iter()
            .all(|&r| r == 0.0));
        assert!(row_residual_norms(&x.to_sparse(), &f)
            .unwrap()
            .iter()
            .all(|&r| r == 0.0));
    }

    #[test]
    fn reconstruct_hand_examples() {
        let f = FactorPair::new(
            array![[1.0, 0.0], [0.0, 1.0]],
            array![[3.0, 1.0], [0.0, 2.0]],
        )
        .unwrap();
        assert_eq!(reconstruct(&f).to_dense(), array![[3.0, 1.0], [0.0, 2.0]]);
        let f = FactorPair::new(array![[2.0], [1.0]], array![[1.0, 3.0]]).unwrap();
        assert_eq!(reconstruct(&f).to_dense(), array![[2.0, 6.0], [1.0, 3.0]]);
    }

    #[test]
    fn dimension_mismatch_names_axis() {
        let x = DataMatrix::from_dense(Array2::ones((3, 4))).unwrap();
        let f = FactorPair::new(Array2::ones((2, 1)), Array2::ones((1, 4))).unwrap();
        match row_residual_norms(&x, &f) {
            Err(Error::DimensionMismatch {
                axis: Axis::Rows, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let f = FactorPair::new(Array2::ones((3, 1)), Array2::ones((1, 5))).unwrap();
        match row_residual_norms(&x, &f) {
            Err(Error::DimensionMismatch {
                axis: Axis::Cols, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_entries_and_bad_rank() {
        assert!(DataMatrix::from_dense(array![[1.0, -0.5]]).is_err());
        assert!(DataMatrix::from_triplets(2, 2, [(0, 0, f64::NAN)]).is_err());
        assert!(matches!(
            FactorPair::new(Array2::ones((2, 3)), Array2::ones((3, 5))),
            Err(Error::InvalidRank { k: 3, max: 2 })
        ));
        assert!(FactorPair::new(array![[1.0], [-1.0]], array![[1.0]]).is_err());
    }

    #[test]
    fn snapshot_round_trip() {
        let x = DataMatrix::from_triplets(3, 2, [(0, 0, 0.25), (2, 0, 1.0 / 3.0), (1, 1, 7.5)])
            .unwrap();
        let mut buf = Vec::new();
        x.write_snapshot(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("3 2 3\n0 0 0.25\n"));
        let back = DataMatrix::read_snapshot(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn snapshot_reports_bad_line() {
        let text = "2 2 2\n0 0 1.0\n0 x 2.0\n";
        match DataMatrix::read_snapshot(text.as_bytes(), Path::new("m.txt")) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let text = "2 2 3\n0 0 1.0\n";
        assert!(DataMatrix::read_snapshot(text.as_bytes(), Path::new("m.txt")).is_err());
    }

    #[test]
    fn normalize_basis_keeps_product() {
        let mut f = FactorPair::new(
            array![[3.0, 0.0], [4.0, 2.0]],
            array![[1.0, 2.0], [0.5, 0.0]],
        )
        .unwrap();
        let before = reconstruct(&f).to_dense();
        f.normalize_basis();
        let after = reconstruct(&f).to_dense();
        assert!((f.h.column(0).dot(&f.h.column(0)) - 1.0).abs() < 1e-15);
        for (a, b) in before.iter().zip(after.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
