//! Dense linear algebra substrate.
//!
//! Row-major `f64` matrices and vectors, plus the two special matrices the
//! compression pipeline is built on: the orthonormal DCT-II basis and the
//! Gaussian randomization matrix. Products are written slice-wise (i-k-j
//! order) so LLVM vectorizes the inner loops, and large products split row
//! ranges across rayon.
//!
//! Everything here is immutable after construction; all entries are finite
//! by construction or by validated input.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Row-major dense matrix: `data[i * cols + j]` holds entry `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense vector with all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

// Row count below which matmul stays single-threaded; tiny products are
// cheaper without the fork/join round trip.
const PAR_ROW_THRESHOLD: usize = 64;

impl Matrix {
    /// Build from row-major data, validating length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite entry in {rows}x{cols} matrix"
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from row slices; panics on ragged input (test/fixture helper).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        assert!(!rows.is_empty(), "at least one row required");
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// New matrix keeping only the given columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<Matrix> {
        if let Some(&bad) = keep.iter().find(|&&j| j >= self.cols) {
            return Err(Error::Shape(format!(
                "column {bad} out of range for {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, keep.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (d, &j) in dst.iter_mut().zip(keep) {
                *d = src[j];
            }
        }
        Ok(out)
    }

    /// New matrix keeping only the given rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Result<Matrix> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.rows) {
            return Err(Error::Shape(format!(
                "row {bad} out of range for {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = Matrix::zeros(keep.len(), self.cols);
        for (dst_i, &src_i) in keep.iter().enumerate() {
            out.row_mut(dst_i).copy_from_slice(self.row(src_i));
        }
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest absolute entry; 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Matrix-vector product `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "matvec: {}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect())
    }

    /// Transposed matrix-vector product `A^T x`.
    pub fn matvec_t(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::Shape(format!(
                "matvec_t: ({}x{})^T times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                for (o, &a) in out.iter_mut().zip(self.row(i)) {
                    *o += xi * a;
                }
            }
        }
        Ok(out)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matmul_rows_into(a_rows: &[f64], a_cols: usize, b: &Matrix, out: &mut [f64]) {
    let n = b.cols;
    for (a_row, out_row) in a_rows.chunks_exact(a_cols).zip(out.chunks_exact_mut(n)) {
        for (k, &aik) in a_row.iter().enumerate() {
            if aik != 0.0 {
                let b_row = &b.data[k * n..(k + 1) * n];
                for (o, &bv) in out_row.iter_mut().zip(b_row) {
                    *o += aik * bv;
                }
            }
        }
    }
}

/// Standard matrix product `A B`.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "matmul: {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    if a.rows >= PAR_ROW_THRESHOLD {
        let n = b.cols;
        out.data
            .par_chunks_mut(8 * n)
            .zip(a.data.par_chunks(8 * a.cols))
            .for_each(|(out_chunk, a_chunk)| {
                matmul_rows_into(a_chunk, a.cols, b, out_chunk);
            });
    } else {
        matmul_rows_into(&a.data, a.cols, b, &mut out.data);
    }
    Ok(out)
}

/// Product `A^T B` without materializing the transpose.
pub fn matmul_at_b(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows != b.rows {
        return Err(Error::Shape(format!(
            "matmul_at_b: ({}x{})^T times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    // out[i, :] = sum_k a[k, i] * b[k, :]; row blocks of out are independent.
    let mut out = Matrix::zeros(a.cols, b.cols);
    let n = b.cols;
    let block = 16;
    let do_block = |i0: usize, out_block: &mut [f64]| {
        let width = out_block.len() / n;
        for k in 0..a.rows {
            let a_row = a.row(k);
            let b_row = b.row(k);
            for di in 0..width {
                let aki = a_row[i0 + di];
                if aki != 0.0 {
                    let o = &mut out_block[di * n..(di + 1) * n];
                    for (ov, &bv) in o.iter_mut().zip(b_row) {
                        *ov += aki * bv;
                    }
                }
            }
        }
    };
    if a.cols >= PAR_ROW_THRESHOLD {
        out.data
            .par_chunks_mut(block * n)
            .enumerate()
            .for_each(|(bi, out_block)| do_block(bi * block, out_block));
    } else {
        for bi in 0..a.cols.div_ceil(block) {
            let i0 = bi * block;
            let i1 = (i0 + block).min(a.cols);
            do_block(i0, &mut out.data[i0 * n..i1 * n]);
        }
    }
    Ok(out)
}

/// Product `A B^T` without materializing the transpose.
pub fn matmul_a_bt(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.cols {
        return Err(Error::Shape(format!(
            "matmul_a_bt: {}x{} times ({}x{})^T",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.rows);
    let n = b.rows;
    let compute_rows = |a_rows: &[f64], out_rows: &mut [f64]| {
        for (a_row, out_row) in a_rows.chunks_exact(a.cols).zip(out_rows.chunks_exact_mut(n)) {
            for (j, o) in out_row.iter_mut().enumerate() {
                *o = dot(a_row, b.row(j));
            }
        }
    };
    if a.rows >= PAR_ROW_THRESHOLD {
        out.data
            .par_chunks_mut(8 * n)
            .zip(a.data.par_chunks(8 * a.cols))
            .for_each(|(out_rows, a_rows)| compute_rows(a_rows, out_rows));
    } else {
        compute_rows(&a.data, &mut out.data);
    }
    Ok(out)
}

/// Orthonormal DCT-II basis matrix of size `m`.
///
/// `entry[k, j] = c_k * sqrt(2/m) * cos(pi * (2j + 1) * k / (2m))` with
/// `c_0 = 1/sqrt(2)` and `c_k = 1` otherwise, so rows are orthonormal.
pub fn dct_matrix(m: usize) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::InvalidSize("dct_matrix: m must be >= 1".into()));
    }
    let scale = (2.0 / m as f64).sqrt();
    let mut out = Matrix::zeros(m, m);
    for k in 0..m {
        let ck = if k == 0 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        };
        let row = out.row_mut(k);
        for (j, v) in row.iter_mut().enumerate() {
            let angle = std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2 * m) as f64;
            *v = ck * scale * angle.cos();
        }
    }
    Ok(out)
}

/// `n x m` matrix of i.i.d. standard normal entries drawn from `rng`.
pub fn gaussian_matrix(n: usize, m: usize, rng: &mut SeededRng) -> Result<Matrix> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidSize(format!(
            "gaussian_matrix: dimensions must be >= 1, got {n}x{m}"
        )));
    }
    let data: Vec<f64> = (0..n * m).map(|_| rng.standard_normal()).collect();
    Matrix::new(n, m, data)
}

// splitmix64; used only to seed the power-iteration start vector so the
// estimate is deterministic without threading an rng through callers.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Largest eigenvalue of `A^T A` (squared spectral norm) by power iteration.
///
/// Converges when the eigenvalue estimate changes by less than `tol`
/// relative; returns a convergence error carrying the last estimate if the
/// iteration budget runs out.
pub fn spectral_norm_sq(a: &Matrix, iters: usize, tol: f64) -> Result<f64> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::InvalidSize(
            "spectral_norm_sq: matrix must be nonempty".into(),
        ));
    }
    let mut state = 0x5eed_c0de_u64;
    let mut v: Vec<f64> = (0..a.cols)
        .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let mut lambda = 0.0;
    for _ in 0..iters {
        let av = a.matvec(&v)?;
        let next = a.matvec_t(&av)?;
        let lambda_next = dot(&av, &av);
        let next_norm = dot(&next, &next).sqrt();
        if next_norm == 0.0 {
            return Ok(0.0);
        }
        v = next;
        v.iter_mut().for_each(|x| *x /= next_norm);
        if (lambda_next - lambda).abs() <= tol * lambda_next.max(f64::MIN_POSITIVE) {
            return Ok(lambda_next);
        }
        lambda = lambda_next;
    }
    Err(Error::Convergence {
        iters,
        last: lambda,
    })
}

impl Vector {
    /// Build from data, validating finiteness.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("non-finite entry in vector".into()));
        }
        Ok(Vector { data })
    }

    pub fn zeros(len: usize) -> Self {
        Vector {
            data: vec![0.0; len],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.data, &self.data)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(data: Vec<f64>) -> Self {
        Vector { data }
    }
}
