//! Minimal complex sparse matrices: enough linear algebra to realize span
//! elements as operators on truncated path space and to estimate operator
//! norms. Entries are kept sorted by (row, col) with no explicit zeros.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

const DROP_EPS: f64 = 0.0;

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect(),
        }
    }

    /// Builds from unsorted triplets, accumulating duplicates.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        items: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut entries: Vec<(usize, usize, Complex64)> = items.into_iter().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut packed: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            debug_assert!(r < rows && c < cols, "triplet out of bounds");
            match packed.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => packed.push((r, c, v)),
            }
        }
        packed.retain(|&(_, _, v)| v.norm_sqr() > DROP_EPS);
        SparseMatrix { rows, cols, entries: packed }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match self.entries.binary_search_by_key(&(r, c), |&(er, ec, _)| (er, ec)) {
            Ok(i) => self.entries[i].2,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        Ok(SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().chain(&other.entries).copied(),
        ))
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        Ok(SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .copied()
                .chain(other.entries.iter().map(|&(r, c, v)| (r, c, -v))),
        ))
    }

    pub fn scale(&self, z: Complex64) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(r, c, v)| (r, c, z * v)),
        )
    }

    pub fn adjoint(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.cols,
            self.rows,
            self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let offsets = other.row_offsets();
        let mut triplets = Vec::new();
        for &(i, k, a) in &self.entries {
            for &(_, j, b) in &other.entries[offsets[k]..offsets[k + 1]] {
                triplets.push((i, j, a * b));
            }
        }
        Ok(SparseMatrix::from_triplets(self.rows, other.cols, triplets))
    }

    fn row_offsets(&self) -> Vec<usize> {
        let mut offsets = vec![0usize; self.rows + 1];
        for &(r, _, _) in &self.entries {
            offsets[r + 1] += 1;
        }
        for i in 0..self.rows {
            offsets[i + 1] += offsets[i];
        }
        offsets
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    pub fn matvec_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for &(r, c, a) in &self.entries {
            out[c] += a.conj() * v[r];
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|&(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, _, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Zeroes every entry whose row or column index is masked out.
    pub fn compress(&self, keep: &[bool]) -> SparseMatrix {
        assert_eq!(keep.len(), self.rows);
        assert_eq!(keep.len(), self.cols, "compression expects square matrices");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .filter(|&&(r, c, _)| keep[r] && keep[c])
                .copied()
                .collect(),
        }
    }

    /// Operator norm estimate by power iteration on A*A with a seeded
    /// start vector. Deterministic for a fixed seed; converges to relative
    /// tolerance 1e-9 or stops after 10000 rounds.
    pub fn operator_norm_estimate(&self, seed: u64) -> f64 {
        if self.entries.is_empty() || self.cols == 0 || self.rows == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<Complex64> = (0..self.cols)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        normalize(&mut v);
        let mut lambda = 0.0f64;
        for _ in 0..10_000 {
            let mut w = self.matvec_adjoint(&self.matvec(&v));
            let next = l2(&w);
            if next == 0.0 {
                return 0.0;
            }
            for x in &mut w {
                *x /= next;
            }
            v = w;
            if (next - lambda).abs() <= 1e-9 * next.max(1.0) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.max(0.0).sqrt()
    }

    /// Writes the matrix in MatrixMarket coordinate format (1-based
    /// indices, complex general).
    pub fn dump_matrix_market(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate complex general")?;
        writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for &(r, c, v) in &self.entries {
            writeln!(out, "{} {} {:.17e} {:.17e}", r + 1, c + 1, v.re, v.im)?;
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &SparseMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = l2(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}
