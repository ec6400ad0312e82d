//! Dense vectors and symmetric matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::par;

pub type Vector = Vec<f64>;

/// Dense symmetric matrix in full row-major storage.
///
/// Constructors that take an entry function only evaluate the upper
/// triangle and mirror it, so `(i, j)` and `(j, i)` are the same number.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated for `i <= j` only.
    pub fn from_upper_fn<F>(n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Send + Sync,
    {
        let mut data = vec![0.0; n * n];
        par::for_each_row(&mut data, n, |i, row| {
            for (j, v) in row.iter_mut().enumerate().skip(i) {
                *v = f(i, j);
            }
        });
        let mut m = SymMatrix { n, data };
        m.mirror_upper();
        m
    }

    /// Wraps row-major data, checking exact symmetry.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Option<Self> {
        if data.len() != n * n {
            return None;
        }
        let m = SymMatrix { n, data };
        m.is_symmetric().then_some(m)
    }

    /// Symmetrizes arbitrary row-major data by averaging `(i, j)` and `(j, i)`.
    pub fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        SymMatrix { n, data }
    }

    pub(crate) fn mirror_upper(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                self.data[j * n + i] = self.data[i * n + j];
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| self.data[i * n + j] == self.data[j * n + i]))
    }

    pub fn matvec(&self, x: &[f64]) -> Vector {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    pub fn scaled(&self, s: f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &SymMatrix, b: f64) -> Self {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `‖self - other‖_F / ‖other‖_F`.
    pub fn rel_frobenius_diff(&self, other: &SymMatrix) -> f64 {
        let diff: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        diff.sqrt() / other.frobenius_norm()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SymMatrix {
    /// Writes through this only touch one triangle; callers mirror.
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n.min(8) {
            write!(f, "  ")?;
            for j in 0..self.n.min(8) {
                write!(f, "{:>12.5e} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square matrix in row-major storage with no symmetry assumption
/// (factors, eigenvector bases).
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_sym(a: &SymMatrix) -> Self {
        Mat {
            rows: a.dim(),
            cols: a.dim(),
            data: a.as_slice().to_vec(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let (n, m) = (self.rows, other.cols);
        let mut out = Mat::zeros(n, m);
        let inner = self.cols;
        par::for_each_row(&mut out.data, m, |i, row| {
            for k in 0..inner {
                let a = self.data[i * inner + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * m..(k + 1) * m];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        });
        out
    }

    /// `self · selfᵀ`, exactly symmetric.
    pub fn gram_rows(&self) -> SymMatrix {
        let c = self.cols;
        SymMatrix::from_upper_fn(self.rows, |i, j| {
            dot(
                &self.data[i * c..(i + 1) * c],
                &self.data[j * c..(j + 1) * c],
            )
        })
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
