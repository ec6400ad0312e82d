//! Dense symmetric linear algebra: Cholesky, the symmetric eigenproblem
//! (Householder tridiagonalization + implicit QL), generalized extremes by
//! Cholesky congruence, and the fractional mass matrix `M₀(M₀⁻¹M₁)^s`.

use crate::dense::{dot, norm2, Mat, SymMatrix, Vector};
use crate::error::{Error, Result};
use crate::par;

/// Maximum QL iterations spent on a single eigenvalue.
const QL_MAX_ITER: usize = 60;

/// Lower-triangular `L` with `L Lᵀ = A`, stored row-major (upper part zero).
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    l: Vec<f64>,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.n + j]
    }

    pub fn as_mat(&self) -> Mat {
        Mat {
            rows: self.n,
            cols: self.n,
            data: self.l.clone(),
        }
    }

    /// `L⁻¹ b` in place.
    pub fn forward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s = dot(row, &b[..i]);
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }

    /// `L⁻ᵀ b` in place.
    pub fn backward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            b[i] /= self.l[i * n + i];
            let bi = b[i];
            for (k, bk) in b.iter_mut().enumerate().take(i) {
                *bk -= self.l[i * n + k] * bi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vector {
        let mut x = b.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        x
    }

    /// `L⁻¹ A L⁻ᵀ` for symmetric `A`, symmetrized.
    pub fn congruence_inverse(&self, a: &SymMatrix) -> SymMatrix {
        let n = self.n;
        assert_eq!(a.dim(), n);
        // Rows of A are its columns; row j of W is (L⁻¹ A[:, j])ᵀ, so W = A L⁻ᵀ.
        let mut w = a.as_slice().to_vec();
        par::for_each_row(&mut w, n, |_, row| self.forward(row));
        let mut wt = Mat {
            rows: n,
            cols: n,
            data: w,
        }
        .transpose()
        .data;
        par::for_each_row(&mut wt, n, |_, row| self.forward(row));
        // wt now holds (L⁻¹ W)ᵀ = (L⁻¹ A L⁻ᵀ)ᵀ.
        SymMatrix::symmetrized(n, wt)
    }
}

/// Cholesky factorization; fails on the first non-positive pivot.
pub fn cholesky(a: &SymMatrix) -> Result<CholeskyFactor> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s = dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
            let v = a[(i, j)] - s;
            if i == j {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: v });
                }
                l[i * n + i] = v.sqrt();
            } else {
                l[i * n + j] = v / l[j * n + j];
            }
        }
    }
    Ok(CholeskyFactor { n, l })
}

/// Solves `A x = b` for SPD `A`.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vector> {
    if b.len() != a.dim() {
        return Err(Error::invalid(format!(
            "right-hand side has length {}, matrix is {}x{}",
            b.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(cholesky(a)?.solve(b))
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vector,
    pub vectors: Mat,
}

impl SymEigen {
    pub fn vector(&self, j: usize) -> Vector {
        self.vectors.column(j)
    }
}

/// Full symmetric eigendecomposition.
pub fn sym_eig(a: &SymMatrix) -> Result<SymEigen> {
    let (values, vt) = tridiagonal_ql(a, true)?;
    Ok(SymEigen {
        values,
        vectors: vt.expect("vectors requested").transpose(),
    })
}

/// Eigenvalues only, ascending.
pub fn sym_eigvals(a: &SymMatrix) -> Result<Vector> {
    Ok(tridiagonal_ql(a, false)?.0)
}

/// Returns the ascending eigenvalues and, if requested, the eigenvectors as
/// the rows of a matrix.
fn tridiagonal_ql(a: &SymMatrix, want_vectors: bool) -> Result<(Vector, Option<Mat>)> {
    let n = a.dim();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| Mat::zeros(0, 0))));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericFailure(
            "matrix has non-finite entries".into(),
        ));
    }
    let mut vt = Mat::from_sym(a);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut vt, &mut d, &mut e, want_vectors);
    let mut vt = want_vectors.then_some(vt);
    implicit_ql(&mut d, &mut e, vt.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = vt.map(|vt| {
        let mut sorted = Mat::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            sorted.data[dst * n..(dst + 1) * n].copy_from_slice(vt.row(src));
        }
        sorted
    });
    Ok((values, vectors))
}

/// Householder reduction of a symmetric matrix to tridiagonal form (EISPACK
/// `tred2`). The working array is addressed transposed so that every inner
/// loop runs along a row; on return with `accumulate` its rows hold the
/// orthogonal basis.
fn householder_tridiagonalize(vt: &mut Mat, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = vt.rows;
    let idx = |i: usize, j: usize| j * n + i;
    let vd = &mut vt.data;
    for j in 0..n {
        d[j] = vd[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = vd[idx(i - 1, j)];
                vd[idx(i, j)] = 0.0;
                vd[idx(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                vd[idx(j, i)] = f;
                g = e[j] + vd[idx(j, j)] * f;
                for k in j + 1..i {
                    let vkj = vd[idx(k, j)];
                    g += vkj * d[k];
                    e[k] += vkj * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    vd[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = vd[idx(i - 1, j)];
                vd[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    if !accumulate {
        for (i, di) in d.iter_mut().enumerate() {
            *di = vd[idx(i, i)];
        }
        e[0] = 0.0;
        return;
    }
    for i in 0..n - 1 {
        vd[idx(n - 1, i)] = vd[idx(i, i)];
        vd[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = vd[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += vd[idx(k, i + 1)] * vd[idx(k, j)];
                }
                for k in 0..=i {
                    vd[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            vd[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = vd[idx(n - 1, j)];
        vd[idx(n - 1, j)] = 0.0;
    }
    vd[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the tridiagonal `(d, e)`; `vt` holds the
/// eigenvector basis as rows.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut vt: Option<&mut Mat>) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::NumericFailure(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(vt) = vt.as_deref_mut() {
                        let cols = vt.cols;
                        let (lo, hi) = vt.data.split_at_mut((i + 1) * cols);
                        let row_i = &mut lo[i * cols..];
                        let row_i1 = &mut hi[..cols];
                        for (a, b) in row_i.iter_mut().zip(row_i1.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Extreme eigenpairs of `K v = λ M v`.
#[derive(Debug, Clone)]
pub struct GenEigExtremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Eigenvector of `lambda_min`, normalized so that `vᵀ M v = 1`.
    pub eigvec_min: Vector,
}

/// Extremes of the generalized symmetric-definite problem through
/// `M = L Lᵀ` and the eigenvalues of `L⁻¹ K L⁻ᵀ`.
pub fn gen_eig_extremes(k: &SymMatrix, m: &SymMatrix) -> Result<GenEigExtremes> {
    if k.dim() != m.dim() {
        return Err(Error::invalid("K and M have different sizes"));
    }
    if k.dim() == 0 {
        return Err(Error::invalid("empty matrices"));
    }
    let l = cholesky(m)?;
    let c = l.congruence_inverse(k);
    let values = sym_eigvals(&c)?;
    let lambda_min = values[0];
    let lambda_max = *values.last().unwrap();
    let mut w = lowest_eigenvector(&c, lambda_min, lambda_max)?;
    l.backward(&mut w);
    Ok(GenEigExtremes {
        lambda_min,
        lambda_max,
        eigvec_min: w,
    })
}

/// Inverse iteration with a shift just below the known smallest eigenvalue.
fn lowest_eigenvector(c: &SymMatrix, lambda_min: f64, lambda_max: f64) -> Result<Vector> {
    let n = c.dim();
    let scale = lambda_max
        .abs()
        .max(lambda_min.abs())
        .max(f64::MIN_POSITIVE);
    let mut gap = 1e-10 * scale;
    let factor = loop {
        let shift = lambda_min - gap;
        let mut shifted = c.clone();
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        match cholesky(&shifted) {
            Ok(f) => break f,
            Err(_) if gap < scale => gap *= 10.0,
            Err(e) => return Err(e),
        }
    };
    // Deterministic start with no special symmetry.
    let mut x: Vector = (0..n)
        .map(|i| 1.0 + ((i * 7 + 3) % 11) as f64 / 11.0)
        .collect();
    for _ in 0..4 {
        x = factor.solve(&x);
        let nrm = norm2(&x);
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    Ok(x)
}

/// `M = M₀ (M₀⁻¹ M₁)^s = M₀ V diag(μ^s) Vᵀ M₀` with `M₁ V = M₀ V diag(μ)`
/// and `Vᵀ M₀ V = I`.
pub fn fractional_mass(m0: &SymMatrix, m1: &SymMatrix, s: f64) -> Result<SymMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid(format!(
            "fractional power s must be in [0, 1], got {s}"
        )));
    }
    let basis = FractionalBasis::new(m0, m1)?;
    basis.mass(s)
}

/// The generalized eigenbasis of `(M₁, M₀)`, reusable across powers `s`.
#[derive(Debug, Clone)]
pub struct FractionalBasis {
    /// `L W`, so that `M₀ V = L W`.
    lw: Mat,
    pub mu: Vector,
}

impl FractionalBasis {
    pub fn new(m0: &SymMatrix, m1: &SymMatrix) -> Result<Self> {
        if m0.dim() != m1.dim() {
            return Err(Error::invalid("M0 and M1 have different sizes"));
        }
        let l = cholesky(m0)?;
        let c = l.congruence_inverse(m1);
        let eig = sym_eig(&c)?;
        if eig.values.first().is_some_and(|&mu| mu <= 0.0) {
            return Err(Error::NotPositiveDefinite {
                index: 0,
                pivot: eig.values[0],
            });
        }
        let lw = l.as_mat().matmul(&eig.vectors);
        Ok(FractionalBasis { lw, mu: eig.values })
    }

    /// `V = L⁻ᵀ W`, the `M₀`-orthonormal generalized eigenvectors (columns).
    pub fn eigenvectors(&self, m0_factor: &CholeskyFactor) -> Mat {
        let n = self.mu.len();
        let mut v = Mat::zeros(n, n);
        for j in 0..n {
            let mut col = self.lw.column(j);
            m0_factor.forward(&mut col);
            m0_factor.backward(&mut col);
            for i in 0..n {
                v.set(i, j, col[i]);
            }
        }
        v
    }

    pub fn mass(&self, s: f64) -> Result<SymMatrix> {
        let n = self.mu.len();
        let half: Vec<f64> = self.mu.iter().map(|&mu| mu.powf(0.5 * s)).collect();
        let mut y = self.lw.clone();
        for i in 0..n {
            for (j, hj) in half.iter().enumerate() {
                y.data[i * n + j] *= hj;
            }
        }
        Ok(y.gram_rows())
    }
}

/// `½ uᵀ K u - Fᵀ u`, the discrete energy minimized by the solution of
/// `K u = F`.
pub fn energy(k: &SymMatrix, load: &[f64], u: &[f64]) -> f64 {
    0.5 * k.bilinear(u, u) - dot(load, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymMatrix::from_upper_fn(n, |i, j| vals[i * n + j])
    }

    fn random_spd(n: usize, seed: u64) -> SymMatrix {
        let a = random_sym(n, seed);
        let g = Mat::from_sym(&a).gram_rows();
        let mut out = g.clone();
        for i in 0..n {
            out[(i, i)] += n as f64 * 0.1;
        }
        out
    }

    #[test]
    fn cholesky_small_cases() {
        let l = cholesky(&SymMatrix::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        let a = SymMatrix::from_row_major(2, vec![4.0, 2.0, 2.0, 3.0]).unwrap();
        let l = cholesky(&a).unwrap();
        assert_eq!(l.get(0, 0), 2.0);
        assert_eq!(l.get(1, 0), 1.0);
        assert_relative_eq!(l.get(1, 1), 2f64.sqrt(), max_relative = 1e-15);
        let bad = SymMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            cholesky(&bad),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = random_spd(30, 5);
        let l = cholesky(&a).unwrap().as_mat();
        let llt = l.matmul(&l.transpose());
        let diff: f64 = llt
            .data
            .iter()
            .zip(a.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        assert!(diff.sqrt() <= 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn solve_spd_cases() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(solve_spd(&SymMatrix::identity(3), &b).unwrap(), b);
        let two = SymMatrix::identity(4).scaled(2.0);
        for x in solve_spd(&two, &[1.0; 4]).unwrap() {
            assert_relative_eq!(x, 0.5, max_relative = 1e-15);
        }
        let a = random_spd(50, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rhs: Vec<f64> = (0..50).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_spd(&a, &rhs).unwrap();
        let r: Vec<f64> = a.matvec(&x).iter().zip(&rhs).map(|(p, q)| p - q).collect();
        assert!(norm2(&r) <= 1e-10 * a.frobenius_norm() * norm2(&x));
        assert!(solve_spd(&a, &[1.0]).is_err());
    }

    #[test]
    fn eig_small_cases() {
        let d = SymMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        let e = sym_eig(&d).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        let swap = SymMatrix::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = sym_eig(&swap).unwrap();
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(e.values[1], 1.0, epsilon = 1e-15);
        let one = SymMatrix::from_diagonal(&[5.0]);
        assert_eq!(sym_eig(&one).unwrap().values, vec![5.0]);
    }

    #[test]
    fn eig_reconstructs_random_matrix() {
        let a = random_sym(40, 42);
        let e = sym_eig(&a).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &e.vectors;
        let vtv = v.transpose().matmul(v);
        for i in 0..40 {
            for j in 0..40 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((vtv.get(i, j) - target).abs() < 1e-10);
            }
        }
        let mut scaled = v.clone();
        for i in 0..40 {
            for j in 0..40 {
                scaled.data[i * 40 + j] *= e.values[j];
            }
        }
        let recon = scaled.matmul(&v.transpose());
        let diff: f64 = recon
            .data
            .iter()
            .zip(a.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        assert!(diff.sqrt() <= 1e-10 * a.frobenius_norm());
        let vals = sym_eigvals(&a).unwrap();
        for (x, y) in vals.iter().zip(&e.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gen_eig_trivial_pairs() {
        let m = random_spd(12, 1);
        let g = gen_eig_extremes(&m, &m).unwrap();
        assert_relative_eq!(g.lambda_min, 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.lambda_max, 1.0, epsilon = 1e-12);
        let g2 = gen_eig_extremes(&m.scaled(2.0), &m).unwrap();
        assert_relative_eq!(g2.lambda_min, 2.0, epsilon = 1e-12);
        assert_relative_eq!(g2.lambda_max, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gen_eig_residual_and_rayleigh_bound() {
        let k = random_sym(25, 9);
        let m = random_spd(25, 10);
        let g = gen_eig_extremes(&k, &m).unwrap();
        let v = &g.eigvec_min;
        let kv = k.matvec(v);
        let mv = m.matvec(v);
        let r: Vec<f64> = kv
            .iter()
            .zip(&mv)
            .map(|(a, b)| a - g.lambda_min * b)
            .collect();
        assert!(norm2(&r) <= 1e-9 * k.frobenius_norm() * norm2(v));
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let x: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(g.lambda_min * m.bilinear(&x, &x) <= k.bilinear(&x, &x) + 1e-12);
        }
        assert_relative_eq!(
            g.lambda_min * m.bilinear(v, v),
            k.bilinear(v, v),
            max_relative = 1e-8
        );
    }

    #[test]
    fn fractional_mass_endpoints_and_spectrum() {
        let m0 = random_spd(15, 20);
        let m1 = random_spd(15, 21);
        let f0 = fractional_mass(&m0, &m1, 0.0).unwrap();
        assert!(f0.rel_frobenius_diff(&m0) < 1e-10);
        let f1 = fractional_mass(&m0, &m1, 1.0).unwrap();
        assert!(f1.rel_frobenius_diff(&m1) < 1e-10);
        assert!(fractional_mass(&m0, &m1, 1.5).is_err());

        // Vᵀ M(s) V = diag(μ^s) for the M₀-orthonormal eigenvectors.
        let basis = FractionalBasis::new(&m0, &m1).unwrap();
        let v = basis.eigenvectors(&cholesky(&m0).unwrap());
        let ms = basis.mass(0.3).unwrap();
        let vtmv = v.transpose().matmul(&Mat::from_sym(&ms)).matmul(&v);
        for i in 0..15 {
            for j in 0..15 {
                let target = if i == j { basis.mu[i].powf(0.3) } else { 0.0 };
                assert!(
                    (vtmv.get(i, j) - target).abs() < 1e-9 * basis.mu[14],
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn energy_is_minimized_by_solution() {
        let k = random_spd(10, 4);
        let f: Vec<f64> = (0..10).map(|i| (i as f64).sin()).collect();
        let u = solve_spd(&k, &f).unwrap();
        let e0 = energy(&k, &f, &u);
        for i in 0..10 {
            let mut w = u.clone();
            w[i] += 1e-3;
            assert!(energy(&k, &f, &w) > e0);
        }
        // I(u) = -½ Fᵀu at the minimizer
        assert_relative_eq!(e0, -0.5 * dot(&f, &u), max_relative = 1e-12);
    }
}
