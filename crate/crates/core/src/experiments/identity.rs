//! Quadrature check of `∫∫ Ã(|x-y|) u'(x) v'(y) = ∫∫ 2 tri(x-y) u(x) v(y)`
//! for the cubic kernel and functions vanishing at both ends.

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::mesh::{shape_dt, FemSpace};
use crate::par;
use crate::quadrature::GaussLegendre;

/// Cells per direction of the product grid.
pub const IDENTITY_CELLS: usize = 64;

/// A function on `[0, 1]` together with its derivative.
pub trait Differentiable: Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

impl<F, G> Differentiable for (F, G)
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        (self.1)(x)
    }
}

/// Polynomial with coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    /// `x (1 - x)`
    pub fn bubble() -> Self {
        Poly1::new(vec![0.0, 1.0, -1.0])
    }

    /// `x² (1 - x)`
    pub fn skew_bubble() -> Self {
        Poly1::new(vec![0.0, 0.0, 1.0, -1.0])
    }
}

impl Differentiable for Poly1 {
    fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }
}

/// A finite-element function; derivatives are taken elementwise.
#[derive(Debug, Clone, Copy)]
pub struct FemFunction<'a> {
    pub space: &'a FemSpace,
    pub coeffs: &'a [f64],
}

impl Differentiable for FemFunction<'_> {
    fn value(&self, x: f64) -> f64 {
        let e = self.space.mesh().locate(x);
        let t = (x - self.space.mesh().nodes()[e]) / self.space.h();
        self.space.eval_local(self.coeffs, e, t)
    }

    fn derivative(&self, x: f64) -> f64 {
        let e = self.space.mesh().locate(x);
        let t = (x - self.space.mesh().nodes()[e]) / self.space.h();
        let d = shape_dt(self.space.degree(), t);
        (0..=self.space.degree())
            .filter_map(|l| self.space.local_dof(e, l).map(|k| self.coeffs[k] * d[l]))
            .sum::<f64>()
            / self.space.h()
    }
}

fn tri(d: f64) -> f64 {
    (1.0 - d.abs()).max(0.0)
}

/// Both sides of the identity with Gauss of order `quad_order` per direction
/// on an `IDENTITY_CELLS²` grid; diagonal cells are split along `x = y`.
pub fn laplace_identity_check(
    u: &dyn Differentiable,
    v: &dyn Differentiable,
    quad_order: usize,
) -> Result<(f64, f64)> {
    if !(1..=64).contains(&quad_order) {
        return Err(Error::invalid(format!(
            "quadrature order must lie in 1..=64, got {quad_order}"
        )));
    }
    let gauss = GaussLegendre::new(quad_order);
    let kernel = KernelSpec::SmoothCubic;
    let w = 1.0 / IDENTITY_CELLS as f64;
    let pair = |x: f64, y: f64| {
        let lhs = kernel.eval((x - y).abs()).expect("cubic kernel is total")
            * u.derivative(x)
            * v.derivative(y);
        let rhs = 2.0 * tri(x - y) * u.value(x) * v.value(y);
        (lhs, rhs)
    };
    let rows = par::map_range(IDENTITY_CELLS, |i| {
        let xa = i as f64 * w;
        let mut acc = (0.0, 0.0);
        for j in 0..IDENTITY_CELLS {
            let ya = j as f64 * w;
            if i == j {
                for (s, ws) in gauss.unit() {
                    for (t, wt) in gauss.unit() {
                        let jac = ws * wt * w * w * s;
                        let (near, far) = (xa + w * s, xa + w * s * t);
                        let (l1, r1) = pair(near, far);
                        let (l2, r2) = pair(far, near);
                        acc.0 += jac * (l1 + l2);
                        acc.1 += jac * (r1 + r2);
                    }
                }
            } else {
                for (s, ws) in gauss.unit() {
                    for (t, wt) in gauss.unit() {
                        let jac = ws * wt * w * w;
                        let (l, r) = pair(xa + w * s, ya + w * t);
                        acc.0 += jac * l;
                        acc.1 += jac * r;
                    }
                }
            }
        }
        acc
    });
    Ok(rows
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)))
}
