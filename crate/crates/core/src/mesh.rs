//! Uniform meshes of `(0, 1)`, conforming P1/P2 spaces with homogeneous
//! Dirichlet conditions, and the classical (local) matrices.
//!
//! Only interior degrees of freedom exist: boundary rows and columns are
//! never created, so every assembled Gram matrix is SPD.

use crate::dense::{SymMatrix, Vector};
use crate::error::{Error, Result};
use crate::profile::StiffnessProfile;
use crate::quadrature::GaussLegendre;

/// Points per element for load vectors (exact up to degree 11).
pub const LOAD_QUAD_POINTS: usize = 6;
/// Points per element for `L²` errors.
pub const ERROR_QUAD_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    n_elements: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(n_elements: usize) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::invalid("mesh needs at least one element"));
        }
        let nf = n_elements as f64;
        let nodes = (0..=n_elements).map(|i| i as f64 / nf).collect();
        Ok(Mesh1D {
            n_elements,
            h: 1.0 / nf,
            nodes,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `[x_e, x_{e+1}]`.
    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    /// Element containing `x ∈ [0, 1]`; the right endpoint belongs to the
    /// last element.
    pub fn locate(&self, x: f64) -> usize {
        ((x * self.n_elements as f64).floor() as usize).min(self.n_elements - 1)
    }
}

/// Continuous piecewise polynomials of degree `p` vanishing at 0 and 1.
///
/// Degrees of freedom are ordered by position: for `p = 1` dof `k` is the
/// hat at node `k + 1`; for `p = 2` dof `k` sits at `(k + 1)·h/2`, vertex
/// and midpoint functions alternating.
#[derive(Debug, Clone, PartialEq)]
pub struct FemSpace {
    mesh: Mesh1D,
    degree: usize,
}

/// `build_space(N, p)` with `N >= 2`, `p ∈ {1, 2}`.
pub fn build_space(n_elements: usize, degree: usize) -> Result<FemSpace> {
    if n_elements < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 elements for an interior node, got {n_elements}"
        )));
    }
    if !(1..=2).contains(&degree) {
        return Err(Error::invalid(format!(
            "degree must be 1 or 2, got {degree}"
        )));
    }
    Ok(FemSpace {
        mesh: Mesh1D::uniform(n_elements)?,
        degree,
    })
}

impl FemSpace {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn h(&self) -> f64 {
        self.mesh.h
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements
    }

    pub fn n_dofs(&self) -> usize {
        self.degree * self.mesh.n_elements - 1
    }

    /// Location of dof `k`.
    pub fn dof_position(&self, k: usize) -> f64 {
        (k + 1) as f64 / (self.degree * self.mesh.n_elements) as f64
    }

    /// Global dof of local node `l` of element `e`, if it is not a boundary
    /// node.
    pub fn local_dof(&self, e: usize, l: usize) -> Option<usize> {
        let idx = self.degree * e + l;
        (idx >= 1 && idx < self.degree * self.mesh.n_elements).then(|| idx - 1)
    }

    /// Elements whose closure contains the support of dof `k` (one or two).
    pub fn support(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let idx = k + 1;
        if self.degree == 1 {
            idx - 1..=idx
        } else if idx % 2 == 1 {
            idx / 2..=idx / 2
        } else {
            idx / 2 - 1..=idx / 2
        }
    }

    /// Local index of dof `k` within element `e` (must be in the support).
    pub fn local_index(&self, k: usize, e: usize) -> usize {
        k + 1 - self.degree * e
    }

    /// Basis function values on the reference element `t ∈ [0, 1]`.
    pub fn shape(&self, t: f64) -> [f64; 3] {
        shape(self.degree, t)
    }

    /// Basis derivatives with respect to `t`.
    pub fn shape_dt(&self, t: f64) -> [f64; 3] {
        shape_dt(self.degree, t)
    }

    /// Nodal interpolant of `f` (boundary values are dropped).
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vector {
        (0..self.n_dofs())
            .map(|k| f(self.dof_position(k)))
            .collect()
    }

    fn check_coeffs(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.n_dofs() {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                self.n_dofs(),
                coeffs.len()
            )));
        }
        Ok(())
    }

    /// Value of the FE function on element `e` at reference coordinate `t`.
    pub(crate) fn eval_local(&self, coeffs: &[f64], e: usize, t: f64) -> f64 {
        let phi = self.shape(t);
        (0..=self.degree)
            .filter_map(|l| self.local_dof(e, l).map(|k| coeffs[k] * phi[l]))
            .sum()
    }
}

pub(crate) fn shape(degree: usize, t: f64) -> [f64; 3] {
    match degree {
        1 => [1.0 - t, t, 0.0],
        _ => [
            (1.0 - t) * (1.0 - 2.0 * t),
            4.0 * t * (1.0 - t),
            t * (2.0 * t - 1.0),
        ],
    }
}

pub(crate) fn shape_dt(degree: usize, t: f64) -> [f64; 3] {
    match degree {
        1 => [-1.0, 1.0, 0.0],
        _ => [4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0],
    }
}

/// Scatters per-element symmetric local matrices into the interior-dof
/// matrix. Only the upper triangle is accumulated, then mirrored.
fn assemble_local<F>(space: &FemSpace, local: F) -> SymMatrix
where
    F: Fn(usize) -> [[f64; 3]; 3],
{
    let n = space.n_dofs();
    let mut m = SymMatrix::zeros(n);
    for e in 0..space.n_elements() {
        let loc = local(e);
        for a in 0..=space.degree {
            let Some(i) = space.local_dof(e, a) else {
                continue;
            };
            for b in 0..=space.degree {
                let Some(j) = space.local_dof(e, b) else {
                    continue;
                };
                if i <= j {
                    m[(i, j)] += loc[a][b];
                }
            }
        }
    }
    m.mirror_upper();
    m
}

/// `M₀`: the `L²` Gram matrix of the basis, from closed-form element
/// matrices.
pub fn assemble_mass_l2(space: &FemSpace) -> SymMatrix {
    let h = space.h();
    let local = match space.degree {
        1 => {
            let d = h / 3.0;
            let o = h / 6.0;
            [[d, o, 0.0], [o, d, 0.0], [0.0; 3]]
        }
        _ => {
            let s = h / 30.0;
            [
                [4.0 * s, 2.0 * s, -s],
                [2.0 * s, 16.0 * s, 2.0 * s],
                [-s, 2.0 * s, 4.0 * s],
            ]
        }
    };
    assemble_local(space, |_| local)
}

/// `∫ c(x) e_k' e_m' dx`, exact for piecewise-constant `c` (elements are
/// split at the profile's breakpoints).
pub fn assemble_stiffness_local(space: &FemSpace, c: &StiffnessProfile) -> SymMatrix {
    let h = space.h();
    let p = space.degree;
    let gauss = GaussLegendre::new(2);
    assemble_local(space, |e| {
        let (xa, xb) = space.mesh.element(e);
        let mut loc = [[0.0; 3]; 3];
        for (lo, hi, value) in c.pieces(xa, xb) {
            let (ta, tb) = ((lo - xa) / h, (hi - xa) / h);
            for (t, w) in gauss.on(ta, tb) {
                let d = shape_dt(p, t);
                for a in 0..=p {
                    for b in 0..=p {
                        loc[a][b] += value * w * d[a] * d[b] / h;
                    }
                }
            }
        }
        loc
    })
}

/// `F_k = ∫ f e_k dx`, Gauss with [`LOAD_QUAD_POINTS`] points per element.
pub fn assemble_load(space: &FemSpace, f: impl Fn(f64) -> f64) -> Vector {
    let gauss = GaussLegendre::new(LOAD_QUAD_POINTS);
    let h = space.h();
    let mut load = vec![0.0; space.n_dofs()];
    for e in 0..space.n_elements() {
        let (xa, _) = space.mesh.element(e);
        for (t, w) in gauss.unit() {
            let fx = f(xa + h * t) * w * h;
            let phi = space.shape(t);
            for l in 0..=space.degree {
                if let Some(k) = space.local_dof(e, l) {
                    load[k] += fx * phi[l];
                }
            }
        }
    }
    load
}

pub fn eval_fem(space: &FemSpace, coeffs: &[f64], x: f64) -> Result<f64> {
    space.check_coeffs(coeffs)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} lies outside [0, 1]")));
    }
    let e = space.mesh.locate(x);
    let t = (x - space.mesh.nodes[e]) / space.h();
    Ok(space.eval_local(coeffs, e, t))
}

/// `‖u_h - ref‖_{L²(0,1)}` with [`ERROR_QUAD_POINTS`] Gauss points per
/// element; the endpoints are never sampled.
pub fn l2_error(space: &FemSpace, coeffs: &[f64], reference: impl Fn(f64) -> f64) -> f64 {
    assert_eq!(coeffs.len(), space.n_dofs(), "coefficient length mismatch");
    let gauss = GaussLegendre::new(ERROR_QUAD_POINTS);
    let h = space.h();
    let mut total = 0.0;
    for e in 0..space.n_elements() {
        let (xa, _) = space.mesh.element(e);
        for (t, w) in gauss.unit() {
            let diff = space.eval_local(coeffs, e, t) - reference(xa + h * t);
            total += w * h * diff * diff;
        }
    }
    total.sqrt()
}

/// `√(uᵀ M₀ u)`.
pub fn l2_norm(space: &FemSpace, coeffs: &[f64]) -> f64 {
    l2_error(space, coeffs, |_| 0.0)
}
