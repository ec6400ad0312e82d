//! Quadrature check of the nonlocal Korn inequality
//! `2 ∫∫ A ε_u(x):ε_u(x') ≥ ∫∫ A ∇u(x):∇u(x')` on the unit square with the
//! two-dimensional Riesz kernel `|r|^(α-2) / c_α`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::quadrature::GaussLegendre;
use crate::special::riesz_constant;

/// Gauss order per direction on separated cell pairs.
pub const FAR_QUAD_ORDER: usize = 4;
/// Subdivision depth for touching cell pairs.
pub const NEAR_LEVELS: usize = 3;

/// Polynomial `Σ c[i][j] xⁱ yʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    pub coeffs: Vec<Vec<f64>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { coeffs: Vec::new() }
    }

    pub fn monomial(c: f64, i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![0.0; j + 1]; i + 1];
        coeffs[i][j] = c;
        Poly2 { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Vec<f64>>) -> Self {
        Poly2 { coeffs }
    }

    /// `x (1 - x) y (1 - y)`
    pub fn bubble() -> Self {
        Poly2::from_coeffs(vec![
            vec![0.0; 3],
            vec![0.0, 1.0, -1.0],
            vec![0.0, -1.0, 1.0],
        ])
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |a, c| a * y + c)
        })
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let nx = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..nx)
            .map(|i| {
                let a = self.coeffs.get(i).map(Vec::as_slice).unwrap_or(&[]);
                let b = other.coeffs.get(i).map(Vec::as_slice).unwrap_or(&[]);
                (0..a.len().max(b.len()))
                    .map(|j| a.get(j).copied().unwrap_or(0.0) + b.get(j).copied().unwrap_or(0.0))
                    .collect()
            })
            .collect();
        Poly2 { coeffs }
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * s).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly2::zero();
        }
        let ny = |p: &Poly2| p.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let (ay, by) = (ny(self), ny(other));
        let mut out = vec![
            vec![0.0; (ay + by).saturating_sub(1)];
            self.coeffs.len() + other.coeffs.len() - 1
        ];
        for (i, ra) in self.coeffs.iter().enumerate() {
            for (j, a) in ra.iter().enumerate() {
                for (k, rb) in other.coeffs.iter().enumerate() {
                    for (l, b) in rb.iter().enumerate() {
                        out[i + k][j + l] += a * b;
                    }
                }
            }
        }
        Poly2 { coeffs: out }
    }

    pub fn dx(&self) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|c| i as f64 * c).collect())
                .collect(),
        }
    }

    pub fn dy(&self) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| j as f64 * c)
                        .collect()
                })
                .collect(),
        }
    }
}

/// Displacement `(u, v)` on the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub name: String,
    pub u: Poly2,
    pub v: Poly2,
}

impl VectorField {
    pub fn new(name: impl Into<String>, u: Poly2, v: Poly2) -> Self {
        VectorField {
            name: name.into(),
            u,
            v,
        }
    }

    pub fn gradient(&self) -> Gradient {
        Gradient {
            parts: [self.u.dx(), self.u.dy(), self.v.dx(), self.v.dy()],
        }
    }
}

/// `∇u = [[∂u/∂x, ∂u/∂y], [∂v/∂x, ∂v/∂y]]`, stored row-major.
#[derive(Debug, Clone)]
pub struct Gradient {
    parts: [Poly2; 4],
}

impl Gradient {
    pub fn at(&self, x: f64, y: f64) -> [f64; 4] {
        [
            self.parts[0].eval(x, y),
            self.parts[1].eval(x, y),
            self.parts[2].eval(x, y),
            self.parts[3].eval(x, y),
        ]
    }
}

/// `(2 ε:ε', ∇u:∇u')` for two gradients.
#[inline]
fn contractions(g: &[f64; 4], h: &[f64; 4]) -> (f64, f64) {
    let full = g[0] * h[0] + g[1] * h[1] + g[2] * h[2] + g[3] * h[3];
    let eg = 0.5 * (g[1] + g[2]);
    let eh = 0.5 * (h[1] + h[2]);
    (2.0 * (g[0] * h[0] + g[3] * h[3] + 2.0 * eg * eh), full)
}

/// The five reference fields: two axis-aligned bumps, a gradient field, a
/// rotated gradient, and a mixed field.
pub fn fixed_fields() -> Vec<VectorField> {
    let b = Poly2::bubble();
    let phi = b.mul(&b);
    let one_plus_x = Poly2::from_coeffs(vec![vec![1.0], vec![1.0]]);
    let one_plus_y = Poly2::from_coeffs(vec![vec![1.0, 1.0]]);
    let x = Poly2::monomial(1.0, 1, 0);
    vec![
        VectorField::new("bubble-x", b.clone(), Poly2::zero()),
        VectorField::new("bubble-y-skew", Poly2::zero(), b.mul(&one_plus_x)),
        VectorField::new("gradient", phi.dx(), phi.dy()),
        VectorField::new("rotated-gradient", phi.dy(), phi.dx().scale(-1.0)),
        VectorField::new("mixed", b.mul(&one_plus_y), b.mul(&x)),
    ]
}

/// Bubble times random quadratic coefficients, reproducible from `seed`.
pub fn random_fields(seed: u64, count: usize) -> Vec<VectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = Poly2::bubble();
    let quad = |rng: &mut ChaCha8Rng| {
        let c: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3 - i).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        b.mul(&Poly2::from_coeffs(c))
    };
    (0..count)
        .map(|k| {
            let u = quad(&mut rng);
            let v = quad(&mut rng);
            VectorField::new(format!("random-{seed}-{k}"), u, v)
        })
        .collect()
}

/// Kernel integrals `∫_P ∫_Q |x - y|^(α-2) dy dx` over two unit squares
/// whose lower-left corners differ by `o ∈ {-1, 0, 1}²`, without the
/// normalizing constant.
#[derive(Debug, Clone)]
struct NearTable {
    w: [[f64; 3]; 3],
}

impl NearTable {
    fn new(alpha: f64) -> Self {
        let mut w = [[0.0; 3]; 3];
        for (a, row) in w.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = touching_square_integral(alpha, a as i32 - 1, b as i32 - 1);
            }
        }
        NearTable { w }
    }

    fn get(&self, o1: i32, o2: i32) -> f64 {
        self.w[(o1 + 1) as usize][(o2 + 1) as usize]
    }
}

/// `∫ |r|^(α-2) T(r - o) dr`, `T` the overlap tent of two unit squares,
/// summed over the four unit squares of `o + [-1, 1]²`.
fn touching_square_integral(alpha: f64, o1: i32, o2: i32) -> f64 {
    let smooth = GaussLegendre::new(16);
    let angular = GaussLegendre::new(24);
    let mut total = 0.0;
    for q1 in [o1 - 1, o1] {
        for q2 in [o2 - 1, o2] {
            let (lo1, lo2) = (q1 as f64, q2 as f64);
            let corner_at_origin = (q1 == 0 || q1 == -1) && (q2 == 0 || q2 == -1);
            if corner_at_origin {
                // Reflect so the square is [0, 1]² with the origin at its corner.
                let s1 = if q1 == 0 { 1.0 } else { -1.0 };
                let s2 = if q2 == 0 { 1.0 } else { -1.0 };
                let lin = |s: f64, o: i32| {
                    let sg = if 0.5 * s - o as f64 >= 0.0 { 1.0 } else { -1.0 };
                    (1.0 + sg * o as f64, -sg * s)
                };
                let (a1, b1) = lin(s1, o1);
                let (a2, b2) = lin(s2, o2);
                let (c0, c1, c2, c3) = (a1 * a2, b1 * a2, a1 * b2, b1 * b2);
                for (t, wt) in angular.unit() {
                    let radial = (1.0 + t * t).powf(0.5 * (alpha - 2.0));
                    let lower = c0 / alpha + (c1 + c2 * t) / (alpha + 1.0) + c3 * t / (alpha + 2.0);
                    let upper = c0 / alpha + (c2 + c1 * t) / (alpha + 1.0) + c3 * t / (alpha + 2.0);
                    total += wt * radial * (lower + upper);
                }
            } else {
                for (r1, w1) in smooth.on(lo1, lo1 + 1.0) {
                    for (r2, w2) in smooth.on(lo2, lo2 + 1.0) {
                        let tent = (1.0 - (r1 - o1 as f64).abs()) * (1.0 - (r2 - o2 as f64).abs());
                        total += w1 * w2 * (r1 * r1 + r2 * r2).powf(0.5 * (alpha - 2.0)) * tent;
                    }
                }
            }
        }
    }
    total
}

#[derive(Debug, Clone, Copy)]
struct Square {
    x0: f64,
    y0: f64,
    s: f64,
}

impl Square {
    fn child(&self, i: usize, j: usize) -> Square {
        let s = 0.5 * self.s;
        Square {
            x0: self.x0 + i as f64 * s,
            y0: self.y0 + j as f64 * s,
            s,
        }
    }
}

struct Integrator<'a> {
    alpha: f64,
    inv_c: f64,
    grad: &'a Gradient,
    gauss: GaussLegendre,
    near: NearTable,
}

impl Integrator<'_> {
    fn kernel(&self, dx: f64, dy: f64) -> f64 {
        (dx * dx + dy * dy).powf(0.5 * (self.alpha - 2.0)) * self.inv_c
    }

    fn samples(&self, q: &Square) -> Vec<(f64, f64, f64, [f64; 4])> {
        let mut out = Vec::with_capacity(self.gauss.len() * self.gauss.len());
        for (x, wx) in self.gauss.on(q.x0, q.x0 + q.s) {
            for (y, wy) in self.gauss.on(q.y0, q.y0 + q.s) {
                out.push((x, y, wx * wy, self.grad.at(x, y)));
            }
        }
        out
    }

    fn separated(
        &self,
        p: &[(f64, f64, f64, [f64; 4])],
        q: &[(f64, f64, f64, [f64; 4])],
    ) -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for (x1, y1, w1, g1) in p {
            for (x2, y2, w2, g2) in q {
                let k = w1 * w2 * self.kernel(x1 - x2, y1 - y2);
                let (l, r) = contractions(g1, g2);
                acc.0 += k * l;
                acc.1 += k * r;
            }
        }
        acc
    }

    /// Touching or coincident squares of equal size.
    fn touching(&self, p: Square, q: Square, level: usize) -> (f64, f64) {
        if level == NEAR_LEVELS {
            let o1 = ((p.x0 - q.x0) / p.s).round() as i32;
            let o2 = ((p.y0 - q.y0) / p.s).round() as i32;
            let gp = self.grad.at(p.x0 + 0.5 * p.s, p.y0 + 0.5 * p.s);
            let gq = self.grad.at(q.x0 + 0.5 * q.s, q.y0 + 0.5 * q.s);
            let k = p.s.powf(self.alpha + 2.0) * self.near.get(o1, o2) * self.inv_c;
            let (l, r) = contractions(&gp, &gq);
            return (k * l, k * r);
        }
        let mut acc = (0.0, 0.0);
        for pi in 0..2 {
            for pj in 0..2 {
                let pc = p.child(pi, pj);
                let ps = self.samples(&pc);
                for qi in 0..2 {
                    for qj in 0..2 {
                        let qc = q.child(qi, qj);
                        let d1 = ((pc.x0 - qc.x0) / pc.s).round().abs();
                        let d2 = ((pc.y0 - qc.y0) / pc.s).round().abs();
                        let part = if d1 <= 1.0 && d2 <= 1.0 {
                            self.touching(pc, qc, level + 1)
                        } else {
                            self.separated(&ps, &self.samples(&qc))
                        };
                        acc.0 += part.0;
                        acc.1 += part.1;
                    }
                }
            }
        }
        acc
    }
}

/// `(lhs, rhs) = (2 ∫∫ A ε_u:ε_u', ∫∫ A ∇u:∇u')` for each field on a
/// `grid × grid` cell decomposition of the unit square.
pub fn korn_check_2d(alpha: f64, fields: &[VectorField], grid: usize) -> Result<Vec<(f64, f64)>> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 2), got {alpha}"
        )));
    }
    if grid == 0 || grid > 256 {
        return Err(Error::invalid(format!(
            "grid must lie in 1..=256, got {grid}"
        )));
    }
    let inv_c = 1.0 / riesz_constant(alpha, 2)?;
    let near = NearTable::new(alpha);
    let s = 1.0 / grid as f64;
    let cells: Vec<Square> = (0..grid * grid)
        .map(|c| Square {
            x0: (c / grid) as f64 * s,
            y0: (c % grid) as f64 * s,
            s,
        })
        .collect();
    fields
        .iter()
        .map(|field| {
            let grad = field.gradient();
            let integ = Integrator {
                alpha,
                inv_c,
                grad: &grad,
                gauss: GaussLegendre::new(FAR_QUAD_ORDER),
                near: near.clone(),
            };
            let samples: Vec<_> = cells.iter().map(|c| integ.samples(c)).collect();
            let rows = par::map_range(cells.len(), |a| {
                let (ai, aj) = (a / grid, a % grid);
                let mut acc = (0.0, 0.0);
                for b in 0..cells.len() {
                    let (bi, bj) = (b / grid, b % grid);
                    let part = if ai.abs_diff(bi) <= 1 && aj.abs_diff(bj) <= 1 {
                        integ.touching(cells[a], cells[b], 0)
                    } else {
                        integ.separated(&samples[a], &samples[b])
                    };
                    acc.0 += part.0;
                    acc.1 += part.1;
                }
                acc
            });
            Ok(rows
                .into_iter()
                .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)))
        })
        .collect()
}
