//! Dense assembly of the nonlocal stiffness matrix, the local/nonlocal
//! mixture, and the heterogeneous form built from half-order Riesz strains.

use std::fmt;
use std::str::FromStr;

use crate::dense::{dot, Mat, SymMatrix};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::mesh::{assemble_stiffness_local, shape_dt, FemSpace};
use crate::par;
use crate::profile::StiffnessProfile;
use crate::quadrature::{graded_points, GaussLegendre};
use crate::special::riesz_constant;

/// Gauss order per direction for P2 element pairs.
pub const PAIR_QUAD_ORDER: usize = 8;
/// Gauss order per half subinterval in the heterogeneous outer integral.
pub const OUTER_QUAD_ORDER: usize = 16;
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

/// Range of the outer variable `z` in the heterogeneous form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterDomainMode {
    /// `z ∈ [-L, 1 + L]` plus a certified bound on the discarded tails.
    /// `truncation: None` picks the smallest `L` meeting `tail_tol`.
    FullLine {
        truncation: Option<f64>,
        tail_tol: f64,
    },
    /// `z ∈ (0, 1)`.
    DomainOnly,
}

impl OuterDomainMode {
    pub fn full_line() -> Self {
        OuterDomainMode::FullLine {
            truncation: None,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

impl Default for OuterDomainMode {
    fn default() -> Self {
        Self::full_line()
    }
}

impl fmt::Display for OuterDomainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OuterDomainMode::DomainOnly => write!(f, "domain"),
            OuterDomainMode::FullLine {
                truncation,
                tail_tol,
            } => {
                write!(f, "full:tol={tail_tol:e}")?;
                if let Some(l) = truncation {
                    write!(f, ",L={l}")?;
                }
                Ok(())
            }
        }
    }
}

/// `domain`, `full`, `full:tol=1e-10`, `full:L=40,tol=1e-8`.
impl FromStr for OuterDomainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, opts) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "domain" | "domain-only" => {
                if opts.is_empty() {
                    Ok(OuterDomainMode::DomainOnly)
                } else {
                    Err(Error::invalid("domain mode takes no options"))
                }
            }
            "full" | "full-line" => {
                let mut truncation = None;
                let mut tail_tol = DEFAULT_TAIL_TOL;
                for kv in opts.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::invalid(format!("mode option '{kv}' lacks '='")))?;
                    let v: f64 = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad number in mode option '{kv}'")))?;
                    match k.trim() {
                        "L" | "truncation" => truncation = Some(v),
                        "tol" | "tail_tol" => tail_tol = v,
                        other => {
                            return Err(Error::invalid(format!("unknown mode option '{other}'")))
                        }
                    }
                }
                if truncation.is_some_and(|l| !(l > 0.0 && l.is_finite())) || !(tail_tol > 0.0) {
                    return Err(Error::invalid(
                        "truncation and tail tolerance must be positive",
                    ));
                }
                Ok(OuterDomainMode::FullLine {
                    truncation,
                    tail_tol,
                })
            }
            other => Err(Error::invalid(format!(
                "unknown outer-domain mode '{other}' (expected 'full' or 'domain')"
            ))),
        }
    }
}

/// `∫_e ∫_{e+j} Ã(|x - y|) φ_a'(x) φ_b'(y) dy dx` for element offsets
/// `j = 0..N`, in local numbering.
type PairTable = Vec<[[f64; 3]; 3]>;

fn pair_tables(space: &FemSpace, spec: &KernelSpec) -> Result<PairTable> {
    let n_el = space.n_elements();
    let h = space.h();
    match space.degree() {
        1 => {
            let slope = [-1.0 / h, 1.0 / h];
            par::map_range(n_el, |j| {
                let (c, d) = (j as f64 * h, (j + 1) as f64 * h);
                let t = spec.double_primitive(0.0, h, c, d)?;
                let mut loc = [[0.0; 3]; 3];
                for a in 0..2 {
                    for b in 0..2 {
                        loc[a][b] = slope[a] * slope[b] * t;
                    }
                }
                Ok(loc)
            })
            .into_iter()
            .collect()
        }
        _ => {
            if spec.is_riesz() {
                return Err(Error::UnsupportedOperation(format!(
                    "the {spec} kernel is only assembled on P1 spaces"
                )));
            }
            let gauss = GaussLegendre::new(PAIR_QUAD_ORDER);
            let kernel = |d: f64| spec.eval(d).expect("polynomial kernels are total");
            Ok(par::map_range(n_el, |j| {
                let mut loc = [[0.0; 3]; 3];
                if j == 0 {
                    // Split along x = y; on x > y use x = u, y = u v.
                    let mut tri = [[0.0; 3]; 3];
                    for (u, wu) in gauss.unit() {
                        let du = shape_dt(2, u);
                        for (v, wv) in gauss.unit() {
                            let y = u * v;
                            let dy = shape_dt(2, y);
                            let w = wu * wv * u * kernel(h * (u - y));
                            for a in 0..3 {
                                for b in 0..3 {
                                    tri[a][b] += w * du[a] * dy[b];
                                }
                            }
                        }
                    }
                    for a in 0..3 {
                        for b in 0..3 {
                            loc[a][b] = tri[a][b] + tri[b][a];
                        }
                    }
                } else {
                    let off = j as f64;
                    for (t, wt) in gauss.unit() {
                        let dt = shape_dt(2, t);
                        for (s, ws) in gauss.unit() {
                            let ds = shape_dt(2, s);
                            let w = wt * ws * kernel(h * (off + s - t));
                            for a in 0..3 {
                                for b in 0..3 {
                                    loc[a][b] += w * dt[a] * ds[b];
                                }
                            }
                        }
                    }
                }
                loc
            }))
        }
    }
}

fn assemble_from_pairs(space: &FemSpace, table: &PairTable, scale: f64) -> SymMatrix {
    SymMatrix::from_upper_fn(space.n_dofs(), |k, m| {
        let mut sum = 0.0;
        for e in space.support(k) {
            let a = space.local_index(k, e);
            for f in space.support(m) {
                let b = space.local_index(m, f);
                sum += if f >= e {
                    table[f - e][a][b]
                } else {
                    table[e - f][b][a]
                };
            }
        }
        scale * sum
    })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite and positive, got {v}"
        )))
    }
}

/// `K_km = C ∫∫ Ã(|x - x'|) e_k'(x) e_m'(x') dx' dx`.
///
/// P1 entries are exact sums of slopes times rectangle integrals; P2 (smooth
/// kernels only) uses tensor Gauss per element pair, split along the diagonal
/// on coincident elements, which is exact for these polynomial kernels.
pub fn assemble_nonlocal_stiffness(
    space: &FemSpace,
    spec: &KernelSpec,
    c_const: f64,
) -> Result<SymMatrix> {
    check_positive("stiffness constant", c_const)?;
    spec.validate()?;
    let table = pair_tables(space, spec)?;
    Ok(assemble_from_pairs(space, &table, c_const))
}

/// `B = m · (local stiffness with c(x)) + (1 - m) · K` with `K` assembled
/// at the constant value of `c`.
pub fn assemble_mixture(
    space: &FemSpace,
    spec: &KernelSpec,
    m: f64,
    c: &StiffnessProfile,
) -> Result<SymMatrix> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::invalid(format!(
            "mixture fraction m must lie in (0, 1], got {m}"
        )));
    }
    let c_nl = c.uniform_value().ok_or_else(|| {
        Error::invalid("the nonlocal part of the mixture needs a constant stiffness")
    })?;
    let local = assemble_stiffness_local(space, c);
    let nonlocal = assemble_nonlocal_stiffness(space, spec, c_nl)?;
    Ok(local.lin_comb(m, &nonlocal, 1.0 - m))
}

/// Values `s_k(z) = ∫ Ã_{α/2}(|z - x|) e_k'(x) dx` of the nonlocal strains
/// of the P1 hat functions.
#[derive(Debug, Clone)]
pub struct HalfStrain {
    beta: f64,
    /// `1 / (β c_β)`
    scale: f64,
    h: f64,
    n_elements: usize,
}

impl HalfStrain {
    pub fn new(space: &FemSpace, alpha: f64) -> Result<Self> {
        if space.degree() != 1 {
            return Err(Error::UnsupportedOperation(
                "nonlocal strains are implemented for P1 spaces only".into(),
            ));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        let beta = 0.5 * alpha;
        Ok(HalfStrain {
            beta,
            scale: 1.0 / (beta * riesz_constant(beta, 1)?),
            h: space.h(),
            n_elements: space.n_elements(),
        })
    }

    /// `g(t) = sign(t) |t|^β / (β c_β)`, the primitive of `Ã_{α/2}`.
    #[inline]
    pub fn primitive(&self, t: f64) -> f64 {
        t.signum() * t.abs().powf(self.beta) * self.scale
    }

    /// `s_k(z)` for the hat centred at `x_c`:
    /// `(g(t + h) - 2 g(t) + g(t - h)) / h` with `t = z - x_c`.
    pub fn hat(&self, t: f64) -> f64 {
        let h = self.h;
        let m = t.abs();
        if m <= 2.0 * h {
            return (self.primitive(t + h) - 2.0 * self.primitive(t) + self.primitive(t - h)) / h;
        }
        // t^β [(1 + x)^β - 2 + (1 - x)^β] with x = h / |t| ≤ 1/2.
        let x = h / m;
        let bracket = if x < 0.125 {
            let x2 = x * x;
            let mut coef = 1.0;
            let mut pow = 1.0;
            let mut sum = 0.0;
            for k in (2..=24).step_by(2) {
                coef *= (self.beta - (k - 2) as f64) * (self.beta - (k - 1) as f64)
                    / ((k - 1) as f64 * k as f64);
                pow *= x2;
                let term = coef * pow;
                sum += term;
                if term.abs() <= 1e-18 * sum.abs() {
                    break;
                }
            }
            2.0 * sum
        } else {
            let e = |y: f64| (self.beta * y.ln_1p()).exp_m1();
            e(x) + e(-x)
        };
        t.signum() * m.powf(self.beta) * self.scale * bracket / h
    }

    /// All `s_k(z)`, written to `out` (length `N - 1`).
    pub fn basis_values(&self, z: f64, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            let xc = (k + 1) as f64 / self.n_elements as f64;
            *o = self.hat(z - xc);
        }
    }

    /// `E` with `|s_k(z)| ≤ E · dist(z, (0, 1))^(β - 2)` for every hat.
    pub fn envelope(&self) -> f64 {
        (1.0 - self.beta) * self.scale * self.beta * self.h
    }

    /// Upper bound on `∫_{|z| beyond L} c_out s_k s_m dz` for any pair of
    /// hats: `2 c_out E² L^(α-3) / (3 - α)`.
    pub fn tail_bound(&self, outside_value: f64, truncation: f64) -> f64 {
        let alpha = 2.0 * self.beta;
        let e = self.envelope();
        2.0 * outside_value * e * e * truncation.powf(alpha - 3.0) / (3.0 - alpha)
    }

    /// Smallest `L` whose tail bound does not exceed `tol`.
    pub fn minimal_truncation(&self, outside_value: f64, tol: f64) -> f64 {
        let alpha = 2.0 * self.beta;
        let e = self.envelope();
        (2.0 * outside_value * e * e / ((3.0 - alpha) * tol)).powf(1.0 / (3.0 - alpha))
    }
}

/// `∫_Ω Ã_{α/2}(|z - x|) u_h'(x) dx` for P1 coefficients, in closed form.
pub fn nonlocal_strain(space: &FemSpace, coeffs: &[f64], alpha: f64, z: f64) -> Result<f64> {
    let strain = HalfStrain::new(space, alpha)?;
    if coeffs.len() != space.n_dofs() {
        return Err(Error::invalid(format!(
            "expected {} coefficients, got {}",
            space.n_dofs(),
            coeffs.len()
        )));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z must be finite"));
    }
    Ok(coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(k, &c)| c * strain.hat(z - space.dof_position(k)))
        .sum())
}

/// Outer quadrature: `(z, weight · c(z))`.
fn outer_points(
    space: &FemSpace,
    profile: &StiffnessProfile,
    truncation: Option<f64>,
) -> Vec<(f64, f64)> {
    let gauss = GaussLegendre::new(OUTER_QUAD_ORDER);
    let mut cuts: Vec<f64> = space.mesh().nodes().to_vec();
    cuts.extend_from_slice(profile.breakpoints());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut pts = Vec::new();
    let mut buf = Vec::new();
    for w in cuts.windows(2) {
        let c = profile.value_at(0.5 * (w[0] + w[1]));
        buf.clear();
        graded_points(&gauss, w[0], w[1], &mut buf);
        pts.extend(buf.iter().map(|&(z, wt)| (z, wt * c)));
    }
    if let Some(l) = truncation {
        // Geometric layers 1 + [0, h], [h, 2h], [2h, 4h], ... up to L.
        let c = profile.outside_value();
        let mut edges = vec![0.0];
        let mut step = space.h();
        while *edges.last().unwrap() < l {
            edges.push((edges.last().unwrap() + step).min(l));
            if edges.len() > 2 {
                step *= 2.0;
            }
        }
        for w in edges.windows(2) {
            buf.clear();
            graded_points(&gauss, w[0], w[1], &mut buf);
            for &(d, wt) in &buf {
                pts.push((1.0 + d, wt * c));
                pts.push((-d, wt * c));
            }
        }
    }
    pts
}

/// `K_km = ∫_Z c(z) s_k(z) s_m(z) dz` with `Z = ℝ` (truncated at `L`) or
/// `Z = (0, 1)`.
///
/// Every subinterval delimited by mesh nodes, profile breakpoints and the
/// exterior layers gets Gauss–Legendre of order [`OUTER_QUAD_ORDER`] on each
/// half, graded towards the ends to absorb the `|t|^(α/2)` cusps.
pub fn assemble_heterogeneous(
    space: &FemSpace,
    alpha: f64,
    profile: &StiffnessProfile,
    mode: OuterDomainMode,
) -> Result<SymMatrix> {
    let strain = HalfStrain::new(space, alpha)?;
    let truncation = match mode {
        OuterDomainMode::DomainOnly => None,
        OuterDomainMode::FullLine {
            truncation,
            tail_tol,
        } => {
            check_positive("tail tolerance", tail_tol)?;
            let minimal = strain.minimal_truncation(profile.outside_value(), tail_tol);
            match truncation {
                None => Some(minimal.max(space.h())),
                Some(l) => {
                    check_positive("truncation", l)?;
                    let bound = strain.tail_bound(profile.outside_value(), l);
                    if bound > tail_tol * (1.0 + 1e-12) {
                        return Err(Error::TruncationTooSmall {
                            truncation: l,
                            bound,
                            minimal,
                        });
                    }
                    Some(l)
                }
            }
        }
    };
    let pts = outer_points(space, profile, truncation);
    let n = space.n_dofs();
    let columns = par::map(&pts, |&(z, _)| {
        let mut col = vec![0.0; n];
        strain.basis_values(z, &mut col);
        col
    });
    let q = pts.len();
    let mut a = Mat::zeros(n, q);
    let mut b = Mat::zeros(n, q);
    for (j, (col, &(_, w))) in columns.iter().zip(&pts).enumerate() {
        for (i, v) in col.iter().enumerate() {
            a.data[i * q + j] = *v;
            b.data[i * q + j] = w * v;
        }
    }
    // Both orders of accumulation, averaged.
    Ok(SymMatrix::from_upper_fn(n, |k, m| {
        0.5 * (dot(b.row(k), a.row(m)) + dot(b.row(m), a.row(k)))
    }))
}
