//! Interaction kernels `Ã(d)` and their exact integrals over rectangles.

use std::fmt;
use std::str::FromStr;

use crate::dense::SymMatrix;
use crate::error::{Error, Result};
use crate::linalg::sym_eigvals;
use crate::quadrature::GaussLegendre;
use crate::special::riesz_constant;

/// The four kernels of the laboratory. Riesz variants carry the parent
/// order `α ∈ (0, 1)`; `RieszHalf` uses the exponent `α/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `1 - d² + d³/3`
    SmoothCubic,
    /// `1 - d`
    LinearOneMinusD,
    /// `d^(α-1) / c_α`
    Riesz { alpha: f64 },
    /// `d^(α/2-1) / c_{α/2}`
    RieszHalf { alpha: f64 },
}

impl KernelSpec {
    pub fn riesz(alpha: f64) -> Result<Self> {
        let k = KernelSpec::Riesz { alpha };
        k.validate()?;
        Ok(k)
    }

    pub fn riesz_half(alpha: f64) -> Result<Self> {
        let k = KernelSpec::RieszHalf { alpha };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Riesz { alpha } | KernelSpec::RieszHalf { alpha } => {
                if alpha > 0.0 && alpha < 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "Riesz kernels in one dimension need 0 < alpha < 1, got {alpha}"
                    )))
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_riesz(&self) -> bool {
        matches!(
            self,
            KernelSpec::Riesz { .. } | KernelSpec::RieszHalf { .. }
        )
    }

    /// Order `β` of the Riesz potential (`α` or `α/2`); `None` for the
    /// polynomial kernels.
    pub fn riesz_order(&self) -> Option<f64> {
        match *self {
            KernelSpec::Riesz { alpha } => Some(alpha),
            KernelSpec::RieszHalf { alpha } => Some(0.5 * alpha),
            _ => None,
        }
    }

    /// `Ã(d)` for `d >= 0`.
    pub fn eval(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0) {
            return Err(Error::invalid(format!(
                "kernel distance must be >= 0, got {d}"
            )));
        }
        match *self {
            KernelSpec::SmoothCubic => Ok(cubic(d)),
            KernelSpec::LinearOneMinusD => Ok(1.0 - d),
            _ => {
                self.validate()?;
                let beta = self.riesz_order().unwrap();
                if d == 0.0 {
                    return Err(Error::SingularEvaluation {
                        kernel: self.to_string(),
                    });
                }
                Ok(d.powf(beta - 1.0) / riesz_constant(beta, 1)?)
            }
        }
    }

    /// `∫_a^b ∫_c^d Ã(|x - y|) dy dx`, exact. Degenerate rectangles give 0.
    pub fn double_primitive(&self, a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
        self.validate()?;
        if a == b || c == d {
            return Ok(0.0);
        }
        if a > b || c > d {
            return Err(Error::invalid(format!(
                "rectangle [{a}, {b}] x [{c}, {d}] is not ordered"
            )));
        }
        // Canonical argument order makes the result exactly symmetric under
        // swapping the two intervals.
        let ((a, b), (c, d)) = if (a, b) <= (c, d) {
            ((a, b), (c, d))
        } else {
            ((c, d), (a, b))
        };
        Ok(match *self {
            KernelSpec::SmoothCubic => polynomial_rect(cubic, cubic_self, a, b, c, d),
            KernelSpec::LinearOneMinusD => polynomial_rect(linear, linear_self, a, b, c, d),
            _ => {
                let beta = self.riesz_order().unwrap();
                riesz_rect(beta, a, b, c, d) / riesz_constant(beta, 1)?
            }
        })
    }

    /// `-Δ Ã(|d|)` where it is a function: `2(1 - |d|)` for the cubic kernel.
    pub fn neg_laplacian(&self, d: f64) -> Result<f64> {
        match self {
            KernelSpec::SmoothCubic => {
                if d.abs() <= 1.0 {
                    Ok(2.0 * (1.0 - d.abs()))
                } else {
                    Err(Error::invalid(format!("|d| must be <= 1, got {d}")))
                }
            }
            other => Err(Error::UnsupportedOperation(format!(
                "-ΔÃ of the {other} kernel is not a function"
            ))),
        }
    }
}

pub fn eval_kernel(spec: &KernelSpec, d: f64) -> Result<f64> {
    spec.eval(d)
}

pub fn double_primitive(spec: &KernelSpec, a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    spec.double_primitive(a, b, c, d)
}

pub fn neg_laplacian(spec: &KernelSpec, d: f64) -> Result<f64> {
    spec.neg_laplacian(d)
}

/// Smallest eigenvalue of the Gram matrix of the kernel against the
/// indicators of `n` uniform cells of `(0, 1)`. Reports, does not judge.
pub fn mercer_probe(spec: &KernelSpec, n: usize) -> Result<f64> {
    if n == 0 || n > 2048 {
        return Err(Error::invalid(format!(
            "mercer_probe needs 1 <= N <= 2048, got {n}"
        )));
    }
    spec.validate()?;
    let nf = n as f64;
    let gram = SymMatrix::from_upper_fn(n, |i, j| {
        spec.double_primitive(
            i as f64 / nf,
            (i + 1) as f64 / nf,
            j as f64 / nf,
            (j + 1) as f64 / nf,
        )
        .expect("validated kernel")
    });
    let eig = sym_eigvals(&gram)?;
    Ok(eig[0])
}

fn cubic(d: f64) -> f64 {
    1.0 - d * d + d * d * d / 3.0
}

fn linear(d: f64) -> f64 {
    1.0 - d
}

/// `∫_0^w ∫_0^w P(|x - y|) = 2 ∫_0^w P(t)(w - t) dt`.
fn cubic_self(w: f64) -> f64 {
    let w2 = w * w;
    w2 - w2 * w2 / 6.0 + w2 * w2 * w / 30.0
}

fn linear_self(w: f64) -> f64 {
    w * w - w * w * w / 3.0
}

/// Splits both intervals on the common partition `{a, b, c, d}` so every
/// sub-rectangle is either a diagonal square (closed form) or free of the
/// `|x - y|` kink (three-point tensor Gauss, exact for cubics).
fn polynomial_rect(
    kernel: fn(f64) -> f64,
    self_integral: fn(f64) -> f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
) -> f64 {
    let mut cuts = [a, b, c, d];
    cuts.sort_by(f64::total_cmp);
    let gauss = GaussLegendre::new(3);
    let pieces: Vec<(f64, f64)> = cuts
        .windows(2)
        .filter(|w| w[0] < w[1])
        .map(|w| (w[0], w[1]))
        .collect();
    let mut total = 0.0;
    for &(p0, p1) in pieces.iter().filter(|p| p.0 >= a && p.1 <= b) {
        for &(q0, q1) in pieces.iter().filter(|q| q.0 >= c && q.1 <= d) {
            if (p0, p1) == (q0, q1) {
                total += self_integral(p1 - p0);
            } else {
                for (x, wx) in gauss.on(p0, p1) {
                    for (y, wy) in gauss.on(q0, q1) {
                        total += wx * wy * kernel((x - y).abs());
                    }
                }
            }
        }
    }
    total
}

/// Unnormalized `∫∫ |x - y|^(β-1)` over `[a, b] × [c, d]` via the second
/// primitive `G(t) = |t|^(β+1) / (β(β+1))`.
fn riesz_rect(beta: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    let q = beta + 1.0;
    let g = |t: f64| t.abs().powf(q) / (beta * q);
    if b <= c {
        return separated_riesz(beta, c - b, b - a, d - c);
    }
    if d <= a {
        return separated_riesz(beta, a - d, d - c, b - a);
    }
    g(b - c) - g(a - c) - g(b - d) + g(a - d)
}

/// `G(u) - G(u+w1) - G(u+w2) + G(u+w1+w2)` for a gap `u >= 0`. Far apart
/// intervals use the `expm1`/`ln1p` form, which avoids subtracting four
/// nearly equal powers.
fn separated_riesz(beta: f64, u: f64, w1: f64, w2: f64) -> f64 {
    let q = beta + 1.0;
    if u >= w1.max(w2) {
        let e = |x: f64| (q * x.ln_1p()).exp_m1();
        let (s1, s2) = (w1 / u, w2 / u);
        u.powf(q) * (e(s1 + s2) - e(s1) - e(s2)) / (beta * q)
    } else {
        let g = |t: f64| t.powf(q) / (beta * q);
        g(u) - g(u + w1) - g(u + w2) + g(u + w1 + w2)
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::SmoothCubic => write!(f, "cubic"),
            KernelSpec::LinearOneMinusD => write!(f, "linear"),
            KernelSpec::Riesz { alpha } => write!(f, "riesz:{alpha}"),
            KernelSpec::RieszHalf { alpha } => write!(f, "riesz-half:{alpha}"),
        }
    }
}

/// `cubic | linear | riesz:<alpha> | riesz-half:<alpha>`
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_alpha = |text: &str| {
            text.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad alpha '{text}' in kernel '{s}'")))
        };
        match s.split_once(':') {
            None if s == "cubic" => Ok(KernelSpec::SmoothCubic),
            None if s == "linear" => Ok(KernelSpec::LinearOneMinusD),
            Some(("riesz", a)) => KernelSpec::riesz(parse_alpha(a)?),
            Some(("riesz-half", a)) => KernelSpec::riesz_half(parse_alpha(a)?),
            _ => Err(Error::invalid(format!(
                "unknown kernel '{s}' (expected cubic, linear, riesz:<alpha>, riesz-half:<alpha>)"
            ))),
        }
    }
}
