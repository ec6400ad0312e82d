//! End-to-end numerical studies: eigenvalue scans, solves, convergence
//! against the closed-form fractional solution, coercivity scans, and the
//! quadrature-level identity and Korn checks.

pub mod identity;
pub mod korn;

use std::fmt;
use std::str::FromStr;

pub use crate::linalg::energy;
pub use identity::{laplace_identity_check, Differentiable, FemFunction, Poly1};
pub use korn::{fixed_fields, korn_check_2d, random_fields, Poly2, VectorField};

use crate::assembly::{assemble_heterogeneous, assemble_nonlocal_stiffness, OuterDomainMode};
use crate::dense::Vector;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::linalg::{gen_eig_extremes, solve_spd, FractionalBasis};
use crate::mesh::{
    assemble_load, assemble_mass_l2, assemble_stiffness_local, build_space, l2_error, l2_norm,
};
use crate::profile::StiffnessProfile;
use crate::special::gamma;

/// One mesh of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub n: usize,
    pub h: f64,
    pub primary: f64,
    pub secondary: Option<f64>,
}

impl ScanRecord {
    pub fn new(n: usize, primary: f64, secondary: Option<f64>) -> Self {
        ScanRecord {
            n,
            h: 1.0 / n as f64,
            primary,
            secondary,
        }
    }
}

/// `log(value) ≈ slope · log(h) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares on `(log h, log primary)`.
pub fn slope_fit(records: &[ScanRecord]) -> Result<RateFit> {
    if records.len() < 3 {
        return Err(Error::invalid(format!(
            "a rate fit needs at least 3 records, got {}",
            records.len()
        )));
    }
    if let Some(r) = records.iter().find(|r| !(r.primary > 0.0) || !(r.h > 0.0)) {
        return Err(Error::invalid(format!(
            "cannot fit a rate through non-positive value {} at N = {}",
            r.primary, r.n
        )));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.h.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.primary.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid(
            "rate fit needs at least two distinct mesh sizes",
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Asymptotic rate: [`slope_fit`] after dropping the two coarsest meshes
/// when at least six records are available.
pub fn fit_rate(records: &[ScanRecord]) -> Result<RateFit> {
    if records.len() >= 6 {
        let mut sorted = records.to_vec();
        sorted.sort_by_key(|r| r.n);
        slope_fit(&sorted[2..])
    } else {
        slope_fit(records)
    }
}

/// Right-hand sides available by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadFunction {
    One,
    X,
    SinPiX,
}

impl LoadFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            LoadFunction::One => 1.0,
            LoadFunction::X => x,
            LoadFunction::SinPiX => (std::f64::consts::PI * x).sin(),
        }
    }
}

impl fmt::Display for LoadFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadFunction::One => "one",
            LoadFunction::X => "x",
            LoadFunction::SinPiX => "sin-pi-x",
        })
    }
}

impl FromStr for LoadFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "one" | "1" => Ok(LoadFunction::One),
            "x" => Ok(LoadFunction::X),
            "sin-pi-x" => Ok(LoadFunction::SinPiX),
            other => Err(Error::invalid(format!(
                "unknown load '{other}' (expected one, x, sin-pi-x)"
            ))),
        }
    }
}

/// `λ_min` (primary) and `λ_max` (secondary) of `K v = λ M₀ v` per mesh.
pub fn eig_scan(spec: &KernelSpec, p: usize, n_list: &[usize]) -> Result<Vec<ScanRecord>> {
    n_list
        .iter()
        .map(|&n| {
            check_mesh(n)?;
            let space = build_space(n, p)?;
            let k = assemble_nonlocal_stiffness(&space, spec, 1.0)?;
            let m0 = assemble_mass_l2(&space);
            let ext = gen_eig_extremes(&k, &m0)?;
            Ok(ScanRecord::new(n, ext.lambda_min, Some(ext.lambda_max)))
        })
        .collect()
}

fn check_mesh(n: usize) -> Result<()> {
    if n < 4 {
        Err(Error::invalid(format!("scans need N >= 4, got {n}")))
    } else {
        Ok(())
    }
}

/// Coefficients of the discrete solution of `K u = F` with `C = 1`.
pub fn solve_eringen(
    spec: &KernelSpec,
    f: impl Fn(f64) -> f64,
    n: usize,
    p: usize,
) -> Result<Vector> {
    let space = build_space(n, p)?;
    let k = assemble_nonlocal_stiffness(&space, spec, 1.0)?;
    let load = assemble_load(&space, f);
    solve_spd(&k, &load)
}

/// `L²` norms of the discrete solutions per mesh, the divergence diagnostic
/// for kernels without a coercive form.
pub fn solution_norms(
    spec: &KernelSpec,
    f: impl Fn(f64) -> f64 + Copy,
    p: usize,
    n_list: &[usize],
) -> Result<Vec<ScanRecord>> {
    n_list
        .iter()
        .map(|&n| {
            let space = build_space(n, p)?;
            let u = solve_eringen(spec, f, n, p)?;
            Ok(ScanRecord::new(n, l2_norm(&space, &u), None))
        })
        .collect()
}

/// Coefficient of `(x(1 - x))^s` in the solution of `(-Δ)^s u = 1` on
/// `(0, 1)` with zero exterior data.
pub fn analytic_coefficient(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(2f64.powf(-2.0 * s) * gamma(0.5)? / (gamma(0.5 + s)? * gamma(1.0 + s)?))
}

pub fn analytic_fractional_solution(s: f64, x: f64) -> Result<f64> {
    let c = analytic_coefficient(s)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} lies outside [0, 1]")));
    }
    Ok(c * (x * (1.0 - x)).powf(s))
}

/// `L²` errors of the P1 Riesz solution with `f = 1` against the analytic
/// solution, and the fitted rate.
pub fn convergence_study(alpha: f64, n_list: &[usize]) -> Result<(Vec<ScanRecord>, RateFit)> {
    let spec = KernelSpec::riesz(alpha)?;
    let s = 1.0 - 0.5 * alpha;
    let coef = analytic_coefficient(s)?;
    let records = n_list
        .iter()
        .map(|&n| {
            let space = build_space(n, 1)?;
            let u = solve_eringen(&spec, |_| 1.0, n, 1)?;
            let err = l2_error(&space, &u, |x| coef * (x * (1.0 - x)).powf(s));
            Ok(ScanRecord::new(n, err, None))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_rate(&records)?;
    Ok((records, fit))
}

/// Stiffness used by [`coercivity_scan`].
#[derive(Debug, Clone, PartialEq)]
pub enum CoercivityForm {
    /// Riesz kernel of order `α` with `C = 1`.
    Homogeneous,
    /// Half-order Riesz strains weighted by `c(z)`.
    Heterogeneous {
        profile: StiffnessProfile,
        mode: OuterDomainMode,
    },
}

/// Extreme eigenvalues of `K v = λ M v` with `M = M₀(M₀⁻¹M₁)^s`,
/// `s = 1 - α/2`.
pub fn coercivity_scan(
    alpha: f64,
    n_list: &[usize],
    form: &CoercivityForm,
) -> Result<Vec<ScanRecord>> {
    let spec = KernelSpec::riesz(alpha)?;
    let s = 1.0 - 0.5 * alpha;
    let unit = StiffnessProfile::constant(1.0)?;
    n_list
        .iter()
        .map(|&n| {
            check_mesh(n)?;
            let space = build_space(n, 1)?;
            let k = match form {
                CoercivityForm::Homogeneous => assemble_nonlocal_stiffness(&space, &spec, 1.0)?,
                CoercivityForm::Heterogeneous { profile, mode } => {
                    assemble_heterogeneous(&space, alpha, profile, *mode)?
                }
            };
            let m0 = assemble_mass_l2(&space);
            let m1 = assemble_stiffness_local(&space, &unit);
            let m = FractionalBasis::new(&m0, &m1)?.mass(s)?;
            let ext = gen_eig_extremes(&k, &m)?;
            Ok(ScanRecord::new(n, ext.lambda_min, Some(ext.lambda_max)))
        })
        .collect()
}

/// Dyadic list `start, 2·start, …` up to and including `end`.
pub fn dyadic(start: usize, end: usize) -> Vec<usize> {
    std::iter::successors(Some(start.max(1)), |&n| Some(n * 2))
        .take_while(|&n| n <= end)
        .collect()
}
