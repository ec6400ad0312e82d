//! Gamma function and the Riesz-potential normalization constant.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's Gamma function for `0 < x <= 100`.
///
/// Arguments below 1/2 are shifted up by one with `Γ(x) = Γ(x + 1) / x`;
/// no reflection formula is needed on the positive axis.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x > 100.0 {
        return Err(Error::invalid(format!(
            "gamma is defined here for 0 < x <= 100, got {x}"
        )));
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * sum
}

/// `c_α = π^{n/2} 2^α Γ(α/2) / Γ((n - α)/2)`.
///
/// Valid for `0 < α < n`; in one dimension that means `0 < α < 1`.
pub fn riesz_constant(alpha: f64, n: u32) -> Result<f64> {
    let nf = f64::from(n);
    if n == 0 || !(alpha > 0.0 && alpha < nf) {
        return Err(Error::invalid(format!(
            "Riesz constant needs 0 < alpha < n, got alpha = {alpha}, n = {n}"
        )));
    }
    Ok(PI.powf(0.5 * nf) * 2f64.powf(alpha) * gamma(0.5 * alpha)? / gamma(0.5 * (nf - alpha))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(
            gamma(1.0 / 3.0).unwrap(),
            2.678_938_534_707_747_6,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(100.5).is_err());
    }

    #[test]
    fn gamma_large_argument_stays_finite() {
        // Γ(100) = 99!
        assert_relative_eq!(
            gamma(100.0).unwrap(),
            9.332_621_544_394_415e155,
            max_relative = 1e-12
        );
    }

    #[test]
    fn riesz_constant_values() {
        assert_relative_eq!(
            riesz_constant(2.0 / 3.0, 1).unwrap(),
            1.354_117_939_426_400_4,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            riesz_constant(1.0, 2).unwrap(),
            2.0 * PI,
            max_relative = 1e-14
        );
        assert!(riesz_constant(1.0, 1).is_err());
        assert!(riesz_constant(0.0, 1).is_err());
        assert!(riesz_constant(2.0, 2).is_err());
    }
}
