//! Special functions behind the cap-area model.
//!
//! Everything here is a pure function of its arguments. Quantities that
//! overflow or underflow `f64` in high dimension (sphere areas, deep cap
//! tails) have log-domain variants, which are the authoritative ones for
//! `n` in the hundreds.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// ln(2π) / 2
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Below this the gamma recurrence shifts the argument up before the
/// asymptotic series is applied.
const STIRLING_MIN: f64 = 10.0;

/// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

pub const BETA_MAX_ITERATIONS: usize = 500;
pub const BETA_TOLERANCE: f64 = 1e-14;
const TINY: f64 = 1e-300;

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("log_gamma", format!("x = {x} must be positive and finite")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= STIRLING_MIN {
        return Ok(stirling(x));
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv_sq = inv * inv;
    let mut series = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        series = series * inv_sq + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series * inv
}

/// ln B(a, b)
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Validated arguments of the regularized incomplete beta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
    x: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64, x: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(
                "regularized_incomplete_beta",
                format!("shape parameters must be positive, got a = {a}, b = {b}"),
            ));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(
                "regularized_incomplete_beta",
                format!("x = {x} outside [0, 1]"),
            ));
        }
        Ok(Self { a, b, x })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// I_x(a, b).
pub fn regularized_incomplete_beta(p: &BetaParams) -> Result<f64> {
    incomplete_beta_split(p.a, p.b, p.x, 1.0 - p.x).map(|v| v.linear())
}

/// ln I_x(a, b), finite wherever I_x(a, b) > 0 even when the linear value
/// underflows `f64`.
pub fn ln_regularized_incomplete_beta(p: &BetaParams) -> Result<f64> {
    incomplete_beta_split(p.a, p.b, p.x, 1.0 - p.x).map(|v| v.ln())
}

/// I_x(a, b) with `y = 1 - x` supplied separately so callers that know the
/// complement exactly (e.g. cos²Ω next to sin²Ω) do not lose it to rounding.
pub(crate) fn ln_incomplete_beta_pair(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    incomplete_beta_split(a, b, x, y).map(|v| v.ln())
}

/// Result of the incomplete beta evaluation on whichever side of the
/// symmetry the continued fraction was run.
enum BetaValue {
    /// I = exp(ln_value)
    Direct { ln_value: f64 },
    /// I = 1 - complement
    Complement { complement: f64 },
}

impl BetaValue {
    fn linear(&self) -> f64 {
        match *self {
            BetaValue::Direct { ln_value } => ln_value.exp(),
            BetaValue::Complement { complement } => 1.0 - complement,
        }
    }

    fn ln(&self) -> f64 {
        match *self {
            BetaValue::Direct { ln_value } => ln_value,
            BetaValue::Complement { complement } => (-complement).ln_1p(),
        }
    }
}

fn incomplete_beta_split(a: f64, b: f64, x: f64, y: f64) -> Result<BetaValue> {
    if x <= 0.0 {
        return Ok(BetaValue::Direct {
            ln_value: f64::NEG_INFINITY,
        });
    }
    if y <= 0.0 {
        return Ok(BetaValue::Complement { complement: 0.0 });
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        let ln_complement = ln_beta_direct(b, a, y, x)?;
        Ok(BetaValue::Complement {
            complement: ln_complement.exp(),
        })
    } else {
        Ok(BetaValue::Direct {
            ln_value: ln_beta_direct(a, b, x, y)?,
        })
    }
}

/// ln I_x(a, b) by the continued fraction, valid on the side where it
/// converges quickly.
fn ln_beta_direct(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * y.ln() - log_beta(a, b)? - a.ln();
    let cf = beta_continued_fraction(a, b, x)?;
    Ok(ln_front + cf.ln())
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=BETA_MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + even * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + even / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + odd * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + odd / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let step = d * c;
        h *= step;

        if (step - 1.0).abs() < BETA_TOLERANCE {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        op: "regularized_incomplete_beta",
        iterations: BETA_MAX_ITERATIONS,
    })
}

/// Ambient dimension and radius of a hypersphere {x ∈ Rⁿ : ‖x‖ = r}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    n: u32,
    r: f64,
}

impl SphereSpec {
    pub fn new(n: u32, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("hypersphere_area", format!("dimension {n} < 2")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("hypersphere_area", format!("radius {r} must be positive")));
        }
        Ok(Self { n, r })
    }

    pub fn unit(n: u32) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.r
    }
}

/// ln A_n(r) = ln 2 + (n/2) ln π − ln Γ(n/2) + (n − 1) ln r
pub fn ln_hypersphere_area(s: &SphereSpec) -> f64 {
    let n = f64::from(s.n);
    // n / 2 >= 1, so log_gamma cannot fail
    let lg = log_gamma(n / 2.0).expect("n >= 2");
    std::f64::consts::LN_2 + 0.5 * n * PI.ln() - lg + (n - 1.0) * s.r.ln()
}

/// Surface area of the sphere. Overflows or underflows for large `n`; use
/// [`ln_hypersphere_area`] there.
pub fn hypersphere_area(s: &SphereSpec) -> f64 {
    ln_hypersphere_area(s).exp()
}

fn check_cap(n: u32, omega: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("cap_area_fraction", format!("dimension {n} < 2")));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&omega) {
        return Err(Error::domain(
            "cap_area_fraction",
            format!("cap half-angle {omega} outside [0, pi/2]"),
        ));
    }
    Ok(())
}

/// Fraction of the sphere's surface inside a cap of half-angle `omega`:
/// ½ I_{sin²Ω}((n−1)/2, ½). Radius independent.
pub fn cap_area_fraction(n: u32, omega: f64) -> Result<f64> {
    Ok(ln_cap_area_fraction(n, omega)?.exp())
}

/// ln of [`cap_area_fraction`].
pub fn ln_cap_area_fraction(n: u32, omega: f64) -> Result<f64> {
    check_cap(n, omega)?;
    let (sin, cos) = omega.sin_cos();
    Ok(ln_cap_beta(n, sin * sin, cos * cos)? - std::f64::consts::LN_2)
}

/// ln I_{x}((n−1)/2, ½) with x = sin²Ω and its complement cos²Ω.
pub(crate) fn ln_cap_beta(n: u32, sin_sq: f64, cos_sq: f64) -> Result<f64> {
    ln_incomplete_beta_pair(0.5 * f64::from(n - 1), 0.5, sin_sq, cos_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn log_gamma_identities() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(close(log_gamma(0.5).unwrap(), PI.sqrt().ln(), 1e-14));
        assert!(close(log_gamma(5.0).unwrap(), 24f64.ln(), 1e-14));
        assert!(close(log_gamma(11.0).unwrap(), 3_628_800f64.ln(), 1e-13));
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain { .. })));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_small_arguments() {
        // Γ(0.1) = 9.513507698668731836...
        assert!(close(log_gamma(0.1).unwrap(), 9.513_507_698_668_732f64.ln(), 1e-13));
        // Γ(x) ~ 1/x as x -> 0
        let x = 1e-10;
        assert!(close(log_gamma(x).unwrap(), -x.ln() - 0.577_215_664_901_532_9 * x, 1e-12));
    }

    #[test]
    fn beta_closed_forms() {
        let i = |a, b, x| regularized_incomplete_beta(&BetaParams::new(a, b, x).unwrap()).unwrap();
        assert!(close(i(0.5, 0.5, 0.5), 0.5, 1e-14));
        assert!(close(i(1.0, 0.5, 0.75), 0.5, 1e-14));
        assert!(close(i(1.0, 1.0, 0.3), 0.3, 1e-14));
        assert_eq!(i(3.0, 2.0, 0.0), 0.0);
        assert_eq!(i(3.0, 2.0, 1.0), 1.0);
        // I_x(a, 1) = x^a
        assert!(close(i(4.0, 1.0, 0.6), 0.6f64.powi(4), 1e-14));
    }

    #[test]
    fn beta_rejects_bad_params() {
        assert!(BetaParams::new(0.0, 0.5, 0.5).is_err());
        assert!(BetaParams::new(1.0, -0.5, 0.5).is_err());
        assert!(BetaParams::new(1.0, 0.5, 1.5).is_err());
        assert!(BetaParams::new(1.0, 0.5, -1e-3).is_err());
        assert!(BetaParams::new(1.0, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn beta_reports_nonconvergence() {
        // Huge symmetric shapes at the switch point need far more than the cap.
        let p = BetaParams::new(1e12, 1e12, 0.5).unwrap();
        match regularized_incomplete_beta(&p) {
            Err(Error::NoConvergence { iterations, .. }) => {
                assert_eq!(iterations, BETA_MAX_ITERATIONS)
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn ln_beta_survives_underflow() {
        let p = BetaParams::new(255.5, 0.5, 0.01).unwrap();
        let ln = ln_regularized_incomplete_beta(&p).unwrap();
        assert!(ln.is_finite() && ln < -1000.0);
        assert_eq!(regularized_incomplete_beta(&p).unwrap(), 0.0);
    }

    #[test]
    fn sphere_areas() {
        let area = |n, r| hypersphere_area(&SphereSpec::new(n, r).unwrap());
        assert!(close(area(2, 1.0), 2.0 * PI, 1e-13));
        assert!(close(area(3, 1.0), 4.0 * PI, 1e-13));
        assert!(close(area(3, 2.0), 16.0 * PI, 1e-12));
        // S^3 in R^4: 2π² r³
        assert!(close(area(4, 1.5), 2.0 * PI * PI * 1.5f64.powi(3), 1e-12));
        assert!(SphereSpec::new(1, 1.0).is_err());
        assert!(SphereSpec::new(3, 0.0).is_err());
    }

    #[test]
    fn cap_fraction_examples() {
        assert!(close(cap_area_fraction(3, std::f64::consts::FRAC_PI_2).unwrap(), 0.5, 1e-15));
        assert!(close(cap_area_fraction(3, PI / 3.0).unwrap(), 0.25, 1e-14));
        assert!(close(cap_area_fraction(2, PI / 4.0).unwrap(), 0.25, 1e-14));
        assert_eq!(cap_area_fraction(512, 0.0).unwrap(), 0.0);
        assert!(matches!(cap_area_fraction(3, 1.6), Err(Error::Domain { .. })));
        assert!(cap_area_fraction(3, -0.1).is_err());
        assert!(cap_area_fraction(1, 0.5).is_err());
    }
}
