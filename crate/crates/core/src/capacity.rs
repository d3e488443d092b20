//! The capacity model: ratio of two hyperspherical cap areas.
//!
//! The population occupies a cap of half-angle Ω₁ = θ + δ and a single
//! identity one of half-angle Ω₂ = φ + δ; capacity is
//! I_{sin²Ω₁}((n−1)/2, ½) / I_{sin²Ω₂}((n−1)/2, ½). Both half-angles are
//! clamped to the hemisphere, where the cap formula stops being valid.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::specfun;

/// Slack allowed on cosine inputs before they are rejected rather than
/// clamped into [−1, 1].
pub const COSINE_SLACK: f64 = 1e-9;

/// An angle in radians, within [0, π].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(FRAC_PI_2);

    pub fn new(radians: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radians) {
            return Err(Error::domain("Angle::new", format!("{radians} rad outside [0, pi]")));
        }
        Ok(Angle(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// How a cosine similarity maps to an angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleConvention {
    /// arccos(s) / 2: the score spans the full angle, the cap half of it.
    Half,
    /// arccos(s)
    Full,
}

impl AngleConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleConvention::Half => "half",
            AngleConvention::Full => "full",
        }
    }
}

impl fmt::Display for AngleConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AngleConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "half" => Ok(AngleConvention::Half),
            "full" => Ok(AngleConvention::Full),
            other => Err(Error::domain(
                "AngleConvention",
                format!("unknown convention {other:?} (expected half or full)"),
            )),
        }
    }
}

/// Conventions used for each of the three model angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub theta: AngleConvention,
    pub phi: AngleConvention,
    pub delta: AngleConvention,
}

impl Default for Conventions {
    /// θ and φ halve the arccos; δ is the raw matcher threshold angle.
    fn default() -> Self {
        Self {
            theta: AngleConvention::Half,
            phi: AngleConvention::Half,
            delta: AngleConvention::Full,
        }
    }
}

pub fn angle_from_cosine(s: f64, conv: AngleConvention) -> Result<Angle> {
    if s.is_nan() || s.abs() > 1.0 + COSINE_SLACK {
        return Err(Error::domain(
            "angle_from_cosine",
            format!("cosine {s} outside [-1, 1]"),
        ));
    }
    let full = s.clamp(-1.0, 1.0).acos();
    Ok(Angle(match conv {
        AngleConvention::Half => 0.5 * full,
        AngleConvention::Full => full,
    }))
}

/// A cap half-angle Ω = base + δ after hemisphere clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveAngle {
    pub angle: Angle,
    pub clamped: bool,
    sin_sq: f64,
    cos_sq: f64,
}

impl EffectiveAngle {
    /// sin²Ω, the argument of the incomplete beta function.
    pub fn sin_sq(&self) -> f64 {
        self.sin_sq
    }

    pub fn cos_sq(&self) -> f64 {
        self.cos_sq
    }
}

/// Composes base + δ through the angle-addition identities
/// cos Ω = cos θ cos δ − sin θ sin δ and sin Ω = sin θ cos δ + cos θ sin δ,
/// clamping to π/2 when the sum passes the hemisphere.
pub fn effective_angle(base: Angle, delta: Angle) -> EffectiveAngle {
    let (sb, cb) = base.0.sin_cos();
    let (sd, cd) = delta.0.sin_cos();
    let cos = cb * cd - sb * sd;
    let sin = sb * cd + cb * sd;
    if cos < 0.0 || sin < 0.0 {
        EffectiveAngle {
            angle: Angle::RIGHT,
            clamped: true,
            sin_sq: 1.0,
            cos_sq: 0.0,
        }
    } else {
        EffectiveAngle {
            angle: Angle(sin.atan2(cos)),
            clamped: false,
            sin_sq: sin * sin,
            cos_sq: cos * cos,
        }
    }
}

/// Capacity C(θ, φ, δ) with its cap angles and saturation flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    /// `None` when the identity cap is degenerate (Ω₂ = 0).
    pub capacity: Option<f64>,
    /// ln C; finite even when C itself overflows `f64`.
    pub ln_capacity: Option<f64>,
    pub omega1: Angle,
    pub omega2: Angle,
    pub clamped_population: bool,
    pub clamped_identity: bool,
    pub degenerate: bool,
}

fn check_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("capacity", format!("dimension {n} < 2")));
    }
    Ok(())
}

pub fn capacity(n: u32, theta: Angle, phi: Angle, delta: Angle) -> Result<CapacityEstimate> {
    check_dim(n)?;
    let population = effective_angle(theta, delta);
    let identity = effective_angle(phi, delta);
    let mut est = CapacityEstimate {
        capacity: None,
        ln_capacity: None,
        omega1: population.angle,
        omega2: identity.angle,
        clamped_population: population.clamped,
        clamped_identity: identity.clamped,
        degenerate: false,
    };
    if identity.sin_sq == 0.0 {
        est.degenerate = true;
        return Ok(est);
    }
    let ln_num = specfun::ln_cap_beta(n, population.sin_sq, population.cos_sq)?;
    let ln_den = specfun::ln_cap_beta(n, identity.sin_sq, identity.cos_sq)?;
    let ln_c = ln_num - ln_den;
    est.ln_capacity = Some(ln_c);
    est.capacity = Some(ln_c.exp());
    Ok(est)
}

/// Closed forms in two and three dimensions: the arc ratio Ω₁/Ω₂ on the
/// circle and (1 − cos Ω₁)/(1 − cos Ω₂) on the sphere. The half-angles are
/// formed by plain addition and clamped, independent of [`effective_angle`].
pub fn capacity_closed_form_low_dim(n: u32, theta: Angle, phi: Angle, delta: Angle) -> Result<f64> {
    let omega1 = (theta.0 + delta.0).min(FRAC_PI_2);
    let omega2 = (phi.0 + delta.0).min(FRAC_PI_2);
    if omega2 == 0.0 {
        return Err(Error::domain(
            "capacity_closed_form_low_dim",
            "identity cap has zero extent",
        ));
    }
    match n {
        2 => Ok(omega1 / omega2),
        3 => {
            // 1 − cos Ω = 2 sin²(Ω/2)
            let versine = |w: f64| 2.0 * (0.5 * w).sin().powi(2);
            Ok(versine(omega1) / versine(omega2))
        }
        _ => Err(Error::domain(
            "capacity_closed_form_low_dim",
            format!("closed form exists only for n = 2 or 3, got {n}"),
        )),
    }
}

/// One point of a capacity curve.
#[derive(Debug)]
pub struct CurvePoint {
    pub cos_delta: f64,
    pub estimate: Result<CapacityEstimate>,
}

/// Evaluates capacity at each threshold cos δ, in input order. A bad
/// threshold yields an error entry without stopping the sweep.
pub fn capacity_curve(
    n: u32,
    theta: Angle,
    phi: Angle,
    delta_cosines: &[f64],
    conv: AngleConvention,
) -> Vec<CurvePoint> {
    exec::map_ordered(delta_cosines, |&cos_delta| CurvePoint {
        cos_delta,
        estimate: angle_from_cosine(cos_delta, conv)
            .and_then(|delta| capacity(n, theta, phi, delta)),
    })
}
