//! The τ-family of Lagrangian angle operators: parameters, cones and the
//! scalar summand `f_τ`.
//!
//! The branch is an explicit tag fixed at construction. Seams (τ = 0, π/4,
//! π/2) are only reached through exact inputs or the dedicated constructors,
//! never by comparing a computed angle against a tolerance.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// τ = 0.
    #[serde(rename = "MA")]
    MongeAmpere,
    /// 0 < τ < π/4.
    #[serde(rename = "LOG")]
    Log,
    /// τ = π/4.
    #[serde(rename = "HARM")]
    Harmonic,
    /// π/4 < τ < π/2.
    #[serde(rename = "ATAN")]
    Arctan,
    /// τ = π/2.
    #[serde(rename = "SLAG")]
    SpecialLagrangian,
    /// −π/4 < τ < 0.
    #[serde(rename = "NEG")]
    Negative,
}

impl Branch {
    pub const ALL: [Branch; 6] = [
        Branch::MongeAmpere,
        Branch::Log,
        Branch::Harmonic,
        Branch::Arctan,
        Branch::SpecialLagrangian,
        Branch::Negative,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Branch::MongeAmpere => "MA",
            Branch::Log => "LOG",
            Branch::Harmonic => "HARM",
            Branch::Arctan => "ATAN",
            Branch::SpecialLagrangian => "SLAG",
            Branch::Negative => "NEG",
        }
    }

    /// Whether the operator has two cone components.
    pub fn has_two_cones(self) -> bool {
        matches!(self, Branch::Log | Branch::Harmonic)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Branch::ALL
            .into_iter()
            .find(|b| b.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown branch {s:?}")))
    }
}

/// Which cone component a two-component operator works on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeSide {
    #[default]
    Upper,
    Lower,
}

impl ConeSide {
    pub fn flipped(self) -> Self {
        match self {
            ConeSide::Upper => ConeSide::Lower,
            ConeSide::Lower => ConeSide::Upper,
        }
    }
}

impl FromStr for ConeSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(ConeSide::Upper),
            "lower" => Ok(ConeSide::Lower),
            _ => Err(Error::InvalidInput(format!("unknown cone side {s:?}"))),
        }
    }
}

/// Component of the admissible set containing a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Upper,
    Lower,
    AllReals,
    Interval,
}

/// Open interval `(lower, upper)` of admissible eigenvalues; ends may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub lower: f64,
    pub upper: f64,
}

impl ConeSpec {
    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lower && lambda < self.upper
    }

    /// Distance from `lambda` to the nearer finite end (∞ when unbounded).
    pub fn margin(&self, lambda: f64) -> f64 {
        (lambda - self.lower).min(self.upper - lambda)
    }
}

/// Parameters of the operator `F_τ`.
///
/// `a = cot τ` and `b = √|cot²τ − 1|`. For Monge–Ampère `a` and `b` are `+∞`
/// and unused.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauParams {
    branch: Branch,
    tau: f64,
    a: f64,
    b: f64,
    sin: f64,
    cos: f64,
    side: ConeSide,
}

impl TauParams {
    pub fn monge_ampere() -> Self {
        Self {
            branch: Branch::MongeAmpere,
            tau: 0.0,
            a: f64::INFINITY,
            b: f64::INFINITY,
            sin: 0.0,
            cos: 1.0,
            side: ConeSide::Upper,
        }
    }

    pub fn harmonic() -> Self {
        Self {
            branch: Branch::Harmonic,
            tau: FRAC_PI_4,
            a: 1.0,
            b: 0.0,
            sin: FRAC_1_SQRT_2,
            cos: FRAC_1_SQRT_2,
            side: ConeSide::Upper,
        }
    }

    pub fn special_lagrangian() -> Self {
        Self {
            branch: Branch::SpecialLagrangian,
            tau: FRAC_PI_2,
            a: 0.0,
            b: 1.0,
            sin: 1.0,
            cos: 0.0,
            side: ConeSide::Upper,
        }
    }

    /// From the angle τ ∈ (−π/4, π/2]. Exactly `0`, `π/4` (as `FRAC_PI_4`) and
    /// `π/2` select the seam branches.
    pub fn from_angle(tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::NonFinite("tau"));
        }
        if tau == 0.0 {
            return Ok(Self::monge_ampere());
        }
        if tau == FRAC_PI_4 {
            return Ok(Self::harmonic());
        }
        if tau == FRAC_PI_2 {
            return Ok(Self::special_lagrangian());
        }
        let branch = if tau > 0.0 && tau < FRAC_PI_4 {
            Branch::Log
        } else if tau > FRAC_PI_4 && tau < FRAC_PI_2 {
            Branch::Arctan
        } else if tau > -FRAC_PI_4 && tau < 0.0 {
            Branch::Negative
        } else {
            return Err(Error::InvalidInput(format!("tau = {tau} is outside (-pi/4, pi/2]")));
        };
        let (sin, cos) = tau.sin_cos();
        let a = cos / sin;
        let b = (a * a - 1.0).abs().sqrt();
        Ok(Self {
            branch,
            tau,
            a,
            b,
            sin,
            cos,
            side: ConeSide::Upper,
        })
    }

    /// From `a = cot τ`: `a > 1` LOG, `a = 1` HARM, `0 < a < 1` ATAN,
    /// `a = 0` SLAG, `a < −1` NEG, `a = +∞` MA.
    pub fn from_cot(a: f64) -> Result<Self> {
        if a.is_nan() {
            return Err(Error::NonFinite("cot tau"));
        }
        if a == f64::INFINITY {
            return Ok(Self::monge_ampere());
        }
        if a == 1.0 {
            return Ok(Self::harmonic());
        }
        if a == 0.0 {
            return Ok(Self::special_lagrangian());
        }
        let (branch, b) = if a > 1.0 {
            (Branch::Log, ((a - 1.0) * (a + 1.0)).sqrt())
        } else if a > 0.0 {
            (Branch::Arctan, ((1.0 - a) * (1.0 + a)).sqrt())
        } else if a < -1.0 {
            (Branch::Negative, ((-a - 1.0) * (1.0 - a)).sqrt())
        } else {
            return Err(Error::InvalidInput(format!(
                "cot tau = {a} does not correspond to tau in (-pi/4, pi/2]"
            )));
        };
        let r = a.hypot(1.0);
        let sin = a.signum() / r;
        let cos = a.abs() / r;
        Ok(Self {
            branch,
            tau: (1.0 / a).atan(),
            a,
            b,
            sin,
            cos,
            side: ConeSide::Upper,
        })
    }

    /// Default representative of each branch (τ = π/6 for LOG, π/3 for ATAN,
    /// cot τ = −2 for NEG).
    pub fn representative(branch: Branch) -> Self {
        match branch {
            Branch::MongeAmpere => Self::monge_ampere(),
            Branch::Log => Self::from_angle(PI / 6.0).expect("valid angle"),
            Branch::Harmonic => Self::harmonic(),
            Branch::Arctan => Self::from_angle(PI / 3.0).expect("valid angle"),
            Branch::SpecialLagrangian => Self::special_lagrangian(),
            Branch::Negative => Self::from_cot(-2.0).expect("valid cot"),
        }
    }

    pub fn with_side(mut self, side: ConeSide) -> Self {
        self.side = side;
        self
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn sin_tau(&self) -> f64 {
        self.sin
    }

    pub fn cos_tau(&self) -> f64 {
        self.cos
    }

    pub fn side(&self) -> ConeSide {
        self.side
    }

    /// `√(a² + 1) = 1/|sin τ|`.
    pub fn root(&self) -> f64 {
        self.a.hypot(1.0)
    }

    /// The admissible interval of the selected cone component.
    pub fn cone(&self) -> ConeSpec {
        self.cone_on(self.side)
    }

    /// The admissible interval of a given side (single-component branches ignore it).
    pub fn cone_on(&self, side: ConeSide) -> ConeSpec {
        let (a, b) = (self.a, self.b);
        let inf = f64::INFINITY;
        let (lower, upper) = match (self.branch, side) {
            (Branch::MongeAmpere, _) => (0.0, inf),
            (Branch::Log, ConeSide::Upper) => (b - a, inf),
            (Branch::Log, ConeSide::Lower) => (-inf, -(a + b)),
            (Branch::Harmonic, ConeSide::Upper) => (-1.0, inf),
            (Branch::Harmonic, ConeSide::Lower) => (-inf, -1.0),
            (Branch::Arctan | Branch::SpecialLagrangian, _) => (-inf, inf),
            (Branch::Negative, _) => (-(b + a), b - a),
        };
        ConeSpec { lower, upper }
    }

    /// Cone component containing `lambda`, if any.
    pub fn component_of(&self, lambda: f64) -> Option<Component> {
        if !lambda.is_finite() {
            return None;
        }
        match self.branch {
            Branch::MongeAmpere => (lambda > 0.0).then_some(Component::Upper),
            Branch::Log | Branch::Harmonic => {
                if self.cone_on(ConeSide::Upper).contains(lambda) {
                    Some(Component::Upper)
                } else if self.cone_on(ConeSide::Lower).contains(lambda) {
                    Some(Component::Lower)
                } else {
                    None
                }
            }
            Branch::Arctan | Branch::SpecialLagrangian => Some(Component::AllReals),
            Branch::Negative => self.cone().contains(lambda).then_some(Component::Interval),
        }
    }

    /// Open range `(lo, hi)` of `f_τ` on the selected cone component.
    pub fn f_range(&self) -> (f64, f64) {
        let inf = f64::INFINITY;
        match (self.branch, self.side) {
            (Branch::MongeAmpere | Branch::Negative, _) => (-inf, inf),
            (Branch::Log | Branch::Harmonic, ConeSide::Upper) => (-inf, 0.0),
            (Branch::Log | Branch::Harmonic, ConeSide::Lower) => (0.0, inf),
            (Branch::Arctan, _) => {
                let k = self.root() / self.b;
                (-3.0 * FRAC_PI_4 * k, FRAC_PI_4 * k)
            }
            (Branch::SpecialLagrangian, _) => (-FRAC_PI_2, FRAC_PI_2),
        }
    }
}

fn cone_violation(lambda: f64) -> Error {
    Error::ConeViolation {
        eigenvalue: lambda,
        location: None,
    }
}

/// The scalar summand `f_τ(λ)`, so that `F_τ(λ) = Σ f_τ(λ_i)`.
///
/// ATAN uses the smooth form `(√(a²+1)/b)(arctan((λ+a)/b) − π/4)`, which
/// agrees with the quotient form wherever `λ + a + b > 0`.
pub fn f_scalar(tp: &TauParams, lambda: f64) -> Result<f64> {
    if tp.component_of(lambda).is_none() {
        return Err(cone_violation(lambda));
    }
    let (a, b) = (tp.a, tp.b);
    Ok(match tp.branch {
        Branch::MongeAmpere => 0.5 * lambda.ln(),
        Branch::Log => tp.root() / (2.0 * b) * ((lambda + a - b) / (lambda + a + b)).ln(),
        Branch::Harmonic => -SQRT_2 / (1.0 + lambda),
        Branch::Arctan => tp.root() / b * (((lambda + a) / b).atan() - FRAC_PI_4),
        Branch::SpecialLagrangian => lambda.atan(),
        Branch::Negative => tp.root() / (2.0 * b) * ((b + a + lambda) / (b - a - lambda)).ln(),
    })
}

/// `f_τ'(λ)`, which equals `1/(sin τ (1 + λ²) + 2 cos τ λ)` on every branch.
pub fn df_dlambda(tp: &TauParams, lambda: f64) -> Result<f64> {
    if tp.component_of(lambda).is_none() {
        return Err(cone_violation(lambda));
    }
    let (a, b) = (tp.a, tp.b);
    Ok(match tp.branch {
        Branch::MongeAmpere => 0.5 / lambda,
        Branch::Log => tp.root() / ((lambda + a - b) * (lambda + a + b)),
        Branch::Harmonic => SQRT_2 / ((1.0 + lambda) * (1.0 + lambda)),
        Branch::Arctan => tp.root() / ((lambda + a) * (lambda + a) + b * b),
        Branch::SpecialLagrangian => 1.0 / (1.0 + lambda * lambda),
        Branch::Negative => tp.root() / ((b + a + lambda) * (b - a - lambda)),
    })
}

/// `f_τ''(λ)`.
pub fn d2f_dlambda2(tp: &TauParams, lambda: f64) -> Result<f64> {
    let d = df_dlambda(tp, lambda)?;
    let denom_prime = match tp.branch {
        Branch::MongeAmpere => 2.0,
        _ => 2.0 * (tp.sin * lambda + tp.cos),
    };
    // f' = 1/q with q = sin(1+λ²) + 2cos λ (q = 2λ for MA), so f'' = −q'/q² = −q' f'².
    Ok(-denom_prime * d * d)
}

const INVERSE_MAX_ITER: usize = 300;

/// Inverse of `f_τ` on the selected cone component, by bracketing followed by
/// safeguarded Newton iteration.
pub fn f_scalar_inv(tp: &TauParams, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFinite("f_scalar_inv argument"));
    }
    let (ylo, yhi) = tp.f_range();
    if !(y > ylo && y < yhi) {
        return Err(Error::Range { y, lo: ylo, hi: yhi });
    }
    let cone = tp.cone();
    let g = |lambda: f64| f_scalar(tp, lambda).map(|v| v - y);
    let range_err = Error::Range { y, lo: ylo, hi: yhi };

    let mid = match (cone.lower.is_finite(), cone.upper.is_finite()) {
        (true, true) => 0.5 * (cone.lower + cone.upper),
        (true, false) => cone.lower + 1.0,
        (false, true) => cone.upper - 1.0,
        (false, false) => 0.0,
    };

    // Lower end of the bracket: g(lo) <= 0.
    let mut lo = mid;
    let mut width = 1.0;
    while g(lo)? > 0.0 {
        let next = if cone.lower.is_finite() {
            cone.lower + 0.5 * (lo - cone.lower)
        } else {
            width *= 2.0;
            mid - width
        };
        if next == lo || !next.is_finite() || !cone.contains(next) {
            return Err(range_err);
        }
        lo = next;
    }
    let mut hi = mid;
    width = 1.0;
    while g(hi)? < 0.0 {
        let next = if cone.upper.is_finite() {
            cone.upper - 0.5 * (cone.upper - hi)
        } else {
            width *= 2.0;
            mid + width
        };
        if next == hi || !next.is_finite() || !cone.contains(next) {
            return Err(range_err);
        }
        hi = next;
    }

    let tol = 1e-14 * (1.0 + y.abs());
    let mut x = if lo == hi { lo } else { 0.5 * (lo + hi) };
    for _ in 0..INVERSE_MAX_ITER {
        let gx = g(x)?;
        if gx.abs() <= tol {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / df_dlambda(tp, x)?;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
