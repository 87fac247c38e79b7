//! Componentwise partial order on the complex plane.
//!
//! `z1 ≾ z2` holds when both the real and imaginary parts of `z1` are no
//! larger than those of `z2`. The strict variants `⪇` (comparable and
//! distinct) and `≺` (strict in both components) follow from it. The cone
//! `S = {z : 0 ≾ z}` is the closed first quadrant.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use crate::Error;

/// A finite complex number.
///
/// Construction through [`ComplexScalar::new`] rejects NaN and infinite
/// components. Arithmetic is plain IEEE arithmetic and may overflow; callers
/// that need the invariant re-checked use [`ComplexScalar::is_finite`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexScalar {
    pub re: f64,
    pub im: f64,
}

impl ComplexScalar {
    pub const ZERO: ComplexScalar = ComplexScalar { re: 0.0, im: 0.0 };
    pub const ONE: ComplexScalar = ComplexScalar { re: 1.0, im: 0.0 };
    pub const I: ComplexScalar = ComplexScalar { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Result<Self, Error> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexScalar { re, im })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Embeds a real number as `r + 0i`.
    pub fn real(r: f64) -> Result<Self, Error> {
        Self::new(r, 0.0)
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self, Error> {
        Self::new(modulus * libm::cos(phase), modulus * libm::sin(phase))
    }

    pub fn modulus(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn scale(self, k: f64) -> Self {
        ComplexScalar {
            re: self.re * k,
            im: self.im * k,
        }
    }

    pub fn conj(self) -> Self {
        ComplexScalar {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Add for ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: Self) -> Self {
        ComplexScalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: Self) -> Self {
        ComplexScalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: Self) -> Self {
        ComplexScalar {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Neg for ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> Self {
        ComplexScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Formats as `a+bi` / `a-bi` using the shortest round-trip representation
/// of each component.
impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Parses `a+bi`, `a-bi`, a bare real `a`, or a bare imaginary `bi`.
impl FromStr for ComplexScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::MalformedComplex);
        }
        let parse = |t: &str| t.parse::<f64>().map_err(|_| Error::MalformedComplex);
        let Some(body) = s.strip_suffix('i') else {
            return ComplexScalar::new(parse(s)?, 0.0).map_err(|_| Error::MalformedComplex);
        };
        // The split point is the last sign that is not leading and not part
        // of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => {
                let im_text = &body[k..];
                let im = match im_text {
                    "+" => 1.0,
                    "-" => -1.0,
                    t => parse(t.strip_prefix('+').unwrap_or(t))?,
                };
                (parse(&body[..k])?, im)
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    t => parse(t)?,
                };
                (0.0, im)
            }
        };
        ComplexScalar::new(re, im).map_err(|_| Error::MalformedComplex)
    }
}

/// Tolerance used when comparing components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderConfig {
    eq_tolerance: f64,
}

impl OrderConfig {
    pub const EXACT: OrderConfig = OrderConfig { eq_tolerance: 0.0 };

    pub fn new(eq_tolerance: f64) -> Result<Self, Error> {
        if eq_tolerance >= 0.0 && eq_tolerance.is_finite() {
            Ok(OrderConfig { eq_tolerance })
        } else {
            Err(Error::InvalidParameter {
                name: "eq_tolerance",
                reason: "must be finite and non-negative",
            })
        }
    }

    pub fn eq_tolerance(&self) -> f64 {
        self.eq_tolerance
    }
}

impl Default for OrderConfig {
    fn default() -> Self {
        Self::EXACT
    }
}

/// `z1 ≾ z2`.
pub fn precsim(z1: ComplexScalar, z2: ComplexScalar, cfg: OrderConfig) -> bool {
    let tol = cfg.eq_tolerance;
    z1.re <= z2.re + tol && z1.im <= z2.im + tol
}

/// `z1 ⪇ z2`: comparable under `≾` and not equal within tolerance.
pub fn precnsim(z1: ComplexScalar, z2: ComplexScalar, cfg: OrderConfig) -> bool {
    precsim(z1, z2, cfg) && !approx_eq(z1, z2, cfg)
}

/// `z1 ≺ z2`: strictly smaller in both components.
pub fn prec(z1: ComplexScalar, z2: ComplexScalar, cfg: OrderConfig) -> bool {
    let tol = cfg.eq_tolerance;
    z1.re < z2.re - tol && z1.im < z2.im - tol
}

/// Membership in the cone `{z : 0 ≾ z}`, exact.
pub fn in_cone(z: ComplexScalar) -> bool {
    precsim(ComplexScalar::ZERO, z, OrderConfig::EXACT)
}

pub fn approx_eq(z1: ComplexScalar, z2: ComplexScalar, cfg: OrderConfig) -> bool {
    let tol = cfg.eq_tolerance;
    (z1.re - z2.re).abs() <= tol && (z1.im - z2.im).abs() <= tol
}
