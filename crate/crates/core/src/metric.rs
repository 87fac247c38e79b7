//! Complex-valued metrics, metric-axiom falsification and modulus-based
//! convergence detection.
//!
//! A sequence converges (is Cauchy) in a complex-valued metric space exactly
//! when the real moduli `|d(x_n, x)|` (`|d(x_n, x_{n+m})|`) tend to zero, so
//! every convergence test here works on moduli.

use alloc::vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::order::{approx_eq, in_cone, precsim, ComplexScalar, OrderConfig};
use crate::point::{GridShape, Point, PointDomain, Sampler};
use crate::report::{CheckReport, Witness};
use crate::Error;

/// Anything that assigns a complex distance to pairs of points of a domain.
pub trait Distance {
    fn domain(&self) -> PointDomain;
    fn distance(&self, p: &Point, q: &Point) -> Result<ComplexScalar, Error>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    /// `|z1 − z2|`
    D1,
    /// `e^{ik} |z1 − z2|`
    D2 { k: f64 },
    /// `|x1 − x2| + i |y1 − y2|`
    D3,
    /// `max_t ‖u(t) − v(t)‖_∞ · scale`
    ScaledSup { scale: ComplexScalar },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMetric {
    kind: MetricKind,
    domain: PointDomain,
}

impl ComplexMetric {
    pub fn d1() -> Self {
        ComplexMetric {
            kind: MetricKind::D1,
            domain: PointDomain::Complex,
        }
    }

    /// Rotated modulus metric. Only `k ∈ [0, π/2]` keeps distances inside the
    /// cone; other angles are accepted with a warning and left for
    /// [`check_metric_axioms`] to reject.
    pub fn d2(k: f64) -> Result<Self, Error> {
        if !k.is_finite() {
            return Err(invalid("k", "rotation angle must be finite"));
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&k) {
            log::warn!(
                "d2 with k = {k} maps distances outside the cone; the metric axioms will fail"
            );
        }
        Ok(ComplexMetric {
            kind: MetricKind::D2 { k },
            domain: PointDomain::Complex,
        })
    }

    pub fn d3() -> Self {
        ComplexMetric {
            kind: MetricKind::D3,
            domain: PointDomain::Complex,
        }
    }

    pub fn scaled_sup(scale: ComplexScalar, shape: GridShape) -> Result<Self, Error> {
        if !in_cone(scale) || scale.is_zero() || !scale.is_finite() {
            return Err(invalid(
                "scale",
                "must be a finite non-zero element of the cone",
            ));
        }
        Ok(ComplexMetric {
            kind: MetricKind::ScaledSup { scale },
            domain: PointDomain::Grid(shape),
        })
    }

    /// Sup metric on `C([a, b])` scaled by `√(a² + b²)/a · e^{i atan(b/a)}`.
    pub fn interval_sup(shape: GridShape) -> Result<Self, Error> {
        let (a, b) = (shape.start, shape.end);
        if a <= 0.0 {
            return Err(invalid("interval", "scaled sup metric needs a > 0"));
        }
        let scale = ComplexScalar::from_polar(libm::hypot(a, b) / a, libm::atan(b / a))?;
        Self::scaled_sup(scale, shape)
    }

    /// Sup metric on `C([0, a], ℝⁿ)` scaled by `√(1 + a²) · e^{i atan a}`.
    pub fn periodic_sup(shape: GridShape) -> Result<Self, Error> {
        if shape.start != 0.0 {
            return Err(invalid("interval", "periodic sup metric lives on [0, a]"));
        }
        let a = shape.end;
        let scale = ComplexScalar::from_polar(libm::hypot(1.0, a), libm::atan(a))?;
        Self::scaled_sup(scale, shape)
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }
}

impl Distance for ComplexMetric {
    fn domain(&self) -> PointDomain {
        self.domain
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<ComplexScalar, Error> {
        if p.domain() != self.domain || q.domain() != self.domain {
            return Err(Error::DomainMismatch);
        }
        match (self.kind, p, q) {
            (MetricKind::D1, Point::Complex(z1), Point::Complex(z2)) => Ok(ComplexScalar {
                re: (*z1 - *z2).modulus(),
                im: 0.0,
            }),
            (MetricKind::D2 { k }, Point::Complex(z1), Point::Complex(z2)) => {
                ComplexScalar::from_polar((*z1 - *z2).modulus(), k)
            }
            (MetricKind::D3, Point::Complex(z1), Point::Complex(z2)) => Ok(ComplexScalar {
                re: (z1.re - z2.re).abs(),
                im: (z1.im - z2.im).abs(),
            }),
            (MetricKind::ScaledSup { scale }, Point::Grid(u), Point::Grid(v)) => {
                Ok(scale.scale(u.sup_distance(v)?))
            }
            _ => Err(Error::DomainMismatch),
        }
    }
}

/// Samples point triples and tests the three metric axioms under `≾`.
///
/// Per sample the clauses are tried in the order: `d(x,x) = 0`, symmetry,
/// `d(x,y) ≠ 0` for `x ≠ y`, cone membership, triangle inequality. The first
/// failure becomes the witness.
pub fn check_metric_axioms<M: Distance + ?Sized>(
    m: &M,
    sample_count: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::default();
    let domain = m.domain();
    for i in 0..sample_count {
        let x = sampler.sample(&domain, &mut rng);
        let y = sampler.sample(&domain, &mut rng);
        let z = sampler.sample(&domain, &mut rng);
        if let Some((clause, values)) = axiom_violation(m, &x, &y, &z) {
            return CheckReport::fail(
                i + 1,
                i + 1,
                Witness {
                    clause,
                    sample_index: i,
                    points: vec![x, y, z],
                    values,
                },
            );
        }
    }
    CheckReport::pass(sample_count, sample_count)
}

fn axiom_violation<M: Distance + ?Sized>(
    m: &M,
    x: &Point,
    y: &Point,
    z: &Point,
) -> Option<(&'static str, alloc::vec::Vec<ComplexScalar>)> {
    let eval = |p: &Point, q: &Point| m.distance(p, q);
    let (dxx, dxy, dyx, dxz, dzy) =
        match (eval(x, x), eval(x, y), eval(y, x), eval(x, z), eval(z, y)) {
            (Ok(a), Ok(b), Ok(c), Ok(d), Ok(e)) => (a, b, c, d, e),
            _ => return Some(("distance evaluation failed", vec![])),
        };
    let scale = [dxy, dyx, dxz, dzy]
        .iter()
        .fold(0.0, |s, d| f64::max(s, d.modulus()));
    let tol = OrderConfig::new(1e-12 * (1.0 + scale)).unwrap_or_default();
    if !dxx.is_zero() {
        return Some(("(i) d(x,x) = 0", vec![dxx]));
    }
    if !approx_eq(dxy, dyx, tol) {
        return Some(("(ii) symmetry", vec![dxy, dyx]));
    }
    if x != y && dxy.is_zero() {
        return Some(("(i) d(x,y) = 0 only if x = y", vec![dxy]));
    }
    if !in_cone(dxy) {
        return Some(("(i) 0 ≾ d(x,y)", vec![dxy]));
    }
    let rhs = dxz + dzy;
    if !precsim(dxy, rhs, tol) {
        return Some(("(iii) triangle inequality", vec![dxy, rhs]));
    }
    None
}

/// True iff the last `window` entries of `deltas` are all `≤ tol`.
pub fn cauchy_tail(deltas: &[f64], tol: f64, window: usize) -> Result<bool, Error> {
    if deltas.is_empty() {
        return Err(Error::EmptySequence);
    }
    if window == 0 {
        return Err(invalid("window", "must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tol", "must be positive"));
    }
    if deltas.len() < window {
        return Ok(false);
    }
    Ok(deltas[deltas.len() - window..].iter().all(|d| *d <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub iterations: usize,
    pub final_delta: f64,
}

impl ConvergenceReport {
    pub fn from_deltas(deltas: &[f64], tol: f64, window: usize) -> Result<Self, Error> {
        let converged = cauchy_tail(deltas, tol, window)?;
        Ok(ConvergenceReport {
            converged,
            iterations: deltas.len(),
            final_delta: deltas[deltas.len() - 1],
        })
    }
}
