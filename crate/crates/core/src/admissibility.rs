//! α-maps, admissibility and regularity predicates, and the contraction
//! hypothesis checkers for a pair of self-maps `(S, T)`.
//!
//! Every predicate here is checked by sampling: a passing report means no
//! counterexample was found, not that the hypothesis is proven.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::metric::{ComplexMetric, Distance};
use crate::order::{in_cone, precsim, ComplexScalar, OrderConfig};
use crate::point::{Point, PointDomain, Sampler, SelfMap};
use crate::report::{CheckReport, Witness};
use crate::simulation::{Simulation, SimulationFn};
use crate::Error;

/// A cone-valued weight `α(x, y)`.
#[derive(Clone, Copy)]
pub enum AlphaMap {
    ConstantOne,
    /// `1` on pairs satisfying the predicate, `0` elsewhere.
    Indicator {
        name: &'static str,
        region: fn(&Point, &Point) -> bool,
    },
    Custom {
        name: &'static str,
        f: fn(&Point, &Point) -> ComplexScalar,
    },
}

impl fmt::Debug for AlphaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl AlphaMap {
    pub fn name(&self) -> &'static str {
        match self {
            AlphaMap::ConstantOne => "one",
            AlphaMap::Indicator { name, .. } | AlphaMap::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, x: &Point, y: &Point) -> ComplexScalar {
        match self {
            AlphaMap::ConstantOne => ComplexScalar::ONE,
            AlphaMap::Indicator { region, .. } => {
                if region(x, y) {
                    ComplexScalar::ONE
                } else {
                    ComplexScalar::ZERO
                }
            }
            AlphaMap::Custom { f, .. } => f(x, y),
        }
    }

    /// Indicator of pairs of complex points that both lie in the closed upper
    /// half-plane.
    pub fn upper_half_plane() -> Self {
        AlphaMap::Indicator {
            name: "upper-half-plane",
            region: |x, y| match (x, y) {
                (Point::Complex(a), Point::Complex(b)) => a.im >= 0.0 && b.im >= 0.0,
                _ => false,
            },
        }
    }

    /// Indicator of `|x| ≤ |y|` for complex points.
    pub fn modulus_le() -> Self {
        AlphaMap::Indicator {
            name: "modulus-le",
            region: |x, y| match (x, y) {
                (Point::Complex(a), Point::Complex(b)) => a.modulus() <= b.modulus(),
                _ => false,
            },
        }
    }

    pub fn zero() -> Self {
        AlphaMap::Custom {
            name: "zero",
            f: |_, _| ComplexScalar::ZERO,
        }
    }
}

/// `1 ≾ α(x, y)`.
pub fn admits(alpha: &AlphaMap, x: &Point, y: &Point) -> bool {
    precsim(ComplexScalar::ONE, alpha.eval(x, y), OrderConfig::EXACT)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContractionVariant {
    /// Compare against `d(x, y)`.
    Plain,
    /// Compare against `M(x, y)` with weight `λ`.
    MType { lambda: f64 },
    /// Compare against `N(x, y)`.
    NType,
}

#[derive(Debug, Clone, Copy)]
pub struct ContractionSpec {
    pub variant: ContractionVariant,
    pub xi: SimulationFn,
    pub alpha: AlphaMap,
    pub metric: ComplexMetric,
}

impl ContractionSpec {
    pub fn new(
        variant: ContractionVariant,
        xi: SimulationFn,
        alpha: AlphaMap,
        metric: ComplexMetric,
    ) -> Result<Self, Error> {
        if let ContractionVariant::MType { lambda } = variant {
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(invalid("lambda", "must lie in (0, 1)"));
            }
        }
        Ok(ContractionSpec {
            variant,
            xi,
            alpha,
            metric,
        })
    }
}

/// Images `Sx`, `Ty` and the moduli `M`/`N` are built from.
struct PairImages {
    dxy: f64,
    dx_sx: f64,
    dy_ty: f64,
    dx_ty: f64,
    dy_sx: f64,
}

impl PairImages {
    fn new<D: Distance + ?Sized>(
        metric: &D,
        x: &Point,
        y: &Point,
        sx: &Point,
        ty: &Point,
    ) -> Result<Self, Error> {
        let d = |p: &Point, q: &Point| metric.distance(p, q).map(ComplexScalar::modulus);
        Ok(PairImages {
            dxy: d(x, y)?,
            dx_sx: d(x, sx)?,
            dy_ty: d(y, ty)?,
            dx_ty: d(x, ty)?,
            dy_sx: d(y, sx)?,
        })
    }

    fn m(&self, lambda: f64) -> f64 {
        lambda
            * [
                self.dxy,
                self.dx_sx,
                self.dy_ty,
                (self.dx_ty + self.dy_sx) / 2.0,
            ]
            .into_iter()
            .fold(0.0, f64::max)
    }

    fn n(&self) -> f64 {
        let ratio = (self.dx_sx * self.dy_ty + self.dx_ty * self.dy_sx) / (1.0 + self.dxy);
        f64::max(self.dxy, ratio)
    }
}

/// `λ · max{|d(x,y)|, |d(x,Sx)|, |d(y,Ty)|, (|d(x,Ty)| + |d(y,Sx)|)/2}`.
pub fn m_value<S, T, D>(
    x: &Point,
    y: &Point,
    s: &S,
    t: &T,
    metric: &D,
    lambda: f64,
) -> Result<f64, Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
    D: Distance + ?Sized,
{
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid("lambda", "must lie in (0, 1)"));
    }
    let (sx, ty) = (s.apply(x)?, t.apply(y)?);
    Ok(PairImages::new(metric, x, y, &sx, &ty)?.m(lambda))
}

/// `max{|d(x,y)|, (|d(x,Sx)|·|d(y,Ty)| + |d(x,Ty)|·|d(y,Sx)|) / (1 + |d(x,y)|)}`.
pub fn n_value<S, T, D>(x: &Point, y: &Point, s: &S, t: &T, metric: &D) -> Result<f64, Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
    D: Distance + ?Sized,
{
    let (sx, ty) = (s.apply(x)?, t.apply(y)?);
    Ok(PairImages::new(metric, x, y, &sx, &ty)?.n())
}

/// Checks the three contraction clauses at one pair. Returns the violated
/// clause and the complex values involved.
fn contraction_violation<S, T>(
    spec: &ContractionSpec,
    s: &S,
    t: &T,
    x: &Point,
    y: &Point,
) -> Result<Option<(&'static str, Vec<ComplexScalar>)>, Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
{
    let (sx, ty) = (s.apply(x)?, t.apply(y)?);
    let alpha = spec.alpha.eval(x, y);
    let weighted = alpha * spec.metric.distance(&sx, &ty)?;
    if !in_cone(weighted) {
        return Ok(Some(("(i) 0 ≾ alpha(x,y) d(Sx,Ty)", vec![weighted])));
    }
    let (second, second_modulus) = match spec.variant {
        ContractionVariant::Plain => {
            let d = spec.metric.distance(x, y)?;
            (d, d.modulus())
        }
        ContractionVariant::MType { lambda } => {
            let m = PairImages::new(&spec.metric, x, y, &sx, &ty)?.m(lambda);
            (ComplexScalar { re: m, im: 0.0 }, m)
        }
        ContractionVariant::NType => {
            let n = PairImages::new(&spec.metric, x, y, &sx, &ty)?.n();
            (ComplexScalar { re: n, im: 0.0 }, n)
        }
    };
    let v2 = spec.xi.eval(weighted, second);
    if !in_cone(v2) {
        return Ok(Some((
            "(ii) 0 ≾ xi(alpha d(Sx,Ty), d)",
            vec![weighted, second, v2],
        )));
    }
    let moduli = (
        ComplexScalar {
            re: weighted.modulus(),
            im: 0.0,
        },
        ComplexScalar {
            re: second_modulus,
            im: 0.0,
        },
    );
    let v3 = spec.xi.eval(moduli.0, moduli.1);
    if !in_cone(v3) {
        return Ok(Some((
            "(iii) 0 ≾ xi(|alpha d(Sx,Ty)|, |d|)",
            vec![moduli.0, moduli.1, v3],
        )));
    }
    Ok(None)
}

/// Samples pairs from the metric's domain and checks the contraction
/// clauses of `spec` for `(S, T)`.
pub fn check_contraction<S, T>(
    spec: &ContractionSpec,
    s: &S,
    t: &T,
    sample_count: usize,
    seed: u64,
) -> CheckReport
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::default();
    let domain = spec.metric.domain();
    for i in 0..sample_count {
        let x = sampler.sample(&domain, &mut rng);
        let y = sampler.sample(&domain, &mut rng);
        let outcome = match contraction_violation(spec, s, t, &x, &y) {
            Ok(v) => v,
            Err(_) => Some(("map or distance evaluation failed", vec![])),
        };
        if let Some((clause, values)) = outcome {
            return CheckReport::fail(
                i + 1,
                i + 1,
                Witness {
                    clause,
                    sample_index: i,
                    points: vec![x, y],
                    values,
                },
            );
        }
    }
    CheckReport::pass(sample_count, sample_count)
}

/// `1 ≾ α(x,y)` implies `1 ≾ α(Sx,Ty)` and `1 ≾ α(Tx,Sy)`.
pub fn check_pair_admissible<S, T>(
    alpha: &AlphaMap,
    s: &S,
    t: &T,
    domain: &PointDomain,
    sample_count: usize,
    seed: u64,
) -> CheckReport
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::default();
    let mut premises = 0;
    for i in 0..sample_count {
        let x = sampler.sample(domain, &mut rng);
        let y = sampler.sample(domain, &mut rng);
        if !admits(alpha, &x, &y) {
            continue;
        }
        premises += 1;
        let images = (s.apply(&x), t.apply(&y), t.apply(&x), s.apply(&y));
        let (Ok(sx), Ok(ty), Ok(tx), Ok(sy)) = images else {
            return CheckReport::fail(
                i + 1,
                premises,
                witness("map evaluation failed", i, vec![x, y]),
            );
        };
        if !admits(alpha, &sx, &ty) {
            return CheckReport::fail(
                i + 1,
                premises,
                witness("1 ≾ alpha(Sx,Ty)", i, vec![x, y, sx, ty]),
            );
        }
        if !admits(alpha, &tx, &sy) {
            return CheckReport::fail(
                i + 1,
                premises,
                witness("1 ≾ alpha(Tx,Sy)", i, vec![x, y, tx, sy]),
            );
        }
    }
    CheckReport::pass(sample_count, premises)
}

fn witness(clause: &'static str, sample_index: usize, points: Vec<Point>) -> Witness {
    Witness {
        clause,
        sample_index,
        points,
        values: vec![],
    }
}

/// Checks the four orbital implications and the two triangular implications
/// on sampled points `x` and pairs `(x, y)`.
pub fn check_triangular_orbital<S, T>(
    alpha: &AlphaMap,
    s: &S,
    t: &T,
    domain: &PointDomain,
    sample_count: usize,
    seed: u64,
) -> CheckReport
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::default();
    let mut premises = 0;
    for i in 0..sample_count {
        let x = sampler.sample(domain, &mut rng);
        let y = sampler.sample(domain, &mut rng);
        match orbital_violation(alpha, s, t, &x, &y) {
            Ok((met, None)) => premises += usize::from(met),
            Ok((met, Some((clause, points)))) => {
                return CheckReport::fail(
                    i + 1,
                    premises + usize::from(met),
                    witness(clause, i, points),
                );
            }
            Err(_) => {
                return CheckReport::fail(
                    i + 1,
                    premises,
                    witness("map evaluation failed", i, vec![x, y]),
                )
            }
        }
    }
    CheckReport::pass(sample_count, premises)
}

type Violation = Option<(&'static str, Vec<Point>)>;

fn orbital_violation<S, T>(
    alpha: &AlphaMap,
    s: &S,
    t: &T,
    x: &Point,
    y: &Point,
) -> Result<(bool, Violation), Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
{
    let (sx, tx) = (s.apply(x)?, t.apply(x)?);
    let (sy, ty) = (s.apply(y)?, t.apply(y)?);
    let mut met = false;
    let fail = |clause, p: &Point, q: &Point| {
        Some((clause, vec![x.clone(), y.clone(), p.clone(), q.clone()]))
    };

    if admits(alpha, x, &sx) {
        met = true;
        let (tsx, ssx) = (t.apply(&sx)?, s.apply(&sx)?);
        if !admits(alpha, &sx, &tsx) {
            return Ok((met, fail("orbital: 1 ≾ alpha(Sx,TSx)", &sx, &tsx)));
        }
        if !admits(alpha, &tx, &ssx) {
            return Ok((met, fail("orbital: 1 ≾ alpha(Tx,S²x)", &tx, &ssx)));
        }
    }
    if admits(alpha, x, &tx) {
        met = true;
        let (ttx, stx) = (t.apply(&tx)?, s.apply(&tx)?);
        if !admits(alpha, &sx, &ttx) {
            return Ok((met, fail("orbital: 1 ≾ alpha(Sx,T²x)", &sx, &ttx)));
        }
        if !admits(alpha, &tx, &stx) {
            return Ok((met, fail("orbital: 1 ≾ alpha(Tx,STx)", &tx, &stx)));
        }
    }
    if admits(alpha, x, y) {
        if admits(alpha, y, &sy) {
            met = true;
            if !admits(alpha, x, &sy) {
                return Ok((met, fail("triangular: 1 ≾ alpha(x,Sy)", y, &sy)));
            }
        }
        if admits(alpha, y, &ty) {
            met = true;
            if !admits(alpha, x, &ty) {
                return Ok((met, fail("triangular: 1 ≾ alpha(x,Ty)", y, &ty)));
            }
        }
    }
    Ok((met, None))
}

/// Regularity surrogate with the default threshold of half the trace.
pub fn check_regularity(
    alpha: &AlphaMap,
    trace: &[Point],
    limit: &Point,
) -> Result<CheckReport, Error> {
    check_regularity_with(alpha, trace, limit, 0.5)
}

/// Passes when at least `⌈min_fraction · |trace|⌉` indices `k` satisfy
/// `1 ≾ α(x_k, limit)` and `1 ≾ α(limit, x_k)`.
pub fn check_regularity_with(
    alpha: &AlphaMap,
    trace: &[Point],
    limit: &Point,
    min_fraction: f64,
) -> Result<CheckReport, Error> {
    if trace.is_empty() {
        return Err(Error::EmptySequence);
    }
    if !(min_fraction > 0.0 && min_fraction <= 1.0) {
        return Err(invalid("min_fraction", "must lie in (0, 1]"));
    }
    let qualifying = trace
        .iter()
        .filter(|x| admits(alpha, x, limit) && admits(alpha, limit, x))
        .count();
    let needed = libm::ceil(min_fraction * trace.len() as f64) as usize;
    if qualifying >= needed {
        Ok(CheckReport::pass(trace.len(), qualifying))
    } else {
        Ok(CheckReport::fail(
            trace.len(),
            qualifying,
            Witness {
                clause: "too few indices with 1 ≾ alpha(x_k, x) and 1 ≾ alpha(x, x_k)",
                sample_index: trace.len() - 1,
                points: vec![limit.clone()],
                values: vec![],
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::ComplexMap;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Point {
        Point::Complex(ComplexScalar { re, im })
    }

    fn z(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar { re, im }
    }

    fn halving() -> ComplexMap<fn(ComplexScalar) -> ComplexScalar> {
        ComplexMap(|w| (w + ComplexScalar::I).scale(0.5))
    }

    fn identity() -> ComplexMap<fn(ComplexScalar) -> ComplexScalar> {
        ComplexMap(|w| w)
    }

    fn plain_spec() -> ContractionSpec {
        ContractionSpec::new(
            ContractionVariant::Plain,
            SimulationFn::linear(0.6).unwrap(),
            AlphaMap::ConstantOne,
            ComplexMetric::d1(),
        )
        .unwrap()
    }

    #[test]
    fn m_value_examples() {
        let d1 = ComplexMetric::d1();
        let h = halving();
        let fixed = c(0.0, 1.0);
        assert_eq!(m_value(&fixed, &fixed, &h, &h, &d1, 0.3).unwrap(), 0.0);
        let id = identity();
        assert_eq!(
            m_value(&c(0.0, 0.0), &c(2.0, 0.0), &id, &id, &d1, 0.5).unwrap(),
            1.0
        );
        // max{|0 - i|, |0 - i/2|, |i - i|, (|0 - i| + |i - i/2|)/2} = max{1, 0.5, 0, 0.75}
        assert_eq!(
            m_value(&c(0.0, 0.0), &c(0.0, 1.0), &h, &h, &d1, 0.5).unwrap(),
            0.5
        );
        assert!(m_value(&fixed, &fixed, &h, &h, &d1, 1.0).is_err());
    }

    #[test]
    fn n_value_examples() {
        let d1 = ComplexMetric::d1();
        let h = halving();
        let fixed = c(0.0, 1.0);
        assert_eq!(n_value(&fixed, &fixed, &h, &h, &d1).unwrap(), 0.0);
        let id = identity();
        assert_eq!(
            n_value(&c(0.0, 0.0), &c(1.0, 0.0), &id, &id, &d1).unwrap(),
            1.0
        );
        // Direct evaluation: max{0, (1·1 + 1·1)/(1 + 0)} = 2.
        let collapse = ComplexMap(|_: ComplexScalar| ComplexScalar::ZERO);
        assert_eq!(
            n_value(&c(1.0, 0.0), &c(1.0, 0.0), &collapse, &collapse, &d1).unwrap(),
            2.0
        );
    }

    #[test]
    fn plain_contraction_on_halving_map() {
        let report = check_contraction(&plain_spec(), &halving(), &halving(), 10_000, 42);
        assert!(report.passed, "{report:?}");
        assert_eq!(report.samples_tested, 10_000);
    }

    #[test]
    fn doubling_map_is_rejected() {
        let double = ComplexMap(|w: ComplexScalar| w.scale(2.0));
        let report = check_contraction(&plain_spec(), &double, &double, 10_000, 42);
        assert!(!report.passed);
        let w = report.witness.unwrap();
        assert_eq!(w.clause, "(ii) 0 ≾ xi(alpha d(Sx,Ty), d)");
        assert_eq!(w.sample_index, 0);
    }

    #[test]
    fn diagonal_sample_at_common_fixed_point_satisfies_clauses() {
        for variant in [
            ContractionVariant::Plain,
            ContractionVariant::MType { lambda: 0.5 },
            ContractionVariant::NType,
        ] {
            let spec = ContractionSpec {
                variant,
                ..plain_spec()
            };
            let p = c(0.0, 1.0);
            assert_eq!(
                contraction_violation(&spec, &halving(), &halving(), &p, &p).unwrap(),
                None
            );
        }
    }

    #[test]
    fn generalized_variants_on_halving_map() {
        let xi = SimulationFn::linear(0.6).unwrap();
        let n_spec = ContractionSpec::new(
            ContractionVariant::NType,
            xi,
            AlphaMap::ConstantOne,
            ComplexMetric::d1(),
        )
        .unwrap();
        assert!(check_contraction(&n_spec, &halving(), &halving(), 10_000, 42).passed);
        let m_spec = ContractionSpec::new(
            ContractionVariant::MType { lambda: 0.9 },
            xi,
            AlphaMap::ConstantOne,
            ComplexMetric::d1(),
        )
        .unwrap();
        assert!(check_contraction(&m_spec, &halving(), &halving(), 10_000, 42).passed);
        // λ_M · λ_xi = 0.3 < 1/2 leaves pairs with M = λ_M |d(x,y)| uncovered.
        let weak = ContractionSpec::new(
            ContractionVariant::MType { lambda: 0.5 },
            xi,
            AlphaMap::ConstantOne,
            ComplexMetric::d1(),
        )
        .unwrap();
        assert!(!check_contraction(&weak, &halving(), &halving(), 10_000, 42).passed);
        assert!(ContractionSpec::new(
            ContractionVariant::MType { lambda: 1.0 },
            xi,
            AlphaMap::ConstantOne,
            ComplexMetric::d1()
        )
        .is_err());
    }

    #[test]
    fn negative_alpha_fails_first_clause() {
        let spec = ContractionSpec {
            alpha: AlphaMap::Custom {
                name: "minus-one",
                f: |_, _| z(-1.0, 0.0),
            },
            ..plain_spec()
        };
        let report = check_contraction(&spec, &halving(), &halving(), 10, 1);
        assert_eq!(
            report.witness.unwrap().clause,
            "(i) 0 ≾ alpha(x,y) d(Sx,Ty)"
        );
    }

    #[test]
    fn pair_admissibility() {
        let domain = PointDomain::Complex;
        let conj = ComplexMap(|w: ComplexScalar| w.conj());
        let r = check_pair_admissible(&AlphaMap::ConstantOne, &conj, &halving(), &domain, 1000, 1);
        assert!(r.passed && r.premises_met == 1000);
        let r = check_pair_admissible(
            &AlphaMap::upper_half_plane(),
            &conj,
            &conj,
            &domain,
            1000,
            1,
        );
        assert!(!r.passed);
        assert_eq!(r.witness.unwrap().clause, "1 ≾ alpha(Sx,Ty)");
        let r = check_pair_admissible(&AlphaMap::zero(), &conj, &conj, &domain, 1000, 1);
        assert!(r.passed && r.is_vacuous());
    }

    #[test]
    fn triangular_orbital() {
        let domain = PointDomain::Complex;
        let halve = ComplexMap(|w: ComplexScalar| w.scale(0.5));
        let double = ComplexMap(|w: ComplexScalar| w.scale(2.0));
        assert!(
            check_triangular_orbital(&AlphaMap::ConstantOne, &halve, &halve, &domain, 1000, 3)
                .passed
        );
        // With S = T the premise 1 ≾ α(x, x/2) forces x = 0: no sample meets it.
        let r = check_triangular_orbital(&AlphaMap::modulus_le(), &halve, &halve, &domain, 1000, 3);
        assert!(r.is_vacuous());
        let r =
            check_triangular_orbital(&AlphaMap::modulus_le(), &halve, &double, &domain, 1000, 3);
        assert!(!r.passed);
        assert_eq!(r.witness.unwrap().clause, "orbital: 1 ≾ alpha(Tx,STx)");
        let r = check_triangular_orbital(&AlphaMap::zero(), &halve, &double, &domain, 1000, 3);
        assert!(r.is_vacuous());
    }

    #[test]
    fn regularity() {
        let trace: Vec<Point> = (0..10).map(|k| c(k as f64, 0.0)).collect();
        let limit = c(0.0, 0.0);
        assert!(
            check_regularity(&AlphaMap::ConstantOne, &trace, &limit)
                .unwrap()
                .passed
        );
        assert!(
            !check_regularity(&AlphaMap::zero(), &trace, &limit)
                .unwrap()
                .passed
        );
        let even = AlphaMap::Indicator {
            name: "even-index",
            region: |x, y| {
                let even = |p: &Point| p.as_complex().is_some_and(|w| libm::fmod(w.re, 2.0) == 0.0);
                even(x) && even(y)
            },
        };
        let r = check_regularity(&even, &trace, &limit).unwrap();
        assert!(r.passed && r.premises_met == 5);
        assert!(check_regularity(&even, &trace[..9], &limit).unwrap().passed);
        assert!(!check_regularity(&even, &trace[1..], &limit).unwrap().passed);
        assert!(check_regularity(&AlphaMap::ConstantOne, &[], &limit).is_err());
        assert!(check_regularity_with(&even, &trace, &limit, 0.6)
            .map(|r| !r.passed)
            .unwrap());
    }

    #[test]
    fn reports_are_deterministic() {
        let double = ComplexMap(|w: ComplexScalar| w.scale(2.0));
        let spec = plain_spec();
        assert_eq!(
            check_contraction(&spec, &double, &double, 100, 9),
            check_contraction(&spec, &double, &double, 100, 9)
        );
    }

    proptest! {
        #[test]
        fn m_and_n_swap_roles(x in (-10.0..10.0f64, -10.0..10.0f64), y in (-10.0..10.0f64, -10.0..10.0f64), lambda in 0.01..0.99f64) {
            let (x, y) = (c(x.0, x.1), c(y.0, y.1));
            let s = ComplexMap(|w: ComplexScalar| w.scale(0.3) + ComplexScalar::ONE);
            let t = ComplexMap(|w: ComplexScalar| (w + ComplexScalar::I).scale(0.5));
            let d = ComplexMetric::d3();
            prop_assert_eq!(m_value(&x, &y, &s, &t, &d, lambda).unwrap(), m_value(&y, &x, &t, &s, &d, lambda).unwrap());
            prop_assert_eq!(n_value(&x, &y, &s, &t, &d).unwrap(), n_value(&y, &x, &t, &s, &d).unwrap());
        }

        #[test]
        fn m_is_linear_in_lambda(x in (-10.0..10.0f64, -10.0..10.0f64), y in (-10.0..10.0f64, -10.0..10.0f64), lambda in 0.01..0.49f64) {
            let (x, y) = (c(x.0, x.1), c(y.0, y.1));
            let h = halving();
            let d = ComplexMetric::d1();
            let single = m_value(&x, &y, &h, &h, &d, lambda).unwrap();
            let double = m_value(&x, &y, &h, &h, &d, 2.0 * lambda).unwrap();
            prop_assert!((double - 2.0 * single).abs() <= 1e-12 * (1.0 + double));
        }
    }
}
