//! Alternating Picard iteration for a pair of self-maps.
//!
//! Starting from a caller-supplied `x₀` the engine builds
//! `x₁ = S x₀, x₂ = T x₁, x₃ = S x₂, …` and records the step moduli
//! `|d(x_n, x_{n+1})|`. It stops once the last `cauchy_window` steps are all
//! below `tol`, then confirms the limit with the residuals `|d(Su, u)|` and
//! `|d(Tu, u)|`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::metric::{cauchy_tail, Distance};
use crate::point::{Point, PointDomain, Sampler, SelfMap};
use crate::report::{CheckReport, Witness};
use crate::Error;

/// Iterates whose largest component exceeds this are treated as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;

/// Converged results must have both residuals within this multiple of `tol`.
pub const RESIDUAL_FACTOR: f64 = 10.0;

/// Relative tolerance for deciding that two map compositions agree.
pub const COMMUTE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub cauchy_window: usize,
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize, cauchy_window: usize) -> Result<Self, Error> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(invalid("tol", "must be positive and finite"));
        }
        if max_iter < 1 {
            return Err(invalid("max_iter", "must be at least 1"));
        }
        if cauchy_window < 1 {
            return Err(invalid("cauchy_window", "must be at least 1"));
        }
        Ok(SolverConfig {
            tol,
            max_iter,
            cauchy_window,
        })
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 1000,
            cauchy_window: 1,
        }
    }
}

/// The iterates `x_0, x_1, …` and `deltas[n] = |d(x_n, x_{n+1})|`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTrace {
    pub points: Vec<Point>,
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixpointResult {
    pub point: Point,
    pub trace: IterationTrace,
    pub converged: bool,
    pub residual_s: f64,
    pub residual_t: f64,
}

impl FixpointResult {
    /// Number of map applications performed.
    pub fn iterations(&self) -> usize {
        self.trace.deltas.len()
    }
}

/// Alternating iteration `x_{2n+1} = S x_{2n}`, `x_{2n+2} = T x_{2n+1}`.
///
/// Fails with [`Error::Divergence`] (carrying the partial trace) when an
/// iterate stops being finite or grows past [`DIVERGENCE_BOUND`]. Running out
/// of iterations is not an error: the result comes back with
/// `converged == false`.
pub fn iterate_pair<S, T, D>(
    s: &S,
    t: &T,
    x0: &Point,
    metric: &D,
    cfg: &SolverConfig,
) -> Result<FixpointResult, Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
    D: Distance + ?Sized,
{
    if x0.domain() != metric.domain() {
        return Err(Error::DomainMismatch);
    }
    let mut trace = IterationTrace {
        points: vec![x0.clone()],
        deltas: Vec::new(),
    };
    let mut settled = false;
    for n in 0..cfg.max_iter {
        let current = &trace.points[n];
        let next = if n % 2 == 0 {
            s.apply(current)?
        } else {
            t.apply(current)?
        };
        if next.max_magnitude() > DIVERGENCE_BOUND {
            trace.points.push(next);
            return Err(Error::Divergence {
                trace: Box::new(trace),
            });
        }
        let delta = metric.distance(current, &next)?.modulus();
        trace.points.push(next);
        trace.deltas.push(delta);
        if cauchy_tail(&trace.deltas, cfg.tol, cfg.cauchy_window)? {
            settled = true;
            break;
        }
    }
    let point = trace.points[trace.points.len() - 1].clone();
    let residual_s = metric.distance(&s.apply(&point)?, &point)?.modulus();
    let residual_t = metric.distance(&t.apply(&point)?, &point)?.modulus();
    let bound = RESIDUAL_FACTOR * cfg.tol;
    let converged = settled && residual_s <= bound && residual_t <= bound;
    Ok(FixpointResult {
        point,
        trace,
        converged,
        residual_s,
        residual_t,
    })
}

/// Plain Picard iteration of a single map.
pub fn iterate_single<T, D>(
    t: &T,
    x0: &Point,
    metric: &D,
    cfg: &SolverConfig,
) -> Result<FixpointResult, Error>
where
    T: SelfMap + ?Sized,
    D: Distance + ?Sized,
{
    iterate_pair(t, t, x0, metric, cfg)
}

/// Runs the pair iteration from every start and passes iff every run
/// converges and all limits lie within `RESIDUAL_FACTOR · tol` of each other.
pub fn uniqueness_probe<S, T, D>(
    s: &S,
    t: &T,
    starts: &[Point],
    metric: &D,
    cfg: &SolverConfig,
) -> Result<CheckReport, Error>
where
    S: SelfMap + ?Sized,
    T: SelfMap + ?Sized,
    D: Distance + ?Sized,
{
    if starts.len() < 2 {
        return Err(invalid(
            "starts",
            "at least two starting points are required",
        ));
    }
    let mut limits: Vec<Point> = Vec::with_capacity(starts.len());
    for (i, x0) in starts.iter().enumerate() {
        match iterate_pair(s, t, x0, metric, cfg) {
            Ok(r) if r.converged => limits.push(r.point),
            _ => {
                return Ok(CheckReport::fail(
                    i + 1,
                    i + 1,
                    Witness {
                        clause: "run did not converge",
                        sample_index: i,
                        points: vec![x0.clone()],
                        values: vec![],
                    },
                ))
            }
        }
    }
    let bound = RESIDUAL_FACTOR * cfg.tol;
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            let gap = metric.distance(&limits[i], &limits[j])?;
            if gap.modulus() > bound {
                return Ok(CheckReport::fail(
                    starts.len(),
                    starts.len(),
                    Witness {
                        clause: "limits differ",
                        sample_index: j,
                        points: vec![limits[i].clone(), limits[j].clone()],
                        values: vec![gap],
                    },
                ));
            }
        }
    }
    Ok(CheckReport::pass(starts.len(), starts.len()))
}

/// `x ↦ m₁(m₂(…mₙ(x)))`.
pub struct Composition<'a> {
    maps: Vec<&'a dyn SelfMap>,
}

impl SelfMap for Composition<'_> {
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        let (last, rest) = self.maps.split_last().expect("composition is non-empty");
        let mut y = last.apply(x)?;
        for m in rest.iter().rev() {
            y = m.apply(&y)?;
        }
        Ok(y)
    }
}

pub fn compose_family<'a>(maps: &[&'a dyn SelfMap]) -> Result<Composition<'a>, Error> {
    if maps.is_empty() {
        return Err(invalid("maps", "family must contain at least one map"));
    }
    Ok(Composition {
        maps: maps.to_vec(),
    })
}

/// Checks `S_i S_j = S_j S_i`, `T_i T_j = T_j T_i` and `S_i T_j = T_j S_i`
/// at sampled points.
pub fn check_pairwise_commuting(
    family_s: &[&dyn SelfMap],
    family_t: &[&dyn SelfMap],
    domain: &PointDomain,
    sample_count: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::default();
    for k in 0..sample_count {
        let x = sampler.sample(domain, &mut rng);
        let within = |fam: &[&dyn SelfMap], clause| {
            for (i, a) in fam.iter().enumerate() {
                for b in &fam[i + 1..] {
                    if let Some(w) = commute_violation(*a, *b, &x, clause, k) {
                        return Some(w);
                    }
                }
            }
            None
        };
        let found = within(family_s, "S_i S_j = S_j S_i")
            .or_else(|| within(family_t, "T_i T_j = T_j T_i"))
            .or_else(|| {
                family_s.iter().find_map(|a| {
                    family_t
                        .iter()
                        .find_map(|b| commute_violation(*a, *b, &x, "S_i T_j = T_j S_i", k))
                })
            });
        if let Some(w) = found {
            return CheckReport::fail(k + 1, k + 1, w);
        }
    }
    CheckReport::pass(sample_count, sample_count)
}

fn commute_violation(
    a: &dyn SelfMap,
    b: &dyn SelfMap,
    x: &Point,
    clause: &'static str,
    k: usize,
) -> Option<Witness> {
    let ab = a.apply(x).and_then(|y| b.apply(&y));
    let ba = b.apply(x).and_then(|y| a.apply(&y));
    match (ab, ba) {
        (Ok(ab), Ok(ba)) if ab.approx_eq(&ba, COMMUTE_TOLERANCE) => None,
        (Ok(ab), Ok(ba)) => Some(Witness {
            clause,
            sample_index: k,
            points: vec![x.clone(), ba, ab],
            values: vec![],
        }),
        _ => Some(Witness {
            clause: "map evaluation failed",
            sample_index: k,
            points: vec![x.clone()],
            values: vec![],
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub result: FixpointResult,
    /// `|d(S_i u, u)|` for every member of the first family.
    pub residuals_s: Vec<f64>,
    /// `|d(T_j u, u)|` for every member of the second family.
    pub residuals_t: Vec<f64>,
    /// Advisory commuting check; the solve runs regardless of its outcome.
    pub commuting: CheckReport,
}

/// Seed and sample count of the advisory commuting check.
const FAMILY_CHECK_SAMPLES: usize = 256;
const FAMILY_CHECK_SEED: u64 = 0;

/// Composes both families, iterates the composite pair, and reports the
/// residual of every component map at the limit.
pub fn family_fixed_point<D>(
    family_s: &[&dyn SelfMap],
    family_t: &[&dyn SelfMap],
    x0: &Point,
    metric: &D,
    cfg: &SolverConfig,
) -> Result<FamilyResult, Error>
where
    D: Distance + ?Sized,
{
    let s = compose_family(family_s)?;
    let t = compose_family(family_t)?;
    let commuting = check_pairwise_commuting(
        family_s,
        family_t,
        &metric.domain(),
        FAMILY_CHECK_SAMPLES,
        FAMILY_CHECK_SEED,
    );
    if !commuting.passed {
        log::warn!("component families do not commute; the common fixed point may not be shared");
    }
    let result = iterate_pair(&s, &t, x0, metric, cfg)?;
    let residual = |m: &&dyn SelfMap| -> Result<f64, Error> {
        Ok(metric
            .distance(&m.apply(&result.point)?, &result.point)?
            .modulus())
    };
    let residuals_s = family_s.iter().map(residual).collect::<Result<_, _>>()?;
    let residuals_t = family_t.iter().map(residual).collect::<Result<_, _>>()?;
    Ok(FamilyResult {
        result,
        residuals_s,
        residuals_t,
        commuting,
    })
}
