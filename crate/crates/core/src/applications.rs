//! Discretized integral operators for two boundary value problems.
//!
//! The Volterra problem `x(t) = 2 + ∫_a^t (x(s) + s³) e^{1−2s} ds` is solved
//! with a cumulative trapezoid rule. The periodic problem
//! `u′ = f(t, u)`, `u(0) = u(a)` is rewritten with a Green kernel `H` as
//! `u(t) = ∫_0^a H(t, s) [f(s, u(s)) + η u(s)] ds` and integrated with a
//! trapezoid rule split at the kernel's jump `s = t`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{iterate_single, FixpointResult, SolverConfig};
use crate::error::invalid;
use crate::metric::ComplexMetric;
pub use crate::point::{GridFunction, GridShape};
use crate::point::{Point, SelfMap};
use crate::Error;

/// A periodic solution is certified when its ODE residual is at most this.
pub const PERIODIC_RESIDUAL_LIMIT: f64 = 1e-4;

fn volterra_integrand(x: f64, s: f64) -> f64 {
    (x + s * s * s) * libm::exp(1.0 - 2.0 * s)
}

fn volterra_shape_ok(shape: &GridShape, a: f64, b: f64) -> bool {
    shape.start == a && shape.end == b && shape.dim == 1
}

/// `λ = (b − a) / e^{2a − 1}`, the Lipschitz constant of the Volterra operator
/// in the sup norm.
pub fn volterra_lambda(a: f64, b: f64) -> f64 {
    (b - a) / libm::exp(2.0 * a - 1.0)
}

/// `t_i ↦ 2 + ∫_a^{t_i} (x(s) + s³) e^{1−2s} ds` by cumulative trapezoid.
pub fn volterra_operator(x: &GridFunction, a: f64, b: f64) -> Result<GridFunction, Error> {
    let shape = x.shape();
    if !volterra_shape_ok(&shape, a, b) {
        return Err(Error::DomainMismatch);
    }
    let mut out = Vec::with_capacity(shape.nodes);
    let mut acc = 2.0;
    out.push(acc);
    let mut prev = volterra_integrand(x.value(0)[0], shape.node(0));
    for i in 1..shape.nodes {
        let cur = volterra_integrand(x.value(i)[0], shape.node(i));
        acc += 0.5 * (shape.node(i) - shape.node(i - 1)) * (prev + cur);
        out.push(acc);
        prev = cur;
    }
    GridFunction::new(shape, out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolterraOperator {
    pub a: f64,
    pub b: f64,
}

impl SelfMap for VolterraOperator {
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        let g = x.as_grid().ok_or(Error::DomainMismatch)?;
        volterra_operator(g, self.a, self.b).map(Point::Grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSolution {
    pub result: FixpointResult,
    pub lambda: f64,
    /// Set when `λ ≥ 1`, i.e. the contraction estimate gives no guarantee.
    pub lambda_warning: bool,
}

/// Solves the Volterra problem on `[a, b]` with `nodes` grid points, starting
/// from `x₀ ≡ 2`.
pub fn solve_integral_equation(
    a: f64,
    b: f64,
    nodes: usize,
    cfg: &SolverConfig,
) -> Result<IntegralSolution, Error> {
    if a.is_nan() || a < 1.0 {
        return Err(invalid("a", "must be at least 1"));
    }
    if nodes < 3 {
        return Err(invalid("grid", "at least three nodes are required"));
    }
    let shape = GridShape::new(a, b, nodes, 1)?;
    let metric = ComplexMetric::interval_sup(shape)?;
    let lambda = volterra_lambda(a, b);
    let lambda_warning = lambda >= 1.0;
    if lambda_warning {
        log::warn!("contraction estimate λ = {lambda} is not below 1");
    }
    let x0 = Point::Grid(GridFunction::constant(shape, 2.0)?);
    let result = iterate_single(&VolterraOperator { a, b }, &x0, &metric, cfg)?;
    Ok(IntegralSolution {
        result,
        lambda,
        lambda_warning,
    })
}

fn kernel_params_ok(a: f64, eta: f64) -> Result<(), Error> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", "period must be positive and finite"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(invalid("eta", "must be positive and finite"));
    }
    Ok(())
}

/// `1 − e^{−ηa}`, the kernel's normalising denominator after dividing through
/// by `e^{ηa}`.
fn kernel_denominator(a: f64, eta: f64) -> f64 {
    -libm::expm1(-eta * a)
}

/// The Green kernel of `u′ + ηu = g`, `u(0) = u(a)`:
/// `e^{η(a+s−t)}/(e^{ηa}−1)` for `s ≤ t` and `e^{η(s−t)}/(e^{ηa}−1)` for
/// `s > t`.
pub fn green_kernel(t: f64, s: f64, a: f64, eta: f64) -> Result<f64, Error> {
    kernel_params_ok(a, eta)?;
    if !(0.0..=a).contains(&t) || !(0.0..=a).contains(&s) {
        return Err(invalid("t, s", "kernel arguments must lie in [0, a]"));
    }
    let d = kernel_denominator(a, eta);
    Ok(if s <= t {
        libm::exp(eta * (s - t)) / d
    } else {
        libm::exp(eta * (s - t - a)) / d
    })
}

/// Trapezoid approximation of `∫_0^a H(t, s) ds` on a uniform grid of `nodes`
/// points, with `t` inserted as a breakpoint.
pub fn kernel_mass(t: f64, a: f64, eta: f64, nodes: usize) -> Result<f64, Error> {
    kernel_params_ok(a, eta)?;
    if nodes < 3 {
        return Err(invalid("grid", "at least three nodes are required"));
    }
    if !(0.0..=a).contains(&t) {
        return Err(invalid("t", "must lie in [0, a]"));
    }
    let d = kernel_denominator(a, eta);
    let left = |s: f64| libm::exp(eta * (s - t)) / d;
    let right = |s: f64| libm::exp(eta * (s - t - a)) / d;
    let h = a / (nodes - 1) as f64;
    let node = |k: usize| if k + 1 == nodes { a } else { k as f64 * h };

    // Left piece: nodes strictly below t, then t itself.
    let mut mass = 0.0;
    let mut prev = (0.0, left(0.0));
    for k in 1..nodes {
        let s = node(k);
        if s >= t {
            break;
        }
        let cur = (s, left(s));
        mass += 0.5 * (cur.0 - prev.0) * (cur.1 + prev.1);
        prev = cur;
    }
    mass += 0.5 * (t - prev.0) * (left(t) + prev.1);

    // Right piece: t, then nodes strictly above it.
    let mut prev = (t, right(t));
    for k in 0..nodes {
        let s = node(k);
        if s <= t {
            continue;
        }
        let cur = (s, right(s));
        mass += 0.5 * (cur.0 - prev.0) * (cur.1 + prev.1);
        prev = cur;
    }
    Ok(mass)
}

/// Right-hand side `f(t, u)` of the periodic problem, written into `out`.
#[derive(Debug, Clone, Copy)]
pub enum ProblemFn {
    /// `f(t, u) = t − u`.
    Example32,
    /// `f(t, u) = −ln(10 + t²) u`.
    Example33,
    Zero,
    /// `f(t, u) = u_coeff·u + t_coeff·t + constant`, componentwise.
    Linear {
        u_coeff: f64,
        t_coeff: f64,
        constant: f64,
    },
    Callback(fn(f64, &[f64], &mut [f64])),
}

impl ProblemFn {
    pub fn eval(&self, t: f64, u: &[f64], out: &mut [f64]) {
        match *self {
            ProblemFn::Example32 => out.iter_mut().zip(u).for_each(|(o, v)| *o = t - v),
            ProblemFn::Example33 => {
                let c = libm::log(10.0 + t * t);
                out.iter_mut().zip(u).for_each(|(o, v)| *o = -c * v);
            }
            ProblemFn::Zero => out.fill(0.0),
            ProblemFn::Linear {
                u_coeff,
                t_coeff,
                constant,
            } => out
                .iter_mut()
                .zip(u)
                .for_each(|(o, v)| *o = u_coeff * v + t_coeff * t + constant),
            ProblemFn::Callback(f) => f(t, u, out),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodicProblem {
    pub f: ProblemFn,
    pub a: f64,
    pub eta: f64,
    pub n: usize,
}

impl PeriodicProblem {
    pub fn new(f: ProblemFn, a: f64, eta: f64, n: usize) -> Result<Self, Error> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid("a", "period must be positive and finite"));
        }
        if !(eta > 1.0 && eta.is_finite()) {
            return Err(invalid("eta", "must be finite and greater than 1"));
        }
        if n < 1 {
            return Err(invalid("n", "dimension must be at least 1"));
        }
        Ok(PeriodicProblem { f, a, eta, n })
    }

    pub fn shape(&self, nodes: usize) -> Result<GridShape, Error> {
        GridShape::new(0.0, self.a, nodes, self.n)
    }

    fn check_grid(&self, u: &GridFunction) -> Result<(), Error> {
        let s = u.shape();
        if s.start != 0.0 || s.end != self.a || s.dim != self.n {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }
}

/// `t_i ↦ ∫_0^a H(t_i, s) [f(s, u(s)) + η u(s)] ds`, trapezoid on `[0, t_i]`
/// and `[t_i, a]` separately.
pub fn periodic_operator(u: &GridFunction, p: &PeriodicProblem) -> Result<GridFunction, Error> {
    p.check_grid(u)?;
    let shape = u.shape();
    let (nodes, dim) = (shape.nodes, shape.dim);
    let h = shape.spacing();
    let d = kernel_denominator(p.a, p.eta);

    // H(t_i, s_j) = powers[i − j]/D for j ≤ i and powers[N − 1 − (j − i)]/D for j ≥ i.
    let powers: Vec<f64> = (0..nodes)
        .map(|k| libm::exp(-p.eta * h * k as f64))
        .collect();

    let mut g = vec![0.0; nodes * dim];
    for (j, row) in g.chunks_exact_mut(dim).enumerate() {
        let uj = u.value(j);
        p.f.eval(shape.node(j), uj, row);
        row.iter_mut().zip(uj).for_each(|(r, v)| *r += p.eta * v);
    }

    let mut out = vec![0.0; nodes * dim];
    let mut acc = vec![0.0; dim];
    for i in 0..nodes {
        acc.fill(0.0);
        if i > 0 {
            for j in 0..=i {
                let w = if j == 0 || j == i { 0.5 } else { 1.0 } * powers[i - j];
                acc.iter_mut()
                    .zip(&g[j * dim..(j + 1) * dim])
                    .for_each(|(a, v)| *a += w * v);
            }
        }
        if i + 1 < nodes {
            for j in i..nodes {
                let w =
                    if j == i || j == nodes - 1 { 0.5 } else { 1.0 } * powers[nodes - 1 - (j - i)];
                acc.iter_mut()
                    .zip(&g[j * dim..(j + 1) * dim])
                    .for_each(|(a, v)| *a += w * v);
            }
        }
        out[i * dim..(i + 1) * dim]
            .iter_mut()
            .zip(&acc)
            .for_each(|(o, a)| *o = h * a / d);
    }
    GridFunction::new(shape, out)
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodicOperator {
    pub problem: PeriodicProblem,
}

impl SelfMap for PeriodicOperator {
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        let g = x.as_grid().ok_or(Error::DomainMismatch)?;
        periodic_operator(g, &self.problem).map(Point::Grid)
    }
}

/// `max_i ‖(u_{i+1} − u_{i−1})/2h − f(t_i, u_i)‖_∞ + ‖u(0) − u(a)‖_∞` over
/// interior nodes.
pub fn residual_periodic(u: &GridFunction, p: &PeriodicProblem) -> Result<f64, Error> {
    p.check_grid(u)?;
    let shape = u.shape();
    if shape.nodes < 3 {
        return Err(invalid("grid", "at least three nodes are required"));
    }
    let h = shape.spacing();
    let mut fv = vec![0.0; shape.dim];
    let mut worst: f64 = 0.0;
    for i in 1..shape.nodes - 1 {
        p.f.eval(shape.node(i), u.value(i), &mut fv);
        let (next, prev) = (u.value(i + 1), u.value(i - 1));
        for (k, f) in fv.iter().enumerate() {
            let du = (next[k] - prev[k]) / (2.0 * h);
            worst = worst.max((du - f).abs());
        }
    }
    let gap = u
        .value(0)
        .iter()
        .zip(u.value(shape.nodes - 1))
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
    Ok(worst + gap)
}

/// Sampled estimate of `sup ‖f(t,u) + ηu − f(t,v) − ηv‖_∞ / ‖u − v‖_∞`.
///
/// The convergence theory for the periodic solver needs this to be at most 1.
pub fn lipschitz_estimate(p: &PeriodicProblem, sample_count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut u, mut v) = (vec![0.0; p.n], vec![0.0; p.n]);
    let (mut fu, mut fv) = (vec![0.0; p.n], vec![0.0; p.n]);
    let mut worst: f64 = 0.0;
    for _ in 0..sample_count {
        let t = rng.random_range(0.0..=p.a);
        u.iter_mut()
            .for_each(|x| *x = rng.random_range(-10.0..=10.0));
        v.iter_mut()
            .for_each(|x| *x = rng.random_range(-10.0..=10.0));
        p.f.eval(t, &u, &mut fu);
        p.f.eval(t, &v, &mut fv);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for k in 0..p.n {
            num = num.max((fu[k] + p.eta * u[k] - fv[k] - p.eta * v[k]).abs());
            den = den.max((u[k] - v[k]).abs());
        }
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    worst
}

const LIPSCHITZ_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSolution {
    pub result: FixpointResult,
    pub residual: f64,
    pub lipschitz: f64,
    /// Engine convergence plus `residual ≤ PERIODIC_RESIDUAL_LIMIT`.
    pub certified: bool,
}

/// Solves the periodic problem on `nodes` grid points from `u₀ ≡ 0`.
pub fn solve_periodic(
    p: &PeriodicProblem,
    nodes: usize,
    cfg: &SolverConfig,
) -> Result<PeriodicSolution, Error> {
    if nodes < 3 {
        return Err(invalid("grid", "at least three nodes are required"));
    }
    let shape = p.shape(nodes)?;
    let metric = ComplexMetric::periodic_sup(shape)?;
    let lipschitz = lipschitz_estimate(p, LIPSCHITZ_SAMPLES, 0);
    if lipschitz > 1.0 {
        log::warn!("sampled Lipschitz bound {lipschitz} of f + ηu exceeds 1");
    }
    let u0 = Point::Grid(GridFunction::constant(shape, 0.0)?);
    let result = iterate_single(&PeriodicOperator { problem: *p }, &u0, &metric, cfg)?;
    let residual = residual_periodic(result.point.as_grid().expect("grid iterate"), p)?;
    let certified = result.converged && residual <= PERIODIC_RESIDUAL_LIMIT;
    Ok(PeriodicSolution {
        result,
        residual,
        lipschitz,
        certified,
    })
}
