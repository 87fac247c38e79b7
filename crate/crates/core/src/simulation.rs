//! ℂ-simulation functions and a falsifier for their three axioms.
//!
//! A ℂ-simulation function `ξ: S × S → ℂ` on the cone `S` satisfies
//!
//! 1. `ξ(0, 0) = 0`,
//! 2. `ξ(t, s) ⪇ s − t` whenever `0 ⪇ t, s`,
//! 3. `limsup ξ(|t_n|, |s_n|) ⪇ 0` whenever `|t_n|` and `|s_n|` share a
//!    positive limit.
//!
//! Axiom 3 quantifies over all sequences, so [`check_simulation_axioms`] only
//! searches a parametric family of sequences for a counterexample. The limsup
//! of complex values is taken componentwise.

use alloc::vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::invalid;
use crate::order::{in_cone, precnsim, precsim, ComplexScalar, OrderConfig};
use crate::point::Point;
use crate::report::{CheckReport, Witness};
use crate::Error;

/// Numerical floor used for "≾ 0 and ≠ 0" at the limit.
pub const LIMIT_TOLERANCE: f64 = 1e-12;

/// Perturbation size at which the axiom-3 test sequences are evaluated.
const TAIL_PERTURBATION: f64 = 1e-14;

pub trait Simulation {
    /// Raw evaluation; callers guarantee both arguments lie in the cone.
    fn eval(&self, t: ComplexScalar, s: ComplexScalar) -> ComplexScalar;
}

/// Built-in continuous self-maps of the cone used for `ψ` and `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeMap {
    Identity,
    /// `t ↦ c·t`, `c ≥ 0`.
    Scale(f64),
}

impl ConeMap {
    pub fn scale(c: f64) -> Result<Self, Error> {
        if c.is_finite() && c >= 0.0 {
            Ok(ConeMap::Scale(c))
        } else {
            Err(invalid("scale", "factor must be finite and non-negative"))
        }
    }

    pub fn apply(&self, t: ComplexScalar) -> ComplexScalar {
        match self {
            ConeMap::Identity => t,
            ConeMap::Scale(c) => t.scale(*c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulationFn {
    /// `λ s − t`
    Linear { lambda: f64 },
    /// `ψ(s) − φ(t)`
    PsiPhi { psi: ConeMap, phi: ConeMap },
    /// `s − t − i|t|`
    ImagPenalty,
}

impl SimulationFn {
    pub fn linear(lambda: f64) -> Result<Self, Error> {
        if lambda > 0.0 && lambda < 1.0 {
            Ok(SimulationFn::Linear { lambda })
        } else {
            Err(invalid("lambda", "must lie in (0, 1)"))
        }
    }

    /// Requires `ψ(t) ⪇ t ≾ φ(t)` on a fixed probe set of non-zero cone
    /// points.
    pub fn psi_phi(psi: ConeMap, phi: ConeMap) -> Result<Self, Error> {
        for t in cone_probes() {
            if !in_cone(psi.apply(t)) || !in_cone(phi.apply(t)) {
                return Err(invalid("psi/phi", "must map the cone into itself"));
            }
            if !precnsim(psi.apply(t), t, OrderConfig::EXACT) {
                return Err(invalid("psi", "psi(t) must be strictly below t"));
            }
            if !precsim(t, phi.apply(t), OrderConfig::EXACT) {
                return Err(invalid("phi", "phi(t) must dominate t"));
            }
        }
        Ok(SimulationFn::PsiPhi { psi, phi })
    }

    pub fn imag_penalty() -> Self {
        SimulationFn::ImagPenalty
    }
}

fn cone_probes() -> impl Iterator<Item = ComplexScalar> {
    let mags = [1e-6, 1e-2, 0.5, 1.0, 3.0, 1e3];
    mags.into_iter().flat_map(|m| {
        [
            ComplexScalar { re: m, im: 0.0 },
            ComplexScalar { re: 0.0, im: m },
            ComplexScalar { re: m, im: 2.0 * m },
        ]
    })
}

impl Simulation for SimulationFn {
    fn eval(&self, t: ComplexScalar, s: ComplexScalar) -> ComplexScalar {
        match self {
            SimulationFn::Linear { lambda } => s.scale(*lambda) - t,
            SimulationFn::PsiPhi { psi, phi } => psi.apply(s) - phi.apply(t),
            SimulationFn::ImagPenalty => {
                s - t
                    - ComplexScalar {
                        re: 0.0,
                        im: t.modulus(),
                    }
            }
        }
    }
}

impl<F> Simulation for F
where
    F: Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
{
    fn eval(&self, t: ComplexScalar, s: ComplexScalar) -> ComplexScalar {
        self(t, s)
    }
}

/// `ξ(t, s)` with both arguments checked against the cone.
pub fn evaluate<X: Simulation + ?Sized>(
    xi: &X,
    t: ComplexScalar,
    s: ComplexScalar,
) -> Result<ComplexScalar, Error> {
    if !in_cone(t) || !in_cone(s) {
        return Err(Error::OutsideCone);
    }
    Ok(xi.eval(t, s))
}

/// Decay profile of a perturbation sequence `c·n^{-p}` or `c·r^n`.
#[derive(Debug, Clone, Copy)]
enum Decay {
    Algebraic(f64),
    Geometric(f64),
}

impl Decay {
    /// First index at which `|c|·decay(n) ≤ TAIL_PERTURBATION`.
    fn tail_start(self, amplitude: f64) -> f64 {
        let ratio = amplitude.abs() / TAIL_PERTURBATION;
        if ratio <= 1.0 {
            return 1.0;
        }
        match self {
            Decay::Algebraic(p) => libm::ceil(libm::pow(ratio, 1.0 / p)),
            Decay::Geometric(r) => libm::ceil(libm::log(ratio) / -libm::log(r)),
        }
    }

    fn term(self, amplitude: f64, n: f64) -> f64 {
        match self {
            Decay::Algebraic(p) => amplitude / libm::pow(n, p),
            Decay::Geometric(r) => amplitude * libm::pow(r, n),
        }
    }
}

/// Falsifies the three simulation-function axioms by random sampling.
///
/// Per sample the limit clause is tried before the strict-order clause, so
/// a map failing both is reported on the limit clause. Axiom 2 is tested on
/// random non-zero cone pairs (including points on the
/// cone's edges). Axiom 3 draws a limit `L`, a decay profile and signed
/// amplitudes per sample, evaluates `ξ(L + a_n, L + b_n)` over
/// `tail_length` consecutive indices deep in the tail, and requires the
/// componentwise maximum to be `≾ 0` (within [`LIMIT_TOLERANCE`]) with
/// modulus at least [`LIMIT_TOLERANCE`].
pub fn check_simulation_axioms<X: Simulation + ?Sized>(
    xi: &X,
    sample_count: usize,
    tail_length: usize,
    seed: u64,
) -> Result<CheckReport, Error> {
    if sample_count < 1 {
        return Err(invalid("sample_count", "must be at least 1"));
    }
    if tail_length < 10 {
        return Err(invalid("tail_length", "must be at least 10"));
    }
    let zero = ComplexScalar::ZERO;
    let at_origin = xi.eval(zero, zero);
    if !at_origin.is_zero() {
        return Ok(CheckReport::fail(
            0,
            0,
            Witness {
                clause: "(i) xi(0,0) = 0",
                sample_index: 0,
                points: vec![],
                values: vec![at_origin],
            },
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..sample_count {
        let t = random_nonzero_cone_point(&mut rng);
        let s = random_nonzero_cone_point(&mut rng);
        let limit: f64 = rng.random_range(0.1..10.0);
        let decay = match rng.random_range(0..4u8) {
            0 => Decay::Algebraic(1.0),
            1 => Decay::Algebraic(2.0),
            2 => Decay::Algebraic(0.5 + rng.random_range(0.0..3.0)),
            _ => Decay::Geometric(rng.random_range(0.3..0.95)),
        };
        let amp_t: f64 = rng.random_range(-1.0..1.0);
        let amp_s: f64 = rng.random_range(-1.0..1.0);
        let start = f64::max(decay.tail_start(amp_t), decay.tail_start(amp_s));
        let mut sup = ComplexScalar {
            re: f64::NEG_INFINITY,
            im: f64::NEG_INFINITY,
        };
        for k in 0..tail_length {
            let n = start + k as f64;
            let tn = ComplexScalar {
                re: limit + decay.term(amp_t, n),
                im: 0.0,
            };
            let sn = ComplexScalar {
                re: limit + decay.term(amp_s, n),
                im: 0.0,
            };
            let v = xi.eval(tn, sn);
            sup.re = f64::max(sup.re, v.re);
            sup.im = f64::max(sup.im, v.im);
        }
        let below = sup.re <= LIMIT_TOLERANCE && sup.im <= LIMIT_TOLERANCE;
        let nonzero = sup.modulus() >= LIMIT_TOLERANCE;
        if !(below && nonzero) {
            let l = ComplexScalar { re: limit, im: 0.0 };
            return Ok(CheckReport::fail(
                i + 1,
                i + 1,
                Witness {
                    clause: "(iii) limsup xi(|t_n|,|s_n|) ⪇ 0",
                    sample_index: i,
                    points: vec![Point::Complex(l)],
                    values: vec![sup],
                },
            ));
        }

        let value = xi.eval(t, s);
        if !precnsim(value, s - t, OrderConfig::EXACT) {
            return Ok(CheckReport::fail(
                i + 1,
                i + 1,
                Witness {
                    clause: "(ii) xi(t,s) ⪇ s - t",
                    sample_index: i,
                    points: vec![Point::Complex(t), Point::Complex(s)],
                    values: vec![value, s - t],
                },
            ));
        }
    }
    Ok(CheckReport::pass(sample_count, sample_count))
}

/// Uniform on `[0, 10]²`, with a quarter of the draws pushed onto each axis.
fn random_nonzero_cone_point<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    loop {
        let mut z = ComplexScalar {
            re: rng.random_range(0.0..10.0),
            im: rng.random_range(0.0..10.0),
        };
        match rng.random_range(0..4u8) {
            0 => z.re = 0.0,
            1 => z.im = 0.0,
            _ => {}
        }
        if !z.is_zero() {
            return z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar { re, im }
    }

    fn instances() -> [SimulationFn; 3] {
        [
            SimulationFn::linear(0.5).unwrap(),
            SimulationFn::psi_phi(ConeMap::Scale(0.5), ConeMap::Identity).unwrap(),
            SimulationFn::imag_penalty(),
        ]
    }

    #[test]
    fn evaluate_examples() {
        let xi1 = SimulationFn::linear(0.5).unwrap();
        assert_eq!(
            evaluate(&xi1, c(1.0, 0.0), c(4.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        for xi in instances() {
            assert_eq!(
                evaluate(&xi, c(0.0, 0.0), c(0.0, 0.0)).unwrap(),
                c(0.0, 0.0)
            );
        }
        let v = evaluate(&SimulationFn::imag_penalty(), c(1.0, 1.0), c(3.0, 3.0)).unwrap();
        assert_eq!(v.re, 2.0);
        assert!((v.im - (2.0 - core::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_points_outside_cone() {
        let xi = SimulationFn::imag_penalty();
        assert_eq!(
            evaluate(&xi, c(-1.0, 0.0), c(1.0, 1.0)),
            Err(Error::OutsideCone)
        );
        assert_eq!(
            evaluate(&xi, c(1.0, 0.0), c(1.0, -1e-300)),
            Err(Error::OutsideCone)
        );
    }

    #[test]
    fn constructors_validate() {
        assert!(SimulationFn::linear(0.0).is_err());
        assert!(SimulationFn::linear(1.0).is_err());
        assert!(SimulationFn::psi_phi(ConeMap::Identity, ConeMap::Identity).is_err());
        assert!(SimulationFn::psi_phi(ConeMap::Scale(0.5), ConeMap::Scale(0.9)).is_err());
        assert!(SimulationFn::psi_phi(ConeMap::Scale(0.0), ConeMap::Scale(2.0)).is_ok());
        assert!(ConeMap::scale(-1.0).is_err());
    }

    #[test]
    fn paper_instances_pass() {
        let xi1 = SimulationFn::linear(0.9).unwrap();
        assert!(
            check_simulation_axioms(&xi1, 10_000, 1000, 42)
                .unwrap()
                .passed
        );
        assert!(
            check_simulation_axioms(&SimulationFn::imag_penalty(), 10_000, 1000, 42)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn plain_difference_fails_limit_axiom() {
        let fake = |t: ComplexScalar, s: ComplexScalar| s - t;
        let report = check_simulation_axioms(&fake, 1000, 1000, 7).unwrap();
        assert!(!report.passed);
        assert_eq!(
            report.witness.unwrap().clause,
            "(iii) limsup xi(|t_n|,|s_n|) ⪇ 0"
        );
    }

    #[test]
    fn origin_and_strict_order_violations_are_witnessed() {
        let shifted = |t: ComplexScalar, s: ComplexScalar| s - t - c(1.0, 0.0);
        let report = check_simulation_axioms(&shifted, 10, 10, 1).unwrap();
        assert_eq!(report.witness.unwrap().clause, "(i) xi(0,0) = 0");
        // Agrees with ξ₃ on real arguments but exceeds s − t when Im t is large.
        let above = |t: ComplexScalar, s: ComplexScalar| s - t + c(0.0, 2.0 * t.im - t.modulus());
        let report = check_simulation_axioms(&above, 10, 10, 1).unwrap();
        assert_eq!(report.witness.unwrap().clause, "(ii) xi(t,s) ⪇ s - t");
    }

    #[test]
    fn check_rejects_short_tails() {
        assert!(check_simulation_axioms(&SimulationFn::imag_penalty(), 10, 9, 1).is_err());
        assert!(check_simulation_axioms(&SimulationFn::imag_penalty(), 0, 10, 1).is_err());
    }

    fn cone_point() -> impl Strategy<Value = ComplexScalar> {
        (0.0..100.0f64, 0.0..100.0f64).prop_map(|(re, im)| c(re, im))
    }

    proptest! {
        #[test]
        fn instances_satisfy_strict_axiom(t in cone_point(), s in cone_point()) {
            prop_assume!(!t.is_zero() && !s.is_zero());
            for xi in instances() {
                prop_assert!(precnsim(evaluate(&xi, t, s).unwrap(), s - t, OrderConfig::EXACT));
            }
        }

        #[test]
        fn linear_is_affine_in_second_argument(
            lambda in 0.01..0.99f64, t in cone_point(),
            s1 in (0.0..100.0f64, 0.0..100.0f64), s2 in (0.0..100.0f64, 0.0..100.0f64),
        ) {
            // Dyadic rationals keep every product and sum exact.
            let q = |x: f64| libm::round(x * 64.0) / 64.0;
            let lambda = q(lambda).clamp(1.0 / 64.0, 63.0 / 64.0);
            let (s1, s2) = (c(q(s1.0), q(s1.1)), c(q(s2.0), q(s2.1)));
            let t = c(q(t.re), q(t.im));
            let xi = SimulationFn::linear(lambda).unwrap();
            let lhs = evaluate(&xi, t, s1 + s2).unwrap();
            let rhs = evaluate(&xi, t, s1).unwrap() + s2.scale(lambda);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
