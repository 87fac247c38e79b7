use cvfix_core::admissibility::{check_contraction, AlphaMap, ContractionSpec, ContractionVariant};
use cvfix_core::engine::{iterate_pair, iterate_single, SolverConfig, RESIDUAL_FACTOR};
use cvfix_core::metric::ComplexMetric;
use cvfix_core::simulation::SimulationFn;
use cvfix_core::{ComplexScalar, Point, SelfMap};
use proptest::prelude::*;

/// `z ↦ p + a (z − p)`, a similarity contracting toward `p`.
struct Affine {
    a: ComplexScalar,
    p: ComplexScalar,
}

impl SelfMap for Affine {
    fn apply(&self, x: &Point) -> Result<Point, cvfix_core::Error> {
        let z = x.as_complex().ok_or(cvfix_core::Error::DomainMismatch)?;
        Ok(Point::Complex(self.p + self.a * (z - self.p)))
    }
}

fn complex(range: f64) -> impl Strategy<Value = ComplexScalar> {
    (-range..range, -range..range).prop_map(|(re, im)| ComplexScalar { re, im })
}

/// Contraction factor as a complex number of modulus in `[0.05, 0.9]`.
fn factor() -> impl Strategy<Value = ComplexScalar> {
    (0.05..0.9f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, th)| ComplexScalar::from_polar(r, th).unwrap())
}

fn cfg() -> SolverConfig {
    SolverConfig::new(1e-10, 2000, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_runs_have_monotone_deltas(a in factor(), p in complex(10.0), x0 in complex(50.0)) {
        let m = Affine { a, p };
        let spec = ContractionSpec::new(
            ContractionVariant::Plain,
            SimulationFn::linear(0.95).unwrap(),
            AlphaMap::ConstantOne,
            ComplexMetric::d1(),
        ).unwrap();
        prop_assume!(check_contraction(&spec, &m, &m, 200, 1).passed);
        let r = iterate_single(&m, &Point::Complex(x0), &ComplexMetric::d1(), &cfg()).unwrap();
        for w in r.trace.deltas.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn converged_results_have_small_residuals(a in factor(), b in factor(), p in complex(10.0), x0 in complex(50.0)) {
        let (s, t) = (Affine { a, p }, Affine { a: b, p });
        let r = iterate_pair(&s, &t, &Point::Complex(x0), &ComplexMetric::d3(), &cfg()).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.residual_s <= RESIDUAL_FACTOR * 1e-10);
        prop_assert!(r.residual_t <= RESIDUAL_FACTOR * 1e-10);
        prop_assert!((r.point.as_complex().unwrap() - p).modulus() <= 1e-8 * (1.0 + p.modulus()));
        prop_assert_eq!(r.trace.deltas.len() + 1, r.trace.points.len());
    }

    #[test]
    fn banach_rate_bounds_deltas(r in 0.05..0.9f64, th in 0.0..std::f64::consts::TAU, x0 in complex(50.0)) {
        let m = Affine { a: ComplexScalar::from_polar(r, th).unwrap(), p: ComplexScalar::I };
        let res = iterate_single(&m, &Point::Complex(x0), &ComplexMetric::d1(), &cfg()).unwrap();
        let d0 = res.trace.deltas[0];
        for (n, d) in res.trace.deltas.iter().enumerate() {
            prop_assert!(*d <= r.powi(n as i32) * d0 * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn traces_are_deterministic(a in factor(), p in complex(10.0), x0 in complex(50.0)) {
        let m = Affine { a, p };
        let run = || iterate_single(&m, &Point::Complex(x0), &ComplexMetric::d1(), &cfg()).unwrap();
        prop_assert_eq!(run(), run());
    }
}
