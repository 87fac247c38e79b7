//! Textual names for metrics, simulation functions, α-maps, self-maps and
//! problem right-hand sides.
//!
//! ```text
//! metric  := d1 | d2:k=<f> | d3 | volterra-sup:a=<f>,b=<f> | periodic-sup:a=<f>
//! xi      := xi1:lambda=<f> | xi2:psi=<cone>,phi=<cone> | xi3 | difference
//! cone    := identity | scale(<f>)
//! alpha   := one | zero | upper-half-plane | modulus-le
//! map     := halfshift | third | identity | double | doubleplus1 | conj | square
//!          | plusone | volterra(<a>,<b>) | example32 | example33
//! f       := example32 | example33 | zero | linear(<u>,<t>,<c>)
//! ```

use cvfix_core::admissibility::AlphaMap;
use cvfix_core::applications::{periodic_operator, volterra_operator, PeriodicProblem, ProblemFn};
use cvfix_core::metric::ComplexMetric;
use cvfix_core::simulation::{ConeMap, Simulation, SimulationFn};
use cvfix_core::{ComplexScalar, Error, GridFunction, GridShape, Point, PointDomain, SelfMap};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct NameError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, NameError> {
    Err(NameError(msg.into()))
}

fn core_err(e: Error) -> NameError {
    NameError(e.to_string())
}

type Params<'a> = Vec<(&'a str, &'a str)>;

/// Splits `head:k1=v1,k2=v2` into the head and its parameters. Commas inside
/// parentheses do not separate parameters.
fn split_params(name: &str) -> Result<(&str, Params<'_>), NameError> {
    let Some((head, rest)) = name.split_once(':') else {
        return Ok((name.trim(), Vec::new()));
    };
    let mut params = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (k, ch) in rest.char_indices().chain([(rest.len(), ',')]) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                let item = rest[start..k].trim();
                let Some((key, value)) = item.split_once('=') else {
                    return err(format!("expected key=value, found `{item}`"));
                };
                params.push((key.trim(), value.trim()));
                start = k + 1;
            }
            _ => {}
        }
    }
    Ok((head.trim(), params))
}

fn number(text: &str, what: &str) -> Result<f64, NameError> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(format!("`{text}` is not a finite number for {what}")),
    }
}

fn take(params: &[(&str, &str)], key: &str) -> Option<String> {
    params
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.to_string())
}

fn only_keys(params: &[(&str, &str)], allowed: &[&str]) -> Result<(), NameError> {
    match params.iter().find(|(k, _)| !allowed.contains(k)) {
        Some((k, _)) => err(format!("unknown parameter `{k}`")),
        None => Ok(()),
    }
}

/// Arguments of `head(a, b, …)`, or `None` when `name` is not of that form.
fn call_args<'a>(name: &'a str, head: &str) -> Option<Vec<&'a str>> {
    let inner = name
        .strip_prefix(head)?
        .strip_prefix('(')?
        .strip_suffix(')')?;
    Some(inner.split(',').map(str::trim).collect())
}

/// Builds a metric. Sup metrics live on a grid of `nodes` points with value
/// dimension `dim`.
pub fn parse_metric(name: &str, nodes: usize, dim: usize) -> Result<ComplexMetric, NameError> {
    let (head, params) = split_params(name)?;
    let req =
        |key: &str| take(&params, key).ok_or_else(|| NameError(format!("`{head}` needs `{key}=`")));
    match head {
        "d1" | "d3" => {
            only_keys(&params, &[])?;
            Ok(if head == "d1" {
                ComplexMetric::d1()
            } else {
                ComplexMetric::d3()
            })
        }
        "d2" => {
            only_keys(&params, &["k"])?;
            ComplexMetric::d2(number(&req("k")?, "k")?).map_err(core_err)
        }
        "volterra-sup" => {
            only_keys(&params, &["a", "b"])?;
            let (a, b) = (number(&req("a")?, "a")?, number(&req("b")?, "b")?);
            let shape = GridShape::new(a, b, nodes, 1).map_err(core_err)?;
            ComplexMetric::interval_sup(shape).map_err(core_err)
        }
        "periodic-sup" => {
            only_keys(&params, &["a"])?;
            let shape =
                GridShape::new(0.0, number(&req("a")?, "a")?, nodes, dim).map_err(core_err)?;
            ComplexMetric::periodic_sup(shape).map_err(core_err)
        }
        _ => err(format!("unknown metric `{name}`")),
    }
}

fn parse_cone_map(text: &str) -> Result<ConeMap, NameError> {
    if text == "identity" {
        return Ok(ConeMap::Identity);
    }
    match call_args(text, "scale").as_deref() {
        Some([c]) => ConeMap::scale(number(c, "scale")?).map_err(core_err),
        _ => err(format!("unknown cone map `{text}`")),
    }
}

/// One of the three built-in simulation functions.
pub fn parse_simulation(name: &str) -> Result<SimulationFn, NameError> {
    let (head, params) = split_params(name)?;
    match head {
        "xi1" => {
            only_keys(&params, &["lambda"])?;
            let lambda =
                take(&params, "lambda").ok_or_else(|| NameError("`xi1` needs `lambda=`".into()))?;
            SimulationFn::linear(number(&lambda, "lambda")?).map_err(core_err)
        }
        "xi2" => {
            only_keys(&params, &["psi", "phi"])?;
            let psi = parse_cone_map(&take(&params, "psi").unwrap_or_else(|| "scale(0.5)".into()))?;
            let phi = parse_cone_map(&take(&params, "phi").unwrap_or_else(|| "identity".into()))?;
            SimulationFn::psi_phi(psi, phi).map_err(core_err)
        }
        "xi3" => {
            only_keys(&params, &[])?;
            Ok(SimulationFn::imag_penalty())
        }
        _ => err(format!("unknown simulation function `{name}`")),
    }
}

/// A simulation function to test: a built-in one, or the plain difference
/// `s − t`, which is not a simulation function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedXi {
    Builtin(SimulationFn),
    Difference,
}

impl Simulation for NamedXi {
    fn eval(&self, t: ComplexScalar, s: ComplexScalar) -> ComplexScalar {
        match self {
            NamedXi::Builtin(xi) => xi.eval(t, s),
            NamedXi::Difference => s - t,
        }
    }
}

pub fn parse_xi(name: &str) -> Result<NamedXi, NameError> {
    if name.trim() == "difference" {
        return Ok(NamedXi::Difference);
    }
    parse_simulation(name).map(NamedXi::Builtin)
}

pub fn parse_alpha(name: &str) -> Result<AlphaMap, NameError> {
    match name.trim() {
        "one" => Ok(AlphaMap::ConstantOne),
        "zero" => Ok(AlphaMap::zero()),
        "upper-half-plane" => Ok(AlphaMap::upper_half_plane()),
        "modulus-le" => Ok(AlphaMap::modulus_le()),
        other => err(format!("unknown alpha map `{other}`")),
    }
}

pub fn parse_problem_fn(name: &str) -> Result<ProblemFn, NameError> {
    match name.trim() {
        "example32" => Ok(ProblemFn::Example32),
        "example33" => Ok(ProblemFn::Example33),
        "zero" => Ok(ProblemFn::Zero),
        other => match call_args(other, "linear").as_deref() {
            Some([u, t, c]) => Ok(ProblemFn::Linear {
                u_coeff: number(u, "linear")?,
                t_coeff: number(t, "linear")?,
                constant: number(c, "linear")?,
            }),
            _ => err(format!("unknown problem function `{other}`")),
        },
    }
}

#[derive(Debug, Clone, Copy)]
pub enum NamedMap {
    Complex(&'static str, fn(ComplexScalar) -> ComplexScalar),
    Volterra { a: f64, b: f64 },
    Periodic(PeriodicProblem),
}

const I: ComplexScalar = ComplexScalar::I;

pub fn parse_map(name: &str) -> Result<NamedMap, NameError> {
    let name = name.trim();
    let complex = |label, f| Ok(NamedMap::Complex(label, f));
    match name {
        "halfshift" => complex("halfshift", |z| (z + I).scale(0.5)),
        "third" => complex("third", |z| (z + I.scale(2.0)).scale(1.0 / 3.0)),
        "identity" => complex("identity", |z| z),
        "double" => complex("double", |z| z.scale(2.0)),
        "doubleplus1" => complex("doubleplus1", |z| z.scale(2.0) + ComplexScalar::ONE),
        "conj" => complex("conj", ComplexScalar::conj),
        "square" => complex("square", |z| z * z),
        "plusone" => complex("plusone", |z| z + ComplexScalar::ONE),
        "example32" => Ok(NamedMap::Periodic(
            PeriodicProblem::new(ProblemFn::Example32, 1.0, 1.5, 1).map_err(core_err)?,
        )),
        "example33" => Ok(NamedMap::Periodic(
            PeriodicProblem::new(ProblemFn::Example33, 2.0, 2.5, 1).map_err(core_err)?,
        )),
        _ => match call_args(name, "volterra").as_deref() {
            Some([a, b]) => {
                let (a, b) = (number(a, "volterra a")?, number(b, "volterra b")?);
                if !(a > 0.0 && a < b) {
                    return err("volterra needs 0 < a < b");
                }
                Ok(NamedMap::Volterra { a, b })
            }
            _ => err(format!("unknown map `{name}`")),
        },
    }
}

impl NamedMap {
    pub fn domain(&self, nodes: usize) -> Result<PointDomain, NameError> {
        Ok(match self {
            NamedMap::Complex(..) => PointDomain::Complex,
            NamedMap::Volterra { a, b } => {
                PointDomain::Grid(GridShape::new(*a, *b, nodes, 1).map_err(core_err)?)
            }
            NamedMap::Periodic(p) => PointDomain::Grid(p.shape(nodes).map_err(core_err)?),
        })
    }

    /// The metric the map is naturally analysed under.
    pub fn default_metric(&self, nodes: usize) -> Result<ComplexMetric, NameError> {
        match self {
            NamedMap::Complex(..) => Ok(ComplexMetric::d1()),
            NamedMap::Volterra { a, b } => {
                ComplexMetric::interval_sup(GridShape::new(*a, *b, nodes, 1).map_err(core_err)?)
                    .map_err(core_err)
            }
            NamedMap::Periodic(p) => {
                ComplexMetric::periodic_sup(p.shape(nodes).map_err(core_err)?).map_err(core_err)
            }
        }
    }

    /// A starting point from a complex literal. Grid maps take a real literal
    /// and start from the constant function.
    pub fn start_point(&self, start: ComplexScalar, nodes: usize) -> Result<Point, NameError> {
        match self.domain(nodes)? {
            PointDomain::Complex => Ok(Point::Complex(start)),
            PointDomain::Grid(shape) => {
                if start.im != 0.0 {
                    return err("grid maps need a real starting value");
                }
                Ok(Point::Grid(
                    GridFunction::constant(shape, start.re).map_err(core_err)?,
                ))
            }
        }
    }
}

impl SelfMap for NamedMap {
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        match (self, x) {
            (NamedMap::Complex(_, f), Point::Complex(z)) => Ok(Point::Complex(f(*z))),
            (NamedMap::Volterra { a, b }, Point::Grid(g)) => {
                volterra_operator(g, *a, *b).map(Point::Grid)
            }
            (NamedMap::Periodic(p), Point::Grid(g)) => periodic_operator(g, p).map(Point::Grid),
            _ => Err(Error::DomainMismatch),
        }
    }
}
