//! Points of the two supported spaces and the maps acting on them.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::invalid;
use crate::order::ComplexScalar;
use crate::Error;

/// Values of `u: [a, b] → ℝⁿ` at `N` uniform nodes, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: GridShape,
    values: Vec<f64>,
}

/// Interval, node count and value dimension of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridShape {
    pub start: f64,
    pub end: f64,
    pub nodes: usize,
    pub dim: usize,
}

impl GridShape {
    pub fn new(start: f64, end: f64, nodes: usize, dim: usize) -> Result<Self, Error> {
        if !(start.is_finite() && end.is_finite()) || start >= end {
            return Err(invalid("interval", "endpoints must be finite with a < b"));
        }
        if nodes < 2 {
            return Err(invalid("nodes", "at least two grid nodes are required"));
        }
        if dim < 1 {
            return Err(invalid("dim", "value dimension must be at least 1"));
        }
        Ok(GridShape {
            start,
            end,
            nodes,
            dim,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / (self.nodes - 1) as f64
    }

    /// Position of node `i`; the last node sits exactly on `end`.
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.end
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.node(i))
    }
}

impl GridFunction {
    pub fn new(shape: GridShape, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != shape.nodes * shape.dim {
            return Err(invalid("values", "length must equal nodes × dim"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(GridFunction { shape, values })
    }

    /// Samples `f(t, out)` at every node.
    pub fn from_fn(shape: GridShape, mut f: impl FnMut(f64, &mut [f64])) -> Result<Self, Error> {
        let mut values = alloc::vec![0.0; shape.nodes * shape.dim];
        for (i, row) in values.chunks_exact_mut(shape.dim).enumerate() {
            f(shape.node(i), row);
        }
        Self::new(shape, values)
    }

    pub fn constant(shape: GridShape, value: f64) -> Result<Self, Error> {
        Self::new(shape, alloc::vec![value; shape.nodes * shape.dim])
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.shape.dim..(i + 1) * self.shape.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.shape.dim)
    }

    /// `max_i ‖u(t_i) − v(t_i)‖_∞`.
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64, Error> {
        if self.shape != other.shape {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs())))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointDomain {
    Complex,
    Grid(GridShape),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Complex(ComplexScalar),
    Grid(GridFunction),
}

impl Point {
    pub fn domain(&self) -> PointDomain {
        match self {
            Point::Complex(_) => PointDomain::Complex,
            Point::Grid(g) => PointDomain::Grid(g.shape),
        }
    }

    pub fn as_complex(&self) -> Option<ComplexScalar> {
        match self {
            Point::Complex(z) => Some(*z),
            Point::Grid(_) => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridFunction> {
        match self {
            Point::Grid(g) => Some(g),
            Point::Complex(_) => None,
        }
    }

    /// Largest absolute component; infinite if any component is not finite.
    pub fn max_magnitude(&self) -> f64 {
        let fold = |m: f64, v: f64| {
            if v.is_finite() {
                f64::max(m, v.abs())
            } else {
                f64::INFINITY
            }
        };
        match self {
            Point::Complex(z) => fold(fold(0.0, z.re), z.im),
            Point::Grid(g) => g.values.iter().fold(0.0, |m, v| fold(m, *v)),
        }
    }

    /// Componentwise equality up to `tol · (1 + scale)`, where `scale` is the
    /// larger magnitude of the two points.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * (1.0 + f64::max(a.abs(), b.abs()));
        match (self, other) {
            (Point::Complex(a), Point::Complex(b)) => close(a.re, b.re) && close(a.im, b.im),
            (Point::Grid(a), Point::Grid(b)) => {
                a.shape == b.shape && a.values.iter().zip(&b.values).all(|(x, y)| close(*x, *y))
            }
            _ => false,
        }
    }
}

impl From<ComplexScalar> for Point {
    fn from(z: ComplexScalar) -> Self {
        Point::Complex(z)
    }
}

impl From<GridFunction> for Point {
    fn from(g: GridFunction) -> Self {
        Point::Grid(g)
    }
}

/// Random point generation for the hypothesis checkers.
///
/// Complex points are uniform on the box `[-half_width, half_width]²`. Grid
/// functions are random polynomials of degree `≤ max_degree` in the
/// normalised node position, with coefficients uniform on
/// `[-coeff_range, coeff_range]`, plus uniform noise of amplitude `noise`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampler {
    pub half_width: f64,
    pub max_degree: usize,
    pub coeff_range: f64,
    pub noise: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            half_width: 10.0,
            max_degree: 3,
            coeff_range: 5.0,
            noise: 0.1,
        }
    }
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, domain: &PointDomain, rng: &mut R) -> Point {
        match domain {
            PointDomain::Complex => {
                let w = self.half_width;
                Point::Complex(ComplexScalar {
                    re: rng.random_range(-w..=w),
                    im: rng.random_range(-w..=w),
                })
            }
            PointDomain::Grid(shape) => {
                let mut coeffs = alloc::vec![0.0; (self.max_degree + 1) * shape.dim];
                for c in coeffs.iter_mut() {
                    *c = rng.random_range(-self.coeff_range..=self.coeff_range);
                }
                let len = shape.end - shape.start;
                let mut values = Vec::with_capacity(shape.nodes * shape.dim);
                for i in 0..shape.nodes {
                    let x = (shape.node(i) - shape.start) / len;
                    for k in 0..shape.dim {
                        let poly = coeffs
                            [k * (self.max_degree + 1)..(k + 1) * (self.max_degree + 1)]
                            .iter()
                            .rev()
                            .fold(0.0, |acc, c| acc * x + c);
                        values.push(poly + rng.random_range(-self.noise..=self.noise));
                    }
                }
                Point::Grid(GridFunction {
                    shape: *shape,
                    values,
                })
            }
        }
    }
}

/// A self-map of a point space.
///
/// Closures `Fn(&Point) -> Point` implement it directly; fallible operators
/// (grid operators that validate their input) implement it by hand.
pub trait SelfMap {
    fn apply(&self, x: &Point) -> Result<Point, Error>;
}

impl<F> SelfMap for F
where
    F: Fn(&Point) -> Point,
{
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        Ok(self(x))
    }
}

/// Lifts `ℂ → ℂ` to a self-map of complex points; grid inputs are rejected.
#[derive(Debug, Clone, Copy)]
pub struct ComplexMap<F>(pub F);

impl<F> SelfMap for ComplexMap<F>
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    fn apply(&self, x: &Point) -> Result<Point, Error> {
        match x {
            Point::Complex(z) => Ok(Point::Complex((self.0)(*z))),
            Point::Grid(_) => Err(Error::DomainMismatch),
        }
    }
}
