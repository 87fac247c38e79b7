//! CSV encodings of grid functions and iteration traces.

use std::fmt::Write as _;

use cvfix_core::engine::IterationTrace;
use cvfix_core::{GridFunction, GridShape, Point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{0}")]
    Shape(String),
}

/// Header `t,u_1,…,u_n` and one row per node, every number with 17
/// significant digits.
pub fn grid_to_csv(u: &GridFunction) -> String {
    let shape = u.shape();
    let mut out = String::from("t");
    for k in 1..=shape.dim {
        write!(out, ",u_{k}").unwrap();
    }
    out.push('\n');
    for (i, row) in u.rows().enumerate() {
        write!(out, "{:.16e}", shape.node(i)).unwrap();
        for v in row {
            write!(out, ",{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`grid_to_csv`]. The grid is rebuilt from the first and last
/// `t` and the row count; every other `t` must sit on that uniform grid.
pub fn grid_from_csv(text: &str) -> Result<GridFunction, FormatError> {
    let perr = |line: usize, reason: &str| FormatError::Parse {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let dim = cols.len().saturating_sub(1);
    let expected = (1..=dim).map(|k| format!("u_{k}"));
    if dim == 0 || cols[0] != "t" || !cols[1..].iter().map(|c| c.to_string()).eq(expected) {
        return Err(perr(1, "header must be t,u_1,...,u_n"));
    }
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim + 1 {
            return Err(perr(idx + 1, "wrong number of columns"));
        }
        for (k, f) in fields.iter().enumerate() {
            let v: f64 = f.parse().map_err(|_| perr(idx + 1, "not a number"))?;
            if k == 0 {
                ts.push(v);
            } else {
                values.push(v);
            }
        }
    }
    if ts.len() < 2 {
        return Err(FormatError::Shape("at least two rows are required".into()));
    }
    let shape = GridShape::new(ts[0], ts[ts.len() - 1], ts.len(), dim)
        .map_err(|e| FormatError::Shape(e.to_string()))?;
    let slack = 1e-9 * shape.spacing();
    if let Some(i) = ts
        .iter()
        .enumerate()
        .position(|(i, t)| (t - shape.node(i)).abs() > slack)
    {
        return Err(FormatError::Shape(format!(
            "row {} is off the uniform grid",
            i + 1
        )));
    }
    GridFunction::new(shape, values).map_err(|e| FormatError::Shape(e.to_string()))
}

/// Columns `iter,delta`, plus `point` when the iterates are complex. Row `n`
/// holds `|d(x_{n−1}, x_n)|` and `x_n`.
pub fn trace_to_csv(trace: &IterationTrace) -> String {
    let complex = matches!(trace.points.first(), Some(Point::Complex(_)));
    let mut out = String::from(if complex {
        "iter,delta,point\n"
    } else {
        "iter,delta\n"
    });
    for (n, delta) in trace.deltas.iter().enumerate() {
        write!(out, "{},{delta:.16e}", n + 1).unwrap();
        if let Some(Point::Complex(z)) = trace.points.get(n + 1) {
            write!(out, ",{z}").unwrap();
        }
        out.push('\n');
    }
    out
}
