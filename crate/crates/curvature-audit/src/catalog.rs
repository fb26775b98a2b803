//! Built-in parametrized hypersurfaces with closed-form reference
//! curvature data: pipeline ground truth and demo inputs.
//!
//! Default domains shrink away from coordinate singularities (e.g. the
//! sphere's polar angle stays in [0.2, pi - 0.2]); jets blow up at chart
//! degeneracies, which are chart artifacts, not geometry.

use crate::chart::{evaluate_frame, Chart, ChartError};
use crate::exprlang::{parse, BinOp, Expr, ExprError};
use serde_json::Value;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("entry {0:?} has no closed-form reference at this point")]
    NoReference(String),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("expression error in graph_expr: {0}")]
    Expr(#[from] ExprError),
}

pub const CATALOG_NAMES: &[&str] = &[
    "sphere",
    "cylinder",
    "catenoid",
    "torus",
    "graph_quadric",
    "graph_expr",
    "ellipsoid",
];

/// Closed-form reference values at a parameter point.
#[derive(Debug, Clone)]
pub struct ReferenceInvariants {
    /// Principal curvatures, sorted ascending, for the entry's
    /// normalized orientation.
    pub lambdas: Vec<f64>,
    pub h: f64,
    pub k: f64,
}

fn get_f64(params: &Value, key: &str) -> Option<f64> {
    params.get(key).and_then(Value::as_f64)
}

fn get_usize(params: &Value, key: &str) -> Option<usize> {
    params.get(key).and_then(Value::as_u64).map(|v| v as usize)
}

/// Build a catalog chart. `params` is the JSON parameter object from the
/// scene file (or assembled programmatically).
pub fn make_chart(name: &str, params: &Value) -> Result<Chart, CatalogError> {
    match name {
        "sphere" => {
            let r = get_f64(params, "r").unwrap_or(1.0);
            let n = get_usize(params, "n").unwrap_or(2);
            if r <= 0.0 {
                return Err(CatalogError::InvalidParams(format!("sphere r = {r}")));
            }
            if n < 2 {
                return Err(CatalogError::InvalidParams(format!("sphere n = {n}")));
            }
            sphere_chart(r, n)
        }
        "cylinder" => {
            let r = get_f64(params, "r").unwrap_or(1.0);
            if r <= 0.0 {
                return Err(CatalogError::InvalidParams(format!("cylinder r = {r}")));
            }
            let vars = ["u", "v"];
            let comps = vec![
                parse(&format!("{r}*cos(u)"), &vars)?,
                parse(&format!("{r}*sin(u)"), &vars)?,
                parse("v", &vars)?,
            ];
            let chart = Chart::new(2, comps, vec![(0.2, 2.0 * PI - 0.2), (-2.0, 2.0)], false)?;
            orient_positive(chart)
        }
        "catenoid" => {
            let vars = ["u", "v"];
            let comps = vec![
                parse("cosh(v)*cos(u)", &vars)?,
                parse("cosh(v)*sin(u)", &vars)?,
                parse("v", &vars)?,
            ];
            Ok(Chart::new(
                2,
                comps,
                vec![(0.2, 2.0 * PI - 0.2), (-1.5, 1.5)],
                false,
            )?)
        }
        "torus" => {
            let big_r = get_f64(params, "R").unwrap_or(2.0);
            let r = get_f64(params, "r").unwrap_or(1.0);
            if r <= 0.0 || big_r <= r {
                return Err(CatalogError::InvalidParams(format!(
                    "torus needs R > r > 0, got R = {big_r}, r = {r}"
                )));
            }
            let vars = ["u", "v"];
            let comps = vec![
                parse(&format!("({big_r}+{r}*cos(v))*cos(u)"), &vars)?,
                parse(&format!("({big_r}+{r}*cos(v))*sin(u)"), &vars)?,
                parse(&format!("{r}*sin(v)"), &vars)?,
            ];
            let chart = Chart::new(
                2,
                comps,
                vec![(0.2, 2.0 * PI - 0.2), (-1.2, 1.2)],
                false,
            )?;
            orient_positive(chart)
        }
        "graph_quadric" => {
            let a = params
                .get("A")
                .and_then(Value::as_array)
                .ok_or_else(|| CatalogError::InvalidParams("graph_quadric needs A".into()))?;
            let matrix: Vec<Vec<f64>> = a
                .iter()
                .map(|row| {
                    row.as_array()
                        .map(|r| r.iter().filter_map(Value::as_f64).collect())
                        .unwrap_or_default()
                })
                .collect();
            graph_quadric_chart(&matrix)
        }
        "graph_expr" => {
            let f = params
                .get("f")
                .and_then(Value::as_str)
                .ok_or_else(|| CatalogError::InvalidParams("graph_expr needs f".into()))?;
            let n = get_usize(params, "n").unwrap_or(2);
            graph_expr_chart(f, n)
        }
        "ellipsoid" => {
            let a = get_f64(params, "a").unwrap_or(1.0);
            let b = get_f64(params, "b").unwrap_or(1.0);
            let c = get_f64(params, "c").unwrap_or(1.0);
            if a <= 0.0 || b <= 0.0 || c <= 0.0 {
                return Err(CatalogError::InvalidParams(
                    "ellipsoid needs positive semi-axes".into(),
                ));
            }
            let vars = ["u", "v"];
            let comps = vec![
                parse(&format!("{a}*cos(u)*cos(v)"), &vars)?,
                parse(&format!("{b}*sin(u)*cos(v)"), &vars)?,
                parse(&format!("{c}*sin(v)"), &vars)?,
            ];
            let chart = Chart::new(
                2,
                comps,
                vec![(0.2, 2.0 * PI - 0.2), (-PI / 2.0 + 0.2, PI / 2.0 - 0.2)],
                false,
            )?;
            orient_positive(chart)
        }
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

/// Angular chart of the radius-r round n-sphere on an open patch away
/// from the poles. Hyperspherical coordinates:
/// x_1 = r cos t1, x_2 = r sin t1 cos t2, ..., x_{n+1} = r sin t1 ... sin tn.
fn sphere_chart(r: f64, n: usize) -> Result<Chart, CatalogError> {
    let var_names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let vars: Vec<&str> = var_names.iter().map(String::as_str).collect();
    let mut comps = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut src = format!("{r}");
        for v in vars.iter().take(k) {
            src.push_str(&format!("*sin({v})"));
        }
        if k < n {
            src.push_str(&format!("*cos({})", vars[k]));
        }
        comps.push(parse(&src, &vars)?);
    }
    let mut domain = vec![(0.2, PI - 0.2); n];
    domain[n - 1] = (0.2, 2.0 * PI - 0.2);
    let chart = Chart::new(n, comps, domain, false)?;
    orient_positive(chart)
}

/// Graph chart sigma(x) = (x, x^T A x / 2) for a symmetric A; the normal
/// has positive last ambient coordinate ("upward"), so convex graphs get
/// nonnegative curvatures.
pub fn graph_quadric_chart(a: &[Vec<f64>]) -> Result<Chart, CatalogError> {
    let n = a.len();
    if n < 2 || a.iter().any(|row| row.len() != n) {
        return Err(CatalogError::InvalidParams(
            "graph_quadric A must be square, n >= 2".into(),
        ));
    }
    for i in 0..n {
        for j in 0..n {
            if (a[i][j] - a[j][i]).abs() > 1e-12 * a[i][j].abs().max(1.0) {
                return Err(CatalogError::InvalidParams(
                    "graph_quadric A must be symmetric".into(),
                ));
            }
        }
    }
    let mut comps: Vec<Expr> = (0..n).map(Expr::var).collect();
    // f = sum_i a_ii x_i^2 / 2 + sum_{i<j} a_ij x_i x_j
    let mut f = Expr::constant(0.0);
    for i in 0..n {
        for j in i..n {
            let coeff = if i == j { a[i][j] / 2.0 } else { a[i][j] };
            if coeff == 0.0 {
                continue;
            }
            let term = Expr::binary(
                BinOp::Mul,
                Expr::constant(coeff),
                Expr::binary(BinOp::Mul, Expr::var(i), Expr::var(j)),
            );
            f = Expr::binary(BinOp::Add, f, term);
        }
    }
    comps.push(f);
    Ok(Chart::new(n, comps, vec![(-1.0, 1.0); n], false)?)
}

/// Graph chart sigma(x) = (x, f(x)) with f parsed over variables
/// x0..x{n-1} (aliases u, v for n = 2).
pub fn graph_expr_chart(f_source: &str, n: usize) -> Result<Chart, CatalogError> {
    let var_names: Vec<String> = if n == 2 {
        vec!["u".into(), "v".into()]
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    };
    let vars: Vec<&str> = var_names.iter().map(String::as_str).collect();
    let f = parse(f_source, &vars)?;
    let mut comps: Vec<Expr> = (0..n).map(Expr::var).collect();
    comps.push(f);
    Ok(Chart::new(n, comps, vec![(-1.0, 1.0); n], false)?)
}

/// Fix the orientation of a closed convex-type chart so the curvature
/// sum at the domain center is positive, making reference signs
/// well-defined.
fn orient_positive(mut chart: Chart) -> Result<Chart, CatalogError> {
    let center: Vec<f64> = chart.domain.iter().map(|(a, b)| 0.5 * (a + b)).collect();
    let frame = evaluate_frame(&chart, &center)?;
    let spec = crate::spectrum::principal_curvatures(&frame.g, &frame.h)
        .map_err(|_| CatalogError::InvalidParams("degenerate catalog chart".into()))?;
    if spec.lambdas.iter().sum::<f64>() < 0.0 {
        chart.orientation_flip = true;
    }
    Ok(chart)
}

/// Closed-form reference (lambda, H, K) where available: sphere,
/// cylinder, catenoid, torus, and graph_quadric at the origin.
pub fn reference_invariants(
    name: &str,
    params: &Value,
    u: &[f64],
) -> Result<ReferenceInvariants, CatalogError> {
    match name {
        "sphere" => {
            let r = get_f64(params, "r").unwrap_or(1.0);
            let n = get_usize(params, "n").unwrap_or(2);
            Ok(from_lambdas(vec![1.0 / r; n]))
        }
        "cylinder" => {
            let r = get_f64(params, "r").unwrap_or(1.0);
            Ok(from_lambdas(vec![0.0, 1.0 / r]))
        }
        "catenoid" => {
            // K = -1/cosh^4 v, H = 0: lambdas are +/- 1/cosh^2 v
            let v = u[1];
            let kappa = 1.0 / (v.cosh() * v.cosh());
            Ok(from_lambdas(vec![-kappa, kappa]))
        }
        "torus" => {
            let big_r = get_f64(params, "R").unwrap_or(2.0);
            let r = get_f64(params, "r").unwrap_or(1.0);
            let v = u[1];
            Ok(from_lambdas(vec![
                v.cos() / (big_r + r * v.cos()),
                1.0 / r,
            ]))
        }
        "graph_quadric" => {
            if u.iter().any(|x| *x != 0.0) {
                return Err(CatalogError::NoReference(name.into()));
            }
            let a = params
                .get("A")
                .and_then(Value::as_array)
                .ok_or_else(|| CatalogError::InvalidParams("graph_quadric needs A".into()))?;
            let matrix: Vec<Vec<f64>> = a
                .iter()
                .map(|row| {
                    row.as_array()
                        .map(|r| r.iter().filter_map(Value::as_f64).collect())
                        .unwrap_or_default()
                })
                .collect();
            let (eig, _) = crate::linalg::sym_eigen_jacobi(&matrix);
            Ok(from_lambdas(eig))
        }
        "graph_expr" | "ellipsoid" => Err(CatalogError::NoReference(name.into())),
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

fn from_lambdas(mut lambdas: Vec<f64>) -> ReferenceInvariants {
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
    let k = lambdas.iter().product();
    ReferenceInvariants { lambdas, h, k }
}
