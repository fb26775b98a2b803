//! Parametric hypersurface charts and per-point frame data: tangent
//! vectors, unit normal, first and second fundamental forms.

use crate::exprlang::{eval_jet, EvalError, Expr};
use crate::linalg::{self, Mat};
use thiserror::Error;

/// A parametric hypersurface sigma: U in R^n -> R^(n+1) given by n+1
/// component expressions over a box domain.
#[derive(Debug, Clone)]
pub struct Chart {
    pub n: usize,
    pub components: Vec<Expr>,
    pub domain: Vec<(f64, f64)>,
    pub orientation_flip: bool,
}

#[derive(Debug, Clone, Error)]
pub enum ChartError {
    #[error("chart needs n >= 2, got {0}")]
    BadDimension(usize),
    #[error("expected {expected} component expressions, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {index} references variable index {var}, arity is {n}")]
    ArityMismatch { index: usize, var: usize, n: usize },
    #[error("domain axis {axis} is empty: [{lo}, {hi}]")]
    EmptyDomain { axis: usize, lo: f64, hi: f64 },
    #[error("parameter point is not strictly inside the domain box (axis {axis})")]
    OutOfDomain { axis: usize },
    #[error("degenerate chart: tangent vectors are rank deficient at the point")]
    Degenerate,
    #[error("metric is not positive definite at the point")]
    SingularMetric,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Chart {
    pub fn new(
        n: usize,
        components: Vec<Expr>,
        domain: Vec<(f64, f64)>,
        orientation_flip: bool,
    ) -> Result<Chart, ChartError> {
        if n < 2 {
            return Err(ChartError::BadDimension(n));
        }
        if components.len() != n + 1 {
            return Err(ChartError::ComponentCount {
                expected: n + 1,
                got: components.len(),
            });
        }
        for (index, c) in components.iter().enumerate() {
            let a = c.min_arity();
            if a > n {
                return Err(ChartError::ArityMismatch {
                    index,
                    var: a - 1,
                    n,
                });
            }
        }
        if domain.len() != n {
            return Err(ChartError::ComponentCount {
                expected: n,
                got: domain.len(),
            });
        }
        for (axis, (lo, hi)) in domain.iter().enumerate() {
            if !(hi > lo) {
                return Err(ChartError::EmptyDomain {
                    axis,
                    lo: *lo,
                    hi: *hi,
                });
            }
        }
        Ok(Chart {
            n,
            components,
            domain,
            orientation_flip,
        })
    }
}

/// Per-point geometric state of a chart.
#[derive(Debug, Clone)]
pub struct FrameData {
    /// Position sigma(u) in R^(n+1).
    pub point: Vec<f64>,
    /// Tangent vectors sigma_i in R^(n+1).
    pub tangents: Vec<Vec<f64>>,
    /// Second partials sigma_ij, upper triangle flattened (i <= j).
    pub second_partials: Vec<Vec<f64>>,
    /// Unit normal N.
    pub normal: Vec<f64>,
    /// First fundamental form g_ij = <sigma_i, sigma_j>.
    pub g: Mat,
    /// Second fundamental form h_ij = <N, sigma_ij>.
    pub h: Mat,
}

/// Index of sigma_ij in the flattened upper triangle (i <= j).
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Evaluate the Gauss frame of `chart` at a strict-interior parameter
/// point. The normal is the normalized generalized cross product of the
/// tangents in parameter order, negated when `orientation_flip` is set.
pub fn evaluate_frame(chart: &Chart, u: &[f64]) -> Result<FrameData, ChartError> {
    let n = chart.n;
    assert_eq!(u.len(), n, "parameter point arity mismatch");
    for (axis, ((lo, hi), x)) in chart.domain.iter().zip(u).enumerate() {
        if !(x > lo && x < hi) {
            return Err(ChartError::OutOfDomain { axis });
        }
    }

    let jets: Vec<_> = chart
        .components
        .iter()
        .map(|c| eval_jet(c, u))
        .collect::<Result<_, _>>()?;

    let dim = n + 1;
    let point: Vec<f64> = jets.iter().map(|j| j.value).collect();
    let tangents: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..dim).map(|k| jets[k].gradient[i]).collect())
        .collect();
    let mut second_partials: Vec<Vec<f64>> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            second_partials.push((0..dim).map(|k| jets[k].hessian[i][j]).collect());
        }
    }

    let cross = linalg::generalized_cross(&tangents);
    let cross_norm = linalg::norm(&cross);
    let tangent_scale: f64 = tangents.iter().map(|t| linalg::norm(t)).product();
    if cross_norm < 1e-12 * tangent_scale.max(f64::MIN_POSITIVE) {
        return Err(ChartError::Degenerate);
    }
    let sign = if chart.orientation_flip { -1.0 } else { 1.0 };
    let normal: Vec<f64> = cross.iter().map(|x| sign * x / cross_norm).collect();

    let mut g = linalg::zeros(n, n);
    let mut h = linalg::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let gij = linalg::dot(&tangents[i], &tangents[j]);
            let hij = linalg::dot(&normal, &second_partials[upper_index(n, i, j)]);
            g[i][j] = gij;
            g[j][i] = gij;
            h[i][j] = hij;
            h[j][i] = hij;
        }
    }
    if linalg::cholesky(&g).is_none() {
        return Err(ChartError::SingularMetric);
    }

    Ok(FrameData {
        point,
        tangents,
        second_partials,
        normal,
        g,
        h,
    })
}
