//! Shape operator, principal curvatures, and all pointwise curvature
//! invariants. A `ShapeSpectrum` (sorted principal curvatures plus the
//! ambient constant curvature) is the single source of truth downstream.

use crate::linalg::{self, Mat};
use serde::Serialize;
use thiserror::Error;

/// Deviation from umbilicity below which a point counts as umbilic:
/// ||h||^2 - n H^2 is a sum of squared deviations, thresholded at
/// (1e-12)^2.
pub const UMBILIC_TOL: f64 = 1e-24;

/// |H| below this counts as a vanishing mean curvature.
pub const MEAN_TOL: f64 = 1e-12;

/// |lambda_i| below this counts as a vanishing principal curvature.
pub const CURVATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectrumError {
    #[error("metric is singular (not positive definite)")]
    SingularMetric,
    #[error("spectrum needs n >= 2, got {0}")]
    BadDimension(usize),
    #[error("operation requires dimension {expected}, spectrum has {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("invalid index set: {0}")]
    BadIndexSet(String),
    #[error("umbilic point: spread ratio denominator vanishes")]
    UmbilicPoint,
    #[error("a principal curvature vanishes")]
    VanishingCurvature,
}

/// Sorted principal curvatures plus ambient constant sectional curvature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeSpectrum {
    /// Principal curvatures, sorted ascending.
    pub lambdas: Vec<f64>,
    /// Ambient constant sectional curvature (0 in chart mode).
    pub c: f64,
    /// Chart-point tag or "synthetic".
    pub source: String,
}

impl ShapeSpectrum {
    pub fn new(mut lambdas: Vec<f64>, c: f64, source: impl Into<String>) -> Result<Self, SpectrumError> {
        if lambdas.len() < 2 {
            return Err(SpectrumError::BadDimension(lambdas.len()));
        }
        lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(ShapeSpectrum {
            lambdas,
            c,
            source: source.into(),
        })
    }

    pub fn synthetic(lambdas: Vec<f64>, c: f64) -> Result<Self, SpectrumError> {
        Self::new(lambdas, c, "synthetic")
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn mean_curvature(&self) -> f64 {
        self.lambdas.iter().sum::<f64>() / self.n() as f64
    }

    pub fn gauss_kronecker(&self) -> f64 {
        self.lambdas.iter().product()
    }

    /// scal = sum over pairs i<j of (c + lambda_i lambda_j).
    pub fn scal(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += self.c + self.lambdas[i] * self.lambdas[j];
            }
        }
        s
    }

    pub fn h_norm_sq(&self) -> f64 {
        self.lambdas.iter().map(|l| l * l).sum()
    }

    pub fn spread(&self) -> f64 {
        self.lambdas[self.n() - 1] - self.lambdas[0]
    }

    /// ||h||^2 - n H^2, computed as sum (lambda_i - H)^2. The expanded
    /// form cancels catastrophically near umbilics (rounding noise of
    /// order 1e-16 there would swamp a genuinely tiny spread and break
    /// umbilic detection and the spread ratio).
    pub fn umbilicity_defect(&self) -> f64 {
        let h = self.mean_curvature();
        self.lambdas.iter().map(|l| (l - h) * (l - h)).sum()
    }

    pub fn is_umbilic(&self) -> bool {
        self.umbilicity_defect() <= UMBILIC_TOL
    }
}

/// Weingarten operator W = g^{-1} h; similar to a symmetric matrix, so
/// its spectrum is real.
pub fn shape_operator(g: &Mat, h: &Mat) -> Result<Mat, SpectrumError> {
    let l = linalg::cholesky(g).ok_or(SpectrumError::SingularMetric)?;
    let n = g.len();
    let mut w = linalg::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| h[i][j]).collect();
        let y = linalg::solve_lower(&l, &col);
        let x = linalg::solve_lower_transpose(&l, &y);
        for i in 0..n {
            w[i][j] = x[i];
        }
    }
    Ok(w)
}

/// Principal curvatures of the pair (g, h) with c = 0.
///
/// Factors g = L L^T, forms the symmetric S = L^{-1} h L^{-T}, and
/// diagonalizes it by cyclic Jacobi rotations. The eigenvalues of S are
/// exactly the Weingarten eigenvalues.
pub fn principal_curvatures(g: &Mat, h: &Mat) -> Result<ShapeSpectrum, SpectrumError> {
    let (lambdas, _) = principal_curvatures_with_vectors(g, h)?;
    ShapeSpectrum::new(lambdas, 0.0, "chart")
}

/// Same as `principal_curvatures` but also returns eigenvectors v of the
/// generalized problem h v = lambda g v (columns, matching the unsorted
/// eigenvalue order).
pub fn principal_curvatures_with_vectors(
    g: &Mat,
    h: &Mat,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectrumError> {
    let l = linalg::cholesky(g).ok_or(SpectrumError::SingularMetric)?;
    let n = g.len();
    // S = L^{-1} h L^{-T}
    let mut s = linalg::zeros(n, n);
    // first L^{-1} h (solve column-wise), then right-multiply by L^{-T}
    let mut m = linalg::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| h[i][j]).collect();
        let y = linalg::solve_lower(&l, &col);
        for i in 0..n {
            m[i][j] = y[i];
        }
    }
    for i in 0..n {
        let row = m[i].clone();
        let x = linalg::solve_lower(&l, &row);
        for j in 0..n {
            s[i][j] = x[j];
        }
    }
    // enforce exact symmetry before Jacobi
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (s[i][j] + s[j][i]);
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    let (eig, vecs) = linalg::sym_eigen_jacobi(&s);
    // map eigenvectors y of S back to generalized eigenvectors v = L^{-T} y
    let mut gen_vecs = Vec::with_capacity(n);
    for k in 0..n {
        let y: Vec<f64> = (0..n).map(|i| vecs[i][k]).collect();
        gen_vecs.push(linalg::solve_lower_transpose(&l, &y));
    }
    Ok((eig, gen_vecs))
}

/// All pointwise invariants of a spectrum. Optional fields are absent
/// when their dimension or positivity preconditions do not hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointInvariants {
    /// Mean curvature H.
    pub h: f64,
    /// Gauss-Kronecker curvature K.
    pub k: f64,
    /// Scalar curvature.
    pub scal: f64,
    /// ||h||^2 = sum of squared principal curvatures.
    pub h_norm_sq: f64,
    /// Casorati's surface curvature (k1^2 + k2^2)/2, n = 2 only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casorati_surface: Option<f64>,
    /// Spread of the shape operator, lambda_max - lambda_min.
    pub spread: f64,
    /// Minimum of c + lambda_i lambda_j over principal pairs.
    pub inf_sec: f64,
    /// Diagonal Ricci values in the principal basis.
    pub ricci_diag: Vec<f64>,
    /// Bacaloglu's H^2 + L^2/8 (n = 2 only, L = |k1 - k2|).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bacaloglu: Option<f64>,
    /// Bacaloglu's elliptic invariant K^(3/2)/H (n = 2, K > 0, H != 0).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bacaloglu_elliptic: Option<f64>,
    /// Nesbitt invariant B_1^1 (n = 3, nonvanishing curvatures).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nesbitt_b1: Option<f64>,
    /// Nesbitt invariant B_0.5^0.5 (n = 3, nonvanishing curvatures).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nesbitt_b05: Option<f64>,
}

pub fn invariants(s: &ShapeSpectrum) -> PointInvariants {
    let n = s.n();
    let h = s.mean_curvature();
    let k = s.gauss_kronecker();
    let (casorati_surface, bacaloglu, bacaloglu_elliptic) = if n == 2 {
        let l = (s.lambdas[1] - s.lambdas[0]).abs();
        let bac = h * h + l * l / 8.0;
        let ell = if k > 0.0 && h.abs() > MEAN_TOL {
            Some(k.powf(1.5) / h)
        } else {
            None
        };
        (Some(s.h_norm_sq() / 2.0), Some(bac), ell)
    } else {
        (None, None, None)
    };
    let (nesbitt_b1, nesbitt_b05) = match nesbitt_invariants(s) {
        Ok((b1, b05)) => (Some(b1), Some(b05)),
        Err(_) => (None, None),
    };
    PointInvariants {
        h,
        k,
        scal: s.scal(),
        h_norm_sq: s.h_norm_sq(),
        casorati_surface,
        spread: s.spread(),
        inf_sec: crate::chen::inf_sec_fast(s),
        ricci_diag: ricci_diagonal(s),
        bacaloglu,
        bacaloglu_elliptic,
        nesbitt_b1,
        nesbitt_b05,
    }
}

/// Casorati curvature of order k: sum of squared principal curvatures
/// over the given 1-based index subset.
pub fn casorati_order_k(s: &ShapeSpectrum, indices: &[usize]) -> Result<f64, SpectrumError> {
    if indices.is_empty() {
        return Err(SpectrumError::BadIndexSet("empty".into()));
    }
    let mut seen = vec![false; s.n()];
    let mut sum = 0.0;
    for &i in indices {
        if i == 0 || i > s.n() {
            return Err(SpectrumError::BadIndexSet(format!(
                "index {i} out of 1..={}",
                s.n()
            )));
        }
        if seen[i - 1] {
            return Err(SpectrumError::BadIndexSet(format!("duplicate index {i}")));
        }
        seen[i - 1] = true;
        sum += s.lambdas[i - 1] * s.lambdas[i - 1];
    }
    Ok(sum)
}

/// Ricci diagonal in the principal basis:
/// entry i = (n-1) c + lambda_i (sum lambda - lambda_i).
pub fn ricci_diagonal(s: &ShapeSpectrum) -> Vec<f64> {
    let n = s.n();
    let total: f64 = s.lambdas.iter().sum();
    s.lambdas
        .iter()
        .map(|&l| (n as f64 - 1.0) * s.c + l * (total - l))
        .collect()
}

/// Spread ratio (lambda_n - lambda_1)/sqrt(||h||^2 - n H^2); errors at
/// umbilic points where the denominator vanishes.
pub fn spread_ratio(s: &ShapeSpectrum) -> Result<f64, SpectrumError> {
    let defect = s.umbilicity_defect();
    if defect <= UMBILIC_TOL {
        return Err(SpectrumError::UmbilicPoint);
    }
    Ok(s.spread() / defect.sqrt())
}

/// Nesbitt invariants (B_1^1, B_0.5^0.5) for n = 3 with nonvanishing
/// principal curvatures, built from absolute mean sectional curvatures
/// H_ij = (|k_i| + |k_j|)/2.
pub fn nesbitt_invariants(s: &ShapeSpectrum) -> Result<(f64, f64), SpectrumError> {
    if s.n() != 3 {
        return Err(SpectrumError::WrongDimension {
            expected: 3,
            got: s.n(),
        });
    }
    let a: Vec<f64> = s.lambdas.iter().map(|l| l.abs()).collect();
    if a.iter().any(|x| *x <= CURVATURE_TOL) {
        return Err(SpectrumError::VanishingCurvature);
    }
    let pairs = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];
    let mut b1 = 0.0;
    let mut b05 = 0.0;
    for (i, j, k) in pairs {
        let hbar = (a[j] + a[k]) / 2.0;
        let term = a[i] / hbar;
        b1 += term;
        b05 += term.sqrt();
    }
    Ok((b1, b05))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(lambdas: &[f64], c: f64) -> ShapeSpectrum {
        ShapeSpectrum::synthetic(lambdas.to_vec(), c).unwrap()
    }

    #[test]
    fn shape_operator_diagonal_solve() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let h = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
        let w = shape_operator(&g, &h).unwrap();
        assert_eq!(w[0][0], 1.0);
        assert_eq!(w[1][1], 2.0);

        let g = vec![vec![4.0, 0.0], vec![0.0, 1.0]];
        let h = vec![vec![4.0, 0.0], vec![0.0, 3.0]];
        let w = shape_operator(&g, &h).unwrap();
        assert!((w[0][0] - 1.0).abs() < 1e-15);
        assert!((w[1][1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn shape_operator_rejects_singular_metric() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        let h = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(
            shape_operator(&g, &h).unwrap_err(),
            SpectrumError::SingularMetric
        );
    }

    #[test]
    fn principal_curvatures_sorted() {
        let g = linalg::identity(3);
        let h = vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ];
        let s = principal_curvatures(&g, &h).unwrap();
        assert_eq!(s.lambdas, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn catenoid_waist_invariants() {
        let s = spec(&[-1.0, 1.0], 0.0);
        let inv = invariants(&s);
        assert_eq!(inv.h, 0.0);
        assert_eq!(inv.k, -1.0);
        assert_eq!(inv.bacaloglu, Some(0.5));
        assert_eq!(inv.bacaloglu_elliptic, None);
        assert_eq!(ricci_diagonal(&s), vec![-1.0, -1.0]);
    }

    #[test]
    fn round_sphere_invariants() {
        let s = spec(&[1.0, 1.0], 0.0);
        let inv = invariants(&s);
        assert_eq!(inv.h, 1.0);
        assert_eq!(inv.k, 1.0);
        assert_eq!(inv.scal, 1.0);
        assert_eq!(inv.h_norm_sq, 2.0);
        assert_eq!(inv.spread, 0.0);
        assert_eq!(inv.bacaloglu, Some(1.0));
        assert_eq!(inv.bacaloglu_elliptic, Some(1.0));
    }

    #[test]
    fn imo_symmetric_point() {
        let s = spec(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.0);
        let inv = invariants(&s);
        assert!((inv.h - 1.0 / 3.0).abs() < 1e-15);
        assert!((inv.k - 1.0 / 27.0).abs() < 1e-15);
        assert!((inv.scal - 1.0 / 3.0).abs() < 1e-15);
        assert!((inv.scal - 2.0 * inv.k - 7.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn casorati_subsets() {
        let s = spec(&[1.0, 2.0, 3.0], 0.0);
        assert_eq!(casorati_order_k(&s, &[1, 2]).unwrap(), 5.0);
        let ones = spec(&[1.0; 5], 0.0);
        assert_eq!(casorati_order_k(&ones, &[1, 2, 3, 4, 5]).unwrap(), 5.0);
        // sorted (-1, 3, 4): the two largest-magnitude entries are 3 and 4
        let s = spec(&[3.0, 4.0, -1.0], 0.0);
        assert_eq!(s.lambdas, vec![-1.0, 3.0, 4.0]);
        assert_eq!(casorati_order_k(&s, &[2, 3]).unwrap(), 25.0);
        assert!(casorati_order_k(&s, &[]).is_err());
        assert!(casorati_order_k(&s, &[1, 1]).is_err());
        assert!(casorati_order_k(&s, &[4]).is_err());
    }

    #[test]
    fn ricci_examples() {
        assert_eq!(ricci_diagonal(&spec(&[1.0, 1.0, 1.0], 0.0)), vec![2.0; 3]);
        assert_eq!(ricci_diagonal(&spec(&[0.0, 0.0], 0.0)), vec![0.0, 0.0]);
    }

    #[test]
    fn spread_ratio_examples() {
        let s = spec(&[0.0, 1.0], 0.0);
        assert!((spread_ratio(&s).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let s = spec(&[0.0, 1.0, 1.0], 0.0);
        assert!((spread_ratio(&s).unwrap() - 1.0 / (2f64 / 3.0).sqrt()).abs() < 1e-12);
        let s = spec(&[1.0, 1.0], 0.0);
        assert_eq!(spread_ratio(&s).unwrap_err(), SpectrumError::UmbilicPoint);
    }

    #[test]
    fn nesbitt_examples() {
        let s = spec(&[1.0, 1.0, 1.0], 0.0);
        let (b1, b05) = nesbitt_invariants(&s).unwrap();
        assert!((b1 - 3.0).abs() < 1e-15);
        assert!((b05 - 3.0).abs() < 1e-15);
        let s = spec(&[1.0, 1.0, 2.0], 0.0);
        let (b1, _) = nesbitt_invariants(&s).unwrap();
        assert!((b1 - 10.0 / 3.0).abs() < 1e-12);
        let s = spec(&[1.0, 0.0, 2.0], 0.0);
        assert_eq!(
            nesbitt_invariants(&s).unwrap_err(),
            SpectrumError::VanishingCurvature
        );
        let s = spec(&[1.0, 1.0], 0.0);
        assert!(matches!(
            nesbitt_invariants(&s),
            Err(SpectrumError::WrongDimension { .. })
        ));
    }

    #[test]
    fn nesbitt_sign_flip_invariance() {
        let (b1, _) = nesbitt_invariants(&spec(&[-1.0, 1.0, 1.0], 0.0)).unwrap();
        assert!((b1 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn newton_identity_cross_check() {
        // scal as pair sum equals binom(n,2) c + [(sum)^2 - sum sq]/2
        let cases: &[(&[f64], f64)] = &[
            (&[0.3, -1.2, 2.5], -1.0),
            (&[1.0, 2.0, 3.0, 4.0], 1.0),
            (&[-0.5, 0.5], 0.0),
            (&[2.0, -3.0, 0.1, 0.7, 1.3], 1.0),
        ];
        for (lams, c) in cases {
            let s = spec(lams, *c);
            let n = s.n() as f64;
            let sum: f64 = s.lambdas.iter().sum();
            let sumsq: f64 = s.lambdas.iter().map(|l| l * l).sum();
            let alt = n * (n - 1.0) / 2.0 * c + 0.5 * (sum * sum - sumsq);
            let rel = (s.scal() - alt).abs() / s.scal().abs().max(1.0);
            assert!(rel < 1e-12);
        }
    }
}
