//! Small dense linear algebra for n <= 8: Cholesky, Jacobi eigensolver,
//! determinants, thin QR, and the generalized cross product.
//!
//! Matrices are row-major `Vec<Vec<f64>>`. Everything here is written for
//! tiny fixed sizes on the hot path of per-point frame evaluation, so no
//! external matrix crate is pulled in.

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![0.0; cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn mat_vec(m: &Mat, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    let (n, m) = (a.len(), a[0].len());
    let mut out = zeros(m, n);
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn frobenius_norm(a: &Mat) -> f64 {
    a.iter().flat_map(|r| r.iter().map(|x| x * x)).sum::<f64>().sqrt()
}

/// Lower-triangular Cholesky factor of a symmetric matrix, `a = L L^T`.
/// Returns `None` when the matrix is not positive definite.
pub fn cholesky(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut l = zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solve `L x = b` with lower-triangular `L`.
pub fn solve_lower(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= l[i][j] * x[j];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Solve `L^T x = b` with lower-triangular `L`.
pub fn solve_lower_transpose(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= l[j][i] * x[j];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `1e-13 * ||S||`. Returns unsorted eigenvalues and the matrix whose
/// columns are the corresponding eigenvectors.
pub fn sym_eigen_jacobi(s: &Mat) -> (Vec<f64>, Mat) {
    let n = s.len();
    let mut a = s.clone();
    let mut v = identity(n);
    let scale = frobenius_norm(s).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += 2.0 * a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= tol / (n as f64) {
                    continue;
                }
                // classic Jacobi rotation annihilating a[p][q]
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - sn * vkq;
                    v[k][q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| a[i][i]).collect();
    (eig, v)
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &Mat) -> f64 {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    sign * (0..n).map(|i| a[i][i]).product::<f64>()
}

/// Generalized cross product of n vectors in R^(n+1): the cofactor vector
/// of the formal determinant whose last row is symbolic. Orthogonal to
/// every input; zero exactly when the inputs are linearly dependent.
pub fn generalized_cross(vectors: &[Vec<f64>]) -> Vec<f64> {
    let n = vectors.len();
    let dim = n + 1;
    assert!(vectors.iter().all(|v| v.len() == dim));
    let mut out = vec![0.0; dim];
    for j in 0..dim {
        let minor: Mat = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let sign = if (n + j) % 2 == 0 { 1.0 } else { -1.0 };
        out[j] = sign * det(&minor);
    }
    out
}

/// Thin QR factorization via modified Gram-Schmidt; returns the Q factor
/// (n x m, orthonormal columns) with the R diagonal forced positive.
pub fn qr_thin_q(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    let mut cols: Vec<Vec<f64>> = (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    for j in 0..m {
        for k in 0..j {
            let proj = dot(&cols[j], &cols[k]);
            for i in 0..n {
                cols[j][i] -= proj * cols[k][i];
            }
        }
        // second pass for numerical orthogonality
        for k in 0..j {
            let proj = dot(&cols[j], &cols[k]);
            for i in 0..n {
                cols[j][i] -= proj * cols[k][i];
            }
        }
        let nrm = norm(&cols[j]);
        if nrm < 1e-300 {
            // degenerate column; replace with a unit vector orthogonalized later
            cols[j] = (0..n).map(|i| if i == j % n { 1.0 } else { 0.0 }).collect();
            for k in 0..j {
                let proj = dot(&cols[j], &cols[k]);
                for i in 0..n {
                    cols[j][i] -= proj * cols[k][i];
                }
            }
            let nrm2 = norm(&cols[j]).max(f64::MIN_POSITIVE);
            for x in cols[j].iter_mut() {
                *x /= nrm2;
            }
        } else {
            for x in cols[j].iter_mut() {
                *x /= nrm;
            }
        }
    }
    let mut q = zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            q[i][j] = cols[j][i];
        }
    }
    q
}
