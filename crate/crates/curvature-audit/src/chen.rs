//! Chen delta invariants: the admissible tuple set S(n), the coefficients
//! b and c, a combinatorial fast path over principal-index subsets, and
//! brute-force Grassmannian oracles that validate the fast path.

use crate::linalg::{self, Mat};
use crate::spectrum::ShapeSpectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChenError {
    #[error("tuple {parts:?} is not in S({n})")]
    InvalidTuple { parts: Vec<usize>, n: usize },
    #[error("subspace needs at least 2 indices, got {0}")]
    SubsetTooSmall(usize),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// A k-tuple (n_1,...,n_k) admissible for dimension n: n_1 < n, every
/// n_i >= 2, and the parts sum to at most n. k = 0 (the empty tuple,
/// whose delta is the scalar curvature) is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChenTuple {
    pub parts: Vec<usize>,
    pub n: usize,
}

impl ChenTuple {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<ChenTuple, ChenError> {
        let mut sorted = parts.clone();
        sorted.sort_unstable();
        let sum: usize = sorted.iter().sum();
        let valid = sorted.iter().all(|&p| p >= 2)
            && sum <= n
            && sorted.first().map_or(true, |&p| p < n);
        if !valid {
            return Err(ChenError::InvalidTuple { parts, n });
        }
        Ok(ChenTuple { parts: sorted, n })
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn label(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        format!("({})", inner.join(","))
    }
}

/// All tuples of S(n), deduplicated as multisets, in deterministic order
/// (by k, then lexicographic), starting with the empty tuple.
pub fn enumerate_s(n: usize) -> Vec<ChenTuple> {
    assert!(n >= 2, "S(n) needs n >= 2");
    let mut out = vec![ChenTuple {
        parts: vec![],
        n,
    }];
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    let mut nonempty: Vec<Vec<usize>> = Vec::new();
    while let Some(prefix) = stack.pop() {
        let used: usize = prefix.iter().sum();
        let lo = prefix.last().copied().unwrap_or(2);
        for next in lo..=n.saturating_sub(used) {
            let mut parts = prefix.clone();
            parts.push(next);
            // n_1 < n with non-decreasing parts means the first part < n
            if parts[0] < n {
                nonempty.push(parts.clone());
            }
            stack.push(parts);
        }
    }
    nonempty.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out.extend(nonempty.into_iter().map(|parts| ChenTuple { parts, n }));
    out
}

/// Exact rational value as (numerator, denominator), reduced, den > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational(pub i64, pub i64);

impl Rational {
    fn reduced(num: i64, den: i64) -> Rational {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Rational(sign * num / g, sign * den / g)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

/// c(n_1,...,n_k) = n^2 (n + k - 1 - sum n_j) / (2 (n + k - sum n_j)),
/// evaluated exactly.
pub fn coefficient_c_exact(n: usize, t: &ChenTuple) -> Result<Rational, ChenError> {
    check_tuple(n, t)?;
    let (n_i, k, s) = (n as i64, t.k() as i64, t.sum() as i64);
    Ok(Rational::reduced(n_i * n_i * (n_i + k - 1 - s), 2 * (n_i + k - s)))
}

/// b(n_1,...,n_k) = (n(n-1) - sum n_j(n_j - 1)) / 2, evaluated exactly.
pub fn coefficient_b_exact(n: usize, t: &ChenTuple) -> Result<Rational, ChenError> {
    check_tuple(n, t)?;
    let n_i = n as i64;
    let sum: i64 = t.parts.iter().map(|&p| (p * (p - 1)) as i64).sum();
    Ok(Rational::reduced(n_i * (n_i - 1) - sum, 2))
}

pub fn coefficient_c(n: usize, t: &ChenTuple) -> Result<f64, ChenError> {
    coefficient_c_exact(n, t).map(Rational::to_f64)
}

pub fn coefficient_b(n: usize, t: &ChenTuple) -> Result<f64, ChenError> {
    coefficient_b_exact(n, t).map(Rational::to_f64)
}

fn check_tuple(n: usize, t: &ChenTuple) -> Result<(), ChenError> {
    if t.n != n || ChenTuple::new(t.parts.clone(), n).is_err() {
        return Err(ChenError::InvalidTuple {
            parts: t.parts.clone(),
            n,
        });
    }
    Ok(())
}

/// scal(L) of the principal subspace spanned by the given 0-based index
/// subset: sum over pairs inside it of (c + lambda_i lambda_j).
pub fn scal_of_subspace(s: &ShapeSpectrum, indices: &[usize]) -> Result<f64, ChenError> {
    if indices.len() < 2 {
        return Err(ChenError::SubsetTooSmall(indices.len()));
    }
    for &i in indices {
        if i >= s.n() {
            return Err(ChenError::IndexOutOfRange(i, s.n()));
        }
    }
    let mut sum = 0.0;
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            sum += s.c + s.lambdas[i] * s.lambdas[j];
        }
    }
    Ok(sum)
}

/// Minimum sectional curvature over principal pairs: min (c + l_i l_j).
pub fn inf_sec_fast(s: &ShapeSpectrum) -> f64 {
    let n = s.n();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(s.c + s.lambdas[i] * s.lambdas[j]);
        }
    }
    best
}

/// One Chen invariant evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaResult {
    pub value: f64,
    /// Disjoint 0-based principal index subsets achieving the fast-path
    /// minimum, sizes matching the tuple.
    pub achieving_partition: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<f64>,
}

/// delta(n_1,...,n_k) by exhaustive search over ordered disjoint
/// principal-index subsets. The empty tuple returns scal.
pub fn delta_invariant(s: &ShapeSpectrum, t: &ChenTuple) -> Result<DeltaResult, ChenError> {
    check_tuple(s.n(), t)?;
    let scal = s.scal();
    if t.k() == 0 {
        return Ok(DeltaResult {
            value: scal,
            achieving_partition: vec![],
            oracle_value: None,
            oracle_gap: None,
        });
    }
    let all: Vec<usize> = (0..s.n()).collect();
    let mut best = f64::INFINITY;
    let mut best_partition = Vec::new();
    search_partitions(
        s,
        &t.parts,
        0,
        &all,
        0.0,
        &mut Vec::new(),
        &mut best,
        &mut best_partition,
    );
    Ok(DeltaResult {
        value: scal - best,
        achieving_partition: best_partition,
        oracle_value: None,
        oracle_gap: None,
    })
}

/// Like `delta_invariant`, but also runs the Grassmannian oracle on
/// W = diag(lambdas) and records the oracle value and gap.
pub fn delta_invariant_validated(
    s: &ShapeSpectrum,
    t: &ChenTuple,
    n_restarts: usize,
    n_refine: usize,
    seed: u64,
) -> Result<DeltaResult, ChenError> {
    let mut res = delta_invariant(s, t)?;
    let w = diag(&s.lambdas);
    let oracle = delta_oracle(&w, s.c, t, n_restarts, n_refine, seed)?;
    res.oracle_gap = Some((res.value - oracle).abs());
    res.oracle_value = Some(oracle);
    Ok(res)
}

#[allow(clippy::too_many_arguments)]
fn search_partitions(
    s: &ShapeSpectrum,
    parts: &[usize],
    depth: usize,
    remaining: &[usize],
    acc: f64,
    chosen: &mut Vec<Vec<usize>>,
    best: &mut f64,
    best_partition: &mut Vec<Vec<usize>>,
) {
    if depth == parts.len() {
        if acc < *best {
            *best = acc;
            *best_partition = chosen.clone();
        }
        return;
    }
    let size = parts[depth];
    for combo in combinations(remaining, size) {
        let part_scal = scal_of_subspace(s, &combo).expect("subset size >= 2");
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|i| !combo.contains(i))
            .collect();
        chosen.push(combo);
        search_partitions(s, parts, depth + 1, &rest, acc + part_scal, chosen, best, best_partition);
        chosen.pop();
    }
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(items: &[usize], size: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, size, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, size, 0, &mut current, &mut out);
    out
}

pub fn diag(values: &[f64]) -> Mat {
    let n = values.len();
    let mut m = linalg::zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        m[i][i] = *v;
    }
    m
}

// ---------------------------------------------------------------------
// Grassmannian / Stiefel oracles
// ---------------------------------------------------------------------

/// Descent hyperparameters shared by both oracles.
const INITIAL_STEP: f64 = 0.1;
const SHRINK: f64 = 0.5;
const STEP_TOL: f64 = 1e-10;

/// Objective over one block Q (n x m, orthonormal columns):
/// scal of the restriction A = Q^T W Q, plus the ambient term,
/// = c * binom(m,2) + ((tr A)^2 - ||A||_F^2) / 2.
fn block_scal(w: &Mat, q_cols: &[Vec<f64>], c: f64) -> f64 {
    let m = q_cols.len();
    let wq: Vec<Vec<f64>> = q_cols.iter().map(|col| linalg::mat_vec(w, col)).collect();
    let mut tr = 0.0;
    let mut fro = 0.0;
    for p in 0..m {
        for q in 0..m {
            let a = linalg::dot(&q_cols[p], &wq[q]);
            if p == q {
                tr += a;
            }
            fro += a * a;
        }
    }
    let pairs = (m * (m - 1) / 2) as f64;
    c * pairs + 0.5 * (tr * tr - fro)
}

/// Euclidean gradient of `block_scal` with respect to the block columns:
/// 2 W Q (tr(A) I - A).
fn block_grad(w: &Mat, q_cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = q_cols.len();
    let n = q_cols[0].len();
    let wq: Vec<Vec<f64>> = q_cols.iter().map(|col| linalg::mat_vec(w, col)).collect();
    let mut a = linalg::zeros(m, m);
    for p in 0..m {
        for q in 0..m {
            a[p][q] = linalg::dot(&q_cols[p], &wq[q]);
        }
    }
    let tr: f64 = (0..m).map(|i| a[i][i]).sum();
    let mut g = vec![vec![0.0; n]; m];
    for col in 0..m {
        for row in 0..n {
            let mut v = 0.0;
            for l in 0..m {
                let coeff = if l == col { tr - a[l][col] } else { -a[l][col] };
                v += wq[l][row] * coeff;
            }
            g[col][row] = 2.0 * v;
        }
    }
    g
}

struct StiefelProblem<'a> {
    w: &'a Mat,
    c: f64,
    /// Column ranges of the blocks within Q.
    blocks: Vec<(usize, usize)>,
}

impl StiefelProblem<'_> {
    fn objective(&self, cols: &[Vec<f64>]) -> f64 {
        self.blocks
            .iter()
            .map(|&(lo, hi)| block_scal(self.w, &cols[lo..hi], self.c))
            .sum()
    }

    fn euclidean_grad(&self, cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = cols[0].len();
        let mut g = vec![vec![0.0; n]; cols.len()];
        for &(lo, hi) in &self.blocks {
            let bg = block_grad(self.w, &cols[lo..hi]);
            for (offset, col_grad) in bg.into_iter().enumerate() {
                g[lo + offset] = col_grad;
            }
        }
        g
    }
}

/// Project a Euclidean gradient onto the Stiefel tangent space at Q:
/// Z = G - Q sym(Q^T G). Column-major representation.
fn tangent_project(cols: &[Vec<f64>], grad: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = cols.len();
    let n = cols[0].len();
    let mut qtg = linalg::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            qtg[i][j] = linalg::dot(&cols[i], &grad[j]);
        }
    }
    let mut z = grad.to_vec();
    for j in 0..m {
        for i in 0..n {
            for l in 0..m {
                let sym = 0.5 * (qtg[l][j] + qtg[j][l]);
                z[j][i] -= cols[l][i] * sym;
            }
        }
    }
    z
}

/// QR retraction of Q - step * Z back onto the Stiefel manifold.
fn retract(cols: &[Vec<f64>], z: &[Vec<f64>], step: f64) -> Vec<Vec<f64>> {
    let m = cols.len();
    let n = cols[0].len();
    let mut a = linalg::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            a[i][j] = cols[j][i] - step * z[j][i];
        }
    }
    let q = linalg::qr_thin_q(&a);
    (0..m).map(|j| (0..n).map(|i| q[i][j]).collect()).collect()
}

/// Projected gradient descent with QR retraction and backtracking line
/// search (shrink 0.5 from step 0.1, stop when the step underflows
/// 1e-10). Returns the best objective value found.
fn stiefel_descent(problem: &StiefelProblem, mut cols: Vec<Vec<f64>>, n_refine: usize) -> f64 {
    let mut f = problem.objective(&cols);
    for _ in 0..n_refine {
        let grad = problem.euclidean_grad(&cols);
        let z = tangent_project(&cols, &grad);
        let z_norm_sq: f64 = z.iter().flat_map(|col| col.iter().map(|x| x * x)).sum();
        if z_norm_sq.sqrt() < 1e-14 {
            break;
        }
        let mut step = INITIAL_STEP;
        let mut advanced = false;
        while step >= STEP_TOL {
            let cand = retract(&cols, &z, step);
            let fc = problem.objective(&cand);
            if fc < f - 1e-4 * step * z_norm_sq {
                cols = cand;
                f = fc;
                advanced = true;
                break;
            }
            step *= SHRINK;
        }
        if !advanced {
            break;
        }
    }
    f
}

fn random_orthonormal(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut a = linalg::zeros(n, m);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
    }
    let q = linalg::qr_thin_q(&a);
    (0..m).map(|j| (0..n).map(|i| q[i][j]).collect()).collect()
}

/// Infimum of sectional curvature over arbitrary 2-planes:
/// f(u,v) = c + (u^T W u)(v^T W v) - (u^T W v)^2 over orthonormal pairs,
/// minimized by seeded random starts plus Stiefel descent.
pub fn inf_sec_oracle(w: &Mat, c: f64, n_samples: usize, n_refine: usize, seed: u64) -> f64 {
    let n = w.len();
    let problem = StiefelProblem {
        w,
        c,
        blocks: vec![(0, 2)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..n_samples {
        let start = random_orthonormal(n, 2, &mut rng);
        best = best.min(stiefel_descent(&problem, start, n_refine));
    }
    best
}

/// Oracle value of delta(t) for the shape operator W expressed in an
/// orthonormal basis: minimizes the summed subspace scalar curvatures
/// over tuples of mutually orthogonal subspaces (consecutive column
/// blocks of one Stiefel matrix), then returns scal - best.
pub fn delta_oracle(
    w: &Mat,
    c: f64,
    t: &ChenTuple,
    n_restarts: usize,
    n_refine: usize,
    seed: u64,
) -> Result<f64, ChenError> {
    let n = w.len();
    check_tuple(n, t)?;
    let s = spectrum_of(w, c);
    let scal = s.scal();
    if t.k() == 0 {
        return Ok(scal);
    }
    let mut blocks = Vec::new();
    let mut offset = 0;
    for &p in &t.parts {
        blocks.push((offset, offset + p));
        offset += p;
    }
    let m = offset;
    let problem = StiefelProblem { w, c, blocks };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..n_restarts {
        let start = random_orthonormal(n, m, &mut rng);
        best = best.min(stiefel_descent(&problem, start, n_refine));
    }
    Ok(scal - best)
}

/// Spectrum of a symmetric W (used by oracles to compute scal).
pub fn spectrum_of(w: &Mat, c: f64) -> ShapeSpectrum {
    let (eig, _) = linalg::sym_eigen_jacobi(w);
    ShapeSpectrum::new(eig, c, "synthetic").expect("n >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(lambdas: &[f64], c: f64) -> ShapeSpectrum {
        ShapeSpectrum::synthetic(lambdas.to_vec(), c).unwrap()
    }

    fn parts(v: &[ChenTuple]) -> Vec<Vec<usize>> {
        v.iter().map(|t| t.parts.clone()).collect()
    }

    #[test]
    fn s_of_small_n() {
        assert_eq!(parts(&enumerate_s(2)), vec![Vec::<usize>::new()]);
        assert_eq!(parts(&enumerate_s(3)), vec![vec![], vec![2]]);
        assert_eq!(
            parts(&enumerate_s(4)),
            vec![vec![], vec![2], vec![3], vec![2, 2]]
        );
    }

    #[test]
    fn s_membership_matches_brute_force() {
        for n in 2..=7 {
            let enumerated = enumerate_s(n);
            // brute force over all non-decreasing lists with parts <= n
            let mut brute: Vec<Vec<usize>> = vec![vec![]];
            let mut frontier: Vec<Vec<usize>> = vec![vec![]];
            while let Some(pre) = frontier.pop() {
                let used: usize = pre.iter().sum();
                let lo = pre.last().copied().unwrap_or(1);
                for next in lo.max(1)..=n {
                    if used + next > n {
                        continue;
                    }
                    let mut cand = pre.clone();
                    cand.push(next);
                    frontier.push(cand.clone());
                    let ok = cand.iter().all(|&p| p >= 2)
                        && cand[0] < n
                        && cand.iter().sum::<usize>() <= n;
                    if ok {
                        brute.push(cand);
                    }
                }
            }
            brute.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            brute.dedup();
            assert_eq!(parts(&enumerated), brute, "n = {n}");
        }
    }

    #[test]
    fn coefficients_match_chen_1993() {
        let t = ChenTuple::new(vec![2], 3).unwrap();
        assert_eq!(coefficient_c_exact(3, &t).unwrap(), Rational(9, 4));
        assert_eq!(coefficient_b_exact(3, &t).unwrap(), Rational(2, 1));
        let t = ChenTuple::new(vec![2], 4).unwrap();
        assert_eq!(coefficient_c_exact(4, &t).unwrap(), Rational(16, 3));
        assert_eq!(coefficient_b_exact(4, &t).unwrap(), Rational(5, 1));
        let t = ChenTuple::new(vec![], 3).unwrap();
        assert_eq!(coefficient_c_exact(3, &t).unwrap(), Rational(3, 1));
        assert_eq!(coefficient_b_exact(3, &t).unwrap(), Rational(3, 1));
    }

    #[test]
    fn coefficient_identity_for_pair_tuple() {
        for n in 3..=8usize {
            let t = ChenTuple::new(vec![2], n).unwrap();
            let ni = n as i64;
            assert_eq!(
                coefficient_c_exact(n, &t).unwrap(),
                Rational::reduced(ni * ni * (ni - 2), 2 * (ni - 1))
            );
            assert_eq!(
                coefficient_b_exact(n, &t).unwrap(),
                Rational::reduced((ni + 1) * (ni - 2), 2)
            );
        }
    }

    #[test]
    fn scal_of_subspace_examples() {
        let s = spec(&[1.0, 2.0, -3.0], 0.0);
        assert_eq!(s.lambdas, vec![-3.0, 1.0, 2.0]);
        assert_eq!(scal_of_subspace(&s, &[1, 2]).unwrap(), 2.0);
        assert_eq!(scal_of_subspace(&s, &[0, 1, 2]).unwrap(), -7.0);
        assert_eq!(scal_of_subspace(&s, &[0, 1, 2]).unwrap(), s.scal());
        let s = spec(&[0.0, 0.0], 1.0);
        assert_eq!(scal_of_subspace(&s, &[0, 1]).unwrap(), 1.0);
        assert!(matches!(
            scal_of_subspace(&s, &[0]),
            Err(ChenError::SubsetTooSmall(1))
        ));
    }

    #[test]
    fn inf_sec_fast_examples() {
        assert_eq!(inf_sec_fast(&spec(&[-3.0, 1.0, 2.0], 0.0)), -6.0);
        assert_eq!(inf_sec_fast(&spec(&[1.0, 1.0, 1.0], 0.0)), 1.0);
        assert_eq!(inf_sec_fast(&spec(&[-2.0, -1.0, 3.0], 0.0)), -6.0);
    }

    #[test]
    fn delta_examples() {
        let s = spec(&[-3.0, 1.0, 2.0], 0.0);
        let t = ChenTuple::new(vec![2], 3).unwrap();
        let d = delta_invariant(&s, &t).unwrap();
        assert_eq!(d.value, -1.0);

        let empty = ChenTuple::new(vec![], 3).unwrap();
        assert_eq!(delta_invariant(&s, &empty).unwrap().value, s.scal());

        let s = spec(&[1.0, 1.0, 1.0, 1.0], 0.0);
        let t = ChenTuple::new(vec![2, 2], 4).unwrap();
        let d = delta_invariant(&s, &t).unwrap();
        assert_eq!(d.value, 4.0);
        assert_eq!(d.achieving_partition.len(), 2);
        let mut all: Vec<usize> = d.achieving_partition.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 4, "partition subsets must be disjoint");
    }

    #[test]
    fn inf_sec_oracle_matches_fast_on_diagonal() {
        let s = spec(&[-3.0, 1.0, 2.0], 0.0);
        let w = diag(&s.lambdas);
        let got = inf_sec_oracle(&w, 0.0, 16, 100, 7);
        assert!((got - (-6.0)).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn inf_sec_oracle_umbilic_rotation_invariant() {
        // W = lambda I in any orthonormal basis: sec constant lambda^2
        let lam = 0.8;
        let w = diag(&[lam, lam, lam]);
        let got = inf_sec_oracle(&w, 0.0, 8, 50, 1);
        assert!((got - lam * lam).abs() < 1e-8);
        let w0 = diag(&[0.0, 0.0, 0.0]);
        assert!((inf_sec_oracle(&w0, 5.0, 4, 10, 1) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn delta_oracle_examples() {
        let t = ChenTuple::new(vec![2], 3).unwrap();
        let w = diag(&[1.0, 1.0, 1.0]);
        let got = delta_oracle(&w, 0.0, &t, 8, 100, 3).unwrap();
        assert!((got - 2.0).abs() < 1e-8, "got {got}");
        let w0 = diag(&[0.0, 0.0, 0.0]);
        assert!(delta_oracle(&w0, 0.0, &t, 4, 20, 3).unwrap().abs() < 1e-10);
    }

    #[test]
    fn invalid_tuples_rejected() {
        assert!(ChenTuple::new(vec![1], 3).is_err());
        assert!(ChenTuple::new(vec![3], 3).is_err());
        assert!(ChenTuple::new(vec![2, 2], 3).is_err());
        assert!(ChenTuple::new(vec![2, 3], 5).is_ok());
        // tuple built for one n used with another
        let t = ChenTuple::new(vec![2], 4).unwrap();
        let s = spec(&[1.0, 1.0, 1.0], 0.0);
        assert!(delta_invariant(&s, &t).is_err());
    }
}
