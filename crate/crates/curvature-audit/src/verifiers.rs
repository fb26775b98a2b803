//! Inequality audits: every theorem-backed inequality, equality case,
//! and obstruction criterion, evaluated at a spectrum or along a chart
//! path. Hypothesis-gated checks return a NOT-APPLICABLE verdict rather
//! than a false failure.

use crate::chart::{evaluate_frame, Chart, ChartError};
use crate::chen::{
    self, coefficient_b, coefficient_c, delta_invariant, ChenError, ChenTuple,
};
use crate::spectrum::{self, spread_ratio, ShapeSpectrum, SpectrumError};
use serde::Serialize;
use thiserror::Error;

/// Default audit tolerances; all overridable per scene.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Inequality slack tolerance.
    pub tol: f64,
    /// Equality detection tolerance.
    pub tol_eq: f64,
    /// IMO constant-mean-curvature constraint tolerance, |3H - 1|.
    pub tol_constraint: f64,
    /// Strict-positivity tolerance (strict convexity).
    pub tol_pos: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol: 1e-9,
            tol_eq: 1e-9,
            tol_constraint: 1e-8,
            tol_pos: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

/// One inequality audit: the check holds when slack = rhs - lhs is no
/// less than -tol; equality additionally requires |slack| <= tol_eq.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub equality: bool,
    pub context: String,
    pub tol: f64,
    /// Informational checks (convexity gate, obstruction) report
    /// findings; a failing verdict there is not a theorem violation and
    /// does not affect the exit code.
    pub informational: bool,
}

impl CheckResult {
    fn inequality(name: &str, lhs: f64, rhs: f64, context: String, tols: &Tolerances) -> Self {
        let slack = rhs - lhs;
        let holds = slack >= -tols.tol;
        CheckResult {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            verdict: if holds { Verdict::Holds } else { Verdict::Fails },
            equality: holds && slack.abs() <= tols.tol_eq,
            context,
            tol: tols.tol,
            informational: false,
        }
    }

    fn not_applicable(name: &str, context: String, tols: &Tolerances) -> Self {
        CheckResult {
            name: name.to_string(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            verdict: Verdict::NotApplicable,
            equality: false,
            context,
            tol: tols.tol,
            informational: false,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Stable check identifier: the name up to the first '.' or '('.
    pub fn base_id(&self) -> &str {
        let end = self
            .name
            .find(['.', '('])
            .unwrap_or(self.name.len());
        &self.name[..end]
    }
}

/// Stable check identifiers accepted in scene files.
pub const CHECK_IDS: &[&str] = &[
    "chen1993",
    "fundamental",
    "obstruction",
    "convexity_gate",
    "imo_bound",
    "spread_upper",
    "steaua",
    "ratio_interval",
    "rho",
    "nesbitt",
    "ricci_minimal",
];

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error("check requires dimension n >= {needed}, got {got}")]
    Dimension { needed: usize, got: usize },
    #[error(transparent)]
    Chen(#[from] ChenError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("path hits an umbilic point at t = {0}")]
    PathHitsUmbilic(f64),
}

fn tag(s: &ShapeSpectrum) -> String {
    s.source.clone()
}

/// Chen's 1993 inequality:
/// scal - inf(sec) <= n^2(n-2)/(2(n-1)) H^2 + (n+1)(n-2)/2 c.
/// Degenerates to 0 <= 0 at n = 2, reported as not applicable.
pub fn check_chen_1993(s: &ShapeSpectrum, tols: &Tolerances) -> CheckResult {
    let n = s.n() as f64;
    if s.n() < 3 {
        return CheckResult::not_applicable("chen1993", format!("{}: n = 2", tag(s)), tols);
    }
    let h = s.mean_curvature();
    let lhs = s.scal() - chen::inf_sec_fast(s);
    let rhs = n * n * (n - 2.0) / (2.0 * (n - 1.0)) * h * h + (n + 1.0) * (n - 2.0) / 2.0 * s.c;
    CheckResult::inequality("chen1993", lhs, rhs, tag(s), tols)
}

/// Chen's fundamental inequality for one tuple:
/// delta(t) <= c(t) H^2 + b(t) max_amb_sec. In a space form,
/// max_amb_sec = c.
pub fn check_fundamental(
    s: &ShapeSpectrum,
    t: &ChenTuple,
    max_amb_sec: f64,
    tols: &Tolerances,
) -> Result<CheckResult, VerifierError> {
    let h = s.mean_curvature();
    let lhs = delta_invariant(s, t)?.value;
    let rhs = coefficient_c(s.n(), t)? * h * h + coefficient_b(s.n(), t)? * max_amb_sec;
    Ok(CheckResult::inequality(
        &format!("fundamental{}", t.label()),
        lhs,
        rhs,
        tag(s),
        tols,
    ))
}

/// Outcome of the minimality obstruction scan over all of S(n).
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionOutcome {
    pub obstructed: bool,
    /// Tuple witnessing delta(t) > b(t) eps, when obstructed.
    pub witness: Option<ChenTuple>,
    /// max over t of delta(t) - b(t) eps.
    pub max_excess: f64,
}

/// Minimal-immersion obstruction into a space form of curvature `eps`:
/// obstructed when some delta(t) exceeds b(t) eps beyond tolerance.
pub fn check_minimality_obstruction(
    s: &ShapeSpectrum,
    eps: f64,
    tols: &Tolerances,
) -> Result<(CheckResult, ObstructionOutcome), VerifierError> {
    let mut max_excess = f64::NEG_INFINITY;
    let mut witness = None;
    for t in chen::enumerate_s(s.n()) {
        let delta = delta_invariant(s, &t)?.value;
        let excess = delta - coefficient_b(s.n(), &t)? * eps;
        if excess > max_excess {
            max_excess = excess;
            witness = Some(t);
        }
    }
    let obstructed = max_excess > tols.tol;
    let outcome = ObstructionOutcome {
        obstructed,
        witness: if obstructed { witness } else { None },
        max_excess,
    };
    let context = match &outcome.witness {
        Some(t) => format!("{}: OBSTRUCTED by t={}", tag(s), t.label()),
        None => format!("{}: not-obstructed", tag(s)),
    };
    let result = CheckResult {
        name: "obstruction".into(),
        lhs: max_excess,
        rhs: tols.tol,
        slack: tols.tol - max_excess,
        verdict: if obstructed { Verdict::Fails } else { Verdict::Holds },
        equality: false,
        context,
        tol: tols.tol,
        informational: true,
    };
    Ok((result, outcome))
}

/// Pure algebraic convexity gate on n real numbers: all n inequalities
/// sqrt((n-1) sum_{i in S} a_i^2) <= sum a_i over (n-1)-subsets S.
pub fn gate_claim_holds(values: &[f64]) -> bool {
    let n = values.len();
    assert!(n >= 3, "gate claim is stated for n >= 3");
    let total: f64 = values.iter().sum();
    let sumsq: f64 = values.iter().map(|a| a * a).sum();
    (0..n).all(|skip| {
        let partial = sumsq - values[skip] * values[skip];
        ((n as f64 - 1.0) * partial).sqrt() <= total
    })
}

/// Casorati convexity gate at one point: for every (n-1)-subset S of the
/// principal curvatures, sqrt((n-1) C_S) <= nH. When the gate holds, the
/// conclusion min lambda >= 0 is cross-checked.
pub fn check_convexity_gate_point(s: &ShapeSpectrum, tols: &Tolerances) -> CheckResult {
    let n = s.n();
    if n < 3 {
        return CheckResult::not_applicable(
            "convexity_gate",
            format!("{}: stated for n >= 3", tag(s)),
            tols,
        );
    }
    let nh = n as f64 * s.mean_curvature();
    let sumsq = s.h_norm_sq();
    let lhs = s
        .lambdas
        .iter()
        .map(|&l| ((n as f64 - 1.0) * (sumsq - l * l)).sqrt())
        .fold(f64::NEG_INFINITY, f64::max);
    let gate_holds = lhs <= nh;
    let mut result = CheckResult {
        name: "convexity_gate".into(),
        lhs,
        rhs: nh,
        slack: nh - lhs,
        verdict: if gate_holds { Verdict::Holds } else { Verdict::Fails },
        equality: gate_holds && (nh - lhs).abs() <= tols.tol_eq,
        context: if gate_holds {
            format!("{}: gate holds", tag(s))
        } else {
            format!("{}: gate fails (no convexity conclusion)", tag(s))
        },
        tol: tols.tol,
        informational: true,
    };
    // soundness cross-check: gate holds must imply convexity; a
    // violation is an implementation bug, not a finding
    if gate_holds && s.lambdas[0] < -1e-10 {
        result.verdict = Verdict::Fails;
        result.informational = false;
        result.context = format!(
            "{}: gate holds but min lambda = {} < 0 (soundness violation)",
            tag(s),
            s.lambdas[0]
        );
    }
    result
}

/// IMO 1984 bound on a strictly convex 3-hypersurface with 3H = 1:
/// 0 <= scal - 2K <= 7/27. Returns (lower, upper) results; hypotheses
/// unmet yields NOT-APPLICABLE.
pub fn check_imo(s: &ShapeSpectrum, tols: &Tolerances) -> (CheckResult, CheckResult) {
    let applicable = s.n() == 3
        && s.c == 0.0
        && s.lambdas[0] > tols.tol_pos
        && (3.0 * s.mean_curvature() - 1.0).abs() <= tols.tol_constraint;
    if !applicable {
        let ctx = format!("{}: hypotheses unmet", tag(s));
        return (
            CheckResult::not_applicable("imo_bound.lower", ctx.clone(), tols),
            CheckResult::not_applicable("imo_bound.upper", ctx, tols),
        );
    }
    let q = s.scal() - 2.0 * s.gauss_kronecker();
    (
        CheckResult::inequality("imo_bound.lower", 0.0, q, tag(s), tols),
        CheckResult::inequality("imo_bound.upper", q, 7.0 / 27.0, tag(s), tols),
    )
}

/// Spread bound s^2 <= 2||h||^2 - 2nH^2, plus the equivalent form
/// H^2 <= (2||h||^2 - s^2)/(2n).
pub fn check_spread_upper(s: &ShapeSpectrum, tols: &Tolerances) -> Vec<CheckResult> {
    let n = s.n() as f64;
    let h = s.mean_curvature();
    let sp = s.spread();
    let hn2 = s.h_norm_sq();
    vec![
        CheckResult::inequality(
            "spread_upper",
            sp * sp,
            2.0 * hn2 - 2.0 * n * h * h,
            tag(s),
            tols,
        ),
        CheckResult::inequality(
            "spread_upper.h2",
            h * h,
            (2.0 * hn2 - sp * sp) / (2.0 * n),
            tag(s),
            tols,
        ),
    ]
}

/// scal - inf(sec) <= n(n-2)/(4(n-1)) [2||h||^2 - s^2] + (n+1)(n-2)/2 c.
pub fn check_steaua(s: &ShapeSpectrum, tols: &Tolerances) -> CheckResult {
    let n = s.n() as f64;
    if s.n() < 3 {
        return CheckResult::not_applicable("steaua", format!("{}: n = 2", tag(s)), tols);
    }
    let lhs = s.scal() - chen::inf_sec_fast(s);
    let sp = s.spread();
    let rhs = n * (n - 2.0) / (4.0 * (n - 1.0)) * (2.0 * s.h_norm_sq() - sp * sp)
        + (n + 1.0) * (n - 2.0) / 2.0 * s.c;
    CheckResult::inequality("steaua", lhs, rhs, tag(s), tols)
}

/// Pointwise spread-ratio interval 2/sqrt(n) <= ratio <= sqrt(2);
/// umbilic points are not applicable.
pub fn check_ratio_interval(s: &ShapeSpectrum, tols: &Tolerances) -> Vec<CheckResult> {
    match spread_ratio(s) {
        Err(_) => {
            let ctx = format!("{}: umbilic", tag(s));
            vec![
                CheckResult::not_applicable("ratio_interval.lower", ctx.clone(), tols),
                CheckResult::not_applicable("ratio_interval.upper", ctx, tols),
            ]
        }
        Ok(ratio) => {
            let lo = 2.0 / (s.n() as f64).sqrt();
            vec![
                CheckResult::inequality("ratio_interval.lower", lo, ratio, tag(s), tols),
                CheckResult::inequality("ratio_interval.upper", ratio, 2f64.sqrt(), tag(s), tols),
            ]
        }
    }
}

/// Normalized scalar curvature bound
/// rho <= (2||h||^2 - s^2)/(2n) + c, with rho = 2 scal / (n(n-1));
/// equality exactly at umbilic points.
pub fn check_rho(s: &ShapeSpectrum, tols: &Tolerances) -> CheckResult {
    let n = s.n() as f64;
    let rho = 2.0 * s.scal() / (n * (n - 1.0));
    let sp = s.spread();
    let rhs = (2.0 * s.h_norm_sq() - sp * sp) / (2.0 * n) + s.c;
    CheckResult::inequality("rho", rho, rhs, tag(s), tols)
}

/// Nesbitt bounds B_1^1 >= 3 (equality allowed) and B_0.5^0.5 > 2 sqrt 2
/// (strict). Vanishing curvatures or n != 3 are not applicable.
pub fn check_nesbitt(s: &ShapeSpectrum, tols: &Tolerances) -> Vec<CheckResult> {
    match spectrum::nesbitt_invariants(s) {
        Err(_) => {
            let ctx = format!("{}: hypotheses unmet", tag(s));
            vec![
                CheckResult::not_applicable("nesbitt.b1", ctx.clone(), tols),
                CheckResult::not_applicable("nesbitt.b05", ctx, tols),
            ]
        }
        Ok((b1, b05)) => vec![
            CheckResult::inequality("nesbitt.b1", 3.0, b1, tag(s), tols),
            CheckResult::inequality("nesbitt.b05", 2.0 * 2f64.sqrt(), b05, tag(s), tols),
        ],
    }
}

/// Minimal-submanifold Ricci sign: when H = 0 and c = 0, every Ricci
/// diagonal entry must be <= 0.
pub fn check_ricci_minimal(s: &ShapeSpectrum, tols: &Tolerances) -> CheckResult {
    if s.c != 0.0 || s.mean_curvature().abs() > spectrum::MEAN_TOL {
        return CheckResult::not_applicable(
            "ricci_minimal",
            format!("{}: not minimal or c != 0", tag(s)),
            tols,
        );
    }
    let max_ricci = spectrum::ricci_diagonal(s)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let strict = Tolerances {
        tol: 1e-12,
        ..*tols
    };
    CheckResult::inequality("ricci_minimal", max_ricci, 0.0, tag(s), &strict)
}

/// Spread-ratio sequence along a path into an umbilic point, with a
/// Richardson-style (Aitken) extrapolated limit.
#[derive(Debug, Clone, Serialize)]
pub struct UmbilicLimitEstimate {
    pub ts: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extrapolated: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Evaluate the spread ratio at u0 + t_k * dir for the geometric sequence
/// t_k = t0 r^k, and extrapolate the limit. Every term must be
/// non-umbilic.
pub fn umbilic_limit_estimate(
    chart: &Chart,
    u0: &[f64],
    dir: &[f64],
    t0: f64,
    r: f64,
    steps: usize,
) -> Result<UmbilicLimitEstimate, VerifierError> {
    let mut ts = Vec::with_capacity(steps);
    let mut ratios = Vec::with_capacity(steps);
    let mut t = t0;
    for _ in 0..steps {
        let u: Vec<f64> = u0.iter().zip(dir).map(|(a, d)| a + t * d).collect();
        let frame = evaluate_frame(chart, &u)?;
        let spec = spectrum::principal_curvatures(&frame.g, &frame.h)?;
        let ratio = spread_ratio(&spec).map_err(|_| VerifierError::PathHitsUmbilic(t))?;
        ts.push(t);
        ratios.push(ratio);
        t *= r;
    }
    // Aitken delta-squared on the tail; a (near-)constant sequence is its
    // own limit
    let m = ratios.len();
    let extrapolated = if m >= 3 {
        let (a, b, c) = (ratios[m - 3], ratios[m - 2], ratios[m - 1]);
        let denom = c - 2.0 * b + a;
        if denom.abs() > 1e-12 * c.abs().max(1.0) {
            c - (c - b) * (c - b) / denom
        } else {
            c
        }
    } else {
        ratios[m - 1]
    };
    let mut warning = None;
    if m >= 3 {
        let d1 = (ratios[m - 2] - ratios[m - 3]).abs();
        let d2 = (ratios[m - 1] - ratios[m - 2]).abs();
        if d2 > d1 && d2 > 1e-9 {
            warning = Some(format!(
                "successive differences do not shrink ({d1:e} then {d2:e})"
            ));
        }
    }
    Ok(UmbilicLimitEstimate {
        ts,
        ratios,
        extrapolated,
        warning,
    })
}

/// Maximize ab + bc + ca - 2abc over the simplex {a,b,c >= 0, a+b+c = 1}
/// by a projected grid plus local pattern-search refinement. Returns the
/// maximum and its location.
pub fn imo_extremal_search() -> (f64, [f64; 3]) {
    let f = |a: f64, b: f64| {
        let c = 1.0 - a - b;
        a * b + b * c + c * a - 2.0 * a * b * c
    };
    let m = 200usize;
    let mut best = f64::NEG_INFINITY;
    let mut arg = (0.0, 0.0);
    for i in 0..=m {
        for j in 0..=(m - i) {
            let a = i as f64 / m as f64;
            let b = j as f64 / m as f64;
            let v = f(a, b);
            if v > best {
                best = v;
                arg = (a, b);
            }
        }
    }
    let mut step = 1.0 / m as f64;
    let (mut a, mut b) = arg;
    while step > 1e-10 {
        let mut improved = false;
        for (da, db) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let (na, nb) = (a + da * step, b + db * step);
            if na < 0.0 || nb < 0.0 || na + nb > 1.0 {
                continue;
            }
            let v = f(na, nb);
            if v > best {
                best = v;
                a = na;
                b = nb;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, [a, b, 1.0 - a - b])
}
