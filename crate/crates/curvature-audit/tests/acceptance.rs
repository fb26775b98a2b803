//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (visible with `cargo test --test acceptance --
//! --nocapture`). Criteria with runtime budgets assert wall-clock bounds.

use curvature_audit::catalog;
use curvature_audit::chart::evaluate_frame;
use curvature_audit::chen::{
    self, coefficient_b_exact, coefficient_c_exact, delta_invariant, delta_oracle, diag,
    enumerate_s, inf_sec_fast, inf_sec_oracle, ChenTuple,
};
use curvature_audit::exprlang::{eval_jet, eval_scalar, BinOp, Expr, UnaryFn};
use curvature_audit::spectrum::ricci_diagonal;
use curvature_audit::verifiers::{
    self, check_chen_1993, check_fundamental, check_imo, check_nesbitt, check_ratio_interval,
    check_rho, check_spread_upper, check_steaua, gate_claim_holds, imo_extremal_search,
    umbilic_limit_estimate, Tolerances, Verdict,
};
use curvature_audit::{parse_scene, principal_curvatures, run_scan, ShapeSpectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn conclude(number: usize, name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("acceptance {number} ({name}): PASS"),
        Err(msg) => {
            println!("acceptance {number} ({name}): FAIL - {msg}");
            panic!("acceptance {number} ({name}) failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn criterion_1_extremal_constant_7_27() {
    let run = || -> Result<(), String> {
        let start = Instant::now();
        let third = 1.0 / 3.0;
        let scene = parse_scene(&format!(
            r#"{{"mode": "chart",
                "chart": {{"catalog": "graph_quadric",
                          "params": {{"A": [[{third}, 0, 0], [0, {third}, 0], [0, 0, {third}]]}},
                          "domain": [[-1e-9, 1e-9], [-1e-9, 1e-9], [-1e-9, 1e-9]]}},
                "grid": [3, 3, 3]}}"#
        ))
        .map_err(|e| e.to_string())?;
        let report = run_scan(&scene, 0).map_err(|e| e.to_string())?;
        // grid [3,3,3] on the symmetric box hits the origin at flat index 13
        let origin = &report.points[13];
        let upper = origin
            .checks
            .iter()
            .find(|c| c.name == "imo_bound.upper")
            .ok_or("imo_bound.upper missing at origin")?;
        ensure(
            (upper.lhs - 7.0 / 27.0).abs() <= 1e-12,
            || format!("scal - 2K = {} vs 7/27, err {:e}", upper.lhs, (upper.lhs - 7.0 / 27.0).abs()),
        )?;
        ensure(upper.equality, || "origin is not an equality point".into())?;

        let (max, arg) = imo_extremal_search();
        ensure(
            (max - 7.0 / 27.0).abs() <= 1e-6,
            || format!("simplex max {max} at {arg:?}"),
        )?;
        let elapsed = start.elapsed();
        ensure(elapsed.as_secs_f64() < 5.0, || format!("took {elapsed:?} (budget 5 s)"))
    };
    conclude(1, "extremal constant 7/27", run());
}

#[test]
fn criterion_2_theorem_fuzz_no_violations() {
    let run = || -> Result<(), String> {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2);
        let tols = Tolerances::default();
        let mut violations: Vec<String> = Vec::new();
        let mut applied = 0usize;
        for trial in 0..100_000usize {
            let n = rng.gen_range(2..=6usize);
            let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let c = [-1.0, 0.0, 1.0][rng.gen_range(0..3)];
            let s = ShapeSpectrum::synthetic(lambdas, c).unwrap();
            let mut results = vec![check_chen_1993(&s, &tols)];
            for t in enumerate_s(n) {
                results.push(check_fundamental(&s, &t, c, &tols).unwrap());
            }
            results.extend(check_spread_upper(&s, &tols));
            results.push(check_steaua(&s, &tols));
            results.extend(check_ratio_interval(&s, &tols));
            results.push(check_rho(&s, &tols));
            results.extend(check_nesbitt(&s, &tols));
            let (lo, hi) = check_imo(&s, &tols);
            results.push(lo);
            results.push(hi);
            for r in results {
                if r.verdict != Verdict::NotApplicable {
                    applied += 1;
                }
                if r.verdict == Verdict::Fails && violations.len() < 5 {
                    violations.push(format!(
                        "trial {trial}: {} slack {} on {:?} c={c}",
                        r.name, r.slack, s.lambdas
                    ));
                }
            }
        }
        ensure(violations.is_empty(), || violations.join("; "))?;
        ensure(applied > 1_000_000, || format!("only {applied} applicable checks"))?;
        let elapsed = start.elapsed();
        ensure(elapsed.as_secs_f64() < 60.0, || format!("took {elapsed:?} (budget 60 s)"))
    };
    conclude(2, "theorem fuzz, 1e5 spectra", run());
}

#[test]
fn criterion_3_convexity_gate_soundness() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_3);
        // pure algebraic claim on random vectors
        for trial in 0..100_000usize {
            let n = rng.gen_range(3..=6usize);
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            if gate_claim_holds(&v) {
                let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
                ensure(min >= -1e-12, || format!("trial {trial}: gate holds, min {min} for {v:?}"))?;
            }
        }
        // strongly convex quadric graphs: gate holds on the whole grid
        // and curvatures stay nonnegative
        let tols = Tolerances::default();
        for chart_i in 0..100usize {
            let n = 3 + (chart_i % 2);
            let a = random_pinched_spd(n, 0.8, 1.2, &mut rng);
            let mut chart = catalog::graph_quadric_chart(&a).map_err(|e| e.to_string())?;
            chart.domain = vec![(-0.2, 0.2); n];
            let grid = vec![3usize; n];
            let total: usize = grid.iter().product();
            for idx in 0..total {
                let mut rem = idx;
                let mut multi = vec![0usize; n];
                for axis in (0..n).rev() {
                    multi[axis] = rem % grid[axis];
                    rem /= grid[axis];
                }
                let u = curvature_audit::scan::grid_point(&chart.domain, &grid, &multi);
                let frame = evaluate_frame(&chart, &u).map_err(|e| e.to_string())?;
                let s = principal_curvatures(&frame.g, &frame.h).map_err(|e| e.to_string())?;
                let gate = verifiers::check_convexity_gate_point(&s, &tols);
                ensure(gate.verdict == Verdict::Holds, || {
                    format!("chart {chart_i} point {idx}: gate {:?}, lambdas {:?}", gate.verdict, s.lambdas)
                })?;
                ensure(s.lambdas[0] >= -1e-10, || {
                    format!("chart {chart_i} point {idx}: min lambda {}", s.lambdas[0])
                })?;
            }
        }
        Ok(())
    };
    conclude(3, "convexity gate soundness", run());
}

/// Random symmetric matrix with eigenvalues in [lo, hi]: Q D Q^T for a
/// random orthogonal Q.
fn random_pinched_spd(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    use curvature_audit::linalg;
    let mut m = vec![vec![0.0; n]; n];
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
    }
    let q = linalg::qr_thin_q(&m);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for (k, dk) in d.iter().enumerate() {
                sum += q[i][k] * dk * q[j][k];
            }
            a[i][j] = sum;
        }
    }
    // mirror exactly so the symmetric-input validation is strict
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    a
}

#[test]
fn criterion_4_oracle_equivalence() {
    let run = || -> Result<(), String> {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_4);
        for trial in 0..200usize {
            let n = if trial % 2 == 0 { 3 } else { 4 };
            let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let c = [-1.0, 0.0, 1.0][rng.gen_range(0..3)];
            let s = ShapeSpectrum::synthetic(lambdas, c).unwrap();
            let w = diag(&s.lambdas);
            let seed = rng.gen::<u64>();

            let fast = inf_sec_fast(&s);
            let oracle = inf_sec_oracle(&w, c, 64, 5000, seed);
            ensure((fast - oracle).abs() <= 1e-5, || {
                format!("trial {trial}: inf_sec fast {fast} oracle {oracle} on {:?}", s.lambdas)
            })?;

            let mut tuples = vec![ChenTuple::new(vec![2], n).unwrap()];
            if n == 4 {
                tuples.push(ChenTuple::new(vec![2, 2], 4).unwrap());
            }
            for t in tuples {
                let fast = delta_invariant(&s, &t).unwrap().value;
                let oracle = delta_oracle(&w, c, &t, 64, 5000, seed ^ 1).unwrap();
                ensure((fast - oracle).abs() <= 1e-5, || {
                    format!(
                        "trial {trial}: delta{} fast {fast} oracle {oracle} on {:?}",
                        t.label(),
                        s.lambdas
                    )
                })?;
            }
        }
        let elapsed = start.elapsed();
        ensure(elapsed.as_secs_f64() < 120.0, || format!("took {elapsed:?} (budget 120 s)"))
    };
    conclude(4, "fast path vs descent oracles", run());
}

#[test]
fn criterion_5_closed_form_catalog() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_5);
        let entries: [(&str, serde_json::Value); 4] = [
            ("sphere", serde_json::json!({"r": 1.5, "n": 2})),
            ("cylinder", serde_json::json!({"r": 2.0})),
            ("catenoid", serde_json::json!({})),
            ("torus", serde_json::json!({"R": 2.0, "r": 0.7})),
        ];
        for (name, params) in &entries {
            let chart = catalog::make_chart(name, params).map_err(|e| e.to_string())?;
            for trial in 0..25usize {
                let u: Vec<f64> = chart
                    .domain
                    .iter()
                    .map(|(a, b)| {
                        let t: f64 = rng.gen_range(0.05..0.95);
                        a + (b - a) * t
                    })
                    .collect();
                let frame = evaluate_frame(&chart, &u).map_err(|e| e.to_string())?;
                let got = principal_curvatures(&frame.g, &frame.h)
                    .map_err(|e| e.to_string())?
                    .lambdas;
                let want = catalog::reference_invariants(name, params, &u)
                    .map_err(|e| e.to_string())?
                    .lambdas;
                let direct = got.iter().zip(&want).all(|(a, b)| (a - b).abs() <= 1e-8);
                let mut neg: Vec<f64> = got.iter().map(|x| -x).collect();
                neg.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let flipped = neg.iter().zip(&want).all(|(a, b)| (a - b).abs() <= 1e-8);
                ensure(direct || flipped, || {
                    format!("{name} trial {trial} at {u:?}: got {got:?}, want {want:?}")
                })?;
            }
        }
        // catenoid minimality and Ricci sign on a 50 x 50 grid
        let scene = parse_scene(
            r#"{"mode": "chart", "chart": {"catalog": "catenoid"}, "grid": [50, 50],
                "checks": ["ricci_minimal"]}"#,
        )
        .map_err(|e| e.to_string())?;
        let report = run_scan(&scene, 0).map_err(|e| e.to_string())?;
        ensure(report.summary.error_count == 0, || "catenoid grid errors".into())?;
        for p in &report.points {
            let s = ShapeSpectrum::synthetic(p.lambdas.clone(), 0.0).unwrap();
            let h = s.mean_curvature();
            ensure(h.abs() <= 1e-10, || format!("point {}: H = {h}", p.index))?;
            let max_ric = ricci_diagonal(&s).into_iter().fold(f64::NEG_INFINITY, f64::max);
            ensure(max_ric <= 1e-10, || format!("point {}: max Ricci {max_ric}", p.index))?;
        }
        Ok(())
    };
    conclude(5, "closed-form catalog ground truth", run());
}

#[test]
fn criterion_6_coefficient_identities() {
    let run = || -> Result<(), String> {
        for n in 3..=8usize {
            let t = ChenTuple::new(vec![2], n).unwrap();
            let c = coefficient_c_exact(n, &t).unwrap();
            let b = coefficient_b_exact(n, &t).unwrap();
            let (ni, _) = (n as i64, ());
            // exact cross-multiplied comparisons: no float rounding
            ensure(
                (c.0 as i128) * (2 * (ni - 1)) as i128 == (ni * ni * (ni - 2)) as i128 * c.1 as i128,
                || format!("c({n},(2)) = {}/{}", c.0, c.1),
            )?;
            ensure(
                (b.0 as i128) * 2 == ((ni + 1) * (ni - 2)) as i128 * b.1 as i128,
                || format!("b({n},(2)) = {}/{}", b.0, b.1),
            )?;
        }
        let labels: Vec<String> = enumerate_s(4).iter().map(|t| t.label()).collect();
        ensure(
            labels == ["()", "(2)", "(3)", "(2,2)"],
            || format!("S(4) = {labels:?}"),
        )
    };
    conclude(6, "exact coefficient identities", run());
}

#[test]
fn criterion_7_spread_ratio_interval_on_paths() {
    let run = || -> Result<(), String> {
        // path 1: n = 2 graph into an umbilic; ratio identically sqrt 2
        let chart = catalog::graph_expr_chart("0.5*(u^2+v^2) + u^3", 2).map_err(|e| e.to_string())?;
        let est = umbilic_limit_estimate(&chart, &[0.0, 0.0], &[1.0, 0.3], 0.1, 0.5, 12)
            .map_err(|e| e.to_string())?;
        for (t, ratio) in est.ts.iter().zip(&est.ratios) {
            ensure((ratio - 2f64.sqrt()).abs() <= 1e-12, || {
                format!("n=2 path at t={t}: ratio {ratio}")
            })?;
        }
        ensure(
            (est.extrapolated - 2f64.sqrt()).abs() <= 1e-12,
            || format!("n=2 extrapolant {}", est.extrapolated),
        )?;

        // paths 2 and 3: perturbed n = 3 graphs into the umbilic origin
        let lo3 = 2.0 / 3f64.sqrt() - 1e-9;
        let hi = 2f64.sqrt() + 1e-9;
        for (i, f) in [
            "0.5*(x0^2+x1^2+x2^2) + x0^3",
            "0.5*(x0^2+x1^2+x2^2) + x0*x1*x2 + 0.3*x1^3",
        ]
        .iter()
        .enumerate()
        {
            let chart = catalog::graph_expr_chart(f, 3).map_err(|e| e.to_string())?;
            let est = umbilic_limit_estimate(&chart, &[0.0; 3], &[1.0, 0.5, 0.25], 0.1, 0.5, 10)
                .map_err(|e| e.to_string())?;
            for (t, ratio) in est.ts.iter().zip(&est.ratios) {
                ensure((lo3..=hi).contains(ratio), || {
                    format!("n=3 path {i} at t={t}: ratio {ratio} outside [{lo3}, {hi}]")
                })?;
            }
            ensure((lo3..=hi).contains(&est.extrapolated), || {
                format!("n=3 path {i}: extrapolant {}", est.extrapolated)
            })?;
        }
        Ok(())
    };
    conclude(7, "spread-ratio interval along umbilic paths", run());
}

// ---------------------------------------------------------------------
// criterion 8 machinery: random expressions and Richardson differences
// ---------------------------------------------------------------------

fn random_expr(depth: usize, rng: &mut ChaCha8Rng) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            Expr::var(rng.gen_range(0..2))
        } else {
            Expr::constant(rng.gen_range(-2.0..2.0))
        };
    }
    match rng.gen_range(0..8) {
        0 => Expr::binary(BinOp::Add, random_expr(depth - 1, rng), random_expr(depth - 1, rng)),
        1 => Expr::binary(BinOp::Sub, random_expr(depth - 1, rng), random_expr(depth - 1, rng)),
        2 => Expr::binary(BinOp::Mul, random_expr(depth - 1, rng), random_expr(depth - 1, rng)),
        3 => Expr::binary(BinOp::Div, random_expr(depth - 1, rng), random_expr(depth - 1, rng)),
        4 => Expr::binary(
            BinOp::Pow,
            random_expr(depth - 1, rng),
            Expr::constant(rng.gen_range(2..4) as f64),
        ),
        5 => Expr::unary(UnaryFn::Sin, random_expr(depth - 1, rng)),
        6 => Expr::unary(UnaryFn::Cos, random_expr(depth - 1, rng)),
        _ => Expr::unary(UnaryFn::Tanh, random_expr(depth - 1, rng)),
    }
}

/// Two-level Richardson extrapolation of a central-difference quotient
/// `d(h)`: returns (O(h^6) estimate, consistency gap between levels).
fn richardson(d: impl Fn(f64) -> f64, h: f64) -> (f64, f64) {
    let r1a = (4.0 * d(h / 2.0) - d(h)) / 3.0;
    let r1b = (4.0 * d(h / 4.0) - d(h / 2.0)) / 3.0;
    let r2 = (16.0 * r1b - r1a) / 15.0;
    (r2, (r2 - r1b).abs())
}

#[test]
fn criterion_8_jets_vs_richardson_differences() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_8);
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < 500 {
            attempts += 1;
            ensure(attempts < 20_000, || format!("only {accepted} usable samples"))?;
            let expr = random_expr(4, &mut rng);
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let Ok(jet) = eval_jet(&expr, &x) else { continue };
            if !jet.value.is_finite()
                || jet.gradient.iter().any(|g| !g.is_finite() || g.abs() > 1e4)
                || jet.hessian.iter().flatten().any(|h| !h.is_finite() || h.abs() > 1e4)
            {
                continue;
            }
            let f = |p: &[f64]| eval_scalar(&expr, p);
            let at = |du: f64, dv: f64| f(&[x[0] + du, x[1] + dv]);
            // reject any stencil leaving the expression's domain
            let probe = at(0.05, 0.05).and(at(-0.05, -0.05)).and(at(0.05, -0.05));
            if probe.map(|v| !v.is_finite()).unwrap_or(true) {
                continue;
            }

            let h = 0.02;
            let mut ok = true;
            let mut noisy = false;
            let mut worst = 0.0f64;
            for i in 0..2 {
                let d = |h: f64| {
                    let mut hi = [0.0; 2];
                    hi[i] = h;
                    (at(hi[0], hi[1]).unwrap_or(f64::NAN) - at(-hi[0], -hi[1]).unwrap_or(f64::NAN))
                        / (2.0 * h)
                };
                let (fd, gap) = richardson(d, h);
                let scale = jet.gradient[i].abs().max(1.0);
                if !fd.is_finite() || gap > 1e-9 * scale {
                    noisy = true;
                    break;
                }
                let rel = (jet.gradient[i] - fd).abs() / scale;
                worst = worst.max(rel);
                ok &= rel <= 1e-6;
            }
            if !noisy {
                for i in 0..2 {
                    for j in i..2 {
                        let d = |h: f64| {
                            if i == j {
                                let mut e = [0.0; 2];
                                e[i] = h;
                                (at(e[0], e[1]).unwrap_or(f64::NAN)
                                    - 2.0 * at(0.0, 0.0).unwrap_or(f64::NAN)
                                    + at(-e[0], -e[1]).unwrap_or(f64::NAN))
                                    / (h * h)
                            } else {
                                (at(h, h).unwrap_or(f64::NAN) - at(h, -h).unwrap_or(f64::NAN)
                                    - at(-h, h).unwrap_or(f64::NAN)
                                    + at(-h, -h).unwrap_or(f64::NAN))
                                    / (4.0 * h * h)
                            }
                        };
                        let (fd, gap) = richardson(d, h);
                        let scale = jet.hessian[i][j].abs().max(1.0);
                        if !fd.is_finite() || gap > 1e-8 * scale {
                            noisy = true;
                        } else {
                            let rel = (jet.hessian[i][j] - fd).abs() / scale;
                            worst = worst.max(rel);
                            ok &= rel <= 1e-6;
                        }
                    }
                }
            }
            if noisy {
                continue; // difference quotient did not converge (kink or blow-up nearby)
            }
            ensure(ok, || {
                let vars = vec!["u".to_string(), "v".to_string()];
                format!("jet mismatch {worst:e} for {} at {x:?}", expr.pretty(&vars))
            })?;
            accepted += 1;
        }
        Ok(())
    };
    conclude(8, "500 expressions, jets vs Richardson differences", run());
}

#[test]
fn criterion_9_reports_identical_across_worker_counts() {
    let run = || -> Result<(), String> {
        let scene = parse_scene(
            r#"{"mode": "chart", "chart": {"catalog": "torus", "params": {"R": 2, "r": 1}},
                "grid": [9, 7], "seed": 2024, "oracle_validation": true}"#,
        )
        .map_err(|e| e.to_string())?;
        let one = run_scan(&scene, 1).map_err(|e| e.to_string())?.to_json_string();
        let four = run_scan(&scene, 4).map_err(|e| e.to_string())?.to_json_string();
        let eight = run_scan(&scene, 8).map_err(|e| e.to_string())?.to_json_string();
        ensure(one == four && four == eight, || {
            "report bodies differ across worker counts".into()
        })
    };
    conclude(9, "deterministic reports across worker counts", run());
}

#[test]
fn chen_oracle_gap_spot_check() {
    // sanity companion to criterion 4: the scan-level oracle plumbing
    // reports sub-1e-5 gaps on a fixed spectrum
    let s = ShapeSpectrum::synthetic(vec![-1.4, 0.2, 0.9, 1.7], 0.0).unwrap();
    let t = ChenTuple::new(vec![2, 2], 4).unwrap();
    let r = chen::delta_invariant_validated(&s, &t, 32, 5000, 11).unwrap();
    assert!(r.oracle_gap.unwrap() <= 1e-5, "gap {:?}", r.oracle_gap);
}
