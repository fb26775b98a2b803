//! Scene execution: grid generation, parallel per-point audits, and
//! report assembly. Deterministic by construction — per-point RNG seeds
//! derive from the scene seed and grid index, and results are collected
//! in grid order, so the worker count never changes the output.

use crate::chart::{evaluate_frame, Chart};
use crate::chen::{self, ChenTuple};
use crate::report::{PointRecord, Report, Summary};
use crate::scene::{Mode, Scene, SceneError};
use crate::spectrum::{self, principal_curvatures, ShapeSpectrum, MEAN_TOL};
use crate::verifiers::{self, Tolerances, Verdict};
use rayon::prelude::*;

/// Strict-interior grid point: axis i samples a + (b-a)(j+1/2)/m.
pub fn grid_point(domain: &[(f64, f64)], grid: &[usize], multi: &[usize]) -> Vec<f64> {
    domain
        .iter()
        .zip(grid)
        .zip(multi)
        .map(|(((a, b), m), j)| a + (b - a) * (*j as f64 + 0.5) / *m as f64)
        .collect()
}

/// Lexicographic multi-index of flat index `idx` for the given grid.
fn multi_index(grid: &[usize], mut idx: usize) -> Vec<usize> {
    let mut multi = vec![0; grid.len()];
    for axis in (0..grid.len()).rev() {
        multi[axis] = idx % grid[axis];
        idx /= grid[axis];
    }
    multi
}

/// splitmix64 finalizer: decorrelates per-point seeds drawn from
/// consecutive indices.
fn point_seed(scene_seed: u64, index: usize) -> u64 {
    let mut z = scene_seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run every enabled check on one spectrum.
fn run_checks(scene: &Scene, s: &ShapeSpectrum, tols: &Tolerances) -> Vec<crate::verifiers::CheckResult> {
    let mut out = Vec::new();
    if scene.check_enabled("chen1993") {
        out.push(verifiers::check_chen_1993(s, tols));
    }
    if scene.check_enabled("fundamental") {
        for t in chen::enumerate_s(s.n()) {
            // synthetic diagonal spectra always admit the fast search
            out.push(
                verifiers::check_fundamental(s, &t, s.c, tols)
                    .expect("tuple comes from enumerate_s"),
            );
        }
    }
    if scene.check_enabled("obstruction") {
        let (r, _) = verifiers::check_minimality_obstruction(s, s.c, tols)
            .expect("enumerate_s tuples are valid");
        out.push(r);
    }
    if scene.check_enabled("convexity_gate") {
        out.push(verifiers::check_convexity_gate_point(s, tols));
    }
    if scene.check_enabled("imo_bound") {
        let (lo, hi) = verifiers::check_imo(s, tols);
        out.push(lo);
        out.push(hi);
    }
    if scene.check_enabled("spread_upper") {
        out.extend(verifiers::check_spread_upper(s, tols));
    }
    if scene.check_enabled("steaua") {
        out.push(verifiers::check_steaua(s, tols));
    }
    if scene.check_enabled("ratio_interval") {
        out.extend(verifiers::check_ratio_interval(s, tols));
    }
    if scene.check_enabled("rho") {
        out.push(verifiers::check_rho(s, tols));
    }
    if scene.check_enabled("nesbitt") {
        out.extend(verifiers::check_nesbitt(s, tols));
    }
    if scene.check_enabled("ricci_minimal") {
        out.push(verifiers::check_ricci_minimal(s, tols));
    }
    out
}

fn oracle_gap(scene: &Scene, s: &ShapeSpectrum, index: usize) -> Option<f64> {
    if !scene.oracle_validation || s.n() < 3 {
        return None;
    }
    let t = ChenTuple::new(vec![2], s.n()).ok()?;
    chen::delta_invariant_validated(s, &t, 8, 2000, point_seed(scene.seed, index))
        .ok()
        .and_then(|r| r.oracle_gap)
}

fn audit_spectrum(
    scene: &Scene,
    s: &ShapeSpectrum,
    index: usize,
    u: Option<Vec<f64>>,
    position: Option<Vec<f64>>,
    tols: &Tolerances,
) -> PointRecord {
    PointRecord {
        index,
        u,
        position,
        lambdas: s.lambdas.clone(),
        invariants: Some(spectrum::invariants(s)),
        checks: run_checks(scene, s, tols),
        oracle_gap: oracle_gap(scene, s, index),
        error: None,
    }
}

fn error_record(index: usize, u: Option<Vec<f64>>, message: String) -> PointRecord {
    PointRecord {
        index,
        u,
        position: None,
        lambdas: vec![],
        invariants: None,
        checks: vec![],
        oracle_gap: None,
        error: Some(message),
    }
}

fn chart_records(scene: &Scene, chart: &Chart, tols: &Tolerances) -> Vec<PointRecord> {
    let grid = scene.grid.as_ref().unwrap();
    let total: usize = grid.iter().product();
    (0..total)
        .into_par_iter()
        .map(|index| {
            let u = grid_point(&chart.domain, grid, &multi_index(grid, index));
            let frame = match evaluate_frame(chart, &u) {
                Ok(f) => f,
                Err(e) => return error_record(index, Some(u), e.to_string()),
            };
            let mut s = match principal_curvatures(&frame.g, &frame.h) {
                Ok(s) => s,
                Err(e) => return error_record(index, Some(u), e.to_string()),
            };
            s.source = format!("point {index}");
            audit_spectrum(scene, &s, index, Some(u), Some(frame.point), tols)
        })
        .collect()
}

fn spectrum_records(scene: &Scene, tols: &Tolerances) -> Vec<PointRecord> {
    let specs = scene.spectra.as_ref().unwrap();
    specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let c = if spec.c != 0.0 { spec.c } else { scene.ambient_c };
            match ShapeSpectrum::new(spec.lambdas.clone(), c, format!("spectrum {index}")) {
                Ok(s) => audit_spectrum(scene, &s, index, None, None, tols),
                Err(e) => error_record(index, None, e.to_string()),
            }
        })
        .collect()
}

fn global_verdicts(records: &[PointRecord]) -> Vec<String> {
    let mut verdicts = Vec::new();
    let any_error = records.iter().any(|r| r.error.is_some());
    let mut gate_applicable = 0usize;
    let mut gate_holds = 0usize;
    let mut obstructed = false;
    let mut minimal_seen = false;
    let mut minimal = true;
    for r in records {
        for c in &r.checks {
            match c.base_id() {
                "convexity_gate" if c.verdict != Verdict::NotApplicable => {
                    gate_applicable += 1;
                    if c.verdict == Verdict::Holds {
                        gate_holds += 1;
                    }
                }
                "obstruction" if c.verdict == Verdict::Fails => obstructed = true,
                _ => {}
            }
        }
        if let Some(inv) = &r.invariants {
            minimal_seen = true;
            if inv.h.abs() > MEAN_TOL {
                minimal = false;
            }
        }
    }
    if !any_error && gate_applicable > 0 && gate_holds == gate_applicable {
        verdicts.push("CONVEX".to_string());
    }
    if obstructed {
        verdicts.push("OBSTRUCTED".to_string());
    }
    if !any_error && minimal_seen && minimal {
        verdicts.push("MINIMAL".to_string());
    }
    verdicts
}

/// Execute a validated scene. `workers = 0` uses all available
/// parallelism; any worker count yields byte-identical reports.
pub fn run_scan(scene: &Scene, workers: usize) -> Result<Report, SceneError> {
    scene.validate()?;
    let tols = scene.tolerances.resolve();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SceneError::Invalid(format!("worker pool: {e}")))?;
    let records = pool.install(|| match scene.mode {
        Mode::Chart => {
            let chart = scene.build_chart()?;
            Ok::<_, SceneError>(chart_records(scene, &chart, &tols))
        }
        Mode::Spectrum => Ok(spectrum_records(scene, &tols)),
    })?;
    let summary = Summary::from_records(&records, global_verdicts(&records));
    Ok(Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: scene.seed,
        scene: scene.clone(),
        points: records,
        summary,
    })
}

/// Process exit code for a completed scan: 2 on any theorem violation,
/// 4 on geometry errors only, 0 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.any_violation() {
        2
    } else if report.summary.error_count > 0 {
        4
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    #[test]
    fn grid_points_are_strict_interior_and_hit_center() {
        let u = grid_point(&[(-1.0, 1.0)], &[3], &[1]);
        assert_eq!(u, vec![0.0]);
        let u = grid_point(&[(0.0, 1.0)], &[2], &[0]);
        assert_eq!(u, vec![0.25]);
    }

    #[test]
    fn sphere_scan_is_umbilic_everywhere() {
        let scene = parse_scene(
            r#"{"mode": "chart", "chart": {"catalog": "sphere", "params": {"r": 1, "n": 2}}, "grid": [10, 10]}"#,
        )
        .unwrap();
        let report = run_scan(&scene, 2).unwrap();
        assert_eq!(report.points.len(), 100);
        assert!(!report.any_violation());
        assert_eq!(exit_code(&report), 0);
        // umbilic everywhere: ratio checks not applicable, spread tiny
        let ratio = &report.summary.counts["ratio_interval"];
        assert_eq!(ratio.holds, 0);
        assert_eq!(ratio.not_applicable, 200);
        for p in &report.points {
            assert!(p.invariants.as_ref().unwrap().spread <= 1e-9);
        }
        // gate is n >= 3 only
        assert_eq!(report.summary.counts["convexity_gate"].not_applicable, 100);
    }

    #[test]
    fn imo_equality_at_origin_of_symmetric_quadric() {
        let third = 1.0 / 3.0;
        let scene = parse_scene(&format!(
            r#"{{"mode": "chart",
                "chart": {{"catalog": "graph_quadric",
                          "params": {{"A": [[{third}, 0, 0], [0, {third}, 0], [0, 0, {third}]]}},
                          "domain": [[-1e-9, 1e-9], [-1e-9, 1e-9], [-1e-9, 1e-9]]}},
                "grid": [3, 3, 3]}}"#
        ))
        .unwrap();
        let report = run_scan(&scene, 1).unwrap();
        // odd grid on a symmetric domain hits the origin exactly
        let upper = report
            .points
            .iter()
            .flat_map(|p| &p.checks)
            .find(|c| c.name == "imo_bound.upper" && c.equality)
            .expect("equality point present");
        assert!((upper.lhs - 7.0 / 27.0).abs() < 1e-12);
        assert!(report.summary.global_verdicts.contains(&"CONVEX".into()));
    }

    #[test]
    fn catenoid_scan_is_minimal_and_unobstructed() {
        let scene = parse_scene(
            r#"{"mode": "chart", "chart": {"catalog": "catenoid"}, "grid": [8, 8],
                "checks": ["obstruction", "ricci_minimal"]}"#,
        )
        .unwrap();
        let report = run_scan(&scene, 2).unwrap();
        assert!(report.summary.global_verdicts.contains(&"MINIMAL".into()));
        assert!(!report.summary.global_verdicts.contains(&"OBSTRUCTED".into()));
        assert_eq!(report.summary.counts["ricci_minimal"].holds, 64);
        assert_eq!(exit_code(&report), 0);
    }

    #[test]
    fn umbilic_spectrum_is_obstructed_but_exit_zero() {
        let scene = parse_scene(
            r#"{"mode": "spectrum", "spectra": [{"lambdas": [1, 1, 1], "c": 0}]}"#,
        )
        .unwrap();
        let report = run_scan(&scene, 1).unwrap();
        assert!(report.summary.global_verdicts.contains(&"OBSTRUCTED".into()));
        // an obstruction finding is not a theorem violation
        assert_eq!(exit_code(&report), 0);
    }

    #[test]
    fn degenerate_points_are_recorded_not_fatal() {
        let scene = parse_scene(
            r#"{"mode": "chart",
                "chart": {"expressions": ["u+v", "u+v", "u*v"], "domain": [[-1,1],[-1,1]]},
                "grid": [2, 2]}"#,
        )
        .unwrap();
        let report = run_scan(&scene, 1).unwrap();
        assert!(report.summary.error_count > 0);
        assert_eq!(exit_code(&report), 4);
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let scene = parse_scene(
            r#"{"mode": "chart", "chart": {"catalog": "torus", "params": {"R": 2, "r": 1}},
                "grid": [7, 5], "seed": 42, "oracle_validation": false}"#,
        )
        .unwrap();
        let a = run_scan(&scene, 1).unwrap().to_json_string();
        let b = run_scan(&scene, 4).unwrap().to_json_string();
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_validation_records_small_gaps() {
        let scene = parse_scene(
            r#"{"mode": "spectrum", "seed": 7, "oracle_validation": true,
                "spectra": [{"lambdas": [-0.5, 0.3, 1.2], "c": 0}]}"#,
        )
        .unwrap();
        let report = run_scan(&scene, 1).unwrap();
        let gap = report.points[0].oracle_gap.expect("gap recorded");
        assert!(gap <= 1e-5, "oracle gap {gap}");
    }
}
