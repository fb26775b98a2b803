//! Curvature invariants of parametric hypersurfaces and an audit suite
//! for the sharp inequalities between them.
//!
//! Pipeline: expression parsing with exact second-order derivatives
//! ([`exprlang`]) -> Gauss frames and fundamental forms ([`chart`]) ->
//! principal curvatures and pointwise invariants ([`spectrum`]) ->
//! Chen-type invariants with independent optimization oracles ([`chen`])
//! -> inequality verifiers ([`verifiers`]) -> scene-driven scans and
//! machine-readable reports ([`scan`], [`report`]).

pub mod catalog;
pub mod chart;
pub mod chen;
pub mod exprlang;
pub mod linalg;
pub mod report;
pub mod scan;
pub mod scene;
pub mod spectrum;
pub mod verifiers;

pub use chart::{evaluate_frame, Chart};
pub use report::Report;
pub use scan::{exit_code, run_scan};
pub use scene::{load_scene, parse_scene, Scene};
pub use spectrum::{invariants, principal_curvatures, ShapeSpectrum};
pub use verifiers::{CheckResult, Tolerances, Verdict};
