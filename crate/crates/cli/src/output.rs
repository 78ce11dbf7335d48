//! Fixed-format renderings. Numbers in CSV carry 17 significant digits so
//! identical runs give identical bytes.

use std::fmt::Write as _;

use phasefan_core::riemann::{Pattern, ResidualReport, Sample, Scenario, Wave};
use phasefan_core::waves::Family;
use phasefan_core::{FluidPair, PhaseState, RiemannSolution, SweepResult, SweepRow};
use serde::Serialize;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn profile_csv(samples: &[Sample]) -> String {
    let mut s = String::from("xi,rho,u,p,phase\n");
    for x in samples {
        let _ = writeln!(s, "{},{},{},{},{}", num(x.xi), num(x.rho), num(x.u), num(x.p), x.phase.as_str());
    }
    s
}

fn sweep_row(s: &mut String, label: Option<&str>, r: &SweepRow) {
    let t = label.map_or_else(|| num(r.t_k), str::to_string);
    let _ = writeln!(
        s,
        "{t},{},{},{},{},{}",
        num(r.alpha),
        num(r.alpha_beta),
        num(r.ptilde_over_p0),
        num(r.gamma_l),
        num(r.margin)
    );
}

/// One row per temperature, then `max` and `min` rows over the range.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut s = String::from("T_K,alpha,alpha_beta,ptilde_over_p0,gamma_L,margin\n");
    for r in &result.rows {
        sweep_row(&mut s, None, r);
    }
    sweep_row(&mut s, Some("max"), &result.max);
    sweep_row(&mut s, Some("min"), &result.min);
    s
}

pub fn audit_table(pair: &FluidPair) -> String {
    let r = &pair.report;
    let mut s = String::new();
    let _ = writeln!(s, "T = {} K, p0 = {} Pa, p~ = {} Pa, p_min = {} Pa", pair.temperature, pair.p0, pair.p_tilde, pair.p_min);
    let _ = writeln!(s, "case {:?}, sigma_max = {:.6}, tau = {:.6e} s/m", r.case, r.sigma_max, pair.tau);
    let _ = writeln!(s, "{:<34} {:>14} {:>14}  status", "check", "value", "limit");
    for c in &r.checks {
        let status = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(s, "{:<34} {:>14.6e} {:>14.6e}  {status}", c.name, c.value, c.limit);
    }
    let failed = r.failed_checks().count();
    if failed == 0 {
        s.push_str("all checks passed\n");
    } else {
        let _ = writeln!(s, "{failed} of {} checks failed", r.checks.len());
    }
    s
}

pub fn audit_csv(pair: &FluidPair) -> String {
    let mut s = String::from("check,value,limit,passed\n");
    for c in &pair.report.checks {
        let _ = writeln!(s, "{},{},{},{}", c.name, num(c.value), num(c.limit), c.passed);
    }
    s
}

#[derive(Serialize)]
struct AuditJson<'a> {
    temperature: f64,
    p0: f64,
    p_tilde: f64,
    p_min: f64,
    v_m: f64,
    tau: f64,
    passed: bool,
    report: &'a phasefan_core::eos::AssumptionReport,
}

pub fn audit_json(pair: &FluidPair) -> String {
    to_json(&AuditJson {
        temperature: pair.temperature,
        p0: pair.p0,
        p_tilde: pair.p_tilde,
        p_min: pair.p_min,
        v_m: pair.v_m,
        tau: pair.tau,
        passed: pair.report.passed(),
        report: &pair.report,
    })
}

#[derive(Serialize)]
struct WaveJson {
    kind: &'static str,
    family: Option<&'static str>,
    xi_lo: f64,
    xi_hi: f64,
    /// Classical shocks: `Q = ρ(u - S)`; phase boundaries: `z = -ρ(u - W)`.
    mass_flux: Option<f64>,
}

impl From<&Wave> for WaveJson {
    fn from(w: &Wave) -> Self {
        let (xi_lo, xi_hi) = w.xi_range();
        match w {
            Wave::Classical(c) => Self {
                kind: if c.is_shock() { "shock" } else { "rarefaction" },
                family: Some(match c.family {
                    Family::Left => "left",
                    Family::Right => "right",
                }),
                xi_lo,
                xi_hi,
                mass_flux: c.mass_flux,
            },
            Wave::PhaseBoundary(b) => {
                Self { kind: "phase_boundary", family: None, xi_lo, xi_hi, mass_flux: Some(b.mass_flux) }
            }
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    scenario: Scenario,
    pattern: Pattern,
    temperature: f64,
    p0: f64,
    p_tilde: f64,
    star_states: &'a [PhaseState],
    /// Mass flux through each phase boundary, left to right.
    z: Vec<f64>,
    waves: Vec<WaveJson>,
    max_residual: f64,
    residuals: &'a ResidualReport,
    /// The full solution; feeding it back to the verifier reproduces `residuals`.
    solution: &'a RiemannSolution,
}

pub fn summary_json(pair: &FluidPair, sol: &RiemannSolution) -> String {
    to_json(&Summary {
        scenario: sol.scenario,
        pattern: sol.pattern,
        temperature: pair.temperature,
        p0: pair.p0,
        p_tilde: pair.p_tilde,
        star_states: sol.star_states(),
        z: sol.phase_boundaries().map(|b| b.mass_flux).collect(),
        waves: sol.waves.iter().map(WaveJson::from).collect(),
        max_residual: sol.residuals.max_relative,
        residuals: &sol.residuals,
        solution: sol,
    })
}
