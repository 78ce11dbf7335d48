//! Checks of the structural assumptions on a fluid pair.
//!
//! The existence theory needs the specific volumes well separated
//! (`α = max v_L/v_V < 1`, `αβ = max (v_L/v_V)(a_V/a_L) < 1`), a bounded
//! mobility (`τ(1-α)² a_V³ < γ_V`), `p̃ ≤ σ_max p₀`, and one of two
//! inequalities on `γ_V`, `γ_L` and `ε(γ_V)`. All of them are evaluated on
//! finite grids; the report records the worst sampled value of each.

use serde::Serialize;

use super::pair::FluidPair;
use crate::numerics::{geomspace, linspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Case {
    /// `γ_V ≤ 1 ≤ γ_L`.
    I,
    /// `γ_V < 1` and `γ_L < 1`.
    II,
    #[default]
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AssumptionReport {
    pub alpha: f64,
    pub alpha_beta: f64,
    pub sigma_max: f64,
    pub p_tilde_over_p0: f64,
    /// Largest sampled `τ(1-α)² a_V³ / γ_V`; must stay below 1.
    pub tau_bound: f64,
    pub tau_bound_ok: bool,
    pub case: Case,
    /// Largest sampled `ε(γ_V)`.
    pub epsilon: f64,
    pub gamma_l_at_p0: f64,
    /// `min 1/γ_L - (1 + max ε / α)`.
    pub margin: f64,
    pub case_inequality_ok: bool,
    pub checks: Vec<Check>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Pressures at which the audit samples each phase.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditGrid {
    pub liquid: Vec<f64>,
    pub vapor: Vec<f64>,
}

impl AuditGrid {
    /// Liquid on `[p_min, 10 max(p₀, p̃)]`, vapor on `(0, p̃]`.
    pub fn default_for(pair: &FluidPair) -> Self {
        let hi = 10.0 * pair.p0.max(pair.p_tilde);
        let mut liquid = linspace(pair.p_min, hi, 256);
        liquid.extend(geomspace(pair.p0, hi, 64));
        liquid.push(pair.p0);
        let mut vapor = geomspace(pair.p_tilde * 1e-6, pair.p_tilde, 256);
        vapor.extend(linspace(pair.p0, pair.p_tilde, 64));
        vapor.push(pair.p0);
        let sort = |v: &mut Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v.dedup();
        };
        sort(&mut liquid);
        sort(&mut vapor);
        Self { liquid, vapor }
    }
}

fn check(name: &str, value: f64, limit: f64, passed: bool) -> Check {
    Check { name: name.to_string(), value, limit, passed }
}

pub fn audit_assumptions(pair: &FluidPair, grid: &AuditGrid) -> AssumptionReport {
    let liq: Vec<(f64, f64, f64)> = grid
        .liquid
        .iter()
        .filter(|&&p| p >= pair.p_min && pair.liquid.contains(p))
        .map(|&p| (p, pair.liquid.volume_unchecked(p), pair.liquid.sound_speed_unchecked(p)))
        .collect();
    let vap: Vec<(f64, f64, f64)> = grid
        .vapor
        .iter()
        .filter(|&&p| p > 0.0 && p <= pair.p_tilde && pair.vapor.contains(p))
        .map(|&p| (p, pair.vapor.volume_unchecked(p), pair.vapor.sound_speed_unchecked(p)))
        .collect();

    let mut r = AssumptionReport { p_tilde_over_p0: pair.p_tilde / pair.p0, ..Default::default() };
    if liq.is_empty() || vap.is_empty() {
        r.checks.push(check("audit grid covers both phases", 0.0, 1.0, false));
        return r;
    }

    let (mut alpha, mut alpha_beta) = (0.0f64, 0.0f64);
    for &(_, vl, al) in &liq {
        for &(_, vv, av) in &vap {
            alpha = alpha.max(vl / vv);
            alpha_beta = alpha_beta.max(vl / vv * av / al);
        }
    }
    r.alpha = alpha;
    r.alpha_beta = alpha_beta;
    r.checks.push(check("alpha < 1", alpha, 1.0, alpha < 1.0));
    r.checks.push(check("alpha_beta < 1", alpha_beta, 1.0, alpha_beta < 1.0));

    r.sigma_max = 0.5 * (1.0 + (11.0 - 6.0 * alpha).max(0.0).sqrt());
    r.checks.push(check(
        "p_tilde <= sigma_max p0",
        r.p_tilde_over_p0,
        r.sigma_max,
        r.p_tilde_over_p0 <= r.sigma_max,
    ));

    let gamma = |p: f64, v: f64, a: f64| a * a / (p * v);
    let one_m_a2 = (1.0 - alpha).powi(2);

    // the mobility bound is needed on the whole theory range (0, σ_max p₀]
    let sigma_p = r.sigma_max * pair.p0;
    let tau_pts = grid
        .vapor
        .iter()
        .copied()
        .chain(geomspace(pair.p_tilde, sigma_p.max(pair.p_tilde), 32))
        .filter(|&p| p > 0.0 && pair.vapor.contains(p));
    r.tau_bound = tau_pts
        .map(|p| {
            let v = pair.vapor.volume_unchecked(p);
            let a = pair.vapor.sound_speed_unchecked(p);
            pair.tau * one_m_a2 * a.powi(3) / gamma(p, v, a)
        })
        .fold(0.0, f64::max);
    r.tau_bound_ok = r.tau_bound < 1.0;
    r.checks.push(check("tau (1-alpha)^2 a_V^3 < gamma_V", r.tau_bound, 1.0, r.tau_bound_ok));

    // γ-cases are evaluated on the compressed side, p ≥ p₀
    let eps = |p: f64, v: f64, a: f64| {
        let g = gamma(p, v, a);
        1.0 / g - 1.0 - pair.tau * a.powi(3) / (g * g) * one_m_a2 * (1.0 - alpha_beta * alpha_beta)
    };
    let vap_hi: Vec<_> = vap.iter().filter(|x| x.0 >= pair.p0).collect();
    let liq_hi: Vec<_> = liq.iter().filter(|x| x.0 >= pair.p0).collect();
    let eps_max = vap_hi.iter().map(|x| eps(x.0, x.1, x.2)).fold(f64::NEG_INFINITY, f64::max);
    let gv: Vec<f64> = vap_hi.iter().map(|x| gamma(x.0, x.1, x.2)).collect();
    let gl: Vec<f64> = liq_hi.iter().map(|x| gamma(x.0, x.1, x.2)).collect();
    let gv_max = gv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gl_min = gl.iter().copied().fold(f64::INFINITY, f64::min);
    let gl_max = gl.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inv_gl_min = 1.0 / gl_max;

    r.epsilon = eps_max;
    r.gamma_l_at_p0 = gamma(
        pair.p0,
        pair.liquid.volume_unchecked(pair.p0),
        pair.liquid.sound_speed_unchecked(pair.p0),
    );
    r.margin = inv_gl_min - (1.0 + eps_max / alpha);

    let slack = 1e-12;
    if gv_max <= 1.0 + slack && gl_min >= 1.0 - slack {
        r.case = Case::I;
        r.case_inequality_ok = r.margin >= 0.0;
        r.checks.push(check("case I: 1/gamma_L >= 1 + eps/alpha", r.margin, 0.0, r.case_inequality_ok));
    } else if gv_max < 1.0 && gl_max < 1.0 {
        r.case = Case::II;
        let num = vap_hi.iter().map(|x| 1.0 / gamma(x.0, x.1, x.2) - 1.0).fold(f64::INFINITY, f64::min);
        let den = liq_hi.iter().map(|x| 1.0 / gamma(x.0, x.1, x.2) - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let bound = num / den;
        let ok_alpha = alpha <= bound;
        let ok_eps = eps_max <= 0.0;
        r.case_inequality_ok = ok_alpha && ok_eps;
        r.checks.push(check("case II: alpha <= (1-1/gamma_V)/(1-1/gamma_L)", alpha, bound, ok_alpha));
        r.checks.push(check("case II: eps(gamma_V) <= 0", eps_max, 0.0, ok_eps));
    } else {
        r.case = Case::Unclassified;
        r.case_inequality_ok = false;
        r.checks.push(check("gamma case I or II", gl_min, 1.0, false));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::{EosModel, FluidPair};
    use approx::assert_relative_eq;

    fn water(t: f64, p0: f64, v0: f64, k0: f64, nu: Option<f64>) -> FluidPair {
        FluidPair::water_like(t, p0, v0, k0, nu).unwrap()
    }

    #[test]
    fn water_at_boiling_point_passes() {
        let p = water(373.15, 101_417.98, 1.043_455e-3, 2.090e9, None);
        let r = &p.report;
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.case, Case::I);
        assert!(r.alpha < 1e-3);
        assert!(r.tau_bound < 1.0 / (2.0 * std::f64::consts::PI).sqrt() + 1e-12);
    }

    #[test]
    fn alpha_sits_at_the_corner() {
        let p = water(373.15, 101_417.98, 1.043_455e-3, 2.090e9, None);
        let corner = p.v_m / p.v_tilde;
        assert_relative_eq!(p.report.alpha, corner, max_relative = 1e-12);
    }

    #[test]
    fn ideal_gas_tau_bound_is_hertz_knudsen_value() {
        let p = water(373.15, 101_417.98, 1.043_455e-3, 2.090e9, None);
        let expected = (1.0 - p.alpha).powi(2) / (2.0 * std::f64::consts::PI).sqrt();
        assert_relative_eq!(p.report.tau_bound, expected, max_relative = 1e-10);
    }

    #[test]
    fn soft_liquid_fails_case_one() {
        // K0 < p0 makes γ_L < 1 at p0
        let p = FluidPair::builder(
            EosModel::ideal_gas(640.0, 461.526).unwrap(),
            EosModel::linear_tait(2.0e7, 1.5e7, 2.0e-3).unwrap(),
            640.0,
            2.0e7,
        )
        .liquid_limit(crate::eos::LiquidLimit::water(640.0, 2.0e-3))
        .build();
        if let Ok(p) = p {
            assert!(!p.report.passed());
        }
    }

    #[test]
    fn synthetic_alpha_above_one_is_named() {
        let p = FluidPair::builder(
            EosModel::ideal_gas(300.0, 1.0).unwrap(),
            EosModel::linear_tait(100.0, 1e4, 2.0).unwrap(),
            300.0,
            100.0,
        )
        .tau(0.0)
        .p_tilde(200.0)
        .build()
        .unwrap();
        assert!(!p.report.passed());
        assert!(p.report.failed_checks().any(|c| c.name == "alpha < 1"));
    }
}
