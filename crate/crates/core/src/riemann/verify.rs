use serde::{Deserialize, Serialize};

use super::{RiemannSolution, Scenario, Wave};
use crate::eos::FluidPair;
use crate::waves::{wave_curve_f, Family, Phase, PhaseState, WaveKind};

/// Residuals of one wave, each relative to a natural scale of that wave.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WaveResidual {
    pub index: usize,
    /// `[[ρ(u - W)]]`.
    pub mass: f64,
    /// `ρ(u - W)[[u]] + [[p]]`.
    pub momentum: f64,
    /// Positive part of `ρ(u - W)[[g + e_kin]]`; the entropy inequality wants it zero.
    pub entropy_violation: f64,
    /// Shocks only.
    pub lax: Option<bool>,
    /// Phase boundaries with mass exchange only: `z - τ p_V [[g + e_kin]]`.
    pub kinetic: Option<f64>,
    /// Phase boundaries only: `-a_V/v_V ≤ z ≤ a_L/v_L` and `|z| ≤ √(a_V a_L/(v_V v_L))`.
    pub admissible: Option<bool>,
    /// Rarefactions only: mismatch of the downstream velocity with the wave curve, over `a`.
    pub fan: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    pub waves: Vec<WaveResidual>,
    pub max_mass: f64,
    pub max_momentum: f64,
    pub max_kinetic: f64,
    pub max_entropy_violation: f64,
    pub max_fan: f64,
    pub lax_ok: bool,
    pub admissible_ok: bool,
    pub ordered: bool,
    /// Largest of all relative residuals.
    pub max_relative: f64,
}

impl ResidualReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_relative <= tol && self.lax_ok && self.admissible_ok && self.ordered
    }
}

const LAX_SLACK: f64 = 1e-10;
const BOUND_SLACK: f64 = 1e-12;

fn gibbs(pair: &FluidPair, s: &PhaseState) -> f64 {
    pair.eos(s.phase).gibbs_integral(pair.p0, s.p).unwrap_or(f64::NAN)
}

fn discontinuity(
    pair: &FluidPair,
    index: usize,
    l: &PhaseState,
    r: &PhaseState,
    w: f64,
    same_phase: bool,
) -> WaveResidual {
    let (ml, mr) = (l.rho * (l.u - w), r.rho * (r.u - w));
    let m = 0.5 * (ml + mr);
    let mass_scale = (l.rho * (l.u.abs() + w.abs())).max(r.rho * (r.u.abs() + w.abs())).max(m.abs());
    let mass = rel(ml - mr, mass_scale);

    let mom = ml * (r.u - l.u) + r.p - l.p;
    let mom_scale = l.p.abs().max(r.p.abs()).max(ml * ml * l.v()).max(mr * mr * r.v());
    let momentum = rel(mom, mom_scale);

    let jump_g = if same_phase {
        pair.eos(l.phase).gibbs_integral(l.p, r.p).unwrap_or(f64::NAN)
    } else {
        gibbs(pair, r) - gibbs(pair, l)
    };
    let (kl, kr) = (0.5 * (l.u - w).powi(2), 0.5 * (r.u - w).powi(2));
    let jump = jump_g + kr - kl;
    let e_scale = jump_g.abs() + kl + kr;
    let entropy_violation = rel((m * jump).max(0.0), m.abs() * e_scale);

    WaveResidual { index, mass, momentum, entropy_violation, ..Default::default() }
}

fn rel(x: f64, scale: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs() / scale.max(f64::MIN_POSITIVE)
    }
}

pub fn verify_solution(pair: &FluidPair, sol: &RiemannSolution) -> ResidualReport {
    let mut out = ResidualReport { lax_ok: true, admissible_ok: true, ordered: true, ..Default::default() };
    for (i, wave) in sol.waves.iter().enumerate() {
        let l = sol.states[i];
        let r = sol.states[i + 1];
        let res = match wave {
            Wave::Classical(c) if c.kind == WaveKind::Shock => {
                let mut res = discontinuity(pair, i, &l, &r, c.xi_lo, true);
                let eos = pair.eos(c.upstream.phase);
                let q2 = c.mass_flux.map_or(f64::NAN, |q| q * q);
                let bound = |p: f64| {
                    let (a, v) = (eos.sound_speed(p).unwrap_or(f64::NAN), eos.volume(p).unwrap_or(f64::NAN));
                    (a / v).powi(2)
                };
                let lo = bound(c.upstream.p);
                let hi = bound(c.downstream.p);
                let sign_ok = match c.family {
                    Family::Left => c.mass_flux.is_some_and(|q| q > 0.0),
                    Family::Right => c.mass_flux.is_some_and(|q| q < 0.0),
                };
                res.lax = Some(sign_ok && q2 > lo * (1.0 - LAX_SLACK) && q2 < hi * (1.0 + LAX_SLACK));
                res
            }
            Wave::Classical(c) => {
                let eos = pair.eos(c.upstream.phase);
                let f = wave_curve_f(eos, c.downstream.p, c.upstream.p).unwrap_or(f64::NAN);
                let expect = match c.family {
                    Family::Left => c.upstream.u - f,
                    Family::Right => c.upstream.u + f,
                };
                let a = eos.sound_speed(c.upstream.p).unwrap_or(f64::NAN);
                WaveResidual { index: i, fan: Some(rel(c.downstream.u - expect, a)), ..Default::default() }
            }
            Wave::PhaseBoundary(b) => {
                let mut res = discontinuity(pair, i, &l, &r, b.speed, false);
                if sol.scenario != Scenario::TwoPhaseNoTransition {
                    let vap = if l.phase == Phase::Vapor { &l } else { &r };
                    let jump_g = gibbs(pair, &r) - gibbs(pair, &l);
                    let (kl, kr) = (0.5 * (l.u - b.speed).powi(2), 0.5 * (r.u - b.speed).powi(2));
                    let rhs = pair.tau * vap.p * (jump_g + kr - kl);
                    let scale = b.mass_flux.abs().max(pair.tau * vap.p * (jump_g.abs() + kl + kr));
                    res.kinetic = Some(rel(b.mass_flux - rhs, scale));
                }
                let s = &b.interface;
                let ok = s.z >= s.z_min * (1.0 + BOUND_SLACK)
                    && s.z <= s.z_max * (1.0 + BOUND_SLACK)
                    && s.z.abs() <= s.z_sharp * (1.0 + BOUND_SLACK);
                res.admissible = Some(ok);
                res
            }
        };
        out.max_mass = out.max_mass.max(res.mass);
        out.max_momentum = out.max_momentum.max(res.momentum);
        out.max_entropy_violation = out.max_entropy_violation.max(res.entropy_violation);
        out.max_kinetic = out.max_kinetic.max(res.kinetic.unwrap_or(0.0));
        out.max_fan = out.max_fan.max(res.fan.unwrap_or(0.0));
        out.lax_ok &= res.lax.unwrap_or(true);
        out.admissible_ok &= res.admissible.unwrap_or(true);
        out.waves.push(res);
    }
    for w in sol.waves.windows(2) {
        let (_, hi) = w[0].xi_range();
        let (lo, _) = w[1].xi_range();
        if hi > lo + 1e-12 * hi.abs().max(1.0) {
            out.ordered = false;
        }
    }
    let any_nan = out.waves.iter().any(|w| {
        [w.mass, w.momentum, w.entropy_violation, w.kinetic.unwrap_or(0.0), w.fan.unwrap_or(0.0)]
            .iter()
            .any(|x| x.is_nan())
    });
    let all = [out.max_mass, out.max_momentum, out.max_kinetic, out.max_entropy_violation, out.max_fan];
    out.max_relative = if any_nan { f64::NAN } else { all.into_iter().fold(0.0, f64::max) };
    out
}
