//! Single-phase shocks and rarefactions.
//!
//! `wave_curve_f(eos, p, p_K)` is the velocity jump needed to connect a state
//! at `p_K` to pressure `p` through one classical wave: the Hugoniot branch
//! `√(-[[p]][[v]])` for compression, the integral of `v/a` for expansion.
//! A left wave gives `u* = u_L - f_L(p*)`, a right wave `u* = u_R + f_R(p*)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{EosError, EosModel};
use crate::numerics::{find_root_bracketed, Bracket, NumericsError, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("shock between equal densities {rho}")]
    DegenerateShock { rho: f64 },
    #[error("xi = {xi} outside the fan [{lo}, {hi}]")]
    OutOfFan { xi: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Vapor,
    Liquid,
}

impl Phase {
    pub fn other(self) -> Self {
        match self {
            Self::Vapor => Self::Liquid,
            Self::Liquid => Self::Vapor,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Vapor => "vapor",
            Self::Liquid => "liquid",
        }
    }
}

/// A constant state: phase, density, velocity and the pressure they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub phase: Phase,
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PhaseState {
    pub fn from_density(eos: &EosModel, phase: Phase, rho: f64, u: f64) -> Result<Self, EosError> {
        let p = eos.pressure_from_density(rho)?;
        Ok(Self { phase, rho, u, p })
    }

    pub fn from_pressure(eos: &EosModel, phase: Phase, p: f64, u: f64) -> Result<Self, EosError> {
        Ok(Self { phase, rho: eos.density(p)?, u, p })
    }

    pub fn v(&self) -> f64 {
        1.0 / self.rho
    }

    /// Reflection `x → -x`.
    pub fn mirrored(self) -> Self {
        Self { u: -self.u, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// One classical wave. `upstream` is the outer state (towards the initial
/// data), `downstream` the state next to the center of the fan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalWave {
    pub family: Family,
    pub kind: WaveKind,
    pub upstream: PhaseState,
    pub downstream: PhaseState,
    /// Smallest and largest `ξ = x/t` covered by the wave; equal for shocks.
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// `Q = ρ(u - S)`, positive for left shocks and negative for right ones.
    pub mass_flux: Option<f64>,
}

impl ClassicalWave {
    /// Connects `upstream` to the state at `p_star` through a wave of the
    /// given family. Equal pressures give a zero-width rarefaction.
    pub fn connect(eos: &EosModel, family: Family, upstream: PhaseState, p_star: f64) -> Result<Self, WaveError> {
        let f = wave_curve_f(eos, p_star, upstream.p)?;
        let u_star = match family {
            Family::Left => upstream.u - f,
            Family::Right => upstream.u + f,
        };
        let downstream = PhaseState { phase: upstream.phase, rho: eos.density(p_star)?, u: u_star, p: p_star };
        if p_star > upstream.p {
            let q = (-(p_star - upstream.p) / (downstream.v() - upstream.v())).sqrt();
            let q = match family {
                Family::Left => q,
                Family::Right => -q,
            };
            let s = upstream.u - q * upstream.v();
            Ok(Self {
                family,
                kind: WaveKind::Shock,
                upstream,
                downstream,
                xi_lo: s,
                xi_hi: s,
                mass_flux: Some(q),
            })
        } else {
            let a_up = eos.sound_speed(upstream.p)?;
            let a_down = eos.sound_speed(p_star)?;
            let (xi_lo, xi_hi) = match family {
                Family::Left => (upstream.u - a_up, u_star - a_down),
                Family::Right => (u_star + a_down, upstream.u + a_up),
            };
            Ok(Self { family, kind: WaveKind::Rarefaction, upstream, downstream, xi_lo, xi_hi, mass_flux: None })
        }
    }

    pub fn is_shock(&self) -> bool {
        self.kind == WaveKind::Shock
    }

    /// State on the left of the wave.
    pub fn left_state(&self) -> PhaseState {
        match self.family {
            Family::Left => self.upstream,
            Family::Right => self.downstream,
        }
    }

    pub fn right_state(&self) -> PhaseState {
        match self.family {
            Family::Left => self.downstream,
            Family::Right => self.upstream,
        }
    }

    pub fn mirrored(&self) -> Self {
        let family = match self.family {
            Family::Left => Family::Right,
            Family::Right => Family::Left,
        };
        Self {
            family,
            kind: self.kind,
            upstream: self.upstream.mirrored(),
            downstream: self.downstream.mirrored(),
            xi_lo: -self.xi_hi,
            xi_hi: -self.xi_lo,
            mass_flux: self.mass_flux.map(|q| -q),
        }
    }
}

/// Velocity jump across a classical wave from `p_ref` to `p`.
pub fn wave_curve_f(eos: &EosModel, p: f64, p_ref: f64) -> Result<f64, EosError> {
    if p > p_ref {
        let dv = eos.volume_difference(p_ref, p)?;
        Ok((-(p - p_ref) * dv).max(0.0).sqrt())
    } else {
        eos.rarefaction_integral(p_ref, p)
    }
}

/// `d/dp wave_curve_f`. Close to the join the rarefaction formula is used;
/// both branches share the limit `v/a` there.
pub fn wave_curve_df(eos: &EosModel, p: f64, p_ref: f64) -> Result<f64, EosError> {
    let v = eos.volume(p)?;
    let a = eos.sound_speed(p)?;
    if p > p_ref && (p - p_ref) > 1e-7 * p_ref.abs().max(f64::MIN_POSITIVE) {
        let dp = p - p_ref;
        let dv = eos.volume_difference(p_ref, p)?;
        Ok((-dv + dp * v * v / (a * a)) / (2.0 * (-dp * dv).sqrt()))
    } else {
        Ok(v / a)
    }
}

/// Speed and mass flux of a discontinuity between two states of one phase.
/// `family` only fixes the orientation: for a left wave `s1` is on the left.
pub fn shock_speed_and_flux(s1: &PhaseState, s2: &PhaseState, family: Family) -> Result<(f64, f64), WaveError> {
    let (l, r) = match family {
        Family::Left => (s1, s2),
        Family::Right => (s2, s1),
    };
    if l.rho == r.rho {
        return Err(WaveError::DegenerateShock { rho: l.rho });
    }
    let s = (r.rho * r.u - l.rho * l.u) / (r.rho - l.rho);
    Ok((s, l.rho * (l.u - s)))
}

/// State inside a rarefaction fan at `ξ = x/t`.
pub fn sample_rarefaction(eos: &EosModel, wave: &ClassicalWave, xi: f64) -> Result<PhaseState, WaveError> {
    if !(xi >= wave.xi_lo && xi <= wave.xi_hi) {
        return Err(WaveError::OutOfFan { xi, lo: wave.xi_lo, hi: wave.xi_hi });
    }
    let up = wave.upstream;
    let (p_hi, p_lo) = (up.p, wave.downstream.p);
    let u_of = |p: f64| -> Result<f64, EosError> {
        let r = eos.rarefaction_integral(up.p, p)?;
        Ok(match wave.family {
            Family::Left => up.u - r,
            Family::Right => up.u + r,
        })
    };
    // ξ(p) = u(p) ∓ a(p) is monotone in p when 𝒢 > 0
    let g = |p: f64| -> f64 {
        let a = eos.sound_speed_unchecked(p);
        match (wave.family, u_of(p)) {
            (Family::Left, Ok(u)) => u - a - xi,
            (Family::Right, Ok(u)) => u + a - xi,
            (_, Err(_)) => f64::NAN,
        }
    };
    let p = if p_hi == p_lo {
        p_hi
    } else if let Some(p) = closed_form_fan_pressure(eos, wave, xi) {
        p.clamp(p_lo, p_hi)
    } else {
        let b = Bracket::new(g, p_lo, p_hi)?;
        find_root_bracketed(g, b, Tolerance::default().with_abs(1e-15 * p_hi.abs()))?
    };
    Ok(PhaseState { phase: up.phase, rho: eos.density(p)?, u: u_of(p)?, p })
}

fn closed_form_fan_pressure(eos: &EosModel, wave: &ClassicalWave, xi: f64) -> Option<f64> {
    let up = wave.upstream;
    // constant sound speed: ξ = u_K ∓ R(p) ∓ a with R linear in ln(p + c)
    let (a, shift) = match *eos {
        EosModel::IdealGas { temperature, gas_constant } => ((gas_constant * temperature).sqrt(), 0.0),
        EosModel::LinearTait { p0, k0, v0 } => ((k0 * v0).sqrt(), k0 - p0),
        _ => return None,
    };
    let r = match wave.family {
        Family::Left => up.u - a - xi,
        Family::Right => xi - a - up.u,
    };
    Some((up.p + shift) * (r / a).exp() - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fd_derivative, fd_second_derivative, geomspace, linspace};
    use approx::assert_relative_eq;

    const RT: f64 = 461.526 * 373.15;

    fn gas() -> EosModel {
        EosModel::ideal_gas(373.15, 461.526).unwrap()
    }

    fn tait() -> EosModel {
        EosModel::nonlinear_tait(1.0142e5, 2.09e9, 1.0435e-3, 7.0).unwrap()
    }

    #[test]
    fn zero_at_reference() {
        assert_eq!(wave_curve_f(&gas(), 1e5, 1e5).unwrap(), 0.0);
        assert_eq!(wave_curve_f(&tait(), 3e5, 3e5).unwrap(), 0.0);
    }

    #[test]
    fn ideal_gas_closed_forms() {
        let (pr, a) = (1e5, RT.sqrt());
        for p in [2e4, 7e4] {
            assert_relative_eq!(wave_curve_f(&gas(), p, pr).unwrap(), a * (p / pr).ln(), max_relative = 1e-13);
        }
        for p in [1.3e5, 9e5] {
            let expect = (p - pr) * (RT / (p * pr)).sqrt();
            assert_relative_eq!(wave_curve_f(&gas(), p, pr).unwrap(), expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let pr = 1e5;
        for m in [gas(), tait()] {
            for p in geomspace(2e4, 5e6, 30) {
                let d = wave_curve_df(&m, p, pr).unwrap();
                let fd = fd_derivative(|q| wave_curve_f(&m, q, pr).unwrap(), p, 1e-4 * p);
                assert!(d > 0.0);
                assert_relative_eq!(d, fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn derivative_continuous_at_join() {
        let pr = 1e5;
        let m = gas();
        let above = wave_curve_df(&m, pr * (1.0 + 1e-5), pr).unwrap();
        let at = wave_curve_df(&m, pr, pr).unwrap();
        assert_relative_eq!(above, at, max_relative = 1e-4);
        assert_relative_eq!(at, m.volume(pr).unwrap() / m.sound_speed(pr).unwrap(), max_relative = 1e-15);
    }

    #[test]
    fn increasing_and_concave() {
        let pr = 1e5;
        for m in [gas(), tait()] {
            let g = geomspace(1e4, 1e7, 200);
            let f: Vec<f64> = g.iter().map(|&p| wave_curve_f(&m, p, pr).unwrap()).collect();
            assert!(f.windows(2).all(|w| w[1] > w[0]));
            for &p in &g {
                if (p / pr - 1.0).abs() < 1e-2 {
                    continue;
                }
                let h = 1e-3 * p;
                let d2 = fd_second_derivative(|q| wave_curve_f(&m, q, pr).unwrap(), p, h);
                // closed forms subtract terms of size a, so rounding scales with it
                let noise = 1e-13 * (wave_curve_f(&m, p, pr).unwrap().abs() + m.sound_speed(p).unwrap()) / (h * h);
                assert!(d2 <= noise, "p = {p}, d2 = {d2}");
                assert!(wave_curve_df(&m, p * 1.01, pr).unwrap() < wave_curve_df(&m, p, pr).unwrap());
            }
        }
    }

    #[test]
    fn shock_flux_signs_and_symmetry() {
        let m = gas();
        let u0 = 150.0;
        let l = PhaseState::from_pressure(&m, Phase::Vapor, 1e5, u0).unwrap();
        let r = l.mirrored();
        // two symmetric shocks meeting at p* with u* = 0
        let pstar = {
            let g = |p: f64| wave_curve_f(&m, p, 1e5).unwrap() - u0;
            let b = Bracket::new(g, 1e5, 1e7).unwrap();
            find_root_bracketed(g, b, Tolerance::default()).unwrap()
        };
        let lw = ClassicalWave::connect(&m, Family::Left, l, pstar).unwrap();
        let rw = ClassicalWave::connect(&m, Family::Right, r, pstar).unwrap();
        assert!(lw.is_shock() && rw.is_shock());
        assert!(lw.mass_flux.unwrap() > 0.0 && rw.mass_flux.unwrap() < 0.0);
        assert_relative_eq!(lw.xi_lo, -rw.xi_lo, max_relative = 1e-12);
        let (s, q) = shock_speed_and_flux(&l, &lw.downstream, Family::Left).unwrap();
        assert_relative_eq!(s, lw.xi_lo, max_relative = 1e-9);
        assert_relative_eq!(q, lw.mass_flux.unwrap(), max_relative = 1e-9);
        let (s, q) = shock_speed_and_flux(&r, &rw.downstream, Family::Right).unwrap();
        assert_relative_eq!(s, rw.xi_lo, max_relative = 1e-9);
        assert_relative_eq!(q, rw.mass_flux.unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn degenerate_shock() {
        let s = PhaseState { phase: Phase::Vapor, rho: 1.0, u: 0.0, p: 1.0 };
        assert!(matches!(
            shock_speed_and_flux(&s, &s, Family::Left),
            Err(WaveError::DegenerateShock { .. })
        ));
    }

    #[test]
    fn ideal_gas_fan_closed_form() {
        let m = gas();
        let a = RT.sqrt();
        let up = PhaseState::from_pressure(&m, Phase::Vapor, 1e5, 10.0).unwrap();
        let w = ClassicalWave::connect(&m, Family::Left, up, 4e4).unwrap();
        assert_eq!(w.kind, WaveKind::Rarefaction);
        assert_eq!(sample_rarefaction(&m, &w, w.xi_lo).unwrap().rho, up.rho);
        for xi in linspace(w.xi_lo, w.xi_hi, 11) {
            let s = sample_rarefaction(&m, &w, xi).unwrap();
            let rho = up.rho * ((up.u - a - xi) / a).exp();
            assert_relative_eq!(s.rho, rho, max_relative = 1e-10);
            assert_relative_eq!(s.u, xi + a, max_relative = 1e-10, epsilon = 1e-9);
        }
        let tail = sample_rarefaction(&m, &w, w.xi_hi).unwrap();
        assert_relative_eq!(tail.p, 4e4, max_relative = 1e-8);
        assert!(sample_rarefaction(&m, &w, w.xi_hi + 1.0).is_err());
    }

    #[test]
    fn riemann_invariant_constant_in_fan() {
        // I = u ± ∫ v/a dp is constant across a fan of the matching family
        let m = tait();
        for fam in [Family::Left, Family::Right] {
            let up = PhaseState::from_pressure(&m, Phase::Liquid, 5e6, 3.0).unwrap();
            let w = ClassicalWave::connect(&m, fam, up, 2e5).unwrap();
            for xi in linspace(w.xi_lo, w.xi_hi, 9) {
                let s = sample_rarefaction(&m, &w, xi).unwrap();
                let r = m.rarefaction_integral(up.p, s.p).unwrap();
                let inv = match fam {
                    Family::Left => s.u + r,
                    Family::Right => s.u - r,
                };
                assert_relative_eq!(inv, up.u, epsilon = 1e-8);
                let a = m.sound_speed(s.p).unwrap();
                let xi_back = match fam {
                    Family::Left => s.u - a,
                    Family::Right => s.u + a,
                };
                assert_relative_eq!(xi_back, xi, epsilon = 1e-7);
            }
            let tail = match fam {
                Family::Left => w.xi_hi,
                Family::Right => w.xi_lo,
            };
            let s = sample_rarefaction(&m, &w, tail).unwrap();
            assert_relative_eq!(s.p, w.downstream.p, max_relative = 1e-8);
            assert_relative_eq!(s.u, w.downstream.u, epsilon = 1e-8);
        }
    }

    #[test]
    fn zero_strength_wave() {
        let m = gas();
        let up = PhaseState::from_pressure(&m, Phase::Vapor, 1e5, 1.0).unwrap();
        let w = ClassicalWave::connect(&m, Family::Right, up, 1e5).unwrap();
        assert_eq!(w.kind, WaveKind::Rarefaction);
        assert_eq!(w.xi_lo, w.xi_hi);
        assert_eq!(w.downstream, up);
    }
}
