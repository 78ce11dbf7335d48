//! The phase boundary.
//!
//! With vapor on the left the kinetic relation reads `z = p_V h(p_V, p_L)`,
//!
//! ```text
//! h = τ [ g_L(p_L) - g_V(p_V) - ½ (p_L - p_V)(v_L + v_V) ]
//! ```
//!
//! and mass and momentum balance combine to `f(p_V, p_L) = 0`,
//!
//! ```text
//! f = (p_L - p_V) + (p_V h)² (v_L - v_V).
//! ```
//!
//! For each vapor pressure there is one admissible liquid pressure
//! `p_L = φ(p_V)`. The mass flux is `z = -ρ(u - w)`, so the boundary moves
//! with `w = u_K + v_K z` seen from either side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{EosError, FluidPair};
use crate::numerics::{find_root_bracketed, Bracket, NumericsError, Tolerance};
use crate::waves::Phase;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterfaceError {
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("vapor pressure {p_v} Pa exceeds sigma_max p0 = {limit} Pa, where no admissible root is guaranteed")]
    OutOfTheory { p_v: f64, limit: f64 },
    #[error("no admissible interface root for p_V = {p_v} Pa: {reason}")]
    NoAdmissibleRoot { p_v: f64, reason: String },
}

/// Which phase sits on the left of the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    VaporLeft,
    LiquidLeft,
}

impl Orientation {
    /// Sign of the kinetic relation, `+1` with vapor on the left.
    pub fn sign(self) -> f64 {
        match self {
            Self::VaporLeft => 1.0,
            Self::LiquidLeft => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::VaporLeft => Self::LiquidLeft,
            Self::LiquidLeft => Self::VaporLeft,
        }
    }
}

/// Root of the interface equation at one vapor pressure. `z` is the
/// vapor-left mass flux `p_V h`; [`InterfaceSolution::flux`] orients it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSolution {
    pub p_v: f64,
    pub p_l: f64,
    pub z: f64,
    pub v_v: f64,
    pub v_l: f64,
    /// `-a_V/v_V` at the solution.
    pub z_min: f64,
    /// `a_L/v_L` at the solution.
    pub z_max: f64,
    /// `√(a_V a_L / (v_V v_L))`.
    pub z_sharp: f64,
    pub admissible: bool,
}

impl InterfaceSolution {
    pub fn flux(&self, orientation: Orientation) -> f64 {
        orientation.sign() * self.z
    }

    /// `[[v]] = v_L - v_V`.
    pub fn jump_v(&self) -> f64 {
        self.v_l - self.v_v
    }

    pub fn volume(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Vapor => self.v_v,
            Phase::Liquid => self.v_l,
        }
    }

    pub fn pressure(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Vapor => self.p_v,
            Phase::Liquid => self.p_l,
        }
    }
}

const ADMISSIBILITY_SLACK: f64 = 1e-12;

pub fn h_value(pair: &FluidPair, p_v: f64, p_l: f64) -> Result<f64, EosError> {
    let g = pair.gibbs_difference(p_v, p_l)?;
    let (vv, vl) = (pair.vapor.volume(p_v)?, pair.liquid.volume(p_l)?);
    Ok(pair.tau * (g - 0.5 * (p_l - p_v) * (vl + vv)))
}

pub fn interface_f(pair: &FluidPair, p_v: f64, p_l: f64) -> Result<f64, EosError> {
    let z = p_v * h_value(pair, p_v, p_l)?;
    let jump_v = pair.liquid.volume(p_l)? - pair.vapor.volume(p_v)?;
    Ok((p_l - p_v) + z * z * jump_v)
}

/// `(∂h/∂p_V, ∂h/∂p_L)`.
pub fn h_partials(pair: &FluidPair, p_v: f64, p_l: f64) -> Result<(f64, f64), EosError> {
    let (vv, av) = (pair.vapor.volume(p_v)?, pair.vapor.sound_speed(p_v)?);
    let (vl, al) = (pair.liquid.volume(p_l)?, pair.liquid.sound_speed(p_l)?);
    let (jp, jv) = (p_l - p_v, vl - vv);
    let half_tau = 0.5 * pair.tau;
    Ok((half_tau * (jv + jp * vv * vv / (av * av)), half_tau * (jv + jp * vl * vl / (al * al))))
}

/// `(∂f/∂p_V, ∂f/∂p_L)`.
pub fn f_partials(pair: &FluidPair, p_v: f64, p_l: f64) -> Result<(f64, f64), EosError> {
    let (vv, av) = (pair.vapor.volume(p_v)?, pair.vapor.sound_speed(p_v)?);
    let (vl, al) = (pair.liquid.volume(p_l)?, pair.liquid.sound_speed(p_l)?);
    let h = h_value(pair, p_v, p_l)?;
    let (dh_v, dh_l) = h_partials(pair, p_v, p_l)?;
    let z = p_v * h;
    let jv = vl - vv;
    let df_l = 1.0 + 2.0 * z * p_v * dh_l * jv - z * z * vl * vl / (al * al);
    let df_v = -1.0 + 2.0 * z * (h + p_v * dh_v) * jv + z * z * vv * vv / (av * av);
    Ok((df_v, df_l))
}

fn package(pair: &FluidPair, p_v: f64, p_l: f64) -> Result<InterfaceSolution, EosError> {
    let z = p_v * h_value(pair, p_v, p_l)?;
    let (vv, av) = (pair.vapor.volume(p_v)?, pair.vapor.sound_speed(p_v)?);
    let (vl, al) = (pair.liquid.volume(p_l)?, pair.liquid.sound_speed(p_l)?);
    let z_min = -av / vv;
    let z_max = al / vl;
    let admissible = z >= z_min * (1.0 + ADMISSIBILITY_SLACK) && z <= z_max * (1.0 + ADMISSIBILITY_SLACK);
    Ok(InterfaceSolution {
        p_v,
        p_l,
        z,
        v_v: vv,
        v_l: vl,
        z_min,
        z_max,
        z_sharp: (av * al / (vv * vl)).sqrt(),
        admissible,
    })
}

/// `φ(p_V)`: the admissible liquid pressure balancing vapor pressure `p_V`.
pub fn solve_phi(pair: &FluidPair, p_v: f64) -> Result<InterfaceSolution, InterfaceError> {
    if !(p_v > 0.0) || !pair.vapor.contains(p_v) {
        let (lo, hi) = pair.vapor.domain();
        return Err(EosError::Domain { p: p_v, lo, hi }.into());
    }
    let limit = pair.sigma_max_pressure();
    if p_v > limit * (1.0 + 1e-12) {
        return Err(InterfaceError::OutOfTheory { p_v, limit });
    }
    if p_v == pair.p0 {
        return Ok(package(pair, p_v, pair.p0)?);
    }

    let f = |p_l: f64| interface_f(pair, p_v, p_l).unwrap_or(f64::NAN);
    let f_lo = f(p_v);
    if !(f_lo <= 0.0) {
        return Err(InterfaceError::NoAdmissibleRoot { p_v, reason: format!("f(p_V, p_V) = {f_lo} > 0") });
    }

    let bracket = if p_v < pair.p0 {
        // evaporation: z > 0 left of the zero of h, where f = p_L - p_V > 0.
        // Further right z turns negative and f can drop below zero again.
        let p_z0 = zero_of_h(pair, p_v)?;
        Bracket::from_values(p_v, p_z0, f_lo, p_z0 - p_v)?
    } else {
        // condensation: march upwards until f turns positive or z leaves
        // the admissible range for good (z decreases in p_L)
        let z_floor = -pair.vapor.sound_speed(p_v)? / pair.vapor.volume(p_v)?;
        let mut lo = p_v;
        let mut f_at_lo = f_lo;
        let mut step = (p_v - pair.p0).abs().max(1e-6 * pair.p0);
        loop {
            let hi = lo + step;
            let f_hi = f(hi);
            if f_hi.is_nan() {
                return Err(InterfaceError::NoAdmissibleRoot { p_v, reason: format!("f undefined at p_L = {hi}") });
            }
            if f_hi > 0.0 {
                break Bracket::from_values(lo, hi, f_at_lo, f_hi)?;
            }
            let z = p_v * h_value(pair, p_v, hi)?;
            if z < z_floor {
                return Err(InterfaceError::NoAdmissibleRoot {
                    p_v,
                    reason: format!("mass flux {z} fell below -a_V/v_V = {z_floor} before f changed sign"),
                });
            }
            lo = hi;
            f_at_lo = f_hi;
            step *= 2.0;
        }
    };
    let tol = Tolerance::new(1e-14, 1e-15 * pair.p0, 200);
    let p_l = find_root_bracketed(f, bracket, tol)?;
    let sol = package(pair, p_v, p_l)?;
    if !sol.admissible {
        return Err(InterfaceError::NoAdmissibleRoot {
            p_v,
            reason: format!("root p_L = {p_l} has z = {} outside [{}, {}]", sol.z, sol.z_min, sol.z_max),
        });
    }
    Ok(sol)
}

/// The `p_L > p_V` where `h(p_V, p_L) = 0`, for `p_V < p₀` (`h` decreases in `p_L`).
fn zero_of_h(pair: &FluidPair, p_v: f64) -> Result<f64, InterfaceError> {
    let h = |p_l: f64| h_value(pair, p_v, p_l).unwrap_or(f64::NAN);
    let (mut lo, mut h_lo) = (p_v, h(p_v));
    let mut hi = pair.p0;
    loop {
        let h_hi = h(hi);
        if h_hi.is_nan() {
            return Err(InterfaceError::NoAdmissibleRoot { p_v, reason: format!("h undefined at p_L = {hi}") });
        }
        if h_hi <= 0.0 {
            let b = Bracket::from_values(lo, hi, h_lo, h_hi)?;
            return Ok(find_root_bracketed(h, b, Tolerance::new(1e-14, 0.0, 200))?);
        }
        (lo, h_lo) = (hi, h_hi);
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(InterfaceError::NoAdmissibleRoot { p_v, reason: "h stays positive".into() });
        }
    }
}

/// `φ'(p_V) = -∂_{p_V} f / ∂_{p_L} f` along the admissible branch.
pub fn phi_derivative(pair: &FluidPair, p_v: f64) -> Result<f64, InterfaceError> {
    let sol = solve_phi(pair, p_v)?;
    let (df_v, df_l) = f_partials(pair, sol.p_v, sol.p_l)?;
    Ok(-df_v / df_l)
}

/// Oriented mass flux and boundary speed given the velocity on one side.
pub fn mass_flux_and_speed(sol: &InterfaceSolution, side: Phase, u: f64, orientation: Orientation) -> (f64, f64) {
    let z = sol.flux(orientation);
    (z, u + sol.volume(side) * z)
}

/// Velocity on the other side of the boundary, from `w` being shared.
pub fn velocity_across(sol: &InterfaceSolution, side: Phase, u: f64, orientation: Orientation) -> f64 {
    let (z, w) = mass_flux_and_speed(sol, side, u, orientation);
    w - sol.volume(side.other()) * z
}
