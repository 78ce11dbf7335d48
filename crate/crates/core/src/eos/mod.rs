//! Isothermal equations of state for a single phase.
//!
//! Every model is a pressure-volume law `v(p)` at fixed temperature. The
//! derived quantities follow from it:
//!
//! * sound speed `a² = -v² dp/dv`
//! * `γ = a² / (p v)`
//! * fundamental derivative `𝒢 = (a/v) da/dp + 1`, which for a law given
//!   as `v(p)` reduces to `v v'' / (2 v'²)`

pub mod audit;
pub mod maxwell;
mod pair;
mod tabulated;

pub use audit::{audit_assumptions, AssumptionReport, AuditGrid, Case, Check};
pub use maxwell::{maxwell_construction, Connector, LiquidLimit, MaxwellResult};
pub use pair::{hertz_knudsen_tau, FluidPair, FluidPairBuilder, BOLTZMANN, WATER_MOLECULE_MASS};
pub use tabulated::TabulatedEos;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{find_root_bracketed, Bracket, NumericsError, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EosError {
    #[error("pressure {p} Pa outside the EOS domain ({lo}, {hi})")]
    Domain { p: f64, lo: f64, hi: f64 },
    #[error("specific volume {v} m^3/kg outside the EOS range")]
    VolumeDomain { v: f64 },
    #[error("invalid EOS parameter: {0}")]
    InvalidParameter(String),
    #[error("EOS is not admissible at p = {p} Pa: {reason}")]
    NotAdmissible { p: f64, reason: String },
    #[error("equal-area residual has no sign change for p_tilde in ({lo}, {hi}) Pa")]
    NoBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Pointwise thermodynamic state of one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosPoint {
    pub v: f64,
    pub a: f64,
    /// `a²/(p v)`, undefined for `p <= 0`.
    pub gamma: Option<f64>,
    pub fundamental: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EosModel {
    /// `p v = R T`.
    IdealGas { temperature: f64, gas_constant: f64 },
    /// `v = K₀ v₀ / (p - p₀ + K₀)`.
    LinearTait { p0: f64, k0: f64, v0: f64 },
    /// `v = v₀ ((p - p₀ + K₀)/K₀)^(-1/ν)`.
    NonlinearTait { p0: f64, k0: f64, v0: f64, nu: f64 },
    Tabulated(TabulatedEos),
}

impl EosModel {
    pub fn ideal_gas(temperature: f64, gas_constant: f64) -> Result<Self, EosError> {
        let m = Self::IdealGas { temperature, gas_constant };
        m.check_parameters()?;
        Ok(m)
    }

    pub fn linear_tait(p0: f64, k0: f64, v0: f64) -> Result<Self, EosError> {
        let m = Self::LinearTait { p0, k0, v0 };
        m.check_parameters()?;
        Ok(m)
    }

    pub fn nonlinear_tait(p0: f64, k0: f64, v0: f64, nu: f64) -> Result<Self, EosError> {
        let m = Self::NonlinearTait { p0, k0, v0, nu };
        m.check_parameters()?;
        Ok(m)
    }

    /// Stiffened gas `(p + p_c) v = C(γ-1) T₀` written as a linear Tait law
    /// anchored at `p₀`.
    pub fn stiffened_gas(p_c: f64, c_gamma_minus_1: f64, t0: f64, p0: f64) -> Result<Self, EosError> {
        let k0 = p_c + p0;
        Self::linear_tait(p0, k0, c_gamma_minus_1 * t0 / k0)
    }

    pub fn tabulated(pressures: Vec<f64>, volumes: Vec<f64>) -> Result<Self, EosError> {
        Ok(Self::Tabulated(TabulatedEos::new(pressures, volumes)?))
    }

    fn check_parameters(&self) -> Result<(), EosError> {
        let bad = |what: &str| Err(EosError::InvalidParameter(what.to_string()));
        let pos = |x: f64| x.is_finite() && x > 0.0;
        match *self {
            Self::IdealGas { temperature, gas_constant } => {
                if !pos(temperature) || !pos(gas_constant) {
                    return bad("ideal gas needs T > 0 and R > 0");
                }
            }
            Self::LinearTait { p0, k0, v0 } => {
                if !p0.is_finite() || !pos(k0) || !pos(v0) {
                    return bad("linear Tait needs finite p0, K0 > 0, v0 > 0");
                }
            }
            Self::NonlinearTait { p0, k0, v0, nu } => {
                if !p0.is_finite() || !pos(k0) || !pos(v0) {
                    return bad("nonlinear Tait needs finite p0, K0 > 0, v0 > 0");
                }
                if !(nu.is_finite() && nu > 1.0) {
                    return bad("nonlinear Tait needs nu > 1");
                }
            }
            Self::Tabulated(_) => {}
        }
        Ok(())
    }

    /// Parameter checks plus `dv/dp < 0`, `a > 0`, `𝒢 > 0` on a sample grid.
    pub fn validate(&self) -> Result<(), EosError> {
        self.check_parameters()?;
        let (lo, hi) = self.domain();
        let grid: Vec<f64> = match self {
            Self::Tabulated(t) => t.sample_grid(),
            _ => {
                let lo = if lo.is_finite() { lo } else { 0.0 };
                let span = if hi.is_finite() { hi - lo } else { 1e9_f64.max(lo.abs() * 10.0) };
                (1..=64).map(|i| lo + span * (i as f64 / 64.0).powi(3)).collect()
            }
        };
        for p in grid {
            if !self.contains(p) {
                continue;
            }
            let e = self.eval(p)?;
            if !(e.v > 0.0 && e.v.is_finite()) {
                return Err(EosError::NotAdmissible { p, reason: format!("v = {}", e.v) });
            }
            if !(e.a > 0.0 && e.a.is_finite()) {
                return Err(EosError::NotAdmissible { p, reason: format!("a = {}", e.a) });
            }
            if !(e.fundamental > 0.0) {
                return Err(EosError::NotAdmissible {
                    p,
                    reason: format!("fundamental derivative {} <= 0", e.fundamental),
                });
            }
        }
        Ok(())
    }

    /// Open pressure interval on which the law is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::IdealGas { .. } => (0.0, f64::INFINITY),
            Self::LinearTait { p0, k0, .. } | Self::NonlinearTait { p0, k0, .. } => (p0 - k0, f64::INFINITY),
            Self::Tabulated(t) => t.domain(),
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        let (lo, hi) = self.domain();
        match self {
            // table end points are data, so they are part of the domain
            Self::Tabulated(_) => p >= lo && p <= hi,
            _ => p > lo && p < hi,
        }
    }

    fn check(&self, p: f64) -> Result<(), EosError> {
        if self.contains(p) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(EosError::Domain { p, lo, hi })
        }
    }

    pub fn volume(&self, p: f64) -> Result<f64, EosError> {
        self.check(p)?;
        Ok(self.volume_unchecked(p))
    }

    pub(crate) fn volume_unchecked(&self, p: f64) -> f64 {
        match *self {
            Self::IdealGas { temperature, gas_constant } => gas_constant * temperature / p,
            Self::LinearTait { p0, k0, v0 } => k0 * v0 / (p - p0 + k0),
            Self::NonlinearTait { p0, k0, v0, nu } => v0 * ((p - p0 + k0) / k0).powf(-1.0 / nu),
            Self::Tabulated(ref t) => t.volume(p),
        }
    }

    /// `v(p2) - v(p1)`, free of cancellation when the pressures are close.
    pub fn volume_difference(&self, p1: f64, p2: f64) -> Result<f64, EosError> {
        self.check(p1)?;
        self.check(p2)?;
        Ok(match *self {
            Self::IdealGas { temperature, gas_constant } => gas_constant * temperature * (p1 - p2) / (p1 * p2),
            Self::LinearTait { p0, k0, v0 } => -k0 * v0 * (p2 - p1) / ((p1 - p0 + k0) * (p2 - p0 + k0)),
            Self::NonlinearTait { p0, k0, nu, .. } => {
                let r = ((p2 - p1) / (p1 - p0 + k0)).ln_1p();
                self.volume_unchecked(p1) * (-r / nu).exp_m1()
            }
            Self::Tabulated(ref t) => t.volume(p2) - t.volume(p1),
        })
    }

    pub fn sound_speed(&self, p: f64) -> Result<f64, EosError> {
        self.check(p)?;
        Ok(self.sound_speed_unchecked(p))
    }

    pub(crate) fn sound_speed_unchecked(&self, p: f64) -> f64 {
        match *self {
            Self::IdealGas { temperature, gas_constant } => (gas_constant * temperature).sqrt(),
            Self::LinearTait { k0, v0, .. } => (k0 * v0).sqrt(),
            Self::NonlinearTait { p0, k0, v0, nu } => {
                let s = (p - p0 + k0) / k0;
                (nu * k0 * v0 * s.powf((nu - 1.0) / nu)).sqrt()
            }
            Self::Tabulated(ref t) => t.sound_speed(p),
        }
    }

    pub fn eval(&self, p: f64) -> Result<EosPoint, EosError> {
        self.check(p)?;
        let v = self.volume_unchecked(p);
        let a = self.sound_speed_unchecked(p);
        let fundamental = match *self {
            Self::IdealGas { .. } | Self::LinearTait { .. } => 1.0,
            Self::NonlinearTait { nu, .. } => 0.5 * (nu + 1.0),
            Self::Tabulated(ref t) => t.fundamental(p),
        };
        let gamma = (p > 0.0).then(|| a * a / (p * v));
        Ok(EosPoint { v, a, gamma, fundamental })
    }

    /// Inverse law `p(v)`.
    pub fn pressure(&self, v: f64) -> Result<f64, EosError> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(EosError::VolumeDomain { v });
        }
        let p = match *self {
            Self::IdealGas { temperature, gas_constant } => gas_constant * temperature / v,
            Self::LinearTait { p0, k0, v0 } => p0 - k0 + k0 * v0 / v,
            Self::NonlinearTait { p0, k0, v0, nu } => p0 - k0 + k0 * (v0 / v).powf(nu),
            Self::Tabulated(ref t) => return t.pressure(v),
        };
        if self.contains(p) {
            Ok(p)
        } else {
            Err(EosError::VolumeDomain { v })
        }
    }

    pub fn density(&self, p: f64) -> Result<f64, EosError> {
        Ok(1.0 / self.volume(p)?)
    }

    pub fn pressure_from_density(&self, rho: f64) -> Result<f64, EosError> {
        if !(rho > 0.0) {
            return Err(EosError::VolumeDomain { v: 1.0 / rho });
        }
        self.pressure(1.0 / rho)
    }

    /// Isothermal Gibbs energy difference `∫_{p1}^{p2} v dp`.
    pub fn gibbs_integral(&self, p1: f64, p2: f64) -> Result<f64, EosError> {
        self.check(p1)?;
        self.check(p2)?;
        Ok(match *self {
            Self::IdealGas { temperature, gas_constant } => gas_constant * temperature * (p2 / p1).ln(),
            Self::LinearTait { p0, k0, v0 } => {
                k0 * v0 * ((p2 - p1) / (p1 - p0 + k0)).ln_1p()
            }
            Self::NonlinearTait { p0, k0, v0, nu } => {
                let e = (nu - 1.0) / nu;
                k0 * v0 * nu / (nu - 1.0) * tait_power_difference(p0, k0, e, p1, p2)
            }
            Self::Tabulated(ref t) => t.volume_integral(p1, p2),
        })
    }

    /// Rarefaction integral `∫_{p1}^{p2} v/a dp`.
    pub fn rarefaction_integral(&self, p1: f64, p2: f64) -> Result<f64, EosError> {
        self.check(p1)?;
        self.check(p2)?;
        Ok(match *self {
            Self::IdealGas { temperature, gas_constant } => (gas_constant * temperature).sqrt() * (p2 / p1).ln(),
            Self::LinearTait { p0, k0, v0 } => (k0 * v0).sqrt() * ((p2 - p1) / (p1 - p0 + k0)).ln_1p(),
            Self::NonlinearTait { p0, k0, v0, nu } => {
                let e = (nu - 1.0) / (2.0 * nu);
                2.0 * (nu * k0 * v0).sqrt() / (nu - 1.0) * tait_power_difference(p0, k0, e, p1, p2)
            }
            Self::Tabulated(ref t) => t.rarefaction_integral(p1, p2)?,
        })
    }

    /// Solves `rarefaction_integral(p_ref, p) = target` for `p`, used to
    /// invert rarefaction fans. `target` may be of either sign.
    pub fn invert_rarefaction_integral(&self, p_ref: f64, target: f64) -> Result<f64, EosError> {
        self.check(p_ref)?;
        if target == 0.0 {
            return Ok(p_ref);
        }
        match *self {
            Self::IdealGas { temperature, gas_constant } => {
                Ok(p_ref * (target / (gas_constant * temperature).sqrt()).exp())
            }
            Self::LinearTait { p0, k0, v0 } => {
                let x = (p_ref - p0 + k0) * (target / (k0 * v0).sqrt()).exp();
                Ok(x + p0 - k0)
            }
            _ => {
                let g = |p: f64| self.rarefaction_integral(p_ref, p).unwrap_or(f64::NAN) - target;
                let (lo, hi) = self.domain();
                let (mut a, mut b) = (p_ref, p_ref);
                let mut step = p_ref.abs().max(1.0);
                let limit = 2000;
                for _ in 0..limit {
                    if target > 0.0 {
                        b = if hi.is_finite() { (b + step).min(hi) } else { b + step };
                        if g(b) >= 0.0 {
                            break;
                        }
                        a = b;
                        if b >= hi {
                            return Err(EosError::Domain { p: b, lo, hi });
                        }
                    } else {
                        let cand = a - step;
                        a = if cand <= lo { 0.5 * (a + lo) } else { cand };
                        if self.contains(a) && g(a) <= 0.0 {
                            break;
                        }
                        b = a;
                        if !(a - lo > 1e-12 * lo.abs().max(1.0)) {
                            return Err(EosError::Domain { p: a, lo, hi });
                        }
                    }
                    step *= 2.0;
                }
                let br = Bracket::new(g, a, b)?;
                Ok(find_root_bracketed(g, br, Tolerance::default().with_abs(1e-14 * p_ref.abs()))?)
            }
        }
    }
}

/// `s2^e - s1^e` with `s = (p - p0 + K0)/K0`, accurate for `p2` near `p1`.
fn tait_power_difference(p0: f64, k0: f64, e: f64, p1: f64, p2: f64) -> f64 {
    let s1 = (p1 - p0 + k0) / k0;
    let r = ((p2 - p1) / (p1 - p0 + k0)).ln_1p();
    s1.powf(e) * (e * r).exp_m1()
}
