//! Maximum vapor pressure from the equal-area rule.
//!
//! The liquid branch ends at `(p_min, v_m)`, the vapor branch at `(p̃, ṽ)`,
//! and a connector `v̄` joins them. `p̃` is chosen so that
//! `∫ p dv` along liquid, connector and vapor equals `p₀ (v_V(p₀) - v_L(p₀))`.
//! Integrating by parts, each branch contributes `[p v] - Δg`, which turns the
//! rule into a scalar equation in `p̃` using only the Gibbs integrals.

use serde::{Deserialize, Serialize};

use super::{EosError, EosModel};
use crate::numerics::{find_root_bracketed, geomspace, Bracket, Tolerance};

/// Shape of the curve joining the liquid and vapor end points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connector {
    /// Pressure linear in density `1/v`.
    #[default]
    LinearInDensity,
    /// Pressure linear in specific volume.
    LinearInVolume,
    /// Linear in density through `(v_m, 0)` and `(ṽ, p̃)`, whatever `p_min`.
    /// The closed form used for the nonlinear Tait water pair.
    ZeroAnchored,
    /// `ZeroAnchored` with the liquid end term `p_min v_m` also left out of
    /// the balance. The closed form used for the linear Tait water pair.
    ZeroAnchoredNoEndTerm,
}

impl Connector {
    /// `∫_{v_m}^{ṽ} p̄ dv`.
    pub fn area(self, p_min: f64, v_m: f64, p_tilde: f64, v_tilde: f64) -> f64 {
        let density_linear = |p_lo: f64| {
            let c = (p_tilde - p_lo) * v_tilde * v_m / (v_m - v_tilde);
            p_tilde * v_tilde - p_lo * v_m + c * (v_tilde / v_m).ln()
        };
        match self {
            Self::LinearInVolume => 0.5 * (v_tilde - v_m) * (p_tilde + p_min),
            Self::LinearInDensity => density_linear(p_min),
            Self::ZeroAnchored | Self::ZeroAnchoredNoEndTerm => density_linear(0.0),
        }
    }

    /// `[p v]` over the connector minus its area; the connector's share of
    /// the equal-area balance.
    pub fn balance(self, p_min: f64, v_m: f64, p_tilde: f64, v_tilde: f64) -> f64 {
        let end = match self {
            Self::ZeroAnchoredNoEndTerm => 0.0,
            _ => p_min * v_m,
        };
        p_tilde * v_tilde - end - self.area(p_min, v_m, p_tilde, v_tilde)
    }
}

/// Where the liquid branch is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LiquidLimit {
    MinPressure(f64),
    MaxVolume(f64),
}

impl Default for LiquidLimit {
    fn default() -> Self {
        Self::MinPressure(0.0)
    }
}

/// Critical temperature of water in K.
pub const WATER_CRITICAL_TEMPERATURE: f64 = 647.096;

impl LiquidLimit {
    /// Water convention: `p_min = 0` up to 620 K, above that a maximal liquid
    /// volume that closes in on `v₀` towards the critical point.
    pub fn water(temperature: f64, v0: f64) -> Self {
        if temperature <= 620.0 {
            Self::MinPressure(0.0)
        } else {
            let tc = WATER_CRITICAL_TEMPERATURE;
            Self::MaxVolume(v0 * (1.0 + (tc - temperature) / tc))
        }
    }

    /// `(p_min, v_m)` on the given liquid law.
    pub fn resolve(self, liquid: &EosModel) -> Result<(f64, f64), EosError> {
        match self {
            Self::MinPressure(p) => Ok((p, liquid.volume(p)?)),
            Self::MaxVolume(v) => Ok((liquid.pressure(v)?, v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellResult {
    pub p_min: f64,
    pub v_m: f64,
    pub p_tilde: f64,
    pub v_tilde: f64,
    /// Equal-area residual at the returned `p̃`, in J/kg.
    pub residual: f64,
}

/// `p₀(v_V(p₀) - v_L(p₀)) - ∫ p dv` for a trial `p̃`.
pub fn equal_area_residual(
    vapor: &EosModel,
    liquid: &EosModel,
    p0: f64,
    p_min: f64,
    v_m: f64,
    p_tilde: f64,
    connector: Connector,
) -> Result<f64, EosError> {
    let v_tilde = vapor.volume(p_tilde)?;
    let liquid_part = liquid.gibbs_integral(p0, p_min)?;
    let vapor_part = vapor.gibbs_integral(p0, p_tilde)?;
    Ok(connector.balance(p_min, v_m, p_tilde, v_tilde) + liquid_part - vapor_part)
}

pub fn maxwell_construction(
    vapor: &EosModel,
    liquid: &EosModel,
    p0: f64,
    limit: LiquidLimit,
    connector: Connector,
) -> Result<MaxwellResult, EosError> {
    let (p_min, v_m) = limit.resolve(liquid)?;
    if !(p_min < p0) {
        return Err(EosError::InvalidParameter(format!("p_min = {p_min} must lie below p0 = {p0}")));
    }
    // p̃ ranges from p₀ up to where the vapor volume meets v_m
    let p_hi = match vapor.pressure(v_m) {
        Ok(p) => p,
        Err(_) => {
            let (_, hi) = vapor.domain();
            if hi.is_finite() {
                hi
            } else {
                return Err(EosError::NoBracket { lo: p0, hi });
            }
        }
    };
    if !(p_hi > p0) {
        return Err(EosError::NoBracket { lo: p0, hi: p_hi });
    }
    let r = |p: f64| equal_area_residual(vapor, liquid, p0, p_min, v_m, p, connector).unwrap_or(f64::NAN);

    let probes = geomspace(p0 * (1.0 + 1e-9), p_hi * (1.0 - 1e-9), 512);
    let mut prev = (probes[0], r(probes[0]));
    for &p in &probes[1..] {
        let cur = (p, r(p));
        if prev.1.is_finite() && cur.1.is_finite() && prev.1 * cur.1 <= 0.0 {
            let b = Bracket::from_values(prev.0, cur.0, prev.1, cur.1)?;
            let p_tilde = find_root_bracketed(r, b, Tolerance::default())?;
            return Ok(MaxwellResult {
                p_min,
                v_m,
                p_tilde,
                v_tilde: vapor.volume(p_tilde)?,
                residual: r(p_tilde),
            });
        }
        prev = cur;
    }
    Err(EosError::NoBracket { lo: p0, hi: p_hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, Tolerance};
    use approx::assert_relative_eq;

    // water near the normal boiling point
    const T: f64 = 373.15;
    const P0: f64 = 101_417.98;
    const V0: f64 = 1.043_455e-3;
    const K0: f64 = 2.090e9;
    const R: f64 = 461.526;

    fn pair() -> (EosModel, EosModel) {
        (EosModel::ideal_gas(T, R).unwrap(), EosModel::linear_tait(P0, K0, V0).unwrap())
    }

    #[test]
    fn residual_vanishes_at_root() {
        let (vap, liq) = pair();
        for c in [Connector::LinearInDensity, Connector::LinearInVolume] {
            let m = maxwell_construction(&vap, &liq, P0, LiquidLimit::MinPressure(0.0), c).unwrap();
            assert!(m.residual.abs() <= 1e-9 * P0 * m.v_tilde);
            assert!(m.p_tilde > P0);
            assert_relative_eq!(m.v_tilde, R * T / m.p_tilde, max_relative = 1e-14);
        }
    }

    #[test]
    fn equal_area_by_direct_quadrature() {
        let (vap, liq) = pair();
        let m = maxwell_construction(&vap, &liq, P0, LiquidLimit::MinPressure(0.0), Connector::LinearInDensity)
            .unwrap();
        let tol = Tolerance::new(1e-13, 0.0, 400);
        let vl0 = liq.volume(P0).unwrap();
        let vv0 = vap.volume(P0).unwrap();
        let i_l = integrate_adaptive(|v| liq.pressure(v).unwrap(), vl0, m.v_m, tol).unwrap();
        let c = (m.p_tilde - m.p_min) / (1.0 / m.v_tilde - 1.0 / m.v_m);
        let i_c = integrate_adaptive(|v| m.p_min + c * (1.0 / v - 1.0 / m.v_m), m.v_m, m.v_tilde, tol).unwrap();
        let i_v = integrate_adaptive(|v| R * T / v, m.v_tilde, vv0, tol).unwrap();
        let lhs = P0 * (vv0 - vl0);
        assert_relative_eq!(i_l + i_c + i_v, lhs, max_relative = 1e-9);
    }

    #[test]
    fn density_connectors_agree_at_zero_p_min() {
        let (vap, liq) = pair();
        let v_m = liq.volume(0.0).unwrap();
        let args = (0.0, v_m, 1.1 * P0, R * T / (1.1 * P0));
        let r = |c: Connector| equal_area_residual(&vap, &liq, P0, args.0, args.1, args.2, c).unwrap();
        let base = r(Connector::LinearInDensity);
        assert_relative_eq!(r(Connector::ZeroAnchored), base, max_relative = 1e-12);
        assert_relative_eq!(r(Connector::ZeroAnchoredNoEndTerm), base, max_relative = 1e-12);
    }

    // water at 630 K, where the liquid branch is cut at a maximal volume
    const T_HOT: f64 = 630.0;
    const P0_HOT: f64 = 1.796_897_139e7;
    const V0_HOT: f64 = 1.837_399_624e-3;
    const K0_HOT: f64 = 3.607_109_314e7;

    #[test]
    fn linear_closed_form_above_620_k() {
        let rt = R * T_HOT;
        let vap = EosModel::ideal_gas(T_HOT, R).unwrap();
        let liq = EosModel::linear_tait(P0_HOT, K0_HOT, V0_HOT).unwrap();
        let limit = LiquidLimit::water(T_HOT, V0_HOT);
        let (p_min, v_m) = limit.resolve(&liq).unwrap();
        assert!(p_min > 0.0);
        let vv0 = rt / P0_HOT;
        for &pt in &[1.05 * P0_HOT, 1.3 * P0_HOT, 1.6 * P0_HOT] {
            let vt = rt / pt;
            let closed = K0_HOT * V0_HOT * (v_m / V0_HOT).ln()
                + v_m / (v_m - vt) * rt * (vt / v_m).ln()
                + rt * (vv0 / vt).ln();
            let r = equal_area_residual(&vap, &liq, P0_HOT, p_min, v_m, pt, Connector::ZeroAnchoredNoEndTerm).unwrap();
            assert_relative_eq!(r, -closed, max_relative = 1e-9, epsilon = 1e-9 * rt);
        }
    }

    #[test]
    fn nonlinear_closed_form_above_620_k() {
        let (rt, nu) = (R * T_HOT, 7.0);
        let vap = EosModel::ideal_gas(T_HOT, R).unwrap();
        let liq = EosModel::nonlinear_tait(P0_HOT, K0_HOT, V0_HOT, nu).unwrap();
        let (p_min, v_m) = LiquidLimit::water(T_HOT, V0_HOT).resolve(&liq).unwrap();
        let vv0 = rt / P0_HOT;
        for &pt in &[1.05 * P0_HOT, 1.3 * P0_HOT] {
            let vt = rt / pt;
            let closed = (P0_HOT - K0_HOT) * v_m
                + K0_HOT * V0_HOT
                + K0_HOT * V0_HOT.powf(nu) / (1.0 - nu) * (v_m.powf(1.0 - nu) - V0_HOT.powf(1.0 - nu))
                + v_m / (v_m - vt) * rt * (vt / v_m).ln()
                + rt * (vv0 / vt).ln();
            let r = equal_area_residual(&vap, &liq, P0_HOT, p_min, v_m, pt, Connector::ZeroAnchored).unwrap();
            assert_relative_eq!(r, -closed, max_relative = 1e-9, epsilon = 1e-9 * rt);
        }
    }

    #[test]
fn connector_areas() {
        // a flat connector has the rectangle area in both shapes
        let a = Connector::LinearInVolume.area(5.0, 1.0, 5.0, 3.0);
        assert_relative_eq!(a, 10.0);
        let b = Connector::LinearInDensity.area(5.0, 1.0, 5.0 + 1e-9, 3.0);
        assert_relative_eq!(b, 10.0, max_relative = 1e-8);
    }

    #[test]
    fn water_limit_rule() {
        assert_eq!(LiquidLimit::water(600.0, 1e-3), LiquidLimit::MinPressure(0.0));
        match LiquidLimit::water(630.0, 1.5e-3) {
            LiquidLimit::MaxVolume(v) => assert!(v > 1.5e-3 && v < 1.6e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn p_min_above_p0_is_rejected() {
        let (vap, liq) = pair();
        assert!(maxwell_construction(&vap, &liq, P0, LiquidLimit::MinPressure(2.0 * P0), Connector::default()).is_err());
    }
}
