use serde::Serialize;

use super::audit::{audit_assumptions, AssumptionReport, AuditGrid};
use super::maxwell::{maxwell_construction, Connector, LiquidLimit, MaxwellResult};
use super::{EosError, EosModel};

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Mass of one water molecule in kg, consistent with `R = 461.526 J/(kg K)`.
pub const WATER_MOLECULE_MASS: f64 = BOLTZMANN / 461.526;

/// Hertz-Knudsen mobility `τ = (m/(k T₀))^{3/2} / √(2π)`.
pub fn hertz_knudsen_tau(molecule_mass: f64, temperature: f64) -> f64 {
    (molecule_mass / (BOLTZMANN * temperature)).powf(1.5) / (2.0 * std::f64::consts::PI).sqrt()
}

/// Vapor and liquid laws at one temperature, sharing the Gibbs reference at
/// the saturation pressure `p₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluidPair {
    pub vapor: EosModel,
    pub liquid: EosModel,
    pub temperature: f64,
    pub p0: f64,
    pub tau: f64,
    pub p_min: f64,
    pub v_m: f64,
    pub p_tilde: f64,
    pub v_tilde: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma_max: f64,
    pub connector: Connector,
    pub report: AssumptionReport,
}

#[derive(Debug, Clone)]
pub struct FluidPairBuilder {
    vapor: EosModel,
    liquid: EosModel,
    temperature: f64,
    p0: f64,
    tau: Option<f64>,
    limit: LiquidLimit,
    connector: Connector,
    p_tilde: Option<f64>,
    grid: Option<AuditGrid>,
}

impl FluidPairBuilder {
    pub fn tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn liquid_limit(mut self, limit: LiquidLimit) -> Self {
        self.limit = limit;
        self
    }

    pub fn connector(mut self, connector: Connector) -> Self {
        self.connector = connector;
        self
    }

    /// Skips the Maxwell construction and uses the given maximum vapor pressure.
    pub fn p_tilde(mut self, p_tilde: f64) -> Self {
        self.p_tilde = Some(p_tilde);
        self
    }

    pub fn audit_grid(mut self, grid: AuditGrid) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn build(self) -> Result<FluidPair, EosError> {
        let Self { vapor, liquid, temperature, p0, tau, limit, connector, p_tilde, grid } = self;
        vapor.validate()?;
        liquid.validate()?;
        if !(temperature > 0.0 && p0 > 0.0) {
            return Err(EosError::InvalidParameter("need T0 > 0 and p0 > 0".into()));
        }
        let tau = match (tau, &vapor) {
            (Some(t), _) => t,
            (None, EosModel::IdealGas { gas_constant, .. }) => {
                hertz_knudsen_tau(BOLTZMANN / gas_constant, temperature)
            }
            (None, _) => return Err(EosError::InvalidParameter("tau is required for a non-ideal vapor".into())),
        };
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(EosError::InvalidParameter(format!("tau = {tau} must be finite and >= 0")));
        }
        if vapor.volume(p0)? <= liquid.volume(p0)? {
            return Err(EosError::InvalidParameter("vapor must be less dense than liquid at p0".into()));
        }

        let MaxwellResult { p_min, v_m, p_tilde, v_tilde, .. } = match p_tilde {
            None => maxwell_construction(&vapor, &liquid, p0, limit, connector)?,
            Some(pt) => {
                let (p_min, v_m) = limit.resolve(&liquid)?;
                MaxwellResult { p_min, v_m, p_tilde: pt, v_tilde: vapor.volume(pt)?, residual: f64::NAN }
            }
        };
        if !(p_min < p0 && p0 < p_tilde) {
            return Err(EosError::InvalidParameter(format!(
                "need p_min < p0 < p_tilde, got {p_min}, {p0}, {p_tilde}"
            )));
        }

        let mut pair = FluidPair {
            vapor,
            liquid,
            temperature,
            p0,
            tau,
            p_min,
            v_m,
            p_tilde,
            v_tilde,
            alpha: f64::NAN,
            beta: f64::NAN,
            sigma_max: f64::NAN,
            connector,
            report: AssumptionReport::default(),
        };
        let grid = grid.unwrap_or_else(|| AuditGrid::default_for(&pair));
        let report = audit_assumptions(&pair, &grid);
        pair.alpha = report.alpha;
        pair.beta = report.alpha_beta / report.alpha;
        pair.sigma_max = report.sigma_max;
        pair.report = report;
        Ok(pair)
    }
}

impl FluidPair {
    pub fn builder(vapor: EosModel, liquid: EosModel, temperature: f64, p0: f64) -> FluidPairBuilder {
        FluidPairBuilder {
            vapor,
            liquid,
            temperature,
            p0,
            tau: None,
            limit: LiquidLimit::default(),
            connector: Connector::default(),
            p_tilde: None,
            grid: None,
        }
    }

    /// Ideal-gas vapor with `R = k/m`, a Tait liquid (`nu = None` for the
    /// linear law) and the Hertz-Knudsen mobility. The Maxwell connector is
    /// the closed form customary for each liquid law; the choices differ only
    /// above 620 K, where `p_min > 0`.
    pub fn water_like(
        temperature: f64,
        p0: f64,
        v0: f64,
        k0: f64,
        nu: Option<f64>,
    ) -> Result<FluidPair, EosError> {
        let vapor = EosModel::ideal_gas(temperature, BOLTZMANN / WATER_MOLECULE_MASS)?;
        let (liquid, connector) = match nu {
            None => (EosModel::linear_tait(p0, k0, v0)?, Connector::ZeroAnchoredNoEndTerm),
            Some(nu) => (EosModel::nonlinear_tait(p0, k0, v0, nu)?, Connector::ZeroAnchored),
        };
        FluidPair::builder(vapor, liquid, temperature, p0)
            .tau(hertz_knudsen_tau(WATER_MOLECULE_MASS, temperature))
            .liquid_limit(LiquidLimit::water(temperature, v0))
            .connector(connector)
            .build()
    }

    /// `[[g]] = g_L(p_L) - g_V(p_V)` with both potentials zero at `p₀`.
    pub fn gibbs_difference(&self, p_v: f64, p_l: f64) -> Result<f64, EosError> {
        Ok(self.liquid.gibbs_integral(self.p0, p_l)? - self.vapor.gibbs_integral(self.p0, p_v)?)
    }

    pub fn v_vapor(&self, p: f64) -> Result<f64, EosError> {
        self.vapor.volume(p)
    }

    pub fn v_liquid(&self, p: f64) -> Result<f64, EosError> {
        self.liquid.volume(p)
    }

    pub fn eos(&self, phase: crate::waves::Phase) -> &EosModel {
        match phase {
            crate::waves::Phase::Vapor => &self.vapor,
            crate::waves::Phase::Liquid => &self.liquid,
        }
    }

    /// Upper end of the range covered by the interface theory.
    pub fn sigma_max_pressure(&self) -> f64 {
        self.sigma_max * self.p0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, Tolerance};
    use approx::assert_relative_eq;

    fn water_373() -> FluidPair {
        FluidPair::water_like(373.15, 101_417.98, 1.043_455e-3, 2.090e9, None).unwrap()
    }

    #[test]
    fn hertz_knudsen_scaling() {
        let t1 = hertz_knudsen_tau(2.988e-26, 373.15);
        let t2 = hertz_knudsen_tau(2.988e-26, 2.0 * 373.15);
        assert!(t1 > 0.0);
        assert_relative_eq!(t1 / t2, 2f64.powf(1.5), max_relative = 1e-14);
        assert!(hertz_knudsen_tau(1e-45, 373.15) < 1e-36);
        assert_eq!(hertz_knudsen_tau(0.0, 373.15), 0.0);
    }

    #[test]
    fn ideal_gas_tau_times_a_cubed() {
        let pair = water_373();
        let a = pair.vapor.sound_speed(pair.p0).unwrap();
        assert_relative_eq!(pair.tau * a.powi(3), 1.0 / (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn gibbs_reference_shared_at_p0() {
        let pair = water_373();
        assert_eq!(pair.gibbs_difference(pair.p0, pair.p0).unwrap(), 0.0);
        for f in [1.1, 1.5, 3.0] {
            let p = f * pair.p0;
            assert!(pair.gibbs_difference(p, p).unwrap() < 0.0);
        }
    }

    #[test]
    fn gibbs_difference_against_quadrature() {
        let pair = water_373();
        let (pv, pl) = (0.8 * pair.p0, 1.3 * pair.p0);
        let tol = Tolerance::new(1e-14, 0.0, 200);
        let gl = integrate_adaptive(|p| pair.liquid.volume(p).unwrap(), pair.p0, pl, tol).unwrap();
        let gv = integrate_adaptive(|p| pair.vapor.volume(p).unwrap(), pair.p0, pv, tol).unwrap();
        let got = pair.gibbs_difference(pv, pl).unwrap();
        assert!((got - (gl - gv)).abs() <= 1e-10 * gv.abs());
    }

    #[test]
    fn gibbs_difference_derivative_is_liquid_volume() {
        let pair = water_373();
        let pl = 2.0 * pair.p0;
        let d = crate::numerics::fd_derivative(|p| pair.gibbs_difference(pair.p0, p).unwrap(), pl, 10.0);
        assert_relative_eq!(d, pair.liquid.volume(pl).unwrap(), max_relative = 1e-6);
    }

    #[test]
    fn builder_rejects_inverted_phases() {
        let pair = water_373();
        let err = FluidPair::builder(pair.liquid.clone(), pair.vapor.clone(), 373.15, pair.p0).tau(1e-9).build();
        assert!(err.is_err());
    }

    #[test]
    fn override_p_tilde() {
        let base = water_373();
        let p = FluidPair::builder(base.vapor.clone(), base.liquid.clone(), 373.15, base.p0)
            .p_tilde(1.2 * base.p0)
            .build()
            .unwrap();
        assert_eq!(p.p_tilde, 1.2 * base.p0);
        assert!(p.report.passed());
    }
}
