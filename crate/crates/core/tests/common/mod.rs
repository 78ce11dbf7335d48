//! Independent reference implementations for the solver tests.
//!
//! Everything here is rebuilt from the raw jump conditions and the kinetic
//! relation with dense scans and bisection. Nothing calls into the library's
//! interface or root-finding code; only the pair parameters are read.
#![allow(dead_code)]

use phasefan_core::eos::EosModel;
use phasefan_core::riemann::RiemannProblem;
use phasefan_core::{FluidPair, Phase, PhaseState, SaturationTable};

/// Closed-form isothermal laws, written out separately from the library.
#[derive(Debug, Clone, Copy)]
pub enum Law {
    Ideal { rt: f64 },
    Tait { p0: f64, k0: f64, v0: f64, nu: f64 },
}

impl Law {
    pub fn from_model(m: &EosModel) -> Self {
        match *m {
            EosModel::IdealGas { temperature, gas_constant } => Law::Ideal { rt: temperature * gas_constant },
            EosModel::LinearTait { p0, k0, v0 } => Law::Tait { p0, k0, v0, nu: 1.0 },
            EosModel::NonlinearTait { p0, k0, v0, nu } => Law::Tait { p0, k0, v0, nu },
            EosModel::Tabulated(_) => panic!("oracle handles closed-form laws only"),
        }
    }

    pub fn v(&self, p: f64) -> f64 {
        match *self {
            Law::Ideal { rt } => rt / p,
            Law::Tait { p0, k0, v0, nu } => v0 * (k0 / (p - p0 + k0)).powf(1.0 / nu),
        }
    }

    /// `a² = -v² dp/dv`.
    pub fn a(&self, p: f64) -> f64 {
        match *self {
            Law::Ideal { rt } => rt.sqrt(),
            Law::Tait { k0, v0, nu, .. } => {
                // p = p0 - k0 + k0 (v0/v)^ν, dp/dv = -ν k0 v0^ν / v^(ν+1)
                let v = self.v(p);
                (nu * k0 * (v0 / v).powf(nu) * v).sqrt()
            }
        }
    }

    /// `∫_{p1}^{p2} v dp`.
    pub fn gibbs(&self, p1: f64, p2: f64) -> f64 {
        match *self {
            Law::Ideal { rt } => rt * (p2 / p1).ln(),
            Law::Tait { p0, k0, v0, nu } => {
                let (x1, x2) = ((p1 - p0 + k0) / k0, (p2 - p0 + k0) / k0);
                if nu == 1.0 {
                    k0 * v0 * (x2 / x1).ln()
                } else {
                    let e = 1.0 - 1.0 / nu;
                    k0 * v0 / e * (x2.powf(e) - x1.powf(e))
                }
            }
        }
    }

    /// `∫_{p1}^{p2} v/a dp`.
    pub fn fan(&self, p1: f64, p2: f64) -> f64 {
        match *self {
            Law::Ideal { rt } => rt.sqrt() * (p2 / p1).ln(),
            Law::Tait { p0, k0, v0, nu } => {
                let (x1, x2) = ((p1 - p0 + k0) / k0, (p2 - p0 + k0) / k0);
                if nu == 1.0 {
                    (k0 * v0).sqrt() * (x2 / x1).ln()
                } else {
                    let e = 0.5 * (1.0 - 1.0 / nu);
                    (nu * k0 * v0).sqrt() / (nu * e) * (x2.powf(e) - x1.powf(e))
                }
            }
        }
    }

    /// Velocity change across a wave of the first family from `p_ref` to `p`.
    pub fn curve(&self, p: f64, p_ref: f64) -> f64 {
        if p > p_ref {
            ((p - p_ref) * (self.v(p_ref) - self.v(p))).sqrt()
        } else {
            self.fan(p_ref, p)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub vap: Law,
    pub liq: Law,
    pub p0: f64,
    pub p_tilde: f64,
    pub tau: f64,
}

/// Interface state found by the oracle for a given vapor pressure.
#[derive(Debug, Clone, Copy)]
pub struct Jump {
    pub p_v: f64,
    pub p_l: f64,
    /// Mass flux with vapor on the left: `-ρ(u - w)`.
    pub z: f64,
    pub v_v: f64,
    pub v_l: f64,
}

impl Jump {
    /// `[[v]] = v_L - v_V`.
    pub fn jump_v(&self) -> f64 {
        self.v_l - self.v_v
    }
}

/// Bisection on a sign change, to full double precision.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let (mut fa, fb) = (f(a), f(b));
    assert!(fa * fb <= 0.0, "no sign change on [{a}, {b}]: {fa}, {fb}");
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign changes of `f` on a sample grid, each refined by bisection.
pub fn scan_roots(f: impl Fn(f64) -> f64, grid: &[f64]) -> Vec<f64> {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if a.is_finite() && b.is_finite() && (a == 0.0 || a * b < 0.0) {
            out.push(bisect(&f, grid[i], grid[i + 1]));
        }
    }
    out
}

pub fn geom(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..n).map(|i| lo * (r * i as f64 / (n - 1) as f64).exp()).collect()
}

impl Oracle {
    pub fn new(pair: &FluidPair) -> Self {
        Self {
            vap: Law::from_model(&pair.vapor),
            liq: Law::from_model(&pair.liquid),
            p0: pair.p0,
            p_tilde: pair.p_tilde,
            tau: pair.tau,
        }
    }

    /// Interface state at vapor pressure `p_v`, vapor on the left.
    ///
    /// Scans `Δp = p_L - p_V ≥ 0`; for each sign of `z` with
    /// `z² = -[[p]]/[[v]]` the kinetic residual
    /// `z - τ p_V ([[g]] + ½ z² (v_L² - v_V²))` is bisected, and the root with
    /// `-a_V/v_V ≤ z ≤ a_L/v_L` is returned.
    pub fn jump(&self, p_v: f64) -> Option<Jump> {
        let v_v = self.vap.v(p_v);
        let g_v = self.vap.gibbs(self.p0, p_v);
        let z_of = |dp: f64, sign: f64| {
            let v_l = self.liq.v(p_v + dp);
            sign * (dp / (v_v - v_l)).sqrt()
        };
        let resid = |dp: f64, sign: f64| {
            let p_l = p_v + dp;
            let v_l = self.liq.v(p_l);
            let z = z_of(dp, sign);
            let jg = self.liq.gibbs(self.p0, p_l) - g_v;
            z - self.tau * p_v * (jg + 0.5 * z * z * (v_l * v_l - v_v * v_v))
        };
        let a_l0 = self.liq.a(p_v.max(self.p0 * 1e-3));
        let zmax = (self.vap.a(p_v) / v_v).max(a_l0 / self.liq.v(p_v));
        let dp_max = 4.0 * zmax * zmax * v_v;
        let mut grid = vec![0.0];
        grid.extend(geom(1e-14 * p_v.max(1.0), dp_max, 3000));
        let mut best: Option<Jump> = None;
        for sign in [1.0, -1.0] {
            for dp in scan_roots(|d| resid(d, sign), &grid) {
                let p_l = p_v + dp;
                let (v_l, z) = (self.liq.v(p_l), z_of(dp, sign));
                let lo = -self.vap.a(p_v) / v_v * (1.0 + 1e-12);
                let hi = self.liq.a(p_l) / v_l * (1.0 + 1e-12);
                if z >= lo && z <= hi {
                    let j = Jump { p_v, p_l, z, v_v, v_l };
                    if best.map_or(true, |b| j.z.abs() < b.z.abs()) {
                        best = Some(j);
                    }
                }
            }
        }
        best
    }

    /// Star pressures `(p_V*, p_L*)` of the vapor-left / liquid-right problem
    /// with phase transition.
    pub fn two_phase_pt(&self, wv: &PhaseState, wl: &PhaseState) -> Option<(f64, f64)> {
        let f = |p: f64| match self.jump(p) {
            Some(j) => self.vap.curve(p, wv.p) + self.liq.curve(j.p_l, wl.p) + j.z * j.jump_v() + wl.u - wv.u,
            None => f64::NAN,
        };
        let grid = geom(self.p_tilde * 1e-4, self.p_tilde, 240);
        let roots = scan_roots(f, &grid);
        let p = *roots.first()?;
        let j = self.jump(p)?;
        Some((p, j.p_l))
    }

    /// Common star pressure of the problem without phase transition.
    pub fn two_phase_no_pt(&self, wv: &PhaseState, wl: &PhaseState) -> Option<f64> {
        let f = |p: f64| self.vap.curve(p, wv.p) + self.liq.curve(p, wl.p) + wl.u - wv.u;
        let grid = geom(self.p_tilde * 1e-6, self.p_tilde, 4000);
        scan_roots(f, &grid).first().copied()
    }

    /// Vapor pressure of a nucleation solution.
    pub fn nucleation(&self, l: &PhaseState, r: &PhaseState) -> Option<f64> {
        let f = |p: f64| match self.jump(p) {
            Some(j) => self.vap.curve(p, l.p) + self.vap.curve(p, r.p) + 2.0 * j.z * j.jump_v() + r.u - l.u,
            None => f64::NAN,
        };
        let grid: Vec<f64> = (0..=200).map(|i| self.p0 + (self.p_tilde - self.p0) * i as f64 / 200.0).collect();
        scan_roots(f, &grid).first().copied()
    }

    /// Vapor pressure of a cavitation solution.
    pub fn cavitation(&self, l: &PhaseState, r: &PhaseState) -> Option<f64> {
        let f = |p: f64| match self.jump(p) {
            Some(j) => self.liq.curve(j.p_l, l.p) + self.liq.curve(j.p_l, r.p) + 2.0 * j.z * j.jump_v() + r.u - l.u,
            None => f64::NAN,
        };
        let grid = geom(self.p0 * 1e-8, self.p0, 400);
        scan_roots(f, &grid).last().copied()
    }
}

pub fn water(t: f64, nu: Option<f64>) -> FluidPair {
    SaturationTable::bundled_water().water_pair(t, nu).unwrap()
}

pub fn vapor(pair: &FluidPair, p: f64, u: f64) -> PhaseState {
    PhaseState::from_pressure(&pair.vapor, Phase::Vapor, p, u).unwrap()
}

pub fn liquid(pair: &FluidPair, p: f64, u: f64) -> PhaseState {
    PhaseState::from_pressure(&pair.liquid, Phase::Liquid, p, u).unwrap()
}

/// Small deterministic generator for the randomized suites.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed ^ 0x9e37_79b9_7f4a_7c15)
    }

    pub fn unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Random vapor-left / liquid-right problem on a water pair.
pub struct TwoPhaseCase {
    pub pair: FluidPair,
    pub problem: RiemannProblem,
}

pub fn random_two_phase(rng: &mut Lcg) -> TwoPhaseCase {
    let t = rng.range(300.0, 600.0);
    let nu = if rng.unit() < 0.5 { None } else { Some(7.0) };
    let pair = water(t, nu);
    let p_v = pair.p0 * rng.range(0.2, pair.p_tilde / pair.p0);
    let p_l = pair.p0 * rng.range(0.3, 3.0);
    let a_v = pair.vapor.sound_speed(p_v).unwrap();
    let u_v = a_v * rng.range(-0.3, 0.3);
    let u_l = a_v * rng.range(-0.3, 0.3);
    let problem = RiemannProblem::new(vapor(&pair, p_v, u_v), liquid(&pair, p_l, u_l));
    TwoPhaseCase { pair, problem }
}
