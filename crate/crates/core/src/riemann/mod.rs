//! Riemann problems for a liquid-vapor pair.
//!
//! Supported configurations:
//!
//! | left | right | solution |
//! |------|-------|----------|
//! | vapor | vapor | single phase, or nucleation of a liquid core |
//! | liquid | liquid | single phase, or cavitation of a vapor core |
//! | vapor | liquid | classical wave, phase boundary, classical wave |
//! | liquid | vapor | mirror image of the above |

mod sample;
mod solvers;
mod verify;

pub use sample::{sample_solution, Sample};
pub use solvers::{
    cavitation_function, nucleation_function, single_phase_function, solve_cavitation, solve_nucleation,
    solve_single_phase, solve_two_phase_no_pt, solve_two_phase_pt, two_phase_function, two_phase_no_pt_function,
};
pub use verify::{verify_solution, ResidualReport, WaveResidual};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{EosError, FluidPair};
use crate::interface::{InterfaceError, InterfaceSolution, Orientation};
use crate::numerics::NumericsError;
use crate::waves::{ClassicalWave, Phase, PhaseState, WaveError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiemannError {
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Interface(#[from] InterfaceError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    /// The single-phase root lies outside the admissible pressure range.
    /// Not a failure as such: it is the trigger for nucleation or cavitation.
    #[error("single-phase {phase:?} solution leaves its pressure range: f({boundary}) = {f_at_boundary}")]
    NoSolutionInBounds { phase: Phase, boundary: f64, f_at_boundary: f64 },
    #[error("{scenario:?} problem is not solvable: {reason}")]
    NotSolvable { scenario: Scenario, reason: String, f_at_boundary: f64 },
    #[error("root p* = {p_star} exists but gives no wave pattern of type (b): {reason}")]
    NoBTypeSolution { p_star: f64, z: f64, reason: String },
    #[error("excluded wave pattern: {0}")]
    ExcludedPattern(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Auto,
    TwoPhase,
    SinglePhaseVapor,
    SinglePhaseLiquid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    SinglePhase,
    /// classical wave, phase boundary, classical wave
    B,
    /// classical wave, two phase boundaries around a new phase, classical wave
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SinglePhaseVapor,
    SinglePhaseLiquid,
    TwoPhaseNoTransition,
    TwoPhaseTransition,
    Nucleation,
    Cavitation,
}

impl Scenario {
    pub fn pattern(self) -> Pattern {
        match self {
            Self::SinglePhaseVapor | Self::SinglePhaseLiquid => Pattern::SinglePhase,
            Self::TwoPhaseNoTransition | Self::TwoPhaseTransition => Pattern::B,
            Self::Nucleation | Self::Cavitation => Pattern::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannProblem {
    pub left: PhaseState,
    pub right: PhaseState,
    pub phase_transition: bool,
    pub mode: Mode,
    /// Relative tolerance of the outer pressure solve.
    pub rel_tol: f64,
}

pub const DEFAULT_REL_TOL: f64 = 1e-13;

impl RiemannProblem {
    pub fn new(left: PhaseState, right: PhaseState) -> Self {
        Self { left, right, phase_transition: true, mode: Mode::Auto, rel_tol: DEFAULT_REL_TOL }
    }

    pub fn with_phase_transition(self, on: bool) -> Self {
        Self { phase_transition: on, ..self }
    }

    pub fn with_mode(self, mode: Mode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    /// Checks that the states are consistent with the pair and the mode.
    pub fn validate(&self, pair: &FluidPair) -> Result<(), RiemannError> {
        for s in [&self.left, &self.right] {
            let eos = pair.eos(s.phase);
            if !(s.rho > 0.0 && s.rho.is_finite() && s.u.is_finite()) {
                return Err(RiemannError::InvalidProblem(format!("bad state {s:?}")));
            }
            let p = eos.pressure_from_density(s.rho)?;
            if (p - s.p).abs() > 1e-9 * p.abs().max(pair.p0) {
                return Err(RiemannError::InvalidProblem(format!(
                    "state pressure {} does not match density {} (EOS gives {p})",
                    s.p, s.rho
                )));
            }
            match s.phase {
                Phase::Vapor if s.p > pair.p_tilde * (1.0 + 1e-12) => {
                    return Err(RiemannError::InvalidProblem(format!(
                        "vapor pressure {} exceeds the maximum vapor pressure {}",
                        s.p, pair.p_tilde
                    )))
                }
                Phase::Liquid if s.p < pair.p_min => {
                    return Err(RiemannError::InvalidProblem(format!(
                        "liquid pressure {} is below p_min = {}",
                        s.p, pair.p_min
                    )))
                }
                _ => {}
            }
        }
        let phases = (self.left.phase, self.right.phase);
        let ok = match self.mode {
            Mode::Auto => true,
            Mode::TwoPhase => phases.0 != phases.1,
            Mode::SinglePhaseVapor => phases == (Phase::Vapor, Phase::Vapor),
            Mode::SinglePhaseLiquid => phases == (Phase::Liquid, Phase::Liquid),
        };
        if !ok {
            return Err(RiemannError::InvalidProblem(format!("mode {:?} does not match phases {phases:?}", self.mode)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(RiemannError::InvalidProblem("rel_tol must be positive".into()));
        }
        Ok(())
    }

    /// Reflection `x → -x`: sides swap and velocities change sign.
    pub fn mirrored(&self) -> Self {
        Self { left: self.right.mirrored(), right: self.left.mirrored(), ..*self }
    }
}

/// A phase boundary with the states on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseBoundary {
    pub orientation: Orientation,
    pub left: PhaseState,
    pub right: PhaseState,
    pub speed: f64,
    /// `-ρ(u - w)`, the same on both sides.
    pub mass_flux: f64,
    pub interface: InterfaceSolution,
}

impl PhaseBoundary {
    fn mirrored(&self) -> Self {
        Self {
            orientation: self.orientation.flipped(),
            left: self.right.mirrored(),
            right: self.left.mirrored(),
            speed: -self.speed,
            mass_flux: -self.mass_flux,
            interface: self.interface,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Wave {
    Classical(ClassicalWave),
    PhaseBoundary(PhaseBoundary),
}

impl Wave {
    pub fn xi_range(&self) -> (f64, f64) {
        match self {
            Self::Classical(w) => (w.xi_lo, w.xi_hi),
            Self::PhaseBoundary(b) => (b.speed, b.speed),
        }
    }

    pub fn left_state(&self) -> PhaseState {
        match self {
            Self::Classical(w) => w.left_state(),
            Self::PhaseBoundary(b) => b.left,
        }
    }

    pub fn right_state(&self) -> PhaseState {
        match self {
            Self::Classical(w) => w.right_state(),
            Self::PhaseBoundary(b) => b.right,
        }
    }

    pub fn is_discontinuity(&self) -> bool {
        match self {
            Self::Classical(w) => w.is_shock(),
            Self::PhaseBoundary(_) => true,
        }
    }

    fn mirrored(&self) -> Self {
        match self {
            Self::Classical(w) => Self::Classical(w.mirrored()),
            Self::PhaseBoundary(b) => Self::PhaseBoundary(b.mirrored()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution {
    pub scenario: Scenario,
    pub pattern: Pattern,
    /// Waves ordered left to right.
    pub waves: Vec<Wave>,
    /// `states[i]` lies left of `waves[i]`; the last entry is the right state.
    pub states: Vec<PhaseState>,
    pub residuals: ResidualReport,
}

impl RiemannSolution {
    pub(crate) fn assemble(pair: &FluidPair, scenario: Scenario, waves: Vec<Wave>) -> Result<Self, RiemannError> {
        let mut states = Vec::with_capacity(waves.len() + 1);
        states.push(waves[0].left_state());
        states.extend(waves.iter().map(Wave::right_state));
        let mut sol = Self {
            scenario,
            pattern: scenario.pattern(),
            waves,
            states,
            residuals: ResidualReport::default(),
        };
        sol.check_pattern()?;
        sol.residuals = verify_solution(pair, &sol);
        Ok(sol)
    }

    fn check_pattern(&self) -> Result<(), RiemannError> {
        let boundaries = self.waves.iter().filter(|w| matches!(w, Wave::PhaseBoundary(_))).count();
        let expected = match self.pattern {
            Pattern::SinglePhase => 0,
            Pattern::B => 1,
            Pattern::E => 2,
        };
        if boundaries != expected || self.waves.len() != expected + 2 {
            return Err(RiemannError::ExcludedPattern(format!(
                "{:?} with {} waves and {boundaries} phase boundaries",
                self.pattern,
                self.waves.len()
            )));
        }
        let slack = |x: f64| 1e-12 * x.abs().max(1.0);
        for pair in self.waves.windows(2) {
            let (_, hi) = pair[0].xi_range();
            let (lo, _) = pair[1].xi_range();
            if hi > lo + slack(hi) {
                return Err(RiemannError::ExcludedPattern(format!("wave speeds out of order: {hi} > {lo}")));
            }
        }
        Ok(())
    }

    /// Interior states, excluding the two initial states.
    pub fn star_states(&self) -> &[PhaseState] {
        &self.states[1..self.states.len() - 1]
    }

    pub fn phase_boundaries(&self) -> impl Iterator<Item = &PhaseBoundary> {
        self.waves.iter().filter_map(|w| match w {
            Wave::PhaseBoundary(b) => Some(b),
            _ => None,
        })
    }

    pub fn classical_waves(&self) -> impl Iterator<Item = &ClassicalWave> {
        self.waves.iter().filter_map(|w| match w {
            Wave::Classical(c) => Some(c),
            _ => None,
        })
    }

    /// Vapor-side pressure of the first star state that is vapor, if any.
    pub fn star_pressure(&self, phase: Phase) -> Option<f64> {
        self.star_states().iter().find(|s| s.phase == phase).map(|s| s.p)
    }

    pub fn mirrored(&self) -> Self {
        let waves: Vec<Wave> = self.waves.iter().rev().map(Wave::mirrored).collect();
        let states: Vec<PhaseState> = self.states.iter().rev().map(|s| s.mirrored()).collect();
        Self { waves, states, ..self.clone() }
    }
}

/// Solves the problem, dispatching on the phases of the two states.
pub fn solve(pair: &FluidPair, problem: &RiemannProblem) -> Result<RiemannSolution, RiemannError> {
    problem.validate(pair)?;
    let (l, r) = (problem.left, problem.right);
    let tol = problem.rel_tol;
    match (l.phase, r.phase) {
        (Phase::Vapor, Phase::Vapor) => match solve_single_phase(pair, &l, &r, tol) {
            Err(RiemannError::NoSolutionInBounds { .. })
                if problem.mode == Mode::Auto && problem.phase_transition =>
            {
                solve_nucleation(pair, &l, &r, tol)
            }
            other => other,
        },
        (Phase::Liquid, Phase::Liquid) => match solve_single_phase(pair, &l, &r, tol) {
            Err(RiemannError::NoSolutionInBounds { .. })
                if problem.mode == Mode::Auto && problem.phase_transition =>
            {
                solve_cavitation(pair, &l, &r, tol)
            }
            other => other,
        },
        (Phase::Vapor, Phase::Liquid) => {
            if problem.phase_transition {
                solve_two_phase_pt(pair, &l, &r, tol)
            } else {
                solve_two_phase_no_pt(pair, &l, &r, tol)
            }
        }
        (Phase::Liquid, Phase::Vapor) => {
            let m = problem.mirrored();
            let sol = solve(pair, &m)?;
            let mut back = sol.mirrored();
            back.residuals = verify_solution(pair, &back);
            Ok(back)
        }
    }
}
