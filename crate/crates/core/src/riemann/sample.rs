use serde::{Deserialize, Serialize};

use super::{RiemannError, RiemannSolution, Wave};
use crate::eos::FluidPair;
use crate::waves::{sample_rarefaction, Phase, WaveKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub xi: f64,
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub phase: Phase,
}

/// Evaluates the self-similar solution at each `ξ = x/t`. A discontinuity at
/// speed `W` belongs to the state on its right, so `ξ = W` returns the right
/// limit.
pub fn sample_solution(pair: &FluidPair, sol: &RiemannSolution, xis: &[f64]) -> Result<Vec<Sample>, RiemannError> {
    xis.iter().map(|&xi| sample_one(pair, sol, xi)).collect()
}

fn sample_one(pair: &FluidPair, sol: &RiemannSolution, xi: f64) -> Result<Sample, RiemannError> {
    for (i, wave) in sol.waves.iter().enumerate() {
        let (lo, hi) = wave.xi_range();
        if xi < lo {
            return Ok(from_state(xi, &sol.states[i]));
        }
        if let Wave::Classical(w) = wave {
            if w.kind == WaveKind::Rarefaction && xi < hi {
                let s = sample_rarefaction(pair.eos(w.upstream.phase), w, xi)?;
                return Ok(from_state(xi, &s));
            }
        }
    }
    Ok(from_state(xi, sol.states.last().expect("solution has states")))
}

fn from_state(xi: f64, s: &crate::waves::PhaseState) -> Sample {
    Sample { xi, rho: s.rho, u: s.u, p: s.p, phase: s.phase }
}
