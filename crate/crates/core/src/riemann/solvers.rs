use super::{PhaseBoundary, RiemannError, RiemannSolution, Scenario, Wave};
use crate::eos::{EosModel, FluidPair};
use crate::interface::{solve_phi, velocity_across, InterfaceSolution, Orientation};
use crate::numerics::{find_root_bracketed, Bracket, Tolerance};
use crate::waves::{wave_curve_f, ClassicalWave, Family, Phase, PhaseState, WaveKind};

/// Halvings tried when looking for a lower bracket end towards `p = 0`.
const MAX_HALVINGS: usize = 2000;

fn tolerance(rel: f64, scale: f64) -> Tolerance {
    Tolerance::new(rel, 1e-15 * scale.abs(), 300)
}

/// Walks `p` down from `hi` by halving until `f(p) < 0`.
fn bracket_towards_zero<F: FnMut(f64) -> f64>(
    mut f: F,
    hi: f64,
    f_hi: f64,
    floor: f64,
) -> Option<Bracket> {
    let (mut upper, mut f_upper) = (hi, f_hi);
    for _ in 0..MAX_HALVINGS {
        let p = 0.5 * upper;
        if !(p > floor) {
            return None;
        }
        let fp = f(p);
        if fp.is_nan() {
            return None;
        }
        if fp <= 0.0 {
            return Bracket::from_values(p, upper, fp, f_upper).ok();
        }
        upper = p;
        f_upper = fp;
    }
    None
}

/// Walks `p` up from `lo` with doubling steps until `f(p) > 0`.
fn bracket_upwards<F: FnMut(f64) -> f64>(mut f: F, lo: f64, f_lo: f64, step: f64) -> Option<Bracket> {
    let (mut lower, mut f_lower, mut step) = (lo, f_lo, step);
    for _ in 0..MAX_HALVINGS {
        let p = lower + step;
        let fp = f(p);
        if fp.is_nan() || !p.is_finite() {
            return None;
        }
        if fp >= 0.0 {
            return Bracket::from_values(lower, p, f_lower, fp).ok();
        }
        lower = p;
        f_lower = fp;
        step *= 2.0;
    }
    None
}

/// Classical wave to `p_star` with the downstream velocity pinned to `u_star`.
fn connect_to(
    eos: &EosModel,
    family: Family,
    upstream: PhaseState,
    p_star: f64,
    u_star: f64,
) -> Result<ClassicalWave, RiemannError> {
    let mut w = ClassicalWave::connect(eos, family, upstream, p_star)?;
    w.downstream.u = u_star;
    if w.kind == WaveKind::Rarefaction {
        let a = eos.sound_speed(p_star)?;
        match family {
            Family::Left => w.xi_hi = u_star - a,
            Family::Right => w.xi_lo = u_star + a,
        }
    }
    Ok(w)
}

fn boundary(
    sol: &InterfaceSolution,
    orientation: Orientation,
    left: PhaseState,
    pair: &FluidPair,
) -> Result<PhaseBoundary, RiemannError> {
    let right_phase = left.phase.other();
    let u_right = velocity_across(sol, left.phase, left.u, orientation);
    let right = PhaseState {
        phase: right_phase,
        rho: 1.0 / sol.volume(right_phase),
        u: u_right,
        p: sol.pressure(right_phase),
    };
    debug_assert!((pair.eos(right_phase).volume(right.p).unwrap_or(f64::NAN) - sol.volume(right_phase)).abs()
        <= 1e-12 * sol.volume(right_phase));
    let z = sol.flux(orientation);
    Ok(PhaseBoundary { orientation, left, right, speed: left.u + left.v() * z, mass_flux: z, interface: *sol })
}

/// The boundary has to sit between the two classical waves.
fn check_between(left: &ClassicalWave, b: &PhaseBoundary, right: &ClassicalWave, p_star: f64) -> Result<(), RiemannError> {
    let slack = 1e-12 * b.speed.abs().max(1.0);
    if left.xi_hi > b.speed + slack {
        let reason = match left.mass_flux {
            Some(q) => format!("boundary speed {} behind left shock {} (z = {}, Q = {q})", b.speed, left.xi_hi, b.mass_flux),
            None => format!("boundary speed {} inside left fan ending at {}", b.speed, left.xi_hi),
        };
        return Err(RiemannError::NoBTypeSolution { p_star, z: b.mass_flux, reason });
    }
    if right.xi_lo < b.speed - slack {
        let reason = format!("boundary speed {} ahead of right wave starting at {}", b.speed, right.xi_lo);
        return Err(RiemannError::NoBTypeSolution { p_star, z: b.mass_flux, reason });
    }
    Ok(())
}

fn same_phase(l: &PhaseState, r: &PhaseState, phase: Option<Phase>) -> Result<(), RiemannError> {
    let ok = l.phase == r.phase && phase.map_or(true, |p| p == l.phase);
    if ok {
        Ok(())
    } else {
        Err(RiemannError::InvalidProblem(format!("expected matching phases, got {:?} and {:?}", l.phase, r.phase)))
    }
}

/// `f(p) = f_L(p) + f_R(p) + u_R - u_L` for two states of one phase.
pub fn single_phase_function(pair: &FluidPair, left: &PhaseState, right: &PhaseState, p: f64) -> Result<f64, RiemannError> {
    let eos = pair.eos(left.phase);
    Ok(wave_curve_f(eos, p, left.p)? + wave_curve_f(eos, p, right.p)? + right.u - left.u)
}

/// Single-phase solution, with `p*` restricted to `(0, p̃]` for vapor and
/// `[p_min, ∞)` for liquid.
pub fn solve_single_phase(
    pair: &FluidPair,
    left: &PhaseState,
    right: &PhaseState,
    rel_tol: f64,
) -> Result<RiemannSolution, RiemannError> {
    same_phase(left, right, None)?;
    let phase = left.phase;
    let eos = pair.eos(phase);
    let f = |p: f64| single_phase_function(pair, left, right, p).unwrap_or(f64::NAN);
    let scale = left.p.abs().max(right.p.abs()).max(pair.p0);

    let p_star = if f(left.p) == 0.0 {
        left.p
    } else {
        let bracket = match phase {
            Phase::Vapor => {
                let f_hi = f(pair.p_tilde);
                if f_hi < 0.0 {
                    return Err(RiemannError::NoSolutionInBounds { phase, boundary: pair.p_tilde, f_at_boundary: f_hi });
                }
                let floor = eos.domain().0.max(0.0);
                bracket_towards_zero(f, pair.p_tilde, f_hi, floor)
            }
            Phase::Liquid => {
                let f_lo = f(pair.p_min);
                if f_lo > 0.0 {
                    return Err(RiemannError::NoSolutionInBounds { phase, boundary: pair.p_min, f_at_boundary: f_lo });
                }
                bracket_upwards(f, pair.p_min, f_lo, scale)
            }
        };
        let bracket = bracket.ok_or_else(|| RiemannError::NotSolvable {
            scenario: scenario_for(phase),
            reason: "no sign change of the wave-curve function within the EOS domain".into(),
            f_at_boundary: f64::NAN,
        })?;
        find_root_bracketed(f, bracket, tolerance(rel_tol, scale))?
    };

    let fl = wave_curve_f(eos, p_star, left.p)?;
    let fr = wave_curve_f(eos, p_star, right.p)?;
    let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    let lw = connect_to(eos, Family::Left, *left, p_star, u_star)?;
    let rw = connect_to(eos, Family::Right, *right, p_star, u_star)?;
    RiemannSolution::assemble(pair, scenario_for(phase), vec![Wave::Classical(lw), Wave::Classical(rw)])
}

fn scenario_for(phase: Phase) -> Scenario {
    match phase {
        Phase::Vapor => Scenario::SinglePhaseVapor,
        Phase::Liquid => Scenario::SinglePhaseLiquid,
    }
}

/// `f_V(p) + f_L(p) + u_L - u_V` with a common pressure and no mass flux.
pub fn two_phase_no_pt_function(pair: &FluidPair, wv: &PhaseState, wl: &PhaseState, p: f64) -> Result<f64, RiemannError> {
    Ok(wave_curve_f(&pair.vapor, p, wv.p)? + wave_curve_f(&pair.liquid, p, wl.p)? + wl.u - wv.u)
}

/// Vapor on the left, liquid on the right, the boundary a contact (`z = 0`).
pub fn solve_two_phase_no_pt(
    pair: &FluidPair,
    wv: &PhaseState,
    wl: &PhaseState,
    rel_tol: f64,
) -> Result<RiemannSolution, RiemannError> {
    check_two_phase(wv, wl)?;
    let scenario = Scenario::TwoPhaseNoTransition;
    let f = |p: f64| two_phase_no_pt_function(pair, wv, wl, p).unwrap_or(f64::NAN);
    let f_hi = f(pair.p_tilde);
    if !(f_hi >= 0.0) {
        return Err(RiemannError::NotSolvable {
            scenario,
            reason: format!("f(p_tilde) = {f_hi} < 0"),
            f_at_boundary: f_hi,
        });
    }
    let p_star = if f_hi == 0.0 {
        pair.p_tilde
    } else {
        let floor = pair.vapor.domain().0.max(pair.liquid.domain().0).max(0.0);
        let b = bracket_towards_zero(f, pair.p_tilde, f_hi, floor).ok_or_else(|| RiemannError::NotSolvable {
            scenario,
            reason: "no sign change above the lower pressure limit".into(),
            f_at_boundary: f_hi,
        })?;
        if f(wv.p) == 0.0 {
            wv.p
        } else {
            find_root_bracketed(f, b, tolerance(rel_tol, pair.p0))?
        }
    };

    let fv = wave_curve_f(&pair.vapor, p_star, wv.p)?;
    let fl = wave_curve_f(&pair.liquid, p_star, wl.p)?;
    let u_star = 0.5 * (wv.u + wl.u) + 0.5 * (fl - fv);
    let lw = connect_to(&pair.vapor, Family::Left, *wv, p_star, u_star)?;
    let rw = connect_to(&pair.liquid, Family::Right, *wl, p_star, u_star)?;
    let (vv, vl) = (pair.vapor.volume(p_star)?, pair.liquid.volume(p_star)?);
    let (av, al) = (pair.vapor.sound_speed(p_star)?, pair.liquid.sound_speed(p_star)?);
    let contact = InterfaceSolution {
        p_v: p_star,
        p_l: p_star,
        z: 0.0,
        v_v: vv,
        v_l: vl,
        z_min: -av / vv,
        z_max: al / vl,
        z_sharp: (av * al / (vv * vl)).sqrt(),
        admissible: true,
    };
    let b = boundary(&contact, Orientation::VaporLeft, lw.downstream, pair)?;
    check_between(&lw, &b, &rw, p_star)?;
    RiemannSolution::assemble(pair, scenario, vec![Wave::Classical(lw), Wave::PhaseBoundary(b), Wave::Classical(rw)])
}

fn check_two_phase(wv: &PhaseState, wl: &PhaseState) -> Result<(), RiemannError> {
    if wv.phase == Phase::Vapor && wl.phase == Phase::Liquid {
        Ok(())
    } else {
        Err(RiemannError::InvalidProblem("two-phase solvers expect vapor left and liquid right".into()))
    }
}

/// `f_V(p) + f_L(φ(p)) + z [[v]] + u_L - u_V` at vapor interface pressure `p`.
pub fn two_phase_function(
    pair: &FluidPair,
    wv: &PhaseState,
    wl: &PhaseState,
    p: f64,
) -> Result<(f64, InterfaceSolution), RiemannError> {
    let sol = solve_phi(pair, p)?;
    let val = wave_curve_f(&pair.vapor, p, wv.p)? + wave_curve_f(&pair.liquid, sol.p_l, wl.p)?
        + sol.z * sol.jump_v()
        + wl.u
        - wv.u;
    Ok((val, sol))
}

/// Vapor on the left, liquid on the right, mass exchange through the kinetic
/// relation.
pub fn solve_two_phase_pt(
    pair: &FluidPair,
    wv: &PhaseState,
    wl: &PhaseState,
    rel_tol: f64,
) -> Result<RiemannSolution, RiemannError> {
    check_two_phase(wv, wl)?;
    let scenario = Scenario::TwoPhaseTransition;
    let f = |p: f64| two_phase_function(pair, wv, wl, p).map(|x| x.0).unwrap_or(f64::NAN);
    let f_hi = f(pair.p_tilde);
    if !(f_hi >= 0.0) {
        return Err(RiemannError::NotSolvable {
            scenario,
            reason: format!("f_z(p_tilde) = {f_hi} < 0"),
            f_at_boundary: f_hi,
        });
    }
    let p_star = if f_hi == 0.0 {
        pair.p_tilde
    } else if f(wv.p) == 0.0 {
        wv.p
    } else {
        let b = bracket_towards_zero(f, pair.p_tilde, f_hi, 0.0).ok_or_else(|| RiemannError::NotSolvable {
            scenario,
            reason: "f_z has no sign change above p = 0".into(),
            f_at_boundary: f_hi,
        })?;
        find_root_bracketed(f, b, tolerance(rel_tol, pair.p0))?
    };

    let sol = solve_phi(pair, p_star)?;
    let u_v = wv.u - wave_curve_f(&pair.vapor, p_star, wv.p)?;
    let lw = connect_to(&pair.vapor, Family::Left, *wv, p_star, u_v)?;
    let b = boundary(&sol, Orientation::VaporLeft, lw.downstream, pair)?;
    let rw = connect_to(&pair.liquid, Family::Right, *wl, sol.p_l, b.right.u)?;
    check_between(&lw, &b, &rw, p_star)?;
    RiemannSolution::assemble(pair, scenario, vec![Wave::Classical(lw), Wave::PhaseBoundary(b), Wave::Classical(rw)])
}

/// `f_-(p) + f_+(p) + 2 z [[v]] + u_+ - u_-` for a liquid core in vapor.
pub fn nucleation_function(
    pair: &FluidPair,
    left: &PhaseState,
    right: &PhaseState,
    p: f64,
) -> Result<(f64, InterfaceSolution), RiemannError> {
    let sol = solve_phi(pair, p)?;
    let val = wave_curve_f(&pair.vapor, p, left.p)? + wave_curve_f(&pair.vapor, p, right.p)?
        + 2.0 * sol.z * sol.jump_v()
        + right.u
        - left.u;
    Ok((val, sol))
}

/// Compressed vapor that cannot stay single phase: a liquid core appears.
pub fn solve_nucleation(
    pair: &FluidPair,
    left: &PhaseState,
    right: &PhaseState,
    rel_tol: f64,
) -> Result<RiemannSolution, RiemannError> {
    same_phase(left, right, Some(Phase::Vapor))?;
    let scenario = Scenario::Nucleation;
    let f = |p: f64| nucleation_function(pair, left, right, p).map(|x| x.0).unwrap_or(f64::NAN);
    let f_lo = f(pair.p0);
    if !(f_lo < 0.0) {
        return Err(RiemannError::NotSolvable {
            scenario,
            reason: format!("nucleation criterion not met: f(p0) = {f_lo} >= 0"),
            f_at_boundary: f_lo,
        });
    }
    let f_hi = f(pair.p_tilde);
    if !(f_hi >= 0.0) {
        return Err(RiemannError::NotSolvable {
            scenario,
            reason: format!("f_z(p_tilde) = {f_hi} < 0"),
            f_at_boundary: f_hi,
        });
    }
    let b = Bracket::from_values(pair.p0, pair.p_tilde, f_lo, f_hi)?;
    let p_star = find_root_bracketed(f, b, tolerance(rel_tol, pair.p0))?;
    let sol = solve_phi(pair, p_star)?;
    let fm = wave_curve_f(&pair.vapor, p_star, left.p)?;
    let fp = wave_curve_f(&pair.vapor, p_star, right.p)?;
    let u_l = 0.5 * (left.u + right.u) + 0.5 * (fp - fm);
    let jz = sol.z * sol.jump_v();
    let lw = connect_to(&pair.vapor, Family::Left, *left, p_star, u_l + jz)?;
    let b1 = boundary(&sol, Orientation::VaporLeft, lw.downstream, pair)?;
    let core = PhaseState { u: u_l, ..b1.right };
    let b1 = PhaseBoundary { right: core, ..b1 };
    let b2 = boundary(&sol, Orientation::LiquidLeft, core, pair)?;
    let rw = connect_to(&pair.vapor, Family::Right, *right, p_star, b2.right.u)?;
    check_between(&lw, &b1, &rw, p_star)?;
    check_between(&lw, &b2, &rw, p_star)?;
    RiemannSolution::assemble(
        pair,
        scenario,
        vec![Wave::Classical(lw), Wave::PhaseBoundary(b1), Wave::PhaseBoundary(b2), Wave::Classical(rw)],
    )
}

/// `f_-(φ(p)) + f_+(φ(p)) + 2 z [[v]] + u_+ - u_-` for a vapor core in liquid.
pub fn cavitation_function(
    pair: &FluidPair,
    left: &PhaseState,
    right: &PhaseState,
    p: f64,
) -> Result<(f64, InterfaceSolution), RiemannError> {
    let sol = solve_phi(pair, p)?;
    let val = wave_curve_f(&pair.liquid, sol.p_l, left.p)? + wave_curve_f(&pair.liquid, sol.p_l, right.p)?
        + 2.0 * sol.z * sol.jump_v()
        + right.u
        - left.u;
    Ok((val, sol))
}

/// Expanded liquid that cannot stay single phase: a vapor core appears.
pub fn solve_cavitation(
    pair: &FluidPair,
    left: &PhaseState,
    right: &PhaseState,
    rel_tol: f64,
) -> Result<RiemannSolution, RiemannError> {
    same_phase(left, right, Some(Phase::Liquid))?;
    let scenario = Scenario::Cavitation;
    let f = |p: f64| cavitation_function(pair, left, right, p).map(|x| x.0).unwrap_or(f64::NAN);
    let f_hi = f(pair.p0);
    if !(f_hi > 0.0) {
        return Err(RiemannError::NotSolvable {
            scenario,
            reason: format!("cavitation criterion not met: f(p0) = {f_hi} <= 0"),
            f_at_boundary: f_hi,
        });
    }
    let b = bracket_towards_zero(f, pair.p0, f_hi, 0.0).ok_or_else(|| RiemannError::NotSolvable {
        scenario,
        reason: "f_z has no sign change above p = 0".into(),
        f_at_boundary: f_hi,
    })?;
    let p_star = find_root_bracketed(f, b, tolerance(rel_tol, pair.p0))?;
    let sol = solve_phi(pair, p_star)?;
    let fm = wave_curve_f(&pair.liquid, sol.p_l, left.p)?;
    let fp = wave_curve_f(&pair.liquid, sol.p_l, right.p)?;
    let u_v = 0.5 * (left.u + right.u) + 0.5 * (fp - fm);
    let jz = sol.z * sol.jump_v();
    let lw = connect_to(&pair.liquid, Family::Left, *left, sol.p_l, u_v + jz)?;
    let b1 = boundary(&sol, Orientation::LiquidLeft, lw.downstream, pair)?;
    let core = PhaseState { u: u_v, ..b1.right };
    let b1 = PhaseBoundary { right: core, ..b1 };
    let b2 = boundary(&sol, Orientation::VaporLeft, core, pair)?;
    let rw = connect_to(&pair.liquid, Family::Right, *right, sol.p_l, b2.right.u)?;
    check_between(&lw, &b1, &rw, p_star)?;
    check_between(&lw, &b2, &rw, p_star)?;
    RiemannSolution::assemble(
        pair,
        scenario,
        vec![Wave::Classical(lw), Wave::PhaseBoundary(b1), Wave::PhaseBoundary(b2), Wave::Classical(rw)],
    )
}
