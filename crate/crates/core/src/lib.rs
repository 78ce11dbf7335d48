//! Exact Riemann solutions for isothermal liquid-vapor flow with a kinetic
//! phase boundary.

pub mod config;
pub mod eos;
pub mod interface;
pub mod numerics;
pub mod riemann;
pub mod saturation;
pub mod sweep;
pub mod waves;

pub use eos::{EosModel, FluidPair};
pub use interface::{solve_phi, InterfaceSolution, Orientation};
pub use riemann::{solve, Mode, RiemannError, RiemannProblem, RiemannSolution, Scenario};
pub use saturation::SaturationTable;
pub use waves::{Phase, PhaseState};
pub use sweep::{run_sweep, LiquidFamily, SweepConfig, SweepResult, SweepRow};
