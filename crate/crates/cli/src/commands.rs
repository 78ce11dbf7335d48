use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use clap::{Args, ValueEnum};
use phasefan_core::config::{read_pair_spec, ProblemConfig, SampleGrid};
use phasefan_core::riemann::{sample_solution, RiemannError};
use phasefan_core::sweep::SweepError;
use phasefan_core::{run_sweep, solve, FluidPair, LiquidFamily, RiemannProblem, RiemannSolution, SaturationTable, SweepConfig};

use crate::output;
use crate::{Failure, Format};

pub struct Context {
    pub saturation_table: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

impl Context {
    fn table(&self) -> Result<SaturationTable, Failure> {
        match &self.saturation_table {
            Some(p) => SaturationTable::from_path(p)
                .with_context(|| format!("loading saturation table {}", p.display()))
                .map_err(usage),
            None => Ok(SaturationTable::bundled_water()),
        }
    }

    /// Writes to `--out`, else to `fallback`, else to stdout.
    fn emit(&self, text: &str, fallback: Option<&Path>) -> Result<(), Failure> {
        match self.out.as_deref().or(fallback) {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(usage),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn validate(ctx: &Context, config: &Path) -> Result<(), Failure> {
    let table = ctx.table()?;
    let spec = read_pair_spec(config).map_err(usage)?;
    let pair = spec.build(&table).map_err(usage)?;
    let text = match ctx.format {
        Some(Format::Json) => output::audit_json(&pair),
        Some(Format::Csv) => output::audit_csv(&pair),
        None => output::audit_table(&pair),
    };
    ctx.emit(&text, None)?;
    if pair.report.passed() {
        Ok(())
    } else {
        let names: Vec<_> = pair.report.failed_checks().map(|c| c.name.as_str()).collect();
        Err(Failure::Domain(anyhow!("assumption audit failed: {}", names.join(", "))))
    }
}

fn load_problem(ctx: &Context, config: &Path) -> Result<(ProblemConfig, FluidPair, RiemannProblem), Failure> {
    let table = ctx.table()?;
    let cfg = ProblemConfig::from_path(config).map_err(usage)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let (pair, mut problem) = cfg.build(&table, base).map_err(usage)?;
    if let Some(tol) = ctx.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(usage(anyhow!("--tol must lie in (0, 1), got {tol}")));
        }
        problem = problem.with_rel_tol(tol);
    }
    problem.validate(&pair).map_err(usage)?;
    Ok((cfg, pair, problem))
}

fn solve_problem(pair: &FluidPair, problem: &RiemannProblem) -> Result<RiemannSolution, Failure> {
    solve(pair, problem).map_err(|e| match e {
        RiemannError::InvalidProblem(_) => usage(e),
        e => Failure::Domain(e.into()),
    })
}

pub fn solve_cmd(ctx: &Context, config: &Path) -> Result<(), Failure> {
    if ctx.format == Some(Format::Csv) {
        return Err(usage(anyhow!("`solve` writes a JSON summary; use `sample` for CSV profiles")));
    }
    let (cfg, pair, problem) = load_problem(ctx, config)?;
    let sol = solve_problem(&pair, &problem)?;
    if let (Some(path), Some(grid)) = (&cfg.output.profile, &cfg.grid) {
        let samples = sample_solution(&pair, &sol, &grid.points()).map_err(|e| Failure::Domain(e.into()))?;
        fs::write(path, output::profile_csv(&samples))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(usage)?;
    }
    ctx.emit(&output::summary_json(&pair, &sol), cfg.output.summary.as_deref())
}

/// Covers every wave with a quarter of the fan width to spare on both sides.
fn default_grid(sol: &RiemannSolution) -> SampleGrid {
    let lo = sol.waves.iter().map(|w| w.xi_range().0).fold(f64::INFINITY, f64::min);
    let hi = sol.waves.iter().map(|w| w.xi_range().1).fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.25 * (hi - lo).max(1.0);
    SampleGrid { xi_min: lo - pad, xi_max: hi + pad, count: 401 }
}

pub fn sample(ctx: &Context, config: &Path) -> Result<(), Failure> {
    let (cfg, pair, problem) = load_problem(ctx, config)?;
    let sol = solve_problem(&pair, &problem)?;
    let grid = cfg.grid.unwrap_or_else(|| default_grid(&sol));
    let samples = sample_solution(&pair, &sol, &grid.points()).map_err(|e| Failure::Domain(e.into()))?;
    let text = match ctx.format {
        Some(Format::Json) => output::to_json(&samples),
        _ => output::profile_csv(&samples),
    };
    ctx.emit(&text, cfg.output.profile.as_deref())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiquidArg {
    Linear,
    Nonlinear,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep config (JSON with t_start, t_end, t_step, liquid); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    t_step: Option<f64>,
    #[arg(long, value_enum)]
    liquid: Option<LiquidArg>,
    /// Exponent of the nonlinear Tait law.
    #[arg(long, default_value_t = 7.0)]
    nu: f64,
}

impl SweepArgs {
    fn resolve(&self) -> Result<SweepConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).map_err(usage)?
            }
            None => SweepConfig::new(273.15, 636.165, 1.0, LiquidFamily::LinearTait),
        };
        c.t_start = self.t_start.unwrap_or(c.t_start);
        c.t_end = self.t_end.unwrap_or(c.t_end);
        c.t_step = self.t_step.unwrap_or(c.t_step);
        match self.liquid {
            Some(LiquidArg::Linear) => c.liquid = LiquidFamily::LinearTait,
            Some(LiquidArg::Nonlinear) => c.liquid = LiquidFamily::NonlinearTait { nu: self.nu },
            None => {}
        }
        Ok(c)
    }
}

pub fn sweep(ctx: &Context, args: &SweepArgs) -> Result<(), Failure> {
    let table = ctx.table()?;
    let config = args.resolve()?;
    let result = run_sweep(&table, &config).map_err(|e| match e {
        SweepError::Point { .. } => Failure::Domain(e.into()),
        e => usage(e),
    })?;
    if !result.failed.is_empty() {
        eprintln!("warning: assumption audit failed at T = {:?} K", result.failed);
    }
    let text = match ctx.format {
        Some(Format::Json) => output::to_json(&result),
        _ => output::sweep_csv(&result),
    };
    ctx.emit(&text, None)
}
