//! Command-line front end: `solve`, `study` and `dump`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{HjError, Result};
use crate::problems::{make_problem, ProblemId, ProblemSpec, MIN_MESH};
use crate::report::{
    error_norms, error_norms_against, interpolate_phi, write_csv_report, write_delta_csv,
    write_field_csv, write_table_csv, ConvergenceTable, MeshResult,
};
use crate::sweeper::{solve, Approach, SolutionField, SolverConfig, SweepReport};

pub const OUT_ENV: &str = "HJ_SWEEP_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hj-sweep", version, about = "High-order fast sweeping solvers for static Hamilton-Jacobi equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem on one mesh and report errors.
    Solve {
        #[command(flatten)]
        opts: RunOptions,
        /// Mesh nodes per axis.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Solve on a ladder of meshes and tabulate convergence orders.
    Study {
        #[command(flatten)]
        opts: RunOptions,
        /// Comma-separated mesh list, e.g. 40,80,160,320.
        #[arg(long, value_delimiter = ',')]
        meshes: Option<Vec<usize>>,
    },
    /// Solve one problem and write the nodal field.
    Dump {
        #[command(flatten)]
        opts: RunOptions,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Flags shared by all subcommands; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunOptions {
    /// TOML file with run settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Problem id: ex1..ex5, ex6a, ex6b, ex7p, ex7sv.
    #[arg(long)]
    pub problem: Option<String>,
    /// 1 (derivative reuse) or 2 (auxiliary equations).
    #[arg(long)]
    pub approach: Option<String>,
    /// Use the hybrid linear/HWENO reconstruction.
    #[arg(long)]
    pub hybrid: bool,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Weight regularizer; one value, or one per mesh.
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<f64>>,
    /// Linear weights, three comma-separated values.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    #[arg(long)]
    pub delta_tol: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub freeze_tol: Option<f64>,
    #[arg(long)]
    pub aux_boost: Option<f64>,
    /// Mesh of the self-convergence reference for problems without a closed form.
    #[arg(long)]
    pub reference_n: Option<usize>,
    /// Output directory; defaults to $HJ_SWEEP_OUT, then the working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the nodal field.
    #[arg(long)]
    pub dump_field: bool,
}

/// Settings readable from the config file; `[problems.<id>]` tables hold the
/// same keys and apply only to that problem.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub problem: Option<String>,
    pub n: Option<usize>,
    pub meshes: Option<Vec<usize>>,
    pub approach: Option<u8>,
    pub hybrid: Option<bool>,
    pub omega: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_schedule: Option<Vec<f64>>,
    pub gamma: Option<[f64; 3]>,
    pub delta_tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub freeze_tol: Option<f64>,
    pub aux_boost: Option<f64>,
    pub reference_n: Option<usize>,
    pub out: Option<PathBuf>,
    pub dump_field: Option<bool>,
}

impl FileSettings {
    /// Fields of `other` that are set replace those of `self`.
    fn overlay(self, other: FileSettings) -> FileSettings {
        macro_rules! pick {
            ($($f:ident),*) => { FileSettings { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            problem, n, meshes, approach, hybrid, omega, epsilon, epsilon_schedule, gamma, delta_tol,
            max_iterations, freeze_tol, aux_boost, reference_n, out, dump_field
        )
    }
}

/// Regularizer choice: catalogue default, one value, or one per mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonSetting {
    Catalogue,
    Fixed(f64),
    Schedule(Vec<f64>),
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub meshes: Vec<usize>,
    pub approach: Approach,
    pub hybrid: bool,
    pub omega: Option<f64>,
    pub epsilon: EpsilonSetting,
    pub gamma: Option<[f64; 3]>,
    pub delta_tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub freeze_tol: Option<f64>,
    pub aux_boost: Option<f64>,
    pub reference_n: Option<usize>,
    pub out_dir: PathBuf,
    pub dump_field: bool,
}

/// Reads a config file into flat settings, applying the section of `problem`
/// (or of the file's own `problem`) on top.
pub fn load_config(path: &Path, problem: Option<&str>) -> Result<FileSettings> {
    let text = std::fs::read_to_string(path).map_err(|source| HjError::Io { path: path.to_path_buf(), source })?;
    let bad = |e: toml::de::Error| HjError::Config(format!("{}: {}", path.display(), e.message()));
    let mut table: toml::Table = toml::from_str(&text).map_err(bad)?;
    let sections = match table.remove("problems") {
        Some(toml::Value::Table(t)) => t,
        Some(_) => return Err(HjError::Config(format!("{}: `problems` must be a table", path.display()))),
        None => toml::Table::new(),
    };
    let top: FileSettings = table.try_into().map_err(bad)?;
    let id = problem.map(str::to_string).or_else(|| top.problem.clone());
    let section = match id.and_then(|id| sections.into_iter().find(|(k, _)| k.eq_ignore_ascii_case(&id))) {
        Some((_, v)) => Some(v.try_into::<FileSettings>().map_err(bad)?),
        None => None,
    };
    Ok(match section {
        Some(s) => top.overlay(s),
        None => top,
    })
}

impl RunConfig {
    /// Merges flags over file settings; `meshes` comes from the subcommand.
    pub fn resolve(opts: &RunOptions, meshes_flag: Option<Vec<usize>>) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => load_config(p, opts.problem.as_deref())?,
            None => FileSettings::default(),
        };
        let problem: ProblemId = opts
            .problem
            .clone()
            .or(file.problem.clone())
            .ok_or_else(|| HjError::Config("no problem given (use --problem)".into()))?
            .parse()?;
        let meshes = meshes_flag
            .or(file.meshes.clone())
            .or(file.n.map(|n| vec![n]))
            .ok_or_else(|| HjError::Config("no mesh given".into()))?;
        if meshes.is_empty() {
            return Err(HjError::Config("mesh list is empty".into()));
        }
        if let Some(&bad) = meshes.iter().find(|&&n| n < MIN_MESH) {
            return Err(HjError::Config(format!("mesh n = {bad} is below the minimum of {MIN_MESH}")));
        }
        let approach = match &opts.approach {
            Some(a) => a.parse()?,
            None => match file.approach {
                Some(a) => a.to_string().parse()?,
                None => Approach::One,
            },
        };
        let epsilon = match &opts.epsilon {
            Some(v) if v.len() == 1 => EpsilonSetting::Fixed(v[0]),
            Some(v) => EpsilonSetting::Schedule(v.clone()),
            None => match (&file.epsilon_schedule, file.epsilon) {
                (Some(s), _) => EpsilonSetting::Schedule(s.clone()),
                (None, Some(e)) => EpsilonSetting::Fixed(e),
                (None, None) => EpsilonSetting::Catalogue,
            },
        };
        if let EpsilonSetting::Schedule(s) = &epsilon {
            if s.len() != meshes.len() {
                return Err(HjError::Config(format!(
                    "epsilon schedule has {} entries for {} meshes",
                    s.len(),
                    meshes.len()
                )));
            }
        }
        let gamma = match &opts.gamma {
            Some(g) => Some(
                <[f64; 3]>::try_from(g.as_slice())
                    .map_err(|_| HjError::Config(format!("gamma needs three values, got {}", g.len())))?,
            ),
            None => file.gamma,
        };
        let out_dir = opts
            .out
            .clone()
            .or(file.out.clone())
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(RunConfig {
            problem,
            meshes,
            approach,
            hybrid: opts.hybrid || file.hybrid.unwrap_or(false),
            omega: opts.omega.or(file.omega),
            epsilon,
            gamma,
            delta_tol: opts.delta_tol.or(file.delta_tol),
            max_iterations: opts.max_iterations.or(file.max_iterations),
            freeze_tol: opts.freeze_tol.or(file.freeze_tol),
            aux_boost: opts.aux_boost.or(file.aux_boost),
            reference_n: opts.reference_n.or(file.reference_n),
            out_dir,
            dump_field: opts.dump_field || file.dump_field.unwrap_or(false),
        })
    }

    /// Catalogue defaults for mesh number `k` of the ladder, with overrides applied.
    pub fn solver_config(&self, spec: &ProblemSpec, k: usize) -> SolverConfig {
        let mut cfg = spec.default_config(self.approach);
        cfg.hybrid = self.hybrid;
        if let Some(o) = self.omega {
            cfg.omega = o;
        }
        match &self.epsilon {
            EpsilonSetting::Catalogue => {}
            EpsilonSetting::Fixed(e) => cfg.weights.epsilon = *e,
            EpsilonSetting::Schedule(s) => cfg.weights.epsilon = s[k],
        }
        if let Some(g) = self.gamma {
            cfg.weights.gamma = g;
        }
        if let Some(t) = self.delta_tol {
            cfg.delta_tol = t;
        }
        if let Some(m) = self.max_iterations {
            cfg.max_iterations = m;
        }
        if self.freeze_tol.is_some() {
            cfg.freeze_tol = self.freeze_tol;
        }
        if let Some(b) = self.aux_boost {
            cfg.aux_boost = b;
        }
        cfg
    }

    /// File-name stem shared by this run's outputs.
    pub fn stem(&self) -> String {
        format!("{}_a{}{}", self.problem, self.approach, if self.hybrid { "_hybrid" } else { "" })
    }
}

/// One finished mesh of a run.
#[derive(Debug, Clone)]
pub struct MeshRun {
    pub spec: ProblemSpec,
    pub field: SolutionField,
    pub report: SweepReport,
    pub epsilon: f64,
}

/// Solves every mesh of the run, in parallel, keeping the mesh order.
pub fn run_meshes(run: &RunConfig) -> Result<Vec<MeshRun>> {
    run.meshes
        .par_iter()
        .enumerate()
        .map(|(k, &n)| {
            let (spec, grid) = make_problem(run.problem, n)?;
            let cfg = run.solver_config(&spec, k);
            let (field, report) = solve(&spec, &grid, &cfg)?;
            Ok(MeshRun { spec, field, report, epsilon: cfg.weights.epsilon })
        })
        .collect()
}

/// Mesh of the self-convergence reference used by `study` when a problem has no closed form.
pub const DEFAULT_REFERENCE_N: usize = 640;

/// Errors of each run: against the closed form, or against a reference solve
/// on `reference_n` for problems without one (NaN when no reference is set).
pub fn measure(run: &RunConfig, results: &[MeshRun]) -> Result<Vec<(f64, f64)>> {
    let reference = match (run.problem.has_closed_form(), run.reference_n) {
        (false, Some(n_ref)) => Some(reference_field(run, n_ref)?),
        _ => None,
    };
    results
        .iter()
        .map(|r| match (&reference, r.spec.exact.is_some()) {
            (_, true) => error_norms(&r.field, &r.spec),
            (Some(rf), false) => error_norms_against(&r.field, &r.spec.mask, &|x, y| interpolate_phi(rf, x, y)),
            (None, false) => Ok((f64::NAN, f64::NAN)),
        })
        .collect()
}

/// Solves the run's problem on `n_ref` with the same settings; a per-mesh
/// epsilon schedule falls back to the catalogue value there.
fn reference_field(run: &RunConfig, n_ref: usize) -> Result<SolutionField> {
    let mut single = run.clone();
    single.meshes = vec![n_ref];
    if let EpsilonSetting::Schedule(_) = single.epsilon {
        single.epsilon = EpsilonSetting::Catalogue;
    }
    let (spec, grid) = make_problem(run.problem, n_ref)?;
    Ok(solve(&spec, &grid, &single.solver_config(&spec, 0))?.0)
}

fn table_of(results: &[MeshRun], errors: &[(f64, f64)]) -> ConvergenceTable {
    let rows: Vec<MeshResult> = results
        .iter()
        .zip(errors)
        .map(|(r, &(l1, linf))| MeshResult {
            n: r.spec.n,
            l1,
            linf,
            iterations: r.report.iterations,
            epsilon: r.epsilon,
            wall_s: r.report.wall_time,
        })
        .collect();
    ConvergenceTable::from_results(&rows)
}

fn print_table(table: &ConvergenceTable, results: &[MeshRun]) {
    println!("{:>6} {:>12} {:>7} {:>12} {:>7} {:>6} {:>9} {:>9}", "N", "L1", "order", "Linf", "order", "iter", "epsilon", "wall_s");
    let order = |o: Option<f64>| o.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
    let err = |e: f64| if e.is_nan() { "-".to_string() } else { format!("{e:.3e}") };
    for (row, r) in table.rows.iter().zip(results) {
        println!(
            "{:>6} {:>12} {:>7} {:>12} {:>7} {:>6} {:>9.1e} {:>9.3}{}",
            row.n,
            err(row.l1),
            order(row.l1_order),
            err(row.linf),
            order(row.linf_order),
            row.iterations,
            row.epsilon,
            row.wall_s,
            if r.report.converged { "" } else { "  (not converged)" }
        );
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| HjError::Io { path: dir.to_path_buf(), source })
}

/// Executes a parsed command.
pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Solve { opts, n } => {
            let run = RunConfig::resolve(&opts, n.map(|n| vec![n]))?;
            let results = run_meshes(&run)?;
            let errors = measure(&run, &results)?;
            let table = table_of(&results, &errors);
            print_table(&table, &results);
            ensure_dir(&run.out_dir)?;
            let prefix = run.out_dir.join(format!("{}_n{}", run.stem(), run.meshes[0]));
            write_csv_report(&table, &results[0].report.delta_history, &prefix)?;
            if run.dump_field {
                write_field(&run, &results[0])?;
            }
            Ok(())
        }
        Command::Study { opts, meshes } => {
            let mut run = RunConfig::resolve(&opts, meshes)?;
            if !run.problem.has_closed_form() && run.reference_n.is_none() {
                run.reference_n = Some(DEFAULT_REFERENCE_N);
            }
            let results = run_meshes(&run)?;
            let errors = measure(&run, &results)?;
            let table = table_of(&results, &errors);
            print_table(&table, &results);
            ensure_dir(&run.out_dir)?;
            write_table_csv(&table, &run.out_dir.join(format!("{}_table.csv", run.stem())))?;
            for r in &results {
                let path = run.out_dir.join(format!("{}_n{}_delta.csv", run.stem(), r.spec.n));
                write_delta_csv(&r.report.delta_history, &path)?;
                if run.dump_field {
                    write_field(&run, r)?;
                }
            }
            Ok(())
        }
        Command::Dump { opts, n } => {
            let run = RunConfig::resolve(&opts, n.map(|n| vec![n]))?;
            let results = run_meshes(&run)?;
            ensure_dir(&run.out_dir)?;
            let path = write_field(&run, &results[0])?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn write_field(run: &RunConfig, r: &MeshRun) -> Result<PathBuf> {
    let path = run.out_dir.join(format!("{}_n{}_field.csv", run.stem(), r.spec.n));
    write_field_csv(&r.field, &r.spec, &path)?;
    Ok(path)
}

pub fn exit_code(err: &HjError) -> i32 {
    match err {
        HjError::Config(_) | HjError::UnknownProblem(_) => EXIT_USAGE,
        HjError::Io { .. } | HjError::Csv { .. } => EXIT_IO,
        _ => EXIT_SOLVER,
    }
}

/// Parses `argv` (including the program name), runs it and returns the exit status.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
