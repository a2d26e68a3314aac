//! Command-line front end: subcommands over scenario files, the repro
//! cases, and the 0/1/2 exit-code contract (pass / verdict false / input
//! or usage error).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::chsh::{self, SeesawParams};
use crate::density;
use crate::epr;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::report::{Format, Report};
use crate::repro;
use crate::scenario::{self, load_scenario, Scenario, Task};
use crate::state::{QuantumState, Side, SideOperator};
use crate::tol::{self, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "epr-bell", version, about = "EPR and CHSH correlation checks for bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report layout.
    #[arg(long, global = true, default_value = "human")]
    format: Format,

    /// Seed for the see-saw optimizer (overrides the scenario's params.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Threshold for EPR defects and commutator dispersions.
    #[arg(long, global = true, default_value_t = tol::EPR)]
    tol_epr: f64,

    /// Accepted distance from √2 for a maximal witness.
    #[arg(long, global = true, default_value_t = tol::MAXIMAL)]
    tol_max: f64,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Scenario with the vector Ψ on an N⊗N space; e₀⊗e₀ when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Cut levels, comma separated (overrides params.n_values).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Truncation N when no scenario is given (default: max n + 2).
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the incommensurable EPR conditions for params.pairs.
    CheckEpr(ScenarioArgs),
    /// Evaluate the CHSH half-value of params.witness.
    ChshValue(ScenarioArgs),
    /// Maximize the CHSH half-value by seeded see-saw.
    ChshOptimize(ScenarioArgs),
    /// Build the explicit CHSH witness from params.pairs.
    WitnessFromEpr(ScenarioArgs),
    /// Extract anticommuting projection pairs from a √2 witness and rebuild it.
    MaximalProjections(ScenarioArgs),
    /// Projection partners across the split, or the mirror block structure.
    Mirror(ScenarioArgs),
    /// Approximating vectors with incommensurable EPR pairs.
    DensitySweep(SweepArgs),
    /// Recompute a worked example and compare with its expected values.
    Repro {
        /// One of psi0, psi1, psi2, corollary-quarter, theorem2-psi1, theorem3-sweep.
        case: String,
    },
}

/// Options shared by all tasks.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol: Tolerances,
    pub n_values: Vec<usize>,
}

fn missing(path: &str) -> Error {
    Error::Validation {
        path: path.to_string(),
        message: "required by this task".to_string(),
    }
}

fn seesaw_params(sc: &Scenario, opts: &RunOptions) -> SeesawParams {
    let defaults = SeesawParams::default();
    SeesawParams {
        seed: opts.seed.or(sc.params.seed).unwrap_or(defaults.seed),
        restarts: sc.params.restarts.unwrap_or(defaults.restarts),
        max_iterations: sc.params.max_iterations.unwrap_or(defaults.max_iterations),
        ..defaults
    }
}

fn matrix_text(m: &ComplexMatrix) -> String {
    scenario::matrix_to_json(m).to_string()
}

fn witness_entries(report: &mut Report, w: &chsh::ChshWitness) {
    let names = ["a1", "b1", "a2", "b2"];
    for (name, op) in names.iter().zip(w.operators()) {
        report.text(format!("witness.{name}"), matrix_text(op.local()));
    }
}

fn epr_entries(report: &mut Report, r: &epr::EprPairReport) {
    report
        .num("epr.defectE", r.defect_e)
        .num("epr.defectF", r.defect_f)
        .num("epr.dispersion1", r.dispersion1)
        .num("epr.dispersion2", r.dispersion2)
        .flag("epr.verdict", r.verdict);
}

fn check_epr(sc: &Scenario, opts: &RunOptions, report: &mut Report) -> Result<()> {
    let names = sc.params.pairs.as_ref().ok_or_else(|| missing("params.pairs"))?;
    let [e1, f1, e2, f2] = sc.resolve(names, "params.pairs")?;
    let r = epr::verify_incommensurable_epr(&sc.state, &e1, &f1, &e2, &f2, &opts.tol)?;
    epr_entries(report, &r);
    report.check("verdict", r.verdict);
    Ok(())
}

fn chsh_value(sc: &Scenario, report: &mut Report) -> Result<()> {
    let names = sc.params.witness.as_ref().ok_or_else(|| missing("params.witness"))?;
    let [a1, b1, a2, b2] = sc.resolve(names, "params.witness")?;
    let value = chsh::chsh_value(&sc.state, &a1, &b1, &a2, &b2)?;
    report
        .num("chsh.value", value)
        .flag("chsh.bellCorrelated", value > 1.0)
        .check("within Tsirelson bound", value <= std::f64::consts::SQRT_2 + tol::STRUCT);
    Ok(())
}

fn chsh_optimize(sc: &Scenario, opts: &RunOptions, report: &mut Report) -> Result<()> {
    let params = seesaw_params(sc, opts);
    let run = chsh::seesaw(&sc.state, &params)?;
    report
        .int("seed", params.seed)
        .int("seesaw.restarts", params.restarts as u64)
        .int("seesaw.bestRestart", run.best_restart as u64)
        .num("seesaw.worstDecrease", run.worst_decrease())
        .num("chsh.value", run.witness.value)
        .flag("chsh.bellCorrelated", run.witness.value > 1.0);
    if sc.space.d1 == 2 && sc.space.d2 == 2 {
        report.num("chsh.horodeckiBound", chsh::horodecki_bound(&sc.state)?);
    }
    witness_entries(report, &run.witness);
    report.check("monotone see-saw", run.worst_decrease() <= 1e-12);
    Ok(())
}

fn witness_from_epr(sc: &Scenario, opts: &RunOptions, report: &mut Report) -> Result<()> {
    let names = sc.params.pairs.as_ref().ok_or_else(|| missing("params.pairs"))?;
    let [e1, f1, e2, f2] = sc.resolve(names, "params.pairs")?;
    match chsh::witness_from_epr(&sc.state, &e1, &f1, &e2, &f2, &opts.tol) {
        Ok(w) => {
            let c = w.c.unwrap_or(f64::NAN);
            report.num("witness.c", c).num("chsh.value", w.value);
            witness_entries(report, &w);
            report
                .check("Bell correlated", w.value > 1.0)
                .check("value matches closed form", (w.value - (1.0 + c * c).sqrt()).abs() <= 1e-9);
        }
        Err(Error::NotIncommensurable(r)) => {
            epr_entries(report, &r);
            report.check("incommensurable EPR pairs", false);
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn maximal_projections(sc: &Scenario, opts: &RunOptions, report: &mut Report) -> Result<()> {
    let witness = match &sc.params.witness {
        Some(names) => {
            let [a1, b1, a2, b2] = sc.resolve(names, "params.witness")?;
            let value = chsh::chsh_value(&sc.state, &a1, &b1, &a2, &b2)?;
            chsh::ChshWitness {
                a1,
                b1,
                a2,
                b2,
                value,
                c: None,
                seed: None,
            }
        }
        None => {
            let params = seesaw_params(sc, opts);
            report.int("seed", params.seed);
            chsh::chsh_optimize(&sc.state, &params)?
        }
    };
    report.num("chsh.value", witness.value);
    let maximal = (witness.value - std::f64::consts::SQRT_2).abs() <= opts.tol.maximal;
    report.check("witness reaches sqrt2", maximal);
    if !maximal {
        return Ok(());
    }
    let cert = chsh::maximal_projections(&sc.state, &witness, &opts.tol)?;
    let p = &cert.projections;
    let d1 = epr::side_commutator_dispersion(&sc.state, &p.e1, &p.f1)?;
    let d2 = epr::side_commutator_dispersion(&sc.state, &p.e2, &p.f2)?;
    report
        .num("certificate.anticommutatorResidual", cert.anticommutator_residual)
        .num("certificate.defectE", cert.defects.0)
        .num("certificate.defectF", cert.defects.1)
        .num("certificate.dispersion1", d1)
        .num("certificate.dispersion2", d2);
    for (name, op) in [("s1", &p.s1), ("s2", &p.s2), ("e1", &p.e1), ("f1", &p.f1), ("e2", &p.e2), ("f2", &p.f2)] {
        report.text(format!("projection.{name}"), matrix_text(op.local()));
    }
    let back = chsh::witness_from_projections(&sc.state, p, &opts.tol)?;
    report
        .num("roundTrip.value", back.value)
        .check("defects within tol-epr", cert.defects.0 <= opts.tol.epr && cert.defects.1 <= opts.tol.epr)
        .check("anticommutation within tol-max", cert.anticommutator_residual <= opts.tol.maximal)
        .check("round trip reaches sqrt2", (back.value - std::f64::consts::SQRT_2).abs() <= opts.tol.maximal);
    Ok(())
}

fn mirror(sc: &Scenario, report: &mut Report) -> Result<()> {
    if let Some(name) = &sc.params.projection {
        let e: &SideOperator = sc.operator(name).ok_or_else(|| missing("params.projection"))?;
        let partner = epr::epr_partner_projection(&sc.state, e)?;
        report.text("mirror.projection", name.clone()).flag("mirror.found", partner.is_some());
        if let Some(f) = &partner {
            report
                .int("mirror.side", if f.side() == Side::One { 1 } else { 2 })
                .text("mirror.partner", matrix_text(f.local()));
        }
        report.check("partner exists", partner.is_some());
        return Ok(());
    }
    for side in [Side::One, Side::Two] {
        let m = epr::mirror_structure(&sc.state, side)?;
        let blocks: Vec<String> = m.blocks.iter().map(|(x, d)| format!("{x:?}x{d}")).collect();
        report
            .text(format!("mirror.side{side}.blocks"), blocks.join(","))
            .int(format!("mirror.side{side}.kernelDim"), m.kernel_dim as u64)
            .flag(format!("mirror.side{side}.admitsIncommensurablePairs"), m.admits_incommensurable_pairs())
            .flag(format!("mirror.side{side}.admitsAnticommutingPair"), m.admits_anticommuting_pair());
    }
    Ok(())
}

fn sweep_report(psi: &QuantumState, n_values: &[usize], opts: &RunOptions, report: &mut Report) -> Result<()> {
    let space = psi.space();
    if space.d1 != space.d2 {
        return Err(Error::Validation {
            path: "space".into(),
            message: "the shift model needs d1 = d2".into(),
        });
    }
    if n_values.is_empty() {
        return Err(missing("params.n_values"));
    }
    let vector = psi.vector().ok_or(Error::MixedState)?;
    let model = density::build_shift_model(space.d1)?;
    let rows = density::density_sweep(vector, n_values, &model, &opts.tol)?;
    report.int("sweep.levels", space.d1 as u64);
    for row in &rows {
        let n = row.n;
        report
            .num(format!("sweep.{n}.distance"), row.distance)
            .num(format!("sweep.{n}.defectE"), row.epr.defect_e)
            .num(format!("sweep.{n}.defectF"), row.epr.defect_f)
            .num(format!("sweep.{n}.dispersion1"), row.epr.dispersion1)
            .num(format!("sweep.{n}.dispersion2"), row.epr.dispersion2)
            .num(format!("sweep.{n}.c"), row.c)
            .num(format!("sweep.{n}.witnessValue"), row.witness_value)
            .flag(format!("sweep.{n}.verdict"), row.epr.verdict);
    }
    report
        .check("every row passes the EPR check", rows.iter().all(|r| r.epr.verdict))
        .check("every witness exceeds 1", rows.iter().all(|r| r.witness_value > 1.0));
    Ok(())
}

/// Runs one task against a loaded scenario.
pub fn execute(task: Task, sc: &Scenario, opts: &RunOptions) -> Result<Report> {
    let mut report = Report::new(task.name());
    match task {
        Task::CheckEpr => check_epr(sc, opts, &mut report)?,
        Task::ChshValue => chsh_value(sc, &mut report)?,
        Task::ChshOptimize => chsh_optimize(sc, opts, &mut report)?,
        Task::WitnessFromEpr => witness_from_epr(sc, opts, &mut report)?,
        Task::MaximalProjections => maximal_projections(sc, opts, &mut report)?,
        Task::Mirror => mirror(sc, &mut report)?,
        Task::DensitySweep => {
            let ns = if opts.n_values.is_empty() {
                sc.params.n_values.clone().unwrap_or_default()
            } else {
                opts.n_values.clone()
            };
            sweep_report(&sc.state, &ns, opts, &mut report)?;
        }
    }
    report.tolerances(&opts.tol);
    Ok(report)
}

fn density_sweep_default(args: &SweepArgs, opts: &RunOptions) -> Result<Report> {
    let levels = args.levels.unwrap_or_else(|| density::default_levels(&args.n));
    let space = crate::state::BipartiteSpace::new(levels, levels)?;
    let psi = QuantumState::product_basis(space, 0, 0)?;
    let mut report = Report::new(Task::DensitySweep.name());
    sweep_report(&psi, &args.n, opts, &mut report)?;
    report.tolerances(&opts.tol);
    Ok(report)
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let opts = RunOptions {
        seed: cli.seed,
        tol: Tolerances {
            epr: cli.tol_epr,
            maximal: cli.tol_max,
        },
        n_values: Vec::new(),
    };
    let with_scenario = |task: Task, args: &ScenarioArgs| execute(task, &load_scenario(&args.scenario)?, &opts);
    match &cli.command {
        Command::CheckEpr(a) => with_scenario(Task::CheckEpr, a),
        Command::ChshValue(a) => with_scenario(Task::ChshValue, a),
        Command::ChshOptimize(a) => with_scenario(Task::ChshOptimize, a),
        Command::WitnessFromEpr(a) => with_scenario(Task::WitnessFromEpr, a),
        Command::MaximalProjections(a) => with_scenario(Task::MaximalProjections, a),
        Command::Mirror(a) => with_scenario(Task::Mirror, a),
        Command::DensitySweep(a) => {
            let opts = RunOptions {
                n_values: a.n.clone(),
                ..opts.clone()
            };
            match &a.scenario {
                Some(path) => execute(Task::DensitySweep, &load_scenario(path)?, &opts),
                None => density_sweep_default(a, &opts),
            }
        }
        Command::Repro { case } => repro::repro_case(case, opts.seed.unwrap_or(0), &opts.tol),
    }
}

/// Parses `argv` (program name first), runs the command, writes the report
/// to `out` and diagnostics to `err`, and returns the exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = write!(out, "{}", report.render(cli.format));
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
