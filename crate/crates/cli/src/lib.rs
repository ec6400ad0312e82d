//! Command-line front end of the Eringen laboratory: runs one experiment per
//! invocation and writes CSV data plus a gnuplot script under `--out-dir`.

use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use eringen_core::experiments::{
    analytic_fractional_solution, coercivity_scan, convergence_study, eig_scan, fixed_fields,
    korn_check_2d, random_fields, slope_fit, CoercivityForm, LoadFunction, ScanRecord,
};
use eringen_core::{
    assemble_load, assemble_mixture, assemble_nonlocal_stiffness, build_space, solve_spd,
    KernelSpec, OuterDomainMode, StiffnessProfile,
};

pub mod config;
pub mod csv;
pub mod plot;

use csv::{emit_csv, format_float, write_text, Cell, Table};
use plot::{Plot, Series};

pub const THREADS_ENV: &str = "ERINGEN_LAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] eringen_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for numeric and I/O failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numeric() => 1,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "eringen-lab",
    version,
    about = "Numerical experiments for Eringen's nonlocal elasticity model on (0, 1)",
    after_help = "Any flag may also be given in a key=value file passed with --config; \
                  command-line flags take precedence. ERINGEN_LAB_THREADS caps the \
                  worker threads (0 = all cores)."
)]
pub struct Cli {
    /// Directory for CSV files and plot scripts
    #[arg(long, global = true, default_value = "results")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest generalized eigenvalue of K v = lambda M0 v per mesh
    EigScan(EigScanArgs),
    /// Solve the discrete Eringen problem and write the nodal values
    Solve(SolveArgs),
    /// L2 error against the closed-form fractional solution
    Converge(ConvergeArgs),
    /// Coercivity and boundedness eigenvalues of the Riesz form in H^s
    Coercivity(CoercivityArgs),
    /// Coercivity eigenvalues of the heterogeneous form
    Hetero(HeteroArgs),
    /// Solve with the local/nonlocal mixture m K_local + (1 - m) K
    Mixture(MixtureArgs),
    /// Two-dimensional nonlocal Korn inequality on polynomial fields
    KornCheck(KornArgs),
    /// Tabulate the kernel-generating functions
    KernelsPlot(KernelsPlotArgs),
}

fn parse_kernel(s: &str) -> Result<KernelSpec, String> {
    s.parse().map_err(|e: eringen_core::Error| e.to_string())
}

fn parse_load(s: &str) -> Result<LoadFunction, String> {
    s.parse().map_err(|e: eringen_core::Error| e.to_string())
}

fn parse_profile(s: &str) -> Result<StiffnessProfile, String> {
    s.parse().map_err(|e: eringen_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<OuterDomainMode, String> {
    s.parse().map_err(|e: eringen_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct EigScanArgs {
    /// cubic | linear | riesz:<alpha> | riesz-half:<alpha>
    #[arg(long, default_value = "cubic", value_parser = parse_kernel)]
    pub kernel: KernelSpec,
    /// Polynomial degree (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Numbers of elements
    #[arg(
        long = "N",
        value_delimiter = ',',
        default_value = "16,32,64,128,256,512"
    )]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value = "cubic", value_parser = parse_kernel)]
    pub kernel: KernelSpec,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Load: one | x | sin-pi-x
    #[arg(long, default_value = "one", value_parser = parse_load)]
    pub f: LoadFunction,
    /// One solution file per entry
    #[arg(long = "N", value_delimiter = ',', default_value = "8,16,32,64")]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Riesz order, 0 < alpha < 1; s = 1 - alpha/2
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub alpha: f64,
    #[arg(
        long = "N",
        value_delimiter = ',',
        default_value = "16,32,64,128,256,512,1024"
    )]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct CoercivityArgs {
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub alpha: f64,
    #[arg(
        long = "N",
        value_delimiter = ',',
        default_value = "16,32,64,128,256,512"
    )]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct HeteroArgs {
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub alpha: f64,
    /// Piecewise-constant stiffness, e.g. "breakpoints=0.5; values=1,2; outside=1"
    #[arg(long, default_value = "values=1", value_parser = parse_profile)]
    pub profile: StiffnessProfile,
    /// Outer integration domain: domain | full | full:L=<L>,tol=<tol>
    #[arg(long, default_value = "domain", value_parser = parse_mode)]
    pub mode: OuterDomainMode,
    #[arg(long = "N", value_delimiter = ',', default_value = "16,32,64,128,256")]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    #[arg(long, default_value = "riesz:0.6666666666666666", value_parser = parse_kernel)]
    pub kernel: KernelSpec,
    /// Weight of the local part, 0 < m <= 1
    #[arg(long, default_value_t = 0.5)]
    pub m: f64,
    /// Uniform stiffness of the local part
    #[arg(long, default_value = "values=1", value_parser = parse_profile)]
    pub profile: StiffnessProfile,
    #[arg(long, default_value = "one", value_parser = parse_load)]
    pub f: LoadFunction,
    #[arg(long = "N", value_delimiter = ',', default_value = "64")]
    pub n_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct KornArgs {
    /// Order of the two-dimensional Riesz kernel, 0 < alpha < 2
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Cells per direction
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    /// Number of random fields added to the fixed ones
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    /// Seed for the random fields
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct KernelsPlotArgs {
    /// Order used for the Riesz columns
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub alpha: f64,
    /// Samples on (0, 1]
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

/// Files written by one run, relative to the output directory.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    out: Outputs,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let path = self.dir.join(name);
        emit_csv(table, &path)?;
        self.out.files.push(path);
        Ok(())
    }

    fn plot(&mut self, name: &str, plot: &Plot) -> Result<(), CliError> {
        let path = self.dir.join(name);
        write_text(&path, &plot.render())?;
        self.out.files.push(path);
        Ok(())
    }
}

fn slug(spec: &KernelSpec) -> String {
    spec.to_string().replace(':', "-")
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_alpha_1d(alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--alpha must lie in (0, 1), got {alpha}")))
    }
}

fn scan_table(records: &[ScanRecord], header: &[&str]) -> Table {
    let mut t = Table::new(header);
    for r in records {
        let mut row: Vec<Cell> = vec![r.n.into(), r.h.into(), r.primary.into()];
        if header.len() == 4 {
            row.push(r.secondary.unwrap_or(f64::NAN).into());
        }
        t.push(row);
    }
    t
}

/// Nodal values including the boundary zeros, ordered by position.
fn solution_table(space: &eringen_core::FemSpace, u: &[f64]) -> Table {
    let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0), (1.0, 0.0)];
    pts.extend((0..space.n_dofs()).map(|k| (space.dof_position(k), u[k])));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut t = Table::new(&["x", "u"]);
    for (x, v) in pts {
        t.push(vec![x.into(), v.into()]);
    }
    t
}

fn eig_scan_cmd(a: &EigScanArgs, w: &mut Writer) -> Result<(), CliError> {
    let recs = eig_scan(&a.kernel, a.p, &a.n_list)?;
    let mut t = scan_table(&recs, &["N", "h", "lambda_min"]);
    let name = format!("eig_scan_{}_p{}", slug(&a.kernel), a.p);
    if recs.len() >= 3 {
        let fit = slope_fit(&recs)?;
        t.comment("slope", format_float(fit.slope));
        w.out
            .summary
            .push(format!("slope of lambda_min in h: {:.4}", fit.slope));
    }
    w.csv(&format!("{name}.csv"), &t)?;
    let plot = Plot::new(
        &format!("{name}.png"),
        &format!("{} kernel, p = {}", a.kernel, a.p),
        "h",
        "lambda_min",
    )
    .log()
    .with(Series::new(
        &format!("{name}.csv"),
        "2:3",
        format!("p = {}", a.p),
    ));
    w.plot(&format!("{name}.gp"), &plot)
}

fn solve_cmd(a: &SolveArgs, w: &mut Writer) -> Result<(), CliError> {
    let base = format!("solve_{}_p{}_{}", slug(&a.kernel), a.p, a.f);
    let mut plot = Plot::new(
        &format!("{base}.png"),
        &format!("{} kernel, f = {}", a.kernel, a.f),
        "x",
        "u",
    );
    for &n in &a.n_list {
        let space = build_space(n, a.p)?;
        let k = assemble_nonlocal_stiffness(&space, &a.kernel, 1.0)?;
        let load = a.f;
        let u = solve_spd(&k, &assemble_load(&space, move |x| load.eval(x)))?;
        let file = format!("{base}_N{n}.csv");
        w.csv(&file, &solution_table(&space, &u))?;
        plot = plot.with(Series::new(&file, "1:2", format!("N = {n}")));
    }
    if let (KernelSpec::Riesz { alpha }, LoadFunction::One) = (a.kernel, a.f) {
        let s = 1.0 - 0.5 * alpha;
        let mut t = Table::new(&["x", "u"]);
        for i in 0..=400 {
            let x = i as f64 / 400.0;
            t.push(vec![x.into(), analytic_fractional_solution(s, x)?.into()]);
        }
        t.comment("s", format_float(s));
        let file = format!("{base}_analytic.csv");
        w.csv(&file, &t)?;
        plot = plot.with(Series::new(&file, "1:2", "analytic").lines());
    }
    w.plot(&format!("{base}.gp"), &plot)
}

fn converge_cmd(a: &ConvergeArgs, w: &mut Writer) -> Result<(), CliError> {
    check_alpha_1d(a.alpha)?;
    let (recs, fit) = convergence_study(a.alpha, &a.n_list)?;
    let mut t = scan_table(&recs, &["N", "h", "l2_error"]);
    t.comment("rate", format_float(fit.slope));
    t.comment("alpha", format_float(a.alpha));
    t.comment("s", format_float(1.0 - 0.5 * a.alpha));
    w.out
        .summary
        .push(format!("L2 convergence rate: {:.4}", fit.slope));
    w.csv("converge.csv", &t)?;
    let plot = Plot::new(
        "converge.png",
        "L2 error against the analytic solution",
        "h",
        "error",
    )
    .log()
    .with(Series::new("converge.csv", "2:3", "P1"));
    w.plot("converge.gp", &plot)
}

fn eig_pair_plot(name: &str, title: &str) -> Plot {
    Plot::new(&format!("{name}.png"), title, "h", "lambda")
        .log()
        .with(Series::new(&format!("{name}.csv"), "2:3", "lambda_min"))
        .with(Series::new(&format!("{name}.csv"), "2:4", "lambda_max"))
}

fn coercivity_cmd(a: &CoercivityArgs, w: &mut Writer) -> Result<(), CliError> {
    check_alpha_1d(a.alpha)?;
    let recs = coercivity_scan(a.alpha, &a.n_list, &CoercivityForm::Homogeneous)?;
    let mut t = scan_table(&recs, &["N", "h", "lambda_min", "lambda_max"]);
    t.comment("alpha", format_float(a.alpha));
    t.comment("s", format_float(1.0 - 0.5 * a.alpha));
    w.csv("coercivity.csv", &t)?;
    w.plot(
        "coercivity.gp",
        &eig_pair_plot("coercivity", "Riesz form against the H^s mass"),
    )
}

fn hetero_cmd(a: &HeteroArgs, w: &mut Writer) -> Result<(), CliError> {
    check_alpha_1d(a.alpha)?;
    let form = CoercivityForm::Heterogeneous {
        profile: a.profile.clone(),
        mode: a.mode,
    };
    let recs = coercivity_scan(a.alpha, &a.n_list, &form)?;
    let mut t = scan_table(&recs, &["N", "h", "lambda_min", "lambda_max"]);
    t.comment("alpha", format_float(a.alpha));
    t.comment("s", format_float(1.0 - 0.5 * a.alpha));
    t.comment("profile", &a.profile);
    t.comment("mode", a.mode);
    let name = match a.mode {
        OuterDomainMode::DomainOnly => "hetero_domain",
        OuterDomainMode::FullLine { .. } => "hetero_full",
    };
    w.csv(&format!("{name}.csv"), &t)?;
    w.plot(
        &format!("{name}.gp"),
        &eig_pair_plot(name, "Heterogeneous form against the H^s mass"),
    )
}

fn mixture_cmd(a: &MixtureArgs, w: &mut Writer) -> Result<(), CliError> {
    let base = format!("mixture_{}_m{}", slug(&a.kernel), a.m);
    let mut plot = Plot::new(
        &format!("{base}.png"),
        &format!("m = {}, {} kernel", a.m, a.kernel),
        "x",
        "u",
    );
    for &n in &a.n_list {
        let space = build_space(n, 1)?;
        let b = assemble_mixture(&space, &a.kernel, a.m, &a.profile)?;
        let load = a.f;
        let u = solve_spd(&b, &assemble_load(&space, move |x| load.eval(x)))?;
        let file = format!("{base}_N{n}.csv");
        w.csv(&file, &solution_table(&space, &u))?;
        plot = plot.with(Series::new(&file, "1:2", format!("N = {n}")));
    }
    w.plot(&format!("{base}.gp"), &plot)
}

fn korn_cmd(a: &KornArgs, w: &mut Writer) -> Result<(), CliError> {
    let mut fields = fixed_fields();
    fields.extend(random_fields(a.seed, a.random));
    let pairs = korn_check_2d(a.alpha, &fields, a.grid)?;
    let mut t = Table::new(&["field", "lhs", "rhs", "ratio"]);
    let mut worst = f64::INFINITY;
    for (f, (lhs, rhs)) in fields.iter().zip(pairs) {
        worst = worst.min(lhs / rhs);
        t.push(vec![
            f.name.as_str().into(),
            lhs.into(),
            rhs.into(),
            (lhs / rhs).into(),
        ]);
    }
    t.comment("alpha", format_float(a.alpha));
    t.comment("grid", a.grid);
    w.out.summary.push(format!("smallest lhs/rhs: {worst:.6}"));
    w.csv("korn.csv", &t)?;
    let plot = Plot::new("korn.png", "Korn ratio per field", "field", "lhs / rhs")
        .with(Series::new("korn.csv", "0:4:xtic(1)", "lhs/rhs").boxes());
    w.plot("korn.gp", &plot)
}

fn kernels_plot_cmd(a: &KernelsPlotArgs, w: &mut Writer) -> Result<(), CliError> {
    if a.points == 0 {
        return Err(usage("--points must be positive"));
    }
    let specs = [
        KernelSpec::SmoothCubic,
        KernelSpec::LinearOneMinusD,
        KernelSpec::riesz(a.alpha)?,
        KernelSpec::riesz_half(a.alpha)?,
    ];
    let mut t = Table::new(&["d", "cubic", "linear", "riesz", "riesz_half"]);
    for i in 1..=a.points {
        let d = i as f64 / a.points as f64;
        let mut row = vec![Cell::Float(d)];
        for s in &specs {
            row.push(s.eval(d)?.into());
        }
        t.push(row);
    }
    t.comment("alpha", format_float(a.alpha));
    w.csv("kernels.csv", &t)?;
    let mut plot = Plot::new("kernels.png", "Kernel-generating functions", "d", "A(d)");
    for (col, s) in specs.iter().enumerate() {
        plot =
            plot.with(Series::new("kernels.csv", &format!("1:{}", col + 2), s.to_string()).lines());
    }
    w.plot("kernels.gp", &plot)
}

/// Applies `ERINGEN_LAB_THREADS` to the global rayon pool. The pool can only
/// be configured once per process; later calls keep the first setting.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| {
        usage(format!(
            "{THREADS_ENV} must be a non-negative integer, got '{v}'"
        ))
    })?;
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Runs one parsed command, writing under `cli.out_dir`.
pub fn execute(cli: &Cli) -> Result<Outputs, CliError> {
    std::fs::create_dir_all(&cli.out_dir).map_err(|source| CliError::Io {
        path: cli.out_dir.clone(),
        source,
    })?;
    let mut w = Writer {
        dir: &cli.out_dir,
        out: Outputs::default(),
    };
    match &cli.command {
        Command::EigScan(a) => eig_scan_cmd(a, &mut w)?,
        Command::Solve(a) => solve_cmd(a, &mut w)?,
        Command::Converge(a) => converge_cmd(a, &mut w)?,
        Command::Coercivity(a) => coercivity_cmd(a, &mut w)?,
        Command::Hetero(a) => hetero_cmd(a, &mut w)?,
        Command::Mixture(a) => mixture_cmd(a, &mut w)?,
        Command::KornCheck(a) => korn_cmd(a, &mut w)?,
        Command::KernelsPlot(a) => kernels_plot_cmd(a, &mut w)?,
    }
    Ok(w.out)
}

/// Full entry point: config merging, parsing, thread setup, dispatch.
/// Returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{e}");
                    return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        2
                    } else {
                        0
                    };
                }
                _ => 2,
            };
            eprint!("{e}");
            eprintln!("\n{}", Cli::command().render_help());
            return code;
        }
    };
    if let Err(e) = configure_threads(std::env::var(THREADS_ENV).ok().as_deref()) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match execute(&cli) {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            for s in &out.summary {
                println!("{s}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
