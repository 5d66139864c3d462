//! Command-line entry point tying generation, spectra, verification and
//! plots together.
//!
//! Exit codes: 0 ok, 2 usage, 3 generation failure, 4 spectral failure,
//! 5 verification failure.

mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use expanderlab::error::Error;
use expanderlab::generators::{
    curve_cylinder_member, default_sweep, hyperplane_member, negative_controls, rotational_member,
    IntegratorOrder, ShootingConfig, SweepMember, SweepParams,
};
use expanderlab::geometry::{expander_residual, max_abs_residual};
use expanderlab::jsonio;
use expanderlab::spectral::{
    bottom_spectrum, ground_state_transform, hermite_eigenvalue, multi_indices, PotentialKind,
    ReductionConfig,
};
use expanderlab::verify::run_full_suite;

#[derive(Parser)]
#[command(
    name = "expanderlab",
    version,
    about = "Numerical laboratory for self-expanding mean curvature flow solutions"
)]
struct Cli {
    /// Output directory; all produced files land here.
    #[arg(long, global = true, default_value = "runs")]
    out: PathBuf,

    /// Worker threads for sweep verification (default: rayon's choice).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Arclength step for shooting and finite-difference checks.
    #[arg(long, global = true, default_value_t = 1e-3)]
    ds: f64,

    /// Grid size of the spectral discretization.
    #[arg(long, global = true, default_value_t = 4001)]
    grid: usize,

    /// Truncation radius of the spectral domain.
    #[arg(long, global = true, default_value_t = 12.0)]
    radius: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate expander geometries and the sweep index.
    Generate(GenerateArgs),
    /// Compute the bottom spectrum of a reduced operator on a geometry file.
    Spectrum(SpectrumArgs),
    /// Run the verification suite and write report.json / report.md.
    Verify(VerifyArgs),
    /// Tabulate the exact flat-space spectrum against recomputed values.
    Hermite(HermiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Hyperplane,
    Curve,
    Rotational,
}

#[derive(Args)]
struct GenerateArgs {
    /// Geometry kind for a single generation.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,

    /// Intrinsic dimension.
    #[arg(long, default_value_t = 2)]
    n: usize,

    /// Initial distance from the origin (curve shooting).
    #[arg(long, default_value_t = 1.0)]
    d0: f64,

    /// Initial tangent angle in radians (curve shooting).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    theta0: f64,

    /// Integration length.
    #[arg(long, default_value_t = 20.0)]
    smax: f64,

    /// Cap height on the axis (rotational shooting).
    #[arg(long, default_value_t = 1.0)]
    cap_height: f64,

    /// Residual acceptance tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,

    /// One-step integrator order (2 or 4).
    #[arg(long, default_value_t = 4)]
    order: u32,

    /// Generate the whole default sweep instead of a single geometry.
    #[arg(long, default_value_t = false)]
    default_sweep: bool,

    /// Also generate the designed negative controls.
    #[arg(long, default_value_t = false)]
    include_negative_controls: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Drift,
    Stability,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Geometry file (path, or name relative to --out).
    #[arg(long)]
    input: PathBuf,

    /// Which operator to reduce.
    #[arg(long, value_enum, default_value_t = OperatorArg::Drift)]
    operator: OperatorArg,

    /// Number of eigenvalues.
    #[arg(long, default_value_t = 5)]
    m: usize,

    /// Also write the ground eigenvector as CSV.
    #[arg(long, default_value_t = false)]
    emit_csv: bool,

    /// Also write an SVG plot of the potential and the ground state.
    #[arg(long, default_value_t = false)]
    emit_svg: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep index file to verify.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Generate and verify the default sweep.
    #[arg(long, default_value_t = false)]
    default_sweep: bool,

    /// Restrict to checks whose name starts with this token
    /// (e.g. lambda1, mu1, simons).
    #[arg(long)]
    theorem: Option<String>,

    /// Include the designed negative controls (expected failures).
    #[arg(long, default_value_t = false)]
    include_negative_controls: bool,

    /// Stamp the report with the current time (breaks byte-determinism).
    #[arg(long, default_value_t = false)]
    timestamp: bool,
}

#[derive(Args)]
struct HermiteArgs {
    /// Flat-space dimension.
    #[arg(long, default_value_t = 1)]
    n: usize,

    /// Largest multi-index total.
    #[arg(long, default_value_t = 4)]
    max_order: usize,

    /// Also write the table as CSV.
    #[arg(long, default_value_t = false)]
    emit_csv: bool,
}

enum Phase {
    Generation,
    Spectral,
    Verification,
}

struct CommandError {
    phase: Phase,
    message: String,
}

impl CommandError {
    fn generation(e: Error) -> Self {
        Self {
            phase: Phase::Generation,
            message: e.to_string(),
        }
    }

    fn spectral(e: Error) -> Self {
        Self {
            phase: Phase::Spectral,
            message: e.to_string(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self.phase {
            Phase::Generation => 3,
            Phase::Spectral => 4,
            Phase::Verification => 5,
        }
    }
}

type CommandResult = Result<(), CommandError>;

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore the error if a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(&cli, args),
        Command::Spectrum(args) => cmd_spectrum(&cli, args),
        Command::Verify(args) => cmd_verify(&cli, args),
        Command::Hermite(args) => cmd_hermite(&cli, args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.exit_code());
    }
}

/// Write through a temporary file and rename, so partial files never land
/// under their final name.
fn write_atomic(path: &Path, content: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn reduction_of(cli: &Cli) -> ReductionConfig {
    ReductionConfig {
        grid_size: cli.grid,
        domain_radius: cli.radius,
    }
}

fn sweep_params(cli: &Cli, smax: f64, tol: f64) -> SweepParams {
    SweepParams {
        ds: cli.ds,
        s_max: smax,
        tol_residual: tol,
        ..Default::default()
    }
}

fn write_members(out: &Path, members: &[SweepMember]) -> Result<(), Error> {
    for member in members {
        let text = jsonio::geometry_json(&member.surface, &member.config_echo);
        write_atomic(&out.join(member.file_name()), &text)?;
        println!(
            "wrote {} (max residual {:.3e})",
            member.file_name(),
            member.residual_max
        );
    }
    write_atomic(&out.join("sweep.json"), &jsonio::sweep_json(members))?;
    println!("wrote sweep.json ({} members)", members.len());
    Ok(())
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> CommandResult {
    let order = IntegratorOrder::parse(args.order).map_err(CommandError::generation)?;
    let members: Vec<SweepMember> = if args.default_sweep {
        let params = sweep_params(cli, args.smax, args.tol);
        let mut members = default_sweep(&params).map_err(CommandError::generation)?;
        if args.include_negative_controls {
            members.extend(negative_controls(&params).map_err(CommandError::generation)?);
        }
        members
    } else {
        let kind = args.kind.ok_or_else(|| CommandError {
            phase: Phase::Generation,
            message: "pass --kind or --default-sweep".into(),
        })?;
        let config = ShootingConfig {
            d0: args.d0,
            theta0: args.theta0,
            s_max: args.smax,
            ds: cli.ds,
            tol_residual: args.tol,
            integrator_order: order,
        };
        let member = match kind {
            KindArg::Hyperplane => hyperplane_member(args.n),
            KindArg::Curve => curve_cylinder_member(&config, args.n),
            KindArg::Rotational => rotational_member(
                &ShootingConfig {
                    d0: args.cap_height,
                    theta0: 0.0,
                    ..config
                },
                args.n,
            ),
        }
        .map_err(CommandError::generation)?;
        vec![member]
    };
    write_members(&cli.out, &members).map_err(CommandError::generation)
}

fn resolve_input(cli: &Cli, input: &Path) -> PathBuf {
    if input.exists() {
        input.to_path_buf()
    } else {
        cli.out.join(input)
    }
}

fn cmd_spectrum(cli: &Cli, args: &SpectrumArgs) -> CommandResult {
    let path = resolve_input(cli, &args.input);
    let text = std::fs::read_to_string(&path).map_err(|e| CommandError::spectral(Error::Io(e)))?;
    let (surface, _) = jsonio::parse_geometry(&text).map_err(CommandError::spectral)?;
    let kind = match args.operator {
        OperatorArg::Drift => PotentialKind::DriftOnly,
        OperatorArg::Stability => PotentialKind::Stability,
    };
    let op = ground_state_transform(&surface, kind, &reduction_of(cli))
        .map_err(CommandError::spectral)?;
    let result = bottom_spectrum(&op, args.m).map_err(CommandError::spectral)?;

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "spectrum".into());
    let config = vec![
        ("input".to_string(), path.to_string_lossy().into_owned()),
        ("operator".to_string(), kind.as_str().to_string()),
        ("m".to_string(), args.m.to_string()),
        ("grid".to_string(), cli.grid.to_string()),
        ("radius".to_string(), format!("{:.17e}", cli.radius)),
    ];
    let base = cli.out.join(format!("{stem}_spectrum_{}", kind.as_str()));
    write_atomic(
        &base.with_extension("json"),
        &jsonio::spectrum_json(&result, &config),
    )
    .map_err(CommandError::spectral)?;
    println!(
        "{}: eigenvalues {:?}",
        base.with_extension("json").display(),
        result.eigenvalues
    );
    if args.emit_csv {
        let csv = jsonio::eigenvector_csv(&result, 0).map_err(CommandError::spectral)?;
        write_atomic(&base.with_extension("csv"), &csv).map_err(CommandError::spectral)?;
    }
    if args.emit_svg {
        let plot = svg::potential_plot(
            op.grid(),
            op.transformed_potential(),
            &result.eigenvectors[0],
            &format!("{} / {}", surface.id(), kind.as_str()),
        );
        write_atomic(&base.with_extension("svg"), &plot).map_err(CommandError::spectral)?;
    }
    Ok(())
}

fn members_from_sweep_file(path: &Path) -> Result<Vec<SweepMember>, Error> {
    let text = std::fs::read_to_string(path)?;
    let entries = jsonio::parse_sweep(&text)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut members = Vec::new();
    for (file, control) in entries {
        let geom_text = std::fs::read_to_string(dir.join(&file))?;
        let (surface, config) = jsonio::parse_geometry(&geom_text)?;
        let residual = expander_residual(&surface)?;
        let residual_max = max_abs_residual(&residual);
        let (surface, mean_convex) = if control.is_none() {
            surface.normalize_mean_convex()?
        } else {
            (surface, None)
        };
        let cone_angles = surface
            .profile()
            .map(|p| {
                let t0 = p.tangents()[0];
                let t1 = p.tangents()[p.len() - 1];
                vec![t0[1].atan2(t0[0]), t1[1].atan2(t1[0])]
            })
            .unwrap_or_default();
        let config_echo: Vec<(String, String)> = config.into_iter().collect();
        members.push(SweepMember {
            surface,
            config_echo,
            residual_max,
            mean_convex,
            cone_angles,
            control,
        });
    }
    Ok(members)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CommandResult {
    let verification_error = |message: String| CommandError {
        phase: Phase::Verification,
        message,
    };
    let members: Vec<SweepMember> = if args.default_sweep {
        let params = sweep_params(cli, 20.0, 1e-6);
        let mut members = default_sweep(&params).map_err(|e| verification_error(e.to_string()))?;
        if args.include_negative_controls {
            members
                .extend(negative_controls(&params).map_err(|e| verification_error(e.to_string()))?);
        }
        members
    } else {
        let input = args.input.clone().ok_or_else(|| CommandError {
            phase: Phase::Verification,
            message: "pass --input SWEEP or --default-sweep".into(),
        })?;
        let path = resolve_input(cli, &input);
        members_from_sweep_file(&path).map_err(|e| verification_error(e.to_string()))?
    };

    let mut report = run_full_suite(
        &members,
        &reduction_of(cli),
        cli.ds,
        args.theorem.as_deref(),
    );
    if args.timestamp {
        report.environment.timestamp = Some(now_utc());
    }
    for check in &report.checks {
        let status = match (check.error.is_some(), check.pass, check.expected_fail) {
            (true, _, _) => "ERROR",
            (_, true, false) => "pass",
            (_, false, true) => "expected-fail",
            (_, true, true) => "UNEXPECTED-PASS",
            (_, false, false) => "FAIL",
        };
        println!(
            "[{status}] {}/{} margin {:.3e} (tol {:.1e})",
            check.surface, check.name, check.margin, check.tolerance
        );
    }
    write_atomic(&cli.out.join("report.json"), &jsonio::report_json(&report))
        .map_err(|e| verification_error(e.to_string()))?;
    write_atomic(&cli.out.join("report.md"), &jsonio::report_md(&report))
        .map_err(|e| verification_error(e.to_string()))?;
    println!(
        "{} / {} checks as designed; report written to {}",
        report.count_pass(),
        report.checks.len(),
        cli.out.display()
    );
    if report.all_as_designed() {
        Ok(())
    } else {
        Err(verification_error(format!(
            "{} unexpected check results",
            report.unexpected().len()
        )))
    }
}

fn now_utc() -> String {
    // seconds since the epoch; enough for a stamp without a clock dependency
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn cmd_hermite(cli: &Cli, args: &HermiteArgs) -> CommandResult {
    if args.n < 1 {
        return Err(CommandError {
            phase: Phase::Spectral,
            message: "hermite table needs n >= 1".into(),
        });
    }
    // numeric eigenvalues of the 1-d factor, recomputed once
    let line =
        expanderlab::geometry::ExpanderSurface::hyperplane(1).map_err(CommandError::spectral)?;
    let op = ground_state_transform(&line, PotentialKind::DriftOnly, &reduction_of(cli))
        .map_err(CommandError::spectral)?;
    let factor = bottom_spectrum(&op, args.max_order + 1).map_err(CommandError::spectral)?;

    let mut csv = String::from("multi_index,exact,numeric,difference\n");
    println!("multi-index | exact | numeric | difference");
    for k in multi_indices(args.n, args.max_order) {
        let exact = hermite_eigenvalue(args.n, &k);
        let numeric: f64 = k.iter().map(|&ki| factor.eigenvalues[ki]).sum();
        let diff = numeric - exact;
        let key = k
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        println!("({key}) | {exact} | {numeric:.9} | {diff:.3e}");
        csv.push_str(&format!(
            "{key},{},{},{}\n",
            jsonio::fmt_float(exact),
            jsonio::fmt_float(numeric),
            jsonio::fmt_float(diff)
        ));
    }
    if args.emit_csv {
        let path = cli
            .out
            .join(format!("hermite_n{}_order{}.csv", args.n, args.max_order));
        write_atomic(&path, &csv).map_err(CommandError::spectral)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
