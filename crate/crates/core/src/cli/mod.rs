//! The `dpsgeo` command line.
//!
//! Every command renders its whole output into memory before anything is
//! written, so a failed run leaves no partial file behind. Exit codes: 0
//! success, 1 parse or usage error, 2 domain or validation error, 3 I/O
//! error.

pub mod format;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::attack::{
    eve_info_closed_form, gamma_param, key_rate, optimize_mu, AttackParams, DEFAULT_MU_BRACKET,
};
use crate::cloner::{
    apply_cloner, detect, disturbance_to_cloner, informational_radius, optimal_cloner,
    quality_radius_of, ClonerKind, ClonerSpec,
};
use crate::geometry::{lift_site, regular_triangulation, WeightedSite};
use crate::protocol::{equatorial_test_states, protocol_test_states};
use crate::seb::{
    seb_bruteforce_oracle_seeded, seb_core_set, seb_improved, seb_of_balls, QInfoBall, SiteSet,
    ORACLE_SEED, PURE_SITE_LIMIT,
};
use crate::state::{fidelity_from_radius, parse_state_set, BlochVector, StateEntry};
use format::{sig6, Chart, Series};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "dpsgeo",
    version,
    about = "Information-geometric security analysis of DPS QKD"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Coreset,
    Improved,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ucm,
    Phasecov,
}

impl From<KindArg> for ClonerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ucm => ClonerKind::Ucm,
            KindArg::Phasecov => ClonerKind::PhaseCovariant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Both,
    Ucm,
    Phasecov,
}

/// Options shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Solver tolerance in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Seed for the oracle's random search directions.
    #[arg(long, default_value_t = ORACLE_SEED)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest enclosing ball of the states in a state-set file.
    Ball {
        states: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Coreset)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Clone the protocol states and compare the resulting ball with the detection bound.
    Attack {
        #[arg(long, value_enum)]
        cloner: KindArg,
        /// Disturbance D = 1 - F in [0, 0.5].
        #[arg(long, allow_negative_numbers = true)]
        disturbance: f64,
        #[arg(long, value_enum, default_value_t = Algorithm::Coreset)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Informational radii over a uniform disturbance grid on [0, 0.5].
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepKind::Both)]
        cloner: SweepKind,
        #[arg(long, default_value_t = 51)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Coreset)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Beam-splitting leakage and key rate over a grid of pulse intensities.
    DpsRate {
        /// Transmittances, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.9",
            allow_negative_numbers = true
        )]
        tau: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 2.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Regular triangulation of the lifted states of a state-set file.
    Triangulate {
        states: PathBuf,
        /// Also write the hull surface as an OFF mesh.
        #[arg(long)]
        off: Option<PathBuf>,
        /// Check the empty-power-sphere property and report it on stderr.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[command(flatten)]
        common: Common,
    },
}

/// Rendered output plus any diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
    pub extra_files: Vec<(PathBuf, String)>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Ball { common, .. }
        | Command::Attack { common, .. }
        | Command::Sweep { common, .. }
        | Command::DpsRate { common, .. }
        | Command::Triangulate { common, .. } => common,
    }
}

pub fn execute(cmd: &Command) -> CliResult<()> {
    let common = common_of(cmd);
    if !(common.eps > 0.0 && common.eps < 1.0) {
        return Err(CliError::Usage(format!(
            "--eps must lie in (0, 1), got {}",
            common.eps
        )));
    }
    let mut targets: Vec<&Path> = common.out.iter().map(|p| p.as_path()).collect();
    if let Command::Triangulate { off: Some(off), .. } = cmd {
        targets.push(off);
    }
    for t in &targets {
        check_writable(t)?;
    }
    let output = render(cmd)?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    match &common.out {
        Some(path) => fs::write(path, &output.body)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", output.body),
    }
    for (path, text) in &output.extra_files {
        fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// The parent directory of `path` must exist, be a directory and accept writes.
fn check_writable(path: &Path) -> CliResult<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let meta =
        fs::metadata(&parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    if !meta.is_dir() {
        return Err(CliError::Io(format!(
            "{} is not a directory",
            parent.display()
        )));
    }
    if meta.permissions().readonly() {
        return Err(CliError::Io(format!(
            "{} is not writable",
            parent.display()
        )));
    }
    if path.is_dir() {
        return Err(CliError::Io(format!("{} is a directory", path.display())));
    }
    Ok(())
}

/// Runs a command without touching the file system beyond its inputs.
pub fn render(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Ball {
            states,
            algorithm,
            format,
            common,
        } => cmd_ball(states, *algorithm, *format, common),
        Command::Attack {
            cloner,
            disturbance,
            algorithm,
            format,
            common,
        } => cmd_attack((*cloner).into(), *disturbance, *algorithm, *format, common),
        Command::Sweep {
            cloner,
            points,
            algorithm,
            format,
            common,
        } => cmd_sweep(*cloner, *points, *algorithm, *format, common),
        Command::DpsRate {
            tau,
            nu,
            mu_min,
            mu_max,
            points,
            format,
            ..
        } => cmd_dps_rate(tau, *nu, (*mu_min, *mu_max), *points, *format),
        Command::Triangulate {
            states,
            off,
            verbose,
            format,
            ..
        } => cmd_triangulate(states, off.as_deref(), *verbose, *format),
    }
}

fn read_states(path: &Path) -> CliResult<Vec<StateEntry>> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_state_set(&text).map_err(|e| match e {
        crate::state::StateFileError::Syntax { .. } | crate::state::StateFileError::Schema(_) => {
            CliError::Usage(format!("{}: {e}", path.display()))
        }
        crate::state::StateFileError::State { .. } => {
            CliError::Domain(format!("{}: {e}", path.display()))
        }
    })
}

fn solve(sites: &SiteSet, algorithm: Algorithm, eps: f64, seed: u64) -> CliResult<QInfoBall> {
    Ok(match algorithm {
        Algorithm::Coreset if sites.has_radii() => seb_of_balls(sites, eps)?,
        Algorithm::Coreset => seb_core_set(sites, eps)?,
        Algorithm::Improved => seb_improved(sites, eps)?,
        Algorithm::Oracle => seb_bruteforce_oracle_seeded(sites, seed)?.ball,
    })
}

fn ball_json(ball: &QInfoBall) -> serde_json::Value {
    serde_json::to_value(ball).expect("plain numbers")
}

fn cmd_ball(
    path: &Path,
    algorithm: Algorithm,
    format: OutputFormat,
    common: &Common,
) -> CliResult<Output> {
    let entries = read_states(path)?;
    let sites: Vec<BlochVector> = entries.iter().map(|e| e.state).collect();
    let radii: Vec<f64> = entries
        .iter()
        .map(|e| e.radius_bits.unwrap_or(0.0))
        .collect();
    let set = SiteSet::with_radii(sites, radii)?;
    let ball = solve(&set, algorithm, common.eps, common.seed)?;
    let body = match format {
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&ball_json(&ball)).expect("plain numbers")
        ),
        OutputFormat::Csv => format!(
            "x,y,z,radius_bits,iterations\n{},{},{},{},{}\n",
            sig6(ball.center.x()),
            sig6(ball.center.y()),
            sig6(ball.center.z()),
            sig6(ball.radius),
            ball.iterations
        ),
        OutputFormat::Svg => {
            return Err(CliError::Usage("ball supports --format json or csv".into()))
        }
    };
    Ok(Output {
        body,
        ..Output::default()
    })
}

/// Clones `states` through `spec`, pulling images onto radius `1 - 1e-6` if
/// they are pure. The flag reports whether any image was pulled in.
fn cloned_sites(spec: &ClonerSpec, states: &[BlochVector]) -> CliResult<(SiteSet, bool)> {
    let mut clamped = false;
    let sites = states
        .iter()
        .map(|s| {
            let img = apply_cloner(spec, s);
            if img.radius() >= PURE_SITE_LIMIT {
                clamped = true;
                img.clamp_radius(PURE_SITE_LIMIT * (1.0 - 1e-12))
            } else {
                img
            }
        })
        .collect();
    Ok((SiteSet::new(sites)?, clamped))
}

/// Summary of one cloner attack on the protocol states.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AttackReport {
    pub kind: ClonerKind,
    pub disturbance: f64,
    pub cloner: ClonerSpec,
    pub fidelity_bob: f64,
    pub fidelity_eve: f64,
    pub quality_radius: f64,
    pub detected: bool,
    pub r_star: f64,
    pub r_star_closed_form: f64,
    pub r_star_eve: f64,
    pub secure: bool,
    pub clamped: bool,
    pub ball: QInfoBall,
}

/// Relative margin by which the solver radius must exceed the optimal
/// cloner's radius before a run counts as secure; ties are insecure.
pub const SECURE_MARGIN: f64 = 1e-9;

pub fn attack_report(
    kind: ClonerKind,
    d: f64,
    algorithm: Algorithm,
    eps: f64,
    seed: u64,
) -> CliResult<AttackReport> {
    let spec = disturbance_to_cloner(d, kind)?;
    let (sites, clamped) = cloned_sites(&spec, &protocol_test_states())?;
    let ball = solve(&sites, algorithm, eps, seed)?;
    let detection = detect(&spec);
    let r_star_eve = informational_radius(optimal_cloner(kind).shrink_xy())?;
    Ok(AttackReport {
        kind,
        disturbance: d,
        cloner: spec,
        fidelity_bob: spec.fidelity(),
        fidelity_eve: fidelity_from_radius(spec.complementary().shrink_xy())?,
        quality_radius: quality_radius_of(&spec),
        detected: detection.detected,
        r_star: ball.radius,
        r_star_closed_form: detection.r_star_bound,
        r_star_eve,
        secure: ball.radius > r_star_eve * (1.0 + SECURE_MARGIN),
        clamped,
        ball,
    })
}

fn cmd_attack(
    kind: ClonerKind,
    d: f64,
    algorithm: Algorithm,
    format: OutputFormat,
    common: &Common,
) -> CliResult<Output> {
    let report = attack_report(kind, d, algorithm, common.eps, common.seed)?;
    let body = match format {
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("plain values")
        ),
        OutputFormat::Csv => {
            let mut s = String::from(
                "kind,D,fidelity_bob,fidelity_eve,quality_radius,detected,r_star,r_star_closed_form,r_star_eve,secure,clamped\n",
            );
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                kind.as_str(),
                sig6(d),
                sig6(report.fidelity_bob),
                sig6(report.fidelity_eve),
                sig6(report.quality_radius),
                report.detected,
                sig6(report.r_star),
                sig6(report.r_star_closed_form),
                sig6(report.r_star_eve),
                report.secure,
                report.clamped
            );
            s
        }
        OutputFormat::Svg => {
            return Err(CliError::Usage(
                "attack supports --format json or csv".into(),
            ))
        }
    };
    Ok(Output {
        body,
        ..Output::default()
    })
}

/// One row of the disturbance sweep. The leading fields describe the
/// eavesdropper's clone, the `bob_` fields the clone left on the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub d: f64,
    pub kind: ClonerKind,
    pub eve: ClonerSpec,
    pub closed_form_radius: f64,
    pub solver_radius: f64,
    pub clamped: bool,
    pub bob: ClonerSpec,
    pub bob_closed_form_radius: f64,
    pub bob_solver_radius: f64,
}

pub const SWEEP_HEADER: &str = "D,kind,fidelity,shrink_xy,shrink_z,closed_form_radius,solver_radius,clamped,bob_fidelity,bob_closed_form_radius,bob_solver_radius";

fn closed_form(spec: &ClonerSpec) -> CliResult<f64> {
    Ok(informational_radius(spec.shrink_xy().min(PURE_SITE_LIMIT))?)
}

pub fn sweep_rows(
    kinds: &[ClonerKind],
    points: usize,
    algorithm: Algorithm,
    eps: f64,
    seed: u64,
) -> CliResult<Vec<SweepRow>> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    let equator = equatorial_test_states();
    let mut rows = Vec::with_capacity(points * kinds.len());
    for &kind in kinds {
        for i in 0..points {
            let d = 0.5 * i as f64 / (points - 1) as f64;
            let bob = disturbance_to_cloner(d, kind)?;
            let eve = bob.complementary();
            let (eve_sites, eve_clamped) = cloned_sites(&eve, &equator)?;
            let (bob_sites, bob_clamped) = cloned_sites(&bob, &equator)?;
            rows.push(SweepRow {
                d,
                kind,
                eve,
                closed_form_radius: closed_form(&eve)?,
                solver_radius: solve(&eve_sites, algorithm, eps, seed)?.radius,
                clamped: eve_clamped || bob_clamped,
                bob,
                bob_closed_form_radius: closed_form(&bob)?,
                bob_solver_radius: solve(&bob_sites, algorithm, eps, seed)?.radius,
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            sig6(r.d),
            r.kind.as_str(),
            sig6(r.eve.fidelity()),
            sig6(r.eve.shrink_xy()),
            sig6(r.eve.shrink_z()),
            sig6(r.closed_form_radius),
            sig6(r.solver_radius),
            r.clamped,
            sig6(r.bob.fidelity()),
            sig6(r.bob_closed_form_radius),
            sig6(r.bob_solver_radius)
        );
    }
    s
}

fn kind_color(kind: ClonerKind) -> &'static str {
    match kind {
        ClonerKind::Ucm => "#1f77b4",
        ClonerKind::PhaseCovariant => "#d62728",
    }
}

fn kind_label(kind: ClonerKind) -> &'static str {
    match kind {
        ClonerKind::Ucm => "UCM",
        ClonerKind::PhaseCovariant => "phase-covariant",
    }
}

fn sweep_svg(rows: &[SweepRow], kinds: &[ClonerKind]) -> String {
    let mut series = Vec::new();
    for &kind in kinds {
        let of_kind: Vec<&SweepRow> = rows.iter().filter(|r| r.kind == kind).collect();
        series.push(Series {
            label: format!("{} 1 - S(eta_E), closed form", kind_label(kind)),
            color: kind_color(kind),
            dashed: false,
            points: of_kind
                .iter()
                .map(|r| (r.d, r.closed_form_radius))
                .collect(),
        });
        series.push(Series {
            label: format!("{} enclosing ball, solver", kind_label(kind)),
            color: kind_color(kind),
            dashed: true,
            points: of_kind.iter().map(|r| (r.d, r.solver_radius)).collect(),
        });
    }
    Chart {
        title: "Eavesdropper informational radius vs disturbance",
        x_label: "disturbance D = 1 - F",
        y_label: "radius r* (bits)",
        series,
    }
    .render()
}

fn cmd_sweep(
    which: SweepKind,
    points: usize,
    algorithm: Algorithm,
    format: OutputFormat,
    common: &Common,
) -> CliResult<Output> {
    let kinds: Vec<ClonerKind> = match which {
        SweepKind::Both => vec![ClonerKind::Ucm, ClonerKind::PhaseCovariant],
        SweepKind::Ucm => vec![ClonerKind::Ucm],
        SweepKind::Phasecov => vec![ClonerKind::PhaseCovariant],
    };
    let rows = sweep_rows(&kinds, points, algorithm, common.eps, common.seed)?;
    let mut warnings = Vec::new();
    let clamped = rows.iter().filter(|r| r.clamped).count();
    if clamped > 0 {
        warnings.push(format!(
            "{clamped} rows have pure clones pulled in to radius 1 - 1e-6"
        ));
    }
    let body = match format {
        OutputFormat::Csv => sweep_csv(&rows),
        OutputFormat::Svg => sweep_svg(&rows, &kinds),
        OutputFormat::Json => {
            return Err(CliError::Usage("sweep supports --format csv or svg".into()))
        }
    };
    Ok(Output {
        body,
        warnings,
        ..Output::default()
    })
}

pub const DPS_RATE_HEADER: &str = "mu,tau,gamma,I_E,K";

fn cmd_dps_rate(
    taus: &[f64],
    nu: f64,
    (mu_min, mu_max): (f64, f64),
    points: usize,
    format: OutputFormat,
) -> CliResult<Output> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    if !(mu_min >= 0.0 && mu_max > mu_min) {
        return Err(CliError::Domain(format!(
            "empty intensity range [{mu_min}, {mu_max}]"
        )));
    }
    let mut csv = String::from(DPS_RATE_HEADER);
    csv.push('\n');
    let mut footer = String::new();
    let mut series = Vec::new();
    let palette = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];
    for (n, &tau) in taus.iter().enumerate() {
        let mut curve = Vec::with_capacity(points);
        for i in 0..points {
            let mu = mu_min + (mu_max - mu_min) * i as f64 / (points - 1) as f64;
            let p = AttackParams::new(mu, tau, nu)?;
            let k = key_rate(&p);
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                sig6(mu),
                sig6(tau),
                sig6(gamma_param(&p)),
                sig6(eve_info_closed_form(&p)),
                sig6(k)
            );
            curve.push((mu, k));
        }
        if tau > 0.0 {
            let opt = optimize_mu(tau, nu, DEFAULT_MU_BRACKET)?;
            let _ = writeln!(
                footer,
                "# tau={},mu_star={},K_star={},saturated={}",
                sig6(tau),
                sig6(opt.mu_star),
                sig6(opt.k_star),
                opt.saturated
            );
        }
        series.push(Series {
            label: format!("K(mu), tau = {}", sig6(tau)),
            color: palette[n % palette.len()],
            dashed: false,
            points: curve,
        });
    }
    let body = match format {
        OutputFormat::Csv => csv + &footer,
        OutputFormat::Svg => Chart {
            title: "Beam-splitting key rate",
            x_label: "mean photon number mu",
            y_label: "K (bits per second)",
            series,
        }
        .render(),
        OutputFormat::Json => {
            return Err(CliError::Usage(
                "dps-rate supports --format csv or svg".into(),
            ))
        }
    };
    Ok(Output {
        body,
        ..Output::default()
    })
}

fn cmd_triangulate(
    path: &Path,
    off: Option<&Path>,
    verbose: bool,
    format: OutputFormat,
) -> CliResult<Output> {
    if format != OutputFormat::Json {
        return Err(CliError::Usage("triangulate supports --format json".into()));
    }
    let entries = read_states(path)?;
    let mut warnings = Vec::new();
    let mut states: Vec<BlochVector> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if let Some(j) = states.iter().position(|s| s.distance(&e.state) <= 1e-12) {
            warnings.push(format!("state {i} repeats state {j}; dropped"));
        } else {
            states.push(e.state);
        }
    }
    if states.len() < 4 {
        return Err(CliError::Domain(format!(
            "need at least 4 distinct states, got {}",
            states.len()
        )));
    }
    let lifted = states
        .iter()
        .enumerate()
        .map(|(index, s)| {
            lift_site(s).map_err(|_| {
                CliError::Domain(format!("state {index} is pure and cannot be lifted"))
            })
        })
        .collect::<CliResult<Vec<WeightedSite>>>()?;
    let tri = regular_triangulation(&lifted)?;
    if verbose {
        let clearance = tri.min_sphere_clearance()?;
        if clearance < -1e-9 {
            return Err(CliError::Domain(format!(
                "empty-sphere check failed: clearance {clearance:e}"
            )));
        }
        warnings.push(format!(
            "{} tetrahedra, {} hull facets, empty-sphere clearance {clearance:e}",
            tri.tetrahedra.len(),
            tri.hull_facets.len()
        ));
    }
    let mut doc = tri.to_json();
    doc["states"] = json!(states);
    let body = format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).expect("plain values")
    );
    let extra_files = off
        .map(|p| vec![(p.to_path_buf(), tri.to_off())])
        .unwrap_or_default();
    Ok(Output {
        body,
        warnings,
        extra_files,
    })
}
