use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex;

use spatial_behaviour::analyzer::{
    analyze_mode, analyze_window, compare_solution_spaces, decide_autonomy, decide_controllability, mode_matrix,
    scalar_entry, Method, Status, SymbolicLevel, Verdict,
};
use spatial_behaviour::lattice::PeriodLattice;
use spatial_behaviour::polymatrix::{image_representation, MinorLimit};
use spatial_behaviour::problem::{parse_problem, ProblemFile};
use spatial_behaviour::report::{
    ClassicalDoc, IdentityDoc, InputEcho, ModeDoc, PatchDoc, RankSample, ReportDocument, SampleDoc, TrajectoryDoc,
    Verdicts,
};
use spatial_behaviour::spectral::{
    build_nonautonomy_witness, build_patching_trajectory, sample_rank, ExpPolySignal, ModeTrajectory,
    SVD_RANK_TOLERANCE,
};
use spatial_behaviour::{AnalysisError, ImageOutcome, PolyMatrix};

#[derive(Parser, Debug)]
#[command(
    name = "sbeh",
    version,
    about = "Autonomy and controllability of spatially periodic PDE behaviours"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide autonomy and controllability and print the per-mode table.
    Analyze(Common),
    /// Zero-past trajectory at a rank-deficient mode.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Mode index, comma separated (e.g. `1,0`).
        #[arg(allow_hyphen_values = true)]
        n_vec: String,
        /// Write the sampled trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Join two mode trajectories through the cutoff at a rank-constant mode.
    Patch {
        #[command(flatten)]
        common: Common,
        /// Mode index, comma separated.
        #[arg(allow_hyphen_values = true)]
        n_vec: String,
        /// Exponential rate of the past endpoint, e.g. `0`, `-1+2i`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        past_rate: String,
        /// Exponential rate of the future endpoint.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        future_rate: String,
        /// Write the sampled trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Numeric SVD rank of the mode matrix at sampled complex times.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Mode index, comma separated.
        #[arg(allow_hyphen_values = true)]
        n_vec: String,
    },
    /// Classical versus periodic autonomy for a scalar equation.
    Compare(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Problem file.
    file: PathBuf,
    /// Window radius (max norm of mode indices); overrides the file.
    #[arg(long)]
    window: Option<u32>,
    /// Symbolic certificate strength: off, basic or d1.
    #[arg(long)]
    symbolic: Option<SymbolicLevel>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Time horizon T of the cutoff.
    #[arg(long)]
    horizon: Option<f64>,
    /// Number of time samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Include wall-clock time in the JSON report.
    #[arg(long)]
    timing: bool,
}

struct Settings {
    window: u32,
    symbolic: SymbolicLevel,
    horizon: f64,
    samples: usize,
}

impl Settings {
    fn resolve(c: &Common, p: &ProblemFile) -> Result<Self> {
        let horizon = c.horizon.or(p.options.horizon).unwrap_or(4.0);
        if !(horizon > 0.0 && horizon.is_finite()) {
            bail!("horizon must be positive, got {horizon}");
        }
        Ok(Settings {
            window: c.window.or(p.options.window).unwrap_or(4),
            symbolic: c.symbolic.or(p.options.symbolic).unwrap_or(SymbolicLevel::Basic),
            horizon,
            samples: c.samples.or(p.options.samples).unwrap_or(50),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(c: &Common) -> Result<ProblemFile> {
    let text = fs::read_to_string(&c.file).with_context(|| format!("cannot read {}", c.file.display()))?;
    parse_problem(&text).with_context(|| format!("{}", c.file.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let start = Instant::now();
    let (common, mut doc) = match &cli.command {
        Command::Analyze(c) => {
            let p = load(c)?;
            let s = Settings::resolve(c, &p)?;
            (c, analyze(c, &p, &s)?)
        }
        Command::Compare(c) => {
            let p = load(c)?;
            let s = Settings::resolve(c, &p)?;
            (c, compare(c, &p, &s)?)
        }
        Command::Witness { common, n_vec, csv } => {
            let p = load(common)?;
            let s = Settings::resolve(common, &p)?;
            let n = parse_n_vec(n_vec, &p)?;
            (common, witness(common, &p, &s, &n, csv.as_deref())?)
        }
        Command::Patch {
            common,
            n_vec,
            past_rate,
            future_rate,
            csv,
        } => {
            let p = load(common)?;
            let s = Settings::resolve(common, &p)?;
            let n = parse_n_vec(n_vec, &p)?;
            let rates = [parse_rate(past_rate)?, parse_rate(future_rate)?];
            (common, patch(common, &p, &s, &n, rates, csv.as_deref())?)
        }
        Command::Sample { common, n_vec } => {
            let p = load(common)?;
            let s = Settings::resolve(common, &p)?;
            let n = parse_n_vec(n_vec, &p)?;
            (common, sample(common, &p, &s, &n)?)
        }
    };
    if common.timing {
        doc.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(path) = &common.json {
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        if path.as_os_str() == "-" {
            let _ = io::stdout().lock().write_all(text.as_bytes());
        } else {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(if doc.any_undecided() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

/// Human-readable text goes to stdout unless the JSON report does.
fn say(c: &Common, line: impl AsRef<str>) {
    if c.json.as_deref() != Some(Path::new("-")) {
        // a closed pipe (`| head`) is not an error worth reporting
        let _ = writeln!(io::stdout().lock(), "{}", line.as_ref());
    }
}

fn parse_n_vec(s: &str, p: &ProblemFile) -> Result<Vec<i64>> {
    let n: Vec<i64> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<i64>().with_context(|| format!("bad mode index `{s}`")))
            .collect::<Result<_>>()?
    };
    if n.len() != p.dimension {
        bail!("mode index has {} entries, dimension is {}", n.len(), p.dimension);
    }
    Ok(n)
}

fn parse_rate(s: &str) -> Result<Complex<f64>> {
    s.trim()
        .parse::<Complex<f64>>()
        .map_err(|_| anyhow::anyhow!("bad rate `{s}` (expected e.g. `0.5`, `-1+2i`)"))
}

fn echo(p: &ProblemFile, s: &Settings) -> InputEcho {
    InputEcho::new(p, s.window, s.symbolic, s.horizon, s.samples)
}

fn fmt_n(n: &[i64]) -> String {
    format!("({})", n.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
}

fn fmt_verdict(v: &Verdict) -> String {
    let status = match v.status {
        Status::Proved => "PROVED",
        Status::Refuted => "REFUTED",
        Status::UndecidedWithinWindow => "UNDECIDED_WITHIN_WINDOW",
    };
    let method = match v.method {
        Method::Symbolic => "SYMBOLIC",
        Method::Window => "WINDOW",
    };
    let mut out = format!("{status} [{method}, window {}]", v.window_radius);
    if let Some(w) = &v.witness {
        out.push_str(&format!(
            " witness n = {}, rank {}/{}, rank-drop gcd {}",
            fmt_n(&w.n_vec),
            w.generic_rank,
            w.cols,
            w.rank_drop_gcd
        ));
    }
    out.push_str(&format!("\n    {}", v.detail));
    out
}

fn analyze(c: &Common, p: &ProblemFile, s: &Settings) -> Result<ReportDocument> {
    let aut = decide_autonomy(&p.matrix, &p.lattice, s.window, s.symbolic)?;
    let ctl = decide_controllability(&p.matrix, &p.lattice, s.window, s.symbolic)?;
    let modes = analyze_window(&p.matrix, &p.lattice, s.window, MinorLimit::default())?;

    say(c, format!("autonomy:        {}", fmt_verdict(&aut)));
    say(c, format!("controllability: {}", fmt_verdict(&ctl)));
    say(c, format!("modes with |n|_inf <= {}:", s.window));
    say(
        c,
        format!(
            "  {:<16} {:<20} {:>5}  {:<4} {:<4} {}",
            "n", "v", "rank", "aut", "ctl", "rank-drop gcd"
        ),
    );
    for r in &modes {
        let v = r.v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        say(
            c,
            format!(
                "  {:<16} {:<20} {:>5}  {:<4} {:<4} {}",
                fmt_n(&r.n_vec),
                format!("({v})"),
                format!("{}/{}", r.generic_rank, r.cols),
                yes_no(r.autonomous_mode),
                yes_no(r.controllable_mode),
                r.rank_drop_gcd
            ),
        );
    }

    let mut doc = ReportDocument::new(echo(p, s));
    doc.verdicts = Some(Verdicts {
        autonomy: (&aut).into(),
        controllability: (&ctl).into(),
    });
    doc.modes = modes.iter().map(ModeDoc::from).collect();
    if let Ok(entry) = scalar_entry(&p.matrix) {
        match compare_solution_spaces(entry, &p.lattice, s.window, s.symbolic) {
            Ok(cmp) => {
                say(c, classical_line(&cmp.classical, cmp.degree, cmp.degree_at_zero));
                doc.classical = Some(ClassicalDoc::new(entry.to_string(), &cmp));
            }
            Err(AnalysisError::ZeroPolynomial) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(doc)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classical_line(
    status: &spatial_behaviour::analyzer::ClassicalStatus,
    degree: u32,
    degree_at_zero: Option<u32>,
) -> String {
    use spatial_behaviour::analyzer::ClassicalStatus::*;
    let at_zero = degree_at_zero.map_or("undefined".to_string(), |d| d.to_string());
    let verdict = match status {
        Autonomous => "autonomous",
        NotAutonomous => "not autonomous",
        CriterionInapplicable => "criterion inapplicable (p(0, t) is zero)",
    };
    format!("classical (all distributions): {verdict}; deg p = {degree}, deg p(0, t) = {at_zero}")
}

fn compare(c: &Common, p: &ProblemFile, s: &Settings) -> Result<ReportDocument> {
    let entry = scalar_entry(&p.matrix)?;
    let cmp = compare_solution_spaces(entry, &p.lattice, s.window, s.symbolic)?;
    say(c, format!("p = {entry}"));
    say(c, classical_line(&cmp.classical, cmp.degree, cmp.degree_at_zero));
    say(c, format!("periodic autonomy: {}", fmt_verdict(&cmp.periodic)));
    let mut doc = ReportDocument::new(echo(p, s));
    doc.classical = Some(ClassicalDoc::new(entry.to_string(), &cmp));
    Ok(doc)
}

/// Uniform grid over `[-T/2, 3T/2]` with `points` points.
fn time_grid(horizon: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    let (a, b) = (-0.5 * horizon, 1.5 * horizon);
    (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect()
}

fn trajectory_doc(tr: &ModeTrajectory<f64>, horizon: f64, grid: &[f64], csv: Option<&Path>) -> Result<TrajectoryDoc> {
    let mut past: f64 = 0.0;
    let mut future: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for &t in grid {
        let peak = tr.signal.eval(t).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if t < 0.0 {
            past = past.max(peak);
        } else {
            future = future.max(peak);
        }
        if let Some(r) = tr.residual(t) {
            residual = residual.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    if let Some(path) = csv {
        fs::write(path, tr.to_csv(grid)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(TrajectoryDoc {
        n: tr.n_vec.clone(),
        v: tr.v.iter().map(|q| q.to_string()).collect(),
        provenance: tr.provenance,
        horizon,
        identity: tr.identity.as_ref().map(IdentityDoc::from),
        patch: tr.patch.as_ref().map(PatchDoc::from),
        max_abs_past: past,
        max_abs_future: future,
        max_residual: residual,
        csv: csv.map(|p| p.display().to_string()),
    })
}

fn print_trajectory(c: &Common, d: &TrajectoryDoc) {
    say(c, format!("mode n = {}, v = ({})", fmt_n(&d.n), d.v.join(", ")));
    if let Some(id) = &d.identity {
        say(
            c,
            format!(
                "exact identity {}: {}",
                id.statement,
                if id.verified { "verified" } else { "FAILED" }
            ),
        );
        if let Some(k) = &id.kernel {
            say(c, format!("  k = ({})", k.join(", ")));
        }
        if let Some(n) = &id.image {
            let rows: Vec<String> = n.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            say(c, format!("  N = {}", rows.join(" ")));
        }
    }
    say(c, format!("max |w| for t < 0: {:.3e}", d.max_abs_past));
    say(c, format!("max |w| for t >= 0: {:.3e}", d.max_abs_future));
    say(c, format!("max residual on grid: {:.3e}", d.max_residual));
    if let Some(p) = &d.patch {
        say(
            c,
            format!(
                "endpoint membership residuals {:.3e}, {:.3e}; latent recovery {:.3e}, {:.3e}",
                p.membership_residual[0], p.membership_residual[1], p.recovery_mismatch[0], p.recovery_mismatch[1]
            ),
        );
        say(
            c,
            format!(
                "literal-formula residual (diagnostic): {:.3e}",
                p.literal_formula_residual
            ),
        );
    }
}

fn witness(c: &Common, p: &ProblemFile, s: &Settings, n: &[i64], csv: Option<&Path>) -> Result<ReportDocument> {
    let tr = build_nonautonomy_witness(&p.matrix, &p.lattice, n, s.horizon)?;
    let grid = time_grid(s.horizon, s.samples);
    let d = trajectory_doc(&tr, s.horizon, &grid, csv)?;
    print_trajectory(c, &d);
    let mut doc = ReportDocument::new(echo(p, s));
    doc.trajectory = Some(d);
    Ok(doc)
}

/// `N(d/dt)(e^{λt}·(1, .., 1))`, a trajectory of the mode behaviour.
fn exponential_endpoint(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n: &[i64],
    rate: Complex<f64>,
) -> Result<ExpPolySignal<f64>> {
    let mm = mode_matrix(m, lattice, n)?;
    let rep = match image_representation(&mm) {
        ImageOutcome::Image(rep) => rep,
        ImageOutcome::NotRankConstant => bail!("mode not rank constant: patching is not available"),
    };
    let latent = rep.image.cols();
    if latent == 0 {
        return Ok(ExpPolySignal::zero(mm.cols()));
    }
    let ell = ExpPolySignal::exponential(rate, vec![Complex::new(1.0, 0.0); latent]);
    Ok(ell.apply_exact(&rep.image)?)
}

fn patch(
    c: &Common,
    p: &ProblemFile,
    s: &Settings,
    n: &[i64],
    rates: [Complex<f64>; 2],
    csv: Option<&Path>,
) -> Result<ReportDocument> {
    let past = exponential_endpoint(&p.matrix, &p.lattice, n, rates[0])?;
    let future = exponential_endpoint(&p.matrix, &p.lattice, n, rates[1])?;
    let tr = build_patching_trajectory(&p.matrix, &p.lattice, n, &past, &future, s.horizon)?;
    let grid = time_grid(s.horizon, s.samples);
    let d = trajectory_doc(&tr, s.horizon, &grid, csv)?;
    say(
        c,
        format!(
            "endpoints: e^(({})t) for t < 0, e^(({})t) for t > {}",
            rates[0], rates[1], s.horizon
        ),
    );
    print_trajectory(c, &d);
    let mut doc = ReportDocument::new(echo(p, s));
    doc.trajectory = Some(d);
    Ok(doc)
}

/// Low-discrepancy points in the square `[-T, T] × [-T, T]`.
fn time_samples(horizon: f64, count: usize) -> Vec<Complex<f64>> {
    const A: f64 = 0.618_033_988_749_894_8;
    const B: f64 = 0.414_213_562_373_095_1;
    (1..=count)
        .map(|k| {
            let (x, y) = ((k as f64 * A).fract(), (k as f64 * B).fract());
            Complex::new(horizon * (2.0 * x - 1.0), horizon * (2.0 * y - 1.0))
        })
        .collect()
}

fn sample(c: &Common, p: &ProblemFile, s: &Settings, n: &[i64]) -> Result<ReportDocument> {
    let report = analyze_mode(&p.matrix, &p.lattice, n)?;
    let ts = time_samples(s.horizon, s.samples);
    let ranks = sample_rank(&p.matrix, &p.lattice, n, &ts)?;
    let disagreements = ranks.iter().filter(|&&r| r != report.generic_rank).count();
    say(
        c,
        format!(
            "mode n = {}: exact rank {}/{}, rank-drop gcd {}",
            fmt_n(n),
            report.generic_rank,
            report.cols,
            report.rank_drop_gcd
        ),
    );
    say(
        c,
        format!("{} samples, {} with a different numeric rank", ts.len(), disagreements),
    );
    let mut doc = ReportDocument::new(echo(p, s));
    doc.samples = Some(SampleDoc {
        n: n.to_vec(),
        generic_rank: report.generic_rank,
        rank_drop_gcd: report.rank_drop_gcd.to_string(),
        svd_tolerance: SVD_RANK_TOLERANCE,
        samples: ts
            .iter()
            .zip(&ranks)
            .map(|(t, &rank)| RankSample { t: [t.re, t.im], rank })
            .collect(),
        disagreements,
    });
    Ok(doc)
}
