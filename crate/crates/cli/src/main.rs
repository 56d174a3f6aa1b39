use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use helixlab_core::dsl::{parse_curve_document, parse_scalar_document, CurveSpec};
use helixlab_core::frenet::{
    analyze_curve, classify_curve, frenet_apparatus, read_sampled_csv, sampled_apparatus, CurveClass,
    FrenetApparatus,
};
use helixlab_core::scalar::ScalarFn;
use helixlab_core::slant::{
    analyze, brute_force_axis, default_tol, json_string, sigma_profile, to_json_string, write_n_dot_u_csv,
    write_profiles_csv, write_sigma_csv, SlantReport, Verdict,
};
use helixlab_core::synth::{synth_curve, SynthRequest};
use helixlab_core::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "helixlab", version, about = "Curves in Minkowski 3-space: Frenet apparatus, slant helices, synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the causal class of a curve.
    Classify(InputArgs),
    /// Frenet frame, curvature and torsion at every sample, as CSV.
    Frenet(OutputArgs),
    /// Characterization function profiles, as CSV.
    Sigma(OutputArgs),
    /// Decide whether a curve is a slant helix; JSON report.
    Slant(SlantArgs),
    /// Integrate the Frenet equations for prescribed curvature and torsion.
    Synth(SynthArgs),
    /// Brute-force search for the best axis candidate; JSON.
    Oracle(OutputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Timelike,
    SpacelikeSpacelikeN,
    SpacelikeTimelikeN,
    SpacelikeNullN,
    Lightlike,
}

impl From<ClassArg> for CurveClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Timelike => CurveClass::Timelike,
            ClassArg::SpacelikeSpacelikeN => CurveClass::SpacelikeSpacelikeN,
            ClassArg::SpacelikeTimelikeN => CurveClass::SpacelikeTimelikeN,
            ClassArg::SpacelikeNullN => CurveClass::SpacelikeNullN,
            ClassArg::Lightlike => CurveClass::Lightlike,
        }
    }
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Analytic curve document (`key = value` lines).
    #[arg(long, conflicts_with = "csv")]
    curve: Option<PathBuf>,
    /// Sampled curve, CSV with header `t,x,y,z` or `s,x,y,z`.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Arc-length samples when resampling CSV input.
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    /// Use this frame class instead of the detected one (curve documents only).
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
}

#[derive(Args)]
struct OutputArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SlantArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Constancy tolerance [default: 1e-6, or 1e-4 for CSV input].
    #[arg(long, env = "HELIXLAB_TOL")]
    tol: Option<f64>,
    /// Always run the brute-force check; exit 1 if it disagrees.
    #[arg(long)]
    oracle: bool,
    /// Also write sigma.csv and n_dot_u.csv.
    #[arg(long)]
    emit_profiles: bool,
    /// Directory for profile CSVs.
    #[arg(long, default_value = ".")]
    profiles_dir: PathBuf,
    /// Report file; with --batch, the directory for per-file reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Analyze every .curve and .csv file in a directory.
    #[arg(long, conflicts_with_all = ["curve", "csv"])]
    batch: Option<PathBuf>,
    /// Worker threads for --batch [default: logical CPU count].
    #[arg(long, requires = "batch")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    /// Curvature: an expression in `s` or a `.fn` document. Ignored for null frames.
    #[arg(long, default_value = "1")]
    kappa: String,
    /// Torsion: an expression in `s` or a `.fn` document.
    #[arg(long)]
    tau: String,
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"], allow_negative_numbers = true, required = true)]
    range: Vec<f64>,
    /// Output spacing in arc length.
    #[arg(long)]
    step: f64,
    /// Curve CSV (`s,x,y,z`); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the frame and invariants at every output point.
    #[arg(long)]
    frames: Option<PathBuf>,
}

/// Exit status 2 for bad input or usage, 1 for failed analysis.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Analysis(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Analysis(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Analysis(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Analysis(e.to_string())
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: helixlab_core::Result<T>) -> Outcome<T> {
    r.map_err(|e| {
        let f = Failure::from(e);
        let msg = format!("{}: {}", path.display(), f.message());
        match f {
            Failure::Usage(_) => Failure::Usage(msg),
            Failure::Analysis(_) => Failure::Analysis(msg),
        }
    })
}

enum Input {
    Curve(PathBuf, CurveSpec),
    Csv(PathBuf),
}

fn input(args: &InputArgs) -> Outcome<Input> {
    match (&args.curve, &args.csv) {
        (Some(p), None) => Ok(Input::Curve(p.clone(), with_path(p, parse_curve_document(&read_text(p)?))?)),
        (None, Some(p)) => {
            if args.class.is_some() {
                return Err(Failure::Usage("--class applies to --curve input only".into()));
            }
            Ok(Input::Csv(p.clone()))
        }
        _ => Err(Failure::Usage("one of --curve or --csv is required".into())),
    }
}

fn load(args: &InputArgs) -> Outcome<FrenetApparatus> {
    match input(args)? {
        Input::Curve(p, spec) => match args.class {
            Some(c) => with_path(&p, frenet_apparatus(&spec, c.into())),
            None => with_path(&p, analyze_curve(&spec)),
        },
        Input::Csv(p) => {
            let file = fs::File::open(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            let curve = with_path(&p, read_sampled_csv(file))?;
            with_path(&p, sampled_apparatus(&curve, args.samples))
        }
    }
}

/// Writes the whole document at once, so a failure never leaves half of it on stdout.
fn emit(out: Option<&Path>, bytes: &[u8]) -> Outcome<()> {
    let r = match out {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().lock().write_all(bytes).map_err(|e| e.to_string()),
    };
    r.map_err(Failure::Usage)
}

fn buffer(f: impl FnOnce(&mut Vec<u8>) -> helixlab_core::Result<()>) -> Outcome<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn classify(args: &InputArgs) -> Outcome<()> {
    let class = match input(args)? {
        Input::Curve(p, spec) => match args.class {
            Some(c) => c.into(),
            None => with_path(&p, classify_curve(&spec, spec.samples))?,
        },
        Input::Csv(_) => load(args)?.class,
    };
    emit(None, format!("{}\n", class.name()).as_bytes())
}

fn frenet(args: &OutputArgs) -> Outcome<()> {
    let app = load(&args.input)?;
    emit(args.out.as_deref(), &buffer(|b| app.write_csv(b))?)
}

fn sigma(args: &OutputArgs) -> Outcome<()> {
    let app = load(&args.input)?;
    let profiles = sigma_profile(&app);
    emit(args.out.as_deref(), &buffer(|b| write_profiles_csv(&profiles, b))?)
}

#[derive(Serialize)]
struct OracleJson {
    class: &'static str,
    #[serde(rename = "U")]
    u: [f64; 3],
    c: f64,
    n_variance: f64,
}

fn oracle(args: &OutputArgs) -> Outcome<()> {
    let app = load(&args.input)?;
    let found = brute_force_axis(&app)?;
    let json = json_string(&OracleJson {
        class: app.class.name(),
        u: found.u.to_array(),
        c: found.c_value,
        n_variance: found.n_variance,
    });
    emit(args.out.as_deref(), json.as_bytes())
}

struct SlantRun {
    report: SlantReport,
    json: String,
    disagreement: Option<String>,
}

fn run_slant(app: &FrenetApparatus, args: &SlantArgs, profiles: Option<(PathBuf, PathBuf)>) -> Outcome<SlantRun> {
    let tol = args.tol.unwrap_or_else(|| default_tol(app.source));
    let mut report = analyze(app, tol)?;
    if args.oracle && report.oracle.is_none() {
        report.oracle = Some(brute_force_axis(app)?);
    }
    if let Some((sigma_path, dot_path)) = profiles {
        let sigma = buffer(|b| write_sigma_csv(&report, b))?;
        let u = report.axis.as_ref().or(report.oracle.as_ref()).map(|a| a.u);
        let dots = match u {
            Some(u) => buffer(|b| write_n_dot_u_csv(app, u, b))?,
            None => b"s,value\n".to_vec(),
        };
        emit(Some(&sigma_path), &sigma)?;
        emit(Some(&dot_path), &dots)?;
    }
    let disagreement = match (args.oracle, report.agrees(), &report.oracle) {
        (true, Some(false), Some(o)) => Some(format!(
            "analysis says {:?} (axis {}), oracle finds variance {:e} along {:?} at tolerance {:e}",
            report.verdict,
            report
                .axis
                .as_ref()
                .map_or("none".to_string(), |a| format!("{:?}", a.u.to_array())),
            o.n_variance,
            o.u.to_array(),
            tol
        )),
        _ => None,
    };
    Ok(SlantRun {
        json: to_json_string(&report),
        report,
        disagreement,
    })
}

fn slant(args: &SlantArgs) -> Outcome<()> {
    if let Some(tol) = args.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
        }
    }
    if let Some(dir) = &args.batch {
        return batch(dir, args);
    }
    let app = load(&args.input)?;
    let profiles = if args.emit_profiles {
        fs::create_dir_all(&args.profiles_dir)
            .map_err(|e| Failure::Usage(format!("{}: {e}", args.profiles_dir.display())))?;
        Some((args.profiles_dir.join("sigma.csv"), args.profiles_dir.join("n_dot_u.csv")))
    } else {
        None
    };
    let run = run_slant(&app, args, profiles)?;
    emit(args.out.as_deref(), run.json.as_bytes())?;
    match run.disagreement {
        Some(msg) => Err(Failure::Analysis(msg)),
        None => Ok(()),
    }
}

fn batch(dir: &Path, args: &SlantArgs) -> Outcome<()> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|x| x.to_str()), Some("curve" | "csv")))
        .collect();
    files.sort();
    let out_dir = args.out.clone().unwrap_or_else(|| dir.to_path_buf());
    fs::create_dir_all(&out_dir).map_err(|e| Failure::Usage(format!("{}: {e}", out_dir.display())))?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, files.len().max(1));

    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Outcome<Verdict>>>> = files.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                *results[i].lock().unwrap() = Some(batch_one(path, &out_dir, args));
            });
        }
    });

    let mut summary = String::new();
    let (mut slant_count, mut worst) = (0, 0u8);
    for (path, r) in files.iter().zip(results) {
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        match r.into_inner().unwrap().expect("every file is processed") {
            Ok(v) => {
                if matches!(v, Verdict::Slant | Verdict::DegenerateAlwaysSlant) {
                    slant_count += 1;
                }
                summary.push_str(&format!("{name}\t{v:?}\n"));
            }
            Err(f) => {
                worst = worst.max(f.code());
                summary.push_str(&format!("{name}\terror: {}\n", f.message()));
            }
        }
    }
    let failed = summary.matches("\terror: ").count();
    summary.push_str(&format!(
        "{} files, {slant_count} slant, {failed} failed\n",
        files.len()
    ));
    emit(None, summary.as_bytes())?;
    match worst {
        0 => Ok(()),
        2 => Err(Failure::Usage(format!("{failed} of {} files failed", files.len()))),
        _ => Err(Failure::Analysis(format!("{failed} of {} files failed", files.len()))),
    }
}

fn batch_one(path: &Path, out_dir: &Path, args: &SlantArgs) -> Outcome<Verdict> {
    let input = InputArgs {
        curve: None,
        csv: None,
        ..args.input.clone()
    };
    let input = match path.extension().and_then(|x| x.to_str()) {
        Some("curve") => InputArgs {
            curve: Some(path.to_path_buf()),
            ..input
        },
        _ => InputArgs {
            csv: Some(path.to_path_buf()),
            class: None,
            ..input
        },
    };
    let stem = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let app = load(&input)?;
    let profiles = args.emit_profiles.then(|| {
        (
            out_dir.join(format!("{stem}.sigma.csv")),
            out_dir.join(format!("{stem}.n_dot_u.csv")),
        )
    });
    let run = run_slant(&app, args, profiles)?;
    emit(Some(&out_dir.join(format!("{stem}.json"))), run.json.as_bytes())?;
    match run.disagreement {
        Some(msg) => Err(Failure::Analysis(msg)),
        None => Ok(run.report.verdict),
    }
}

fn scalar(text: &str) -> Outcome<ScalarFn> {
    let path = Path::new(text);
    if path.extension().is_some_and(|x| x == "fn") && path.is_file() {
        let spec = with_path(path, parse_scalar_document(&read_text(path)?))?;
        return Ok(ScalarFn::from_expr(spec.f));
    }
    Ok(ScalarFn::parse(text)?)
}

fn synth(args: &SynthArgs) -> Outcome<()> {
    let class: CurveClass = args.class.into();
    let kappa = if class.is_null_frame() {
        ScalarFn::Const(1.0)
    } else {
        scalar(&args.kappa)?
    };
    let req = SynthRequest::new(class, kappa, scalar(&args.tau)?, (args.range[0], args.range[1]), args.step);
    let result = synth_curve(&req)?;
    let curve = buffer(|b| result.write_curve_csv(b))?;
    if let Some(p) = &args.frames {
        emit(Some(p), &buffer(|b| result.apparatus.write_csv(b))?)?;
    }
    emit(args.out.as_deref(), &curve)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Frenet(a) => frenet(a),
        Command::Sigma(a) => sigma(a),
        Command::Slant(a) => slant(a),
        Command::Synth(a) => synth(a),
        Command::Oracle(a) => oracle(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("helixlab: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
