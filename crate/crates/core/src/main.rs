use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seifert_floer::complex::{cohomology, FilteredComplex};
use seifert_floer::cs_q::FourManifoldModel;
use seifert_floer::job::{Command, JobSpec, YSource};
use seifert_floer::level::{format_rational, parse_rational, Level, Rational};
use seifert_floer::obstruction::{AssumptionSet, CertOutcome, ObstructionReport, Route, ThetaEvidence, Verdict};
use seifert_floer::seifert::{enumerate_flat_connections, validate_seifert, FlatConnection, SeifertData};
use seifert_floer::snf::AbelianGroup;
use seifert_floer::sweep::{sweep_example, SweepTable};

#[derive(Parser)]
#[command(name = "seifert-floer", version, about = "Flat connections, filtered Floer data and embedding obstructions for Brieskorn spheres")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Seifert multiplicities, e.g. `2 3 11`.
    multiplicities: Vec<i64>,
    /// Read a JSON job instead of positional multiplicities.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum XArg {
    Homotopy,
    Product,
}

#[derive(Subcommand)]
enum Cmd {
    /// List irreducible flat connections.
    Flat(Common),
    /// Chern-Simons values.
    Cs(Common),
    /// Floer gradings mod 8.
    Grading(Common),
    /// Cohomology of the complex below a level (default inf).
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: Option<String>,
    },
    /// Evaluate the embedding obstruction.
    Obstruct {
        #[command(flatten)]
        common: Common,
        /// Test only this level.
        #[arg(long)]
        r: Option<String>,
        /// Assume [θ] ≠ 0 via the Frøyshov invariant.
        #[arg(long)]
        assume_froyshov: bool,
        #[arg(long, value_enum, default_value = "homotopy")]
        x: XArg,
    },
    /// Run the Σ(2,3,6k−1) family.
    SweepExample {
        k_min: u32,
        k_max: u32,
        #[arg(long)]
        json: bool,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn load_job(common: &Common, command: Command) -> Result<JobSpec, Failure> {
    match &common.input {
        Some(path) => {
            if !common.multiplicities.is_empty() {
                return Err(Failure("give either --input or multiplicities, not both".into()));
            }
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {}", path.display(), e)))?;
            let job = JobSpec::from_json(&text)?;
            if job.command != command {
                return Err(Failure(format!(
                    "job command `{}` does not match the subcommand `{}`",
                    serde_json::to_value(job.command)?.as_str().unwrap_or_default(),
                    serde_json::to_value(command)?.as_str().unwrap_or_default()
                )));
            }
            Ok(job)
        }
        None => Ok(JobSpec {
            command,
            y: YSource::Seifert(validate_seifert(&common.multiplicities)?),
            x: None,
            assumptions: AssumptionSet::none(),
            r: None,
        }),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, human: String) -> Result<(), Failure> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", human);
    }
    Ok(())
}

fn signed(e: i8) -> &'static str {
    if e > 0 {
        "+1"
    } else {
        "-1"
    }
}

fn connections(y: &SeifertData) -> Result<Vec<FlatConnection>, Failure> {
    Ok(enumerate_flat_connections(y)?)
}

#[derive(Serialize)]
struct FlatOut<'a> {
    y: &'a SeifertData,
    connections: Vec<FlatConnection>,
}

fn cmd_flat(common: &Common) -> Result<ExitCode, Failure> {
    let job = load_job(common, Command::Flat)?;
    let y = job.seifert("flat")?;
    let out = FlatOut { y, connections: connections(y)? };
    let mut h = String::new();
    writeln!(h, "{}: {} irreducible flat connections", y, out.connections.len())?;
    writeln!(h, "{:<24} {:>4} {:>8} {:>14} {:>7}", "rotation", "eps", "e", "cs", "grading")?;
    for c in &out.connections {
        let rot: Vec<String> = c.rotation_numbers.iter().map(i64::to_string).collect();
        writeln!(
            h,
            "{:<24} {:>4} {:>8} {:>14} {:>7}",
            format!("({})", rot.join(",")),
            signed(c.fiber_holonomy),
            c.e_label,
            format_rational(&c.cs_value),
            c.grading
        )?;
    }
    emit(common.json, &out, h)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CsRow {
    id: String,
    e: i64,
    cs: String,
}

#[derive(Serialize)]
struct CsOut {
    y: String,
    trivial: String,
    values: Vec<CsRow>,
}

fn cmd_cs(common: &Common) -> Result<ExitCode, Failure> {
    let job = load_job(common, Command::Cs)?;
    let y = job.seifert("cs")?;
    let values: Vec<CsRow> = connections(y)?
        .iter()
        .map(|c| CsRow { id: c.id(), e: c.e_label, cs: format_rational(&c.cs_value) })
        .collect();
    let out = CsOut { y: y.to_string(), trivial: "0".into(), values };
    let mut h = String::new();
    writeln!(h, "{}: cs(theta) = {}", out.y, out.trivial)?;
    for v in &out.values {
        writeln!(h, "{:<24} e={:<8} cs={}", v.id, v.e, v.cs)?;
    }
    emit(common.json, &out, h)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GradingRow {
    id: String,
    e: i64,
    grading: u8,
}

#[derive(Serialize)]
struct GradingOut {
    y: String,
    odd: usize,
    even: usize,
    gradings: Vec<GradingRow>,
}

fn cmd_grading(common: &Common) -> Result<ExitCode, Failure> {
    let job = load_job(common, Command::Grading)?;
    let y = job.seifert("grading")?;
    let gradings: Vec<GradingRow> =
        connections(y)?.iter().map(|c| GradingRow { id: c.id(), e: c.e_label, grading: c.grading }).collect();
    let odd = gradings.iter().filter(|g| g.grading % 2 == 1).count();
    let out = GradingOut { y: y.to_string(), odd, even: gradings.len() - odd, gradings };
    let mut h = String::new();
    writeln!(h, "{}: {} odd, {} even", out.y, out.odd, out.even)?;
    for g in &out.gradings {
        writeln!(h, "{:<24} e={:<8} grading={}", g.id, g.e, g.grading)?;
    }
    emit(common.json, &out, h)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DegreeGroup {
    degree: u8,
    rank: usize,
    torsion: Vec<i64>,
    group: String,
}

#[derive(Serialize)]
struct HomologyOut {
    r: Level,
    groups: Vec<DegreeGroup>,
}

fn parse_level(r: &Option<String>) -> Result<Option<Rational>, Failure> {
    r.as_deref().map(parse_rational).transpose().map_err(Failure::from)
}

fn cmd_homology(common: &Common, r: &Option<String>) -> Result<ExitCode, Failure> {
    let mut job = load_job(common, Command::Homology)?;
    if let Some(r) = parse_level(r)? {
        job.r = Some(r);
    }
    let c: FilteredComplex = job.complex()?;
    let level = job.level();
    let groups = (0..8u8)
        .map(|d| {
            let g: AbelianGroup = cohomology(&c, d, level)?;
            Ok(DegreeGroup { degree: d, rank: g.rank, torsion: g.torsion.clone(), group: g.to_string() })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let out = HomologyOut { r: level, groups };
    let mut h = String::new();
    writeln!(h, "cohomology below r = {}", out.r)?;
    for g in &out.groups {
        writeln!(h, "HF^{} = {}", g.degree, g.group)?;
    }
    emit(common.json, &out, h)?;
    Ok(ExitCode::SUCCESS)
}

fn render_report(rep: &ObstructionReport) -> Result<String, std::fmt::Error> {
    let w = &rep.window;
    let mut h = String::new();
    writeln!(h, "Y = {}, X = {}", rep.y, rep.x)?;
    writeln!(h, "l_Y = {}, cover length = {}, Q = {}, r_max = {}", w.l_y, w.cover_length, w.q, w.r_max)?;
    let excluded: Vec<String> = w.excluded.iter().map(format_rational).collect();
    writeln!(h, "excluded levels: [{}]", excluded.join(", "))?;
    for t in &rep.tested {
        match &t.outcome {
            CertOutcome::Certified { certificate } => {
                let theta = match &certificate.theta {
                    ThetaEvidence::Assumed { source } => format!("assumed ({})", source),
                    ThetaEvidence::Explicit { restricted } => format!("explicit counts {:?}", restricted.coefficients),
                };
                let route = match &certificate.route {
                    Route::Parity => "parity".to_string(),
                    Route::DualWitness { functional } => {
                        let parts: Vec<String> = functional.iter().map(|(id, v)| format!("{}:{}", id, v)).collect();
                        format!("dual witness [{}]", parts.join(", "))
                    }
                };
                writeln!(h, "r = {}: certified; theta {}; route {}", t.r, theta, route)?;
            }
            CertOutcome::Failed { reasons } => {
                let codes: Vec<&str> = reasons.iter().map(|r| r.code()).collect();
                writeln!(h, "r = {}: failed ({})", t.r, codes.join(", "))?;
            }
        }
    }
    let verdict = match rep.verdict {
        Verdict::Obstructed => "obstructed",
        Verdict::Inconclusive => "inconclusive",
    };
    writeln!(h, "verdict: {}", verdict)?;
    if !rep.reasons.is_empty() {
        writeln!(h, "reasons: {}", rep.reasons.join(", "))?;
    }
    for a in &rep.axioms {
        writeln!(h, "axiom: {}", a)?;
    }
    Ok(h)
}

fn verdict_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Obstructed => ExitCode::SUCCESS,
        Verdict::Inconclusive => ExitCode::from(1),
    }
}

fn cmd_obstruct(common: &Common, r: &Option<String>, froyshov: bool, x: XArg) -> Result<ExitCode, Failure> {
    let mut job = load_job(common, Command::Obstruct)?;
    if let Some(r) = parse_level(r)? {
        job.r = Some(r);
    }
    if froyshov {
        job.assumptions.theta_nonvanishing = AssumptionSet::froyshov().theta_nonvanishing;
    }
    if job.x.is_none() {
        job.x = Some(match x {
            XArg::Homotopy => FourManifoldModel::HomotopyS3xS1,
            XArg::Product => FourManifoldModel::Product { y: job.seifert("obstruct --x product")?.clone() },
        });
    }
    let report = job.obstruct()?;
    emit(common.json, &report, render_report(&report)?)?;
    Ok(verdict_code(report.verdict))
}

fn render_sweep(t: &SweepTable) -> Result<String, std::fmt::Error> {
    let mut h = String::new();
    writeln!(h, "{:>3} {:<14} {:>6} {:>5} {:>5} {:>4} {:>6} {:>8} {:<13}", "k", "Y", "conns", "odd", "even", "l_Y", "r_max", "cert r", "verdict")?;
    for row in &t.rows {
        let m = row.multiplicities;
        let cert = row.certified_at.map_or("-".to_string(), |r| r.to_string());
        let verdict = match row.verdict {
            Verdict::Obstructed => "obstructed",
            Verdict::Inconclusive => "inconclusive",
        };
        writeln!(
            h,
            "{:>3} {:<14} {:>6} {:>5} {:>5} {:>4} {:>6} {:>8} {:<13}",
            row.k,
            format!("({},{},{})", m[0], m[1], m[2]),
            row.connections,
            row.odd,
            row.even,
            row.l_y,
            row.r_max,
            cert,
            verdict
        )?;
    }
    match t.first_parity_failure {
        Some(k) => writeln!(h, "first parity failure: k = {}", k)?,
        None => writeln!(h, "first parity failure: none up to k = {}", t.k_max)?,
    }
    Ok(h)
}

fn cmd_sweep(k_min: u32, k_max: u32, json: bool) -> Result<ExitCode, Failure> {
    let table = sweep_example(k_min, k_max)?;
    emit(json, &table, render_sweep(&table)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Flat(c) => cmd_flat(c),
        Cmd::Cs(c) => cmd_cs(c),
        Cmd::Grading(c) => cmd_grading(c),
        Cmd::Homology { common, r } => cmd_homology(common, r),
        Cmd::Obstruct { common, r, assume_froyshov, x } => cmd_obstruct(common, r, *assume_froyshov, *x),
        Cmd::SweepExample { k_min, k_max, json } => cmd_sweep(*k_min, *k_max, *json),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
