use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde_json::{json, Value};

use sl3knot::analysis::{
    connected_sum_check, fibered_criterion, verify_mixing_combinatorics, InvariantReport,
};
use sl3knot::corpus::{verify_corpus, Corpus};
use sl3knot::diagram::LinkDiagram;
use sl3knot::homfly::{load_knotinfo_csv, oracle_compare, ConventionConfig, HomflyEngine, CONVENTION_ENV};
use sl3knot::report::RunMeta;
use sl3knot::statesum::StateSum;
use sl3knot::table::{load_expected, reproduce_table};
use sl3knot::Error;

const DEFAULT_SEED: u64 = 20_240_607;

#[derive(Parser, Debug)]
#[command(name = "sl3knot", version, about = "sl3 link polynomial via web state sums")]
struct Cli {
    /// Largest crossing count either engine will enumerate.
    #[arg(long, global = true, default_value_t = sl3knot::statesum::DEFAULT_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    cap: usize,
    /// Worker threads for the parallel state sum (default: all cores).
    #[arg(long, global = true, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// KnotInfo convention config (TOML).
    #[arg(long, global = true, env = CONVENTION_ENV)]
    conventions: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial, leading coefficients and Seifert data of one diagram.
    Compute(InputArgs),
    /// Coefficient formulas and fiberedness on a TOML corpus.
    VerifyTheorems {
        corpus: PathBuf,
        /// Corpus entry names joined by '+', checked as a connected sum.
        #[arg(long = "connected-sum")]
        connected_sums: Vec<String>,
    },
    /// Leading coefficients of tabulated HOMFLY data against the reference table.
    Table {
        #[arg(long)]
        csv: PathBuf,
        /// Reference `name,positive_braid,gamma3` CSV.
        #[arg(long)]
        expected: PathBuf,
        /// Directory with `<name>.pd` positive diagrams overriding the CSV's.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// State sum against the specialized HOMFLY polynomial.
    OracleCompare(MultiInputArgs),
    /// Random O-to-W flips on positive diagrams.
    OwExperiment {
        #[command(flatten)]
        inputs: MultiInputArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Brute-force semi-mixed support counts.
    MixingCombinatorics {
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        /// Run lengths `a_1,b_1,...` for the state-level sum (needs m_min = m_max).
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Braid word `<strands>:[g1,g2,...]`.
    #[arg(long)]
    braid: Option<String>,
    /// PD file path, or inline PD text.
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Args, Debug)]
struct MultiInputArgs {
    #[arg(long)]
    braid: Vec<String>,
    #[arg(long)]
    pd: Vec<String>,
    #[arg(long)]
    corpus: Option<PathBuf>,
}

/// Why a run failed, mapped onto the exit-code contract.
enum Failure {
    Verification(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Calibration(_) | Error::InexactDivision(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_pd(arg: &str) -> Result<LinkDiagram, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        LinkDiagram::from_pd_str(&std::fs::read_to_string(path)?)
    } else {
        LinkDiagram::from_pd_str(arg)
    }
}

fn collect_inputs(m: &MultiInputArgs) -> Result<Vec<(String, LinkDiagram)>, Error> {
    let mut out = Vec::new();
    for b in &m.braid {
        out.push((b.clone(), LinkDiagram::from_braid_str(b)?));
    }
    for p in &m.pd {
        out.push((p.clone(), read_pd(p)?));
    }
    if let Some(path) = &m.corpus {
        out.extend(Corpus::load(path)?.diagrams()?);
    }
    if out.is_empty() {
        return Err(Error::Precondition("no input diagrams given".into()));
    }
    Ok(out)
}

struct Ctx {
    ss: StateSum,
    hf: HomflyEngine,
    cfg: ConventionConfig,
    format: Format,
}

impl Ctx {
    /// Emits a report: JSON wraps it with run metadata, CSV writes the rows,
    /// text prints the prepared lines.
    fn emit(&self, json: Value, header: &[&str], rows: Vec<Vec<String>>, text: Vec<String>) -> Result<(), Failure> {
        match self.write(json, header, rows, text) {
            // a closed reader (e.g. `| head`) is not an error of the run
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| Failure::Input(e.to_string())),
        }
    }

    fn write(&self, json: Value, header: &[&str], rows: Vec<Vec<String>>, text: Vec<String>) -> io::Result<()> {
        let mut out = io::stdout().lock();
        match self.format {
            Format::Json => {
                let doc = json!({ "meta": RunMeta::new(&self.cfg), "report": json });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Text => {
                for line in text {
                    writeln!(out, "{line}")?;
                }
            }
        }
        Ok(())
    }
}

fn cmd_compute(ctx: &Ctx, input: &InputArgs) -> Outcome {
    let d = match (&input.braid, &input.pd) {
        (Some(b), _) => LinkDiagram::from_braid_str(b)?,
        (None, Some(p)) => read_pd(p)?,
        (None, None) => unreachable!("clap enforces one input"),
    };
    let r = InvariantReport::compute(&d, &ctx.ss)?;
    let fields = [
        ("polynomial", r.polynomial.to_string()),
        ("n", r.n.to_string()),
        ("gamma1", r.gamma1.to_string()),
        ("gamma2", r.gamma2.to_string()),
        ("gamma3", r.gamma3.to_string()),
        ("v", r.v.to_string()),
        ("e", r.e.to_string()),
        ("e_prime", r.e_prime.to_string()),
        ("mu", r.mu.to_string()),
        ("theta", r.theta.to_string()),
        ("positive", r.positive.to_string()),
        ("fibered", r.is_fibered_criterion.map_or("n/a".into(), |b| b.to_string())),
        ("braid_positivity_obstructed", r.braid_positivity_obstructed.to_string()),
    ];
    let mut text: Vec<String> = fields.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    if !r.reasons.is_empty() {
        text.push(format!("reasons: {}", r.reasons.iter().join("; ")));
    }
    let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let row = fields.iter().map(|(_, v)| v.clone()).collect();
    ctx.emit(serde_json::to_value(&r).expect("serializable"), &header, vec![row], text)?;
    Ok(true)
}

fn cmd_verify(ctx: &Ctx, path: &Path, sums: &[String]) -> Outcome {
    let corpus = Corpus::load(path)?;
    if corpus.is_empty() {
        eprintln!("warning: corpus {} has no diagrams; nothing checked", path.display());
    }
    let results = verify_corpus(&corpus, &ctx.ss)?;
    let diagrams: BTreeMap<String, LinkDiagram> = corpus.diagrams()?.into_iter().collect();
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut all = true;
    for r in &results {
        let d = &diagrams[&r.name];
        let fibered = if d.is_connected() { Some(fibered_criterion(d, &ctx.ss)?) } else { None };
        let ok = r.passed() && fibered.as_ref().is_none_or(|f| f.consistent);
        all &= ok;
        let failures = r
            .theorems
            .failures()
            .into_iter()
            .chain(r.expected.iter().filter(|c| !c.passed()))
            .map(|c| format!("{} expected {} got {}", c.name, c.expected, c.actual))
            .collect_vec();
        let tree = fibered.as_ref().map_or("n/a".to_string(), |f| f.is_tree.to_string());
        text.push(format!(
            "{} {}: gamma = ({}, {}, {}), reduced tree: {tree}{}",
            if ok { "PASS" } else { "FAIL" },
            r.name,
            r.theorems.gammas.gamma1,
            r.theorems.gammas.gamma2,
            r.theorems.gammas.gamma3,
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) }
        ));
        rows.push(vec![
            r.name.clone(),
            ok.to_string(),
            r.theorems.gammas.gamma2.to_string(),
            r.theorems.gammas.gamma3.to_string(),
            tree,
            failures.join("; "),
        ]);
        json_rows.push(json!({ "result": r, "fibered": fibered, "passed": ok }));
    }
    let mut sum_reports = Vec::new();
    for spec in sums {
        let parts = spec
            .split('+')
            .map(|n| {
                diagrams
                    .get(n.trim())
                    .cloned()
                    .ok_or_else(|| Failure::Input(format!("connected-sum part {n:?} is not in the corpus")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rep = connected_sum_check(&parts, &ctx.ss)?;
        all &= rep.passed();
        text.push(format!("{} connected sum {spec}", if rep.passed() { "PASS" } else { "FAIL" }));
        rows.push(vec![spec.clone(), rep.passed().to_string(), rep.sum.gamma2.to_string(), rep.sum.gamma3.to_string(), String::new(), String::new()]);
        sum_reports.push(json!({ "parts": spec, "report": rep, "passed": rep.passed() }));
    }
    let passed = rows.iter().filter(|r| r[1] == "true").count();
    text.push(format!("{passed}/{} passed", rows.len()));
    ctx.emit(
        json!({ "diagrams": json_rows, "connected_sums": sum_reports, "passed": all }),
        &["name", "passed", "gamma2", "gamma3", "reduced_tree", "failures"],
        rows,
        text,
    )?;
    Ok(all)
}

fn cmd_table(ctx: &Ctx, csv_path: &Path, expected: &Path, fixtures: Option<&Path>) -> Outcome {
    let rows = load_knotinfo_csv(File::open(csv_path).map_err(Error::from)?)?;
    let expected = load_expected(File::open(expected).map_err(Error::from)?)?;
    let mut extra = BTreeMap::new();
    if let Some(dir) = fixtures {
        for x in &expected {
            for name in [x.name.clone(), x.name.replace('_', "")] {
                let p = dir.join(format!("{name}.pd"));
                if p.is_file() {
                    extra.insert(x.name.clone(), read_pd(&p.to_string_lossy())?);
                    break;
                }
            }
        }
    }
    let report = reproduce_table(&rows, &expected, &ctx.cfg, &extra, &ctx.ss)?;
    let yn = |b: bool| if b { "Y" } else { "N" };
    let mut text = vec![format!(
        "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8}  match",
        "knot", "gamma2", "gamma3", "expect", "braid+", "obstruct"
    )];
    let mut rows_out = Vec::new();
    for r in &report.rows {
        text.push(format!(
            "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8}  {}",
            r.name,
            r.gamma2,
            r.gamma3,
            r.expected_gamma3,
            yn(r.expected_positive_braid),
            yn(r.obstructed),
            if r.matches() { "ok" } else { "MISMATCH" }
        ));
        rows_out.push(vec![
            r.name.clone(),
            r.gamma2.to_string(),
            r.gamma3.to_string(),
            r.expected_gamma3.to_string(),
            yn(r.expected_positive_braid).into(),
            yn(r.obstructed).into(),
            r.matches().to_string(),
        ]);
    }
    for m in &report.missing {
        text.push(format!("{m:<10} missing from the data"));
    }
    text.push(format!("{}/{} rows match", report.matched(), expected.len()));
    ctx.emit(
        serde_json::to_value(&report).expect("serializable"),
        &["name", "gamma2", "gamma3", "expected_gamma3", "positive_braid", "obstructed", "matches"],
        rows_out,
        text,
    )?;
    Ok(report.passed())
}

fn cmd_oracle(ctx: &Ctx, inputs: &MultiInputArgs) -> Outcome {
    let diagrams = collect_inputs(inputs)?;
    let mut all = true;
    let (mut text, mut rows, mut json_rows) = (Vec::new(), Vec::new(), Vec::new());
    for (name, d) in &diagrams {
        match oracle_compare(d, &ctx.ss, &ctx.hf) {
            Ok(c) => {
                all &= c.equal;
                text.push(format!("{} {name}: {}", if c.equal { "equal" } else { "DIFFERENT" }, c.state_sum));
                rows.push(vec![name.clone(), c.equal.to_string(), c.state_sum.to_string(), c.specialized.to_string()]);
                json_rows.push(json!({ "input": name, "comparison": c }));
            }
            Err(e @ Error::CapExceeded { .. }) => {
                eprintln!("notice: skipping {name}: {e}");
                rows.push(vec![name.clone(), "skipped".into(), String::new(), String::new()]);
                json_rows.push(json!({ "input": name, "skipped": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    ctx.emit(json!(json_rows), &["input", "equal", "state_sum", "specialized"], rows, text)?;
    Ok(all)
}

fn cmd_ow(ctx: &Ctx, inputs: &MultiInputArgs, trials: usize, seed: u64) -> Outcome {
    let diagrams = collect_inputs(inputs)?;
    let mut all = true;
    let (mut text, mut rows, mut json_rows) = (Vec::new(), Vec::new(), Vec::new());
    for (i, (name, d)) in diagrams.iter().enumerate() {
        let r = ctx.ss.ow_move_experiment(d, trials, seed.wrapping_add(i as u64))?;
        let ok = r.violations == 0 && r.web_violations == 0;
        all &= ok;
        let hist = r.degree_changes.iter().map(|(k, c)| format!("{k:+}:{c}")).join(" ");
        text.push(format!(
            "{} {name}: {} flips, degree changes {hist}, violations {}/{}",
            if ok { "PASS" } else { "FAIL" },
            r.trials,
            r.violations,
            r.web_violations
        ));
        rows.push(vec![name.clone(), r.trials.to_string(), hist, r.violations.to_string(), r.web_violations.to_string()]);
        json_rows.push(json!({ "input": name, "report": r }));
    }
    ctx.emit(
        json!({ "seed": seed, "runs": json_rows }),
        &["input", "trials", "degree_changes", "violations", "web_violations"],
        rows,
        text,
    )?;
    Ok(all)
}

fn cmd_mixing(ctx: &Ctx, m_min: usize, m_max: usize, profile: Option<&[usize]>) -> Outcome {
    if m_min > m_max {
        return Err(Failure::Input(format!("empty range {m_min}..={m_max}")));
    }
    if profile.is_some() && m_min != m_max {
        return Err(Failure::Input("--profile needs a single mixing index".into()));
    }
    let mut all = true;
    let (mut text, mut rows, mut reports) = (Vec::new(), Vec::new(), Vec::new());
    for m in m_min..=m_max {
        let r = verify_mixing_combinatorics(m, profile)?;
        all &= r.passed();
        let failed = r.checks.iter().filter(|c| !c.passed()).count();
        text.push(format!(
            "{} m={m}: {} supports, {failed} failed count checks, alternating sums {} (supports) {} (states)",
            if r.passed() { "PASS" } else { "FAIL" },
            r.counts.values().sum::<i64>(),
            r.support_alternating_sum,
            r.state_alternating_sum
        ));
        rows.push(vec![
            m.to_string(),
            r.counts.values().sum::<i64>().to_string(),
            failed.to_string(),
            r.support_alternating_sum.to_string(),
            r.state_alternating_sum.to_string(),
            r.passed().to_string(),
        ]);
        reports.push(r);
    }
    ctx.emit(
        serde_json::to_value(&reports).expect("serializable"),
        &["m", "supports", "failed_checks", "support_sum", "state_sum", "passed"],
        rows,
        text,
    )?;
    Ok(all)
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    let cfg = match &cli.conventions {
        Some(p) => ConventionConfig::load(p)?,
        None => ConventionConfig::default(),
    };
    let ctx = Ctx {
        ss: StateSum::with_cap(cli.cap),
        hf: HomflyEngine::with_cap(cli.cap),
        cfg,
        format: cli.format,
    };
    match &cli.command {
        Command::Compute(input) => cmd_compute(&ctx, input),
        Command::VerifyTheorems { corpus, connected_sums } => cmd_verify(&ctx, corpus, connected_sums),
        Command::Table { csv, expected, fixtures } => cmd_table(&ctx, csv, expected, fixtures.as_deref()),
        Command::OracleCompare(inputs) => cmd_oracle(&ctx, inputs),
        Command::OwExperiment { inputs, trials, seed } => cmd_ow(&ctx, inputs, *trials, *seed),
        Command::MixingCombinatorics { m_min, m_max, profile } => cmd_mixing(&ctx, *m_min, *m_max, profile.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
