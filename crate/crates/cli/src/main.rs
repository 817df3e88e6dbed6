use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use moyalex::color::{Bindings, ColorExpr};
use moyalex::file::DiagramFile;
use moyalex::normalize::{
    eval_at_one, link_potential, normalized_delta_with, state_contributions, Engine, InvariantResult, WellDefined,
};
use moyalex::rewrite::evaluate_diagram;
use moyalex::statesum::{self, crossing_label};
use moyalex::verify::{planarity_obstruction, run_suite, Report, Suite, Verdict};
use moyalex::weights::WeightTable;
use moyalex::{Diagram, Rational};

mod symbolic;

const WEIGHTS_ENV: &str = "MOYALEX_WEIGHT_TABLE";

#[derive(Parser)]
#[command(name = "moyalex", version, about = "Alexander polynomial of colored MOY graph diagrams")]
struct Cli {
    /// Weight table JSON; defaults to $MOYALEX_WEIGHT_TABLE, then the built-in table.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Worker threads when several input files are given.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Diagram files (JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Bind a color variable, e.g. `--color i=2`.
    #[arg(long = "color", value_name = "NAME=VALUE", value_parser = parse_binding)]
    colors: Vec<(String, i64)>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Statesum,
    Det,
    Rewrite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Relations,
    Moves,
    Properties,
    Engines,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Junit,
}

#[derive(Subcommand)]
enum Command {
    /// The normalized invariant Δ and its factors.
    Compute {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "statesum")]
        engine: EngineArg,
    },
    /// The raw bracket <D|δ> and the basepoint weight |δ|.
    Bracket {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "statesum")]
        engine: EngineArg,
    },
    /// Kauffman states with their weights; symbolic when colors are left unbound.
    States {
        #[command(flatten)]
        input: Input,
    },
    /// Planarity test: exit status 1 when a negative coefficient certifies non-planarity.
    Planarity {
        #[command(flatten)]
        input: Input,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Vec<SuiteArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Δ(1).
    Eval1 {
        #[command(flatten)]
        input: Input,
    },
    /// The potential-function side of a link's Alexander polynomial.
    Potential {
        #[command(flatten)]
        input: Input,
    },
    /// Re-serialize a diagram file, binding colors when given.
    Convert {
        #[command(flatten)]
        input: Input,
    },
}

fn parse_binding(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: i64 = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn load_table(path: Option<&Path>) -> Result<WeightTable> {
    let env = std::env::var_os(WEIGHTS_ENV).map(PathBuf::from);
    match path.map(Path::to_path_buf).or(env) {
        Some(p) => WeightTable::load(&p).with_context(|| format!("loading weight table {}", p.display())),
        None => Ok(WeightTable::builtin()),
    }
}

fn read_file(path: &Path) -> Result<DiagramFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    DiagramFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn bindings(colors: &[(String, i64)]) -> Bindings {
    colors.iter().cloned().collect()
}

/// Bind the given colors; variables left unbound default to 1, with a note on
/// standard error.
fn diagram(file: &DiagramFile, colors: &[(String, i64)]) -> Result<Diagram> {
    let mut b = bindings(colors);
    let free: Vec<String> = file.variables()?.into_iter().filter(|v| !b.contains_key(v)).collect();
    if !free.is_empty() {
        let s = if free.len() > 1 { "s" } else { "" };
        eprintln!("note: unbound color{s} {} set to 1", free.join(", "));
        b.extend(free.into_iter().map(|v| (v, 1)));
    }
    Ok(file.to_diagram(&b)?)
}

/// Output of one input file: text and exit status.
struct Outcome {
    text: String,
    status: u8,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, status: 0 }
    }
}

fn engine(e: EngineArg) -> Engine {
    match e {
        EngineArg::Det => Engine::Determinant,
        _ => Engine::StateSum,
    }
}

fn value_lines(label: &str, v: &Rational) -> String {
    match v.as_poly() {
        Some(p) => {
            let mut s = format!("{label} = {p}\n{label}(t) = {}\n", symbolic::t_form(&p));
            if let Some(f) = symbolic::factored(&p) {
                s += &format!("{label}(t) = {f}\n");
            }
            s
        }
        None => format!("{label} = {v}\n"),
    }
}

fn compute(d: &Diagram, table: &WeightTable, e: EngineArg) -> Result<String> {
    if let EngineArg::Rewrite = e {
        let v = evaluate_diagram(d, table)?;
        return Ok(format!("{}engine: rewrite\n", value_lines("Δ", &v)));
    }
    let r: InvariantResult = normalized_delta_with(d, table, engine(e))?;
    let f = &r.factors;
    let mut s = value_lines("Δ", &r.delta);
    s += &format!("framing F = {}\n", f.framing);
    s += &format!("curliness C = {}\n", f.curliness);
    s += &format!("bracket <D|δ> = {}\n", f.bracket);
    s += &format!("basepoint weight |δ| = {}\n", f.delta_weight);
    s += &format!("vertices |V| = {}\n", f.vertex_count);
    if let Some(b) = r.basepoint {
        s += &format!("basepoint edge = {}\n", d.edges[b].id);
    }
    s += match r.well_defined {
        WellDefined::Ambient => "invariance: ambient isotopy\n",
        WellDefined::RegularUpToUnit => "invariance: regular isotopy, up to a power of t^{1/2}\n",
    };
    Ok(s)
}

fn with_basepoint(d: &Diagram) -> Result<Diagram> {
    Ok(match d.delta {
        Some(_) => d.clone(),
        None => d.with_delta(d.auto_basepoint()?),
    })
}

fn bracket(d: &Diagram, table: &WeightTable, e: EngineArg) -> Result<String> {
    let d = with_basepoint(d)?;
    let rm = d.build_regions()?;
    let b = match e {
        EngineArg::Statesum => statesum::bracket_with(&d, &rm, table)?,
        EngineArg::Det => moyalex::normalize::bracket_by_det(&d, table)?,
        EngineArg::Rewrite => {
            bail!("the rewrite engine computes Δ only; use `compute --engine rewrite`")
        }
    };
    let w = if rm.connected { d.delta_weight(&rm)?.to_string() } else { "undefined (disconnected)".into() };
    let edge = d.delta.map(|x| d.edges[x.edge].id).unwrap_or_default();
    Ok(format!("<D|δ> = {b}\n|δ| = {w}\nbasepoint edge = {edge}\n"))
}

fn state_rows(d: &Diagram, table: &WeightTable) -> Result<(Vec<String>, Vec<Rational>)> {
    let d = with_basepoint(d)?;
    let rm = d.build_regions()?;
    let contributions = state_contributions(&d, table)?;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (s, v) in contributions {
        let corners: Vec<String> = (0..rm.crossings.len())
            .map(|p| format!("{}:{}", crossing_label(&d, &rm.crossings[p].kind), s.corner_name(&rm, p).as_str()))
            .collect();
        labels.push(corners.join(" "));
        values.push(v);
    }
    Ok((labels, values))
}

fn states_numeric(d: &Diagram, table: &WeightTable) -> Result<String> {
    let (labels, values) = state_rows(d, table)?;
    let mut s = format!("{} states\n", labels.len());
    for (k, (l, v)) in labels.iter().zip(&values).enumerate() {
        s += &format!("s{:<3} {l}  weight = {v}\n", k + 1);
    }
    let total: Rational = values.into_iter().sum();
    s += &value_lines("total Δ", &total);
    Ok(s)
}

fn states_symbolic(file: &DiagramFile, colors: &[(String, i64)], table: &WeightTable) -> Result<String> {
    let bound = bindings(colors);
    let vars: Vec<String> = file.variables()?.into_iter().filter(|v| !bound.contains_key(v)).collect();
    let mut factors: Vec<ColorExpr> = Vec::new();
    for e in &file.edges {
        let x = e.color.expr()?;
        if !factors.contains(&x) {
            factors.push(x);
        }
    }
    factors.sort();
    let samples = symbolic::sample_bindings(&vars);
    let mut labels = None;
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for b in &samples {
        let mut all = bound.clone();
        all.extend(b.clone());
        let d = file.to_diagram(&all).with_context(|| format!("binding {all:?}"))?;
        let (l, v) = state_rows(&d, table)?;
        match &labels {
            None => labels = Some(l),
            Some(prev) if *prev != l => bail!("the states differ between color bindings"),
            Some(_) => {}
        }
        columns.push(v);
    }
    let labels = labels.unwrap_or_default();
    let mut s = format!("{} states, symbolic in {}\n", labels.len(), vars.join(", "));
    for (k, l) in labels.iter().enumerate() {
        let values: Vec<Rational> = columns.iter().map(|c| c[k].clone()).collect();
        let w = match symbolic::fit(&vars, &samples, &values, &factors) {
            Some(m) => m.to_string(),
            None => format!("(no closed form; at all ones: {})", values[0]),
        };
        s += &format!("s{:<3} {l}  weight = {w}\n", k + 1);
    }
    Ok(s)
}

fn run_file(cmd: &Command, path: &Path, table: &WeightTable) -> Result<Outcome> {
    let file = read_file(path)?;
    Ok(match cmd {
        Command::Compute { input, engine } => Outcome::ok(compute(&diagram(&file, &input.colors)?, table, *engine)?),
        Command::Bracket { input, engine } => Outcome::ok(bracket(&diagram(&file, &input.colors)?, table, *engine)?),
        Command::States { input } => {
            let bound = bindings(&input.colors);
            let symbolic = file.variables()?.iter().any(|v| !bound.contains_key(v));
            Outcome::ok(if symbolic {
                states_symbolic(&file, &input.colors, table)?
            } else {
                states_numeric(&diagram(&file, &input.colors)?, table)?
            })
        }
        Command::Planarity { input } => {
            let v = planarity_obstruction(&diagram(&file, &input.colors)?, table)?;
            let status = matches!(v, Verdict::NonPlanarCertificate { .. }) as u8;
            Outcome { text: format!("{v}\n"), status }
        }
        Command::Eval1 { input } => {
            Outcome::ok(format!("Δ(1) = {}\n", eval_at_one(&diagram(&file, &input.colors)?, table)?))
        }
        Command::Potential { input } => {
            let v = link_potential(&diagram(&file, &input.colors)?, table)?;
            Outcome::ok(value_lines("potential", &v))
        }
        Command::Convert { input } => {
            let json = if input.colors.is_empty() {
                file.to_json()
            } else {
                DiagramFile::from_diagram(&diagram(&file, &input.colors)?).to_json()
            };
            Outcome::ok(json + "\n")
        }
        Command::Verify { .. } => unreachable!("verify takes no input files"),
    })
}

fn input_files(cmd: &Command) -> &[PathBuf] {
    match cmd {
        Command::Compute { input, .. }
        | Command::Bracket { input, .. }
        | Command::States { input }
        | Command::Planarity { input }
        | Command::Eval1 { input }
        | Command::Potential { input }
        | Command::Convert { input } => &input.files,
        Command::Verify { .. } => &[],
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn render_reports(runs: &[(Suite, Vec<Report>)], format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = String::new();
            for (suite, reports) in runs {
                let failed = reports.iter().filter(|r| !r.passed).count();
                s += &format!("suite {}: {} checks, {} failed\n", suite.name(), reports.len(), failed);
                for r in reports {
                    let mark = if r.passed { "PASS" } else { "FAIL" };
                    if r.detail.is_empty() {
                        s += &format!("{mark} {}\n", r.id);
                    } else {
                        s += &format!("{mark} {} :: {}\n", r.id, r.detail);
                    }
                }
            }
            s
        }
        Format::Json => {
            let suites: Vec<serde_json::Value> = runs
                .iter()
                .map(|(suite, reports)| {
                    serde_json::json!({
                        "suite": suite.name(),
                        "total": reports.len(),
                        "failed": reports.iter().filter(|r| !r.passed).count(),
                        "reports": reports.iter().map(|r| serde_json::json!({
                            "id": r.id,
                            "passed": r.passed,
                            "detail": r.detail,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({ "suites": suites })).unwrap() + "\n"
        }
        Format::Junit => {
            let total: usize = runs.iter().map(|(_, r)| r.len()).sum();
            let failed: usize = runs.iter().map(|(_, r)| r.iter().filter(|x| !x.passed).count()).sum();
            let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
            s += &format!("<testsuites name=\"moyalex\" tests=\"{total}\" failures=\"{failed}\">\n");
            for (suite, reports) in runs {
                let f = reports.iter().filter(|r| !r.passed).count();
                s += &format!("  <testsuite name=\"{}\" tests=\"{}\" failures=\"{f}\">\n", suite.name(), reports.len());
                for r in reports {
                    let name = xml_escape(&r.id);
                    if r.passed {
                        s += &format!("    <testcase classname=\"{}\" name=\"{name}\"/>\n", suite.name());
                    } else {
                        s += &format!(
                            "    <testcase classname=\"{}\" name=\"{name}\">\n      <failure message=\"{}\"/>\n    </testcase>\n",
                            suite.name(),
                            xml_escape(&r.detail)
                        );
                    }
                }
                s += "  </testsuite>\n";
            }
            s + "</testsuites>\n"
        }
    }
}

fn verify(suites: &[SuiteArg], format: Format, output: Option<&Path>, table: &WeightTable) -> Result<u8> {
    let mut chosen: Vec<Suite> = Vec::new();
    for s in suites {
        let add: &[Suite] = match s {
            SuiteArg::All => &Suite::ALL,
            SuiteArg::Relations => &[Suite::Relations],
            SuiteArg::Moves => &[Suite::Moves],
            SuiteArg::Properties => &[Suite::Properties],
            SuiteArg::Engines => &[Suite::Engines],
        };
        for x in add {
            if !chosen.contains(x) {
                chosen.push(*x);
            }
        }
    }
    chosen.sort_by_key(|s| Suite::ALL.iter().position(|x| x == s));
    let runs: Vec<(Suite, Vec<Report>)> = chosen.iter().map(|&s| (s, run_suite(s, table))).collect();
    let text = render_reports(&runs, format);
    match output {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    let failed = runs.iter().any(|(_, r)| r.iter().any(|x| !x.passed));
    Ok(failed as u8)
}

fn run(cli: Cli) -> Result<u8> {
    let table = load_table(cli.weights.as_deref())?;
    if let Command::Verify { suite, format, output } = &cli.command {
        return verify(suite, *format, output.as_deref(), &table);
    }
    let files = input_files(&cli.command);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(1).max(1))
        .build()
        .map_err(|e| anyhow!("thread pool: {e}"))?;
    let outcomes: Vec<Result<Outcome>> =
        pool.install(|| files.par_iter().map(|f| run_file(&cli.command, f, &table)).collect());
    let mut status = 0;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (path, o) in files.iter().zip(outcomes) {
        if files.len() > 1 {
            writeln!(out, "== {} ==", path.display())?;
        }
        match o {
            Ok(o) => {
                out.write_all(o.text.as_bytes())?;
                status = status.max(o.status);
            }
            Err(e) => {
                eprintln!("error: {}: {e:#}", path.display());
                status = 2;
            }
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(s) => ExitCode::from(s),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
