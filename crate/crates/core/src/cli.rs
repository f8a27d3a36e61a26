//! Command-line front end.
//!
//! Every command reads a graph document and prints one report. With `--json`
//! the report is a single object whose keys appear in the order `command`,
//! `inputs`, `result`, `certificate` (only when a certificate exists),
//! `timing`. Divisors are objects keyed by vertex name in declaration order.
//! Integers of absolute value above 2^53 are written as decimal strings.
//!
//! Exit codes: 0 on success, 1 on domain errors (a class that is not
//! effective, a missing representative, a degree out of range), 2 on parse
//! and resource errors.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::divisor::{class_of, equivalent, residual, Divisor, DivisorClass};
use crate::enumerate::DEFAULT_BUDGET;
use crate::error::Error;
use crate::format::{parse_divisor, parse_graph, parse_vertex_list, ParseError};
use crate::graph::{VertexSet, WeightedMultigraph};
use crate::rank::{rank, riemann_roch_check, RankOptions};
use crate::reduce::{effectivize, is_reduced, reduce_to_set, Effectivization};
use crate::reps::{
    clifford_representative, is_semibalanced, is_special_class, is_uniform, semibalanced_representative,
    uniform_representative, CliffordCertificate, CliffordOutcome, Evidence,
};

#[derive(Parser, Debug)]
#[command(name = "divgraph", version, about = "Divisors, reduced forms and ranks on vertex-weighted multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, canonical divisor, stability and bridge structure.
    Info(Args),
    /// Rank of a divisor class.
    Rank(Args),
    /// Reduced form at `--base` (default: smallest vertex name) or at `--set`.
    Reduce(Args),
    /// Whether all `--divisor` arguments are linearly equivalent.
    Equivalent(Args),
    /// An effective representative, or a proof that none exists.
    Effectivize(Args),
    /// Both sides of the Riemann-Roch identity.
    RrCheck(Args),
    /// A certified Clifford representative of the class.
    CliffordRep(Args),
    /// Semibalanced test and a semibalanced representative.
    Semibalanced(Args),
    /// Uniform test, special-class test and a uniform representative.
    Uniform(Args),
    /// Graph summary plus rank, Riemann-Roch and Clifford data for a divisor.
    Report(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Graph document, or `-` for standard input.
    graph: String,
    /// Divisor literal such as `v1=2,v3=-1`; omitted vertices are 0.
    #[arg(long = "divisor", allow_hyphen_values = true)]
    divisors: Vec<String>,
    /// Vertex at which classes are reduced.
    #[arg(long)]
    base: Option<String>,
    /// Comma-separated vertex set for `reduce`.
    #[arg(long)]
    set: Option<String>,
    /// Emit a single JSON object.
    #[arg(long)]
    json: bool,
    /// Cap on enumerated candidates and on reductions in the rank search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for enumeration (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
    /// Force the definitional rank scan even where a degree law applies.
    #[arg(long)]
    no_shortcuts: bool,
}

impl Command {
    fn parts(&self) -> (&'static str, &Args) {
        match self {
            Command::Info(a) => ("info", a),
            Command::Rank(a) => ("rank", a),
            Command::Reduce(a) => ("reduce", a),
            Command::Equivalent(a) => ("equivalent", a),
            Command::Effectivize(a) => ("effectivize", a),
            Command::RrCheck(a) => ("rr-check", a),
            Command::CliffordRep(a) => ("clifford-rep", a),
            Command::Semibalanced(a) => ("semibalanced", a),
            Command::Uniform(a) => ("uniform", a),
            Command::Report(a) => ("report", a),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Parse {
        source: String,
        error: ParseError,
    },
    Io(String),
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(e) if !e.is_resource() => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse { source, error } if error.line == 0 => format!("{source}: {}", error.message),
            Failure::Parse { source, error } => format!("{source}:{}:{}: {}", error.line, error.column, error.message),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        let kind = match self {
            Failure::Parse { .. } | Failure::Io(_) | Failure::Usage(_) => "parse",
            Failure::Lib(e) if e.is_resource() => "resource",
            Failure::Lib(_) => "domain",
        };
        let mut m = Map::new();
        m.insert("status".into(), json!("error"));
        m.insert("kind".into(), json!(kind));
        m.insert("message".into(), json!(self.message()));
        if let Failure::Parse { source, error } = self {
            m.insert("source".into(), json!(source));
            if error.line > 0 {
                m.insert("line".into(), int(error.line as i64));
                m.insert("column".into(), int(error.column as i64));
            }
        }
        Value::Object(m)
    }
}

/// What a command handler produces.
struct Body {
    result: Map<String, Value>,
    certificate: Option<Value>,
    code: i32,
}

impl Body {
    fn ok(result: Map<String, Value>) -> Self {
        Body {
            result,
            certificate: None,
            code: 0,
        }
    }
}

const SAFE_INTEGER: i64 = 1 << 53;

/// Integers beyond the exactly representable double range become strings.
pub fn int(x: i64) -> Value {
    if x.abs() > SAFE_INTEGER {
        Value::String(x.to_string())
    } else {
        Value::from(x)
    }
}

fn divisor_json(g: &WeightedMultigraph, d: &Divisor) -> Value {
    Value::Object(
        g.vertices()
            .map(|v| (g.name(v).to_string(), int(d[v])))
            .collect(),
    )
}

fn names_json(g: &WeightedMultigraph, vs: impl IntoIterator<Item = usize>) -> Value {
    Value::Array(vs.into_iter().map(|v| json!(g.name(v))).collect())
}

fn class_json(g: &WeightedMultigraph, class: &DivisorClass) -> Value {
    json!({
        "base": g.name(class.base()),
        "degree": int(class.degree()),
        "canonical": divisor_json(g, class.canonical()),
    })
}

struct Context<'a> {
    g: &'a WeightedMultigraph,
    args: &'a Args,
    divisors: Vec<Divisor>,
    base: usize,
}

impl Context<'_> {
    fn options(&self) -> RankOptions {
        RankOptions {
            shortcuts: !self.args.no_shortcuts,
            budget: self.args.budget,
        }
    }

    fn one_divisor(&self) -> Result<&Divisor, Failure> {
        match self.divisors.as_slice() {
            [d] => Ok(d),
            [] => Err(Failure::Usage("this command needs `--divisor`".into())),
            _ => Err(Failure::Usage("this command takes exactly one `--divisor`".into())),
        }
    }

    fn class(&self, d: &Divisor) -> Result<DivisorClass, Failure> {
        Ok(class_of(self.g, d, self.base)?)
    }
}

fn info(g: &WeightedMultigraph) -> Map<String, Value> {
    let stability = g.stability();
    let cut = g.bridges();
    let mut m = Map::new();
    m.insert(
        "vertices".into(),
        Value::Array(
            g.vertices()
                .map(|v| {
                    json!({
                        "name": g.name(v),
                        "weight": int(g.weight(v)),
                        "valence": int(g.valence(v)),
                        "loops": int(g.loops_at(v)),
                    })
                })
                .collect(),
        ),
    );
    m.insert("edge_count".into(), int(g.edge_count() as i64));
    m.insert("genus".into(), int(g.genus()));
    m.insert("canonical_divisor".into(), divisor_json(g, &g.canonical_divisor()));
    m.insert("base_vertex".into(), json!(g.name(g.base_vertex())));
    m.insert(
        "stability".into(),
        json!({
            "applicable": stability.applicable,
            "semistable": stability.semistable,
            "stable": stability.stable,
        }),
    );
    m.insert(
        "bridges".into(),
        Value::Array(
            cut.bridges
                .iter()
                .map(|&e| {
                    let (a, b) = g.edges()[e];
                    json!([g.name(a), g.name(b)])
                })
                .collect(),
        ),
    );
    m.insert("chain_of_2ec".into(), json!(g.is_chain_of_2ec()));
    m
}

fn rank_section(cx: &Context<'_>, d: &Divisor) -> Result<Map<String, Value>, Failure> {
    let report = rank(cx.g, d, cx.options())?;
    let mut m = Map::new();
    m.insert("rank".into(), int(report.rank));
    m.insert("method".into(), json!(report.method.as_str()));
    m.insert(
        "witness".into(),
        match &report.witness {
            Some(w) => divisor_json(&cx.g.bullet_model().graph, w),
            None => Value::Null,
        },
    );
    Ok(m)
}

fn rr_section(cx: &Context<'_>, d: &Divisor) -> Result<Map<String, Value>, Failure> {
    let rr = riemann_roch_check(cx.g, d, cx.options())?;
    let mut m = Map::new();
    m.insert("rank".into(), int(rr.rank));
    m.insert("residual_rank".into(), int(rr.residual_rank));
    m.insert("degree".into(), int(rr.degree));
    m.insert("genus".into(), int(rr.genus));
    m.insert(
        "identity".into(),
        json!(format!(
            "{} - {} = {} - {} + 1",
            rr.rank, rr.residual_rank, rr.degree, rr.genus
        )),
    );
    m.insert("holds".into(), json!(rr.holds()));
    let max = 2 * rr.genus - 2;
    m.insert(
        "clifford".into(),
        if (0..=max).contains(&rr.degree) {
            json!({ "bound": int(rr.degree / 2), "holds": 2 * rr.rank <= rr.degree })
        } else {
            Value::Null
        },
    );
    Ok(m)
}

fn certificate_json(g: &WeightedMultigraph, cert: &CliffordCertificate, class: &DivisorClass) -> Result<Value, Failure> {
    let evidence = match &cert.evidence {
        Evidence::Uniform { bounds } => json!({
            "bounds": Value::Object(
                g.vertices()
                    .map(|v| (g.name(v).to_string(), json!([int(bounds[v].0), int(bounds[v].1)])))
                    .collect(),
            ),
        }),
        Evidence::VReducedNonEffective { vertex, value } => json!({
            "vertex": g.name(*vertex),
            "value": int(*value),
        }),
        Evidence::ResidualVReduced {
            vertex,
            residual_reduced,
        } => json!({
            "vertex": g.name(*vertex),
            "residual_reduced": divisor_json(g, residual_reduced),
        }),
    };
    Ok(json!({
        "branch": cert.branch.as_str(),
        "representative": divisor_json(g, &cert.representative),
        "evidence": evidence,
        "verified": cert.verify(g, class)?,
    }))
}

fn clifford_section(cx: &Context<'_>, class: &DivisorClass) -> Result<(Map<String, Value>, Option<Value>), Failure> {
    let g = cx.g;
    let mut m = Map::new();
    match clifford_representative(g, class, cx.args.budget)? {
        CliffordOutcome::Certified(cert) => {
            m.insert("status".into(), json!("certified"));
            m.insert("branch".into(), json!(cert.branch.as_str()));
            m.insert("representative".into(), divisor_json(g, &cert.representative));
            Ok((m, Some(certificate_json(g, &cert, class)?)))
        }
        CliffordOutcome::NotCovered(nc) => {
            m.insert("status".into(), json!("not_covered"));
            m.insert(
                "hypotheses".into(),
                json!({
                    "chain_of_2ec": nc.chain_of_2ec,
                    "loops_on_weightless": nc.loops_on_weightless,
                    "missing_loops": names_json(g, nc.missing_loops.iter().copied()),
                }),
            );
            Ok((m, None))
        }
    }
}

fn execute(name: &str, cx: &Context<'_>) -> Result<Body, Failure> {
    let g = cx.g;
    match name {
        "info" => {
            let mut m = info(g);
            if let Some(d) = cx.divisors.first() {
                m.insert("class".into(), class_json(g, &cx.class(d)?));
            }
            Ok(Body::ok(m))
        }
        "rank" => {
            let d = cx.one_divisor()?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &cx.class(d)?));
            m.extend(rank_section(cx, d)?);
            Ok(Body::ok(m))
        }
        "reduce" => {
            let d = cx.one_divisor()?;
            let target = match &cx.args.set {
                Some(list) => {
                    let vs = parse_vertex_list(g, list).map_err(|error| Failure::Parse {
                        source: "--set".into(),
                        error,
                    })?;
                    VertexSet::from_vertices(g.vertex_count(), vs)?
                }
                None => VertexSet::singleton(g.vertex_count(), cx.base),
            };
            let reduced = reduce_to_set(g, d, &target)?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &cx.class(d)?));
            m.insert("target".into(), names_json(g, target.iter()));
            m.insert("reduced".into(), divisor_json(g, &reduced));
            m.insert("is_reduced".into(), json!(is_reduced(g, &reduced, &target)?));
            Ok(Body::ok(m))
        }
        "equivalent" => {
            if cx.divisors.len() < 2 {
                return Err(Failure::Usage("`equivalent` needs at least two `--divisor` arguments".into()));
            }
            let first = &cx.divisors[0];
            let mut all = true;
            for d in &cx.divisors[1..] {
                all &= equivalent(g, first, d)?;
            }
            let classes = cx
                .divisors
                .iter()
                .map(|d| Ok(class_json(g, &cx.class(d)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let mut m = Map::new();
            m.insert("equivalent".into(), json!(all));
            m.insert("classes".into(), Value::Array(classes));
            Ok(Body::ok(m))
        }
        "effectivize" => {
            let d = cx.one_divisor()?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &cx.class(d)?));
            let code = match effectivize(g, d)? {
                Effectivization::Effective { divisor, iterations } => {
                    m.insert("status".into(), json!("effective"));
                    m.insert("divisor".into(), divisor_json(g, &divisor));
                    m.insert("iterations".into(), int(iterations as i64));
                    0
                }
                Effectivization::NotEffective { reduced } => {
                    m.insert("status".into(), json!("not_effective"));
                    m.insert("reduced".into(), divisor_json(g, &reduced));
                    1
                }
            };
            Ok(Body {
                result: m,
                certificate: None,
                code,
            })
        }
        "rr-check" => {
            let d = cx.one_divisor()?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &cx.class(d)?));
            m.extend(rr_section(cx, d)?);
            Ok(Body::ok(m))
        }
        "clifford-rep" => {
            let d = cx.one_divisor()?;
            let class = cx.class(d)?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &class));
            let (section, certificate) = clifford_section(cx, &class)?;
            m.extend(section);
            Ok(Body {
                result: m,
                certificate,
                code: 0,
            })
        }
        "semibalanced" => {
            let d = cx.one_divisor()?;
            let class = cx.class(d)?;
            let rep = semibalanced_representative(g, &class, cx.args.budget)?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &class));
            m.insert("input_semibalanced".into(), json!(is_semibalanced(g, d)?));
            m.insert("representative".into(), divisor_json(g, &rep));
            Ok(Body::ok(m))
        }
        "uniform" => {
            let d = cx.one_divisor()?;
            let class = cx.class(d)?;
            let rep = uniform_representative(g, &class, cx.args.budget)?;
            let mut m = Map::new();
            m.insert("class".into(), class_json(g, &class));
            m.insert("input_uniform".into(), json!(is_uniform(g, d)));
            m.insert("special".into(), json!(is_special_class(g, &class)?));
            m.insert(
                "representative".into(),
                rep.as_ref().map_or(Value::Null, |r| divisor_json(g, r)),
            );
            m.insert(
                "status".into(),
                json!(if rep.is_some() { "found" } else { "not_found" }),
            );
            Ok(Body {
                result: m,
                certificate: None,
                code: if rep.is_some() { 0 } else { 1 },
            })
        }
        "report" => {
            let mut m = Map::new();
            m.insert("graph".into(), Value::Object(info(g)));
            let mut certificate = None;
            if !cx.divisors.is_empty() {
                let d = cx.one_divisor()?;
                let class = cx.class(d)?;
                m.insert("class".into(), class_json(g, &class));
                m.insert("rank".into(), Value::Object(rank_section(cx, d)?));
                m.insert("riemann_roch".into(), Value::Object(rr_section(cx, d)?));
                let max = 2 * g.genus() - 2;
                let clifford = if (0..=max).contains(&class.degree()) {
                    let (section, cert) = clifford_section(cx, &class)?;
                    certificate = cert;
                    Value::Object(section)
                } else {
                    Value::Null
                };
                m.insert("clifford_representative".into(), clifford);
                m.insert("residual".into(), divisor_json(g, &residual(g, d)?));
            }
            Ok(Body {
                result: m,
                certificate,
                code: 0,
            })
        }
        _ => unreachable!("clap only yields known commands"),
    }
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| Failure::Io(format!("<stdin>: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

fn load(args: &Args) -> Result<(WeightedMultigraph, Vec<Divisor>, usize), Failure> {
    let text = read_source(&args.graph)?;
    let g = parse_graph(&text)
        .map_err(|error| Failure::Parse {
            source: args.graph.clone(),
            error,
        })?
        .graph;
    let divisors = args
        .divisors
        .iter()
        .map(|lit| {
            parse_divisor(&g, lit).map_err(|error| Failure::Parse {
                source: "--divisor".into(),
                error,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base = match &args.base {
        Some(name) => g.vertex(name).map_err(|_| Failure::Parse {
            source: "--base".into(),
            error: ParseError {
                line: 1,
                column: 1,
                message: format!("unknown vertex `{name}`"),
            },
        })?,
        None => g.base_vertex(),
    };
    Ok((g, divisors, base))
}

fn inputs_json(name: &str, args: &Args, loaded: Option<&(WeightedMultigraph, Vec<Divisor>, usize)>) -> Value {
    let mut m = Map::new();
    m.insert("graph".into(), json!(args.graph));
    match loaded {
        Some((g, divisors, base)) => {
            let ds: Vec<Value> = divisors.iter().map(|d| divisor_json(g, d)).collect();
            m.insert("divisors".into(), Value::Array(ds));
            m.insert("base".into(), json!(g.name(*base)));
        }
        None => {
            m.insert("divisors".into(), json!(args.divisors));
            m.insert("base".into(), json!(args.base));
        }
    }
    if name == "reduce" {
        m.insert("set".into(), json!(args.set));
    }
    m.insert("budget".into(), i64::try_from(args.budget).map_or_else(|_| json!(args.budget.to_string()), int));
    m.insert("shortcuts".into(), json!(!args.no_shortcuts));
    Value::Object(m)
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let (name, args) = cli.command.parts();
    let start = Instant::now();
    let work = || -> (Option<(WeightedMultigraph, Vec<Divisor>, usize)>, Result<Body, Failure>) {
        let loaded = match load(args) {
            Ok(l) => l,
            Err(f) => return (None, Err(f)),
        };
        let cx = Context {
            g: &loaded.0,
            args,
            divisors: loaded.1.clone(),
            base: loaded.2,
        };
        let body = execute(name, &cx);
        (Some(loaded), body)
    };
    let (loaded, body) = match args.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => (None, Err(Failure::Usage(format!("--threads: {e}")))),
        },
        None => work(),
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;

    let mut report = Map::new();
    report.insert("command".into(), json!(name));
    report.insert("inputs".into(), inputs_json(name, args, loaded.as_ref()));
    let (code, stderr) = match body {
        Ok(body) => {
            report.insert("result".into(), Value::Object(body.result));
            if let Some(c) = body.certificate {
                report.insert("certificate".into(), c);
            }
            (body.code, String::new())
        }
        Err(f) => {
            report.insert("result".into(), f.to_json());
            (f.code(), format!("error: {}\n", f.message()))
        }
    };
    report.insert("timing".into(), json!({ "elapsed_ms": elapsed_ms }));

    let stdout = if args.json {
        let mut s = serde_json::to_string_pretty(&Value::Object(report)).expect("report serializes");
        s.push('\n');
        s
    } else if stderr.is_empty() {
        render_text(&report)
    } else {
        String::new()
    };
    Outcome { code, stdout, stderr }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Objects of integers (divisors) and arrays of scalars print on one line.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Object(m) if !m.is_empty() && m.values().all(|x| x.is_i64() || x.is_string()) => Some(
            m.iter()
                .map(|(k, x)| format!("{k}={}", scalar(x).unwrap_or_default()))
                .collect::<Vec<_>>()
                .join(","),
        ),
        Value::Array(xs) if xs.iter().all(|x| scalar(x).is_some() || matches!(x, Value::Array(_))) => {
            let parts: Option<Vec<String>> = xs
                .iter()
                .map(|x| match x {
                    Value::Array(inner) => inner
                        .iter()
                        .map(scalar)
                        .collect::<Option<Vec<_>>>()
                        .map(|p| format!("({})", p.join(" "))),
                    other => scalar(other),
                })
                .collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render_value(out, k, x, depth + 1);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                render_value(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => {}
    }
}

fn render_text(report: &Map<String, Value>) -> String {
    let mut out = String::new();
    for (k, v) in report {
        if k == "timing" {
            if let Some(ms) = v.get("elapsed_ms").and_then(Value::as_f64) {
                let _ = writeln!(out, "timing: {ms:.3} ms");
            }
            continue;
        }
        render_value(&mut out, k, v, 0);
    }
    out
}
