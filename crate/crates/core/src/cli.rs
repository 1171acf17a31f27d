//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certificate::{replay, run_suite, Certificate, Suite, SuiteParams};
use crate::error::Error;
use crate::monoid::Monoid;
use crate::order::{decide_with_x, fr, x_of, PosetExport, RamseyVerdict};
use crate::source::load_monoid;

/// Y(M) Hasse data is included in reports up to this many points.
pub const HASSE_LIMIT: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "ramsey-monoid", version, about = "Finite monoids, X(M)/Y(M) and bounded Ramsey verifiers")]
pub struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Print a monoid in the JSON table schema.
    Family {
        /// g:<n>, i:<n>, j:<A>:<B>, tower:<k>, or a JSON file.
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// R-classes, X(M), Y(M) and the Ramsey verdict of a monoid.
    Analyze {
        source: String,
        #[arg(long)]
        json: bool,
        /// Print the Hasse diagram of X(M) or Y(M) as DOT instead.
        #[arg(long, value_enum)]
        dot: Option<DotTarget>,
        /// Include wall-clock timings (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Run a verifier suite or replay a certificate.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotTarget {
    X,
    Y,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, required_unless_present = "replay")]
    pub suite: Option<Suite>,
    /// Re-validate a certificate instead of running a suite.
    #[arg(long, conflicts_with = "suite")]
    pub replay: Option<PathBuf>,
    /// Write the certificate here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the certificate (or replay outcome) as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub monoid: Option<String>,
    #[arg(long)]
    pub max_slot: Option<usize>,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// constant[:k], parity, first-occurrence:<a>:<b>, reduced-string[:n],
    /// first-letter, linear:<k>:<w,..> or counterexample.
    #[arg(long)]
    pub coloring: Option<String>,
    #[arg(long)]
    pub len: Option<usize>,
    /// Type space for tame-search: y (chains of X(M)) or x (classes).
    #[arg(long, value_parser = ["x", "y"])]
    pub types: Option<String>,
    /// Pointed M-set of the words: left (regular) or x (X(M) points).
    #[arg(long, value_parser = ["left", "x"])]
    pub family: Option<String>,
    /// Types to control: all or identity.
    #[arg(long = "f", value_parser = ["all", "identity"])]
    pub filter: Option<String>,
    /// Close the controlled types under suffixes.
    #[arg(long)]
    pub close_f: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
}

impl VerifyArgs {
    fn params(&self) -> SuiteParams {
        SuiteParams {
            k: self.k,
            n: self.n,
            monoid: self.monoid.clone(),
            max_slot: self.max_slot,
            max_len: self.max_len,
            coloring: self.coloring.clone(),
            len: self.len,
            types: self.types.clone(),
            family: self.family.clone(),
            filter: self.filter.clone(),
            close_f: self.close_f,
            seed: self.seed,
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSummary {
    pub name: String,
    pub size: usize,
    pub identity: String,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestSummary {
    pub points: usize,
    pub maximal: Vec<String>,
    pub top: String,
    pub strong: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hasse: Option<PosetExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub verdict: String,
    /// Representatives of two incomparable R-classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub monoid: MonoidSummary,
    pub r_classes: Vec<Vec<String>>,
    pub r_trivial: bool,
    pub almost_r_trivial: bool,
    pub x: PosetExport,
    pub x_linear: bool,
    pub x_strong: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ForestSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_skipped: Option<String>,
    pub ramsey: VerdictSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

pub fn analyze(m: &Arc<Monoid>, timings: bool) -> AnalysisReport {
    let mut times = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, times: &mut BTreeMap<String, f64>| {
        times.insert(name.to_string(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };
    let labels: Vec<String> = m.elements().map(|a| m.label(a)).collect();
    let r_classes = m
        .r_classes()
        .iter()
        .map(|c| c.iter().map(|&a| m.label(a)).collect())
        .collect();
    let r_trivial = m.is_r_trivial();
    let almost_r_trivial = m.is_almost_r_trivial();
    lap("r_classes", &mut times);
    let x = Arc::new(x_of(m));
    let x_strong = x.is_strong();
    lap("x", &mut times);
    let (y, y_skipped) = match fr(&x) {
        Ok(y) => {
            let maximal = y.maximal_elements().iter().map(|&p| y.label(p).to_string()).collect();
            let summary = ForestSummary {
                points: y.len(),
                maximal,
                top: y.label(y.top_chain()).to_string(),
                strong: y.is_strong(),
                hasse: (y.len() <= HASSE_LIMIT).then(|| y.export()),
            };
            (Some(summary), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    lap("y", &mut times);
    let verdict = decide_with_x(&x);
    let ramsey = match &verdict {
        RamseyVerdict::NotRamsey { a, b, class_a, class_b } => VerdictSummary {
            verdict: verdict.name().to_string(),
            witness: Some((m.label(*a), m.label(*b))),
            witness_verified: Some(
                x.class_of(*a) == Some(*class_a)
                    && x.class_of(*b) == Some(*class_b)
                    && !x.leq(*class_a, *class_b)
                    && !x.leq(*class_b, *class_a),
            ),
        },
        _ => VerdictSummary {
            verdict: verdict.name().to_string(),
            witness: None,
            witness_verified: None,
        },
    };
    lap("verdict", &mut times);
    AnalysisReport {
        monoid: MonoidSummary {
            name: m.name().to_string(),
            size: m.size(),
            identity: m.label(m.identity()),
            labels,
        },
        r_classes,
        r_trivial,
        almost_r_trivial,
        x_linear: x.is_linear(),
        x_strong,
        x: x.export(),
        y,
        y_skipped,
        ramsey,
        timings: timings.then_some(times),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

impl AnalysisReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let m = &self.monoid;
        s += &format!("monoid {} (order {}, identity {})\n", m.name, m.size, m.identity);
        let classes: Vec<String> = self.r_classes.iter().map(|c| set(c)).collect();
        s += &format!("R-classes: {}\n", classes.join(" "));
        s += &format!("R-trivial: {}\n", yes(self.r_trivial));
        s += &format!("almost R-trivial: {}\n", yes(self.almost_r_trivial));
        s += &format!(
            "X(M): {} points, {}, strong: {}\n",
            self.x.labels.len(),
            if self.x_linear { "linear" } else { "not linear" },
            yes(self.x_strong)
        );
        for (lo, hi) in &self.x.covers {
            s += &format!("  {} < {}\n", self.x.labels[*lo], self.x.labels[*hi]);
        }
        match (&self.y, &self.y_skipped) {
            (Some(y), _) => {
                s += &format!("Y(M): {} points, strong: {}\n", y.points, yes(y.strong));
                if y.maximal.len() <= 8 {
                    s += &format!("  maximal: {}\n", y.maximal.join(" "));
                } else {
                    s += &format!("  maximal: {} points\n", y.maximal.len());
                }
                s += &format!("  top chain: {}\n", y.top);
            }
            (None, Some(why)) => s += &format!("Y(M): not built ({why})\n"),
            (None, None) => {}
        }
        s += &format!("Ramsey: {}", self.ramsey.verdict);
        if let Some((a, b)) = &self.ramsey.witness {
            s += &format!(" (incomparable classes of {a} and {b}");
            if let Some(v) = self.ramsey.witness_verified {
                s += if v { ", verified)" } else { ", NOT verified)" };
            }
        }
        s += "\n";
        if let Some(t) = &self.timings {
            for (k, v) in t {
                s += &format!("time {k}: {v:.3}s\n");
            }
        }
        s
    }
}

/// Indented plain-text rendering of a JSON value.
fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}: [{}]\n", items.len()));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            render_value(item, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&format!("{pad}-\n"));
                render_value(item, indent + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

pub fn render_certificate(c: &Certificate) -> String {
    let mut s = format!("{}: {}\n", c.suite.name(), if c.passed { "PASS" } else { "FAIL" });
    let params = serde_json::to_value(&c.params).expect("params serialize");
    s += "params:\n";
    render_value(&params, 1, &mut s);
    s += "result:\n";
    render_value(&c.result, 1, &mut s);
    s
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::InvalidMonoid(_) => 1,
        _ => 2,
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), i32> {
    std::fs::write(path, text).map_err(|_| 2)
}

/// Parses `args` and runs the command, writing to `out` and `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // an already-initialised pool (repeated calls in one process) is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type Outcome = Result<i32, (i32, String)>;

fn fail(e: Error) -> (i32, String) {
    (exit_for(&e), e.to_string())
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| (2, e.to_string()))?;
    Ok(0)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Family { spec, out: file } => {
            let m = load_monoid(&spec).map_err(fail)?;
            let text = m.to_json_string() + "\n";
            match file {
                Some(p) => write_file(&p, &text)
                    .map(|_| 0)
                    .map_err(|c| (c, format!("cannot write {}", p.display()))),
                None => emit(out, &text),
            }
        }
        Command::Analyze { source, json, dot, timings } => {
            let m = Arc::new(load_monoid(&source).map_err(fail)?);
            if let Some(target) = dot {
                let x = Arc::new(x_of(&m));
                let text = match target {
                    DotTarget::X => x.to_dot("X"),
                    DotTarget::Y => fr(&x).map_err(fail)?.to_dot("Y"),
                };
                return emit(out, &text);
            }
            let report = analyze(&m, timings);
            let text = if json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.render()
            };
            emit(out, &text)
        }
        Command::Verify(args) => verify(args, out),
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Outcome {
    if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path).map_err(|e| (2, format!("{}: {e}", path.display())))?;
        let cert: Certificate =
            serde_json::from_str(&text).map_err(|e| (2, format!("{}: not a certificate: {e}", path.display())))?;
        let outcome = replay(&cert).map_err(fail)?;
        let text = if args.json {
            serde_json::to_string_pretty(&outcome).expect("outcome serializes") + "\n"
        } else {
            format!(
                "replay {}: {} ({}), {} the certificate\n",
                outcome.suite.name(),
                if outcome.passed { "PASS" } else { "FAIL" },
                outcome.method,
                if outcome.agrees { "agrees with" } else { "DISAGREES with" }
            )
        };
        emit(out, &text)?;
        return Ok(if outcome.agrees && outcome.passed { 0 } else { 1 });
    }
    let suite = args.suite.expect("clap requires a suite without --replay");
    let cert = run_suite(suite, &args.params()).map_err(fail)?;
    let json = serde_json::to_string_pretty(&cert).expect("certificate serializes") + "\n";
    if let Some(p) = &args.out {
        write_file(p, &json).map_err(|c| (c, format!("cannot write {}", p.display())))?;
    }
    emit(out, &if args.json { json } else { render_certificate(&cert) })?;
    Ok(if cert.passed { 0 } else { 1 })
}
