//! `qshuf`: command-line front end for the shuffle-algebra toolkit.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or a
//! computation error, 2 on a config, parse or usage error. Errors are also
//! written to stderr as one JSON record.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use quiver_shuffle::curve::{genus_g_element, parse_curve_config, CurveData};
use quiver_shuffle::loopgroup::{cubic_element, in_relation_ideal, pair, pair_word_truncated, relations_for_multiplicities, straighten, CubicSpec};
use quiver_shuffle::polynomials::SymLaurent;
use quiver_shuffle::quiver::parse_quiver_config;
use quiver_shuffle::shuffle::{shuffle_mul, wheel_check, ShuffleElement, WheelMode};
use quiver_shuffle::verify::{self, Check, Suite, VerifyOptions};
use quiver_shuffle::{Error, Field, ParamScalar, Quiver, UElement};

type S = ParamScalar;

#[derive(Parser)]
#[command(name = "qshuf", version, about = "Exact computations in quiver shuffle algebras and their loop presentations")]
struct Cli {
    /// Quiver config file.
    #[arg(long, global = true, conflicts_with = "curve")]
    quiver: Option<PathBuf>,
    /// Curve config file; its quiver has one vertex and a loop per genus.
    #[arg(long, global = true)]
    curve: Option<PathBuf>,
    /// Pair at this fixed truncation order instead of the exact bound.
    #[arg(long, global = true)]
    trunc_order: Option<usize>,
    /// Extra half-width for the straightening window.
    #[arg(long, global = true)]
    window_slack: Option<i64>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write a JSON dump of the result here (or, with --regen-fixtures, the fixture directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rewrite the regression fixtures.
    #[arg(long)]
    regen_fixtures: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Shuffle product of two elements.
    Mul { r1: String, r2: String },
    /// Pairing of a word combination with a symmetric Laurent polynomial.
    Pair { x: String, r: String },
    /// Checks the wheel conditions.
    WheelCheck {
        r: String,
        #[arg(long)]
        specialized: bool,
    },
    /// Prints a cubic element; with --gamma and --k the specialised one.
    Cubic {
        /// Doubled-edge label such as `e1` or `e1*`.
        #[arg(long)]
        edge: String,
        #[arg(long, value_parser = parse_abc, allow_hyphen_values = true)]
        abc: (i64, i64, i64),
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Expands a word combination over non-increasing words.
    Straighten { x: String },
    /// Whether a word combination lies in the kernel of the shuffle map.
    InIdeal { x: String },
    /// Cubic relation families of the quiver (or the curve) at one degree.
    Relations {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Runs a named verification suite.
    Verify { suite: String },
}

fn parse_abc(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<i64> = s.split(',').map(|p| p.trim().parse::<i64>().map_err(|e| format!("`{p}`: {e}"))).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected a,b,c, got `{s}`")),
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. }
            | Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::UnknownVertex(_)
            | Error::UnknownEdge(_)
            | Error::SignatureMismatch(..) => 2,
            _ => 1,
        };
        Failure { code, kind: e.kind().to_string(), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "Usage".into(), message: message.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, kind: "Io".into(), message: format!("{}: {e}", path.display()) }
}

/// What a command produced: report text, checks if any, and overall status.
struct Outcome {
    text: String,
    checks: Vec<Check>,
    passed: bool,
}

impl Outcome {
    fn value(text: String) -> Self {
        Outcome { text, checks: Vec::new(), passed: true }
    }
}

struct Context {
    quiver: Option<Quiver<S>>,
    curve: Option<CurveData>,
    trunc_order: Option<usize>,
    verify: VerifyOptions,
}

impl Context {
    fn quiver(&self) -> Result<&Quiver<S>, Failure> {
        self.quiver.as_ref().ok_or_else(|| usage("this command needs --quiver FILE or --curve FILE"))
    }
}

/// A file's contents if `arg` names one, else `arg` itself with `;` as a
/// line separator.
fn operand(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        fs::read_to_string(p).map_err(|e| io_failure(p, e))
    } else {
        Ok(arg.replace(';', "\n"))
    }
}

fn read_config(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

/// Laurent values print as their numerator alone.
fn scalar_text(s: &S) -> String {
    if s.is_laurent() {
        s.numerator().to_string()
    } else {
        s.to_text()
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut ctx = Context { quiver: None, curve: None, trunc_order: cli.trunc_order, verify: VerifyOptions { seed: cli.seed, ..Default::default() } };
    if let Some(slack) = cli.window_slack {
        ctx.verify.straighten.window_slack = slack;
    }
    if let Some(path) = &cli.quiver {
        ctx.quiver = Some(parse_quiver_config(&read_config(path)?)?.quiver);
    }
    if let Some(path) = &cli.curve {
        let curve = parse_curve_config(&read_config(path)?)?;
        ctx.quiver = Some(curve.quiver());
        ctx.curve = Some(curve);
    }
    if cli.regen_fixtures {
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("crates/core/tests/fixtures"));
        fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
        let mut text = String::new();
        for (name, contents) in verify::fixtures()? {
            let path = dir.join(&name);
            fs::write(&path, contents).map_err(|e| io_failure(&path, e))?;
            text.push_str(&format!("wrote {}\n", path.display()));
        }
        return Ok(Outcome::value(text));
    }
    let Some(command) = &cli.command else {
        return Err(usage("no subcommand given; see --help"));
    };
    match command {
        Command::Mul { r1, r2 } => {
            let q = ctx.quiver()?;
            let a = ShuffleElement::parse(&operand(r1)?, q)?;
            let b = ShuffleElement::parse(&operand(r2)?, q)?;
            Ok(Outcome::value(shuffle_mul(q, &a, &b)?.to_text(q.vertices())))
        }
        Command::Pair { x, r } => {
            let q = ctx.quiver()?;
            let x = UElement::parse(&operand(x)?, q)?;
            let r = SymLaurent::parse(&operand(r)?, q.vertices(), &|s| q.resolve_symbol(s))?;
            let v = match ctx.trunc_order {
                None => pair(q, &x, &r)?,
                Some(order) => x.terms().iter().fold(S::from_i64(0), |acc, (w, c)| acc.add_ref(&c.mul_ref(&pair_word_truncated(q, w, &r, order)))),
            };
            Ok(Outcome::value(format!("{}\n", scalar_text(&v))))
        }
        Command::WheelCheck { r, specialized } => {
            let q = ctx.quiver()?;
            let r = ShuffleElement::parse(&operand(r)?, q)?;
            let mode = if *specialized { WheelMode::Specialized } else { WheelMode::Generic };
            let check = match wheel_check(q, &r, mode) {
                Ok(()) => Check { name: "wheel-check".into(), passed: true, detail: "all wheels vanish".into() },
                Err(w) => Check {
                    name: "wheel-check".into(),
                    passed: false,
                    detail: format!("{} at {}: residual {}", w.condition, w.substitution, w.residual.to_text(q.vertices())),
                },
            };
            Ok(Outcome { text: verify::report(std::slice::from_ref(&check)), passed: check.passed, checks: vec![check] })
        }
        Command::Cubic { edge, abc, gamma, k } => {
            let q = ctx.quiver()?;
            let e = q.doubled_edge(edge)?;
            let spec = match (gamma, k) {
                (None, None) => CubicSpec::generic(&e, *abc),
                (Some(g), Some(k)) => {
                    let g = quiver_shuffle::scalars::parse_expr(g, 1, &|s| q.resolve_symbol(s))?;
                    CubicSpec::specialized(e.src, e.dst, g, *k, *abc)
                }
                _ => return Err(usage("--gamma and --k go together")),
            };
            Ok(Outcome::value(cubic_element(q, &spec)?.to_text(q.vertices()) + "\n"))
        }
        Command::Straighten { x } => {
            let q = ctx.quiver()?;
            let x = UElement::parse(&operand(x)?, q)?;
            let s = straighten(q, &x, &ctx.verify.straighten)?;
            Ok(Outcome::value(s.to_element().to_text(q.vertices()) + "\n"))
        }
        Command::InIdeal { x } => {
            let q = ctx.quiver()?;
            let x = UElement::parse(&operand(x)?, q)?;
            let inside = in_relation_ideal(q, &x)?;
            let check =
                Check { name: "in-ideal".into(), passed: inside, detail: if inside { "image vanishes".into() } else { "image is nonzero".into() } };
            Ok(Outcome { text: verify::report(std::slice::from_ref(&check)), passed: inside, checks: vec![check] })
        }
        Command::Relations { degree } => relations(&ctx, *degree),
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let checks = match (&ctx.curve, &ctx.quiver, &cli.quiver) {
                (Some(curve), _, _) if suite == Suite::GenusG => verify::genus_g(curve, -1..=1, &ctx.verify),
                (_, Some(q), _) => {
                    let name =
                        cli.quiver.as_ref().or(cli.curve.as_ref()).and_then(|p| p.file_stem()).map_or("quiver".into(), |s| s.to_string_lossy());
                    verify::run_on_quiver(suite, &name, q, &ctx.verify)
                }
                _ => verify::run_default(suite, &ctx.verify),
            };
            let passed = verify::all_passed(&checks);
            Ok(Outcome { text: verify::report(&checks), checks, passed })
        }
    }
}

/// Generic cubic elements per doubled edge and the specialised families;
/// for a curve, the genus-`g` elements.
fn relations(ctx: &Context, degree: i64) -> Result<Outcome, Failure> {
    let q = ctx.quiver()?;
    let names = q.vertices();
    let mut text = String::new();
    if let Some(curve) = &ctx.curve {
        for e in 1..=curve.genus {
            text.push_str(&format!("# genus {} loop e{e}, m = {degree}\n", curve.genus));
            text.push_str(&genus_g_element(curve, e, degree)?.to_text(names));
            text.push_str("\n\n");
        }
        return Ok(Outcome::value(text));
    }
    let b0 = degree.div_euclid(3);
    let abc = (degree - 2 * b0, b0, b0);
    for e in q.doubled_edges() {
        text.push_str(&format!("# generic {} {:?}\n", e.label(), abc));
        text.push_str(&cubic_element(q, &CubicSpec::generic(&e, abc))?.to_text(names));
        text.push_str("\n\n");
    }
    for family in relations_for_multiplicities(q) {
        for spec in family.specs(degree) {
            text.push_str(&format!(
                "# specialized {}->{} gamma = {} k = {} {:?}\n",
                names[family.i],
                names[family.j],
                family.gamma.to_text(),
                family.k,
                spec.abc
            ));
            text.push_str(&cubic_element(q, &spec)?.to_text(names));
            text.push_str("\n\n");
        }
    }
    Ok(Outcome::value(text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if let (Some(path), false) = (&cli.out, cli.regen_fixtures) {
                let checks: Vec<_> = outcome.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
                let dump = json!({"passed": outcome.passed, "checks": checks, "output": outcome.text});
                let body = serde_json::to_string_pretty(&dump).expect("plain JSON values") + "\n";
                if let Err(e) = fs::write(path, body) {
                    let f = io_failure(path, e);
                    eprintln!("{}", json!({"error": {"kind": f.kind, "message": f.message}}));
                    return ExitCode::from(f.code);
                }
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", json!({"error": {"kind": f.kind, "message": f.message}}));
            ExitCode::from(f.code)
        }
    }
}
