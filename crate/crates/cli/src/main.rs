use std::f64::consts::{E, PI};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qahd::expr::{eval_expr, parse, render};
use qahd::identify::{self, IdentifyReport};
use qahd::logform::{canonicalize, LogFormJson, MultiFormJson};
use qahd::operators::{self, OpKind, VerifyOptions, DEFAULT_A_SAMPLES};
use qahd::pairing::{self, QuadratureSpec, TestFunction};
use qahd::sampling::DEFAULT_SEED;
use qahd::scalar::parse_scalar;
use qahd::spectral::{self, Representation};
use qahd::{json, Error, LogForm, MultiForm, Scalar};
use serde::Serialize;

mod text;

/// Symbolic and numeric checks for quasi-associated homogeneous functions.
///
/// Expressions use the variables x1..xn, the radius r and log(r), with
/// numeric literal exponents. Reports are JSON by default.
#[derive(Parser, Debug)]
#[command(name = "qahd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ambient dimension n
    #[arg(short = 'n', long = "dim", global = true, default_value_t = 1)]
    n: usize,

    /// Report format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for random probe points and probe directions
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print it in canonical rendering
    Parse(ExprArg),
    /// Degree and order of every log-homogeneous component
    Classify(ExprArg),
    /// Apply an operator to every component
    Apply(ApplyArgs),
    /// The chain f_k, (E-λ) f_k, ..., f_0 of a single-degree form
    Chain(ExprArg),
    /// Check the four QAHD characterizations for an asserted degree and order
    Verify(VerifyArgs),
    /// Truncated dilation matrix R_a
    Matrix(MatrixArgs),
    /// Pairing <F, φ> with a bump test function
    Pair(PairArgs),
    /// Check the dilation identity of the pairing at scale a
    PairVerify(PairVerifyArgs),
    /// Recover degree and order from samples along a dilation ray
    Identify(IdentifyArgs),
}

#[derive(Args, Debug)]
struct ExprArg {
    /// Expression, e.g. "x1^2*r^(-3)*log(r)^2 + r^(-1)"
    #[arg(allow_hyphen_values = true)]
    expr: String,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    #[command(flatten)]
    expr: ExprArg,

    /// euler | dilate=A | delta=A,LAMBDA | power=euler,M | power=delta,M
    #[arg(long)]
    op: String,

    /// Scale for power=delta,M
    #[arg(long, value_parser = parse_scale)]
    a: Option<f64>,

    /// μ for power=delta,M and power=euler,M [default: the degree of each component]
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Option<Scalar>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    expr: ExprArg,

    /// Asserted degree λ, e.g. 0, -1.5 or -1+2i
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    degree: Scalar,

    /// Asserted order k
    #[arg(long)]
    order: usize,

    /// Dilation scales a
    #[arg(long, value_delimiter = ',', value_parser = parse_scale,
          default_values_t = DEFAULT_A_SAMPLES.to_vec())]
    a_samples: Vec<f64>,

    /// Random probe points per scale
    #[arg(long, default_value_t = 20)]
    points: usize,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Scale a > 0 (accepts e and pi)
    #[arg(long, value_parser = parse_scale)]
    a: f64,

    /// Degree λ
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    lambda: Scalar,

    /// Matrix size N [default: order + 2]
    #[arg(long)]
    size: Option<usize>,

    /// Order k used for the default size
    #[arg(long, default_value_t = 1)]
    order: usize,

    /// Band formula: geometric a^λ (log a)^s or exponential a^λ (log a)^s / s!
    #[arg(long, value_enum, default_value_t = Kind::Geometric)]
    kind: Kind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Geometric,
    Exponential,
}

#[derive(Args, Debug)]
struct BumpArgs {
    /// Test function as JSON, e.g. {"n":1,"center":[5.0],"width":1.0}
    #[arg(long, conflicts_with_all = ["center", "width"])]
    phi: Option<String>,

    /// Bump center, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,

    /// Bump width
    #[arg(long, default_value_t = 1.0)]
    width: f64,

    /// Radial Gauss–Legendre nodes
    #[arg(long, default_value_t = 64)]
    kr: usize,

    /// Angular nodes (circle for n = 2, azimuth for n = 3)
    #[arg(long, default_value_t = 64)]
    kw: usize,

    /// Polar nodes in cos θ for n = 3
    #[arg(long, default_value_t = 32)]
    kt: usize,

    /// Use whole-sphere rules in a fixed frame instead of rules aligned with the bump
    #[arg(long)]
    fixed_frame: bool,
}

impl BumpArgs {
    fn test_function(&self, n: usize) -> Result<TestFunction, Error> {
        match (&self.phi, &self.center) {
            (Some(text), _) => TestFunction::from_json(text),
            (None, Some(center)) => TestFunction::new(center.clone(), self.width),
            (None, None) => Err(Error::InvalidArgument(format!(
                "give --phi or --center (with {n} coordinates)"
            ))),
        }
    }

    fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            radial: self.kr,
            angular: self.kw,
            polar: self.kt,
            polar_factorization: !self.fixed_frame,
        }
    }
}

#[derive(Args, Debug)]
struct PairArgs {
    #[command(flatten)]
    expr: ExprArg,
    #[command(flatten)]
    bump: BumpArgs,
}

#[derive(Args, Debug)]
struct PairVerifyArgs {
    #[command(flatten)]
    expr: ExprArg,
    #[command(flatten)]
    bump: BumpArgs,

    /// Scale a > 0
    #[arg(long, value_parser = parse_scale)]
    a: f64,
}

#[derive(Args, Debug)]
struct IdentifyArgs {
    #[command(flatten)]
    expr: ExprArg,

    /// Base point of the ray, comma separated [required without --multi-probe]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,

    /// Log-scale step Δ
    #[arg(long, default_value_t = identify::DEFAULT_DELTA)]
    delta: f64,

    /// Number of samples M
    #[arg(long, default_value_t = 16)]
    samples: usize,

    /// Largest order tried
    #[arg(long, default_value_t = 4)]
    k_max: usize,

    /// Probe 3n random rays and merge the fits
    #[arg(long)]
    multi_probe: bool,
}

fn parse_complex(s: &str) -> Result<Scalar, String> {
    parse_scalar(s).map_err(|e| e.to_string())
}

fn parse_scale(s: &str) -> Result<f64, String> {
    match s.trim() {
        "e" => Ok(E),
        "pi" => Ok(PI),
        t => t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")),
    }
}

/// A finished report and the exit status it implies.
struct Report {
    json: String,
    text: String,
    verdict: bool,
}

impl Report {
    fn new<T: Serialize + ?Sized>(value: &T, text: String) -> Report {
        Report {
            json: json::to_string(value),
            text,
            verdict: true,
        }
    }

    fn with_verdict(mut self, verdict: bool) -> Report {
        self.verdict = verdict;
        self
    }
}

fn canonical(text: &str, n: usize) -> Result<MultiForm, Error> {
    canonicalize(&parse(text, n)?, n)
}

fn single(text: &str, n: usize) -> Result<LogForm, Error> {
    canonical(text, n)?.single()
}

enum Op {
    Euler,
    Dilate(f64),
    Power(OpKind, usize),
}

fn parse_op(args: &ApplyArgs) -> Result<Op, Error> {
    let op = args.op.trim();
    let bad = || Error::InvalidArgument(format!("unknown operator {op:?}"));
    let number = |s: &str| parse_scale(s).map_err(Error::InvalidArgument);
    if op == "euler" {
        return Ok(Op::Euler);
    }
    let (name, value) = op.split_once('=').ok_or_else(bad)?;
    match name {
        "dilate" => Ok(Op::Dilate(number(value)?)),
        "delta" => {
            let (a, mu) = value.split_once(',').ok_or_else(bad)?;
            let kind = OpKind::Delta {
                a: number(a)?,
                mu: Some(parse_scalar(mu)?),
            };
            Ok(Op::Power(kind, 1))
        }
        "power" => {
            let (kind, m) = value.split_once(',').ok_or_else(bad)?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("power count {m:?}")))?;
            match kind {
                "euler" => Ok(Op::Power(
                    OpKind::EulerMinusLambda {
                        lambda: args.lambda,
                    },
                    m,
                )),
                "delta" => {
                    let a = args
                        .a
                        .ok_or_else(|| Error::InvalidArgument("power=delta,M needs --a".into()))?;
                    Ok(Op::Power(OpKind::Delta { a, mu: args.lambda }, m))
                }
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

fn apply(args: &ApplyArgs, n: usize) -> Result<Report, Error> {
    let m = canonical(&args.expr.expr, n)?;
    let out = match parse_op(args)? {
        Op::Euler => m.try_map(|f| Ok(operators::euler(f)))?,
        Op::Dilate(a) => m.try_map(|f| operators::dilate(f, a))?,
        Op::Power(kind, count) => m.try_map(|f| operators::op_power(kind, count, f))?,
    };
    Ok(Report::new(&MultiFormJson::from(&out), text::multi(&out)))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let n = cli.n;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    match &cli.command {
        Command::Parse(a) => {
            let e = parse(&a.expr, n)?;
            let rendered = render(&e);
            #[derive(Serialize)]
            struct Parsed<'a> {
                n: usize,
                expression: &'a str,
            }
            Ok(Report::new(
                &Parsed {
                    n,
                    expression: &rendered,
                },
                rendered.clone(),
            ))
        }
        Command::Classify(a) => {
            let classes = operators::classify(&canonical(&a.expr, n)?)?;
            let text = classes
                .iter()
                .map(|c| format!("degree {} order {}", text::complex(c.degree), c.order))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::new(&classes, text))
        }
        Command::Apply(a) => apply(a, n),
        Command::Chain(a) => {
            let members = operators::chain(&single(&a.expr, n)?)?;
            let encoded: Vec<LogFormJson> = members.iter().map(LogFormJson::from).collect();
            let k = members.len() - 1;
            let text = members
                .iter()
                .enumerate()
                .map(|(s, f)| format!("f_{}:\n{}", k - s, text::form(f)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::new(&encoded, text))
        }
        Command::Verify(a) => {
            let f = single(&a.expr.expr, n)?;
            let options = VerifyOptions {
                a_samples: a.a_samples.clone(),
                points: a.points,
                seed: cli.seed,
            };
            let report = operators::verify_qahd(&f, a.degree, a.order, &options)?;
            let text = text::verification(&report);
            Ok(Report::new(&report, text).with_verdict(report.verdict))
        }
        Command::Matrix(a) => {
            let size = a.size.unwrap_or(spectral::default_size(a.order));
            let representation = match a.kind {
                Kind::Geometric => Representation::Geometric,
                Kind::Exponential => Representation::Exponential,
            };
            let m = spectral::build_dilation(representation, a.a, a.lambda, size)?;
            let text = text::matrix(&m);
            Ok(Report::new(&m, text))
        }
        Command::Pair(a) => {
            let m = canonical(&a.expr.expr, n)?;
            let phi = a.bump.test_function(n)?;
            let q = a.bump.quadrature();
            let mut value = Scalar::new(0.0, 0.0);
            if m.is_zero() {
                value += pairing::pair(&LogForm::zero(n), &phi, &q)?;
            }
            for f in m.components() {
                value += pairing::pair(f, &phi, &q)?;
            }
            #[derive(Serialize)]
            struct Paired {
                #[serde(with = "json::complex")]
                value: Scalar,
                quadrature: QuadratureSpec,
            }
            Ok(Report::new(
                &Paired {
                    value,
                    quadrature: q,
                },
                text::complex(value),
            ))
        }
        Command::PairVerify(a) => {
            let f = single(&a.expr.expr, n)?;
            let phi = a.bump.test_function(n)?;
            let report = pairing::verify_pairing_identity(&f, &phi, a.a, &a.bump.quadrature())?;
            let text = text::pairing(&report);
            Ok(Report::new(&report, text).with_verdict(report.verdict))
        }
        Command::Identify(a) => {
            let e = parse(&a.expr.expr, n)?;
            let f = |x: &[f64]| eval_expr(&e, x);
            if a.multi_probe {
                let rep = identify::multi_probe(f, n, a.delta, a.samples, a.k_max, cli.seed)?;
                let text = format!("lambda {} k {}", text::complex(rep.lambda), rep.k);
                return Ok(Report::new(&rep, text));
            }
            let x0 =
                a.x0.clone()
                    .ok_or_else(|| Error::InvalidArgument("give --x0 or --multi-probe".into()))?;
            if x0.len() != n {
                return Err(Error::PointDimension {
                    expected: n,
                    got: x0.len(),
                });
            }
            let s = identify::sample_ray(f, &x0, a.delta, a.samples)?;
            let fit = identify::prony_recover(&s, a.k_max)?;
            let rep = IdentifyReport::new(&s, &fit);
            let text = format!(
                "lambda {} k {} fit_residual {}",
                text::complex(rep.lambda),
                rep.k,
                json::format_f64(rep.fit_residual)
            );
            Ok(Report::new(&rep, text))
        }
    }
}

fn diagnostic(kind: &str, message: &str) -> String {
    #[derive(Serialize)]
    struct Inner<'a> {
        kind: &'a str,
        message: &'a str,
    }
    #[derive(Serialize)]
    struct Diagnostic<'a> {
        error: Inner<'a>,
    }
    json::to_string(&Diagnostic {
        error: Inner { kind, message },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", diagnostic("UsageError", e.to_string().trim_end()));
            return ExitCode::from(2);
        }
    };

    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", diagnostic(e.kind(), &e.to_string()));
            return ExitCode::from(e.exit_code());
        }
    };

    let mut body = match cli.format {
        Format::Json => report.json,
        Format::Text => report.text,
    };
    body.push('\n');
    let written = match &cli.output {
        Some(path) => fs::write(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("{}", diagnostic("IoError", &e.to_string()));
        return ExitCode::from(2);
    }
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
