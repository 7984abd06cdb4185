//! Command-line front end: bijection maps, Fourier analysis and
//! synthesis, spectrum enumeration, figure datasets and a self-test.
//!
//! Exit codes: 0 success; 1 argument/number parse error; 2 one or more
//! map inputs outside the bijection's domain; 3 missing or corrupt
//! coefficient file; 4 quadrature failure.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigRational, One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ndcantor::rational::{parse_decimal, parse_rational, to_decimal_string, to_f64};
use ndcantor::{
    analyze, basis_fn, cexp_i, figure_data, integral, nd_cos, nd_sin, one_prime, parseval_check,
    reconstruct, sawtooth_nd, scalar_product, spectrum_n_prime, ArithmeticContext, BasisIndex,
    BijectionKind, Error, FigureKind, FourierSeries, NDFunction, NDNumber, QuadratureSpec,
};

#[derive(Parser)]
#[command(
    name = "ndcantor",
    version,
    about = "Arithmetic, calculus and Fourier analysis conjugated through a bijection",
    after_help = "Exit codes: 0 ok, 1 parse error, 2 input outside the bijection's domain,\n\
                  3 missing/corrupt coefficient file, 4 quadrature failure.\n\
                  Numbers are exact rationals like 1/3 or -7; decimal strings are accepted\n\
                  only with --accept-decimals (they are converted exactly, base 10)."
)]
struct Cli {
    /// Bijection, e.g. identity, benioff:p=2, fechner:a=1,b=0,
    /// ternary-line:minus, quaternary:plus, middle-third
    #[arg(long, global = true, default_value = "ternary-line:minus")]
    bijection: String,

    /// Dyadic precision for transcendental upper coordinates
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,

    /// Period length f(T) as an exact rational
    #[arg(long = "f-t", global = true, default_value = "1")]
    f_t: String,

    /// Output format for tabular commands
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Decimal digits used when rendering exact values
    #[arg(long, global = true, default_value_t = 20)]
    digits: usize,

    /// Parse decimal inputs (exactly, in base 10) instead of rejecting them
    #[arg(long, global = true)]
    accept_decimals: bool,

    #[command(flatten)]
    quad: QuadArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuadArgs {
    /// Initial quadrature panels per smooth piece
    #[arg(long, global = true, default_value_t = 4)]
    panels: usize,

    /// Gauss-Legendre nodes per panel
    #[arg(long, global = true, default_value_t = 32)]
    nodes: usize,

    /// Relative quadrature tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Signal {
    Sawtooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Fig1Upper,
    Fig1Lower,
    Fig2Upper,
    Fig2Lower,
    Fig3,
}

#[derive(Subcommand)]
enum Command {
    /// Apply f (--forward) or f^-1 (--inverse) to each value
    Map {
        /// Map upper -> lower coordinates
        #[arg(long, conflicts_with = "inverse")]
        forward: bool,
        /// Map lower -> upper coordinates
        #[arg(long)]
        inverse: bool,
        /// Values to map, exact rationals
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Fourier-analyze a signal; writes a coefficient JSON document
    Analyze {
        #[arg(long, value_enum, default_value_t = Signal::Sawtooth)]
        signal: Signal,
        /// Highest harmonic n to compute
        #[arg(long, default_value_t = 30)]
        terms: u32,
    },
    /// Sample a partial sum from a coefficient file, both coordinates
    Reconstruct {
        /// Coefficient JSON produced by `analyze`
        #[arg(long)]
        coefficients: PathBuf,
        /// Harmonics to keep (defaults to all stored)
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Emit the eigenvalue labels n' = f^-1(n) for n = 1..=terms
    Spectrum {
        #[arg(long, default_value_t = 10)]
        terms: u64,
    },
    /// Emit the sampled figure datasets
    Figures {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Harmonics for fig3 (coefficients are computed on the fly)
        #[arg(long, default_value_t = 30)]
        terms: usize,
    },
    /// Run the numeric self-test suites and report max deviations
    Selftest,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => 1,
            Error::NotInCantorSet { .. } | Error::Domain(_) => 2,
            Error::QuadratureNonConvergent { .. } => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version are not errors.
            use clap::error::ErrorKind::*;
            let _ = e.print();
            return match e.kind() {
                DisplayHelp | DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let kind: BijectionKind = cli
        .bijection
        .parse()
        .map_err(|e: Error| Failure::new(1, e.to_string()))?;
    let ctx = ArithmeticContext::with_precision(kind, cli.precision_bits);
    let f_t = parse_number(&cli.f_t, cli.accept_decimals)?;
    if !f_t.is_positive() {
        return Err(Failure::new(1, "f-t must be positive"));
    }
    let spec = QuadratureSpec {
        nodes: cli.quad.nodes,
        initial_panels: cli.quad.panels,
        rel_tol: cli.quad.tolerance,
        ..QuadratureSpec::default()
    };

    match &cli.command {
        Command::Map {
            forward,
            inverse,
            values,
        } => {
            if *forward == *inverse {
                return Err(Failure::new(1, "map needs exactly one of --forward/--inverse"));
            }
            cmd_map(&cli, &ctx, *forward, values)
        }
        Command::Analyze { signal, terms } => cmd_analyze(&cli, &ctx, &f_t, *signal, *terms, &spec),
        Command::Reconstruct {
            coefficients,
            terms,
            samples,
        } => cmd_reconstruct(&cli, coefficients, *terms, *samples),
        Command::Spectrum { terms } => cmd_spectrum(&cli, &ctx, *terms),
        Command::Figures {
            which,
            samples,
            terms,
        } => cmd_figures(&cli, &ctx, &f_t, *which, *samples, *terms, &spec),
        Command::Selftest => cmd_selftest(&cli, &spec),
    }
}

fn parse_number(s: &str, accept_decimals: bool) -> Result<BigRational, Failure> {
    if s.contains('.') {
        if accept_decimals {
            return parse_decimal(s).map_err(|e| Failure::new(1, e.to_string()));
        }
        return Err(Failure::new(
            1,
            format!("{s:?} looks like a decimal; pass --accept-decimals or use p/q"),
        ));
    }
    parse_rational(s).map_err(|e| Failure::new(1, e.to_string()))
}

fn emit(cli: &Cli, content: String) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .map_err(|e| Failure::new(1, format!("stdout: {e}")))
        }
    }
}

/// Rows -> CSV (header + LF lines) or a schema-versioned JSON document.
fn emit_table(cli: &Cli, command: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Failure> {
    let content = match cli.format {
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&header.join(","));
            s.push('\n');
            for row in &rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| ((*k).to_string(), serde_json::Value::String(v.clone())))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            let doc = serde_json::json!({
                "schema_version": 1,
                "command": command,
                "bijection": cli.bijection,
                "precision_bits": cli.precision_bits,
                "display_digits": cli.digits,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    };
    emit(cli, content)
}

fn cmd_map(
    cli: &Cli,
    ctx: &Arc<ArithmeticContext>,
    forward: bool,
    values: &[String],
) -> Result<(), Failure> {
    let mut rows = Vec::new();
    let mut out_of_domain = false;
    for v in values {
        let x = parse_number(v, cli.accept_decimals)?;
        let result = if forward {
            ctx.forward(&x)
        } else {
            Ok(ctx.inverse(&x))
        };
        match result {
            Ok(r) => rows.push(vec![
                v.clone(),
                r.to_string(),
                to_decimal_string(&r, cli.digits),
                "ok".into(),
            ]),
            Err(e @ Error::NotInCantorSet { .. }) | Err(e @ Error::Domain(_)) => {
                out_of_domain = true;
                rows.push(vec![v.clone(), String::new(), String::new(), e.to_string()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit_table(cli, "map", &["input", "result", "decimal", "status"], rows)?;
    if out_of_domain {
        return Err(Failure::new(2, "one or more inputs outside the domain"));
    }
    Ok(())
}

fn cmd_analyze(
    cli: &Cli,
    ctx: &Arc<ArithmeticContext>,
    f_t: &BigRational,
    signal: Signal,
    terms: u32,
    spec: &QuadratureSpec,
) -> Result<(), Failure> {
    let a = match signal {
        Signal::Sawtooth => sawtooth_nd(ctx),
    };
    let series = analyze(&a, f_t, terms, spec)?;
    let mut doc = serde_json::to_string_pretty(&series.to_json(cli.digits)).expect("serializable");
    doc.push('\n');
    emit(cli, doc)
}

fn load_series(path: &PathBuf) -> Result<FourierSeries, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(3, format!("cannot read {}: {e}", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::new(3, format!("{} is not JSON: {e}", path.display())))?;
    FourierSeries::from_json(&doc).map_err(|e| Failure::new(3, e.to_string()))
}

fn cmd_reconstruct(
    cli: &Cli,
    coefficients: &PathBuf,
    terms: Option<usize>,
    samples: usize,
) -> Result<(), Failure> {
    let series = load_series(coefficients)?;
    let terms = terms.unwrap_or_else(|| series.n_max());
    if terms > series.n_max() {
        return Err(Failure::new(
            3,
            format!("file holds {} harmonics, {terms} requested", series.n_max()),
        ));
    }
    let ctx = series.context.clone();
    let f_t = series.f_t.clone();
    if samples < 2 {
        return Err(Failure::new(1, "need at least 2 samples"));
    }
    let mut rows = Vec::new();
    let mut uppers = Vec::new();
    for i in 0..samples {
        // x = -f_T/2 + i * f_T / samples, exact.
        let x = &f_t * BigRational::new(num::BigInt::from(i as i64), num::BigInt::from(samples as i64))
            - &f_t / BigRational::from_integer(num::BigInt::from(2));
        let xn = NDNumber::from_lower(ctx.clone(), x.clone());
        let y = reconstruct(&series, &xn, terms)?;
        rows.push(vec![
            to_f64(&x).to_string(),
            to_f64(y.lower()).to_string(),
            "lower".into(),
        ]);
        uppers.push(vec![
            to_f64(&ctx.inverse(&x)).to_string(),
            to_f64(y.upper()).to_string(),
            "upper".into(),
        ]);
    }
    rows.extend(uppers);
    emit_table(cli, "reconstruct", &["x", "y", "coordinate_system"], rows)
}

fn cmd_spectrum(cli: &Cli, ctx: &Arc<ArithmeticContext>, terms: u64) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for n in 1..=terms {
        let np = spectrum_n_prime(ctx, n)?;
        rows.push(vec![
            n.to_string(),
            np.to_string(),
            to_decimal_string(&np, cli.digits),
        ]);
    }
    emit_table(cli, "spectrum", &["n", "n_prime", "decimal"], rows)
}

fn cmd_figures(
    cli: &Cli,
    ctx: &Arc<ArithmeticContext>,
    f_t: &BigRational,
    which: Which,
    samples: usize,
    terms: usize,
    spec: &QuadratureSpec,
) -> Result<(), Failure> {
    let series;
    let (kind, series_ref) = match which {
        Which::Fig1Upper => (FigureKind::Fig1Upper, None),
        Which::Fig1Lower => (FigureKind::Fig1Lower, None),
        Which::Fig2Upper => (FigureKind::Fig2Upper, None),
        Which::Fig2Lower => (FigureKind::Fig2Lower, None),
        Which::Fig3 => {
            series = analyze(&sawtooth_nd(ctx), f_t, terms as u32, spec)?;
            (FigureKind::Fig3Terms(terms), Some(&series))
        }
    };
    let pts = figure_data(kind, samples, ctx, series_ref)?;
    let rows = pts
        .iter()
        .map(|p| {
            vec![
                p.x.to_string(),
                p.y.to_string(),
                p.coordinate_system.to_string(),
            ]
        })
        .collect();
    emit_table(cli, "figures", &["x", "y", "coordinate_system"], rows)
}

struct Suite {
    name: &'static str,
    max_deviation: f64,
    tolerance: f64,
}

impl Suite {
    fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

fn cmd_selftest(cli: &Cli, spec: &QuadratureSpec) -> Result<(), Failure> {
    let prec = cli.precision_bits;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E1F);
    let mut suites = Vec::new();
    let rat = |n: i64, d: i64| BigRational::new(num::BigInt::from(n), num::BigInt::from(d));

    // Algebraic laws, exact in lower coordinates across every bijection.
    {
        let contexts = [
            "identity",
            "benioff:p=2",
            "fechner:a=2,b=1",
            "ternary-line:minus",
            "quaternary:plus",
            "middle-third",
        ];
        let mut max: f64 = 0.0;
        for name in contexts {
            let kind: BijectionKind = name.parse().expect("built-in");
            let ctx = ArithmeticContext::with_precision(kind, prec);
            for _ in 0..200 {
                let x = NDNumber::from_lower(
                    ctx.clone(),
                    rat(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=100)),
                );
                let y = NDNumber::from_lower(
                    ctx.clone(),
                    rat(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=100)),
                );
                let d1 = x.add(&y).unwrap().sub(&y.add(&x).unwrap()).unwrap();
                let d2 = x.sub(&x).unwrap();
                let d3 = x
                    .mul(&one_prime(&ctx))
                    .unwrap()
                    .sub(&x)
                    .unwrap();
                for d in [d1, d2, d3] {
                    max = max.max(to_f64(d.lower()).abs());
                }
            }
        }
        suites.push(Suite {
            name: "arithmetic-laws",
            max_deviation: max,
            tolerance: 0.0,
        });
    }

    // Fechner negative element: (-x) (+) x = 0' and uppers multiply to
    // the constant e^{-2b/a}.
    {
        let ctx = ArithmeticContext::with_precision("fechner:a=2,b=1".parse().expect("built-in"), prec);
        let scale = ndcantor::dyadic::exp_dyadic(&rat(-1, 1), prec + 32);
        let mut max: f64 = 0.0;
        for _ in 0..20 {
            let x = NDNumber::from_lower(ctx.clone(), rat(rng.gen_range(-30..=30), rng.gen_range(1..=7)));
            let neg = x.neg();
            max = max.max(to_f64(neg.add(&x).unwrap().lower()).abs());
            let rel = ((neg.upper() * x.upper() - &scale) / &scale).abs();
            max = max.max(to_f64(&rel));
        }
        suites.push(Suite {
            name: "fechner-negative",
            max_deviation: max,
            tolerance: 2f64.powi(-100),
        });
    }

    // Trig/exp identities through the dyadic transcendental layer.
    {
        let ctx = ArithmeticContext::with_precision(BijectionKind::Identity, prec);
        let mut max: f64 = 0.0;
        for _ in 0..25 {
            let phi = NDNumber::from_lower(ctx.clone(), rat(rng.gen_range(-300..=300), rng.gen_range(1..=50)));
            let (c, s) = (nd_cos(&phi), nd_sin(&phi));
            let ident = c.mul(&c).unwrap().add(&s.mul(&s).unwrap()).unwrap();
            max = max.max(to_f64(&(ident.lower() - BigRational::one())).abs());
            let prod = cexp_i(&phi).cmul(&cexp_i(&phi.neg())).unwrap();
            max = max.max(to_f64(&(prod.re.lower() - BigRational::one())).abs());
            max = max.max(to_f64(prod.im.lower()).abs());
        }
        suites.push(Suite {
            name: "trig-identities",
            max_deviation: max,
            tolerance: 2f64.powi(-100),
        });
    }

    // Fundamental theorem of calculus on a smooth signal.
    {
        let ctx = ArithmeticContext::with_precision(BijectionKind::Identity, prec);
        let a = NDFunction::cos_scaled(ctx.clone(), BigRational::one());
        let x0 = NDNumber::from_lower(ctx.clone(), rat(1, 4));
        let x1 = NDNumber::from_lower(ctx.clone(), rat(3, 2));
        let got = integral(&a, &x0, &x1, spec).map_err(Failure::from)?;
        let want = NDFunction::sin_scaled(ctx.clone(), BigRational::one());
        let want = want.eval_lower(x1.lower(), 96) - want.eval_lower(x0.lower(), 96);
        let rel = to_f64(&((got.lower() - &want) / &want)).abs();
        suites.push(Suite {
            name: "ftc",
            max_deviation: rel,
            tolerance: 1e-10,
        });
    }

    // Basis orthonormality and the Parseval defect for the sawtooth
    // (compared against the analytic truncation tail).
    {
        let ctx = ArithmeticContext::with_precision(BijectionKind::Identity, prec);
        let f_t = BigRational::one();
        let mut max: f64 = 0.0;
        let mut idx = vec![BasisIndex::cos(0)];
        for n in 1..=3u32 {
            idx.push(BasisIndex::cos(n));
            idx.push(BasisIndex::sin(n));
        }
        for (i, a) in idx.iter().enumerate() {
            for (j, b) in idx.iter().enumerate() {
                let p = scalar_product(
                    &basis_fn(*a, &f_t, &ctx).into(),
                    &basis_fn(*b, &f_t, &ctx).into(),
                    &f_t,
                    spec,
                )
                .map_err(Failure::from)?;
                let want = if i == j { 1.0 } else { 0.0 };
                max = max.max((to_f64(p.re.lower()) - want).abs());
            }
        }
        let saw = sawtooth_nd(&ctx);
        let series = analyze(&saw, &f_t, 40, spec).map_err(Failure::from)?;
        let (lhs, rhs) = parseval_check(&saw, &saw, &series, &series, spec).map_err(Failure::from)?;
        let pi = std::f64::consts::PI;
        let tail: f64 = (41..500_000u64)
            .map(|n| 1.0 / (2.0 * pi * pi * (n * n) as f64))
            .sum::<f64>()
            + 1.0 / (2.0 * pi * pi * 499_999.5);
        let defect = to_f64(lhs.re.lower()) - to_f64(rhs.re.lower());
        max = max.max((defect - tail).abs());
        suites.push(Suite {
            name: "fourier-orthonormality-parseval",
            max_deviation: max,
            tolerance: 1e-8,
        });
    }

    let mut rows = Vec::new();
    let mut all_ok = true;
    for s in &suites {
        all_ok &= s.passed();
        rows.push(vec![
            s.name.to_string(),
            if s.passed() { "pass".into() } else { "FAIL".into() },
            format!("{:.3e}", s.max_deviation),
            format!("{:.3e}", s.tolerance),
        ]);
    }
    emit_table(
        cli,
        "selftest",
        &["suite", "status", "max_deviation", "tolerance"],
        rows,
    )?;
    if !all_ok {
        return Err(Failure::new(1, "self-test reported degraded accuracy"));
    }
    Ok(())
}
