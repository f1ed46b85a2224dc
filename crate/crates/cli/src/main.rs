use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qgx_core::hopfpair::{Functionals, PairingEngine};
use qgx_core::ncalg::{eval_nc, format_nc, DslError, OperatorForms, RuleSet, DEFAULT_FUEL};
use qgx_core::suite::{constant_tensor, run, Config, Constant, Suite};
use qgx_core::wcalc::Forms;
use qgx_core::{parse, IndexedTensor, RBundle};

/// Exact checks for the bicovariant differential calculus on GL_q(N).
#[derive(Parser)]
#[command(name = "qgx", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite; exits 1 if any check fails.
    Check {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print a tensor as JSON.
    Constants {
        #[arg(value_parser = parse_constant)]
        which: Constant,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print the normal form of an expression.
    Nf {
        expr: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Matrix size N (default 2, or the size of --r-file).
    #[arg(long)]
    n: Option<usize>,
    /// Pairing-depth bound for dual-side checks.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Highest form grade the forms layer builds.
    #[arg(long, default_value_t = 3)]
    grade_cap: usize,
    /// Rewrite-step bound for normal forms.
    #[arg(long, env = "QGX_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// R-matrix in the tensor JSON format, replacing the built-in one.
    #[arg(long)]
    r_file: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_constant(s: &str) -> Result<Constant, String> {
    s.parse()
}

/// Input problems; reported with exit status 2.
struct Usage(String);

impl Opts {
    fn config(&self) -> Result<Config, Usage> {
        let r = match &self.r_file {
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| Usage(format!("cannot read {}: {}", p.display(), e)))?;
                Some(IndexedTensor::from_json(&s).map_err(|e| Usage(format!("{}: {}", p.display(), e)))?)
            }
            None => None,
        };
        let n = self.n.or(r.as_ref().map(|t| t.n())).unwrap_or(2);
        let cfg = Config { n, degree: self.degree, grade_cap: self.grade_cap, fuel: self.fuel, r };
        cfg.validate().map_err(Usage)?;
        Ok(cfg)
    }
}

fn check(suite: Suite, opts: &Opts) -> Result<ExitCode, Usage> {
    let cfg = opts.config()?;
    let rep = run(suite, &cfg);
    match opts.format {
        Format::Text => print!("{}", rep.to_text()),
        Format::Json => println!("{}", rep.to_json()),
    }
    Ok(if rep.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn constants(which: Constant, opts: &Opts) -> Result<ExitCode, Usage> {
    let cfg = opts.config()?;
    match constant_tensor(which, &cfg) {
        Ok(t) => {
            println!("{}", t.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            Ok(ExitCode::from(1))
        }
    }
}

fn normal_form(expr: &str, opts: &Opts) -> Result<ExitCode, Usage> {
    let cfg = opts.config()?;
    let e = parse(expr).map_err(|e| Usage(format!("cannot parse expression: {}", e)))?;
    let fail = |msg: String| {
        eprintln!("error: {}", msg);
        Ok(ExitCode::from(1))
    };
    let bundle = match RBundle::from_r(cfg.r_matrix()) {
        Ok(b) => b,
        Err(e) => return fail(e.to_string()),
    };
    let rules = match RuleSet::build(&bundle) {
        Ok(r) => r.with_fuel(cfg.fuel),
        Err(e) => return fail(e.to_string()),
    };
    // The forms layer is only built when the expression uses d, L or i.
    let result = if has_operator(expr) {
        let engine = match PairingEngine::new(&bundle) {
            Ok(x) => x,
            Err(e) => return fail(e.to_string()),
        };
        let funcs = Functionals::new(&bundle);
        match Forms::new(&rules, &engine, &funcs, cfg.grade_cap) {
            Ok(forms) => eval_nc(&e, &rules, Some(&forms as &dyn OperatorForms)),
            Err(err) => Err(DslError::Operator(err.to_string())),
        }
    } else {
        eval_nc(&e, &rules, None)
    };
    match result {
        Ok(v) => {
            let s = format_nc(&v);
            match opts.format {
                Format::Text => println!("{}", s),
                Format::Json => println!("{}", serde_json::json!({ "normal_form": s })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => fail(err.to_string()),
    }
}

fn has_operator(expr: &str) -> bool {
    let b = expr.as_bytes();
    b.iter().enumerate().any(|(i, &c)| {
        let head = i == 0 || !b[i - 1].is_ascii_alphanumeric();
        head && matches!(c, b'd' | b'L' | b'i') && matches!(b.get(i + 1), Some(b'(') | Some(b'['))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Check { suite, opts } => check(*suite, opts),
        Cmd::Constants { which, opts } => constants(*which, opts),
        Cmd::Nf { expr, opts } => normal_form(expr, opts),
    };
    r.unwrap_or_else(|Usage(msg)| {
        eprintln!("error: {}", msg);
        ExitCode::from(2)
    })
}
