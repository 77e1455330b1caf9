mod report;

use std::fs;
use std::process::ExitCode;

use autdual::catalog;
use autdual::classifier::{classify, gen_chain, normalize_algebra, verify_certificate, Verdict};
use autdual::format::{emit_algebra_file, parse_algebra_file};
use autdual::powers::find_embedding;
use autdual::suites;
use autdual::terms::{check_expr, parse_expr, CheckResult};
use autdual::witness::{
    build_truncation, construction_report, kernel_block_analysis, Construction, DEFAULT_ELEMENT_CAP, DEFAULT_KERNEL_CAP,
};
use autdual::{AutomaticAlgebra, Error};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "autdual", version, about = "Dualizability analysis for finite automatic algebras")]
struct Cli {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
    /// Element cap for materialized subalgebras.
    #[arg(long, global = true)]
    max_elements: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an algebra file.
    Classify {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Structural report: components, letter sets, whiskery, permutations, cosets.
    Analyze { file: String },
    /// Drop redundant letters and states, printing each reduction.
    Normalize { file: String },
    /// Print a catalog algebra.
    Catalog {
        name: String,
        params: Vec<i64>,
        /// Print the algebra file only.
        #[arg(long)]
        emit: bool,
    },
    /// Classify the first N chain algebras.
    Chain { n: usize },
    /// Check an identity `s = t` or quasi-identity `s = t & ... => u = v`.
    CheckEq { file: String, expr: String },
    /// Search for an embedding of the first algebra into the second.
    Embed { file1: String, file2: String },
    /// Build a construction at a finite truncation and check its identities.
    Witness {
        name: String,
        params: Vec<i64>,
        #[arg(long)]
        size: usize,
        /// Also enumerate hom kernels on A0 with this block-size bound.
        #[arg(long)]
        kernels: Option<usize>,
    },
    /// Re-check a JSON verdict against an algebra file.
    VerifyCert { file: String, cert_file: String },
    /// Run the self-check suites (all, or the listed criteria).
    Suite { ids: Vec<usize> },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<AutomaticAlgebra, Failure> {
    Ok(parse_algebra_file(&read(path)?)?)
}

fn print_verdict(m: &AutomaticAlgebra, v: &Verdict, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(v).expect("verdicts serialize"));
    } else {
        print!("{}", report::verdict_text(v));
    }
    if let Some(note) = report::literature_note(m) {
        println!("{note}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { file, json } => {
            let m = load(&file)?;
            print_verdict(&m, &classify(&m)?, json);
        }
        Command::Analyze { file } => print!("{}", report::analysis(&load(&file)?)?),
        Command::Normalize { file } => {
            let m = load(&file)?;
            let (n, steps) = normalize_algebra(&m).map_err(Error::from)?;
            for s in &steps {
                println!("# dropped {} ({:?})", s.removed, s.kind);
            }
            print!("{}", emit_algebra_file(&n));
        }
        Command::Catalog { name, params, emit } => {
            let m = catalog::catalog(&name, &params).map_err(Error::from)?;
            print!("{}", emit_algebra_file(&m));
            if !emit {
                println!();
                print_verdict(&m, &classify(&m)?, false);
            }
        }
        Command::Chain { n } => {
            if n == 0 {
                return Err(usage("chain needs N ≥ 1"));
            }
            for k in 1..=n {
                let m = gen_chain(k);
                let v = classify(&m)?;
                println!(
                    "M_{k}: {} ({}; {} states, {} letters)",
                    v.verdict.short(),
                    v.rule,
                    m.num_states(),
                    m.num_letters()
                );
            }
        }
        Command::CheckEq { file, expr } => {
            let m = load(&file)?;
            let e = parse_expr(&expr).map_err(Error::from)?;
            match check_expr(&m, &e) {
                CheckResult::Holds => println!("holds"),
                CheckResult::Counterexample(a) => println!("fails at {}", a.render(&m)),
            }
        }
        Command::Embed { file1, file2 } => {
            let (src, dst) = (load(&file1)?, load(&file2)?);
            match find_embedding(&src, &dst) {
                Some(h) => {
                    println!("embedding found");
                    for (x, y) in src.elements().into_iter().zip(h) {
                        println!("  {} -> {}", src.name(x), dst.name(y));
                    }
                }
                None => println!("no embedding"),
            }
        }
        Command::Witness { name, params, size, kernels } => {
            let c = Construction::from_name(&name, &params).map_err(Error::from)?;
            let t = build_truncation(&c, size, cli.max_elements.unwrap_or(DEFAULT_ELEMENT_CAP)).map_err(Error::from)?;
            let rep = construction_report(&t);
            println!("{rep}");
            if let Some(nu) = kernels {
                let k = kernel_block_analysis(&t, nu, cli.max_elements.unwrap_or(DEFAULT_KERNEL_CAP))
                    .map_err(Error::from)?;
                println!("{k}");
            }
            if !rep.passed() {
                return Err(Failure { code: 4, message: "a construction identity failed".into() });
            }
        }
        Command::VerifyCert { file, cert_file } => {
            let m = load(&file)?;
            let v: Verdict = serde_json::from_str(&read(&cert_file)?)
                .map_err(|e| Failure { code: 2, message: format!("{cert_file}: {e}") })?;
            match verify_certificate(&m, &v) {
                Ok(()) => println!("accepted: {} by {}", v.verdict.short(), v.rule),
                Err(why) => return Err(Failure { code: 3, message: format!("rejected: {why}") }),
            }
        }
        Command::Suite { ids } => {
            println!("seed {}", cli.seed);
            let ids = if ids.is_empty() { (1..=12).collect() } else { ids };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=12).contains(&i)) {
                return Err(usage(format!("criteria are numbered 1 to 12, got {bad}")));
            }
            let mut failed = 0;
            for id in ids {
                let r = suites::run_criterion(id, cli.seed);
                failed += usize::from(!r.passed);
                println!("{r}");
            }
            if failed > 0 {
                return Err(Failure { code: 4, message: format!("{failed} criteria failed") });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
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
