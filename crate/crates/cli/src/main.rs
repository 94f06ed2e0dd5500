use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use uconf_core::configspace::splits2;
use uconf_core::field_model::{oracle_report, to_functional};
use uconf_core::files::{self, field_from_file, section_from_entries, section_to_entries, FieldFile, Model, ModelFile, SectionFile};
use uconf_core::laws::{run_all, split_pair_count, Params};
use uconf_core::scalar;
use uconf_core::sections::{convolve, section_bracket, Section, Truncation};
use uconf_core::tensor_lab::{dim_t_fibre, dim_tboxt_fibre, enumerate_t_fibre, enumerate_tboxt_fibre};

const SEED_VAR: &str = "UCONF_SEED";

#[derive(Parser)]
#[command(name = "uconf", version, about = "Exact algebra of sections over finite configuration spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Model file; the bundled three-point model when omitted
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    model: ModelArg,
    #[arg(long)]
    lhs: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and enumerated tensor dimensions over all k-point configurations
    Dims {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        k: usize,
    },
    /// Run every law suite on seeded random instances
    Axioms {
        #[command(flatten)]
        model: ModelArg,
        /// Overridden by the UCONF_SEED environment variable
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Bracket of two sections
    Bracket(PairArgs),
    /// Convolution product of two sections
    Convolve(PairArgs),
    /// Evaluate the functional of a section at a field
    Eval {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        field: PathBuf,
    },
    /// Compare the section bracket with the Peierls bracket of functionals
    PeierlsCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        field: Option<PathBuf>,
    },
}

/// Bad input; reported with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(Value, bool), InputError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_model(arg: &ModelArg) -> Result<Model, InputError> {
    match &arg.model {
        None => Ok(files::m3()),
        Some(path) => {
            let file: ModelFile = read_json(path)?;
            file.to_model().map_err(|e| InputError(format!("{}: {e}", path.display())))
        }
    }
}

fn load_section(path: &Path, model: &Model) -> Result<Section, InputError> {
    let entries: SectionFile = read_json(path)?;
    section_from_entries(&entries, &model.base, model.base.len())
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path, model: &Model) -> Result<uconf_core::field_model::Field, InputError> {
    let file: FieldFile = read_json(path)?;
    field_from_file(&file, &model.base).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn section_json(t: &Truncation) -> Value {
    let dropped: Vec<Value> = t
        .dropped
        .iter()
        .map(|(x, e)| json!({"config": x.iter().map(|p| p.to_string()).collect::<Vec<_>>(), "element": e.to_string()}))
        .collect();
    json!({
        "max_points": t.kept.max_points(),
        "result": serde_json::to_value(section_to_entries(&t.kept)).expect("plain data"),
        "dropped": dropped,
    })
}

fn dims(model: &Model, k: usize) -> Outcome {
    let mut ok = true;
    let mut entries = Vec::new();
    let mut t_values = Vec::new();
    let mut tt_values = Vec::new();
    for x in model.base.configurations(k) {
        let (t, te) = (dim_t_fibre(&model.base, &x)?, enumerate_t_fibre(&model.base, &x)?);
        let (tt, tte) = (dim_tboxt_fibre(&model.base, &x)?, enumerate_tboxt_fibre(&model.base, &x)?);
        ok &= t == te && tt == tte;
        t_values.push(t);
        tt_values.push(tt);
        entries.push(json!({
            "config": x.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "T": {"closed": t, "enumerated": te},
            "TboxT": {"closed": tt, "enumerated": tte},
            "splits": splits2(&x).len(),
        }));
    }
    let factorial = uconf_core::configspace::factorial(k);
    let identity = json!({"sum": split_pair_count(k), "closed": (k as u64 + 1) * factorial});
    ok &= split_pair_count(k) == (k as u64 + 1) * factorial;
    let mut out = json!({"k": k, "configurations": entries, "split_identity": identity, "ok": ok});
    let uniform = |v: &[u64]| v.first().filter(|f| v.iter().all(|x| x == *f)).copied();
    if let (Some(t), Some(tt)) = (uniform(&t_values), uniform(&tt_values)) {
        out["T"] = json!(t);
        out["TboxT"] = json!(tt);
    }
    Ok((out, ok))
}

fn seed_override(seed: u64) -> Result<u64, InputError> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| InputError(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(seed),
    }
}

fn axioms(model: &Model, seed: u64, cases: usize, params: Params) -> Outcome {
    let reports = run_all(&model.base, &model.kernel, &params, seed, cases);
    let passed = reports.iter().all(|r| r.passed());
    let laws: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "law": r.name,
                "cases": r.cases,
                "failures": r.failures,
                "first_failure": r.first_failure,
            })
        })
        .collect();
    let out = json!({
        "seed": seed,
        "cases": cases,
        "max_points": params.max_points,
        "max_degree": params.max_degree,
        "laws": laws,
        "passed": passed,
    });
    Ok((out, passed))
}

fn peierls_check(model: &Model, s: &Section, t: &Section, field: Option<&uconf_core::field_model::Field>) -> Outcome {
    let r = oracle_report(s, t, &model.kernel, &model.base)?;
    let mut out = json!({
        "symbolic": r.symbolic.to_string(),
        "peierls": r.peierls.to_string(),
        "peierls_all_pairs": r.peierls_all_pairs.to_string(),
        "equal": r.agrees(),
        "equal_all_pairs": r.agrees_with_all_pairs(),
    });
    if let Some(f) = field {
        out["values"] = json!({
            "symbolic": scalar::render(&r.symbolic.evaluate(f)?),
            "peierls": scalar::render(&r.peierls.evaluate(f)?),
        });
    }
    Ok((out, r.agrees()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Dims { model, k } => dims(&load_model(&model)?, k),
        Command::Axioms { model, seed, cases, max_points, max_degree } => {
            let model = load_model(&model)?;
            let params = Params { max_points, max_degree, ..Params::default() };
            axioms(&model, seed_override(seed)?, cases, params)
        }
        Command::Bracket(args) => {
            let model = load_model(&args.model)?;
            let (s, t) = (load_section(&args.lhs, &model)?, load_section(&args.rhs, &model)?);
            Ok((section_json(&section_bracket(&s, &t, &model.kernel)), true))
        }
        Command::Convolve(args) => {
            let model = load_model(&args.model)?;
            let (s, t) = (load_section(&args.lhs, &model)?, load_section(&args.rhs, &model)?);
            Ok((section_json(&convolve(&s, &t)), true))
        }
        Command::Eval { model, lhs, field } => {
            let model = load_model(&model)?;
            let s = load_section(&lhs, &model)?;
            let f = load_field(&field, &model)?;
            let func = to_functional(&s, &model.base)?;
            let value = func.evaluate(&f)?;
            Ok((json!({"functional": func.to_string(), "value": scalar::render(&value)}), true))
        }
        Command::PeierlsCheck { pair, field } => {
            let model = load_model(&pair.model)?;
            let (s, t) = (load_section(&pair.lhs, &model)?, load_section(&pair.rhs, &model)?);
            let f = field.map(|p| load_field(&p, &model)).transpose()?;
            peierls_check(&model, &s, &t, f.as_ref())
        }
    }
}

fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            emit(&serde_json::to_string_pretty(&out).expect("serializable"));
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("uconf: verification failed");
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("uconf: {msg}");
            emit(&json!({"error": msg}).to_string());
            ExitCode::from(2)
        }
    }
}
