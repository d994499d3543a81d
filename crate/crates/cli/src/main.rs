use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use potalg::brace::{
    associated_graded, check_brace, check_degree_bound, check_filtration, check_truss, distributivity_series,
    pre_lie_defect, BraceFile, FiniteTruss,
};
use potalg::isotest::{brute_force_iso, compare_invariants, distinguish_algebras, lifted_iso_search};
use potalg::quotient::TableRecord;
use potalg::reproduce::{self, dim_report};
use potalg::{
    classify_potential, complete, hilbert, par, parse_poly, AlgebraError, DerivativeMode, FieldSpec, FiniteAlgebra,
    FreePoly, MonomialOrder, MultTable, Potential, Variable,
};

const DEFAULT_CAP: u32 = 12;
const EXTENDED_CAP: u32 = 16;

#[derive(Parser)]
#[command(name = "potalg", version, about = "Potential algebras, standard bases and finite braces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Simple,
    Ginzburg,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Xy,
    Yx,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderMode {
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Auto,
    Brute,
    Lift,
    Invariants,
}

#[derive(Clone, Copy, ValueEnum)]
enum BraceAction {
    Check,
    Graded,
    Prelie,
    Series,
}

#[derive(clap::Args)]
struct PotentialArgs {
    #[arg(long)]
    potential: String,
    #[arg(long, value_enum, default_value = "simple")]
    mode: Mode,
    /// Prime characteristic; rationals when omitted.
    #[arg(long)]
    field: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// The two cyclic derivatives of a potential.
    Derive(PotentialArgs),
    /// Truncated standard basis of the relation ideal.
    Gb {
        #[arg(long, conflicts_with = "relations", required_unless_present = "relations")]
        potential: Option<String>,
        /// Two comma-separated relations.
        #[arg(long)]
        relations: Option<String>,
        #[arg(long, value_enum, default_value = "simple")]
        derivative: Mode,
        #[arg(long, value_enum, default_value = "xy")]
        order: OrderArg,
        #[arg(long, value_enum, default_value = "local")]
        mode: OrderMode,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long)]
        cap: u32,
    },
    /// Hilbert function and dimension of the potential algebra.
    Dim {
        #[command(flatten)]
        input: PotentialArgs,
        /// Degree cap; when omitted, 12 with one extension to 16 if needed.
        #[arg(long)]
        cap: Option<u32>,
        /// Cross-check the layers against the linear-algebra oracle.
        #[arg(long)]
        oracle: bool,
        /// Include the multiplication table (input format of `iso`).
        #[arg(long)]
        table: bool,
    },
    /// Canonical form and classification of a potential.
    Canon {
        #[command(flatten)]
        input: PotentialArgs,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
    },
    /// Isomorphism test for two finite algebras given by multiplication tables.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Work over F_p instead of the rationals.
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: Strategy,
    },
    /// Checks on a finite brace or truss with a filtration.
    Brace {
        #[arg(value_enum)]
        action: BraceAction,
        #[arg(long)]
        input: PathBuf,
        /// a,b,c,N for the distributivity series.
        #[arg(long)]
        series_args: Option<String>,
    },
    /// Re-run one of the built-in reproduction suites.
    Reproduce {
        #[arg(long, value_parser = reproduce::THEOREMS)]
        theorem: String,
    },
}

/// Failures carry the exit code they map to.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        let (code, kind) = match e {
            AlgebraError::ResourceCap(_) | AlgebraError::NotFinite(_) => (3, "resource-cap"),
            AlgebraError::Parse { .. } => (2, "parse"),
            _ => (2, "invalid"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn config(message: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "config", message: message.into() }
}

type Outcome = Result<Value, Failure>;

fn field_of(p: Option<u64>) -> Result<FieldSpec, Failure> {
    Ok(match p {
        Some(p) => FieldSpec::prime(p)?,
        None => FieldSpec::Rationals,
    })
}

fn derivative_mode(m: Mode) -> DerivativeMode {
    match m {
        Mode::Simple => DerivativeMode::Simple,
        Mode::Ginzburg => DerivativeMode::Ginzburg,
    }
}

fn parse_potential(text: &str, mode: Mode, field: Option<u64>) -> Result<Potential, Failure> {
    Ok(Potential::new(parse_poly(text, field_of(field)?)?, derivative_mode(mode)))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn derive(args: &PotentialArgs) -> Outcome {
    let f = parse_potential(&args.potential, args.mode, args.field)?;
    let (a, b) = f.relations();
    Ok(json!({
        "potential": f.body.render(),
        "mode": to_json(&f.mode),
        "field": f.body.field().to_string(),
        "relations": [a.render(), b.render()],
    }))
}

fn gb(
    potential: Option<&str>,
    relations: Option<&str>,
    derivative: Mode,
    order: OrderArg,
    mode: OrderMode,
    field: Option<u64>,
    cap: u32,
) -> Outcome {
    let rels: Vec<FreePoly> = match (potential, relations) {
        (Some(p), _) => {
            let (a, b) = parse_potential(p, derivative, field)?.relations();
            vec![a, b]
        }
        (None, Some(r)) => {
            let field = field_of(field)?;
            let parts: Vec<&str> = r.split(',').collect();
            if parts.len() != 2 {
                return Err(config(format!("--relations needs two comma-separated expressions, got {}", parts.len())));
            }
            parts.iter().map(|t| parse_poly(t, field)).collect::<potalg::Result<_>>()?
        }
        (None, None) => return Err(config("one of --potential or --relations is required")),
    };
    let greater = match order {
        OrderArg::Xy => Variable::X,
        OrderArg::Yx => Variable::Y,
    };
    let order = match mode {
        OrderMode::Local => MonomialOrder::local(greater),
        OrderMode::Global => MonomialOrder::global(greater),
    };
    let g = complete(&rels, order, cap)?;
    Ok(to_json(&g.record()))
}

fn dim(args: &PotentialArgs, cap: Option<u32>, oracle: bool, table: bool) -> Outcome {
    let f = parse_potential(&args.potential, args.mode, args.field)?;
    let quotient = |cap| -> potalg::Result<_> {
        let (a, b) = f.relations();
        hilbert(&complete(&[a, b], MonomialOrder::default(), cap)?)
    };
    let mut q = quotient(cap.unwrap_or(DEFAULT_CAP))?;
    let mut extended = false;
    if cap.is_none() && !q.finite {
        log::info!("not finite within cap {DEFAULT_CAP}; retrying at {EXTENDED_CAP}");
        q = quotient(EXTENDED_CAP)?;
        extended = true;
    }
    let mut out = to_json(&dim_report(&q, oracle.then_some(&f))?);
    out["potential"] = json!(f.body.render());
    out["extended"] = json!(extended);
    if table {
        out["table"] = to_json(&potalg::mult_table(&q)?.record());
    }
    Ok(out)
}

fn canon(args: &PotentialArgs, cap: u32) -> Outcome {
    let f = parse_potential(&args.potential, args.mode, args.field)?;
    Ok(to_json(&classify_potential(&f, cap)?))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path, field: Option<u64>) -> Result<FiniteAlgebra, Failure> {
    let rec: TableRecord =
        serde_json::from_str(&read_file(path)?).map_err(|e| config(format!("{}: {e}", path.display())))?;
    let mut table = MultTable::from_record(&rec, FieldSpec::Rationals)?;
    if let Some(p) = field {
        table = table.reduce_mod(p)?;
    }
    Ok(FiniteAlgebra::from_table(table)?)
}

fn iso(a: &Path, b: &Path, field: Option<u64>, strategy: Strategy) -> Outcome {
    let (fa, fb) = (load_table(a, field)?, load_table(b, field)?);
    let needs_prime = matches!(strategy, Strategy::Brute | Strategy::Lift);
    if needs_prime && field.is_none() {
        return Err(config("brute and lift strategies search over F_p; pass --field"));
    }
    let verdict = match strategy {
        Strategy::Auto => distinguish_algebras(&fa, &fb)?,
        Strategy::Brute => brute_force_iso(&fa, &fb)?,
        Strategy::Lift => lifted_iso_search(&fa, &fb)?,
        Strategy::Invariants => compare_invariants(&fa, &fb)?,
    };
    Ok(to_json(&verdict))
}

fn series_args(text: Option<&str>, order: usize) -> Result<[usize; 4], Failure> {
    let text = text.ok_or_else(|| config("brace series needs --series-args a,b,c,N"))?;
    let parts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| config(format!("--series-args: {e}")))?;
    let [a, b, c, n] = parts[..] else {
        return Err(config(format!("--series-args needs four values, got {}", parts.len())));
    };
    if let Some(bad) = [a, b, c].into_iter().find(|&v| v >= order) {
        return Err(config(format!("--series-args: element {bad} outside the carrier of order {order}")));
    }
    Ok([a, b, c, n])
}

fn brace(action: BraceAction, input: &Path, args: Option<&str>) -> Outcome {
    let file: BraceFile =
        serde_json::from_str(&read_file(input)?).map_err(|e| config(format!("{}: {e}", input.display())))?;
    let (b, chain) = file.tables()?;
    Ok(match action {
        BraceAction::Check => {
            let mut out = json!({
                "order": b.order(),
                "brace": check_brace(&b),
                "filtration": check_filtration(&b, file.alpha.as_deref(), &chain),
                "degree_bound": check_degree_bound(&b, &chain),
                "right_distributive": b.is_right_distributive(),
            });
            if let Some(alpha) = &file.alpha {
                if alpha.len() != b.order() || alpha.iter().any(|&v| v >= b.order()) {
                    return Err(config("alpha must map the carrier into itself"));
                }
                out["truss"] = to_json(&check_truss(&FiniteTruss { table: b.clone(), alpha: alpha.clone() }));
            }
            out
        }
        BraceAction::Graded => match associated_graded(&b, &chain) {
            Ok(g) => json!({"valid": true, "graded": g.record()}),
            Err(f) => json!({"valid": false, "failure": f}),
        },
        BraceAction::Prelie => match associated_graded(&b, &chain) {
            Ok(g) => {
                let d = pre_lie_defect(&g);
                json!({"valid": true, "pre_lie": d.failures == 0, "defect": d})
            }
            Err(f) => json!({"valid": false, "failure": f}),
        },
        BraceAction::Series => {
            let [a, x, c, n] = series_args(args, b.order())?;
            to_json(&distributivity_series(&b, a, x, c, n))
        }
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Derive(args) => derive(args),
        Command::Gb { potential, relations, derivative, order, mode, field, cap } => {
            gb(potential.as_deref(), relations.as_deref(), *derivative, *order, *mode, *field, *cap)
        }
        Command::Dim { input, cap, oracle, table } => dim(input, *cap, *oracle, *table),
        Command::Canon { input, cap } => canon(input, *cap),
        Command::Iso { a, b, field, strategy } => iso(a, b, *field, *strategy),
        Command::Brace { action, input, series_args } => brace(*action, input, series_args.as_deref()),
        Command::Reproduce { theorem } => Ok(to_json(&reproduce::reproduce(theorem)?)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => par::with_threads(n, || run(&cli)),
        None => run(&cli),
    };
    let (doc, code) = match result {
        Ok(v) => (v, 0),
        Err(f) => {
            eprintln!("potalg: {}", f.message);
            (json!({"error": {"kind": f.kind, "message": f.message}}), f.code)
        }
    };
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    ExitCode::from(code)
}
