//! `g4ix`: proof search, rule transformation, termination checks and equivalence fuzzing for
//! intuitionistic modal sequent calculi.
//!
//! Exit status: 0 provable or success, 1 unprovable or negative, 2 unknown, 3 bad input,
//! 4 refused by the termination guard or stopped by a termination violation.

mod resolve;

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g4ix_core::calculus::{print_rules, MatchMode, Provenance, Style};
use g4ix_core::harness::{equivalence_fuzz_with, FuzzConfig};
use g4ix_core::orders::{check_schema_termination, SamplingConfig, Verdict};
use g4ix_core::prover::{prove_g3_with, prove_g4_with, ProofResult, SearchBudget};
use g4ix_core::syntax::{parse_formula, parse_sequent, Sequent};
use resolve::CliError;

#[derive(Parser)]
#[command(name = "g4ix", version, about = "Sequent calculi for intuitionistic modal logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a derivation of a formula or sequent
    Prove(ProveArgs),
    /// Print the G4 style rule set generated from modal rules
    Transform {
        /// Builtin rule names separated by commas, or a rules file
        #[arg(long)]
        rules: String,
    },
    /// Check that every instance of each rule decreases in a weight order
    CheckTermination(TerminationArgs),
    /// Compare the G3 and G4 style calculi on generated sequents
    EquivTest(EquivArgs),
    /// Parse and validate a rules file, printing it back in canonical form
    RulesParse {
        /// Rules file, or `-` for standard input
        file: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    G3,
    G4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Verdict,
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Match {
    Greedy,
    Exhaustive,
}

#[derive(Args)]
struct BudgetArgs {
    /// Depth bound for the G3 engine
    #[arg(long, default_value_t = SearchBudget::default().max_depth)]
    depth: usize,
    /// Node bound for the G3 engine
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    nodes: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_depth: self.depth,
            max_nodes: self.nodes,
        }
    }
}

#[derive(Args)]
struct ProveArgs {
    /// A formula, or a sequent with --sequent
    input: String,
    /// G3ip, G4ip, G3i+RULES, G4i+RULES, or a letter form such as G4iKD
    #[arg(long, default_value = "G4ip")]
    calculus: String,
    /// Extra modal rules: builtin names separated by commas, or a rules file
    #[arg(long)]
    modal: Option<String>,
    /// Defaults to the style of the calculus
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long, value_enum, default_value = "verdict")]
    emit: Emit,
    #[arg(long = "match", value_enum, default_value = "exhaustive")]
    matching: Match,
    /// Read the input as a sequent `Γ => φ` rather than a formula
    #[arg(long)]
    sequent: bool,
    /// Run the G4 engine even if the calculus is not known to terminate
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct TerminationArgs {
    /// Builtin rule names separated by commas, or a rules file
    #[arg(long)]
    rules: String,
    /// `dyckhoff`, or a TOML file giving the weights `and`, `or`, `imp` and `modal`
    #[arg(long, default_value = "dyckhoff")]
    order: String,
    /// Random instances tried when the symbolic check is inconclusive
    #[arg(long, default_value_t = SamplingConfig::default().count)]
    count: usize,
    #[arg(long, default_value_t = SamplingConfig::default().size)]
    size: usize,
    #[arg(long, default_value_t = SamplingConfig::default().atoms)]
    atoms: usize,
    #[arg(long, default_value_t = SamplingConfig::default().seed)]
    seed: u64,
}

#[derive(Args)]
struct EquivArgs {
    /// Modal rules: builtin names separated by commas, or a rules file
    #[arg(long, default_value = "")]
    modal: String,
    #[arg(long, default_value_t = FuzzConfig::default().count)]
    count: usize,
    #[arg(long, default_value_t = FuzzConfig::default().max_size)]
    size: usize,
    #[arg(long, default_value_t = FuzzConfig::default().atoms)]
    atoms: usize,
    #[arg(long, default_value_t = FuzzConfig::default().max_modal_depth)]
    modal_depth: usize,
    #[arg(long, default_value_t = FuzzConfig::default().seed)]
    seed: u64,
    /// Run even if the G4 style calculus is not known to terminate
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Prove(a) => prove(&a),
        Command::Transform { rules } => transform(&rules),
        Command::CheckTermination(a) => check_termination(&a),
        Command::EquivTest(a) => equiv_test(&a),
        Command::RulesParse { file } => rules_parse(&file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn parse_input(a: &ProveArgs) -> Result<Sequent, CliError> {
    if a.sequent {
        parse_sequent(&a.input).map_err(|e| CliError::Input(format!("sequent: {e}")))
    } else {
        let f = parse_formula(&a.input).map_err(|e| CliError::Input(format!("formula: {e}")))?;
        Ok(Sequent::from_parts(Vec::new(), Some(f)))
    }
}

fn prove(a: &ProveArgs) -> Result<u8, CliError> {
    let (style, mut modal) = resolve::calculus_name(&a.calculus)?;
    if let Some(m) = &a.modal {
        modal.extend(resolve::rules_arg(m)?);
    }
    let calc = resolve::build(style, &modal)?;
    for w in calc.nonflat_warnings() {
        eprintln!("warning: {w}");
    }
    let seq = parse_input(a)?;
    let mode = match a.matching {
        Match::Greedy => MatchMode::Greedy,
        Match::Exhaustive => MatchMode::Exhaustive,
    };
    let engine = a.engine.unwrap_or(match style {
        Style::G3 => Engine::G3,
        Style::G4 => Engine::G4,
    });
    let result = match engine {
        Engine::G3 => prove_g3_with(&calc, &seq, a.budget.budget(), mode),
        Engine::G4 => {
            if !a.force {
                resolve::termination_guard(&calc)?;
            }
            prove_g4_with(&calc, &seq, mode).map_err(|e| CliError::Refused(e.to_string()))?
        }
    };
    match a.emit {
        Emit::Verdict => println!("{}", result.verdict()),
        Emit::Text => {
            println!("{}", result.verdict());
            if let Some(d) = result.derivation() {
                print!("{}", d.to_text());
            }
        }
        Emit::Json => {
            let derivation = match result.derivation() {
                Some(d) => serde_json::from_str(&d.to_json()).expect("derivation json is valid"),
                None => serde_json::Value::Null,
            };
            let doc = serde_json::json!({
                "calculus": calc.name,
                "sequent": seq.to_string(),
                "verdict": result.verdict(),
                "derivation": derivation,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json value serializes"));
        }
    }
    Ok(match result {
        ProofResult::Provable(_) => 0,
        ProofResult::Unprovable => 1,
        ProofResult::Unknown(_) => 2,
    })
}

fn transform(rules: &str) -> Result<u8, CliError> {
    let modal = resolve::rules_arg(rules)?;
    for r in modal.iter().filter(|r| !r.is_right_modal()) {
        eprintln!("warning: {} is not right modal; no implication rule is generated for it", r.name);
    }
    let calc = resolve::build(Style::G4, &modal)?;
    println!("# {}", calc.name);
    for r in &calc.rules {
        if let Provenance::GeneratedFrom(src) = &r.provenance {
            println!("# generated from {src}");
        }
        print!("{}", print_rules(std::slice::from_ref(r)));
    }
    Ok(0)
}

fn check_termination(a: &TerminationArgs) -> Result<u8, CliError> {
    let w = resolve::order(&a.order)?;
    let rules = resolve::rules_arg(&a.rules)?;
    if rules.is_empty() {
        return Err(CliError::Input("no rules given".into()));
    }
    let cfg = SamplingConfig {
        count: a.count,
        size: a.size.max(1),
        atoms: a.atoms.max(1),
        seed: a.seed,
    };
    let mut code = 0;
    for r in &rules {
        let v = check_schema_termination(&w, r, &cfg);
        println!("{}: {v}", r.name);
        code = match (&v, code) {
            (Verdict::CounterexampleFound(_), _) | (_, 1) => 1,
            (Verdict::Unknown, _) => 2,
            (Verdict::Terminating, c) => c,
        };
    }
    Ok(code)
}

fn equiv_test(a: &EquivArgs) -> Result<u8, CliError> {
    let modal = resolve::rules_arg(&a.modal)?;
    let c4 = resolve::build(Style::G4, &modal)?;
    if !a.force {
        resolve::termination_guard(&c4)?;
    }
    let cfg = FuzzConfig {
        seed: a.seed,
        count: a.count,
        max_size: a.size,
        atoms: a.atoms,
        max_modal_depth: a.modal_depth,
        modal_rules: modal.iter().map(|r| r.name.clone()).collect(),
        budget: a.budget.budget(),
    };
    let report = equivalence_fuzz_with(&cfg, &modal).map_err(|e| CliError::Input(e.to_string()))?;
    print!("{}", report.to_text());
    println!("{}", report.summary_json());
    Ok(if report.passed() {
        0
    } else if report.summary.disagree > 0 || report.summary.termination_violations > 0 {
        1
    } else {
        2
    })
}

fn rules_parse(file: &str) -> Result<u8, CliError> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("{file}: {e}")))?
    };
    let rules = resolve::rules_text(&text, file)?;
    for r in &rules {
        if !r.is_axiom() && !r.is_nonflat() {
            eprintln!("warning: rule {} is flat", r.name);
        }
    }
    print!("{}", print_rules(&rules));
    Ok(0)
}
