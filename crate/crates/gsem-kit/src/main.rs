use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gsem_kit::axioms::{soundness_report, AxiomSystem, InstanceBudget};
use gsem_kit::core::{
    parse_signature, Assignment, Intervention, ModelClass, Signature,
};
use gsem_kit::decide::{satisfiable, sem_validity, validity, SatOutcome, ValidityOutcome};
use gsem_kit::lang::{
    formula_to_json, parse_formula, parse_formula_any, print_formula, CausalFormula,
};
use gsem_kit::model::{parse_model, render_gsem, Gsem, Model, DEFAULT_ENUM_CAP};
use gsem_kit::proof::{check_derivation, parse_derivation};
use gsem_kit::properties::{acyc1, acyc2, coherence_witness, count_outcomes_class, in_class};
use gsem_kit::semantics::{check, valid_in_model};

/// Causal reasoning over structural equations models and their
/// generalization: solve models under interventions, model-check causal
/// formulas, classify models, verify axiom schemata, check derivations, and
/// decide validity by exhaustive model enumeration.
#[derive(Parser)]
#[command(name = "gsem-kit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Subcommand)]
enum Command {
    /// Parse a formula against a signature and print its canonical form.
    Parse(ParseArgs),
    /// Print the outcome set of a model under an intervention.
    Solve(SolveArgs),
    /// Model-check a formula at a context (or at all contexts).
    Check(CheckArgs),
    /// Classify a model: coherence, acyclicity, outcome counts.
    Classify(ClassifyArgs),
    /// Verify every enumerated axiom instance of a system against a model.
    Axioms(AxiomsArgs),
    /// Check a derivation file.
    Prove(ProveArgs),
    /// Decide validity or satisfiability by exhaustive enumeration.
    Decide(DecideArgs),
    /// Write a bundled example and run its analysis end to end.
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct ParseArgs {
    /// Signature file.
    #[arg(long)]
    signature: PathBuf,
    /// Formula text; repeatable.
    #[arg(long, required_unless_present = "file")]
    formula: Vec<String>,
    /// File with one formula per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Accept well-formed formulas about disallowed interventions.
    #[arg(long)]
    any_intervention: bool,
    /// Emit the AST as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Model file (`sem` or `gsem` block).
    #[arg(long)]
    model: PathBuf,
    /// Context as a tuple of exogenous values, e.g. `u0` or `u0,1`.
    #[arg(long)]
    context: String,
    /// Intervention bindings, e.g. `S1<-1` or empty for the null
    /// intervention.
    #[arg(long, default_value = "")]
    intervene: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: PathBuf,
    /// Context tuple; defaults to the only context when there is one.
    #[arg(long)]
    context: Option<String>,
    #[arg(long)]
    formula: String,
    /// Require truth at every context.
    #[arg(long)]
    all_contexts: bool,
    /// On failure, print a falsifying context and outcome.
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// Class to test membership in, e.g. `coh,acyc`.
    #[arg(long, default_value = "")]
    class: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long)]
    model: PathBuf,
    /// Axiom system: AX+, AX+rec, AX+basic, AX+basicrec, or AX*basic.
    #[arg(long)]
    system: String,
    /// Property tags extending AX*basic, e.g. `coh,acyc`.
    #[arg(long, default_value = "")]
    class: String,
    /// Per-schema instance budget.
    #[arg(long, default_value_t = 512)]
    budget: usize,
    /// Seed for the sampled schema families.
    #[arg(long, default_value_t = 0xD6)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ProveArgs {
    /// Signature file the derivation is over.
    #[arg(long, alias = "model-signature")]
    signature: PathBuf,
    /// Derivation file.
    #[arg(long)]
    derivation: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    signature: PathBuf,
    #[arg(long)]
    formula: String,
    /// Class of models quantified over (gsem mode only).
    #[arg(long, default_value = "")]
    class: String,
    /// Universe: `gsem` quantifies over the class, `sem` over equation
    /// models.
    #[arg(long, default_value = "gsem")]
    mode: String,
    /// Ask for satisfiability instead of validity.
    #[arg(long)]
    sat: bool,
    /// Sample this many random in-class models instead of enumerating
    /// (verdicts are labeled SAMPLED).
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for --sample.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the witness or countermodel to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExamplesArgs {
    /// `shell-game` or `switching-values`.
    name: String,
    /// Directory the bundled files are written to.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code)
}

#[derive(Debug)]
struct CliError {
    message: String,
    cap: bool,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        if self.cap {
            EXIT_CAP
        } else {
            EXIT_USAGE
        }
    }
}

fn fail<E: std::fmt::Display>(e: E) -> CliError {
    CliError { message: e.to_string(), cap: false }
}

fn cap_error<E: std::fmt::Display>(e: E) -> CliError {
    CliError { message: e.to_string(), cap: true }
}

type CliResult = Result<u8, CliError>;

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Parse(a) => cmd_parse(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Axioms(a) => cmd_axioms(a),
        Command::Prove(a) => cmd_prove(a),
        Command::Decide(a) => cmd_decide(a),
        Command::Examples(a) => cmd_examples(a),
    }
}

fn enum_cap() -> u128 {
    std::env::var("GSEMKIT_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_signature(path: &PathBuf) -> Result<Arc<Signature>, CliError> {
    parse_signature(&read(path)?).map_err(fail)
}

fn load_model(path: &PathBuf) -> Result<Model, CliError> {
    parse_model(&read(path)?).map_err(fail)
}

/// Parses a context given as a bare value tuple in exogenous declaration
/// order, e.g. `u0` or `u0,1`.
fn parse_context(sig: &Signature, text: &str) -> Result<Assignment, CliError> {
    let values: Vec<&str> = text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let exo: Vec<_> = sig.exo_ids().collect();
    if values.len() != exo.len() {
        return Err(fail(format!("context needs {} values, got {}", exo.len(), values.len())));
    }
    let named: Vec<(&str, &str)> =
        exo.iter().zip(&values).map(|(&v, &x)| (sig.var(v).name(), x)).collect();
    Assignment::new(sig, &named).map_err(fail)
}

fn parse_intervention_arg(sig: &Signature, text: &str) -> Result<Intervention, CliError> {
    let mut pairs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (var, val) = part
            .split_once("<-")
            .ok_or_else(|| fail(format!("bad binding `{part}`, expected VAR<-VALUE")))?;
        pairs.push((var.trim(), val.trim()));
    }
    Intervention::new(sig, &pairs).map_err(fail)
}

fn cmd_parse(a: ParseArgs) -> CliResult {
    let sig = load_signature(&a.signature)?;
    let mut texts = a.formula.clone();
    if let Some(path) = &a.file {
        for line in read(path)?.lines() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                texts.push(line.to_string());
            }
        }
    }
    let mut out = Vec::new();
    for text in &texts {
        let f = if a.any_intervention {
            parse_formula_any(text, &sig).map_err(fail)?
        } else {
            parse_formula(text, &sig).map_err(fail)?
        };
        out.push(f);
    }
    if a.json {
        let items: Vec<Value> = out.iter().map(formula_to_json).collect();
        println!("{}", serde_json::to_string_pretty(&json!({ "formulas": items })).unwrap());
    } else {
        for f in &out {
            println!("{}", print_formula(f));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_solve(a: SolveArgs) -> CliResult {
    let model = load_model(&a.model)?;
    let sig = model.sig().clone();
    let u = parse_context(&sig, &a.context)?;
    let int = parse_intervention_arg(&sig, &a.intervene)?;
    let outcomes = match &model {
        Model::Sem(m) => gsem_kit::model::solve_sem(m, &u, &int).map_err(fail)?,
        Model::Gsem(g) => g.outcomes(&u, &int).map_err(fail)?.clone(),
    };
    if a.json {
        let items: Vec<Value> = outcomes
            .iter()
            .map(|v| {
                let entries: Vec<Value> = v
                    .pairs()
                    .iter()
                    .map(|&(var, val)| {
                        json!({"var": sig.var(var).name(), "value": sig.render_value(var, val)})
                    })
                    .collect();
                Value::Array(entries)
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&json!({ "outcomes": items })).unwrap());
    } else {
        for v in &outcomes {
            println!("{}", sig.render_assignment(v));
        }
        if outcomes.is_empty() {
            println!("(no outcomes)");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(a: CheckArgs) -> CliResult {
    let model = load_model(&a.model)?;
    let g = model.to_gsem();
    let sig = g.sig().clone();
    let f = parse_formula(&a.formula, &sig).map_err(fail)?;
    let (holds, witness_ctx) = if a.all_contexts || a.context.is_none() && sig.n_contexts() == 1 {
        let v = valid_in_model(&g, &f).map_err(fail)?;
        (v.holds, v.failing_context)
    } else {
        let ctx_text = a
            .context
            .as_ref()
            .ok_or_else(|| fail("--context is required when the model has several contexts"))?;
        let u = parse_context(&sig, ctx_text)?;
        let holds = check(&g, &u, &f).map_err(fail)?;
        (holds, if holds { None } else { Some(u) })
    };
    if a.json {
        let mut obj = json!({ "holds": holds, "formula": print_formula(&f) });
        if let Some(u) = &witness_ctx {
            obj["failing_context"] = json!(sig.render_assignment(u));
        }
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        println!("{}", if holds { "true" } else { "false" });
        if a.witness && !holds {
            if let Some(u) = &witness_ctx {
                println!("falsified at context {}", sig.render_assignment(u));
                if let Some(outcome) = falsifying_outcome(&g, u, &f) {
                    println!("offending outcome {}", sig.render_assignment(&outcome));
                }
            }
        }
    }
    Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE })
}

/// For a top-level box that fails, the first outcome violating its body.
fn falsifying_outcome(g: &Gsem, u: &Assignment, f: &CausalFormula) -> Option<Assignment> {
    let sig = g.sig();
    if let CausalFormula::Box(b, e) = f {
        let int = b.resolve(sig).ok()?;
        let outs = g.outcomes(u, &int).ok()?;
        return outs
            .iter()
            .find(|v| !gsem_kit::semantics::sat_event(sig, v, e).unwrap_or(true))
            .cloned();
    }
    None
}

fn cmd_classify(a: ClassifyArgs) -> CliResult {
    let model = load_model(&a.model)?;
    let g = model.to_gsem();
    let sig = g.sig().clone();
    let cls = ModelClass::parse(&a.class).map_err(fail)?;

    let coh = coherence_witness(&g);
    let strong = acyc1(&g).map_err(cap_error)?;
    let weak = acyc2(&g).map_err(cap_error)?;
    let counts = count_outcomes_class(&g);
    let member = in_class(&g, cls).map_err(cap_error)?;

    if a.json {
        let obj = json!({
            "coh": coh.is_none(),
            "acyc": strong.is_acyclic(),
            "acyc2": weak.is_acyclic(),
            "ge1": counts.ge1,
            "le1": counts.le1,
            "class": cls.to_string(),
            "in_class": member,
        });
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        match &coh {
            None => println!("coh   true"),
            Some(w) => println!(
                "coh   false  (outcome {} of {} missing from {})",
                sig.render_assignment(&w.outcome),
                sig.render_intervention(&w.base),
                sig.render_intervention(&w.extended)
            ),
        }
        print_acyclicity("acyc ", &sig, &strong);
        print_acyclicity("acyc2", &sig, &weak);
        match counts.empty_at {
            None => println!("ge1   true"),
            Some((u, int)) => println!(
                "ge1   false  (no outcomes at {} {})",
                sig.render_assignment(&u),
                sig.render_intervention(&int)
            ),
        }
        match counts.multiple_at {
            None => println!("le1   true"),
            Some((u, int, v1, v2)) => println!(
                "le1   false  ({} and {} at {} {})",
                sig.render_assignment(&v1),
                sig.render_assignment(&v2),
                sig.render_assignment(&u),
                sig.render_intervention(&int)
            ),
        }
        println!("in {cls}: {member}");
    }
    Ok(if member { EXIT_OK } else { EXIT_NEGATIVE })
}

fn print_acyclicity(label: &str, sig: &Signature, v: &gsem_kit::properties::AcyclicityVerdict) {
    use gsem_kit::properties::AcyclicityVerdict;
    match v {
        AcyclicityVerdict::Acyclic { orders } => {
            let names: Vec<String> = orders[0]
                .iter()
                .map(|&x| sig.var(x).name().to_string())
                .collect();
            println!("{label} true   (order {})", names.join(" < "));
        }
        AcyclicityVerdict::Cyclic { failure } => {
            println!("{label} false");
            for c in &failure.candidates {
                let lhs: Vec<String> =
                    c.lhs.iter().map(|x| sig.render_assignment(x)).collect();
                let rhs: Vec<String> =
                    c.rhs.iter().map(|x| sig.render_assignment(x)).collect();
                println!(
                    "    {} blocked: base {}, values {}/{}, {{{}}} vs {{{}}}",
                    sig.var(c.var).name(),
                    sig.render_intervention(&c.base),
                    sig.render_value(c.var, c.low),
                    sig.render_value(c.var, c.high),
                    lhs.join(", "),
                    rhs.join(", ")
                );
            }
        }
    }
}

fn cmd_axioms(a: AxiomsArgs) -> CliResult {
    let model = load_model(&a.model)?;
    let g = model.to_gsem();
    let cls = ModelClass::parse(&a.class).map_err(fail)?;
    let system = AxiomSystem::parse(&a.system, cls)
        .ok_or_else(|| fail(format!("unknown axiom system `{}`", a.system)))?;
    let budget = InstanceBudget { per_schema: a.budget, seed: a.seed, ..InstanceBudget::default() };
    let report = soundness_report(&g, &system, &budget);
    if a.json {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "schema": r.schema.name(),
                    "instances": r.instances,
                    "valid": r.valid,
                    "violated": r.violated,
                    "not_in_language": r.not_in_language,
                })
            })
            .collect();
        let obj = json!({
            "system": report.system,
            "rows": rows,
            "violations": report.total_violations(),
            "rules": {
                "mp_checked": report.rules.mp_checked,
                "mp_failures": report.rules.mp_failures,
                "d2plus_checked": report.rules.d2plus_checked,
                "d2plus_failures": report.rules.d2plus_failures,
            },
        });
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        print!("{}", report.render());
    }
    Ok(if report.total_violations() == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_prove(a: ProveArgs) -> CliResult {
    let sig = load_signature(&a.signature)?;
    let derivation = parse_derivation(&sig, &read(&a.derivation)?).map_err(fail)?;
    match check_derivation(&derivation) {
        Ok(theorem) => {
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "accepted": true,
                        "theorem": print_formula(&theorem),
                        "steps": derivation.steps.len(),
                    }))
                    .unwrap()
                );
            } else {
                println!("ACCEPT {}", print_formula(&theorem));
            }
            Ok(EXIT_OK)
        }
        Err(bad) => {
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "accepted": false,
                        "step": bad.index + 1,
                        "reason": bad.reason.to_string(),
                    }))
                    .unwrap()
                );
            } else {
                println!("REJECT step {}: {}", bad.index + 1, bad.reason);
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_decide(a: DecideArgs) -> CliResult {
    let sig = load_signature(&a.signature)?;
    let f = parse_formula(&a.formula, &sig).map_err(fail)?;
    let cls = ModelClass::parse(&a.class).map_err(fail)?;
    let cap = enum_cap();
    if let Some(n) = a.sample {
        return cmd_decide_sampled(&a, &sig, &f, cls, n);
    }
    enum Outcome {
        Verdict(&'static str, Option<(Gsem, Assignment)>),
        Cap(u128),
    }
    let outcome = match (a.mode.as_str(), a.sat) {
        ("sem", false) => match sem_validity(&f, &sig, cap).map_err(fail)? {
            ValidityOutcome::Valid => Outcome::Verdict("VALID", None),
            ValidityOutcome::Invalid { model, context } => {
                Outcome::Verdict("INVALID", Some((model, context)))
            }
            ValidityOutcome::CapExceeded { required, .. } => Outcome::Cap(required),
        },
        ("gsem", false) => match validity(&f, &sig, cls, cap).map_err(fail)? {
            ValidityOutcome::Valid => Outcome::Verdict("VALID", None),
            ValidityOutcome::Invalid { model, context } => {
                Outcome::Verdict("INVALID", Some((model, context)))
            }
            ValidityOutcome::CapExceeded { required, .. } => Outcome::Cap(required),
        },
        ("gsem", true) => match satisfiable(&f, &sig, cls, cap).map_err(fail)? {
            SatOutcome::Sat { model, context } => Outcome::Verdict("SAT", Some((model, context))),
            SatOutcome::Unsat => Outcome::Verdict("UNSAT", None),
            SatOutcome::CapExceeded { required, .. } => Outcome::Cap(required),
        },
        ("sem", true) => return Err(fail("--sat is only available in gsem mode")),
        (other, _) => return Err(fail(format!("unknown mode `{other}`"))),
    };
    match outcome {
        Outcome::Cap(required) => {
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(
                        &json!({"verdict": "CAP-EXCEEDED", "required": required.to_string()})
                    )
                    .unwrap()
                );
            } else {
                println!("CAP-EXCEEDED({required})");
            }
            Ok(EXIT_CAP)
        }
        Outcome::Verdict(verdict, witness) => {
            let mut obj = json!({"verdict": verdict});
            if !a.json {
                println!("{verdict}");
            }
            if let Some((model, context)) = &witness {
                let rendered = render_gsem(model);
                obj["context"] = json!(sig.render_assignment(context));
                if let Some(path) = &a.out {
                    fs::write(path, &rendered).map_err(fail)?;
                    obj["witness_file"] = json!(path.display().to_string());
                    if !a.json {
                        println!("witness context {}", sig.render_assignment(context));
                        println!("witness model written to {}", path.display());
                    }
                } else {
                    obj["witness"] = json!(rendered);
                    if !a.json {
                        println!("witness context {}", sig.render_assignment(context));
                        print!("{rendered}");
                    }
                }
            }
            if a.json {
                println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            }
            Ok(if matches!(verdict, "VALID" | "SAT") { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn cmd_decide_sampled(
    a: &DecideArgs,
    sig: &Arc<Signature>,
    f: &CausalFormula,
    cls: ModelClass,
    n: usize,
) -> CliResult {
    if a.mode == "sem" {
        return Err(fail("--sample is only available in gsem mode"));
    }
    let (verdict, found, sampled) = if a.sat {
        let s = gsem_kit::decide::satisfiable_sampled(f, sig, cls, n, a.seed).map_err(fail)?;
        let found = s.outcome.clone();
        (if found.is_some() { "SAMPLED-SAT" } else { "SAMPLED-UNKNOWN" }, found, s)
    } else {
        let s = gsem_kit::decide::validity_sampled(f, sig, cls, n, a.seed).map_err(fail)?;
        let found = s.outcome.clone();
        (if found.is_some() { "SAMPLED-INVALID" } else { "SAMPLED-NO-COUNTEREXAMPLE" }, found, s)
    };
    if a.json {
        let mut obj = json!({
            "verdict": verdict,
            "sampled": true,
            "tested": sampled.tested,
            "attempts": sampled.attempts,
        });
        if let Some((model, context)) = &found {
            obj["context"] = json!(sig.render_assignment(context));
            obj["witness"] = json!(render_gsem(model));
        }
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        println!("{verdict} after testing {} models", sampled.tested);
        if let Some((model, context)) = &found {
            println!("witness context {}", sig.render_assignment(context));
            if let Some(path) = &a.out {
                fs::write(path, render_gsem(model)).map_err(fail)?;
                println!("witness model written to {}", path.display());
            } else {
                print!("{}", render_gsem(model));
            }
        }
    }
    let affirmative = match (a.sat, found.is_some()) {
        (true, true) => true,    // found a satisfying model
        (true, false) => false,  // unknown
        (false, true) => false,  // found a counterexample
        (false, false) => true,  // nothing falsified it
    };
    Ok(if affirmative { EXIT_OK } else { EXIT_NEGATIVE })
}

const SHELL_GAME_MODEL: &str = include_str!("examples/shell-game.gsem");
const SWITCHING_VALUES_MODEL: &str = include_str!("examples/switching-values.gsem");

fn cmd_examples(a: ExamplesArgs) -> CliResult {
    match a.name.as_str() {
        "shell-game" => example_shell_game(&a.dir),
        "switching-values" => example_switching_values(&a.dir),
        other => Err(fail(format!(
            "unknown example `{other}` (available: shell-game, switching-values)"
        ))),
    }
}

fn example_shell_game(dir: &PathBuf) -> CliResult {
    fs::create_dir_all(dir).map_err(fail)?;
    let model_path = dir.join("shell-game.gsem");
    fs::write(&model_path, SHELL_GAME_MODEL).map_err(fail)?;
    let Model::Gsem(g) = parse_model(SHELL_GAME_MODEL).map_err(fail)? else {
        unreachable!("bundled model is a gsem block")
    };
    let sig = g.sig().clone();
    let sig_path = dir.join("shell-game.sig");
    fs::write(&sig_path, gsem_kit::core::render_signature(&sig)).map_err(fail)?;
    println!("wrote {} and {}", sig_path.display(), model_path.display());

    let description = "[S1<-1](S1=1 & S2=1 & Z=1) & [S2<-1](S1=1 & S2=1 & Z=0)";
    let f = parse_formula(description, &sig).map_err(fail)?;
    let u = sig.context(0);
    let holds = check(&g, &u, &f).map_err(fail)?;
    println!("1. the model satisfies its description:");
    println!("   (M, u0) |= {description}: {holds}");

    let report = soundness_report(&g, &AxiomSystem::ax_plus(), &InstanceBudget::default());
    let d5 = report.not_in_language(gsem_kit::axioms::SchemaId::D5);
    let d9 = report.not_in_language(gsem_kit::axioms::SchemaId::D9);
    println!("2. every AX+ instance holds in the model:");
    println!(
        "   {} violations ({} D5 and {} D9 instances are outside the language)",
        report.total_violations(),
        d5,
        d9
    );

    // the full description also asserts the outcomes exist; without the
    // diamonds, equation systems with no solutions satisfy the boxes
    // vacuously
    let full_description = format!("{description} & <S1<-1>true & <S2<-1>true");
    let full = parse_formula(&full_description, &sig).map_err(fail)?;
    let negated = full.not();
    let verdict = sem_validity(&negated, &sig, enum_cap()).map_err(fail)?;
    let total = gsem_kit::model::count_sems(&sig);
    println!("3. no equation model realizes these outcome sets:");
    println!(
        "   the negated full description (diamonds included) is {} over all {} equation models",
        match &verdict {
            ValidityOutcome::Valid => "VALID".to_string(),
            ValidityOutcome::Invalid { .. } => "INVALID".to_string(),
            ValidityOutcome::CapExceeded { required, .. } => format!("CAP-EXCEEDED({required})"),
        },
        total
    );
    let ok = holds && report.total_violations() == 0 && verdict.is_valid();
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn example_switching_values(dir: &PathBuf) -> CliResult {
    fs::create_dir_all(dir).map_err(fail)?;
    let model_path = dir.join("switching-values.gsem");
    fs::write(&model_path, SWITCHING_VALUES_MODEL).map_err(fail)?;
    let Model::Gsem(g) = parse_model(SWITCHING_VALUES_MODEL).map_err(fail)? else {
        unreachable!("bundled model is a gsem block")
    };
    let sig = g.sig().clone();
    println!("wrote {}", model_path.display());

    let strong = acyc1(&g).map_err(cap_error)?;
    println!("strong acyclicity (joint restrictions to earlier variables):");
    print_acyclicity("  acyc ", &sig, &strong);
    let weak = acyc2(&g).map_err(cap_error)?;
    println!("weak acyclicity (per-variable restrictions):");
    print_acyclicity("  acyc2", &sig, &weak);
    let contrast = !strong.is_acyclic() && weak.is_acyclic();
    println!(
        "the two notions disagree on this model: {}",
        if contrast { "yes" } else { "no" }
    );
    Ok(if contrast { EXIT_OK } else { EXIT_NEGATIVE })
}

