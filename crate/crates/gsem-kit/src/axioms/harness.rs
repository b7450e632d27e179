//! Instance enumeration and the per-model soundness report.
//!
//! Exactly enumerable schema families (D1, D2, D4, D5, D9, D10) are walked
//! in full up to the per-schema budget. The tautology families D0 and D8 are
//! infinite, so they are sampled from the seeded generators; the event
//! metavariables of D3, D9, and D10(b) range over the characteristic events
//! of all full assignments — the basis that pins down the matching model
//! property — plus random samples. Instances that fall outside the language
//! are reported as such, never dropped.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core::{enumerate_assignments, Assignment, Intervention, Signature, ValIx, VarId};
use crate::lang::{characteristic_event, random as lrandom, CausalFormula, Event};
use crate::model::Gsem;
use crate::semantics::CompiledFormula;

use super::{instantiate, AxiomSystem, InstantiateError, RuleId, SchemaId, SchemaParams};

/// Caps and seeds for instance enumeration.
#[derive(Debug, Clone)]
pub struct InstanceBudget {
    /// Hard cap on emitted instances per schema.
    pub per_schema: usize,
    /// How many sampled tautologies / random events to draw where a family
    /// is infinite.
    pub sampled: usize,
    /// Depth of sampled random events and formulas.
    pub event_depth: usize,
    /// If the number of nonempty intervention subsets exceeds this, D6+
    /// falls back to singleton sets plus the full set.
    pub d6plus_int_sets: usize,
    pub seed: u64,
}

impl Default for InstanceBudget {
    fn default() -> Self {
        InstanceBudget { per_schema: 512, sampled: 12, event_depth: 2, d6plus_int_sets: 128, seed: 0xD6 }
    }
}

#[derive(Debug, Clone)]
pub enum InstanceStatus {
    InLanguage(CausalFormula),
    NotInLanguage(String),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub schema: SchemaId,
    pub label: String,
    pub status: InstanceStatus,
}

fn push(out: &mut Vec<Instance>, cap: usize, sig: &Signature, params: &SchemaParams, label: String) {
    if out.len() >= cap {
        return;
    }
    match instantiate(sig, params) {
        Ok(f) => out.push(Instance { schema: params.schema(), label, status: InstanceStatus::InLanguage(f) }),
        Err(InstantiateError::NotInLanguage { detail, .. }) => {
            out.push(Instance { schema: params.schema(), label, status: InstanceStatus::NotInLanguage(detail) })
        }
        Err(_) => {} // not a legal parameterization at all
    }
}

fn char_basis(sig: &Signature) -> Vec<Event> {
    let endo: Vec<VarId> = sig.endo_ids().collect();
    enumerate_assignments(sig, &endo)
        .map(|v| characteristic_event(sig, &v).expect("assignments are total"))
        .collect()
}

/// All interventions of the shape `V - {X} <- values`, allowed or not:
/// the parameter space of D9 and HD9.
pub fn complete_interventions(sig: &Signature) -> Vec<Intervention> {
    let mut out = Vec::new();
    for x in sig.endo_ids() {
        let others: Vec<VarId> = sig.endo_ids().filter(|&v| v != x).collect();
        for vals in enumerate_assignments(sig, &others) {
            out.push(Intervention::from_pairs(vals.pairs().to_vec()));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Deterministically enumerates instances of every schema in the system, up
/// to the budget.
pub fn enumerate_instances(
    sig: &Signature,
    system: &AxiomSystem,
    budget: &InstanceBudget,
) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Vec::new();
    let cap = budget.per_schema;
    let basis = char_basis(sig);
    let endo: Vec<VarId> = sig.endo_ids().collect();

    for schema in system.schemas() {
        let start = out.len();
        let cap = start + cap;
        match schema {
            SchemaId::D0 => {
                for k in 0..budget.sampled {
                    let taut = lrandom::random_tautology_formula(sig, &mut rng, budget.event_depth);
                    push(&mut out, cap, sig, &SchemaParams::D0 { taut }, format!("D0 sample {k}"));
                }
            }
            SchemaId::D1 => {
                for int in sig.allowed() {
                    for &var in &endo {
                        let n = sig.var(var).range().len() as ValIx;
                        for a in 0..n {
                            for b in 0..n {
                                if a != b {
                                    push(
                                        &mut out,
                                        cap,
                                        sig,
                                        &SchemaParams::D1 { int: int.clone(), var, a, b },
                                        format!(
                                            "D1 {} {}: {}/{}",
                                            sig.render_intervention(int),
                                            sig.var(var).name(),
                                            sig.render_value(var, a),
                                            sig.render_value(var, b)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            SchemaId::D2 => {
                for int in sig.allowed() {
                    for &var in &endo {
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D2 { int: int.clone(), var },
                            format!("D2 {} {}", sig.render_intervention(int), sig.var(var).name()),
                        );
                    }
                }
            }
            SchemaId::D3 => {
                for int in sig.allowed() {
                    for &w in &endo {
                        for wval in 0..sig.var(w).range().len() as ValIx {
                            let mut events = basis.clone();
                            for _ in 0..budget.sampled {
                                events.push(lrandom::random_event(sig, &mut rng, budget.event_depth));
                            }
                            for (ex, event) in events.into_iter().enumerate() {
                                push(
                                    &mut out,
                                    cap,
                                    sig,
                                    &SchemaParams::D3 { int: int.clone(), w, wval, event },
                                    format!(
                                        "D3 {} {}={} event {ex}",
                                        sig.render_intervention(int),
                                        sig.var(w).name(),
                                        sig.render_value(w, wval)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
            SchemaId::D4 => {
                for int in sig.allowed() {
                    push(
                        &mut out,
                        cap,
                        sig,
                        &SchemaParams::D4 { int: int.clone() },
                        format!("D4 {}", sig.render_intervention(int)),
                    );
                }
            }
            SchemaId::D5 => {
                for base in sig.allowed() {
                    let free: Vec<VarId> =
                        endo.iter().copied().filter(|&v| base.binds(v).is_none()).collect();
                    for &y in &free {
                        for &w in &free {
                            if y == w {
                                continue;
                            }
                            let rest_vars: Vec<VarId> =
                                free.iter().copied().filter(|&v| v != y && v != w).collect();
                            for yval in 0..sig.var(y).range().len() as ValIx {
                                for wval in 0..sig.var(w).range().len() as ValIx {
                                    for rest in enumerate_assignments(sig, &rest_vars) {
                                        push(
                                            &mut out,
                                            cap,
                                            sig,
                                            &SchemaParams::D5 {
                                                base: base.clone(),
                                                y,
                                                yval,
                                                w,
                                                wval,
                                                rest: rest.clone(),
                                            },
                                            format!(
                                                "D5 {} Y={} W={} rest {}",
                                                sig.render_intervention(base),
                                                sig.var(y).name(),
                                                sig.var(w).name(),
                                                sig.render_assignment(&rest)
                                            ),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
            SchemaId::D6 => {
                for len in 2..=3usize.min(endo.len()) {
                    let mut chains: Vec<Vec<VarId>> = vec![vec![]];
                    for _ in 0..len {
                        let mut next = Vec::new();
                        for c in &chains {
                            for &v in &endo {
                                if !c.contains(&v) {
                                    let mut c2 = c.clone();
                                    c2.push(v);
                                    next.push(c2);
                                }
                            }
                        }
                        chains = next;
                    }
                    for chain in chains {
                        let names: Vec<&str> =
                            chain.iter().map(|&v| sig.var(v).name()).collect();
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D6 { chain },
                            format!("D6 {}", names.join(" ~> ")),
                        );
                    }
                }
            }
            SchemaId::D6Plus => {
                enumerate_d6plus_instances(sig, budget, cap, &mut out);
            }
            SchemaId::D7 => {
                for int in sig.allowed() {
                    for k in 0..budget.sampled {
                        let p = lrandom::random_event(sig, &mut rng, budget.event_depth);
                        let q = lrandom::random_event(sig, &mut rng, budget.event_depth);
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D7 { int: int.clone(), p, q },
                            format!("D7 {} sample {k}", sig.render_intervention(int)),
                        );
                    }
                }
            }
            SchemaId::D8 => {
                for int in sig.allowed() {
                    for k in 0..budget.sampled {
                        let taut = lrandom::random_tautology_event(sig, &mut rng, budget.event_depth);
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D8 { int: int.clone(), taut },
                            format!("D8 {} sample {k}", sig.render_intervention(int)),
                        );
                    }
                }
            }
            SchemaId::D9 => {
                for int in complete_interventions(sig) {
                    let mut events = vec![Event::True];
                    events.extend(basis.clone());
                    for (ex, event) in events.into_iter().enumerate() {
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D9 { int: int.clone(), event },
                            format!("D9 {} event {ex}", sig.render_intervention(&int)),
                        );
                    }
                }
            }
            SchemaId::D10a => {
                for int in sig.allowed() {
                    push(
                        &mut out,
                        cap,
                        sig,
                        &SchemaParams::D10a { int: int.clone() },
                        format!("D10a {}", sig.render_intervention(int)),
                    );
                }
            }
            SchemaId::D10b => {
                for int in sig.allowed() {
                    for (ex, event) in basis.iter().enumerate() {
                        push(
                            &mut out,
                            cap,
                            sig,
                            &SchemaParams::D10b { int: int.clone(), event: event.clone() },
                            format!("D10b {} event {ex}", sig.render_intervention(int)),
                        );
                    }
                }
            }
        }
    }
    out
}

/// D6+ parameter walk: every nonempty variable subset with full value sets
/// (plus all value subsets in the single-variable case), crossed with the
/// intervention-set family.
fn enumerate_d6plus_instances(
    sig: &Signature,
    budget: &InstanceBudget,
    cap: usize,
    out: &mut Vec<Instance>,
) {
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let n = endo.len();
    let n_allowed = sig.allowed().len();

    let int_family: Vec<Vec<Intervention>> = if n_allowed <= 20
        && (1u128 << n_allowed) - 1 <= budget.d6plus_int_sets as u128
    {
        (1u64..1 << n_allowed)
            .map(|bits| {
                sig.allowed()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, int)| int.clone())
                    .collect()
            })
            .collect()
    } else {
        let mut family: Vec<Vec<Intervention>> =
            sig.allowed().iter().map(|int| vec![int.clone()]).collect();
        family.push(sig.allowed().to_vec());
        family
    };

    for subset in 1u64..1 << n {
        let vars: Vec<VarId> =
            endo.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, &v)| v).collect();
        let value_combos: Vec<Vec<Vec<ValIx>>> = if vars.len() == 1 {
            let range = 0..sig.var(vars[0]).range().len() as ValIx;
            let all: Vec<ValIx> = range.collect();
            let mut combos = Vec::new();
            for bits in 1u64..1 << all.len() {
                let set: Vec<ValIx> =
                    all.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &x)| x).collect();
                combos.push(vec![set]);
            }
            combos
        } else {
            vec![vars
                .iter()
                .map(|&v| (0..sig.var(v).range().len() as ValIx).collect())
                .collect()]
        };
        for value_sets in value_combos {
            for ints in &int_family {
                let names: Vec<&str> = vars.iter().map(|&v| sig.var(v).name()).collect();
                push(
                    out,
                    cap,
                    sig,
                    &SchemaParams::D6Plus {
                        vars: vars.clone(),
                        value_sets: value_sets.clone(),
                        ints: ints.clone(),
                    },
                    format!("D6+ {{{}}} with {} interventions", names.join(","), ints.len()),
                );
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub schema: SchemaId,
    pub label: String,
    pub formula: String,
    pub context: Assignment,
}

#[derive(Debug, Clone)]
pub struct SchemaRow {
    pub schema: SchemaId,
    pub instances: usize,
    pub valid: usize,
    pub violated: usize,
    pub not_in_language: usize,
    /// First few violations, with their falsifying contexts.
    pub sample_violations: Vec<Violation>,
}

#[derive(Debug, Clone, Default)]
pub struct RuleChecks {
    pub mp_checked: usize,
    pub mp_failures: usize,
    pub d2plus_checked: usize,
    pub d2plus_failures: usize,
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub system: String,
    pub rows: Vec<SchemaRow>,
    pub rules: RuleChecks,
}

impl SoundnessReport {
    pub fn total_violations(&self) -> usize {
        self.rows.iter().map(|r| r.violated).sum::<usize>()
            + self.rules.mp_failures
            + self.rules.d2plus_failures
    }

    pub fn not_in_language(&self, schema: SchemaId) -> usize {
        self.rows.iter().find(|r| r.schema == schema).map_or(0, |r| r.not_in_language)
    }

    pub fn render(&self) -> String {
        let mut out = format!("system {}\n", self.system);
        out.push_str("schema  instances  valid  violated  not-in-language\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<7} {:>9}  {:>5}  {:>8}  {:>15}\n",
                r.schema.name(),
                r.instances,
                r.valid,
                r.violated,
                r.not_in_language
            ));
        }
        for r in &self.rows {
            for v in &r.sample_violations {
                out.push_str(&format!("violated: {} at context ", v.label));
                out.push_str(&format!("{}\n  {}\n", "(see below)", v.formula));
            }
        }
        out.push_str(&format!(
            "rule spot-checks: MP {} ok of {}, D2+ {} ok of {}\n",
            self.rules.mp_checked - self.rules.mp_failures,
            self.rules.mp_checked,
            self.rules.d2plus_checked - self.rules.d2plus_failures,
            self.rules.d2plus_checked,
        ));
        out
    }
}

const MAX_SAMPLE_VIOLATIONS: usize = 8;

/// Checks every enumerated instance of the system against the model, and
/// spot-checks that the inference rules preserve validity in it.
pub fn soundness_report(m: &Gsem, system: &AxiomSystem, budget: &InstanceBudget) -> SoundnessReport {
    let sig = m.sig();
    let instances = enumerate_instances(sig, system, budget);
    let mut rows: Vec<SchemaRow> = Vec::new();
    for schema in system.schemas() {
        rows.push(SchemaRow {
            schema,
            instances: 0,
            valid: 0,
            violated: 0,
            not_in_language: 0,
            sample_violations: Vec::new(),
        });
    }
    for inst in &instances {
        let row = rows.iter_mut().find(|r| r.schema == inst.schema).expect("row per schema");
        row.instances += 1;
        match &inst.status {
            InstanceStatus::NotInLanguage(_) => row.not_in_language += 1,
            InstanceStatus::InLanguage(f) => {
                let compiled = CompiledFormula::compile(sig, f).expect("instances are in-language");
                match compiled.first_failing_context(m) {
                    None => row.valid += 1,
                    Some(ctx) => {
                        row.violated += 1;
                        if row.sample_violations.len() < MAX_SAMPLE_VIOLATIONS {
                            row.sample_violations.push(Violation {
                                schema: inst.schema,
                                label: inst.label.clone(),
                                formula: crate::lang::print_formula(f),
                                context: sig.context(ctx),
                            });
                        }
                    }
                }
            }
        }
    }
    let rules = rule_spot_checks(m, system, budget);
    SoundnessReport { system: system.name().to_string(), rows, rules }
}

fn valid(m: &Gsem, f: &CausalFormula) -> bool {
    CompiledFormula::compile(m.sig(), f)
        .map(|c| c.first_failing_context(m).is_none())
        .unwrap_or(false)
}

/// Samples rule applications and verifies that valid premises yield valid
/// conclusions in this model. The D2+ samples take the value set to be the
/// whole range: if no outcome satisfying the body can take any value of the
/// variable, no outcome satisfies the body at all. (With a proper subset of
/// the range the rule is only sound across a model class, not pointwise.)
fn rule_spot_checks(m: &Gsem, system: &AxiomSystem, budget: &InstanceBudget) -> RuleChecks {
    let sig = m.sig();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0xA11E);
    let mut checks = RuleChecks::default();
    if system.has_rule(RuleId::ModusPonens) {
        for _ in 0..budget.sampled * 4 {
            let phi = lrandom::random_tautology_formula(sig, &mut rng, budget.event_depth);
            let psi = lrandom::random_formula(sig, &mut rng, budget.event_depth);
            let imp = phi.clone().implies(psi.clone());
            if valid(m, &phi) && valid(m, &imp) {
                checks.mp_checked += 1;
                if !valid(m, &psi) {
                    checks.mp_failures += 1;
                }
            }
        }
    }
    if system.has_rule(RuleId::D2Plus) && !sig.allowed().is_empty() {
        let endo: Vec<VarId> = sig.endo_ids().collect();
        for k in 0..budget.sampled * 4 {
            let int = sig.allowed()[k % sig.allowed().len()].clone();
            let var = endo[k % endo.len()];
            let psi = lrandom::random_event(sig, &mut rng, budget.event_depth);
            let phi = match k % 3 {
                0 => CausalFormula::True,
                1 => CausalFormula::False,
                _ => lrandom::random_formula(sig, &mut rng, budget.event_depth),
            };
            let premise = phi.clone().implies(CausalFormula::conj(
                (0..sig.var(var).range().len() as ValIx).map(|x| {
                    CausalFormula::boxed_ix(
                        sig,
                        &int,
                        psi.clone().implies(Event::prim_ix(sig, var, x).not()),
                    )
                }),
            ));
            if valid(m, &premise) {
                checks.d2plus_checked += 1;
                let conclusion =
                    phi.clone().implies(CausalFormula::boxed_ix(sig, &int, psi.clone().not()));
                if !valid(m, &conclusion) {
                    checks.d2plus_failures += 1;
                }
            }
        }
    }
    checks
}
