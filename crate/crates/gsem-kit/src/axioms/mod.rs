//! Axiom schemata over a signature, the axiom systems built from them, and
//! instantiation into concrete formulas.
//!
//! A schema plus parameters yields a closed formula of the language — or a
//! `NotInLanguage` verdict when the parameters force an intervention the
//! signature does not allow. The harness reports the latter distinctly
//! rather than skipping them: vacuous schemata (a signature allowing no
//! complete interventions, say) should be visible, not silent.
//!
//! Canonical instance shapes (the proof checker matches these exactly):
//!
//! ```text
//! D1   [Y<-y](X=a -> !X=b)                          a != b
//! D2   [Y<-y](X=x1 | ... | X=xn)                    range order
//! D3   <Y<-y>(W=w & phi) -> <Y<-y; W<-w>(phi)
//! D4   [Y<-y](Y1=y1 & ... & Yk=yk)                  canonical order
//! D5   (<X<-x; Y<-y>(W=w & Z=z) & <X<-x; W<-w>(Y=y & Z=z))
//!        -> <X<-x>(W=w & Y=y & Z=z)                 Z = V - (X u {W,Y})
//! D6   (X0 ~> X1 & ... & X(k-1) ~> Xk) -> !(Xk ~> X0)
//! D7   ([Y<-y](p) & [Y<-y](p -> q)) -> [Y<-y](q)
//! D8   [Y<-y](taut)
//! D9   <Y<-y>(true) & (<Y<-y>(phi) -> [Y<-y](phi))  Y = V - {X}
//! D10a <Y<-y>(true)
//! D10b <Y<-y>(phi) -> [Y<-y](phi)
//! ```
//!
//! D6+ generalizes D6: for variables `X1..Xk`, finite value sets
//! `Ui (subset of R(Xi))`, and a finite intervention set `I'`, the instance
//! says some `Xi` does not affect the joint values of the others:
//!
//! ```text
//! affects(i) = OR over x, x' in Ui, ybar in U(-i), I in I' of
//!                [I; Xi<-x](!(X(-i) = ybar)) & <I; Xi<-x'>(X(-i) = ybar)
//! D6+ instance = OR over i of !affects(i)
//! ```
//!
//! so `affects(i)` holds exactly when some composed pair of interventions
//! can tell the restricted outcome sets apart. Clauses whose composed
//! interventions are not allowed are dropped, which only weakens the
//! instance.

mod harness;

pub use harness::{
    enumerate_instances, soundness_report, Instance, InstanceBudget, InstanceStatus, RuleChecks,
    SchemaRow, SoundnessReport, Violation,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::core::{
    compose_interventions, Assignment, Intervention, ModelClass, Property,
    Signature, ValIx, VarId,
};
use crate::lang::{
    leadsto_formula, taut_causal, taut_event, CausalFormula, Event, LangError, WfMode,
    DEFAULT_LEADSTO_CAP,
};

/// The recognized axiom schemata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    D0,
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D6Plus,
    D7,
    D8,
    D9,
    D10a,
    D10b,
}

impl SchemaId {
    pub const ALL: [SchemaId; 13] = [
        SchemaId::D0,
        SchemaId::D1,
        SchemaId::D2,
        SchemaId::D3,
        SchemaId::D4,
        SchemaId::D5,
        SchemaId::D6,
        SchemaId::D6Plus,
        SchemaId::D7,
        SchemaId::D8,
        SchemaId::D9,
        SchemaId::D10a,
        SchemaId::D10b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::D0 => "D0",
            SchemaId::D1 => "D1",
            SchemaId::D2 => "D2",
            SchemaId::D3 => "D3",
            SchemaId::D4 => "D4",
            SchemaId::D5 => "D5",
            SchemaId::D6 => "D6",
            SchemaId::D6Plus => "D6+",
            SchemaId::D7 => "D7",
            SchemaId::D8 => "D8",
            SchemaId::D9 => "D9",
            SchemaId::D10a => "D10a",
            SchemaId::D10b => "D10b",
        }
    }

    pub fn parse(text: &str) -> Option<SchemaId> {
        SchemaId::ALL.into_iter().find(|s| s.name().eq_ignore_ascii_case(text))
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inference rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    ModusPonens,
    D2Plus,
}

/// A named set of schemata and inference rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSystem {
    name: String,
    schemas: BTreeSet<SchemaId>,
    rules: BTreeSet<RuleId>,
}

impl AxiomSystem {
    /// D0-D5, D7-D9, and modus ponens.
    pub fn ax_plus() -> AxiomSystem {
        AxiomSystem {
            name: "AX+".into(),
            schemas: [
                SchemaId::D0,
                SchemaId::D1,
                SchemaId::D2,
                SchemaId::D3,
                SchemaId::D4,
                SchemaId::D5,
                SchemaId::D7,
                SchemaId::D8,
                SchemaId::D9,
            ]
            .into(),
            rules: [RuleId::ModusPonens].into(),
        }
    }

    /// `ax_plus` with D5 removed and D6, D10(a), D10(b) added.
    pub fn ax_plus_rec() -> AxiomSystem {
        let mut s = Self::ax_plus();
        s.name = "AX+rec".into();
        s.schemas.remove(&SchemaId::D5);
        s.schemas.extend([SchemaId::D6, SchemaId::D10a, SchemaId::D10b]);
        s
    }

    /// D0, D1, D2, D4, D7, D8, and modus ponens.
    pub fn ax_plus_basic() -> AxiomSystem {
        AxiomSystem {
            name: "AX+basic".into(),
            schemas: [
                SchemaId::D0,
                SchemaId::D1,
                SchemaId::D2,
                SchemaId::D4,
                SchemaId::D7,
                SchemaId::D8,
            ]
            .into(),
            rules: [RuleId::ModusPonens].into(),
        }
    }

    /// `ax_plus_basic` plus the D6+ schema.
    pub fn ax_plus_basic_rec() -> AxiomSystem {
        let mut s = Self::ax_plus_basic();
        s.name = "AX+basicrec".into();
        s.schemas.insert(SchemaId::D6Plus);
        s
    }

    /// `ax_plus_basic` with the D2 schema replaced by the D2+ rule.
    pub fn ax_star_basic() -> AxiomSystem {
        let mut s = Self::ax_plus_basic();
        s.name = "AX*basic".into();
        s.schemas.remove(&SchemaId::D2);
        s.rules.insert(RuleId::D2Plus);
        s
    }

    /// `ax_star_basic` plus the property schemata selected by the class:
    /// coherence adds D3, acyclicity D6+, at-least-one D10(a), at-most-one
    /// D10(b).
    pub fn ax_star_basic_for(cls: ModelClass) -> AxiomSystem {
        let mut s = Self::ax_star_basic();
        s.name = format!("AX*basic{cls}");
        for p in cls.properties() {
            s.schemas.insert(match p {
                Property::Coherent => SchemaId::D3,
                Property::Acyclic => SchemaId::D6Plus,
                Property::AtLeastOne => SchemaId::D10a,
                Property::AtMostOne => SchemaId::D10b,
            });
        }
        s
    }

    /// Parses a system name as used on the command line; `cls` extends
    /// `AX*basic` with the matching property schemata.
    pub fn parse(text: &str, cls: ModelClass) -> Option<AxiomSystem> {
        match text {
            "AX+" => Some(Self::ax_plus()),
            "AX+rec" => Some(Self::ax_plus_rec()),
            "AX+basic" => Some(Self::ax_plus_basic()),
            "AX+basicrec" => Some(Self::ax_plus_basic_rec()),
            "AX*basic" if cls.is_empty() => Some(Self::ax_star_basic()),
            "AX*basic" => Some(Self::ax_star_basic_for(cls)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schemas(&self) -> impl Iterator<Item = SchemaId> + '_ {
        self.schemas.iter().copied()
    }

    pub fn has_schema(&self, id: SchemaId) -> bool {
        self.schemas.contains(&id)
    }

    pub fn has_rule(&self, rule: RuleId) -> bool {
        self.rules.contains(&rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("{schema} instance is not in the language: {detail}")]
    NotInLanguage { schema: SchemaId, detail: String },
    #[error("bad parameters for {schema}: {detail}")]
    BadParams { schema: SchemaId, detail: String },
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// Parameters for one schema instance. Metavariables are explicit; there is
/// no unification anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaParams {
    /// A causal formula that must be a substitution instance of a
    /// propositional tautology.
    D0 { taut: CausalFormula },
    D1 { int: Intervention, var: VarId, a: ValIx, b: ValIx },
    D2 { int: Intervention, var: VarId },
    D3 { int: Intervention, w: VarId, wval: ValIx, event: Event },
    D4 { int: Intervention },
    D5 { base: Intervention, y: VarId, yval: ValIx, w: VarId, wval: ValIx, rest: Assignment },
    D6 { chain: Vec<VarId> },
    D6Plus { vars: Vec<VarId>, value_sets: Vec<Vec<ValIx>>, ints: Vec<Intervention> },
    D7 { int: Intervention, p: Event, q: Event },
    D8 { int: Intervention, taut: Event },
    D9 { int: Intervention, event: Event },
    D10a { int: Intervention },
    D10b { int: Intervention, event: Event },
}

impl SchemaParams {
    pub fn schema(&self) -> SchemaId {
        match self {
            SchemaParams::D0 { .. } => SchemaId::D0,
            SchemaParams::D1 { .. } => SchemaId::D1,
            SchemaParams::D2 { .. } => SchemaId::D2,
            SchemaParams::D3 { .. } => SchemaId::D3,
            SchemaParams::D4 { .. } => SchemaId::D4,
            SchemaParams::D5 { .. } => SchemaId::D5,
            SchemaParams::D6 { .. } => SchemaId::D6,
            SchemaParams::D6Plus { .. } => SchemaId::D6Plus,
            SchemaParams::D7 { .. } => SchemaId::D7,
            SchemaParams::D8 { .. } => SchemaId::D8,
            SchemaParams::D9 { .. } => SchemaId::D9,
            SchemaParams::D10a { .. } => SchemaId::D10a,
            SchemaParams::D10b { .. } => SchemaId::D10b,
        }
    }
}

fn bad(schema: SchemaId, detail: impl Into<String>) -> InstantiateError {
    InstantiateError::BadParams { schema, detail: detail.into() }
}

fn require_allowed(
    sig: &Signature,
    schema: SchemaId,
    int: &Intervention,
) -> Result<(), InstantiateError> {
    if sig.allowed_index(int).is_none() {
        return Err(InstantiateError::NotInLanguage {
            schema,
            detail: format!("intervention {} is not allowed", sig.render_intervention(int)),
        });
    }
    Ok(())
}

fn require_endo(sig: &Signature, schema: SchemaId, var: VarId) -> Result<(), InstantiateError> {
    if !sig.is_endo(var) {
        return Err(bad(schema, format!("`{}` is not endogenous", sig.var(var).name())));
    }
    Ok(())
}

fn require_in_range(
    sig: &Signature,
    schema: SchemaId,
    var: VarId,
    val: ValIx,
) -> Result<(), InstantiateError> {
    if val as usize >= sig.var(var).range().len() {
        return Err(bad(
            schema,
            format!("value index {val} is out of range for `{}`", sig.var(var).name()),
        ));
    }
    Ok(())
}

/// Instantiates a schema over a signature into a closed formula of the
/// language.
pub fn instantiate(sig: &Signature, params: &SchemaParams) -> Result<CausalFormula, InstantiateError> {
    let schema = params.schema();
    let f = match params {
        SchemaParams::D0 { taut } => {
            if !taut_causal(taut)? {
                return Err(bad(schema, "formula is not a propositional tautology"));
            }
            taut.clone()
        }
        SchemaParams::D1 { int, var, a, b } => {
            require_allowed(sig, schema, int)?;
            require_endo(sig, schema, *var)?;
            require_in_range(sig, schema, *var, *a)?;
            require_in_range(sig, schema, *var, *b)?;
            if a == b {
                return Err(bad(schema, "the two values must differ"));
            }
            let body = Event::prim_ix(sig, *var, *a).implies(Event::prim_ix(sig, *var, *b).not());
            CausalFormula::boxed_ix(sig, int, body)
        }
        SchemaParams::D2 { int, var } => {
            require_allowed(sig, schema, int)?;
            require_endo(sig, schema, *var)?;
            CausalFormula::boxed_ix(sig, int, d2_body(sig, *var))
        }
        SchemaParams::D3 { int, w, wval, event } => {
            require_endo(sig, schema, *w)?;
            require_in_range(sig, schema, *w, *wval)?;
            require_allowed(sig, schema, int)?;
            let ext = compose_interventions(int, &Intervention::from_pairs(vec![(*w, *wval)]));
            require_allowed(sig, schema, &ext)?;
            let premise = CausalFormula::diamond_ix(
                sig,
                int,
                Event::prim_ix(sig, *w, *wval).and(event.clone()),
            );
            premise.implies(CausalFormula::diamond_ix(sig, &ext, event.clone()))
        }
        SchemaParams::D4 { int } => {
            require_allowed(sig, schema, int)?;
            let body = Event::conj(
                int.bindings().iter().map(|&(v, x)| Event::prim_ix(sig, v, x)),
            );
            CausalFormula::boxed_ix(sig, int, body)
        }
        SchemaParams::D5 { base, y, yval, w, wval, rest } => {
            d5_instance(sig, base, *y, *yval, *w, *wval, rest)?
        }
        SchemaParams::D6 { chain } => {
            if chain.len() < 2 {
                return Err(bad(schema, "need at least two variables"));
            }
            let mut seen = chain.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != chain.len() {
                return Err(bad(schema, "chain variables must be distinct"));
            }
            for &v in chain {
                require_endo(sig, schema, v)?;
            }
            let mut premises = Vec::new();
            for pair in chain.windows(2) {
                premises.push(leadsto_formula(sig, pair[0], pair[1], DEFAULT_LEADSTO_CAP)?);
            }
            let back = leadsto_formula(sig, chain[chain.len() - 1], chain[0], DEFAULT_LEADSTO_CAP)?;
            CausalFormula::conj(premises).implies(back.not())
        }
        SchemaParams::D6Plus { vars, value_sets, ints } => {
            instantiate_d6plus(sig, vars, value_sets, ints)?
        }
        SchemaParams::D7 { int, p, q } => {
            require_allowed(sig, schema, int)?;
            let bp = CausalFormula::boxed_ix(sig, int, p.clone());
            let bpq = CausalFormula::boxed_ix(sig, int, p.clone().implies(q.clone()));
            let bq = CausalFormula::boxed_ix(sig, int, q.clone());
            bp.and(bpq).implies(bq)
        }
        SchemaParams::D8 { int, taut } => {
            require_allowed(sig, schema, int)?;
            if !taut_event(taut)? {
                return Err(bad(schema, "event is not a propositional tautology"));
            }
            CausalFormula::boxed_ix(sig, int, taut.clone())
        }
        SchemaParams::D9 { int, event } => {
            let unbound: Vec<VarId> =
                sig.endo_ids().filter(|&v| int.binds(v).is_none()).collect();
            if unbound.len() != 1 {
                return Err(bad(
                    schema,
                    "the intervention must bind all endogenous variables but one",
                ));
            }
            require_allowed(sig, schema, int)?;
            CausalFormula::diamond_ix(sig, int, Event::True).and(
                CausalFormula::diamond_ix(sig, int, event.clone())
                    .implies(CausalFormula::boxed_ix(sig, int, event.clone())),
            )
        }
        SchemaParams::D10a { int } => {
            require_allowed(sig, schema, int)?;
            CausalFormula::diamond_ix(sig, int, Event::True)
        }
        SchemaParams::D10b { int, event } => {
            require_allowed(sig, schema, int)?;
            CausalFormula::diamond_ix(sig, int, event.clone())
                .implies(CausalFormula::boxed_ix(sig, int, event.clone()))
        }
    };
    // catch stray out-of-range values or unknown variables in caller events
    crate::lang::well_formed(sig, &f, WfMode::AllowedOnly).map_err(|e| match e {
        LangError::DisallowedIntervention(d) => {
            InstantiateError::NotInLanguage { schema, detail: format!("intervention {d} is not allowed") }
        }
        other => InstantiateError::Lang(other),
    })?;
    Ok(f)
}

/// The body of a D2 instance for `var`: the disjunction of `var = x` over
/// its range, in range order.
pub fn d2_body(sig: &Signature, var: VarId) -> Event {
    Event::disj(
        (0..sig.var(var).range().len() as ValIx).map(|x| Event::prim_ix(sig, var, x)),
    )
}

fn d5_instance(
    sig: &Signature,
    base: &Intervention,
    y: VarId,
    yval: ValIx,
    w: VarId,
    wval: ValIx,
    rest: &Assignment,
) -> Result<CausalFormula, InstantiateError> {
    let schema = SchemaId::D5;
    require_endo(sig, schema, y)?;
    require_endo(sig, schema, w)?;
    require_in_range(sig, schema, y, yval)?;
    require_in_range(sig, schema, w, wval)?;
    if y == w {
        return Err(bad(schema, "Y and W must be distinct"));
    }
    if base.binds(y).is_some() || base.binds(w).is_some() {
        return Err(bad(schema, "the base intervention must not bind Y or W"));
    }
    let expected: Vec<VarId> = sig
        .endo_ids()
        .filter(|&v| v != y && v != w && base.binds(v).is_none())
        .collect();
    let rest_vars: Vec<VarId> = rest.vars().collect();
    if rest_vars != expected {
        return Err(bad(schema, "the residue must cover exactly the remaining variables"));
    }
    require_allowed(sig, schema, base)?;
    let with_y = compose_interventions(base, &Intervention::from_pairs(vec![(y, yval)]));
    let with_w = compose_interventions(base, &Intervention::from_pairs(vec![(w, wval)]));
    require_allowed(sig, schema, &with_y)?;
    require_allowed(sig, schema, &with_w)?;
    let rest_events =
        || rest.pairs().iter().map(|&(v, x)| Event::prim_ix(sig, v, x)).collect::<Vec<_>>();
    let mut e1 = vec![Event::prim_ix(sig, w, wval)];
    e1.extend(rest_events());
    let mut e2 = vec![Event::prim_ix(sig, y, yval)];
    e2.extend(rest_events());
    let mut e3 = vec![Event::prim_ix(sig, w, wval), Event::prim_ix(sig, y, yval)];
    e3.extend(rest_events());
    Ok(CausalFormula::diamond_ix(sig, &with_y, Event::conj(e1))
        .and(CausalFormula::diamond_ix(sig, &with_w, Event::conj(e2)))
        .implies(CausalFormula::diamond_ix(sig, base, Event::conj(e3))))
}

/// Instantiates D6+ for variables `vars`, per-variable finite value sets,
/// and an intervention set. See the module docs for the expansion; clauses
/// whose composed interventions are not allowed are dropped.
pub fn instantiate_d6plus(
    sig: &Signature,
    vars: &[VarId],
    value_sets: &[Vec<ValIx>],
    ints: &[Intervention],
) -> Result<CausalFormula, InstantiateError> {
    let schema = SchemaId::D6Plus;
    if vars.is_empty() {
        return Err(bad(schema, "need at least one variable"));
    }
    if value_sets.len() != vars.len() {
        return Err(bad(schema, "one value set per variable"));
    }
    let mut seen = vars.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != vars.len() {
        return Err(bad(schema, "variables must be distinct"));
    }
    for (&v, set) in vars.iter().zip(value_sets) {
        require_endo(sig, schema, v)?;
        if set.is_empty() {
            return Err(bad(schema, "value sets must be nonempty"));
        }
        for &x in set {
            require_in_range(sig, schema, v, x)?;
        }
    }
    for int in ints {
        require_allowed(sig, schema, int)?;
    }
    let mut disjuncts = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        disjuncts.push(affects_clause(sig, vars, value_sets, ints, i)?.not());
    }
    Ok(CausalFormula::disj(disjuncts))
}

/// The `Xi affects X(-i)` disjunction for one pivot index.
fn affects_clause(
    sig: &Signature,
    vars: &[VarId],
    value_sets: &[Vec<ValIx>],
    ints: &[Intervention],
    i: usize,
) -> Result<CausalFormula, InstantiateError> {
    let pivot = vars[i];
    let others: Vec<usize> = (0..vars.len()).filter(|&j| j != i).collect();
    // joint tuples over U(-i), in lexicographic order of the given variable
    // list
    let mut tuples: Vec<Vec<ValIx>> = vec![vec![]];
    for &j in &others {
        let mut next = Vec::new();
        for t in &tuples {
            for &x in &value_sets[j] {
                let mut t2 = t.clone();
                t2.push(x);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut clauses = Vec::new();
    for &x in &value_sets[i] {
        for &x2 in &value_sets[i] {
            for tuple in &tuples {
                for base in ints {
                    let left =
                        compose_interventions(base, &Intervention::from_pairs(vec![(pivot, x)]));
                    let right =
                        compose_interventions(base, &Intervention::from_pairs(vec![(pivot, x2)]));
                    if sig.allowed_index(&left).is_none() || sig.allowed_index(&right).is_none() {
                        continue;
                    }
                    let joint = Event::conj(
                        others
                            .iter()
                            .zip(tuple)
                            .map(|(&j, &val)| Event::prim_ix(sig, vars[j], val)),
                    );
                    if clauses.len() as u128 >= DEFAULT_LEADSTO_CAP {
                        return Err(InstantiateError::Lang(LangError::TooLarge {
                            count: clauses.len() as u128 + 1,
                            cap: DEFAULT_LEADSTO_CAP,
                        }));
                    }
                    clauses.push(
                        CausalFormula::boxed_ix(sig, &left, joint.clone().not())
                            .and(CausalFormula::diamond_ix(sig, &right, joint)),
                    );
                }
            }
        }
    }
    Ok(CausalFormula::disj(clauses))
}

/// The alternate unique-outcome schema: `<Y<-y>(true) & (OR over x of
/// [Y<-y](X=x))` for the one unbound variable `X`.
pub fn hd9_formula(sig: &Signature, int: &Intervention) -> Result<CausalFormula, InstantiateError> {
    let unbound: Vec<VarId> = sig.endo_ids().filter(|&v| int.binds(v).is_none()).collect();
    if unbound.len() != 1 {
        return Err(bad(SchemaId::D9, "the intervention must bind all endogenous variables but one"));
    }
    require_allowed(sig, SchemaId::D9, int)?;
    let x = unbound[0];
    let body = CausalFormula::disj(
        (0..sig.var(x).range().len() as ValIx)
            .map(|v| CausalFormula::boxed_ix(sig, int, Event::prim_ix(sig, x, v))),
    );
    Ok(CausalFormula::diamond_ix(sig, int, Event::True).and(body))
}
