//! The causal formula language: events over primitive events `X=x`, and
//! causal formulas over atomic interventions `[Y<-y](event)`.
//!
//! Concrete grammar (whitespace-insensitive):
//!
//! ```text
//! formula := causal Boolean combination of [b](e), <b>(e), true, false
//! event   := Boolean combination of VAR=VALUE, true, false
//! b       := VAR<-VALUE, ... (possibly empty)
//! ```
//!
//! with connectives `! & | ->` at precedence `!` > `&` > `|` > `->`
//! (`->` associates right, `&`/`|` left) and parentheses. `<b>(e)` is the
//! dual of `[b](!(e))` by definition; the printer keeps the diamond form
//! rather than expanding the double negation, and [`normalize`] rewrites it
//! away when structural comparison should identify the two.
//!
//! Formulas parse in two stages: [`parse::parse_raw`] accepts anything
//! grammatical, and [`well_formed`] validates variables, values, and
//! (optionally) that every intervention is allowed by the signature. The
//! split lets experiments build formulas about disallowed interventions
//! while the default [`parse_formula`] enforces the language restriction.

pub mod parse;
pub mod random;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::core::{
    enumerate_assignments, Assignment, CoreError, Intervention, Signature, ValIx, VarId,
};

pub use parse::{parse_event_str, parse_formula, parse_formula_any, parse_raw};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is not an endogenous variable")]
    NotEndogenous(String),
    #[error("value `{value}` is not in the range of `{var}`")]
    OutOfRangeValue { var: String, value: String },
    #[error("intervention {0} is not allowed by the signature")]
    DisallowedIntervention(String),
    #[error("variable `{0}` bound more than once in an intervention")]
    DuplicateBinding(String),
    #[error("assignment is not total: missing `{0}`")]
    NotTotal(String),
    #[error("expansion would have {count} disjuncts, over the cap of {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("formula has {atoms} distinct atoms, over the truth-table bound of {bound}")]
    TooManyAtoms { atoms: usize, bound: usize },
}

impl From<CoreError> for LangError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnknownVariable(v) => LangError::UnknownVariable(v),
            CoreError::NotEndogenous(v) => LangError::NotEndogenous(v),
            CoreError::OutOfRange { var, value } => LangError::OutOfRangeValue { var, value },
            CoreError::DuplicateBinding(v) => LangError::DuplicateBinding(v),
            CoreError::MissingVariable(v) => LangError::NotTotal(v),
            other => LangError::Syntax { pos: 0, msg: other.to_string() },
        }
    }
}

/// A Boolean combination of primitive events `X=x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    True,
    False,
    Prim { var: String, val: String },
    Not(Box<Event>),
    And(Box<Event>, Box<Event>),
    Or(Box<Event>, Box<Event>),
    Implies(Box<Event>, Box<Event>),
}

impl Event {
    pub fn prim(var: impl Into<String>, val: impl Into<String>) -> Event {
        Event::Prim { var: var.into(), val: val.into() }
    }

    pub fn prim_ix(sig: &Signature, var: VarId, val: ValIx) -> Event {
        Event::prim(sig.var(var).name(), sig.render_value(var, val))
    }

    pub fn not(self) -> Event {
        Event::Not(Box::new(self))
    }

    pub fn and(self, rhs: Event) -> Event {
        Event::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Event) -> Event {
        Event::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Event) -> Event {
        Event::Implies(Box::new(self), Box::new(rhs))
    }

    /// Left-folded conjunction; the empty conjunction is `true`.
    pub fn conj(items: impl IntoIterator<Item = Event>) -> Event {
        let mut it = items.into_iter();
        match it.next() {
            None => Event::True,
            Some(first) => it.fold(first, Event::and),
        }
    }

    /// Left-folded disjunction; the empty disjunction is `false`.
    pub fn disj(items: impl IntoIterator<Item = Event>) -> Event {
        let mut it = items.into_iter();
        match it.next() {
            None => Event::False,
            Some(first) => it.fold(first, Event::or),
        }
    }

    /// Distinct primitive events, in first-occurrence order.
    pub fn atoms(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        self.walk_atoms(&mut out);
        out
    }

    fn walk_atoms(&self, out: &mut Vec<(String, String)>) {
        match self {
            Event::True | Event::False => {}
            Event::Prim { var, val } => {
                if !out.iter().any(|(v, x)| v == var && x == val) {
                    out.push((var.clone(), val.clone()));
                }
            }
            Event::Not(a) => a.walk_atoms(out),
            Event::And(a, b) | Event::Or(a, b) | Event::Implies(a, b) => {
                a.walk_atoms(out);
                b.walk_atoms(out);
            }
        }
    }

    /// Values that a given variable is compared against anywhere in the event.
    pub fn mentioned_values(&self, var: &str, out: &mut Vec<String>) {
        match self {
            Event::True | Event::False => {}
            Event::Prim { var: v, val } => {
                if v == var && !out.contains(val) {
                    out.push(val.clone());
                }
            }
            Event::Not(a) => a.mentioned_values(var, out),
            Event::And(a, b) | Event::Or(a, b) | Event::Implies(a, b) => {
                a.mentioned_values(var, out);
                b.mentioned_values(var, out);
            }
        }
    }
}

/// The binding list of a modal operator, canonicalized: sorted by variable
/// name, each variable at most once. The empty list is the null intervention.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bindings(Vec<(String, String)>);

impl Bindings {
    pub fn none() -> Bindings {
        Bindings::default()
    }

    pub fn new(mut pairs: Vec<(String, String)>) -> Result<Bindings, LangError> {
        pairs.sort();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(LangError::DuplicateBinding(w[0].0.clone()));
            }
        }
        Ok(Bindings(pairs))
    }

    pub fn of(pairs: &[(&str, &str)]) -> Result<Bindings, LangError> {
        Bindings::new(pairs.iter().map(|&(v, x)| (v.to_string(), x.to_string())).collect())
    }

    pub fn from_intervention(sig: &Signature, int: &Intervention) -> Bindings {
        let mut pairs: Vec<(String, String)> = int
            .bindings()
            .iter()
            .map(|&(v, x)| (sig.var(v).name().to_string(), sig.render_value(v, x).to_string()))
            .collect();
        pairs.sort();
        Bindings(pairs)
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn resolve(&self, sig: &Signature) -> Result<Intervention, LangError> {
        let pairs: Vec<(&str, &str)> = self.0.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
        Intervention::new(sig, &pairs).map_err(LangError::from)
    }

    pub fn mentioned_value(&self, var: &str) -> Option<&str> {
        self.0.iter().find(|(v, _)| v == var).map(|(_, x)| x.as_str())
    }
}

/// A Boolean combination of atomic formulas `[Y<-y](event)` and their duals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CausalFormula {
    True,
    False,
    Box(Bindings, Event),
    Diamond(Bindings, Event),
    Not(Box<CausalFormula>),
    And(Box<CausalFormula>, Box<CausalFormula>),
    Or(Box<CausalFormula>, Box<CausalFormula>),
    Implies(Box<CausalFormula>, Box<CausalFormula>),
}

impl CausalFormula {
    pub fn boxed(b: Bindings, e: Event) -> CausalFormula {
        CausalFormula::Box(b, e)
    }

    pub fn diamond(b: Bindings, e: Event) -> CausalFormula {
        CausalFormula::Diamond(b, e)
    }

    pub fn boxed_ix(sig: &Signature, int: &Intervention, e: Event) -> CausalFormula {
        CausalFormula::Box(Bindings::from_intervention(sig, int), e)
    }

    pub fn diamond_ix(sig: &Signature, int: &Intervention, e: Event) -> CausalFormula {
        CausalFormula::Diamond(Bindings::from_intervention(sig, int), e)
    }

    pub fn not(self) -> CausalFormula {
        CausalFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: CausalFormula) -> CausalFormula {
        CausalFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: CausalFormula) -> CausalFormula {
        CausalFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: CausalFormula) -> CausalFormula {
        CausalFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn conj(items: impl IntoIterator<Item = CausalFormula>) -> CausalFormula {
        let mut it = items.into_iter();
        match it.next() {
            None => CausalFormula::True,
            Some(first) => it.fold(first, CausalFormula::and),
        }
    }

    pub fn disj(items: impl IntoIterator<Item = CausalFormula>) -> CausalFormula {
        let mut it = items.into_iter();
        match it.next() {
            None => CausalFormula::False,
            Some(first) => it.fold(first, CausalFormula::or),
        }
    }

    /// Biconditional, spelled out as a conjunction of two implications.
    pub fn iff(self, rhs: CausalFormula) -> CausalFormula {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    /// Values of `var` mentioned anywhere: in primitive events or in
    /// intervention bindings.
    pub fn mentioned_values(&self, var: &str, out: &mut Vec<String>) {
        match self {
            CausalFormula::True | CausalFormula::False => {}
            CausalFormula::Box(b, e) | CausalFormula::Diamond(b, e) => {
                if let Some(x) = b.mentioned_value(var) {
                    if !out.iter().any(|o| o == x) {
                        out.push(x.to_string());
                    }
                }
                e.mentioned_values(var, out);
            }
            CausalFormula::Not(a) => a.mentioned_values(var, out),
            CausalFormula::And(a, b) | CausalFormula::Or(a, b) | CausalFormula::Implies(a, b) => {
                a.mentioned_values(var, out);
                b.mentioned_values(var, out);
            }
        }
    }
}

/// Rewrites every `<b>(e)` into `!([b](!(e)))` so that structural equality
/// coincides with the definitional reading of the diamond.
pub fn normalize(f: &CausalFormula) -> CausalFormula {
    match f {
        CausalFormula::True => CausalFormula::True,
        CausalFormula::False => CausalFormula::False,
        CausalFormula::Box(b, e) => CausalFormula::Box(b.clone(), e.clone()),
        CausalFormula::Diamond(b, e) => CausalFormula::Box(b.clone(), e.clone().not()).not(),
        CausalFormula::Not(a) => normalize(a).not(),
        CausalFormula::And(a, b) => normalize(a).and(normalize(b)),
        CausalFormula::Or(a, b) => normalize(a).or(normalize(b)),
        CausalFormula::Implies(a, b) => normalize(a).implies(normalize(b)),
    }
}

/// Whether interventions in a formula must be allowed by the signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfMode {
    AllowedOnly,
    AnyIntervention,
}

pub fn well_formed_event(sig: &Signature, e: &Event) -> Result<(), LangError> {
    match e {
        Event::True | Event::False => Ok(()),
        Event::Prim { var, val } => {
            let id = sig.var_id(var).ok_or_else(|| LangError::UnknownVariable(var.clone()))?;
            if !sig.is_endo(id) {
                return Err(LangError::NotEndogenous(var.clone()));
            }
            if sig.var(id).value_index(val).is_none() {
                return Err(LangError::OutOfRangeValue { var: var.clone(), value: val.clone() });
            }
            Ok(())
        }
        Event::Not(a) => well_formed_event(sig, a),
        Event::And(a, b) | Event::Or(a, b) | Event::Implies(a, b) => {
            well_formed_event(sig, a)?;
            well_formed_event(sig, b)
        }
    }
}

pub fn well_formed(sig: &Signature, f: &CausalFormula, mode: WfMode) -> Result<(), LangError> {
    match f {
        CausalFormula::True | CausalFormula::False => Ok(()),
        CausalFormula::Box(b, e) | CausalFormula::Diamond(b, e) => {
            let int = b.resolve(sig)?;
            if mode == WfMode::AllowedOnly && sig.allowed_index(&int).is_none() {
                return Err(LangError::DisallowedIntervention(sig.render_intervention(&int)));
            }
            well_formed_event(sig, e)
        }
        CausalFormula::Not(a) => well_formed(sig, a, mode),
        CausalFormula::And(a, b) | CausalFormula::Or(a, b) | CausalFormula::Implies(a, b) => {
            well_formed(sig, a, mode)?;
            well_formed(sig, b, mode)
        }
    }
}

/// The event `V = v`: the conjunction of `X = v[X]` over every endogenous
/// variable, in canonical order. Satisfied by `v` and by no other total
/// assignment.
pub fn characteristic_event(sig: &Signature, v: &Assignment) -> Result<Event, LangError> {
    let mut parts = Vec::with_capacity(sig.n_endo());
    for id in sig.endo_ids() {
        let val = v.get(id).ok_or_else(|| LangError::NotTotal(sig.var(id).name().to_string()))?;
        parts.push(Event::prim_ix(sig, id, val));
    }
    Ok(Event::conj(parts))
}

/// A possibly negated primitive event inside a DNF conjunct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DnfLiteral {
    pub var: String,
    pub val: String,
    pub positive: bool,
}

pub type DnfConjunct = Vec<DnfLiteral>;

/// Disjunctive normal form: a list of conjuncts of (possibly negated)
/// primitive events, semantically equivalent to the input. `false` is the
/// empty list; a conjunct that is an empty list is `true`.
pub fn event_to_dnf(e: &Event) -> Vec<DnfConjunct> {
    fn nnf(e: &Event, positive: bool) -> Vec<DnfConjunct> {
        match (e, positive) {
            (Event::True, true) | (Event::False, false) => vec![vec![]],
            (Event::True, false) | (Event::False, true) => vec![],
            (Event::Prim { var, val }, pos) => {
                vec![vec![DnfLiteral { var: var.clone(), val: val.clone(), positive: pos }]]
            }
            (Event::Not(a), pos) => nnf(a, !pos),
            (Event::And(a, b), true) | (Event::Or(a, b), false) => cross(nnf(a, positive), nnf(b, positive)),
            (Event::Or(a, b), true) | (Event::And(a, b), false) => {
                let mut out = nnf(a, positive);
                out.extend(nnf(b, positive));
                out
            }
            (Event::Implies(a, b), true) => {
                let mut out = nnf(a, false);
                out.extend(nnf(b, true));
                out
            }
            (Event::Implies(a, b), false) => cross(nnf(a, true), nnf(b, false)),
        }
    }

    fn cross(lhs: Vec<DnfConjunct>, rhs: Vec<DnfConjunct>) -> Vec<DnfConjunct> {
        let mut out = Vec::new();
        for l in &lhs {
            'next: for r in &rhs {
                let mut merged = l.clone();
                for lit in r {
                    if merged.iter().any(|m| {
                        m.var == lit.var && m.val == lit.val && m.positive != lit.positive
                    }) {
                        continue 'next; // contradictory conjunct
                    }
                    if !merged.contains(lit) {
                        merged.push(lit.clone());
                    }
                }
                out.push(merged);
            }
        }
        out
    }

    let mut out = nnf(e, true);
    for conj in &mut out {
        conj.sort();
    }
    out.sort();
    out.dedup();
    out
}

pub fn dnf_to_event(dnf: &[DnfConjunct]) -> Event {
    Event::disj(dnf.iter().map(|conj| {
        Event::conj(conj.iter().map(|lit| {
            let p = Event::prim(lit.var.clone(), lit.val.clone());
            if lit.positive {
                p
            } else {
                p.not()
            }
        }))
    }))
}

pub const DEFAULT_LEADSTO_CAP: u128 = 1_000_000;

/// The "`Y` affects `Z`" abbreviation: the disjunction over interventions
/// `X <- x` and values `y`, `z != z'` of
/// `[X<-x](Z=z) & [X<-x; Y<-y](Z=z')`.
///
/// Disjuncts whose interventions are not allowed by the signature are
/// dropped, so under a non-universal signature the expansion covers only the
/// expressible part of the definition.
pub fn leadsto_formula(
    sig: &Signature,
    y: VarId,
    z: VarId,
    cap: u128,
) -> Result<CausalFormula, LangError> {
    if !sig.is_endo(y) {
        return Err(LangError::NotEndogenous(sig.var(y).name().to_string()));
    }
    if !sig.is_endo(z) {
        return Err(LangError::NotEndogenous(sig.var(z).name().to_string()));
    }
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let mut disjuncts: Vec<CausalFormula> = Vec::new();
    let n = endo.len();
    for subset in 0u64..(1u64 << n) {
        let picked: Vec<VarId> =
            endo.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, &v)| v).collect();
        for x in enumerate_assignments(sig, &picked) {
            let base = Intervention::from_pairs(x.pairs().to_vec());
            if sig.allowed_index(&base).is_none() {
                continue;
            }
            for yval in 0..sig.var(y).range().len() as ValIx {
                let ext = crate::core::compose_interventions(
                    &base,
                    &Intervention::from_pairs(vec![(y, yval)]),
                );
                if sig.allowed_index(&ext).is_none() {
                    continue;
                }
                let nz = sig.var(z).range().len() as ValIx;
                for z1 in 0..nz {
                    for z2 in 0..nz {
                        if z1 == z2 {
                            continue;
                        }
                        if disjuncts.len() as u128 >= cap {
                            return Err(LangError::TooLarge {
                                count: disjuncts.len() as u128 + 1,
                                cap,
                            });
                        }
                        disjuncts.push(
                            CausalFormula::boxed_ix(sig, &base, Event::prim_ix(sig, z, z1)).and(
                                CausalFormula::boxed_ix(sig, &ext, Event::prim_ix(sig, z, z2)),
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(CausalFormula::disj(disjuncts))
}

pub const TAUT_ATOM_BOUND: usize = 20;

/// Truth-table tautology check treating distinct primitive events as
/// independent atoms. `X=0 | X=1` is *not* a tautology here.
pub fn taut_event(e: &Event) -> Result<bool, LangError> {
    let atoms = e.atoms();
    if atoms.len() > TAUT_ATOM_BOUND {
        return Err(LangError::TooManyAtoms { atoms: atoms.len(), bound: TAUT_ATOM_BOUND });
    }
    fn eval(e: &Event, atoms: &[(String, String)], row: u64) -> bool {
        match e {
            Event::True => true,
            Event::False => false,
            Event::Prim { var, val } => {
                let i = atoms.iter().position(|(v, x)| v == var && x == val).unwrap();
                row >> i & 1 == 1
            }
            Event::Not(a) => !eval(a, atoms, row),
            Event::And(a, b) => eval(a, atoms, row) && eval(b, atoms, row),
            Event::Or(a, b) => eval(a, atoms, row) || eval(b, atoms, row),
            Event::Implies(a, b) => !eval(a, atoms, row) || eval(b, atoms, row),
        }
    }
    Ok((0..1u64 << atoms.len()).all(|row| eval(e, &atoms, row)))
}

/// Truth-table tautology check treating `[b](e)` / `<b>(e)` subformulas as
/// independent atoms, after normalizing diamonds away. This is exactly the
/// substitution-instance reading of a propositional tautology.
pub fn taut_causal(f: &CausalFormula) -> Result<bool, LangError> {
    let f = normalize(f);
    let mut atoms: Vec<(Bindings, Event)> = Vec::new();
    fn collect(f: &CausalFormula, atoms: &mut Vec<(Bindings, Event)>) {
        match f {
            CausalFormula::True | CausalFormula::False => {}
            CausalFormula::Box(b, e) | CausalFormula::Diamond(b, e) => {
                if !atoms.iter().any(|(b2, e2)| b2 == b && e2 == e) {
                    atoms.push((b.clone(), e.clone()));
                }
            }
            CausalFormula::Not(a) => collect(a, atoms),
            CausalFormula::And(a, b) | CausalFormula::Or(a, b) | CausalFormula::Implies(a, b) => {
                collect(a, atoms);
                collect(b, atoms);
            }
        }
    }
    collect(&f, &mut atoms);
    if atoms.len() > TAUT_ATOM_BOUND {
        return Err(LangError::TooManyAtoms { atoms: atoms.len(), bound: TAUT_ATOM_BOUND });
    }
    fn eval(f: &CausalFormula, atoms: &[(Bindings, Event)], row: u64) -> bool {
        match f {
            CausalFormula::True => true,
            CausalFormula::False => false,
            CausalFormula::Box(b, e) | CausalFormula::Diamond(b, e) => {
                let i = atoms.iter().position(|(b2, e2)| b2 == b && e2 == e).unwrap();
                row >> i & 1 == 1
            }
            CausalFormula::Not(a) => !eval(a, atoms, row),
            CausalFormula::And(a, b) => eval(a, atoms, row) && eval(b, atoms, row),
            CausalFormula::Or(a, b) => eval(a, atoms, row) || eval(b, atoms, row),
            CausalFormula::Implies(a, b) => !eval(a, atoms, row) || eval(b, atoms, row),
        }
    }
    Ok((0..1u64 << atoms.len()).all(|row| eval(&f, &atoms, row)))
}

// ---------------------------------------------------------------------------
// printing

// precedence: -> 1, | 2, & 3, ! 4, atoms 5
fn event_prec(e: &Event) -> u8 {
    match e {
        Event::Implies(..) => 1,
        Event::Or(..) => 2,
        Event::And(..) => 3,
        Event::Not(..) => 4,
        _ => 5,
    }
}

fn print_event(e: &Event, min: u8, out: &mut String) {
    let prec = event_prec(e);
    let wrap = prec < min;
    if wrap {
        out.push('(');
    }
    match e {
        Event::True => out.push_str("true"),
        Event::False => out.push_str("false"),
        Event::Prim { var, val } => {
            out.push_str(var);
            out.push('=');
            out.push_str(val);
        }
        Event::Not(a) => {
            out.push('!');
            print_event(a, 4, out);
        }
        Event::And(a, b) => {
            print_event(a, 3, out);
            out.push_str(" & ");
            print_event(b, 4, out);
        }
        Event::Or(a, b) => {
            print_event(a, 2, out);
            out.push_str(" | ");
            print_event(b, 3, out);
        }
        Event::Implies(a, b) => {
            print_event(a, 2, out);
            out.push_str(" -> ");
            print_event(b, 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn causal_prec(f: &CausalFormula) -> u8 {
    match f {
        CausalFormula::Implies(..) => 1,
        CausalFormula::Or(..) => 2,
        CausalFormula::And(..) => 3,
        CausalFormula::Not(..) => 4,
        _ => 5,
    }
}

fn print_bindings(b: &Bindings, open: char, close: char, out: &mut String) {
    out.push(open);
    for (i, (var, val)) in b.pairs().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(var);
        out.push_str("<-");
        out.push_str(val);
    }
    out.push(close);
}

fn print_causal(f: &CausalFormula, min: u8, out: &mut String) {
    let prec = causal_prec(f);
    let wrap = prec < min;
    if wrap {
        out.push('(');
    }
    match f {
        CausalFormula::True => out.push_str("true"),
        CausalFormula::False => out.push_str("false"),
        CausalFormula::Box(b, e) => {
            print_bindings(b, '[', ']', out);
            out.push('(');
            print_event(e, 0, out);
            out.push(')');
        }
        CausalFormula::Diamond(b, e) => {
            print_bindings(b, '<', '>', out);
            out.push('(');
            print_event(e, 0, out);
            out.push(')');
        }
        CausalFormula::Not(a) => {
            out.push('!');
            print_causal(a, 4, out);
        }
        CausalFormula::And(a, b) => {
            print_causal(a, 3, out);
            out.push_str(" & ");
            print_causal(b, 4, out);
        }
        CausalFormula::Or(a, b) => {
            print_causal(a, 2, out);
            out.push_str(" | ");
            print_causal(b, 3, out);
        }
        CausalFormula::Implies(a, b) => {
            print_causal(a, 2, out);
            out.push_str(" -> ");
            print_causal(b, 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_event(self, 0, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for CausalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_causal(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Canonical rendering; `parse_raw` inverts it structurally.
pub fn print_formula(f: &CausalFormula) -> String {
    f.to_string()
}

// ---------------------------------------------------------------------------
// JSON AST dump

pub fn event_to_json(e: &Event) -> Value {
    match e {
        Event::True => json!({"kind": "true"}),
        Event::False => json!({"kind": "false"}),
        Event::Prim { var, val } => json!({"kind": "prim", "var": var, "value": val}),
        Event::Not(a) => json!({"kind": "not", "body": event_to_json(a)}),
        Event::And(a, b) => json!({"kind": "and", "lhs": event_to_json(a), "rhs": event_to_json(b)}),
        Event::Or(a, b) => json!({"kind": "or", "lhs": event_to_json(a), "rhs": event_to_json(b)}),
        Event::Implies(a, b) => {
            json!({"kind": "implies", "lhs": event_to_json(a), "rhs": event_to_json(b)})
        }
    }
}

fn bindings_to_json(b: &Bindings) -> Value {
    Value::Array(
        b.pairs().iter().map(|(v, x)| json!({"var": v, "value": x})).collect(),
    )
}

pub fn formula_to_json(f: &CausalFormula) -> Value {
    match f {
        CausalFormula::True => json!({"kind": "true"}),
        CausalFormula::False => json!({"kind": "false"}),
        CausalFormula::Box(b, e) => {
            json!({"kind": "box", "intervention": bindings_to_json(b), "body": event_to_json(e)})
        }
        CausalFormula::Diamond(b, e) => {
            json!({"kind": "diamond", "intervention": bindings_to_json(b), "body": event_to_json(e)})
        }
        CausalFormula::Not(a) => json!({"kind": "not", "body": formula_to_json(a)}),
        CausalFormula::And(a, b) => {
            json!({"kind": "and", "lhs": formula_to_json(a), "rhs": formula_to_json(b)})
        }
        CausalFormula::Or(a, b) => {
            json!({"kind": "or", "lhs": formula_to_json(a), "rhs": formula_to_json(b)})
        }
        CausalFormula::Implies(a, b) => {
            json!({"kind": "implies", "lhs": formula_to_json(a), "rhs": formula_to_json(b)})
        }
    }
}
