//! The satisfaction relations: assignments against events, and
//! (model, context) pairs against causal formulas.
//!
//! `[Y<-y](e)` holds at `(M, u)` when every outcome in `M(u, Y<-y)`
//! satisfies `e`; the diamond dually asks for at least one outcome. An empty
//! outcome set therefore satisfies every box (vacuously) and no diamond.
//!
//! Formulas are compiled once against a signature — variable names resolved
//! to positions, binding lists to allowed-intervention indices — and then
//! evaluated against any model over that signature. The axiom harness and
//! the brute-force decision procedures lean on this split: one compile,
//! thousands of models.

use thiserror::Error;

use crate::core::{Assignment, Signature, ValIx};
use crate::lang::{characteristic_event, CausalFormula, Event, LangError};
use crate::model::{Gsem, ModelError};

#[derive(Debug, Error)]
pub enum SemError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `v |= e` by structural recursion; `v` must cover every variable
/// mentioned in `e`.
pub fn sat_event(sig: &Signature, v: &Assignment, e: &Event) -> Result<bool, LangError> {
    match e {
        Event::True => Ok(true),
        Event::False => Ok(false),
        Event::Prim { var, val } => {
            let id = sig.var_id(var).ok_or_else(|| LangError::UnknownVariable(var.clone()))?;
            let want = sig
                .var(id)
                .value_index(val)
                .ok_or_else(|| LangError::OutOfRangeValue { var: var.clone(), value: val.clone() })?;
            let got = v.get(id).ok_or_else(|| LangError::NotTotal(var.clone()))?;
            Ok(got == want)
        }
        Event::Not(a) => Ok(!sat_event(sig, v, a)?),
        Event::And(a, b) => Ok(sat_event(sig, v, a)? && sat_event(sig, v, b)?),
        Event::Or(a, b) => Ok(sat_event(sig, v, a)? || sat_event(sig, v, b)?),
        Event::Implies(a, b) => Ok(!sat_event(sig, v, a)? || sat_event(sig, v, b)?),
    }
}

#[derive(Debug, Clone)]
enum CEvent {
    True,
    False,
    Prim(usize, ValIx),
    Not(Box<CEvent>),
    And(Box<CEvent>, Box<CEvent>),
    Or(Box<CEvent>, Box<CEvent>),
    Implies(Box<CEvent>, Box<CEvent>),
}

#[derive(Debug, Clone)]
enum CNode {
    True,
    False,
    Box(usize, CEvent),
    Diamond(usize, CEvent),
    Not(Box<CNode>),
    And(Box<CNode>, Box<CNode>),
    Or(Box<CNode>, Box<CNode>),
    Implies(Box<CNode>, Box<CNode>),
}

/// A formula resolved against a signature, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: CNode,
}

fn compile_event(sig: &Signature, e: &Event) -> Result<CEvent, LangError> {
    Ok(match e {
        Event::True => CEvent::True,
        Event::False => CEvent::False,
        Event::Prim { var, val } => {
            let id = sig.var_id(var).ok_or_else(|| LangError::UnknownVariable(var.clone()))?;
            if !sig.is_endo(id) {
                return Err(LangError::NotEndogenous(var.clone()));
            }
            let want = sig
                .var(id)
                .value_index(val)
                .ok_or_else(|| LangError::OutOfRangeValue { var: var.clone(), value: val.clone() })?;
            CEvent::Prim(id.0 as usize - sig.n_exo(), want)
        }
        Event::Not(a) => CEvent::Not(Box::new(compile_event(sig, a)?)),
        Event::And(a, b) => {
            CEvent::And(Box::new(compile_event(sig, a)?), Box::new(compile_event(sig, b)?))
        }
        Event::Or(a, b) => {
            CEvent::Or(Box::new(compile_event(sig, a)?), Box::new(compile_event(sig, b)?))
        }
        Event::Implies(a, b) => {
            CEvent::Implies(Box::new(compile_event(sig, a)?), Box::new(compile_event(sig, b)?))
        }
    })
}

fn compile_node(sig: &Signature, f: &CausalFormula) -> Result<CNode, LangError> {
    Ok(match f {
        CausalFormula::True => CNode::True,
        CausalFormula::False => CNode::False,
        CausalFormula::Box(b, e) | CausalFormula::Diamond(b, e) => {
            let int = b.resolve(sig)?;
            let ix = sig
                .allowed_index(&int)
                .ok_or_else(|| LangError::DisallowedIntervention(sig.render_intervention(&int)))?;
            let ce = compile_event(sig, e)?;
            if matches!(f, CausalFormula::Box(..)) {
                CNode::Box(ix, ce)
            } else {
                CNode::Diamond(ix, ce)
            }
        }
        CausalFormula::Not(a) => CNode::Not(Box::new(compile_node(sig, a)?)),
        CausalFormula::And(a, b) => {
            CNode::And(Box::new(compile_node(sig, a)?), Box::new(compile_node(sig, b)?))
        }
        CausalFormula::Or(a, b) => {
            CNode::Or(Box::new(compile_node(sig, a)?), Box::new(compile_node(sig, b)?))
        }
        CausalFormula::Implies(a, b) => {
            CNode::Implies(Box::new(compile_node(sig, a)?), Box::new(compile_node(sig, b)?))
        }
    })
}

fn eval_event(e: &CEvent, outcome: &Assignment) -> bool {
    match e {
        CEvent::True => true,
        CEvent::False => false,
        CEvent::Prim(pos, want) => outcome.pairs()[*pos].1 == *want,
        CEvent::Not(a) => !eval_event(a, outcome),
        CEvent::And(a, b) => eval_event(a, outcome) && eval_event(b, outcome),
        CEvent::Or(a, b) => eval_event(a, outcome) || eval_event(b, outcome),
        CEvent::Implies(a, b) => !eval_event(a, outcome) || eval_event(b, outcome),
    }
}

fn eval_node(n: &CNode, m: &Gsem, ctx: usize) -> bool {
    match n {
        CNode::True => true,
        CNode::False => false,
        CNode::Box(ix, e) => m.outcomes_by_index(ctx, *ix).iter().all(|v| eval_event(e, v)),
        CNode::Diamond(ix, e) => m.outcomes_by_index(ctx, *ix).iter().any(|v| eval_event(e, v)),
        CNode::Not(a) => !eval_node(a, m, ctx),
        CNode::And(a, b) => eval_node(a, m, ctx) && eval_node(b, m, ctx),
        CNode::Or(a, b) => eval_node(a, m, ctx) || eval_node(b, m, ctx),
        CNode::Implies(a, b) => !eval_node(a, m, ctx) || eval_node(b, m, ctx),
    }
}

impl CompiledFormula {
    /// Resolves the formula against `sig`; every intervention must be
    /// allowed.
    pub fn compile(sig: &Signature, f: &CausalFormula) -> Result<CompiledFormula, LangError> {
        Ok(CompiledFormula { root: compile_node(sig, f)? })
    }

    /// Truth at the context with the given rank. The model must share the
    /// signature the formula was compiled against.
    pub fn eval(&self, m: &Gsem, ctx: usize) -> bool {
        eval_node(&self.root, m, ctx)
    }

    /// `None` if the formula holds at every context, otherwise the rank of
    /// the first failing one.
    pub fn first_failing_context(&self, m: &Gsem) -> Option<usize> {
        (0..m.sig().n_contexts()).find(|&ctx| !self.eval(m, ctx))
    }
}

/// `(M, u) |= f`.
pub fn check(m: &Gsem, u: &Assignment, f: &CausalFormula) -> Result<bool, SemError> {
    let ctx = m.sig().context_rank(u).map_err(ModelError::from)?;
    let compiled = CompiledFormula::compile(m.sig(), f)?;
    Ok(compiled.eval(m, ctx))
}

/// Validity in a model, with the first falsifying context on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelValidity {
    pub holds: bool,
    pub failing_context: Option<Assignment>,
}

/// `M |= f`: truth at every context.
pub fn valid_in_model(m: &Gsem, f: &CausalFormula) -> Result<ModelValidity, SemError> {
    let compiled = CompiledFormula::compile(m.sig(), f)?;
    match compiled.first_failing_context(m) {
        None => Ok(ModelValidity { holds: true, failing_context: None }),
        Some(ctx) => {
            Ok(ModelValidity { holds: false, failing_context: Some(m.sig().context(ctx)) })
        }
    }
}

/// Agreement on every formula of the language, decided through the
/// characteristic-formula basis: two finite models agree on all formulas
/// iff they agree on every `<I>(V = v)`, because those formulas pin down
/// the outcome sets.
///
/// This is deliberately routed through the satisfaction relation rather
/// than through outcome-map comparison, so it can serve as an independent
/// check of [`crate::model::equivalent`].
pub fn l_equivalent(m1: &Gsem, m2: &Gsem) -> Result<bool, SemError> {
    if *m1.sig() != *m2.sig() {
        return Err(SemError::Model(ModelError::SignatureMismatch));
    }
    let sig = m1.sig();
    let endo: Vec<_> = sig.endo_ids().collect();
    for int in sig.allowed() {
        for v in crate::core::enumerate_assignments(sig, &endo) {
            let probe = CausalFormula::diamond_ix(sig, int, characteristic_event(sig, &v)?);
            let compiled = CompiledFormula::compile(sig, &probe)?;
            for ctx in 0..sig.n_contexts() {
                if compiled.eval(m1, ctx) != compiled.eval(m2, ctx) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
