//! Hilbert-style derivations and their checker.
//!
//! A derivation is a certificate, not a search: an ordered list of steps,
//! each a formula justified by a tautology certificate, an explicit axiom
//! instance, modus ponens, or the D2+ rule. The checker re-instantiates
//! every axiom step from its parameters and compares structurally; there is
//! no unification. It accepts iff every step validates, and the final
//! formula is the theorem proved.
//!
//! The D2+ rule: from
//!
//! ```text
//! phi -> ([Y<-y](psi -> !X=x1) & ... & [Y<-y](psi -> !X=xn))
//! ```
//!
//! infer `phi -> [Y<-y](!(psi))`, where the value set `S = {x1..xn}` must
//! (a) be a subset of the range of `X`, (b) contain every value of `X`
//! mentioned in `phi -> [Y<-y](psi)` — in events or in intervention
//! bindings — and (c) contain at least one value *not* mentioned there,
//! whenever the range has one. For finite ranges taking `S` to be the whole
//! range always satisfies all three.

pub mod build;
pub mod text;

pub use text::{parse_derivation, render_derivation};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::axioms::{instantiate, AxiomSystem, InstantiateError, RuleId, SchemaId, SchemaParams};
use crate::core::{Signature, ValIx, VarId};
use crate::lang::{
    print_formula, taut_causal, CausalFormula, Event, LangError, WfMode,
};

// The propositional-tautology oracles behind D0 and D8: over modal atoms
// for causal formulas, over primitive-event atoms for events.
pub use crate::lang::{taut_causal as check_taut, taut_event as check_taut_event};

/// One justified step.
#[derive(Debug, Clone)]
pub struct Step {
    pub formula: CausalFormula,
    pub justification: Justification,
}

#[derive(Debug, Clone)]
pub enum Justification {
    /// A substitution instance of a propositional tautology (the D0 schema),
    /// certified by truth table over the modal atoms.
    Taut,
    /// An explicit schema instance; the formula must equal the
    /// re-instantiation exactly.
    Axiom(SchemaParams),
    /// From `steps[antecedent] = phi` and `steps[implication] = phi -> psi`,
    /// this step is `psi`.
    Mp { antecedent: usize, implication: usize },
    /// The D2+ rule applied to `steps[premise]` with the given variable and
    /// value set.
    D2Plus { premise: usize, var: VarId, values: Vec<ValIx> },
}

/// A checkable proof in a fixed system over a fixed signature.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub system: AxiomSystem,
    pub sig: Arc<Signature>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Error)]
pub enum StepError {
    #[error("derivation has no steps")]
    Empty,
    #[error("formula is not well-formed: {0}")]
    NotWellFormed(LangError),
    #[error("schema {0} is not part of the system")]
    SchemaNotInSystem(SchemaId),
    #[error("rule {0} is not part of the system")]
    RuleNotInSystem(&'static str),
    #[error("formula is not a substitution instance of a propositional tautology")]
    NotATautology,
    #[error("tautology check failed: {0}")]
    TautologyCheck(LangError),
    #[error("axiom instantiation failed: {0}")]
    Instantiate(InstantiateError),
    #[error("formula does not match the schema instance, expected `{expected}`")]
    FormulaMismatch { expected: String },
    #[error("step reference {referenced} is out of range")]
    BadReference { referenced: usize },
    #[error("step {referenced} is not an implication whose antecedent is step {antecedent}")]
    NotTheImplication { referenced: usize, antecedent: usize },
    #[error("conclusion of modus ponens does not match the consequent of step {referenced}")]
    WrongConclusion { referenced: usize },
    #[error("a D2+ conclusion must have the shape `phi -> [Y<-y](!(psi))`")]
    D2PlusShape,
    #[error("the D2+ premise does not match, expected `{expected}`")]
    D2PlusPremise { expected: String },
    #[error("bad D2+ value set: {0}")]
    D2PlusValues(String),
}

/// A rejected derivation: the first bad step and why.
#[derive(Debug, Clone, Error)]
pub struct BadStep {
    /// Zero-based index of the offending step.
    pub index: usize,
    pub reason: StepError,
}

impl fmt::Display for BadStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.index + 1, self.reason)
    }
}

fn fail<T>(index: usize, reason: StepError) -> Result<T, BadStep> {
    Err(BadStep { index, reason })
}

/// Checks every step; on success returns the theorem (the final formula).
pub fn check_derivation(d: &Derivation) -> Result<CausalFormula, BadStep> {
    if d.steps.is_empty() {
        return fail(0, StepError::Empty);
    }
    for (index, step) in d.steps.iter().enumerate() {
        if let Err(e) = crate::lang::well_formed(&d.sig, &step.formula, WfMode::AllowedOnly) {
            return fail(index, StepError::NotWellFormed(e));
        }
        match &step.justification {
            Justification::Taut => {
                if !d.system.has_schema(SchemaId::D0) {
                    return fail(index, StepError::SchemaNotInSystem(SchemaId::D0));
                }
                match taut_causal(&step.formula) {
                    Ok(true) => {}
                    Ok(false) => return fail(index, StepError::NotATautology),
                    Err(e) => return fail(index, StepError::TautologyCheck(e)),
                }
            }
            Justification::Axiom(params) => {
                let schema = params.schema();
                if !d.system.has_schema(schema) {
                    return fail(index, StepError::SchemaNotInSystem(schema));
                }
                let expected = match instantiate(&d.sig, params) {
                    Ok(f) => f,
                    Err(e) => return fail(index, StepError::Instantiate(e)),
                };
                if expected != step.formula {
                    return fail(
                        index,
                        StepError::FormulaMismatch { expected: print_formula(&expected) },
                    );
                }
            }
            Justification::Mp { antecedent, implication } => {
                if !d.system.has_rule(RuleId::ModusPonens) {
                    return fail(index, StepError::RuleNotInSystem("MP"));
                }
                for &r in [antecedent, implication].iter() {
                    if *r >= index {
                        return fail(index, StepError::BadReference { referenced: *r });
                    }
                }
                let CausalFormula::Implies(lhs, rhs) = &d.steps[*implication].formula else {
                    return fail(
                        index,
                        StepError::NotTheImplication {
                            referenced: *implication,
                            antecedent: *antecedent,
                        },
                    );
                };
                if **lhs != d.steps[*antecedent].formula {
                    return fail(
                        index,
                        StepError::NotTheImplication {
                            referenced: *implication,
                            antecedent: *antecedent,
                        },
                    );
                }
                if **rhs != step.formula {
                    return fail(index, StepError::WrongConclusion { referenced: *implication });
                }
            }
            Justification::D2Plus { premise, var, values } => {
                if !d.system.has_rule(RuleId::D2Plus) {
                    return fail(index, StepError::RuleNotInSystem("D2+"));
                }
                if *premise >= index {
                    return fail(index, StepError::BadReference { referenced: *premise });
                }
                if let Err(reason) =
                    check_d2plus(&d.sig, &d.steps[*premise].formula, &step.formula, *var, values)
                {
                    return fail(index, reason);
                }
            }
        }
    }
    Ok(d.steps.last().unwrap().formula.clone())
}

/// Expected D2+ premise for a conclusion `phi -> [b](!(psi))`.
pub(crate) fn d2plus_premise(
    sig: &Signature,
    phi: &CausalFormula,
    bindings: &crate::lang::Bindings,
    psi: &Event,
    var: VarId,
    values: &[ValIx],
) -> CausalFormula {
    phi.clone().implies(CausalFormula::conj(values.iter().map(|&x| {
        CausalFormula::Box(
            bindings.clone(),
            psi.clone().implies(Event::prim_ix(sig, var, x).not()),
        )
    })))
}

fn check_d2plus(
    sig: &Signature,
    premise: &CausalFormula,
    conclusion: &CausalFormula,
    var: VarId,
    values: &[ValIx],
) -> Result<(), StepError> {
    let CausalFormula::Implies(phi, boxed) = conclusion else {
        return Err(StepError::D2PlusShape);
    };
    let CausalFormula::Box(bindings, Event::Not(psi)) = &**boxed else {
        return Err(StepError::D2PlusShape);
    };
    if !sig.is_endo(var) {
        return Err(StepError::D2PlusValues(format!(
            "`{}` is not endogenous",
            sig.var(var).name()
        )));
    }
    let range = sig.var(var).range().len() as ValIx;
    let mut sorted = values.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != values.len() || sorted != values {
        return Err(StepError::D2PlusValues("values must be distinct and ascending".into()));
    }
    if values.is_empty() {
        return Err(StepError::D2PlusValues("value set is empty".into()));
    }
    if values.iter().any(|&x| x >= range) {
        return Err(StepError::D2PlusValues(format!(
            "value out of range for `{}`",
            sig.var(var).name()
        )));
    }
    // mentioned values of `var` in `phi -> [b](psi)`
    let probe = (**phi).clone().implies(CausalFormula::Box(bindings.clone(), (**psi).clone()));
    let mut mentioned_tokens = Vec::new();
    probe.mentioned_values(sig.var(var).name(), &mut mentioned_tokens);
    let mentioned: Vec<ValIx> = mentioned_tokens
        .iter()
        .filter_map(|t| sig.var(var).value_index(t))
        .collect();
    for &x in &mentioned {
        if !values.contains(&x) {
            return Err(StepError::D2PlusValues(format!(
                "must contain the mentioned value `{}`",
                sig.render_value(var, x)
            )));
        }
    }
    let unmentioned_exists = (0..range).any(|x| !mentioned.contains(&x));
    if unmentioned_exists && values.iter().all(|x| mentioned.contains(x)) {
        return Err(StepError::D2PlusValues(
            "must contain some value not mentioned in the formula".into(),
        ));
    }
    let expected = d2plus_premise(sig, phi, bindings, psi, var, values);
    if expected != *premise {
        return Err(StepError::D2PlusPremise { expected: print_formula(&expected) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Intervention;

    fn one_var() -> Arc<Signature> {
        crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap()
    }

    #[test]
    fn single_step_d4_is_accepted() {
        let sig = one_var();
        let int = Intervention::new(&sig, &[("X", "1")]).unwrap();
        let formula = instantiate(&sig, &SchemaParams::D4 { int: int.clone() }).unwrap();
        let d = Derivation {
            system: AxiomSystem::ax_plus_basic(),
            sig: sig.clone(),
            steps: vec![Step {
                formula: formula.clone(),
                justification: Justification::Axiom(SchemaParams::D4 { int }),
            }],
        };
        assert_eq!(check_derivation(&d).unwrap(), formula);
    }

    #[test]
    fn axiom_formula_must_match_the_instance() {
        let sig = one_var();
        let int = Intervention::new(&sig, &[("X", "1")]).unwrap();
        let d = Derivation {
            system: AxiomSystem::ax_plus_basic(),
            sig: sig.clone(),
            steps: vec![Step {
                formula: crate::lang::parse_formula("[X<-1](X=0)", &sig).unwrap(),
                justification: Justification::Axiom(SchemaParams::D4 { int }),
            }],
        };
        let err = check_derivation(&d).unwrap_err();
        assert_eq!(err.index, 0);
        assert!(matches!(err.reason, StepError::FormulaMismatch { .. }));
    }

    #[test]
    fn mp_references_must_point_backwards_and_match() {
        let sig = one_var();
        let taut = crate::lang::parse_formula("[](true) | !([](true))", &sig).unwrap();
        let d = Derivation {
            system: AxiomSystem::ax_plus_basic(),
            sig: sig.clone(),
            steps: vec![Step {
                formula: taut,
                justification: Justification::Mp { antecedent: 0, implication: 0 },
            }],
        };
        let err = check_derivation(&d).unwrap_err();
        assert!(matches!(err.reason, StepError::BadReference { .. }));
    }

    #[test]
    fn schemas_outside_the_system_are_rejected() {
        let sig = one_var();
        let int = Intervention::null();
        let formula =
            instantiate(&sig, &SchemaParams::D10a { int: int.clone() }).unwrap();
        let d = Derivation {
            system: AxiomSystem::ax_plus_basic(),
            sig,
            steps: vec![Step {
                formula,
                justification: Justification::Axiom(SchemaParams::D10a { int }),
            }],
        };
        let err = check_derivation(&d).unwrap_err();
        assert!(matches!(err.reason, StepError::SchemaNotInSystem(SchemaId::D10a)));
    }
}
