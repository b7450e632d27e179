//! Classifiers for the model properties behind the axiom sets: coherence,
//! the two acyclicity conditions, and outcome-count bounds.
//!
//! Coherence: an outcome of `X <- x` that already satisfies `Y = y` must
//! survive as an outcome of `X <- x; Y <- y`. Only pairs of *allowed*
//! interventions are constrained.
//!
//! Acyclicity asks, per context, for a total order of the endogenous
//! variables under which intervening on a variable cannot change what is
//! possible for earlier variables:
//!
//! * strong ([`acyc1`]): the outcome sets of `I; X <- x` and `I; X <- x'`
//!   have equal restrictions to *all* variables before `X` jointly;
//! * weak ([`acyc2`]): the restrictions agree on each earlier variable
//!   *separately*.
//!
//! The strong condition implies the weak one; they agree on models derived
//! from structural equations but differ on general outcome maps.
//!
//! Both searches peel maxima: a variable may be placed last among a set
//! exactly when its condition holds against the rest, and restriction
//! equality is monotone under shrinking the earlier set, so if any witness
//! order exists, one is reachable by repeatedly extracting a valid maximum.
//! On failure, the report shows why each remaining variable cannot be
//! maximal, which pins the offending restriction mismatch.
//!
//! Where the definitions quantify over an intervention `I` combined with
//! `X <- x` and `X <- x'`, the comparison is made only when both composed
//! interventions are allowed; with only one of them expressible the set
//! equality has no reading.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::core::{
    compose_interventions, restrict, Assignment, Intervention, ModelClass, Property, Signature,
    ValIx, VarId,
};
use crate::model::{args_of, Gsem, Sem};

/// Bound on the endogenous-variable count for the ordering searches.
pub const ORDER_VAR_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("ordering search handles at most {cap} endogenous variables, got {n}")]
    TooManyVariables { n: usize, cap: usize },
}

/// A concrete coherence violation: `outcome` is in `M(u, base)` and matches
/// the extra bindings, but is missing from `M(u, extended)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub context: Assignment,
    pub base: Intervention,
    pub extended: Intervention,
    pub outcome: Assignment,
}

/// First coherence violation in canonical scan order, if any.
pub fn coherence_witness(m: &Gsem) -> Option<CoherenceWitness> {
    let sig = m.sig();
    for ctx in 0..sig.n_contexts() {
        for (bix, base) in sig.allowed().iter().enumerate() {
            for ext in sig.allowed() {
                if base == ext || !base.extended_by(ext) {
                    continue;
                }
                for v in m.outcomes_by_index(ctx, bix) {
                    if v.matches(ext) && !m.outcomes(&sig.context(ctx), ext).unwrap().contains(v) {
                        return Some(CoherenceWitness {
                            context: sig.context(ctx),
                            base: base.clone(),
                            extended: ext.clone(),
                            outcome: v.clone(),
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn is_coherent(m: &Gsem) -> bool {
    coherence_witness(m).is_none()
}

/// Why a variable could not be placed as the maximum of the remaining set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFailure {
    pub var: VarId,
    /// The earlier variables the restrictions were compared on.
    pub earlier: Vec<VarId>,
    pub base: Intervention,
    pub low: ValIx,
    pub high: ValIx,
    /// Restriction of the outcomes of `base; var <- low` to `earlier`.
    pub lhs: Vec<Assignment>,
    /// Restriction of the outcomes of `base; var <- high` to `earlier`.
    pub rhs: Vec<Assignment>,
}

/// The point where the ordering search got stuck in one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderFailure {
    pub context: Assignment,
    /// Maxima already peeled off, in placement order (latest first).
    pub placed: Vec<VarId>,
    /// One failure per remaining candidate.
    pub candidates: Vec<CandidateFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcyclicityVerdict {
    /// One witness order per context (earliest variable first).
    Acyclic { orders: Vec<Vec<VarId>> },
    Cyclic { failure: OrderFailure },
}

impl AcyclicityVerdict {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, AcyclicityVerdict::Acyclic { .. })
    }
}

fn restriction(
    sig: &Signature,
    outcomes: &crate::model::OutcomeSet,
    vars: &[VarId],
) -> BTreeSet<Assignment> {
    outcomes.iter().map(|v| restrict(sig, v, vars).expect("outcomes are total")).collect()
}

/// Checks the per-variable condition of one acyclicity notion: for every
/// allowed pair `base; var <- low`, `base; var <- high`, the outcome
/// restrictions to `earlier` must agree — jointly for Acyc1, per variable
/// for Acyc2.
fn max_candidate_failure(
    m: &Gsem,
    ctx: usize,
    var: VarId,
    earlier: &[VarId],
    joint: bool,
) -> Option<CandidateFailure> {
    let sig = m.sig();
    let groups: Vec<Vec<VarId>> = if joint {
        vec![earlier.to_vec()]
    } else {
        earlier.iter().map(|&y| vec![y]).collect()
    };
    let n = sig.var(var).range().len() as ValIx;
    for base in sig.allowed() {
        for low in 0..n {
            let left = compose_interventions(base, &Intervention::from_pairs(vec![(var, low)]));
            let Some(lix) = sig.allowed_index(&left) else { continue };
            for high in low + 1..n {
                let right =
                    compose_interventions(base, &Intervention::from_pairs(vec![(var, high)]));
                let Some(rix) = sig.allowed_index(&right) else { continue };
                for group in &groups {
                    let lhs = restriction(sig, m.outcomes_by_index(ctx, lix), group);
                    let rhs = restriction(sig, m.outcomes_by_index(ctx, rix), group);
                    if lhs != rhs {
                        return Some(CandidateFailure {
                            var,
                            earlier: group.clone(),
                            base: base.clone(),
                            low,
                            high,
                            lhs: lhs.into_iter().collect(),
                            rhs: rhs.into_iter().collect(),
                        });
                    }
                }
            }
        }
    }
    None
}

fn order_search(m: &Gsem, joint: bool) -> Result<AcyclicityVerdict, PropError> {
    let sig = m.sig();
    if sig.n_endo() > ORDER_VAR_CAP {
        return Err(PropError::TooManyVariables { n: sig.n_endo(), cap: ORDER_VAR_CAP });
    }
    let mut orders = Vec::with_capacity(sig.n_contexts());
    for ctx in 0..sig.n_contexts() {
        let mut remaining: Vec<VarId> = sig.endo_ids().collect();
        let mut placed: Vec<VarId> = Vec::new();
        while !remaining.is_empty() {
            let mut failures = Vec::new();
            let mut chosen = None;
            for &cand in &remaining {
                let earlier: Vec<VarId> =
                    remaining.iter().copied().filter(|&v| v != cand).collect();
                match max_candidate_failure(m, ctx, cand, &earlier, joint) {
                    None => {
                        chosen = Some(cand);
                        break;
                    }
                    Some(f) => failures.push(f),
                }
            }
            match chosen {
                Some(cand) => {
                    placed.push(cand);
                    remaining.retain(|&v| v != cand);
                }
                None => {
                    return Ok(AcyclicityVerdict::Cyclic {
                        failure: OrderFailure { context: sig.context(ctx), placed, candidates: failures },
                    })
                }
            }
        }
        placed.reverse();
        orders.push(placed);
    }
    Ok(AcyclicityVerdict::Acyclic { orders })
}

/// Strong acyclicity: joint restrictions to all earlier variables.
pub fn acyc1(m: &Gsem) -> Result<AcyclicityVerdict, PropError> {
    order_search(m, true)
}

/// Weak acyclicity: restrictions to each earlier variable separately.
pub fn acyc2(m: &Gsem) -> Result<AcyclicityVerdict, PropError> {
    order_search(m, false)
}

/// A dependence witness: the equation for `reader` reacts to `on`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemDependence {
    pub reader: VarId,
    pub on: VarId,
    /// Arguments (without `on`) at which flipping `on` changes the value.
    pub args: Assignment,
    pub low: ValIx,
    pub high: ValIx,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemAcyclicityVerdict {
    Acyclic { orders: Vec<Vec<VarId>> },
    Cyclic { context: Assignment, placed: Vec<VarId>, blockers: Vec<SemDependence> },
}

impl SemAcyclicityVerdict {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, SemAcyclicityVerdict::Acyclic { .. })
    }
}

fn dependence_witness(m: &Sem, u: &Assignment, reader: VarId, on: VarId) -> Option<SemDependence> {
    let sig = m.sig();
    let mut rest: Vec<VarId> = args_of(sig, reader);
    rest.retain(|&v| v != on && u.get(v).is_none());
    // vary the free arguments, keep the context fixed
    for free in crate::core::enumerate_assignments(sig, &rest) {
        let base = u.union(&free);
        let n = sig.var(on).range().len() as ValIx;
        for low in 0..n {
            let a1 = base.union(&Assignment::from_pairs(vec![(on, low)]));
            let v1 = m.eval(reader, &a1).expect("arguments are total");
            for high in low + 1..n {
                let a2 = base.union(&Assignment::from_pairs(vec![(on, high)]));
                let v2 = m.eval(reader, &a2).expect("arguments are total");
                if v1 != v2 {
                    return Some(SemDependence { reader, on, args: base, low, high });
                }
            }
        }
    }
    None
}

/// Equation-level acyclicity: per context, an order where every variable's
/// equation is independent of all later variables. A variable may be placed
/// last among a set when no other member's equation depends on it.
pub fn sem_acyclicity(m: &Sem) -> Result<SemAcyclicityVerdict, PropError> {
    let sig = m.sig();
    if sig.n_endo() > ORDER_VAR_CAP {
        return Err(PropError::TooManyVariables { n: sig.n_endo(), cap: ORDER_VAR_CAP });
    }
    let mut orders = Vec::with_capacity(sig.n_contexts());
    for ctx in 0..sig.n_contexts() {
        let u = sig.context(ctx);
        let mut remaining: Vec<VarId> = sig.endo_ids().collect();
        let mut placed: Vec<VarId> = Vec::new();
        while !remaining.is_empty() {
            let mut blockers = Vec::new();
            let mut chosen = None;
            for &cand in &remaining {
                let mut bad = None;
                for &other in remaining.iter().filter(|&&v| v != cand) {
                    if let Some(w) = dependence_witness(m, &u, other, cand) {
                        bad = Some(w);
                        break;
                    }
                }
                match bad {
                    None => {
                        chosen = Some(cand);
                        break;
                    }
                    Some(w) => blockers.push(w),
                }
            }
            match chosen {
                Some(cand) => {
                    placed.push(cand);
                    remaining.retain(|&v| v != cand);
                }
                None => {
                    return Ok(SemAcyclicityVerdict::Cyclic { context: u, placed, blockers })
                }
            }
        }
        placed.reverse();
        orders.push(placed);
    }
    Ok(SemAcyclicityVerdict::Acyclic { orders })
}

/// Outcome-count classification with witnesses for the failing side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub ge1: bool,
    pub le1: bool,
    /// Some (context, intervention) with an empty outcome set.
    pub empty_at: Option<(Assignment, Intervention)>,
    /// Some (context, intervention, v, v') with two distinct outcomes.
    pub multiple_at: Option<(Assignment, Intervention, Assignment, Assignment)>,
}

pub fn count_outcomes_class(m: &Gsem) -> OutcomeCounts {
    let sig = m.sig();
    let mut counts = OutcomeCounts { ge1: true, le1: true, empty_at: None, multiple_at: None };
    for ctx in 0..sig.n_contexts() {
        for (ix, int) in sig.allowed().iter().enumerate() {
            let set = m.outcomes_by_index(ctx, ix);
            if set.is_empty() && counts.empty_at.is_none() {
                counts.ge1 = false;
                counts.empty_at = Some((sig.context(ctx), int.clone()));
            }
            if set.len() > 1 && counts.multiple_at.is_none() {
                counts.le1 = false;
                let mut it = set.iter();
                let a = it.next().unwrap().clone();
                let b = it.next().unwrap().clone();
                counts.multiple_at = Some((sig.context(ctx), int.clone(), a, b));
            }
        }
    }
    counts
}

/// Membership in the class selected by `cls`: the conjunction of the chosen
/// classifiers, with `acyc` read as the strong condition.
pub fn in_class(m: &Gsem, cls: ModelClass) -> Result<bool, PropError> {
    if cls.contains(Property::Coherent) && !is_coherent(m) {
        return Ok(false);
    }
    if cls.contains(Property::Acyclic) && !acyc1(m)?.is_acyclic() {
        return Ok(false);
    }
    if cls.contains(Property::AtLeastOne) || cls.contains(Property::AtMostOne) {
        let counts = count_outcomes_class(m);
        if cls.contains(Property::AtLeastOne) && !counts.ge1 {
            return Ok(false);
        }
        if cls.contains(Property::AtMostOne) && !counts.le1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        enumerate_gsems, enumerate_sems, parse_model, sem_to_gsem, GsemBuilder, Model,
        DEFAULT_ENUM_CAP,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn shell() -> Gsem {
        let text = "\
exo U : {u0}
endo S1 : {0, 1}
endo S2 : {0, 1}
endo Z : {0, 1}
allow [S1<-1]
allow [S2<-1]

gsem {
  outcome (u0) [S1<-1] = { (S1=1, S2=1, Z=1) }
  outcome (u0) [S2<-1] = { (S1=1, S2=1, Z=0) }
}
";
        match parse_model(text).unwrap() {
            Model::Gsem(g) => g,
            _ => unreachable!(),
        }
    }

    /// Binary A, B, C constrained by parity: single-variable interventions
    /// leave the two parity-consistent completions.
    pub(crate) fn switching_values() -> Gsem {
        let text = "\
exo U : {u0}
endo A : {0, 1}
endo B : {0, 1}
endo C : {0, 1}
allow [A<-0]
allow [A<-1]
allow [B<-0]
allow [B<-1]
allow [C<-0]
allow [C<-1]

gsem {
  outcome (u0) [A<-0] = { (A=0, B=0, C=0), (A=0, B=1, C=1) }
  outcome (u0) [A<-1] = { (A=1, B=1, C=0), (A=1, B=0, C=1) }
  outcome (u0) [B<-0] = { (A=0, B=0, C=0), (A=1, B=0, C=1) }
  outcome (u0) [B<-1] = { (A=1, B=1, C=0), (A=0, B=1, C=1) }
  outcome (u0) [C<-0] = { (A=0, B=0, C=0), (A=1, B=1, C=0) }
  outcome (u0) [C<-1] = { (A=0, B=1, C=1), (A=1, B=0, C=1) }
}
";
        match parse_model(text).unwrap() {
            Model::Gsem(g) => g,
            _ => unreachable!(),
        }
    }

    fn xy_sig() -> Arc<Signature> {
        crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nendo Y : {0,1}\nallow *\n").unwrap()
    }

    #[test]
    fn shell_game_is_vacuously_coherent_with_unique_outcomes() {
        let g = shell();
        assert!(is_coherent(&g));
        let counts = count_outcomes_class(&g);
        assert!(counts.ge1 && counts.le1);
    }

    #[test]
    fn hand_built_violation_produces_a_witness() {
        let sig =
            crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nendo Y : {0,1}\nallow []\nallow [Y<-0]\n")
                .unwrap();
        let u = sig.context(0);
        let v00 = Assignment::new(&sig, &[("X", "0"), ("Y", "0")]).unwrap();
        let mut b = GsemBuilder::new(sig.clone());
        b.set(&u, &Intervention::null(), [v00.clone()]).unwrap();
        b.set(&u, &Intervention::new(&sig, &[("Y", "0")]).unwrap(), []).unwrap();
        let g = b.finish().unwrap();
        let w = coherence_witness(&g).expect("incoherent by construction");
        assert_eq!(w.outcome, v00);
        assert!(w.base.is_null());
    }

    #[test]
    fn sem_derived_gsems_are_coherent_exhaustively() {
        let sig = xy_sig();
        for m in enumerate_sems(&sig, DEFAULT_ENUM_CAP).unwrap() {
            assert!(is_coherent(&sem_to_gsem(&m)));
        }
    }

    #[test]
    fn switching_values_separates_the_two_acyclicity_notions() {
        let g = switching_values();
        let strong = acyc1(&g).unwrap();
        assert!(!strong.is_acyclic());
        let AcyclicityVerdict::Cyclic { failure } = &strong else { unreachable!() };
        // every candidate is blocked at the very first peel
        assert!(failure.placed.is_empty());
        assert_eq!(failure.candidates.len(), 3);
        let sig = g.sig();
        let c = sig.var_id("C").unwrap();
        let cand = failure.candidates.iter().find(|f| f.var == c).unwrap();
        let lhs: Vec<String> = cand.lhs.iter().map(|a| sig.render_assignment(a)).collect();
        let rhs: Vec<String> = cand.rhs.iter().map(|a| sig.render_assignment(a)).collect();
        assert_eq!(lhs, vec!["(A=0, B=0)", "(A=1, B=1)"]);
        assert_eq!(rhs, vec!["(A=0, B=1)", "(A=1, B=0)"]);

        assert!(acyc2(&g).unwrap().is_acyclic());
    }

    #[test]
    fn single_variable_models_are_acyclic_when_emptiness_is_stable() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        for g in enumerate_gsems(&sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap() {
            let u = sig.context(0);
            let e0 = g.outcomes(&u, &Intervention::new(&sig, &[("X", "0")]).unwrap()).unwrap().is_empty();
            let e1 = g.outcomes(&u, &Intervention::new(&sig, &[("X", "1")]).unwrap()).unwrap().is_empty();
            assert_eq!(acyc1(&g).unwrap().is_acyclic(), e0 == e1);
        }
    }

    #[test]
    fn acyc1_implies_acyc2_on_random_models() {
        let sig = xy_sig();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut seen_acyclic = 0;
        for _ in 0..300 {
            let g = crate::model::random::random_gsem(&sig, &mut rng, crate::model::random::OutcomeShape::Any);
            if acyc1(&g).unwrap().is_acyclic() {
                seen_acyclic += 1;
                assert!(acyc2(&g).unwrap().is_acyclic());
            }
        }
        assert!(seen_acyclic > 0);
    }

    #[test]
    fn sem_order_search_examples() {
        let sig = xy_sig();
        let x = sig.var_id("X").unwrap();
        let y = sig.var_id("Y").unwrap();
        // X = 0, Y = X: acyclic with X before Y
        let m = crate::model::Sem::from_fn(sig.clone(), |t, args| {
            if t == x {
                0
            } else {
                args.get(x).unwrap()
            }
        })
        .unwrap();
        let verdict = sem_acyclicity(&m).unwrap();
        let SemAcyclicityVerdict::Acyclic { orders } = &verdict else { panic!() };
        assert_eq!(orders[0], vec![x, y]);

        // X = Y, Y = X: both orders blocked
        let m = crate::model::Sem::from_fn(sig.clone(), |t, args| {
            if t == x {
                args.get(y).unwrap()
            } else {
                args.get(x).unwrap()
            }
        })
        .unwrap();
        assert!(!sem_acyclicity(&m).unwrap().is_acyclic());
    }

    #[test]
    fn equation_acyclicity_agrees_with_acyc1_on_derived_models() {
        let sig = xy_sig();
        for m in enumerate_sems(&sig, DEFAULT_ENUM_CAP).unwrap() {
            let g = sem_to_gsem(&m);
            let sem_side = sem_acyclicity(&m).unwrap().is_acyclic();
            let gsem_side = acyc1(&g).unwrap().is_acyclic();
            assert_eq!(
                sem_side, gsem_side,
                "disagreement on {}",
                crate::model::render_sem(&m)
            );
        }
    }

    #[test]
    fn acyclic_sems_have_unique_outcomes() {
        let sig = xy_sig();
        for m in enumerate_sems(&sig, DEFAULT_ENUM_CAP).unwrap() {
            if sem_acyclicity(&m).unwrap().is_acyclic() {
                let counts = count_outcomes_class(&sem_to_gsem(&m));
                assert!(counts.ge1 && counts.le1);
            }
        }
    }

    #[test]
    fn class_membership_is_the_conjunction_of_classifiers() {
        let g = shell();
        assert!(in_class(&g, ModelClass::empty()).unwrap());
        assert!(in_class(&g, ModelClass::parse("coh,ge1,le1").unwrap()).unwrap());
        let sv = switching_values();
        assert!(!in_class(&sv, ModelClass::parse("acyc").unwrap()).unwrap());
        assert!(!in_class(&sv, ModelClass::parse("le1").unwrap()).unwrap());
        assert!(in_class(&sv, ModelClass::parse("ge1").unwrap()).unwrap());
    }
}
