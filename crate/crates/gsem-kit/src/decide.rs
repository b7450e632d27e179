//! Brute-force validity and satisfiability over finite signatures, relative
//! to a model class.
//!
//! A formula is valid for a class when it holds at every context of every
//! model in the class; satisfiability is its dual through negation. Both are
//! decided by walking the positional enumeration of models, so witnesses —
//! the first countermodel or the first satisfying model, in enumeration
//! order — are reproducible across runs and platforms.
//!
//! Exceeding the enumeration cap is a first-class outcome carrying the
//! exact model count, never a silent truncation. The sampled mode trades
//! exhaustiveness for reach and is labeled accordingly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::core::{Assignment, ModelClass, Property, Signature};
use crate::lang::CausalFormula;
use crate::model::random::{random_acyclic_sem, random_coherent_gsem, random_gsem, OutcomeShape};
use crate::model::{enumerate_gsems, enumerate_sems, sem_to_gsem, Gsem, ModelError};
use crate::properties::in_class;
use crate::semantics::{CompiledFormula, SemError};

#[derive(Debug, Clone)]
pub enum ValidityOutcome {
    Valid,
    /// The first countermodel in enumeration order, with a falsifying
    /// context.
    Invalid { model: Gsem, context: Assignment },
    CapExceeded { required: u128, cap: u128 },
}

impl ValidityOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityOutcome::Valid)
    }
}

#[derive(Debug, Clone)]
pub enum SatOutcome {
    /// The first satisfying model in enumeration order, with a context.
    Sat { model: Gsem, context: Assignment },
    Unsat,
    CapExceeded { required: u128, cap: u128 },
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat { .. })
    }
}

/// Valid iff the formula holds in every model of the class over `sig`.
pub fn validity(
    f: &CausalFormula,
    sig: &Arc<Signature>,
    cls: ModelClass,
    cap: u128,
) -> Result<ValidityOutcome, SemError> {
    let compiled = CompiledFormula::compile(sig, f)?;
    let models = match enumerate_gsems(sig, cls, cap) {
        Ok(iter) => iter,
        Err(ModelError::CapExceeded { required, cap }) => {
            return Ok(ValidityOutcome::CapExceeded { required, cap })
        }
        Err(e) => return Err(SemError::Model(e)),
    };
    for m in models {
        if let Some(ctx) = compiled.first_failing_context(&m) {
            let context = sig.context(ctx);
            return Ok(ValidityOutcome::Invalid { model: m, context });
        }
    }
    Ok(ValidityOutcome::Valid)
}

/// Satisfiable iff the formula holds at some context of some model of the
/// class; the dual of [`validity`] through negation.
pub fn satisfiable(
    f: &CausalFormula,
    sig: &Arc<Signature>,
    cls: ModelClass,
    cap: u128,
) -> Result<SatOutcome, SemError> {
    let compiled = CompiledFormula::compile(sig, f)?;
    let models = match enumerate_gsems(sig, cls, cap) {
        Ok(iter) => iter,
        Err(ModelError::CapExceeded { required, cap }) => {
            return Ok(SatOutcome::CapExceeded { required, cap })
        }
        Err(e) => return Err(SemError::Model(e)),
    };
    for m in models {
        for ctx in 0..sig.n_contexts() {
            if compiled.eval(&m, ctx) {
                let context = sig.context(ctx);
                return Ok(SatOutcome::Sat { model: m, context });
            }
        }
    }
    Ok(SatOutcome::Unsat)
}

/// Validity over the structural-equations models of the signature instead
/// of a class of outcome maps: every SEM is solved into its outcome map and
/// checked there.
pub fn sem_validity(
    f: &CausalFormula,
    sig: &Arc<Signature>,
    cap: u128,
) -> Result<ValidityOutcome, SemError> {
    let compiled = CompiledFormula::compile(sig, f)?;
    let sems = match enumerate_sems(sig, cap) {
        Ok(iter) => iter,
        Err(ModelError::CapExceeded { required, cap }) => {
            return Ok(ValidityOutcome::CapExceeded { required, cap })
        }
        Err(e) => return Err(SemError::Model(e)),
    };
    for sem in sems {
        let g = sem_to_gsem(&sem);
        if let Some(ctx) = compiled.first_failing_context(&g) {
            let context = sig.context(ctx);
            return Ok(ValidityOutcome::Invalid { model: g, context });
        }
    }
    Ok(ValidityOutcome::Valid)
}

/// One random model in the class, when the proposal lands inside it.
/// Proposals rotate through the generators that can reach the class:
/// acyclic equation systems satisfy every property, the ascending coherent
/// generator covers coherence, and shaped subset sampling covers the rest.
fn sample_in_class<R: Rng>(sig: &Arc<Signature>, cls: ModelClass, rng: &mut R, round: usize) -> Option<Gsem> {
    let shape = match (cls.contains(Property::AtLeastOne), cls.contains(Property::AtMostOne)) {
        (true, true) => OutcomeShape::Unique,
        (true, false) => OutcomeShape::NonEmpty,
        _ => OutcomeShape::Any,
    };
    let candidate = match round % 3 {
        0 if cls.contains(Property::Acyclic) => sem_to_gsem(&random_acyclic_sem(sig, rng)),
        1 if cls.contains(Property::Coherent) => {
            random_coherent_gsem(sig, rng, 0.3, cls.contains(Property::AtLeastOne))
        }
        _ => random_gsem(sig, rng, shape),
    };
    match in_class(&candidate, cls) {
        Ok(true) => Some(candidate),
        _ => None,
    }
}

/// Result of the sampled (non-exhaustive) modes; always labeled as such.
#[derive(Debug, Clone)]
pub struct Sampled<T> {
    /// Number of proposals drawn.
    pub attempts: usize,
    /// Number of proposals that landed in the class and were tested.
    pub tested: usize,
    pub outcome: T,
}

/// Tests the formula on up to `n` sampled in-class models. `None` means no
/// counterexample was found among the tested models — not validity.
pub fn validity_sampled(
    f: &CausalFormula,
    sig: &Arc<Signature>,
    cls: ModelClass,
    n: usize,
    seed: u64,
) -> Result<Sampled<Option<(Gsem, Assignment)>>, SemError> {
    let compiled = CompiledFormula::compile(sig, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < n && attempts < n * 20 {
        attempts += 1;
        let Some(m) = sample_in_class(sig, cls, &mut rng, attempts) else { continue };
        tested += 1;
        if let Some(ctx) = compiled.first_failing_context(&m) {
            let context = sig.context(ctx);
            return Ok(Sampled { attempts, tested, outcome: Some((m, context)) });
        }
    }
    Ok(Sampled { attempts, tested, outcome: None })
}

/// Searches up to `n` sampled in-class models for a satisfying context.
pub fn satisfiable_sampled(
    f: &CausalFormula,
    sig: &Arc<Signature>,
    cls: ModelClass,
    n: usize,
    seed: u64,
) -> Result<Sampled<Option<(Gsem, Assignment)>>, SemError> {
    let compiled = CompiledFormula::compile(sig, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < n && attempts < n * 20 {
        attempts += 1;
        let Some(m) = sample_in_class(sig, cls, &mut rng, attempts) else { continue };
        tested += 1;
        for ctx in 0..sig.n_contexts() {
            if compiled.eval(&m, ctx) {
                let context = sig.context(ctx);
                return Ok(Sampled { attempts, tested, outcome: Some((m, context)) });
            }
        }
    }
    Ok(Sampled { attempts, tested, outcome: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_formula, random::random_formula};
    use crate::model::DEFAULT_ENUM_CAP;

    fn one_var() -> Arc<Signature> {
        crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap()
    }

    #[test]
    fn effectiveness_is_valid_for_the_empty_class() {
        let sig = one_var();
        let f = parse_formula("[X<-1](X=1)", &sig).unwrap();
        assert!(validity(&f, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap().is_valid());
        let g = parse_formula("[X<-0](X=1)", &sig).unwrap();
        assert!(!validity(&g, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap().is_valid());
    }

    #[test]
    fn diamond_true_needs_the_nonempty_class() {
        let sig = one_var();
        let f = parse_formula("<>(true)", &sig).unwrap();
        match validity(&f, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap() {
            ValidityOutcome::Invalid { model, .. } => {
                // the countermodel has an empty outcome set somewhere
                assert!(!crate::properties::count_outcomes_class(&model).ge1);
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
        let cls = ModelClass::parse("ge1").unwrap();
        assert!(validity(&f, &sig, cls, DEFAULT_ENUM_CAP).unwrap().is_valid());
    }

    #[test]
    fn box_diamond_conflict_is_unsat() {
        let sig = one_var();
        let f = parse_formula("[](X=0) & <>(X=1)", &sig).unwrap();
        assert!(matches!(
            satisfiable(&f, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap(),
            SatOutcome::Unsat
        ));
        let t = parse_formula("true", &sig).unwrap();
        assert!(satisfiable(&t, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap().is_sat());
    }

    #[test]
    fn validity_and_satisfiability_are_dual_on_random_formulas() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nendo Y : {0,1}\nallow []\nallow [X<-0]\nallow [X<-1]\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..30 {
            let f = random_formula(&sig, &mut rng, 2);
            let valid = validity(&f, &sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap().is_valid();
            let neg_sat = satisfiable(&f.clone().not(), &sig, ModelClass::empty(), DEFAULT_ENUM_CAP)
                .unwrap()
                .is_sat();
            assert_eq!(valid, !neg_sat);
        }
    }

    #[test]
    fn smaller_classes_validate_more_formulas() {
        let sig = one_var();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let classes: Vec<ModelClass> = ModelClass::all().collect();
        for _ in 0..20 {
            let f = random_formula(&sig, &mut rng, 2);
            for &c1 in &classes {
                for &c2 in &classes {
                    if c1.is_subset_of(c2) {
                        let v1 = validity(&f, &sig, c1, DEFAULT_ENUM_CAP).unwrap().is_valid();
                        let v2 = validity(&f, &sig, c2, DEFAULT_ENUM_CAP).unwrap().is_valid();
                        // fewer constraints means more models means fewer validities
                        if v1 {
                            assert!(v2, "valid for {c1} but not for larger-constraint {c2}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cap_exceeded_is_a_verdict_not_an_error() {
        let sig = one_var();
        let f = parse_formula("true", &sig).unwrap();
        match validity(&f, &sig, ModelClass::empty(), 3).unwrap() {
            ValidityOutcome::CapExceeded { required, cap } => {
                assert_eq!(required, 16);
                assert_eq!(cap, 3);
            }
            other => panic!("expected cap verdict, got {other:?}"),
        }
    }

    #[test]
    fn sampled_mode_finds_counterexamples() {
        let sig = one_var();
        let f = parse_formula("[](X=0)", &sig).unwrap();
        let sampled =
            validity_sampled(&f, &sig, ModelClass::parse("ge1").unwrap(), 50, 7).unwrap();
        assert!(sampled.tested > 0);
        assert!(sampled.outcome.is_some());
    }
}
