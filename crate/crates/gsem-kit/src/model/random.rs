//! Seeded random model generators.
//!
//! The harness and the sampled decision mode draw models from here. The
//! coherent generator builds outcome maps in ascending order of the binding
//! maps, inheriting every outcome that a smaller allowed intervention forces
//! on a larger one, so coherence holds by construction rather than by
//! rejection.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::core::{
    assignment_rank, enumerate_assignments, restrict, Assignment, Signature, ValIx, VarId,
};

use super::{args_of, Gsem, OutcomeSet, Sem};

/// How outcome sets are sampled per (context, intervention) slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeShape {
    /// Any subset of the effective assignments.
    Any,
    /// Any nonempty subset.
    NonEmpty,
    /// Exactly one effective assignment.
    Unique,
}

/// A random GSEM; effectiveness holds by construction.
pub fn random_gsem<R: Rng>(sig: &Arc<Signature>, rng: &mut R, shape: OutcomeShape) -> Gsem {
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let mut grid = Vec::with_capacity(sig.n_contexts());
    for _ctx in 0..sig.n_contexts() {
        let mut row = Vec::with_capacity(sig.allowed().len());
        for int in sig.allowed() {
            let effective: Vec<Assignment> =
                enumerate_assignments(sig, &endo).filter(|v| v.matches(int)).collect();
            let set: OutcomeSet = match shape {
                OutcomeShape::Any => {
                    effective.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
                }
                OutcomeShape::NonEmpty => {
                    let mut s: OutcomeSet =
                        effective.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                    if s.is_empty() {
                        s.insert(effective.choose(rng).expect("ranges are nonempty").clone());
                    }
                    s
                }
                OutcomeShape::Unique => {
                    let mut s = OutcomeSet::new();
                    s.insert(effective.choose(rng).expect("ranges are nonempty").clone());
                    s
                }
            };
            row.push(set);
        }
        grid.push(row);
    }
    Gsem { sig: sig.clone(), outcomes: grid }
}

/// A random SEM: every equation table entry drawn uniformly.
pub fn random_sem<R: Rng>(sig: &Arc<Signature>, rng: &mut R) -> Sem {
    let tables = sig
        .endo_ids()
        .map(|x| {
            let slots: usize = args_of(sig, x).iter().map(|&v| sig.var(v).range().len()).product();
            let n = sig.var(x).range().len() as ValIx;
            (0..slots).map(|_| rng.gen_range(0..n)).collect()
        })
        .collect();
    Sem { sig: sig.clone(), tables }
}

/// A random acyclic SEM: a random total order of the endogenous variables,
/// with each equation depending only on the exogenous variables and the
/// variables earlier in the order.
pub fn random_acyclic_sem<R: Rng>(sig: &Arc<Signature>, rng: &mut R) -> Sem {
    let mut order: Vec<VarId> = sig.endo_ids().collect();
    order.shuffle(rng);
    // pre-draw one reduced table per variable over (exo + earlier) only
    let mut reduced: Vec<(Vec<VarId>, Vec<ValIx>)> = Vec::new();
    let mut earlier: Vec<VarId> = sig.exo_ids().collect();
    let mut reduced_of: Vec<usize> = vec![0; sig.n_vars()];
    for &x in &order {
        let deps = earlier.clone();
        let slots: usize = deps.iter().map(|&v| sig.var(v).range().len()).product();
        let n = sig.var(x).range().len() as ValIx;
        let table: Vec<ValIx> = (0..slots).map(|_| rng.gen_range(0..n)).collect();
        reduced_of[x.0 as usize] = reduced.len();
        reduced.push((deps, table));
        earlier.push(x);
    }
    Sem::from_fn(sig.clone(), |x, args| {
        let (deps, table) = &reduced[reduced_of[x.0 as usize]];
        let sub = restrict(sig, args, deps).expect("args are total over the other variables");
        table[assignment_rank(sig, deps, &sub).expect("restriction is total")]
    })
    .expect("tables are total and in range by construction")
}

/// A random coherent GSEM. Outcome sets are built in ascending order of the
/// intervention binding maps: each set inherits every outcome of a smaller
/// allowed intervention that already matches the extra bindings, plus
/// independently sampled extras; with `force_nonempty` an empty set gets one
/// sampled outcome before its successors are computed.
pub fn random_coherent_gsem<R: Rng>(
    sig: &Arc<Signature>,
    rng: &mut R,
    extra_prob: f64,
    force_nonempty: bool,
) -> Gsem {
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let n_int = sig.allowed().len();
    let mut by_size: Vec<usize> = (0..n_int).collect();
    by_size.sort_by_key(|&ix| sig.allowed()[ix].len());
    let mut grid: Vec<Vec<Option<OutcomeSet>>> = vec![vec![None; n_int]; sig.n_contexts()];
    for ctx in 0..sig.n_contexts() {
        for &ix in &by_size {
            let int = &sig.allowed()[ix];
            let effective: Vec<Assignment> =
                enumerate_assignments(sig, &endo).filter(|v| v.matches(int)).collect();
            let mut set = OutcomeSet::new();
            for (jx, smaller) in sig.allowed().iter().enumerate() {
                if jx == ix || !smaller.extended_by(int) {
                    continue;
                }
                if let Some(built) = &grid[ctx][jx] {
                    for v in built {
                        if v.matches(int) {
                            set.insert(v.clone());
                        }
                    }
                }
            }
            for v in &effective {
                if rng.gen_bool(extra_prob) {
                    set.insert(v.clone());
                }
            }
            if force_nonempty && set.is_empty() {
                set.insert(effective.choose(rng).expect("ranges are nonempty").clone());
            }
            grid[ctx][ix] = Some(set);
        }
    }
    let outcomes: Vec<Vec<OutcomeSet>> =
        grid.into_iter().map(|row| row.into_iter().map(Option::unwrap).collect()).collect();
    Gsem { sig: sig.clone(), outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sem_to_gsem;
    use crate::properties;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig2() -> Arc<Signature> {
        crate::core::parse_signature("exo U : {u0}\nendo A : {0,1}\nendo B : {0,1}\nallow *\n").unwrap()
    }

    #[test]
    fn coherent_generator_is_coherent() {
        let sig = sig2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = random_coherent_gsem(&sig, &mut rng, 0.3, false);
            assert!(properties::is_coherent(&g));
        }
    }

    #[test]
    fn acyclic_generator_produces_acyclic_unique_outcome_models() {
        let sig = sig2();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let m = random_acyclic_sem(&sig, &mut rng);
            assert!(properties::sem_acyclicity(&m).unwrap().is_acyclic());
            let g = sem_to_gsem(&m);
            let counts = properties::count_outcomes_class(&g);
            assert!(counts.ge1 && counts.le1);
            assert!(properties::acyc1(&g).unwrap().is_acyclic());
        }
    }

    #[test]
    fn shaped_sampling_respects_shape() {
        let sig = sig2();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let g = random_gsem(&sig, &mut rng, OutcomeShape::Unique);
            let counts = properties::count_outcomes_class(&g);
            assert!(counts.ge1 && counts.le1);
            let g = random_gsem(&sig, &mut rng, OutcomeShape::NonEmpty);
            assert!(properties::count_outcomes_class(&g).ge1);
        }
    }
}
