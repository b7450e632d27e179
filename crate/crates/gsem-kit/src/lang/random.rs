//! Seeded random generators for events, formulas, and verified tautologies.
//!
//! Used by the parser round-trip suite and by the axiom harness to sample
//! the tautology families behind the propositional schemas. Everything is
//! deterministic given the caller's RNG.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::core::{Signature, ValIx, VarId};

use super::{taut_causal, taut_event, Bindings, CausalFormula, Event};

fn random_prim<R: Rng>(sig: &Signature, rng: &mut R) -> Event {
    let endo: Vec<VarId> = sig.endo_ids().collect();
    match endo.choose(rng) {
        None => Event::True,
        Some(&var) => {
            let val = rng.gen_range(0..sig.var(var).range().len()) as ValIx;
            Event::prim_ix(sig, var, val)
        }
    }
}

pub fn random_event<R: Rng>(sig: &Signature, rng: &mut R, depth: usize) -> Event {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => Event::True,
            1 => Event::False,
            _ => random_prim(sig, rng),
        };
    }
    match rng.gen_range(0..10) {
        0 | 1 => random_event(sig, rng, depth - 1).not(),
        2 | 3 => random_event(sig, rng, depth - 1).and(random_event(sig, rng, depth - 1)),
        4 | 5 => random_event(sig, rng, depth - 1).or(random_event(sig, rng, depth - 1)),
        6 => random_event(sig, rng, depth - 1).implies(random_event(sig, rng, depth - 1)),
        _ => random_event(sig, rng, 0),
    }
}

fn random_bindings<R: Rng>(sig: &Signature, rng: &mut R) -> Bindings {
    match sig.allowed().choose(rng) {
        None => Bindings::none(),
        Some(int) => Bindings::from_intervention(sig, int),
    }
}

/// A random well-formed formula whose interventions are all allowed.
pub fn random_formula<R: Rng>(sig: &Signature, rng: &mut R, depth: usize) -> CausalFormula {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => CausalFormula::True,
            1 => CausalFormula::False,
            n => {
                let b = random_bindings(sig, rng);
                let e = random_event(sig, rng, 1);
                if n % 2 == 0 {
                    CausalFormula::Box(b, e)
                } else {
                    CausalFormula::Diamond(b, e)
                }
            }
        };
    }
    match rng.gen_range(0..10) {
        0 | 1 => random_formula(sig, rng, depth - 1).not(),
        2 | 3 => random_formula(sig, rng, depth - 1).and(random_formula(sig, rng, depth - 1)),
        4 | 5 => random_formula(sig, rng, depth - 1).or(random_formula(sig, rng, depth - 1)),
        6 => random_formula(sig, rng, depth - 1).implies(random_formula(sig, rng, depth - 1)),
        _ => random_formula(sig, rng, 0),
    }
}

fn event_template<R: Rng>(rng: &mut R, a: Event, b: Event, c: Event) -> Event {
    match rng.gen_range(0..7) {
        0 => a.clone().or(a.not()),
        1 => a.clone().implies(b.implies(a)),
        2 => a
            .clone()
            .implies(b.clone().implies(c.clone()))
            .implies(a.clone().implies(b.clone()).implies(a.implies(c))),
        3 => a.clone().implies(b.clone()).implies(b.not().implies(a.not())),
        4 => a.clone().and(b).implies(a),
        5 => a.clone().implies(a.or(b)),
        _ => a
            .clone()
            .and(b.clone().or(c.clone()))
            .implies(a.clone().and(b).or(a.and(c))),
    }
}

/// A random propositional tautology over primitive-event atoms, verified by
/// truth table before being returned.
pub fn random_tautology_event<R: Rng>(sig: &Signature, rng: &mut R, depth: usize) -> Event {
    for _ in 0..8 {
        let candidate = random_event(sig, rng, depth);
        if taut_event(&candidate).unwrap_or(false) {
            return candidate;
        }
    }
    let a = random_event(sig, rng, depth.saturating_sub(1));
    let b = random_event(sig, rng, depth.saturating_sub(1));
    let c = random_event(sig, rng, 1);
    let t = event_template(rng, a, b, c);
    debug_assert!(taut_event(&t).unwrap_or(true));
    t
}

fn formula_template<R: Rng>(rng: &mut R, a: CausalFormula, b: CausalFormula, c: CausalFormula) -> CausalFormula {
    match rng.gen_range(0..7) {
        0 => a.clone().or(a.not()),
        1 => a.clone().implies(b.implies(a)),
        2 => a
            .clone()
            .implies(b.clone().implies(c.clone()))
            .implies(a.clone().implies(b.clone()).implies(a.implies(c))),
        3 => a.clone().implies(b.clone()).implies(b.not().implies(a.not())),
        4 => a.clone().and(b).implies(a),
        5 => a.clone().implies(a.or(b)),
        _ => a
            .clone()
            .and(b.clone().or(c.clone()))
            .implies(a.clone().and(b).or(a.and(c))),
    }
}

/// A random substitution instance of a propositional tautology at the causal
/// level, verified over its modal atoms.
pub fn random_tautology_formula<R: Rng>(sig: &Signature, rng: &mut R, depth: usize) -> CausalFormula {
    for _ in 0..8 {
        let candidate = random_formula(sig, rng, depth);
        if taut_causal(&candidate).unwrap_or(false) {
            return candidate;
        }
    }
    let a = random_formula(sig, rng, depth.saturating_sub(1));
    let b = random_formula(sig, rng, depth.saturating_sub(1));
    let c = random_formula(sig, rng, 1);
    let t = formula_template(rng, a, b, c);
    debug_assert!(taut_causal(&t).unwrap_or(true));
    t
}
