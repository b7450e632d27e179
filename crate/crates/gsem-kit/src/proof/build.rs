//! Programmatic derivation construction, and the curated corpus.
//!
//! The combinators here generate ordinary [`Derivation`] steps — nothing is
//! trusted; everything they emit still goes through [`check_derivation`].
//! The workhorses:
//!
//! * [`ProofBuilder::glue`] — purely propositional reasoning: given proved
//!   steps `p1..pk` and a target that follows from them truth-functionally,
//!   push the tautology `p1 -> (... -> (pk -> target))` and discharge it by
//!   modus ponens.
//! * [`ProofBuilder::box_mp`] — reasoning inside a box via a D7 instance.
//! * [`ProofBuilder::box_conj`] / [`ProofBuilder::box_weaken`] — combine and
//!   weaken boxed events through D8 instances.

use std::sync::Arc;

use crate::axioms::{instantiate, AxiomSystem, SchemaParams};
use crate::core::{Intervention, Signature, ValIx, VarId};
use crate::lang::{Bindings, CausalFormula, Event};

use super::{d2plus_premise, Derivation, Justification, Step};

pub struct ProofBuilder {
    sig: Arc<Signature>,
    system: AxiomSystem,
    steps: Vec<Step>,
}

impl ProofBuilder {
    pub fn new(sig: Arc<Signature>, system: AxiomSystem) -> ProofBuilder {
        ProofBuilder { sig, system, steps: Vec::new() }
    }

    pub fn formula(&self, step: usize) -> &CausalFormula {
        &self.steps[step].formula
    }

    fn push(&mut self, formula: CausalFormula, justification: Justification) -> usize {
        self.steps.push(Step { formula, justification });
        self.steps.len() - 1
    }

    /// Pushes an axiom step, instantiating the formula from the parameters.
    pub fn axiom(&mut self, params: SchemaParams) -> usize {
        let formula = instantiate(&self.sig, &params).expect("corpus parameters instantiate");
        self.push(formula, Justification::Axiom(params))
    }

    /// Pushes a tautology step (a D0 instance).
    pub fn taut(&mut self, formula: CausalFormula) -> usize {
        self.push(formula, Justification::Taut)
    }

    /// Modus ponens; the conclusion is read off the implication step.
    pub fn mp(&mut self, antecedent: usize, implication: usize) -> usize {
        let CausalFormula::Implies(_, rhs) = self.formula(implication) else {
            panic!("step {implication} is not an implication");
        };
        let conclusion = (**rhs).clone();
        self.push(conclusion, Justification::Mp { antecedent, implication })
    }

    /// Derives `target` propositionally from already-proved steps: pushes
    /// the chained tautology and discharges each premise in order.
    pub fn glue(&mut self, premises: &[usize], target: CausalFormula) -> usize {
        let chain = premises
            .iter()
            .rev()
            .fold(target, |acc, &p| self.formula(p).clone().implies(acc));
        let mut cur = self.taut(chain);
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur
    }

    /// From `[b](p)` (step) and `[b](p -> q)` (step), concludes `[b](q)`
    /// through a D7 instance.
    pub fn box_mp(&mut self, int: &Intervention, p: &Event, q: &Event, bp: usize, bpq: usize) -> usize {
        let d7 = self.axiom(SchemaParams::D7 { int: int.clone(), p: p.clone(), q: q.clone() });
        let target = CausalFormula::boxed_ix(&self.sig, int, q.clone());
        self.glue(&[d7, bp, bpq], target)
    }

    /// From `[b](e)` with `e -> e2` a propositional tautology, concludes
    /// `[b](e2)` through a D8 instance.
    pub fn box_weaken(&mut self, int: &Intervention, step: usize, e: &Event, e2: &Event) -> usize {
        let d8 = self.axiom(SchemaParams::D8 {
            int: int.clone(),
            taut: e.clone().implies(e2.clone()),
        });
        self.box_mp(int, e, e2, step, d8)
    }

    /// Combines boxed steps `[b](e1)`, `[b](e2)` into `[b](e1 & e2)`,
    /// folding left over the list.
    pub fn box_conj(&mut self, int: &Intervention, parts: &[(usize, Event)]) -> (usize, Event) {
        assert!(!parts.is_empty());
        let (mut step, mut event) = parts[0].clone();
        for (next_step, next_event) in &parts[1..] {
            // [b](a), [b](c) => [b](a & c) via a -> (c -> (a & c))
            let combined = event.clone().and(next_event.clone());
            let d8 = self.axiom(SchemaParams::D8 {
                int: int.clone(),
                taut: event.clone().implies(next_event.clone().implies(combined.clone())),
            });
            let mid = self.box_mp(
                int,
                &event,
                &next_event.clone().implies(combined.clone()),
                step,
                d8,
            );
            step = self.box_mp(int, next_event, &combined, *next_step, mid);
            event = combined;
        }
        (step, event)
    }

    /// Applies the D2+ rule to a proved premise of the matching shape.
    pub fn d2plus(
        &mut self,
        premise: usize,
        var: VarId,
        values: Vec<ValIx>,
        phi: &CausalFormula,
        int: &Intervention,
        psi: &Event,
    ) -> usize {
        let bindings = Bindings::from_intervention(&self.sig, int);
        debug_assert_eq!(
            *self.formula(premise),
            d2plus_premise(&self.sig, phi, &bindings, psi, var, &values)
        );
        let conclusion = phi
            .clone()
            .implies(CausalFormula::Box(bindings, psi.clone().not()));
        self.push(conclusion, Justification::D2Plus { premise, var, values })
    }

    pub fn finish(self) -> Derivation {
        Derivation { system: self.system, sig: self.sig, steps: self.steps }
    }
}

/// `([b](e1) & [b](e2)) -> [b](e1 & e2)` from D0, D7, D8, and MP.
pub fn and_distrib_box_forward(
    sig: &Arc<Signature>,
    system: AxiomSystem,
    int: &Intervention,
    e1: &Event,
    e2: &Event,
) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), system);
    let both = e1.clone().and(e2.clone());
    let d8 = b.axiom(SchemaParams::D8 {
        int: int.clone(),
        taut: e1.clone().implies(e2.clone().implies(both.clone())),
    });
    let d7a = b.axiom(SchemaParams::D7 {
        int: int.clone(),
        p: e1.clone(),
        q: e2.clone().implies(both.clone()),
    });
    let d7b = b.axiom(SchemaParams::D7 { int: int.clone(), p: e2.clone(), q: both.clone() });
    let target = CausalFormula::boxed_ix(sig, int, e1.clone())
        .and(CausalFormula::boxed_ix(sig, int, e2.clone()))
        .implies(CausalFormula::boxed_ix(sig, int, both));
    b.glue(&[d8, d7a, d7b], target);
    b.finish()
}

/// `[b](e1 & e2) -> ([b](e1) & [b](e2))` from D0, D7, D8, and MP.
pub fn and_distrib_box_backward(
    sig: &Arc<Signature>,
    system: AxiomSystem,
    int: &Intervention,
    e1: &Event,
    e2: &Event,
) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), system);
    let both = e1.clone().and(e2.clone());
    let d8a = b.axiom(SchemaParams::D8 { int: int.clone(), taut: both.clone().implies(e1.clone()) });
    let d8b = b.axiom(SchemaParams::D8 { int: int.clone(), taut: both.clone().implies(e2.clone()) });
    let d7a = b.axiom(SchemaParams::D7 { int: int.clone(), p: both.clone(), q: e1.clone() });
    let d7b = b.axiom(SchemaParams::D7 { int: int.clone(), p: both.clone(), q: e2.clone() });
    let target = CausalFormula::boxed_ix(sig, int, both).implies(
        CausalFormula::boxed_ix(sig, int, e1.clone())
            .and(CausalFormula::boxed_ix(sig, int, e2.clone())),
    );
    b.glue(&[d8a, d8b, d7a, d7b], target);
    b.finish()
}

/// `<b>(e1 | e2) -> (<b>(e1) | <b>(e2))`: the dual distribution, derived by
/// reasoning about the negated boxes.
pub fn diamond_or_forward(
    sig: &Arc<Signature>,
    system: AxiomSystem,
    int: &Intervention,
    e1: &Event,
    e2: &Event,
) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), system);
    let n1 = e1.clone().not();
    let n2 = e2.clone().not();
    let nboth = n1.clone().and(n2.clone());
    let nor = e1.clone().or(e2.clone()).not();
    // ([b](!e1) & [b](!e2)) -> [b](!e1 & !e2)
    let d8 = b.axiom(SchemaParams::D8 {
        int: int.clone(),
        taut: n1.clone().implies(n2.clone().implies(nboth.clone())),
    });
    let d7a = b.axiom(SchemaParams::D7 {
        int: int.clone(),
        p: n1.clone(),
        q: n2.clone().implies(nboth.clone()),
    });
    let d7b = b.axiom(SchemaParams::D7 { int: int.clone(), p: n2.clone(), q: nboth.clone() });
    let half = CausalFormula::boxed_ix(sig, int, n1.clone())
        .and(CausalFormula::boxed_ix(sig, int, n2.clone()))
        .implies(CausalFormula::boxed_ix(sig, int, nboth.clone()));
    let half_step = b.glue(&[d8, d7a, d7b], half);
    // [b](!e1 & !e2) -> [b](!(e1 | e2))
    let d8n = b.axiom(SchemaParams::D8 { int: int.clone(), taut: nboth.clone().implies(nor.clone()) });
    let d7n = b.axiom(SchemaParams::D7 { int: int.clone(), p: nboth.clone(), q: nor.clone() });
    let lift = CausalFormula::boxed_ix(sig, int, nboth)
        .implies(CausalFormula::boxed_ix(sig, int, nor));
    let lift_step = b.glue(&[d8n, d7n], lift);
    // contrapose into diamonds
    let target = CausalFormula::diamond_ix(sig, int, e1.clone().or(e2.clone())).implies(
        CausalFormula::diamond_ix(sig, int, e1.clone())
            .or(CausalFormula::diamond_ix(sig, int, e2.clone())),
    );
    b.glue(&[half_step, lift_step], target);
    b.finish()
}

/// `[b](X=x)` where the intervention also sets other variables: the variant
/// effectiveness statement, from D4 via D7/D8.
pub fn effectiveness_variant(
    sig: &Arc<Signature>,
    system: AxiomSystem,
    int: &Intervention,
    var: VarId,
) -> Derivation {
    let val = int.binds(var).expect("the intervention must bind the variable");
    let mut b = ProofBuilder::new(sig.clone(), system);
    let d4 = b.axiom(SchemaParams::D4 { int: int.clone() });
    let full = Event::conj(int.bindings().iter().map(|&(v, x)| Event::prim_ix(sig, v, x)));
    let single = Event::prim_ix(sig, var, val);
    b.box_weaken(int, d4, &full, &single);
    b.finish()
}

/// `[b](rho) <-> [b](AND over v |= !rho of !(V = v))`: the boxed event is
/// interchangeable with the conjunction excluding every assignment that
/// falsifies it. Uses D1 and D2 to pin the exactly-one-value description of
/// outcomes, then D8/D7 to rewrite under the box.
pub fn equivalence_improved(
    sig: &Arc<Signature>,
    system: AxiomSystem,
    int: &Intervention,
    rho: &Event,
) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), system);
    let endo: Vec<VarId> = sig.endo_ids().collect();

    // [b](phi_D1): functionality for every variable and value pair
    let mut d1_parts: Vec<(usize, Event)> = Vec::new();
    for &x in &endo {
        let n = sig.var(x).range().len() as ValIx;
        for a in 0..n {
            for c in 0..n {
                if a != c {
                    let step =
                        b.axiom(SchemaParams::D1 { int: int.clone(), var: x, a, b: c });
                    let body = Event::prim_ix(sig, x, a).implies(Event::prim_ix(sig, x, c).not());
                    d1_parts.push((step, body));
                }
            }
        }
    }
    // [b](phi_D2): definiteness for every variable
    for &x in &endo {
        let step = b.axiom(SchemaParams::D2 { int: int.clone(), var: x });
        d1_parts.push((step, crate::axioms::d2_body(sig, x)));
    }
    let (eq_step, phi_eq) = b.box_conj(int, &d1_parts);

    // theta = AND over v |= !rho of !(V = v)
    let mut excluded = Vec::new();
    for v in crate::core::enumerate_assignments(sig, &endo) {
        if !crate::semantics::sat_event(sig, &v, rho).expect("assignments are total") {
            excluded.push(crate::lang::characteristic_event(sig, &v).unwrap().not());
        }
    }
    let theta = Event::conj(excluded);

    // under phi_eq, rho and theta are interchangeable
    let iff = rho.clone().implies(theta.clone()).and(theta.clone().implies(rho.clone()));
    let bridge = b.box_weaken(int, eq_step, &phi_eq, &iff);
    let fwd = b.box_weaken(int, bridge, &iff, &rho.clone().implies(theta.clone()));
    let bwd = b.box_weaken(int, bridge, &iff, &theta.clone().implies(rho.clone()));
    let d7f = b.axiom(SchemaParams::D7 { int: int.clone(), p: rho.clone(), q: theta.clone() });
    let d7b = b.axiom(SchemaParams::D7 { int: int.clone(), p: theta.clone(), q: rho.clone() });
    let br = CausalFormula::boxed_ix(sig, int, rho.clone());
    let bt = CausalFormula::boxed_ix(sig, int, theta);
    let target = br.clone().implies(bt.clone()).and(bt.implies(br));
    b.glue(&[fwd, d7f, bwd, d7b], target);
    b.finish()
}

/// The definiteness statement `[b](X=x1 | ... | X=xn)` derived with the
/// D2+ rule: take the value set to be the whole range and the body to be
/// the conjunction saying `X` avoids all of them.
pub fn derived_d2_from_d2plus(sig: &Arc<Signature>, var: VarId, int: &Intervention) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), AxiomSystem::ax_star_basic());
    let n = sig.var(var).range().len() as ValIx;
    let values: Vec<ValIx> = (0..n).collect();
    let psi = Event::conj(values.iter().map(|&x| Event::prim_ix(sig, var, x).not()));

    // each conjunct [b](psi -> !X=x) is a D8 instance
    let mut parts = Vec::new();
    for &x in &values {
        let body = psi.clone().implies(Event::prim_ix(sig, var, x).not());
        parts.push(b.axiom(SchemaParams::D8 { int: int.clone(), taut: body }));
    }
    // conjoin propositionally and prefix `true ->`
    let mut conj_step = parts[0];
    for &p in &parts[1..] {
        let target = b.formula(conj_step).clone().and(b.formula(p).clone());
        conj_step = b.glue(&[conj_step, p], target);
    }
    let premise = CausalFormula::True.implies(b.formula(conj_step).clone());
    let premise_step = b.glue(&[conj_step], premise);

    let d2p = b.d2plus(premise_step, var, values.clone(), &CausalFormula::True, int, &psi);

    // strip `true ->` and weaken !(psi) into the range disjunction
    let t = b.taut(CausalFormula::True);
    let neg_psi_step = b.mp(t, d2p);
    let disj = crate::axioms::d2_body(sig, var);
    b.box_weaken(int, neg_psi_step, &psi.clone().not(), &disj);
    b.finish()
}

/// The curated corpus: named derivations over small signatures, each
/// accepted by the checker and semantically valid for its system's class.
pub fn curated_corpus() -> Vec<(String, Derivation)> {
    let two = crate::core::parse_signature("exo U : {u0}\nendo A : {0,1}\nendo B : {0,1}\nallow *\n")
        .expect("static signature parses");
    let one = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n")
        .expect("static signature parses");
    let singleton = crate::core::parse_signature("exo U : {u0}\nendo X : {only}\nallow *\n")
        .expect("static signature parses");

    let a0 = Event::prim("A", "0");
    let b1 = Event::prim("B", "1");
    let null = Intervention::null();
    let a_int = Intervention::new(&two, &[("A", "1")]).unwrap();
    let both_int = Intervention::new(&two, &[("A", "0"), ("B", "1")]).unwrap();
    let x1 = Intervention::new(&one, &[("X", "1")]).unwrap();
    let bvar = two.var_id("B").unwrap();
    let xvar = one.var_id("X").unwrap();
    let svar = singleton.var_id("X").unwrap();

    vec![
        (
            "effectiveness".into(),
            single_axiom(&one, AxiomSystem::ax_plus_basic(), SchemaParams::D4 { int: x1 }),
        ),
        (
            "and-distrib-box-forward".into(),
            and_distrib_box_forward(&two, AxiomSystem::ax_plus_basic(), &a_int, &a0.clone().not(), &b1),
        ),
        (
            "and-distrib-box-backward".into(),
            and_distrib_box_backward(&two, AxiomSystem::ax_plus_basic(), &null, &a0, &b1),
        ),
        (
            "diamond-or-forward".into(),
            diamond_or_forward(&two, AxiomSystem::ax_plus_basic(), &null, &a0, &b1),
        ),
        (
            "effectiveness-variant".into(),
            effectiveness_variant(&two, AxiomSystem::ax_plus_basic(), &both_int, bvar),
        ),
        (
            "equivalence-improved".into(),
            equivalence_improved(
                &two,
                AxiomSystem::ax_plus_basic(),
                &null,
                &a0.clone().or(b1.clone()),
            ),
        ),
        ("derived-d2-binary".into(), derived_d2_from_d2plus(&one, xvar, &null)),
        ("derived-d2-singleton".into(), derived_d2_from_d2plus(&singleton, svar, &null)),
    ]
}

fn single_axiom(sig: &Arc<Signature>, system: AxiomSystem, params: SchemaParams) -> Derivation {
    let mut b = ProofBuilder::new(sig.clone(), system);
    b.axiom(params);
    b.finish()
}
