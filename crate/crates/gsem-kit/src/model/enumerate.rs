//! Exhaustive model enumeration with explicit caps.
//!
//! Both enumerations use a positional encoding, so the order is stable
//! across runs and platforms and the n-th model is always the same model.
//! Exceeding the cap is an error carrying the exact required count, never a
//! silent truncation.

use std::sync::Arc;

use crate::core::{enumerate_assignments, Assignment, ModelClass, Property, Signature, ValIx, VarId};
use crate::properties::{self, ORDER_VAR_CAP};

use super::{args_of, Gsem, ModelError, OutcomeSet, Sem};

/// Default bound on the number of models an enumeration may visit.
/// Override per call; the CLI also honors `GSEMKIT_CAP`.
pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;

fn sat_pow(base: u128, exp: u128) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base);
        if out == u128::MAX {
            return out;
        }
    }
    out
}

/// Number of SEMs over the signature: the product over endogenous `X` of
/// `|R(X)| ^ (number of argument assignments of F_X)`.
pub fn count_sems(sig: &Signature) -> u128 {
    let mut total: u128 = 1;
    for x in sig.endo_ids() {
        let slots: u128 = args_of(sig, x)
            .iter()
            .map(|&v| sig.var(v).range().len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b));
        total = total.saturating_mul(sat_pow(sig.var(x).range().len() as u128, slots));
    }
    total
}

/// All SEMs over `sig` in positional order.
pub fn enumerate_sems(sig: &Arc<Signature>, cap: u128) -> Result<SemIter, ModelError> {
    let required = count_sems(sig);
    if required > cap {
        return Err(ModelError::CapExceeded { required, cap });
    }
    let radices: Vec<ValIx> = sig.endo_ids().map(|x| sig.var(x).range().len() as ValIx).collect();
    let tables: Vec<Vec<ValIx>> = sig
        .endo_ids()
        .map(|x| {
            let slots: usize =
                args_of(sig, x).iter().map(|&v| sig.var(v).range().len()).product();
            vec![0; slots]
        })
        .collect();
    Ok(SemIter { sig: sig.clone(), radices, tables, done: false })
}

pub struct SemIter {
    sig: Arc<Signature>,
    radices: Vec<ValIx>,
    tables: Vec<Vec<ValIx>>,
    done: bool,
}

impl Iterator for SemIter {
    type Item = Sem;

    fn next(&mut self) -> Option<Sem> {
        if self.done {
            return None;
        }
        let current = Sem { sig: self.sig.clone(), tables: self.tables.clone() };
        // advance the odometer, last slot fastest
        let mut carried = true;
        'outer: for k in (0..self.tables.len()).rev() {
            for slot in (0..self.tables[k].len()).rev() {
                if self.tables[k][slot] + 1 < self.radices[k] {
                    self.tables[k][slot] += 1;
                    carried = false;
                    break 'outer;
                }
                self.tables[k][slot] = 0;
            }
        }
        if carried {
            self.done = true;
        }
        Some(current)
    }
}

struct Slot {
    effective: Vec<Assignment>,
}

/// Number of GSEMs over the signature: `2` to the sum over
/// (context, allowed intervention) of the number of effective assignments.
pub fn count_gsems(sig: &Signature) -> u128 {
    let mut exponent: u128 = 0;
    for int in sig.allowed() {
        let free: u128 = sig
            .endo_ids()
            .filter(|&v| int.binds(v).is_none())
            .map(|v| sig.var(v).range().len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b));
        exponent = exponent.saturating_add(free.saturating_mul(sig.n_contexts() as u128));
    }
    if exponent >= 127 {
        return u128::MAX;
    }
    1u128 << exponent
}

/// All GSEMs over `sig` satisfying effectiveness, filtered to the class
/// `cls`, in positional order.
pub fn enumerate_gsems(
    sig: &Arc<Signature>,
    cls: ModelClass,
    cap: u128,
) -> Result<GsemIter, ModelError> {
    let required = count_gsems(sig);
    if required > cap {
        return Err(ModelError::CapExceeded { required, cap });
    }
    if cls.contains(Property::Acyclic) && sig.n_endo() > ORDER_VAR_CAP {
        return Err(ModelError::Unsupported(format!(
            "acyclicity filtering handles at most {ORDER_VAR_CAP} endogenous variables, got {}",
            sig.n_endo()
        )));
    }
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let mut slots = Vec::new();
    for _ctx in 0..sig.n_contexts() {
        for int in sig.allowed() {
            let effective: Vec<Assignment> = enumerate_assignments(sig, &endo)
                .filter(|v| v.matches(int))
                .collect();
            slots.push(Slot { effective });
        }
    }
    let subset_ix = vec![0u64; slots.len()];
    Ok(GsemIter { sig: sig.clone(), cls, slots, subset_ix, done: false })
}

pub struct GsemIter {
    sig: Arc<Signature>,
    cls: ModelClass,
    slots: Vec<Slot>,
    subset_ix: Vec<u64>,
    done: bool,
}

impl GsemIter {
    fn build(&self) -> Gsem {
        let n_int = self.sig.allowed().len();
        let mut grid: Vec<Vec<OutcomeSet>> = Vec::with_capacity(self.sig.n_contexts());
        for ctx in 0..self.sig.n_contexts() {
            let mut row = Vec::with_capacity(n_int);
            for ix in 0..n_int {
                let slot = &self.slots[ctx * n_int + ix];
                let bits = self.subset_ix[ctx * n_int + ix];
                let set: OutcomeSet = slot
                    .effective
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| bits >> j & 1 == 1)
                    .map(|(_, v)| v.clone())
                    .collect();
                row.push(set);
            }
            grid.push(row);
        }
        // effectiveness holds by construction: only effective assignments
        // were eligible for each slot
        Gsem { sig: self.sig.clone(), outcomes: grid }
    }

    fn advance(&mut self) {
        for i in (0..self.subset_ix.len()).rev() {
            let width = self.slots[i].effective.len() as u32;
            if self.subset_ix[i] + 1 < 1u64 << width {
                self.subset_ix[i] += 1;
                return;
            }
            self.subset_ix[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for GsemIter {
    type Item = Gsem;

    fn next(&mut self) -> Option<Gsem> {
        loop {
            if self.done {
                return None;
            }
            let g = self.build();
            self.advance();
            // the variable cap was pre-validated, so class checks cannot fail
            if properties::in_class(&g, self.cls).expect("class check was pre-validated") {
                return Some(g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Intervention;

    fn shell_sig() -> Arc<Signature> {
        crate::core::parse_signature(
            "exo U : {u0}\nendo S1 : {0,1}\nendo S2 : {0,1}\nendo Z : {0,1}\nallow [S1<-1]\nallow [S2<-1]\n",
        )
        .unwrap()
    }

    #[test]
    fn shell_signature_has_4096_sems() {
        let sig = shell_sig();
        assert_eq!(count_sems(&sig), 4096);
        let all: Vec<Sem> = enumerate_sems(&sig, DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(all.len(), 4096);
        // no duplicates under the positional encoding
        let mut tables: Vec<_> = all.iter().map(|m| m.tables.clone()).collect();
        tables.sort();
        tables.dedup();
        assert_eq!(tables.len(), 4096);
    }

    #[test]
    fn one_binary_variable_has_two_sems() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        assert_eq!(count_sems(&sig), 2);
        assert_eq!(enumerate_sems(&sig, DEFAULT_ENUM_CAP).unwrap().count(), 2);
    }

    #[test]
    fn cap_is_reported_exactly() {
        let sig = shell_sig();
        match enumerate_sems(&sig, 100) {
            Err(ModelError::CapExceeded { required, cap }) => {
                assert_eq!(required, 4096);
                assert_eq!(cap, 100);
            }
            _ => panic!("expected a cap error"),
        }
    }

    #[test]
    fn sixteen_gsems_over_one_binary_variable() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        assert_eq!(count_gsems(&sig), 16);
        let all: Vec<Gsem> =
            enumerate_gsems(&sig, ModelClass::empty(), DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(all.len(), 16);
        for g in &all {
            assert!(super::super::effective(g));
        }
    }

    #[test]
    fn unique_outcome_filter_keeps_two_models() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        let cls = ModelClass::parse("ge1,le1").unwrap();
        let models: Vec<Gsem> = enumerate_gsems(&sig, cls, DEFAULT_ENUM_CAP).unwrap().collect();
        // the null intervention picks one of the two outcomes; the forced
        // interventions have exactly one effective assignment each
        assert_eq!(models.len(), 2);
        let u = sig.context(0);
        for m in &models {
            assert_eq!(m.outcomes(&u, &Intervention::null()).unwrap().len(), 1);
        }
    }
}
