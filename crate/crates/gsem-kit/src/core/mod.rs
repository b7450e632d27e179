//! Shared vocabulary: signatures, variables, values, assignments,
//! interventions, and model-class selectors.
//!
//! A [`Signature`] fixes the exogenous and endogenous variables, the finite
//! range of value tokens for each, and the set of *allowed* interventions.
//! Everything else in the crate is parameterized by a signature: formulas may
//! only mention allowed interventions, models map (context, allowed
//! intervention) pairs to outcome sets, and enumeration walks the products of
//! the declared ranges.
//!
//! Values are opaque tokens. There is no arithmetic on them; models that are
//! usually written with arithmetic equations are encoded as explicit lookup
//! tables.
//!
//! All types here are immutable values and can be shared freely across
//! threads.

pub(crate) mod text;

pub use text::{parse_signature, render_signature, TextError};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Errors raised while building or combining core values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not endogenous")]
    NotEndogenous(String),
    #[error("value `{value}` is not in the range of `{var}`")]
    OutOfRange { var: String, value: String },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` bound more than once")]
    DuplicateBinding(String),
    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),
    #[error("`{0}` is reserved and cannot name a variable or value")]
    ReservedName(String),
    #[error("assignment is missing variable `{0}`")]
    MissingVariable(String),
    #[error("range of `{0}` exceeds the supported size")]
    RangeTooLarge(String),
}

/// Index of a variable in the canonical ordering of a signature:
/// exogenous variables first (in declaration order), then endogenous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

/// Index of a value token within its variable's declared range.
pub type ValIx = u16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    range: Vec<String>,
}

impl Variable {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Declared value tokens, in range order.
    pub fn range(&self) -> &[String] {
        &self.range
    }

    pub fn value_index(&self, token: &str) -> Option<ValIx> {
        self.range.iter().position(|v| v == token).map(|i| i as ValIx)
    }
}

/// The tuple of exogenous variables, endogenous variables, ranges, and
/// allowed interventions that every model and formula is relative to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    vars: Vec<Variable>,
    n_exo: usize,
    allowed: Vec<Intervention>,
    universal: bool,
}

const RESERVED: [&str; 2] = ["true", "false"];

/// Incrementally declares variables and allowed interventions, then
/// validates the whole signature at once.
#[derive(Debug, Default, Clone)]
pub struct SignatureBuilder {
    exo: Vec<(String, Vec<String>)>,
    endo: Vec<(String, Vec<String>)>,
    allowed: Vec<Vec<(String, String)>>,
    allow_all: bool,
}

impl SignatureBuilder {
    pub fn exo<S: Into<String>>(&mut self, name: S, range: impl IntoIterator<Item = impl Into<String>>) -> &mut Self {
        self.exo.push((name.into(), range.into_iter().map(Into::into).collect()));
        self
    }

    pub fn endo<S: Into<String>>(&mut self, name: S, range: impl IntoIterator<Item = impl Into<String>>) -> &mut Self {
        self.endo.push((name.into(), range.into_iter().map(Into::into).collect()));
        self
    }

    /// Declares one allowed intervention; an empty list is the null
    /// intervention. The null intervention is treated like any other: it is
    /// allowed only if declared.
    pub fn allow<S: Into<String>, T: Into<String>>(&mut self, bindings: impl IntoIterator<Item = (S, T)>) -> &mut Self {
        self.allowed
            .push(bindings.into_iter().map(|(v, x)| (v.into(), x.into())).collect());
        self
    }

    /// Allows every intervention over the endogenous variables, including
    /// the null intervention.
    pub fn allow_all(&mut self) -> &mut Self {
        self.allow_all = true;
        self
    }

    pub fn finish(&self) -> Result<Arc<Signature>, CoreError> {
        let mut vars = Vec::new();
        for (name, range) in self.exo.iter().chain(self.endo.iter()) {
            if RESERVED.contains(&name.as_str()) {
                return Err(CoreError::ReservedName(name.clone()));
            }
            if vars.iter().any(|v: &Variable| v.name == *name) {
                return Err(CoreError::DuplicateVariable(name.clone()));
            }
            if range.is_empty() {
                return Err(CoreError::EmptyRange(name.clone()));
            }
            if range.len() > u16::MAX as usize {
                return Err(CoreError::RangeTooLarge(name.clone()));
            }
            let mut seen = range.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != range.len() {
                return Err(CoreError::DuplicateVariable(format!("{name} range")));
            }
            vars.push(Variable { name: name.clone(), range: range.clone() });
        }
        if vars.len() > u16::MAX as usize {
            return Err(CoreError::RangeTooLarge("signature".into()));
        }
        let mut sig = Signature {
            vars,
            n_exo: self.exo.len(),
            allowed: Vec::new(),
            universal: self.allow_all,
        };
        let mut allowed = Vec::new();
        if self.allow_all {
            let endo: Vec<VarId> = sig.endo_ids().collect();
            for subset in 0u64..(1u64 << endo.len()) {
                let picked: Vec<VarId> =
                    endo.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, &v)| v).collect();
                for assn in enumerate_assignments(&sig, &picked) {
                    allowed.push(Intervention { bindings: assn.pairs });
                }
            }
        } else {
            for bindings in &self.allowed {
                let int = Intervention::parse_bindings(&sig, bindings)?;
                allowed.push(int);
            }
        }
        allowed.sort();
        allowed.dedup();
        sig.allowed = allowed;
        Ok(Arc::new(sig))
    }
}

impl Signature {
    pub fn builder() -> SignatureBuilder {
        SignatureBuilder::default()
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_exo(&self) -> usize {
        self.n_exo
    }

    pub fn n_endo(&self) -> usize {
        self.vars.len() - self.n_exo
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0 as usize]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(|i| VarId(i as u16))
    }

    pub fn is_endo(&self, id: VarId) -> bool {
        (id.0 as usize) >= self.n_exo
    }

    pub fn exo_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.n_exo).map(|i| VarId(i as u16))
    }

    pub fn endo_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (self.n_exo..self.vars.len()).map(|i| VarId(i as u16))
    }

    pub fn all_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len()).map(|i| VarId(i as u16))
    }

    /// Declared allowed interventions, in canonical order.
    pub fn allowed(&self) -> &[Intervention] {
        &self.allowed
    }

    /// True when every intervention over the endogenous variables is allowed.
    pub fn is_universal(&self) -> bool {
        let endo: Vec<VarId> = self.endo_ids().collect();
        let mut expect: u128 = 1;
        for &v in &endo {
            expect = expect.saturating_mul(1 + self.var(v).range().len() as u128);
        }
        self.allowed.len() as u128 == expect
    }

    pub fn allowed_index(&self, int: &Intervention) -> Option<usize> {
        self.allowed.binary_search(int).ok()
    }

    /// Number of contexts, i.e. the size of the product of exogenous ranges.
    pub fn n_contexts(&self) -> usize {
        self.exo_ids().map(|v| self.var(v).range().len()).product()
    }

    /// The context with the given lexicographic rank.
    pub fn context(&self, rank: usize) -> Assignment {
        let exo: Vec<VarId> = self.exo_ids().collect();
        assignment_from_rank(self, &exo, rank)
    }

    pub fn context_rank(&self, u: &Assignment) -> Result<usize, CoreError> {
        let exo: Vec<VarId> = self.exo_ids().collect();
        assignment_rank(self, &exo, u)
    }

    pub fn contexts(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.n_contexts()).map(|r| self.context(r))
    }

    pub fn render_value(&self, var: VarId, val: ValIx) -> &str {
        &self.var(var).range()[val as usize]
    }

    /// `(S1=1, S2=1, Z=1)` with variables in canonical order.
    pub fn render_assignment(&self, a: &Assignment) -> String {
        let body: Vec<String> = a
            .pairs
            .iter()
            .map(|&(v, x)| format!("{}={}", self.var(v).name(), self.render_value(v, x)))
            .collect();
        format!("({})", body.join(", "))
    }

    /// `[S1<-1, Z<-0]` with bindings sorted alphabetically by variable name.
    pub fn render_intervention(&self, i: &Intervention) -> String {
        let mut named: Vec<(&str, &str)> = i
            .bindings
            .iter()
            .map(|&(v, x)| (self.var(v).name(), self.render_value(v, x)))
            .collect();
        named.sort();
        let body: Vec<String> = named.iter().map(|(v, x)| format!("{v}<-{x}")).collect();
        format!("[{}]", body.join(", "))
    }
}

/// A surgery `X <- x` on a set of endogenous variables.
///
/// Bindings are kept sorted by variable, each variable at most once; the
/// empty binding list is the null intervention.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Intervention {
    bindings: Vec<(VarId, ValIx)>,
}

impl Intervention {
    pub fn null() -> Self {
        Intervention::default()
    }

    pub fn new(sig: &Signature, bindings: &[(&str, &str)]) -> Result<Self, CoreError> {
        let pairs: Vec<(String, String)> =
            bindings.iter().map(|&(v, x)| (v.to_string(), x.to_string())).collect();
        Self::parse_bindings(sig, &pairs)
    }

    fn parse_bindings(sig: &Signature, bindings: &[(String, String)]) -> Result<Self, CoreError> {
        let mut pairs = Vec::with_capacity(bindings.len());
        for (name, token) in bindings {
            let id = sig.var_id(name).ok_or_else(|| CoreError::UnknownVariable(name.clone()))?;
            if !sig.is_endo(id) {
                return Err(CoreError::NotEndogenous(name.clone()));
            }
            let val = sig
                .var(id)
                .value_index(token)
                .ok_or_else(|| CoreError::OutOfRange { var: name.clone(), value: token.clone() })?;
            if pairs.iter().any(|&(v, _)| v == id) {
                return Err(CoreError::DuplicateBinding(name.clone()));
            }
            pairs.push((id, val));
        }
        pairs.sort();
        Ok(Intervention { bindings: pairs })
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, ValIx)>) -> Self {
        pairs.sort();
        pairs.dedup_by_key(|p| p.0);
        Intervention { bindings: pairs }
    }

    pub fn bindings(&self) -> &[(VarId, ValIx)] {
        &self.bindings
    }

    pub fn is_null(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn binds(&self, var: VarId) -> Option<ValIx> {
        self.bindings.iter().find(|&&(v, _)| v == var).map(|&(_, x)| x)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// True when `other` binds every variable this intervention binds, to the
    /// same value.
    pub fn extended_by(&self, other: &Intervention) -> bool {
        self.bindings.iter().all(|&(v, x)| other.binds(v) == Some(x))
    }
}

/// Sequential composition `i1; i2`: later bindings override earlier ones on
/// shared variables.
pub fn compose_interventions(i1: &Intervention, i2: &Intervention) -> Intervention {
    let mut map: BTreeMap<VarId, ValIx> = i1.bindings.iter().copied().collect();
    for &(v, x) in &i2.bindings {
        map.insert(v, x);
    }
    Intervention { bindings: map.into_iter().collect() }
}

/// A total map from a fixed variable set to value indices, kept sorted by
/// the canonical variable order.
///
/// Contexts are assignments over the exogenous variables; outcomes are
/// assignments over the endogenous ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    pairs: Vec<(VarId, ValIx)>,
}

impl Assignment {
    pub fn empty() -> Self {
        Assignment::default()
    }

    pub fn new(sig: &Signature, pairs: &[(&str, &str)]) -> Result<Self, CoreError> {
        let mut out = Vec::with_capacity(pairs.len());
        for &(name, token) in pairs {
            let id = sig.var_id(name).ok_or_else(|| CoreError::UnknownVariable(name.to_string()))?;
            let val = sig.var(id).value_index(token).ok_or_else(|| CoreError::OutOfRange {
                var: name.to_string(),
                value: token.to_string(),
            })?;
            if out.iter().any(|&(v, _)| v == id) {
                return Err(CoreError::DuplicateBinding(name.to_string()));
            }
            out.push((id, val));
        }
        out.sort();
        Ok(Assignment { pairs: out })
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, ValIx)>) -> Self {
        pairs.sort();
        pairs.dedup();
        Assignment { pairs }
    }

    pub fn pairs(&self) -> &[(VarId, ValIx)] {
        &self.pairs
    }

    pub fn get(&self, var: VarId) -> Option<ValIx> {
        self.pairs.binary_search_by_key(&var, |&(v, _)| v).ok().map(|i| self.pairs[i].1)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.pairs.iter().map(|&(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Merges two assignments over disjoint variable sets; on overlap the
    /// values must agree or `other` wins.
    pub fn union(&self, other: &Assignment) -> Assignment {
        let mut map: BTreeMap<VarId, ValIx> = self.pairs.iter().copied().collect();
        for &(v, x) in &other.pairs {
            map.insert(v, x);
        }
        Assignment { pairs: map.into_iter().collect() }
    }

    /// True when the assignment agrees with every binding of `int`.
    pub fn matches(&self, int: &Intervention) -> bool {
        int.bindings.iter().all(|&(v, x)| self.get(v) == Some(x))
    }
}

/// The sub-assignment on `vars`, which must all be present.
pub fn restrict(sig: &Signature, a: &Assignment, vars: &[VarId]) -> Result<Assignment, CoreError> {
    let mut pairs = Vec::with_capacity(vars.len());
    for &v in vars {
        match a.get(v) {
            Some(x) => pairs.push((v, x)),
            None => return Err(CoreError::MissingVariable(sig.var(v).name().to_string())),
        }
    }
    Ok(Assignment::from_pairs(pairs))
}

/// All assignments over `vars` in lexicographic order of the canonical
/// variable ordering (first variable most significant). The empty variable
/// set yields the single empty assignment.
pub fn enumerate_assignments(sig: &Signature, vars: &[VarId]) -> AssignmentIter {
    let mut sorted: Vec<VarId> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let total = sorted.iter().map(|&v| sig.var(v).range().len()).product();
    AssignmentIter { sizes: sorted.iter().map(|&v| sig.var(v).range().len()).collect(), vars: sorted, next: 0, total }
}

pub struct AssignmentIter {
    vars: Vec<VarId>,
    sizes: Vec<usize>,
    next: usize,
    total: usize,
}

impl Iterator for AssignmentIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.next >= self.total {
            return None;
        }
        let mut rank = self.next;
        self.next += 1;
        let mut pairs = vec![(VarId(0), 0); self.vars.len()];
        for i in (0..self.vars.len()).rev() {
            pairs[i] = (self.vars[i], (rank % self.sizes[i]) as ValIx);
            rank /= self.sizes[i];
        }
        Some(Assignment { pairs })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = self.total - self.next;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for AssignmentIter {}

/// Inverse of [`assignment_from_rank`]; `a` must be total on `vars`.
pub fn assignment_rank(sig: &Signature, vars: &[VarId], a: &Assignment) -> Result<usize, CoreError> {
    let mut sorted: Vec<VarId> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut rank = 0usize;
    for &v in &sorted {
        let x = a.get(v).ok_or_else(|| CoreError::MissingVariable(sig.var(v).name().to_string()))?;
        rank = rank * sig.var(v).range().len() + x as usize;
    }
    Ok(rank)
}

pub fn assignment_from_rank(sig: &Signature, vars: &[VarId], rank: usize) -> Assignment {
    let mut sorted: Vec<VarId> = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut pairs = vec![(VarId(0), 0); sorted.len()];
    let mut r = rank;
    for i in (0..sorted.len()).rev() {
        let size = sig.var(sorted[i]).range().len();
        pairs[i] = (sorted[i], (r % size) as ValIx);
        r /= size;
    }
    Assignment { pairs }
}

/// One of the four recognized model properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Coherent,
    Acyclic,
    AtLeastOne,
    AtMostOne,
}

impl Property {
    pub const ALL: [Property; 4] =
        [Property::Coherent, Property::Acyclic, Property::AtLeastOne, Property::AtMostOne];

    pub fn tag(self) -> &'static str {
        match self {
            Property::Coherent => "coh",
            Property::Acyclic => "acyc",
            Property::AtLeastOne => "ge1",
            Property::AtMostOne => "le1",
        }
    }
}

/// A subset of `{coh, acyc, ge1, le1}` selecting a class of models and the
/// matching axiom set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ModelClass {
    mask: u8,
}

impl ModelClass {
    pub fn empty() -> Self {
        ModelClass::default()
    }

    pub fn of(props: impl IntoIterator<Item = Property>) -> Self {
        let mut c = ModelClass::empty();
        for p in props {
            c = c.with(p);
        }
        c
    }

    pub fn with(self, p: Property) -> Self {
        ModelClass { mask: self.mask | 1 << p as u8 }
    }

    pub fn contains(self, p: Property) -> bool {
        self.mask >> p as u8 & 1 == 1
    }

    pub fn properties(self) -> impl Iterator<Item = Property> {
        Property::ALL.into_iter().filter(move |&p| self.contains(p))
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// All sixteen subsets, smallest mask first.
    pub fn all() -> impl Iterator<Item = ModelClass> {
        (0u8..16).map(|mask| ModelClass { mask })
    }

    pub fn is_subset_of(self, other: ModelClass) -> bool {
        self.mask & other.mask == self.mask
    }

    /// Parses a comma-separated list of tags, e.g. `coh,acyc`. An empty
    /// string is the empty class.
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let mut c = ModelClass::empty();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p = Property::ALL
                .into_iter()
                .find(|p| p.tag() == part)
                .ok_or_else(|| CoreError::UnknownVariable(format!("model property `{part}`")))?;
            c = c.with(p);
        }
        Ok(c)
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<&str> = self.properties().map(Property::tag).collect();
        if tags.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{{{}}}", tags.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_binary() -> Arc<Signature> {
        let mut b = Signature::builder();
        b.exo("U", ["u0"]);
        b.endo("X", ["0", "1"]);
        b.endo("Y", ["0", "1"]);
        b.allow_all();
        b.finish().unwrap()
    }

    #[test]
    fn builder_rejects_duplicates_and_empty_ranges() {
        let mut b = Signature::builder();
        b.exo("U", ["u0"]);
        b.endo("U", ["0"]);
        assert_eq!(b.finish().unwrap_err(), CoreError::DuplicateVariable("U".into()));

        let mut b = Signature::builder();
        b.endo("X", Vec::<String>::new());
        assert_eq!(b.finish().unwrap_err(), CoreError::EmptyRange("X".into()));
    }

    #[test]
    fn universal_signature_lists_all_interventions() {
        let sig = two_binary();
        // subsets of {X, Y} with values: 1 + 2 + 2 + 4
        assert_eq!(sig.allowed().len(), 9);
        assert!(sig.is_universal());
        assert!(sig.allowed_index(&Intervention::null()).is_some());
    }

    #[test]
    fn interventions_target_endogenous_variables_only() {
        let sig = two_binary();
        assert_eq!(
            Intervention::new(&sig, &[("U", "u0")]).unwrap_err(),
            CoreError::NotEndogenous("U".into())
        );
        assert_eq!(
            Intervention::new(&sig, &[("X", "7")]).unwrap_err(),
            CoreError::OutOfRange { var: "X".into(), value: "7".into() }
        );
    }

    #[test]
    fn restrict_examples() {
        let sig = two_binary();
        let a = Assignment::new(&sig, &[("X", "0"), ("Y", "1")]).unwrap();
        let x = sig.var_id("X").unwrap();
        let just_x = restrict(&sig, &a, &[x]).unwrap();
        assert_eq!(just_x.pairs().len(), 1);
        assert_eq!(just_x.get(x), Some(0));
        // full set is the identity
        let all: Vec<VarId> = sig.endo_ids().collect();
        assert_eq!(restrict(&sig, &a, &all).unwrap(), a);
        // empty restriction
        assert_eq!(restrict(&sig, &a, &[]).unwrap(), Assignment::empty());
        // unknown-in-assignment variable
        let u = sig.var_id("U").unwrap();
        assert!(restrict(&sig, &a, &[u]).is_err());
    }

    #[test]
    fn compose_is_right_biased_with_null_identity() {
        let sig = two_binary();
        let x0 = Intervention::new(&sig, &[("X", "0")]).unwrap();
        let x1 = Intervention::new(&sig, &[("X", "1")]).unwrap();
        let y1 = Intervention::new(&sig, &[("Y", "1")]).unwrap();
        assert_eq!(compose_interventions(&x0, &Intervention::null()), x0);
        assert_eq!(compose_interventions(&Intervention::null(), &x0), x0);
        assert_eq!(compose_interventions(&x0, &x1), x1);
        let both = compose_interventions(&x0, &y1);
        assert_eq!(both, Intervention::new(&sig, &[("X", "0"), ("Y", "1")]).unwrap());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let sig = two_binary();
        let endo: Vec<VarId> = sig.endo_ids().collect();
        let all: Vec<Assignment> = enumerate_assignments(&sig, &endo).collect();
        assert_eq!(all.len(), 4);
        let render: Vec<String> = all.iter().map(|a| sig.render_assignment(a)).collect();
        assert_eq!(render, vec!["(X=0, Y=0)", "(X=0, Y=1)", "(X=1, Y=0)", "(X=1, Y=1)"]);
        for (rank, a) in all.iter().enumerate() {
            assert_eq!(assignment_rank(&sig, &endo, a).unwrap(), rank);
            assert_eq!(&assignment_from_rank(&sig, &endo, rank), a);
        }
        // empty variable set yields one empty assignment
        let none: Vec<Assignment> = enumerate_assignments(&sig, &[]).collect();
        assert_eq!(none, vec![Assignment::empty()]);
    }

    #[test]
    fn three_valued_range() {
        let mut b = Signature::builder();
        b.exo("U", ["u0"]);
        b.endo("X", ["a", "b", "c"]);
        b.allow_all();
        let sig = b.finish().unwrap();
        let x = sig.var_id("X").unwrap();
        assert_eq!(enumerate_assignments(&sig, &[x]).count(), 3);
    }

    #[test]
    fn model_class_parse_and_display() {
        let cls = ModelClass::parse("coh,acyc").unwrap();
        assert!(cls.contains(Property::Coherent));
        assert!(cls.contains(Property::Acyclic));
        assert!(!cls.contains(Property::AtLeastOne));
        assert_eq!(cls.to_string(), "{coh,acyc}");
        assert_eq!(ModelClass::parse("").unwrap(), ModelClass::empty());
        assert!(ModelClass::parse("bogus").is_err());
        assert_eq!(ModelClass::all().count(), 16);
    }
}
