//! Structural equations models and their generalization.
//!
//! A [`Sem`] is a table of structural equations: one total lookup table per
//! endogenous variable over all the other variables. Its outcomes under an
//! intervention are the simultaneous solutions of the surgically modified
//! equations, found by exhaustive enumeration — cyclic equation systems can
//! have zero or several solutions, so there is no fixed-point shortcut to
//! reach for here.
//!
//! A [`Gsem`] drops the equations entirely: it is an explicit map from
//! (context, allowed intervention) to a finite set of outcomes, constrained
//! only by effectiveness (an outcome of `X <- x` assigns `x` to `X`). Every
//! SEM induces a GSEM with the same outcomes via [`sem_to_gsem`]; the
//! converse fails, which is the point of the generalization.
//!
//! Models are immutable after construction. Outcome maps are stored densely,
//! one set per (context, allowed intervention) pair, so totality is checked
//! once at construction time.

mod enumerate;
pub mod random;
mod text;

pub use enumerate::{
    count_gsems, count_sems, enumerate_gsems, enumerate_sems, GsemIter, SemIter, DEFAULT_ENUM_CAP,
};
pub use text::{parse_model, render_gsem, render_model, render_sem};

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::core::{
    assignment_rank, compose_interventions, enumerate_assignments, Assignment, CoreError,
    Intervention, Signature, ValIx, VarId,
};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("models have different signatures")]
    SignatureMismatch,
    #[error("intervention {0} is not allowed by the signature")]
    DisallowedIntervention(String),
    #[error("outcome {outcome} of intervention {intervention} violates effectiveness")]
    NotEffective { intervention: String, outcome: String },
    #[error("outcome {0} is not a total assignment over the endogenous variables")]
    NotAnOutcome(String),
    #[error("missing outcome set for context {context} and intervention {intervention}")]
    MissingOutcomeSet { context: String, intervention: String },
    #[error("duplicate outcome set for context {context} and intervention {intervention}")]
    DuplicateOutcomeSet { context: String, intervention: String },
    #[error("equation for `{0}` has the wrong table size")]
    BadTable(String),
    #[error("equation table for `{var}` yields out-of-range value index {val}")]
    BadTableValue { var: String, val: ValIx },
    #[error("missing equation for `{0}`")]
    MissingEquation(String),
    #[error("context {0} is not total over the exogenous variables")]
    BadContext(String),
    #[error("enumeration would need {required} models, over the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A set of outcomes: total assignments over the endogenous variables, kept
/// sorted so equality is structural and rendering is deterministic.
pub type OutcomeSet = BTreeSet<Assignment>;

/// An explicit outcome map `F : (context, allowed intervention) -> set of
/// outcomes`, subject to effectiveness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gsem {
    sig: Arc<Signature>,
    outcomes: Vec<Vec<OutcomeSet>>,
}

impl Gsem {
    /// Builds a GSEM from the dense outcome grid `grid[ctx_rank][allowed_ix]`.
    pub fn new(sig: Arc<Signature>, grid: Vec<Vec<OutcomeSet>>) -> Result<Gsem, ModelError> {
        if grid.len() != sig.n_contexts() {
            return Err(ModelError::MissingOutcomeSet {
                context: format!("(rank {})", grid.len()),
                intervention: "-".into(),
            });
        }
        for (ctx, row) in grid.iter().enumerate() {
            if row.len() != sig.allowed().len() {
                return Err(ModelError::MissingOutcomeSet {
                    context: sig.render_assignment(&sig.context(ctx)),
                    intervention: format!("(index {})", row.len()),
                });
            }
            for (ix, set) in row.iter().enumerate() {
                let int = &sig.allowed()[ix];
                for v in set {
                    check_outcome(&sig, int, v)?;
                }
            }
        }
        Ok(Gsem { sig, outcomes: grid })
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// The outcome set `M(u, i)`; the intervention must be allowed.
    pub fn outcomes(&self, u: &Assignment, int: &Intervention) -> Result<&OutcomeSet, ModelError> {
        let ctx = self.sig.context_rank(u)?;
        let ix = self
            .sig
            .allowed_index(int)
            .ok_or_else(|| ModelError::DisallowedIntervention(self.sig.render_intervention(int)))?;
        Ok(&self.outcomes[ctx][ix])
    }

    pub fn outcomes_by_index(&self, ctx: usize, allowed_ix: usize) -> &OutcomeSet {
        &self.outcomes[ctx][allowed_ix]
    }
}

fn check_outcome(sig: &Signature, int: &Intervention, v: &Assignment) -> Result<(), ModelError> {
    let total = sig.n_endo() == v.len() && sig.endo_ids().all(|id| v.get(id).is_some());
    if !total {
        return Err(ModelError::NotAnOutcome(sig.render_assignment(v)));
    }
    if !v.matches(int) {
        return Err(ModelError::NotEffective {
            intervention: sig.render_intervention(int),
            outcome: sig.render_assignment(v),
        });
    }
    Ok(())
}

/// Convenience constructor that collects named (context, intervention, set)
/// entries and checks the map is total with no duplicates.
#[derive(Debug)]
pub struct GsemBuilder {
    sig: Arc<Signature>,
    grid: Vec<Vec<Option<OutcomeSet>>>,
}

impl GsemBuilder {
    pub fn new(sig: Arc<Signature>) -> GsemBuilder {
        let grid = vec![vec![None; sig.allowed().len()]; sig.n_contexts()];
        GsemBuilder { sig, grid }
    }

    pub fn set(
        &mut self,
        u: &Assignment,
        int: &Intervention,
        outs: impl IntoIterator<Item = Assignment>,
    ) -> Result<&mut Self, ModelError> {
        let ctx = self.sig.context_rank(u)?;
        let ix = self
            .sig
            .allowed_index(int)
            .ok_or_else(|| ModelError::DisallowedIntervention(self.sig.render_intervention(int)))?;
        if self.grid[ctx][ix].is_some() {
            return Err(ModelError::DuplicateOutcomeSet {
                context: self.sig.render_assignment(u),
                intervention: self.sig.render_intervention(int),
            });
        }
        self.grid[ctx][ix] = Some(outs.into_iter().collect());
        Ok(self)
    }

    pub fn finish(self) -> Result<Gsem, ModelError> {
        let mut grid = Vec::with_capacity(self.grid.len());
        for (ctx, row) in self.grid.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (ix, set) in row.into_iter().enumerate() {
                match set {
                    Some(s) => out.push(s),
                    None => {
                        return Err(ModelError::MissingOutcomeSet {
                            context: self.sig.render_assignment(&self.sig.context(ctx)),
                            intervention: self.sig.render_intervention(&self.sig.allowed()[ix]),
                        })
                    }
                }
            }
            grid.push(out);
        }
        Gsem::new(self.sig, grid)
    }
}

/// Equations as total lookup tables: `tables[k][rank(args)]` is the value of
/// the `k`-th endogenous variable given an assignment to all other variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sem {
    sig: Arc<Signature>,
    tables: Vec<Vec<ValIx>>,
}

impl Sem {
    pub fn new(sig: Arc<Signature>, tables: Vec<Vec<ValIx>>) -> Result<Sem, ModelError> {
        if tables.len() != sig.n_endo() {
            let missing = sig
                .endo_ids()
                .nth(tables.len())
                .map(|id| sig.var(id).name().to_string())
                .unwrap_or_else(|| "?".into());
            return Err(ModelError::MissingEquation(missing));
        }
        for (k, x) in sig.endo_ids().enumerate() {
            let expected: usize = args_of(&sig, x).iter().map(|&v| sig.var(v).range().len()).product();
            if tables[k].len() != expected {
                return Err(ModelError::BadTable(sig.var(x).name().to_string()));
            }
            let n = sig.var(x).range().len() as ValIx;
            for &val in &tables[k] {
                if val >= n {
                    return Err(ModelError::BadTableValue { var: sig.var(x).name().to_string(), val });
                }
            }
        }
        Ok(Sem { sig, tables })
    }

    /// Builds the tables by evaluating `f` on every argument assignment.
    /// `f(x, args)` returns the value index of `x` given `args`, which is
    /// total over all variables except `x`.
    pub fn from_fn(
        sig: Arc<Signature>,
        mut f: impl FnMut(VarId, &Assignment) -> ValIx,
    ) -> Result<Sem, ModelError> {
        let mut tables = Vec::with_capacity(sig.n_endo());
        for x in sig.endo_ids() {
            let args = args_of(&sig, x);
            let table: Vec<ValIx> = enumerate_assignments(&sig, &args).map(|a| f(x, &a)).collect();
            tables.push(table);
        }
        Sem::new(sig, tables)
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// Table lookup `F_X(args)`; `args` must be total on all variables other
    /// than `x`.
    pub fn eval(&self, x: VarId, args: &Assignment) -> Result<ValIx, ModelError> {
        let k = self.endo_pos(x)?;
        let vars = args_of(&self.sig, x);
        let rank = assignment_rank(&self.sig, &vars, args)?;
        Ok(self.tables[k][rank])
    }

    fn endo_pos(&self, x: VarId) -> Result<usize, ModelError> {
        self.sig
            .endo_ids()
            .position(|id| id == x)
            .ok_or_else(|| CoreError::NotEndogenous(self.sig.var(x).name().to_string()).into())
    }

    pub(crate) fn tables(&self) -> &[Vec<ValIx>] {
        &self.tables
    }
}

/// All variables other than `x`, in canonical order: the argument list of
/// the equation for `x`.
pub fn args_of(sig: &Signature, x: VarId) -> Vec<VarId> {
    sig.all_ids().filter(|&v| v != x).collect()
}

/// Surgery: replaces the equation of every bound variable by the constant it
/// is bound to. The intervention need not be allowed; surgery is always
/// defined.
pub fn intervene_sem(m: &Sem, int: &Intervention) -> Sem {
    let sig = m.sig.clone();
    let mut tables = m.tables.clone();
    for (k, x) in sig.endo_ids().enumerate() {
        if let Some(val) = int.binds(x) {
            for slot in tables[k].iter_mut() {
                *slot = val;
            }
        }
    }
    Sem { sig, tables }
}

/// The outcomes of `m` under `int` in context `u`: all endogenous
/// assignments that satisfy every equation of the intervened model. May be
/// empty, and may have more than one element.
pub fn solve_sem(m: &Sem, u: &Assignment, int: &Intervention) -> Result<OutcomeSet, ModelError> {
    let sig = &m.sig;
    for id in sig.exo_ids() {
        if u.get(id).is_none() {
            return Err(ModelError::BadContext(sig.render_assignment(u)));
        }
    }
    let surgered = intervene_sem(m, int);
    let endo: Vec<VarId> = sig.endo_ids().collect();
    let mut out = OutcomeSet::new();
    for v in enumerate_assignments(sig, &endo) {
        let full = u.union(&v);
        let mut ok = true;
        for &x in &endo {
            let vars = args_of(sig, x);
            let args = crate::core::restrict(sig, &full, &vars)?;
            if surgered.eval(x, &args)? != v.get(x).unwrap() {
                ok = false;
                break;
            }
        }
        if ok {
            out.insert(v);
        }
    }
    Ok(out)
}

/// The GSEM with the same outcomes as `m` at every context and allowed
/// intervention.
pub fn sem_to_gsem(m: &Sem) -> Gsem {
    let sig = m.sig.clone();
    let grid: Vec<Vec<OutcomeSet>> = (0..sig.n_contexts())
        .map(|ctx| {
            let u = sig.context(ctx);
            sig.allowed()
                .iter()
                .map(|int| solve_sem(m, &u, int).expect("context is total by construction"))
                .collect()
        })
        .collect();
    Gsem::new(sig, grid).expect("solutions satisfy effectiveness by construction")
}

/// Either kind of model, as loaded from a model file.
#[derive(Debug, Clone)]
pub enum Model {
    Sem(Sem),
    Gsem(Gsem),
}

impl Model {
    pub fn sig(&self) -> &Arc<Signature> {
        match self {
            Model::Sem(m) => m.sig(),
            Model::Gsem(m) => m.sig(),
        }
    }

    /// The model's outcome map, converting a SEM by solving its equations.
    pub fn to_gsem(&self) -> Gsem {
        match self {
            Model::Sem(m) => sem_to_gsem(m),
            Model::Gsem(m) => m.clone(),
        }
    }
}

/// Outcome-map equality: same signature and the same outcomes at every
/// context and allowed intervention. SEMs are compared via their solutions.
pub fn equivalent(a: &Model, b: &Model) -> Result<bool, ModelError> {
    equivalent_gsem(&a.to_gsem(), &b.to_gsem())
}

pub fn equivalent_gsem(a: &Gsem, b: &Gsem) -> Result<bool, ModelError> {
    if *a.sig != *b.sig {
        return Err(ModelError::SignatureMismatch);
    }
    Ok(a.outcomes == b.outcomes)
}

/// True when every outcome of every allowed intervention assigns the
/// intervened values: holds for all well-constructed GSEMs.
pub fn effective(m: &Gsem) -> bool {
    let sig = m.sig();
    (0..sig.n_contexts()).all(|ctx| {
        sig.allowed()
            .iter()
            .enumerate()
            .all(|(ix, int)| m.outcomes_by_index(ctx, ix).iter().all(|v| v.matches(int)))
    })
}

/// `i1; i2` on models: double surgery composes right-biased, mirroring
/// [`compose_interventions`].
pub fn compose_then_intervene(m: &Sem, i1: &Intervention, i2: &Intervention) -> Sem {
    intervene_sem(m, &compose_interventions(i1, i2))
}
