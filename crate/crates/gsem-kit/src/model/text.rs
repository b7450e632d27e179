//! Model files: a signature followed by a `gsem { ... }` or `sem { ... }`
//! block.
//!
//! ```text
//! exo U : {u0}
//! endo X : {0, 1}
//! endo Y : {0, 1}
//! allow *
//!
//! gsem {
//!   outcome (u0) [] = { (X=0, Y=0), (X=1, Y=1) }
//!   outcome (u0) [X<-0] = { (X=0, Y=0) }
//!   # ... one line per (context, allowed intervention)
//! }
//! ```
//!
//! Contexts are written as bare value tuples in exogenous declaration order.
//! A `sem` block instead gives one equation table per endogenous variable:
//!
//! ```text
//! sem {
//!   eq X(U, Y) = { (u0, 0)->0, (u0, 1)->1 }
//!   eq Y(U, X) = { (u0, 0)->0, (u0, 1)->0 }
//! }
//! ```

use std::sync::Arc;

use crate::core::text::{logical_lines, parse_signature_prefix, TextError};
use crate::core::{
    assignment_rank, enumerate_assignments, Assignment, Signature, ValIx, VarId,
};

use super::{args_of, Gsem, GsemBuilder, Model, ModelError, Sem};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Arrow,
    BindArrow,
}

fn lex_block(line: usize, text: &str) -> Result<Vec<Tok>, TextError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '[' => {
                toks.push(Tok::LBrack);
                i += 1;
            }
            ']' => {
                toks.push(Tok::RBrack);
                i += 1;
            }
            '{' => {
                toks.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                toks.push(Tok::RBrace);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '=' => {
                toks.push(Tok::Equals);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push(Tok::Arrow);
                i += 2;
            }
            '<' if chars.get(i + 1) == Some(&'-') => {
                toks.push(Tok::BindArrow);
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(TextError::at(line, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct Toks {
    line: usize,
    toks: Vec<Tok>,
    pos: usize,
}

impl Toks {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TextError> {
        Err(TextError::at(self.line, msg.into()))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), TextError> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => self.err(format!("expected {t:?}, got {got:?}")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, TextError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            got => self.err(format!("expected an identifier, got {got:?}")),
        }
    }
}

fn model_err(line: usize, e: ModelError) -> TextError {
    TextError::at(line, e.to_string())
}

/// Parses a context written as a bare value tuple, e.g. `(u0, 1)`.
fn context_tuple(sig: &Signature, t: &mut Toks) -> Result<Assignment, TextError> {
    t.expect(Tok::LParen)?;
    let mut values = Vec::new();
    while !t.eat(&Tok::RParen) {
        if !values.is_empty() {
            t.expect(Tok::Comma)?;
        }
        values.push(t.ident()?);
    }
    let exo: Vec<VarId> = sig.exo_ids().collect();
    if values.len() != exo.len() {
        return t.err(format!("context needs {} values, got {}", exo.len(), values.len()));
    }
    let named: Vec<(&str, &str)> = exo
        .iter()
        .zip(&values)
        .map(|(&v, x)| (sig.var(v).name(), x.as_str()))
        .collect();
    Assignment::new(sig, &named).map_err(|e| TextError::at(t.line, e.to_string()))
}

fn named_assignment(sig: &Signature, t: &mut Toks) -> Result<Assignment, TextError> {
    t.expect(Tok::LParen)?;
    let mut named: Vec<(String, String)> = Vec::new();
    while !t.eat(&Tok::RParen) {
        if !named.is_empty() {
            t.expect(Tok::Comma)?;
        }
        let var = t.ident()?;
        t.expect(Tok::Equals)?;
        let val = t.ident()?;
        named.push((var, val));
    }
    let pairs: Vec<(&str, &str)> = named.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
    Assignment::new(sig, &pairs).map_err(|e| TextError::at(t.line, e.to_string()))
}

fn intervention_toks(sig: &Signature, t: &mut Toks) -> Result<crate::core::Intervention, TextError> {
    t.expect(Tok::LBrack)?;
    let mut named: Vec<(String, String)> = Vec::new();
    while !t.eat(&Tok::RBrack) {
        if !named.is_empty() {
            t.expect(Tok::Comma)?;
        }
        let var = t.ident()?;
        t.expect(Tok::BindArrow)?;
        let val = t.ident()?;
        named.push((var, val));
    }
    let pairs: Vec<(&str, &str)> = named.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
    crate::core::Intervention::new(sig, &pairs).map_err(|e| TextError::at(t.line, e.to_string()))
}

fn parse_gsem_block(sig: &Arc<Signature>, t: &mut Toks) -> Result<Gsem, TextError> {
    let mut b = GsemBuilder::new(sig.clone());
    t.expect(Tok::LBrace)?;
    loop {
        match t.next() {
            Some(Tok::RBrace) => break,
            Some(Tok::Ident(kw)) if kw == "outcome" => {
                let u = context_tuple(sig, t)?;
                let int = intervention_toks(sig, t)?;
                t.expect(Tok::Equals)?;
                t.expect(Tok::LBrace)?;
                let mut outs = Vec::new();
                while !t.eat(&Tok::RBrace) {
                    if !outs.is_empty() {
                        t.expect(Tok::Comma)?;
                    }
                    outs.push(named_assignment(sig, t)?);
                }
                b.set(&u, &int, outs).map_err(|e| model_err(t.line, e))?;
            }
            got => return t.err(format!("expected `outcome` or `}}`, got {got:?}")),
        }
    }
    b.finish().map_err(|e| model_err(t.line, e))
}

fn parse_sem_block(sig: &Arc<Signature>, t: &mut Toks) -> Result<Sem, TextError> {
    t.expect(Tok::LBrace)?;
    let mut tables: Vec<Option<Vec<ValIx>>> = vec![None; sig.n_endo()];
    loop {
        match t.next() {
            Some(Tok::RBrace) => break,
            Some(Tok::Ident(kw)) if kw == "eq" => {
                let target = t.ident()?;
                let x = sig
                    .var_id(&target)
                    .filter(|&v| sig.is_endo(v))
                    .ok_or_else(|| TextError::at(t.line, format!("unknown endogenous variable `{target}`")))?;
                let expected = args_of(sig, x);
                t.expect(Tok::LParen)?;
                let mut arg_ids = Vec::new();
                while !t.eat(&Tok::RParen) {
                    if !arg_ids.is_empty() {
                        t.expect(Tok::Comma)?;
                    }
                    let name = t.ident()?;
                    let id = sig
                        .var_id(&name)
                        .ok_or_else(|| TextError::at(t.line, format!("unknown variable `{name}`")))?;
                    arg_ids.push(id);
                }
                {
                    let mut sorted = arg_ids.clone();
                    sorted.sort();
                    sorted.dedup();
                    if sorted != expected {
                        return t.err(format!(
                            "equation for `{target}` must list exactly the other variables"
                        ));
                    }
                }
                t.expect(Tok::Equals)?;
                t.expect(Tok::LBrace)?;
                let slots: usize =
                    expected.iter().map(|&v| sig.var(v).range().len()).product();
                let mut table: Vec<Option<ValIx>> = vec![None; slots];
                let mut first = true;
                while !t.eat(&Tok::RBrace) {
                    if !first {
                        t.expect(Tok::Comma)?;
                    }
                    first = false;
                    t.expect(Tok::LParen)?;
                    let mut values = Vec::new();
                    while !t.eat(&Tok::RParen) {
                        if !values.is_empty() {
                            t.expect(Tok::Comma)?;
                        }
                        values.push(t.ident()?);
                    }
                    t.expect(Tok::Arrow)?;
                    let out = t.ident()?;
                    if values.len() != arg_ids.len() {
                        return t.err(format!(
                            "entry needs {} argument values, got {}",
                            arg_ids.len(),
                            values.len()
                        ));
                    }
                    let named: Vec<(&str, &str)> = arg_ids
                        .iter()
                        .zip(&values)
                        .map(|(&v, x)| (sig.var(v).name(), x.as_str()))
                        .collect();
                    let args = Assignment::new(sig, &named)
                        .map_err(|e| TextError::at(t.line, e.to_string()))?;
                    let rank = assignment_rank(sig, &expected, &args)
                        .map_err(|e| TextError::at(t.line, e.to_string()))?;
                    let val = sig.var(x).value_index(&out).ok_or_else(|| {
                        TextError::at(t.line, format!("value `{out}` is not in the range of `{target}`"))
                    })?;
                    if table[rank].is_some() {
                        return t.err(format!("duplicate entry in the equation for `{target}`"));
                    }
                    table[rank] = Some(val);
                }
                let full: Option<Vec<ValIx>> = table.into_iter().collect();
                let full = full
                    .ok_or_else(|| TextError::at(t.line, format!("equation for `{target}` is not total")))?;
                let k = sig.endo_ids().position(|id| id == x).unwrap();
                if tables[k].is_some() {
                    return t.err(format!("duplicate equation for `{target}`"));
                }
                tables[k] = Some(full);
            }
            got => return t.err(format!("expected `eq` or `}}`, got {got:?}")),
        }
    }
    let mut done = Vec::with_capacity(tables.len());
    for (k, tab) in tables.into_iter().enumerate() {
        let name = sig.var(sig.endo_ids().nth(k).unwrap()).name().to_string();
        done.push(tab.ok_or_else(|| TextError::at(t.line, format!("missing equation for `{name}`")))?);
    }
    Sem::new(sig.clone(), done).map_err(|e| model_err(t.line, e))
}

/// Parses a model file: signature lines, then one `gsem`/`sem` block.
pub fn parse_model(text: &str) -> Result<Model, TextError> {
    let lines = logical_lines(text);
    let (sig, consumed) = parse_signature_prefix(&lines)?;
    let rest = &lines[consumed..];
    let Some((start_line, _)) = rest.first() else {
        return Err(TextError::at(1, "expected a `gsem { ... }` or `sem { ... }` block"));
    };
    let joined: String = rest.iter().map(|(_, l)| l.as_str()).collect::<Vec<_>>().join("\n");
    let toks = lex_block(*start_line, &joined)?;
    let mut t = Toks { line: *start_line, toks, pos: 0 };
    let model = match t.next() {
        Some(Tok::Ident(kw)) if kw == "gsem" => Model::Gsem(parse_gsem_block(&sig, &mut t)?),
        Some(Tok::Ident(kw)) if kw == "sem" => Model::Sem(parse_sem_block(&sig, &mut t)?),
        got => return t.err(format!("expected `gsem` or `sem`, got {got:?}")),
    };
    if t.peek().is_some() {
        return t.err("unexpected trailing input after the model block");
    }
    Ok(model)
}

fn render_context_tuple(sig: &Signature, u: &Assignment) -> String {
    let parts: Vec<&str> =
        sig.exo_ids().map(|v| sig.render_value(v, u.get(v).unwrap())).collect();
    format!("({})", parts.join(", "))
}

/// Canonical rendering of a GSEM (including its signature); `parse_model`
/// inverts it.
pub fn render_gsem(m: &Gsem) -> String {
    let sig = m.sig();
    let mut out = crate::core::render_signature(sig);
    out.push_str("\ngsem {\n");
    for ctx in 0..sig.n_contexts() {
        let u = sig.context(ctx);
        for (ix, int) in sig.allowed().iter().enumerate() {
            let set = m.outcomes_by_index(ctx, ix);
            let entries: Vec<String> = set.iter().map(|v| sig.render_assignment(v)).collect();
            let body = if entries.is_empty() { String::from("{ }") } else { format!("{{ {} }}", entries.join(", ")) };
            out.push_str(&format!(
                "  outcome {} {} = {}\n",
                render_context_tuple(sig, &u),
                sig.render_intervention(int),
                body
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Canonical rendering of a SEM (including its signature).
pub fn render_sem(m: &Sem) -> String {
    let sig = m.sig();
    let mut out = crate::core::render_signature(sig);
    out.push_str("\nsem {\n");
    for (k, x) in sig.endo_ids().enumerate() {
        let vars = args_of(sig, x);
        let names: Vec<&str> = vars.iter().map(|&v| sig.var(v).name()).collect();
        let mut entries = Vec::new();
        for (rank, args) in enumerate_assignments(sig, &vars).enumerate() {
            let tuple: Vec<&str> =
                vars.iter().map(|&v| sig.render_value(v, args.get(v).unwrap())).collect();
            let val = sig.render_value(x, m.tables()[k][rank]);
            entries.push(format!("({})->{}", tuple.join(", "), val));
        }
        out.push_str(&format!(
            "  eq {}({}) = {{ {} }}\n",
            sig.var(x).name(),
            names.join(", "),
            entries.join(", ")
        ));
    }
    out.push_str("}\n");
    out
}

pub fn render_model(m: &Model) -> String {
    match m {
        Model::Sem(s) => render_sem(s),
        Model::Gsem(g) => render_gsem(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Intervention;

    const SHELL_MODEL: &str = "\
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

    #[test]
    fn parses_the_gsem_form_and_round_trips() {
        let model = parse_model(SHELL_MODEL).unwrap();
        let Model::Gsem(g) = &model else { panic!("expected a gsem block") };
        let sig = g.sig().clone();
        let u = sig.context(0);
        let s1 = Intervention::new(&sig, &[("S1", "1")]).unwrap();
        let outs = g.outcomes(&u, &s1).unwrap();
        assert_eq!(outs.len(), 1);
        assert_eq!(sig.render_assignment(outs.iter().next().unwrap()), "(S1=1, S2=1, Z=1)");

        let rendered = render_model(&model);
        let again = parse_model(&rendered).unwrap();
        assert_eq!(render_model(&again), rendered);
    }

    #[test]
    fn parses_the_sem_form_and_auto_converts() {
        let text = "\
exo U : {u0}
endo X : {0, 1}
endo Y : {0, 1}
allow *

sem {
  eq X(U, Y) = { (u0, 0)->0, (u0, 1)->1 }
  eq Y(U, X) = { (u0, 0)->0, (u0, 1)->1 }
}
";
        let model = parse_model(text).unwrap();
        let g = model.to_gsem();
        let sig = g.sig();
        let u = sig.context(0);
        let outs = g.outcomes(&u, &Intervention::null()).unwrap();
        assert_eq!(outs.len(), 2); // the agreement cycle
        let rendered = render_model(&model);
        let again = parse_model(&rendered).unwrap();
        assert_eq!(render_model(&again), rendered);
    }

    #[test]
    fn rejects_partial_and_duplicate_outcome_maps() {
        let missing = "\
exo U : {u0}
endo X : {0, 1}
allow []
allow [X<-1]

gsem {
  outcome (u0) [] = { (X=0) }
}
";
        assert!(parse_model(missing).is_err());

        let dup = "\
exo U : {u0}
endo X : {0, 1}
allow []

gsem {
  outcome (u0) [] = { (X=0) }
  outcome (u0) [] = { (X=1) }
}
";
        assert!(parse_model(dup).is_err());
    }

    #[test]
    fn rejects_effectiveness_violations() {
        let bad = "\
exo U : {u0}
endo X : {0, 1}
allow [X<-1]

gsem {
  outcome (u0) [X<-1] = { (X=0) }
}
";
        let err = parse_model(bad).unwrap_err();
        assert!(err.to_string().contains("effectiveness"));
    }
}
