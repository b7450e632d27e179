//! Line-oriented text format for signatures.
//!
//! ```text
//! # comments run to end of line
//! exo U : {u0, u1}
//! endo X : {0, 1}
//! allow []
//! allow [X<-1]
//! ```
//!
//! `allow *` declares every intervention over the endogenous variables.
//! Canonical rendering lists variables in declaration order and intervention
//! bindings alphabetically.

use std::sync::Arc;

use thiserror::Error;

use super::{Assignment, CoreError, Intervention, Signature, SignatureBuilder};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: CoreError },
}

impl TextError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> Self {
        TextError::Parse { line, msg: msg.into() }
    }
}

/// Comment-stripped, trimmed, nonempty lines with their 1-based numbers.
pub(crate) fn logical_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            (i + 1, body.trim().to_string())
        })
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_range(line: usize, s: &str) -> Result<Vec<String>, TextError> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| TextError::at(line, "expected a brace-delimited value list"))?;
    let mut out = Vec::new();
    for part in inner.split(',') {
        let tok = part.trim();
        if tok.is_empty() {
            continue;
        }
        if !ident(tok) {
            return Err(TextError::at(line, format!("bad value token `{tok}`")));
        }
        out.push(tok.to_string());
    }
    Ok(out)
}

/// Parses `[X<-1, Y<-0]` into name/value pairs; `[]` is the null intervention.
pub(crate) fn parse_binding_list(line: usize, s: &str) -> Result<Vec<(String, String)>, TextError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| TextError::at(line, "expected a bracket-delimited intervention"))?;
    let mut out = Vec::new();
    for part in inner.split(',') {
        let b = part.trim();
        if b.is_empty() {
            continue;
        }
        let (var, val) = b
            .split_once("<-")
            .ok_or_else(|| TextError::at(line, format!("bad binding `{b}`, expected VAR<-VALUE")))?;
        let (var, val) = (var.trim(), val.trim());
        if !ident(var) || !ident(val) {
            return Err(TextError::at(line, format!("bad binding `{b}`")));
        }
        out.push((var.to_string(), val.to_string()));
    }
    Ok(out)
}

/// Parses `(X=0, Y=1)` into an assignment; `()` is the empty assignment.
pub(crate) fn parse_assignment(sig: &Signature, line: usize, s: &str) -> Result<Assignment, TextError> {
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| TextError::at(line, "expected a parenthesized assignment"))?;
    let mut named: Vec<(String, String)> = Vec::new();
    for part in inner.split(',') {
        let b = part.trim();
        if b.is_empty() {
            continue;
        }
        let (var, val) = b
            .split_once('=')
            .ok_or_else(|| TextError::at(line, format!("bad entry `{b}`, expected VAR=VALUE")))?;
        named.push((var.trim().to_string(), val.trim().to_string()));
    }
    let pairs: Vec<(&str, &str)> = named.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
    Assignment::new(sig, &pairs).map_err(|source| TextError::Invalid { line, source })
}

/// Consumes the leading `exo`/`endo`/`allow` lines and builds the signature;
/// returns the number of logical lines consumed.
pub(crate) fn parse_signature_prefix(lines: &[(usize, String)]) -> Result<(Arc<Signature>, usize), TextError> {
    let mut b: SignatureBuilder = Signature::builder();
    let mut allows: Vec<(usize, String)> = Vec::new();
    let mut consumed = 0;
    for (line, text) in lines {
        let Some((head, rest)) = text.split_once(char::is_whitespace).map(|(h, r)| (h, r.trim()))
        else {
            break;
        };
        match head {
            "exo" | "endo" => {
                let (name, range) = rest
                    .split_once(':')
                    .ok_or_else(|| TextError::at(*line, "expected NAME : {values}"))?;
                let name = name.trim();
                if !ident(name) {
                    return Err(TextError::at(*line, format!("bad variable name `{name}`")));
                }
                let range = parse_range(*line, range.trim())?;
                if head == "exo" {
                    b.exo(name, range);
                } else {
                    b.endo(name, range);
                }
            }
            "allow" => {
                if rest == "*" {
                    b.allow_all();
                } else {
                    allows.push((*line, rest.to_string()));
                }
            }
            _ => break,
        }
        consumed += 1;
    }
    let vars_only = b.clone().finish().map_err(|source| {
        let line = lines.first().map(|(l, _)| *l).unwrap_or(1);
        TextError::Invalid { line, source }
    })?;
    for (line, text) in &allows {
        let named = parse_binding_list(*line, text)?;
        // validate against the declared variables so the error carries the
        // offending line
        let pairs: Vec<(&str, &str)> = named.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
        Intervention::new(&vars_only, &pairs)
            .map_err(|source| TextError::Invalid { line: *line, source })?;
        b.allow(named);
    }
    let sig = b.finish().map_err(|source| {
        let line = lines.first().map(|(l, _)| *l).unwrap_or(1);
        TextError::Invalid { line, source }
    })?;
    Ok((sig, consumed))
}

/// Parses a complete signature file.
pub fn parse_signature(text: &str) -> Result<Arc<Signature>, TextError> {
    let lines = logical_lines(text);
    let (sig, consumed) = parse_signature_prefix(&lines)?;
    if consumed < lines.len() {
        let (line, text) = &lines[consumed];
        return Err(TextError::at(*line, format!("unexpected line `{text}`")));
    }
    if sig.n_vars() == 0 {
        return Err(TextError::at(1, "signature declares no variables"));
    }
    Ok(sig)
}

/// Canonical rendering; `parse_signature` inverts it.
pub fn render_signature(sig: &Signature) -> String {
    let mut out = String::new();
    for id in sig.exo_ids() {
        let v = sig.var(id);
        out.push_str(&format!("exo {} : {{{}}}\n", v.name(), v.range().join(", ")));
    }
    for id in sig.endo_ids() {
        let v = sig.var(id);
        out.push_str(&format!("endo {} : {{{}}}\n", v.name(), v.range().join(", ")));
    }
    if sig.is_universal() {
        out.push_str("allow *\n");
    } else {
        for int in sig.allowed() {
            out.push_str(&format!("allow {}\n", sig.render_intervention(int)));
        }
    }
    out
}
