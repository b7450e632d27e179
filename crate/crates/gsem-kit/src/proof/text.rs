//! Derivation files: one `system` header line, then one numbered step per
//! line with its justification after a semicolon.
//!
//! ```text
//! system AX+basic
//! 1. [X<-1](X=1)                       ; axiom D4 [X<-1]
//! 2. [X<-1](X=1 -> (X=1 | X=0))       ; axiom D8 [X<-1] (X=1 -> (X=1 | X=0))
//! 3. ([X<-1](X=1) & [X<-1](X=1 -> (X=1 | X=0))) -> [X<-1](X=1 | X=0) ; axiom D7 [X<-1] (X=1) (X=1 | X=0)
//! ...
//! ```
//!
//! Justifications:
//!
//! ```text
//! taut
//! axiom D1 [b] X a b        axiom D7 [b] (p) (q)
//! axiom D2 [b] X            axiom D8 [b] (taut-event)
//! axiom D3 [b] W w (phi)    axiom D9 [b] (phi)
//! axiom D4 [b]              axiom D10a [b]
//! axiom D5 [b] Y y W w (rest-assignment)
//! axiom D6 X0 X1 ...        axiom D10b [b] (phi)
//! axiom D6+ (X:{x1,..}, Y:{..}) {[b1], [b2], ..}
//! mp ANTECEDENT IMPLICATION
//! d2plus PREMISE X {x1, x2, ..}
//! ```
//!
//! Step references are 1-based.

use std::sync::Arc;

use crate::axioms::{AxiomSystem, SchemaId, SchemaParams};
use crate::core::text::{logical_lines, parse_binding_list, TextError};
use crate::core::{Assignment, Intervention, ModelClass, Signature, ValIx, VarId};
use crate::lang::{parse_event_str, parse_raw, print_formula, Event};

use super::{Derivation, Justification, Step};

fn err(line: usize, msg: impl Into<String>) -> TextError {
    TextError::at(line, msg)
}

/// Splits off one balanced `(...)` group from the front of `s`.
fn take_group(line: usize, s: &str) -> Result<(String, &str), TextError> {
    let s = s.trim_start();
    if !s.starts_with('(') {
        return Err(err(line, "expected a parenthesized group"));
    }
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((s[..=i].to_string(), &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    Err(err(line, "unbalanced parentheses"))
}

fn take_bracket(line: usize, s: &str) -> Result<(String, &str), TextError> {
    let s = s.trim_start();
    if !s.starts_with('[') {
        return Err(err(line, "expected a bracketed intervention"));
    }
    match s.find(']') {
        Some(i) => Ok((s[..=i].to_string(), &s[i + 1..])),
        None => Err(err(line, "unclosed `[`")),
    }
}

fn take_word<'a>(line: usize, s: &'a str) -> Result<(&'a str, &'a str), TextError> {
    let s = s.trim_start();
    if s.is_empty() {
        return Err(err(line, "unexpected end of justification"));
    }
    let end = s.find(|c: char| c.is_whitespace()).unwrap_or(s.len());
    Ok((&s[..end], &s[end..]))
}

fn parse_int_group(sig: &Signature, line: usize, s: &str) -> Result<(Intervention, String), TextError> {
    let (group, rest) = take_bracket(line, s)?;
    let named = parse_binding_list(line, &group)?;
    let pairs: Vec<(&str, &str)> = named.iter().map(|(v, x)| (v.as_str(), x.as_str())).collect();
    let int = Intervention::new(sig, &pairs).map_err(|e| err(line, e.to_string()))?;
    Ok((int, rest.to_string()))
}

fn var_of(sig: &Signature, line: usize, name: &str) -> Result<VarId, TextError> {
    sig.var_id(name).ok_or_else(|| err(line, format!("unknown variable `{name}`")))
}

fn val_of(sig: &Signature, line: usize, var: VarId, token: &str) -> Result<ValIx, TextError> {
    sig.var(var)
        .value_index(token)
        .ok_or_else(|| err(line, format!("value `{token}` is not in the range of `{}`", sig.var(var).name())))
}

fn event_of(line: usize, group: &str) -> Result<Event, TextError> {
    let inner = group.trim().strip_prefix('(').and_then(|g| g.strip_suffix(')')).unwrap_or(group);
    parse_event_str(inner).map_err(|e| err(line, e.to_string()))
}

fn assignment_of(sig: &Signature, line: usize, group: &str) -> Result<Assignment, TextError> {
    crate::core::text::parse_assignment(sig, line, group.trim())
}

fn index_of(line: usize, word: &str, steps_so_far: usize) -> Result<usize, TextError> {
    let n: usize = word.parse().map_err(|_| err(line, format!("bad step reference `{word}`")))?;
    if n == 0 || n > steps_so_far {
        return Err(err(line, format!("step reference {n} is out of range")));
    }
    Ok(n - 1)
}

fn parse_value_set(sig: &Signature, line: usize, var: VarId, s: &str) -> Result<Vec<ValIx>, TextError> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|g| g.strip_suffix('}'))
        .ok_or_else(|| err(line, "expected a brace-delimited value set"))?;
    let mut out = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.push(val_of(sig, line, var, part)?);
    }
    Ok(out)
}

fn parse_justification(
    sig: &Signature,
    line: usize,
    text: &str,
    steps_so_far: usize,
) -> Result<Justification, TextError> {
    let (head, rest) = take_word(line, text)?;
    match head {
        "taut" => Ok(Justification::Taut),
        "mp" => {
            let (a, rest) = take_word(line, rest)?;
            let (b, _) = take_word(line, rest)?;
            Ok(Justification::Mp {
                antecedent: index_of(line, a, steps_so_far)?,
                implication: index_of(line, b, steps_so_far)?,
            })
        }
        "d2plus" => {
            let (p, rest) = take_word(line, rest)?;
            let (x, rest) = take_word(line, rest)?;
            let var = var_of(sig, line, x)?;
            let values = parse_value_set(sig, line, var, rest)?;
            Ok(Justification::D2Plus {
                premise: index_of(line, p, steps_so_far)?,
                var,
                values,
            })
        }
        "axiom" => {
            let (schema, rest) = take_word(line, rest)?;
            let schema = SchemaId::parse(schema)
                .ok_or_else(|| err(line, format!("unknown schema `{schema}`")))?;
            parse_axiom_params(sig, line, schema, rest).map(Justification::Axiom)
        }
        other => Err(err(line, format!("unknown justification `{other}`"))),
    }
}

fn parse_axiom_params(
    sig: &Signature,
    line: usize,
    schema: SchemaId,
    rest: &str,
) -> Result<SchemaParams, TextError> {
    match schema {
        SchemaId::D0 => {
            let taut = parse_raw(rest.trim()).map_err(|e| err(line, e.to_string()))?;
            Ok(SchemaParams::D0 { taut })
        }
        SchemaId::D1 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (x, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let var = var_of(sig, line, &x)?;
            let (a, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let (b, _) = take_word(line, &rest)?;
            Ok(SchemaParams::D1 {
                int,
                var,
                a: val_of(sig, line, var, &a)?,
                b: val_of(sig, line, var, b)?,
            })
        }
        SchemaId::D2 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (x, _) = take_word(line, &rest)?;
            Ok(SchemaParams::D2 { int, var: var_of(sig, line, x)? })
        }
        SchemaId::D3 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (w, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let w = var_of(sig, line, &w)?;
            let (wv, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let (group, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D3 {
                int,
                w,
                wval: val_of(sig, line, w, &wv)?,
                event: event_of(line, &group)?,
            })
        }
        SchemaId::D4 => {
            let (int, _) = parse_int_group(sig, line, rest)?;
            Ok(SchemaParams::D4 { int })
        }
        SchemaId::D5 => {
            let (base, rest) = parse_int_group(sig, line, rest)?;
            let (y, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let y = var_of(sig, line, &y)?;
            let (yv, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let yval = val_of(sig, line, y, &yv)?;
            let (w, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let w = var_of(sig, line, &w)?;
            let (wv, rest) = take_word(line, &rest).map(|(a, b)| (a.to_string(), b.to_string()))?;
            let wval = val_of(sig, line, w, &wv)?;
            let (group, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D5 { base, y, yval, w, wval, rest: assignment_of(sig, line, &group)? })
        }
        SchemaId::D6 => {
            let mut chain = Vec::new();
            let mut rest = rest.trim();
            while !rest.is_empty() {
                let (word, r) = take_word(line, rest)?;
                chain.push(var_of(sig, line, word)?);
                rest = r.trim_start();
            }
            Ok(SchemaParams::D6 { chain })
        }
        SchemaId::D6Plus => {
            let (group, rest) = take_group(line, rest)?;
            let mut vars = Vec::new();
            let mut value_sets = Vec::new();
            let mut cursor = group[1..group.len() - 1].trim();
            while !cursor.is_empty() {
                let colon =
                    cursor.find(':').ok_or_else(|| err(line, "expected VAR:{values} entries"))?;
                let var = var_of(sig, line, cursor[..colon].trim())?;
                cursor = cursor[colon + 1..].trim_start();
                let close = cursor.find('}').ok_or_else(|| err(line, "unclosed value set"))?;
                vars.push(var);
                value_sets.push(parse_value_set(sig, line, var, &cursor[..=close])?);
                cursor = cursor[close + 1..].trim_start().trim_start_matches(',').trim_start();
            }
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('{')
                .and_then(|g| g.strip_suffix('}'))
                .ok_or_else(|| err(line, "expected a brace-delimited intervention set"))?;
            let mut ints = Vec::new();
            let mut cursor = inner.trim().to_string();
            while !cursor.is_empty() {
                let (int, after) = parse_int_group(sig, line, &cursor)?;
                ints.push(int);
                cursor = after.trim_start().trim_start_matches(',').trim_start().to_string();
            }
            Ok(SchemaParams::D6Plus { vars, value_sets, ints })
        }
        SchemaId::D7 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (p, rest) = take_group(line, &rest)?;
            let (q, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D7 { int, p: event_of(line, &p)?, q: event_of(line, &q)? })
        }
        SchemaId::D8 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (group, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D8 { int, taut: event_of(line, &group)? })
        }
        SchemaId::D9 => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (group, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D9 { int, event: event_of(line, &group)? })
        }
        SchemaId::D10a => {
            let (int, _) = parse_int_group(sig, line, rest)?;
            Ok(SchemaParams::D10a { int })
        }
        SchemaId::D10b => {
            let (int, rest) = parse_int_group(sig, line, rest)?;
            let (group, _) = take_group(line, &rest)?;
            Ok(SchemaParams::D10b { int, event: event_of(line, &group)? })
        }
    }
}

/// Parses a derivation file against an already-loaded signature.
pub fn parse_derivation(sig: &Arc<Signature>, text: &str) -> Result<Derivation, TextError> {
    let lines = logical_lines(text);
    let mut it = lines.iter();
    let Some((sys_line, sys_text)) = it.next() else {
        return Err(err(1, "empty derivation file"));
    };
    let mut words = sys_text.split_whitespace();
    if words.next() != Some("system") {
        return Err(err(*sys_line, "expected a `system NAME` header line"));
    }
    let name = words.next().ok_or_else(|| err(*sys_line, "missing system name"))?;
    let cls = match words.next() {
        Some(tags) => ModelClass::parse(tags).map_err(|e| err(*sys_line, e.to_string()))?,
        None => ModelClass::empty(),
    };
    let system = AxiomSystem::parse(name, cls)
        .ok_or_else(|| err(*sys_line, format!("unknown axiom system `{name}`")))?;

    let mut steps = Vec::new();
    for (line, text) in it {
        let (number, rest) = text
            .split_once('.')
            .ok_or_else(|| err(*line, "expected `N. formula ; justification`"))?;
        let n: usize =
            number.trim().parse().map_err(|_| err(*line, format!("bad step number `{number}`")))?;
        if n != steps.len() + 1 {
            return Err(err(*line, format!("expected step number {}, got {n}", steps.len() + 1)));
        }
        let (formula_text, just_text) = rest
            .split_once(';')
            .ok_or_else(|| err(*line, "missing `; justification`"))?;
        let formula = parse_raw(formula_text.trim()).map_err(|e| err(*line, e.to_string()))?;
        let justification = parse_justification(sig, *line, just_text.trim(), steps.len())?;
        steps.push(Step { formula, justification });
    }
    Ok(Derivation { system, sig: sig.clone(), steps })
}

fn render_justification(sig: &Signature, j: &Justification) -> String {
    match j {
        Justification::Taut => "taut".into(),
        Justification::Mp { antecedent, implication } => {
            format!("mp {} {}", antecedent + 1, implication + 1)
        }
        Justification::D2Plus { premise, var, values } => {
            let vals: Vec<&str> = values.iter().map(|&x| sig.render_value(*var, x)).collect();
            format!("d2plus {} {} {{{}}}", premise + 1, sig.var(*var).name(), vals.join(", "))
        }
        Justification::Axiom(params) => {
            let body = match params {
                SchemaParams::D0 { taut } => print_formula(taut),
                SchemaParams::D1 { int, var, a, b } => format!(
                    "{} {} {} {}",
                    sig.render_intervention(int),
                    sig.var(*var).name(),
                    sig.render_value(*var, *a),
                    sig.render_value(*var, *b)
                ),
                SchemaParams::D2 { int, var } => {
                    format!("{} {}", sig.render_intervention(int), sig.var(*var).name())
                }
                SchemaParams::D3 { int, w, wval, event } => format!(
                    "{} {} {} ({event})",
                    sig.render_intervention(int),
                    sig.var(*w).name(),
                    sig.render_value(*w, *wval)
                ),
                SchemaParams::D4 { int } => sig.render_intervention(int),
                SchemaParams::D5 { base, y, yval, w, wval, rest } => format!(
                    "{} {} {} {} {} {}",
                    sig.render_intervention(base),
                    sig.var(*y).name(),
                    sig.render_value(*y, *yval),
                    sig.var(*w).name(),
                    sig.render_value(*w, *wval),
                    sig.render_assignment(rest)
                ),
                SchemaParams::D6 { chain } => {
                    let names: Vec<&str> = chain.iter().map(|&v| sig.var(v).name()).collect();
                    names.join(" ")
                }
                SchemaParams::D6Plus { vars, value_sets, ints } => {
                    let entries: Vec<String> = vars
                        .iter()
                        .zip(value_sets)
                        .map(|(&v, set)| {
                            let vals: Vec<&str> =
                                set.iter().map(|&x| sig.render_value(v, x)).collect();
                            format!("{}:{{{}}}", sig.var(v).name(), vals.join(", "))
                        })
                        .collect();
                    let is: Vec<String> =
                        ints.iter().map(|i| sig.render_intervention(i)).collect();
                    format!("({}) {{{}}}", entries.join(", "), is.join(", "))
                }
                SchemaParams::D7 { int, p, q } => {
                    format!("{} ({p}) ({q})", sig.render_intervention(int))
                }
                SchemaParams::D8 { int, taut } => {
                    format!("{} ({taut})", sig.render_intervention(int))
                }
                SchemaParams::D9 { int, event } => {
                    format!("{} ({event})", sig.render_intervention(int))
                }
                SchemaParams::D10a { int } => sig.render_intervention(int),
                SchemaParams::D10b { int, event } => {
                    format!("{} ({event})", sig.render_intervention(int))
                }
            };
            format!("axiom {} {}", params.schema().name(), body)
        }
    }
}

/// Renders a derivation in the file format; `parse_derivation` inverts it.
pub fn render_derivation(d: &Derivation) -> String {
    // class-tagged systems render as `system AX*basic coh,acyc`
    let header = match d.system.name().split_once('{') {
        Some((base, cls)) => format!("{base} {}", cls.trim_end_matches('}')).trim_end().to_string(),
        None => d.system.name().to_string(),
    };
    let mut out = format!("system {header}\n");
    for (i, step) in d.steps.iter().enumerate() {
        out.push_str(&format!(
            "{}. {} ; {}\n",
            i + 1,
            print_formula(&step.formula),
            render_justification(&d.sig, &step.justification)
        ));
    }
    out
}
