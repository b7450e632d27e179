//! Recursive-descent parser for the formula grammar.

use crate::core::Signature;

use super::{Bindings, CausalFormula, Event, LangError, WfMode};

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LangError> {
        Err(LangError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LangError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String, LangError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn arrow(&mut self) -> bool {
        // `->`, never part of `<-`
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&'-') && self.chars.get(self.pos + 1) == Some(&'>') {
            self.pos += 2;
            true
        } else {
            false
        }
    }

    // -- events ------------------------------------------------------------

    fn event(&mut self) -> Result<Event, LangError> {
        let lhs = self.event_or()?;
        if self.arrow() {
            let rhs = self.event()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn event_or(&mut self) -> Result<Event, LangError> {
        let mut lhs = self.event_and()?;
        while self.eat('|') {
            lhs = lhs.or(self.event_and()?);
        }
        Ok(lhs)
    }

    fn event_and(&mut self) -> Result<Event, LangError> {
        let mut lhs = self.event_unary()?;
        while self.eat('&') {
            lhs = lhs.and(self.event_unary()?);
        }
        Ok(lhs)
    }

    fn event_unary(&mut self) -> Result<Event, LangError> {
        if self.eat('!') {
            Ok(self.event_unary()?.not())
        } else {
            self.event_primary()
        }
    }

    fn event_primary(&mut self) -> Result<Event, LangError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.event()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let name = self.ident()?;
                match name.as_str() {
                    "true" => Ok(Event::True),
                    "false" => Ok(Event::False),
                    _ => {
                        self.expect('=')?;
                        let val = self.ident()?;
                        Ok(Event::prim(name, val))
                    }
                }
            }
            _ => self.err("expected an event"),
        }
    }

    // -- causal formulas ---------------------------------------------------

    fn causal(&mut self) -> Result<CausalFormula, LangError> {
        let lhs = self.causal_or()?;
        if self.arrow() {
            let rhs = self.causal()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn causal_or(&mut self) -> Result<CausalFormula, LangError> {
        let mut lhs = self.causal_and()?;
        while self.eat('|') {
            lhs = lhs.or(self.causal_and()?);
        }
        Ok(lhs)
    }

    fn causal_and(&mut self) -> Result<CausalFormula, LangError> {
        let mut lhs = self.causal_unary()?;
        while self.eat('&') {
            lhs = lhs.and(self.causal_unary()?);
        }
        Ok(lhs)
    }

    fn causal_unary(&mut self) -> Result<CausalFormula, LangError> {
        if self.eat('!') {
            Ok(self.causal_unary()?.not())
        } else {
            self.causal_primary()
        }
    }

    fn causal_primary(&mut self) -> Result<CausalFormula, LangError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let f = self.causal()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('[') => {
                self.pos += 1;
                let b = self.bindings(']')?;
                let e = self.modal_body()?;
                Ok(CausalFormula::Box(b, e))
            }
            Some('<') => {
                self.pos += 1;
                let b = self.bindings('>')?;
                let e = self.modal_body()?;
                Ok(CausalFormula::Diamond(b, e))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let name = self.ident()?;
                match name.as_str() {
                    "true" => Ok(CausalFormula::True),
                    "false" => Ok(CausalFormula::False),
                    _ => self.err(format!(
                        "primitive event `{name}=...` must appear inside [..](..) or <..>(..)"
                    )),
                }
            }
            _ => self.err("expected a causal formula"),
        }
    }

    fn modal_body(&mut self) -> Result<Event, LangError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.event()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.event_primary(),
        }
    }

    fn bindings(&mut self, close: char) -> Result<Bindings, LangError> {
        let mut pairs = Vec::new();
        if self.eat(close) {
            return Ok(Bindings::none());
        }
        loop {
            let var = self.ident()?;
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&'<') && self.chars.get(self.pos + 1) == Some(&'-') {
                self.pos += 2;
            } else {
                return self.err("expected `<-` in binding");
            }
            let val = self.ident()?;
            pairs.push((var, val));
            if self.eat(',') {
                continue;
            }
            self.expect(close)?;
            break;
        }
        Bindings::new(pairs)
    }

    fn finish(&mut self) -> Result<(), LangError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

/// Parses a causal formula with no signature validation.
pub fn parse_raw(text: &str) -> Result<CausalFormula, LangError> {
    let mut p = Parser::new(text);
    let f = p.causal()?;
    p.finish()?;
    Ok(f)
}

/// Parses an event with no signature validation.
pub fn parse_event_str(text: &str) -> Result<Event, LangError> {
    let mut p = Parser::new(text);
    let e = p.event()?;
    p.finish()?;
    Ok(e)
}

/// Parses and validates a causal formula; interventions must be allowed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<CausalFormula, LangError> {
    let f = parse_raw(text)?;
    super::well_formed(sig, &f, WfMode::AllowedOnly)?;
    Ok(f)
}

/// Like [`parse_formula`] but accepts well-formed formulas about disallowed
/// interventions.
pub fn parse_formula_any(text: &str, sig: &Signature) -> Result<CausalFormula, LangError> {
    let f = parse_raw(text)?;
    super::well_formed(sig, &f, WfMode::AnyIntervention)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::print_formula;

    fn shell() -> std::sync::Arc<Signature> {
        crate::core::parse_signature(
            "exo U : {u0}\nendo S1 : {0,1}\nendo S2 : {0,1}\nendo Z : {0,1}\nallow [S1<-1]\nallow [S2<-1]\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_shell_game_box() {
        let sig = shell();
        let f = parse_formula("[S1<-1](Z=1)", &sig).unwrap();
        assert_eq!(
            f,
            CausalFormula::Box(Bindings::of(&[("S1", "1")]).unwrap(), Event::prim("Z", "1"))
        );
    }

    #[test]
    fn diamond_is_kept_structurally() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        let f = parse_formula("<X<-0>true", &sig).unwrap();
        assert_eq!(f, CausalFormula::Diamond(Bindings::of(&[("X", "0")]).unwrap(), Event::True));
        // definitionally equal to the negated box after normalization
        let g = parse_formula("!([X<-0](!(true)))", &sig).unwrap();
        assert_eq!(super::super::normalize(&f), super::super::normalize(&g));
    }

    #[test]
    fn out_of_range_value_is_rejected() {
        let sig = crate::core::parse_signature("exo U : {u0}\nendo X : {0,1}\nallow *\n").unwrap();
        let err = parse_formula("[X<-2](X=0)", &sig).unwrap_err();
        assert_eq!(err, LangError::OutOfRangeValue { var: "X".into(), value: "2".into() });
        let err = parse_formula("[X<-0](X=2)", &sig).unwrap_err();
        assert_eq!(err, LangError::OutOfRangeValue { var: "X".into(), value: "2".into() });
    }

    #[test]
    fn disallowed_intervention_is_rejected_by_default() {
        let sig = shell();
        let err = parse_formula("[S1<-0](Z=1)", &sig).unwrap_err();
        assert!(matches!(err, LangError::DisallowedIntervention(_)));
        // but accepted by the relaxed entry point
        parse_formula_any("[S1<-0](Z=1)", &sig).unwrap();
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_raw("[](").unwrap_err();
        assert!(matches!(err, LangError::Syntax { pos: 3, .. }));
        let err = parse_raw("[X<-1](X=1) extra").unwrap_err();
        assert!(matches!(err, LangError::Syntax { .. }));
    }

    #[test]
    fn bindings_are_canonicalized_alphabetically() {
        let f = parse_raw("[Z<-1, A<-0](true)").unwrap();
        assert_eq!(print_formula(&f), "[A<-0, Z<-1](true)");
        assert!(matches!(parse_raw("[X<-0, X<-1](true)"), Err(LangError::DuplicateBinding(_))));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_raw("[](X=0 & Y=1 | !Z=0 -> true)").unwrap();
        let CausalFormula::Box(_, e) = f else { panic!() };
        assert_eq!(
            e,
            Event::prim("X", "0")
                .and(Event::prim("Y", "1"))
                .or(Event::prim("Z", "0").not())
                .implies(Event::True)
        );
        // causal connectives mirror the event ones
        let g = parse_raw("[](true) & <>(true) -> false").unwrap();
        assert_eq!(
            g,
            CausalFormula::Box(Bindings::none(), Event::True)
                .and(CausalFormula::Diamond(Bindings::none(), Event::True))
                .implies(CausalFormula::False)
        );
    }

    #[test]
    fn causal_level_bare_event_is_an_error() {
        assert!(matches!(parse_raw("X=0"), Err(LangError::Syntax { .. })));
    }
}
