//! Text syntax for path-algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor (('·' | '*')? factor)*
//! factor := scalar | ident '\''? | '(' expr ')' | '[' expr ',' expr ']' | '{' expr ',' expr '}'
//! scalar := digits ('/' digits)?
//! ```
//!
//! `e'` is the ghost edge `e*`, `[x,y]` the bracket and `{x,y}` the circle
//! product. A bare scalar `c` stands for `c` times the sum of all vertices.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::lpa::{AlgebraHandle, Element, LeavittAlgebra, LpaError};
use crate::scalar::FieldElem;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn perr(pos: usize, msg: impl Into<String>) -> LpaError {
    LpaError::Parse { pos, msg: msg.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, LpaError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '.') {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((pos, Tok::Ident(s)));
        } else if "+-*·/'()[]{},".contains(ch) {
            out.push((pos, Tok::Sym(ch)));
            it.next();
        } else {
            return Err(perr(pos, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

enum Value {
    Scalar(FieldElem),
    Elem(Element),
}

struct Parser<'a> {
    alg: &'a Arc<LeavittAlgebra>,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LpaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.pos(), format!("expected `{c}`")))
        }
    }

    fn to_elem(&self, v: Value) -> Element {
        match v {
            Value::Elem(e) => e,
            Value::Scalar(c) => self.alg.scalar_vertex_sum(c),
        }
    }

    fn add(&self, a: Value, b: Value, sign: i64) -> Value {
        let f = self.alg.field();
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &(&y * &f.from_i64(sign))),
            (a, b) => {
                let (a, b) = (self.to_elem(a), self.to_elem(b));
                Value::Elem(&a + &b.scale(&f.from_i64(sign)))
            }
        }
    }

    fn mul(&self, a: Value, b: Value) -> Value {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(c), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(c)) => Value::Elem(e.scale(&c)),
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(&x * &y),
        }
    }

    fn expr(&mut self) -> Result<Value, LpaError> {
        let mut acc = self.term()?;
        loop {
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(acc);
            };
            let t = self.term()?;
            acc = self.add(acc, t, sign);
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(' | '[' | '{'))
        )
    }

    fn term(&mut self) -> Result<Value, LpaError> {
        let neg = self.eat('-');
        let mut acc = self.factor()?;
        loop {
            if self.eat('·') || self.eat('*') {
                let f = self.factor()?;
                acc = self.mul(acc, f);
            } else if self.starts_factor() {
                let f = self.factor()?;
                acc = self.mul(acc, f);
            } else {
                break;
            }
        }
        if neg {
            acc = self.mul(Value::Scalar(self.alg.field().from_i64(-1)), acc);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, LpaError> {
        let pos = self.pos();
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return Err(perr(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Num(n) => {
                let f = self.alg.field();
                if self.eat('/') {
                    let dpos = self.pos();
                    let Some(Tok::Num(d)) = self.peek().cloned() else {
                        return Err(perr(dpos, "expected a denominator"));
                    };
                    self.at += 1;
                    let c = f.ratio(&n, &d).map_err(|e| perr(dpos, e.to_string()))?;
                    Ok(Value::Scalar(c))
                } else {
                    Ok(Value::Scalar(f.from_bigint(&n)))
                }
            }
            Tok::Ident(id) => {
                let ghost = self.eat('\'');
                let g = self.alg.graph();
                match (g.vertex_index(&id), g.edge_index(&id)) {
                    (Some(_), Some(_)) => Err(perr(pos, format!("`{id}` names both a vertex and an edge"))),
                    (Some(v), None) => Ok(Value::Elem(self.alg.vertex(v))),
                    (None, Some(e)) => Ok(Value::Elem(if ghost { self.alg.ghost(e) } else { self.alg.edge(e) })),
                    (None, None) => Err(perr(pos, format!("unknown vertex or edge `{id}`"))),
                }
            }
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym(open @ ('[' | '{')) => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(if open == '[' { ']' } else { '}' })?;
                let (a, b) = (self.to_elem(a), self.to_elem(b));
                let r = if open == '[' { a.bracket(&b) } else { a.circle(&b) };
                Ok(Value::Elem(r.expect("same algebra")))
            }
            Tok::Sym(c) => Err(perr(pos, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `src` into a normal-form element of `alg`.
pub fn parse_element(alg: &Arc<LeavittAlgebra>, src: &str) -> Result<Element, LpaError> {
    let mut p = Parser {
        alg,
        toks: tokenize(src)?,
        at: 0,
        end: src.len(),
    };
    if p.toks.is_empty() {
        return Err(perr(0, "empty expression"));
    }
    let v = p.expr()?;
    if p.at < p.toks.len() {
        return Err(perr(p.pos(), "unexpected trailing input"));
    }
    Ok(p.to_elem(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::scalar::FieldSpec;

    fn alg(json: &str, f: FieldSpec) -> Arc<LeavittAlgebra> {
        LeavittAlgebra::new(Graph::from_json(json).unwrap(), f)
    }

    const E2: &str = r#"{"vertices":[{"id":"v"}],"edges":[{"id":"c","src":"v","dst":"v"}]}"#;
    const E4: &str = r#"{"vertices":[{"id":"u"},{"id":"u1"},{"id":"u2"}],
        "edges":[{"id":"e1","src":"u","dst":"u1"},{"id":"e2","src":"u","dst":"u2"}]}"#;
    const E4F: &str = r#"{"vertices":[{"id":"u","infinite_emitter":true},{"id":"u1"}],
        "edges":[{"id":"e1","src":"u","dst":"u1"}]}"#;

    #[test]
    fn eval_examples() {
        let q = FieldSpec::Rational;
        assert_eq!(parse_element(&alg(E2, q), "c'·c").unwrap().to_string(), "v");
        assert_eq!(parse_element(&alg(E4, q), "e2·e2'").unwrap().to_string(), "u - e1·e1'");
        assert_eq!(
            parse_element(&alg(E4F, q), "[e1 - e1', u]").unwrap().to_string(),
            "-e1 - e1'"
        );
        assert_eq!(parse_element(&alg(E4, q), "{u1, u1}").unwrap().to_string(), "2·u1");
        assert_eq!(
            parse_element(&alg(E4, q), "1/2 e1 * e1' + 3").unwrap().to_string(),
            "3·u + 3·u1 + 3·u2 + 1/2·e1·e1'"
        );
        assert_eq!(
            parse_element(&alg(E4, q), "(e1 - e2)(e1' + e2')").unwrap().to_string(),
            "-u + 2·e1·e1'"
        );
    }

    #[test]
    fn parse_errors_have_positions() {
        let a = alg(E4, FieldSpec::Rational);
        assert_eq!(
            parse_element(&a, "e1 + x"),
            Err(LpaError::Parse {
                pos: 5,
                msg: "unknown vertex or edge `x`".into()
            })
        );
        assert!(matches!(
            parse_element(&a, "[e1, e2"),
            Err(LpaError::Parse { pos: 7, .. })
        ));
        assert!(matches!(parse_element(&a, "e1 $"), Err(LpaError::Parse { pos: 3, .. })));
        assert!(matches!(parse_element(&a, ""), Err(LpaError::Parse { pos: 0, .. })));
        assert!(matches!(parse_element(&a, "1/0"), Err(LpaError::Parse { .. })));
        let amb = alg(
            r#"{"vertices":[{"id":"a"},{"id":"b"}],"edges":[{"id":"a","src":"a","dst":"b"}]}"#,
            FieldSpec::Rational,
        );
        assert!(matches!(
            parse_element(&amb, "b + a"),
            Err(LpaError::Parse { pos: 4, .. })
        ));
    }

    #[test]
    fn printed_forms_reparse() {
        for f in [FieldSpec::Rational, FieldSpec::Prime(3)] {
            let a = alg(E4, f);
            for src in ["e2·e2' - 1/2 e1", "[e1 - e1', e2·e1']", "{e1, e1'} + u2"] {
                let Ok(x) = parse_element(&a, src) else {
                    continue;
                };
                let y = parse_element(&a, &x.to_string()).unwrap();
                assert_eq!(x, y);
            }
        }
    }
}
