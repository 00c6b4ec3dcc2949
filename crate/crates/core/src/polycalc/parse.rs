//! Small recursive-descent reader for polynomial expressions such as
//! `"1/2*x^2 - x*y + 3"`.

use num_traits::Zero;

use super::Poly;
use crate::error::{DiracError, Result};
use crate::rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(DiracError::Invalid(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| DiracError::Invalid("division only by nonzero constants".into()))?;
                acc = acc.scale(&(rational::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n
                        .parse()
                        .map_err(|_| DiracError::Invalid(format!("bad exponent {n:?}")))?;
                    Ok(base.pow(k))
                }
                other => Err(DiracError::Invalid(format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.nvars, rational::parse_q(&n)?))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let i = resolve(&id, self.names)
                    .ok_or_else(|| DiracError::Invalid(format!("unknown variable {id:?} (known: {:?})", self.names)))?;
                Ok(Poly::var(self.nvars, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(DiracError::Invalid("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(DiracError::Invalid(format!("unexpected token {other:?}"))),
        }
    }
}

/// Resolves a name against `names`, also accepting the positional alias
/// `<first letter of names[0]><index>` (e.g. `x0`, `t1`).
fn resolve(id: &str, names: &[String]) -> Option<usize> {
    if let Some(i) = names.iter().position(|n| n == id) {
        return Some(i);
    }
    let prefix = names.first()?.chars().next()?;
    let rest = id.strip_prefix(prefix)?;
    let i: usize = rest.parse().ok()?;
    (i < names.len()).then_some(i)
}

/// Parses an expression in the variables `names`.
pub fn parse_poly(s: &str, names: &[String]) -> Result<Poly> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        names,
        nvars: names.len(),
    };
    if p.toks.is_empty() {
        return Err(DiracError::Invalid("empty polynomial expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(DiracError::Invalid(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::default_names;
    use crate::rational::{q, qf};

    #[test]
    fn parses_expressions() {
        let n = default_names(2);
        let p = parse_poly("1/2*x^2 - x*y + 3", &n).unwrap();
        assert_eq!(p.eval(&[q(2), q(1)]), q(3));
        let p = parse_poly("-(x + 0.5)^2", &n).unwrap();
        assert_eq!(p.eval(&[q(0), q(0)]), qf(-1, 4));
        assert_eq!(parse_poly("x1", &n).unwrap(), Poly::var(2, 1));
    }

    #[test]
    fn rejects_garbage() {
        let n = default_names(1);
        assert!(parse_poly("y", &n).is_err());
        assert!(parse_poly("x/x", &n).is_err());
        assert!(parse_poly("x +", &n).is_err());
        assert!(parse_poly("(x", &n).is_err());
        assert!(parse_poly("", &n).is_err());
    }
}
