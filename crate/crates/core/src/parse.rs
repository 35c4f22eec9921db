//! Polynomial expressions with rational coefficients.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" INT)?
//! primary := INT ("/" INT)? | IDENT | "(" expr ")"
//! ```
//!
//! Juxtaposition is rejected: `2x` must be written `2*x`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{vars_of, MPoly, Rat, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: Vars,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(') => {
                    return self.err("implicit multiplication is not allowed; use `*`")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(e) => match u32::try_from(&e) {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => self.err("exponent too large"),
            },
            _ => {
                self.at -= 1;
                self.err("expected a non-negative integer exponent")
            }
        }
    }

    fn primary(&mut self) -> Result<MPoly> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let mut c = Rat::from_integer(n);
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => c /= Rat::from_integer(d),
                        Tok::Int(_) => return Err(Error::Parse { pos: dpos, msg: "division by zero".into() }),
                        _ => return Err(Error::Parse { pos: dpos, msg: "expected an integer denominator".into() }),
                    }
                }
                Ok(MPoly::constant(self.vars.clone(), c))
            }
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MPoly::var_at(self.vars.clone(), i)),
                None => Err(Error::Parse { pos, msg: format!("unknown variable `{name}`") }),
            },
            Tok::Sym('(') => {
                let e = self.expr()?;
                if *self.peek() != Tok::Sym(')') {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            Tok::Sym(c) => Err(Error::Parse { pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

/// Parse `src` over the variables `vars` followed by `params`.
pub fn parse_poly(src: &str, vars: &[&str], params: &[&str]) -> Result<MPoly> {
    for p in params {
        if vars.contains(p) {
            return Err(Error::Invalid(format!("parameter `{p}` clashes with a variable")));
        }
    }
    let names: Vec<&str> = vars.iter().chain(params).copied().collect();
    let mut p = Parser { toks: lex(src)?, at: 0, vars: vars_of(&names) };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Sym(')') => p.err("unbalanced `)`"),
        _ => p.err("expected an operator"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::poly::testing::poly;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn examples() {
        assert_eq!(parse_poly("z^2 - x*y", &XYZ, &[]).unwrap(), poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]));
        let bs = parse_poly("z^5 + t*y^6*z + x*y^7 + x^15", &XYZ, &["t"]).unwrap();
        assert_eq!(bs.nterms(), 4);
        assert_eq!(bs.coeff(&[0, 6, 1, 1]), ratio(1, 1));
        let half = parse_poly("1/2*x^2", &XYZ, &[]).unwrap();
        assert_eq!(half.coeff(&[2, 0, 0]), ratio(1, 2));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_poly("-x^2 + 2*(y - z)*x", &XYZ, &[]).unwrap();
        let q = parse_poly("2*x*y - 2*x*z - x*x", &XYZ, &[]).unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_poly("--x", &XYZ, &[]).unwrap(), parse_poly("x", &XYZ, &[]).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match parse_poly(s, &XYZ, &[]) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("2x"), 1);
        assert_eq!(pos("x + w"), 4);
        assert_eq!(pos("x + "), 4);
        assert_eq!(pos("(x + y"), 6);
        assert_eq!(pos("x ^ y"), 4);
        assert_eq!(pos("x $ y"), 2);
        assert_eq!(pos("1/0"), 2);
        assert!(matches!(parse_poly("x", &XYZ, &["x"]), Err(Error::Invalid(_))));
    }

    #[test]
    fn display_round_trips() {
        for s in ["z^5 + t*y^6*z + x*y^7 + x^15", "-3/4*x^2*t + y - 7", "0", "(x - 1/3)^3"] {
            let p = parse_poly(s, &XYZ, &["t"]).unwrap();
            assert_eq!(parse_poly(&p.to_string(), &XYZ, &["t"]).unwrap(), p, "{s}");
        }
    }
}
