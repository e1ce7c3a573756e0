//! Compact textual forms for command-line input.
//!
//! * `z^n` is the Blaschke product with an `n`-fold zero at the origin.
//! * `blaschke(a, b, ...)` lists zeros as complex literals such as `0.3-0.2i`.
//! * Anything else is read as a rational expression in `z` and `i` with
//!   `+ - * / ^`, parentheses and implicit multiplication (`0.5z`, `2(z+1)`).

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::rational::RationalFn;
use crate::C64;

#[derive(Clone, Debug)]
pub enum Shorthand {
    Blaschke(BlaschkeProduct),
    Rational(RationalFn),
}

/// Reads `z^n` or `blaschke(...)` as a Blaschke product, otherwise a rational function.
pub fn parse_shorthand(s: &str) -> Result<Shorthand> {
    if let Some(b) = try_blaschke(s)? {
        return Ok(Shorthand::Blaschke(b));
    }
    Ok(Shorthand::Rational(parse_rational(s)?))
}

/// Reads a Blaschke product; plain `z` and `1` are accepted as degree 1 and 0.
pub fn parse_blaschke(s: &str) -> Result<BlaschkeProduct> {
    if let Some(b) = try_blaschke(s)? {
        return Ok(b);
    }
    match s.trim() {
        "z" => Ok(BlaschkeProduct::z_pow(1)),
        "1" => Ok(BlaschkeProduct::one()),
        _ => Err(Error::Parse {
            position: 0,
            message: "expected z^n or blaschke(z1, z2, ...)".into(),
        }),
    }
}

fn try_blaschke(s: &str) -> Result<Option<BlaschkeProduct>> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    if let Some(rest) = t.strip_prefix("z^") {
        if let Ok(n) = rest.trim().parse::<usize>() {
            return Ok(Some(BlaschkeProduct::z_pow(n)));
        }
    }
    let Some(rest) = t.strip_prefix("blaschke") else {
        return Ok(None);
    };
    let open = offset + "blaschke".len() + (rest.len() - rest.trim_start().len());
    let rest = rest.trim_start();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or(Error::Parse {
            position: open,
            message: "expected blaschke(z1, z2, ...)".into(),
        })?;
    let mut zeros = Vec::new();
    let mut pos = open + 1;
    if !inner.trim().is_empty() {
        for part in inner.split(',') {
            let value = parse_rational(part).map_err(|e| shift(e, pos))?;
            if !value.is_polynomial() || value.num().degree().unwrap_or(0) > 0 {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("'{}' is not a complex constant", part.trim()),
                });
            }
            zeros.push(value.num().coeff(0));
            pos += part.len() + 1;
        }
    }
    BlaschkeProduct::from_zeros(zeros).map(Some)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + by,
            message,
        },
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    I,
    Z,
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // scientific exponent
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &s[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("bad number '{text}'"),
                })?;
                out.push((start, Tok::Num(v)));
            }
            'i' => {
                out.push((i, Tok::I));
                i += 1;
            }
            'z' => {
                out.push((i, Tok::Z));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push((i, Tok::Op(ch)));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            _ => {
                return Err(Error::Parse {
                    position: i,
                    message: format!("unexpected character '{ch}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.here();
                    let rhs = self.power()?;
                    acc = acc.checked_div(&rhs).map_err(|e| Error::Parse {
                        position: at,
                        message: e.to_string(),
                    })?;
                }
                // implicit multiplication: 2z, 3(z+1), z(z-1), 0.5i
                Some(Tok::Num(_) | Tok::I | Tok::Z | Tok::Open) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.unary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let negative = matches!(self.peek(), Some(Tok::Op('-')));
            if negative {
                self.pos += 1;
            }
            let Some(Tok::Num(v)) = self.peek().cloned() else {
                return self.err("expected an integer exponent");
            };
            if v.fract() != 0.0 || v > 64.0 {
                return self.err("exponent must be an integer of modest size");
            }
            self.pos += 1;
            let mut out = RationalFn::one();
            for _ in 0..v as usize {
                out = &out * &base;
            }
            if negative {
                out = out.inverse()?;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<RationalFn> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<RationalFn> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(RationalFn::constant(C64::new(v, 0.0)))
            }
            Some(Tok::I) => {
                self.pos += 1;
                Ok(RationalFn::constant(C64::new(0.0, 1.0)))
            }
            Some(Tok::Z) => {
                self.pos += 1;
                Ok(RationalFn::polynomial(ComplexPoly::monomial(
                    C64::new(1.0, 0.0),
                    1,
                )))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("expected a number, i, z or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational expression in `z`.
pub fn parse_rational(s: &str) -> Result<RationalFn> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
    };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn powers_of_z() {
        let Shorthand::Blaschke(b) = parse_shorthand("z^3").unwrap() else {
            panic!("expected a Blaschke product");
        };
        assert_eq!(b.zeros(), &[c(0.0, 0.0); 3]);
    }

    #[test]
    fn blaschke_list() {
        let b = parse_blaschke("blaschke(0.5, 0.3333333333)").unwrap();
        assert_eq!(b.degree(), 2);
        assert!((b.zeros()[1] - c(0.3333333333, 0.0)).norm() < 1e-16);
        let b = parse_blaschke("blaschke(0.3-0.2i, -i/2)").unwrap();
        assert_eq!(b.zeros(), &[c(0.3, -0.2), c(0.0, -0.5)]);
        assert_eq!(parse_blaschke("blaschke()").unwrap().degree(), 0);
        assert!(parse_blaschke("blaschke(1.5)").is_err());
    }

    #[test]
    fn rational_expressions() {
        let f = parse_rational("(1 + 0.8333333333z)/1").unwrap();
        assert!((f.eval(c(1.0, 0.0)) - c(1.8333333333, 0.0)).norm() < 1e-15);

        let f = parse_rational("(z - 0.5)(z - 1/3)(z^2 + 1)/z^2").unwrap();
        let z = c(0.3, 0.7);
        let want = (z - 0.5) * (z - 1.0 / 3.0) * (z * z + 1.0) / (z * z);
        assert!((f.eval(z) - want).norm() < 1e-14);

        let f = parse_rational("2 - 3i + z^-1").unwrap();
        assert!((f.eval(c(0.5, 0.0)) - c(4.0, -3.0)).norm() < 1e-15);

        let f = parse_rational("1e-3z").unwrap();
        assert!((f.eval(c(2.0, 0.0)) - c(2e-3, 0.0)).norm() < 1e-18);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_rational("1 + $") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse_rational("(z + 1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        match parse_rational("1/(z - 1)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
    }
}
