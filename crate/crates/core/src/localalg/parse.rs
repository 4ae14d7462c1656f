//! Polynomial input: a small string grammar and the structured JSON form.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := power (('*' | '/')? power)*      juxtaposition multiplies
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! variable := ('X' | 'x') digits?            bare X means X1
//! ```
//! Division is only by nonzero constants, so `1/2*X1` and `X1/2` both work.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use super::poly::{mono_exp, mono_var, Poly, MAX_VARS};
use crate::error::{Error, Result};
use crate::linalg::{parse_rational, Field, Rationals};

const NO_TRUNCATION: u32 = u32::MAX;
const MAX_DEGREE: u32 = 255;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

type QPoly = Poly<Rationals>;

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn expr(&mut self) -> Result<QPoly> {
        let q = Rationals;
        let mut acc = QPoly::zero();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&q, &t) } else { acc.add(&q, &t) };
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn starts_atom(c: u8) -> bool {
        c.is_ascii_digit() || c == b'X' || c == b'x' || c == b'('
    }

    fn term(&mut self) -> Result<QPoly> {
        let q = Rationals;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = self.checked_mul(&acc, &rhs)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    let c = constant_value(&rhs)
                        .ok_or_else(|| self.err("division by a non-constant"))?;
                    let inv = q.inv(&c).ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&q, &inv);
                }
                Some(c) if Self::starts_atom(c) => {
                    let rhs = self.power()?;
                    acc = self.checked_mul(&acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn checked_mul(&self, a: &QPoly, b: &QPoly) -> Result<QPoly> {
        let da = max_var_exps(a);
        let db = max_var_exps(b);
        if da.iter().zip(&db).any(|(x, y)| x + y > MAX_DEGREE) {
            return Err(self.err("exponent too large"));
        }
        Ok(a.mul(&Rationals, b, NO_TRUNCATION))
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let e: u32 = self
            .digits()
            .parse()
            .map_err(|_| self.err("expected an exponent"))?;
        if max_var_exps(&base).iter().any(|&x| x.saturating_mul(e) > MAX_DEGREE) {
            return Err(self.err("exponent too large"));
        }
        let q = Rationals;
        let mut acc = QPoly::constant(&q, q.one());
        for _ in 0..e {
            acc = acc.mul(&q, &base, NO_TRUNCATION);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<QPoly> {
        let q = Rationals;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("digits");
                Ok(QPoly::constant(&q, BigRational::from_integer(n)))
            }
            Some(b'X') | Some(b'x') => {
                self.pos += 1;
                let d = self.digits();
                let idx: usize = if d.is_empty() {
                    1
                } else {
                    d.parse().map_err(|_| self.err("bad variable index"))?
                };
                if idx == 0 || idx > self.num_vars {
                    return Err(self.err(&format!(
                        "variable X{idx} outside X1..X{}",
                        self.num_vars
                    )));
                }
                Ok(QPoly::var(&q, idx - 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

fn max_var_exps(p: &QPoly) -> Vec<u32> {
    (0..MAX_VARS)
        .map(|j| p.terms().iter().map(|t| mono_exp(t.0, j)).max().unwrap_or(0))
        .collect()
}

fn constant_value(p: &QPoly) -> Option<BigRational> {
    match p.terms() {
        [] => Some(BigRational::zero()),
        [(0, c)] => Some(c.clone()),
        _ => None,
    }
}

/// Parse a string such as `3*X1^2 - X2` in `num_vars` variables.
pub fn parse_poly(text: &str, num_vars: usize) -> Result<QPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        num_vars: num_vars.min(MAX_VARS),
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

fn parse_coeff(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Err(Error::Parse(format!("coefficient {n} is not an integer; quote rationals")))
            }
        }
        Value::String(s) => parse_rational(s),
        _ => Err(Error::Parse(format!("bad coefficient {v}"))),
    }
}

fn parse_term(v: &Value, num_vars: usize) -> Result<QPoly> {
    match v {
        Value::String(s) => parse_poly(s, num_vars),
        Value::Array(pair) if pair.len() == 2 => {
            let c = parse_coeff(&pair[0])?;
            let exps = pair[1]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("exponent list expected in {v}")))?;
            if exps.len() != num_vars {
                return Err(Error::Parse(format!(
                    "exponent vector {} has length {}, expected {num_vars}",
                    pair[1],
                    exps.len()
                )));
            }
            let q = Rationals;
            let mut m = 0u64;
            for (j, e) in exps.iter().enumerate() {
                let e = e
                    .as_u64()
                    .filter(|&e| e <= MAX_DEGREE as u64)
                    .ok_or_else(|| Error::Parse(format!("bad exponent {e}")))?;
                m += mono_var(j) * e;
            }
            Ok(QPoly::monomial(&q, m, c))
        }
        _ => Err(Error::Parse(format!("bad term {v}"))),
    }
}

/// Parse a JSON list of generators. Each generator is a string or a list of
/// terms; a term is a string or `[coeff, [exps]]`.
pub fn parse_generators(v: &Value, num_vars: usize) -> Result<Vec<QPoly>> {
    let gens = v
        .as_array()
        .ok_or_else(|| Error::Parse("generators must be a JSON list".into()))?;
    let q = Rationals;
    gens.iter()
        .map(|g| match g {
            Value::String(s) => parse_poly(s, num_vars),
            Value::Array(terms) => {
                let mut acc = QPoly::zero();
                for t in terms {
                    acc = acc.add(&q, &parse_term(t, num_vars)?);
                }
                Ok(acc)
            }
            _ => Err(Error::Parse(format!("bad generator {g}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly::mono_from_exps;
    use serde_json::json;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn string_grammar() {
        let f = parse_poly("3*X1^2 - X2", 2).unwrap();
        assert_eq!(f.coeff(&Rationals, mono_from_exps(&[2, 0]).unwrap()), q(3));
        assert_eq!(f.coeff(&Rationals, mono_from_exps(&[0, 1]).unwrap()), q(-1));
        let g = parse_poly("X^2", 1).unwrap();
        assert_eq!(g.terms(), &[(mono_from_exps(&[2]).unwrap(), q(1))]);
        let h = parse_poly("(X1 + X2)^2 - 2 X1 X2", 2).unwrap();
        assert_eq!(h.num_terms(), 2);
        let k = parse_poly("-1/2*X1 + X1/2", 1).unwrap();
        assert!(k.is_zero());
        assert!(parse_poly("X3", 2).is_err());
        assert!(parse_poly("X1 +", 2).is_err());
        assert!(parse_poly("X1/X2", 2).is_err());
    }

    #[test]
    fn structured_form() {
        let v = json!([[[3, [1, 0, 0]], ["-1", [0, 0, 1]], [1, [2, 0, 0]]], "X2 + X1^2", ["X^2"]]);
        let gens = parse_generators(&v, 3).unwrap();
        assert_eq!(gens.len(), 3);
        assert_eq!(gens[0].num_terms(), 3);
        assert_eq!(gens[2].coeff(&Rationals, mono_from_exps(&[2]).unwrap()), q(1));
        assert!(parse_generators(&json!([[[1, [1, 0]]]]), 3).is_err());
        assert!(parse_generators(&json!({"a": 1}), 3).is_err());
        let frac = parse_generators(&json!([[["2/5", [1]]]]), 1).unwrap();
        assert_eq!(frac[0].coeff(&Rationals, mono_var(0)), BigRational::new(2.into(), 5.into()));
    }
}
