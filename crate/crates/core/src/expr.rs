//! Map expressions in `z`: a recursive-descent parser, an exact evaluator
//! into rational functions over `Q(i)`, and homogenization into a lift.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-' exponent | power
//! primary  := number | imaginary | 'i' | 'z' | '(' expr ')'
//! ```

use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{GPoly, GaussRat};
use crate::ratmap::HomLift;

pub const MAX_MAP_DEGREE: usize = 24;
const MAX_EXPONENT: i64 = 64;
const MAX_INTERMEDIATE_DEGREE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Real decimal literal, kept as written.
    Num(String),
    /// Imaginary literal such as `0.4i`, kept as written without the `i`.
    Imag(String),
    I,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(s) => write!(f, "{s}"),
            Expr::Imag(s) => write!(f, "{s}i"),
            Expr::I => write!(f, "i"),
            Expr::Z => write!(f, "z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Imag(String),
    I,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            'z' | 'Z' => out.push((Tok::Z, start)),
            'i' => out.push((Tok::I, start)),
            '0'..='9' | '.' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                // exponent part, only when digits follow
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let lit: String = chars[i..j].iter().collect();
                if GaussRat::parse_decimal(&lit).is_none() {
                    return Err(Error::Parse { pos: start, msg: format!("malformed number '{lit}'") });
                }
                if j < chars.len() && chars[j] == 'i' {
                    out.push((Tok::Imag(lit), start));
                    j += 1;
                } else {
                    out.push((Tok::Num(lit), start));
                }
                i = j;
                continue;
            }
            other => return Err(Error::Parse { pos: start, msg: format!("unexpected character '{other}'") }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.exponent()?)));
        }
        self.power()
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(s)) => Ok(Expr::Num(s)),
            Some(Tok::Imag(s)) => Ok(Expr::Imag(s)),
            Some(Tok::I) => Ok(Expr::I),
            Some(Tok::Z) => Ok(Expr::Z),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse { pos: close, msg: "expected ')'".into() }),
                }
            }
            Some(t) => Err(Error::Parse { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::Parse { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// A rational function `num / den` over `Q(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    pub num: GPoly,
    pub den: GPoly,
}

impl RatFn {
    fn constant(c: GaussRat) -> Self {
        RatFn { num: GPoly::constant(c), den: GPoly::constant(GaussRat::one()) }
    }

    fn reduced(num: GPoly, den: GPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("division by zero in map expression".into()));
        }
        if num.is_zero() {
            return Ok(RatFn { num, den: GPoly::constant(GaussRat::one()) });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        if num.degree().max(den.degree()) > MAX_INTERMEDIATE_DEGREE {
            return Err(Error::Budget("intermediate degree too large".into()));
        }
        Ok(RatFn { num, den })
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    fn add(&self, o: &RatFn) -> Result<RatFn> {
        if self.den == o.den {
            return RatFn::reduced(self.num.add(&o.num), self.den.clone());
        }
        RatFn::reduced(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn div(&self, o: &RatFn) -> Result<RatFn> {
        if o.num.is_zero() {
            return Err(Error::Domain("division by zero in map expression".into()));
        }
        RatFn::reduced(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    fn powi(&self, e: i64) -> Result<RatFn> {
        let base = if e < 0 { RatFn::constant(GaussRat::one()).div(self)? } else { self.clone() };
        let n = e.unsigned_abs() as u32;
        RatFn::reduced(base.num.pow(n), base.den.pow(n))
    }

    fn as_constant(&self) -> Option<GaussRat> {
        if !self.is_constant() {
            return None;
        }
        Some(&self.num.coeff(0) / &self.den.coeff(0))
    }
}

impl Expr {
    /// Exact evaluation into a reduced rational function of `z`.
    pub fn to_rational(&self) -> Result<RatFn> {
        match self {
            Expr::Num(s) => Ok(RatFn::constant(GaussRat::new(
                GaussRat::parse_decimal(s).ok_or_else(|| Error::Parse { pos: 0, msg: format!("malformed number '{s}'") })?,
                Zero::zero(),
            ))),
            Expr::Imag(s) => Ok(RatFn::constant(GaussRat::new(
                Zero::zero(),
                GaussRat::parse_decimal(s).ok_or_else(|| Error::Parse { pos: 0, msg: format!("malformed number '{s}'") })?,
            ))),
            Expr::I => Ok(RatFn::constant(GaussRat::i())),
            Expr::Z => Ok(RatFn { num: GPoly::x(), den: GPoly::constant(GaussRat::one()) }),
            Expr::Neg(a) => Ok(a.to_rational()?.neg()),
            Expr::Add(a, b) => a.to_rational()?.add(&b.to_rational()?),
            Expr::Sub(a, b) => a.to_rational()?.add(&b.to_rational()?.neg()),
            Expr::Mul(a, b) => a.to_rational()?.mul(&b.to_rational()?),
            Expr::Div(a, b) => a.to_rational()?.div(&b.to_rational()?),
            Expr::Pow(a, b) => {
                let e = b
                    .to_rational()?
                    .as_constant()
                    .filter(|c| c.is_real() && c.re.is_integer())
                    .and_then(|c| c.re.to_integer().to_i64())
                    .ok_or_else(|| Error::InvalidInput(format!("exponent {b} is not an integer constant")))?;
                if e.abs() > MAX_EXPONENT {
                    return Err(Error::Budget(format!("exponent {e} exceeds {MAX_EXPONENT}")));
                }
                a.to_rational()?.powi(e)
            }
        }
    }

    pub fn contains_z(&self) -> bool {
        match self {
            Expr::Z => true,
            Expr::Num(_) | Expr::Imag(_) | Expr::I => false,
            Expr::Neg(a) => a.contains_z(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => a.contains_z() || b.contains_z(),
        }
    }
}

/// Homogenizes a reduced `N/D` of degree `d` into `(Y^d N(X/Y), Y^d D(X/Y))`.
pub fn homogenize(r: &RatFn) -> Result<HomLift> {
    let d = r.degree();
    if d < 2 {
        return Err(Error::InvalidInput(format!("map has degree {d}; degree at least 2 is required")));
    }
    if d > MAX_MAP_DEGREE {
        return Err(Error::Budget(format!("map degree {d} exceeds {MAX_MAP_DEGREE}")));
    }
    let p = (0..=d).map(|i| r.num.coeff(d - i)).collect();
    let q = (0..=d).map(|i| r.den.coeff(d - i)).collect();
    HomLift::from_exact(p, q)
}

pub fn parse_map(text: &str) -> Result<HomLift> {
    homogenize(&parse(text)?.to_rational()?)
}

/// Evaluates a constant expression such as `0.3+0.4i` or `-1/2`.
pub fn parse_constant(text: &str) -> Result<GaussRat> {
    let e = parse(text)?;
    if e.contains_z() {
        return Err(Error::InvalidInput(format!("'{text}' is not a constant")));
    }
    e.to_rational()?.as_constant().ok_or_else(|| Error::InvalidInput(format!("'{text}' is not a constant")))
}

/// Rational coefficient check used by the p-adic front end.
pub fn is_rational_lift(f: &HomLift) -> bool {
    f.exact_coeffs().is_some_and(|(p, q)| p.iter().chain(q.iter()).all(|c| c.is_real()))
}
