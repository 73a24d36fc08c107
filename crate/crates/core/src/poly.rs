//! Dense univariate polynomials over a table-driven finite field.
//!
//! A [`Poly`] does not remember its field; every operation takes the
//! [`Field`] explicitly. Coefficients are stored low degree first with no
//! trailing zeros, so the zero polynomial is the empty vector.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Fe, Field, Tower};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    c: Vec<Fe>,
}

/// Which element the names `xi` and `xi2` denote when reading or writing
/// polynomials.
#[derive(Clone, Copy, Debug)]
pub struct Notation {
    pub xi: Fe,
    pub xi2: Option<Fe>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![Fe::ONE] }
    }

    pub fn x() -> Poly {
        Poly {
            c: vec![Fe::ZERO, Fe::ONE],
        }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    pub fn monomial(a: Fe, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; k + 1];
        c[k] = a;
        Poly { c }
    }

    /// x - a.
    pub fn linear(field: &Field, a: Fe) -> Poly {
        Poly::from_coeffs(vec![field.neg(a), Fe::ONE])
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    /// Coefficients given as small integers, low degree first.
    pub fn from_ints(field: &Field, c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with deg 0 = 0 for the zero polynomial; for counting formulas.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }

    pub fn map_coeffs(&self, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&a| f(a)).collect())
    }

    pub fn add(&self, field: &Field, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| field.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, field: &Field) -> Poly {
        self.map_coeffs(|a| field.neg(a))
    }

    pub fn sub(&self, field: &Field, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| field.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, field: &Field, a: Fe) -> Poly {
        self.map_coeffs(|c| field.mul(c, a))
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, field: &Field, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        Poly { c }
    }

    pub fn monic(&self, field: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(self.lc());
        self.scale(field, inv)
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, field: &Field, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lc = field.inv(divisor.lc());
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = field.mul(r[k + dd], inv_lc);
            if c.is_zero() {
                continue;
            }
            q[k] = c;
            for (i, &b) in divisor.c.iter().enumerate() {
                r[k + i] = field.sub(r[k + i], field.mul(c, b));
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, field: &Field, divisor: &Poly) -> Poly {
        self.div_rem(field, divisor).1
    }

    /// Exact quotient; `None` if the division leaves a remainder.
    pub fn div_exact(&self, field: &Field, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(field, divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, field: &Field, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn derivative(&self, field: &Field) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| field.mul(field.from_int(i as i64), a))
                .collect(),
        )
    }

    /// gcd(f, f') = 1. Constants count as separable.
    pub fn is_separable(&self, field: &Field) -> bool {
        !self.is_zero() && self.gcd(field, &self.derivative(field)) == Poly::one()
    }

    /// x^{deg f} f(1/x): the coefficient sequence reversed.
    pub fn reciprocal(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut c = self.c.clone();
        c.reverse();
        Ok(Poly::from_coeffs(c))
    }

    #[inline]
    pub fn eval(&self, field: &Field, a: Fe) -> Fe {
        self.c
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, a), c))
    }

    /// Order of vanishing at `a` and the cofactor g with f = (x - a)^k g,
    /// by repeated synthetic division.
    pub fn split_at(&self, field: &Field, a: Fe) -> Result<(u32, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut k = 0;
        let mut g = self.clone();
        loop {
            let (q, r) = synthetic_division(field, &g, a);
            if !r.is_zero() {
                return Ok((k, g));
            }
            g = q;
            k += 1;
        }
    }

    pub fn multiplicity_at(&self, field: &Field, a: Fe) -> Result<u32> {
        Ok(self.split_at(field, a)?.0)
    }

    pub fn mul_mod(&self, field: &Field, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(field, other).rem(field, modulus)
    }

    pub fn pow_mod(&self, field: &Field, mut e: u128, modulus: &Poly) -> Poly {
        let mut base = self.rem(field, modulus);
        let mut acc = Poly::one().rem(field, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(field, &base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(field, &base, modulus);
            }
        }
        acc
    }

    /// Number of distinct roots among `elements` (assumed distinct).
    pub fn count_roots_in(&self, field: &Field, elements: impl IntoIterator<Item = Fe>) -> usize {
        elements
            .into_iter()
            .filter(|&a| self.eval(field, a).is_zero())
            .count()
    }

    /// Read a polynomial in the usual notation: `x^4+x^2+2`, `xi^3*x^2+2`,
    /// `3x+1`, `(x^3+1)^2`. Integers are read modulo p.
    pub fn parse(input: &str, field: &Field, names: &Notation) -> Result<Poly> {
        let tokens = tokenize(input)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            field,
            names,
            input,
        };
        let poly = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }

    /// Render in the same notation that [`Poly::parse`] reads.
    pub fn display(&self, field: &Field, names: &Notation) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let coeff = format_coeff(field, names, c);
            match (coeff.as_deref(), i) {
                (None, 0) => out.push('1'),
                (None, _) => {}
                (Some(s), 0) => out.push_str(s),
                (Some(s), _) if s.starts_with('x') => {
                    // xi / xi2 powers need an explicit product sign
                    let _ = write!(out, "{s}*");
                }
                (Some(s), _) => out.push_str(s),
            }
            match i {
                0 => {}
                1 => out.push('x'),
                _ => {
                    let _ = write!(out, "x^{i}");
                }
            }
        }
        out
    }
}

/// Quotient and remainder of division by (x - a).
fn synthetic_division(field: &Field, f: &Poly, a: Fe) -> (Poly, Fe) {
    let n = f.c.len();
    if n == 0 {
        return (Poly::zero(), Fe::ZERO);
    }
    let mut q = vec![Fe::ZERO; n - 1];
    let mut acc = Fe::ZERO;
    for i in (0..n).rev() {
        acc = field.add(field.mul(acc, a), f.c[i]);
        if i > 0 {
            q[i - 1] = acc;
        }
    }
    (Poly::from_coeffs(q), acc)
}

/// `None` means the coefficient is 1 and may be omitted in front of a power of x.
fn format_coeff(field: &Field, names: &Notation, c: Fe) -> Option<String> {
    if c == Fe::ONE {
        return None;
    }
    if let Some(v) = field.as_prime_field(c) {
        return Some(v.to_string());
    }
    let power_of = |g: Fe| -> Option<u64> {
        let units = field.units() as u64;
        let lg = field.log(g).ok()? as u64;
        let lc = field.log(c).ok()? as u64;
        let ord = field.multiplicative_order(g).ok()? as u64;
        // c = g^k  <=>  lc ≡ k·lg (mod units)
        (0..ord).find(|&k| (k * lg) % units == lc)
    };
    let term = |name: &str, k: u64| {
        if k == 1 {
            name.to_string()
        } else {
            format!("{name}^{k}")
        }
    };
    if let Some(k) = power_of(names.xi) {
        return Some(term("xi", k));
    }
    if let Some(g) = names.xi2 {
        if let Some(k) = power_of(g) {
            return Some(term("xi2", k));
        }
    }
    Some(format!("[{}]", c.packed()))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse().map_err(|_| Error::Parse {
                    input: input.to_string(),
                    reason: format!("number {s} out of range"),
                })?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                // `x` binds alone so that `xi`, `xi2` and `x` separate cleanly
                let start = i;
                if input[char_offset(&chars, i)..].starts_with("xi2") {
                    i += 3;
                } else if input[char_offset(&chars, i)..].starts_with("xi") {
                    i += 2;
                } else {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse {
                    input: input.to_string(),
                    reason: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

fn char_offset(chars: &[char], i: usize) -> usize {
    chars[..i].iter().map(|c| c.len_utf8()).sum()
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    field: &'a Field,
    names: &'a Notation,
    input: &'a str,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            reason: format!("{reason} at token {}", self.pos),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let f = self.field;
        let mut acc = Poly::zero();
        let mut negate = false;
        if self.eat(&Tok::Minus) {
            negate = true;
        } else {
            self.eat(&Tok::Plus);
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(f, &t) } else { acc.add(f, &t) };
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let g = self.factor()?;
                    acc = acc.mul(self.field, &g);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let g = self.factor()?;
                    acc = acc.mul(self.field, &g);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if !self.eat(&Tok::Caret) {
            return Ok(None);
        }
        let neg = self.eat(&Tok::Minus);
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let v = i64::try_from(v).map_err(|_| self.error("exponent too large"))?;
                Ok(Some(if neg { -v } else { v }))
            }
            _ => Err(self.error("expected exponent")),
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let f = self.field;
        let base = match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let v = (v % f.characteristic() as u64) as i64;
                Poly::constant(f.from_int(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Poly::x(),
                    "xi" => Poly::constant(self.names.xi),
                    "xi2" => Poly::constant(
                        self.names
                            .xi2
                            .ok_or_else(|| self.error("xi2 is not available over this field"))?,
                    ),
                    _ => return Err(self.error(&format!("unknown name {name:?}"))),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                inner
            }
            _ => return Err(self.error("expected a number, x, xi or '('")),
        };
        match self.exponent()? {
            None => Ok(base),
            Some(e) if e >= 0 => Ok(base.pow(f, e as u64)),
            Some(e) => {
                if !base.is_constant() || base.is_zero() {
                    return Err(self.error("negative exponent on a non-constant"));
                }
                Ok(Poly::constant(f.pow_signed(base.lc(), e)))
            }
        }
    }
}

/// Subsets of F_{q^2} over which roots are counted.
#[derive(Clone, Debug)]
pub enum RootSet {
    /// F_q^*, embedded.
    BaseUnits,
    /// F_q, embedded.
    Base,
    /// All of F_{q^2}.
    Ext,
    /// {a : a^{q+1} = 1}.
    NormOne,
    Custom(Vec<Fe>),
}

impl Tower {
    /// `xi` is ξ_q (embedded), `xi2` is ξ_{q^2}.
    pub fn notation(&self) -> Notation {
        Notation {
            xi: self.xi_base(),
            xi2: Some(self.ext().xi()),
        }
    }

    pub fn base_notation(&self) -> Notation {
        Notation {
            xi: self.base().xi(),
            xi2: None,
        }
    }

    /// Parse a polynomial with coefficients in F_{q^2}.
    pub fn parse_poly(&self, input: &str) -> Result<Poly> {
        Poly::parse(input, self.ext(), &self.notation())
    }

    /// Parse a polynomial that must have coefficients in F_q; returned embedded.
    pub fn parse_base_poly(&self, input: &str) -> Result<Poly> {
        let f = self.parse_poly(input)?;
        if self.restrict_poly(&f).is_none() {
            return Err(Error::Parse {
                input: input.to_string(),
                reason: format!("coefficients must lie in F_{}", self.q()),
            });
        }
        Ok(f)
    }

    pub fn show_poly(&self, f: &Poly) -> String {
        f.display(self.ext(), &self.notation())
    }

    pub fn embed_poly(&self, f: &Poly) -> Poly {
        f.map_coeffs(|a| self.embed(a))
    }

    /// The same polynomial over F_q, if all coefficients lie there.
    pub fn restrict_poly(&self, f: &Poly) -> Option<Poly> {
        let c: Option<Vec<Fe>> = f.coeffs().iter().map(|&a| self.restrict(a)).collect();
        c.map(Poly::from_coeffs)
    }

    pub fn root_set(&self, set: &RootSet) -> Vec<Fe> {
        let e = self.ext();
        match set {
            RootSet::BaseUnits => e.nonzero_elements().filter(|&a| self.in_base(a)).collect(),
            RootSet::Base => e.elements().filter(|&a| self.in_base(a)).collect(),
            RootSet::Ext => e.elements().collect(),
            RootSet::NormOne => e.nonzero_elements().filter(|&a| self.is_norm_one(a)).collect(),
            RootSet::Custom(v) => v.clone(),
        }
    }

    /// N_f(A): distinct roots of an F_{q^2}-polynomial inside A.
    pub fn count_roots(&self, f: &Poly, set: &RootSet) -> usize {
        f.count_roots_in(self.ext(), self.root_set(set))
    }
}
