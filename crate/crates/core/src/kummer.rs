//! Kummer covers y^m = h(x) over F_{q^2}, and the reciprocal family
//! y^m = x^{εs} f(x) f*(x)^λ built from a polynomial and its reciprocal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{hypothesis, Error, Result};
use crate::field::Tower;
use crate::par::Exec;
use crate::poly::{Poly, RootSet};
use crate::ramification::KummerPair;
use crate::ratfunc::{Point, RatFunc};
use crate::report::{CountReport, CurveSpec};

pub const PLACE_ENUMERATION: &str = "place-enumeration";

/// y^m = h.
#[derive(Clone, Debug)]
pub struct KummerCover {
    m: u64,
    h: RatFunc,
}

impl KummerCover {
    pub fn new(tower: &Tower, m: u64, h: RatFunc) -> Result<KummerCover> {
        if m == 0 {
            return Err(hypothesis("the cover degree m must be positive"));
        }
        if m.is_multiple_of(tower.p() as u64) {
            return Err(hypothesis(format!(
                "p = {} divides m = {m}; only tame covers are supported",
                tower.p()
            )));
        }
        Ok(KummerCover { m, h })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn h(&self) -> &RatFunc {
        &self.h
    }

    pub fn as_pair(&self) -> KummerPair {
        KummerPair::single(self.m, self.h.clone())
    }

    /// Rational places above x = point: 0 or gcd(m, k) when m | q^2 - 1.
    pub fn places_above(&self, tower: &Tower, point: Point) -> u64 {
        self.as_pair().local(tower.ext(), point).places
    }

    pub fn count_points(&self, tower: &Tower, exec: Exec) -> u64 {
        self.as_pair().count_places(tower, exec)
    }

    /// Genus by tame Riemann–Hurwitz; fails if y^m = h is not absolutely
    /// irreducible.
    pub fn genus(&self, tower: &Tower) -> Result<i64> {
        self.as_pair().genus(tower)
    }

    pub fn report(&self, tower: &Tower, exec: Exec) -> Result<CountReport> {
        let genus = self.genus(tower)?;
        let points = self.count_points(tower, exec);
        Ok(CountReport::new(tower.q() as u64, genus, points, PLACE_ENUMERATION))
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        let h = if self.h.den().deg() == 0 {
            tower.show_poly(self.h.num())
        } else {
            format!(
                "({})/({})",
                tower.show_poly(self.h.num()),
                tower.show_poly(self.h.den())
            )
        };
        CurveSpec::Kummer {
            q: tower.q() as u64,
            m: self.m,
            h,
        }
    }
}

/// ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(hypothesis(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "1" | "+1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected +1 or -1".into(),
            }),
        }
    }
}

/// Checks that f ∈ F_q[x] is separable of degree ≥ 1 with f(0) ≠ 0, and
/// returns (d, f*, deg gcd(f, f*)).
pub(crate) fn reciprocal_data(tower: &Tower, f: &Poly) -> Result<(usize, Poly, usize)> {
    let e = tower.ext();
    if tower.restrict_poly(f).is_none() {
        return Err(hypothesis(format!("f must have coefficients in F_{}", tower.q())));
    }
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(hypothesis("f must have degree at least 1"));
    }
    if f.coeff(0).is_zero() {
        return Err(hypothesis("f(0) must be nonzero"));
    }
    if !f.is_separable(e) {
        return Err(hypothesis("f must be separable"));
    }
    let fstar = f.reciprocal()?;
    let d1 = f.gcd(e, &fstar).deg();
    Ok((d, fstar, d1))
}

/// x^{εs} f f*^λ, reduced.
pub(crate) fn reciprocal_h(tower: &Tower, s: u64, eps: Sign, lam: Sign, f: &Poly, fstar: &Poly) -> Result<RatFunc> {
    let e = tower.ext();
    let xs = RatFunc::x_pow(eps.value() * s as i64);
    let ff = RatFunc::from_poly(e, f.clone())?;
    let fs = RatFunc::from_poly(e, fstar.clone())?.pow(e, lam.value());
    Ok(xs.mul(e, &ff).mul(e, &fs))
}

/// y^m = x^{εs} f(x) f*(x)^λ with f ∈ F_q[x] separable, f(0) ≠ 0.
#[derive(Clone, Debug)]
pub struct ReciprocalKummer {
    q: u64,
    m: u64,
    s: u64,
    eps: Sign,
    lam: Sign,
    f: Poly,
    fstar: Poly,
    d: usize,
    d1: usize,
    cover: KummerCover,
}

impl ReciprocalKummer {
    /// `f` is given over F_{q^2} (e.g. from [`Tower::parse_base_poly`]) but
    /// must have its coefficients in F_q.
    pub fn new(tower: &Tower, m: u64, s: u64, eps: Sign, lam: Sign, f: Poly) -> Result<ReciprocalKummer> {
        if m < 2 {
            return Err(hypothesis("m must be at least 2"));
        }
        let (d, fstar, d1) = reciprocal_data(tower, &f)?;
        let h = reciprocal_h(tower, s, eps, lam, &f, &fstar)?;
        let cover = KummerCover::new(tower, m, h)?;
        Ok(ReciprocalKummer {
            q: tower.q() as u64,
            m,
            s,
            eps,
            lam,
            f,
            fstar,
            d,
            d1,
            cover,
        })
    }

    /// y^m = f f* / x^s.
    pub fn over_x_power(tower: &Tower, m: u64, s: u64, f: Poly) -> Result<ReciprocalKummer> {
        ReciprocalKummer::new(tower, m, s, Sign::Minus, Sign::Plus, f)
    }

    /// y^m = x^s f / f*.
    pub fn quotient(tower: &Tower, m: u64, s: u64, f: Poly) -> Result<ReciprocalKummer> {
        ReciprocalKummer::new(tower, m, s, Sign::Plus, Sign::Minus, f)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn lam(&self) -> Sign {
        self.lam
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn fstar(&self) -> &Poly {
        &self.fstar
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// deg gcd(f, f*).
    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn cover(&self) -> &KummerCover {
        &self.cover
    }

    pub fn h(&self) -> &RatFunc {
        self.cover.h()
    }

    pub fn m_divides_q_plus_1(&self) -> bool {
        (self.q + 1).is_multiple_of(self.m)
    }

    pub fn m_divides_q_minus_1(&self) -> bool {
        (self.q - 1).is_multiple_of(self.m)
    }

    /// g = (m-1)d + 1 - [(m,s) + (m, εs+d+dλ) + d1(m, λ+1) + d1(m-2)]/2,
    /// valid when gcd(f, f*) is a proper divisor of f.
    pub fn genus_general(&self) -> Result<i64> {
        if self.d1 == self.d {
            return Err(Error::SelfReciprocal);
        }
        let (m, s, d, d1) = (self.m as i64, self.s as i64, self.d as i64, self.d1 as i64);
        let (eps, lam) = (self.eps.value(), self.lam.value());
        let bracket = gcd(m, s) as i64
            + gcd(m, eps * s + d + d * lam) as i64
            + d1 * gcd(m, lam + 1) as i64
            + d1 * (m - 2);
        Ok((m - 1) * d + 1 - bracket / 2)
    }

    /// Genus from the closed formula when it applies, otherwise from the
    /// Riemann–Hurwitz engine.
    pub fn genus(&self, tower: &Tower) -> Result<i64> {
        match self.genus_general() {
            Ok(g) => Ok(g),
            Err(Error::SelfReciprocal) => self.cover.genus(tower),
            Err(e) => Err(e),
        }
    }

    pub fn places_above(&self, tower: &Tower, point: Point) -> u64 {
        self.cover.places_above(tower, point)
    }

    pub fn count_points(&self, tower: &Tower, exec: Exec) -> Result<CountReport> {
        // the engine certifies absolute irreducibility even when the closed
        // genus formula is available
        let engine_genus = self.cover.genus(tower)?;
        let points = self.cover.count_points(tower, exec);
        let mut report = CountReport::new(self.q, engine_genus, points, PLACE_ENUMERATION);
        if self.d1 == self.d {
            report = report.with_note("f is self-reciprocal; genus from the Riemann-Hurwitz engine");
        }
        if self.s >= self.m {
            report = report.with_note(format!("s = {} is not below m = {}", self.s, self.m));
        }
        Ok(report)
    }

    /// The lower bound for y^m = f f*/x^s (m | q+1) or y^m = x^s f/f* (m | q-1).
    pub fn lower_bound(&self, tower: &Tower) -> Result<i64> {
        let q = self.q as i64;
        let m = self.m as i64;
        if self.s >= self.m {
            return Err(hypothesis(format!("need 0 <= s < m, got s = {}", self.s)));
        }
        if self.d1 != 0 {
            return Err(hypothesis("need gcd(f, f*) = 1"));
        }
        let e = tower.ext();
        let norm = Poly::monomial(e.from_int(1), self.q as usize + 1).sub(e, &Poly::one());
        if self.f.gcd(e, &norm).deg() != 0 {
            return Err(hypothesis("need gcd(f, x^(q+1) - 1) = 1"));
        }
        let n_ext = tower.count_roots(&self.f, &RootSet::Ext) as i64;
        match (self.eps, self.lam) {
            (Sign::Minus, Sign::Plus) => {
                if !self.m_divides_q_plus_1() {
                    return Err(hypothesis("need m | q + 1"));
                }
                let n_base = tower.count_roots(&self.f, &RootSet::BaseUnits) as i64;
                let g = gcd(q + 1, 2 * (self.d as i64 - self.s as i64)) as i64;
                Ok(m * (g + q - 3 - 2 * n_base) + 2 * n_ext)
            }
            (Sign::Plus, Sign::Minus) => {
                if !self.m_divides_q_minus_1() {
                    return Err(hypothesis("need m | q - 1"));
                }
                Ok(2 * n_ext + m * (q + 1))
            }
            _ => Err(hypothesis("lower bounds exist only for (ε, λ) = (-1, 1) or (1, -1)")),
        }
    }

    /// (m,s) + (m,2d-s) + 2N_f + m(N_{h1} + N_{h2}) over F_{q^2}, where
    /// h1 = (f f*)^{q-1} - x^{s(q-1)} and h2 = Σ_i (f f*)^{(q-1)i} x^{s(q-1)((q+1)/m-1-i)}.
    /// Holds for y^m = f f*/x^s with m | q+1 and gcd(f, f*) = 1; roots of h1, h2
    /// are counted in F_{q^2}^*.
    pub fn point_count_identity(&self, tower: &Tower) -> Result<u64> {
        if (self.eps, self.lam) != (Sign::Minus, Sign::Plus) || !self.m_divides_q_plus_1() {
            return Err(hypothesis("the identity needs y^m = f f*/x^s with m | q + 1"));
        }
        if self.d1 != 0 {
            return Err(hypothesis("need gcd(f, f*) = 1"));
        }
        let e = tower.ext();
        let q = self.q;
        let (m, s, d) = (self.m, self.s, self.d as u64);
        let r = (q + 1) / m;
        let mut n_h = 0u64;
        for a in e.nonzero_elements() {
            let v = e.mul(self.f.eval(e, a), self.fstar.eval(e, a));
            let a_pow = e.pow(a, s * (q - 1));
            let v_pow = e.pow(v, q - 1);
            if e.sub(v_pow, a_pow).is_zero() {
                n_h += 1;
            }
            let mut sum = crate::field::Fe::ZERO;
            for i in 0..r {
                let term = e.mul(e.pow(v_pow, i), e.pow(a, s * (q - 1) * (r - 1 - i)));
                sum = e.add(sum, term);
            }
            if sum.is_zero() {
                n_h += 1;
            }
        }
        let n_f = tower.count_roots(&self.f, &RootSet::Ext) as u64;
        Ok(gcd(m as i64, s as i64) + gcd(m as i64, 2 * d as i64 - s as i64) + 2 * n_f + m * n_h)
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        CurveSpec::Reciprocal {
            q: self.q,
            m: self.m,
            s: self.s,
            eps: self.eps.value() as i8,
            lam: self.lam.value() as i8,
            f: tower.show_poly(&self.f),
        }
    }
}
