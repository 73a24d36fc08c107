//! Reduced rational functions num/den over F_{q^2} and their local data at
//! points of the projective line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::{Fe, Field, Tower};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Finite(Fe),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "[{}]", a.packed()),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

/// h = (x - α)^k · g with g(α) = unit ≠ 0; at infinity, k = deg den - deg num
/// and unit is the ratio of leading coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchData {
    pub point: Point,
    pub k: i64,
    pub unit: Fe,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// num/den with the common factor removed and den made monic.
    pub fn new(field: &Field, num: Poly, den: Poly) -> Result<RatFunc> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = num.gcd(field, &den);
        let mut num = num.div_exact(field, &g).expect("gcd divides");
        let mut den = den.div_exact(field, &g).expect("gcd divides");
        let lc = field.inv(den.lc());
        num = num.scale(field, lc);
        den = den.scale(field, lc);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(field: &Field, num: Poly) -> Result<RatFunc> {
        RatFunc::new(field, num, Poly::one())
    }

    /// x^k for any integer k.
    pub fn x_pow(k: i64) -> RatFunc {
        let m = Poly::monomial(Fe::ONE, k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc {
                num: m,
                den: Poly::one(),
            }
        } else {
            RatFunc {
                num: Poly::one(),
                den: m,
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn mul(&self, field: &Field, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            field,
            self.num.mul(field, &other.num),
            self.den.mul(field, &other.den),
        )
        .expect("product of nonzero functions")
    }

    pub fn inv(&self, field: &Field) -> RatFunc {
        RatFunc::new(field, self.den.clone(), self.num.clone()).expect("nonzero")
    }

    pub fn pow(&self, field: &Field, e: i64) -> RatFunc {
        let base = if e < 0 { self.inv(field) } else { self.clone() };
        RatFunc {
            num: base.num.pow(field, e.unsigned_abs()),
            den: base.den.pow(field, e.unsigned_abs()),
        }
    }

    /// Value at a finite point, `None` at a pole.
    #[inline]
    pub fn eval(&self, field: &Field, a: Fe) -> Option<Fe> {
        let d = self.den.eval(field, a);
        if d.is_zero() {
            None
        } else {
            Some(field.div(self.num.eval(field, a), d))
        }
    }

    /// deg num - deg den.
    pub fn degree(&self) -> i64 {
        self.num.deg() as i64 - self.den.deg() as i64
    }

    pub fn branch(&self, field: &Field, point: Point) -> Result<BranchData> {
        branch_decompose(field, &self.num, &self.den, point)
    }

    /// Branch data at a finite point, evaluating directly when h(α) ≠ 0, ∞.
    #[inline]
    pub fn branch_at(&self, field: &Field, a: Fe) -> BranchData {
        let n = self.num.eval(field, a);
        let d = self.den.eval(field, a);
        if !n.is_zero() && !d.is_zero() {
            return BranchData {
                point: Point::Finite(a),
                k: 0,
                unit: field.div(n, d),
            };
        }
        branch_decompose(field, &self.num, &self.den, Point::Finite(a))
            .expect("reduced rational function")
    }

    /// Irreducible factors over F_q (or over F_{q^2} when some coefficient is
    /// outside F_q) with signed multiplicities, denominator factors negative.
    /// Factors are returned monic and embedded in F_{q^2}.
    pub fn profile(&self, tower: &Tower) -> Result<Vec<(Poly, i64)>> {
        let mut out = Vec::new();
        for (poly, sign) in [(&self.num, 1i64), (&self.den, -1i64)] {
            if poly.deg() == 0 {
                continue;
            }
            match tower.restrict_poly(poly) {
                Some(base_poly) => {
                    for (g, e) in factor(tower.base(), &base_poly)?.factors {
                        out.push((tower.embed_poly(&g), sign * e as i64));
                    }
                }
                None => {
                    for (g, e) in factor(tower.ext(), poly)?.factors {
                        out.push((g, sign * e as i64));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Local decomposition of num/den at a point. Fails when both vanish there,
/// which means the input was not reduced.
pub fn branch_decompose(field: &Field, num: &Poly, den: &Poly, point: Point) -> Result<BranchData> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match point {
        Point::Infinity => Ok(BranchData {
            point,
            k: den.deg() as i64 - num.deg() as i64,
            unit: field.div(num.lc(), den.lc()),
        }),
        Point::Finite(a) => {
            let (kn, gn) = num.split_at(field, a)?;
            let (kd, gd) = den.split_at(field, a)?;
            if kn > 0 && kd > 0 {
                return Err(Error::NotReduced(point.to_string()));
            }
            Ok(BranchData {
                point,
                k: kn as i64 - kd as i64,
                unit: field.div(gn.eval(field, a), gd.eval(field, a)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_over_x_squared() {
        let t = Tower::from_q(5).unwrap();
        let e = t.ext();
        let num = t.parse_poly("(x^2+1)^2").unwrap();
        let h = RatFunc::new(e, num, t.parse_poly("x^2").unwrap()).unwrap();
        let at0 = h.branch(e, Point::Finite(Fe::ZERO)).unwrap();
        assert_eq!((at0.k, at0.unit), (-2, Fe::ONE));
        let inf = h.branch(e, Point::Infinity).unwrap();
        assert_eq!((inf.k, inf.unit), (-2, Fe::ONE));
    }

    #[test]
    fn double_root_of_binomial() {
        // (x^3+1)^2/x^3 over F_25 at a root of x^3+1
        let t = Tower::from_q(25).unwrap();
        let e = t.ext();
        let f = t.parse_poly("x^3+1").unwrap();
        let h = RatFunc::new(e, f.pow(e, 2), t.parse_poly("x^3").unwrap()).unwrap();
        for a in e.elements().filter(|&a| f.eval(e, a).is_zero()) {
            let b = h.branch_at(e, a);
            assert_eq!(b.k, 2);
            // g(x) = (f/(x-a))^2 / x^3, so g(a) = f'(a)^2 / a^3
            let fp = f.derivative(e).eval(e, a);
            assert_eq!(b.unit, e.div(e.mul(fp, fp), e.pow(a, 3)));
            // h(a + t) ≈ unit · t^2 for the local check at a few t
            for tval in e.nonzero_elements().take(5) {
                let x = e.add(a, tval);
                if let Some(v) = h.eval(e, x) {
                    let g = e.div(v, e.mul(tval, tval));
                    let (num2, den2) = (
                        f.div_exact(e, &Poly::linear(e, a)).unwrap().pow(e, 2),
                        t.parse_poly("x^3").unwrap(),
                    );
                    assert_eq!(g, e.div(num2.eval(e, x), den2.eval(e, x)));
                }
            }
        }
    }

    #[test]
    fn non_reduced_input_is_rejected() {
        let t = Tower::from_q(7).unwrap();
        let e = t.ext();
        let num = t.parse_poly("x^2+x").unwrap();
        let den = t.parse_poly("x").unwrap();
        assert!(matches!(
            branch_decompose(e, &num, &den, Point::Finite(Fe::ZERO)),
            Err(Error::NotReduced(_))
        ));
        let h = RatFunc::new(e, num, den).unwrap();
        assert_eq!(h.num(), &t.parse_poly("x+1").unwrap());
        assert_eq!(h.den(), &Poly::one());
    }

    #[test]
    fn profile_degree_sum() {
        let t = Tower::from_q(5).unwrap();
        let e = t.ext();
        let h = RatFunc::new(
            e,
            t.parse_poly("(x^2+1)^2").unwrap(),
            t.parse_poly("x^2").unwrap(),
        )
        .unwrap();
        let prof = h.profile(&t).unwrap();
        assert_eq!(prof.len(), 3);
        let total: i64 = prof.iter().map(|(g, k)| g.deg() as i64 * k).sum();
        assert_eq!(total, h.degree());
        assert!(RatFunc::from_poly(e, Poly::constant(Fe::ONE))
            .unwrap()
            .profile(&t)
            .unwrap()
            .is_empty());

        let t19 = Tower::from_q(19).unwrap();
        let f = RatFunc::from_poly(t19.ext(), t19.parse_poly("x^4+2").unwrap()).unwrap();
        assert!(f.profile(&t19).unwrap().iter().all(|(_, k)| *k == 1));
    }
}
