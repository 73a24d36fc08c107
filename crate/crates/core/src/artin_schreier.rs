//! Artin–Schreier curves y^q + y = f(x) f*(x) / x^s over F_{q^2}.
//!
//! y ↦ y^q + y is the trace from F_{q^2} onto F_q, so a non-pole x = α
//! carries q rational points when h(α) ∈ F_q and none otherwise. Each pole is
//! totally ramified and gives one rational place.

use crate::error::{hypothesis, Error, Result};
use crate::field::{Fe, Tower};
use crate::kummer::{reciprocal_data, reciprocal_h, Sign, PLACE_ENUMERATION};
use crate::par::Exec;
use crate::poly::Poly;
use crate::ratfunc::{Point, RatFunc};
use crate::report::{CountReport, CurveSpec};

#[derive(Clone, Debug)]
pub struct ArtinSchreierCurve {
    q: u64,
    s: u64,
    f: Poly,
    h: RatFunc,
    /// (point, pole order) for each pole of h.
    poles: Vec<(Point, u64)>,
}

impl ArtinSchreierCurve {
    /// Only tame poles are accepted: every pole order must be prime to p.
    pub fn new(tower: &Tower, s: u64, f: Poly) -> Result<ArtinSchreierCurve> {
        let (d, fstar, _) = reciprocal_data(tower, &f)?;
        let h = reciprocal_h(tower, s, Sign::Minus, Sign::Plus, &f, &fstar)?;
        let mut poles = Vec::new();
        if s > 0 {
            poles.push((Point::Finite(Fe::ZERO), s));
        }
        let at_inf = 2 * d as i64 - s as i64;
        if at_inf > 0 {
            poles.push((Point::Infinity, at_inf as u64));
        }
        let p = tower.p();
        if let Some(&(_, order)) = poles.iter().find(|(_, o)| o % p as u64 == 0) {
            return Err(Error::WildPole { order, p });
        }
        if poles.is_empty() {
            return Err(hypothesis("h has no poles, so the curve is not of Artin-Schreier type"));
        }
        Ok(ArtinSchreierCurve {
            q: tower.q() as u64,
            s,
            f,
            h,
            poles,
        })
    }

    pub fn poles(&self) -> &[(Point, u64)] {
        &self.poles
    }

    pub fn h(&self) -> &RatFunc {
        &self.h
    }

    /// g = (q-1)/2 · (-2 + Σ_P (d_P + 1)) over the poles P of h.
    pub fn genus(&self) -> i64 {
        let sum: i64 = self.poles.iter().map(|&(_, o)| o as i64 + 1).sum();
        (self.q as i64 - 1) * (sum - 2) / 2
    }

    /// Rational places above x = point.
    pub fn places_above(&self, tower: &Tower, point: Point) -> u64 {
        if self.poles.iter().any(|&(p, _)| p == point) {
            return 1;
        }
        let e = tower.ext();
        let value = match point {
            Point::Finite(a) => self.h.eval(e, a).expect("not a pole"),
            Point::Infinity => {
                let b = self.h.branch(e, point).expect("h is nonzero");
                if b.k > 0 {
                    Fe::ZERO
                } else {
                    b.unit
                }
            }
        };
        if tower.in_base(value) {
            self.q
        } else {
            0
        }
    }

    pub fn count_points(&self, tower: &Tower, exec: Exec) -> CountReport {
        let e = tower.ext();
        let finite = exec.sum(e.order(), |i| {
            self.places_above(tower, Point::Finite(e.element_at(i)))
        });
        let points = finite + self.places_above(tower, Point::Infinity);
        CountReport::new(self.q, self.genus(), points, PLACE_ENUMERATION)
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        CurveSpec::ArtinSchreier {
            q: self.q,
            s: self.s,
            f: tower.show_poly(&self.f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(q: u64, f: &str, s: u64) -> (Tower, ArtinSchreierCurve) {
        let t = Tower::from_q(q).unwrap();
        let f = t.parse_base_poly(f).unwrap();
        let c = ArtinSchreierCurve::new(&t, s, f).unwrap();
        (t, c)
    }

    #[test]
    fn trace_map_has_fibres_of_size_q() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let t = Tower::from_q(q).unwrap();
            let e = t.ext();
            let mut fibre = std::collections::HashMap::new();
            for y in e.elements() {
                let v = e.add(t.frobenius(y), y);
                assert!(t.in_base(v));
                *fibre.entry(v).or_insert(0u64) += 1;
            }
            assert_eq!(fibre.len() as u64, q);
            assert!(fibre.values().all(|&c| c == q));
        }
    }

    #[test]
    fn table_rows() {
        for (q, g, n) in [(7u64, 12i64, 170u64), (11, 20, 442), (13, 24, 626)] {
            let (t, c) = curve(q, "x^2+1", 2);
            assert_eq!(c.genus(), g);
            let r = c.count_points(&t, Exec::Parallel);
            assert_eq!(r.points, n, "q = {q}");
            assert!(!r.suspect);
        }
    }

    #[test]
    fn brute_force_affine_count() {
        // affine solutions (x, y) with x ≠ 0 plus the places over 0 and ∞
        let (t, c) = curve(5, "x+2", 1);
        let e = t.ext();
        let mut affine = 0u64;
        for x in e.nonzero_elements() {
            let v = c.h().eval(e, x).unwrap();
            affine += e.elements().filter(|&y| e.add(t.frobenius(y), y) == v).count() as u64;
        }
        let r = c.count_points(&t, Exec::Sequential);
        assert_eq!(r.points, affine + 2);
    }

    #[test]
    fn wild_poles_are_rejected() {
        let t = Tower::from_q(5).unwrap();
        let f = t.parse_base_poly("x+1").unwrap();
        assert!(matches!(
            ArtinSchreierCurve::new(&t, 5, f),
            Err(Error::WildPole { order: 5, p: 5 })
        ));
    }
}
