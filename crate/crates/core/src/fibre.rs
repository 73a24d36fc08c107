//! Fibre products of two reciprocal Kummer covers sharing the x-line.
//!
//! Shape "61": y_i^{m_i} = f_i f_i* / x^{s_i}. Shape "63": y_i^{m_i} = x^{s_i} f_i / f_i*.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::gcd_all;
use crate::error::{hypothesis, Error, Result};
use crate::field::{Fe, Tower};
use crate::kummer::{reciprocal_data, reciprocal_h, Sign, PLACE_ENUMERATION};
use crate::par::Exec;
use crate::poly::{Poly, RootSet};
use crate::ramification::{KummerPair, LocalCount};
use crate::ratfunc::{Point, RatFunc};
use crate::report::{CountReport, CurveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FibreShape {
    /// f f*/x^s, covers with m | q+1.
    #[serde(rename = "61")]
    Product,
    /// x^s f/f*, covers with m | q-1.
    #[serde(rename = "63")]
    Quotient,
}

impl FibreShape {
    pub fn id(self) -> &'static str {
        match self {
            FibreShape::Product => "61",
            FibreShape::Quotient => "63",
        }
    }

    /// (ε, λ) of each component.
    pub fn signs(self) -> (Sign, Sign) {
        match self {
            FibreShape::Product => (Sign::Minus, Sign::Plus),
            FibreShape::Quotient => (Sign::Plus, Sign::Minus),
        }
    }
}

impl fmt::Display for FibreShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FibreShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<FibreShape> {
        match s.trim() {
            "61" | "FIBRE61" | "fibre61" => Ok(FibreShape::Product),
            "63" | "FIBRE63" | "fibre63" => Ok(FibreShape::Quotient),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected 61 or 63".into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenusMode {
    #[serde(rename = "CLOSED61")]
    ClosedPlus,
    #[serde(rename = "CLOSED63")]
    ClosedMinus,
    General,
}

/// One factor y^m = x^{εs} f f*^λ of the fibre product. m = 1 is allowed and
/// makes the factor trivial.
#[derive(Clone, Debug)]
pub struct Component {
    pub m: u64,
    pub s: u64,
    pub f: Poly,
    fstar: Poly,
    d: usize,
    d1: usize,
    h: RatFunc,
}

impl Component {
    pub fn new(tower: &Tower, shape: FibreShape, m: u64, s: u64, f: Poly) -> Result<Component> {
        if m == 0 {
            return Err(hypothesis("m must be positive"));
        }
        let (d, fstar, d1) = reciprocal_data(tower, &f)?;
        let (eps, lam) = shape.signs();
        let h = reciprocal_h(tower, s, eps, lam, &f, &fstar)?;
        Ok(Component {
            m,
            s,
            f,
            fstar,
            d,
            d1,
            h,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fstar(&self) -> &Poly {
        &self.fstar
    }

    pub fn h(&self) -> &RatFunc {
        &self.h
    }

    fn f_fstar(&self, tower: &Tower) -> Poly {
        self.f.mul(tower.ext(), &self.fstar)
    }
}

#[derive(Clone, Debug)]
pub struct FibreProduct {
    shape: FibreShape,
    q: u64,
    c1: Component,
    c2: Component,
    pair: KummerPair,
}

impl FibreProduct {
    pub fn new(tower: &Tower, shape: FibreShape, c1: Component, c2: Component) -> Result<FibreProduct> {
        let p = tower.p() as u64;
        if (c1.m * c2.m).is_multiple_of(p) {
            return Err(hypothesis(format!("p = {p} divides m1 m2 = {}", c1.m * c2.m)));
        }
        let pair = KummerPair {
            m1: c1.m,
            h1: c1.h.clone(),
            m2: c2.m,
            h2: c2.h.clone(),
        };
        Ok(FibreProduct {
            shape,
            q: tower.q() as u64,
            c1,
            c2,
            pair,
        })
    }

    /// Parses f1 and f2 over F_q and builds both components.
    #[allow(clippy::too_many_arguments)]
    pub fn parse(
        tower: &Tower,
        shape: FibreShape,
        m1: u64,
        s1: u64,
        f1: &str,
        m2: u64,
        s2: u64,
        f2: &str,
    ) -> Result<FibreProduct> {
        let c1 = Component::new(tower, shape, m1, s1, tower.parse_base_poly(f1)?)?;
        let c2 = Component::new(tower, shape, m2, s2, tower.parse_base_poly(f2)?)?;
        FibreProduct::new(tower, shape, c1, c2)
    }

    pub fn shape(&self) -> FibreShape {
        self.shape
    }

    pub fn components(&self) -> (&Component, &Component) {
        (&self.c1, &self.c2)
    }

    pub fn pair(&self) -> &KummerPair {
        &self.pair
    }

    /// gcd(m1 m2, s1 m2, s2 m1).
    pub fn kappa(&self) -> u64 {
        let (m1, m2) = (self.c1.m as i64, self.c2.m as i64);
        gcd_all(&[m1 * m2, self.c1.s as i64 * m2, self.c2.s as i64 * m1])
    }

    /// Certifies [F(X) : F(x)] = m1 m2 over F̄; otherwise a witness (a, b, n).
    pub fn validate(&self, tower: &Tower) -> Result<u64> {
        self.pair.certify_degree(tower)
    }

    /// κ_α and the number of rational places above α (0 or κ_α when the
    /// covers split over F_{q^2}).
    pub fn kappa_at(&self, tower: &Tower, point: Point) -> LocalCount {
        self.pair.local(tower.ext(), point)
    }

    /// Hypotheses of the closed genus formulas that do not depend on the counting field.
    fn closed_violations(&self, tower: &Tower) -> Vec<String> {
        let e = tower.ext();
        let mut out = Vec::new();
        for (i, c) in [&self.c1, &self.c2].into_iter().enumerate() {
            if c.d1 != 0 {
                out.push(format!("(f{0}, f{0}*) = 1", i + 1));
            }
        }
        if self.c1.f_fstar(tower).gcd(e, &self.c2.f_fstar(tower)).deg() != 0 {
            out.push("(f1 f1*, f2 f2*) = 1".to_string());
        }
        out
    }

    pub fn genus(&self, tower: &Tower, mode: GenusMode) -> Result<i64> {
        let want = match mode {
            GenusMode::General => return self.pair.genus(tower),
            GenusMode::ClosedPlus => FibreShape::Product,
            GenusMode::ClosedMinus => FibreShape::Quotient,
        };
        if self.shape != want {
            return Err(hypothesis(format!(
                "closed genus for shape {want} asked of a shape {} fibre product",
                self.shape
            )));
        }
        let failed = self.closed_violations(tower);
        if !failed.is_empty() {
            return Err(hypothesis(format!("fails {}", failed.join(", "))));
        }
        let (m1, m2) = (self.c1.m as i64, self.c2.m as i64);
        let (d1, d2) = (self.c1.d as i64, self.c2.d as i64);
        let (s1, s2) = (self.c1.s as i64, self.c2.s as i64);
        let lead = m1 * m2 * (d1 + d2) - d1 * m2 - d2 * m1 + 1;
        let kappa = self.kappa() as i64;
        Ok(match self.shape {
            FibreShape::Product => {
                let at_inf = gcd_all(&[m1 * m2, m2 * (2 * d1 - s1), m1 * (2 * d2 - s2)]) as i64;
                lead - (kappa + at_inf) / 2
            }
            FibreShape::Quotient => lead - kappa,
        })
    }

    /// Notes on hypotheses the construction breaches but the engine handles.
    pub fn notes(&self) -> Vec<String> {
        [&self.c1, &self.c2]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.s >= c.m)
            .map(|(i, c)| format!("s{0} = {1} is not below m{0} = {2}", i + 1, c.s, c.m))
            .collect()
    }

    pub fn count_points(&self, tower: &Tower, exec: Exec) -> Result<CountReport> {
        self.validate(tower)?;
        let genus = self.pair.genus(tower)?;
        let points = self.pair.count_places(tower, exec);
        let mut report = CountReport::new(self.q, genus, points, PLACE_ENUMERATION);
        for n in self.notes() {
            report = report.with_note(n);
        }
        Ok(report)
    }

    /// The closed lower bound for this shape, with its hypotheses checked.
    pub fn lower_bound(&self, tower: &Tower) -> Result<i64> {
        let e = tower.ext();
        let q = self.q as i64;
        let mut failed = self.closed_violations(tower);
        let norm = Poly::monomial(Fe::ONE, self.q as usize + 1).sub(e, &Poly::one());
        for (i, c) in [&self.c1, &self.c2].into_iter().enumerate() {
            let i = i + 1;
            if c.m < 2 {
                failed.push(format!("m{i} >= 2"));
            }
            if c.s >= c.m {
                failed.push(format!("0 <= s{i} < m{i}"));
            }
            let divides = match self.shape {
                FibreShape::Product => (self.q + 1).is_multiple_of(c.m),
                FibreShape::Quotient => (self.q - 1).is_multiple_of(c.m),
            };
            if !divides {
                let sign = if self.shape == FibreShape::Product { '+' } else { '-' };
                failed.push(format!("m{i} | q{sign}1"));
            }
            if c.f.gcd(e, &norm).deg() != 0 {
                failed.push(format!("(f{i}, x^(q+1) - 1) = 1"));
            }
        }
        if failed.is_empty() {
            if let Err(err) = self.validate(tower) {
                failed.push(format!("[F(X) : F(x)] = m1 m2 ({err})"));
            }
        }
        if !failed.is_empty() {
            return Err(hypothesis(format!("fails {}", failed.join(", "))));
        }
        let (m1, m2) = (self.c1.m as i64, self.c2.m as i64);
        Ok(match self.shape {
            FibreShape::Product => {
                let n1 = tower.count_roots(&self.c1.f, &RootSet::BaseUnits) as i64;
                let n2 = tower.count_roots(&self.c2.f, &RootSet::BaseUnits) as i64;
                let (d1, d2) = (self.c1.d as i64, self.c2.d as i64);
                let (s1, s2) = (self.c1.s as i64, self.c2.s as i64);
                let g = gcd_all(&[q + 1, 2 * (d1 - s1), 2 * (d2 - s2)]) as i64;
                // f1 and f2 are coprime, so N_{f1 f2} = N_{f1} + N_{f2}
                m1 * m2 * (g + q - 3 - 2 * (n1 + n2)) + 2 * m2 * n1 + 2 * m1 * n2
            }
            FibreShape::Quotient => m1 * m2 * (q + 1),
        })
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        CurveSpec::Fibre {
            shape: self.shape.id().to_string(),
            q: self.q,
            m1: self.c1.m,
            s1: self.c1.s,
            f1: tower.show_poly(&self.c1.f),
            m2: self.c2.m,
            s2: self.c2.s,
            f2: tower.show_poly(&self.c2.f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramification::affine_solutions;

    #[allow(clippy::too_many_arguments)]
    fn fp(q: u64, shape: FibreShape, m1: u64, s1: u64, f1: &str, m2: u64, s2: u64, f2: &str) -> (Tower, FibreProduct) {
        let t = Tower::from_q(q).unwrap();
        let x = FibreProduct::parse(&t, shape, m1, s1, f1, m2, s2, f2).unwrap();
        (t, x)
    }

    #[test]
    fn product_shape_rows() {
        let (t, x) = fp(19, FibreShape::Product, 2, 4, "x^4+2", 4, 4, "x^4+7");
        assert_eq!(x.validate(&t).unwrap(), 8);
        assert_eq!(x.genus(&t, GenusMode::ClosedPlus).unwrap(), 33);
        assert_eq!(x.genus(&t, GenusMode::General).unwrap(), 33);
        let r = x.count_points(&t, Exec::Parallel).unwrap();
        assert_eq!((r.genus, r.points), (33, 1280));
        assert_eq!(r.notes.len(), 2);
        assert_eq!(r.notes[0], "s1 = 4 is not below m1 = 2");
        assert!(x.lower_bound(&t).is_err());
    }

    #[test]
    fn self_reciprocal_component() {
        let (t, x) = fp(5, FibreShape::Product, 3, 2, "x^2+1", 6, 5, "x^2+4");
        assert!(x.genus(&t, GenusMode::ClosedPlus).is_err());
        let r = x.count_points(&t, Exec::Sequential).unwrap();
        assert_eq!((r.genus, r.points), (22, 174));
    }

    #[test]
    fn quotient_shape_rows() {
        let (t, x) = fp(13, FibreShape::Quotient, 2, 0, "x^2+4", 4, 2, "x+5");
        assert_eq!(x.genus(&t, GenusMode::ClosedMinus).unwrap(), 11);
        let r = x.count_points(&t, Exec::Sequential).unwrap();
        assert_eq!((r.genus, r.points), (11, 444));
        assert_eq!(x.lower_bound(&t).unwrap(), 2 * 4 * 14);

        let (t, x) = fp(13, FibreShape::Quotient, 4, 1, "x+2", 4, 1, "x+6");
        assert_eq!(x.lower_bound(&t).unwrap(), 224);
        let r = x.count_points(&t, Exec::Sequential).unwrap();
        assert_eq!((r.genus, r.points), (21, 568));
    }

    #[test]
    fn wrong_closed_mode_is_rejected() {
        let (t, x) = fp(13, FibreShape::Quotient, 2, 0, "x^2+4", 4, 2, "x+5");
        assert!(x.genus(&t, GenusMode::ClosedPlus).is_err());
    }

    #[test]
    fn unramified_points_follow_the_splitting_rule() {
        let (t, x) = fp(7, FibreShape::Product, 4, 1, "x+3", 8, 3, "x+2");
        let e = t.ext();
        let mut checked = 0;
        for a in e.nonzero_elements() {
            let b1 = x.pair().h1.branch_at(e, a);
            let b2 = x.pair().h2.branch_at(e, a);
            if b1.k != 0 || b2.k != 0 {
                continue;
            }
            let lc = x.kappa_at(&t, Point::Finite(a));
            assert_eq!(lc.kappa, 32);
            assert_eq!(lc.places, affine_solutions(e, 4, b1.unit, 8, b2.unit));
            checked += 1;
        }
        assert!(checked > 40);
    }

    #[test]
    fn trivial_second_factor_is_the_single_cover() {
        let t = Tower::from_q(7).unwrap();
        let f = t.parse_base_poly("x^2+x+3").unwrap();
        let single = crate::kummer::ReciprocalKummer::over_x_power(&t, 4, 3, f.clone()).unwrap();
        let c1 = Component::new(&t, FibreShape::Product, 4, 3, f).unwrap();
        let c2 = Component::new(&t, FibreShape::Product, 1, 0, t.parse_base_poly("x+2").unwrap()).unwrap();
        let x = FibreProduct::new(&t, FibreShape::Product, c1, c2).unwrap();
        let a = single.count_points(&t, Exec::Sequential).unwrap();
        let b = x.count_points(&t, Exec::Sequential).unwrap();
        assert_eq!((a.genus, a.points), (b.genus, b.points));
    }

    #[test]
    fn shape_ids() {
        assert_eq!("61".parse::<FibreShape>().unwrap(), FibreShape::Product);
        assert_eq!("FIBRE63".parse::<FibreShape>().unwrap(), FibreShape::Quotient);
        assert!("62".parse::<FibreShape>().is_err());
    }
}
