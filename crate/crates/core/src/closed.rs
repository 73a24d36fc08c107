//! Families of reciprocal Kummer curves whose genus and point count over
//! F_{q^2} have closed forms in q, d and b.
//!
//! * `THM42`: y^{q+1} = (x^d + b)(b x^d + 1) / x^d with b ∈ F_q^*, b^2 ≠ 1, d | q+1.
//! * `PROP43`: y^{(q+1)/2} = (x^{2d} + b) / x^d with q odd, 4d | q^2-1, b^2 = 1.
//! * `PROP44`: y^{q+1} = (x^d + b)^2 / x^d with q odd, d odd, p ∤ d, b^2 = 1.
//!
//! The enumeration engine is the reference; these formulas are cross-checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_u};
use crate::error::{hypothesis, Error, Result};
use crate::field::{Fe, Tower};
use crate::kummer::{KummerCover, ReciprocalKummer, PLACE_ENUMERATION};
use crate::par::Exec;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::report::{is_maximal, CountReport, CurveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClosedFamily {
    /// f f*/x^d with f = x^d + b and m = q + 1.
    #[serde(rename = "THM42")]
    ReciprocalPair,
    /// (x^{2d} + b)/x^d with m = (q + 1)/2.
    #[serde(rename = "PROP43")]
    HalfOrder,
    /// (x^d + b)^2/x^d with m = q + 1.
    #[serde(rename = "PROP44")]
    SquaredBinomial,
}

impl ClosedFamily {
    pub const ALL: [ClosedFamily; 3] = [
        ClosedFamily::ReciprocalPair,
        ClosedFamily::HalfOrder,
        ClosedFamily::SquaredBinomial,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClosedFamily::ReciprocalPair => "THM42",
            ClosedFamily::HalfOrder => "PROP43",
            ClosedFamily::SquaredBinomial => "PROP44",
        }
    }

    pub fn cover_degree(self, q: u64) -> u64 {
        match self {
            ClosedFamily::HalfOrder => q.div_ceil(2),
            _ => q + 1,
        }
    }

    /// Every clause of the family's hypotheses that (q, d, b) fails, where b
    /// is an element of F_q; empty when the family applies.
    pub fn violations(self, tower: &Tower, d: u64, b: Fe) -> Vec<String> {
        let q = tower.q() as u64;
        let p = tower.p() as u64;
        let base = tower.base();
        let b_sq_one = !b.is_zero() && base.mul(b, b) == Fe::ONE;
        let mut out = Vec::new();
        if d == 0 {
            out.push("d >= 1".to_string());
        }
        if b.is_zero() {
            out.push("b != 0".to_string());
        }
        match self {
            ClosedFamily::ReciprocalPair => {
                if b_sq_one {
                    out.push("b^2 != 1".to_string());
                }
                if d == 0 || !(q + 1).is_multiple_of(d) {
                    out.push("d | q+1".to_string());
                }
            }
            ClosedFamily::HalfOrder => {
                if q.is_multiple_of(2) {
                    out.push("q odd".to_string());
                }
                if d == 0 || !(q * q - 1).is_multiple_of(4 * d) {
                    out.push("4d | q^2-1".to_string());
                }
                if !b_sq_one {
                    out.push("b^2 = 1".to_string());
                }
            }
            ClosedFamily::SquaredBinomial => {
                if q.is_multiple_of(2) {
                    out.push("q odd".to_string());
                }
                if d.is_multiple_of(2) {
                    out.push("d odd".to_string());
                }
                if d.is_multiple_of(p) {
                    out.push("p does not divide d".to_string());
                }
                if !b_sq_one {
                    out.push("b^2 = 1".to_string());
                }
            }
        }
        out
    }

    /// Closed genus in terms of q and d.
    pub fn genus(self, q: u64, d: u64) -> i64 {
        let (q, d) = (q as i64, d as i64);
        match self {
            ClosedFamily::ReciprocalPair => d * (q - 1) + 1,
            ClosedFamily::HalfOrder => (d * (q - 1) + 2 - gcd(2 * d, q + 1) as i64) / 2,
            ClosedFamily::SquaredBinomial => (d * (q - 1) + 2 - 2 * gcd(d, q + 1) as i64) / 2,
        }
    }

    /// Closed number of F_{q^2}-rational points.
    pub fn count(self, q: u64, d: u64) -> i64 {
        let (q, d) = (q as i64, d as i64);
        let g = |a: i64, b: i64| gcd(a, b) as i64;
        match self {
            ClosedFamily::ReciprocalPair => {
                d * (q * q - 1) + g(d, 2) * (q + 1) * (q + 1) + 4 * d
                    - d * (q + 1) * (g(q - 1, 2) + 2)
            }
            ClosedFamily::HalfOrder => {
                ((q + 1) * (q + 1) * g(2 * d, q - 1) + (q * q + 1) * g(2 * d, q + 1)
                    - 2 * d * (3 * q + 1))
                    / 2
            }
            ClosedFamily::SquaredBinomial => {
                (q * q + 1) * g(d, q + 1) + (q + 1) * (q + 1) * g(d, q - 1)
                    - (3 * q + 1) * g(d, q * q - 1)
            }
        }
    }

    /// The family's arithmetic maximality criterion. For `PROP44` it is only
    /// claimed when d | q^2 - 1; `None` outside that range, and always `None`
    /// for `THM42`, which has no such criterion.
    pub fn predicts_maximal(self, q: u64, d: u64) -> Option<bool> {
        let g = gcd_u;
        match self {
            ClosedFamily::ReciprocalPair => None,
            ClosedFamily::HalfOrder => Some(g(2 * d, q + 1) + g(2 * d, q - 1) == 2 * (d + 1)),
            ClosedFamily::SquaredBinomial => {
                (q * q - 1).is_multiple_of(d).then(|| g(d, q + 1) == 1 || g(d, q - 1) == 1)
            }
        }
    }
}

impl fmt::Display for ClosedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClosedFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClosedFamily> {
        ClosedFamily::ALL
            .into_iter()
            .find(|c| c.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected THM42, PROP43 or PROP44".into(),
            })
    }
}

/// One member of a closed family; `b` is kept as an element of F_{q^2}.
#[derive(Clone, Debug)]
pub struct ClosedCurve {
    family: ClosedFamily,
    q: u64,
    d: u64,
    b: Fe,
    cover: KummerCover,
}

impl ClosedCurve {
    /// `b` is an element of F_{q^2} that must lie in F_q.
    pub fn new(tower: &Tower, family: ClosedFamily, d: u64, b: Fe) -> Result<ClosedCurve> {
        let b_base = tower
            .restrict(b)
            .ok_or_else(|| hypothesis(format!("{family}: b must lie in F_{}", tower.q())))?;
        let failed = family.violations(tower, d, b_base);
        if !failed.is_empty() {
            return Err(hypothesis(format!("{family}: fails {}", failed.join(", "))));
        }
        let e = tower.ext();
        let q = tower.q() as u64;
        let m = family.cover_degree(q);
        let cover = match family {
            ClosedFamily::ReciprocalPair => {
                let f = Poly::monomial(Fe::ONE, d as usize).add(e, &Poly::constant(b));
                ReciprocalKummer::over_x_power(tower, m, d, f)?.cover().clone()
            }
            ClosedFamily::HalfOrder => {
                let num = Poly::monomial(Fe::ONE, 2 * d as usize).add(e, &Poly::constant(b));
                let h = RatFunc::from_poly(e, num)?.mul(e, &RatFunc::x_pow(-(d as i64)));
                KummerCover::new(tower, m, h)?
            }
            ClosedFamily::SquaredBinomial => {
                let base = Poly::monomial(Fe::ONE, d as usize).add(e, &Poly::constant(b));
                let h = RatFunc::from_poly(e, base.pow(e, 2))?.mul(e, &RatFunc::x_pow(-(d as i64)));
                KummerCover::new(tower, m, h)?
            }
        };
        Ok(ClosedCurve {
            family,
            q,
            d,
            b,
            cover,
        })
    }

    pub fn family(&self) -> ClosedFamily {
        self.family
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn b(&self) -> Fe {
        self.b
    }

    pub fn m(&self) -> u64 {
        self.cover.m()
    }

    pub fn cover(&self) -> &KummerCover {
        &self.cover
    }

    pub fn closed_genus(&self) -> i64 {
        self.family.genus(self.q, self.d)
    }

    pub fn closed_count(&self) -> u64 {
        self.family.count(self.q, self.d) as u64
    }

    /// Report from the closed formulas alone.
    pub fn closed_report(&self) -> CountReport {
        CountReport::new(self.q, self.closed_genus(), self.closed_count(), self.family.id())
    }

    /// Report from the enumeration engine, with a note if it disagrees with
    /// the closed formulas.
    pub fn count_points(&self, tower: &Tower, exec: Exec) -> Result<CountReport> {
        let genus = self.cover.genus(tower)?;
        let points = self.cover.count_points(tower, exec);
        let mut report = CountReport::new(self.q, genus, points, PLACE_ENUMERATION);
        if genus != self.closed_genus() || points != self.closed_count() {
            report = report.with_note(format!(
                "closed {} formulas give genus {} and {} points",
                self.family,
                self.closed_genus(),
                self.closed_count()
            ));
        }
        Ok(report)
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        CurveSpec::Closed {
            id: self.family.id().to_string(),
            q: self.q,
            d: self.d,
            b: tower.show_poly(&Poly::constant(self.b)),
        }
    }
}

/// Whether √2 · q · g + q^2 + 1 ≤ N for the `THM42` curve with parameters
/// (q, d), where g = d(q-1)+1 and N is its closed count; sufficient for the
/// curve to have many points. Evaluated exactly in integers.
pub fn many_points_inequality(q: u64, d: u64) -> bool {
    let a = (q * ClosedFamily::ReciprocalPair.genus(q, d) as u64) as i128;
    let b = ClosedFamily::ReciprocalPair.count(q, d) as i128 - (q * q + 1) as i128;
    b >= 0 && 2 * a * a <= b * b
}

/// Whether the closed count attains the Hasse–Weil bound for the closed genus.
pub fn closed_is_maximal(family: ClosedFamily, q: u64, d: u64) -> bool {
    is_maximal(family.genus(q, d), family.count(q, d) as u64, q)
}
