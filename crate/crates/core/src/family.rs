//! One selector for every curve family the crate can build, and a flat
//! parameter record that the table fixtures, the search sweeps and the batch
//! CLI all share.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::artin_schreier::ArtinSchreierCurve;
use crate::closed::{ClosedCurve, ClosedFamily};
use crate::error::{Error, Result};
use crate::fibre::{Component, FibreProduct, FibreShape};
use crate::field::{Fe, Tower};
use crate::kummer::{KummerCover, ReciprocalKummer, Sign};
use crate::par::Exec;
use crate::poly::{Notation, Poly};
use crate::ratfunc::RatFunc;
use crate::report::{CountReport, CurveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// y^m = f f* / x^s.
    #[serde(rename = "THM41")]
    ReciprocalPlus,
    /// y^m = x^s f / f*.
    #[serde(rename = "THM51")]
    ReciprocalMinus,
    #[serde(rename = "THM42")]
    ReciprocalPair,
    #[serde(rename = "PROP43")]
    HalfOrder,
    #[serde(rename = "PROP44")]
    SquaredBinomial,
    #[serde(rename = "FIBRE61")]
    FibrePlus,
    #[serde(rename = "FIBRE63")]
    FibreMinus,
    /// y^q + y = f f* / x^s.
    #[serde(rename = "AS")]
    ArtinSchreier,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::ReciprocalPlus,
        Family::ReciprocalMinus,
        Family::ReciprocalPair,
        Family::HalfOrder,
        Family::SquaredBinomial,
        Family::FibrePlus,
        Family::FibreMinus,
        Family::ArtinSchreier,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::ReciprocalPlus => "THM41",
            Family::ReciprocalMinus => "THM51",
            Family::ReciprocalPair => "THM42",
            Family::HalfOrder => "PROP43",
            Family::SquaredBinomial => "PROP44",
            Family::FibrePlus => "FIBRE61",
            Family::FibreMinus => "FIBRE63",
            Family::ArtinSchreier => "AS",
        }
    }

    pub fn closed(self) -> Option<ClosedFamily> {
        match self {
            Family::ReciprocalPair => Some(ClosedFamily::ReciprocalPair),
            Family::HalfOrder => Some(ClosedFamily::HalfOrder),
            Family::SquaredBinomial => Some(ClosedFamily::SquaredBinomial),
            _ => None,
        }
    }

    pub fn fibre(self) -> Option<FibreShape> {
        match self {
            Family::FibrePlus => Some(FibreShape::Product),
            Family::FibreMinus => Some(FibreShape::Quotient),
            _ => None,
        }
    }

    /// Cover degrees the family's bounds are stated for: divisors of q+1 or
    /// q-1 that are at least 2. Empty for families with a fixed degree.
    pub fn natural_degrees(self, q: u64) -> Vec<u64> {
        let n = match self {
            Family::ReciprocalPlus | Family::FibrePlus => q + 1,
            Family::ReciprocalMinus | Family::FibreMinus => q - 1,
            _ => return Vec::new(),
        };
        (2..=n).filter(|m| n % m == 0).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let t = s.trim();
        Family::ALL
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(t))
            .or(match t {
                "61" => Some(Family::FibrePlus),
                "63" => Some(Family::FibreMinus),
                _ => None,
            })
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown curve family".into(),
            })
    }
}

/// Family plus the parameters of the example tables, as strings where the
/// tables use polynomials. `m` is empty for `AS`; the second component is set
/// only for the fibre families. For the closed families `f` is x^d + b and
/// `s` must equal d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveParams {
    pub family: Family,
    pub q: u64,
    pub m: Option<u64>,
    pub f: String,
    pub s: u64,
    pub m2: Option<u64>,
    pub f2: Option<String>,
    pub s2: Option<u64>,
}

#[derive(Deserialize)]
struct BatchRow {
    family: Family,
    q: u64,
    m: Option<u64>,
    f: Option<String>,
    /// With `b`, f = x^d + b (d defaults to 1).
    b: Option<String>,
    d: Option<u64>,
    s: u64,
    m2: Option<u64>,
    f2: Option<String>,
    s2: Option<u64>,
}

/// Reads batch rows from CSV. Columns are matched by header name and unknown
/// columns are ignored, so table fixtures and exported rows can be fed back.
/// Each row gives either `f` or `b` (with optional `d`).
pub fn read_batch(reader: impl std::io::Read) -> Result<Vec<CurveParams>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<BatchRow>().enumerate() {
        let row = row?;
        let f = match (row.f, row.b) {
            (Some(f), _) if !f.is_empty() => f,
            (_, Some(b)) => match row.d.unwrap_or(1) {
                1 => format!("x+{b}"),
                d => format!("x^{d}+{b}"),
            },
            _ => {
                return Err(Error::Parse {
                    input: format!("batch row {}", i + 2),
                    reason: "needs an f or a b column".into(),
                })
            }
        };
        out.push(CurveParams {
            family: row.family,
            q: row.q,
            m: row.m,
            f,
            s: row.s,
            m2: row.m2,
            f2: row.f2,
            s2: row.s2,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Curve {
    Reciprocal(ReciprocalKummer),
    Closed(ClosedCurve),
    Fibre(FibreProduct),
    ArtinSchreier(ArtinSchreierCurve),
    /// A reciprocal-shape row whose f is not separable, counted as the plain
    /// cover y^m = h.
    General { cover: KummerCover, note: String },
}

fn missing(what: &str, family: Family) -> Error {
    Error::Parse {
        input: family.id().to_string(),
        reason: format!("{what} is required for this family"),
    }
}

/// Parses `input` with `names` and checks that every coefficient is in F_q.
pub fn parse_base_with(tower: &Tower, input: &str, names: &Notation) -> Result<Poly> {
    let f = Poly::parse(input, tower.ext(), names)?;
    if tower.restrict_poly(&f).is_none() {
        return Err(Error::Parse {
            input: input.to_string(),
            reason: format!("coefficients must lie in F_{}", tower.q()),
        });
    }
    Ok(f)
}

/// (d, b) when f = x^d + b with b ≠ 0.
fn binomial_parts(f: &Poly) -> Option<(u64, Fe)> {
    let d = f.degree()?;
    let inner_zero = (1..d).all(|i| f.coeff(i).is_zero());
    (d >= 1 && f.lc() == Fe::ONE && inner_zero && !f.coeff(0).is_zero()).then(|| (d as u64, f.coeff(0)))
}

impl CurveParams {
    pub fn single(family: Family, q: u64, m: Option<u64>, f: impl Into<String>, s: u64) -> CurveParams {
        CurveParams {
            family,
            q,
            m,
            f: f.into(),
            s,
            m2: None,
            f2: None,
            s2: None,
        }
    }

    /// Whether any polynomial mentions ξ, so that the ξ convention matters.
    pub fn mentions_xi(&self) -> bool {
        self.f.contains("xi") || self.f2.as_deref().is_some_and(|f| f.contains("xi"))
    }

    pub fn build(&self, tower: &Tower, names: &Notation) -> Result<Curve> {
        if tower.q() as u64 != self.q {
            return Err(Error::Hypothesis(format!(
                "parameters are over q = {} but the tower has q = {}",
                self.q,
                tower.q()
            )));
        }
        let f = parse_base_with(tower, &self.f, names)?;
        let fam = self.family;
        let m = || self.m.ok_or_else(|| missing("m", fam));
        match fam {
            Family::ReciprocalPlus | Family::ReciprocalMinus if !f.is_constant() && !f.is_separable(tower.ext()) => {
                let (eps, lam) = if fam == Family::ReciprocalPlus {
                    (Sign::Minus, Sign::Plus)
                } else {
                    (Sign::Plus, Sign::Minus)
                };
                general_cover(tower, m()?, self.s, eps, lam, &f)
            }
            Family::ReciprocalPlus => Ok(Curve::Reciprocal(ReciprocalKummer::over_x_power(tower, m()?, self.s, f)?)),
            Family::ReciprocalMinus => Ok(Curve::Reciprocal(ReciprocalKummer::quotient(tower, m()?, self.s, f)?)),
            Family::ReciprocalPair | Family::HalfOrder | Family::SquaredBinomial => {
                let closed = fam.closed().expect("closed family");
                let (d, b) = binomial_parts(&f).ok_or_else(|| Error::Parse {
                    input: self.f.clone(),
                    reason: "closed families take f = x^d + b".into(),
                })?;
                if self.s != d {
                    return Err(Error::Hypothesis(format!("{fam}: s = {} but d = {d}", self.s)));
                }
                let expected = closed.cover_degree(self.q);
                if let Some(m) = self.m.filter(|&m| m != expected) {
                    return Err(Error::Hypothesis(format!("{fam}: m = {m} but the family has m = {expected}")));
                }
                Ok(Curve::Closed(ClosedCurve::new(tower, closed, d, b)?))
            }
            Family::FibrePlus | Family::FibreMinus => {
                let shape = fam.fibre().expect("fibre family");
                let f2 = self.f2.as_deref().ok_or_else(|| missing("f2", fam))?;
                let f2 = parse_base_with(tower, f2, names)?;
                let m2 = self.m2.ok_or_else(|| missing("m2", fam))?;
                let s2 = self.s2.ok_or_else(|| missing("s2", fam))?;
                let c1 = Component::new(tower, shape, m()?, self.s, f)?;
                let c2 = Component::new(tower, shape, m2, s2, f2)?;
                Ok(Curve::Fibre(FibreProduct::new(tower, shape, c1, c2)?))
            }
            Family::ArtinSchreier => Ok(Curve::ArtinSchreier(ArtinSchreierCurve::new(tower, self.s, f)?)),
        }
    }
}

fn general_cover(tower: &Tower, m: u64, s: u64, eps: Sign, lam: Sign, f: &Poly) -> Result<Curve> {
    let e = tower.ext();
    if f.coeff(0).is_zero() {
        return Err(Error::Hypothesis("f(0) must be nonzero".into()));
    }
    let fstar = f.reciprocal()?;
    let h = RatFunc::x_pow(eps.value() * s as i64)
        .mul(e, &RatFunc::from_poly(e, f.clone())?)
        .mul(e, &RatFunc::from_poly(e, fstar)?.pow(e, lam.value()));
    Ok(Curve::General {
        cover: KummerCover::new(tower, m, h)?,
        note: "f is not separable; counted as the general cover y^m = h".into(),
    })
}

impl Curve {
    /// Genus and exact count from the enumeration engine.
    pub fn count_points(&self, tower: &Tower, exec: Exec) -> Result<CountReport> {
        match self {
            Curve::Reciprocal(c) => c.count_points(tower, exec),
            Curve::Closed(c) => c.count_points(tower, exec),
            Curve::Fibre(c) => c.count_points(tower, exec),
            Curve::ArtinSchreier(c) => Ok(c.count_points(tower, exec)),
            Curve::General { cover, note } => Ok(cover.report(tower, exec)?.with_note(note.clone())),
        }
    }

    pub fn genus(&self, tower: &Tower) -> Result<i64> {
        match self {
            Curve::Reciprocal(c) => c.genus(tower),
            Curve::Closed(c) => c.cover().genus(tower),
            Curve::Fibre(c) => c.genus(tower, crate::fibre::GenusMode::General),
            Curve::ArtinSchreier(c) => Ok(c.genus()),
            Curve::General { cover, .. } => cover.genus(tower),
        }
    }

    pub fn spec(&self, tower: &Tower) -> CurveSpec {
        match self {
            Curve::Reciprocal(c) => c.spec(tower),
            Curve::Closed(c) => c.spec(tower),
            Curve::Fibre(c) => c.spec(tower),
            Curve::ArtinSchreier(c) => c.spec(tower),
            Curve::General { cover, .. } => cover.spec(tower),
        }
    }
}
