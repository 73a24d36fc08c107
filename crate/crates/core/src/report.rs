//! Count reports and their JSON form.

use serde::{Deserialize, Serialize};

use crate::field::{FieldInfo, Tower};
use crate::records::Verdict;

pub const REPORT_SCHEMA: &str = "rcurves.report/1";

/// q^2 + 1 + 2gq.
pub fn hasse_weil_upper(q: u64, genus: u64) -> u64 {
    q * q + 1 + 2 * genus * q
}

pub fn is_maximal(genus: i64, points: u64, q: u64) -> bool {
    genus >= 0 && points == hasse_weil_upper(q, genus as u64)
}

/// Parameters of a counted curve, in the column order of the example tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurveSpec {
    /// y^m = x^{εs} f f*^λ.
    Reciprocal {
        q: u64,
        m: u64,
        s: u64,
        eps: i8,
        lam: i8,
        f: String,
    },
    /// One of the closed-formula families, with f = x^d + b.
    Closed { id: String, q: u64, d: u64, b: String },
    /// y^m = h for an arbitrary rational function h.
    Kummer { q: u64, m: u64, h: String },
    /// Fibre product of two reciprocal covers, shape "61" or "63".
    Fibre {
        shape: String,
        q: u64,
        m1: u64,
        s1: u64,
        f1: String,
        m2: u64,
        s2: u64,
        f2: String,
    },
    /// y^q + y = f f* / x^s.
    ArtinSchreier { q: u64, s: u64, f: String },
}

/// Genus, exact count and bound checks for one curve over F_{q^2}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u64,
    pub genus: i64,
    pub points: u64,
    pub method: String,
    pub maximal: bool,
    /// q^2 + 1 + 2gq - points.
    pub hasse_weil_slack: i64,
    /// The count violates Hasse–Weil for the computed genus, so the curve is
    /// probably not absolutely irreducible over F_{q^2}.
    pub suspect: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl CountReport {
    pub fn new(q: u64, genus: i64, points: u64, method: impl Into<String>) -> CountReport {
        let qq = (q * q) as i64;
        let upper = qq + 1 + 2 * genus * q as i64;
        let lower = qq + 1 - 2 * genus * q as i64;
        let p = points as i64;
        CountReport {
            q,
            genus,
            points,
            method: method.into(),
            maximal: is_maximal(genus, points, q),
            hasse_weil_slack: upper - p,
            suspect: genus < 0 || p > upper || p < lower,
            notes: Vec::new(),
            verdict: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CountReport {
        self.notes.push(note.into());
        self
    }
}

/// Full JSON document for one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub field: FieldInfo,
    pub extension: FieldInfo,
    pub curve: CurveSpec,
    #[serde(flatten)]
    pub report: CountReport,
}

impl ReportDocument {
    pub fn new(tower: &Tower, curve: CurveSpec, report: CountReport) -> ReportDocument {
        ReportDocument {
            schema: REPORT_SCHEMA.to_string(),
            field: tower.base().info(),
            extension: tower.ext().info(),
            curve,
            report,
        }
    }
}
