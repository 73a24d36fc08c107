//! Upper bounds, the many-points threshold L(q, g), and classification of a
//! point count against a table of known records.
//!
//! Throughout this module `q` is the size of the field the curve is counted
//! over (so q^2 for the curves built elsewhere in the crate).

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../fixtures/records.csv");

/// q + 1 + g⌊2√q⌋.
pub fn serre_upper(q: u64, g: u64) -> u64 {
    q + 1 + g * isqrt(4 * q as u128) as u64
}

/// L(q, g) = ⌊(U - q - 1)/√2⌋ + q + 1, with the floor computed exactly as
/// ⌊√(⌊x²/2⌋)⌋.
pub fn many_points_threshold(q: u64, upper: u64) -> Result<u64> {
    if upper < q + 1 {
        return Err(Error::Hypothesis(format!(
            "upper bound {upper} is below q + 1 = {}",
            q + 1
        )));
    }
    let x = (upper - q - 1) as u128;
    Ok(isqrt(x * x / 2) as u64 + q + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub lower: Option<u64>,
    pub upper: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordTable {
    entries: BTreeMap<(u64, u64), RecordEntry>,
}

#[derive(Deserialize, Serialize)]
struct Row {
    q: u64,
    g: u64,
    lower: Option<u64>,
    upper: u64,
}

impl RecordTable {
    /// The record rows shipped with the crate (every (q, g) pair the example
    /// tables refer to).
    pub fn bundled() -> RecordTable {
        RecordTable::from_reader(BUNDLED.as_bytes()).expect("bundled record table is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RecordTable> {
        RecordTable::from_reader(std::fs::File::open(path)?)
    }

    /// CSV with header `q,g,lower,upper`; `lower` may be empty.
    pub fn from_reader(reader: impl Read) -> Result<RecordTable> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut entries = BTreeMap::new();
        for (i, row) in rdr.deserialize::<Row>().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::MalformedTable {
                line,
                reason: e.to_string(),
            })?;
            if let Some(lo) = row.lower {
                if lo > row.upper {
                    return Err(Error::MalformedTable {
                        line,
                        reason: format!("lower {lo} exceeds upper {}", row.upper),
                    });
                }
            }
            let serre = serre_upper(row.q, row.g);
            if row.upper > serre {
                return Err(Error::MalformedTable {
                    line,
                    reason: format!("upper {} exceeds the Serre bound {serre}", row.upper),
                });
            }
            if row.upper < row.q + 1 {
                return Err(Error::MalformedTable {
                    line,
                    reason: format!("upper {} is below q + 1", row.upper),
                });
            }
            let entry = RecordEntry {
                lower: row.lower,
                upper: row.upper,
            };
            if entries.insert((row.q, row.g), entry).is_some() {
                return Err(Error::MalformedTable {
                    line,
                    reason: format!("duplicate row for q={}, g={}", row.q, row.g),
                });
            }
        }
        Ok(RecordTable { entries })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (&(q, g), e) in &self.entries {
            w.serialize(Row {
                q,
                g,
                lower: e.lower,
                upper: e.upper,
            })?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }

    pub fn get(&self, q: u64, g: u64) -> Option<&RecordEntry> {
        self.entries.get(&(q, g))
    }

    pub fn insert(&mut self, q: u64, g: u64, entry: RecordEntry) {
        self.entries.insert((q, g), entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    None,
    ManyPoints,
    NewEntry,
    MeetsRecord,
    NewRecord,
}

impl VerdictKind {
    /// NONE < MANY_POINTS < NEW_ENTRY = MEETS_RECORD < NEW_RECORD.
    pub fn rank(self) -> u8 {
        match self {
            VerdictKind::None => 0,
            VerdictKind::ManyPoints => 1,
            VerdictKind::NewEntry | VerdictKind::MeetsRecord => 2,
            VerdictKind::NewRecord => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::None => "NONE",
            VerdictKind::ManyPoints => "MANY_POINTS",
            VerdictKind::NewEntry => "NEW_ENTRY",
            VerdictKind::MeetsRecord => "MEETS_RECORD",
            VerdictKind::NewRecord => "NEW_RECORD",
        }
    }

    pub fn parse(s: &str) -> Option<VerdictKind> {
        [
            VerdictKind::None,
            VerdictKind::ManyPoints,
            VerdictKind::NewEntry,
            VerdictKind::MeetsRecord,
            VerdictKind::NewRecord,
        ]
        .into_iter()
        .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Table,
    /// No row for (q, g): U is the Serre bound and only MANY_POINTS can be
    /// awarded.
    NoTableFallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "U")]
    pub u: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<u64>,
    pub source: BoundSource,
}

pub fn classify(points: u64, q: u64, g: u64, table: &RecordTable) -> Result<Verdict> {
    let (entry, source) = match table.get(q, g) {
        Some(e) => (*e, BoundSource::Table),
        None => (
            RecordEntry {
                lower: None,
                upper: serre_upper(q, g),
            },
            BoundSource::NoTableFallback,
        ),
    };
    let l = many_points_threshold(q, entry.upper)?;
    let many = points >= l;
    let kind = match (source, entry.lower) {
        (BoundSource::Table, Some(lo)) if points > lo => VerdictKind::NewRecord,
        (BoundSource::Table, Some(lo)) if points == lo => VerdictKind::MeetsRecord,
        (BoundSource::Table, None) if many => VerdictKind::NewEntry,
        (BoundSource::Table, Some(_)) | (BoundSource::NoTableFallback, _) if many => {
            VerdictKind::ManyPoints
        }
        _ => VerdictKind::None,
    };
    Ok(Verdict {
        kind,
        l,
        u: entry.upper,
        lower: entry.lower,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn serre_examples() {
        assert_eq!(serre_upper(25, 0), 26);
        assert_eq!(serre_upper(25, 2), 46);
        assert_eq!(serre_upper(81, 4), 154);
        assert_eq!(serre_upper(2, 1), 5);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(many_points_threshold(49, 50).unwrap(), 50);
        // Hasse–Weil upper bounds for the table rows quoted with their L
        assert_eq!(many_points_threshold(2401, 7008).unwrap(), 5658);
        assert_eq!(many_points_threshold(361, 1616).unwrap(), 1248);
        assert!(many_points_threshold(49, 40).is_err());
    }

    #[test]
    fn classify_examples() {
        let mut t = RecordTable::default();
        t.insert(2401, 13, RecordEntry { lower: Some(3258), upper: 3676 });
        t.insert(361, 33, RecordEntry { lower: None, upper: 1616 });
        assert_eq!(classify(3576, 2401, 13, &t).unwrap().kind, VerdictKind::NewRecord);
        assert_eq!(classify(3258, 2401, 13, &t).unwrap().kind, VerdictKind::MeetsRecord);
        assert_eq!(classify(1280, 361, 33, &t).unwrap().kind, VerdictKind::NewEntry);
        assert_eq!(classify(1000, 361, 33, &t).unwrap().kind, VerdictKind::None);
        let fb = classify(60, 49, 1, &t).unwrap();
        assert_eq!(fb.source, BoundSource::NoTableFallback);
        assert_eq!(fb.u, 64);
    }

    #[test]
    fn malformed_rows() {
        let bad = "q,g,lower,upper\n49,1,70,64\n";
        assert!(matches!(
            RecordTable::from_reader(bad.as_bytes()),
            Err(Error::MalformedTable { line: 2, .. })
        ));
        let too_high = "q,g,lower,upper\n49,1,,65\n";
        assert!(RecordTable::from_reader(too_high.as_bytes()).is_err());
        let ok = "q,g,lower,upper\n49,1,,64\n";
        let t = RecordTable::from_reader(ok.as_bytes()).unwrap();
        assert_eq!(t.to_csv().unwrap(), ok);
    }

    #[test]
    fn bundled_table_loads() {
        assert!(!RecordTable::bundled().is_empty());
    }

    proptest! {
        #[test]
        fn threshold_matches_real_arithmetic(q in 2u64..5000, extra in 0u64..100_000) {
            let upper = q + 1 + extra;
            let l = many_points_threshold(q, upper).unwrap();
            prop_assert!(l <= upper);
            let x = extra as u128;
            let y = (l - q - 1) as u128;
            // y = ⌊x/√2⌋  <=>  2y² ≤ x² < 2(y+1)²
            prop_assert!(2 * y * y <= x * x && x * x < 2 * (y + 1) * (y + 1));
        }

        #[test]
        fn classify_is_monotone(points in 0u64..3000, bump in 0u64..200, lower in proptest::option::of(1500u64..2500)) {
            let mut t = RecordTable::default();
            t.insert(2401, 1, RecordEntry { lower, upper: 2500 });
            for g in [1u64, 2] {
                let a = classify(points, 2401, g, &t).unwrap().kind.rank();
                let b = classify(points + bump, 2401, g, &t).unwrap().kind.rank();
                prop_assert!(a <= b);
            }
        }
    }
}
