//! The example tables shipped as fixtures, and their recomputation from
//! scratch.
//!
//! Rows whose polynomials mention ξ are tried under every ξ-power orbit
//! representative (see [`xi_orbit_exponents`]) and pass if one of them
//! reproduces the row; the exponent that worked is reported.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{CurveParams, Family};
use crate::field::Tower;
use crate::par::Exec;
use crate::records::{RecordTable, VerdictKind};
use crate::search::{evaluate, notation_for, xi_orbit_exponents, ReportRow};

const FIXTURE: &str = include_str!("../fixtures/tables.csv");

pub const TABLE_IDS: [&str; 14] = [
    "4.5", "4.6", "4.7", "4.8-remark", "4.9", "4.10", "5.2", "5.3", "5.4", "5.5", "5.6", "5.7", "6.2", "6.4",
];

/// What the stored OLB column means for a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OlbKind {
    /// The lower bound of the record table.
    TableLower,
    /// The many-points threshold L(q^2, g).
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    MeetRecord,
    NewEntry,
    NewRecord,
}

impl Category {
    pub fn verdict(self) -> VerdictKind {
        match self {
            Category::MeetRecord => VerdictKind::MeetsRecord,
            Category::NewEntry => VerdictKind::NewEntry,
            Category::NewRecord => VerdictKind::NewRecord,
        }
    }
}

/// One stored row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: String,
    pub family: Family,
    pub q: u64,
    pub m: Option<u64>,
    pub f: String,
    pub s: u64,
    pub m2: Option<u64>,
    pub f2: Option<String>,
    pub s2: Option<u64>,
    pub g: i64,
    pub points: u64,
    pub maximal: bool,
    pub olb: Option<u64>,
    pub olb_kind: Option<OlbKind>,
    pub category: Category,
}

impl TableRow {
    pub fn params(&self) -> CurveParams {
        CurveParams {
            family: self.family,
            q: self.q,
            m: self.m,
            f: self.f.clone(),
            s: self.s,
            m2: self.m2,
            f2: self.f2.clone(),
            s2: self.s2,
        }
    }
}

pub fn fixture_rows() -> Vec<TableRow> {
    let mut rdr = csv::Reader::from_reader(FIXTURE.as_bytes());
    rdr.deserialize()
        .collect::<std::result::Result<_, _>>()
        .expect("bundled table fixture is valid")
}

/// Stored rows of one table, or `UnknownTable`.
pub fn table_rows(id: &str) -> Result<Vec<TableRow>> {
    let id = id.trim();
    if !TABLE_IDS.contains(&id) {
        return Err(Error::UnknownTable(id.to_string()));
    }
    let rows: Vec<TableRow> = fixture_rows().into_iter().filter(|r| r.table == id).collect();
    if rows.is_empty() {
        return Err(Error::UnknownTable(id.to_string()));
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowStatus {
    /// Reproduced with ξ read as ξ_q.
    Match,
    /// Reproduced with ξ read as ξ_q^j.
    OrbitMatch { j: u64 },
    Mismatch { differences: Vec<String> },
    Error { message: String },
}

impl RowStatus {
    pub fn passed(&self) -> bool {
        matches!(self, RowStatus::Match | RowStatus::OrbitMatch { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub expected: TableRow,
    /// The recomputed row (under the exponent that matched, else ξ_q).
    pub computed: Option<ReportRow>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<RowOutcome>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status.passed())
    }

    /// One line per failing row.
    pub fn diff(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| !r.status.passed())
            .map(|r| {
                let e = &r.expected;
                let what = match &r.status {
                    RowStatus::Mismatch { differences } => differences.join("; "),
                    RowStatus::Error { message } => message.clone(),
                    _ => unreachable!(),
                };
                format!("{} {} q={} f={} s={}: {what}", e.table, e.family, e.q, e.f, e.s)
            })
            .collect()
    }

    pub fn computed_rows(&self) -> Vec<ReportRow> {
        self.rows.iter().filter_map(|r| r.computed.clone()).collect()
    }
}

fn compare(expected: &TableRow, got: &ReportRow) -> Vec<String> {
    let mut d = Vec::new();
    if got.g != expected.g {
        d.push(format!("genus {} != {}", got.g, expected.g));
    }
    if got.points != expected.points {
        d.push(format!("points {} != {}", got.points, expected.points));
    }
    if got.maximal != expected.maximal {
        d.push(format!("maximal {} != {}", got.maximal, expected.maximal));
    }
    if got.verdict != expected.category.verdict() {
        d.push(format!(
            "verdict {} != {}",
            got.verdict.as_str(),
            expected.category.verdict().as_str()
        ));
    }
    if let Some(olb) = expected.olb {
        if got.olb != olb {
            d.push(format!("OLB {} != {olb}", got.olb));
        }
    }
    d
}

fn reproduce_row(tower: &Tower, row: &TableRow, records: &RecordTable, exec: Exec) -> RowOutcome {
    let params = row.params();
    let exponents = if params.mentions_xi() {
        xi_orbit_exponents(tower)
    } else {
        vec![1]
    };
    let mut first: Option<(Option<ReportRow>, RowStatus)> = None;
    for j in exponents {
        let names = notation_for(tower, j);
        let (computed, status) = match evaluate(tower, &params, &names, records, exec) {
            Ok((report, verdict)) => {
                let got = ReportRow::new(&params, &report, &verdict);
                let differences = compare(row, &got);
                let status = match (differences.is_empty(), j) {
                    (true, 1) => RowStatus::Match,
                    (true, j) => RowStatus::OrbitMatch { j },
                    (false, _) => RowStatus::Mismatch { differences },
                };
                (Some(got), status)
            }
            Err(e) => (None, RowStatus::Error { message: e.to_string() }),
        };
        if status.passed() {
            return RowOutcome {
                expected: row.clone(),
                computed,
                status,
            };
        }
        first.get_or_insert((computed, status));
    }
    let (computed, status) = first.expect("at least one exponent");
    RowOutcome {
        expected: row.clone(),
        computed,
        status,
    }
}

/// Recomputes every stored row of table `id` and compares it with the
/// fixture, classifying against the bundled record table.
pub fn reproduce_table(id: &str, exec: Exec) -> Result<TableReport> {
    reproduce_table_with(id, &RecordTable::bundled(), exec)
}

pub fn reproduce_table_with(id: &str, records: &RecordTable, exec: Exec) -> Result<TableReport> {
    let rows = table_rows(id)?;
    let mut towers = BTreeMap::new();
    for r in &rows {
        if let std::collections::btree_map::Entry::Vacant(v) = towers.entry(r.q) {
            v.insert(Tower::from_q(r.q)?);
        }
    }
    let outcomes = rows
        .iter()
        .map(|r| reproduce_row(&towers[&r.q], r, records, exec))
        .collect();
    Ok(TableReport {
        table: id.trim().to_string(),
        rows: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_and_covers_the_ids() {
        let rows = fixture_rows();
        assert!(rows.len() > 150);
        for r in &rows {
            assert!(TABLE_IDS.contains(&r.table.as_str()), "{}", r.table);
        }
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(table_rows("9.9"), Err(Error::UnknownTable(_))));
        // listed id with no table behind it
        assert!(matches!(reproduce_table("5.7", Exec::Parallel), Err(Error::UnknownTable(_))));
    }

    #[test]
    fn first_row_of_the_general_f_table() {
        let rows = table_rows("4.9").unwrap();
        let r = &rows[0];
        // marked maximal in the source table, but the Hasse–Weil bound for g = 4 over F_4 is 21
        assert_eq!((r.q, r.f.as_str(), r.g, r.points, r.maximal), (2, "x^3+x+1", 4, 15, false));
        let t = Tower::from_q(2).unwrap();
        let out = reproduce_row(&t, r, &RecordTable::bundled(), Exec::Sequential);
        assert_eq!(out.status, RowStatus::Match);
    }

    #[test]
    fn a_corrupted_row_shows_up_in_the_diff() {
        let mut r = table_rows("4.5").unwrap().remove(2);
        r.points += 1;
        let t = Tower::from_q(r.q).unwrap();
        let out = reproduce_row(&t, &r, &RecordTable::bundled(), Exec::Sequential);
        assert!(!out.status.passed());
        let report = TableReport {
            table: "4.5".into(),
            rows: vec![out],
        };
        assert_eq!(report.diff().len(), 1);
        assert!(report.diff()[0].contains("points"));
    }
}
