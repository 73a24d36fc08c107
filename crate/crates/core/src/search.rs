//! Parameter sweeps over the curve families, report rows and their CSV/JSON
//! export.
//!
//! A sweep is cut into cells, one per (family, q, m). Candidates inside a
//! cell are counted in parallel and put back in generation order, so the
//! output never depends on the thread count. After each cell the rows found
//! so far and the index of the next cell are written to an optional
//! checkpoint file, from which an interrupted sweep resumes.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::gcd_u;
use crate::error::{Error, Result};
use crate::family::{CurveParams, Family};
use crate::field::{Fe, Tower};
use crate::par::Exec;
use crate::poly::{Notation, Poly};
use crate::records::{classify, RecordTable, Verdict, VerdictKind};
use crate::report::CountReport;

pub const ROWS_SCHEMA: &str = "rcurves.rows/1";
const CHECKPOINT_SCHEMA: &str = "rcurves.checkpoint/1";

/// One counted curve, in the column order of the example tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
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
    /// The table lower bound when the record table has one, else L(q^2, g).
    pub olb: u64,
    pub verdict: VerdictKind,
    pub maximal: bool,
    /// Index of the first earlier row with the same family, q, g and count.
    pub isomorph_of: Option<usize>,
}

impl ReportRow {
    pub fn new(params: &CurveParams, report: &CountReport, verdict: &Verdict) -> ReportRow {
        ReportRow {
            family: params.family,
            q: params.q,
            m: params.m,
            f: params.f.clone(),
            s: params.s,
            m2: params.m2,
            f2: params.f2.clone(),
            s2: params.s2,
            g: report.genus,
            points: report.points,
            olb: verdict.lower.unwrap_or(verdict.l),
            verdict: verdict.kind,
            maximal: report.maximal,
            isomorph_of: None,
        }
    }

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

/// Counts one curve and classifies it against `table`.
pub fn evaluate(
    tower: &Tower,
    params: &CurveParams,
    names: &Notation,
    table: &RecordTable,
    exec: Exec,
) -> Result<(CountReport, Verdict)> {
    let curve = params.build(tower, names)?;
    let mut report = curve.count_points(tower, exec)?;
    let q = params.q;
    let verdict = classify(report.points, q * q, report.genus.max(0) as u64, table)?;
    report.verdict = Some(verdict);
    Ok((report, verdict))
}

/// Sets `isomorph_of` on every row that repeats an earlier (family, q, g, #X).
pub fn annotate_isomorphs(rows: &mut [ReportRow]) {
    let mut first: HashMap<(Family, u64, i64, u64), usize> = HashMap::new();
    for (i, row) in rows.iter_mut().enumerate() {
        let key = (row.family, row.q, row.g, row.points);
        row.isomorph_of = match first.get(&key) {
            Some(&j) => Some(j),
            None => {
                first.insert(key, i);
                None
            }
        };
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    /// f = x^d + b for every b ≠ 0 in F_q.
    #[default]
    Binomial,
    /// Every monic f of degree d over F_q with f(0) ≠ 0.
    Monic,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

/// A sweep, read from TOML or JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub families: Vec<Family>,
    pub q: Vec<u64>,
    /// Degrees of f (of x^d + b for the closed families).
    pub degrees: Vec<u64>,
    #[serde(default)]
    pub coefficients: Coefficients,
    /// Cover degrees; defaults to the family's natural degrees for each q.
    #[serde(default)]
    pub m: Option<Vec<u64>>,
    /// Values of s; defaults to 0..m (0..=2d for `AS`).
    #[serde(default)]
    pub s: Option<Vec<u64>>,
    #[serde(default = "default_min_verdict")]
    pub min_verdict: VerdictKind,
    #[serde(default)]
    pub records: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Upper bound on candidates per cell; larger cells are rejected.
    #[serde(default = "default_cell_limit")]
    pub cell_limit: usize,
}

fn default_min_verdict() -> VerdictKind {
    VerdictKind::None
}

fn default_cell_limit() -> usize {
    100_000
}

impl SearchConfig {
    pub fn new(families: Vec<Family>, q: Vec<u64>, degrees: Vec<u64>) -> SearchConfig {
        SearchConfig {
            families,
            q,
            degrees,
            coefficients: Coefficients::Binomial,
            m: None,
            s: None,
            min_verdict: VerdictKind::None,
            records: None,
            output: None,
            format: Format::Csv,
            cell_limit: default_cell_limit(),
        }
    }

    pub fn from_toml(text: &str) -> Result<SearchConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<SearchConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads TOML unless the file name ends in `.json`.
    pub fn load(path: impl AsRef<Path>) -> Result<SearchConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            SearchConfig::from_json(&text)
        } else {
            SearchConfig::from_toml(&text)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for q in &self.q {
            if let Err(e) = Tower::from_q(*q) {
                return bad(format!("q = {q}: {e}"));
            }
        }
        if self.degrees.contains(&0) {
            return bad("degrees must be at least 1".into());
        }
        if let Some(m) = &self.m {
            if m.iter().any(|&m| m < 1) {
                return bad("cover degrees must be at least 1".into());
            }
        }
        if self.cell_limit == 0 {
            return bad("cell_limit must be positive".into());
        }
        Ok(())
    }

    pub fn record_table(&self) -> Result<RecordTable> {
        match &self.records {
            Some(p) => RecordTable::load(p),
            None => Ok(RecordTable::bundled()),
        }
    }
}

/// All polynomials of the configured shape and degree, embedded in F_{q^2},
/// in a fixed order.
fn polynomials(tower: &Tower, d: u64, mode: Coefficients) -> Vec<Poly> {
    let base = tower.base();
    let q = base.order() as usize;
    let lift = |i: usize| tower.embed(base.element_at(i as u32));
    match mode {
        Coefficients::Binomial => (1..q)
            .map(|i| Poly::monomial(Fe::ONE, d as usize).add(tower.ext(), &Poly::constant(lift(i))))
            .collect(),
        Coefficients::Monic => {
            let d = d as usize;
            let total = (q - 1) * q.pow(d as u32 - 1);
            (0..total)
                .map(|mut k| {
                    let mut c = vec![Fe::ZERO; d + 1];
                    c[0] = lift(1 + k % (q - 1));
                    k /= q - 1;
                    for slot in c.iter_mut().take(d).skip(1) {
                        *slot = lift(k % q);
                        k /= q;
                    }
                    c[d] = Fe::ONE;
                    Poly::from_coeffs(c)
                })
                .collect()
        }
    }
}

/// One (family, q, m) block of the sweep, with its candidates in order.
#[derive(Clone, Debug)]
struct Cell {
    q: u64,
    candidates: Vec<CurveParams>,
}

fn s_values(cfg: &SearchConfig, upto: u64) -> Vec<u64> {
    match &cfg.s {
        Some(v) => v.clone(),
        None => (0..upto).collect(),
    }
}

fn cells(cfg: &SearchConfig, towers: &BTreeMap<u64, Tower>) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for &family in &cfg.families {
        for &q in &cfg.q {
            let tower = &towers[&q];
            let show = |f: &Poly| tower.show_poly(f);
            let mut degrees = cfg.degrees.clone();
            degrees.sort_unstable();
            degrees.dedup();
            let polys: Vec<(u64, String)> = degrees
                .iter()
                .flat_map(|&d| polynomials(tower, d, cfg.coefficients).into_iter().map(move |f| (d, f)))
                .map(|(d, f)| (d, show(&f)))
                .collect();
            let ms = cfg.m.clone().unwrap_or_else(|| family.natural_degrees(q));
            let mut blocks: Vec<Vec<CurveParams>> = Vec::new();
            match family {
                Family::ReciprocalPlus | Family::ReciprocalMinus => {
                    for &m in &ms {
                        let mut c = Vec::new();
                        for (_, f) in &polys {
                            for s in s_values(cfg, m) {
                                c.push(CurveParams::single(family, q, Some(m), f.clone(), s));
                            }
                        }
                        blocks.push(c);
                    }
                }
                Family::ReciprocalPair | Family::HalfOrder | Family::SquaredBinomial => {
                    let closed = family.closed().expect("closed family");
                    let m = closed.cover_degree(q);
                    let mut c = Vec::new();
                    for &d in &degrees {
                        for f in polynomials(tower, d, Coefficients::Binomial) {
                            c.push(CurveParams::single(family, q, Some(m), show(&f), d));
                        }
                    }
                    blocks.push(c);
                }
                Family::ArtinSchreier => {
                    let mut c = Vec::new();
                    for (d, f) in &polys {
                        let ss = cfg.s.clone().unwrap_or_else(|| (0..=2 * d).collect());
                        for s in ss {
                            c.push(CurveParams::single(family, q, None, f.clone(), s));
                        }
                    }
                    blocks.push(c);
                }
                Family::FibrePlus | Family::FibreMinus => {
                    let comps: Vec<(u64, u64, &String)> = ms
                        .iter()
                        .flat_map(|&m| polys.iter().flat_map(move |(_, f)| s_values(cfg, m).into_iter().map(move |s| (m, s, f))))
                        .collect();
                    for &m1 in &ms {
                        let mut c = Vec::new();
                        for (i, &(ma, sa, fa)) in comps.iter().enumerate() {
                            if ma != m1 {
                                continue;
                            }
                            for &(mb, sb, fb) in &comps[i + 1..] {
                                c.push(CurveParams {
                                    family,
                                    q,
                                    m: Some(ma),
                                    f: fa.clone(),
                                    s: sa,
                                    m2: Some(mb),
                                    f2: Some(fb.clone()),
                                    s2: Some(sb),
                                });
                            }
                        }
                        blocks.push(c);
                    }
                }
            }
            for candidates in blocks {
                if candidates.len() > cfg.cell_limit {
                    return Err(Error::Config(format!(
                        "a {family} cell over q = {q} has {} candidates, above cell_limit = {}",
                        candidates.len(),
                        cfg.cell_limit
                    )));
                }
                out.push(Cell { q, candidates });
            }
        }
    }
    Ok(out)
}

/// Sweep totals besides the emitted rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub cells: usize,
    pub candidates: usize,
    /// Candidates rejected by a family's hypotheses (not curves of the family).
    pub skipped: usize,
    /// Counted curves below `min_verdict`.
    pub filtered: usize,
    /// Cells taken from a checkpoint instead of recomputed.
    pub resumed_cells: usize,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    schema: String,
    config: SearchConfig,
    next_cell: usize,
    summary: SearchSummary,
    rows: Vec<ReportRow>,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs the sweep. With a checkpoint path, progress is saved after every cell
/// and a matching checkpoint from an earlier run is resumed.
pub fn search(cfg: &SearchConfig, checkpoint: Option<&Path>, exec: Exec) -> Result<(Vec<ReportRow>, SearchSummary)> {
    cfg.validate()?;
    let table = cfg.record_table()?;
    let mut towers = BTreeMap::new();
    for &q in &cfg.q {
        towers.entry(q).or_insert(Tower::from_q(q)?);
    }
    let cells = cells(cfg, &towers)?;

    let mut rows = Vec::new();
    let mut summary = SearchSummary::default();
    let mut start = 0;
    if let Some(path) = checkpoint.filter(|p| p.exists()) {
        let saved: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)?;
        if saved.schema != CHECKPOINT_SCHEMA || saved.config != *cfg {
            return Err(Error::Config(format!(
                "checkpoint {} belongs to a different search",
                path.display()
            )));
        }
        start = saved.next_cell.min(cells.len());
        rows = saved.rows;
        summary = saved.summary;
        summary.resumed_cells = start;
    }

    for (index, cell) in cells.iter().enumerate().skip(start) {
        let tower = &towers[&cell.q];
        let names = tower.notation();
        let results = exec.map(cell.candidates.len(), |i| {
            evaluate(tower, &cell.candidates[i], &names, &table, Exec::Sequential)
        });
        summary.cells += 1;
        for (params, result) in cell.candidates.iter().zip(results) {
            summary.candidates += 1;
            match result {
                Ok((report, verdict)) => {
                    if verdict.kind.rank() >= cfg.min_verdict.rank() {
                        rows.push(ReportRow::new(params, &report, &verdict));
                    } else {
                        summary.filtered += 1;
                    }
                }
                Err(Error::Io(e)) => return Err(Error::Io(e)),
                Err(_) => summary.skipped += 1,
            }
        }
        if let Some(path) = checkpoint {
            let cp = Checkpoint {
                schema: CHECKPOINT_SCHEMA.into(),
                config: cfg.clone(),
                next_cell: index + 1,
                summary: summary.clone(),
                rows: rows.clone(),
            };
            write_atomic(path, &serde_json::to_vec(&cp)?)?;
        }
    }
    annotate_isomorphs(&mut rows);
    Ok((rows, summary))
}

#[derive(Serialize, Deserialize)]
struct RowsDocument {
    schema: String,
    rows: Vec<ReportRow>,
}

pub fn to_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(ROW_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}

const ROW_HEADER: [&str; 14] = [
    "family", "q", "m", "f", "s", "m2", "f2", "s2", "g", "points", "olb", "verdict", "maximal", "isomorph_of",
];

pub fn from_csv(reader: impl Read) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn to_json(rows: &[ReportRow]) -> Result<String> {
    let doc = RowsDocument {
        schema: ROWS_SCHEMA.into(),
        rows: rows.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Vec<ReportRow>> {
    let doc: RowsDocument = serde_json::from_str(text)?;
    if doc.schema != ROWS_SCHEMA {
        return Err(Error::Config(format!("unsupported row schema {:?}", doc.schema)));
    }
    Ok(doc.rows)
}

pub fn export(rows: &[ReportRow], format: Format, out: &mut impl Write) -> Result<()> {
    let text = match format {
        Format::Csv => to_csv(rows)?,
        Format::Json => to_json(rows)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn import(text: &str, format: Format) -> Result<Vec<ReportRow>> {
    match format {
        Format::Csv => from_csv(text.as_bytes()),
        Format::Json => from_json(text),
    }
}

/// Representatives of the ξ-power orbits used to resolve the ξ convention:
/// exponents j prime to q-1, one per Frobenius orbit {j p^k mod (q-1)}, each
/// the smallest of its orbit. 1 comes first.
pub fn xi_orbit_exponents(tower: &Tower) -> Vec<u64> {
    let n = tower.q() as u64 - 1;
    let p = tower.p() as u64;
    if n == 1 {
        return vec![1];
    }
    (1..n)
        .filter(|&j| gcd_u(j, n) == 1)
        .filter(|&j| {
            let mut k = j * p % n;
            while k != j {
                if k < j {
                    return false;
                }
                k = k * p % n;
            }
            true
        })
        .collect()
}

/// Notation where `xi` stands for ξ_q^j.
pub fn notation_for(tower: &Tower, j: u64) -> Notation {
    Notation {
        xi: tower.ext().pow(tower.xi_base(), j),
        xi2: Some(tower.ext().xi()),
    }
}
