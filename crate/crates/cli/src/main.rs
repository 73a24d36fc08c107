use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use reciprocal_curves::family::read_batch;
use reciprocal_curves::par::with_threads;
use reciprocal_curves::records::many_points_threshold;
use reciprocal_curves::search::{annotate_isomorphs, evaluate, export, search, Format, ReportRow, SearchConfig};
use reciprocal_curves::tables::{reproduce_table_with, RowStatus, TABLE_IDS};
use reciprocal_curves::{
    classify, ArtinSchreierCurve, CountReport, CurveSpec, Exec, FibreProduct, FibreShape, GenusMode, RecordTable,
    ReciprocalKummer, ReportDocument, Sign, Tower,
};

#[derive(Parser)]
#[command(name = "rcurves", version, about = "Genus, exact point counts and record checks for reciprocal Kummer curves over F_{q^2}")]
struct Cli {
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Base field size q (alternative to --p/--n).
    #[arg(long, conflicts_with_all = ["p", "n"])]
    q: Option<u64>,
    #[arg(long, requires = "n")]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    n: Option<u32>,
}

impl FieldArgs {
    fn tower(&self) -> Result<Tower> {
        match (self.q, self.p, self.n) {
            (Some(q), _, _) => Ok(Tower::from_q(q)?),
            (None, Some(p), Some(n)) => Ok(Tower::new(p, n)?),
            _ => bail!("give either --q or both --p and --n"),
        }
    }
}

#[derive(Args, Clone)]
struct RecordArgs {
    /// Record table CSV (q,g,lower,upper); the bundled table by default.
    #[arg(long)]
    records: Option<PathBuf>,
}

impl RecordArgs {
    fn table(&self) -> Result<RecordTable> {
        Ok(match &self.records {
            Some(p) => RecordTable::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => RecordTable::bundled(),
        })
    }
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 0)]
    s: u64,
    /// ε in y^m = x^{εs} f f*^λ.
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    eps: Sign,
    /// λ in y^m = x^{εs} f f*^λ.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    lam: Sign,
    #[arg(long)]
    f: Option<String>,
    /// CSV of rows (family,q,m,f or b,s[,m2,f2,s2]); prints one report row each.
    #[arg(long, conflicts_with = "f")]
    batch: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    records: RecordArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Print the presentation of F_q and F_{q^2}.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Count y^m = x^{εs} f f*^λ over F_{q^2}.
    Count(CoverArgs),
    /// Genus of y^m = x^{εs} f f*^λ.
    Genus(CoverArgs),
    /// Count a fibre product of two reciprocal covers.
    CountFibre {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m1: Option<u64>,
        #[arg(long, default_value_t = 0)]
        s1: u64,
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        m2: Option<u64>,
        #[arg(long, default_value_t = 0)]
        s2: u64,
        #[arg(long)]
        f2: Option<String>,
        /// 61 (y_i^{m_i} = f_i f_i*/x^{s_i}) or 63 (y_i^{m_i} = x^{s_i} f_i/f_i*).
        #[arg(long, default_value = "61")]
        family: FibreShape,
        #[arg(long, conflicts_with_all = ["f1", "f2"])]
        batch: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        records: RecordArgs,
    },
    /// Count y^q + y = f f*/x^s over F_{q^2}.
    CountAs {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long)]
        f: String,
        #[command(flatten)]
        records: RecordArgs,
    },
    /// Sweep curve families as described by a TOML or JSON config.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Resumable progress file, rewritten after each (family, q, m) cell.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the config's format.
        #[arg(long)]
        format: Option<Format>,
    },
    /// Recompute a stored example table and diff it against the fixture.
    Reproduce {
        /// Table id, or "all".
        #[arg(long)]
        table: String,
        /// Also print the recomputed rows.
        #[arg(long)]
        rows: bool,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        records: RecordArgs,
    },
    /// Validate a record table, or classify one count against it.
    Records {
        #[arg(long)]
        table: Option<PathBuf>,
        /// Field size the curve is counted over (q^2 for the curves here).
        #[arg(long, requires_all = ["g", "points"])]
        field_size: Option<u64>,
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        points: Option<u64>,
    },
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn with_verdict(mut report: CountReport, table: &RecordTable) -> Result<CountReport> {
    let q = report.q;
    report.verdict = Some(classify(report.points, q * q, report.genus.max(0) as u64, table)?);
    Ok(report)
}

fn document(tower: &Tower, curve: CurveSpec, report: CountReport, table: &RecordTable) -> Result<()> {
    print_json(&ReportDocument::new(tower, curve, with_verdict(report, table)?))
}

/// Counts every batch row; failed rows go to stderr. Returns whether all
/// rows succeeded.
fn run_batch(path: &PathBuf, format: Format, table: &RecordTable, exec: Exec) -> Result<bool> {
    let params = read_batch(File::open(path).with_context(|| format!("reading {}", path.display()))?)?;
    let mut towers = BTreeMap::new();
    for p in &params {
        if let std::collections::btree_map::Entry::Vacant(v) = towers.entry(p.q) {
            v.insert(Tower::from_q(p.q)?);
        }
    }
    let results = exec.map(params.len(), |i| {
        let tower = &towers[&params[i].q];
        evaluate(tower, &params[i], &tower.notation(), table, Exec::Sequential)
    });
    let mut rows = Vec::new();
    let mut ok = true;
    for (i, (p, r)) in params.iter().zip(results).enumerate() {
        match r {
            Ok((report, verdict)) => rows.push(ReportRow::new(p, &report, &verdict)),
            Err(e) => {
                ok = false;
                eprintln!("row {}: {} q={} f={}: {e}", i + 2, p.family, p.q, p.f);
            }
        }
    }
    annotate_isomorphs(&mut rows);
    export(&rows, format, &mut io::stdout().lock())?;
    Ok(ok)
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().with_context(|| format!("{flag} is required"))
}

fn run(cli: Cli) -> Result<bool> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::FieldInfo { field } => {
            let t = field.tower()?;
            print_json(&json!({
                "q": t.q(),
                "field": t.base().info(),
                "extension": t.ext().info(),
                "xi_base_in_extension": t.ext().coeffs(t.xi_base()),
            }))?;
        }
        Command::Count(a) => {
            let table = a.records.table()?;
            if let Some(path) = &a.batch {
                return run_batch(path, a.format, &table, exec);
            }
            let t = a.field.tower()?;
            let f = t.parse_base_poly(&required(&a.f, "--f")?)?;
            let c = ReciprocalKummer::new(&t, required(&a.m, "--m")?, a.s, a.eps, a.lam, f)?;
            document(&t, c.spec(&t), c.count_points(&t, exec)?, &table)?;
        }
        Command::Genus(a) => {
            if a.batch.is_some() {
                bail!("genus does not take --batch; use count --batch");
            }
            let t = a.field.tower()?;
            let f = t.parse_base_poly(&required(&a.f, "--f")?)?;
            let c = ReciprocalKummer::new(&t, required(&a.m, "--m")?, a.s, a.eps, a.lam, f)?;
            let closed = c.genus_general().ok();
            print_json(&json!({
                "curve": c.spec(&t),
                "genus": c.cover().genus(&t)?,
                "closed_genus": closed,
                "d": c.d(),
                "d1": c.d1(),
            }))?;
        }
        Command::CountFibre {
            field,
            m1,
            s1,
            f1,
            m2,
            s2,
            f2,
            family,
            batch,
            format,
            records,
        } => {
            let table = records.table()?;
            if let Some(path) = &batch {
                return run_batch(path, format, &table, exec);
            }
            let t = field.tower()?;
            let (f1, f2) = (required(&f1, "--f1")?, required(&f2, "--f2")?);
            let x = FibreProduct::parse(&t, family, required(&m1, "--m1")?, s1, &f1, required(&m2, "--m2")?, s2, &f2)?;
            let mut report = x.count_points(&t, exec)?;
            let mode = match family {
                FibreShape::Product => GenusMode::ClosedPlus,
                FibreShape::Quotient => GenusMode::ClosedMinus,
            };
            if let Ok(g) = x.genus(&t, mode) {
                if g != report.genus {
                    report = report.with_note(format!("closed genus formula gives {g}"));
                }
            }
            match x.lower_bound(&t) {
                Ok(lb) => report = report.with_note(format!("lower bound {lb}")),
                Err(e) => report = report.with_note(format!("no lower bound: {e}")),
            }
            document(&t, x.spec(&t), report, &table)?;
        }
        Command::CountAs { field, s, f, records } => {
            let table = records.table()?;
            let t = field.tower()?;
            let c = ArtinSchreierCurve::new(&t, s, t.parse_base_poly(&f)?)?;
            document(&t, c.spec(&t), c.count_points(&t, exec), &table)?;
        }
        Command::Search {
            config,
            checkpoint,
            output,
            format,
        } => {
            let cfg = SearchConfig::load(&config).with_context(|| format!("reading {}", config.display()))?;
            let (rows, summary) = search(&cfg, checkpoint.as_deref(), exec)?;
            let format = format.unwrap_or(cfg.format);
            match output.or(cfg.output.clone()) {
                Some(path) => {
                    let mut file = File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                    export(&rows, format, &mut file)?;
                }
                None => export(&rows, format, &mut io::stdout().lock())?,
            }
            eprintln!(
                "{} rows from {} candidates in {} cells ({} skipped, {} below threshold, {} cells resumed)",
                rows.len(),
                summary.candidates,
                summary.cells,
                summary.skipped,
                summary.filtered,
                summary.resumed_cells
            );
        }
        Command::Reproduce {
            table,
            rows,
            format,
            records,
        } => {
            let records = records.table()?;
            let ids: Vec<&str> = if table == "all" {
                TABLE_IDS.iter().copied().filter(|&id| id != "5.7").collect()
            } else {
                vec![table.as_str()]
            };
            let mut clean = true;
            for id in ids {
                let report = reproduce_table_with(id, &records, exec)?;
                let orbit = report
                    .rows
                    .iter()
                    .filter(|r| matches!(r.status, RowStatus::OrbitMatch { .. }))
                    .count();
                let diff = report.diff();
                eprintln!(
                    "table {id}: {} rows, {} differ, {orbit} matched under a xi-orbit exponent",
                    report.rows.len(),
                    diff.len()
                );
                for line in &diff {
                    eprintln!("  {line}");
                }
                clean &= diff.is_empty();
                if rows {
                    export(&report.computed_rows(), format, &mut io::stdout().lock())?;
                }
            }
            return Ok(clean);
        }
        Command::Records {
            table,
            field_size,
            g,
            points,
        } => {
            let t = RecordArgs { records: table }.table()?;
            match (field_size, g, points) {
                (Some(qq), Some(g), Some(n)) => {
                    let v = classify(n, qq, g, &t)?;
                    print_json(&json!({
                        "verdict": v,
                        "threshold_at_upper": many_points_threshold(qq, v.u)?,
                    }))?;
                }
                _ => {
                    eprintln!("{} rows, all valid", t.len());
                    print!("{}", t.to_csv()?);
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    match with_threads(threads, || run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
