pub mod arith;
pub mod artin_schreier;
pub mod closed;
pub mod error;
pub mod factor;
pub mod family;
pub mod fibre;
pub mod field;
pub mod kummer;
pub mod lattice;
pub mod par;
pub mod poly;
pub mod ramification;
pub mod ratfunc;
pub mod records;
pub mod report;
pub mod search;
pub mod tables;

pub use error::{Error, Result};
pub use artin_schreier::ArtinSchreierCurve;
pub use closed::{ClosedCurve, ClosedFamily};
pub use family::{Curve, CurveParams, Family};
pub use fibre::{Component, FibreProduct, FibreShape, GenusMode};
pub use field::{Fe, Field, FieldInfo, Tower};
pub use kummer::{KummerCover, ReciprocalKummer, Sign};
pub use par::Exec;
pub use poly::{Notation, Poly, RootSet};
pub use ratfunc::{BranchData, Point, RatFunc};
pub use records::{classify, RecordTable, Verdict, VerdictKind};
pub use report::{CountReport, CurveSpec, ReportDocument};
pub use search::{search, Coefficients, Format, ReportRow, SearchConfig, SearchSummary};
pub use tables::{reproduce_table, TableReport, TABLE_IDS};
