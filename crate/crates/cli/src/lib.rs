//! Command-line surface over `cuspidal-core`.
//!
//! Exit codes: 0 success or table match, 1 table mismatch, 2 usage or
//! domain error.

pub mod json;
pub mod output;
pub mod reproduce;
pub mod tables;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cuspidal::enumerator::{classify, classify_range, enumerate_candidates, max_pairs_bound, Mode, SearchConfig};
use cuspidal::existence::resolve_existence;
use cuspidal::families::{
    attribute_family, cross_check, generate, ordered_factorization_count, ordered_factorizations, prime_degree_scan,
    FamilyKind, FamilySpec,
};
use cuspidal::semigroup::{bl_check, BlBudget};
use cuspidal::{CurveRecord, Error, MultiplicitySeq, Nat, NewtonPairSeq};
use serde::Serialize;

use crate::json::{chain_json, BlJson, Num, RecordJson, StepJson};
use crate::output::{render, Format, Metadata, OutputDocument};
use crate::reproduce::{reproduce, reproduce_all, Survivors, COMPLETE_DEGREE};
use crate::tables::TableId;

#[derive(Debug, Parser)]
#[command(name = "cuspidal", version, about = "Rational unicuspidal plane curves: search, invariants, families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Jobs {
    /// Worker threads for the search.
    #[arg(long, env = "CUSPIDAL_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

impl Jobs {
    fn workers(&self) -> Option<usize> {
        self.jobs.map(|j| j as usize)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All cusp types of a given degree and pair count passing the
    /// semigroup criterion.
    Enumerate {
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        pairs: usize,
        /// Use the unpruned reference search.
        #[arg(long)]
        paranoid: bool,
        /// Skip family attribution and existence resolution.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include wall-clock time in the metadata.
        #[arg(long)]
        timing: bool,
    },
    /// Every invariant of one cusp, with the semigroup verdict.
    Invariants {
        /// Newton pairs, e.g. "(2,3),(2,5)".
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        degree: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Regenerate an expected table and diff it.
    Reproduce {
        #[arg(long, value_enum)]
        table: TableId,
        /// Treat differences covered by a recorded erratum as mismatches.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Generate one member of a family.
    Family(FamilyArgs),
    /// Existence by degree reduction.
    Reduce {
        #[arg(long)]
        degree: u64,
        /// Multiplicity sequence, e.g. "16,8_4,4_3,2_3" or "16,8x4".
        #[arg(long)]
        mult: String,
    },
    /// Number of ordered factorizations of n.
    Factorizations {
        #[arg(long)]
        n: u64,
        /// Also list them.
        #[arg(long)]
        list: bool,
    },
    /// Primes admitting a curve other than the (d-1, d) one.
    PrimeScan {
        #[arg(long)]
        max: u64,
    },
    /// Enumerate, attribute and resolve every degree up to a bound.
    Classify {
        #[arg(long)]
        max_degree: u64,
        /// Restrict to these pair counts.
        #[arg(long, value_delimiter = ',')]
        pairs: Option<Vec<usize>>,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family slug, e.g. ams, tono-ib, kashiwara-ii-plus-ge, orevkov-star.
    pub kind: String,
    /// Full parameter list in family order.
    #[arg(long, value_delimiter = ',')]
    pub params: Option<Vec<u64>>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub l: Option<u64>,
    /// Kashiwara lambda list; its length is N.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<u64>>,
    /// AMS ordered factorization.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, Error> {
        let kind: FamilyKind = self.kind.parse()?;
        if let Some(p) = &self.params {
            return Ok(FamilySpec::new(kind, p.clone()));
        }
        let need = |v: Option<u64>, name: &str| {
            v.ok_or_else(|| Error::Domain(format!("{kind} needs --{name} (parameters {})", kind.param_names())))
        };
        let params = match kind {
            FamilyKind::Ams => self
                .factors
                .clone()
                .ok_or_else(|| Error::Domain("ams needs --factors".into()))?,
            FamilyKind::KashiwaraIIge | FamilyKind::KashiwaraIIsp => vec![need(self.l, "l")?],
            FamilyKind::KashiwaraIIplusGe
            | FamilyKind::KashiwaraIIplusSp
            | FamilyKind::KashiwaraIIminusGe
            | FamilyKind::KashiwaraIIminusSp => {
                let lambda = self.lambda.clone().unwrap_or_default();
                let mut p = vec![need(self.l, "l")?, lambda.len() as u64];
                p.extend(lambda);
                p
            }
            FamilyKind::TonoIa => vec![need(self.a, "a")?],
            FamilyKind::TonoIb => vec![need(self.a, "a")?, need(self.s, "s")?],
            FamilyKind::TonoIIa => vec![need(self.n, "n")?],
            FamilyKind::TonoIIb => vec![need(self.n, "n")?, need(self.s, "s")?],
            FamilyKind::Orevkov | FamilyKind::OrevkovStar => vec![need(self.k, "k")?],
        };
        Ok(FamilySpec::new(kind, params))
    }
}

#[derive(Debug, Serialize)]
struct ReduceDoc {
    metadata: Metadata,
    degree: Num,
    multiplicity_sequence: String,
    existence: String,
    reduction_chain: Vec<StepJson>,
}

#[derive(Debug, Serialize)]
struct FactorizationsDoc {
    metadata: Metadata,
    n: u64,
    count: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    factorizations: Option<Vec<Vec<u64>>>,
}

#[derive(Debug, Serialize)]
struct PrimeEntry {
    p: u64,
    tags: Vec<String>,
}

#[derive(Debug, Serialize)]
struct PrimeScanDoc {
    metadata: Metadata,
    max: u64,
    primes: Vec<PrimeEntry>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document serializes");
    s.push('\n');
    s
}

fn bl_json(rec: &CurveRecord) -> BlJson {
    match bl_check(&rec.degree, &rec.semigroup_generators, BlBudget::default()) {
        Ok(v) => BlJson::from(&v),
        Err(e) => BlJson { passed: false, j: None, expected: None, actual: None, note: Some(e.to_string()) },
    }
}

fn records_doc(meta: Metadata, recs: &[CurveRecord]) -> OutputDocument {
    OutputDocument { metadata: meta, records: recs.iter().map(RecordJson::from).collect() }
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Runs one command, returning the text for stdout and the exit code.
pub fn execute(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Enumerate { degree, pairs, paranoid, raw, jobs, format, timing } => {
            let start = Instant::now();
            let mode = if paranoid { Mode::Paranoid } else { Mode::Pruned };
            let mut cfg = SearchConfig::new(degree, pairs).mode(mode);
            cfg.workers = jobs.workers();
            let mut meta = Metadata::new("enumerate");
            let bound = max_pairs_bound(degree);
            let mut recs = if degree >= 3 && pairs > bound {
                // No cusp with this many pairs fits the genus; nothing to search.
                meta.notes.push(format!("k = {pairs} exceeds the pair bound {bound} for degree {degree}"));
                Vec::new()
            } else {
                enumerate_candidates(cfg)?
            };
            if !raw {
                recs = classify(recs);
            }
            meta.mode = Some(if paranoid { "paranoid" } else { "pruned" }.into());
            if degree > COMPLETE_DEGREE {
                meta.frontier = Some(format!("degree {degree} > {COMPLETE_DEGREE}: existence is not settled"));
            }
            if timing {
                meta.elapsed_ms = Some(elapsed_ms(start));
            }
            Ok((render(&records_doc(meta, &recs), format), 0))
        }
        Command::Invariants { pairs, degree, format } => {
            let newton: NewtonPairSeq = pairs.parse()?;
            let mut rec = CurveRecord::from_newton(Nat::from(degree), newton);
            let mut meta = Metadata::new("invariants");
            if rec.verify().is_ok() {
                rec.family = attribute_family(&rec);
                rec.kodaira = rec.family.as_ref().map(|f| f.kind.kodaira());
                let (status, chain) = resolve_existence(&rec.degree, &rec.mult);
                rec.existence = status;
                rec.reduction_chain = chain;
                if !rec.existence.is_proved() && rec.family.is_some() {
                    rec.existence = cuspidal::Existence::ProvedFamily;
                }
            } else {
                meta.notes.push(format!(
                    "delta {} differs from (d-1)(d-2)/2 for d = {degree}: not a rational unicuspidal curve of this degree",
                    rec.delta
                ));
            }
            let mut doc = records_doc(meta, std::slice::from_ref(&rec));
            doc.records[0].bl_check = Some(bl_json(&rec));
            Ok((render(&doc, format), 0))
        }
        Command::Reproduce { table, strict, jobs } => {
            let needs_survivors = !matches!(table, TableId::LctKashiwara | TableId::LctTono | TableId::LctOrevkov);
            let survivors = if needs_survivors {
                Survivors::compute(jobs.workers())?
            } else {
                Survivors { records: Vec::new() }
            };
            let reports = if table == TableId::All {
                reproduce_all(strict, &survivors)?
            } else {
                vec![reproduce(table, strict, &survivors)?]
            };
            let ok = reports.iter().all(|r| r.passed());
            let text: String = reports.iter().map(|r| r.to_string()).collect();
            Ok((text, if ok { 0 } else { 1 }))
        }
        Command::Family(args) => {
            let spec = args.spec()?;
            let rec = generate(&spec)?;
            let check = cross_check(&spec)?;
            let mut meta = Metadata::new("family");
            if !check.lct_matches || !check.self_intersection_matches {
                meta.notes.push(match check.erratum {
                    Some(why) => format!("tabulated closed form differs: {why}"),
                    None => "tabulated closed form differs from the recomputed invariants".into(),
                });
            }
            let mut doc = records_doc(meta, std::slice::from_ref(&rec));
            doc.records[0].bl_check = Some(bl_json(&rec));
            Ok((render(&doc, args.format), 0))
        }
        Command::Reduce { degree, mult } => {
            let m: MultiplicitySeq = mult.parse()?;
            let d = Nat::from(degree);
            let (status, chain) = resolve_existence(&d, &m);
            let doc = ReduceDoc {
                metadata: Metadata::new("reduce"),
                degree: Num(degree.into()),
                multiplicity_sequence: m.to_string(),
                existence: status.to_string(),
                reduction_chain: chain_json(&chain),
            };
            Ok((json_string(&doc), 0))
        }
        Command::Factorizations { n, list } => {
            if n == 0 {
                return Err(Error::Domain("n >= 1 required".into()).into());
            }
            let doc = FactorizationsDoc {
                metadata: Metadata::new("factorizations"),
                n,
                count: Num(ordered_factorization_count(n).into()),
                factorizations: list.then(|| ordered_factorizations(n)),
            };
            Ok((json_string(&doc), 0))
        }
        Command::PrimeScan { max } => {
            let primes = prime_degree_scan(max)
                .into_iter()
                .map(|(p, tags)| PrimeEntry { p, tags: tags.iter().map(|t| t.to_string()).collect() })
                .collect();
            let doc = PrimeScanDoc { metadata: Metadata::new("prime-scan"), max, primes };
            Ok((json_string(&doc), 0))
        }
        Command::Classify { max_degree, pairs, jobs, format, timing } => {
            let start = Instant::now();
            let recs = classify_range(max_degree, pairs.as_deref(), jobs.workers())?;
            let mut meta = Metadata::new("classify");
            meta.mode = Some("pruned".into());
            if max_degree > COMPLETE_DEGREE {
                meta.frontier = Some(format!(
                    "degrees above {COMPLETE_DEGREE} are outside the proved-complete range; candidates there are unresolved"
                ));
            }
            if timing {
                meta.elapsed_ms = Some(elapsed_ms(start));
            }
            Ok((render(&records_doc(meta, &recs), format), 0))
        }
    }
}

/// Parses `args`, runs, writes stdout/stderr and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
