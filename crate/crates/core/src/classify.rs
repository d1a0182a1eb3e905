//! Shannon counts, per-OM classification and the batch census over a
//! catalog of chirotopes.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chirotope::Chirotope;
use crate::coshell::{is_hkstar_matroid, ColineFixation, FixationWitness};
use crate::error::{Error, Result};
use crate::om::OrientedMatroid;
use crate::omp::{is_euclidean_matroid, is_hk_matroid, program_report, Program, ProgramWitness};
use crate::sign::SignVector;

/// Topes with exactly `r` facets, a facet being a covector covered by the tope.
pub fn simplicial_tope_count(om: &OrientedMatroid) -> usize {
    om.topes()
        .iter()
        .filter(|w| facet_count(om, w) == om.rank())
        .count()
}

fn facet_count(om: &OrientedMatroid, w: &SignVector) -> usize {
    let below: Vec<&SignVector> = om
        .covectors()
        .iter()
        .filter(|y| *y != w && !y.is_zero() && y.conforms_unchecked(w))
        .collect();
    below
        .iter()
        .filter(|y| !below.iter().any(|z| z != *y && y.conforms_unchecked(z)))
        .count()
}

pub fn is_shannon(om: &OrientedMatroid) -> bool {
    simplicial_tope_count(om) >= 2 * om.ground_size()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Identity reorientation and the trivial minor only.
    Quick,
    /// All minors and reorientations.
    Full,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Mode::Quick),
            "full" => Ok(Mode::Full),
            other => Err(Error::parse(None, format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub line: usize,
    pub chirotope: String,
}

impl CatalogEntry {
    /// `[tag ]n r signs`; untagged lines are named by line number.
    pub fn parse(text: &str, line: usize) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let (id, rest) = match tokens.len() {
            3 => (format!("line{line}"), &tokens[..]),
            4 => (tokens[0].to_string(), &tokens[1..]),
            _ => return Err(Error::parse(Some(line), "expected `[tag ]n r signs`")),
        };
        let chirotope = rest.join(" ");
        Chirotope::parse_line(&chirotope).map_err(|e| Error::parse(Some(line), e.to_string()))?;
        Ok(CatalogEntry { id, line, chirotope })
    }
}

/// Entries read from a catalog plus the lines that failed to parse.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub malformed: Vec<(usize, String)>,
}

/// Streams catalog entries; blank lines and `#` comments are skipped.
pub struct CatalogReader<R> {
    lines: std::io::Lines<R>,
    line: usize,
    bare: Option<(usize, usize)>,
}

impl<R: BufRead> CatalogReader<R> {
    pub fn new(reader: R) -> Self {
        CatalogReader {
            lines: reader.lines(),
            line: 0,
            bare: None,
        }
    }

    /// Accepts lines holding only a sign string, reading them as rank-`r`
    /// chirotopes on `n` elements. Catalogs distributed as one sign string
    /// per line can be consumed this way without conversion.
    pub fn with_bare_signs(mut self, n: usize, r: usize) -> Self {
        self.bare = Some((n, r));
        self
    }
}

impl<R: BufRead> Iterator for CatalogReader<R> {
    type Item = Result<CatalogEntry>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = match self.lines.next()? {
                Ok(t) => t,
                Err(e) => return Some(Err(e.into())),
            };
            self.line += 1;
            let text = text.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some((n, r)) = self.bare {
                if !text.contains(char::is_whitespace) {
                    return Some(CatalogEntry::parse(&format!("{n} {r} {text}"), self.line));
                }
            }
            return Some(CatalogEntry::parse(text, self.line));
        }
    }
}

pub fn ingest_catalog(path: &Path) -> Result<Catalog> {
    ingest_reader(CatalogReader::new(BufReader::new(File::open(path)?)))
}

pub fn ingest_reader<R: BufRead>(reader: CatalogReader<R>) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    for item in reader {
        match item {
            Ok(entry) => catalog.entries.push(entry),
            Err(Error::Parse { line: Some(line), msg }) => catalog.malformed.push((line, msg)),
            Err(e) => return Err(e),
        }
    }
    Ok(catalog)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Witnesses {
    pub hk: Option<String>,
    pub hkstar: Option<String>,
    pub euclidean: Option<String>,
}

impl Witnesses {
    fn is_empty(&self) -> bool {
        self.hk.is_none() && self.hkstar.is_none() && self.euclidean.is_none()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassificationReport {
    pub id: String,
    pub n: usize,
    pub r: usize,
    pub uniform: bool,
    pub hk: bool,
    pub hkstar: bool,
    pub euclidean: bool,
    pub shannon: bool,
    pub simplicial_tope_count: usize,
    pub witnesses: Option<Witnesses>,
    pub millis: u128,
}

fn program_witness(w: &ProgramWitness) -> String {
    serde_json::to_string(w).expect("plain data")
}

fn fixation_witness(w: &FixationWitness) -> String {
    serde_json::to_string(w).expect("plain data")
}

pub fn classify_one(entry: &CatalogEntry, mode: Mode) -> Result<ClassificationReport> {
    let tagged = |e: Error| Error::parse(Some(entry.line), format!("{}: {e}", entry.id));
    let chi = Chirotope::parse_line(&entry.chirotope).map_err(tagged)?;
    let om = OrientedMatroid::from_chirotope(&chi)?;
    classify_om(&entry.id, &om, mode)
}

pub fn classify_om(id: &str, om: &OrientedMatroid, mode: Mode) -> Result<ClassificationReport> {
    let start = Instant::now();
    let mut witnesses = Witnesses::default();
    let r = om.rank();
    let (hk, hkstar, euclidean) = match mode {
        Mode::Full => {
            let hk = is_hk_matroid(om)?;
            let hkstar = is_hkstar_matroid(om)?;
            let eu = is_euclidean_matroid(om)?;
            witnesses.hk = hk.witness.as_ref().map(program_witness);
            witnesses.hkstar = hkstar.witness.as_ref().map(fixation_witness);
            witnesses.euclidean = eu.witness.as_ref().map(program_witness);
            (hk.holds, hkstar.holds, eu.holds)
        }
        Mode::Quick => {
            let eu = is_euclidean_matroid(om)?;
            witnesses.euclidean = eu.witness.as_ref().map(program_witness);
            let (hk, hkstar) = if r <= 3 {
                (true, true)
            } else {
                witnesses.hk = quick_hk(om)?;
                witnesses.hkstar = quick_hkstar(om)?;
                (witnesses.hk.is_none(), witnesses.hkstar.is_none())
            };
            (hk, hkstar, eu.holds)
        }
    };
    let simplicial = simplicial_tope_count(om);
    Ok(ClassificationReport {
        id: id.to_string(),
        n: om.ground_size(),
        r,
        uniform: om.is_uniform(),
        hk,
        hkstar,
        euclidean,
        shannon: simplicial >= 2 * om.ground_size(),
        simplicial_tope_count: simplicial,
        witnesses: (!witnesses.is_empty()).then_some(witnesses),
        millis: start.elapsed().as_millis(),
    })
}

fn quick_hk(om: &OrientedMatroid) -> Result<Option<String>> {
    for &g in om.labels() {
        for &f in om.labels() {
            let Ok(pi) = Program::new(om.clone(), g, f) else { continue };
            let report = program_report(&pi)?;
            if let Some(hk) = report.hk.filter(|h| !h.holds) {
                return Ok(Some(format!(
                    "g={g} f={f}: {} disjoint paths, {} required",
                    hk.disjoint_path_count, hk.required_d
                )));
            }
        }
    }
    Ok(None)
}

fn quick_hkstar(om: &OrientedMatroid) -> Result<Option<String>> {
    use crate::coshell::{is_hkstar_fixation, is_proper_fixation};
    for t in om.colines().colines {
        let omega = ColineFixation::new(om.clone(), &t)?;
        if !is_proper_fixation(&omega) {
            continue;
        }
        let report = is_hkstar_fixation(&omega)?;
        if !report.holds {
            return Ok(Some(format!(
                "T={t:?}: {} disjoint paths, {} required",
                report.disjoint_path_count, report.required_d
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Aggregate {
    pub total: usize,
    pub errors: usize,
    pub uniform: usize,
    pub non_hk: usize,
    pub non_hkstar: usize,
    pub non_euclidean: usize,
    pub non_shannon: usize,
    /// Entries violating non-Shannon ⊆ non-HK* ⊆ non-Euclidean.
    pub containment_violations: usize,
}

impl Aggregate {
    pub fn add(&mut self, row: &Row) {
        self.total += 1;
        match &row.result {
            Err(_) => self.errors += 1,
            Ok(r) => {
                self.uniform += r.uniform as usize;
                self.non_hk += !r.hk as usize;
                self.non_hkstar += !r.hkstar as usize;
                self.non_euclidean += !r.euclidean as usize;
                self.non_shannon += !r.shannon as usize;
                if (!r.shannon && r.hkstar) || (!r.hkstar && r.euclidean) {
                    self.containment_violations += 1;
                }
            }
        }
    }
}

/// One catalog entry's outcome; the error is kept as text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Row {
    pub index: usize,
    pub id: String,
    pub result: std::result::Result<ClassificationReport, String>,
}

#[derive(Clone, Debug)]
pub struct BatchOptions {
    pub mode: Mode,
    pub jobs: usize,
    /// JSON-lines file of finished rows; rows already present are reused.
    pub checkpoint: Option<std::path::PathBuf>,
    /// Entries classified between checkpoint flushes.
    pub chunk: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            mode: Mode::Full,
            jobs: 0,
            checkpoint: None,
            chunk: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BatchOutcome {
    /// In catalog order.
    pub rows: Vec<Row>,
    pub aggregate: Aggregate,
    pub resumed: usize,
}

pub fn batch_classify(entries: &[CatalogEntry], options: &BatchOptions) -> Result<BatchOutcome> {
    let mut done: BTreeMap<usize, Row> = BTreeMap::new();
    if let Some(path) = &options.checkpoint {
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                // a torn final line from an interrupted run is recomputed
                if let Ok(row) = serde_json::from_str::<Row>(&line) {
                    if entries.get(row.index).is_some_and(|e| e.id == row.id) {
                        done.insert(row.index, row);
                    }
                }
            }
        }
    }
    let resumed = done.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let mut sink = match &options.checkpoint {
        Some(path) => Some(BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?)),
        None => None,
    };
    let todo: Vec<usize> = (0..entries.len()).filter(|i| !done.contains_key(i)).collect();
    for chunk in todo.chunks(options.chunk.max(1)) {
        let rows: Vec<Row> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&i| Row {
                    index: i,
                    id: entries[i].id.clone(),
                    result: classify_one(&entries[i], options.mode).map_err(|e| e.to_string()),
                })
                .collect()
        });
        if let Some(out) = sink.as_mut() {
            for row in &rows {
                serde_json::to_writer(&mut *out, row)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        done.extend(rows.into_iter().map(|r| (r.index, r)));
    }
    let rows: Vec<Row> = done.into_values().collect();
    let mut aggregate = Aggregate::default();
    for row in &rows {
        aggregate.add(row);
    }
    Ok(BatchOutcome {
        rows,
        aggregate,
        resumed,
    })
}

pub const CSV_HEADER: [&str; 10] = [
    "id",
    "n",
    "r",
    "uniform",
    "hk",
    "hkstar",
    "euclidean",
    "shannon",
    "simplicial_topes",
    "witness",
];

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for row in rows {
        let record: Vec<String> = match &row.result {
            Ok(r) => vec![
                r.id.clone(),
                r.n.to_string(),
                r.r.to_string(),
                r.uniform.to_string(),
                r.hk.to_string(),
                r.hkstar.to_string(),
                r.euclidean.to_string(),
                r.shannon.to_string(),
                r.simplicial_tope_count.to_string(),
                r.witnesses
                    .as_ref()
                    .map(|w| serde_json::to_string(w).expect("plain data"))
                    .unwrap_or_default(),
            ],
            Err(e) => {
                let mut v = vec![row.id.clone()];
                v.extend(std::iter::repeat_n(String::new(), 8));
                v.push(format!("error: {e}"));
                v
            }
        };
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
