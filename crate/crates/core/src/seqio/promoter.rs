use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use super::{DnaSequence, FastaRecord};
use crate::error::{Error, Result};

pub const REQUIRED_COLUMNS: [&str; 5] = ["id", "region", "start", "end", "strand"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strand {
    #[serde(rename = "+")]
    Forward,
    #[serde(rename = "-")]
    Reverse,
}

impl Strand {
    fn parse(s: &str) -> Option<Strand> {
        match s.trim() {
            "+" => Some(Strand::Forward),
            "-" | "\u{2212}" => Some(Strand::Reverse),
            _ => None,
        }
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strand::Forward => "+",
            Strand::Reverse => "-",
        })
    }
}

/// One genomic interval of the promoter dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromoterRecord {
    pub id: String,
    pub region: String,
    pub start: u64,
    pub end: u64,
    pub strand: Strand,
    pub sequence: Option<DnaSequence>,
}

impl PromoterRecord {
    pub fn length(&self) -> u64 {
        self.end - self.start
    }
}

/// Whether sequences came from the CSV itself or must be supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMode {
    Inline,
    CoordinatesOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromoterTable {
    pub records: Vec<PromoterRecord>,
    pub mode: SequenceMode,
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

/// Parses `id,region,start,end,strand[,sequence]` CSV. Errors carry the
/// 1-based line number of the offending row and name the column.
pub fn read_promoter_csv<R: Read>(reader: R) -> Result<PromoterTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Schema(format!("cannot read header: {e}")))?
        .clone();
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = column_index(&headers, name)
            .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))?;
    }
    let seq_idx = column_index(&headers, "sequence");
    let mode = if seq_idx.is_some() { SequenceMode::Inline } else { SequenceMode::CoordinatesOnly };

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: format!("malformed row: {e}"),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let bad = |column: &str, message: String| Error::Csv {
            row: line,
            message: format!("column '{column}': {message}"),
        };
        let field = |i: usize| row.get(i).unwrap_or("").trim();

        let id = field(idx[0]).to_string();
        if id.is_empty() {
            return Err(bad("id", "empty id".into()));
        }
        let region = field(idx[1]).to_string();
        let start: u64 = field(idx[2])
            .parse()
            .map_err(|_| bad("start", format!("not a position: '{}'", field(idx[2]))))?;
        let end: u64 = field(idx[3])
            .parse()
            .map_err(|_| bad("end", format!("not a position: '{}'", field(idx[3]))))?;
        if end <= start {
            return Err(bad("end", format!("end {end} must exceed start {start}")));
        }
        let strand = Strand::parse(field(idx[4]))
            .ok_or_else(|| bad("strand", format!("expected '+' or '-', got '{}'", field(idx[4]))))?;
        let sequence = match seq_idx.map(field) {
            Some(text) if !text.is_empty() => {
                let seq = DnaSequence::parse(text).map_err(|e| bad("sequence", e.to_string()))?;
                if seq.len() as u64 != end - start {
                    return Err(bad(
                        "sequence",
                        format!("length {} differs from end - start = {}", seq.len(), end - start),
                    ));
                }
                Some(seq)
            }
            _ => None,
        };
        records.push(PromoterRecord { id, region, start, end, strand, sequence });
    }
    Ok(PromoterTable { records, mode })
}

pub fn load_promoter_csv(path: impl AsRef<Path>) -> Result<PromoterTable> {
    read_promoter_csv(File::open(path)?)
}

/// Fills missing sequences from FASTA records keyed by id. Every record
/// must end up with a sequence of the interval's length.
pub fn attach_sequences(table: &mut PromoterTable, fasta: &[FastaRecord]) -> Result<()> {
    let by_id: HashMap<&str, &FastaRecord> = fasta.iter().map(|r| (r.id.as_str(), r)).collect();
    for rec in &mut table.records {
        if rec.sequence.is_some() {
            continue;
        }
        let found = by_id
            .get(rec.id.as_str())
            .ok_or_else(|| Error::Schema(format!("no FASTA sequence for id '{}'", rec.id)))?;
        if found.sequence.len() as u64 != rec.length() {
            return Err(Error::Schema(format!(
                "FASTA sequence for '{}' has length {}, interval length is {}",
                rec.id,
                found.sequence.len(),
                rec.length()
            )));
        }
        rec.sequence = Some(found.sequence.clone());
    }
    Ok(())
}

/// Split/class assignment for one record.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub split: String,
    pub class: String,
}

/// Reads `id,split,class` CSV into a map keyed by id.
pub fn read_labels_csv<R: Read>(reader: R) -> Result<HashMap<String, Label>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Schema(format!("cannot read header: {e}")))?
        .clone();
    let col = |name: &str| {
        column_index(&headers, name).ok_or_else(|| Error::Schema(format!("missing column '{name}'")))
    };
    let (i_id, i_split, i_class) = (col("id")?, col("split")?, col("class")?);
    let mut out = HashMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: format!("malformed row: {e}"),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| row.get(i).unwrap_or("").trim().to_string();
        let id = get(i_id);
        let label = Label { split: get(i_split), class: get(i_class) };
        if out.insert(id.clone(), label).is_some() {
            return Err(Error::Csv { row: line, message: format!("duplicate id '{id}'") });
        }
    }
    Ok(out)
}

pub fn load_labels_csv(path: impl AsRef<Path>) -> Result<HashMap<String, Label>> {
    read_labels_csv(File::open(path)?)
}
