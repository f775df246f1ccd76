use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::DnaSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    /// First whitespace-delimited token of the header.
    pub id: String,
    pub description: String,
    pub sequence: DnaSequence,
}

/// Reads `>`-headed records. Sequence lines may be wrapped; blank lines are
/// ignored; duplicate ids are an error.
pub fn parse_fasta<R: Read>(reader: R) -> Result<Vec<FastaRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<(String, String, String, usize)> = None;

    let finish = |cur: (String, String, String, usize),
                  records: &mut Vec<FastaRecord>|
     -> Result<()> {
        let (id, description, body, line) = cur;
        let sequence = DnaSequence::parse(&body).map_err(|e| Error::Fasta {
            line,
            message: format!("record '{id}': {e}"),
        })?;
        records.push(FastaRecord { id, description, sequence });
        Ok(())
    };

    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim_end();
        if let Some(header) = trimmed.strip_prefix('>') {
            if let Some(cur) = current.take() {
                finish(cur, &mut records)?;
            }
            let header = header.trim();
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(Error::Fasta { line: line_no, message: "empty record id".into() });
            }
            if !seen.insert(id.clone()) {
                return Err(Error::Fasta {
                    line: line_no,
                    message: format!("duplicate id '{id}'"),
                });
            }
            let description = header[id.len()..].trim().to_string();
            current = Some((id, description, String::new(), line_no));
        } else if trimmed.trim().is_empty() {
            continue;
        } else if let Some(cur) = current.as_mut() {
            cur.2.push_str(trimmed.trim());
        } else {
            return Err(Error::Fasta {
                line: line_no,
                message: "sequence data before the first '>' header".into(),
            });
        }
    }
    if let Some(cur) = current.take() {
        finish(cur, &mut records)?;
    }
    Ok(records)
}

pub fn read_fasta(path: impl AsRef<Path>) -> Result<Vec<FastaRecord>> {
    parse_fasta(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapped_records() {
        let text = ">seq1 first one\nACGT\nacgt\n\n>seq2\nTTTT\n";
        let recs = parse_fasta(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].id, "seq1");
        assert_eq!(recs[0].description, "first one");
        assert_eq!(recs[0].sequence.to_string(), "ACGTACGT");
        assert_eq!(recs[1].sequence.to_string(), "TTTT");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = ">a\nAC\n>a\nGT\n";
        assert!(matches!(parse_fasta(text.as_bytes()), Err(Error::Fasta { line: 3, .. })));
    }

    #[test]
    fn bad_base_reports_record() {
        let text = ">a\nACNT\n";
        let err = parse_fasta(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("'a'"), "{err}");
    }

    #[test]
    fn data_before_header_rejected() {
        assert!(parse_fasta("ACGT\n>a\nAC\n".as_bytes()).is_err());
    }

    #[test]
    fn empty_record_rejected() {
        assert!(parse_fasta(">a\n>b\nAC\n".as_bytes()).is_err());
    }
}
