use std::fs;

use genoq_core::seqio::{parse_fasta, DnaSequence};
use genoq_core::Error;

/// Literal inputs above this size must be passed as `@file`.
pub const MAX_LITERAL_BYTES: usize = 1 << 20;

/// Text of a literal argument or of the file named by `@path`.
pub fn resolve(arg: &str, flag: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{flag}: cannot read '{path}': {e}"))),
        None if arg.len() > MAX_LITERAL_BYTES => Err(Error::InvalidArgument(format!(
            "{flag}: literal longer than 1 MiB, pass it as @file"
        ))),
        None => Ok(arg.to_string()),
    }
}

/// All sequences in an argument: FASTA records if the text starts with
/// `>`, otherwise one bare sequence.
pub fn sequences(arg: &str, flag: &str) -> Result<Vec<DnaSequence>, Error> {
    let text = resolve(arg, flag)?;
    if text.trim_start().starts_with('>') {
        let records = parse_fasta(text.as_bytes())?;
        Ok(records.into_iter().map(|r| r.sequence).collect())
    } else {
        DnaSequence::parse(&text)
            .map(|s| vec![s])
            .map_err(|e| Error::InvalidArgument(format!("{flag}: {e}")))
    }
}

/// Exactly one sequence.
pub fn sequence(arg: &str, flag: &str) -> Result<DnaSequence, Error> {
    let mut all = sequences(arg, flag)?;
    if all.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "{flag}: expected one sequence, found {}",
            all.len()
        )));
    }
    Ok(all.remove(0))
}

/// Comma-separated reals.
pub fn values(arg: &str, flag: &str) -> Result<Vec<f64>, Error> {
    resolve(arg, flag)?
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("{flag}: not a number: '{t}'")))
        })
        .collect()
}
