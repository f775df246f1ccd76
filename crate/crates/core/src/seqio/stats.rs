use std::collections::BTreeMap;

use serde::Serialize;

use super::{Label, PromoterRecord};
use crate::error::{Error, Result};

/// Per-split, per-class counts and an interval-length histogram.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub splits: BTreeMap<String, BTreeMap<String, usize>>,
    pub split_totals: BTreeMap<String, usize>,
    pub length_histogram: BTreeMap<u64, usize>,
}

/// `labels[i]` belongs to `records[i]`.
pub fn dataset_stats(records: &[PromoterRecord], labels: &[Label]) -> Result<DatasetStats> {
    if records.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} records",
            labels.len(),
            records.len()
        )));
    }
    let mut stats = DatasetStats { total: records.len(), ..Default::default() };
    for (rec, label) in records.iter().zip(labels) {
        *stats
            .splits
            .entry(label.split.clone())
            .or_default()
            .entry(label.class.clone())
            .or_default() += 1;
        *stats.split_totals.entry(label.split.clone()).or_default() += 1;
        *stats.length_histogram.entry(rec.length()).or_default() += 1;
    }
    Ok(stats)
}

impl DatasetStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize") + "\n"
    }

    /// `split,class,count` rows in sorted order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("split,class,count\n");
        for (split, classes) in &self.splits {
            for (class, count) in classes {
                out.push_str(&format!("{split},{class},{count}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqio::Strand;

    fn rec(id: &str, len: u64) -> PromoterRecord {
        PromoterRecord {
            id: id.into(),
            region: "chr1".into(),
            start: 1000,
            end: 1000 + len,
            strand: Strand::Forward,
            sequence: None,
        }
    }

    #[test]
    fn empty_is_all_zero() {
        let s = dataset_stats(&[], &[]).unwrap();
        assert_eq!(s, DatasetStats::default());
        assert_eq!(s.to_csv(), "split,class,count\n");
    }

    #[test]
    fn single_251_interval() {
        let s = dataset_stats(
            &[rec("a", 251)],
            &[Label { split: "train".into(), class: "positive".into() }],
        )
        .unwrap();
        assert_eq!(s.length_histogram, BTreeMap::from([(251, 1)]));
        assert_eq!(s.to_csv(), "split,class,count\ntrain,positive,1\n");
    }

    #[test]
    fn label_count_must_match() {
        assert!(dataset_stats(&[rec("a", 3)], &[]).is_err());
    }
}
