mod common;

use std::fs;

use genoq_core::seqio::{attach_sequences, dataset_stats, load_labels_csv, load_promoter_csv, read_fasta, SequenceMode};
use genoq_core::Error;

#[test]
fn fixture_split_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (table, labels) = common::write_promoter_fixture(dir.path(), 21);
    let t = load_promoter_csv(&table).unwrap();
    assert_eq!(t.mode, SequenceMode::CoordinatesOnly);
    let l = load_labels_csv(&labels).unwrap();
    let joined: Vec<_> = t.records.iter().map(|r| l[&r.id].clone()).collect();
    let stats = dataset_stats(&t.records, &joined).unwrap();
    assert_eq!(stats.total, 36131);
    assert_eq!(stats.splits["train"]["negative"], common::TRAIN_NEG);
    assert_eq!(stats.splits["train"]["positive"], common::TRAIN_POS);
    assert_eq!(stats.splits["test"]["negative"], common::TEST_NEG);
    assert_eq!(stats.splits["test"]["positive"], common::TEST_POS);
    assert_eq!(stats.split_totals["train"], 27097);
    assert_eq!(stats.length_histogram.len(), 1);
    let csv = stats.to_csv();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn bad_row_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "id,region,start,end,strand\na,chr1,1,252,+\nb,chr1,x,252,+\n").unwrap();
    match load_promoter_csv(&path) {
        Err(Error::Csv { row, message }) => {
            assert_eq!(row, 3);
            assert!(message.contains("start"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn fasta_sidecar_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.csv");
    let fasta = dir.path().join("s.fa");
    fs::write(&table, "id,region,start,end,strand\np1,chr1,10,14,+\np2,chr2,0,3,-\n").unwrap();
    fs::write(&fasta, ">p2 extra words\nGGA\n>p1\nac\ngt\n").unwrap();
    let mut t = load_promoter_csv(&table).unwrap();
    let records = read_fasta(&fasta).unwrap();
    attach_sequences(&mut t, &records).unwrap();
    assert_eq!(t.records[0].sequence.as_ref().unwrap().to_string(), "ACGT");
    assert_eq!(t.records[1].sequence.as_ref().unwrap().to_string(), "GGA");
}
