//! DNA sequences, base→bit maps, FASTA input and the promoter-interval
//! dataset loader.

mod basemap;
mod fasta;
mod promoter;
mod sequence;
mod stats;

pub use basemap::{base_bits, encode_bits, BaseScheme};
pub use fasta::{parse_fasta, read_fasta, FastaRecord};
pub use promoter::{
    attach_sequences, load_labels_csv, load_promoter_csv, read_labels_csv, read_promoter_csv,
    Label, PromoterRecord, PromoterTable, SequenceMode, Strand,
};
pub use sequence::{Base, DnaSequence};
pub use stats::{dataset_stats, DatasetStats};
