//! Classical-to-quantum encoders.
//!
//! * [`baseline`]: amplitude encoding, second-order Pauli feature map, angle
//!   embedding.
//! * [`compress`]: QuantHuff (rank-paired Huffman tree) and QBWT.
//! * [`spectral`]: 2D DCT + QFT cosine encoding.
//! * [`entropy`]: SEncode, NZ22, NZ23 and QuantIG.

pub mod baseline;
pub mod compress;
pub mod entropy;
pub mod spectral;
