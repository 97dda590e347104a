//! Contour codes between increasing trees and Stirling permutations, the
//! sequence / F-tree bijections, and exhaustive checks that statistics
//! transfer through the codes.

mod ary;
mod bundled;
mod seq;
mod transfer;

pub use ary::{decode_ary, encode_ary};
pub use bundled::{decode_bundled, decode_plane_recursive, encode_bundled, encode_plane_recursive};
pub use seq::{ary_to_seq_bundled, bundled_from_ftree, enumerate_ftrees, ftree_from_bundled, seq_bundled_to_ary, FTree};
pub use transfer::{verify_codecs, verify_stat_transfer, Check, Counterexample, TransferReport};
