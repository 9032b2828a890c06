//! Reading, writing and validating GDF 2.x biosignal files.
//!
//! A file is five consecutive sections: the fixed header, one 256-byte
//! header block per channel, an optional TLV header, the record-oriented
//! data section and an optional event table. [`file::read_bytes`] and
//! [`file::write_file`] handle whole files; the submodules expose each codec
//! on its own.

pub mod data;
pub mod error;
pub mod events;
pub mod file;
pub mod header;
pub mod model;

pub use error::{Diagnostic, GdfError, Result, Section, Severity};
pub use file::{read_bytes, read_file, write_file, GdfFile, ReadMode, StreamWriter};

pub(crate) fn bits_eq_f32(a: &[f32], b: &[f32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}
