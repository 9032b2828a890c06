//! Little-endian field access at fixed offsets, plus padded text slots.

use crate::error::{GdfError, Result};

pub(crate) fn u16_at(buf: &[u8], off: usize) -> u16 {
    u16::from_le_bytes([buf[off], buf[off + 1]])
}

pub(crate) fn u32_at(buf: &[u8], off: usize) -> u32 {
    u32::from_le_bytes(buf[off..off + 4].try_into().unwrap())
}

pub(crate) fn i32_at(buf: &[u8], off: usize) -> i32 {
    i32::from_le_bytes(buf[off..off + 4].try_into().unwrap())
}

pub(crate) fn u64_at(buf: &[u8], off: usize) -> u64 {
    u64::from_le_bytes(buf[off..off + 8].try_into().unwrap())
}

pub(crate) fn i64_at(buf: &[u8], off: usize) -> i64 {
    i64::from_le_bytes(buf[off..off + 8].try_into().unwrap())
}

pub(crate) fn f32_at(buf: &[u8], off: usize) -> f32 {
    f32::from_le_bytes(buf[off..off + 4].try_into().unwrap())
}

pub(crate) fn f64_at(buf: &[u8], off: usize) -> f64 {
    f64::from_le_bytes(buf[off..off + 8].try_into().unwrap())
}

pub(crate) fn put(buf: &mut [u8], off: usize, bytes: &[u8]) {
    buf[off..off + bytes.len()].copy_from_slice(bytes);
}

/// Reads a padded text slot: stops at the first NUL and trims trailing
/// spaces. Invalid UTF-8 is replaced.
pub(crate) fn text_at(buf: &[u8], off: usize, len: usize) -> String {
    let slot = &buf[off..off + len];
    let end = slot.iter().position(|&b| b == 0).unwrap_or(len);
    String::from_utf8_lossy(&slot[..end]).trim_end_matches(' ').to_string()
}

/// Writes text NUL-padded into a slot; text longer than the slot is an error.
pub(crate) fn put_text(buf: &mut [u8], off: usize, len: usize, text: &str, field: &'static str) -> Result<()> {
    let bytes = text.as_bytes();
    if bytes.len() > len {
        return Err(GdfError::TextOverflow {
            field,
            len: bytes.len(),
            capacity: len,
        });
    }
    buf[off..off + bytes.len()].copy_from_slice(bytes);
    buf[off + bytes.len()..off + len].fill(0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_padding_variants() {
        let buf = *b"abc  \0\0\0";
        assert_eq!(text_at(&buf, 0, 8), "abc");
        let buf = *b"abc     ";
        assert_eq!(text_at(&buf, 0, 8), "abc");
        let buf = *b"a b\0zz\0\0";
        assert_eq!(text_at(&buf, 0, 8), "a b");
    }

    #[test]
    fn text_overflow_is_error() {
        let mut buf = [0xAAu8; 4];
        assert!(put_text(&mut buf, 0, 4, "abcde", "t").is_err());
        put_text(&mut buf, 0, 4, "ab", "t").unwrap();
        assert_eq!(buf, [b'a', b'b', 0, 0]);
        put_text(&mut buf, 0, 4, "abcd", "t").unwrap();
        assert_eq!(&buf, b"abcd");
    }
}
