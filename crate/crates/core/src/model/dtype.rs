use std::fmt;
use std::str::FromStr;

use crate::error::{GdfError, Result};

/// Per-channel sample encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GdfType {
    Int8,
    Uint8,
    Int16,
    Uint16,
    Int32,
    Uint32,
    Int64,
    Uint64,
    Float32,
    Float64,
    Float128,
    Int24,
    Uint24,
}

impl GdfType {
    pub const ALL: [GdfType; 13] = [
        GdfType::Int8,
        GdfType::Uint8,
        GdfType::Int16,
        GdfType::Uint16,
        GdfType::Int32,
        GdfType::Uint32,
        GdfType::Int64,
        GdfType::Uint64,
        GdfType::Float32,
        GdfType::Float64,
        GdfType::Float128,
        GdfType::Int24,
        GdfType::Uint24,
    ];

    pub fn from_code(code: u32) -> Result<Self> {
        Ok(match code {
            1 => GdfType::Int8,
            2 => GdfType::Uint8,
            3 => GdfType::Int16,
            4 => GdfType::Uint16,
            5 => GdfType::Int32,
            6 => GdfType::Uint32,
            7 => GdfType::Int64,
            8 => GdfType::Uint64,
            16 => GdfType::Float32,
            17 => GdfType::Float64,
            18 => GdfType::Float128,
            279 => GdfType::Int24,
            535 => GdfType::Uint24,
            other => return Err(GdfError::UnsupportedType(other)),
        })
    }

    pub const fn code(self) -> u32 {
        match self {
            GdfType::Int8 => 1,
            GdfType::Uint8 => 2,
            GdfType::Int16 => 3,
            GdfType::Uint16 => 4,
            GdfType::Int32 => 5,
            GdfType::Uint32 => 6,
            GdfType::Int64 => 7,
            GdfType::Uint64 => 8,
            GdfType::Float32 => 16,
            GdfType::Float64 => 17,
            GdfType::Float128 => 18,
            GdfType::Int24 => 279,
            GdfType::Uint24 => 535,
        }
    }

    pub const fn size_bytes(self) -> usize {
        match self {
            GdfType::Int8 | GdfType::Uint8 => 1,
            GdfType::Int16 | GdfType::Uint16 => 2,
            GdfType::Int24 | GdfType::Uint24 => 3,
            GdfType::Int32 | GdfType::Uint32 | GdfType::Float32 => 4,
            GdfType::Int64 | GdfType::Uint64 | GdfType::Float64 => 8,
            GdfType::Float128 => 16,
        }
    }

    pub const fn is_float(self) -> bool {
        matches!(self, GdfType::Float32 | GdfType::Float64 | GdfType::Float128)
    }

    pub const fn is_signed(self) -> bool {
        !matches!(
            self,
            GdfType::Uint8 | GdfType::Uint16 | GdfType::Uint24 | GdfType::Uint32 | GdfType::Uint64
        )
    }

    /// Inclusive value range. `None` for float128, which is never scaled.
    pub fn range(self) -> Option<(f64, f64)> {
        Some(match self {
            GdfType::Int8 => (i8::MIN as f64, i8::MAX as f64),
            GdfType::Uint8 => (0.0, u8::MAX as f64),
            GdfType::Int16 => (i16::MIN as f64, i16::MAX as f64),
            GdfType::Uint16 => (0.0, u16::MAX as f64),
            GdfType::Int24 => (-8_388_608.0, 8_388_607.0),
            GdfType::Uint24 => (0.0, 16_777_215.0),
            GdfType::Int32 => (i32::MIN as f64, i32::MAX as f64),
            GdfType::Uint32 => (0.0, u32::MAX as f64),
            // Bounds of the 64-bit types are not exact in f64; the check
            // treats the rounded value as inside.
            GdfType::Int64 => (i64::MIN as f64, i64::MAX as f64),
            GdfType::Uint64 => (0.0, u64::MAX as f64),
            GdfType::Float32 => (f32::MIN as f64, f32::MAX as f64),
            GdfType::Float64 => (f64::MIN, f64::MAX),
            GdfType::Float128 => return None,
        })
    }

    /// Whether a digital bound lies within the type range.
    pub fn contains(self, value: f64) -> bool {
        match self.range() {
            Some((lo, hi)) => value >= lo && value <= hi,
            None => true,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            GdfType::Int8 => "int8",
            GdfType::Uint8 => "uint8",
            GdfType::Int16 => "int16",
            GdfType::Uint16 => "uint16",
            GdfType::Int32 => "int32",
            GdfType::Uint32 => "uint32",
            GdfType::Int64 => "int64",
            GdfType::Uint64 => "uint64",
            GdfType::Float32 => "float32",
            GdfType::Float64 => "float64",
            GdfType::Float128 => "float128",
            GdfType::Int24 => "int24",
            GdfType::Uint24 => "uint24",
        }
    }
}

impl fmt::Display for GdfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GdfType {
    type Err = GdfError;

    fn from_str(s: &str) -> Result<Self> {
        GdfType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GdfError::InvalidArgument(format!("unknown data type {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_table() {
        let table: [(u32, usize); 13] = [
            (1, 1),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 4),
            (6, 4),
            (7, 8),
            (8, 8),
            (16, 4),
            (17, 8),
            (18, 16),
            (279, 3),
            (535, 3),
        ];
        for (code, size) in table {
            let t = GdfType::from_code(code).unwrap();
            assert_eq!(t.size_bytes(), size, "code {code}");
            assert_eq!(t.code(), code);
        }
        for code in 0..1024u32 {
            if !table.iter().any(|&(c, _)| c == code) {
                assert!(GdfType::from_code(code).is_err(), "code {code} accepted");
            }
        }
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(GdfType::Int24.range(), Some((-8_388_608.0, 8_388_607.0)));
        assert_eq!(GdfType::Uint24.range(), Some((0.0, 16_777_215.0)));
        assert!(!GdfType::Int16.contains(40_000.0));
        assert!(GdfType::Int16.contains(-32_768.0));
    }

    #[test]
    fn names_parse() {
        for t in GdfType::ALL {
            assert_eq!(t.name().parse::<GdfType>().unwrap(), t);
        }
    }
}
