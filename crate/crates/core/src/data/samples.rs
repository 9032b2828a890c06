use crate::model::GdfType;

/// Fixed-width little-endian sample codec.
pub(crate) trait Codec {
    type Value: Copy + Send + Sync + Default;
    const SIZE: usize;
    fn read(b: &[u8]) -> Self::Value;
    fn write(v: Self::Value, b: &mut [u8]);
}

macro_rules! le_codec {
    ($name:ident, $t:ty) => {
        pub(crate) struct $name;
        impl Codec for $name {
            type Value = $t;
            const SIZE: usize = std::mem::size_of::<$t>();
            #[inline]
            fn read(b: &[u8]) -> $t {
                <$t>::from_le_bytes(b[..Self::SIZE].try_into().unwrap())
            }
            #[inline]
            fn write(v: $t, b: &mut [u8]) {
                b[..Self::SIZE].copy_from_slice(&v.to_le_bytes());
            }
        }
    };
}

le_codec!(LeI8, i8);
le_codec!(LeU8, u8);
le_codec!(LeI16, i16);
le_codec!(LeU16, u16);
le_codec!(LeI32, i32);
le_codec!(LeU32, u32);
le_codec!(LeI64, i64);
le_codec!(LeU64, u64);
le_codec!(LeF32, f32);
le_codec!(LeF64, f64);

pub(crate) struct Int24;
impl Codec for Int24 {
    type Value = i32;
    const SIZE: usize = 3;
    #[inline]
    fn read(b: &[u8]) -> i32 {
        decode_i24([b[0], b[1], b[2]])
    }
    #[inline]
    fn write(v: i32, b: &mut [u8]) {
        b[..3].copy_from_slice(&v.to_le_bytes()[..3]);
    }
}

pub(crate) struct Uint24;
impl Codec for Uint24 {
    type Value = u32;
    const SIZE: usize = 3;
    #[inline]
    fn read(b: &[u8]) -> u32 {
        decode_u24([b[0], b[1], b[2]])
    }
    #[inline]
    fn write(v: u32, b: &mut [u8]) {
        b[..3].copy_from_slice(&v.to_le_bytes()[..3]);
    }
}

pub(crate) struct Opaque128;
impl Codec for Opaque128 {
    type Value = [u8; 16];
    const SIZE: usize = 16;
    #[inline]
    fn read(b: &[u8]) -> [u8; 16] {
        b[..16].try_into().unwrap()
    }
    #[inline]
    fn write(v: [u8; 16], b: &mut [u8]) {
        b[..16].copy_from_slice(&v);
    }
}

/// Little-endian signed 24-bit integer, sign-extended from bit 23.
pub fn decode_i24(b: [u8; 3]) -> i32 {
    i32::from_le_bytes([b[0], b[1], b[2], 0]) << 8 >> 8
}

pub fn decode_u24(b: [u8; 3]) -> u32 {
    u32::from_le_bytes([b[0], b[1], b[2], 0])
}

/// 24-bit decode with the signedness chosen at run time.
pub fn decode_int24(b0: u8, b1: u8, b2: u8, signed: bool) -> i64 {
    if signed {
        decode_i24([b0, b1, b2]) as i64
    } else {
        decode_u24([b0, b1, b2]) as i64
    }
}

/// Raw samples of one channel in their stored type. 24-bit values are
/// widened to 32 bits; float128 values are kept as opaque bytes.
#[derive(Debug, Clone)]
pub enum Samples {
    Int8(Vec<i8>),
    Uint8(Vec<u8>),
    Int16(Vec<i16>),
    Uint16(Vec<u16>),
    Int24(Vec<i32>),
    Uint24(Vec<u32>),
    Int32(Vec<i32>),
    Uint32(Vec<u32>),
    Int64(Vec<i64>),
    Uint64(Vec<u64>),
    Float32(Vec<f32>),
    Float64(Vec<f64>),
    Float128(Vec<[u8; 16]>),
}

/// Dispatches `$body` with `$v` bound to the inner vector.
macro_rules! with_samples {
    ($s:expr, $v:ident => $body:expr) => {
        match $s {
            Samples::Int8($v) => $body,
            Samples::Uint8($v) => $body,
            Samples::Int16($v) => $body,
            Samples::Uint16($v) => $body,
            Samples::Int24($v) => $body,
            Samples::Uint24($v) => $body,
            Samples::Int32($v) => $body,
            Samples::Uint32($v) => $body,
            Samples::Int64($v) => $body,
            Samples::Uint64($v) => $body,
            Samples::Float32($v) => $body,
            Samples::Float64($v) => $body,
            Samples::Float128($v) => $body,
        }
    };
}

impl PartialEq for Samples {
    fn eq(&self, other: &Self) -> bool {
        use Samples::*;
        match (self, other) {
            (Float32(a), Float32(b)) => crate::bits_eq_f32(a, b),
            (Float64(a), Float64(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()),
            (Int8(a), Int8(b)) => a == b,
            (Uint8(a), Uint8(b)) => a == b,
            (Int16(a), Int16(b)) => a == b,
            (Uint16(a), Uint16(b)) => a == b,
            (Int24(a), Int24(b)) => a == b,
            (Uint24(a), Uint24(b)) => a == b,
            (Int32(a), Int32(b)) => a == b,
            (Uint32(a), Uint32(b)) => a == b,
            (Int64(a), Int64(b)) => a == b,
            (Uint64(a), Uint64(b)) => a == b,
            (Float128(a), Float128(b)) => a == b,
            _ => false,
        }
    }
}

impl Samples {
    pub fn empty(t: GdfType) -> Self {
        Self::with_capacity(t, 0)
    }

    pub fn with_capacity(t: GdfType, n: usize) -> Self {
        match t {
            GdfType::Int8 => Samples::Int8(Vec::with_capacity(n)),
            GdfType::Uint8 => Samples::Uint8(Vec::with_capacity(n)),
            GdfType::Int16 => Samples::Int16(Vec::with_capacity(n)),
            GdfType::Uint16 => Samples::Uint16(Vec::with_capacity(n)),
            GdfType::Int24 => Samples::Int24(Vec::with_capacity(n)),
            GdfType::Uint24 => Samples::Uint24(Vec::with_capacity(n)),
            GdfType::Int32 => Samples::Int32(Vec::with_capacity(n)),
            GdfType::Uint32 => Samples::Uint32(Vec::with_capacity(n)),
            GdfType::Int64 => Samples::Int64(Vec::with_capacity(n)),
            GdfType::Uint64 => Samples::Uint64(Vec::with_capacity(n)),
            GdfType::Float32 => Samples::Float32(Vec::with_capacity(n)),
            GdfType::Float64 => Samples::Float64(Vec::with_capacity(n)),
            GdfType::Float128 => Samples::Float128(Vec::with_capacity(n)),
        }
    }

    /// Builds samples of type `t` from numeric values, rounding and
    /// saturating for integer types. Float128 gets zero bytes.
    pub fn from_f64(t: GdfType, values: &[f64]) -> Self {
        let it = values.iter().copied();
        match t {
            GdfType::Int8 => Samples::Int8(it.map(|v| v.round() as i8).collect()),
            GdfType::Uint8 => Samples::Uint8(it.map(|v| v.round() as u8).collect()),
            GdfType::Int16 => Samples::Int16(it.map(|v| v.round() as i16).collect()),
            GdfType::Uint16 => Samples::Uint16(it.map(|v| v.round() as u16).collect()),
            GdfType::Int24 => Samples::Int24(it.map(|v| v.round().clamp(-8_388_608.0, 8_388_607.0) as i32).collect()),
            GdfType::Uint24 => Samples::Uint24(it.map(|v| v.round().clamp(0.0, 16_777_215.0) as u32).collect()),
            GdfType::Int32 => Samples::Int32(it.map(|v| v.round() as i32).collect()),
            GdfType::Uint32 => Samples::Uint32(it.map(|v| v.round() as u32).collect()),
            GdfType::Int64 => Samples::Int64(it.map(|v| v.round() as i64).collect()),
            GdfType::Uint64 => Samples::Uint64(it.map(|v| v.round() as u64).collect()),
            GdfType::Float32 => Samples::Float32(it.map(|v| v as f32).collect()),
            GdfType::Float64 => Samples::Float64(it.collect()),
            GdfType::Float128 => Samples::Float128(vec![[0u8; 16]; values.len()]),
        }
    }

    pub fn gdf_type(&self) -> GdfType {
        match self {
            Samples::Int8(_) => GdfType::Int8,
            Samples::Uint8(_) => GdfType::Uint8,
            Samples::Int16(_) => GdfType::Int16,
            Samples::Uint16(_) => GdfType::Uint16,
            Samples::Int24(_) => GdfType::Int24,
            Samples::Uint24(_) => GdfType::Uint24,
            Samples::Int32(_) => GdfType::Int32,
            Samples::Uint32(_) => GdfType::Uint32,
            Samples::Int64(_) => GdfType::Int64,
            Samples::Uint64(_) => GdfType::Uint64,
            Samples::Float32(_) => GdfType::Float32,
            Samples::Float64(_) => GdfType::Float64,
            Samples::Float128(_) => GdfType::Float128,
        }
    }

    pub fn len(&self) -> usize {
        with_samples!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Numeric value of sample `i`; `None` for float128 or out of bounds.
    pub fn get_f64(&self, i: usize) -> Option<f64> {
        Some(match self {
            Samples::Int8(v) => *v.get(i)? as f64,
            Samples::Uint8(v) => *v.get(i)? as f64,
            Samples::Int16(v) => *v.get(i)? as f64,
            Samples::Uint16(v) => *v.get(i)? as f64,
            Samples::Int24(v) => *v.get(i)? as f64,
            Samples::Uint24(v) => *v.get(i)? as f64,
            Samples::Int32(v) => *v.get(i)? as f64,
            Samples::Uint32(v) => *v.get(i)? as f64,
            Samples::Int64(v) => *v.get(i)? as f64,
            Samples::Uint64(v) => *v.get(i)? as f64,
            Samples::Float32(v) => *v.get(i)? as f64,
            Samples::Float64(v) => *v.get(i)?,
            Samples::Float128(_) => return None,
        })
    }

    /// All samples as f64; float128 yields NaN.
    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Samples::Float128(v) => vec![f64::NAN; v.len()],
            _ => (0..self.len()).map(|i| self.get_f64(i).unwrap()).collect(),
        }
    }

    /// Appends all samples of `other`; types must match.
    pub fn extend_from(&mut self, other: &Samples) -> bool {
        use Samples::*;
        match (self, other) {
            (Int8(a), Int8(b)) => a.extend_from_slice(b),
            (Uint8(a), Uint8(b)) => a.extend_from_slice(b),
            (Int16(a), Int16(b)) => a.extend_from_slice(b),
            (Uint16(a), Uint16(b)) => a.extend_from_slice(b),
            (Int24(a), Int24(b)) => a.extend_from_slice(b),
            (Uint24(a), Uint24(b)) => a.extend_from_slice(b),
            (Int32(a), Int32(b)) => a.extend_from_slice(b),
            (Uint32(a), Uint32(b)) => a.extend_from_slice(b),
            (Int64(a), Int64(b)) => a.extend_from_slice(b),
            (Uint64(a), Uint64(b)) => a.extend_from_slice(b),
            (Float32(a), Float32(b)) => a.extend_from_slice(b),
            (Float64(a), Float64(b)) => a.extend_from_slice(b),
            (Float128(a), Float128(b)) => a.extend_from_slice(b),
            _ => return false,
        }
        true
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int24_examples() {
        assert_eq!(decode_int24(0xFF, 0xFF, 0xFF, true), -1);
        assert_eq!(decode_int24(0x00, 0x00, 0x80, true), -8_388_608);
        assert_eq!(decode_int24(0xFF, 0xFF, 0xFF, false), 16_777_215);
        assert_eq!(decode_int24(0xFF, 0xFF, 0x7F, true), 8_388_607);
    }

    #[test]
    fn int24_write_round_trip() {
        for v in [-8_388_608, -1, 0, 1, 8_388_607, -123_456] {
            let mut b = [0u8; 3];
            Int24::write(v, &mut b);
            assert_eq!(Int24::read(&b), v);
        }
    }

    #[test]
    fn float_equality_is_bitwise() {
        let a = Samples::Float32(vec![f32::NAN, 1.0]);
        assert_eq!(a, a.clone());
        assert_ne!(Samples::Float64(vec![0.0]), Samples::Float64(vec![-0.0]));
    }
}
