//! Data record codec.
//!
//! A record stores each channel's `spr` samples contiguously, channels in
//! header order. Sparse channels (`spr == 0`) occupy no bytes. Decoding and
//! encoding run over records in parallel when the `parallel` feature is on;
//! the `*_sequential` entry points always run on the calling thread.

mod exec;
mod samples;

pub use exec::Execution;
pub use samples::{decode_i24, decode_int24, decode_u24, Samples};

use samples::{
    Codec, Int24, LeF32, LeF64, LeI16, LeI32, LeI64, LeI8, LeU16, LeU32, LeU64, LeU8, Opaque128, Uint24,
};

use crate::error::{rules, GdfError, Result, Section};
use crate::header::ChannelInfo;
use crate::model::{Calibration, GdfType};

/// Placement of one channel inside a data record.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSlot {
    pub spr: usize,
    pub gdf_type: GdfType,
    /// Byte offset inside the record; `None` for sparse channels.
    pub offset: Option<usize>,
    pub cal: Calibration,
}

impl ChannelSlot {
    pub fn is_sparse(&self) -> bool {
        self.offset.is_none()
    }

    /// Float128 samples are carried through but never scaled.
    pub fn is_scalable(&self) -> bool {
        self.gdf_type != GdfType::Float128
    }

    pub fn bytes(&self) -> usize {
        self.spr * self.gdf_type.size_bytes()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordLayout {
    pub channels: Vec<ChannelSlot>,
    pub bytes_per_record: usize,
}

pub fn layout_from_channels(channels: &[ChannelInfo]) -> RecordLayout {
    let mut offset = 0usize;
    let slots = channels
        .iter()
        .map(|c| {
            let spr = c.samples_per_record as usize;
            let slot = ChannelSlot {
                spr,
                gdf_type: c.gdf_type,
                offset: (spr > 0).then_some(offset),
                cal: c.cal,
            };
            offset += slot.bytes();
            slot
        })
        .collect();
    RecordLayout {
        channels: slots,
        bytes_per_record: offset,
    }
}

/// Samples of one channel across all records, with per-sample validity.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelData {
    pub samples: Samples,
    /// `false` where the raw value lies outside [DigMin, DigMax].
    pub valid: Vec<bool>,
}

impl ChannelData {
    /// Builds channel data and computes validity against `cal`.
    pub fn new(samples: Samples, cal: &Calibration) -> Self {
        let valid = validity(&samples, cal, Execution::Sequential);
        ChannelData { samples, valid }
    }

    pub fn empty(t: GdfType) -> Self {
        ChannelData {
            samples: Samples::empty(t),
            valid: Vec::new(),
        }
    }

    /// Physical values; invalid samples and float128 samples are NaN.
    pub fn physical(&self, cal: &Calibration) -> Result<Vec<f64>> {
        if cal.is_degenerate() && !self.samples.is_empty() {
            return Err(GdfError::DegenerateCalibration(cal.dig_min));
        }
        Ok(self
            .samples
            .to_f64_vec()
            .into_iter()
            .zip(&self.valid)
            .map(|(raw, &ok)| if ok { cal.scale_unchecked(raw) } else { f64::NAN })
            .collect())
    }
}

/// Decoded data section.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBlock {
    pub channels: Vec<ChannelData>,
    pub n_records: usize,
}

impl SignalBlock {
    /// A block with no records for the given layout.
    pub fn empty(layout: &RecordLayout) -> Self {
        SignalBlock {
            channels: layout.channels.iter().map(|s| ChannelData::empty(s.gdf_type)).collect(),
            n_records: 0,
        }
    }
}

fn decode_channel<C: Codec>(bytes: &[u8], bpr: usize, offset: usize, spr: usize, exec: Execution) -> Vec<C::Value> {
    let n = if bpr == 0 { 0 } else { bytes.len() / bpr };
    let mut out = vec![C::Value::default(); n * spr];
    exec.for_each_chunk(&mut out, spr, |r, chunk| {
        let rec = &bytes[r * bpr + offset..];
        for (k, v) in chunk.iter_mut().enumerate() {
            *v = C::read(&rec[k * C::SIZE..]);
        }
    });
    out
}

fn decode_slot(bytes: &[u8], bpr: usize, slot: &ChannelSlot, exec: Execution) -> Samples {
    let Some(off) = slot.offset else {
        return Samples::empty(slot.gdf_type);
    };
    let spr = slot.spr;
    match slot.gdf_type {
        GdfType::Int8 => Samples::Int8(decode_channel::<LeI8>(bytes, bpr, off, spr, exec)),
        GdfType::Uint8 => Samples::Uint8(decode_channel::<LeU8>(bytes, bpr, off, spr, exec)),
        GdfType::Int16 => Samples::Int16(decode_channel::<LeI16>(bytes, bpr, off, spr, exec)),
        GdfType::Uint16 => Samples::Uint16(decode_channel::<LeU16>(bytes, bpr, off, spr, exec)),
        GdfType::Int24 => Samples::Int24(decode_channel::<Int24>(bytes, bpr, off, spr, exec)),
        GdfType::Uint24 => Samples::Uint24(decode_channel::<Uint24>(bytes, bpr, off, spr, exec)),
        GdfType::Int32 => Samples::Int32(decode_channel::<LeI32>(bytes, bpr, off, spr, exec)),
        GdfType::Uint32 => Samples::Uint32(decode_channel::<LeU32>(bytes, bpr, off, spr, exec)),
        GdfType::Int64 => Samples::Int64(decode_channel::<LeI64>(bytes, bpr, off, spr, exec)),
        GdfType::Uint64 => Samples::Uint64(decode_channel::<LeU64>(bytes, bpr, off, spr, exec)),
        GdfType::Float32 => Samples::Float32(decode_channel::<LeF32>(bytes, bpr, off, spr, exec)),
        GdfType::Float64 => Samples::Float64(decode_channel::<LeF64>(bytes, bpr, off, spr, exec)),
        GdfType::Float128 => Samples::Float128(decode_channel::<Opaque128>(bytes, bpr, off, spr, exec)),
    }
}

fn validity(samples: &Samples, cal: &Calibration, exec: Execution) -> Vec<bool> {
    if let Samples::Float128(v) = samples {
        return vec![true; v.len()];
    }
    let mut valid = vec![false; samples.len()];
    exec.for_each_chunk(&mut valid, 4096, |c, chunk| {
        let base = c * 4096;
        for (k, ok) in chunk.iter_mut().enumerate() {
            *ok = cal.is_valid(samples.get_f64(base + k).unwrap());
        }
    });
    valid
}

/// Decodes `n_records` records using the default execution strategy.
pub fn decode_records(bytes: &[u8], layout: &RecordLayout, n_records: usize) -> Result<SignalBlock> {
    decode_records_with(bytes, layout, n_records, Execution::default())
}

pub fn decode_records_sequential(bytes: &[u8], layout: &RecordLayout, n_records: usize) -> Result<SignalBlock> {
    decode_records_with(bytes, layout, n_records, Execution::Sequential)
}

/// Decodes exactly `n_records` records from `bytes`.
///
/// A length mismatch is a `data.truncated` error reporting how many
/// complete records are present.
pub fn decode_records_with(
    bytes: &[u8],
    layout: &RecordLayout,
    n_records: usize,
    exec: Execution,
) -> Result<SignalBlock> {
    let bpr = layout.bytes_per_record;
    let expected = n_records.checked_mul(bpr).ok_or_else(|| {
        GdfError::structural(rules::DATA_TRUNCATED, Section::Data, None, "record count overflows")
    })?;
    if bytes.len() != expected {
        let complete = if bpr == 0 { 0 } else { bytes.len() / bpr };
        return Err(GdfError::structural(
            rules::DATA_TRUNCATED,
            Section::Data,
            None,
            format!(
                "data section holds {} bytes, {} records of {} bytes need {}; {} complete records present",
                bytes.len(),
                n_records,
                bpr,
                expected,
                complete
            ),
        ));
    }
    let channels = exec.map(&layout.channels, |slot| {
        let samples = if bpr == 0 {
            Samples::empty(slot.gdf_type)
        } else {
            decode_slot(bytes, bpr, slot, exec)
        };
        let valid = validity(&samples, &slot.cal, exec);
        ChannelData { samples, valid }
    });
    Ok(SignalBlock { channels, n_records })
}

fn encode_channel<C: Codec>(values: &[C::Value], out: &mut [u8], bpr: usize, offset: usize, spr: usize, exec: Execution) {
    exec.for_each_chunk(out, bpr, |r, rec| {
        let src = &values[r * spr..(r + 1) * spr];
        let dst = &mut rec[offset..];
        for (k, &v) in src.iter().enumerate() {
            C::write(v, &mut dst[k * C::SIZE..]);
        }
    });
}

fn encode_slot(samples: &Samples, out: &mut [u8], bpr: usize, offset: usize, spr: usize, exec: Execution) {
    match samples {
        Samples::Int8(v) => encode_channel::<LeI8>(v, out, bpr, offset, spr, exec),
        Samples::Uint8(v) => encode_channel::<LeU8>(v, out, bpr, offset, spr, exec),
        Samples::Int16(v) => encode_channel::<LeI16>(v, out, bpr, offset, spr, exec),
        Samples::Uint16(v) => encode_channel::<LeU16>(v, out, bpr, offset, spr, exec),
        Samples::Int24(v) => encode_channel::<Int24>(v, out, bpr, offset, spr, exec),
        Samples::Uint24(v) => encode_channel::<Uint24>(v, out, bpr, offset, spr, exec),
        Samples::Int32(v) => encode_channel::<LeI32>(v, out, bpr, offset, spr, exec),
        Samples::Uint32(v) => encode_channel::<LeU32>(v, out, bpr, offset, spr, exec),
        Samples::Int64(v) => encode_channel::<LeI64>(v, out, bpr, offset, spr, exec),
        Samples::Uint64(v) => encode_channel::<LeU64>(v, out, bpr, offset, spr, exec),
        Samples::Float32(v) => encode_channel::<LeF32>(v, out, bpr, offset, spr, exec),
        Samples::Float64(v) => encode_channel::<LeF64>(v, out, bpr, offset, spr, exec),
        Samples::Float128(v) => encode_channel::<Opaque128>(v, out, bpr, offset, spr, exec),
    }
}

/// Checks that `block` fits `layout` sample for sample.
pub fn check_block(block: &SignalBlock, layout: &RecordLayout) -> Result<()> {
    if block.channels.len() != layout.channels.len() {
        return Err(GdfError::InvalidArgument(format!(
            "signal block has {} channels, layout has {}",
            block.channels.len(),
            layout.channels.len()
        )));
    }
    for (i, (ch, slot)) in block.channels.iter().zip(&layout.channels).enumerate() {
        if ch.samples.gdf_type() != slot.gdf_type {
            return Err(GdfError::InvalidArgument(format!(
                "channel {}: samples are {}, header declares {}",
                i + 1,
                ch.samples.gdf_type(),
                slot.gdf_type
            )));
        }
        let want = block.n_records * slot.spr;
        if ch.samples.len() != want {
            return Err(GdfError::InvalidArgument(format!(
                "channel {}: {} samples, {} records of {} need {}",
                i + 1,
                ch.samples.len(),
                block.n_records,
                slot.spr,
                want
            )));
        }
    }
    Ok(())
}

pub fn encode_records(block: &SignalBlock, layout: &RecordLayout) -> Result<Vec<u8>> {
    encode_records_with(block, layout, Execution::default())
}

pub fn encode_records_sequential(block: &SignalBlock, layout: &RecordLayout) -> Result<Vec<u8>> {
    encode_records_with(block, layout, Execution::Sequential)
}

/// Serializes all records of `block`. Validity flags are not consulted;
/// raw values are written as stored.
pub fn encode_records_with(block: &SignalBlock, layout: &RecordLayout, exec: Execution) -> Result<Vec<u8>> {
    check_block(block, layout)?;
    let bpr = layout.bytes_per_record;
    let mut out = vec![0u8; block.n_records * bpr];
    if bpr == 0 {
        return Ok(out);
    }
    for (ch, slot) in block.channels.iter().zip(&layout.channels) {
        if let Some(off) = slot.offset {
            encode_slot(&ch.samples, &mut out, bpr, off, slot.spr, exec);
        }
    }
    Ok(out)
}

/// Saturation summary for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct OverflowReport {
    pub n_samples: usize,
    pub n_invalid: usize,
    /// `n_invalid / n_samples`; 0 for channels without samples.
    pub saturation_ratio: f64,
    /// Extremes of the raw values, ignoring NaN. `None` without samples.
    pub raw_min: Option<f64>,
    pub raw_max: Option<f64>,
}

pub fn overflow_scan(block: &SignalBlock) -> Vec<OverflowReport> {
    overflow_scan_with(block, Execution::default())
}

pub fn overflow_scan_with(block: &SignalBlock, exec: Execution) -> Vec<OverflowReport> {
    exec.map(&block.channels, |ch| {
        let n_samples = ch.samples.len();
        let n_invalid = ch.valid.iter().filter(|v| !**v).count();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n_samples {
            if let Some(v) = ch.samples.get_f64(i) {
                if v < lo {
                    lo = v;
                }
                if v > hi {
                    hi = v;
                }
            }
        }
        let seen = lo <= hi;
        OverflowReport {
            n_samples,
            n_invalid,
            saturation_ratio: if n_samples == 0 { 0.0 } else { n_invalid as f64 / n_samples as f64 },
            raw_min: seen.then_some(lo),
            raw_max: seen.then_some(hi),
        }
    })
}
