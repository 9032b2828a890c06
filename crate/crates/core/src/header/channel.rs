//! Header 2: per-channel records, stored field by field across all channels.

use super::bytes::*;
use crate::error::{rules, Diagnostic, GdfError, Result, Section};
use crate::model::{units, Calibration, GdfType, LegacyImpedance, PhysDimCode};

pub const CHANNEL_HEADER_LEN: usize = 256;

/// Byte width of every header-2 field; the field array for `ns` channels
/// starts at `256 + offset * ns`.
pub mod layout {
    pub const LABEL: (usize, usize) = (0, 16);
    pub const TRANSDUCER: (usize, usize) = (16, 80);
    pub const PHYS_DIM_TEXT: (usize, usize) = (96, 6);
    pub const PHYS_DIM_CODE: (usize, usize) = (102, 2);
    pub const PHYS_MIN: (usize, usize) = (104, 8);
    pub const PHYS_MAX: (usize, usize) = (112, 8);
    pub const DIG_MIN: (usize, usize) = (120, 8);
    pub const DIG_MAX: (usize, usize) = (128, 8);
    pub const PREFILTER: (usize, usize) = (136, 68);
    pub const LOWPASS: (usize, usize) = (204, 4);
    pub const HIGHPASS: (usize, usize) = (208, 4);
    pub const NOTCH: (usize, usize) = (212, 4);
    pub const SPR: (usize, usize) = (216, 4);
    pub const GDF_TYPE: (usize, usize) = (220, 4);
    pub const POSITION: (usize, usize) = (224, 12);
    pub const SENSOR: (usize, usize) = (236, 20);
}

/// Offset of channel `index`'s copy of `field` within header 2.
pub fn field_offset(field: (usize, usize), ns: usize, index: usize) -> usize {
    field.0 * ns + field.1 * index
}

/// Channel-specific sensor block (last 20 bytes of each channel record).
#[derive(Debug, Clone, Copy)]
pub enum SensorInfo {
    /// Electrode impedance in ohms; voltage channels only.
    Impedance(f32),
    /// Probe frequency in hertz; impedance channels only.
    ProbeFrequency(f32),
    /// Opaque bytes for other channel kinds.
    Reserved([u8; 20]),
}

impl PartialEq for SensorInfo {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SensorInfo::Impedance(a), SensorInfo::Impedance(b))
            | (SensorInfo::ProbeFrequency(a), SensorInfo::ProbeFrequency(b)) => a.to_bits() == b.to_bits(),
            (SensorInfo::Reserved(a), SensorInfo::Reserved(b)) => a == b,
            _ => false,
        }
    }
}

impl SensorInfo {
    /// The unknown value for a channel with this unit.
    pub fn unknown_for(unit: PhysDimCode) -> Self {
        match unit.base() {
            units::VOLT => SensorInfo::Impedance(f32::NAN),
            units::OHM => SensorInfo::ProbeFrequency(f32::NAN),
            _ => SensorInfo::Reserved([0; 20]),
        }
    }

    fn decode(bytes: &[u8], unit: PhysDimCode, version_minor: u8) -> Self {
        if version_minor < 19 {
            if unit.base() == units::VOLT {
                let z = LegacyImpedance(bytes[0]).decode().map_or(f32::NAN, |z| z as f32);
                return SensorInfo::Impedance(z);
            }
            let mut raw = [0u8; 20];
            raw.copy_from_slice(bytes);
            return SensorInfo::Reserved(raw);
        }
        match unit.base() {
            units::VOLT => SensorInfo::Impedance(f32_at(bytes, 0)),
            units::OHM => SensorInfo::ProbeFrequency(f32_at(bytes, 0)),
            _ => {
                let mut raw = [0u8; 20];
                raw.copy_from_slice(bytes);
                SensorInfo::Reserved(raw)
            }
        }
    }

    fn encode(&self, unit: PhysDimCode, label: &str) -> Result<[u8; 20]> {
        let mut out = [0u8; 20];
        match (*self, unit.base()) {
            (SensorInfo::Impedance(z), units::VOLT) | (SensorInfo::ProbeFrequency(z), units::OHM) => {
                out[..4].copy_from_slice(&z.to_le_bytes());
            }
            (SensorInfo::Reserved(raw), base) if base != units::VOLT && base != units::OHM => out = raw,
            (info, _) => {
                return Err(GdfError::InvalidArgument(format!(
                    "channel {label:?}: sensor info {info:?} does not match unit {}",
                    unit.0
                )))
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ChannelInfo {
    pub label: String,
    pub transducer: String,
    /// Obsolete 6-byte unit text; empty means "derive from `phys_dim`".
    pub phys_dim_text: String,
    pub phys_dim: PhysDimCode,
    pub cal: Calibration,
    /// Obsolete 68-byte filter text; empty means "derive from the filter fields".
    pub prefilter: String,
    /// NaN when unknown.
    pub lowpass_hz: f32,
    /// NaN when unknown.
    pub highpass_hz: f32,
    /// NaN when unknown, negative when the notch is off.
    pub notch_hz: f32,
    /// 0 marks a sparse channel whose samples live in the event table.
    pub samples_per_record: u32,
    pub gdf_type: GdfType,
    pub position: [f32; 3],
    pub sensor: SensorInfo,
}

impl PartialEq for ChannelInfo {
    fn eq(&self, other: &Self) -> bool {
        let cal = |c: &Calibration| {
            [c.phys_min, c.phys_max, c.dig_min, c.dig_max].map(f64::to_bits)
        };
        self.label == other.label
            && self.transducer == other.transducer
            && self.phys_dim_text == other.phys_dim_text
            && self.phys_dim == other.phys_dim
            && cal(&self.cal) == cal(&other.cal)
            && self.prefilter == other.prefilter
            && crate::bits_eq_f32(
                &[self.lowpass_hz, self.highpass_hz, self.notch_hz],
                &[other.lowpass_hz, other.highpass_hz, other.notch_hz],
            )
            && self.samples_per_record == other.samples_per_record
            && self.gdf_type == other.gdf_type
            && crate::bits_eq_f32(&self.position, &other.position)
            && self.sensor == other.sensor
    }
}

impl ChannelInfo {
    pub fn new(label: impl Into<String>, phys_dim: PhysDimCode, gdf_type: GdfType, spr: u32, cal: Calibration) -> Self {
        ChannelInfo {
            label: label.into(),
            transducer: String::new(),
            phys_dim_text: String::new(),
            phys_dim,
            cal,
            prefilter: String::new(),
            lowpass_hz: f32::NAN,
            highpass_hz: f32::NAN,
            notch_hz: f32::NAN,
            samples_per_record: spr,
            gdf_type,
            position: [0.0; 3],
            sensor: SensorInfo::unknown_for(phys_dim),
        }
    }

    pub fn is_sparse(&self) -> bool {
        self.samples_per_record == 0
    }

    /// Unit text written to the obsolete field when `phys_dim_text` is empty.
    pub fn rendered_unit_text(&self) -> String {
        if self.phys_dim.is_unknown() {
            return String::new();
        }
        match units::decode_physdim(self.phys_dim) {
            Ok(u) if u.display != "?" && u.display.len() <= layout::PHYS_DIM_TEXT.1 => u.display,
            _ => String::new(),
        }
    }

    /// Filter text written to the obsolete field when `prefilter` is empty.
    pub fn rendered_prefilter(&self) -> String {
        if self.lowpass_hz.is_nan() && self.highpass_hz.is_nan() && self.notch_hz.is_nan() {
            return String::new();
        }
        let hz = |v: f32| if v.is_nan() { "?".to_string() } else { format!("{v}") };
        let notch = if self.notch_hz < 0.0 {
            "off".to_string()
        } else {
            hz(self.notch_hz)
        };
        let s = format!("LP:{} HP:{} NOTCH:{}", hz(self.lowpass_hz), hz(self.highpass_hz), notch);
        if s.len() <= layout::PREFILTER.1 {
            s
        } else {
            String::new()
        }
    }

    pub fn electrode_impedance(&self) -> Option<f32> {
        match self.sensor {
            SensorInfo::Impedance(z) if !z.is_nan() => Some(z),
            _ => None,
        }
    }
}

/// Parses header 2 for `ns` channels.
///
/// `version_minor` selects the sensor block layout (legacy one-byte
/// impedance below 2.19). `base` is the absolute file offset of the buffer,
/// used only for diagnostics.
pub fn parse_channel_headers(
    buf: &[u8],
    ns: usize,
    version_minor: u8,
    base: u64,
    diags: &mut Vec<Diagnostic>,
) -> Result<Vec<ChannelInfo>> {
    if buf.len() != CHANNEL_HEADER_LEN * ns {
        return Err(GdfError::structural(
            rules::FILE_TRUNCATED,
            Section::ChannelHeader,
            Some(base),
            format!("channel headers need {} bytes, got {}", CHANNEL_HEADER_LEN * ns, buf.len()),
        ));
    }
    let mut out = Vec::with_capacity(ns);
    for i in 0..ns {
        let at = |field| field_offset(field, ns, i);
        let type_code = u32_at(buf, at(layout::GDF_TYPE));
        let gdf_type = GdfType::from_code(type_code).map_err(|_| {
            GdfError::structural(
                rules::CHANNEL_TYPE,
                Section::ChannelHeader,
                Some(base + at(layout::GDF_TYPE) as u64),
                format!("channel {}: unsupported data type code {type_code}", i + 1),
            )
        })?;
        let phys_dim = PhysDimCode(u16_at(buf, at(layout::PHYS_DIM_CODE)));
        if phys_dim.prefix().is_none() {
            diags.push(Diagnostic::warning(
                Section::ChannelHeader,
                Some(base + at(layout::PHYS_DIM_CODE) as u64),
                rules::CHANNEL_UNIT_PREFIX,
                format!("channel {}: physical dimension {} has non-standard prefix", i + 1, phys_dim.0),
            ));
        }
        let cal = Calibration::new(
            f64_at(buf, at(layout::PHYS_MIN)),
            f64_at(buf, at(layout::PHYS_MAX)),
            f64_at(buf, at(layout::DIG_MIN)),
            f64_at(buf, at(layout::DIG_MAX)),
        );
        let p = at(layout::POSITION);
        let s = at(layout::SENSOR);
        let mut ch = ChannelInfo {
            label: text_at(buf, at(layout::LABEL), layout::LABEL.1),
            transducer: text_at(buf, at(layout::TRANSDUCER), layout::TRANSDUCER.1),
            phys_dim_text: text_at(buf, at(layout::PHYS_DIM_TEXT), layout::PHYS_DIM_TEXT.1),
            phys_dim,
            cal,
            prefilter: text_at(buf, at(layout::PREFILTER), layout::PREFILTER.1),
            lowpass_hz: f32_at(buf, at(layout::LOWPASS)),
            highpass_hz: f32_at(buf, at(layout::HIGHPASS)),
            notch_hz: f32_at(buf, at(layout::NOTCH)),
            samples_per_record: u32_at(buf, at(layout::SPR)),
            gdf_type,
            position: [f32_at(buf, p), f32_at(buf, p + 4), f32_at(buf, p + 8)],
            sensor: SensorInfo::decode(&buf[s..s + 20], phys_dim, version_minor),
        };
        if ch.phys_dim_text == ch.rendered_unit_text() {
            ch.phys_dim_text.clear();
        }
        if ch.prefilter == ch.rendered_prefilter() {
            ch.prefilter.clear();
        }
        check_channel(&ch, i, base + at(layout::DIG_MIN) as u64, diags);
        out.push(ch);
    }
    Ok(out)
}

/// Calibration and type checks shared by the parser and the validator.
pub(crate) fn check_channel(ch: &ChannelInfo, index: usize, offset: u64, diags: &mut Vec<Diagnostic>) {
    let n = index + 1;
    let t = ch.gdf_type;
    for (what, v) in [("digital minimum", ch.cal.dig_min), ("digital maximum", ch.cal.dig_max)] {
        if !t.contains(v) || v.is_nan() {
            diags.push(Diagnostic::error(
                Section::ChannelHeader,
                Some(offset),
                rules::CHANNEL_DIG_RANGE,
                format!("channel {n}: {what} {v} exceeds the {t} type range"),
            ));
        }
    }
    if ch.cal.dig_min > ch.cal.dig_max {
        diags.push(Diagnostic::error(
            Section::ChannelHeader,
            Some(offset),
            rules::CHANNEL_DIG_ORDER,
            format!("channel {n}: digital minimum {} above maximum {}", ch.cal.dig_min, ch.cal.dig_max),
        ));
    } else if ch.cal.is_degenerate() {
        diags.push(Diagnostic::warning(
            Section::ChannelHeader,
            Some(offset),
            rules::CHANNEL_DIG_DEGENERATE,
            format!("channel {n}: digital minimum equals maximum, samples cannot be scaled"),
        ));
    }
    if ch.is_sparse() && t.size_bytes() > 4 {
        diags.push(Diagnostic::error(
            Section::ChannelHeader,
            Some(offset),
            rules::CHANNEL_SPARSE_TYPE,
            format!("channel {n}: sparse channel uses {t}, wider than 32 bits"),
        ));
    }
}

/// Serializes header 2. Empty obsolete text fields are filled from the
/// structured fields.
pub fn write_channel_headers(channels: &[ChannelInfo]) -> Result<Vec<u8>> {
    let ns = channels.len();
    let mut buf = vec![0u8; CHANNEL_HEADER_LEN * ns];
    for (i, ch) in channels.iter().enumerate() {
        let at = |field| field_offset(field, ns, i);
        put_text(&mut buf, at(layout::LABEL), layout::LABEL.1, &ch.label, "label")?;
        put_text(&mut buf, at(layout::TRANSDUCER), layout::TRANSDUCER.1, &ch.transducer, "transducer")?;
        let unit_text = if ch.phys_dim_text.is_empty() {
            ch.rendered_unit_text()
        } else {
            ch.phys_dim_text.clone()
        };
        put_text(&mut buf, at(layout::PHYS_DIM_TEXT), layout::PHYS_DIM_TEXT.1, &unit_text, "physical dimension")?;
        put(&mut buf, at(layout::PHYS_DIM_CODE), &ch.phys_dim.0.to_le_bytes());
        put(&mut buf, at(layout::PHYS_MIN), &ch.cal.phys_min.to_le_bytes());
        put(&mut buf, at(layout::PHYS_MAX), &ch.cal.phys_max.to_le_bytes());
        put(&mut buf, at(layout::DIG_MIN), &ch.cal.dig_min.to_le_bytes());
        put(&mut buf, at(layout::DIG_MAX), &ch.cal.dig_max.to_le_bytes());
        let prefilter = if ch.prefilter.is_empty() {
            ch.rendered_prefilter()
        } else {
            ch.prefilter.clone()
        };
        put_text(&mut buf, at(layout::PREFILTER), layout::PREFILTER.1, &prefilter, "prefilter")?;
        put(&mut buf, at(layout::LOWPASS), &ch.lowpass_hz.to_le_bytes());
        put(&mut buf, at(layout::HIGHPASS), &ch.highpass_hz.to_le_bytes());
        put(&mut buf, at(layout::NOTCH), &ch.notch_hz.to_le_bytes());
        put(&mut buf, at(layout::SPR), &ch.samples_per_record.to_le_bytes());
        put(&mut buf, at(layout::GDF_TYPE), &ch.gdf_type.code().to_le_bytes());
        for k in 0..3 {
            put(&mut buf, at(layout::POSITION) + 4 * k, &ch.position[k].to_le_bytes());
        }
        put(&mut buf, at(layout::SENSOR), &ch.sensor.encode(ch.phys_dim, &ch.label)?);
    }
    Ok(buf)
}
