//! Header 1: the fixed 256-byte block.

use super::bytes::*;
use super::demographics::{Habits, Physique};
use crate::error::{rules, Diagnostic, GdfError, Result, Section};
use crate::model::GdfTime;

pub const FIXED_HEADER_LEN: usize = 256;

/// Version tag emitted by the writer.
pub const WRITE_VERSION: &str = "GDF 2.20";

pub mod offsets {
    pub const VERSION: usize = 0;
    pub const PID: usize = 8;
    pub const PID_LEN: usize = 66;
    pub const RESERVED_74: usize = 74;
    pub const HABITS: usize = 84;
    pub const WEIGHT: usize = 85;
    pub const HEIGHT: usize = 86;
    pub const PHYSIQUE: usize = 87;
    pub const RID: usize = 88;
    pub const RID_LEN: usize = 64;
    /// RID length when no location block is stored.
    pub const RID_LEN_NO_LOCATION: usize = 68;
    pub const LOCATION: usize = 152;
    pub const LOCATION_VERSION: usize = 155;
    pub const START_TIME: usize = 168;
    pub const BIRTHDAY: usize = 176;
    pub const HEADER_BLOCKS: usize = 184;
    pub const ICD: usize = 186;
    pub const ICD_LEN: usize = 6;
    pub const EQUIPMENT: usize = 192;
    pub const RESERVED_200: usize = 200;
    pub const HEADSIZE: usize = 206;
    pub const REFERENCE: usize = 212;
    pub const GROUND: usize = 224;
    pub const N_RECORDS: usize = 236;
    pub const DURATION: usize = 244;
    pub const NS: usize = 252;
}

use offsets as off;

/// Patient identification: code, name and classification separated by
/// single spaces. Empty subfields are stored as `X`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatientId {
    pub code: String,
    pub name: String,
    pub classification: String,
    /// Anything after the third subfield, kept verbatim.
    pub rest: String,
}

impl PatientId {
    pub fn parse(text: &str) -> Self {
        let mut parts = text.splitn(4, ' ');
        let mut next = || {
            let s = parts.next().unwrap_or("");
            if s == "X" { String::new() } else { s.to_string() }
        };
        let code = next();
        let name = next();
        let classification = next();
        let rest = parts.next().unwrap_or("").to_string();
        PatientId {
            code,
            name,
            classification,
            rest,
        }
    }

    pub fn render(&self) -> String {
        let f = |s: &str| if s.is_empty() { "X".to_string() } else { s.to_string() };
        let mut out = format!("{} {} {}", f(&self.code), f(&self.name), f(&self.classification));
        if !self.rest.is_empty() {
            out.push(' ');
            out.push_str(&self.rest);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PatientInfo {
    pub id: PatientId,
    pub habits: Habits,
    /// kg; 0 unknown, 255 means more than 254.
    pub weight_kg: u8,
    /// cm; 0 unknown, 255 means more than 254.
    pub height_cm: u8,
    pub physique: Physique,
    pub birthday: GdfTime,
    pub icd: String,
    /// Circumference, nasion-inion and mastoid-mastoid distance in mm.
    pub headsize_mm: [u16; 3],
}

/// Recording location in the RFC 1876 layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub vertical_precision: u8,
    pub horizontal_precision: u8,
    pub size: u8,
    /// Always 0 when stored; a non-zero byte means "no location".
    pub version: u8,
    /// 1/3 600 000 degree units.
    pub latitude: i32,
    pub longitude: i32,
    pub altitude_cm: i32,
}

const MILLI_ARCSEC_PER_DEGREE: f64 = 3_600_000.0;

impl Location {
    pub fn latitude_deg(&self) -> f64 {
        self.latitude as f64 / MILLI_ARCSEC_PER_DEGREE
    }

    pub fn longitude_deg(&self) -> f64 {
        self.longitude as f64 / MILLI_ARCSEC_PER_DEGREE
    }

    pub fn altitude_m(&self) -> f64 {
        self.altitude_cm as f64 / 100.0
    }

    pub fn from_degrees(latitude: f64, longitude: f64, altitude_m: f64) -> Self {
        Location {
            latitude: (latitude * MILLI_ARCSEC_PER_DEGREE).round() as i32,
            longitude: (longitude * MILLI_ARCSEC_PER_DEGREE).round() as i32,
            altitude_cm: (altitude_m * 100.0).round() as i32,
            ..Default::default()
        }
    }
}

/// Decodes bytes 152..168; `None` when the version byte is non-zero.
pub fn parse_location(bytes: &[u8; 16]) -> Option<Location> {
    if bytes[3] != 0 {
        return None;
    }
    Some(Location {
        vertical_precision: bytes[0],
        horizontal_precision: bytes[1],
        size: bytes[2],
        version: 0,
        latitude: i32_at(bytes, 4),
        longitude: i32_at(bytes, 8),
        altitude_cm: i32_at(bytes, 12),
    })
}

fn write_location(loc: &Location) -> [u8; 16] {
    let mut b = [0u8; 16];
    b[0] = loc.vertical_precision;
    b[1] = loc.horizontal_precision;
    b[2] = loc.size;
    b[3] = loc.version;
    put(&mut b, 4, &loc.latitude.to_le_bytes());
    put(&mut b, 8, &loc.longitude.to_le_bytes());
    put(&mut b, 12, &loc.altitude_cm.to_le_bytes());
    b
}

#[derive(Debug, Clone, Default)]
pub struct RecordingInfo {
    pub id: String,
    pub location: Option<Location>,
    pub start_time: GdfTime,
    pub equipment_provider: u64,
    pub reference_electrode: [f32; 3],
    pub ground_electrode: [f32; 3],
}

impl PartialEq for RecordingInfo {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.location == other.location
            && self.start_time == other.start_time
            && self.equipment_provider == other.equipment_provider
            && crate::bits_eq_f32(&self.reference_electrode, &other.reference_electrode)
            && crate::bits_eq_f32(&self.ground_electrode, &other.ground_electrode)
    }
}

/// Record duration in seconds as `numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordDuration {
    pub numerator: u32,
    pub denominator: u32,
}

impl Default for RecordDuration {
    fn default() -> Self {
        RecordDuration {
            numerator: 1,
            denominator: 1,
        }
    }
}

impl RecordDuration {
    pub fn new(numerator: u32, denominator: u32) -> Self {
        RecordDuration {
            numerator,
            denominator,
        }
    }

    pub fn seconds(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Sampling rate of a channel with `spr` samples per record.
    pub fn rate_hz(&self, spr: u32) -> f64 {
        spr as f64 * self.denominator as f64 / self.numerator as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedHeader {
    /// 8-byte version tag, e.g. `"GDF 2.20"`.
    pub version: String,
    pub patient: PatientInfo,
    pub recording: RecordingInfo,
    /// Total header length in 256-byte blocks.
    pub header_blocks: u16,
    /// -1 while unknown.
    pub n_records: i64,
    pub record_duration: RecordDuration,
    pub ns: u16,
}

impl Default for FixedHeader {
    fn default() -> Self {
        FixedHeader {
            version: WRITE_VERSION.to_string(),
            patient: PatientInfo::default(),
            recording: RecordingInfo {
                location: Some(Location::default()),
                ..Default::default()
            },
            header_blocks: 1,
            n_records: -1,
            record_duration: RecordDuration::default(),
            ns: 0,
        }
    }
}

impl FixedHeader {
    /// Minor version number: 20 for "GDF 2.20", 10 for "GDF 2.1".
    pub fn version_minor(&self) -> u8 {
        version_minor(&self.version).unwrap_or(20)
    }

    pub fn header_len(&self) -> u64 {
        self.header_blocks as u64 * 256
    }
}

fn version_minor(tag: &str) -> Option<u8> {
    let rest = tag.strip_prefix("GDF 2.")?;
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).take(2).collect();
    match digits.len() {
        0 => None,
        1 => digits.parse::<u8>().ok().map(|d| d * 10),
        _ => digits.parse().ok(),
    }
}

/// Parses header 1, appending non-fatal findings to `diags`.
pub fn parse_fixed_header(buf: &[u8], diags: &mut Vec<Diagnostic>) -> Result<FixedHeader> {
    if buf.len() != FIXED_HEADER_LEN {
        return Err(GdfError::structural(
            rules::FILE_TRUNCATED,
            Section::FixedHeader,
            Some(0),
            format!("fixed header needs 256 bytes, got {}", buf.len()),
        ));
    }
    let tag_bytes = &buf[0..8];
    let version = String::from_utf8_lossy(tag_bytes).trim_end_matches(['\0', ' ']).to_string();
    if !tag_bytes.starts_with(b"GDF") {
        return Err(GdfError::UnsupportedFormat(version));
    }
    if !tag_bytes.starts_with(b"GDF 2.") || version_minor(&version).is_none() {
        return Err(GdfError::UnsupportedVersion(version));
    }

    let habits = Habits::unpack(buf[off::HABITS]);
    if habits.has_reserved() {
        diags.push(Diagnostic::warning(
            Section::FixedHeader,
            Some(off::HABITS as u64),
            rules::HEADER_DEMOGRAPHICS,
            format!("byte 84 ({:#04x}) uses the reserved pattern 0b11", buf[off::HABITS]),
        ));
    }

    let mut loc_bytes = [0u8; 16];
    loc_bytes.copy_from_slice(&buf[off::LOCATION..off::LOCATION + 16]);
    let location = parse_location(&loc_bytes);
    let rid_len = if location.is_some() {
        off::RID_LEN
    } else {
        off::RID_LEN_NO_LOCATION
    };

    let ns_wide = u32_at(buf, off::NS);
    if ns_wide >> 16 != 0 {
        diags.push(Diagnostic::error(
            Section::FixedHeader,
            Some(off::NS as u64 + 2),
            rules::HEADER_NS_RESERVED,
            format!("channel count field {ns_wide} has non-zero upper 16 bits"),
        ));
    }
    let ns = ns_wide as u16;
    let header_blocks = u16_at(buf, off::HEADER_BLOCKS);
    if (header_blocks as u32) < ns as u32 + 1 {
        return Err(GdfError::structural(
            rules::HEADER_BLOCKS,
            Section::FixedHeader,
            Some(off::HEADER_BLOCKS as u64),
            format!("header length {header_blocks} blocks is less than NS+1 = {}", ns as u32 + 1),
        ));
    }

    let record_duration = RecordDuration::new(u32_at(buf, off::DURATION), u32_at(buf, off::DURATION + 4));
    if record_duration.denominator == 0 {
        diags.push(Diagnostic::warning(
            Section::FixedHeader,
            Some(off::DURATION as u64 + 4),
            rules::HEADER_DURATION,
            "record duration has a zero denominator",
        ));
    }

    let f3 = |o: usize| [f32_at(buf, o), f32_at(buf, o + 4), f32_at(buf, o + 8)];

    Ok(FixedHeader {
        version,
        patient: PatientInfo {
            id: PatientId::parse(&text_at(buf, off::PID, off::PID_LEN)),
            habits,
            weight_kg: buf[off::WEIGHT],
            height_cm: buf[off::HEIGHT],
            physique: Physique::unpack(buf[off::PHYSIQUE]),
            birthday: GdfTime(u64_at(buf, off::BIRTHDAY)),
            icd: text_at(buf, off::ICD, off::ICD_LEN),
            headsize_mm: [
                u16_at(buf, off::HEADSIZE),
                u16_at(buf, off::HEADSIZE + 2),
                u16_at(buf, off::HEADSIZE + 4),
            ],
        },
        recording: RecordingInfo {
            id: text_at(buf, off::RID, rid_len),
            location,
            start_time: GdfTime(u64_at(buf, off::START_TIME)),
            equipment_provider: u64_at(buf, off::EQUIPMENT),
            reference_electrode: f3(off::REFERENCE),
            ground_electrode: f3(off::GROUND),
        },
        header_blocks,
        n_records: i64_at(buf, off::N_RECORDS),
        record_duration,
        ns,
    })
}

/// Serializes header 1. The version tag is always written as "GDF 2.20".
pub fn write_fixed_header(h: &FixedHeader) -> Result<[u8; FIXED_HEADER_LEN]> {
    let mut buf = [0u8; FIXED_HEADER_LEN];
    put(&mut buf, off::VERSION, WRITE_VERSION.as_bytes());
    let id = &h.patient.id;
    if [&id.code, &id.name, &id.classification].iter().any(|s| s.contains(' ')) {
        return Err(GdfError::InvalidArgument("patient id subfields must not contain spaces".into()));
    }
    put_text(&mut buf, off::PID, off::PID_LEN, &id.render(), "patient id")?;
    buf[off::HABITS] = h.patient.habits.pack();
    buf[off::WEIGHT] = h.patient.weight_kg;
    buf[off::HEIGHT] = h.patient.height_cm;
    buf[off::PHYSIQUE] = h.patient.physique.pack();

    match &h.recording.location {
        Some(loc) => {
            if loc.version != 0 {
                return Err(GdfError::InvalidArgument(
                    "location version must be 0; use None for no location".into(),
                ));
            }
            put_text(&mut buf, off::RID, off::RID_LEN, &h.recording.id, "recording id")?;
            put(&mut buf, off::LOCATION, &write_location(loc));
        }
        None => {
            // Without a location the RID owns bytes 152..156 and byte 155
            // must be non-zero, so the slot is space padded to 68 bytes.
            let rid = &h.recording.id;
            if rid.len() > off::RID_LEN_NO_LOCATION {
                return Err(GdfError::TextOverflow {
                    field: "recording id",
                    len: rid.len(),
                    capacity: off::RID_LEN_NO_LOCATION,
                });
            }
            if rid.as_bytes().contains(&0) {
                return Err(GdfError::InvalidArgument("recording id contains NUL".into()));
            }
            let slot = &mut buf[off::RID..off::RID + off::RID_LEN_NO_LOCATION];
            slot.fill(b' ');
            slot[..rid.len()].copy_from_slice(rid.as_bytes());
        }
    }

    put(&mut buf, off::START_TIME, &h.recording.start_time.0.to_le_bytes());
    put(&mut buf, off::BIRTHDAY, &h.patient.birthday.0.to_le_bytes());
    put(&mut buf, off::HEADER_BLOCKS, &h.header_blocks.to_le_bytes());
    put_text(&mut buf, off::ICD, off::ICD_LEN, &h.patient.icd, "icd classification")?;
    put(&mut buf, off::EQUIPMENT, &h.recording.equipment_provider.to_le_bytes());
    for (i, v) in h.patient.headsize_mm.iter().enumerate() {
        put(&mut buf, off::HEADSIZE + 2 * i, &v.to_le_bytes());
    }
    for i in 0..3 {
        put(&mut buf, off::REFERENCE + 4 * i, &h.recording.reference_electrode[i].to_le_bytes());
        put(&mut buf, off::GROUND + 4 * i, &h.recording.ground_electrode[i].to_le_bytes());
    }
    put(&mut buf, off::N_RECORDS, &h.n_records.to_le_bytes());
    put(&mut buf, off::DURATION, &h.record_duration.numerator.to_le_bytes());
    put(&mut buf, off::DURATION + 4, &h.record_duration.denominator.to_le_bytes());
    put(&mut buf, off::NS, &(h.ns as u32).to_le_bytes());
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(buf: &[u8]) -> Result<FixedHeader> {
        parse_fixed_header(buf, &mut Vec::new())
    }

    #[test]
    fn ns_at_252() {
        let mut h = FixedHeader::default();
        h.ns = 3;
        h.header_blocks = 4;
        let buf = write_fixed_header(&h).unwrap();
        assert_eq!(&buf[252..256], &[3, 0, 0, 0]);
        assert_eq!(parse(&buf).unwrap().ns, 3);
    }

    #[test]
    fn rejects_other_formats() {
        let mut buf = [0u8; 256];
        buf[..8].copy_from_slice(b"EDF     ");
        assert!(matches!(parse(&buf), Err(GdfError::UnsupportedFormat(_))));
        buf[..8].copy_from_slice(b"GDF 1.25");
        assert!(matches!(parse(&buf), Err(GdfError::UnsupportedVersion(_))));
    }

    #[test]
    fn unknown_record_count() {
        let h = FixedHeader::default();
        let buf = write_fixed_header(&h).unwrap();
        assert_eq!(&buf[236..244], &[0xFF; 8]);
        assert_eq!(parse(&buf).unwrap().n_records, -1);
    }

    #[test]
    fn minimal_header() {
        let h = FixedHeader::default();
        let buf = write_fixed_header(&h).unwrap();
        assert_eq!(&buf[0..8], b"GDF 2.20");
        assert_eq!(u16_at(&buf, 184), 1);
        assert_eq!(&buf[168..176], &[0; 8]);
        assert_eq!(parse(&buf).unwrap(), h);
    }

    #[test]
    fn heavy_weight() {
        let mut h = FixedHeader::default();
        h.patient.weight_kg = 255;
        assert_eq!(write_fixed_header(&h).unwrap()[85], 0xFF);
    }

    #[test]
    fn pid_overflow_is_error() {
        let mut h = FixedHeader::default();
        h.patient.id.code = "x".repeat(70);
        assert!(matches!(write_fixed_header(&h), Err(GdfError::TextOverflow { .. })));
    }

    #[test]
    fn pid_subfields() {
        let id = PatientId::parse("P01 X F32.1");
        assert_eq!(id.code, "P01");
        assert_eq!(id.name, "");
        assert_eq!(id.classification, "F32.1");
        assert_eq!(id.render(), "P01 X F32.1");
        assert_eq!(PatientId::default().render(), "X X X");
    }

    #[test]
    fn location_decoding() {
        let mut b = [0u8; 16];
        b[4..8].copy_from_slice(&169_380_000i32.to_le_bytes());
        let loc = parse_location(&b).unwrap();
        assert!((loc.latitude_deg() - 47.05).abs() < 1e-12);
        assert_eq!(parse_location(&[0; 16]), Some(Location::default()));
        b[3] = 1;
        assert_eq!(parse_location(&b), None);
    }

    #[test]
    fn rid_without_location() {
        let mut h = FixedHeader::default();
        h.recording.location = None;
        h.recording.id = "study-7 run 3".into();
        let buf = write_fixed_header(&h).unwrap();
        assert_ne!(buf[155], 0);
        assert_eq!(parse(&buf).unwrap(), h);

        h.recording.id = "r".repeat(68);
        assert_eq!(parse(&write_fixed_header(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn version_minor_parsing() {
        assert_eq!(version_minor("GDF 2.20"), Some(20));
        assert_eq!(version_minor("GDF 2.1"), Some(10));
        assert_eq!(version_minor("GDF 2.18"), Some(18));
        assert_eq!(version_minor("GDF 2.x"), None);
    }

    #[test]
    fn short_header_blocks_rejected() {
        let mut h = FixedHeader::default();
        h.ns = 2;
        h.header_blocks = 2;
        let buf = write_fixed_header(&h).unwrap();
        assert!(matches!(parse(&buf), Err(GdfError::Structural { rule, .. }) if rule == rules::HEADER_BLOCKS));
    }
}
