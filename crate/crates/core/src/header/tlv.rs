//! Header 3: tag-length-value elements.
//!
//! Each element is a one-byte tag, a 24-bit little-endian length and the
//! value. The list ends at tag 0 or when fewer than 4 bytes remain; any
//! bytes after that must be zero.

use std::collections::BTreeSet;
use std::net::{IpAddr, Ipv4Addr, Ipv6Addr};

use crate::error::{rules, Diagnostic, GdfError, Result, Section};

pub const TAG_EVENT_DESCRIPTIONS: u8 = 1;
pub const TAG_BCI2000: u8 = 2;
pub const TAG_MANUFACTURER: u8 = 3;
pub const TAG_SENSOR_ORIENTATION: u8 = 4;
pub const TAG_IP_ADDRESS: u8 = 5;
pub const TAG_TECHNICIAN: u8 = 6;
pub const TAG_HOSPITAL: u8 = 7;
pub const TAG_SNOMED: u8 = 8;
pub const TAG_FREE: u8 = 255;

pub const MAX_VALUE_LEN: usize = (1 << 24) - 1;
pub const MANUFACTURER_MAX_LEN: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TlvElement {
    pub tag: u8,
    pub value: Vec<u8>,
}

impl TlvElement {
    pub fn new(tag: u8, value: impl Into<Vec<u8>>) -> Self {
        TlvElement {
            tag,
            value: value.into(),
        }
    }

    pub fn encoded_len(&self) -> usize {
        4 + self.value.len()
    }
}

/// Bytes taken by the elements, excluding terminator and padding.
pub fn tlv_content_len(elements: &[TlvElement]) -> usize {
    elements.iter().map(TlvElement::encoded_len).sum()
}

/// Parses a header-3 region. `base` is its absolute file offset.
pub fn parse_tlv(region: &[u8], base: u64, diags: &mut Vec<Diagnostic>) -> Result<Vec<TlvElement>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut pos = 0usize;
    while region.len() - pos >= 4 {
        let tag = region[pos];
        if tag == 0 {
            break;
        }
        let len = u32::from_le_bytes([region[pos + 1], region[pos + 2], region[pos + 3], 0]) as usize;
        let at = base + pos as u64;
        if len > region.len() - pos - 4 {
            return Err(GdfError::structural(
                rules::TLV_LENGTH_OVERRUN,
                Section::Tlv,
                Some(at),
                format!(
                    "tag {tag} declares {len} bytes but only {} remain in header 3",
                    region.len() - pos - 4
                ),
            ));
        }
        if !seen.insert(tag) {
            return Err(GdfError::structural(
                rules::TLV_DUPLICATE,
                Section::Tlv,
                Some(at),
                format!("tag {tag} occurs more than once"),
            ));
        }
        if (9..=254).contains(&tag) {
            diags.push(Diagnostic::info(
                Section::Tlv,
                Some(at),
                rules::TLV_RESERVED_TAG,
                format!("reserved tag {tag} kept verbatim"),
            ));
        }
        out.push(TlvElement::new(tag, &region[pos + 4..pos + 4 + len]));
        pos += 4 + len;
    }
    if let Some(i) = region[pos..].iter().position(|&b| b != 0) {
        diags.push(Diagnostic::warning(
            Section::Tlv,
            Some(base + (pos + i) as u64),
            rules::TLV_PADDING,
            "non-zero bytes after the end of the TLV list",
        ));
    }
    Ok(out)
}

/// Serializes elements into a zero-padded region of `region_len` bytes.
pub fn write_tlv(elements: &[TlvElement], region_len: usize) -> Result<Vec<u8>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(region_len);
    for e in elements {
        if e.tag == 0 {
            return Err(GdfError::InvalidArgument("TLV tag 0 is the terminator".into()));
        }
        if !seen.insert(e.tag) {
            return Err(GdfError::InvalidArgument(format!("TLV tag {} occurs more than once", e.tag)));
        }
        if e.value.len() > MAX_VALUE_LEN {
            return Err(GdfError::InvalidArgument(format!(
                "TLV tag {} value of {} bytes exceeds the 24-bit length",
                e.tag,
                e.value.len()
            )));
        }
        out.push(e.tag);
        out.extend_from_slice(&(e.value.len() as u32).to_le_bytes()[..3]);
        out.extend_from_slice(&e.value);
    }
    if out.len() > region_len {
        return Err(GdfError::InvalidArgument(format!(
            "TLV elements need {} bytes but header 3 holds {region_len}",
            out.len()
        )));
    }
    out.resize(region_len, 0);
    Ok(out)
}

/// Decoded header-3 value.
#[derive(Debug, Clone, PartialEq)]
pub enum TlvValue {
    /// User descriptions; entry `i` describes event code `i + 1`.
    EventDescriptions(Vec<String>),
    Bci2000(String),
    Manufacturer {
        manufacturer: String,
        model: String,
        version: String,
        serial: String,
    },
    /// One x-y-z direction vector per channel.
    SensorOrientation(Vec<[f32; 3]>),
    IpAddress(IpAddr),
    Technician(Vec<u8>),
    Hospital(Vec<u8>),
    Snomed(Vec<u8>),
    Free(Vec<u8>),
    Reserved { tag: u8, value: Vec<u8> },
}

impl TlvValue {
    pub fn tag(&self) -> u8 {
        match self {
            TlvValue::EventDescriptions(_) => TAG_EVENT_DESCRIPTIONS,
            TlvValue::Bci2000(_) => TAG_BCI2000,
            TlvValue::Manufacturer { .. } => TAG_MANUFACTURER,
            TlvValue::SensorOrientation(_) => TAG_SENSOR_ORIENTATION,
            TlvValue::IpAddress(_) => TAG_IP_ADDRESS,
            TlvValue::Technician(_) => TAG_TECHNICIAN,
            TlvValue::Hospital(_) => TAG_HOSPITAL,
            TlvValue::Snomed(_) => TAG_SNOMED,
            TlvValue::Free(_) => TAG_FREE,
            TlvValue::Reserved { tag, .. } => *tag,
        }
    }

    pub fn encode(&self) -> Result<TlvElement> {
        let value = match self {
            TlvValue::EventDescriptions(list) => {
                let mut v = Vec::new();
                for s in list {
                    if s.is_empty() || s.as_bytes().contains(&0) {
                        return Err(GdfError::InvalidArgument(
                            "event descriptions must be non-empty and NUL-free".into(),
                        ));
                    }
                    v.extend_from_slice(s.as_bytes());
                    v.push(0);
                }
                if list.is_empty() {
                    v.push(0);
                }
                v.push(0);
                v
            }
            TlvValue::Bci2000(s) => nul_terminated(&[s])?,
            TlvValue::Manufacturer {
                manufacturer,
                model,
                version,
                serial,
            } => nul_terminated(&[manufacturer, model, version, serial])?,
            TlvValue::SensorOrientation(rows) => rows.iter().flatten().flat_map(|f| f.to_le_bytes()).collect(),
            TlvValue::IpAddress(IpAddr::V4(a)) => a.octets().to_vec(),
            TlvValue::IpAddress(IpAddr::V6(a)) => a.octets().to_vec(),
            TlvValue::Technician(v) | TlvValue::Hospital(v) | TlvValue::Snomed(v) | TlvValue::Free(v) => v.clone(),
            TlvValue::Reserved { tag, value } => {
                if *tag == 0 {
                    return Err(GdfError::InvalidArgument("TLV tag 0 is the terminator".into()));
                }
                value.clone()
            }
        };
        Ok(TlvElement::new(self.tag(), value))
    }
}

fn nul_terminated(parts: &[&String]) -> Result<Vec<u8>> {
    let mut v = Vec::new();
    for s in parts {
        if s.as_bytes().contains(&0) {
            return Err(GdfError::InvalidArgument("TLV strings must not contain NUL".into()));
        }
        v.extend_from_slice(s.as_bytes());
        v.push(0);
    }
    Ok(v)
}

fn tag_error(rule: &'static str, tag: u8, msg: String) -> GdfError {
    GdfError::structural(rule, Section::Tlv, None, format!("tag {tag}: {msg}"))
}

/// Interprets an element according to its tag. `ns` is needed for tag 4.
pub fn decode_tag_value(e: &TlvElement, ns: usize) -> Result<TlvValue> {
    let v = &e.value;
    Ok(match e.tag {
        TAG_EVENT_DESCRIPTIONS => {
            let list = v
                .split(|&b| b == 0)
                .take_while(|s| !s.is_empty())
                .map(|s| String::from_utf8_lossy(s).into_owned())
                .collect();
            TlvValue::EventDescriptions(list)
        }
        TAG_BCI2000 => {
            let end = v.iter().position(|&b| b == 0).unwrap_or(v.len());
            TlvValue::Bci2000(String::from_utf8_lossy(&v[..end]).into_owned())
        }
        TAG_MANUFACTURER => {
            let parts: Vec<&[u8]> = v.split(|&b| b == 0).collect();
            // four terminated strings produce five pieces, the last empty
            if parts.len() != 5 || !parts[4].is_empty() {
                return Err(tag_error(
                    rules::TLV_TAG_FORMAT,
                    e.tag,
                    format!("expected 4 zero-terminated strings, found {} pieces", parts.len()),
                ));
            }
            let s = |i: usize| String::from_utf8_lossy(parts[i]).into_owned();
            TlvValue::Manufacturer {
                manufacturer: s(0),
                model: s(1),
                version: s(2),
                serial: s(3),
            }
        }
        TAG_SENSOR_ORIENTATION => {
            if v.len() != 12 * ns {
                return Err(tag_error(
                    rules::TLV_TAG_LENGTH,
                    e.tag,
                    format!("length {} is not 12 * NS = {}", v.len(), 12 * ns),
                ));
            }
            let f = |o: usize| f32::from_le_bytes(v[o..o + 4].try_into().unwrap());
            TlvValue::SensorOrientation((0..ns).map(|i| [f(12 * i), f(12 * i + 4), f(12 * i + 8)]).collect())
        }
        TAG_IP_ADDRESS => match v.len() {
            4 => TlvValue::IpAddress(IpAddr::V4(Ipv4Addr::new(v[0], v[1], v[2], v[3]))),
            16 => {
                let octets: [u8; 16] = v[..].try_into().unwrap();
                TlvValue::IpAddress(IpAddr::V6(Ipv6Addr::from(octets)))
            }
            n => {
                return Err(tag_error(
                    rules::TLV_TAG_LENGTH,
                    e.tag,
                    format!("IP address length {n} is neither 4 nor 16"),
                ))
            }
        },
        TAG_TECHNICIAN => TlvValue::Technician(v.clone()),
        TAG_HOSPITAL => TlvValue::Hospital(v.clone()),
        TAG_SNOMED => TlvValue::Snomed(v.clone()),
        TAG_FREE => TlvValue::Free(v.clone()),
        0 => return Err(GdfError::InvalidArgument("TLV tag 0 is the terminator".into())),
        tag => TlvValue::Reserved { tag, value: v.clone() },
    })
}

/// Tag-specific checks that do not stop parsing.
pub(crate) fn check_elements(elements: &[TlvElement], ns: usize, diags: &mut Vec<Diagnostic>) {
    let mut seen = BTreeSet::new();
    for e in elements {
        if !seen.insert(e.tag) {
            diags.push(Diagnostic::error(
                Section::Tlv,
                None,
                rules::TLV_DUPLICATE,
                format!("tag {} occurs more than once", e.tag),
            ));
        }
        if e.tag == TAG_MANUFACTURER && e.value.len() > MANUFACTURER_MAX_LEN {
            diags.push(Diagnostic::warning(
                Section::Tlv,
                None,
                rules::TLV_MANUFACTURER_SIZE,
                format!("manufacturer block is {} bytes, more than 128", e.value.len()),
            ));
        }
        if e.tag != 0 {
            if let Err(err) = decode_tag_value(e, ns) {
                diags.push(err.to_diagnostic());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(region: &[u8]) -> Result<(Vec<TlvElement>, Vec<Diagnostic>)> {
        let mut d = Vec::new();
        parse_tlv(region, 512, &mut d).map(|e| (e, d))
    }

    #[test]
    fn empty_and_immediate_terminator() {
        assert!(parse(&[]).unwrap().0.is_empty());
        assert!(parse(&[0; 256]).unwrap().0.is_empty());
    }

    #[test]
    fn single_description_element() {
        let mut region = vec![1, 5, 0, 0, b'L', b'e', b'f', b't', 0];
        region.resize(256, 0);
        let (elems, diags) = parse(&region).unwrap();
        assert!(diags.is_empty());
        assert_eq!(elems, vec![TlvElement::new(1, *b"Left\0")]);
        assert_eq!(
            decode_tag_value(&elems[0], 0).unwrap(),
            TlvValue::EventDescriptions(vec!["Left".into()])
        );
    }

    #[test]
    fn length_overrun() {
        let region = [1, 200, 0, 0, 1, 2, 3, 4];
        match parse(&region) {
            Err(GdfError::Structural { rule, offset, .. }) => {
                assert_eq!(rule, rules::TLV_LENGTH_OVERRUN);
                assert_eq!(offset, Some(512));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_tag() {
        let region = [2, 1, 0, 0, 0, 2, 1, 0, 0, 0, 0, 0];
        assert!(matches!(parse(&region), Err(GdfError::Structural { rule, .. }) if rule == rules::TLV_DUPLICATE));
    }

    #[test]
    fn fewer_than_four_bytes_terminate() {
        let region = [2, 1, 0, 0, 0, 0, 0];
        let (elems, diags) = parse(&region).unwrap();
        assert_eq!(elems.len(), 1);
        assert!(diags.is_empty());
        let (_, diags) = parse(&[2, 1, 0, 0, 0, 0, 9]).unwrap();
        assert_eq!(diags[0].rule, rules::TLV_PADDING);
    }

    #[test]
    fn ipv4_big_endian() {
        let v = decode_tag_value(&TlvElement::new(5, vec![192, 168, 0, 1]), 0).unwrap();
        assert_eq!(v, TlvValue::IpAddress("192.168.0.1".parse().unwrap()));
        assert!(decode_tag_value(&TlvElement::new(5, vec![1, 2, 3]), 0).is_err());
    }

    #[test]
    fn manufacturer_strings() {
        let v = decode_tag_value(&TlvElement::new(3, *b"Acme\0M1\0\0SN7\0"), 0).unwrap();
        assert_eq!(
            v,
            TlvValue::Manufacturer {
                manufacturer: "Acme".into(),
                model: "M1".into(),
                version: "".into(),
                serial: "SN7".into()
            }
        );
        assert_eq!(v.encode().unwrap().value, b"Acme\0M1\0\0SN7\0");
        assert!(decode_tag_value(&TlvElement::new(3, *b"Acme\0M1\0"), 0).is_err());
    }

    #[test]
    fn empty_description_list() {
        let v = decode_tag_value(&TlvElement::new(1, *b"\0\0"), 0).unwrap();
        assert_eq!(v, TlvValue::EventDescriptions(vec![]));
        assert_eq!(decode_tag_value(&v.encode().unwrap(), 0).unwrap(), v);
    }

    #[test]
    fn orientation_length_checked() {
        let rows = vec![[1.0f32, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let e = TlvValue::SensorOrientation(rows.clone()).encode().unwrap();
        assert_eq!(e.value.len(), 24);
        assert_eq!(decode_tag_value(&e, 2).unwrap(), TlvValue::SensorOrientation(rows));
        assert!(decode_tag_value(&e, 3).is_err());
    }

    #[test]
    fn write_pads_with_zeros() {
        let elems = vec![TlvElement::new(2, *b"hi\0"), TlvElement::new(255, vec![7; 3])];
        let region = write_tlv(&elems, 256).unwrap();
        assert_eq!(region.len(), 256);
        assert_eq!(&region[..7], &[2, 3, 0, 0, b'h', b'i', 0]);
        assert_eq!(parse(&region).unwrap().0, elems);
        assert!(write_tlv(&elems, 8).is_err());
    }
}
