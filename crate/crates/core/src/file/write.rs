use std::io::Write;

use super::GdfFile;
use crate::data::{check_block, encode_records};
use crate::error::{GdfError, Result};
use crate::events::write_event_table;
use crate::header::{tlv_content_len, write_channel_headers, write_fixed_header, write_tlv, FixedHeader, TlvElement};
use crate::header::ChannelInfo;

/// Geometry checks shared by the one-shot and streaming writers.
pub(crate) fn check_header_geometry(h: &FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement]) -> Result<()> {
    let ns = channels.len();
    if h.ns as usize != ns {
        return Err(GdfError::InvalidArgument(format!(
            "header declares {} channels, {} given",
            h.ns, ns
        )));
    }
    let need = 256 * (ns + 1) + tlv_content_len(tlv);
    if (h.header_blocks as usize) < ns + 1 || (h.header_blocks as usize) * 256 < need {
        return Err(GdfError::InvalidArgument(format!(
            "header length of {} blocks cannot hold {ns} channels and {} TLV bytes",
            h.header_blocks,
            tlv_content_len(tlv)
        )));
    }
    if h.n_records < -1 {
        return Err(GdfError::InvalidArgument(format!("record count {} is negative", h.n_records)));
    }
    Ok(())
}

/// Headers 1 to 3 as one buffer of `header_blocks * 256` bytes.
pub(crate) fn encode_headers(h: &FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement]) -> Result<Vec<u8>> {
    check_header_geometry(h, channels, tlv)?;
    let mut out = Vec::with_capacity(h.header_len() as usize);
    out.extend_from_slice(&write_fixed_header(h)?);
    out.extend_from_slice(&write_channel_headers(channels)?);
    let region = h.header_len() as usize - out.len();
    out.extend_from_slice(&write_tlv(tlv, region)?);
    Ok(out)
}

/// Serializes a whole file. Geometry is checked before anything is built.
pub fn encode_file(f: &GdfFile) -> Result<Vec<u8>> {
    let h = &f.header;
    check_header_geometry(h, &f.channels, &f.tlv)?;
    if h.n_records >= 0 && h.n_records as usize != f.signals.n_records {
        return Err(GdfError::InvalidArgument(format!(
            "header declares {} records, {} given",
            h.n_records, f.signals.n_records
        )));
    }
    if f.events.is_some() && h.n_records < 0 {
        return Err(GdfError::InvalidArgument(
            "an event table needs a known record count (NRec = -1)".into(),
        ));
    }
    let layout = f.layout();
    check_block(&f.signals, &layout)?;

    let mut out = encode_headers(h, &f.channels, &f.tlv)?;
    out.extend_from_slice(&encode_records(&f.signals, &layout)?);
    if let Some(ev) = &f.events {
        out.extend_from_slice(&write_event_table(ev)?);
    }
    Ok(out)
}

/// Writes `f` to `sink` and returns the number of bytes written.
pub fn write_file<W: Write>(f: &GdfFile, mut sink: W) -> Result<u64> {
    let bytes = encode_file(f)?;
    sink.write_all(&bytes)?;
    sink.flush()?;
    Ok(bytes.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{layout_from_channels, ChannelData, SignalBlock};
    use crate::events::{Event, EventMode, EventTable};
    use crate::header::{FixedHeader, TlvValue};
    use crate::model::{Calibration, GdfType, PhysDimCode};

    fn chans() -> Vec<ChannelInfo> {
        let c = Calibration::new(-1.0, 1.0, -100.0, 100.0);
        vec![
            ChannelInfo::new("a", PhysDimCode(4275), GdfType::Int16, 2, c),
            ChannelInfo::new("b", PhysDimCode(4275), GdfType::Int8, 2, c),
        ]
    }

    fn signals(n: usize) -> SignalBlock {
        use crate::data::Samples;
        let c = Calibration::new(-1.0, 1.0, -100.0, 100.0);
        SignalBlock {
            channels: vec![
                ChannelData::new(Samples::Int16((0..2 * n as i16).collect()), &c),
                ChannelData::new(Samples::Int8((0..2 * n as i8).collect()), &c),
            ],
            n_records: n,
        }
    }

    #[test]
    fn minimal_is_256_bytes() {
        let f = GdfFile::new(
            FixedHeader::default(),
            vec![],
            vec![],
            SignalBlock {
                channels: vec![],
                n_records: 0,
            },
            None,
        );
        assert_eq!(encode_file(&f).unwrap().len(), 256);
    }

    #[test]
    fn section_sizes_add_up() {
        let mut ev = EventTable::new(EventMode::Mode1, 2.0);
        ev.events = vec![Event::new(1, 1), Event::new(2, 2), Event::new(3, 0x8001)];
        let f = GdfFile::new(FixedHeader::default(), chans(), vec![], signals(5), Some(ev.clone()));
        assert_eq!(layout_from_channels(&f.channels).bytes_per_record, 6);
        assert_eq!(encode_file(&f).unwrap().len(), 768 + 30 + 26);

        let tlv = vec![TlvValue::Technician(b"T".to_vec()).encode().unwrap()];
        let f = GdfFile::new(FixedHeader::default(), chans(), tlv, signals(5), Some(ev));
        assert_eq!(f.header.header_blocks, 4);
        assert_eq!(encode_file(&f).unwrap().len(), 1024 + 30 + 26);
    }

    #[test]
    fn geometry_errors() {
        let mut f = GdfFile::new(FixedHeader::default(), chans(), vec![], signals(2), None);
        f.header.ns = 3;
        assert!(encode_file(&f).is_err());
        f.header.ns = 2;
        f.header.header_blocks = 2;
        assert!(encode_file(&f).is_err());
        f.header.header_blocks = 3;
        f.header.n_records = 4;
        assert!(encode_file(&f).is_err());
        f.header.n_records = -1;
        assert!(encode_file(&f).is_ok());
        f.events = Some(EventTable::new(EventMode::Mode1, 1.0));
        assert!(encode_file(&f).is_err());
    }
}
