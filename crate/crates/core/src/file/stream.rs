use std::io::{Seek, SeekFrom, Write};

use super::write::{check_header_geometry, encode_headers};
use crate::data::{encode_records, layout_from_channels, RecordLayout, SignalBlock};
use crate::error::{GdfError, Result};
use crate::events::{write_event_table, EventTable};
use crate::header::fixed::offsets;
use crate::header::{ChannelInfo, FixedHeader, TlvElement};

type SeekFn<W> = fn(&mut W, u64) -> std::io::Result<u64>;

fn seek_to<W: Seek>(w: &mut W, pos: u64) -> std::io::Result<u64> {
    w.seek(SeekFrom::Start(pos))
}

fn seek_end<W: Seek>(w: &mut W, _: u64) -> std::io::Result<u64> {
    w.seek(SeekFrom::End(0))
}

/// Writer for an ongoing recording.
///
/// The header goes out first with NRec = -1; records are appended as they
/// arrive. `finalize` patches the record count and appends the event table,
/// which needs a seekable sink.
pub struct StreamWriter<W: Write> {
    sink: W,
    layout: RecordLayout,
    /// Sink position of byte 0 of the file, for seekable sinks.
    start: Option<u64>,
    seek: Option<(SeekFn<W>, SeekFn<W>)>,
    n_records: u64,
    finalized: bool,
}

impl<W: Write + Seek> StreamWriter<W> {
    pub fn create(header: &FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement], mut sink: W) -> Result<Self> {
        let start = sink.stream_position()?;
        let mut w = StreamWriter::start(header, channels, tlv, sink)?;
        w.start = Some(start);
        w.seek = Some((seek_to::<W>, seek_end::<W>));
        Ok(w)
    }
}

impl<W: Write> StreamWriter<W> {
    /// A writer for sinks that cannot seek. The file keeps NRec = -1 and
    /// cannot receive an event table.
    pub fn create_unseekable(header: &FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement], sink: W) -> Result<Self> {
        StreamWriter::start(header, channels, tlv, sink)
    }

    fn start(header: &FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement], mut sink: W) -> Result<Self> {
        check_header_geometry(header, channels, tlv)?;
        let mut h = header.clone();
        h.n_records = -1;
        sink.write_all(&encode_headers(&h, channels, tlv)?)?;
        Ok(StreamWriter {
            sink,
            layout: layout_from_channels(channels),
            start: None,
            seek: None,
            n_records: 0,
            finalized: false,
        })
    }

    pub fn layout(&self) -> &RecordLayout {
        &self.layout
    }

    pub fn records_written(&self) -> u64 {
        self.n_records
    }

    /// Appends every record in `block`.
    pub fn append_records(&mut self, block: &SignalBlock) -> Result<()> {
        if self.finalized {
            return Err(GdfError::Finalized);
        }
        let bytes = encode_records(block, &self.layout)?;
        self.sink.write_all(&bytes)?;
        self.n_records += block.n_records as u64;
        Ok(())
    }

    /// Appends pre-encoded records; the length must be a whole number of records.
    pub fn append_raw(&mut self, bytes: &[u8]) -> Result<()> {
        if self.finalized {
            return Err(GdfError::Finalized);
        }
        let bpr = self.layout.bytes_per_record;
        if bpr == 0 || bytes.len() % bpr != 0 {
            return Err(GdfError::InvalidArgument(format!(
                "{} bytes is not a whole number of {bpr}-byte records",
                bytes.len()
            )));
        }
        self.sink.write_all(bytes)?;
        self.n_records += (bytes.len() / bpr) as u64;
        Ok(())
    }

    /// Completes the file. On a seekable sink the record count is patched;
    /// an event table is only possible there.
    pub fn finalize(&mut self, events: Option<&EventTable>) -> Result<()> {
        if self.finalized {
            return Err(GdfError::Finalized);
        }
        let table = events.map(write_event_table).transpose()?;
        match (self.seek, self.start) {
            (Some((to, end)), Some(start)) => {
                to(&mut self.sink, start + offsets::N_RECORDS as u64)?;
                self.sink.write_all(&(self.n_records as i64).to_le_bytes())?;
                end(&mut self.sink, 0)?;
            }
            _ if table.is_some() => return Err(GdfError::UnseekableSink),
            _ => {}
        }
        if let Some(t) = table {
            self.sink.write_all(&t)?;
        }
        self.sink.flush()?;
        self.finalized = true;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.sink
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ChannelData, Samples};
    use crate::events::{Event, EventMode};
    use crate::file::{read_bytes, ReadMode};
    use crate::model::{Calibration, GdfType, PhysDimCode};
    use std::io::Cursor;

    fn setup() -> (FixedHeader, Vec<ChannelInfo>, SignalBlock) {
        let cal = Calibration::new(-1.0, 1.0, -100.0, 100.0);
        let ch = vec![ChannelInfo::new("x", PhysDimCode(4275), GdfType::Int16, 2, cal)];
        let mut h = FixedHeader::default();
        crate::file::normalize_header(&mut h, &ch, &[]);
        let rec = SignalBlock {
            channels: vec![ChannelData::new(Samples::Int16(vec![1, 2]), &cal)],
            n_records: 1,
        };
        (h, ch, rec)
    }

    #[test]
    fn count_is_patched() {
        let (h, ch, rec) = setup();
        let mut w = StreamWriter::create(&h, &ch, &[], Cursor::new(Vec::new())).unwrap();
        for _ in 0..3 {
            w.append_records(&rec).unwrap();
        }
        w.finalize(None).unwrap();
        assert!(matches!(w.append_records(&rec), Err(GdfError::Finalized)));
        let bytes = w.into_inner().into_inner();
        assert_eq!(i64::from_le_bytes(bytes[236..244].try_into().unwrap()), 3);
    }

    #[test]
    fn events_need_seek() {
        let (h, ch, rec) = setup();
        let mut w = StreamWriter::create_unseekable(&h, &ch, &[], Vec::new()).unwrap();
        w.append_records(&rec).unwrap();
        let t = EventTable::new(EventMode::Mode1, 1.0);
        assert!(matches!(w.finalize(Some(&t)), Err(GdfError::UnseekableSink)));
        w.finalize(None).unwrap();
        let bytes = w.into_inner();
        assert_eq!(&bytes[236..244], &[0xFF; 8]);
    }

    #[test]
    fn interrupted_recording_reads_leniently() {
        let (h, ch, rec) = setup();
        let mut w = StreamWriter::create_unseekable(&h, &ch, &[], Vec::new()).unwrap();
        w.append_records(&rec).unwrap();
        w.append_records(&rec).unwrap();
        let mut bytes = w.into_inner();
        bytes.push(7);
        let (f, d) = read_bytes(&bytes, ReadMode::Lenient).unwrap();
        assert_eq!(f.signals.n_records, 2);
        assert!(d.iter().any(|d| d.rule == crate::error::rules::DATA_NREC_INFERRED));
    }

    #[test]
    fn event_table_at_etp() {
        let (h, ch, rec) = setup();
        let mut w = StreamWriter::create(&h, &ch, &[], Cursor::new(Vec::new())).unwrap();
        w.append_records(&rec).unwrap();
        let mut t = EventTable::new(EventMode::Mode1, 2.0);
        t.events.push(Event::new(1, 0x0300));
        w.finalize(Some(&t)).unwrap();
        let bytes = w.into_inner().into_inner();
        let (f, _) = read_bytes(&bytes, ReadMode::Strict).unwrap();
        assert_eq!(f.event_table_position().unwrap(), 512 + 4);
        assert_eq!(bytes[516], 1);
        assert_eq!(f.events, Some(t));
    }
}
