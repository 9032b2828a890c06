//! Whole-file reading, writing, validation and streaming.

mod anonymize;
mod read;
mod stream;
mod validate;
mod write;

pub use anonymize::{anonymize, BirthdayPolicy, MAX_BIRTHDAY_SHIFT_DAYS};
pub use read::{read_bytes, read_file, ReadMode};
pub use stream::StreamWriter;
pub use validate::validate;
pub use write::{encode_file, write_file};

use crate::data::{layout_from_channels, RecordLayout, SignalBlock};
use crate::error::Result;
use crate::events::{event_table_position, EventCodeRegistry, EventTable};
use crate::header::tlv::TAG_EVENT_DESCRIPTIONS;
use crate::header::{decode_tag_value, header_blocks_for, tlv_content_len, ChannelInfo, FixedHeader, TlvElement, TlvValue};

/// A complete GDF file held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct GdfFile {
    pub header: FixedHeader,
    pub channels: Vec<ChannelInfo>,
    pub tlv: Vec<TlvElement>,
    pub signals: SignalBlock,
    pub events: Option<EventTable>,
}

/// Sets `ns` and the minimal header length for the given content.
pub fn normalize_header(header: &mut FixedHeader, channels: &[ChannelInfo], tlv: &[TlvElement]) {
    header.ns = channels.len() as u16;
    header.header_blocks = header_blocks_for(channels.len(), tlv_content_len(tlv)) as u16;
}

impl GdfFile {
    /// Assembles a file with consistent geometry: `ns`, header length and
    /// the record count are derived from the content.
    pub fn new(
        mut header: FixedHeader,
        channels: Vec<ChannelInfo>,
        tlv: Vec<TlvElement>,
        signals: SignalBlock,
        events: Option<EventTable>,
    ) -> Self {
        normalize_header(&mut header, &channels, &tlv);
        header.n_records = signals.n_records as i64;
        GdfFile {
            header,
            channels,
            tlv,
            signals,
            events,
        }
    }

    pub fn layout(&self) -> RecordLayout {
        layout_from_channels(&self.channels)
    }

    pub fn event_table_position(&self) -> Result<u64> {
        event_table_position(self.header.header_blocks, self.header.n_records, self.layout().bytes_per_record)
    }

    /// Recording length in seconds, when the record count is known.
    pub fn duration_seconds(&self) -> Option<f64> {
        (self.header.n_records >= 0).then(|| self.header.n_records as f64 * self.header.record_duration.seconds())
    }

    /// Decoded header-3 values; undecodable elements are skipped.
    pub fn tlv_values(&self) -> Vec<TlvValue> {
        self.tlv
            .iter()
            .filter_map(|e| decode_tag_value(e, self.channels.len()).ok())
            .collect()
    }

    /// Built-in event descriptions extended by this file's tag-1 list.
    pub fn event_registry(&self) -> EventCodeRegistry {
        let mut r = EventCodeRegistry::builtin();
        let tag1 = self.tlv.iter().find(|e| e.tag == TAG_EVENT_DESCRIPTIONS);
        if let Some(Ok(TlvValue::EventDescriptions(list))) = tag1.map(|e| decode_tag_value(e, self.channels.len())) {
            r.load_user_descriptions(&list);
        }
        r
    }
}
