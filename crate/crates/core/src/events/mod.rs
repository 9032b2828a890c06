//! Event table codec: serialization, placement, span pairing, sparse
//! samples and code descriptions.

mod pairing;
mod registry;
mod sparse;

pub use pairing::{convert_mode, flatten_spans, pair_mode1_events, Pairing, Span};
pub use registry::{describe_event, EventCodeRegistry};
pub use sparse::{
    dur_to_raw, extract_sparse_samples, insert_sparse_samples, raw_to_dur, remove_sparse_samples, SparseSample,
    SparseSeries,
};

use std::fmt;

use crate::error::{rules, Diagnostic, GdfError, Result, Section};
use crate::header::{ChannelInfo, RecordDuration};

/// Bit or-ed into a type code to mark the end of a span.
pub const END_FLAG: u16 = 0x8000;
/// Type code whose `dur` carries one sample of a sparse channel.
pub const SPARSE_SAMPLE: u16 = 0x7FFF;
pub const EVENT_HEADER_LEN: usize = 8;
pub const MAX_EVENTS: usize = (1 << 24) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventMode {
    /// {TYP, POS}
    Mode1 = 1,
    /// {TYP, POS, CHN, DUR}
    Mode3 = 3,
}

impl EventMode {
    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(EventMode::Mode1),
            3 => Some(EventMode::Mode3),
            _ => None,
        }
    }

    pub fn byte(self) -> u8 {
        self as u8
    }

    pub fn bytes_per_event(self) -> usize {
        match self {
            EventMode::Mode1 => 6,
            EventMode::Mode3 => 12,
        }
    }
}

impl fmt::Display for EventMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.byte())
    }
}

/// One row of the event table. `chn` and `dur` are zero in mode 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Event {
    /// One-based sample position.
    pub pos: u32,
    pub typ: u16,
    /// One-based channel, 0 for all channels.
    pub chn: u16,
    pub dur: u32,
}

impl Event {
    pub fn new(pos: u32, typ: u16) -> Self {
        Event { pos, typ, chn: 0, dur: 0 }
    }

    pub fn with_channel(pos: u32, typ: u16, chn: u16, dur: u32) -> Self {
        Event { pos, typ, chn, dur }
    }

    pub fn is_end(&self) -> bool {
        self.typ & END_FLAG != 0
    }

    pub fn is_sparse_sample(&self) -> bool {
        self.typ == SPARSE_SAMPLE
    }

    /// Onset in seconds with sample 1 at time zero.
    pub fn onset_seconds(&self, rate: f32) -> f64 {
        (self.pos as f64 - 1.0) / rate as f64
    }
}

#[derive(Debug, Clone)]
pub struct EventTable {
    pub mode: EventMode,
    /// Sampling rate the positions and durations refer to.
    pub sample_rate: f32,
    pub events: Vec<Event>,
}

impl PartialEq for EventTable {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.sample_rate.to_bits() == other.sample_rate.to_bits()
            && self.events == other.events
    }
}

impl EventTable {
    pub fn new(mode: EventMode, sample_rate: f32) -> Self {
        EventTable {
            mode,
            sample_rate,
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn encoded_len(&self) -> usize {
        encoded_len(self.mode, self.events.len())
    }
}

/// Serialized size of a table with `n` events.
pub fn encoded_len(mode: EventMode, n: usize) -> usize {
    EVENT_HEADER_LEN + n * mode.bytes_per_event()
}

/// Byte offset of the event table.
pub fn event_table_position(header_blocks: u16, n_records: i64, bytes_per_record: usize) -> Result<u64> {
    if n_records < 0 {
        return Err(GdfError::structural(
            rules::EVENT_UNKNOWN_NREC,
            Section::Events,
            None,
            "no event table while the record count is unknown (NRec = -1)",
        ));
    }
    let data = (n_records as u64)
        .checked_mul(bytes_per_record as u64)
        .ok_or_else(|| GdfError::InvalidArgument("data section size overflows".into()))?;
    Ok(256 * header_blocks as u64 + data)
}

/// Largest channel sampling rate, the writer's default event rate.
/// Zero when no channel is sampled continuously.
pub fn default_event_rate(channels: &[ChannelInfo], duration: RecordDuration) -> f32 {
    channels
        .iter()
        .filter(|c| c.samples_per_record > 0)
        .map(|c| duration.rate_hz(c.samples_per_record))
        .filter(|r| r.is_finite())
        .fold(0.0f64, f64::max) as f32
}

/// Parses an event table at absolute file offset `base`. Bytes past the
/// table's declared size are ignored; compare with [`EventTable::encoded_len`].
pub fn parse_event_table(bytes: &[u8], base: u64) -> Result<EventTable> {
    if bytes.len() < EVENT_HEADER_LEN {
        return Err(GdfError::structural(
            rules::EVENT_TRUNCATED,
            Section::Events,
            Some(base),
            format!("event table header needs 8 bytes, {} present", bytes.len()),
        ));
    }
    let mode = EventMode::from_byte(bytes[0]).ok_or_else(|| {
        GdfError::structural(
            rules::EVENT_MODE,
            Section::Events,
            Some(base),
            format!("event table mode {} is neither 1 nor 3", bytes[0]),
        )
    })?;
    let n = u32::from_le_bytes([bytes[1], bytes[2], bytes[3], 0]) as usize;
    let sample_rate = f32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let need = encoded_len(mode, n);
    if bytes.len() < need {
        return Err(GdfError::structural(
            rules::EVENT_TRUNCATED,
            Section::Events,
            Some(base),
            format!("{n} mode-{mode} events need {need} bytes, {} present", bytes.len()),
        ));
    }
    let pos_at = EVENT_HEADER_LEN;
    let typ_at = pos_at + 4 * n;
    let chn_at = typ_at + 2 * n;
    let dur_at = chn_at + 2 * n;
    let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let events = (0..n)
        .map(|i| {
            let mut e = Event::new(u32_at(pos_at + 4 * i), u16_at(typ_at + 2 * i));
            if mode == EventMode::Mode3 {
                e.chn = u16_at(chn_at + 2 * i);
                e.dur = u32_at(dur_at + 4 * i);
            }
            e
        })
        .collect();
    Ok(EventTable {
        mode,
        sample_rate,
        events,
    })
}

pub fn write_event_table(t: &EventTable) -> Result<Vec<u8>> {
    let n = t.events.len();
    if n > MAX_EVENTS {
        return Err(GdfError::Domain {
            what: "event count",
            value: n.to_string(),
        });
    }
    if t.mode == EventMode::Mode1 {
        if let Some((i, _)) = t.events.iter().enumerate().find(|(_, e)| e.chn != 0 || e.dur != 0) {
            return Err(GdfError::InvalidArgument(format!(
                "event {} has a channel or duration, which mode 1 cannot store",
                i + 1
            )));
        }
    }
    let mut out = Vec::with_capacity(t.encoded_len());
    out.push(t.mode.byte());
    out.extend_from_slice(&(n as u32).to_le_bytes()[..3]);
    out.extend_from_slice(&t.sample_rate.to_le_bytes());
    out.extend(t.events.iter().flat_map(|e| e.pos.to_le_bytes()));
    out.extend(t.events.iter().flat_map(|e| e.typ.to_le_bytes()));
    if t.mode == EventMode::Mode3 {
        out.extend(t.events.iter().flat_map(|e| e.chn.to_le_bytes()));
        out.extend(t.events.iter().flat_map(|e| e.dur.to_le_bytes()));
    }
    debug_assert_eq!(out.len(), t.encoded_len());
    Ok(out)
}

/// Semantic checks of an event table against the channel list.
///
/// `recording_samples` is the recording length in event-rate samples, when
/// known. `base` is the table's file offset.
pub fn check_events(
    t: &EventTable,
    channels: &[ChannelInfo],
    recording_samples: Option<f64>,
    base: Option<u64>,
    diags: &mut Vec<Diagnostic>,
) {
    let ns = channels.len();
    let mut zero = 0usize;
    let mut beyond = 0usize;
    for (i, e) in t.events.iter().enumerate() {
        let tag = format!("event {} (typ 0x{:04X}, pos {})", i + 1, e.typ, e.pos);
        if e.pos == 0 {
            zero += 1;
            if zero == 1 {
                diags.push(Diagnostic::error(
                    Section::Events,
                    base,
                    rules::EVENT_POS_ZERO,
                    format!("{tag}: positions are one-based, 0 is not a sample"),
                ));
            }
        }
        // An end marker may sit one past the last sample.
        if let Some(len) = recording_samples {
            if e.pos as f64 > len.floor() + 1.0 {
                beyond += 1;
                if beyond == 1 {
                    diags.push(Diagnostic::error(
                        Section::Events,
                        base,
                        rules::EVENT_POS_RANGE,
                        format!("{tag}: beyond the recording length of {len} samples"),
                    ));
                }
            }
        }
        if t.mode == EventMode::Mode3 && e.chn as usize > ns {
            diags.push(Diagnostic::error(
                Section::Events,
                base,
                rules::EVENT_CHANNEL,
                format!("{tag}: channel {} but the file has {ns}", e.chn),
            ));
        }
        if e.is_sparse_sample() {
            match t.mode {
                EventMode::Mode1 => diags.push(Diagnostic::error(
                    Section::Events,
                    base,
                    rules::EVENT_SPARSE_MODE,
                    format!("{tag}: sparse-sample event in a mode-1 table"),
                )),
                EventMode::Mode3 => {
                    let target = (e.chn as usize).checked_sub(1).and_then(|k| channels.get(k));
                    if !matches!(target, Some(c) if c.is_sparse()) {
                        diags.push(Diagnostic::error(
                            Section::Events,
                            base,
                            rules::EVENT_SPARSE_REF,
                            format!("{tag}: channel {} is not a sparse channel", e.chn),
                        ));
                    }
                }
            }
        }
    }
    if zero > 1 {
        diags.push(Diagnostic::error(
            Section::Events,
            base,
            rules::EVENT_POS_ZERO,
            format!("{zero} events in total have position 0"),
        ));
    }
    if beyond > 1 {
        diags.push(Diagnostic::error(
            Section::Events,
            base,
            rules::EVENT_POS_RANGE,
            format!("{beyond} events in total lie beyond the recording"),
        ));
    }
}
