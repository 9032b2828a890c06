use super::{Event, EventMode, EventTable, SPARSE_SAMPLE};
use crate::error::{rules, Diagnostic, GdfError, Result, Section};
use crate::header::ChannelInfo;
use crate::model::GdfType;

/// One value of a sparse channel carried by a 0x7FFF event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseSample {
    /// Row index of the carrying event in its table.
    pub index: usize,
    pub pos: u32,
    pub raw: f64,
    /// Scaled value; NaN outside [DigMin, DigMax].
    pub physical: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSeries {
    /// One-based channel number.
    pub channel: u16,
    pub samples: Vec<SparseSample>,
}

fn sparse_type_error(t: GdfType) -> GdfError {
    GdfError::structural(
        rules::CHANNEL_SPARSE_TYPE,
        Section::ChannelHeader,
        None,
        format!("{t} does not fit the 32-bit duration field"),
    )
}

/// Reads the channel's type from the low bytes of `dur`.
pub fn dur_to_raw(dur: u32, t: GdfType) -> Result<f64> {
    Ok(match t {
        GdfType::Int8 => dur as u8 as i8 as f64,
        GdfType::Uint8 => (dur & 0xFF) as f64,
        GdfType::Int16 => dur as u16 as i16 as f64,
        GdfType::Uint16 => (dur & 0xFFFF) as f64,
        GdfType::Int24 => ((dur << 8) as i32 >> 8) as f64,
        GdfType::Uint24 => (dur & 0xFF_FFFF) as f64,
        GdfType::Int32 => dur as i32 as f64,
        GdfType::Uint32 => dur as f64,
        GdfType::Float32 => f32::from_bits(dur) as f64,
        _ => return Err(sparse_type_error(t)),
    })
}

/// Stores `raw` in the low bytes of a zero-extended duration field.
pub fn raw_to_dur(raw: f64, t: GdfType) -> Result<u32> {
    if t == GdfType::Float32 {
        return Ok((raw as f32).to_bits());
    }
    let (lo, hi) = match t.range() {
        Some(r) if t.size_bytes() <= 4 => r,
        _ => return Err(sparse_type_error(t)),
    };
    if !(raw >= lo && raw <= hi) || raw.fract() != 0.0 {
        return Err(GdfError::Domain {
            what: "sparse sample",
            value: format!("{raw} as {t}"),
        });
    }
    let bits = raw as i64 as u32;
    Ok(match t.size_bytes() {
        1 => bits & 0xFF,
        2 => bits & 0xFFFF,
        3 => bits & 0xFF_FFFF,
        _ => bits,
    })
}

/// Whether row `e` is a well-formed sample of a sparse channel.
fn target<'a>(e: &Event, channels: &'a [ChannelInfo]) -> Option<&'a ChannelInfo> {
    if e.typ != SPARSE_SAMPLE {
        return None;
    }
    let c = channels.get((e.chn as usize).checked_sub(1)?)?;
    c.is_sparse().then_some(c)
}

/// Collects the samples of every sparse channel from a mode-3 table.
/// Malformed 0x7FFF rows are reported and skipped.
pub fn extract_sparse_samples(
    t: &EventTable,
    channels: &[ChannelInfo],
) -> Result<(Vec<SparseSeries>, Vec<Diagnostic>)> {
    if t.mode != EventMode::Mode3 {
        return Err(GdfError::InvalidArgument("sparse samples live in mode-3 tables".into()));
    }
    let mut series: Vec<SparseSeries> = channels
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_sparse())
        .map(|(i, _)| SparseSeries {
            channel: (i + 1) as u16,
            samples: Vec::new(),
        })
        .collect();
    let mut diags = Vec::new();
    for (index, e) in t.events.iter().enumerate() {
        if e.typ != SPARSE_SAMPLE {
            continue;
        }
        let Some(c) = target(e, channels) else {
            diags.push(Diagnostic::error(
                Section::Events,
                None,
                rules::EVENT_SPARSE_REF,
                format!("event {} refers to channel {}, which is not sparse", index + 1, e.chn),
            ));
            continue;
        };
        let raw = dur_to_raw(e.dur, c.gdf_type)?;
        let physical = c.cal.scale(raw).unwrap_or(f64::NAN);
        let s = series.iter_mut().find(|s| s.channel == e.chn).expect("sparse channel listed");
        s.samples.push(SparseSample {
            index,
            pos: e.pos,
            raw,
            physical,
        });
    }
    Ok((series, diags))
}

/// Drops the well-formed sparse-sample rows, keeping everything else in order.
pub fn remove_sparse_samples(t: &EventTable, channels: &[ChannelInfo]) -> EventTable {
    EventTable {
        mode: t.mode,
        sample_rate: t.sample_rate,
        events: t.events.iter().filter(|e| target(e, channels).is_none()).copied().collect(),
    }
}

/// Inserts sparse samples as 0x7FFF rows. Rows go to their recorded
/// `index`, in increasing index order, so that inserting into the output
/// of [`remove_sparse_samples`] restores the original table.
pub fn insert_sparse_samples(t: &EventTable, series: &[SparseSeries], channels: &[ChannelInfo]) -> Result<EventTable> {
    if t.mode != EventMode::Mode3 {
        return Err(GdfError::InvalidArgument("sparse samples live in mode-3 tables".into()));
    }
    let mut rows = Vec::new();
    for s in series {
        let c = (s.channel as usize)
            .checked_sub(1)
            .and_then(|k| channels.get(k))
            .filter(|c| c.is_sparse())
            .ok_or_else(|| GdfError::InvalidArgument(format!("channel {} is not sparse", s.channel)))?;
        for x in &s.samples {
            rows.push((x.index, Event::with_channel(x.pos, SPARSE_SAMPLE, s.channel, raw_to_dur(x.raw, c.gdf_type)?)));
        }
    }
    rows.sort_by_key(|(i, _)| *i);
    let mut events = t.events.clone();
    for (i, e) in rows {
        events.insert(i.min(events.len()), e);
    }
    Ok(EventTable {
        mode: t.mode,
        sample_rate: t.sample_rate,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Calibration, PhysDimCode};

    fn chans(t: GdfType, cal: Calibration) -> Vec<ChannelInfo> {
        vec![
            ChannelInfo::new("eeg", PhysDimCode(0), GdfType::Int16, 8, Calibration::default()),
            ChannelInfo::new("sp", PhysDimCode(0), t, 0, cal),
        ]
    }

    #[test]
    fn uint32_half_scale() {
        let ch = chans(GdfType::Uint32, Calibration::new(0.0, 1.0, 0.0, 100.0));
        let t = EventTable {
            mode: EventMode::Mode3,
            sample_rate: 8.0,
            events: vec![Event::with_channel(10, SPARSE_SAMPLE, 2, 50), Event::with_channel(11, SPARSE_SAMPLE, 2, 100)],
        };
        let (s, d) = extract_sparse_samples(&t, &ch).unwrap();
        assert!(d.is_empty());
        assert_eq!(s[0].channel, 2);
        assert_eq!(s[0].samples[0].pos, 10);
        assert_eq!(s[0].samples[0].physical, 0.5);
        assert_eq!(s[0].samples[1].physical, 1.0);
    }

    #[test]
    fn int16_reinterprets_low_bytes() {
        assert_eq!(dur_to_raw(0xFFFF, GdfType::Int16).unwrap(), -1.0);
        assert_eq!(raw_to_dur(-1.0, GdfType::Int16).unwrap(), 0xFFFF);
        assert_eq!(dur_to_raw(0x00FF_FFFF, GdfType::Int24).unwrap(), -1.0);
        assert!(raw_to_dur(1.0, GdfType::Int64).is_err());
        assert!(raw_to_dur(70000.0, GdfType::Int16).is_err());
    }

    #[test]
    fn bad_reference_is_reported() {
        let ch = chans(GdfType::Uint32, Calibration::new(0.0, 1.0, 0.0, 100.0));
        let t = EventTable {
            mode: EventMode::Mode3,
            sample_rate: 8.0,
            events: vec![Event::with_channel(10, SPARSE_SAMPLE, 1, 50), Event::with_channel(10, SPARSE_SAMPLE, 0, 5)],
        };
        let (s, d) = extract_sparse_samples(&t, &ch).unwrap();
        assert!(s[0].samples.is_empty());
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.rule == rules::EVENT_SPARSE_REF));
    }

    #[test]
    fn extract_remove_insert_identity() {
        let ch = chans(GdfType::Int16, Calibration::new(-1.0, 1.0, -100.0, 100.0));
        let t = EventTable {
            mode: EventMode::Mode3,
            sample_rate: 8.0,
            events: vec![
                Event::with_channel(1, 0x0300, 0, 4),
                Event::with_channel(2, SPARSE_SAMPLE, 2, 0xFFFF),
                Event::with_channel(3, 0x0101, 1, 0),
                Event::with_channel(4, SPARSE_SAMPLE, 2, 7),
            ],
        };
        let (s, _) = extract_sparse_samples(&t, &ch).unwrap();
        let stripped = remove_sparse_samples(&t, &ch);
        assert_eq!(stripped.events.len(), 2);
        assert_eq!(insert_sparse_samples(&stripped, &s, &ch).unwrap(), t);
    }
}
