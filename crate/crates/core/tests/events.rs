use std::collections::BTreeMap;

use gdf::events::{
    convert_mode, extract_sparse_samples, flatten_spans, insert_sparse_samples, pair_mode1_events, parse_event_table,
    raw_to_dur, remove_sparse_samples, write_event_table, Event, EventMode, EventTable, END_FLAG, SPARSE_SAMPLE,
};
use gdf::header::ChannelInfo;
use gdf::model::{Calibration, GdfType, PhysDimCode};
use proptest::prelude::*;

fn multiset(events: &[Event]) -> BTreeMap<(u16, u32), usize> {
    let mut m = BTreeMap::new();
    for e in events {
        *m.entry((e.typ, e.pos)).or_default() += 1;
    }
    m
}

fn arb_event(mode: EventMode) -> impl Strategy<Value = Event> {
    (any::<u32>(), any::<u16>(), any::<u16>(), any::<u32>()).prop_map(move |(pos, typ, chn, dur)| match mode {
        EventMode::Mode1 => Event::new(pos, typ),
        EventMode::Mode3 => Event::with_channel(pos, typ, chn, dur),
    })
}

fn arb_table() -> impl Strategy<Value = EventTable> {
    prop_oneof![Just(EventMode::Mode1), Just(EventMode::Mode3)].prop_flat_map(|mode| {
        (any::<u32>(), prop::collection::vec(arb_event(mode), 0..64)).prop_map(move |(rate, events)| EventTable {
            mode,
            sample_rate: f32::from_bits(rate),
            events,
        })
    })
}

/// Properly paired mode-1 spans: each start has an end at or after a
/// strictly later position.
fn arb_paired() -> impl Strategy<Value = EventTable> {
    prop::collection::vec((1u32..1_000_000, 1u32..10_000, 0u16..0x7FFF), 0..40).prop_map(|spans| {
        let mut events = Vec::new();
        for (start, len, typ) in spans {
            if typ == SPARSE_SAMPLE {
                continue;
            }
            events.push(Event::new(start, typ));
            events.push(Event::new(start + len, typ | END_FLAG));
        }
        events.sort_by_key(|e| e.pos);
        EventTable {
            mode: EventMode::Mode1,
            sample_rate: 256.0,
            events,
        }
    })
}

proptest! {
    #[test]
    fn parse_write_identity(t in arb_table()) {
        let bytes = write_event_table(&t).unwrap();
        prop_assert_eq!(bytes.len(), t.encoded_len());
        let back = parse_event_table(&bytes, 0).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(write_event_table(&back).unwrap(), bytes);
    }

    #[test]
    fn flatten_of_pair_keeps_multiset(events in prop::collection::vec(arb_event(EventMode::Mode1), 0..64)) {
        let t = EventTable { mode: EventMode::Mode1, sample_rate: 1.0, events };
        let p = pair_mode1_events(&t).unwrap();
        prop_assert_eq!(multiset(&flatten_spans(&p)), multiset(&t.events));
    }

    #[test]
    fn mode1_to_3_to_1(t in arb_paired()) {
        let m3 = convert_mode(&t, EventMode::Mode3).unwrap();
        prop_assert!(m3.events.iter().all(|e| e.chn == 0));
        let back = convert_mode(&m3, EventMode::Mode1).unwrap();
        prop_assert_eq!(multiset(&back.events), multiset(&t.events));
    }

    #[test]
    fn mode3_to_1_to_3(rows in prop::collection::vec((1u32..1_000_000, 0u32..10_000, 0u16..0x7FFE), 0..40)) {
        // One span per code: overlapping spans of one code have no unique mode-1 pairing.
        let by_code: BTreeMap<u16, (u32, u32)> = rows.iter().map(|&(p, d, t)| (t, (p, d))).collect();
        let mut events: Vec<Event> = by_code.iter().map(|(&t, &(p, d))| Event::with_channel(p, t, 0, d)).collect();
        events.sort();
        let t = EventTable { mode: EventMode::Mode3, sample_rate: 100.0, events };
        let m1 = convert_mode(&t, EventMode::Mode1).unwrap();
        let mut back = convert_mode(&m1, EventMode::Mode3).unwrap().events;
        back.sort();
        prop_assert_eq!(back, t.events);
    }

    #[test]
    fn sparse_extract_insert_identity(
        raws in prop::collection::vec((1u32..10_000, -32768i32..=32767), 0..30),
        others in prop::collection::vec((1u32..10_000, 0u16..0x7FFE), 0..10),
    ) {
        let cal = Calibration::new(-5.0, 5.0, -32768.0, 32767.0);
        let channels = vec![
            ChannelInfo::new("eeg", PhysDimCode(4275), GdfType::Int16, 16, cal),
            ChannelInfo::new("bp", PhysDimCode(3872), GdfType::Int16, 0, cal),
        ];
        let mut events: Vec<Event> = raws
            .iter()
            .map(|&(p, v)| Event::with_channel(p, SPARSE_SAMPLE, 2, raw_to_dur(v as f64, GdfType::Int16).unwrap()))
            .collect();
        events.extend(others.iter().map(|&(p, t)| Event::with_channel(p, t, 1, 3)));
        events.sort_by_key(|e| e.pos);
        let t = EventTable { mode: EventMode::Mode3, sample_rate: 16.0, events };
        let (series, diags) = extract_sparse_samples(&t, &channels).unwrap();
        prop_assert!(diags.is_empty());
        prop_assert_eq!(series[0].samples.len(), raws.len());
        for s in &series[0].samples {
            prop_assert!(s.physical >= -5.0 && s.physical <= 5.0);
        }
        let stripped = remove_sparse_samples(&t, &channels);
        prop_assert_eq!(insert_sparse_samples(&stripped, &series, &channels).unwrap(), t);
    }
}

#[test]
fn sparse_endpoints_scale_exactly() {
    let cal = Calibration::new(-0.25, 7.5, 3.0, 4000.0);
    let channels = vec![ChannelInfo::new("s", PhysDimCode(0), GdfType::Uint16, 0, cal)];
    let t = EventTable {
        mode: EventMode::Mode3,
        sample_rate: 1.0,
        events: vec![Event::with_channel(1, SPARSE_SAMPLE, 1, 3), Event::with_channel(2, SPARSE_SAMPLE, 1, 4000)],
    };
    let (s, _) = extract_sparse_samples(&t, &channels).unwrap();
    assert_eq!(s[0].samples[0].physical, -0.25);
    assert_eq!(s[0].samples[1].physical, 7.5);
}
