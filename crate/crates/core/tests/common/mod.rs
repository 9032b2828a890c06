//! Random model builder shared by the integration suites.
#![allow(dead_code)]

use std::net::{IpAddr, Ipv4Addr, Ipv6Addr};

use gdf::data::{ChannelData, Samples, SignalBlock};
use gdf::events::{raw_to_dur, Event, EventMode, EventTable, SPARSE_SAMPLE};
use gdf::header::{
    ChannelInfo, FixedHeader, Habits, Location, PatientId, Physique, RecordDuration, SensorInfo, TlvElement, TlvValue,
};
use gdf::model::units::{BASE_UNITS, OHM, VOLT};
use gdf::model::{encode_physdim, Calibration, DecimalPrefix, GdfTime, GdfType};
use gdf::GdfFile;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Shape {
    pub ns: usize,
    pub n_records: usize,
    pub max_spr: u32,
    pub events: Option<EventMode>,
    pub tlv: bool,
}

fn word(rng: &mut ChaCha8Rng, max: usize) -> String {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| *b"abcdefghijkmnopqrstuvwxyz0123456789".choose(rng).unwrap() as char).collect()
}

fn maybe_word(rng: &mut ChaCha8Rng, max: usize) -> String {
    if rng.gen_bool(0.3) {
        String::new()
    } else {
        word(rng, max)
    }
}

fn finite_f32(rng: &mut ChaCha8Rng) -> f32 {
    rng.gen_range(-1.0e6f32..1.0e6)
}

fn cal_for(rng: &mut ChaCha8Rng, t: GdfType) -> Calibration {
    let (lo, hi) = match t.range() {
        Some((lo, hi)) if !t.is_float() => (lo, hi),
        _ => (-1.0e4, 1.0e4),
    };
    let (lo, hi) = (lo.max(-1.0e15), hi.min(1.0e15));
    let a = rng.gen_range(lo..hi).round();
    let b = rng.gen_range(lo..hi).round();
    let (dmin, dmax) = if a < b { (a, b) } else if a > b { (b, a) } else { (lo, hi) };
    let pmin = rng.gen_range(-1000.0..0.0);
    let pmax = rng.gen_range(0.0..1000.0);
    Calibration::new(pmin, pmax, dmin, dmax)
}

pub fn random_channel(rng: &mut ChaCha8Rng, t: GdfType, spr: u32) -> ChannelInfo {
    let base = BASE_UNITS.choose(rng).unwrap().0;
    let prefix = *DecimalPrefix::ALL.choose(rng).unwrap();
    let unit = encode_physdim(base, prefix).unwrap();
    let mut ch = ChannelInfo::new(word(rng, 16), unit, t, spr, cal_for(rng, t));
    ch.transducer = maybe_word(rng, 80);
    if rng.gen_bool(0.3) {
        ch.phys_dim_text = format!("u{}", rng.gen_range(0..100));
    }
    if rng.gen_bool(0.3) {
        ch.prefilter = format!("custom {}", rng.gen_range(0..1000));
    }
    if rng.gen_bool(0.7) {
        ch.lowpass_hz = rng.gen_range(1.0..500.0);
        ch.highpass_hz = rng.gen_range(0.0..1.0);
        ch.notch_hz = *[50.0f32, 60.0, -1.0].choose(rng).unwrap();
    }
    ch.position = [finite_f32(rng), finite_f32(rng), finite_f32(rng)];
    ch.sensor = match unit.base() {
        VOLT => SensorInfo::Impedance(rng.gen_range(0.0..1.0e5)),
        OHM => SensorInfo::ProbeFrequency(rng.gen_range(0.0..1.0e5)),
        _ => SensorInfo::Reserved(rng.gen()),
    };
    ch
}

pub fn random_samples(rng: &mut ChaCha8Rng, t: GdfType, n: usize) -> Samples {
    match t {
        GdfType::Int8 => Samples::Int8((0..n).map(|_| rng.gen()).collect()),
        GdfType::Uint8 => Samples::Uint8((0..n).map(|_| rng.gen()).collect()),
        GdfType::Int16 => Samples::Int16((0..n).map(|_| rng.gen()).collect()),
        GdfType::Uint16 => Samples::Uint16((0..n).map(|_| rng.gen()).collect()),
        GdfType::Int24 => Samples::Int24((0..n).map(|_| rng.gen_range(-8_388_608..=8_388_607)).collect()),
        GdfType::Uint24 => Samples::Uint24((0..n).map(|_| rng.gen_range(0..=16_777_215)).collect()),
        GdfType::Int32 => Samples::Int32((0..n).map(|_| rng.gen()).collect()),
        GdfType::Uint32 => Samples::Uint32((0..n).map(|_| rng.gen()).collect()),
        GdfType::Int64 => Samples::Int64((0..n).map(|_| rng.gen()).collect()),
        GdfType::Uint64 => Samples::Uint64((0..n).map(|_| rng.gen()).collect()),
        GdfType::Float32 => Samples::Float32((0..n).map(|_| rng.gen_range(-2.0e4..2.0e4)).collect()),
        GdfType::Float64 => Samples::Float64((0..n).map(|_| rng.gen_range(-2.0e4..2.0e4)).collect()),
        GdfType::Float128 => Samples::Float128((0..n).map(|_| rng.gen()).collect()),
    }
}

fn random_header(rng: &mut ChaCha8Rng) -> FixedHeader {
    let mut h = FixedHeader::default();
    h.patient.id = PatientId {
        code: maybe_word(rng, 10),
        name: maybe_word(rng, 10),
        classification: maybe_word(rng, 10),
        rest: if rng.gen_bool(0.5) { format!("{} {}", word(rng, 5), word(rng, 5)) } else { String::new() },
    };
    h.patient.habits = Habits::unpack(rng.gen::<u8>() & 0b1010_1010);
    h.patient.physique = Physique::unpack(rng.gen());
    h.patient.weight_kg = rng.gen();
    h.patient.height_cm = rng.gen();
    h.patient.birthday = GdfTime(rng.gen());
    h.patient.icd = maybe_word(rng, 6);
    h.patient.headsize_mm = rng.gen();
    h.recording.id = maybe_word(rng, 60);
    h.recording.location = if rng.gen_bool(0.5) {
        Some(Location {
            vertical_precision: rng.gen(),
            horizontal_precision: rng.gen(),
            size: rng.gen(),
            version: 0,
            latitude: rng.gen(),
            longitude: rng.gen(),
            altitude_cm: rng.gen(),
        })
    } else {
        None
    };
    h.recording.start_time = GdfTime(rng.gen());
    h.recording.equipment_provider = rng.gen();
    h.recording.reference_electrode = [finite_f32(rng), finite_f32(rng), finite_f32(rng)];
    h.recording.ground_electrode = [finite_f32(rng), finite_f32(rng), finite_f32(rng)];
    h.record_duration = RecordDuration::new(rng.gen_range(1..10), rng.gen_range(1..10));
    h
}

fn random_tlv(rng: &mut ChaCha8Rng, ns: usize) -> Vec<TlvElement> {
    let mut out = Vec::new();
    if rng.gen_bool(0.5) {
        let list = (0..rng.gen_range(0..4)).map(|_| word(rng, 12)).collect();
        out.push(TlvValue::EventDescriptions(list));
    }
    if rng.gen_bool(0.5) {
        out.push(TlvValue::Bci2000(maybe_word(rng, 30)));
    }
    if rng.gen_bool(0.5) {
        out.push(TlvValue::Manufacturer {
            manufacturer: maybe_word(rng, 20),
            model: maybe_word(rng, 20),
            version: maybe_word(rng, 20),
            serial: maybe_word(rng, 20),
        });
    }
    if rng.gen_bool(0.5) {
        out.push(TlvValue::SensorOrientation((0..ns).map(|_| [finite_f32(rng), finite_f32(rng), finite_f32(rng)]).collect()));
    }
    if rng.gen_bool(0.5) {
        out.push(TlvValue::IpAddress(if rng.gen() {
            IpAddr::V4(Ipv4Addr::from(rng.gen::<u32>()))
        } else {
            IpAddr::V6(Ipv6Addr::from(rng.gen::<u128>()))
        }));
    }
    if rng.gen_bool(0.3) {
        out.push(TlvValue::Technician(word(rng, 10).into_bytes()));
    }
    if rng.gen_bool(0.3) {
        let n = rng.gen_range(0..600);
        out.push(TlvValue::Free((0..n).map(|_| rng.gen()).collect()));
    }
    out.shuffle(rng);
    out.iter().map(|v| v.encode().unwrap()).collect()
}

/// Builds a structurally valid file; data values are arbitrary and may lie
/// outside the calibration range.
pub fn build_file(seed: u64, shape: &Shape) -> GdfFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let header = random_header(&mut rng);
    let channels: Vec<ChannelInfo> = (0..shape.ns)
        .map(|_| {
            let sparse = rng.gen_bool(0.2);
            let t = if sparse {
                *[GdfType::Int8, GdfType::Uint16, GdfType::Int24, GdfType::Uint32, GdfType::Float32]
                    .choose(&mut rng)
                    .unwrap()
            } else {
                *GdfType::ALL.choose(&mut rng).unwrap()
            };
            let spr = if sparse { 0 } else { rng.gen_range(1..=shape.max_spr) };
            random_channel(&mut rng, t, spr)
        })
        .collect();
    let n = shape.n_records;
    let signals = SignalBlock {
        channels: channels
            .iter()
            .map(|c| {
                let s = random_samples(&mut rng, c.gdf_type, n * c.samples_per_record as usize);
                ChannelData::new(s, &c.cal)
            })
            .collect(),
        n_records: n,
    };
    let tlv = if shape.tlv { random_tlv(&mut rng, shape.ns) } else { Vec::new() };
    let events = shape.events.map(|mode| {
        let mut t = EventTable::new(mode, rng.gen_range(1.0f32..1000.0));
        for _ in 0..rng.gen_range(0..20) {
            let pos = rng.gen_range(1..=u32::MAX / 2);
            let typ = rng.gen_range(0..0x7FFEu16) | if rng.gen_bool(0.3) { 0x8000 } else { 0 };
            t.events.push(match mode {
                EventMode::Mode1 => Event::new(pos, typ),
                EventMode::Mode3 => Event::with_channel(pos, typ, rng.gen_range(0..=shape.ns as u16), rng.gen()),
            });
        }
        if mode == EventMode::Mode3 {
            for (i, c) in channels.iter().enumerate().filter(|(_, c)| c.is_sparse()) {
                let raw = match random_samples(&mut rng, c.gdf_type, 1).get_f64(0) {
                    Some(v) if c.gdf_type != GdfType::Float32 => v,
                    _ => rng.gen_range(-100.0f32..100.0) as f64,
                };
                let dur = raw_to_dur(raw, c.gdf_type).unwrap();
                t.events.push(Event::with_channel(rng.gen_range(1..1000), SPARSE_SAMPLE, (i + 1) as u16, dur));
            }
        }
        t
    });
    GdfFile::new(header, channels, tlv, signals, events)
}

prop_compose! {
    pub fn arb_file()(seed in any::<u64>(), ns in 0usize..=4, n in 0usize..=4, ev in 0u8..3, tlv in any::<bool>()) -> GdfFile {
        let events = match ev { 0 => None, 1 => Some(EventMode::Mode1), _ => Some(EventMode::Mode3) };
        build_file(seed, &Shape { ns, n_records: n, max_spr: 4, events, tlv })
    }
}
