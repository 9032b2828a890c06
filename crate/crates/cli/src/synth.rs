//! Deterministic test-file generator.

use std::f64::consts::PI;
use std::net::{IpAddr, Ipv4Addr};

use anyhow::{bail, Result};
use gdf::data::{ChannelData, Samples, SignalBlock};
use gdf::events::{default_event_rate, raw_to_dur, Event, EventMode, EventTable, END_FLAG, SPARSE_SAMPLE};
use gdf::header::{
    ChannelInfo, FixedHeader, Gender, Habits, Handedness, HeartImpairment, Location, PatientId, Physique,
    RecordDuration, SensorInfo, TlvValue, TriState, VisualImpairment,
};
use gdf::model::units::MMHG;
use gdf::model::{Calibration, GdfTime, GdfType, PhysDimCode};
use gdf::GdfFile;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Microvolt, the unit of every continuous synthetic channel.
pub const MICROVOLT: PhysDimCode = PhysDimCode(4275);

/// Length of the out-of-range run written by `with_overflow`.
pub const OVERFLOW_BURST: usize = 16;

/// Trial codes drawn for synthetic spans.
const TRIAL_CODES: [u16; 6] = [0x0300, 0x0301, 0x0302, 0x0303, 0x0304, 0x0311];

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub channels: usize,
    pub gdf_type: GdfType,
    pub spr: u32,
    pub records: usize,
    /// Number of event spans (not rows).
    pub events: usize,
    /// Defaults to mode 3 with a sparse channel, mode 1 otherwise.
    pub event_mode: Option<EventMode>,
    pub seed: u64,
    pub with_overflow: bool,
    pub with_sparse: bool,
    pub with_tlv: bool,
    /// Leave the record count at -1, as an interrupted recording would.
    pub unknown_nrec: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            channels: 4,
            gdf_type: GdfType::Int16,
            spr: 256,
            records: 10,
            events: 8,
            event_mode: None,
            seed: 0,
            with_overflow: false,
            with_sparse: false,
            with_tlv: false,
            unknown_nrec: false,
        }
    }
}

/// Digital range one step inside the type range. 64-bit integers stay
/// within the exactly representable f64 integers, floats use +-1e6.
pub fn digital_range(t: GdfType) -> Option<(f64, f64)> {
    const EXACT: f64 = 9_007_199_254_740_992.0; // 2^53
    Some(match t {
        GdfType::Float128 => return None,
        GdfType::Float32 | GdfType::Float64 => (-1.0e6, 1.0e6),
        GdfType::Int64 => (-(EXACT - 2.0), EXACT - 2.0),
        GdfType::Uint64 => (1.0, EXACT - 2.0),
        t => {
            let (lo, hi) = t.range()?;
            (lo + 1.0, hi - 1.0)
        }
    })
}

fn header(rng: &mut ChaCha8Rng, seed: u64) -> Result<FixedHeader> {
    let mut h = FixedHeader::default();
    h.patient.id = PatientId {
        code: format!("P{:04}", seed % 10_000),
        name: "Synthetic".into(),
        ..Default::default()
    };
    let tri = |rng: &mut ChaCha8Rng| *[TriState::Unknown, TriState::No, TriState::Yes].choose(rng).unwrap();
    h.patient.habits = Habits {
        smoking: tri(rng),
        alcohol_abuse: tri(rng),
        drug_abuse: tri(rng),
        medication: tri(rng),
    };
    h.patient.physique = Physique {
        gender: *[Gender::Male, Gender::Female].choose(rng).unwrap(),
        handedness: *[Handedness::Right, Handedness::Left].choose(rng).unwrap(),
        visual: VisualImpairment::None,
        heart: HeartImpairment::No,
    };
    h.patient.weight_kg = rng.gen_range(50..100);
    h.patient.height_cm = rng.gen_range(150..200);
    // 1990-01-01 plus up to ten years
    h.patient.birthday = GdfTime::from_unix(631_152_000.0 + rng.gen_range(0..3650) as f64 * 86_400.0)?;
    h.recording.id = format!("synthetic recording seed {seed}");
    h.recording.location = Some(Location::from_degrees(47.0707, 15.4395, 353.0));
    // 2024-01-01 plus up to a year, whole seconds
    h.recording.start_time = GdfTime::from_unix(1_704_067_200.0 + rng.gen_range(0..31_536_000) as f64)?;
    h.recording.equipment_provider = u64::from_le_bytes(*b"SYNTH\0\0\0");
    h.record_duration = RecordDuration::new(1, 1);
    Ok(h)
}

fn sine_channel(rng: &mut ChaCha8Rng, i: usize, o: &SynthOptions, total: usize) -> (ChannelInfo, ChannelData) {
    let (dmin, dmax) = digital_range(o.gdf_type).expect("checked by caller");
    let cal = Calibration::new(-500.0, 500.0, dmin, dmax);
    let mut ch = ChannelInfo::new(format!("EEG {}", i + 1), MICROVOLT, o.gdf_type, o.spr, cal);
    ch.transducer = "Ag/AgCl electrode".into();
    ch.lowpass_hz = 100.0;
    ch.highpass_hz = 0.5;
    ch.notch_hz = 50.0;
    ch.sensor = SensorInfo::Impedance(rng.gen_range(1.0e3f32..2.0e4).round());

    let rate = o.spr as f64;
    let freq = rng.gen_range(1.0..rate.min(80.0) / 2.0);
    let phase = rng.gen_range(0.0..2.0 * PI);
    // 80% of the digital span around its centre
    let (centre, amp) = ((dmin + dmax) / 2.0, 0.4 * (dmax - dmin));
    let mut values: Vec<f64> = (0..total)
        .map(|k| {
            let v = centre + amp * (2.0 * PI * freq * k as f64 / rate + phase).sin();
            if o.gdf_type.is_float() {
                v
            } else {
                v.round()
            }
        })
        .collect();
    if o.with_overflow && i == 0 {
        let start = total / 2;
        for v in values.iter_mut().skip(start).take(OVERFLOW_BURST) {
            *v = dmax + 1.0;
        }
    }
    let data = ChannelData::new(Samples::from_f64(o.gdf_type, &values), &ch.cal);
    (ch, data)
}

fn sparse_channel() -> ChannelInfo {
    let mut ch = ChannelInfo::new("BP", PhysDimCode(MMHG), GdfType::Uint32, 0, Calibration::new(0.0, 300.0, 0.0, 1000.0));
    ch.transducer = "cuff".into();
    ch
}

/// Non-overlapping spans spread over `total` samples; the first starts
/// within the first 255 samples whenever the recording allows.
fn spans(rng: &mut ChaCha8Rng, n: usize, total: usize, codes: &[u16]) -> Vec<(u32, u32, u16)> {
    if n == 0 || total < 2 * n {
        return Vec::new();
    }
    let slot = total / n;
    (0..n)
        .map(|i| {
            let lead = rng.gen_range(0..(slot / 2).clamp(1, 255));
            let start = i * slot + lead + 1;
            let len = rng.gen_range(1..=(slot - lead - 1).max(1));
            (start as u32, len as u32, *codes.choose(rng).unwrap())
        })
        .collect()
}

pub fn synthesize(o: &SynthOptions) -> Result<GdfFile> {
    if digital_range(o.gdf_type).is_none() {
        bail!("cannot synthesize {} samples", o.gdf_type);
    }
    if o.spr == 0 {
        bail!("--spr must be positive");
    }
    if o.channels == 0 && !o.with_sparse && o.events > 0 {
        bail!("events need at least one channel to define positions");
    }
    let mode = match (o.event_mode, o.with_sparse) {
        (Some(EventMode::Mode1), true) => bail!("sparse samples need event mode 3"),
        (Some(m), _) => m,
        (None, true) => EventMode::Mode3,
        (None, false) => EventMode::Mode1,
    };
    let has_events = o.events > 0 || o.with_sparse;
    if o.unknown_nrec && has_events {
        bail!("an event table needs a known record count; use --events 0 without --with-sparse");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let h = header(&mut rng, o.seed)?;
    let total = o.records * o.spr as usize;
    let (mut channels, mut data): (Vec<ChannelInfo>, Vec<ChannelData>) =
        (0..o.channels).map(|i| sine_channel(&mut rng, i, o, total)).unzip();
    if o.with_sparse {
        channels.push(sparse_channel());
        data.push(ChannelData::empty(GdfType::Uint32));
    }

    let mut tlv = Vec::new();
    let mut codes = TRIAL_CODES.to_vec();
    if o.with_tlv {
        tlv.push(TlvValue::EventDescriptions(vec!["synthetic marker".into()]).encode()?);
        tlv.push(
            TlvValue::Manufacturer {
                manufacturer: "gdf-cli".into(),
                model: "synthesizer".into(),
                version: "1".into(),
                serial: format!("{}", o.seed),
            }
            .encode()?,
        );
        tlv.push(TlvValue::IpAddress(IpAddr::V4(Ipv4Addr::new(192, 0, 2, 1))).encode()?);
        codes.push(0x0001);
    }

    let events = has_events.then(|| {
        let rate = default_event_rate(&channels, h.record_duration);
        // Without continuous channels positions count seconds.
        let (rate, span_total) = if rate > 0.0 { (rate, total) } else { (1.0, o.records) };
        let mut t = EventTable::new(mode, rate);
        for (pos, len, typ) in spans(&mut rng, o.events, span_total, &codes) {
            match mode {
                EventMode::Mode1 => {
                    t.events.push(Event::new(pos, typ));
                    t.events.push(Event::new(pos + len, typ | END_FLAG));
                }
                EventMode::Mode3 => t.events.push(Event::with_channel(pos, typ, 0, len)),
            }
        }
        if o.with_sparse {
            let chn = channels.len() as u16;
            let n = (o.records * 4).max(1);
            let step = (span_total / n).max(1);
            for k in 0..n {
                let pos = (k * step + rng.gen_range(0..step) + 1).min(span_total.max(1)) as u32;
                let raw = (500.0 + 400.0 * (k as f64 * 0.7).sin()).round();
                let dur = raw_to_dur(raw, GdfType::Uint32).expect("in range");
                t.events.push(Event::with_channel(pos, SPARSE_SAMPLE, chn, dur));
            }
        }
        t.events.sort_by_key(|e| e.pos);
        t
    });

    let signals = SignalBlock {
        channels: data,
        n_records: o.records,
    };
    let mut f = GdfFile::new(h, channels, tlv, signals, events);
    if o.unknown_nrec {
        f.header.n_records = -1;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gdf::file::encode_file;

    #[test]
    fn deterministic_for_a_seed() {
        let o = SynthOptions {
            seed: 9,
            with_sparse: true,
            with_tlv: true,
            ..Default::default()
        };
        let a = encode_file(&synthesize(&o).unwrap()).unwrap();
        let b = encode_file(&synthesize(&o).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = encode_file(&synthesize(&SynthOptions { seed: 10, ..o }).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sines_span_eighty_percent_of_the_digital_range() {
        for t in GdfType::ALL.into_iter().filter(|t| *t != GdfType::Float128) {
            let f = synthesize(&SynthOptions {
                gdf_type: t,
                channels: 1,
                events: 0,
                ..Default::default()
            })
            .unwrap();
            let (dmin, dmax) = digital_range(t).unwrap();
            let v = f.signals.channels[0].samples.to_f64_vec();
            let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            let span = (hi - lo) / (dmax - dmin);
            // integer rounding may add one step at each end
            assert!(span > 0.75 && span <= 0.8 + 1.0 / (dmax - dmin) + 1e-9, "{t}: {span}");
            assert!(f.signals.channels[0].valid.iter().all(|&ok| ok));
        }
    }

    #[test]
    fn overflow_burst_is_invalid() {
        let f = synthesize(&SynthOptions {
            with_overflow: true,
            ..Default::default()
        })
        .unwrap();
        let bad = f.signals.channels[0].valid.iter().filter(|&&ok| !ok).count();
        assert_eq!(bad, OVERFLOW_BURST);
    }

    #[test]
    fn sparse_rows_and_first_event_position() {
        let f = synthesize(&SynthOptions {
            with_sparse: true,
            ..Default::default()
        })
        .unwrap();
        let t = f.events.as_ref().unwrap();
        assert_eq!(t.mode, EventMode::Mode3);
        assert!(t.events.iter().any(|e| e.typ == SPARSE_SAMPLE && e.chn == 5));
        let first = t.events.iter().find(|e| e.typ != SPARSE_SAMPLE).unwrap();
        assert!(first.pos >= 1 && first.pos < 256);
        assert!(gdf::file::validate(&f).is_empty());
    }

    #[test]
    fn rejected_combinations() {
        let bad = [
            SynthOptions {
                gdf_type: GdfType::Float128,
                ..Default::default()
            },
            SynthOptions {
                with_sparse: true,
                event_mode: Some(EventMode::Mode1),
                ..Default::default()
            },
            SynthOptions {
                unknown_nrec: true,
                ..Default::default()
            },
        ];
        for o in bad {
            assert!(synthesize(&o).is_err(), "{o:?}");
        }
    }
}
