//! Line-oriented key/value rendering of a parsed file.

use gdf::events::{extract_sparse_samples, EventMode, SPARSE_SAMPLE};
use gdf::header::{decode_tag_value, SensorInfo, TlvValue};
use gdf::model::{decode_physdim, GdfTime};
use gdf::{Diagnostic, GdfFile};
use serde_json::{json, Map, Value};

pub type Fields = Vec<(String, String)>;

pub fn time_text(t: GdfTime) -> String {
    if t.is_unset() {
        return "unset".into();
    }
    match t.to_datetime() {
        Some(dt) => dt.format("%Y-%m-%dT%H:%M:%S%.6f").to_string(),
        None => format!("0x{:016X}", t.0),
    }
}

fn ascii_or_hex(bytes: &[u8]) -> String {
    let end = bytes.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
    let body = &bytes[..end];
    if body.iter().all(|b| b.is_ascii_graphic() || *b == b' ') {
        String::from_utf8_lossy(body).into_owned()
    } else {
        body.iter().map(|b| format!("{b:02X}")).collect()
    }
}

fn known_or(v: u8, unit: &str) -> String {
    match v {
        0 => "unknown".into(),
        255 => format!("more than 254 {unit}"),
        v => format!("{v} {unit}"),
    }
}

fn vec3(v: &[f32; 3]) -> String {
    format!("{} {} {}", v[0], v[1], v[2])
}

pub fn unit_text(code: gdf::model::PhysDimCode, fallback: &str) -> String {
    match decode_physdim(code) {
        Ok(_) if code.is_unknown() && !fallback.is_empty() => fallback.to_string(),
        Ok(u) => u.display,
        Err(_) if !fallback.is_empty() => fallback.to_string(),
        Err(_) => "?".into(),
    }
}

fn tlv_fields(f: &GdfFile, out: &mut Fields) {
    for (i, e) in f.tlv.iter().enumerate() {
        let key = |k: &str| format!("tlv[{i}].{k}");
        out.push((key("tag"), e.tag.to_string()));
        match decode_tag_value(e, f.channels.len()) {
            Ok(TlvValue::EventDescriptions(list)) => {
                for (j, d) in list.iter().enumerate() {
                    out.push((key(&format!("code 0x{:04X}", j + 1)), d.clone()));
                }
            }
            Ok(TlvValue::Bci2000(s)) => out.push((key("bci2000"), s)),
            Ok(TlvValue::Manufacturer {
                manufacturer,
                model,
                version,
                serial,
            }) => {
                out.push((key("manufacturer"), manufacturer));
                out.push((key("model"), model));
                out.push((key("version"), version));
                out.push((key("serial"), serial));
            }
            Ok(TlvValue::SensorOrientation(rows)) => {
                for (j, r) in rows.iter().enumerate() {
                    out.push((key(&format!("orientation[{}]", j + 1)), vec3(r)));
                }
            }
            Ok(TlvValue::IpAddress(a)) => out.push((key("ip address"), a.to_string())),
            Ok(TlvValue::Technician(v)) => out.push((key("technician"), ascii_or_hex(&v))),
            Ok(TlvValue::Hospital(v)) => out.push((key("hospital"), ascii_or_hex(&v))),
            Ok(TlvValue::Snomed(v)) => out.push((key("snomed"), ascii_or_hex(&v))),
            Ok(TlvValue::Free(v)) => out.push((key("free text"), format!("{} bytes", v.len()))),
            Ok(TlvValue::Reserved { value, .. }) => out.push((key("reserved"), format!("{} bytes", value.len()))),
            Err(err) => out.push((key("undecodable"), err.to_string())),
        }
    }
}

fn sensor_text(s: &SensorInfo) -> String {
    match *s {
        SensorInfo::Impedance(z) if z.is_nan() => "impedance unknown".into(),
        SensorInfo::Impedance(z) => format!("impedance {z} Ohm"),
        SensorInfo::ProbeFrequency(hz) if hz.is_nan() => "probe frequency unknown".into(),
        SensorInfo::ProbeFrequency(hz) => format!("probe frequency {hz} Hz"),
        SensorInfo::Reserved(raw) if raw == [0; 20] => "none".into(),
        SensorInfo::Reserved(raw) => raw.iter().map(|b| format!("{b:02X}")).collect(),
    }
}

/// Every header field with its symbolic decoding, followed by the event
/// listing.
pub fn inspect_fields(f: &GdfFile) -> Fields {
    let h = &f.header;
    let p = &h.patient;
    let r = &h.recording;
    let mut out: Fields = Vec::new();
    let mut put = |k: &str, v: String| out.push((k.to_string(), v));

    put("version", h.version.clone());
    put("patient.id", p.id.render());
    put("patient.code", p.id.code.clone());
    put("patient.name", p.id.name.clone());
    put("patient.classification", p.id.classification.clone());
    put("patient.smoking", p.habits.smoking.to_string());
    put("patient.alcohol_abuse", p.habits.alcohol_abuse.to_string());
    put("patient.drug_abuse", p.habits.drug_abuse.to_string());
    put("patient.medication", p.habits.medication.to_string());
    put("patient.weight", known_or(p.weight_kg, "kg"));
    put("patient.height", known_or(p.height_cm, "cm"));
    put("patient.gender", p.physique.gender.to_string());
    put("patient.handedness", p.physique.handedness.to_string());
    put("patient.visual_impairment", p.physique.visual.to_string());
    put("patient.heart_impairment", p.physique.heart.to_string());
    put("patient.birthday", time_text(p.birthday));
    put("patient.icd", p.icd.clone());
    put(
        "patient.headsize_mm",
        format!("{} {} {}", p.headsize_mm[0], p.headsize_mm[1], p.headsize_mm[2]),
    );
    put("recording.id", r.id.clone());
    put(
        "recording.location",
        match &r.location {
            Some(l) => format!(
                "lat {:.6} deg, lon {:.6} deg, alt {:.2} m",
                l.latitude_deg(),
                l.longitude_deg(),
                l.altitude_m()
            ),
            None => "none".into(),
        },
    );
    put("recording.start", time_text(r.start_time));
    put("recording.equipment", ascii_or_hex(&r.equipment_provider.to_le_bytes()));
    put("recording.reference_electrode", vec3(&r.reference_electrode));
    put("recording.ground_electrode", vec3(&r.ground_electrode));
    put("header.blocks", h.header_blocks.to_string());
    put("header.length", format!("{} bytes", h.header_len()));
    put(
        "records.count",
        if h.n_records < 0 { "unknown (-1)".into() } else { h.n_records.to_string() },
    );
    put(
        "records.duration",
        format!(
            "{}/{} s",
            h.record_duration.numerator, h.record_duration.denominator
        ),
    );
    put("channels.count", h.ns.to_string());

    for (i, c) in f.channels.iter().enumerate() {
        let k = |s: &str| format!("channel[{}].{s}", i + 1);
        out.push((k("label"), c.label.clone()));
        out.push((k("transducer"), c.transducer.clone()));
        out.push((k("unit"), unit_text(c.phys_dim, &c.phys_dim_text)));
        out.push((k("unit_code"), c.phys_dim.0.to_string()));
        out.push((k("physical_range"), format!("{} .. {}", c.cal.phys_min, c.cal.phys_max)));
        out.push((k("digital_range"), format!("{} .. {}", c.cal.dig_min, c.cal.dig_max)));
        out.push((
            k("filters"),
            format!("lowpass {} Hz, highpass {} Hz, notch {} Hz", c.lowpass_hz, c.highpass_hz, c.notch_hz),
        ));
        out.push((k("samples_per_record"), c.samples_per_record.to_string()));
        out.push((
            k("rate"),
            if c.is_sparse() {
                "sparse".into()
            } else {
                format!("{} Hz", h.record_duration.rate_hz(c.samples_per_record))
            },
        ));
        out.push((k("type"), c.gdf_type.to_string()));
        out.push((k("position"), vec3(&c.position)));
        out.push((k("sensor"), sensor_text(&c.sensor)));
    }
    tlv_fields(f, &mut out);

    match &f.events {
        None => out.push(("events".into(), "none".into())),
        Some(t) => {
            out.push((
                "events.mode".into(),
                match t.mode {
                    EventMode::Mode1 => "1 (position, type)".into(),
                    EventMode::Mode3 => "3 (position, type, channel, duration)".into(),
                },
            ));
            out.push(("events.rate".into(), format!("{} Hz", t.sample_rate)));
            out.push(("events.count".into(), t.events.len().to_string()));
            for (i, row) in event_rows(f).into_iter().enumerate() {
                out.push((format!("event[{}]", i + 1), row.join(" ")));
            }
        }
    }
    out
}

pub fn fields_text(fields: &Fields) -> String {
    fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

pub fn fields_json(fields: &Fields) -> Value {
    let mut m = Map::new();
    for (k, v) in fields {
        m.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(m)
}

pub fn diagnostic_json(d: &Diagnostic) -> Value {
    json!({
        "severity": d.severity.to_string(),
        "rule": d.rule,
        "section": d.section.to_string(),
        "offset": d.offset,
        "message": d.message,
    })
}

/// Event rows as {pos, typ, chn, dur, description}; mode-1 rows leave
/// channel and duration empty. Sparse samples carry their scaled value.
pub fn event_rows(f: &GdfFile) -> Vec<[String; 5]> {
    let Some(t) = &f.events else { return Vec::new() };
    let registry = f.event_registry();
    let scaled: Vec<Option<f64>> = {
        let mut v = vec![None; t.events.len()];
        if let Ok((series, _)) = extract_sparse_samples(t, &f.channels) {
            for s in series {
                for x in s.samples {
                    v[x.index] = Some(x.physical);
                }
            }
        }
        v
    };
    t.events
        .iter()
        .zip(scaled)
        .map(|(e, value)| {
            let mut desc = registry.describe(e.typ);
            if let (true, Some(v)) = (e.typ == SPARSE_SAMPLE, value) {
                let c = &f.channels[e.chn as usize - 1];
                desc = format!("{desc}: {v} {}", unit_text(c.phys_dim, &c.phys_dim_text));
            }
            let (chn, dur) = match t.mode {
                EventMode::Mode1 => (String::new(), String::new()),
                EventMode::Mode3 => (e.chn.to_string(), e.dur.to_string()),
            };
            [e.pos.to_string(), format!("0x{:04X}", e.typ), chn, dur, desc]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synthesize, SynthOptions};

    fn value<'a>(fields: &'a Fields, key: &str) -> &'a str {
        &fields.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("{key}")).1
    }

    #[test]
    fn microvolt_and_manufacturer() {
        let f = synthesize(&SynthOptions {
            with_tlv: true,
            ..Default::default()
        })
        .unwrap();
        let fields = inspect_fields(&f);
        assert_eq!(value(&fields, "channel[1].unit"), "uV");
        assert_eq!(value(&fields, "channel[1].unit_code"), "4275");
        assert_eq!(value(&fields, "tlv[1].manufacturer"), "gdf-cli");
        assert_eq!(value(&fields, "tlv[1].serial"), "0");
        assert_eq!(value(&fields, "tlv[2].ip address"), "192.0.2.1");
        assert_eq!(value(&fields, "recording.equipment"), "SYNTH");
        assert!(value(&fields, "recording.start").starts_with("2024-"));
    }

    #[test]
    fn trial_description() {
        let mut f = synthesize(&SynthOptions {
            channels: 1,
            events: 0,
            ..Default::default()
        })
        .unwrap();
        let mut t = gdf::events::EventTable::new(EventMode::Mode1, 256.0);
        t.events.push(gdf::events::Event::new(5, 0x0300));
        f.events = Some(t);
        let rows = event_rows(&f);
        assert_eq!(rows[0][..2], ["5".to_string(), "0x0300".to_string()]);
        assert_eq!(rows[0][4], "Trigger, start of Trial (unspecific)");
    }

    #[test]
    fn sparse_rows_show_values() {
        let f = synthesize(&SynthOptions {
            with_sparse: true,
            ..Default::default()
        })
        .unwrap();
        let rows = event_rows(&f);
        let s = rows.iter().find(|r| r[1] == "0x7FFF").unwrap();
        assert!(s[4].starts_with("non-equidistant sampled value: ") && s[4].ends_with(" mmHg"), "{}", s[4]);
    }
}
