use super::GdfFile;
use crate::data::overflow_scan;
use crate::error::{rules, Diagnostic, Section};
use crate::events::check_events;
use crate::header::channel::{check_channel, field_offset, layout as ch_layout};
use crate::header::tlv::check_elements;
use crate::header::tlv_content_len;

/// Semantic checks of an in-memory file. Never fails; findings are returned.
pub fn validate(f: &GdfFile) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    let h = &f.header;
    let ns = f.channels.len();

    if h.ns as usize != ns {
        d.push(Diagnostic::error(
            Section::FixedHeader,
            Some(252),
            rules::HEADER_GEOMETRY,
            format!("header declares {} channels, {ns} present", h.ns),
        ));
    }
    let blocks = h.header_blocks as usize;
    if blocks < ns + 1 {
        d.push(Diagnostic::error(
            Section::FixedHeader,
            Some(184),
            rules::HEADER_BLOCKS,
            format!("header length of {blocks} blocks is less than NS+1 = {}", ns + 1),
        ));
    } else if blocks * 256 < 256 * (ns + 1) + tlv_content_len(&f.tlv) {
        d.push(Diagnostic::error(
            Section::FixedHeader,
            Some(184),
            rules::HEADER_BLOCKS,
            format!("header length of {blocks} blocks cannot hold the TLV elements"),
        ));
    }
    if h.n_records >= 0 && h.n_records as usize != f.signals.n_records {
        d.push(Diagnostic::error(
            Section::FixedHeader,
            Some(236),
            rules::HEADER_GEOMETRY,
            format!("header declares {} records, {} decoded", h.n_records, f.signals.n_records),
        ));
    }
    if h.record_duration.denominator == 0 {
        d.push(Diagnostic::warning(
            Section::FixedHeader,
            Some(244),
            rules::HEADER_DURATION,
            "record duration has a zero denominator",
        ));
    }

    for (i, ch) in f.channels.iter().enumerate() {
        check_channel(ch, i, 256 + field_offset(ch_layout::DIG_MIN, ns, i) as u64, &mut d);
    }
    check_elements(&f.tlv, ns, &mut d);

    for (i, (rep, ch)) in overflow_scan(&f.signals).iter().zip(&f.channels).enumerate() {
        if rep.n_invalid > 0 {
            d.push(Diagnostic::info(
                Section::Data,
                None,
                rules::DATA_SATURATION,
                format!(
                    "channel {} ({}): {} of {} samples outside [{}, {}] (saturation {:.4})",
                    i + 1,
                    ch.label,
                    rep.n_invalid,
                    rep.n_samples,
                    ch.cal.dig_min,
                    ch.cal.dig_max,
                    rep.saturation_ratio
                ),
            ));
        }
    }

    if let Some(ev) = &f.events {
        let base = f.event_table_position().ok();
        if h.n_records < 0 {
            d.push(Diagnostic::error(
                Section::Events,
                None,
                rules::EVENT_UNKNOWN_NREC,
                "event table present while the record count is unknown",
            ));
        }
        let samples = f
            .duration_seconds()
            .map(|s| s * ev.sample_rate as f64)
            .filter(|n| n.is_finite() && ev.sample_rate > 0.0);
        check_events(ev, &f.channels, samples, base, &mut d);
    }
    d
}
