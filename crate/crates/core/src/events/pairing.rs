use std::collections::HashMap;

use super::{Event, EventMode, EventTable, END_FLAG, SPARSE_SAMPLE};
use crate::error::{rules, Diagnostic, GdfError, Result, Section};

/// A start event and, when found, its matching end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub typ: u16,
    pub start: u32,
    pub end: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Pairing {
    /// Spans in order of their start event.
    pub spans: Vec<Span>,
    /// End events with no open start of the same code.
    pub orphan_ends: Vec<Event>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Matches each end event (bit 15 set) with the most recent open start of
/// the same code, scanning in position order.
pub fn pair_mode1_events(t: &EventTable) -> Result<Pairing> {
    if t.mode != EventMode::Mode1 {
        return Err(GdfError::InvalidArgument("span pairing needs a mode-1 table".into()));
    }
    let mut order: Vec<usize> = (0..t.events.len()).collect();
    order.sort_by_key(|&i| t.events[i].pos);

    let mut spans: Vec<Span> = Vec::new();
    let mut open: HashMap<u16, Vec<usize>> = HashMap::new();
    let mut out = Pairing::default();
    for i in order {
        let e = t.events[i];
        if e.is_end() {
            let code = e.typ & !END_FLAG;
            match open.get_mut(&code).and_then(|s| s.pop()) {
                Some(k) => spans[k].end = Some(e.pos),
                None => {
                    out.diagnostics.push(Diagnostic::warning(
                        Section::Events,
                        None,
                        rules::EVENT_UNMATCHED_END,
                        format!("end of 0x{code:04X} at {} has no open start", e.pos),
                    ));
                    out.orphan_ends.push(e);
                }
            }
        } else {
            open.entry(e.typ).or_default().push(spans.len());
            spans.push(Span {
                typ: e.typ,
                start: e.pos,
                end: None,
            });
        }
    }
    for s in spans.iter().filter(|s| s.end.is_none()) {
        out.diagnostics.push(Diagnostic::info(
            Section::Events,
            None,
            rules::EVENT_OPEN_SPAN,
            format!("0x{:04X} at {} is never closed", s.typ, s.start),
        ));
    }
    out.spans = spans;
    Ok(out)
}

/// Inverse of [`pair_mode1_events`] up to event order: rows sorted by
/// position, ties keep span order with starts before ends.
pub fn flatten_spans(p: &Pairing) -> Vec<Event> {
    let mut rows = Vec::with_capacity(2 * p.spans.len() + p.orphan_ends.len());
    for s in &p.spans {
        rows.push(Event::new(s.start, s.typ));
        if let Some(end) = s.end {
            rows.push(Event::new(end, s.typ | END_FLAG));
        }
    }
    rows.extend_from_slice(&p.orphan_ends);
    rows.sort_by_key(|e| e.pos);
    rows
}

/// Converts between mode 1 (start/end rows) and mode 3 (rows with a
/// duration). Mode 3 to 1 drops channel numbers.
pub fn convert_mode(t: &EventTable, target: EventMode) -> Result<EventTable> {
    if t.mode == target {
        return Err(GdfError::InvalidArgument(format!("table is already mode {target}")));
    }
    let mut events = match target {
        EventMode::Mode3 => {
            let p = pair_mode1_events(t)?;
            let mut rows: Vec<Event> = p
                .spans
                .iter()
                .map(|s| Event::with_channel(s.start, s.typ, 0, s.end.map_or(0, |e| e - s.start)))
                .collect();
            rows.extend_from_slice(&p.orphan_ends);
            rows
        }
        EventMode::Mode1 => {
            let mut rows = Vec::with_capacity(t.events.len() * 2);
            for e in &t.events {
                if e.typ == SPARSE_SAMPLE {
                    return Err(GdfError::InvalidArgument(format!(
                        "sparse-sample event at {} has no mode-1 form",
                        e.pos
                    )));
                }
                rows.push(Event::new(e.pos, e.typ));
                if e.dur > 0 {
                    let end = e.pos.checked_add(e.dur).ok_or_else(|| GdfError::Domain {
                        what: "event end position",
                        value: format!("{} + {}", e.pos, e.dur),
                    })?;
                    rows.push(Event::new(end, e.typ | END_FLAG));
                }
            }
            rows
        }
    };
    events.sort_by_key(|e| e.pos);
    Ok(EventTable {
        mode: target,
        sample_rate: t.sample_rate,
        events,
    })
}
