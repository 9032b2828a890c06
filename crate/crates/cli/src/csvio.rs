//! CSV export and import.
//!
//! One row per sample of the fastest continuous channel. A slower channel's
//! global sample `k` sits in row `round(k * R / r)`, with `R` the fastest
//! rate and `r` its own; its other cells stay empty. Header cells read
//! `label [unit] @ rate Hz`. Empty cells of a channel's own rows are
//! invalid samples.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use gdf::data::{ChannelData, Samples, SignalBlock};
use gdf::header::{ChannelInfo, FixedHeader, RecordDuration};
use gdf::model::{Calibration, GdfType, UnitRegistry};
use gdf::GdfFile;

use crate::render::{event_rows, unit_text};

pub const TIME_HEADER: &str = "time [s]";
pub const EVENT_HEADER: [&str; 5] = ["pos", "typ", "chn", "dur", "description"];

/// Row of global sample `k` for a channel at `rate` when the fastest runs at `max_rate`.
fn row_of(k: usize, rate: f64, max_rate: f64) -> usize {
    (k as f64 * max_rate / rate).round() as usize
}

/// Writes the continuous channels. Returns notes about channels that were
/// left out.
pub fn export_csv<W: Write>(f: &GdfFile, scaled: bool, out: W) -> Result<Vec<String>> {
    let dur = f.header.record_duration;
    let mut notes = Vec::new();
    let mut cols = Vec::new();
    for (i, c) in f.channels.iter().enumerate() {
        if c.is_sparse() {
            notes.push(format!(
                "channel {} ({}) is sparse; its samples are in the event sidecar",
                i + 1,
                c.label
            ));
            continue;
        }
        let data = &f.signals.channels[i];
        let values: Vec<Option<f64>> = if scaled {
            data.physical(&c.cal)?.into_iter().map(|v| (!v.is_nan()).then_some(v)).collect()
        } else {
            data.samples.to_f64_vec().into_iter().map(Some).collect()
        };
        let unit = if scaled { unit_text(c.phys_dim, &c.phys_dim_text) } else { "raw".into() };
        cols.push((format!("{} [{}] @ {} Hz", c.label, unit, dur.rate_hz(c.samples_per_record)), c, values));
    }
    let max_spr = cols.iter().map(|(_, c, _)| c.samples_per_record).max().unwrap_or(0);
    let max_rate = dur.rate_hz(max_spr);
    let rows = f.signals.n_records * max_spr as usize;

    let mut grid: Vec<Vec<String>> = vec![vec![String::new(); cols.len() + 1]; rows];
    for (j, row) in grid.iter_mut().enumerate() {
        row[0] = format!("{}", j as f64 / max_rate);
    }
    for (ci, (_, c, values)) in cols.iter().enumerate() {
        let rate = dur.rate_hz(c.samples_per_record);
        for (k, v) in values.iter().enumerate() {
            if let Some(v) = v {
                grid[row_of(k, rate, max_rate)][ci + 1] = format!("{v}");
            }
        }
    }

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let header: Vec<&str> = std::iter::once(TIME_HEADER).chain(cols.iter().map(|(h, _, _)| h.as_str())).collect();
    w.write_record(&header)?;
    for row in grid {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(notes)
}

pub fn export_events_csv<W: Write>(f: &GdfFile, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(EVENT_HEADER)?;
    for row in event_rows(f) {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

struct Column {
    label: String,
    unit: String,
    rate: Option<f64>,
}

fn parse_column(cell: &str) -> Result<Column> {
    let (rest, rate) = match cell.rsplit_once(" @ ") {
        Some((rest, r)) => {
            let r = r.trim().strip_suffix("Hz").unwrap_or(r).trim();
            let rate: f64 = r.parse().with_context(|| format!("bad rate in column {cell:?}"))?;
            if !(rate.is_finite() && rate > 0.0) {
                bail!("rate in column {cell:?} must be positive");
            }
            (rest, Some(rate))
        }
        None => (cell, None),
    };
    let rest = rest.trim();
    let (label, unit) = match rest.strip_suffix(']').and_then(|r| r.rsplit_once(" [")) {
        Some((l, u)) => (l.trim(), u.trim()),
        None => (rest, ""),
    };
    Ok(Column {
        label: label.to_string(),
        unit: unit.to_string(),
        rate,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `n_rows / rate` seconds as a reduced fraction; rates are resolved to 1 mHz.
fn record_duration(n_rows: usize, rate: f64) -> Result<RecordDuration> {
    let (mut num, mut den) = if rate.fract() == 0.0 {
        (n_rows as u64, rate as u64)
    } else {
        (n_rows as u64 * 1000, (rate * 1000.0).round() as u64)
    };
    let g = gcd(num, den).max(1);
    num /= g;
    den /= g;
    match (u32::try_from(num), u32::try_from(den)) {
        (Ok(n), Ok(d)) if d > 0 => Ok(RecordDuration::new(n, d)),
        _ => bail!("record duration {n_rows}/{rate} s does not fit a 32-bit fraction"),
    }
}

/// Calibration and samples for one imported column. Missing values become
/// raw values outside the digital range.
fn quantize(values: &[Option<f64>], t: GdfType) -> Result<(Calibration, Samples)> {
    let present = values.iter().flatten();
    let (mut lo, mut hi) = present.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo > hi {
        (lo, hi) = (-1.0, 1.0);
    } else if lo == hi {
        (lo, hi) = (lo - 1.0, hi + 1.0);
    }
    if t.is_float() {
        if t == GdfType::Float128 {
            bail!("float128 columns cannot be written");
        }
        let raw: Vec<f64> = values.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        return Ok((Calibration::new(lo, hi, lo, hi), Samples::from_f64(t, &raw)));
    }
    // The type minimum stays free as the invalid marker.
    let (tmin, tmax) = t.range().expect("integer type");
    const EXACT: f64 = 9_007_199_254_740_992.0; // 2^53
    let (dmin, dmax) = ((tmin + 1.0).max(-EXACT), tmax.min(EXACT));
    let cal = Calibration::new(lo, hi, dmin, dmax);
    let raw: Vec<f64> = values
        .iter()
        .map(|v| match v {
            Some(p) => cal.unscale(*p).round().clamp(dmin, dmax),
            None => tmin,
        })
        .collect();
    Ok((cal, Samples::from_f64(t, &raw)))
}

/// Builds a one-record file from CSV text written by [`export_csv`] or by
/// hand. Rates default to the spacing of the time column.
pub fn import_csv<R: Read>(input: R, t: GdfType, units: &UnitRegistry) -> Result<GdfFile> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rd.headers()?.clone();
    let mut cells = headers.iter();
    match cells.next() {
        Some(h) if h.trim().starts_with("time") => {}
        _ => bail!("first column must be the time column {TIME_HEADER:?}"),
    }
    let cols: Vec<Column> = cells.map(parse_column).collect::<Result<_>>()?;
    if cols.is_empty() {
        bail!("no channel columns");
    }
    let mut times = Vec::new();
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    for (n, rec) in rd.records().enumerate() {
        let rec = rec?;
        if rec.len() != cols.len() + 1 {
            bail!("row {} has {} cells, expected {}", n + 2, rec.len(), cols.len() + 1);
        }
        let num = |s: &str| -> Result<Option<f64>> {
            let s = s.trim();
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| anyhow!("row {}: {s:?} is not a number", n + 2))
        };
        times.push(num(&rec[0])?);
        rows.push(rec.iter().skip(1).map(num).collect::<Result<_>>()?);
    }
    let n_rows = rows.len();
    if n_rows == 0 {
        bail!("no data rows");
    }
    let time_rate = match (times.first(), times.get(1)) {
        (Some(Some(a)), Some(Some(b))) if b > a => Some(1.0 / (b - a)),
        _ => None,
    };
    let rates: Vec<f64> = cols
        .iter()
        .map(|c| c.rate.or(time_rate).ok_or_else(|| anyhow!("column {:?} has no rate", c.label)))
        .collect::<Result<_>>()?;
    let max_rate = rates.iter().cloned().fold(0.0, f64::max);
    let duration = record_duration(n_rows, max_rate)?;

    let mut channels = Vec::new();
    let mut data = Vec::new();
    for (ci, (col, &rate)) in cols.iter().zip(&rates).enumerate() {
        let values: Vec<Option<f64>> = (0..)
            .map(|k| row_of(k, rate, max_rate))
            .take_while(|&r| r < n_rows)
            .map(|r| rows[r][ci])
            .collect();
        let (code, text) = match units.lookup(&col.unit) {
            Some(code) => (code, String::new()),
            None if col.unit.len() <= 6 => (gdf::model::PhysDimCode(0), col.unit.clone()),
            None => bail!("unknown unit {:?} in column {:?}", col.unit, col.label),
        };
        let (cal, samples) = quantize(&values, t)?;
        let mut ch = ChannelInfo::new(col.label.clone(), code, t, values.len() as u32, cal);
        ch.phys_dim_text = text;
        data.push(ChannelData::new(samples, &ch.cal));
        channels.push(ch);
    }
    let header = FixedHeader {
        record_duration: duration,
        ..Default::default()
    };
    let signals = SignalBlock {
        channels: data,
        n_records: 1,
    };
    Ok(GdfFile::new(header, channels, Vec::new(), signals, None))
}
