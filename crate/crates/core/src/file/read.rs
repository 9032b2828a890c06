use std::io::Read;

use super::validate::validate;
use super::write::encode_headers;
use super::GdfFile;
use crate::data::{decode_records, layout_from_channels};
use crate::error::{rules, Diagnostic, GdfError, Result, Section, Severity};
use crate::events::{parse_event_table, write_event_table, EventTable};
use crate::header::channel::CHANNEL_HEADER_LEN;
use crate::header::fixed::FIXED_HEADER_LEN;
use crate::header::{parse_channel_headers, parse_fixed_header, parse_tlv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadMode {
    /// Any error-severity finding fails the read.
    #[default]
    Strict,
    /// Recoverable errors become diagnostics and the readable part is returned.
    Lenient,
}

pub fn read_file<R: Read>(mut source: R, mode: ReadMode) -> Result<(GdfFile, Vec<Diagnostic>)> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    read_bytes(&buf, mode)
}

/// Parses a complete file image.
///
/// Errors that leave no usable model (bad version tag, truncated headers,
/// unknown data types) are returned directly in both modes.
pub fn read_bytes(data: &[u8], mode: ReadMode) -> Result<(GdfFile, Vec<Diagnostic>)> {
    let mut diags = Vec::new();
    if data.len() < FIXED_HEADER_LEN {
        return Err(GdfError::structural(
            rules::FILE_TRUNCATED,
            Section::FixedHeader,
            Some(0),
            format!("{} bytes is shorter than the 256-byte fixed header", data.len()),
        ));
    }
    let mut header = parse_fixed_header(&data[..FIXED_HEADER_LEN], &mut diags)?;
    let ns = header.ns as usize;
    let h2_end = FIXED_HEADER_LEN + CHANNEL_HEADER_LEN * ns;
    let hl = header.header_len() as usize;
    if data.len() < hl {
        return Err(GdfError::structural(
            rules::FILE_TRUNCATED,
            Section::ChannelHeader,
            Some(data.len() as u64),
            format!("header length is {hl} bytes, file has {}", data.len()),
        ));
    }
    let channels = parse_channel_headers(
        &data[FIXED_HEADER_LEN..h2_end],
        ns,
        header.version_minor(),
        FIXED_HEADER_LEN as u64,
        &mut diags,
    )?;
    let tlv = parse_tlv(&data[h2_end..hl], h2_end as u64, &mut diags).unwrap_or_else(|e| {
        diags.push(e.to_diagnostic());
        Vec::new()
    });

    let layout = layout_from_channels(&channels);
    let bpr = layout.bytes_per_record;
    let body = &data[hl..];
    let mut data_complete = true;
    let n_records = match header.n_records {
        -1 => {
            let (n, rem) = if bpr == 0 { (0, body.len()) } else { (body.len() / bpr, body.len() % bpr) };
            diags.push(Diagnostic::info(
                Section::Data,
                Some(hl as u64),
                rules::DATA_NREC_INFERRED,
                format!("record count unknown, {n} complete records inferred from the file size"),
            ));
            if rem > 0 {
                diags.push(Diagnostic::warning(
                    Section::Data,
                    Some((hl + n * bpr) as u64),
                    rules::DATA_PARTIAL_RECORD,
                    format!("{rem} bytes after the last complete record are ignored"),
                ));
            }
            n
        }
        n if n < -1 => {
            return Err(GdfError::structural(
                rules::HEADER_GEOMETRY,
                Section::FixedHeader,
                Some(236),
                format!("record count {n} is negative"),
            ))
        }
        n => {
            let n = n as usize;
            let need = n.checked_mul(bpr).filter(|&b| b <= body.len());
            if need.is_none() {
                let complete = if bpr == 0 { 0 } else { body.len() / bpr };
                diags.push(Diagnostic::error(
                    Section::Data,
                    Some(data.len() as u64),
                    rules::DATA_TRUNCATED,
                    format!("{n} records declared, data section holds {complete} complete records"),
                ));
                data_complete = false;
                header.n_records = complete as i64;
                complete
            } else {
                n
            }
        }
    };
    let data_end = hl + n_records * bpr;
    let signals = decode_records(&data[hl..data_end], &layout, n_records)?;

    let mut events: Option<EventTable> = None;
    let rest = &data[data_end..];
    if header.n_records >= 0 && data_complete && !rest.is_empty() {
        match parse_event_table(rest, data_end as u64) {
            Ok(t) => {
                let used = t.encoded_len();
                if rest.len() > used {
                    diags.push(Diagnostic::warning(
                        Section::Events,
                        Some((data_end + used) as u64),
                        rules::EVENT_TRAILING,
                        format!("{} bytes after the event table", rest.len() - used),
                    ));
                } else if write_event_table(&t).ok().as_deref() != Some(rest) {
                    diags.push(Diagnostic::info(
                        Section::Events,
                        Some(data_end as u64),
                        rules::EVENT_NON_CANONICAL,
                        "event table does not re-serialize to the same bytes",
                    ));
                }
                events = Some(t);
            }
            Err(e) => diags.push(e.to_diagnostic()),
        }
    }

    let file = GdfFile {
        header,
        channels,
        tlv,
        signals,
        events,
    };

    if data_complete && !diags.iter().any(|d| d.severity == Severity::Error) {
        match encode_headers(&file.header, &file.channels, &file.tlv) {
            Ok(bytes) if bytes == data[..hl] => {}
            Ok(bytes) => {
                let at = bytes.iter().zip(&data[..hl]).position(|(a, b)| a != b).unwrap_or(0);
                diags.push(Diagnostic::info(
                    Section::File,
                    Some(at as u64),
                    rules::HEADER_NON_CANONICAL,
                    format!("header re-serializes differently from byte {at}"),
                ));
            }
            Err(e) => diags.push(Diagnostic::info(
                Section::File,
                None,
                rules::HEADER_NON_CANONICAL,
                format!("header cannot be re-serialized: {e}"),
            )),
        }
    }

    for d in validate(&file) {
        if !diags.iter().any(|x| x.rule == d.rule && x.message == d.message) {
            diags.push(d);
        }
    }
    if mode == ReadMode::Strict && diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(GdfError::Invalid(diags));
    }
    Ok((file, diags))
}

