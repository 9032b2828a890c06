//! Subcommand implementations. Each returns the process exit code.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use gdf::error::max_severity;
use gdf::file::{anonymize, encode_file, BirthdayPolicy};
use gdf::model::UnitRegistry;
use gdf::{read_bytes, Diagnostic, GdfError, GdfFile, Severity};
use serde_json::json;

use crate::args::{Cli, Command, Format, GlobalOpts, SynthArgs};
use crate::csvio::{export_csv, export_events_csv, import_csv};
use crate::render::{diagnostic_json, fields_json, fields_text, inspect_fields};
use crate::synth::{synthesize, SynthOptions};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_WARNINGS: i32 = 1;
pub const EXIT_ERRORS: i32 = 2;

pub fn exit_code(diags: &[Diagnostic]) -> i32 {
    match max_severity(diags) {
        Some(Severity::Error) => EXIT_ERRORS,
        Some(Severity::Warning) => EXIT_WARNINGS,
        _ => EXIT_CLEAN,
    }
}

/// Diagnostics carried by a library error; other errors map to one
/// `file.unreadable` finding.
fn error_diagnostics(e: &GdfError) -> Vec<Diagnostic> {
    match e {
        GdfError::Invalid(diags) => diags.clone(),
        other => vec![other.to_diagnostic()],
    }
}

fn load(path: &Path, g: &GlobalOpts) -> std::result::Result<(GdfFile, Vec<Diagnostic>), GdfError> {
    let bytes = fs::read(path)?;
    read_bytes(&bytes, g.read_mode())
}

/// Runs one command, reporting failures on `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let g = &cli.global;
    let result = match &cli.command {
        Command::Inspect { path } => inspect(path, g, out, err),
        Command::Validate { path } => validate(path, g, out),
        Command::Convert {
            input,
            output,
            gdf_type,
        } => convert(input, output, *gdf_type, g, err),
        Command::Events { path, output } => events(path, output.as_deref(), g, out, err),
        Command::Synthesize(a) => synthesize_cmd(a),
        Command::Anonymize {
            input,
            output,
            birthday_offset,
        } => anonymize_cmd(input, output, *birthday_offset, g, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            match e.downcast_ref::<GdfError>() {
                Some(ge) => {
                    for d in error_diagnostics(ge) {
                        let _ = writeln!(err, "{d}");
                    }
                }
                None => {
                    let _ = writeln!(err, "error: {e:#}");
                }
            }
            EXIT_ERRORS
        }
    }
}

fn report(diags: &[Diagnostic], err: &mut dyn Write) -> Result<()> {
    for d in diags {
        writeln!(err, "{d}")?;
    }
    Ok(())
}

fn inspect(path: &Path, g: &GlobalOpts, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (f, diags) = load(path, g)?;
    let fields = inspect_fields(&f);
    match g.format {
        Format::Text => out.write_all(fields_text(&fields).as_bytes())?,
        Format::Machine => writeln!(out, "{}", fields_json(&fields))?,
    }
    report(&diags, err)?;
    Ok(if exit_code(&diags) == EXIT_ERRORS { EXIT_ERRORS } else { EXIT_CLEAN })
}

fn validate(path: &Path, g: &GlobalOpts, out: &mut dyn Write) -> Result<i32> {
    let diags = match load(path, g) {
        Ok((_, diags)) => diags,
        Err(e) => error_diagnostics(&e),
    };
    let code = exit_code(&diags);
    match g.format {
        Format::Text => {
            for d in &diags {
                writeln!(out, "{d}")?;
            }
        }
        Format::Machine => {
            let list: Vec<_> = diags.iter().map(diagnostic_json).collect();
            writeln!(out, "{}", json!({ "exit": code, "diagnostics": list }))?;
        }
    }
    Ok(code)
}

fn extension(p: &Path) -> String {
    p.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

/// `<stem>.events.csv` next to `csv`.
pub fn sidecar_path(csv: &Path) -> std::path::PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    csv.with_file_name(format!("{stem}.events.csv"))
}

fn structured_text(f: &GdfFile, scaled: bool, format: Format) -> Result<String> {
    let mut fields = inspect_fields(f);
    for (i, c) in f.channels.iter().enumerate().filter(|(_, c)| !c.is_sparse()) {
        let data = &f.signals.channels[i];
        let values = if scaled { data.physical(&c.cal)? } else { data.samples.to_f64_vec() };
        let spr = c.samples_per_record as usize;
        for (r, chunk) in values.chunks(spr).enumerate() {
            let line: Vec<String> = chunk
                .iter()
                .map(|v| if v.is_nan() { "invalid".to_string() } else { v.to_string() })
                .collect();
            fields.push((format!("data.channel[{}].record[{}]", i + 1, r + 1), line.join(" ")));
        }
    }
    Ok(match format {
        Format::Text => fields_text(&fields),
        Format::Machine => format!("{}\n", fields_json(&fields)),
    })
}

fn convert(input: &Path, output: &Path, t: gdf::model::GdfType, g: &GlobalOpts, err: &mut dyn Write) -> Result<i32> {
    let (src, dst) = (extension(input), extension(output));
    if src == "csv" {
        if dst != "gdf" {
            bail!("csv input converts only to .gdf, not .{dst}");
        }
        let f = import_csv(File::open(input)?, t, &UnitRegistry::builtin())?;
        let mut w = create(output)?;
        gdf::write_file(&f, &mut w)?;
        w.flush()?;
        return Ok(EXIT_CLEAN);
    }
    let (f, diags) = load(input, g)?;
    report(&diags, err)?;
    match dst.as_str() {
        "csv" => {
            let mut w = create(output)?;
            for note in export_csv(&f, g.scaled(), &mut w)? {
                writeln!(err, "note: {note}")?;
            }
            w.flush()?;
            if f.events.is_some() {
                let mut s = create(&sidecar_path(output))?;
                export_events_csv(&f, &mut s)?;
                s.flush()?;
            }
        }
        "txt" => fs::write(output, structured_text(&f, g.scaled(), g.format)?)?,
        "json" => fs::write(output, structured_text(&f, g.scaled(), Format::Machine)?)?,
        "gdf" => fs::write(output, encode_file(&f)?)?,
        other => bail!("cannot convert to .{other}; use .csv, .txt, .json or .gdf"),
    }
    Ok(EXIT_CLEAN)
}

fn events(path: &Path, output: Option<&Path>, g: &GlobalOpts, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (f, diags) = load(path, g)?;
    report(&diags, err)?;
    if f.events.is_none() {
        writeln!(err, "note: file has no event table")?;
    }
    match output {
        Some(p) => {
            let mut w = create(p)?;
            export_events_csv(&f, &mut w)?;
            w.flush()?;
        }
        None => export_events_csv(&f, out)?,
    }
    Ok(EXIT_CLEAN)
}

fn synthesize_cmd(a: &SynthArgs) -> Result<i32> {
    let o = SynthOptions {
        channels: a.channels,
        gdf_type: a.gdf_type,
        spr: a.spr,
        records: a.records,
        events: a.events,
        event_mode: a.event_mode,
        seed: a.seed,
        with_overflow: a.with_overflow,
        with_sparse: a.with_sparse,
        with_tlv: a.with_tlv,
        unknown_nrec: a.unknown_nrec,
    };
    let f = synthesize(&o)?;
    fs::write(&a.output, encode_file(&f)?).with_context(|| format!("cannot write {}", a.output.display()))?;
    Ok(EXIT_CLEAN)
}

fn anonymize_cmd(input: &Path, output: &Path, offset: Option<i64>, g: &GlobalOpts, err: &mut dyn Write) -> Result<i32> {
    let (f, diags) = load(input, g)?;
    report(&diags, err)?;
    let policy = offset.map_or(BirthdayPolicy::Zero, BirthdayPolicy::Shift);
    let anon = anonymize(&f, policy)?;
    fs::write(output, encode_file(&anon)?)?;
    Ok(EXIT_CLEAN)
}
