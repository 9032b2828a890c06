use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdf::events::EventMode;
use gdf::model::GdfType;
use gdf::ReadMode;

#[derive(Debug, Parser)]
#[command(name = "gdf", version, about = "Inspect, validate, convert and synthesize GDF 2.x files")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    /// `key: value` lines
    #[default]
    Text,
    /// JSON
    Machine,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Fail on any error-severity finding (default)
    #[arg(long, global = true, overrides_with = "lenient")]
    pub strict: bool,
    /// Recover what can be read and report the rest
    #[arg(long, global = true, overrides_with = "strict")]
    pub lenient: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Export physical values (default)
    #[arg(long, global = true, overrides_with = "raw")]
    pub scaled: bool,
    /// Export raw digital values
    #[arg(long, global = true, overrides_with = "scaled")]
    pub raw: bool,
}

impl GlobalOpts {
    pub fn read_mode(&self) -> ReadMode {
        if self.lenient {
            ReadMode::Lenient
        } else {
            ReadMode::Strict
        }
    }

    pub fn scaled(&self) -> bool {
        !self.raw
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every header field, TLV element and event
    Inspect { path: PathBuf },
    /// List diagnostics; exit 0 clean, 1 warnings, 2 errors
    Validate { path: PathBuf },
    /// Convert by extension: gdf to csv/txt/json/gdf, csv to gdf
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// Sample type for csv to gdf
        #[arg(long = "type", value_parser = parse_type, default_value = "float64")]
        gdf_type: GdfType,
    },
    /// Write the event table as CSV
    Events {
        path: PathBuf,
        /// Destination; standard output when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a deterministic test recording
    Synthesize(SynthArgs),
    /// Strip identifying fields
    Anonymize {
        input: PathBuf,
        output: PathBuf,
        /// Shift the birthday by up to 365 days instead of clearing it
        #[arg(long, allow_negative_numbers = true)]
        birthday_offset: Option<i64>,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub output: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub channels: usize,
    #[arg(long = "type", value_parser = parse_type, default_value = "int16")]
    pub gdf_type: GdfType,
    #[arg(long, default_value_t = 256)]
    pub spr: u32,
    #[arg(long, default_value_t = 10)]
    pub records: usize,
    /// Number of event spans
    #[arg(long, default_value_t = 8)]
    pub events: usize,
    #[arg(long, value_parser = parse_mode)]
    pub event_mode: Option<EventMode>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write a run of samples just above the digital maximum
    #[arg(long)]
    pub with_overflow: bool,
    /// Add a sparse channel carried by 0x7FFF events
    #[arg(long)]
    pub with_sparse: bool,
    /// Add event descriptions, manufacturer and IP address elements
    #[arg(long)]
    pub with_tlv: bool,
    /// Store the record count as -1
    #[arg(long)]
    pub unknown_nrec: bool,
}

pub fn parse_type(s: &str) -> Result<GdfType, String> {
    GdfType::ALL
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| format!("unknown type {s:?}; one of {}", GdfType::ALL.map(|t| t.name()).join(", ")))
}

fn parse_mode(s: &str) -> Result<EventMode, String> {
    match s {
        "1" => Ok(EventMode::Mode1),
        "3" => Ok(EventMode::Mode3),
        _ => Err("event mode is 1 or 3".into()),
    }
}
