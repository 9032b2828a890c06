use std::fmt;
use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GdfError>;

#[derive(Debug, Error)]
pub enum GdfError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("not a GDF file (version tag {0:?})")]
    UnsupportedFormat(String),

    #[error("unsupported GDF version {0:?}, only 2.x is handled")]
    UnsupportedVersion(String),

    #[error("unsupported data type code {0}")]
    UnsupportedType(u32),

    #[error("{what}: {value} is outside the representable domain")]
    Domain { what: &'static str, value: String },

    #[error("text field {field} needs {len} bytes but its slot holds {capacity}")]
    TextOverflow {
        field: &'static str,
        len: usize,
        capacity: usize,
    },

    #[error("[{rule}] {message}")]
    Structural {
        rule: &'static str,
        section: Section,
        offset: Option<u64>,
        message: String,
    },

    #[error("degenerate calibration: digital minimum equals digital maximum ({0})")]
    DegenerateCalibration(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("stream writer already finalized")]
    Finalized,

    #[error("event table requires a seekable sink to patch the record count")]
    UnseekableSink,

    #[error("file failed strict validation with {} error(s); first: {}", .0.iter().filter(|d| d.severity == Severity::Error).count(), first_error(.0))]
    Invalid(Vec<Diagnostic>),
}

fn first_error(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .find(|d| d.severity == Severity::Error)
        .map(|d| d.to_string())
        .unwrap_or_default()
}

impl GdfError {
    pub(crate) fn structural(
        rule: &'static str,
        section: Section,
        offset: Option<u64>,
        message: impl Into<String>,
    ) -> Self {
        GdfError::Structural {
            rule,
            section,
            offset,
            message: message.into(),
        }
    }

    /// Converts a recoverable error into the diagnostic a lenient reader records.
    pub fn to_diagnostic(&self) -> Diagnostic {
        match self {
            GdfError::Structural {
                rule,
                section,
                offset,
                message,
            } => Diagnostic {
                severity: Severity::Error,
                section: *section,
                offset: *offset,
                rule,
                message: message.clone(),
            },
            other => Diagnostic {
                severity: Severity::Error,
                section: Section::File,
                offset: None,
                rule: rules::FILE_UNREADABLE,
                message: other.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// File section a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    File,
    FixedHeader,
    ChannelHeader,
    Tlv,
    Data,
    Events,
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Section::File => "file",
            Section::FixedHeader => "header1",
            Section::ChannelHeader => "header2",
            Section::Tlv => "header3",
            Section::Data => "data",
            Section::Events => "events",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub section: Section,
    /// Absolute byte offset in the file, when the finding has one.
    pub offset: Option<u64>,
    pub rule: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        section: Section,
        offset: Option<u64>,
        rule: &'static str,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            section,
            offset,
            rule,
            message: message.into(),
        }
    }

    pub fn error(section: Section, offset: Option<u64>, rule: &'static str, msg: impl Into<String>) -> Self {
        Self::new(Severity::Error, section, offset, rule, msg)
    }

    pub fn warning(section: Section, offset: Option<u64>, rule: &'static str, msg: impl Into<String>) -> Self {
        Self::new(Severity::Warning, section, offset, rule, msg)
    }

    pub fn info(section: Section, offset: Option<u64>, rule: &'static str, msg: impl Into<String>) -> Self {
        Self::new(Severity::Info, section, offset, rule, msg)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.offset {
            Some(off) => write!(
                f,
                "{} {} {}@{} {}",
                self.severity, self.rule, self.section, off, self.message
            ),
            None => write!(
                f,
                "{} {} {} {}",
                self.severity, self.rule, self.section, self.message
            ),
        }
    }
}

/// Highest severity in a diagnostic list, `None` when empty.
pub fn max_severity(diags: &[Diagnostic]) -> Option<Severity> {
    diags.iter().map(|d| d.severity).max()
}

/// Stable rule identifiers attached to every [`Diagnostic`].
pub mod rules {
    /// The file could not be parsed at all.
    pub const FILE_UNREADABLE: &str = "file.unreadable";
    /// Fewer bytes than the fixed and variable headers require.
    pub const FILE_TRUNCATED: &str = "file.truncated";
    /// Header length in blocks is smaller than NS+1.
    pub const HEADER_BLOCKS: &str = "header.blocks";
    /// Upper 16 bits of the channel count are not zero.
    pub const HEADER_NS_RESERVED: &str = "header.ns-reserved";
    /// Re-serializing the parsed header does not reproduce the input bytes.
    pub const HEADER_NON_CANONICAL: &str = "header.non-canonical";
    /// A two-bit demographic field holds the reserved pattern 0b11.
    pub const HEADER_DEMOGRAPHICS: &str = "header.demographics-reserved";
    /// Channel count, header length or record count disagree with the content.
    pub const HEADER_GEOMETRY: &str = "header.geometry";
    /// Record duration has a zero denominator.
    pub const HEADER_DURATION: &str = "header.duration";
    /// Data type code not in the type table.
    pub const CHANNEL_TYPE: &str = "channel.type";
    /// Unknown physical dimension prefix.
    pub const CHANNEL_UNIT_PREFIX: &str = "channel.unit-prefix";
    /// Digital bound exceeds the range of the channel data type.
    pub const CHANNEL_DIG_RANGE: &str = "channel.dig-range";
    /// Digital minimum greater than digital maximum.
    pub const CHANNEL_DIG_ORDER: &str = "channel.dig-order";
    /// Digital minimum equals digital maximum on a sampled channel.
    pub const CHANNEL_DIG_DEGENERATE: &str = "channel.dig-degenerate";
    /// Sparse channel whose data type is wider than 32 bits.
    pub const CHANNEL_SPARSE_TYPE: &str = "channel.sparse-type";
    /// Declared TLV length runs past the end of header 3.
    pub const TLV_LENGTH_OVERRUN: &str = "tlv.length-overrun";
    /// Tag occurs more than once.
    pub const TLV_DUPLICATE: &str = "tlv.duplicate";
    /// Value length does not match what the tag requires.
    pub const TLV_TAG_LENGTH: &str = "tlv.tag-length";
    /// Value content does not match the tag layout.
    pub const TLV_TAG_FORMAT: &str = "tlv.tag-format";
    /// Manufacturer block longer than 128 bytes.
    pub const TLV_MANUFACTURER_SIZE: &str = "tlv.manufacturer-size";
    /// Tag from the reserved range 9..=254.
    pub const TLV_RESERVED_TAG: &str = "tlv.reserved-tag";
    /// Non-zero bytes after the TLV terminator.
    pub const TLV_PADDING: &str = "tlv.padding";
    /// Data section shorter than the declared record count.
    pub const DATA_TRUNCATED: &str = "data.truncated";
    /// Record count inferred from the file size (NRec = -1).
    pub const DATA_NREC_INFERRED: &str = "data.nrec-inferred";
    /// Data section ends with a partial record.
    pub const DATA_PARTIAL_RECORD: &str = "data.partial-record";
    /// Samples outside [DigMin, DigMax] were found.
    pub const DATA_SATURATION: &str = "data.saturation";
    /// Event table shorter than its declared size.
    pub const EVENT_TRUNCATED: &str = "event.truncated";
    /// Event table mode other than 1 or 3.
    pub const EVENT_MODE: &str = "event.mode";
    /// Event position 0; positions are one-based.
    pub const EVENT_POS_ZERO: &str = "event.pos-zero";
    /// Event position beyond the recording length.
    pub const EVENT_POS_RANGE: &str = "event.pos-range";
    /// Event channel number larger than NS.
    pub const EVENT_CHANNEL: &str = "event.channel";
    /// Sparse-sample event (0x7FFF) not pointing at a sparse channel.
    pub const EVENT_SPARSE_REF: &str = "event.sparse-ref";
    /// Sparse-sample event in a mode-1 table.
    pub const EVENT_SPARSE_MODE: &str = "event.sparse-mode1";
    /// End marker (bit 15) without a matching start.
    pub const EVENT_UNMATCHED_END: &str = "event.unmatched-end";
    /// Start marker without a matching end.
    pub const EVENT_OPEN_SPAN: &str = "event.open-span";
    /// Bytes after the event table.
    pub const EVENT_TRAILING: &str = "event.trailing";
    /// Event table present while the record count is unknown.
    pub const EVENT_UNKNOWN_NREC: &str = "event.unknown-nrec";
    /// Event table bytes do not re-serialize identically.
    pub const EVENT_NON_CANONICAL: &str = "event.non-canonical";
}
