//! Physical dimension codes: a base unit in the upper 11 bits and a decimal
//! prefix offset in the lower 5 bits.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{GdfError, Result};

pub const BASE_MASK: u16 = 0xFFE0;
pub const PREFIX_MASK: u16 = 0x001F;

pub const UNKNOWN: u16 = 0;
pub const DIMENSIONLESS: u16 = 512;
pub const PERCENT: u16 = 544;
pub const DEGREE: u16 = 736;
pub const RADIAN: u16 = 768;
pub const HERTZ: u16 = 2496;
pub const LITER_PER_MIN_M2: u16 = 2848;
pub const LITER_PER_MIN: u16 = 3072;
pub const MMHG: u16 = 3872;
pub const HYDRAULIC_IMPEDANCE: u16 = 4128;
pub const VOLT: u16 = 4256;
pub const OHM: u16 = 4288;
pub const KELVIN: u16 = 4384;
pub const VASCULAR_RESISTANCE_INDEX: u16 = 6016;
pub const CELSIUS: u16 = 6048;

/// Built-in base units: (code, symbol, description).
pub const BASE_UNITS: &[(u16, &str, &str)] = &[
    (UNKNOWN, "unknown", "Unknown/undefined"),
    (DIMENSIONLESS, "-", "Dimensionless"),
    (PERCENT, "%", "Per cent"),
    (DEGREE, "degree", ""),
    (RADIAN, "rad", ""),
    (HERTZ, "Hz", ""),
    (MMHG, "mmHg", "Blood pressure"),
    (VOLT, "V", "Voltage"),
    (OHM, "Ohm", "Resistance, impedance"),
    (KELVIN, "K", "Temperature in Kelvin"),
    (CELSIUS, "degC", "Temperature in degree Celsius"),
    (LITER_PER_MIN, "l/min", "liter per minute"),
    (LITER_PER_MIN_M2, "l/(min m2)", "liter per minute square meter"),
    (HYDRAULIC_IMPEDANCE, "dyn s/cm5", "hydraulic impedance"),
    (
        VASCULAR_RESISTANCE_INDEX,
        "dyn s/m2 cm5",
        "Pulmonary/Systemic Vascular Resistance Index",
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecimalPrefix {
    Yotta,
    Zetta,
    Exa,
    Peta,
    Tera,
    Giga,
    Mega,
    Kilo,
    Hecto,
    Deca,
    None,
    Deci,
    Centi,
    Milli,
    Micro,
    Nano,
    Pico,
    Femto,
    Atto,
    Zepto,
    Yocto,
}

impl DecimalPrefix {
    pub const ALL: [DecimalPrefix; 21] = [
        DecimalPrefix::Yotta,
        DecimalPrefix::Zetta,
        DecimalPrefix::Exa,
        DecimalPrefix::Peta,
        DecimalPrefix::Tera,
        DecimalPrefix::Giga,
        DecimalPrefix::Mega,
        DecimalPrefix::Kilo,
        DecimalPrefix::Hecto,
        DecimalPrefix::Deca,
        DecimalPrefix::None,
        DecimalPrefix::Deci,
        DecimalPrefix::Centi,
        DecimalPrefix::Milli,
        DecimalPrefix::Micro,
        DecimalPrefix::Nano,
        DecimalPrefix::Pico,
        DecimalPrefix::Femto,
        DecimalPrefix::Atto,
        DecimalPrefix::Zepto,
        DecimalPrefix::Yocto,
    ];

    /// (name, symbol, power of ten, code offset)
    const fn row(self) -> (&'static str, &'static str, i32, u16) {
        match self {
            DecimalPrefix::Yotta => ("yotta", "Y", 24, 10),
            DecimalPrefix::Zetta => ("zetta", "Z", 21, 9),
            DecimalPrefix::Exa => ("exa", "E", 18, 8),
            DecimalPrefix::Peta => ("peta", "P", 15, 7),
            DecimalPrefix::Tera => ("tera", "T", 12, 6),
            DecimalPrefix::Giga => ("giga", "G", 9, 5),
            DecimalPrefix::Mega => ("mega", "M", 6, 4),
            DecimalPrefix::Kilo => ("kilo", "k", 3, 3),
            DecimalPrefix::Hecto => ("hecto", "h", 2, 2),
            DecimalPrefix::Deca => ("deca", "da", 1, 1),
            DecimalPrefix::None => ("none", "", 0, 0),
            DecimalPrefix::Deci => ("deci", "d", -1, 16),
            DecimalPrefix::Centi => ("centi", "c", -2, 17),
            DecimalPrefix::Milli => ("milli", "m", -3, 18),
            DecimalPrefix::Micro => ("micro", "u", -6, 19),
            DecimalPrefix::Nano => ("nano", "n", -9, 20),
            DecimalPrefix::Pico => ("pico", "p", -12, 21),
            DecimalPrefix::Femto => ("femto", "f", -15, 22),
            DecimalPrefix::Atto => ("atto", "a", -18, 23),
            DecimalPrefix::Zepto => ("zepto", "z", -21, 24),
            DecimalPrefix::Yocto => ("yocto", "y", -24, 25),
        }
    }

    pub fn name(self) -> &'static str {
        self.row().0
    }

    pub fn symbol(self) -> &'static str {
        self.row().1
    }

    pub fn exponent(self) -> i32 {
        self.row().2
    }

    pub fn magnitude(self) -> f64 {
        10f64.powi(self.exponent())
    }

    pub fn offset(self) -> u16 {
        self.row().3
    }

    pub fn from_offset(offset: u16) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.offset() == offset)
    }

    /// Accepts the prefix name (`"micro"`), its symbol (`"u"`, `"µ"`), or
    /// `""`/`"none"` for no prefix.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim();
        if lower.is_empty() {
            return Ok(DecimalPrefix::None);
        }
        if lower == "µ" || lower == "μ" {
            return Ok(DecimalPrefix::Micro);
        }
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(lower) || (!p.symbol().is_empty() && p.symbol() == lower))
            .ok_or_else(|| GdfError::InvalidArgument(format!("unknown decimal prefix {name:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PhysDimCode(pub u16);

impl PhysDimCode {
    pub fn base(self) -> u16 {
        self.0 & BASE_MASK
    }

    pub fn prefix_offset(self) -> u16 {
        self.0 & PREFIX_MASK
    }

    pub fn prefix(self) -> Option<DecimalPrefix> {
        DecimalPrefix::from_offset(self.prefix_offset())
    }

    pub fn is_unknown(self) -> bool {
        self.0 == 0
    }

    pub fn is_voltage(self) -> bool {
        self.base() == VOLT
    }

    pub fn is_impedance(self) -> bool {
        self.base() == OHM
    }
}

impl fmt::Display for PhysDimCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match decode_physdim(*self) {
            Ok(u) => f.write_str(&u.display),
            Err(_) => write!(f, "?{}", self.0),
        }
    }
}

/// Combines a base unit with a decimal prefix.
pub fn encode_physdim(base: u16, prefix: DecimalPrefix) -> Result<PhysDimCode> {
    if base & PREFIX_MASK != 0 {
        return Err(GdfError::InvalidArgument(format!(
            "base unit code {base} has non-zero prefix bits"
        )));
    }
    Ok(PhysDimCode(base + prefix.offset()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedUnit {
    pub base: u16,
    pub prefix: DecimalPrefix,
    /// `None` for the unknown unit (code 0).
    pub magnitude: Option<f64>,
    pub display: String,
}

/// Splits a code using the built-in unit table.
pub fn decode_physdim(code: PhysDimCode) -> Result<DecodedUnit> {
    UnitRegistry::builtin().decode(code)
}

/// Base-code to symbol map, extendable from a CSV table.
#[derive(Debug, Clone)]
pub struct UnitRegistry {
    symbols: BTreeMap<u16, String>,
}

impl Default for UnitRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl UnitRegistry {
    pub fn builtin() -> Self {
        UnitRegistry {
            symbols: BASE_UNITS
                .iter()
                .map(|&(code, sym, _)| (code, sym.to_string()))
                .collect(),
        }
    }

    pub fn symbol(&self, base: u16) -> Option<&str> {
        self.symbols.get(&base).map(String::as_str)
    }

    pub fn insert(&mut self, base: u16, symbol: impl Into<String>) -> Result<()> {
        if base & PREFIX_MASK != 0 {
            return Err(GdfError::InvalidArgument(format!(
                "base unit code {base} has non-zero prefix bits"
            )));
        }
        self.symbols.insert(base, symbol.into());
        Ok(())
    }

    /// Adds rows of the form `code,symbol[,description...]`.
    ///
    /// Blank lines, lines starting with `#`, and rows whose first cell is not
    /// an integer (header rows) are skipped. Returns the number of rows added.
    pub fn extend_from_csv<R: BufRead>(&mut self, reader: R) -> Result<usize> {
        let mut added = 0;
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cells = line.splitn(3, [',', ';', '\t']);
            let Some(Ok(code)) = cells.next().map(|c| c.trim().parse::<u16>()) else {
                continue;
            };
            let symbol = cells.next().unwrap_or("").trim().trim_matches('"');
            self.insert(code & BASE_MASK, symbol)?;
            added += 1;
        }
        Ok(added)
    }

    pub fn decode(&self, code: PhysDimCode) -> Result<DecodedUnit> {
        let base = code.base();
        let prefix = code.prefix().ok_or_else(|| {
            GdfError::InvalidArgument(format!(
                "physical dimension {} uses non-standard prefix offset {}",
                code.0,
                code.prefix_offset()
            ))
        })?;
        if code.is_unknown() {
            return Ok(DecodedUnit {
                base,
                prefix,
                magnitude: None,
                display: "unknown".to_string(),
            });
        }
        let display = match self.symbol(base) {
            Some(sym) => format!("{}{}", prefix.symbol(), sym),
            None => "?".to_string(),
        };
        Ok(DecodedUnit {
            base,
            prefix,
            magnitude: Some(prefix.magnitude()),
            display,
        })
    }

    /// Parses a unit string such as `"uV"` or `"kOhm"` back into a code.
    pub fn lookup(&self, text: &str) -> Option<PhysDimCode> {
        let text = text.trim();
        if text.is_empty() || text.eq_ignore_ascii_case("unknown") {
            return Some(PhysDimCode(0));
        }
        if let Some((&base, _)) = self.symbols.iter().find(|(&c, s)| c != 0 && s.as_str() == text) {
            return Some(PhysDimCode(base));
        }
        for prefix in DecimalPrefix::ALL {
            let sym = prefix.symbol();
            if sym.is_empty() {
                continue;
            }
            let rest = text
                .strip_prefix(sym)
                .or_else(|| (prefix == DecimalPrefix::Micro).then(|| text.strip_prefix('µ')).flatten());
            if let Some(rest) = rest {
                if let Some((&base, _)) = self.symbols.iter().find(|(&c, s)| c != 0 && s.as_str() == rest) {
                    return Some(PhysDimCode(base + prefix.offset()));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn microvolt() {
        assert_eq!(encode_physdim(VOLT, DecimalPrefix::Micro).unwrap(), PhysDimCode(4275));
        let u = decode_physdim(PhysDimCode(4275)).unwrap();
        assert_eq!(u.base, 4256);
        assert_eq!(u.magnitude, Some(1e-6));
        assert_eq!(u.display, "uV");
    }

    #[test]
    fn dimensionless_and_kilohm() {
        assert_eq!(encode_physdim(DIMENSIONLESS, DecimalPrefix::from_name("none").unwrap()).unwrap().0, 512);
        assert_eq!(encode_physdim(OHM, DecimalPrefix::Kilo).unwrap().0, 4291);
    }

    #[test]
    fn millihertz_and_unknown() {
        let u = decode_physdim(PhysDimCode(2514)).unwrap();
        assert_eq!((u.base, u.magnitude, u.display.as_str()), (2496, Some(1e-3), "mHz"));
        let u = decode_physdim(PhysDimCode(0)).unwrap();
        assert_eq!((u.base, u.magnitude, u.display.as_str()), (0, None, "unknown"));
    }

    #[test]
    fn non_standard_prefixes_rejected() {
        for off in (11..=15).chain(26..=31) {
            assert!(decode_physdim(PhysDimCode(VOLT + off)).is_err(), "{off}");
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(encode_physdim(4257, DecimalPrefix::None).is_err());
        assert!(DecimalPrefix::from_name("kibi").is_err());
        assert_eq!(decode_physdim(PhysDimCode(64)).unwrap().display, "?");
    }

    #[test]
    fn lookup_symbols() {
        let reg = UnitRegistry::builtin();
        assert_eq!(reg.lookup("uV"), Some(PhysDimCode(4275)));
        assert_eq!(reg.lookup("µV"), Some(PhysDimCode(4275)));
        assert_eq!(reg.lookup("mmHg"), Some(PhysDimCode(MMHG)));
        assert_eq!(reg.lookup("kOhm"), Some(PhysDimCode(4291)));
        assert_eq!(reg.lookup("V"), Some(PhysDimCode(VOLT)));
        assert_eq!(reg.lookup("furlong"), None);
    }

    #[test]
    fn csv_extension() {
        let mut reg = UnitRegistry::builtin();
        let n = reg
            .extend_from_csv("# units\ncode,symbol\n1024,m,length\n2176,s\n".as_bytes())
            .unwrap();
        assert_eq!(n, 2);
        assert_eq!(reg.decode(PhysDimCode(1024 + 18)).unwrap().display, "mm");
        assert_eq!(reg.decode(PhysDimCode(2176 + 18)).unwrap().display, "ms");
    }
}
