use std::collections::BTreeMap;
use std::io::BufRead;

use super::END_FLAG;
use crate::error::{GdfError, Result};

const BUILTIN: &str = include_str!("eventcodes.txt");

/// Event code descriptions: a built-in table plus user entries, which
/// shadow built-ins.
#[derive(Debug, Clone, PartialEq)]
pub struct EventCodeRegistry {
    builtin: BTreeMap<u16, String>,
    user: BTreeMap<u16, String>,
}

impl Default for EventCodeRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl EventCodeRegistry {
    pub fn builtin() -> Self {
        EventCodeRegistry {
            builtin: parse_code_table(BUILTIN).expect("embedded event code table parses"),
            user: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        EventCodeRegistry {
            builtin: BTreeMap::new(),
            user: BTreeMap::new(),
        }
    }

    /// Replaces the built-in table with one in the same text format.
    pub fn from_reader<R: BufRead>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Ok(EventCodeRegistry {
            builtin: parse_code_table(&text)?,
            user: BTreeMap::new(),
        })
    }

    pub fn insert_user(&mut self, code: u16, description: impl Into<String>) {
        self.user.insert(code, description.into());
    }

    /// Loads header-3 tag-1 descriptions: list entry `i` describes code `i + 1`.
    pub fn load_user_descriptions(&mut self, list: &[String]) {
        for (i, d) in list.iter().enumerate().take(0xFFFF) {
            if !d.is_empty() {
                self.user.insert((i + 1) as u16, d.clone());
            }
        }
    }

    pub fn get(&self, code: u16) -> Option<&str> {
        self.user.get(&code).or_else(|| self.builtin.get(&code)).map(String::as_str)
    }

    pub fn builtin_codes(&self) -> impl Iterator<Item = (u16, &str)> {
        self.builtin.iter().map(|(k, v)| (*k, v.as_str()))
    }

    pub fn describe(&self, code: u16) -> String {
        if code & END_FLAG != 0 {
            return format!("end of: {}", self.describe(code & !END_FLAG));
        }
        match self.get(code) {
            Some(d) => d.to_string(),
            None => format!("user-defined (0x{code:04X})"),
        }
    }
}

pub fn describe_event(code: u16, registry: &EventCodeRegistry) -> String {
    registry.describe(code)
}

/// Parses `0xHHHH description` rows; lines starting with `#` and blank
/// lines are skipped.
fn parse_code_table(text: &str) -> Result<BTreeMap<u16, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (code, desc) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let hex = code.strip_prefix("0x").or_else(|| code.strip_prefix("0X"));
        let code = hex
            .and_then(|h| u16::from_str_radix(h, 16).ok())
            .ok_or_else(|| GdfError::InvalidArgument(format!("event code table line {}: {line:?}", n + 1)))?;
        map.insert(code, desc.trim().to_string());
    }
    Ok(map)
}
