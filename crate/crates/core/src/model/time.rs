//! 64-bit GDF timestamps.
//!
//! The upper 32 bits count days, the lower 32 bits hold the fraction of a day
//! in units of 2^-32 day (about 20.1 µs). 1970-01-01 is day 719 529.

use std::fmt;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime, Timelike};

use crate::error::{GdfError, Result};

/// Day number of 1970-01-01.
pub const UNIX_EPOCH_DAY: u64 = 719_529;

const SECONDS_PER_DAY: f64 = 86_400.0;
const FRACTION_SCALE: f64 = 4_294_967_296.0;

/// Offset between the GDF day count and chrono's days-from-CE count.
///
/// chrono counts 0001-01-01 as day 1; 719_529 - 719_163 = 366, which puts
/// 0000-01-01 at GDF day 1.
const CE_DAY_OFFSET: i64 = 366;

/// Resolution of the fractional part, in seconds.
pub const RESOLUTION_SECONDS: f64 = SECONDS_PER_DAY / FRACTION_SCALE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GdfTime(pub u64);

impl GdfTime {
    pub const UNSET: GdfTime = GdfTime(0);

    pub fn is_unset(self) -> bool {
        self.0 == 0
    }

    pub fn days(self) -> u32 {
        (self.0 >> 32) as u32
    }

    pub fn day_fraction(self) -> u32 {
        self.0 as u32
    }

    pub fn from_parts(days: u32, fraction: u32) -> Self {
        GdfTime(((days as u64) << 32) | fraction as u64)
    }

    /// Converts seconds since 1970-01-01T00:00 to a timestamp.
    ///
    /// Whole days and the remaining seconds are split before scaling so the
    /// fraction is rounded once, at full precision.
    pub fn from_unix(seconds: f64) -> Result<Self> {
        if !seconds.is_finite() {
            return Err(domain(seconds));
        }
        let mut day = (seconds / SECONDS_PER_DAY).floor();
        let mut rem = seconds - day * SECONDS_PER_DAY;
        if rem < 0.0 {
            day -= 1.0;
            rem += SECONDS_PER_DAY;
        } else if rem >= SECONDS_PER_DAY {
            day += 1.0;
            rem -= SECONDS_PER_DAY;
        }
        let mut frac = (rem * FRACTION_SCALE / SECONDS_PER_DAY).round();
        if frac >= FRACTION_SCALE {
            frac -= FRACTION_SCALE;
            day += 1.0;
        }
        let days = day + UNIX_EPOCH_DAY as f64;
        if !(0.0..=u32::MAX as f64).contains(&days) {
            return Err(domain(seconds));
        }
        Ok(GdfTime::from_parts(days as u32, frac as u32))
    }

    /// Seconds since 1970-01-01T00:00, or `None` for the unset value.
    pub fn to_unix(self) -> Option<f64> {
        if self.is_unset() {
            return None;
        }
        let days = self.days() as f64 - UNIX_EPOCH_DAY as f64;
        let frac = self.day_fraction() as f64 * SECONDS_PER_DAY / FRACTION_SCALE;
        Some(days * SECONDS_PER_DAY + frac)
    }

    /// Calendar date and time (proleptic Gregorian, naive).
    pub fn to_datetime(self) -> Option<NaiveDateTime> {
        if self.is_unset() {
            return None;
        }
        let ce_days = i64::from(self.days()) - CE_DAY_OFFSET;
        let date = NaiveDate::from_num_days_from_ce_opt(i32::try_from(ce_days).ok()?)?;
        let nanos = (self.day_fraction() as u128 * 86_400_000_000_000u128 + (1u128 << 31)) >> 32;
        let secs = (nanos / 1_000_000_000) as u32;
        let sub = (nanos % 1_000_000_000) as u32;
        let time = if secs >= 86_400 {
            NaiveTime::from_hms_nano_opt(23, 59, 59, 999_999_999)?
        } else {
            NaiveTime::from_num_seconds_from_midnight_opt(secs, sub)?
        };
        Some(date.and_time(time))
    }

    pub fn from_datetime(dt: NaiveDateTime) -> Result<Self> {
        use chrono::Datelike;
        let days = i64::from(dt.date().num_days_from_ce()) + CE_DAY_OFFSET;
        let days = u32::try_from(days).map_err(|_| GdfError::Domain {
            what: "calendar date",
            value: dt.to_string(),
        })?;
        let t = dt.time();
        let nanos = t.num_seconds_from_midnight() as u128 * 1_000_000_000 + t.nanosecond() as u128;
        let frac = ((nanos << 32) + 43_200_000_000_000) / 86_400_000_000_000;
        if frac >= 1 << 32 {
            return Ok(GdfTime::from_parts(days + 1, 0));
        }
        Ok(GdfTime::from_parts(days, frac as u32))
    }

    /// Moves the timestamp by whole days; the unset value stays unset.
    pub fn shift_days(self, days: i64) -> Result<Self> {
        if self.is_unset() {
            return Ok(self);
        }
        let d = i64::from(self.days()) + days;
        let d = u32::try_from(d).map_err(|_| GdfError::Domain {
            what: "shifted day count",
            value: d.to_string(),
        })?;
        Ok(GdfTime::from_parts(d, self.day_fraction()))
    }
}

fn domain(seconds: f64) -> GdfError {
    GdfError::Domain {
        what: "unix seconds",
        value: seconds.to_string(),
    }
}

impl fmt::Display for GdfTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_datetime() {
            None if self.is_unset() => f.write_str("unset"),
            None => write!(f, "raw:{:#018x}", self.0),
            Some(dt) => write!(f, "{}", dt.format("%Y-%m-%dT%H:%M:%S%.6f")),
        }
    }
}
