//! One-byte logarithmic electrode impedance used by headers before v2.19.

use crate::error::{GdfError, Result};

/// `round(8 * log2(Z))`; 255 marks undefined or too large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LegacyImpedance(pub u8);

impl LegacyImpedance {
    pub const UNDEFINED: LegacyImpedance = LegacyImpedance(255);

    /// Largest encodable resistance, 2^(254/8) Ω (about 3.9 GΩ).
    pub fn max_ohm() -> f64 {
        2f64.powf(254.0 / 8.0)
    }

    /// NaN encodes as undefined.
    pub fn encode(z_ohm: f64) -> Result<Self> {
        if z_ohm.is_nan() {
            return Ok(Self::UNDEFINED);
        }
        if z_ohm <= 0.0 {
            return Err(GdfError::Domain {
                what: "impedance",
                value: z_ohm.to_string(),
            });
        }
        if z_ohm > Self::max_ohm() {
            return Ok(Self::UNDEFINED);
        }
        let d = (8.0 * z_ohm.log2()).round().clamp(0.0, 254.0);
        Ok(LegacyImpedance(d as u8))
    }

    pub fn decode(self) -> Option<f64> {
        if self == Self::UNDEFINED {
            None
        } else {
            Some(2f64.powf(self.0 as f64 / 8.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_of_two() {
        assert_eq!(LegacyImpedance::encode(256.0).unwrap(), LegacyImpedance(64));
        assert_eq!(LegacyImpedance(64).decode(), Some(256.0));
    }

    #[test]
    fn ten_kilohm_minimizes_error() {
        let code = LegacyImpedance::encode(10_000.0).unwrap().0;
        let target = 8.0 * 10_000f64.log2();
        let best = (0..=254u8)
            .min_by(|&a, &b| {
                (a as f64 - target)
                    .abs()
                    .partial_cmp(&(b as f64 - target).abs())
                    .unwrap()
            })
            .unwrap();
        assert_eq!(best, 106);
        assert_eq!(code, best);
    }

    #[test]
    fn undefined_and_bounds() {
        assert_eq!(LegacyImpedance::encode(f64::NAN).unwrap(), LegacyImpedance::UNDEFINED);
        assert_eq!(LegacyImpedance::UNDEFINED.decode(), None);
        assert_eq!(LegacyImpedance::encode(1e10).unwrap(), LegacyImpedance::UNDEFINED);
        assert_eq!(LegacyImpedance::encode(LegacyImpedance::max_ohm()).unwrap(), LegacyImpedance(254));
        assert_eq!(LegacyImpedance::encode(0.5).unwrap(), LegacyImpedance(0));
        assert!(LegacyImpedance::encode(0.0).is_err());
        assert!(LegacyImpedance::encode(-3.0).is_err());
    }
}
