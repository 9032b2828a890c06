use crate::error::{GdfError, Result};

/// Linear mapping from digital to physical values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub phys_min: f64,
    pub phys_max: f64,
    pub dig_min: f64,
    pub dig_max: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            phys_min: -1.0,
            phys_max: 1.0,
            dig_min: -1.0,
            dig_max: 1.0,
        }
    }
}

impl Calibration {
    pub fn new(phys_min: f64, phys_max: f64, dig_min: f64, dig_max: f64) -> Self {
        Calibration {
            phys_min,
            phys_max,
            dig_min,
            dig_max,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.dig_min == self.dig_max
    }

    /// Closed interval check; values outside mark an invalid measurement.
    pub fn is_valid(&self, raw: f64) -> bool {
        raw >= self.dig_min && raw <= self.dig_max
    }

    /// Physical units per digital step.
    pub fn step(&self) -> f64 {
        (self.phys_max - self.phys_min) / (self.dig_max - self.dig_min)
    }

    /// Scales a raw sample; out-of-range samples become NaN.
    ///
    /// The endpoints map exactly onto `phys_min`/`phys_max`, and the mapping
    /// is monotone between them.
    pub fn scale(&self, raw: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(GdfError::DegenerateCalibration(self.dig_min));
        }
        if !self.is_valid(raw) {
            return Ok(f64::NAN);
        }
        Ok(self.scale_unchecked(raw))
    }

    pub(crate) fn scale_unchecked(&self, raw: f64) -> f64 {
        if raw == self.dig_max {
            return self.phys_max;
        }
        if raw == self.dig_min {
            return self.phys_min;
        }
        let t = (raw - self.dig_min) / (self.dig_max - self.dig_min);
        let v = self.phys_min + t * (self.phys_max - self.phys_min);
        if self.phys_max >= self.phys_min {
            v.clamp(self.phys_min, self.phys_max)
        } else {
            v.clamp(self.phys_max, self.phys_min)
        }
    }

    /// Nearest digital value for a physical one (no range check).
    pub fn unscale(&self, phys: f64) -> f64 {
        if phys == self.phys_max {
            return self.dig_max;
        }
        if phys == self.phys_min {
            return self.dig_min;
        }
        self.dig_min + (phys - self.phys_min) * (self.dig_max - self.dig_min) / (self.phys_max - self.phys_min)
    }
}
