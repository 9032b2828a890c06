//! Scalar domain types shared by the codecs.

mod calibration;
mod dtype;
mod impedance;
mod time;
pub mod units;

pub use calibration::Calibration;
pub use dtype::GdfType;
pub use impedance::LegacyImpedance;
pub use time::{GdfTime, RESOLUTION_SECONDS, UNIX_EPOCH_DAY};
pub use units::{decode_physdim, encode_physdim, DecimalPrefix, DecodedUnit, PhysDimCode, UnitRegistry};
