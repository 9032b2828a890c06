use super::GdfFile;
use crate::error::{GdfError, Result};
use crate::header::tlv::{TAG_HOSPITAL, TAG_TECHNICIAN};
use crate::model::GdfTime;

/// Largest birthday shift accepted, one year.
pub const MAX_BIRTHDAY_SHIFT_DAYS: i64 = 365;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirthdayPolicy {
    /// Store the birthday as unset (all zero).
    Zero,
    /// Move the birthday by this many days; an unset birthday stays unset.
    Shift(i64),
}

/// Removes identifying content: the patient name, the technician and
/// hospital elements, and the exact birthday. Everything else is kept.
///
/// Idempotent under [`BirthdayPolicy::Zero`]; a shift applied twice moves
/// the birthday twice.
pub fn anonymize(f: &GdfFile, policy: BirthdayPolicy) -> Result<GdfFile> {
    let mut out = f.clone();
    out.header.patient.id.name.clear();
    out.header.patient.birthday = match policy {
        BirthdayPolicy::Zero => GdfTime::UNSET,
        BirthdayPolicy::Shift(days) => {
            if days.abs() > MAX_BIRTHDAY_SHIFT_DAYS {
                return Err(GdfError::InvalidArgument(format!(
                    "birthday shift of {days} days exceeds one year"
                )));
            }
            f.header.patient.birthday.shift_days(days)?
        }
    };
    // Header length is kept so the data section stays at the same offset.
    out.tlv.retain(|e| e.tag != TAG_TECHNICIAN && e.tag != TAG_HOSPITAL);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SignalBlock;
    use crate::file::encode_file;
    use crate::header::{FixedHeader, PatientId, TlvValue};

    fn file() -> GdfFile {
        let mut h = FixedHeader::default();
        h.patient.id = PatientId::parse("P01 Doe");
        h.patient.birthday = GdfTime::from_parts(720_000, 0);
        let tlv = vec![
            TlvValue::Technician(b"Smith".to_vec()).encode().unwrap(),
            TlvValue::Hospital(b"General".to_vec()).encode().unwrap(),
            TlvValue::Snomed(b"x".to_vec()).encode().unwrap(),
        ];
        GdfFile::new(h, vec![], tlv, SignalBlock { channels: vec![], n_records: 0 }, None)
    }

    #[test]
    fn name_and_tags_removed() {
        let a = anonymize(&file(), BirthdayPolicy::Zero).unwrap();
        assert_eq!(a.header.patient.id.code, "P01");
        assert_eq!(a.header.patient.id.render(), "P01 X X");
        assert_eq!(a.tlv.len(), 1);
        let bytes = encode_file(&a).unwrap();
        assert_eq!(&bytes[176..184], &[0u8; 8]);
        assert_eq!(anonymize(&a, BirthdayPolicy::Zero).unwrap(), a);
    }

    #[test]
    fn shift_limits() {
        let a = anonymize(&file(), BirthdayPolicy::Shift(-30)).unwrap();
        assert_eq!(a.header.patient.birthday.days(), 720_000 - 30);
        assert!(anonymize(&file(), BirthdayPolicy::Shift(366)).is_err());
    }
}
