//! Two-bit subject descriptors packed into bytes 84 and 87 of header 1.

use std::fmt;

macro_rules! two_bit_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident = $val:literal => $word:expr),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub enum $name {
            #[default]
            $($variant),+
        }

        impl $name {
            pub const ALL: [$name; 4] = [$($name::$variant),+];

            pub const fn bits(self) -> u8 {
                match self {
                    $($name::$variant => $val),+
                }
            }

            pub const fn from_bits(bits: u8) -> Self {
                match bits & 0b11 {
                    $($val => $name::$variant,)+
                    _ => unreachable!(),
                }
            }

            pub const fn word(self) -> &'static str {
                match self {
                    $($name::$variant => $word),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.word())
            }
        }
    };
}

two_bit_enum! {
    /// Smoking, alcohol abuse, drug abuse and medication flags. `Reserved` is
    /// the undefined pattern 0b11, kept so it survives a round trip.
    TriState { Unknown = 0 => "unknown", No = 1 => "no", Yes = 2 => "yes", Reserved = 3 => "reserved" }
}

two_bit_enum! {
    Gender { Unknown = 0 => "unknown", Male = 1 => "male", Female = 2 => "female", Reserved = 3 => "reserved" }
}

two_bit_enum! {
    Handedness { Unknown = 0 => "unknown", Right = 1 => "right", Left = 2 => "left", Equal = 3 => "equal" }
}

two_bit_enum! {
    VisualImpairment { Unknown = 0 => "unknown", None = 1 => "no impairment", Impaired = 2 => "impaired", Corrected = 3 => "corrected" }
}

two_bit_enum! {
    HeartImpairment { Unknown = 0 => "unknown", No = 1 => "no", Yes = 2 => "yes", Pacemaker = 3 => "pacemaker" }
}

/// Byte 84: smoking in bits 0-1, alcohol 2-3, drugs 4-5, medication 6-7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Habits {
    pub smoking: TriState,
    pub alcohol_abuse: TriState,
    pub drug_abuse: TriState,
    pub medication: TriState,
}

impl Habits {
    pub fn pack(self) -> u8 {
        self.smoking.bits()
            | self.alcohol_abuse.bits() << 2
            | self.drug_abuse.bits() << 4
            | self.medication.bits() << 6
    }

    pub fn unpack(byte: u8) -> Self {
        Habits {
            smoking: TriState::from_bits(byte),
            alcohol_abuse: TriState::from_bits(byte >> 2),
            drug_abuse: TriState::from_bits(byte >> 4),
            medication: TriState::from_bits(byte >> 6),
        }
    }

    pub fn has_reserved(self) -> bool {
        [self.smoking, self.alcohol_abuse, self.drug_abuse, self.medication].contains(&TriState::Reserved)
    }
}

/// Byte 87: gender in bits 0-1, handedness 2-3, vision 4-5, heart 6-7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Physique {
    pub gender: Gender,
    pub handedness: Handedness,
    pub visual: VisualImpairment,
    pub heart: HeartImpairment,
}

impl Physique {
    pub fn pack(self) -> u8 {
        self.gender.bits() | self.handedness.bits() << 2 | self.visual.bits() << 4 | self.heart.bits() << 6
    }

    pub fn unpack(byte: u8) -> Self {
        Physique {
            gender: Gender::from_bits(byte),
            handedness: Handedness::from_bits(byte >> 2),
            visual: VisualImpairment::from_bits(byte >> 4),
            heart: HeartImpairment::from_bits(byte >> 6),
        }
    }
}
