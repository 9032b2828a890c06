//! Header codecs: the fixed block, the per-channel block and the TLV block.

mod bytes;
pub mod channel;
pub mod demographics;
pub mod fixed;
pub mod tlv;

pub use channel::{parse_channel_headers, write_channel_headers, ChannelInfo, SensorInfo};
pub use demographics::{Gender, Habits, Handedness, HeartImpairment, Physique, TriState, VisualImpairment};
pub use fixed::{
    parse_fixed_header, parse_location, write_fixed_header, FixedHeader, Location, PatientId, PatientInfo,
    RecordDuration, RecordingInfo,
};
pub use tlv::{decode_tag_value, parse_tlv, tlv_content_len, write_tlv, TlvElement, TlvValue};

/// Header length in blocks the writer uses for `ns` channels and TLV
/// elements of `tlv_bytes` total size. One extra byte is reserved for the
/// terminating tag.
pub fn header_blocks_for(ns: usize, tlv_bytes: usize) -> usize {
    let base = ns + 1;
    if tlv_bytes == 0 {
        base
    } else {
        base + (tlv_bytes + 1).div_ceil(256)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_arithmetic() {
        assert_eq!(header_blocks_for(0, 0), 1);
        assert_eq!(header_blocks_for(3, 0), 4);
        assert_eq!(header_blocks_for(2, 9), 4);
        assert_eq!(header_blocks_for(2, 255), 4);
        assert_eq!(header_blocks_for(2, 256), 5);
    }
}
