//! ADHOP: ant header codec and the per-node ant state machine.

mod codec;
mod protocol;

pub use codec::{
    decode_ant, encode_ant, encode_frame, payload_bytes, Ant, AntType, CodecError, ANT_HEADER_LEN,
};
pub use protocol::{AdhopConfig, AdhopNode};
