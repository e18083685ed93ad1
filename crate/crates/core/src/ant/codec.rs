//! Wire format of the 20-byte ant header.
//!
//! ```text
//!  0      1      2             6             10            14            18     20
//!  +------+------+-------------+-------------+-------------+-------------+------+
//!  | type | hops |   source    | destination |  previous   | sequence_no | heur |
//!  +------+------+-------------+-------------+-------------+-------------+------+
//! ```
//!
//! Multi-byte fields are big-endian. `heur` is `h * 65535` rounded, never 0.
//! The application payload follows the header directly.

use alloc::vec::Vec;

use thiserror::Error;

use crate::heuristics::HeuristicValue;
use crate::routing::{AppData, StackLayout};
use crate::Address;

pub const ANT_HEADER_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AntType {
    /// Forward transport ant, unicast along a known route.
    Fta,
    /// Exploratory transport ant, broadcast when no route is known.
    Eta,
    /// Retraces a completed forward traversal toward its source.
    Backward,
}

impl AntType {
    pub fn to_byte(self) -> u8 {
        match self {
            AntType::Fta => 0x01,
            AntType::Eta => 0x02,
            AntType::Backward => 0x03,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(AntType::Fta),
            0x02 => Some(AntType::Eta),
            0x03 => Some(AntType::Backward),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ant {
    pub ant_type: AntType,
    pub hops: u8,
    pub source: Address,
    pub destination: Address,
    pub previous: Address,
    pub sequence_no: u32,
    pub heuristic: HeuristicValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("buffer holds {0} bytes, shorter than the {ANT_HEADER_LEN}-byte ant header")]
    Truncated(usize),
    #[error("payload of {len} bytes exceeds the {max}-byte limit")]
    Oversized { len: usize, max: usize },
    #[error("unknown ant type 0x{0:02x}")]
    UnknownType(u8),
    #[error("heuristic field is zero")]
    ZeroHeuristic,
}

/// Header followed by `payload`.
pub fn encode_ant(ant: &Ant, payload: &[u8]) -> Result<Vec<u8>, CodecError> {
    let max = StackLayout::default().max_payload() as usize;
    if payload.len() > max {
        return Err(CodecError::Oversized {
            len: payload.len(),
            max,
        });
    }
    let mut out = Vec::with_capacity(ANT_HEADER_LEN + payload.len());
    out.push(ant.ant_type.to_byte());
    out.push(ant.hops);
    out.extend_from_slice(&ant.source.0.to_be_bytes());
    out.extend_from_slice(&ant.destination.0.to_be_bytes());
    out.extend_from_slice(&ant.previous.0.to_be_bytes());
    out.extend_from_slice(&ant.sequence_no.to_be_bytes());
    out.extend_from_slice(&ant.heuristic.quantize().to_be_bytes());
    out.extend_from_slice(payload);
    Ok(out)
}

pub fn decode_ant(buf: &[u8]) -> Result<(Ant, Vec<u8>), CodecError> {
    if buf.len() < ANT_HEADER_LEN {
        return Err(CodecError::Truncated(buf.len()));
    }
    let max = StackLayout::default().max_payload() as usize;
    let payload = &buf[ANT_HEADER_LEN..];
    if payload.len() > max {
        return Err(CodecError::Oversized {
            len: payload.len(),
            max,
        });
    }
    let u32_at = |i: usize| u32::from_be_bytes([buf[i], buf[i + 1], buf[i + 2], buf[i + 3]]);
    let ant_type = AntType::from_byte(buf[0]).ok_or(CodecError::UnknownType(buf[0]))?;
    let raw_h = u16::from_be_bytes([buf[18], buf[19]]);
    let heuristic = HeuristicValue::dequantize(raw_h).ok_or(CodecError::ZeroHeuristic)?;
    let ant = Ant {
        ant_type,
        hops: buf[1],
        source: Address(u32_at(2)),
        destination: Address(u32_at(6)),
        previous: Address(u32_at(10)),
        sequence_no: u32_at(14),
        heuristic,
    };
    Ok((ant, payload.to_vec()))
}

/// Payload bytes of an application message: its id big-endian, zero padded.
pub fn payload_bytes(data: &AppData) -> Vec<u8> {
    let mut out = alloc::vec![0u8; data.len as usize];
    let id = data.msg_id.to_be_bytes();
    let n = out.len().min(id.len());
    out[..n].copy_from_slice(&id[..n]);
    out
}

/// A whole frame: MAC, IP, ant header, UDP, payload. The MAC, IP and UDP
/// headers are zero-filled placeholders of the configured length.
pub fn encode_frame(ant: &Ant, data: Option<&AppData>) -> Result<Vec<u8>, CodecError> {
    let layout = StackLayout::default();
    let mut out = alloc::vec![0u8; (layout.mac + layout.ip) as usize];
    let header = encode_ant(ant, &[])?;
    out.extend_from_slice(&header);
    if let Some(d) = data {
        out.resize(out.len() + layout.udp as usize, 0);
        out.extend_from_slice(&payload_bytes(d));
    }
    if out.len() > layout.max_frame as usize {
        return Err(CodecError::Oversized {
            len: out.len(),
            max: layout.max_frame as usize,
        });
    }
    Ok(out)
}
