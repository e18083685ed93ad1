//! Types shared by the routing protocols and the engine: packets, frame
//! sizes, and the actions a protocol asks the engine to carry out.

use crate::ant::Ant;
use crate::aodvjr::AodvMessage;
use crate::time::SimTime;
use crate::Address;

/// Application message carried as payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppData {
    pub msg_id: u64,
    pub len: u16,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Packet {
    Ant { ant: Ant, data: Option<AppData> },
    Aodv(AodvMessage),
}

impl Packet {
    pub fn data(&self) -> Option<AppData> {
        match self {
            Packet::Ant { data, .. } => *data,
            Packet::Aodv(AodvMessage::Data { data, .. }) => Some(*data),
            Packet::Aodv(_) => None,
        }
    }

    pub fn kind(&self) -> PacketKind {
        match self {
            Packet::Ant { ant, .. } => match ant.ant_type {
                crate::ant::AntType::Fta => PacketKind::Fta,
                crate::ant::AntType::Eta => PacketKind::Eta,
                crate::ant::AntType::Backward => PacketKind::Backward,
            },
            Packet::Aodv(AodvMessage::Rreq { .. }) => PacketKind::Rreq,
            Packet::Aodv(AodvMessage::Rrep { .. }) => PacketKind::Rrep,
            Packet::Aodv(AodvMessage::Data { .. }) => PacketKind::Data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PacketKind {
    Fta,
    Eta,
    Backward,
    Rreq,
    Rrep,
    Data,
}

impl PacketKind {
    pub const ALL: [PacketKind; 6] = [
        PacketKind::Fta,
        PacketKind::Eta,
        PacketKind::Backward,
        PacketKind::Rreq,
        PacketKind::Rrep,
        PacketKind::Data,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PacketKind::Fta => "fta",
            PacketKind::Eta => "eta",
            PacketKind::Backward => "bwd",
            PacketKind::Rreq => "rreq",
            PacketKind::Rrep => "rrep",
            PacketKind::Data => "data",
        }
    }

    pub fn idx(self) -> usize {
        self as usize
    }
}

/// Header lengths of the simulated stack, in bytes.
///
/// UDP and IP headers are inert overhead; nothing in the simulation reads
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StackLayout {
    pub mac: u16,
    pub ip: u16,
    pub udp: u16,
    pub adhop: u16,
    pub aodv_control: u16,
    pub max_frame: u16,
}

impl Default for StackLayout {
    fn default() -> Self {
        Self {
            mac: 22,
            ip: 20,
            udp: 8,
            adhop: 20,
            aodv_control: 24,
            max_frame: 102,
        }
    }
}

impl StackLayout {
    /// Largest application payload an ADHOP data frame can carry.
    pub fn max_payload(&self) -> u16 {
        self.max_frame
            .saturating_sub(self.mac + self.ip + self.adhop + self.udp)
    }

    /// Bytes on air for one transmission of `packet`.
    pub fn frame_len(&self, packet: &Packet) -> u16 {
        match packet {
            Packet::Ant { data: Some(d), .. } => self.mac + self.ip + self.adhop + self.udp + d.len,
            Packet::Ant { data: None, .. } => self.mac + self.ip + self.adhop,
            Packet::Aodv(AodvMessage::Data { data, .. }) => {
                self.mac + self.ip + self.udp + data.len
            }
            Packet::Aodv(_) => self.mac + self.ip + self.udp + self.aodv_control,
        }
    }

    /// Application payload bytes within the frame.
    pub fn payload_len(&self, packet: &Packet) -> u16 {
        packet.data().map_or(0, |d| d.len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Timer {
    RreqRetry(Address),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DropReason {
    TtlExceeded,
    Duplicate,
    NoRoute,
    NoPendingReturn,
    BufferOverflow,
    DiscoveryFailed,
    LinkFailure,
    Malformed,
}

impl DropReason {
    pub fn name(self) -> &'static str {
        match self {
            DropReason::TtlExceeded => "ttl",
            DropReason::Duplicate => "duplicate",
            DropReason::NoRoute => "no_route",
            DropReason::NoPendingReturn => "no_pending_return",
            DropReason::BufferOverflow => "buffer_overflow",
            DropReason::DiscoveryFailed => "discovery_failed",
            DropReason::LinkFailure => "link_failure",
            DropReason::Malformed => "malformed",
        }
    }
}

/// What a protocol handler asks of the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Unicast {
        next: Address,
        packet: Packet,
    },
    Broadcast(Packet),
    Deliver {
        source: Address,
        data: AppData,
    },
    Drop {
        reason: DropReason,
        data: Option<AppData>,
    },
    Timer {
        at: SimTime,
        timer: Timer,
    },
}
