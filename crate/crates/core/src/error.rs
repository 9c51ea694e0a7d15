//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph: {0}")]
    Graph(String),

    #[error("model: {0}")]
    Model(String),

    #[error("config: {0}")]
    Config(String),

    /// An exact-enumeration input exceeded its configured cap. Never silently
    /// truncated.
    #[error("{what}: size {got} exceeds cap {cap}")]
    CapacityExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("lp: {0}")]
    Lp(#[from] crate::lp::LpError),

    /// The real queue of a link exceeded the total of its virtual queues.
    /// The relation is preserved by construction, so this indicates a
    /// scheduling or accounting bug, not a bad input.
    #[error("queue monitor: real queue exceeds virtual total on link {link} at slot {slot}")]
    MonitorViolation { link: usize, slot: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
