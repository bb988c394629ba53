use thiserror::Error;

/// Errors raised when a system model or placement violates its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid user code (n={n}, k={k}): need 1 <= k <= n")]
    InvalidCode { n: usize, k: usize },
    #[error("frame must have at least one slot")]
    EmptyFrame,
    #[error("user list is empty")]
    NoUsers,
    #[error("user {user} sends {n} bursts but the frame only has {ns} slots")]
    TooManyBursts { user: usize, n: usize, ns: usize },
    #[error("placement has {got} users, config has {expected}")]
    UserCountMismatch { expected: usize, got: usize },
    #[error("user {user}: slot {slot} outside frame of {ns} slots")]
    SlotOutOfRange { user: usize, slot: usize, ns: usize },
    #[error("user {user}: slot {slot} used twice")]
    DuplicateSlot { user: usize, slot: usize },
    #[error("user {user}: placement has {got} bursts, code says {expected}")]
    BurstCountMismatch { user: usize, expected: usize, got: usize },
}
