//! Process-wide caps on the size of exact intermediate values.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default cap on the bit length of an exact scalar (about 4 MB).
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 25;
/// Default cap on the z-degree of symbolic cocycle entries.
pub const DEFAULT_DEGREE_BUDGET: u64 = 1 << 16;
/// Default cap on Kronecker dimensions `m^d`.
pub const DEFAULT_SIZE_BUDGET: u64 = 256;

static BIT_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BIT_BUDGET);

pub fn bit_budget() -> u64 {
    BIT_BUDGET.load(Ordering::Relaxed)
}

pub fn set_bit_budget(bits: u64) {
    BIT_BUDGET.store(bits, Ordering::Relaxed);
}

/// Bit budget corresponding to a memory cap in megabytes: a single exact
/// value may use at most a quarter of it.
pub fn bits_for_megabytes(mb: u64) -> u64 {
    mb.saturating_mul(8 << 20) / 4
}
