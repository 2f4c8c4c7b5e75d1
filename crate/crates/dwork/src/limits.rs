//! Resource caps shared by the field builder and the counting kernels.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Largest field size for which discrete-log tables are built.
pub const FIELD_CAP: u64 = 1 << 26;

/// Default cap on elementary operations for a single enumeration.
pub const DEFAULT_OP_CAP: u64 = 1_000_000_000;

static OP_CAP: AtomicU64 = AtomicU64::new(DEFAULT_OP_CAP);

pub fn op_cap() -> u64 {
    OP_CAP.load(Ordering::Relaxed)
}

pub fn set_op_cap(cap: u64) {
    OP_CAP.store(cap, Ordering::Relaxed);
}

pub(crate) fn ensure_ops(what: &str, ops: u128) -> Result<()> {
    let cap = op_cap() as u128;
    if ops > cap {
        return Err(Error::CostCap {
            what: what.to_string(),
            value: ops,
            cap,
        });
    }
    Ok(())
}
