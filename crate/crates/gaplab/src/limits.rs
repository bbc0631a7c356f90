//! Resource limits for the exponential-scale kernels.

use once_cell::sync::OnceCell;

/// Default cap on `n` for anything that walks all of {0,1}^n (gap sums,
/// spectra, exhaustive distributions). 2^28 evaluations is seconds-scale.
pub const DEFAULT_MAX_ENUM_BITS: usize = 28;

/// Cap on statevector width: 2^20 complex doubles is 16 MB.
pub const MAX_STATEVECTOR_QUBITS: usize = 20;

/// Widest membership predicate the enumeration oracle will exhaust.
pub const MAX_PREDICATE_WIDTH: usize = 24;

/// Word budget for one side of a product-set count inside the oracle.
pub const DEFAULT_ORACLE_BUDGET_WORDS: u64 = 1 << 24;

static MAX_ENUM_BITS: OnceCell<usize> = OnceCell::new();

/// Maximum enumeration width, overridable once per process via the
/// `GAPLAB_MAX_ENUM_BITS` environment variable.
pub fn max_enum_bits() -> usize {
    *MAX_ENUM_BITS.get_or_init(|| {
        std::env::var("GAPLAB_MAX_ENUM_BITS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .map(|v| v.min(63))
            .unwrap_or(DEFAULT_MAX_ENUM_BITS)
    })
}

/// Errors out when `n` exceeds the enumeration limit.
pub fn check_enum_bits(what: &'static str, n: usize) -> crate::Result<()> {
    let limit = max_enum_bits();
    if n > limit {
        return Err(crate::Error::Resource {
            what,
            required: n as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}
