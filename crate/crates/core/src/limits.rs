//! Process-wide size bounds and the seed used by sampled checks.

use std::sync::RwLock;

/// Bounds on enumeration sizes.
///
/// A single process-wide copy is consulted by every enumeration; the CLI
/// installs its configured bounds once at startup with [`set_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order a constructor may produce.
    pub max_group_order: usize,
    /// Largest number of candidate tuples an enumeration may visit.
    pub max_enumeration: u128,
    /// Largest finite field size `p^(dn)`.
    pub max_field: u64,
    /// Largest `d` accepted for `Q(sqrt(-d))`.
    pub max_ring_d: u64,
    /// Largest norm for which principality is decided by enumeration.
    pub max_norm: u64,
    /// Seed for sampled checks.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 40320,
            max_enumeration: 1 << 24,
            max_field: 1 << 20,
            max_ring_d: 200,
            max_norm: 1 << 40,
            seed: 0,
        }
    }
}

impl Limits {
    /// Applies `COCYCLE_MAX_MEM_MB`, which caps enumeration buffers at
    /// roughly 64 bytes per stored candidate.
    pub fn with_env(mut self) -> Self {
        if let Some(mb) = std::env::var("COCYCLE_MAX_MEM_MB")
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
        {
            let cap = (mb << 20) / 64;
            self.max_enumeration = self.max_enumeration.min(cap.max(1));
        }
        self
    }
}

static LIMITS: RwLock<Limits> = RwLock::new(Limits {
    max_group_order: 40320,
    max_enumeration: 1 << 24,
    max_field: 1 << 20,
    max_ring_d: 200,
    max_norm: 1 << 40,
    seed: 0,
});

pub fn limits() -> Limits {
    *LIMITS.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_limits(l: Limits) {
    *LIMITS.write().unwrap_or_else(|e| e.into_inner()) = l;
}
