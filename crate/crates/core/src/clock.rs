//! Clock abstraction for attack timing.
//!
//! Perturbation-generation time is measured between two `now_ns` calls.
//! [`MonotonicClock`] reads the process monotonic clock; [`SimClock`] is a
//! deterministic counter used to make benchmark output byte-reproducible and
//! to let tests assert that success adjudication and predictor fitting stay
//! outside the timed window. Code paths that run outside the timed window
//! report their modeled cost through [`Clock::advance`], which the real clock
//! ignores.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

pub trait Clock: Send + Sync {
    /// Current timestamp in nanoseconds.
    fn now_ns(&self) -> u64;

    /// Account simulated cost for untimed work; no-op on real clocks.
    fn advance(&self, _ns: u64) {}
}

/// Wall clock based on `std::time::Instant`.
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        MonotonicClock {
            origin: Instant::now(),
        }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now_ns(&self) -> u64 {
        self.origin.elapsed().as_nanos() as u64
    }
}

/// Deterministic clock: every `now_ns` call advances time by a fixed tick.
pub struct SimClock {
    t: AtomicU64,
    tick: u64,
}

impl SimClock {
    pub fn new(tick: u64) -> Self {
        SimClock {
            t: AtomicU64::new(0),
            tick,
        }
    }
}

impl Clock for SimClock {
    fn now_ns(&self) -> u64 {
        self.t.fetch_add(self.tick, Ordering::Relaxed) + self.tick
    }

    fn advance(&self, ns: u64) {
        self.t.fetch_add(ns, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sim_clock_ticks_per_call_and_advances() {
        let c = SimClock::new(5);
        assert_eq!(c.now_ns(), 5);
        assert_eq!(c.now_ns(), 10);
        c.advance(100);
        assert_eq!(c.now_ns(), 115);
    }

    #[test]
    fn monotonic_clock_is_nondecreasing() {
        let c = MonotonicClock::new();
        let a = c.now_ns();
        let b = c.now_ns();
        assert!(b >= a);
    }
}
