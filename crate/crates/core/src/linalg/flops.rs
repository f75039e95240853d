//! Thread-local floating point operation counter.
//!
//! Kernels in this crate add their multiply-add count here so that solvers
//! can report the work spent per iteration. The counter is per thread, so
//! concurrent experiments on different threads do not interfere.

use std::cell::Cell;

thread_local! {
    static FLOPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn add(n: usize) {
    FLOPS.with(|f| f.set(f.get() + n as u64));
}

pub fn read() -> u64 {
    FLOPS.with(|f| f.get())
}

pub fn reset() {
    FLOPS.with(|f| f.set(0));
}

/// Runs `f` and returns its result along with the flops it spent.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = read();
    let out = f();
    (out, read() - start)
}
