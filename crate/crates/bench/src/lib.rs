//! Benchmark fixtures shared by the criterion targets.

use slipchan::{Friction, WaveIndex};

/// Frictions exercised by every benchmark.
pub const FRICTIONS: [Friction; 4] = [Friction::Navier, Friction::Finite(1.0), Friction::Finite(10.0), Friction::Dirichlet];

/// Constant-pressure indices with `m, n ≤ max`, `p ≤ max_p`.
pub fn indices(max: u32, max_p: u32) -> Vec<WaveIndex> {
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            for p in 1..=max_p + 1 {
                out.push(WaveIndex::constant(m, n, p));
            }
        }
    }
    out
}
