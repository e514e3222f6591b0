//! Fuzz the Gram-matrix CSV ingester: must never panic, and every
//! accepted row must reduce to a point of the fundamental domain.

#![no_main]

use ec_heuristics::mwlattice::{ingest_gram_csv, reduce};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grams) = ingest_gram_csv(text) {
        for g in &grams {
            if let Ok(p) = reduce(g) {
                assert!(p.x >= 0.0 && p.x <= 0.5 + 1e-9);
                assert!(p.x * p.x + p.y * p.y >= 1.0 - 1e-9);
            }
        }
    }
});
