//! Fuzz the a-invariant tuple parser: must never panic, and any curve
//! it accepts must round-trip into consistent invariants.

#![no_main]

use ec_heuristics::curve::Curve;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = Curve::parse(text) {
        // 1728 delta = c4^3 - c6^2 must hold for anything accepted
        let lhs = &curve.delta * 1728;
        let rhs = &curve.c4 * &curve.c4 * &curve.c4 - &curve.c6 * &curve.c6;
        assert_eq!(lhs, rhs);
        assert_eq!(curve.is_singular(), curve.delta == 0.into());
    }
});
