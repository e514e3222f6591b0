//! Integral Weierstrass models, b/c-invariants, minimality testing, and
//! the 288 admissible (c4 mod 576, c6 mod 1728) congruence classes.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::{Integer, Signed, Zero};
use std::collections::HashSet;
use std::sync::OnceLock;

/// An integral Weierstrass model with its derived invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub delta: BigInt,
}

impl Curve {
    /// Builds a model from its a-invariants, populating all derived
    /// quantities. Singular models (delta = 0) are constructed and
    /// flagged, not rejected: enumeration sweeps hit them naturally.
    pub fn from_a_invariants<T: Into<BigInt>>(a1: T, a2: T, a3: T, a4: T, a6: T) -> Curve {
        let (a1, a2, a3, a4, a6) = (a1.into(), a2.into(), a3.into(), a4.into(), a6.into());
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = 36 * &b2 * &b4 - &b2 * &b2 * &b2 - 216 * &b6;
        let delta = (&c4 * &c4 * &c4 - &c6 * &c6) / 1728;
        debug_assert_eq!(4 * &b8, &b2 * &b6 - &b4 * &b4);
        debug_assert_eq!(&c4 * &c4 * &c4 - &c6 * &c6, 1728 * &delta);
        Curve { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, delta }
    }

    pub fn is_singular(&self) -> bool {
        self.delta.is_zero()
    }

    /// Parses "a1,a2,a3,a4,a6" (the CLI/CSV interchange form).
    pub fn parse(s: &str) -> Result<Curve> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "expected 5 comma-separated a-invariants, got {}",
                parts.len()
            )));
        }
        let mut a = Vec::with_capacity(5);
        for p in &parts {
            a.push(
                p.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {p:?}: {e}")))?,
            );
        }
        Ok(Curve::from_a_invariants(
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            a[3].clone(),
            a[4].clone(),
        ))
    }
}

/// A curve presented by (c4, c6) only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C4C6Model {
    pub c4: BigInt,
    pub c6: BigInt,
    pub delta: BigInt,
}

impl C4C6Model {
    pub fn new(c4: BigInt, c6: BigInt) -> Result<C4C6Model> {
        let delta = discriminant_of(&c4, &c6)?;
        Ok(C4C6Model { c4, c6, delta })
    }
}

/// Exact discriminant from 1728 delta = c4^3 - c6^2.
///
/// Errors if 1728 does not divide c4^3 - c6^2 (an inadmissible pair).
pub fn discriminant_of(c4: &BigInt, c6: &BigInt) -> Result<BigInt> {
    let num = c4 * c4 * c4 - c6 * c6;
    let (q, r) = num.div_rem(&BigInt::from(1728));
    if !r.is_zero() {
        return Err(Error::InadmissiblePair(c4.to_string(), c6.to_string()));
    }
    Ok(q)
}

/// A residue class (c4 mod 576, c6 mod 1728).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruenceClass {
    pub c4_res: u32,
    pub c6_res: u32,
}

impl CongruenceClass {
    pub fn of(c4: &BigInt, c6: &BigInt) -> CongruenceClass {
        CongruenceClass {
            c4_res: u32::try_from(c4.mod_floor(&BigInt::from(576))).unwrap(),
            c6_res: u32::try_from(c6.mod_floor(&BigInt::from(1728))).unwrap(),
        }
    }
}

fn build_admissible() -> HashSet<CongruenceClass> {
    // Brute force over ranges that provably determine c4 mod 576 and
    // c6 mod 1728: a1 in {0,1}, |a2| <= 1, a3 in {0,1}, a4 mod 24,
    // a6 mod 8.
    let mut set = HashSet::new();
    for a1 in 0i64..=1 {
        for a2 in -1i64..=1 {
            for a3 in 0i64..=1 {
                for a4 in 0i64..24 {
                    for a6 in 0i64..8 {
                        let c = Curve::from_a_invariants(a1, a2, a3, a4, a6);
                        set.insert(CongruenceClass::of(&c.c4, &c.c6));
                    }
                }
            }
        }
    }
    set
}

/// The set of congruence classes realizable by integral models.
/// Computed once by brute force and cached.
pub fn admissible_classes() -> &'static HashSet<CongruenceClass> {
    static CLASSES: OnceLock<HashSet<CongruenceClass>> = OnceLock::new();
    CLASSES.get_or_init(build_admissible)
}

/// Flat lookup table over the 576 x 1728 residue grid.
pub fn admissible_table() -> &'static Vec<bool> {
    static TABLE: OnceLock<Vec<bool>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![false; 576 * 1728];
        for cl in admissible_classes() {
            t[(cl.c4_res as usize) * 1728 + cl.c6_res as usize] = true;
        }
        t
    })
}

pub fn is_admissible_residue(c4_res: u32, c6_res: u32) -> bool {
    admissible_table()[(c4_res as usize) * 1728 + c6_res as usize]
}

fn is_admissible_pair(c4: &BigInt, c6: &BigInt) -> bool {
    let cl = CongruenceClass::of(c4, c6);
    is_admissible_residue(cl.c4_res, cl.c6_res)
}

/// Minimality of an admissible (c4, c6) pair.
///
/// Non-minimality means some prime p has p^4 | c4 and p^12 | delta,
/// with the extra requirement at p = 2, 3 that (c4/p^4, c6/p^6) is
/// itself an admissible class.
pub fn is_minimal(c4: &BigInt, c6: &BigInt) -> Result<bool> {
    if !is_admissible_pair(c4, c6) {
        return Err(Error::InadmissiblePair(c4.to_string(), c6.to_string()));
    }
    let delta = discriminant_of(c4, c6)?;
    if delta.is_zero() {
        return Err(Error::SingularModel);
    }
    // only primes with p^12 <= |delta| can witness non-minimality
    let bound = nth_root_floor(&delta.abs(), 12);
    let mut p = BigInt::from(2);
    while p <= bound {
        if prime_reduces(c4, c6, &delta, &p) {
            return Ok(false);
        }
        p = next_prime(&p);
    }
    Ok(true)
}

fn prime_reduces(c4: &BigInt, c6: &BigInt, delta: &BigInt, p: &BigInt) -> bool {
    let p4 = p.pow(4);
    let p6 = p.pow(6);
    let p12 = p.pow(12);
    if !(c4 % &p4).is_zero() || !(delta % &p12).is_zero() || !(c6 % &p6).is_zero() {
        return false;
    }
    if *p >= BigInt::from(5) {
        return true;
    }
    is_admissible_pair(&(c4 / &p4), &(c6 / &p6))
}

fn next_prime(p: &BigInt) -> BigInt {
    let mut q = p + 1;
    while !is_small_prime(&q) {
        q += 1;
    }
    q
}

fn is_small_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 1;
    }
    true
}

/// Floor of the k-th root of a nonnegative integer.
pub fn nth_root_floor(n: &BigInt, k: u32) -> BigInt {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut lo = BigInt::from(1);
    let mut hi = BigInt::from(2);
    while hi.pow(k) <= *n {
        hi = &hi * 2;
    }
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
