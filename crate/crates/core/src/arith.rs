//! Small integer helpers shared by the enumeration and local-model code.

/// Primes up to `n` inclusive, by sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut m = p * p;
            while m <= n {
                sieve[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Smallest-prime-factor table for 0..=n.
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = (0..=n as u32).collect();
    let mut p = 2usize;
    while p * p <= n {
        if spf[p] == p as u32 {
            let mut m = p * p;
            while m <= n {
                if spf[m] == m as u32 {
                    spf[m] = p as u32;
                }
                m += p;
            }
        }
        p += 1;
    }
    spf
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u64 = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
/// Returns 1, -1, or 0.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    match mod_pow(a, (p - 1) / 2, p) {
        1 => 1,
        r if r == p - 1 => -1,
        _ => unreachable!("p must be an odd prime"),
    }
}

/// Floor of the integer square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    // polish: f64 seeds can be off by a couple of ulps at 2^100+
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Floor of the integer cube root of a nonnegative value.
pub fn icbrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).cbrt() as u128;
    while x > 0 && x * x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}
