//! Random-matrix vanishing model: Frobenius traces by character sums,
//! the arithmetic local factors F(p) and their truncated product, the
//! discretisation threshold, the vanishing-probability formula, the
//! scale integral behind the X^{19/24} (log X)^{3/8} prediction, and
//! symmetric-power exponents.

use crate::arith::primes_up_to;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::period::{lambda_of_mu, profile_neg, real_period, PeriodInput};
use crate::special::{agm, alpha_constants, quadrature};
use num::bigint::BigInt;
use num::{Integer, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Default largest prime for which a_p is computed (O(p) per prime).
pub const DEFAULT_AP_BOUND: u64 = 10_000;

/// One Euler factor of the arithmetic correction alpha_A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFactor {
    pub p: u64,
    pub a_p: i64,
    pub good_reduction: bool,
    pub f_p: f64,
}

/// a_p = p + 1 - #E(F_p), the singular point counted once when the
/// reduction is bad. This single definition yields the usual trace for
/// good reduction and 0 / +1 / -1 for additive / split / nonsplit
/// multiplicative reduction.
pub fn trace_of_frobenius(curve: &Curve, p: u64, p_bound: u64) -> Result<i64> {
    if p > p_bound {
        return Err(Error::BudgetExceeded(
            format!("a_p at p = {p} exceeds the configured bound {p_bound}"),
            p as f64,
        ));
    }
    if p < 2 {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p == 2 {
        // brute force over the full Weierstrass equation
        let m = |x: &BigInt| x.mod_floor(&BigInt::from(2)).to_i64().unwrap();
        let (a1, a2, a3, a4, a6) =
            (m(&curve.a1), m(&curve.a2), m(&curve.a3), m(&curve.a4), m(&curve.a6));
        let mut n = 1i64; // point at infinity
        for x in 0i64..2 {
            for y in 0i64..2 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(2) == 0 {
                    n += 1;
                }
            }
        }
        return Ok(2 + 1 - n);
    }
    // odd p: complete the square; (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6,
    // so #affine = sum_x (1 + chi(f(x))) and a_p = -sum_x chi(f(x)).
    let m = |v: &BigInt| v.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let (b2, b4, b6) = (m(&curve.b2), m(&curve.b4), m(&curve.b6));
    Ok(-chi_sum_quartic(p, 4 % p, b2, (2 * b4) % p, b6 % p))
}

/// -a_p for y^2 = c3 x^3 + c2 x^2 + c1 x + c0 over F_p (odd p), via a
/// quadratic-character table: sum_x chi(f(x)).
fn chi_sum_quartic(p: u64, c3: u64, c2: u64, c1: u64, c0: u64) -> i64 {
    // chi table: chi[0] = 0, chi[r] = +-1
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    let mut s = 0u64;
    for y in 1..=(p / 2) {
        s = (s + 2 * y - 1) % p; // y^2 mod p incrementally
        chi[s as usize] = 1;
    }
    let mut total = 0i64;
    for x in 0..p {
        let x = x as u128;
        let f = (((c3 as u128 * x + c2 as u128) % p as u128 * x + c1 as u128) % p as u128 * x
            + c0 as u128)
            % p as u128;
        total += chi[f as usize] as i64;
    }
    total
}

/// L_p(X)^{-1}: 1 - a_p X + p X^2 for good reduction, 1 - a_p X for bad.
fn l_inverse(p: u64, a_p: i64, good: bool, x: f64) -> f64 {
    if good {
        1.0 - a_p as f64 * x + p as f64 * x * x
    } else {
        1.0 - a_p as f64 * x
    }
}

fn f_p_value(p: u64, a_p: i64, good: bool) -> f64 {
    let pf = p as f64;
    let bracket = 1.0 / pf
        + l_inverse(p, a_p, good, 1.0 / pf).sqrt() / 2.0
        + l_inverse(p, a_p, good, -1.0 / pf).sqrt() / 2.0;
    (1.0 - 1.0 / pf).powf(0.375) * (pf / (pf + 1.0)) * bracket
}

/// The arithmetic factor F(p) of the vanishing model.
pub fn local_factor(curve: &Curve, p: u64, p_bound: u64) -> Result<LocalFactor> {
    let a_p = trace_of_frobenius(curve, p, p_bound)?;
    let good = !curve.delta.mod_floor(&BigInt::from(p)).is_zero();
    if good {
        let bound = 2.0 * (p as f64).sqrt();
        if (a_p as f64).abs() > bound {
            return Err(Error::ConsistencyCheck(format!(
                "Hasse bound violated at p = {p}: a_p = {a_p}"
            )));
        }
    }
    Ok(LocalFactor { p, a_p, good_reduction: good, f_p: f_p_value(p, a_p, good) })
}

/// Truncated product alpha_A = prod_{p <= p_max} F(p).
pub fn alpha_a(curve: &Curve, p_max: u64) -> Result<f64> {
    if curve.is_singular() {
        return Err(Error::SingularModel);
    }
    let mut prod = 1.0;
    for p in primes_up_to(p_max.min(DEFAULT_AP_BOUND)) {
        prod *= local_factor(curve, p, DEFAULT_AP_BOUND)?.f_p;
    }
    Ok(prod)
}

/// Exact residue average of F over all p^2 pairs (c4, c6) mod p
/// (singular reduction included), with the non-minimal mass (density
/// p^{-10}, all of it additive with a_p = 0) removed by the kappa_p
/// conditioning:
///   average_F(p) = kappa_p (sum F / p^2 - (1-1/p)^{3/8} / p^{10}).
pub fn average_f(p: u64) -> Result<f64> {
    if p < 5 {
        return Err(Error::UnsupportedPrime(p));
    }
    let pf = p as f64;
    let kap = 1.0 / (1.0 - pf.powi(-10));
    let mut sum = 0.0;
    for c4 in 0..p {
        for c6 in 0..p {
            sum += f_p_value_of_pair(p, c4, c6);
        }
    }
    // additive bad reduction with a_p = 0 gives F = (1-1/p)^{3/8}
    let f_additive = (1.0 - 1.0 / pf).powf(0.375);
    Ok(kap * (sum / (pf * pf) - f_additive / pf.powi(10)))
}

/// F(p) for the class of (c4, c6) mod p, via the short model
/// y^2 = x^3 - 27 c4 x - 54 c6 (the u = 6 rescaling, isomorphic over Q).
fn f_p_value_of_pair(p: u64, c4: u64, c6: u64) -> f64 {
    let a = (27 * (p - c4 % p)) % p;
    let b = (54 * (p - c6 % p)) % p;
    let a_p = -chi_sum_quartic(p, 1, 0, a, b);
    // delta ~ c4^3 - c6^2 up to the unit 1728
    let good = (mulm(mulm(c4, c4, p), c4, p) + p - mulm(c6, c6, p) % p) % p != 0;
    f_p_value(p, a_p, good)
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Threshold and probability of the discretised vanishing model.
#[derive(Debug, Clone, Copy)]
pub struct VanishingModel {
    pub m: u64,
    pub alpha_r: f64,
    pub alpha_a_trunc: f64,
    pub omega_re: f64,
    pub tamagawa_product: u64,
    pub threshold: f64,
    pub probability: f64,
}

/// Configuration knobs of `vanishing_probability`.
#[derive(Debug, Clone, Copy)]
pub struct VanishingOptions {
    /// torsion order T; the threshold carries a 1/T^2
    pub torsion: u64,
    /// stand-in Tamagawa contribution of p = 2 and 3 (closed forms
    /// exclude them); defaults to 1
    pub tamagawa_23: u64,
    /// truncation of the alpha_A Euler product
    pub p_max: u64,
}

impl Default for VanishingOptions {
    fn default() -> Self {
        VanishingOptions { torsion: 1, tamagawa_23: 1, p_max: 100 }
    }
}

/// min(1, alpha_R alpha_A sqrt(Omega_re tau / T^2) M^{3/8}) with
/// M = max(1, floor(log |delta|)); tau is the Tamagawa product over
/// p >= 5 dividing delta, times the infinite-place factor (2 when
/// delta > 0, 1 when delta < 0), times the p = 2,3 stand-in.
pub fn vanishing_probability(curve: &Curve, opts: &VanishingOptions) -> Result<VanishingModel> {
    if curve.is_singular() {
        return Err(Error::SingularModel);
    }
    if opts.torsion == 0 {
        return Err(Error::Domain("torsion order must be >= 1".into()));
    }
    let abs_delta = curve
        .delta
        .abs()
        .to_f64()
        .ok_or_else(|| Error::Domain("delta out of f64 range".into()))?;
    let m = (abs_delta.ln().floor().max(1.0)) as u64;
    let omega = real_period(PeriodInput::of_curve(curve)?)?;
    let mut tau = opts.tamagawa_23;
    for (p, _) in factor_u64(delta_magnitude(curve)?)? {
        if p < 5 {
            continue;
        }
        tau *= crate::localmodel::tamagawa(p, &curve.c4, &curve.c6, &curve.delta)?;
    }
    if curve.delta.is_positive() {
        tau *= 2;
    }
    let alpha_r = alpha_constants()?.alpha_r_hat;
    let alpha_a_trunc = alpha_a(curve, opts.p_max)?;
    let threshold = omega * tau as f64 / (opts.torsion as f64 * opts.torsion as f64);
    let probability =
        (alpha_r * alpha_a_trunc * threshold.sqrt() * (m as f64).powf(0.375)).min(1.0);
    Ok(VanishingModel {
        m,
        alpha_r,
        alpha_a_trunc,
        omega_re: omega,
        tamagawa_product: tau,
        threshold,
        probability,
    })
}

fn delta_magnitude(curve: &Curve) -> Result<u64> {
    curve
        .delta
        .abs()
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded("delta too large to factor".into(), f64::INFINITY))
}

/// Factorization by trial division to 10^6; a larger leftover must be
/// prime (one factor) or the budget is exceeded.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        if n < 1_000_000_000_000 {
            out.push((n, 1)); // no factor <= 10^6, so prime
        } else {
            return Err(Error::BudgetExceeded(
                format!("residual cofactor {n} too large to certify prime"),
                n as f64,
            ));
        }
    }
    Ok(out)
}

/// The scale integral int_1^X (log t)^{3/8} t^{-5/24} dt, which carries
/// the whole X-dependence of the vanishing-count prediction.
pub fn scale_integral(x: f64) -> Result<f64> {
    if x < 2.0 {
        return Err(Error::Domain(format!("scale integral needs X >= 2, got {x}")));
    }
    // t = e^u: int_0^{log X} u^{3/8} e^{19u/24} du
    let q = quadrature(|u| u.powf(0.375) * (19.0 * u / 24.0).exp(), 0.0, x.ln(), 1e-10)?;
    Ok(q.value)
}

/// The shape-constant integral over the positive-discriminant shapes:
/// int_0^inf 432 sqrt(pi) dmu / (sqrt(agm(sqrt lambda, sqrt(lambda+mu)))
/// sqrt(mu^4 + mu)), lambda on the quarter-constraint curve.
pub fn mu_shape_integral() -> Result<f64> {
    let q = quadrature(
        |mu| {
            let l = match lambda_of_mu(mu) {
                Ok(l) => l,
                Err(_) => return 0.0,
            };
            let a = match agm(l.sqrt(), (l + mu).sqrt()) {
                Ok(a) => a,
                Err(_) => return 0.0,
            };
            432.0 * std::f64::consts::PI.sqrt() / (a.sqrt() * (mu.powi(4) + mu).sqrt())
        },
        0.0,
        f64::INFINITY,
        1e-9,
    )?;
    Ok(q.value)
}

/// The analogous shape integral over negative-discriminant curves, in
/// (|delta|, c) coordinates: c4 = D^{1/3} A(c), c6 = D^{1/2} B(c) with
///   A(c) = 12 (3c^2/4 - 1)(1 + 9c^2/4)^{-2/3}
///   B(c) = 108 c (c^2/4 + 1)/(1 + 9c^2/4)
/// (so A^3 - B^2 = -1728). The D^{-1/6}-stripped Jacobian
/// H(c) = |A B'/3 - A' B/2| collapses symbolically: the c^6 terms
/// cancel and the quartic factors as 27 (9c^2 + 4)^2, leaving
/// H(c) = 432 (1 + 9c^2/4)^{-2/3}.
pub fn c_shape_integral() -> Result<f64> {
    let integrand = |c: f64| -> f64 {
        match profile_neg(c) {
            Ok(v) => shape_jacobian(c) * v.sqrt(),
            Err(_) => 0.0,
        }
    };
    // H sqrt(profile) ~ |c|^{-3/2} sqrt(log |c|); fold each tail with
    // c = 1/s^2 so the mapped integrand stays bounded
    let mut total = 0.0;
    for side in [-1.0, 1.0] {
        total += quadrature(|c| integrand(side * c), 0.0, 1.0, 1e-9)?.value;
        total += quadrature(
            |s| integrand(side / (s * s)) * 2.0 / (s * s * s),
            0.0,
            1.0,
            1e-9,
        )?
        .value;
    }
    Ok(total)
}

pub fn shape_a(c: f64) -> f64 {
    12.0 * (0.75 * c * c - 1.0) * (1.0 + 2.25 * c * c).powf(-2.0 / 3.0)
}

pub fn shape_b(c: f64) -> f64 {
    108.0 * c * (0.25 * c * c + 1.0) / (1.0 + 2.25 * c * c)
}

/// |A B'/3 - A' B/2| in closed form.
pub fn shape_jacobian(c: f64) -> f64 {
    432.0 * (1.0 + 2.25 * c * c).powf(-2.0 / 3.0)
}

/// Unnormalized count of even-parity curves with vanishing central
/// value, among |delta| < X: shape-constant times the scale integral.
/// The leading constant is not pinned down, so only ratios are
/// meaningful.
pub fn w_hat_integral(x: f64, sign: i32) -> Result<f64> {
    static SHAPES: OnceLock<(f64, f64)> = OnceLock::new();
    let (pos, neg) = {
        if SHAPES.get().is_none() {
            let v = (mu_shape_integral()?, c_shape_integral()?);
            let _ = SHAPES.set(v);
        }
        *SHAPES.get().unwrap()
    };
    let shape = match sign {
        1 => pos,
        -1 => neg,
        _ => return Err(Error::Domain(format!("sign must be +-1, got {sign}"))),
    };
    Ok(shape * scale_integral(x)?)
}

/// X^{19/24} (log X)^{3/8}, the predicted rank-2 count shape for curves
/// ordered by |discriminant| (unnormalized).
pub fn predicted_r(x: f64) -> Result<f64> {
    if x < 2.0 {
        return Err(Error::Domain(format!("prediction needs X >= 2, got {x}")));
    }
    Ok(x.powf(19.0 / 24.0) * x.ln().powf(0.375))
}

/// Same shape for ordering by conductor (unnormalized).
pub fn predicted_r_conductor(x: f64) -> Result<f64> {
    predicted_r(x)
}

/// Exponent 5/6 - k^2/24 governing extra vanishing of the (2k-1)st
/// symmetric power; nonpositive means finitely many curves.
pub fn sym_power_exponent(k: u32) -> (f64, bool) {
    let e = 5.0 / 6.0 - (k as f64) * (k as f64) / 24.0;
    (e, e <= 0.0)
}
