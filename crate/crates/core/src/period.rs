//! Real period of y^2 = 4x^3 - (c4/12)x - c6/216 via the AGM, for both
//! discriminant signs, together with the root-quotient coordinates and
//! the scale-invariant profile Omega_re |delta|^{1/12}.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::special::{agm, maximize_1d, quadrature};
use num::ToPrimitive;
use std::f64::consts::PI;

/// Roots of the period cubic. For delta > 0 the three real roots in
/// decreasing order; for delta < 0 the real root and the complex pair
/// summarized by (real root r, imaginary part Z > 0, c = r/Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootData {
    /// e1 > e2 > e3
    ThreeReal { e1: f64, e2: f64, e3: f64 },
    /// complex pair at -r/2 +- iZ
    OneReal { r: f64, z: f64, c: f64 },
}

/// Floating-point view of a curve: (c4, c6, delta), delta exact in sign.
#[derive(Debug, Clone, Copy)]
pub struct PeriodInput {
    pub c4: f64,
    pub c6: f64,
    pub delta: f64,
}

impl PeriodInput {
    pub fn of_curve(curve: &Curve) -> Result<PeriodInput> {
        if curve.is_singular() {
            return Err(Error::SingularModel);
        }
        let get = |x: &num::BigInt, name: &str| -> Result<f64> {
            x.to_f64().ok_or_else(|| Error::Domain(format!("{name} out of f64 range")))
        };
        Ok(PeriodInput {
            c4: get(&curve.c4, "c4")?,
            c6: get(&curve.c6, "c6")?,
            delta: get(&curve.delta, "delta")?,
        })
    }
}

/// Roots of x^3 + p x + q (the monic form of the period cubic, with
/// p = -c4/48, q = -c6/864), to near machine precision.
///
/// Trigonometric branch for three real roots, Cardano for one, and a
/// Newton polish on each root: the AGM inputs are root gaps, which must
/// stay accurate for near-degenerate cubics.
pub fn real_roots(input: PeriodInput) -> Result<RootData> {
    if input.delta == 0.0 {
        return Err(Error::SingularModel);
    }
    let p = -input.c4 / 48.0;
    let q = -input.c6 / 864.0;
    let polish = |x0: f64| -> f64 {
        let mut x = x0;
        for _ in 0..3 {
            let f = (x * x + p) * x + q;
            let df = 3.0 * x * x + p;
            if df.abs() > 0.0 && f.is_finite() {
                let step = f / df;
                if step.abs() < 1.0 + x.abs() {
                    x -= step;
                }
            }
        }
        x
    };
    if input.delta > 0.0 {
        // three real roots: 2 sqrt(-p/3) cos(theta/3 - 2 pi k/3)
        if !(p < 0.0) {
            return Err(Error::Conditioning(format!(
                "delta > 0 requires p = -c4/48 < 0, got {p}"
            )));
        }
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / p) * (-3.0 / p).sqrt() / 2.0;
        let theta = arg.clamp(-1.0, 1.0).acos();
        let mut roots = [
            polish(m * (theta / 3.0).cos()),
            polish(m * ((theta - 2.0 * PI) / 3.0).cos()),
            polish(m * ((theta - 4.0 * PI) / 3.0).cos()),
        ];
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(RootData::ThreeReal { e1: roots[0], e2: roots[1], e3: roots[2] })
    } else {
        // Cardano with the dominant cube root taken first to avoid
        // cancellation between the two radicals
        let disc = q * q / 4.0 + p * p * p / 27.0;
        debug_assert!(disc >= 0.0 || disc.abs() < 1e-9 * (q * q / 4.0).abs().max(1.0));
        let s = disc.max(0.0).sqrt();
        let u = -q / 2.0;
        let big = if u >= 0.0 { u + s } else { u - s };
        let a = big.cbrt();
        let b = if a == 0.0 { 0.0 } else { -p / (3.0 * a) };
        let r = polish(a + b);
        let z2 = 0.75 * r * r + p;
        if !(z2 > 0.0) {
            return Err(Error::Conditioning(format!(
                "complex pair collapsed (Z^2 = {z2}); delta sign inconsistent"
            )));
        }
        let z = z2.sqrt();
        Ok(RootData::OneReal { r, z, c: r / z })
    }
}

/// Real period Omega_re of y^2 = 4x^3 - (c4/12)x - c6/216.
///
/// delta > 0: pi / agm(sqrt(e1-e2), sqrt(e1-e3)).
/// delta < 0: the profile formula in c, divided by |delta|^{1/12}.
pub fn real_period(input: PeriodInput) -> Result<f64> {
    match real_roots(input)? {
        RootData::ThreeReal { e1, e2, e3 } => {
            Ok(PI / agm((e1 - e2).sqrt(), (e1 - e3).sqrt())?)
        }
        RootData::OneReal { c, .. } => {
            Ok(profile_neg(c)? / input.delta.abs().powf(1.0 / 12.0))
        }
    }
}

/// Quadrature oracle for the real period: 2 int_{x0}^inf dx / sqrt(rhs),
/// desingularized by x = x0 + s^2. Slow; used for cross-validation.
pub fn real_period_by_quadrature(input: PeriodInput, tol: f64) -> Result<f64> {
    let roots = real_roots(input)?;
    let q = match roots {
        RootData::ThreeReal { e1, e2, e3 } => quadrature(
            move |s| 2.0 / ((s * s + e1 - e2) * (s * s + e1 - e3)).sqrt(),
            0.0,
            f64::INFINITY,
            tol,
        )?,
        RootData::OneReal { r, .. } => {
            let p = -input.c4 / 48.0;
            quadrature(
                move |s| {
                    let x = r + s * s;
                    2.0 / (x * x + r * x + r * r + p).sqrt()
                },
                0.0,
                f64::INFINITY,
                tol,
            )?
        }
    };
    Ok(q.value)
}

/// Root quotient t = (e1-e2)/(e1-e3) in (0,1); delta > 0 only.
pub fn root_quotient(input: PeriodInput) -> Result<f64> {
    match real_roots(input)? {
        RootData::ThreeReal { e1, e2, e3 } => Ok((e1 - e2) / (e1 - e3)),
        RootData::OneReal { .. } => {
            Err(Error::Domain("root quotient needs delta > 0".into()))
        }
    }
}

/// Renormalized coordinate C = 1/2 + arctan(c)/pi in (0,1); delta < 0 only.
pub fn c_param(input: PeriodInput) -> Result<f64> {
    match real_roots(input)? {
        RootData::OneReal { c, .. } => Ok(0.5 + c.atan() / PI),
        RootData::ThreeReal { .. } => Err(Error::Domain("C-parameter needs delta < 0".into())),
    }
}

/// Omega_re delta^{1/12} as a function of the root quotient t in (0,1):
/// 2^{1/3} pi (t - t^2)^{1/6} / agm(1, sqrt t).
pub fn profile_pos(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("profile needs t in (0,1), got {t}")));
    }
    Ok(2f64.powf(1.0 / 3.0) * PI * (t - t * t).powf(1.0 / 6.0) / agm(1.0, t.sqrt())?)
}

/// Omega_re |delta|^{1/12} as a function of c = r/Z (delta < 0):
/// pi sqrt2 / ((1 + 9c^2/4)^{1/12} agm(1, sqrt(1/2 + 3c/(4 sqrt(1+9c^2/4))))).
pub fn profile_neg(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::Domain(format!("profile needs finite c, got {c}")));
    }
    let w = (1.0 + 2.25 * c * c).sqrt();
    // (1 + 9c^2/4)^{1/12} = w^{1/6}. For c < 0 the direct form
    // 1/2 + 3c/(4w) cancels catastrophically; rationalize it:
    // (w + 1.5c)/(2w) = 1/(2w (w - 1.5c)) when c < 0.
    let inner = if c < 0.0 {
        1.0 / (2.0 * w * (w - 1.5 * c))
    } else {
        0.5 + 0.75 * c / w
    };
    Ok(PI * 2f64.sqrt() / (w.powf(1.0 / 6.0) * agm(1.0, inner.sqrt())?))
}

/// (argmax, max) of profile_pos on (0,1).
pub fn profile_pos_max() -> (f64, f64) {
    let f = |t: f64| profile_pos(t).unwrap_or(0.0);
    let (t0, _) = maximize_1d(f, 1e-9, 1.0 - 1e-9, 1e-12);
    let t = polish_argmax(f, t0, 2e-3, 3e-4);
    (t, f(t))
}

/// (argmax, max) of profile_neg; the maximum sits far out on the
/// negative c-axis, so the bracket is wide.
pub fn profile_neg_max() -> (f64, f64) {
    let f = |c: f64| profile_neg(c).unwrap_or(0.0);
    let (c0, _) = maximize_1d(f, -1000.0, 0.0, 1e-9);
    let c = polish_argmax(f, c0, 0.1, 0.02);
    (c, f(c))
}

/// Golden-section argmaxes stall at the sqrt(eps) noise floor of f;
/// bisecting a five-point derivative stencil goes much deeper: the
/// O(h^4 f''''') truncation permits a large h, which in turn crushes
/// the eps f / h roundoff.
fn polish_argmax<F: Fn(f64) -> f64>(f: F, x0: f64, radius: f64, h: f64) -> f64 {
    let g = |x: f64| {
        (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
    };
    let (mut lo, mut hi) = (x0 - radius, x0 + radius);
    let (mut glo, ghi) = (g(lo), g(hi));
    if !(glo > 0.0 && ghi < 0.0) {
        return x0; // maximum not interior to the bracket; keep the coarse value
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let _ = glo;
    0.5 * (lo + hi)
}

/// The normalized root gaps for delta > 0:
/// lambda = (e1-e2)/delta^{1/6}, mu = (e2-e3)/delta^{1/6},
/// satisfying mu lambda (lambda + mu) = 1/4.
pub fn mu_coordinates(input: PeriodInput) -> Result<(f64, f64)> {
    match real_roots(input)? {
        RootData::ThreeReal { e1, e2, e3 } => {
            let scale = input.delta.powf(1.0 / 6.0);
            Ok(((e1 - e2) / scale, (e2 - e3) / scale))
        }
        RootData::OneReal { .. } => Err(Error::Domain("mu-coordinates need delta > 0".into())),
    }
}

/// lambda as a function of mu on the constraint curve
/// mu lambda (lambda + mu) = 1/4: lambda = (sqrt(mu^4 + mu) - mu^2)/(2 mu).
pub fn lambda_of_mu(mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("lambda(mu) needs mu > 0, got {mu}")));
    }
    Ok(((mu.powi(4) + mu).sqrt() - mu * mu) / (2.0 * mu))
}
