//! Shapes of rank-2 lattices of rational points: Gauss reduction of
//! Gram matrices to a point of the standard fundamental domain of the
//! modular group, the hyperbolic-measure distribution those shapes are
//! compared against, and CSV ingestion of height pairings.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gram matrix (g11 g12 / g12 g22) of a rank-2 height pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl GramMatrix {
    pub fn new(g11: f64, g12: f64, g22: f64) -> Result<GramMatrix> {
        if !(g11.is_finite() && g12.is_finite() && g22.is_finite()) {
            return Err(Error::Domain("Gram entries must be finite".into()));
        }
        let det = g11 * g22 - g12 * g12;
        if g11 <= 0.0 || det <= 0.0 {
            return Err(Error::Domain(format!(
                "not positive definite: g11 = {g11}, det = {det}"
            )));
        }
        if det / (g11 * g11) < 1e-12 && det / (g22 * g22) < 1e-12 {
            return Err(Error::Conditioning(format!(
                "near-degenerate pairing: det/g11^2 = {:e}",
                det / (g11 * g11)
            )));
        }
        Ok(GramMatrix { g11, g12, g22 })
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}

/// Shape point x + iy, 0 <= x <= 1/2, x^2 + y^2 >= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

/// Gauss reduction: translate by n = round(g12/g11), swap the basis
/// vectors while g22 < g11. The result satisfies |g12| <= g11/2 <= g22/2,
/// and the mirror z = (|g12| + i sqrt(det))/g11 lands in the closed
/// right half of the fundamental domain. Invariant under unimodular
/// basis change and under scaling of the pairing.
pub fn reduce(gram: &GramMatrix) -> Result<UpperHalfPoint> {
    let g = GramMatrix::new(gram.g11, gram.g12, gram.g22)?; // revalidate
    let (mut a, mut b, mut c) = (g.g11, g.g12, g.g22);
    for _ in 0..10_000 {
        let n = (b / a).round();
        c += n * (n * a - 2.0 * b);
        b -= n * a;
        if c < a {
            std::mem::swap(&mut a, &mut c);
        } else {
            let y2 = a * c - b * b;
            return Ok(UpperHalfPoint { x: (b / a).abs(), y: y2.max(0.0).sqrt() / a });
        }
    }
    Err(Error::Conditioning("reduction failed to terminate".into()))
}

/// Fraction of hyperbolic mass of the fundamental domain above height
/// Y: exactly 3/(pi Y) for Y >= 1.
pub fn haar_fraction_y_at_least(y: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain(format!("threshold must be >= 1, got {y}")));
    }
    Ok(3.0 / (std::f64::consts::PI * y))
}

/// Draw n shape points from the normalized hyperbolic measure on the
/// right half-domain: x uniform on (0, 1/2], y = (sqrt 3 / 2)/(1 - u)
/// (which is dy/y^2 above sqrt 3 / 2), rejecting x^2 + y^2 < 1.
/// Deterministic in the seed.
pub fn sample_haar(n: usize, seed: u64) -> Vec<UpperHalfPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y0 = 3f64.sqrt() / 2.0;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = 0.5 * (1.0 - rng.gen::<f64>()); // (0, 1/2]
        let y = y0 / (1.0 - rng.gen::<f64>());
        if x * x + y * y >= 1.0 {
            out.push(UpperHalfPoint { x, y });
        }
    }
    out
}

/// Histogram of x over [0, 1/2] for points with y >= 1 (the band where
/// the x-marginal of the hyperbolic measure is uniform).
pub fn bin_x(points: &[UpperHalfPoint], bins: usize) -> Result<Vec<u64>> {
    if bins == 0 {
        return Err(Error::Domain("need at least one bin".into()));
    }
    let mut counts = vec![0u64; bins];
    let mut kept = 0u64;
    for p in points {
        if p.y < 1.0 {
            continue;
        }
        if !(0.0..=0.5).contains(&p.x) {
            return Err(Error::Domain(format!("x = {} outside [0, 1/2]", p.x)));
        }
        let i = ((p.x * 2.0 * bins as f64) as usize).min(bins - 1);
        counts[i] += 1;
        kept += 1;
    }
    if kept == 0 {
        return Err(Error::Domain("no points with y >= 1".into()));
    }
    Ok(counts)
}

/// Parse lines "g11,g12,g22" (an optional header row with those names
/// is skipped, as are blank lines). Any malformed or non-positive-
/// definite row fails the whole ingest, with one message per bad line.
pub fn ingest_gram_csv(text: &str) -> Result<Vec<GramMatrix>> {
    let mut grams = Vec::new();
    let mut bad = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if idx == 0 && fields == ["g11", "g12", "g22"] {
            continue;
        }
        if fields.len() != 3 {
            bad.push(format!("line {}: expected 3 fields, got {}", idx + 1, fields.len()));
            continue;
        }
        let mut vals = [0.0f64; 3];
        let mut ok = true;
        for (v, f) in vals.iter_mut().zip(&fields) {
            match f.parse::<f64>() {
                Ok(x) => *v = x,
                Err(_) => {
                    bad.push(format!("line {}: unparseable number {f:?}", idx + 1));
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        match GramMatrix::new(vals[0], vals[1], vals[2]) {
            Ok(g) => grams.push(g),
            Err(e) => bad.push(format!("line {}: {e}", idx + 1)),
        }
    }
    if bad.is_empty() {
        Ok(grams)
    } else {
        Err(Error::CsvRows(bad))
    }
}
