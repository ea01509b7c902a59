//! Deterministic sample sets on the cut-plane.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutplane::{ComponentSignature, CutPlanePoint, Sign};
use crate::error::Result;

pub const DEFAULT_SEED: u64 = 0x4845_524c_474f_545a;

/// Real parts of the positivity grid.
pub const GRID_RE: [f64; 5] = [-5.0, -1.0, 0.0, 1.0, 5.0];
/// Imaginary parts of the positivity grid.
pub const GRID_IM: [f64; 4] = [0.1, 1.0, 4.0, 20.0];

/// Range of real parts for random points.
pub const RANDOM_RE: (f64, f64) = (-5.0, 5.0);
/// Range of `|Im z|` for random points; sampled log-uniformly.
pub const RANDOM_ABS_IM: (f64, f64) = (0.1, 10.0);

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Every point of `(GRID_RE + i GRID_IM)^n`.
pub fn upper_grid(n: usize) -> Result<Vec<CutPlanePoint>> {
    let axis: Vec<Complex64> = GRID_RE
        .iter()
        .flat_map(|&re| GRID_IM.iter().map(move |&im| Complex64::new(re, im)))
        .collect();
    let mut points = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|p: Vec<Complex64>| {
                axis.iter().map(move |&z| {
                    let mut q = p.clone();
                    q.push(z);
                    q
                })
            })
            .collect();
    }
    points.into_iter().map(CutPlanePoint::new).collect()
}

pub fn random_coordinate<R: Rng>(rng: &mut R, sign: Sign) -> Complex64 {
    let re = rng.gen_range(RANDOM_RE.0..RANDOM_RE.1);
    let (lo, hi) = (RANDOM_ABS_IM.0.ln(), RANDOM_ABS_IM.1.ln());
    let im = rng.gen_range(lo..hi).exp();
    match sign {
        Sign::Plus => Complex64::new(re, im),
        Sign::Minus => Complex64::new(re, -im),
    }
}

pub fn random_point<R: Rng>(rng: &mut R, signature: &ComponentSignature) -> CutPlanePoint {
    let coords = signature
        .signs()
        .iter()
        .map(|s| random_coordinate(rng, *s))
        .collect();
    CutPlanePoint::new(coords).expect("random coordinates are off the real axis")
}

/// `count` seeded random points in the given component. Each component draws
/// from its own stream, so adding components does not shift the others.
pub fn random_points(
    signature: &ComponentSignature,
    count: usize,
    seed: u64,
) -> Vec<CutPlanePoint> {
    let mut rng = rng(seed, signature.lower_index_set().mask());
    (0..count)
        .map(|_| random_point(&mut rng, signature))
        .collect()
}

pub fn random_upper(n: usize, count: usize, seed: u64) -> Vec<CutPlanePoint> {
    random_points(
        &ComponentSignature::from_signs(vec![Sign::Plus; n]),
        count,
        seed,
    )
}
