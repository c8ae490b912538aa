//! Seeded random sampling helpers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{CMat, RMat, RVec};
use crate::C64;

pub type Rng = ChaCha8Rng;

/// Independent stream `stream` derived from `seed`.
pub fn seeded(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal(rng: &mut Rng) -> f64 {
    let v: f64 = StandardNormal.sample(rng);
    v
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    use rand::Rng as _;
    rng.random_range(lo..hi)
}

pub fn normal_vec(rng: &mut Rng, n: usize) -> RVec {
    RVec::from_fn(n, |_, _| normal(rng))
}

pub fn normal_mat(rng: &mut Rng, r: usize, c: usize) -> RMat {
    RMat::from_fn(r, c, |_, _| normal(rng))
}

pub fn complex_normal_mat(rng: &mut Rng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMat {
    let z = complex_normal_mat(rng, n, n);
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q.clone();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    out
}
