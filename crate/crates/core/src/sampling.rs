//! Seeded random inputs: admissible Hessians, orthogonal frames and sample clouds.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{norm, DenseMatrix, SymMatrix};
use crate::tau::{Branch, ConeSide, TauParams};

/// Deterministic generator for a (seed, stream) pair, so parallel trials do
/// not share state.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Eigenvalue strictly inside the selected cone component, kept away from
/// its finite ends.
pub fn admissible_eigenvalue<R: Rng>(tp: &TauParams, rng: &mut R) -> f64 {
    let cone = tp.cone();
    let span = 4.0;
    let margin = 0.05;
    match (cone.lower.is_finite(), cone.upper.is_finite()) {
        (true, true) => {
            let w = cone.upper - cone.lower;
            rng.gen_range(cone.lower + margin * w..cone.upper - margin * w)
        }
        (true, false) => cone.lower + rng.gen_range(margin..span),
        (false, true) => cone.upper - rng.gen_range(margin..span),
        (false, false) => rng.gen_range(-span..span),
    }
}

/// Haar-like orthogonal matrix as a product of random Householder reflections.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DenseMatrix {
    let mut q = DenseMatrix::identity(n);
    for _ in 0..n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm(&v);
        if len < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|c| *c /= len);
        let reflect = DenseMatrix::from_fn(n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            id - 2.0 * v[i] * v[j]
        });
        q = q.matmul(&reflect);
    }
    q
}

/// Symmetric matrix with admissible spectrum in a random frame. For
/// two-cone branches the side is chosen at random and returned.
pub fn random_admissible_matrix<R: Rng>(tp: &TauParams, n: usize, rng: &mut R) -> (TauParams, SymMatrix) {
    let tp = if tp.branch().has_two_cones() {
        let side = if rng.gen_bool(0.5) {
            ConeSide::Upper
        } else {
            ConeSide::Lower
        };
        tp.with_side(side)
    } else {
        *tp
    };
    let diag: Vec<f64> = (0..n).map(|_| admissible_eigenvalue(&tp, rng)).collect();
    let q = random_orthogonal(n, rng);
    (tp, SymMatrix::from_eigen(&q, &diag))
}

/// Uniform sample from the closed ball of the given radius.
pub fn random_point_in_ball<R: Rng>(n: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let r = norm(&p);
        if r <= 1.0 {
            return p.into_iter().map(|c| c * radius).collect();
        }
    }
}

/// Random parameters for a branch: a uniformly drawn angle on its open
/// interval (seams return the seam).
pub fn random_params<R: Rng>(branch: Branch, rng: &mut R) -> TauParams {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let pick = |rng: &mut R, lo: f64, hi: f64| {
        let w = hi - lo;
        rng.gen_range(lo + 0.05 * w..hi - 0.05 * w)
    };
    match branch {
        Branch::Log => TauParams::from_angle(pick(rng, 0.0, FRAC_PI_4)).expect("interior angle"),
        Branch::Arctan => TauParams::from_angle(pick(rng, FRAC_PI_4, FRAC_PI_2)).expect("interior angle"),
        Branch::Negative => TauParams::from_angle(pick(rng, -FRAC_PI_4, 0.0)).expect("interior angle"),
        other => TauParams::representative(other),
    }
}
