use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AgreementModel, PairwiseModel};

/// SplitMix64 finalizer; used to derive per-instance seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of instance `k` at edge strength `w`:
/// `base ^ splitmix64(w.to_bits() ^ splitmix64(k))`.
pub fn instance_seed(base: u64, w: f64, k: u64) -> u64 {
    base ^ splitmix64(w.to_bits() ^ splitmix64(k))
}

/// Complete graph `K_n` in the agreement parameterization with
/// `θ'_i ~ U(-1, 1)` and `W'_ij ~ U(-w, w)`, drawn from a ChaCha8 stream
/// seeded with `seed`: all node weights first, then edges in lexicographic
/// order.
pub fn random_agreement(n: usize, w: f64, seed: u64) -> AgreementModel {
    assert!(w >= 0.0 && w.is_finite(), "edge strength must be finite and nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let wij = if w > 0.0 { rng.gen_range(-w..w) } else { 0.0 };
            edges.push((i, j, wij));
        }
    }
    AgreementModel { theta, edges }
}

/// [`random_agreement`] converted to the `x_i`, `x_i x_j` basis.
pub fn random_instance(n: usize, w: f64, seed: u64) -> PairwiseModel {
    random_agreement(n, w, seed)
        .to_pairwise()
        .expect("complete graph is well formed")
}
