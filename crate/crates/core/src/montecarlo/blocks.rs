use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trials per independently seeded block.
pub const BLOCK_SIZE: u64 = 4096;

/// The random stream for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `f(rng, block_trials)` for every block and returns the results in
/// block order.
pub(crate) fn map_blocks<T, F>(trials: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync + Send,
{
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let run = |b: u64| {
        let len = BLOCK_SIZE.min(trials - b * BLOCK_SIZE);
        f(&mut block_rng(seed, b), len)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks).map(run).collect()
    }
}
