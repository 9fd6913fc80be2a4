use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const GENERATOR_NAME: &str = "ChaCha8 (stream per replicate)";

/// Independent generator for replicate `index` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
