/// Engine limits shared by every computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest permutation degree (vector action or coset action) built.
    pub degree_limit: usize,
    /// Perfect groups up to this order get an exhaustive simplicity test.
    pub exhaustive_limit: u128,
    /// Pseudorandom elements drawn by the sampled simplicity test.
    pub sample_size: usize,
    /// Seed for every pseudorandom choice.
    pub seed: u64,
}

pub const DEFAULT_DEGREE_LIMIT: usize = 1 << 20;
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 100_000;

impl Default for Config {
    fn default() -> Self {
        Config {
            degree_limit: DEFAULT_DEGREE_LIMIT,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            sample_size: 64,
            seed: 0,
        }
    }
}
