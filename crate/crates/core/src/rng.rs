//! Deterministic seed derivation for parallel Monte Carlo.
//!
//! Every random stream in the crate is keyed by the master seed plus the
//! logical coordinates of the task that consumes it (replica index,
//! spatial coordinate, ...). Streams therefore never depend on thread
//! scheduling: replica 17 draws the same numbers whether it runs first,
//! last, or on another machine with a different `--threads` setting.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

// Domain tags keep e.g. replica 3 and coordinate 3 on distinct streams.
const DOMAIN_REPLICA: u64 = 0x52;
const DOMAIN_COORDINATE: u64 = 0x43;

/// SplitMix64 finaliser; a cheap bijective mixer with full avalanche.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed by absorbing a sequence of lane indices into the
/// master seed. Different lane sequences give unrelated child seeds.
pub fn derive_seed(master: u64, lanes: &[u64]) -> u64 {
    let mut state = mix(master.wrapping_add(GOLDEN));
    for &lane in lanes {
        state = mix(state ^ mix(lane.wrapping_add(GOLDEN)));
    }
    state
}

/// Seed for one Monte Carlo replica.
pub fn replica_seed(master: u64, replica: u64) -> u64 {
    derive_seed(master, &[DOMAIN_REPLICA, replica])
}

/// Seed for one coordinate of a multidimensional process.
pub fn coordinate_seed(master: u64, coordinate: u64) -> u64 {
    derive_seed(master, &[DOMAIN_COORDINATE, coordinate])
}

/// The generator used throughout the crate.
pub type Rng = ChaCha12Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
