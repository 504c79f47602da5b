//! Counter-based RNG streams.
//!
//! Every simulation stream is a ChaCha8 keystream keyed by the root seed and
//! selected by a 64-bit stream id, so trial chunks can be generated in any
//! order (or concurrently) and still reproduce bit-for-bit. The sampling
//! oracles draw from a PCG family instead so they never share randomness with
//! the simulator they check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_pcg::Pcg64;

/// Random source of the link-level simulator.
pub type SimRng = ChaCha8Rng;

/// Random source of the moment oracles.
pub type OracleRng = Pcg64;

/// Stream for trial chunk `chunk` of sweep point `point`.
pub fn sim_stream(seed: u64, point: u32, chunk: u32) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | chunk as u64);
    rng
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent oracle stream; `stream` separates concurrent oracle draws.
///
/// PCG streams that share a state and differ only in the increment are
/// correlated, so (seed, stream) is hashed into a full 256-bit seed instead.
pub fn oracle_stream(seed: u64, stream: u64) -> OracleRng {
    Pcg64::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}
