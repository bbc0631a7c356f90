//! Deterministic seed derivation.
//!
//! Every randomized routine takes a seeded RNG; parallel or repeated tasks
//! derive fresh streams from a master seed plus a label and an index, so runs
//! reproduce exactly without shared RNG state.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 step; the standard 64-bit mixer.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a stream seed from `(master, label, index)`.
pub fn derive(master: u64, label: &str, index: u64) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        state ^= u64::from_le_bytes(word);
        out ^= splitmix64(&mut state);
    }
    state ^= index;
    out ^ splitmix64(&mut state)
}

/// RNG for a derived seed.
pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
