use rand::Rng;

use crate::protocol::Position;

/// Unit-disk delivery with independent loss: never beyond `range`,
/// otherwise delivered with probability `1 - loss`.
pub fn deliver<R: Rng + ?Sized>(
    sender: &Position,
    receiver: &Position,
    range: f64,
    loss: f64,
    rng: &mut R,
) -> bool {
    debug_assert!(range > 0.0);
    if sender.distance_to(receiver) > range {
        return false;
    }
    !rng.random_bool(loss.clamp(0.0, 1.0))
}

/// splitmix64 finalizer, used to derive independent stream seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream identified by `parts` under the run seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}
