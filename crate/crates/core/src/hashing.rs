//! Counter-based hashing for deterministic sketch entries.
//!
//! Sketch columns are regenerated on demand from `(seed, edge_id, block)`
//! instead of storing projection matrices, so a sketch's footprint is its
//! accumulator alone.

/// SplitMix64 finalizer; a full-avalanche mix of the input word.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64 independent sign bits for rows `64*block..64*block+64` of the column
/// keyed by `(seed, item)`.
#[inline]
pub fn sign_block(seed: u64, item: u64, block: u64) -> u64 {
    splitmix64(seed ^ splitmix64(item.wrapping_mul(0xd134_2543_de82_ef95) ^ block.rotate_left(32)))
}

/// Fills `out[i] += scale * s_i` where `s_i ∈ {+1,-1}` is the i-th sign of the
/// keyed column. `sub` flips the sign (the other endpoint of an incidence row).
pub fn accumulate_signed<S: crate::scalar::Scalar>(out: &mut [S], seed: u64, item: u64, scale: S, sub: bool) {
    let mut i = 0;
    let mut block = 0;
    while i < out.len() {
        let mut bits = sign_block(seed, item, block);
        if sub {
            bits = !bits;
        }
        let top = (out.len() - i).min(64);
        for j in 0..top {
            if bits >> j & 1 == 1 {
                out[i + j] = out[i + j] + scale;
            } else {
                out[i + j] = out[i + j] - scale;
            }
        }
        i += top;
        block += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_balanced() {
        assert_eq!(sign_block(7, 3, 0), sign_block(7, 3, 0));
        assert_ne!(sign_block(7, 3, 0), sign_block(7, 4, 0));
        assert_ne!(sign_block(7, 3, 0), sign_block(8, 3, 0));
        // Signs should be roughly balanced over many items.
        let ones: u32 = (0..512).map(|it| sign_block(1, it, 0).count_ones()).sum();
        let total = 512 * 64;
        assert!((ones as f64 / total as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn accumulate_adds_and_cancels() {
        let mut a = vec![0.0_f64; 100];
        accumulate_signed(&mut a, 9, 5, 1.0, false);
        let mut b = a.clone();
        accumulate_signed(&mut b, 9, 5, 1.0, true);
        assert!(b.iter().all(|&x| x == 0.0));
        assert!(a.iter().all(|&x| x == 1.0 || x == -1.0));
    }
}
