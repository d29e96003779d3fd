//! Shared fixtures for the benchmark suite.

use superpat_core::Word;

/// Minimal complete words for small k, straight from the exhaustive search.
pub const WITNESS_K3: &str = "1213121";
pub const WITNESS_K4: &str = "123412314213";

pub fn witness(k: usize) -> Word {
    let text = match k {
        3 => WITNESS_K3,
        4 => WITNESS_K4,
        _ => panic!("no stored witness for k = {k}"),
    };
    Word::parse(text, k as u8).unwrap()
}

/// A long non-trivial stream over [d]: deterministic, aperiodic-looking.
pub fn synthetic_stream(len: usize, d: u8) -> Vec<u8> {
    let mut state = 0x243F6A8885A308D3u64;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        out.push(1 + ((state >> 33) % d as u64) as u8);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use superpat_core::is_complete;

    #[test]
    fn stored_witnesses_are_complete() {
        assert!(is_complete(&witness(3), 3).unwrap());
        assert!(is_complete(&witness(4), 4).unwrap());
    }

    #[test]
    fn stream_covers_the_alphabet() {
        let s = synthetic_stream(1000, 5);
        assert_eq!(s.len(), 1000);
        for l in 1..=5u8 {
            assert!(s.contains(&l));
        }
        assert!(s.iter().all(|&l| (1..=5).contains(&l)));
    }
}
