//! Certifies the search engine's headline answers against brute-force scans
//! that share no code with the engine's pruning or target bookkeeping.

use superpat_core::search::RefuteOutcome;
use superpat_core::{
    is_complete, is_superpattern_direct, refute_length, search_min, verify_witness, SearchProblem,
    Word,
};

/// Words whose letters first occur in increasing order; every word over [d]
/// is a relabeling of exactly one of them.
fn canonical_words(len: usize, d: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    fn rec(buf: &mut Vec<u8>, len: usize, max_used: u8, d: u8, out: &mut Vec<Vec<u8>>) {
        if buf.len() == len {
            out.push(buf.clone());
            return;
        }
        for l in 1..=(max_used + 1).min(d) {
            buf.push(l);
            rec(buf, len, max_used.max(l), d, out);
            buf.pop();
        }
    }
    rec(&mut Vec::new(), len, 0, d, &mut out);
    out
}

#[test]
fn no_complete_word_of_length_eleven_on_four_letters() {
    // Completeness is relabeling invariant, so scanning canonical words
    // covers all 4^11 words.
    let words = canonical_words(11, 4);
    assert_eq!(words.len(), 175_275);
    for letters in words {
        let w = Word::new(letters, 4).unwrap();
        assert!(!is_complete(&w, 4).unwrap(), "unexpected complete word {w}");
    }
}

#[test]
fn engine_witness_is_the_brute_force_minimum() {
    let result = search_min(&SearchProblem::new(4, 4).threads(4)).unwrap();
    assert_eq!(result.min_length, Some(12));
    assert!(result.exhaustive);
    let witness = result.witness.unwrap();

    let mut first = None;
    let mut complete_count = 0u32;
    for letters in canonical_words(12, 4) {
        let w = Word::new(letters, 4).unwrap();
        if is_complete(&w, 4).unwrap() {
            complete_count += 1;
            if first.is_none() {
                first = Some(w);
            }
        }
    }
    assert_eq!(first.as_ref(), Some(&witness));
    // At the minimum the witnesses are scarce; record the census so a
    // behavioral change shows up loudly.
    assert_eq!(complete_count, 9);
}

#[test]
fn surjective_refutations_match_brute_force() {
    // ν(3,d): at d = 4 and 5 no surjective word of length 6 works, and at
    // d = 6 none of length 7 does. Enumerate exactly the surjective words.
    fn surjective_words(len: usize, d: u8) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        fn rec(buf: &mut Vec<u8>, len: usize, used: u32, d: u8, out: &mut Vec<Vec<u8>>) {
            let missing = d as usize - used.count_ones() as usize;
            if missing > len - buf.len() {
                return;
            }
            if buf.len() == len {
                out.push(buf.clone());
                return;
            }
            for l in 1..=d {
                buf.push(l);
                rec(buf, len, used | 1 << (l - 1), d, out);
                buf.pop();
            }
        }
        rec(&mut Vec::new(), len, 0, d, &mut out);
        out
    }

    for (d, len) in [(4u8, 6usize), (5, 6), (6, 7)] {
        for letters in surjective_words(len, d) {
            let w = Word::new(letters, d).unwrap();
            assert!(
                !is_superpattern_direct(&w, 3, d as usize, false).unwrap(),
                "unexpected superpattern {w} at d={d} len={len}"
            );
        }
        match refute_length(&SearchProblem::new(3, d as usize).surjective(true).threads(4), len)
            .unwrap()
        {
            RefuteOutcome::Refuted(cert) => {
                assert_eq!(cert.length, len);
                assert!(cert.surjective);
            }
            RefuteOutcome::WitnessFound(w) => panic!("engine found witness {w} at d={d}"),
        }
    }
}

#[test]
fn surjective_minima_have_valid_witnesses() {
    for (d, expected) in [(3usize, 7usize), (4, 7), (5, 7), (6, 8)] {
        let problem = SearchProblem::new(3, d).surjective(true).threads(4);
        let result = search_min(&problem).unwrap();
        assert_eq!(result.min_length, Some(expected), "wrong minimum at d={d}");
        assert!(result.exhaustive);
        let witness = result.witness.unwrap();
        assert_eq!(witness.len(), expected);
        assert!(verify_witness(&witness, &problem).unwrap());
    }
}

#[test]
fn certificates_cover_every_searched_length() {
    let problem = SearchProblem::new(3, 5).surjective(true);
    let result = search_min(&problem).unwrap();
    assert_eq!(result.min_length, Some(7));
    assert_eq!(result.start_length, 5);
    let lengths: Vec<usize> = result.refuted.iter().map(|c| c.length).collect();
    assert_eq!(lengths, vec![5, 6]);
    assert_eq!(result.refuted_frontier(), 7);
    for cert in &result.refuted {
        let branch_total: u64 = cert.branches.iter().map(|(_, n)| n).sum();
        assert_eq!(branch_total, cert.nodes);
    }
}
