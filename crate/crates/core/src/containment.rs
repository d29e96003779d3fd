//! Containment predicates: occurrences of preferential arrangements in words,
//! regular occurrences, complete words, and the superpattern tests.

use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::pattern::{canonicalize, enumerate_pa, PrefArrangement};
use crate::perm::next_permutation;
use crate::word::Word;

/// Permutation-set predicates refuse to iterate beyond this k by default;
/// k! checks past 12 stop being a desk-scale computation.
pub const PERMUTATION_CAP: usize = 12;

/// Where a pattern sits inside a word: `positions[i]` is the index matching
/// the pattern's i-th entry, and `assignment[r-1]` is the alphabet letter
/// representing pattern value r. Both sequences are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub positions: Vec<usize>,
    pub assignment: Vec<u8>,
}

/// Greedy left-to-right subsequence test (exact letters, no isomorphism).
pub fn contains_subsequence(haystack: &[u8], needle: &[u8]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|&n| it.any(|&h| h == n))
}

fn greedy_positions(haystack: &[u8], needle: &[u8]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(needle.len());
    let mut start = 0;
    for &n in needle {
        let off = haystack[start..].iter().position(|&h| h == n)?;
        out.push(start + off);
        start += off + 1;
    }
    Some(out)
}

/// Precomputed next-occurrence indices: for each position and letter, the
/// first index at or after the position holding that letter. Turns each
/// subsequence query into O(len(target)) lookups.
pub struct NextOccurrenceTable {
    n: usize,
    d: usize,
    next: Vec<u32>,
}

impl NextOccurrenceTable {
    pub fn new(word: &Word) -> Self {
        let n = word.len();
        let d = word.d() as usize;
        let mut next = vec![n as u32; (n + 1) * d];
        for i in (0..n).rev() {
            let row = i * d;
            let (cur, rest) = next[row..].split_at_mut(d);
            cur.copy_from_slice(&rest[..d]);
            cur[word.letters()[i] as usize - 1] = i as u32;
        }
        NextOccurrenceTable { n, d, next }
    }

    /// Length of the longest prefix of `target` that occurs as a subsequence.
    /// Letters outside [d] terminate the match.
    pub fn match_len(&self, target: &[u8]) -> usize {
        let mut pos = 0usize;
        for (i, &t) in target.iter().enumerate() {
            if t == 0 || t as usize > self.d {
                return i;
            }
            let hit = self.next[pos * self.d + (t as usize - 1)] as usize;
            if hit == self.n {
                return i;
            }
            pos = hit + 1;
        }
        target.len()
    }

    pub fn contains(&self, target: &[u8]) -> bool {
        self.match_len(target) == target.len()
    }
}

/// Finds some occurrence of `pattern` in `word`, scanning strictly increasing
/// assignments of alphabet letters to pattern values in lexicographic order,
/// so the result is deterministic (smallest assignment, then greedy-earliest
/// positions).
pub fn find_occurrence(word: &Word, pattern: &PrefArrangement) -> Result<Option<Occurrence>> {
    let j = pattern.distinct() as usize;
    let d = word.d() as usize;
    if j > d {
        return Err(Error::AlphabetTooSmall { distinct: j, d });
    }
    let mut found = None;
    for_each_combination(d as u8, j, &mut |assignment| {
        let image = pattern.image(assignment);
        if let Some(positions) = greedy_positions(word.letters(), &image) {
            found = Some(Occurrence {
                positions,
                assignment: assignment.to_vec(),
            });
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Visits strictly increasing length-j sequences over {1..d} in lexicographic
/// order until `f` returns true. Returns whether any call did.
fn for_each_combination(d: u8, j: usize, f: &mut dyn FnMut(&[u8]) -> bool) -> bool {
    if j > d as usize {
        return false;
    }
    let mut comb: Vec<u8> = (1..=j as u8).collect();
    loop {
        if f(&comb) {
            return true;
        }
        // Advance the rightmost entry that still has headroom.
        let mut i = j;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if comb[i] < d - (j - 1 - i) as u8 {
                comb[i] += 1;
                for t in i + 1..j {
                    comb[t] = comb[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Checks the occurrence is internally consistent with `word`, then decides
/// regularity: for pattern value r with i strictly smaller entries (counted
/// with multiplicity) and m copies, the representing letter must lie in
/// {i+1, .., i+m}.
pub fn is_regular_occurrence(word: &Word, occ: &Occurrence) -> Result<bool> {
    if occ.positions.is_empty() {
        return Err(Error::InvalidOccurrence("no positions".into()));
    }
    if occ.positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidOccurrence("positions not strictly increasing".into()));
    }
    if *occ.positions.last().unwrap() >= word.len() {
        return Err(Error::InvalidOccurrence("position past end of word".into()));
    }
    let subword: Vec<u8> = occ.positions.iter().map(|&p| word.letters()[p]).collect();
    let pattern = canonicalize(&subword)?;
    if occ.assignment.len() != pattern.distinct() as usize {
        return Err(Error::InvalidOccurrence(format!(
            "assignment covers {} values, subword has {}",
            occ.assignment.len(),
            pattern.distinct()
        )));
    }
    for (i, &e) in pattern.entries().iter().enumerate() {
        if occ.assignment[e as usize - 1] != subword[i] {
            return Err(Error::InvalidOccurrence(
                "assignment disagrees with matched letters".into(),
            ));
        }
    }
    let mut below = 0usize;
    for (v, m) in pattern.multiplicities().into_iter().enumerate() {
        let letter = occ.assignment[v] as usize;
        if letter <= below || letter > below + m {
            return Ok(false);
        }
        below += m;
    }
    Ok(true)
}

/// Does `word` contain every permutation of {1..k} as a subsequence?
/// Letters outside {1..k} never participate in a match.
pub fn is_complete(word: &Word, k: usize) -> Result<bool> {
    is_complete_capped(word, k, PERMUTATION_CAP)
}

pub fn is_complete_capped(word: &Word, k: usize, cap: usize) -> Result<bool> {
    Ok(first_missing_permutation_capped(word, k, cap)?.is_none())
}

/// The lexicographically first permutation of {1..k} absent from `word`.
pub fn first_missing_permutation(word: &Word, k: usize) -> Result<Option<Vec<u8>>> {
    first_missing_permutation_capped(word, k, PERMUTATION_CAP)
}

fn first_missing_permutation_capped(
    word: &Word,
    k: usize,
    cap: usize,
) -> Result<Option<Vec<u8>>> {
    if k == 0 {
        return Err(Error::InvalidParameter("completeness needs k >= 1".into()));
    }
    if k > cap {
        return Err(Error::PermutationSetTooLarge { k, cap });
    }
    let mut p: Vec<u8> = (1..=k as u8).collect();
    // Cheap necessary condition: every letter of {1..k} must be present.
    if word.distinct_count() < k || !p.iter().all(|&l| word.letters().contains(&l)) {
        return Ok(Some(p));
    }
    let table = NextOccurrenceTable::new(word);
    loop {
        if !table.contains(&p) {
            return Ok(Some(p));
        }
        if !next_permutation(&mut p) {
            return Ok(None);
        }
    }
}

/// Does `word` contain every preferential arrangement of length k over [d]
/// (order-isomorphically, or via a regular occurrence when `require_regular`)?
///
/// For d == k without the regularity requirement this delegates to
/// [`is_complete`]; containing all k! permutations is equivalent there, and
/// the equivalence is exercised against [`is_superpattern_direct`] in the
/// test suite rather than assumed by it.
pub fn is_superpattern(word: &Word, k: usize, d: usize, require_regular: bool) -> Result<bool> {
    check_superpattern_args(word, k, d)?;
    if d == k && !require_regular {
        return is_complete(word, k);
    }
    Ok(first_missing_pattern(word, k, d, require_regular)?.is_none())
}

/// The pattern-by-pattern route, with no special casing. Used directly by
/// cross-validation tests and by witness verification.
pub fn is_superpattern_direct(
    word: &Word,
    k: usize,
    d: usize,
    require_regular: bool,
) -> Result<bool> {
    check_superpattern_args(word, k, d)?;
    Ok(first_missing_pattern(word, k, d, require_regular)?.is_none())
}

fn check_superpattern_args(word: &Word, k: usize, d: usize) -> Result<()> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidParameter("superpattern test needs k >= 1 and d >= 1".into()));
    }
    if word.d() as usize > d {
        return Err(Error::InvalidParameter(format!(
            "word is declared over [{}] but the test alphabet is [{}]",
            word.d(),
            d
        )));
    }
    Ok(())
}

/// First pattern (largest distinct-value count first, then lexicographic)
/// with no qualifying occurrence in `word`, or None when `word` is a
/// superpattern. The ordering front-loads the hardest patterns, so the
/// reported evidence is usually a permutation.
pub fn first_missing_pattern(
    word: &Word,
    k: usize,
    d: usize,
    require_regular: bool,
) -> Result<Option<PrefArrangement>> {
    check_superpattern_args(word, k, d)?;
    let mut patterns = enumerate_pa(k, d)?;
    patterns.sort_by_key(|p| (Reverse(p.distinct()), p.entries().to_vec()));
    let table = NextOccurrenceTable::new(word);
    for pattern in patterns {
        let contained = if require_regular {
            has_regular_occurrence(&table, &pattern, d)
        } else {
            has_occurrence(&table, &pattern, d)
        };
        if !contained {
            return Ok(Some(pattern));
        }
    }
    Ok(None)
}

fn has_occurrence(table: &NextOccurrenceTable, pattern: &PrefArrangement, d: usize) -> bool {
    let j = pattern.distinct() as usize;
    if j > d {
        return false;
    }
    for_each_combination(d as u8, j, &mut |assignment| {
        table.contains(&pattern.image(assignment))
    })
}

/// Regular occurrences pin each pattern value into a fixed letter window, so
/// the candidate assignments are the product of the windows.
fn has_regular_occurrence(
    table: &NextOccurrenceTable,
    pattern: &PrefArrangement,
    d: usize,
) -> bool {
    let mult = pattern.multiplicities();
    let mut windows = Vec::with_capacity(mult.len());
    let mut below = 0usize;
    for &m in &mult {
        let lo = below + 1;
        let hi = below + m;
        if lo > d {
            // Window lies entirely past the alphabet: unsatisfiable.
            return false;
        }
        windows.push((lo as u8, hi.min(d) as u8));
        below += m;
    }
    let mut assignment = vec![0u8; windows.len()];
    try_windows(table, pattern, &windows, &mut assignment, 0)
}

fn try_windows(
    table: &NextOccurrenceTable,
    pattern: &PrefArrangement,
    windows: &[(u8, u8)],
    assignment: &mut Vec<u8>,
    v: usize,
) -> bool {
    if v == windows.len() {
        return table.contains(&pattern.image(assignment));
    }
    for letter in windows[v].0..=windows[v].1 {
        assignment[v] = letter;
        if try_windows(table, pattern, windows, assignment, v + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str, d: u8) -> Word {
        Word::parse(s, d).unwrap()
    }

    fn pat(s: &str) -> PrefArrangement {
        PrefArrangement::parse(s).unwrap()
    }

    #[test]
    fn greedy_subsequence() {
        assert!(contains_subsequence(&[1, 2, 3, 1], &[1, 3, 1]));
        assert!(!contains_subsequence(&[1, 2, 3], &[3, 1]));
        assert!(contains_subsequence(&[1], &[]));
    }

    #[test]
    fn next_table_agrees_with_greedy() {
        let w = word("1231241", 4);
        let t = NextOccurrenceTable::new(&w);
        assert!(t.contains(&[1, 1, 2]));
        assert!(t.contains(&[2, 3, 4]));
        assert!(!t.contains(&[4, 3]));
        assert_eq!(t.match_len(&[1, 2, 4, 4]), 3);
        assert_eq!(t.match_len(&[5]), 0);
    }

    #[test]
    fn occurrence_found_with_smallest_assignment() {
        let w = word("1231241", 4);
        let occ = find_occurrence(&w, &pat("112")).unwrap().unwrap();
        assert_eq!(occ.assignment, vec![1, 2]);
        assert_eq!(occ.positions, vec![0, 3, 4]);
    }

    #[test]
    fn occurrence_requires_enough_repeats() {
        let w = word("121", 2);
        assert_eq!(find_occurrence(&w, &pat("122")).unwrap(), None);
    }

    #[test]
    fn occurrence_rejects_narrow_alphabet() {
        let w = word("11", 1);
        assert_eq!(
            find_occurrence(&w, &pat("12")),
            Err(Error::AlphabetTooSmall { distinct: 2, d: 1 })
        );
    }

    #[test]
    fn regular_occurrence_windows() {
        // Pattern 112232 forces value 1 into {1,2}, value 2 into {3,4,5},
        // value 3 into {6}.
        let occ = |letters: [u8; 3]| Occurrence {
            positions: vec![0, 1, 2, 3, 4, 5],
            assignment: letters.to_vec(),
        };
        let w = word("113363", 6);
        assert!(is_regular_occurrence(&w, &occ([1, 3, 6])).unwrap());
        let w = word("225565", 6);
        assert!(is_regular_occurrence(&w, &occ([2, 5, 6])).unwrap());
        let w = word("113343", 6);
        assert!(!is_regular_occurrence(&w, &occ([1, 3, 4])).unwrap());
    }

    #[test]
    fn regular_occurrence_validates_consistency() {
        let w = word("1212", 2);
        let bad = Occurrence {
            positions: vec![0, 0, 1],
            assignment: vec![1, 2],
        };
        assert!(is_regular_occurrence(&w, &bad).is_err());
        let wrong_letters = Occurrence {
            positions: vec![0, 1],
            assignment: vec![2, 1],
        };
        assert!(is_regular_occurrence(&w, &wrong_letters).is_err());
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&word("3213213", 3), 3).unwrap());
        assert!(!is_complete(&word("321321", 3), 3).unwrap());
        assert!(!is_complete(&word("111111", 3), 3).unwrap());
        assert!(is_complete(&word("121", 2), 2).unwrap());
        assert!(is_complete(&word("1", 1), 1).unwrap());
        assert!(!is_complete(&word("2222", 2), 2).unwrap());
    }

    #[test]
    fn completeness_cap() {
        let w = word("1", 1);
        assert_eq!(
            is_complete(&w, 13),
            Err(Error::PermutationSetTooLarge { k: 13, cap: 12 })
        );
        assert!(is_complete_capped(&w, 3, 2).is_err());
    }

    #[test]
    fn missing_permutation_is_lex_first() {
        // No 3 remains after the last 2, so 123 itself is missing.
        assert_eq!(
            first_missing_permutation(&word("321321", 3), 3).unwrap(),
            Some(vec![1, 2, 3])
        );
        assert_eq!(first_missing_permutation(&word("3213213", 3), 3).unwrap(), None);
    }

    #[test]
    fn superpattern_examples() {
        // Minimal-length witnesses over their own alphabet.
        assert!(is_superpattern(&word("1221", 2), 2, 2, false).unwrap());
        assert!(is_superpattern_direct(&word("1221", 2), 2, 2, false).unwrap());
        assert!(is_superpattern(&word("3213213", 3), 3, 3, false).unwrap());
        assert!(!is_superpattern(&word("1111111", 3), 3, 3, false).unwrap());
        // Wider alphabets.
        assert!(is_superpattern(&word("1231241", 4), 3, 4, false).unwrap());
        assert!(is_superpattern(&word("2353134", 5), 3, 5, false).unwrap());
        assert!(!is_superpattern(&word("123123", 3), 3, 3, false).unwrap());
    }

    #[test]
    fn evidence_prefers_high_distinct_patterns() {
        let missing = first_missing_pattern(&word("1111111", 3), 3, 3, false)
            .unwrap()
            .unwrap();
        assert_eq!(missing.to_string(), "123");
    }

    #[test]
    fn regular_superpattern_examples() {
        // A complete word over [k] need not be a regular superpattern, but
        // these witnesses are.
        assert!(is_superpattern_direct(&word("1221", 2), 2, 2, true).unwrap());
        assert!(!is_superpattern_direct(&word("12", 2), 2, 2, true).unwrap());
    }
}
