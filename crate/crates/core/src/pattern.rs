//! Preferential arrangements: the canonical forms of words under order
//! isomorphism with ties.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{write_letters, Word};

/// A preferential arrangement of length k: a word whose value set is exactly
/// {1, .., j} for some j <= k (a dense ranking). Two words have equal
/// canonical forms iff they are order-isomorphic, including ties.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrefArrangement {
    entries: Vec<u8>,
    distinct: u8,
}

impl PrefArrangement {
    /// Validates that `entries` is dense: nonempty and using each value
    /// 1..=max(entries) at least once.
    pub fn from_entries(entries: Vec<u8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let max = *entries.iter().max().unwrap();
        if max == 0 {
            return Err(Error::InvalidParameter("pattern values start at 1".into()));
        }
        let mut present = vec![false; max as usize + 1];
        for &e in &entries {
            present[e as usize] = true;
        }
        if !present[1..].iter().all(|&p| p) {
            return Err(Error::InvalidParameter(format!(
                "not dense: values must cover 1..={max}"
            )));
        }
        Ok(PrefArrangement { entries, distinct: max })
    }

    pub fn parse(text: &str) -> Result<Self> {
        // Reuse the word lexer with the widest alphabet, then re-validate.
        let w = Word::parse(text, 255)?;
        PrefArrangement::from_entries(w.letters().to_vec())
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Pattern length k.
    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// Number of distinct values j.
    pub fn distinct(&self) -> u8 {
        self.distinct
    }

    /// How many entries hold each value; index 0 is the count of value 1.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0usize; self.distinct as usize];
        for &e in &self.entries {
            m[e as usize - 1] += 1;
        }
        m
    }

    /// The concrete word obtained by sending value r to `assignment[r-1]`.
    /// `assignment` must be strictly increasing with one letter per value.
    pub fn image(&self, assignment: &[u8]) -> Vec<u8> {
        debug_assert_eq!(assignment.len(), self.distinct as usize);
        debug_assert!(assignment.windows(2).all(|w| w[0] < w[1]));
        self.entries.iter().map(|&e| assignment[e as usize - 1]).collect()
    }

    /// The pattern read as a word over [d]; fails when d < j.
    pub fn as_word(&self, d: u8) -> Result<Word> {
        Word::new(self.entries.clone(), d)
    }
}

impl fmt::Display for PrefArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.entries, self.distinct)
    }
}

/// Canonical form of a word: replace each letter by its dense rank (1 for the
/// smallest letter present, and ties keep equal ranks).
pub fn canonicalize(letters: &[u8]) -> Result<PrefArrangement> {
    if letters.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut sorted: Vec<u8> = letters.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut rank = [0u8; 256];
    for (i, &l) in sorted.iter().enumerate() {
        rank[l as usize] = i as u8 + 1;
    }
    let entries = letters.iter().map(|&l| rank[l as usize]).collect();
    Ok(PrefArrangement {
        entries,
        distinct: sorted.len() as u8,
    })
}

/// All preferential arrangements of length k with at most min(k, d) distinct
/// values, sorted lexicographically.
pub fn enumerate_pa(k: usize, d: usize) -> Result<Vec<PrefArrangement>> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidParameter("enumerate_pa needs k >= 1 and d >= 1".into()));
    }
    if k > 64 {
        return Err(Error::InvalidParameter("enumerate_pa is a desk-scale tool (k <= 64)".into()));
    }
    let jmax = k.min(d) as u8;
    let mut out = Vec::new();
    let mut buf = vec![0u8; k];
    for j in 1..=jmax {
        surjections(&mut buf, 0, j, 0, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

/// Fills `out` with every length-|buf| sequence over {1..j} that uses all j
/// values. `used` is a bitmask of values already present in buf[..pos].
fn surjections(buf: &mut Vec<u8>, pos: usize, j: u8, used: u32, out: &mut Vec<PrefArrangement>) {
    let k = buf.len();
    let missing = j as u32 - used.count_ones();
    if missing as usize > k - pos {
        return;
    }
    if pos == k {
        out.push(PrefArrangement { entries: buf.clone(), distinct: j });
        return;
    }
    for v in 1..=j {
        buf[pos] = v;
        surjections(buf, pos + 1, j, used | (1 << v), out);
    }
}
