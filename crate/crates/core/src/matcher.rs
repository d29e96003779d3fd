//! Incremental tracking of every permutation of {1..k} against a growing
//! letter stream.

use crate::error::{Error, Result};
use crate::perm::{factorial_usize, permutations_lex_flat};

/// Hard cap for the incremental matcher; the frontier alone costs k! bytes
/// and the permutation table k * k!.
pub const MATCHER_MAX_K: usize = 10;

/// Greedy match state of all k! permutations at once.
///
/// Feeding a letter advances exactly the permutations whose next needed
/// letter equals it, so frontiers are non-decreasing over time and the total
/// work per stream is O(k * k!) regardless of stream length. Permutations are
/// indexed in lexicographic order.
#[derive(Debug, Clone)]
pub struct PermutationMatcher {
    k: usize,
    perms: Vec<u8>,
    frontier: Vec<u8>,
    /// buckets[l-1] holds the indices of incomplete permutations whose next
    /// needed letter is l.
    buckets: Vec<Vec<u32>>,
    completed: usize,
    steps: u64,
}

impl PermutationMatcher {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("matcher needs k >= 1".into()));
        }
        if k > MATCHER_MAX_K {
            return Err(Error::PermutationSetTooLarge { k, cap: MATCHER_MAX_K });
        }
        let perms = permutations_lex_flat(k);
        let count = factorial_usize(k);
        let mut m = PermutationMatcher {
            k,
            perms,
            frontier: vec![0; count],
            buckets: vec![Vec::new(); k],
            completed: 0,
            steps: 0,
        };
        m.reset();
        Ok(m)
    }

    /// Returns to the empty-stream state without reallocating.
    pub fn reset(&mut self) {
        let count = self.frontier.len();
        self.frontier.iter_mut().for_each(|f| *f = 0);
        for b in &mut self.buckets {
            b.clear();
        }
        for idx in 0..count {
            let first = self.perms[idx * self.k];
            self.buckets[first as usize - 1].push(idx as u32);
        }
        self.completed = 0;
        self.steps = 0;
    }

    /// Consumes one stream letter.
    pub fn feed(&mut self, letter: u8) -> Result<()> {
        if letter == 0 || letter as usize > self.k {
            return Err(Error::LetterOutOfRange { letter: letter as u32, d: self.k as u32 });
        }
        self.steps += 1;
        let mut advanced = std::mem::take(&mut self.buckets[letter as usize - 1]);
        for &idx in &advanced {
            let f = self.frontier[idx as usize] + 1;
            self.frontier[idx as usize] = f;
            if f as usize == self.k {
                self.completed += 1;
            } else {
                let next = self.perms[idx as usize * self.k + f as usize];
                // A permutation never needs the same letter twice, so this
                // push cannot target the bucket being drained.
                debug_assert_ne!(next, letter);
                self.buckets[next as usize - 1].push(idx);
            }
        }
        // Return the drained buffer to its slot so feeding stays allocation
        // free after warm-up.
        advanced.clear();
        debug_assert!(self.buckets[letter as usize - 1].is_empty());
        self.buckets[letter as usize - 1] = advanced;
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Letters fed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Matched-prefix length per permutation, in lexicographic permutation
    /// order.
    pub fn frontier(&self) -> &[u8] {
        &self.frontier
    }

    pub fn completed_count(&self) -> usize {
        self.completed
    }

    /// True once every permutation has been matched.
    pub fn is_complete(&self) -> bool {
        self.completed == self.frontier.len()
    }
}
