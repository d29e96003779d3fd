//! Exact expected stopping times via absorbing-chain analysis.
//!
//! For X the chain state is the vector of matched-prefix lengths over all k!
//! permutations — the full memory the greedy matcher keeps — and the answer
//! is the expected number of uniform letters until every permutation is
//! complete. Letters that advance nothing are self-loops; with `a` advancing
//! letters out of k the standard conditioning gives
//! E[s] = (k + Σ_{advancing l} E[s after l]) / a. Advancing edges strictly
//! increase total progress, so memoized recursion terminates.
//!
//! For Z the word must finish k coupon rounds; with j distinct letters seen
//! in the current round the next new letter arrives after a geometric wait
//! with mean k/(k−j), summing to k²·H_k.

use std::collections::HashMap;

use num::rational::BigRational;
use num::BigInt;

use crate::error::{Error, Result};
use crate::perm::permutations_lex_flat;

/// X chains are solved only here; the state space grows like (k+1)^(k!).
pub const X_EXACT_MAX_K: usize = 3;
pub const Z_EXACT_MAX_K: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    X,
    Z,
}

pub fn exact_expectation(k: usize, process: Process) -> Result<BigRational> {
    match process {
        Process::X => expectation_x(k),
        Process::Z => expectation_z(k),
    }
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn expectation_z(k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidParameter("exact expectation needs k >= 1".into()));
    }
    if k > Z_EXACT_MAX_K {
        return Err(Error::StateSpaceTooLarge { k, cap: Z_EXACT_MAX_K });
    }
    let mut total = BigRational::from_integer(BigInt::from(0));
    for _round in 0..k {
        for seen in 0..k {
            total += int(k as u64) / int((k - seen) as u64);
        }
    }
    Ok(total)
}

fn expectation_x(k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidParameter("exact expectation needs k >= 1".into()));
    }
    if k > X_EXACT_MAX_K {
        return Err(Error::StateSpaceTooLarge { k, cap: X_EXACT_MAX_K });
    }
    let perms = permutations_lex_flat(k);
    let count = perms.len() / k;
    let mut memo: HashMap<Vec<u8>, BigRational> = HashMap::new();
    let start = vec![0u8; count];
    Ok(solve(&start, k, count, &perms, &mut memo))
}

fn solve(
    state: &[u8],
    k: usize,
    count: usize,
    perms: &[u8],
    memo: &mut HashMap<Vec<u8>, BigRational>,
) -> BigRational {
    if state.iter().all(|&f| f as usize == k) {
        return BigRational::from_integer(BigInt::from(0));
    }
    if let Some(hit) = memo.get(state) {
        return hit.clone();
    }
    let mut advancing = 0u64;
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for letter in 1..=k as u8 {
        let mut next = state.to_vec();
        let mut moved = false;
        for p in 0..count {
            let f = next[p] as usize;
            if f < k && perms[p * k + f] == letter {
                next[p] += 1;
                moved = true;
            }
        }
        if moved {
            advancing += 1;
            sum += solve(&next, k, count, perms, memo);
        }
    }
    // Non-advancing letters loop in place; conditioning them out yields
    // (k + Σ E[next]) / advancing. Some letter always advances: any
    // incomplete permutation is waiting on one.
    let e = (int(k as u64) + sum) / int(advancing);
    memo.insert(state.to_vec(), e.clone());
    e
}
