//! Small permutation helpers shared by the containment checks, the matcher,
//! and the exact chain solver.

/// Advances `a` to its lexicographic successor in place. Returns false when
/// `a` was already the last permutation.
pub(crate) fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All permutations of {1..k} in lexicographic order, flattened into one
/// buffer of k! * k letters.
pub(crate) fn permutations_lex_flat(k: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (1..=k as u8).collect();
    let mut out = Vec::new();
    loop {
        out.extend_from_slice(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
    out
}

pub(crate) fn factorial_usize(k: usize) -> usize {
    (2..=k).product::<usize>().max(1)
}
