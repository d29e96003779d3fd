//! Exact counting with overflow detection. All results are u128 and any
//! intermediate overflow is reported rather than wrapped.

use crate::error::{Error, Result};

/// Ordered Bell number: how many preferential arrangements of length k exist.
/// Uses a(n) = sum_{j=1..n} C(n,j) a(n-j) with a(0) = 1.
pub fn fubini(k: usize) -> Result<u128> {
    let mut a = vec![0u128; k + 1];
    a[0] = 1;
    for n in 1..=k {
        let mut total: u128 = 0;
        for j in 1..=n {
            let term = binomial(n, j)?
                .checked_mul(a[n - j])
                .ok_or(Error::Overflow("fubini"))?;
            total = total.checked_add(term).ok_or(Error::Overflow("fubini"))?;
        }
        a[n] = total;
    }
    Ok(a[k])
}

/// Stirling number of the second kind: partitions of an n-set into j blocks.
pub fn stirling2(n: usize, j: usize) -> Result<u128> {
    if j > n {
        return Ok(0);
    }
    // Row-by-row recurrence S(n,j) = j S(n-1,j) + S(n-1,j-1).
    let mut row = vec![0u128; j + 1];
    row[0] = 1;
    for _ in 1..=n {
        for c in (1..=j).rev() {
            row[c] = (c as u128)
                .checked_mul(row[c])
                .and_then(|v| v.checked_add(row[c - 1]))
                .ok_or(Error::Overflow("stirling2"))?;
        }
        row[0] = 0;
    }
    Ok(row[j])
}

pub fn binomial(n: usize, r: usize) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is always divisible by (i + 1) here.
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (i + 1) as u128;
    }
    Ok(acc)
}

pub fn factorial(n: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 2..=n {
        acc = acc.checked_mul(i as u128).ok_or(Error::Overflow("factorial"))?;
    }
    Ok(acc)
}

/// Count of preferential arrangements of length k over an alphabet of size d:
/// sum over j <= min(k, d) of j! S(k, j). Equals `fubini(k)` once d >= k.
pub fn pa_count(k: usize, d: usize) -> Result<u128> {
    let mut total: u128 = 0;
    for j in 1..=k.min(d) {
        let term = factorial(j)?
            .checked_mul(stirling2(k, j)?)
            .ok_or(Error::Overflow("pa_count"))?;
        total = total.checked_add(term).ok_or(Error::Overflow("pa_count"))?;
    }
    Ok(total)
}
