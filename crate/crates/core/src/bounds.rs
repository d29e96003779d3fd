//! Published length bounds for minimal superpatterns on a k-letter alphabet.

use crate::error::{Error, Result};

/// Lower and upper bounds on the minimal superpattern length for given k,
/// together with the conjectured exact value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsReport {
    pub k: u64,
    /// k(k+3)/2 - 2, a proven lower bound.
    pub proven_lower: u64,
    /// ceil(k^2 - 7k/3 + 19/3), the sharpest proven upper bound.
    pub rado_upper: u64,
    /// k^2 - 2k + 4, a simpler proven upper bound.
    pub burstein_upper: u64,
    /// The conjectured exact value (piecewise in floor(log2 k)).
    pub newey_conjecture: u64,
}

pub fn bounds_report(k: u64) -> Result<BoundsReport> {
    if k < 2 {
        return Err(Error::InvalidParameter("bounds_report needs k >= 2".into()));
    }
    if k > 1 << 30 {
        return Err(Error::Overflow("bounds_report"));
    }
    Ok(BoundsReport {
        k,
        proven_lower: k * (k + 3) / 2 - 2,
        rado_upper: (3 * k * k + 19 - 7 * k).div_ceil(3),
        burstein_upper: k * k - 2 * k + 4,
        newey_conjecture: newey(k),
    })
}

/// The conjectured minimal length: k^2 for k = 1, k^2 - k + 1 for k in {2,3},
/// k^2 - 2k + 4 for 4 <= k <= 7, and in general k^2 - mk + sum_{i=1..m} i 2^(m-i)
/// with m = floor(log2 k). The first three rows are instances of the general
/// formula, so it is evaluated directly.
pub fn newey(k: u64) -> u64 {
    if k == 1 {
        return 1;
    }
    let m = 63 - k.leading_zeros() as u64;
    let mut tail = 0u64;
    for i in 1..=m {
        tail += i << (m - i);
    }
    k * k - m * k + tail
}
