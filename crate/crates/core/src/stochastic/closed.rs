//! Closed-form moments of the coupled stopping times, as exact rationals.

use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Exact first and second moments of Y_k and Z_k, plus the leading-order
/// estimates that bracket E[X_k].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForms {
    pub k: u64,
    /// E[Y_k] = k(k+1)H_k − k².
    pub e_y: BigRational,
    /// var(Y_k) = (k³+k²)·Σ 1/j² − (2k²+k)·H_k + k².
    pub var_y: BigRational,
    /// E[Z_k] = k²·H_k.
    pub e_z: BigRational,
    /// k²(ln k + γ): leading order of the upper estimate for E[X_k].
    pub x_mean_leading_upper: f64,
    /// k²(ln k + γ − 1): leading order of the lower estimate.
    pub x_mean_leading_lower: f64,
}

fn ratio(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// H_k = Σ_{j=1..k} 1/j.
pub fn harmonic(k: u64) -> BigRational {
    let mut h = BigRational::zero();
    for j in 1..=k {
        h += ratio(1, j);
    }
    h
}

/// Σ_{j=1..k} 1/j².
pub fn harmonic_second(k: u64) -> BigRational {
    let mut h = BigRational::zero();
    for j in 1..=k {
        h += BigRational::new(BigInt::from(1), BigInt::from(j) * BigInt::from(j));
    }
    h
}

pub fn closed_forms(k: u64) -> Result<ClosedForms> {
    if k == 0 {
        return Err(Error::InvalidParameter("closed forms need k >= 1".into()));
    }
    let h = harmonic(k);
    let h2 = harmonic_second(k);
    let kq = BigRational::from_integer(BigInt::from(k));
    let k2 = &kq * &kq;
    let k3 = &k2 * &kq;

    let e_y = &kq * (&kq + BigRational::from_integer(BigInt::from(1))) * &h - &k2;
    let var_y = (&k3 + &k2) * &h2
        - (BigRational::from_integer(BigInt::from(2)) * &k2 + &kq) * &h
        + &k2;
    let e_z = &k2 * &h;

    let kf = k as f64;
    let base = kf * kf * (kf.ln() + EULER_GAMMA);
    Ok(ClosedForms {
        k,
        e_y,
        var_y,
        e_z,
        x_mean_leading_upper: base,
        x_mean_leading_lower: base - kf * kf,
    })
}

/// `r` as an f64 (good to f64 precision; used for reporting and tolerances).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
