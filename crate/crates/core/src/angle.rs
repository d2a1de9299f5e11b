//! Signed-dyadic angle synthesis: detection of exactly-dyadic angles and the
//! greedy expansion θ ≈ pπ + Σ_{m=1}^{M} a_m π/2^m with digits in {−1, 0, 1}
//! and M = ⌈log2(π/ε)⌉.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest exponent for which ±π/2^m is faithfully representable in f64.
pub const MAX_DYADIC_EXPONENT: u32 = 52;

/// Relative tolerance for recognizing θ = ±π/2^m.
const DYADIC_REL_TOL: f64 = 1e-12;

/// θ ≈ pπ + Σ a_m π/2^m with a_m ∈ {−1, 0, 1}, digit index m = 1..=M.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDyadicExpansion {
    /// Integer multiple of π.
    pub p: i64,
    /// digits[m-1] = a_m ∈ {−1, 0, 1}.
    pub digits: Vec<i8>,
    /// Target precision the expansion was built for, in radians.
    pub epsilon: f64,
}

impl SignedDyadicExpansion {
    /// Indices m (1-based) with a nonzero digit, paired with the digit sign.
    pub fn nonzero_digits(&self) -> impl Iterator<Item = (u32, i8)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (i as u32 + 1, d))
    }

    /// Round-count cost of delegating this expansion: Σ m over nonzero
    /// digits (each ±π/2^m term costs m rounds).
    pub fn delegation_rounds(&self) -> usize {
        self.nonzero_digits().map(|(m, _)| m as usize).sum()
    }
}

/// Returns (sign, m) iff |θ| = π/2^m within relative tolerance for some
/// m ∈ [1, 52]; `None` otherwise (including θ = ±π itself, which the p-term
/// handles).
pub fn dyadic_exponent(theta: f64) -> Option<(i8, u32)> {
    if !theta.is_finite() || theta == 0.0 {
        return None;
    }
    let sign: i8 = if theta > 0.0 { 1 } else { -1 };
    let mag = theta.abs();
    for m in 1..=MAX_DYADIC_EXPONENT {
        let target = PI / f64::from(2u32).powi(m as i32);
        if (mag - target).abs() <= DYADIC_REL_TOL * target {
            return Some((sign, m));
        }
        // magnitudes shrink monotonically; bail once we're past θ
        if target < mag * (1.0 - DYADIC_REL_TOL) {
            return None;
        }
    }
    None
}

/// Number of digits the expansion carries for precision ε.
pub fn digit_count(epsilon: f64) -> usize {
    (PI / epsilon).log2().ceil() as usize
}

/// Greedy signed-dyadic expansion of θ to precision ε ∈ (0, π/2].
///
/// p is the nearest integer to θ/π (ties to even), leaving a residual of
/// magnitude ≤ π/2. Each digit rounds residual/(π/2^m) to the nearest of
/// {−1, 0, 1}, with the half-way case resolved to 0 so an exactly dyadic θ
/// produces exactly one nonzero digit.
pub fn expand(theta: f64, epsilon: f64) -> Result<SignedDyadicExpansion> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta must be finite, got {theta}"
        )));
    }
    if !(epsilon > 0.0 && epsilon <= PI / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, pi/2], got {epsilon}"
        )));
    }
    let capacity = digit_count(epsilon);
    let p = (theta / PI).round_ties_even();
    let mut residual = theta - p * PI;
    let mut digits = Vec::with_capacity(capacity);
    for m in 1..=capacity {
        let step = PI / (1u64 << m) as f64;
        let ratio = residual / step;
        let digit: i8 = if ratio.abs() <= 0.5 {
            0
        } else if ratio > 0.0 {
            1
        } else {
            -1
        };
        digits.push(digit);
        residual -= f64::from(digit) * step;
    }
    Ok(SignedDyadicExpansion {
        p: p as i64,
        digits,
        epsilon,
    })
}

/// pπ + Σ a_m π/2^m.
pub fn reconstruct(e: &SignedDyadicExpansion) -> f64 {
    let mut total = e.p as f64 * PI;
    for (m, d) in e.nonzero_digits() {
        total += f64::from(d) * PI / (1u64 << m) as f64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dyadic_detection() {
        assert_eq!(dyadic_exponent(PI / 2.0), Some((1, 1)));
        assert_eq!(dyadic_exponent(-PI / 8.0), Some((-1, 3)));
        assert_eq!(dyadic_exponent(2.0), None);
        assert_eq!(dyadic_exponent(PI), None);
        assert_eq!(dyadic_exponent(0.0), None);
        assert_eq!(dyadic_exponent(PI / 1024.0), Some((1, 10)));
    }

    #[test]
    fn expand_single_term() {
        let e = expand(PI / 2.0, 0.01).unwrap();
        assert_eq!(e.p, 0);
        assert_eq!(e.digits.len(), 9);
        assert_eq!(e.digits[0], 1);
        assert!(e.digits[1..].iter().all(|&d| d == 0));
    }

    #[test]
    fn expand_pi_over_8() {
        let e = expand(PI / 8.0, 0.01).unwrap();
        assert_eq!(e.digits.len(), 9);
        assert_eq!(e.digits[2], 1);
        assert_eq!(e.nonzero_digits().count(), 1);
    }

    #[test]
    fn expand_two_radians() {
        let e = expand(2.0, 1e-3).unwrap();
        assert_eq!(e.digits.len(), 12);
        assert!((reconstruct(&e) - 2.0).abs() <= 1e-3);
    }

    #[test]
    fn expand_rejects_bad_parameters() {
        assert!(matches!(expand(f64::NAN, 0.1), Err(Error::InvalidParameter(_))));
        assert!(matches!(expand(1.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(expand(1.0, 2.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let e = SignedDyadicExpansion {
            p: 1,
            digits: vec![0, 0, 0],
            epsilon: 0.3,
        };
        assert!((reconstruct(&e) - PI).abs() < 1e-15);
        let e = SignedDyadicExpansion {
            p: 0,
            digits: vec![1, -1],
            epsilon: 0.5,
        };
        assert!((reconstruct(&e) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_random_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..1000 {
            let theta = rng.gen_range(-10.0..10.0);
            let e = expand(theta, 1e-6).unwrap();
            assert!(
                (reconstruct(&e) - theta).abs() <= 1e-6,
                "theta {theta} error {}",
                (reconstruct(&e) - theta).abs()
            );
        }
    }

    #[test]
    fn approximation_bound_over_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for &eps in &[1e-2, 1e-4, 1e-6, 1e-9] {
            for _ in 0..200 {
                let theta = rng.gen_range(-4.0 * PI..4.0 * PI);
                let e = expand(theta, eps).unwrap();
                assert!(e.digits.len() == digit_count(eps));
                assert!(e.digits.iter().all(|d| (-1..=1).contains(d)));
                assert!((reconstruct(&e) - theta).abs() <= eps);
            }
        }
    }

    #[test]
    fn dyadic_consistency() {
        for m in 1..=10u32 {
            for sign in [1i8, -1] {
                let theta = f64::from(sign) * PI / (1u64 << m) as f64;
                let eps = PI / (1u64 << (m + 1)) as f64;
                if eps > PI / 2.0 {
                    continue;
                }
                let e = expand(theta, eps).unwrap();
                let nz: Vec<_> = e.nonzero_digits().collect();
                assert_eq!(nz, vec![(m, sign)], "theta = {sign}·π/2^{m}");
            }
        }
    }

    #[test]
    fn nonzero_digit_cost_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..500 {
            let theta = rng.gen_range(-4.0 * PI..4.0 * PI);
            let eps = 10f64.powf(rng.gen_range(-9.0..-1.0));
            let e = expand(theta, eps).unwrap();
            let m = e.digits.len();
            assert!(e.delegation_rounds() <= m * m);
        }
    }
}
