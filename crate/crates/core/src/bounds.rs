//! Root bounds and sign certification for exact polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{ceil_int, int, Rational};
use crate::Poly;

/// Cauchy bound `1 + max |a_i / a_d|`: every complex root has modulus below it.
/// Returns `None` for constant polynomials (no roots, or identically zero).
pub fn cauchy_bound(p: &Poly) -> Option<Rational> {
    let d = p.degree().filter(|&d| d > 0)?;
    let lead = p.coeffs()[d].abs();
    let max = p.coeffs()[..d]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Some(max + Rational::one())
}

/// Smallest integer `s >= 0` with `s^e >= x`, for `x >= 0`.
fn ceil_root(x: &Rational, e: u32) -> BigInt {
    let c = ceil_int(x);
    if c <= BigInt::one() {
        return if x.is_zero() { BigInt::zero() } else { BigInt::one() };
    }
    // Bisection on [1, c].
    let (mut lo, mut hi) = (BigInt::one(), c);
    while lo < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        if int(num_traits::pow(mid.clone(), e as usize)) >= *x {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Fujiwara's bound `2 max |a_{d-i}/a_d|^{1/i}` (last term halved), with each
/// root rounded up to an integer. Often far tighter than Cauchy for high degree.
pub fn fujiwara_bound(p: &Poly) -> Option<Rational> {
    let d = p.degree().filter(|&d| d > 0)?;
    let lead = p.coeffs()[d].abs();
    let mut best = BigInt::zero();
    for i in 1..=d {
        let mut ratio = p.coeffs()[d - i].abs() / &lead;
        if i == d {
            ratio /= int(2);
        }
        best = best.max(ceil_root(&ratio, i as u32));
    }
    Some(int(best * 2))
}

/// A bound `B` such that `p` has no real root in `(B, ∞)`; `None` if `p` is
/// constant.
pub fn root_bound(p: &Poly) -> Option<Rational> {
    Some(cauchy_bound(p)?.min(fujiwara_bound(p)?))
}

/// Smallest positive integer `N` with `N > root_bound(p)`, so `p` keeps the sign
/// of its leading coefficient on `[N, ∞)`. Constant polynomials give 1.
pub fn sign_stable_from(p: &Poly) -> BigInt {
    match root_bound(p) {
        Some(b) => (ceil_int(&b) + BigInt::one()).max(BigInt::one()),
        None => BigInt::one(),
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of `p` in the open interval `(a, ∞)`.
pub fn count_roots_above(seq: &[Poly], a: &Rational) -> usize {
    let at_a = sign_changes(seq.iter().map(|q| sign_of(&q.eval(a))));
    let at_inf = sign_changes(seq.iter().map(|q| q.leading().map_or(0, sign_of)));
    at_a.saturating_sub(at_inf)
}

/// Least non-negative integer `a` with `p(x) > 0` for every real `x >= a`.
/// Requires a positive leading coefficient.
pub fn positive_from(p: &Poly) -> BigInt {
    debug_assert!(p.leading().is_some_and(|c| c.is_positive()));
    let seq = sturm_sequence(p);
    let ok = |a: &BigInt| {
        let x = int(a.clone());
        p.eval(&x).is_positive() && count_roots_above(&seq, &x) == 0
    };
    let mut hi = match cauchy_bound(p) {
        Some(b) => ceil_int(&b).max(BigInt::zero()),
        None => BigInt::zero(),
    };
    debug_assert!(ok(&hi) || p.degree() == Some(0));
    let mut lo = BigInt::zero();
    if ok(&lo) {
        return lo;
    }
    // Invariant: !ok(lo), ok(hi).
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_bound(&p(&[-100, 0, 1])), Some(rat(101, 1)));
        assert_eq!(cauchy_bound(&p(&[0, 0, 1])), Some(rat(1, 1)));
        assert_eq!(cauchy_bound(&p(&[7])), None);
    }

    #[test]
    fn fujiwara_is_valid_and_tighter() {
        let q = p(&[-100, 0, 1]);
        let f = fujiwara_bound(&q).unwrap();
        assert!(f >= rat(10, 1));
        assert!(f < cauchy_bound(&q).unwrap());
    }

    #[test]
    fn sturm_counts() {
        // (X-1)(X-2)(X-3)
        let q = p(&[-6, 11, -6, 1]);
        let seq = sturm_sequence(&q);
        assert_eq!(count_roots_above(&seq, &rat(0, 1)), 3);
        assert_eq!(count_roots_above(&seq, &rat(3, 2)), 2);
        assert_eq!(count_roots_above(&seq, &rat(3, 1)), 0);
    }

    #[test]
    fn positivity_thresholds() {
        assert_eq!(positive_from(&p(&[-100, 0, 1])), BigInt::from(11));
        assert_eq!(positive_from(&p(&[0, 0, -2, 1])), BigInt::from(3));
        assert_eq!(positive_from(&p(&[1, 0, 1])), BigInt::from(0));
        assert_eq!(positive_from(&p(&[0, 0, 1])), BigInt::from(1));
    }

    #[test]
    fn sign_stability_covers_roots() {
        let q = p(&[-6, 11, -6, 1]);
        let n = sign_stable_from(&q);
        assert!(n >= BigInt::from(4));
    }
}
