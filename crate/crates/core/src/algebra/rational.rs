use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

pub type Rational = BigRational;

/// `num/den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Largest integer not exceeding `x`.
pub fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer not below `x`.
pub fn ceil_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Least common multiple of the (positive) denominators.
pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Parses `"p"`, `"-p"` or `"p/q"` into canonical form.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let bad = || AlgebraError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Decimal approximation, for display only.
pub fn approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::MIN } else { f64::MAX })
}

/// Exact binomial coefficient `C(n, r)`.
pub fn binomial(n: i64, r: i64) -> Result<BigInt, AlgebraError> {
    if r < 0 || n < 0 || r > n {
        return Err(AlgebraError::BinomialRange { n, r });
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        let z = rat(0, 7);
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(floor_int(&rat(-2, 9)), BigInt::from(-1));
        assert_eq!(ceil_int(&rat(-2, 9)), BigInt::from(0));
        assert_eq!(floor_int(&rat(9, 8)), BigInt::from(1));
        assert_eq!(floor_int(&rat(4, 1)), BigInt::from(4));
    }

    #[test]
    fn lcm_of_denominators() {
        let xs = [rat(3, 1), rat(9, 2), rat(15, 4)];
        assert_eq!(lcm_denominators(&xs), BigInt::from(4));
    }

    #[test]
    fn parse_and_print_agree() {
        for s in ["3", "9/2", "-1/4", "-2/9", "0"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(4, 1).unwrap(), BigInt::from(4));
        assert_eq!(binomial(7, 3).unwrap(), BigInt::from(35));
        assert_eq!(binomial(5, 0).unwrap(), BigInt::from(1));
        assert!(binomial(3, 4).is_err());
        assert!(binomial(3, -1).is_err());
    }
}
