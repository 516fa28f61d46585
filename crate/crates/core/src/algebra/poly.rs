use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use super::Scalar;

/// Dense univariate polynomial, coefficients stored by ascending degree.
///
/// The coefficient vector never carries a trailing zero, so the zero
/// polynomial is the empty vector and `degree` is `len - 1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds from coefficients listed by descending degree.
    pub fn from_descending(mut coeffs: Vec<T>) -> Self {
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `X^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of `X^(top - j)`: the j-th entry when the polynomial is
    /// read as a degree-`top` polynomial from the highest power down.
    pub fn coeff_desc(&self, top: usize, j: usize) -> T {
        match top.checked_sub(j) {
            Some(i) => self.coeff(i),
            None => T::zero(),
        }
    }

    /// Coefficients of `X^top, X^(top-1), .., X^0`.
    pub fn descending(&self, top: usize) -> Vec<T> {
        (0..=top).map(|j| self.coeff_desc(top, j)).collect()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(X + t)`, by repeated synthetic division (Taylor shift).
    pub fn shift(&self, t: &T) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        if n < 2 || t.is_zero() {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                let carry = a[j + 1].clone() * t.clone();
                a[j] = a[j].clone() + carry;
            }
        }
        Self::new(a)
    }

    /// `p(X + 1)`.
    pub fn shift_by_one(&self) -> Self {
        self.shift(&T::one())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.clone() * T::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Euclidean division over a field. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / dlead.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}

/// Prints in the grammar accepted by the expression parser,
/// e.g. `3*X^3 + 9/2*X^2 - 1/4`.
impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Poly};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p(&[0, 0, 1]).shift_by_one(), p(&[1, 2, 1]));
        assert_eq!(p(&[5]).shift_by_one(), p(&[5]));
        assert_eq!(p(&[1, 2, 2]).shift_by_one(), p(&[5, 6, 2]));
        assert!(Poly::zero().shift_by_one().is_zero());
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        let q = p(&[3, -2, 7]);
        assert!((&q - &q).is_zero());
        assert_eq!((&q - &q).degree(), None);
        assert_eq!(&p(&[1, 2, 2]) * &p(&[5, 6, 2]), p(&[5, 16, 24, 16, 4]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[0, 0, 1]).eval(&rat(3, 1)), rat(9, 1));
        assert_eq!(p(&[0, 2, 2]).eval(&rat(2, 1)), rat(12, 1));
        assert_eq!(p(&[0, 15, 18, 12]).eval(&rat(1, 1)), rat(45, 1));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let q = p(&[1, 0, 0]);
        assert_eq!(q.degree(), Some(0));
        assert_eq!(q.coeffs().len(), 1);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[4, -3, 0, 2, 1]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().map_or(true, |d| d < 2));
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn display_forms() {
        let q = Poly::new(vec![rat(-1, 4), rat(0, 1), rat(9, 2), rat(-1, 1)]);
        assert_eq!(q.to_string(), "-X^3 + 9/2*X^2 - 1/4");
        assert_eq!(p(&[1, 1]).to_string(), "X + 1");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn float_instantiation() {
        let q: Polynomial<f64> = Polynomial::new(vec![1.0, 2.0, 2.0]);
        assert_eq!(q.shift_by_one().coeffs(), &[5.0, 6.0, 2.0]);
    }
}
