//! The triangular coefficient system behind the bounding polynomial.
//!
//! For `g` of degree `k` write `F(X) = x_0 X^{k-1} + .. + x_{k-1}` and
//!
//! ```text
//! H(X) = F(X+1) F(X)                       = p_0 X^{2k-2} + .. + p_{2k-2}
//! G(X) = g(X+1) (F(X+1) - F(X))            = q_0 X^{2k-2} + .. + q_{2k-2}
//! D(X) = G(X) - H(X)
//! ```
//!
//! The system `p_j = q_j, 0 <= j <= k-1` has a unique solution with
//! `x_0 != 0`, and `p_j, q_j` only involve `x_0, .., x_j`. The coefficient of
//! `x_j` in `q_j - p_j` is `-a_0 (k + j - 1)`, never zero, so each coordinate
//! is pinned by one affine equation once the previous ones are known.

use std::fmt;

use serde::Serialize;

use crate::algebra::{binomial, Polynomial, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("polynomial must have degree at least 2, got {0:?}")]
    DegreeTooSmall(Option<usize>),
    #[error("leading coefficient must be positive")]
    NonPositiveLeading,
    #[error("tuple has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient {index} is not determined by its equation")]
    Degenerate { index: usize },
}

/// What happens when the last solved coordinate is used as the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// `D` vanishes identically: `1/g(X+1) = 1/F(X) - 1/F(X+1)` exactly.
    ExactTelescoping,
    /// First nonzero coefficient of `D` is positive; the tail stays below `1/F(n)`.
    QGreater,
    /// First nonzero coefficient of `D` is negative; the constant must drop by one.
    PGreater,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::ExactTelescoping => "ExactTelescoping",
            CaseTag::QGreater => "QGreater",
            CaseTag::PGreater => "PGreater",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T> {
    pub g: Polynomial<T>,
    pub k: usize,
    /// `(c_0, .., c_{k-1})`.
    pub c: Vec<T>,
    /// Coefficients `a_0, .., a_k` of `g(X+1)`, highest degree first.
    pub a: Vec<T>,
    pub case_tag: CaseTag,
    /// Least `j` with `q_j != p_j` at the full tuple.
    pub i_star: Option<usize>,
    /// `q_{i_star} - p_{i_star}`.
    pub gap: Option<T>,
}

impl<T: Scalar> SolveResult<T> {
    /// `c_0 X^{k-1} + .. + c_{k-1}`.
    pub fn bounding_poly(&self) -> Polynomial<T> {
        bounding_poly(&self.c)
    }

    /// `c_0 X^{k-1} + .. + c_{k-2} X`: the bounding polynomial without its constant.
    pub fn shape(&self) -> Polynomial<T> {
        let mut t = self.c.clone();
        t[self.k - 1] = T::zero();
        bounding_poly(&t)
    }

    /// The tuple with its last coordinate replaced by `constant`.
    pub fn with_constant(&self, constant: T) -> Vec<T> {
        let mut t = self.c.clone();
        t[self.k - 1] = constant;
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumeratorDiagnostics<T> {
    /// `D = G - H`.
    pub d: Polynomial<T>,
    /// Coefficients of `H`, from `X^{2k-2}` down to `X^0`.
    pub p_coeffs: Vec<T>,
    /// Coefficients of `G`, same order.
    pub q_coeffs: Vec<T>,
}

/// `F(X) = t_0 X^{k-1} + .. + t_{k-1}` for a tuple of length `k`.
pub fn bounding_poly<T: Scalar>(tuple: &[T]) -> Polynomial<T> {
    Polynomial::from_descending(tuple.to_vec())
}

/// `g1 (f(X+1) - f(X)) - f(X) f(X+1)` where `g1 = g(X+1)`.
pub fn numerator<T: Scalar>(g1: &Polynomial<T>, f: &Polynomial<T>) -> Polynomial<T> {
    let f1 = f.shift_by_one();
    &(g1 * &(&f1 - f)) - &(f * &f1)
}

fn check_input<T: Scalar>(g: &Polynomial<T>) -> Result<usize, SolveError> {
    let k = g.degree().filter(|&d| d >= 2).ok_or(SolveError::DegreeTooSmall(g.degree()))?;
    if !g.leading().is_some_and(|c| c.is_positive()) {
        return Err(SolveError::NonPositiveLeading);
    }
    Ok(k)
}

/// Expands `H`, `G` and `D` at a concrete tuple.
pub fn pq_coefficients<T: Scalar>(
    g: &Polynomial<T>,
    tuple: &[T],
) -> Result<NumeratorDiagnostics<T>, SolveError> {
    let k = check_input(g)?;
    if tuple.len() != k {
        return Err(SolveError::LengthMismatch { expected: k, got: tuple.len() });
    }
    let g1 = g.shift_by_one();
    let f = bounding_poly(tuple);
    let f1 = f.shift_by_one();
    let h = &f1 * &f;
    let gg = &g1 * &(&f1 - &f);
    let top = 2 * k - 2;
    Ok(NumeratorDiagnostics {
        d: &gg - &h,
        p_coeffs: h.descending(top),
        q_coeffs: gg.descending(top),
    })
}

/// `y_1, .., y_{k-1}` with `F(X+1) - F(X) = y_1 X^{k-2} + .. + y_{k-1}`, from
/// `y_i = C(k-i, 1) x_{i-1} + C(k-i+1, 2) x_{i-2} + .. + C(k-1, i) x_0`.
/// Index 0 and index `k` are the zero sentinels.
pub fn y_closed_form<T: Scalar>(tuple: &[T]) -> Vec<T> {
    let k = tuple.len();
    let mut y = vec![T::zero(); k + 1];
    for (i, yi) in y.iter_mut().enumerate().take(k).skip(1) {
        for m in 1..=i {
            let b = binomial((k - i + m - 1) as i64, m as i64).expect("in range");
            let b = T::from_int(i64::try_from(b).expect("small binomial"));
            *yi = yi.clone() + b * tuple[i - m].clone();
        }
    }
    y
}

/// `p_0, .., p_{k-1}` and `q_0, .., q_{k-1}` from the sum formulas
/// `p_j = Σ_r x_r (x_{j-r} + y_{j-r})` and `q_l = Σ_r a_r y_{l-r+1}`.
pub fn pq_closed_forms<T: Scalar>(a: &[T], tuple: &[T]) -> (Vec<T>, Vec<T>) {
    let k = tuple.len();
    let y = y_closed_form(tuple);
    let p = (0..k)
        .map(|j| {
            (0..=j).fold(T::zero(), |acc, r| {
                acc + tuple[r].clone() * (tuple[j - r].clone() + y[j - r].clone())
            })
        })
        .collect();
    let q = (0..k)
        .map(|l| (0..=l).fold(T::zero(), |acc, r| acc + a[r].clone() * y[l - r + 1].clone()))
        .collect();
    (p, q)
}

/// Solves for the tuple by affine elimination on the expanded numerator.
pub fn solve<T: Scalar>(g: &Polynomial<T>) -> Result<SolveResult<T>, SolveError> {
    let k = check_input(g)?;
    let g1 = g.shift_by_one();
    let a = g1.descending(k);
    let top = 2 * k - 2;

    let mut c = vec![T::zero(); k];
    c[0] = a[0].clone() * T::from_int(k as i64 - 1);

    for j in 1..k {
        let coeff_at = |t: T, c: &mut Vec<T>| {
            c[j] = t;
            numerator(&g1, &bounding_poly(c)).coeff_desc(top, j)
        };
        let v0 = coeff_at(T::zero(), &mut c);
        let v1 = coeff_at(T::one(), &mut c);
        let slope = v1 - v0.clone();
        if slope.is_zero() {
            return Err(SolveError::Degenerate { index: j });
        }
        c[j] = -v0 / slope;
    }

    let (case_tag, i_star, gap) = classify_tuple(&g1, &c);
    Ok(SolveResult { g: g.clone(), k, c, a, case_tag, i_star, gap })
}

/// Reference route: solves with the closed-form `p_j, q_j` sums and the
/// explicit divisor `a_0 (k + j - 1)`, never expanding a product.
pub fn solve_explicit<T: Scalar>(g: &Polynomial<T>) -> Result<Vec<T>, SolveError> {
    let k = check_input(g)?;
    let a = g.shift_by_one().descending(k);
    let mut c = vec![T::zero(); k];
    c[0] = a[0].clone() * T::from_int(k as i64 - 1);
    for j in 1..k {
        c[j] = T::zero();
        let (p, q) = pq_closed_forms(&a, &c);
        let divisor = a[0].clone() * T::from_int((k + j - 1) as i64);
        c[j] = (q[j].clone() - p[j].clone()) / divisor;
    }
    Ok(c)
}

fn classify_tuple<T: Scalar>(g1: &Polynomial<T>, c: &[T]) -> (CaseTag, Option<usize>, Option<T>) {
    let k = c.len();
    let top = 2 * k - 2;
    let d = numerator(g1, &bounding_poly(c));
    match (0..=top).find(|&j| !d.coeff_desc(top, j).is_zero()) {
        None => (CaseTag::ExactTelescoping, None, None),
        Some(j) => {
            let gap = d.coeff_desc(top, j);
            let tag = if gap.is_positive() { CaseTag::QGreater } else { CaseTag::PGreater };
            (tag, Some(j), Some(gap))
        }
    }
}

/// Case tag, minimal differing index and gap at the full tuple.
pub fn classify<T: Scalar>(result: &SolveResult<T>) -> (CaseTag, Option<usize>, Option<T>) {
    classify_tuple(&result.g.shift_by_one(), &result.c)
}
