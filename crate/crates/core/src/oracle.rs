//! Independent ground truth for `a_n`.
//!
//! The tail `Σ_{i>n} 1/g(i)` is split at `M`: the head `Σ_{n<i<=M}` is summed
//! exactly, and the remainder from `A = M + 1` is enclosed by Euler–Maclaurin
//! with `q` correction terms,
//!
//! ```text
//! Σ_{i>=A} φ(i) = ∫_A^∞ φ + φ(A)/2 - Σ_{j=1}^{q} B_{2j}/(2j)! φ^{(2j-1)}(A) + R,
//! |R| <= |B_{2q}|/(2q)! |φ^{(2q-1)}(A)|,
//! ```
//!
//! valid once `φ^{(2q)}` keeps one sign on `[A, ∞)`. The integral is not
//! rational in general, so it is enclosed through the expansion
//! `φ(x) = Σ_{j<=J} e_j x^{-k-j} + O(x^{-k-J-1})` with an explicit constant.
//! Every quantity is an exact rational; nothing here calls the solver except
//! to detect exact telescoping, whose certificate is re-checked locally.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{floor_int, int, Rational};
use crate::bounds::{positive_from, sign_stable_from};
use crate::closed_form::{big_json, ClosedForm};
use crate::solver::{bounding_poly, classify, solve, CaseTag};
use crate::Poly;

/// Doublings of `M` before giving up.
pub const MAX_DOUBLINGS: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle needs degree >= 2 and a positive leading coefficient")]
    Precondition,
    #[error("g({at}) <= 0 inside the summation range")]
    NonPositive { at: u64 },
    #[error("cut-off M = {m} must exceed n = {n}")]
    BadCutoff { n: u64, m: u64 },
    #[error("cut-off M = {m} is below the remainder validity start {min}")]
    BelowValidity { m: u64, min: u64 },
    #[error("unresolved boundary at n = {n}: M = {m}, enclosure [{lo}, {hi}]")]
    Unresolved { n: u64, m: u64, lo: Rational, hi: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
    /// The cut-off `M`: terms `n+1..=M` were summed exactly.
    pub terms_used: u64,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleValue {
    pub a_n: BigInt,
    pub terms_used: u64,
    /// Computed from an exact telescoping identity rather than an enclosure.
    pub exact: bool,
}

fn bernoulli_even(q: usize) -> Vec<Rational> {
    // B_0..B_{2q} via Σ_{j<=m} C(m+1, j) B_j = 0.
    let n = 2 * q;
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * int(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

fn rpow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Rigorous enclosures of reciprocal tail sums of one polynomial.
#[derive(Debug, Clone)]
pub struct TailOracle {
    g: Poly,
    k: usize,
    q: usize,
    bernoulli: Vec<Rational>,
    /// `e_0..e_J` with `1/g(x) ≈ Σ e_j x^{-k-j}`.
    expansion: Vec<Rational>,
    /// `|1/g(x) - Σ e_j x^{-k-j}| <= expansion_err * x^{-k-J-1}` past `remainder_start`.
    expansion_err: Rational,
    /// `Σ_{i>M} 1/g(i) <= crude_scale * M^{1-k} / (k-1)` past `remainder_start`.
    crude_scale: Rational,
    /// Least `A` for which all remainder bounds hold on `[A, ∞)`.
    remainder_start: u64,
    positive_from: u64,
    telescoping: Option<Poly>,
}

impl TailOracle {
    pub fn new(g: &Poly) -> Result<Self, OracleError> {
        let k = g.degree().filter(|&d| d >= 2).ok_or(OracleError::Precondition)?;
        let lead = g.leading().cloned().filter(|c| c.is_positive()).ok_or(OracleError::Precondition)?;
        let q = k + 2;
        let big_j = 2 * q;

        // Series inverse of a_0 + a_1 u + .. + a_k u^k (descending coefficients of g).
        let desc = g.descending(k);
        let mut expansion: Vec<Rational> = Vec::with_capacity(big_j + 1);
        for m in 0..=big_j {
            let mut acc = if m == 0 { Rational::one() } else { Rational::zero() };
            for i in 1..=m.min(k) {
                acc -= &desc[i] * &expansion[m - i];
            }
            expansion.push(acc / &lead);
        }
        let e_poly = Poly::from_descending(expansion.clone());
        let residual = &Poly::monomial(Rational::one(), k + big_j) - &(g * &e_poly);
        debug_assert!(residual.degree().is_none_or(|d| d < k));
        let rho: Rational = residual.coeffs().iter().map(|c| c.abs()).sum();
        let expansion_err = rho * int(2) / &lead;

        let half = g - &Poly::monomial(&lead / int(2), k);
        let mut start = sign_stable_from(&half).max(BigInt::one());

        // φ^{(p)} = N_p / g^{p+1}, N_{p+1} = N_p' g - (p+1) N_p g'.
        let dg = g.derivative();
        let mut np = Poly::constant(Rational::one());
        for p in 0..2 * q {
            np = &(&np.derivative() * g) - &(&np * &dg).scale(&int(p as i64 + 1));
        }
        start = start.max(sign_stable_from(&np));
        let remainder_start = start.to_u64().ok_or(OracleError::Precondition)?;

        let is_monomial = g.coeffs()[..k].iter().all(|c| c.is_zero());
        let crude_scale = if is_monomial { lead.recip() } else { int(2) / &lead };

        let positive_from = positive_from(g).to_u64().ok_or(OracleError::Precondition)?;

        let telescoping = solve(g).ok().and_then(|r| {
            let (tag, _, _) = classify(&r);
            let f1 = bounding_poly(&r.c);
            let f2 = f1.shift_by_one();
            let certified = &g.shift_by_one() * &(&f2 - &f1) == &f1 * &f2;
            (tag == CaseTag::ExactTelescoping && certified).then_some(f1)
        });

        Ok(Self {
            g: g.clone(),
            k,
            q,
            bernoulli: bernoulli_even(q),
            expansion,
            expansion_err,
            crude_scale,
            remainder_start,
            positive_from,
            telescoping,
        })
    }

    pub fn polynomial(&self) -> &Poly {
        &self.g
    }

    /// Smallest cut-off `M` accepted by [`tail_enclosure`](Self::tail_enclosure).
    pub fn min_cutoff(&self) -> u64 {
        self.remainder_start.saturating_sub(1)
    }

    /// The exact telescoping bounding polynomial, if `g` admits one.
    pub fn telescoping(&self) -> Option<&Poly> {
        self.telescoping.as_ref()
    }

    /// Proven upper bound on `Σ_{i>M} 1/g(i)` by comparison with an integral.
    pub fn crude_remainder(&self, m: u64) -> Rational {
        &self.crude_scale * rpow(&int(m), 1 - self.k as i64) / int(self.k as i64 - 1)
    }

    fn check_positive(&self, from: u64, to: u64) -> Result<(), OracleError> {
        for i in from..=to.min(self.positive_from.saturating_sub(1)) {
            if !self.g.eval(&int(i)).is_positive() {
                return Err(OracleError::NonPositive { at: i });
            }
        }
        Ok(())
    }

    fn head_sum(&self, from: u64, to: u64) -> Rational {
        (from..=to).map(|i| self.g.eval(&int(i)).recip()).sum()
    }

    /// Two-sided bound on `Σ_{i >= a} 1/g(i)` for `a >= remainder_start`.
    fn remainder(&self, a: u64) -> (Rational, Rational) {
        let k = self.k as i64;
        let x = int(a);
        let big_j = self.expansion.len() - 1;

        let integral: Rational = self
            .expansion
            .iter()
            .enumerate()
            .map(|(j, e)| e * rpow(&x, 1 - k - j as i64) / int(k + j as i64 - 1))
            .sum();
        let integral_err =
            &self.expansion_err * rpow(&x, -k - big_j as i64) / int(k + big_j as i64);

        // Taylor coefficients t_m = φ^{(m)}(a) / m!.
        let shifted = self.g.shift(&x);
        let b = shifted.coeffs();
        let mut t: Vec<Rational> = Vec::with_capacity(2 * self.q);
        for m in 0..2 * self.q {
            let mut acc = if m == 0 { Rational::one() } else { Rational::zero() };
            for i in 1..=m.min(self.k) {
                acc -= &b[i] * &t[m - i];
            }
            t.push(acc / &b[0]);
        }
        // B_{2j}/(2j)! φ^{(2j-1)}(a) = B_{2j}/(2j) t_{2j-1}.
        let mut core = integral + &t[0] / int(2);
        for j in 1..=self.q {
            core -= &self.bernoulli[2 * j] / int(2 * j as i64) * &t[2 * j - 1];
        }
        let em_err = (&self.bernoulli[2 * self.q] / int(2 * self.q as i64) * &t[2 * self.q - 1]).abs();
        let err = em_err + integral_err;
        (&core - &err, core + err)
    }

    fn enclose_with_head(&self, head: &Rational, m: u64) -> (Rational, Rational) {
        let (rlo, rhi) = self.remainder(m + 1);
        let lo = (head + rlo).max(head.clone());
        let hi = (head + rhi).min(head + self.crude_remainder(m));
        (lo, hi)
    }

    /// Encloses `Σ_{i>n} 1/g(i)`, summing `n+1..=M` exactly.
    pub fn tail_enclosure(&self, n: u64, m: u64) -> Result<Enclosure, OracleError> {
        if m <= n {
            return Err(OracleError::BadCutoff { n, m });
        }
        if m < self.min_cutoff() {
            return Err(OracleError::BelowValidity { m, min: self.min_cutoff() });
        }
        self.check_positive(n + 1, m)?;
        let head = self.head_sum(n + 1, m);
        let (lo, hi) = self.enclose_with_head(&head, m);
        Ok(Enclosure { lo, hi, terms_used: m })
    }

    /// `a_n = floor(1 / Σ_{i>n} 1/g(i))`.
    pub fn a_n(&self, n: u64) -> Result<OracleValue, OracleError> {
        self.check_positive(n + 1, u64::MAX)?;
        if let Some(f1) = &self.telescoping {
            // Σ_{i>n} 1/g(i) = 1/f1(n) exactly.
            let v = f1.eval(&int(n));
            debug_assert!(v.is_positive());
            return Ok(OracleValue { a_n: floor_int(&v), terms_used: n, exact: true });
        }
        let mut m = (n + 1).max(self.min_cutoff());
        let mut head = self.head_sum(n + 1, m);
        for _ in 0..MAX_DOUBLINGS {
            let (lo, hi) = self.enclose_with_head(&head, m);
            let low = floor_int(&hi.recip());
            if low == floor_int(&lo.recip()) {
                return Ok(OracleValue { a_n: low, terms_used: m, exact: false });
            }
            let next = m.checked_mul(2).ok_or(OracleError::Unresolved {
                n,
                m,
                lo: lo.clone(),
                hi: hi.clone(),
            })?;
            head += self.head_sum(m + 1, next);
            m = next;
        }
        let (lo, hi) = self.enclose_with_head(&head, m);
        Err(OracleError::Unresolved { n, m, lo, hi })
    }
}

/// One-shot convenience wrapper around [`TailOracle`].
pub fn tail_enclosure(g: &Poly, n: u64, m: u64) -> Result<Enclosure, OracleError> {
    TailOracle::new(g)?.tail_enclosure(n, m)
}

/// One-shot convenience wrapper around [`TailOracle::a_n`].
pub fn a_n_oracle(g: &Poly, n: u64) -> Result<BigInt, OracleError> {
    Ok(TailOracle::new(g)?.a_n(n)?.a_n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportLine {
    pub n: u64,
    pub a_formula: Option<String>,
    pub a_oracle: Option<String>,
    pub matched: bool,
    pub m_used: Option<u64>,
    pub error: Option<String>,
}

impl ReportLine {
    pub fn to_json(&self) -> Value {
        let num = |s: &Option<String>| match s {
            Some(s) => s.parse::<BigInt>().map(|b| big_json(&b)).unwrap_or(Value::Null),
            None => Value::Null,
        };
        let mut v = json!({
            "n": self.n,
            "a_formula": num(&self.a_formula),
            "a_oracle": num(&self.a_oracle),
            "match": self.matched,
            "M_used": self.m_used,
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub lines: Vec<ReportLine>,
    /// Least `n` in the range from which every line matches up to the end.
    pub agreement_floor: Option<u64>,
}

impl VerifyReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &ReportLine> {
        self.lines.iter().filter(|l| !l.matched)
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches().next().is_none()
    }
}

fn check_one(cf: &ClosedForm, oracle: &TailOracle, n: u64) -> ReportLine {
    let formula = cf.formula_value(n);
    let truth = oracle.a_n(n);
    let error = match (&formula, &truth) {
        (Err(e), _) => Some(e.to_string()),
        (_, Err(e)) => Some(e.to_string()),
        _ => None,
    };
    let matched = matches!((&formula, &truth), (Ok(a), Ok(b)) if *a == b.a_n);
    ReportLine {
        n,
        a_formula: formula.ok().map(|a| a.to_string()),
        m_used: truth.as_ref().ok().map(|t| t.terms_used),
        a_oracle: truth.ok().map(|t| t.a_n.to_string()),
        matched,
        error,
    }
}

/// Compares the closed form against the oracle for every `n` in `from..=to`.
/// Oracle failures are recorded per line and do not stop the sweep.
pub fn verify_range(cf: &ClosedForm, oracle: &TailOracle, from: u64, to: u64) -> VerifyReport {
    let lines: Vec<ReportLine> = (from..=to).into_par_iter().map(|n| check_one(cf, oracle, n)).collect();
    let agreement_floor = match lines.iter().rposition(|l| !l.matched) {
        None => lines.first().map(|l| l.n),
        Some(i) => lines.get(i + 1).map(|l| l.n),
    };
    VerifyReport { lines, agreement_floor }
}

/// Walks down from the certified threshold while formula and oracle agree
/// and records the least agreeing `n >= lowest` as the tightened floor.
pub fn tighten(cf: &mut ClosedForm, oracle: &TailOracle, lowest: u64) -> u64 {
    const BLOCK: u64 = 64;
    let top = cf.threshold.to_u64().unwrap_or(u64::MAX);
    let mut floor = top;
    while floor > lowest {
        let start = floor.saturating_sub(BLOCK).max(lowest);
        let ok: Vec<bool> = (start..floor)
            .into_par_iter()
            .map(|n| check_one(cf, oracle, n).matched)
            .collect();
        match ok.iter().rposition(|&m| !m) {
            Some(i) => {
                floor = start + i as u64 + 1;
                break;
            }
            None => floor = start,
        }
    }
    cf.tightened_floor = Some(BigInt::from(floor));
    floor
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn mono(k: usize) -> Poly {
        Poly::monomial(rat(1, 1), k)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_even(3);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[5], rat(0, 1));
    }

    #[test]
    fn crude_bound_for_square() {
        let o = TailOracle::new(&mono(2)).unwrap();
        assert_eq!(o.crude_remainder(10), rat(1, 10));
        let o = TailOracle::new(&Poly::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)])).unwrap();
        assert_eq!(o.crude_remainder(10), rat(2, 10));
    }

    #[test]
    fn square_tail_from_one() {
        let o = TailOracle::new(&mono(2)).unwrap();
        let e = o.tail_enclosure(1, 40).unwrap();
        // π²/6 - 1 = 0.6449340668...
        assert!(e.lo <= rat(6449340669, 10_000_000_000));
        assert!(e.hi >= rat(6449340668, 10_000_000_000));
        assert!(e.hi.recip() > rat(155, 100) && e.lo.recip() < rat(156, 100));
        assert!(e.width() <= o.crude_remainder(40));
    }

    #[test]
    fn telescoping_value_is_enclosed() {
        let g = Poly::new(vec![rat(-1, 4), rat(0, 1), rat(1, 1)]);
        let o = TailOracle::new(&g).unwrap();
        assert!(o.telescoping().is_some());
        let mut last = None;
        for m in [8, 16, 64, 256] {
            let e = o.tail_enclosure(3, m).unwrap();
            assert!(e.contains(&rat(2, 7)));
            if let Some(w) = last {
                assert!(e.width() <= w);
            }
            last = Some(e.width());
        }
        assert!(last.unwrap() < rat(1, 1_000_000_000));
    }

    #[test]
    fn small_values() {
        assert_eq!(a_n_oracle(&mono(2), 10).unwrap(), BigInt::from(10));
        assert_eq!(a_n_oracle(&mono(3), 1).unwrap(), BigInt::from(4));
        assert_eq!(a_n_oracle(&mono(2), 1).unwrap(), BigInt::from(1));
    }

    #[test]
    fn cutoff_errors() {
        let o = TailOracle::new(&mono(2)).unwrap();
        assert_eq!(o.tail_enclosure(5, 5), Err(OracleError::BadCutoff { n: 5, m: 5 }));
        let g = Poly::new(vec![rat(-100, 1), rat(0, 1), rat(1, 1)]);
        let o = TailOracle::new(&g).unwrap();
        assert!(matches!(o.a_n(1), Err(OracleError::NonPositive { .. })));
        assert!(o.a_n(10).is_ok());
    }
}
