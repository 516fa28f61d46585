//! Residue-class closed forms for `a_n`.
//!
//! With `h(X) = c_0 X^{k-1} + .. + c_{k-2} X` and `V` the lcm of the
//! denominators of `c_0, .., c_{k-2}`, `h_0 = V h` has integer coefficients and
//! `h(n) = (h_0(n) - r) / V + r / V` where `r = h_0(n) mod V` depends only on
//! `n mod V`. Choosing the constant `n(r) - r/V` inside the admissible window
//! below `c_{k-1}` makes `f_r = h + n(r) - r/V` integer-valued on its class,
//! and then `a_n = f_r(n)` for every large enough `n` of that class.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{ceil_int, floor_int, int, is_integer, lcm_denominators, Rational};
use crate::bounds::{positive_from};
use crate::solver::{numerator, solve, CaseTag, SolveError, SolveResult};
use crate::Poly;

/// Largest modulus for which every residue class is tabulated. Above it,
/// residues are computed on demand and all of them count as reachable.
pub const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("g({at}) <= 0; shift the polynomial first (see shift_normalize)")]
    NonPositiveValue { at: BigInt },
    #[error("modulus {0} does not fit in 64 bits")]
    ModulusTooLarge(BigInt),
    #[error("n = {n} is below the certified range (formula holds from n = {floor}); use the oracle")]
    Uncertified { n: u64, floor: BigInt },
    #[error("sign certification failed for residue {r}: {reason}")]
    CertificationFailed { r: u64, reason: String },
    #[error("f_{r}({n}) is not an integer")]
    NonIntegral { r: u64, n: u64 },
}

/// Whether the denominator of `c_{k-1}` divides `V`. When it does, some
/// residues sit exactly on the window boundary and need the case tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divisibility {
    NonDividing,
    Dividing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueFormula {
    pub r: u64,
    pub n_r: BigInt,
    /// `n(r) - r/V`.
    pub constant: Rational,
    /// Attained as `h_0(n) mod V` for some `n`; always `true` when the
    /// modulus is too large to tabulate.
    pub reachable: bool,
    /// `c_{k-1} + r/V` is an integer.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub g: Poly,
    pub solution: SolveResult<Rational>,
    pub modulus: u64,
    pub h: Poly,
    pub h0: Poly,
    pub divisibility: Divisibility,
    /// Indexed by `r`; empty when `V > TABLE_LIMIT`.
    pub residues: Vec<ResidueFormula>,
    /// `class_residue[n mod V] = h_0(n) mod V`; empty when `V > TABLE_LIMIT`.
    pub class_residue: Vec<u64>,
    h0_mod: Vec<u128>,
    pub threshold: BigInt,
    pub tightened_floor: Option<BigInt>,
}

/// Least `i0 >= 0` with `g > 0` on `[i0 + 1, ∞)`, and `g(X + i0)`.
pub fn shift_normalize(g: &Poly) -> Result<(Poly, u64), ClosedFormError> {
    if g.degree().unwrap_or(0) < 2 {
        return Err(SolveError::DegreeTooSmall(g.degree()).into());
    }
    if !g.leading().is_some_and(|c| c.is_positive()) {
        return Err(SolveError::NonPositiveLeading.into());
    }
    let from = positive_from(g);
    let i0 = (from - BigInt::one()).max(BigInt::zero());
    let i0 = i0.to_u64().ok_or_else(|| ClosedFormError::ModulusTooLarge(i0.clone()))?;
    Ok((g.shift(&int(i0)), i0))
}

/// Fails with the first integer `i >= 1` where `g(i) <= 0`.
pub fn check_positive_on_integers(g: &Poly) -> Result<(), ClosedFormError> {
    let from = positive_from(g);
    let mut i = BigInt::one();
    while i < from {
        if !g.eval(&int(i.clone())).is_positive() {
            return Err(ClosedFormError::NonPositiveValue { at: i });
        }
        i += 1;
    }
    Ok(())
}

fn residue_of(h0_mod: &[u128], modulus: u64, n: u64) -> u64 {
    let m = modulus as u128;
    let x = (n % modulus) as u128;
    (h0_mod.iter().rev().fold(0u128, |acc, &c| (acc * x + c) % m)) as u64
}

impl ClosedForm {
    pub fn k(&self) -> usize {
        self.solution.k
    }

    pub fn case_tag(&self) -> CaseTag {
        self.solution.case_tag
    }

    pub fn is_tabulated(&self) -> bool {
        self.modulus <= TABLE_LIMIT
    }

    /// The formula data for residue `r < V`.
    pub fn residue(&self, r: u64) -> ResidueFormula {
        match self.residues.get(r as usize) {
            Some(rf) => rf.clone(),
            None => {
                let (n_r, constant, boundary) =
                    residue_constant(self.last(), r, self.modulus, self.case_tag());
                ResidueFormula { r, n_r, constant, reachable: true, boundary }
            }
        }
    }

    fn last(&self) -> &Rational {
        &self.solution.c[self.k() - 1]
    }

    /// `f_r = h + constant_r`.
    pub fn formula(&self, r: u64) -> Poly {
        &self.h + &Poly::constant(self.residue(r).constant)
    }

    pub fn residue_for(&self, n: u64) -> u64 {
        match self.class_residue.get((n % self.modulus) as usize) {
            Some(&r) => r,
            None => residue_of(&self.h0_mod, self.modulus, n),
        }
    }

    /// Smallest `n` from which `eval_a_n` answers.
    pub fn valid_from(&self) -> &BigInt {
        self.tightened_floor.as_ref().unwrap_or(&self.threshold)
    }

    /// `f_r(n)` for the residue of `n`, without the range check.
    pub fn formula_value(&self, n: u64) -> Result<BigInt, ClosedFormError> {
        let r = self.residue_for(n);
        let v = self.h.eval(&int(n)) + self.residue(r).constant;
        if !is_integer(&v) {
            return Err(ClosedFormError::NonIntegral { r, n });
        }
        Ok(v.to_integer())
    }

    /// `a_n` from the closed form; refuses `n` below the validated range.
    pub fn eval_a_n(&self, n: u64) -> Result<BigInt, ClosedFormError> {
        if BigInt::from(n) < *self.valid_from() {
            return Err(ClosedFormError::Uncertified { n, floor: self.valid_from().clone() });
        }
        self.formula_value(n)
    }

    /// Constant term per class `n mod V`, as `(class, r, constant)`. Empty
    /// when the modulus is too large to tabulate.
    pub fn class_table(&self) -> Vec<(u64, u64, Rational)> {
        (0..self.modulus.min(self.class_residue.len() as u64))
            .map(|class| {
                let r = self.class_residue[class as usize];
                (class, r, self.residues[r as usize].constant.clone())
            })
            .collect()
    }

    /// Compares an externally supplied `(class, constant)` table with the
    /// computed one.
    pub fn audit_table(&self, claimed: &[(u64, Rational)]) -> TableAudit {
        let mut seen = BTreeSet::new();
        let mut duplicate_classes = BTreeSet::new();
        let mut wrong = Vec::new();
        let table = self.class_table();
        for (class, constant) in claimed {
            if !seen.insert(*class) {
                duplicate_classes.insert(*class);
            }
            match table.get(*class as usize) {
                Some((_, _, actual)) if actual == constant => {}
                Some((_, _, actual)) => wrong.push((*class, constant.clone(), Some(actual.clone()))),
                None => wrong.push((*class, constant.clone(), None)),
            }
        }
        let missing_classes = (0..self.modulus).filter(|c| !seen.contains(c)).collect();
        TableAudit {
            duplicate_classes: duplicate_classes.into_iter().collect(),
            missing_classes,
            wrong,
        }
    }

    pub fn to_json(&self) -> Value {
        let residues: Vec<Value> = self
            .residues
            .iter()
            .map(|rf| {
                let f = self.formula(rf.r);
                json!({
                    "r": rf.r,
                    "n_r": rf.n_r.to_string(),
                    "constant": rf.constant.to_string(),
                    "coeffs": f.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "reachable": rf.reachable,
                    "boundary": rf.boundary,
                })
            })
            .collect();
        let classes: Vec<Value> = self
            .class_table()
            .into_iter()
            .map(|(class, r, constant)| json!({"class": class, "r": r, "constant": constant.to_string()}))
            .collect();
        json!({
            "k": self.k(),
            "c": self.solution.c.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "V": self.modulus,
            "N": big_json(&self.threshold),
            "tightened_floor": self.tightened_floor.as_ref().map(big_json),
            "tabulated": self.is_tabulated(),
            "residues": residues,
            "classes": classes,
            "h0": self.h0.to_string(),
            "case": self.case_tag().to_string(),
            "i_star": self.solution.i_star,
            "divisibility": match self.divisibility {
                Divisibility::NonDividing => "NonDividing",
                Divisibility::Dividing => "Dividing",
            },
        })
    }
}

/// Integers that fit `u64` become JSON numbers, larger ones strings.
pub fn big_json(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableAudit {
    pub duplicate_classes: Vec<u64>,
    pub missing_classes: Vec<u64>,
    /// `(class, claimed, computed)`.
    pub wrong: Vec<(u64, Rational, Option<Rational>)>,
}

impl TableAudit {
    pub fn is_clean(&self) -> bool {
        self.duplicate_classes.is_empty() && self.missing_classes.is_empty() && self.wrong.is_empty()
    }
}

/// Constant of `f_r`: the unique value `≡ -r/V (mod 1)` in `(c_{k-1} - 1, c_{k-1})`,
/// or at an exact boundary `c_{k-1}` unless the case tag forces `c_{k-1} - 1`.
fn residue_constant(last: &Rational, r: u64, modulus: u64, tag: CaseTag) -> (BigInt, Rational, bool) {
    let shift = Rational::new(BigInt::from(r), BigInt::from(modulus));
    let t = last + &shift;
    let (n_r, boundary) = if is_integer(&t) {
        let n = t.to_integer();
        match tag {
            CaseTag::PGreater => (n - 1, true),
            CaseTag::ExactTelescoping | CaseTag::QGreater => (n, true),
        }
    } else {
        (floor_int(&t), false)
    };
    let constant = int(n_r.clone()) - shift;
    (n_r, constant, boundary)
}

/// Residues carrying the smallest and largest constant over all of `0..V`.
/// Constants are the multiples of `1/V` in the window `(L - 1, L]`, or
/// `[L - 1, L)` when the case tag is `PGreater`.
fn extreme_residues(last: &Rational, modulus: u64, tag: CaseTag) -> (u64, u64) {
    let v = int(BigInt::from(modulus));
    let top = last * &v;
    let bottom = &top - &v;
    let (m_min, m_max) = if tag == CaseTag::PGreater {
        (ceil_int(&bottom), ceil_int(&top) - 1)
    } else {
        (floor_int(&bottom) + 1, floor_int(&top))
    };
    let r_of = |m: BigInt| (-m).mod_floor(&BigInt::from(modulus)).to_u64().expect("reduced");
    (r_of(m_min), r_of(m_max))
}

/// Builds the closed form and certifies its threshold.
pub fn build_closed_form(g: &Poly) -> Result<ClosedForm, ClosedFormError> {
    let solution = solve(g)?;
    check_positive_on_integers(g)?;
    let k = solution.k;

    let modulus_big = lcm_denominators(&solution.c[..k - 1]);
    let modulus = modulus_big
        .to_u64()
        .ok_or_else(|| ClosedFormError::ModulusTooLarge(modulus_big.clone()))?;
    let h = solution.shape();
    let h0 = h.scale(&int(modulus_big.clone()));
    debug_assert!(h0.coeffs().iter().all(is_integer));

    let last = &solution.c[k - 1];
    let divisibility = if modulus_big.is_multiple_of(last.denom()) {
        Divisibility::Dividing
    } else {
        Divisibility::NonDividing
    };

    let h0_mod: Vec<u128> = h0
        .coeffs()
        .iter()
        .map(|c| c.to_integer().mod_floor(&modulus_big).to_u128().expect("reduced"))
        .collect();
    let tag = solution.case_tag;
    let make = |r: u64, reachable: bool| {
        let (n_r, constant, boundary) = residue_constant(last, r, modulus, tag);
        ResidueFormula { r, n_r, constant, reachable, boundary }
    };
    let (class_residue, residues, candidates) = if modulus <= TABLE_LIMIT {
        let class_residue: Vec<u64> = (0..modulus).map(|n| residue_of(&h0_mod, modulus, n)).collect();
        let mut reachable = vec![false; modulus as usize];
        for &r in &class_residue {
            reachable[r as usize] = true;
        }
        let residues: Vec<ResidueFormula> = (0..modulus).map(|r| make(r, reachable[r as usize])).collect();
        let candidates = residues.iter().filter(|rf| rf.reachable).cloned().collect();
        (class_residue, residues, candidates)
    } else {
        let (lo, hi) = extreme_residues(last, modulus, tag);
        (Vec::new(), Vec::new(), vec![make(lo, true), make(hi, true)])
    };

    let threshold = certify_threshold(g, &h, &candidates)?;

    Ok(ClosedForm {
        g: g.clone(),
        solution,
        modulus,
        h,
        h0,
        divisibility,
        residues,
        class_residue,
        h0_mod,
        threshold,
        tightened_floor: None,
    })
}

/// Certified `N` for one bounding polynomial `f`: from `N` on,
/// `f(n) <= 1/tail < f(n) + 1`, with the left inequality strict unless the
/// upper numerator vanishes identically.
pub fn certify_formula(g1: &Poly, f: &Poly) -> Result<BigInt, String> {
    let d_hi = numerator(g1, f);
    let f_plus = f + &Poly::constant(Rational::one());
    let d_lo = numerator(g1, &f_plus);
    if d_hi.leading().is_some_and(|c| c.is_negative()) {
        return Err(format!("upper numerator {d_hi} is eventually negative"));
    }
    match d_lo.leading() {
        Some(c) if c.is_negative() => {}
        _ => return Err(format!("lower numerator {d_lo} is not eventually negative")),
    }
    if !f.leading().is_some_and(|c| c.is_positive()) {
        return Err("bounding polynomial has non-positive leading coefficient".into());
    }
    let hi_from = if d_hi.is_zero() { BigInt::zero() } else { positive_from(&d_hi) };
    let n = hi_from.max(positive_from(&-d_lo)).max(positive_from(f));
    Ok(n.max(BigInt::one()))
}

/// Maximum certified `N` over the candidate residues.
///
/// With `f = h + c`, the numerator is `D(h) - c (h + h(X+1)) - c^2`, which
/// decreases in `c` wherever `h + c_min > 0`. Past the point where `h + c_min`
/// stays positive, the largest constant is the worst case for the upper
/// numerator and the smallest for the lower one, so certifying those two
/// residues covers every class.
pub fn certify_threshold(
    g: &Poly,
    h: &Poly,
    candidates: &[ResidueFormula],
) -> Result<BigInt, ClosedFormError> {
    let g1 = g.shift_by_one();
    let mut reachable = candidates.iter();
    let Some(first) = reachable.next() else {
        return Ok(BigInt::one());
    };
    let (mut lo, mut hi) = (first, first);
    for rf in reachable {
        if rf.constant < lo.constant {
            lo = rf;
        }
        if rf.constant > hi.constant {
            hi = rf;
        }
    }
    let ns: Result<Vec<BigInt>, ClosedFormError> = [lo, hi]
        .par_iter()
        .map(|rf| {
            let f = h + &Poly::constant(rf.constant.clone());
            certify_formula(&g1, &f)
                .map_err(|reason| ClosedFormError::CertificationFailed { r: rf.r, reason })
        })
        .collect();
    Ok(ns?.into_iter().max().unwrap_or_else(BigInt::one))
}
