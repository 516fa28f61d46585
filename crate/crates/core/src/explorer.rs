//! Tabulates the coefficient tuple across a one-parameter family of
//! polynomials and looks for exact polynomial fits of each `c_i` in `k`.
//!
//! Fits are evidence over the tabulated range only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{int, Rational};
use crate::parse::parse_poly;
use crate::solver::{solve, SolveError};
use crate::Poly;

pub const DEFAULT_DMAX: usize = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExploreError {
    #[error("family member at k = {k}: {source}")]
    Solve { k: usize, source: SolveError },
    #[error("c_{i} has {have} tabulated points, need at least {need}")]
    InsufficientRows { i: usize, have: usize, need: usize },
    #[error("unrecognized family {0:?}: expected monomial, monomial-times:<P0>, or product:<P>;<Q>")]
    BadFamily(String),
    #[error("empty range k = {0}..={1}")]
    EmptyRange(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `X^k`
    Monomial,
    /// `X^k P0(X)`
    MonomialTimes(Poly),
    /// `P(X) Q(X)^k`
    PowerProduct(Poly, Poly),
}

impl Family {
    pub fn member(&self, k: usize) -> Poly {
        let one = Rational::from_integer(1.into());
        match self {
            Family::Monomial => Poly::monomial(one, k),
            Family::MonomialTimes(p0) => &Poly::monomial(one, k) * p0,
            Family::PowerProduct(p, q) => p * &q.pow(k as u32),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Monomial => write!(f, "X^k"),
            Family::MonomialTimes(p0) => write!(f, "X^k*({p0})"),
            Family::PowerProduct(p, q) => write!(f, "({p})*({q})^k"),
        }
    }
}

impl FromStr for Family {
    type Err = ExploreError;

    fn from_str(s: &str) -> Result<Self, ExploreError> {
        let bad = || ExploreError::BadFamily(s.to_string());
        let s = s.trim();
        if s == "monomial" || s == "X^k" {
            return Ok(Family::Monomial);
        }
        if let Some(rest) = s.strip_prefix("monomial-times:") {
            return Ok(Family::MonomialTimes(parse_poly(rest).map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("product:") {
            let (p, q) = rest.split_once(';').ok_or_else(bad)?;
            return Ok(Family::PowerProduct(
                parse_poly(p).map_err(|_| bad())?,
                parse_poly(q).map_err(|_| bad())?,
            ));
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fit {
    /// Least-degree polynomial in `k` reproducing every tabulated point.
    Polynomial { poly: Poly, points: usize },
    NoFit { d_max: usize, points: usize },
}

impl Fit {
    pub fn describe(&self) -> String {
        match self {
            Fit::Polynomial { poly, points } => format!(
                "{} (degree {}, consistent with {points} tabulated values)",
                poly.to_string().replace('X', "k"),
                poly.degree().unwrap_or(0)
            ),
            Fit::NoFit { d_max, points } => {
                format!("no polynomial fit up to degree {d_max} over {points} tabulated values")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTable {
    pub family: Family,
    pub rows: BTreeMap<usize, Vec<Rational>>,
    pub fits: BTreeMap<usize, Fit>,
}

/// Solves every family member for `k_min..=k_max`.
pub fn tabulate(family: &Family, k_min: usize, k_max: usize) -> Result<FamilyTable, ExploreError> {
    let k_min = k_min.max(2);
    if k_min > k_max {
        return Err(ExploreError::EmptyRange(k_min, k_max));
    }
    let rows: Result<BTreeMap<_, _>, _> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            solve(&family.member(k))
                .map(|r| (k, r.c))
                .map_err(|source| ExploreError::Solve { k, source })
        })
        .collect();
    Ok(FamilyTable { family: family.clone(), rows: rows?, fits: BTreeMap::new() })
}

/// Exact Lagrange interpolation through distinct abscissae.
pub fn lagrange(points: &[(Rational, Rational)]) -> Poly {
    let mut out = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let factor = Poly::new(vec![-xj.clone(), Rational::from_integer(1.into())]);
            basis = (&basis * &factor).scale(&(xi - xj).recip());
        }
        out = &out + &basis;
    }
    out
}

impl FamilyTable {
    /// `(k, c_i(k))` for rows where `c_i` is defined, i.e. `k >= i + 2`.
    pub fn points(&self, i: usize) -> Vec<(Rational, Rational)> {
        self.rows
            .iter()
            .filter(|(k, c)| **k >= i + 2 && c.len() > i)
            .map(|(k, c)| (int(*k as i64), c[i].clone()))
            .collect()
    }

    /// Fits `c_i(k)` and stores the result in `fits`.
    pub fn interpolate_ci(&mut self, i: usize, d_max: usize) -> Result<&Fit, ExploreError> {
        let fit = interpolate_ci(self, i, d_max)?;
        self.fits.insert(i, fit);
        Ok(&self.fits[&i])
    }

    pub fn max_index(&self) -> usize {
        self.rows.values().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(k, c)| json!({"k": k, "c": c.iter().map(|x| x.to_string()).collect::<Vec<_>>()}))
            .collect();
        let fits: Vec<Value> = self
            .fits
            .iter()
            .map(|(i, fit)| match fit {
                Fit::Polynomial { poly, points } => json!({
                    "i": i,
                    "status": "range-consistent",
                    "poly_in_k": poly.to_string().replace('X', "k"),
                    "coeffs": poly.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "points": points,
                }),
                Fit::NoFit { d_max, points } => json!({
                    "i": i, "status": "no-fit", "d_max": d_max, "points": points,
                }),
            })
            .collect();
        json!({
            "family": self.family.to_string(),
            "rows": rows,
            "fits": fits,
            "note": "fits are consistent with the tabulated range only; they are not proofs",
        })
    }

    pub fn to_csv(&self) -> String {
        let width = self.max_index();
        let mut out = String::from("k");
        for i in 0..width {
            out += &format!(",c{i}");
        }
        out.push('\n');
        for (k, c) in &self.rows {
            out += &k.to_string();
            for i in 0..width {
                out.push(',');
                if let Some(x) = c.get(i) {
                    out += &x.to_string();
                }
            }
            out.push('\n');
        }
        for (i, fit) in &self.fits {
            out += &format!("# c{i}: {}\n", fit.describe());
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let width = self.max_index();
        let mut out = format!("\\begin{{tabular}}{{r{}}}\n$k$", "r".repeat(width));
        for i in 0..width {
            out += &format!(" & $c_{{{i}}}$");
        }
        out += " \\\\\n\\hline\n";
        for (k, c) in &self.rows {
            out += &k.to_string();
            for i in 0..width {
                out += " & ";
                if let Some(x) = c.get(i) {
                    out += &latex_rational(x);
                }
            }
            out += " \\\\\n";
        }
        out += "\\end{tabular}\n";
        for (i, fit) in &self.fits {
            out += &format!("% c_{i}: {}\n", fit.describe());
        }
        out
    }
}

pub fn latex_rational(x: &Rational) -> String {
    if x.is_integer() {
        format!("${x}$")
    } else {
        let sign = if x.numer().sign() == num_bigint::Sign::Minus { "-" } else { "" };
        format!("${sign}\\frac{{{}}}{{{}}}$", x.numer().magnitude(), x.denom())
    }
}

/// Least-degree exact fit of `c_i(k)` up to `d_max`; every tabulated point
/// past the interpolation nodes must match exactly.
pub fn interpolate_ci(table: &FamilyTable, i: usize, d_max: usize) -> Result<Fit, ExploreError> {
    let pts = table.points(i);
    let need = d_max + 2;
    if pts.len() < need {
        return Err(ExploreError::InsufficientRows { i, have: pts.len(), need });
    }
    for d in 0..=d_max {
        let poly = lagrange(&pts[..=d]);
        if pts[d + 1..].iter().all(|(x, y)| poly.eval(x) == *y) {
            return Ok(Fit::Polynomial { poly, points: pts.len() });
        }
    }
    Ok(Fit::NoFit { d_max, points: pts.len() })
}
