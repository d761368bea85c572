//! Exact polynomial arithmetic, the deletion–contraction recurrence, brute
//! force coloring counts, and the per-edge polynomial Q_eta(G, e, x).
//!
//! Everything in this module is exact: integer coefficients are
//! arbitrary-precision and rationals are kept in lowest terms. There is no
//! floating point on any code path here.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::nbc::{EdgeOrdering, NbcProfile};

/// Dense polynomial with arbitrary-precision integer coefficients,
/// `coeffs[i]` being the coefficient of `x^i`. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * x^pow`
    pub fn monomial(c: BigInt, pow: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); pow + 1];
        coeffs[pow] = c;
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, pow: usize) -> BigInt {
        self.coeffs.get(pow).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coefficient(i) + other.coefficient(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coefficient(i) - other.coefficient(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Horner evaluation at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Dense polynomial with exact rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPolynomial { coeffs };
        while p.coeffs.last().map_or(false, |c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn coefficient(&self, pow: usize) -> BigRational {
        self.coeffs
            .get(pow)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients as `p/q` strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

/// Canonical string form of an exact rational: `p/q` in lowest terms.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `x^exp` for a signed exponent; `exp < 0` requires `x != 0`.
pub fn rat_pow_signed(x: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num::pow::pow(x.clone(), exp as usize)
    } else {
        assert!(!x.is_zero(), "negative power of zero");
        num::pow::pow(x.clone(), (-exp) as usize).recip()
    }
}

pub const DEFAULT_EDGE_CAP: usize = 24;
pub const DEFAULT_COUNT_BUDGET: u128 = 100_000_000;

/// P(G, x) by the recurrence P(G) = P(G - e) - P(G/e), memoized on the
/// canonical edge list of each (renumbered) minor.
pub fn chromatic_deletion_contraction(g: &Graph) -> IntPolynomial {
    chromatic_deletion_contraction_capped(g, DEFAULT_EDGE_CAP).expect("edge cap exceeded")
}

pub fn chromatic_deletion_contraction_capped(g: &Graph, edge_cap: usize) -> Result<IntPolynomial> {
    if g.m() > edge_cap {
        return Err(Error::BudgetExceeded {
            required: g.m() as u128,
            budget: edge_cap as u128,
        });
    }
    let mut memo: HashMap<(usize, Vec<(usize, usize)>), IntPolynomial> = HashMap::new();
    Ok(del_contr(g, &mut memo))
}

fn del_contr(
    g: &Graph,
    memo: &mut HashMap<(usize, Vec<(usize, usize)>), IntPolynomial>,
) -> IntPolynomial {
    if g.m() == 0 {
        return IntPolynomial::monomial(BigInt::one(), g.n());
    }
    let key = (g.n(), g.edges().to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let e = 0;
    let deleted = del_contr(&g.delete_edge(e), memo);
    let contracted = del_contr(&g.contract(e).0, memo);
    let p = deleted.sub(&contracted);
    memo.insert(key, p.clone());
    p
}

/// Exact number of proper k-colorings by backtracking. Refuses when the
/// naive search space `k^n` exceeds the budget.
pub fn count_proper_colorings(g: &Graph, k: usize) -> Result<BigInt> {
    count_proper_colorings_budgeted(g, k, DEFAULT_COUNT_BUDGET)
}

pub fn count_proper_colorings_budgeted(g: &Graph, k: usize, budget: u128) -> Result<BigInt> {
    let space = checked_pow(k as u128, g.n());
    match space {
        Some(s) if s <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded {
                required: space.unwrap_or(u128::MAX),
                budget,
            })
        }
    }
    let mut colors = vec![usize::MAX; g.n()];
    Ok(BigInt::from(count_colorings_rec(g, k, 0, &mut colors)))
}

fn count_colorings_rec(g: &Graph, k: usize, v: usize, colors: &mut Vec<usize>) -> u128 {
    if v == g.n() {
        return 1;
    }
    let mut total = 0u128;
    'colors: for c in 0..k {
        for &w in g.neighbors(v) {
            if w < v && colors[w] == c {
                continue 'colors;
            }
        }
        colors[v] = c;
        total += count_colorings_rec(g, k, v + 1, colors);
    }
    colors[v] = usize::MAX;
    total
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Q_eta(G, e, x): odd sizes enter with weight 1/i, even sizes with -1.
pub fn q_poly(g: &Graph, eta: &EdgeOrdering, e: EdgeRef) -> RatPolynomial {
    let profile = crate::nbc::nbc_profile(g, eta);
    q_poly_from_profile(&profile, g.n(), e)
}

pub fn q_poly_from_profile(profile: &NbcProfile, n: usize, e: EdgeRef) -> RatPolynomial {
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for i in 1..n {
        let count = profile.counts_per_edge[e][i];
        if count == 0 {
            continue;
        }
        let count = BigInt::from(count);
        coeffs[n - i] = if i % 2 == 1 {
            BigRational::new(count, BigInt::from(i))
        } else {
            -BigRational::from_integer(count)
        };
    }
    RatPolynomial::from_coeffs(coeffs)
}

/// Exact value of Q_eta(G, e, x) at a rational point.
pub fn q_eval(g: &Graph, eta: &EdgeOrdering, e: EdgeRef, x: &BigRational) -> BigRational {
    q_poly(g, eta, e).eval(x)
}

/// Third chromatic oracle: Lagrange interpolation through the brute-force
/// point counts at k = 0..=n. Only sensible at desk scale; used by tests to
/// triangulate the two main algorithms.
pub fn chromatic_via_interpolation(g: &Graph) -> Result<IntPolynomial> {
    let n = g.n();
    let points: Vec<BigRational> = (0..=n)
        .map(|k| {
            count_proper_colorings_budgeted(g, k, u128::from(u64::MAX))
                .map(BigRational::from_integer)
        })
        .collect::<Result<_>>()?;
    // Lagrange basis over x = 0..=n.
    let mut acc = RatPolynomial::zero();
    for (i, y) in points.iter().enumerate() {
        if y.is_zero() {
            continue;
        }
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..=n {
            if j == i {
                continue;
            }
            // multiply basis by (x - j)
            let xj = BigRational::from_integer(BigInt::from(j));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (p, c) in basis.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(i as i64 - j as i64));
        }
        let scale = y / denom;
        let scaled: Vec<BigRational> = basis.iter().map(|c| c * &scale).collect();
        acc = RatPolynomial::from_coeffs(
            (0..scaled.len().max(acc.coeffs().len()))
                .map(|p| acc.coefficient(p) + scaled.get(p).cloned().unwrap_or_else(BigRational::zero))
                .collect(),
        );
    }
    let coeffs: Vec<BigInt> = acc
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::OracleMismatch(format!(
                    "interpolated chromatic coefficient {} is not an integer",
                    rational_string(c)
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok(IntPolynomial::from_coeffs(coeffs))
}
