//! Truncated power series in an outer variable `q` whose coefficients are
//! polynomials in an inner variable, plus expansion of infinite products of
//! the shape `prod (1 - t^a q^k)^e`.
//!
//! This is exactly the machinery needed to expand Goettsche-style generating
//! functions: each factor contributes `q`-terms only in multiples of its
//! `q`-exponent `k`, so factors with `k` beyond the truncation order can be
//! skipped without changing any retained coefficient.

use num_integer::binomial;
use num_traits::One;

use crate::poly::{Int, Poly, Rat};
use crate::Error;

/// A power series in `q` truncated at `q^order`: the coefficients of
/// `q^0, ..., q^order` are stored as polynomials in the inner variable,
/// higher terms are discarded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<Poly>,
}

impl TruncSeries {
    /// The series with constant term `c` and no other terms.
    pub fn constant(c: Poly, order: usize) -> TruncSeries {
        let mut coeffs = vec![Poly::zero(); order + 1];
        coeffs[0] = c;
        TruncSeries { order, coeffs }
    }

    /// The multiplicative identity truncated at `q^order`.
    pub fn one(order: usize) -> TruncSeries {
        TruncSeries::constant(Poly::one(), order)
    }

    /// Build from explicit coefficients of `q^0, .., q^order`.
    ///
    /// # Panics
    /// Panics when `coeffs` is empty; the truncation order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Poly>) -> TruncSeries {
        assert!(!coeffs.is_empty(), "a truncated series stores at least q^0");
        TruncSeries { order: coeffs.len() - 1, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The coefficient of `q^m`.
    ///
    /// # Panics
    /// Panics when `m` exceeds the truncation order: that coefficient was
    /// never computed, and returning zero for it would be a silent lie.
    pub fn coeff(&self, m: usize) -> &Poly {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Forget the terms above `new_order`.
    ///
    /// # Panics
    /// Panics when `new_order` exceeds the current order.
    pub fn truncated(&self, new_order: usize) -> TruncSeries {
        assert!(new_order <= self.order, "cannot extend a truncated series");
        TruncSeries { order: new_order, coeffs: self.coeffs[..=new_order].to_vec() }
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![Poly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        TruncSeries { order, coeffs }
    }
}

/// One factor `(1 - t^inner_t_exp * q^inner_q_exp)^outer_exp` of an
/// infinite product. The outer exponent may be negative (geometric-type
/// expansion); the `q`-exponent must be at least 1 for the factor to define
/// a power series in `q`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProductFactor {
    pub inner_t_exp: usize,
    pub inner_q_exp: usize,
    pub outer_exp: i64,
}

/// Expand a single factor `(1 - t^a q^k)^e` as a truncated series in `q`.
///
/// For `e >= 0` this is the finite binomial expansion; for `e = -m < 0` it
/// is the geometric-binomial series `sum_j C(m-1+j, j) t^(a j) q^(k j)`.
/// Every retained coefficient is a single monomial in `t`.
///
/// # Panics
/// Panics when the factor has `q`-exponent 0 (checked upstream by
/// [`euler_product`]).
pub fn factor_power(factor: &ProductFactor, order: usize) -> TruncSeries {
    assert!(factor.inner_q_exp >= 1, "factor must have positive q-exponent");
    let (a, k, e) = (factor.inner_t_exp, factor.inner_q_exp, factor.outer_exp);
    let mut coeffs = vec![Poly::zero(); order + 1];
    let j_max = order / k;
    for j in 0..=j_max {
        let c = if e >= 0 {
            if (j as u64) > e as u64 {
                break;
            }
            let sign = if j % 2 == 0 { Int::one() } else { -Int::one() };
            sign * binomial(Int::from(e), Int::from(j))
        } else {
            let m = Int::from(-e);
            binomial(m - Int::one() + Int::from(j), Int::from(j))
        };
        coeffs[k * j] = Poly::monomial(Rat::from_integer(c), a * j);
    }
    TruncSeries { order, coeffs }
}

/// Expand `prod_f (1 - t^(a_f) q^(k_f))^(e_f)` truncated at `q^order`.
///
/// Factors whose `q`-exponent exceeds the truncation order contribute only
/// terms that would be discarded, so they are skipped; appending such
/// factors never changes the result. A factor with `q`-exponent 0 is
/// rejected: it is not a power series in `q`.
pub fn euler_product(factors: &[ProductFactor], order: usize) -> Result<TruncSeries, Error> {
    if factors.iter().any(|f| f.inner_q_exp == 0) {
        return Err(Error::ZeroQExponent);
    }
    let mut acc = TruncSeries::one(order);
    for f in factors {
        if f.inner_q_exp > order {
            continue;
        }
        acc = acc.mul(&factor_power(f, order));
    }
    Ok(acc)
}
