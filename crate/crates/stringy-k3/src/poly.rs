//! Dense univariate polynomials and rational functions over the exact
//! rationals.
//!
//! The distinguished variable is called `t` throughout; every Hodge-Deligne
//! quantity in this crate lives on the diagonal `u = v = z` and is stored in
//! `t = z^2`. Coefficients are arbitrary-precision rationals so that the
//! intermediate divisions (Gaussian-binomial quotients, gcd reductions,
//! normalization of rational functions) stay exact; the geometric results of
//! interest all end up with integer coefficients, and the accessors for that
//! are part of the API.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator.
pub type Rat = num_rational::BigRational;

/// Parse a rational from its decimal form: an optionally signed integer
/// `"p"`, or a fraction `"p/q"` with `q` nonzero.
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let parse_int = |digits: &str| -> Result<Int, String> {
        digits
            .trim()
            .parse::<Int>()
            .map_err(|_| format!("invalid integer {digits:?}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Render a rational as `"p"` when it is an integer and `"p/q"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A dense polynomial in `t` with rational coefficients, lowest degree first.
///
/// The zero polynomial is the empty coefficient vector; otherwise the last
/// stored coefficient is nonzero. All constructors maintain this, so `==` is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    /// Build from coefficients (lowest degree first), trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Build from small integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(Int::from(c))).collect())
    }

    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rat) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c * t^exp`.
    pub fn monomial(c: Rat, exp: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); exp + 1];
        coeffs[exp] = c;
        Poly { coeffs }
    }

    /// `1 - t^k`. For `k = 0` this is the zero polynomial.
    pub fn one_minus_power(k: usize) -> Poly {
        &Poly::one() - &Poly::monomial(Rat::one(), k)
    }

    /// `1 + t + ... + t^(k-1)`, the expanded form of `(1 - t^k)/(1 - t)`.
    /// For `k = 0` this is the empty sum, i.e. zero.
    pub fn geometric_sum(k: usize) -> Poly {
        Poly { coeffs: vec![Rat::one(); k] }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// All stored coefficients, lowest degree first, without trailing zeros.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Evaluate at a rational point by Horner's rule.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// The coefficients as integers, or `None` if any is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<Int>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect()
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    /// The monic associate (scaled so the leading coefficient is 1).
    /// The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `self^exp` by repeated multiplication.
    pub fn pow(&self, exp: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Drop every term of degree greater than `order`.
    pub fn truncated(&self, order: usize) -> Poly {
        if self.coeffs.len() <= order + 1 {
            return self.clone();
        }
        Poly::from_coeffs(self.coeffs[..=order].to_vec())
    }

    /// Substitute `t -> t^k`, spreading the coefficients apart.
    ///
    /// Fails for `k = 0`: collapsing every power onto the constant term is
    /// never what a reindexing step wants.
    pub fn substitute_power(&self, k: usize) -> Result<Poly, Error> {
        if k == 0 {
            return Err(Error::ZeroSubstitutionPower);
        }
        let Some(deg) = self.degree() else {
            return Ok(Poly::zero());
        };
        let mut coeffs = vec![Rat::zero(); deg * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Ok(Poly { coeffs })
    }

    /// Euclidean division: returns `(q, r)` with `self = q * b + r` and
    /// `deg r < deg b`. Fails only when `b` is zero.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly), Error> {
        let Some(db) = b.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = b.leading().expect("nonzero divisor has a leading coefficient").recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - db];
        while rem.len() > db {
            let top = rem.last().expect("nonempty").clone();
            let shift = rem.len() - 1 - db;
            let factor = top * &lead_inv;
            for (i, bc) in b.coeffs.iter().enumerate() {
                if !bc.is_zero() {
                    rem[shift + i] -= &factor * bc;
                }
            }
            quot[shift] = factor;
            // The top term cancels by construction; trim it and any further
            // zeros uncovered underneath.
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Division that is known to be exact; a nonzero remainder is reported
    /// as an error carrying `context`.
    pub fn exact_div(&self, b: &Poly, context: &str) -> Result<Poly, Error> {
        let (q, r) = self.divmod(b)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(context.to_string()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    /// `gcd(p, 0) = monic(p)`; `gcd(0, 0)` is an error.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly, Error> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeroPair);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.divmod(&y).expect("nonzero divisor in gcd loop");
            x = y;
            y = r;
        }
        Ok(x.monic())
    }
}

fn add_assign_scaled(target: &mut Vec<Rat>, src: &[Rat], sign: i32) {
    if target.len() < src.len() {
        target.resize(src.len(), Rat::zero());
    }
    for (i, c) in src.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if sign >= 0 {
            target[i] += c;
        } else {
            target[i] -= c;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut coeffs = self.coeffs.clone();
        add_assign_scaled(&mut coeffs, &rhs.coeffs, 1);
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut coeffs = self.coeffs.clone();
        add_assign_scaled(&mut coeffs, &rhs.coeffs, -1);
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Integer fast path: almost every polynomial in the pipeline has
        // integer coefficients, and skipping the per-product gcd reduction
        // of rational arithmetic is a large constant-factor win.
        if let (Some(a), Some(b)) = (self.integer_coeffs(), rhs.integer_coeffs()) {
            let mut acc = vec![Int::zero(); a.len() + b.len() - 1];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    if !bj.is_zero() {
                        acc[i + j] += ai * bj;
                    }
                }
            }
            return Poly::from_coeffs(acc.into_iter().map(Rat::from_integer).collect());
        }
        let mut acc = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in rhs.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    acc[i + j] += ai * bj;
                }
            }
        }
        Poly::from_coeffs(acc)
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly { (&self).$method(&rhs) }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly { (&self).$method(rhs) }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly { self.$method(&rhs) }
        }
    )*};
}
forward_owned_binop!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Human form with ascending powers: `1 + 23t + 299t^2 - t^7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_part = rat_to_string(&mag);
            match (i, coeff_part.as_str()) {
                (0, _) => write!(f, "{coeff_part}")?,
                (1, "1") => write!(f, "t")?,
                (1, _) => write!(f, "{coeff_part}t")?,
                (_, "1") => write!(f, "t^{i}")?,
                (_, _) => write!(f, "{coeff_part}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    /// Serializes as an array of decimal coefficient strings, lowest degree
    /// first, e.g. `["1", "-3", "1/2"]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(rat_to_string).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Poly, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coeffs = strings
            .iter()
            .map(|s| rat_from_str(s).map_err(D::Error::custom))
            .collect::<Result<Vec<Rat>, _>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// A quotient of two polynomials with a nonzero denominator.
///
/// The representation is *not* forced into lowest terms: constructors keep
/// the numerator and denominator exactly as given, so a caller can carry a
/// preferred display denominator (a product of cyclotomic-style factors,
/// say) through a computation. [`RationalFn::normalize`] produces the
/// canonical representative: numerator and denominator coprime, denominator
/// monic, and denominator 1 when the numerator is zero. The arithmetic
/// operations return normalized results.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Build `num / den`, keeping both parts verbatim. Fails when `den` is
    /// the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFn { num, den })
    }

    /// The polynomial `p` viewed as `p / 1`.
    pub fn from_poly(p: Poly) -> RationalFn {
        RationalFn { num: p, den: Poly::one() }
    }

    pub fn zero() -> RationalFn {
        RationalFn::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Canonical representative: divide out the gcd, make the denominator
    /// monic, and collapse to denominator 1 when the numerator vanishes.
    /// Normalizing twice yields an identical representation.
    pub fn normalize(&self) -> RationalFn {
        if self.num.is_zero() {
            return RationalFn::zero();
        }
        let g = Poly::gcd(&self.num, &self.den).expect("denominator is nonzero");
        let num = self.num.exact_div(&g, "gcd divides numerator").expect("gcd divides");
        let den = self.den.exact_div(&g, "gcd divides denominator").expect("gcd divides");
        let lead = den.leading().expect("nonzero denominator").clone();
        RationalFn { num: num.scale(&lead.recip()), den: den.scale(&lead.recip()) }
    }

    /// Exact sum over the product denominator, returned normalized.
    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        let num = &self.num * &rhs.den + &rhs.num * &self.den;
        let den = &self.den * &rhs.den;
        RationalFn { num, den }.normalize()
    }

    /// Exact product, returned normalized.
    pub fn mul(&self, rhs: &RationalFn) -> RationalFn {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        RationalFn { num, den }.normalize()
    }

    /// True when the normalized denominator is the constant 1, i.e. the
    /// rational function is in fact a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.normalize().den == Poly::one()
    }

    /// Taylor coefficients of `num/den` at `t = 0` through `t^order`.
    ///
    /// Solves `den * s = num` degree by degree. Fails with
    /// [`Error::DivisionByZero`] when the denominator vanishes at `t = 0`,
    /// i.e. when the function has a pole there and no expansion exists.
    pub fn power_series_coeffs(&self, order: usize) -> Result<Vec<Rat>, Error> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut coeffs: Vec<Rat> = Vec::with_capacity(order + 1);
        for m in 0..=order {
            let mut acc = self.num.coeff(m);
            for i in 1..=m {
                let di = self.den.coeff(i);
                if !di.is_zero() {
                    acc -= di * &coeffs[m - i];
                }
            }
            coeffs.push(acc / &d0);
        }
        Ok(coeffs)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Compare two polynomials up to a nonzero scalar factor.
///
/// Returns `true` when `a = c * b` for some nonzero rational `c`, or both
/// are zero. Used by divisibility criteria of the form "the reduced
/// polynomial must be a scalar multiple of the modulus".
pub fn scalar_multiple_of(a: &Poly, b: &Poly) -> bool {
    match (a.degree(), b.degree()) {
        (None, None) => true,
        (None, _) | (_, None) => false,
        (Some(da), Some(db)) => match da.cmp(&db) {
            Ordering::Equal => a.monic() == b.monic(),
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_ints(coeffs)
    }

    #[test]
    fn product_of_binomials() {
        // (1 + t)(1 + t^2) = 1 + t + t^2 + t^3
        assert_eq!(&p(&[1, 1]) * &p(&[1, 0, 1]), p(&[1, 1, 1, 1]));
    }

    #[test]
    fn square_of_short_geometric_sum() {
        // (1 + t + t^2)^2 = 1 + 2t + 3t^2 + 2t^3 + t^4
        assert_eq!(p(&[1, 1, 1]).pow(2), p(&[1, 2, 3, 2, 1]));
    }

    #[test]
    fn multiplication_by_zero_annihilates() {
        assert_eq!(&Poly::zero() * &p(&[3, -1, 7]), Poly::zero());
        assert_eq!(&p(&[3, -1, 7]) * &Poly::zero(), Poly::zero());
    }

    #[test]
    fn divmod_exact_case() {
        // (t^2 - 1) / (t - 1) = t + 1 exactly.
        let (q, r) = p(&[-1, 0, 1]).divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_with_remainder() {
        // t^3 = (-t)(1 - t^2) + t
        let (q, r) = p(&[0, 0, 0, 1]).divmod(&p(&[1, 0, -1])).unwrap();
        assert_eq!(q, p(&[0, -1]));
        assert_eq!(r, p(&[0, 1]));
    }

    #[test]
    fn divmod_by_zero_is_an_error() {
        assert_eq!(p(&[1, 1]).divmod(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_of_cyclotomic_style_binomials() {
        // gcd(1 - t^6, 1 - t^4) is the monic associate of 1 - t^2.
        let g = Poly::gcd(&Poly::one_minus_power(6), &Poly::one_minus_power(4)).unwrap();
        assert_eq!(g, p(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic_other_argument() {
        assert_eq!(Poly::gcd(&p(&[2, 4]), &Poly::zero()).unwrap(), p(&[1, 2]).scale(&Rat::new(Int::from(1), Int::from(2))));
        assert_eq!(Poly::gcd(&Poly::zero(), &p(&[0, 0, 5])).unwrap(), p(&[0, 0, 1]));
        assert_eq!(Poly::gcd(&Poly::zero(), &Poly::zero()), Err(Error::GcdOfZeroPair));
    }

    #[test]
    fn substitute_power_spreads_coefficients() {
        assert_eq!(p(&[1, 1, 1]).substitute_power(2).unwrap(), p(&[1, 0, 1, 0, 1]));
        assert_eq!(p(&[5]).substitute_power(7).unwrap(), p(&[5]));
        assert_eq!(p(&[1, 2]).substitute_power(0), Err(Error::ZeroSubstitutionPower));
    }

    #[test]
    fn geometric_sum_small_values() {
        assert_eq!(Poly::geometric_sum(5), p(&[1, 1, 1, 1, 1]));
        assert_eq!(Poly::geometric_sum(1), Poly::one());
        assert!(Poly::geometric_sum(0).is_zero());
    }

    #[test]
    fn geometric_sum_times_one_minus_t() {
        for k in 1..=64 {
            let lhs = &Poly::geometric_sum(k) * &Poly::one_minus_power(1);
            assert_eq!(lhs, Poly::one_minus_power(k), "k = {k}");
        }
    }

    #[test]
    fn eval_by_horner() {
        let q = p(&[1, 23, 299]);
        assert_eq!(q.eval(&Rat::one()), Rat::from_integer(Int::from(323)));
        assert_eq!(q.eval(&Rat::zero()), Rat::one());
    }

    #[test]
    fn rationalfn_add_collapses_shared_denominator() {
        // 1/(1 - t) + (-t)/(1 - t) = 1.
        let den = Poly::one_minus_power(1);
        let a = RationalFn::new(Poly::one(), den.clone()).unwrap();
        let b = RationalFn::new(p(&[0, -1]), den).unwrap();
        assert_eq!(a.add(&b), RationalFn::from_poly(Poly::one()));
    }

    #[test]
    fn rationalfn_normalizes_to_monic_coprime_form() {
        // (t^2 - 1)/(t - 1) normalizes to (t + 1)/1.
        let f = RationalFn::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap().normalize();
        assert_eq!(f.num(), &p(&[1, 1]));
        assert_eq!(f.den(), &Poly::one());
        assert!(f.is_polynomial());
    }

    #[test]
    fn rationalfn_keeps_display_denominator_until_normalized() {
        let f = RationalFn::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.den(), &p(&[-1, 1]));
    }

    #[test]
    fn rationalfn_rejects_zero_denominator() {
        assert!(RationalFn::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn power_series_expansion_examples() {
        use num_traits::ToPrimitive;
        let geom = RationalFn::new(Poly::one(), p(&[1, -1])).unwrap();
        let ones: Vec<Rat> = (0..6).map(|_| Rat::one()).collect();
        assert_eq!(geom.power_series_coeffs(5).unwrap(), ones);

        let shifted = RationalFn::new(p(&[1, 1]), p(&[1, -1])).unwrap();
        let expanded = shifted.power_series_coeffs(4).unwrap();
        let twos: Vec<i64> = expanded.iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
        assert_eq!(twos, vec![1, 2, 2, 2, 2]);

        let pole = RationalFn::new(Poly::one(), Poly::monomial(Rat::one(), 1)).unwrap();
        assert_eq!(pole.power_series_coeffs(3), Err(Error::DivisionByZero));
    }

    #[test]
    fn coefficient_strings_round_trip() {
        for s in ["0", "17", "-3", "22450", "1/2", "-7/3"] {
            assert_eq!(rat_to_string(&rat_from_str(s).unwrap()), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("4/2").unwrap()), "2");
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }

    #[test]
    fn poly_json_round_trip() {
        let q = Poly::from_coeffs(vec![
            Rat::from_integer(Int::from(1)),
            Rat::new(Int::from(-1), Int::from(2)),
            Rat::from_integer(Int::from(299)),
        ]);
        let text = serde_json::to_string(&q).unwrap();
        assert_eq!(text, r#"["1","-1/2","299"]"#);
        assert_eq!(serde_json::from_str::<Poly>(&text).unwrap(), q);
    }

    #[test]
    fn scalar_multiple_detection() {
        assert!(scalar_multiple_of(&p(&[2, 2, 2]), &Poly::geometric_sum(3)));
        assert!(scalar_multiple_of(&Poly::zero(), &Poly::zero()));
        assert!(!scalar_multiple_of(&p(&[2, 2, 3]), &Poly::geometric_sum(3)));
        assert!(!scalar_multiple_of(&p(&[1, 1]), &Poly::geometric_sum(3)));
        assert!(!scalar_multiple_of(&Poly::zero(), &Poly::one()));
    }

    /// Independent schoolbook reference used by the randomized ring tests:
    /// computes the product coefficient-by-coefficient of the result rather
    /// than by accumulating over input pairs.
    fn oracle_mul(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let coeffs = (0..=da + db)
            .map(|m| {
                let mut acc = Rat::zero();
                for i in 0..=m.min(da) {
                    acc += a.coeff(i) * b.coeff(m - i);
                }
                acc
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-50i64..=50, 0..=max_deg + 1).prop_map(|v| Poly::from_ints(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn mul_matches_oracle(a in arb_poly(25), b in arb_poly(25)) {
            prop_assert_eq!(&a * &b, oracle_mul(&a, &b));
        }

        #[test]
        fn ring_axioms(a in arb_poly(12), b in arb_poly(12), c in arb_poly(12)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &(-&a), Poly::zero());
        }

        #[test]
        fn divmod_recomposes(a in arb_poly(40), b in arb_poly(20)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&q * &b + &r, a);
            if let Some(dr) = r.degree() {
                prop_assert!(dr < b.degree().unwrap());
            }
        }

        #[test]
        fn normalization_is_idempotent(a in arb_poly(10), b in arb_poly(10)) {
            prop_assume!(!b.is_zero());
            let f = RationalFn::new(a, b).unwrap();
            let once = f.normalize();
            prop_assert_eq!(once.normalize(), once);
        }

        #[test]
        fn gcd_divides_both_arguments(a in arb_poly(12), b in arb_poly(12)) {
            prop_assume!(!a.is_zero() || !b.is_zero());
            let g = Poly::gcd(&a, &b).unwrap();
            prop_assert!(a.divmod(&g).unwrap().1.is_zero());
            prop_assert!(b.divmod(&g).unwrap().1.is_zero());
        }
    }
}
