//! The stringy E-function of a log-terminal variety from stratification
//! data, and its specialization to the moduli spaces `M_2n`.
//!
//! Given a resolution whose exceptional locus is a simple normal crossing
//! union of divisors `D_j` with discrepancies `a_j > -1`, the stringy
//! E-function on the diagonal is
//!
//! ```text
//! E_st = sum_{J} E(D_J^0) prod_{j in J} (t - 1) / (t^(a_j + 1) - 1),
//! ```
//!
//! summed over subsets `J` of the divisor set (the empty subset covering
//! the part of the variety untouched by the resolution). For `M_2n` the
//! open-stratum polynomials come from [`crate::k3`], the discrepancies are
//! `6n - 7`, `2n - 4`, `4n - 6`, and the singular part
//!
//! ```text
//! S = E_st(M_2n) - E(M_2n^s)
//! ```
//!
//! is carried as a single fraction over the display denominator
//! `(1 - t^(2n-3)) (1 - t^(4n-5)) (1 - t^(6n-6))`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::k3::{self, StrataTable};
use crate::poly::{rat_from_str, rat_to_string, Int, Poly, Rat, RationalFn};
use crate::Error;

/// A subset of divisor indices, stored as a bitmask. Index `i` refers to
/// the `i`-th entry of the divisor list it is used with (0-based). Supports
/// up to 64 divisors, far beyond any stratification this crate meets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subset(u64);

impl Subset {
    /// The empty subset (the stratum away from all divisors).
    pub fn empty() -> Subset {
        Subset(0)
    }

    /// Build from explicit indices; rejects duplicates and indices >= 64.
    pub fn from_indices(indices: &[usize]) -> Result<Subset, Error> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= 64 {
                return Err(Error::invariant(format!("divisor index {i} exceeds the supported range")));
            }
            if bits & (1 << i) != 0 {
                return Err(Error::invariant(format!("duplicate divisor index {i} in subset")));
            }
            bits |= 1 << i;
        }
        Ok(Subset(bits))
    }

    /// The member indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.0 >> index & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// One exceptional divisor: a display name and its discrepancy `a > -1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorInfo {
    pub name: String,
    pub discrepancy: Rat,
}

/// A stratification with discrepancy data: the input to [`stringy_e`].
///
/// `strata` maps subsets `J` of divisor indices (possibly the empty set) to
/// the E-polynomial of the corresponding open stratum `D_J^0`. Subsets must
/// refer only to declared divisors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StratificationSpec {
    pub divisors: Vec<DivisorInfo>,
    pub strata: BTreeMap<Subset, Poly>,
}

/// A schema problem in a JSON stratification spec, located by JSON pointer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.pointer, self.message)
    }
}

impl std::error::Error for SchemaError {}

fn schema_err<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError { pointer: pointer.into(), message: message.into() })
}

impl StratificationSpec {
    /// Parse and validate the JSON form
    ///
    /// ```json
    /// {
    ///   "divisors": [{"name": "D1", "discrepancy": "11"}, ...],
    ///   "strata":   [{"subset": [0, 2], "poly": ["1", "23"]}, ...]
    /// }
    /// ```
    ///
    /// with polynomials as decimal coefficient strings (lowest degree
    /// first) and rationals as `"p"` or `"p/q"`. Every violation is
    /// reported with the JSON pointer of the offending field.
    pub fn from_json_str(text: &str) -> Result<StratificationSpec, SchemaError> {
        let root: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return schema_err("", format!("not valid JSON: {e}")),
        };
        let Some(obj) = root.as_object() else {
            return schema_err("", "top level must be a JSON object");
        };

        let Some(divisors_raw) = obj.get("divisors") else {
            return schema_err("", "missing field \"divisors\"");
        };
        let Some(divisors_arr) = divisors_raw.as_array() else {
            return schema_err("/divisors", "must be an array");
        };
        if divisors_arr.len() > 64 {
            return schema_err("/divisors", "at most 64 divisors are supported");
        }
        let mut divisors = Vec::with_capacity(divisors_arr.len());
        for (i, d) in divisors_arr.iter().enumerate() {
            let Some(d_obj) = d.as_object() else {
                return schema_err(format!("/divisors/{i}"), "must be an object");
            };
            let name = match d_obj.get("name").and_then(Value::as_str) {
                Some(s) if !s.is_empty() => s.to_string(),
                _ => return schema_err(format!("/divisors/{i}/name"), "must be a nonempty string"),
            };
            let Some(disc_str) = d_obj.get("discrepancy").and_then(Value::as_str) else {
                return schema_err(
                    format!("/divisors/{i}/discrepancy"),
                    "must be a rational string \"p\" or \"p/q\"",
                );
            };
            let discrepancy = match rat_from_str(disc_str) {
                Ok(r) => r,
                Err(e) => return schema_err(format!("/divisors/{i}/discrepancy"), e),
            };
            divisors.push(DivisorInfo { name, discrepancy });
        }

        let Some(strata_raw) = obj.get("strata") else {
            return schema_err("", "missing field \"strata\"");
        };
        let Some(strata_arr) = strata_raw.as_array() else {
            return schema_err("/strata", "must be an array");
        };
        let mut strata = BTreeMap::new();
        for (i, entry) in strata_arr.iter().enumerate() {
            let Some(e_obj) = entry.as_object() else {
                return schema_err(format!("/strata/{i}"), "must be an object");
            };
            let Some(subset_arr) = e_obj.get("subset").and_then(Value::as_array) else {
                return schema_err(format!("/strata/{i}/subset"), "must be an array of divisor indices");
            };
            let mut bits = Subset::empty();
            for (j, v) in subset_arr.iter().enumerate() {
                let pointer = format!("/strata/{i}/subset/{j}");
                let Some(ix) = v.as_u64().and_then(|x| x.to_usize()) else {
                    return schema_err(pointer, "must be a nonnegative integer");
                };
                if ix >= divisors.len() {
                    return schema_err(
                        pointer,
                        format!("divisor index {ix} out of range (have {} divisors)", divisors.len()),
                    );
                }
                if bits.contains(ix) {
                    return schema_err(pointer, format!("duplicate divisor index {ix}"));
                }
                bits = Subset::from_indices(&[&bits.indices()[..], &[ix]].concat())
                    .expect("bounded, deduplicated indices");
            }
            let Some(poly_arr) = e_obj.get("poly").and_then(Value::as_array) else {
                return schema_err(format!("/strata/{i}/poly"), "must be an array of coefficient strings");
            };
            let mut coeffs = Vec::with_capacity(poly_arr.len());
            for (j, c) in poly_arr.iter().enumerate() {
                let pointer = format!("/strata/{i}/poly/{j}");
                let Some(s) = c.as_str() else {
                    return schema_err(pointer, "must be a decimal coefficient string");
                };
                match rat_from_str(s) {
                    Ok(r) => coeffs.push(r),
                    Err(e) => return schema_err(pointer, e),
                }
            }
            if strata.insert(bits, Poly::from_coeffs(coeffs)).is_some() {
                return schema_err(format!("/strata/{i}/subset"), format!("duplicate stratum subset {bits}"));
            }
        }

        Ok(StratificationSpec { divisors, strata })
    }

    /// Canonical JSON text: strata ordered by subset key, coefficients as
    /// decimal strings. Byte-identical across runs for equal specs.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }
}

impl Serialize for StratificationSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct DivisorJson<'a> {
            name: &'a str,
            discrepancy: String,
        }
        #[derive(Serialize)]
        struct StratumJson {
            subset: Vec<usize>,
            poly: Poly,
        }
        let divisors: Vec<DivisorJson> = self
            .divisors
            .iter()
            .map(|d| DivisorJson { name: &d.name, discrepancy: rat_to_string(&d.discrepancy) })
            .collect();
        let strata: Vec<StratumJson> = self
            .strata
            .iter()
            .map(|(s, p)| StratumJson { subset: s.indices(), poly: p.clone() })
            .collect();
        let mut state = serializer.serialize_struct("StratificationSpec", 2)?;
        state.serialize_field("divisors", &divisors)?;
        state.serialize_field("strata", &strata)?;
        state.end()
    }
}

/// A truncated expansion of the singular series `S(z)`: `coeffs[m]` is the
/// coefficient of `z^(2m)` (equivalently `t^m`), for `m = 0..=order`. Odd
/// powers of `z` never occur. Coefficients are exact integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesWindow {
    pub order: usize,
    pub coeffs: Vec<Int>,
}

impl Serialize for SeriesWindow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("SeriesWindow", 2)?;
        state.serialize_field("order", &self.order)?;
        let strings: Vec<String> = self.coeffs.iter().map(Int::to_string).collect();
        state.serialize_field("coeffs", &strings)?;
        state.end()
    }
}

/// The diagonal stringy E-function of a stratification, as a normalized
/// rational function in `t`.
///
/// Fails with [`Error::NotLogTerminal`] when some discrepancy is `<= -1`,
/// with [`Error::UnsupportedWeight`] when some `a + 1` is not a (machine-
/// sized) positive integer, and with [`Error::UnknownDivisor`] when a
/// stratum subset mentions an undeclared divisor.
pub fn stringy_e(spec: &StratificationSpec) -> Result<RationalFn, Error> {
    let mut weight_exps = Vec::with_capacity(spec.divisors.len());
    for d in &spec.divisors {
        let a = &d.discrepancy;
        if *a <= Rat::from_integer(Int::from(-1)) {
            return Err(Error::NotLogTerminal(rat_to_string(a)));
        }
        let a_plus_one = a + Rat::one();
        if !a_plus_one.is_integer() {
            return Err(Error::UnsupportedWeight(rat_to_string(a)));
        }
        let Some(exp) = a_plus_one.to_integer().to_usize() else {
            return Err(Error::UnsupportedWeight(rat_to_string(a)));
        };
        weight_exps.push(exp);
    }

    let mut sum = RationalFn::zero();
    for (subset, e_poly) in &spec.strata {
        if let Some(&bad) = subset.indices().iter().find(|&&i| i >= spec.divisors.len()) {
            return Err(Error::UnknownDivisor(bad));
        }
        let mut term = RationalFn::from_poly(e_poly.clone());
        for j in subset.indices() {
            let num = Poly::from_ints(&[-1, 1]); // t - 1
            let den = &Poly::monomial(Rat::one(), weight_exps[j]) - &Poly::one(); // t^(a+1) - 1
            let weight = RationalFn::new(num, den).expect("weight denominator is nonzero");
            term = term.mul(&weight);
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// Weight-denominator exponents `a_j + 1` for the three exceptional
/// divisors of `M_2n`, in divisor order `D_1, D_2, D_3`.
fn weight_exponents(n: usize) -> [usize; 3] {
    [6 * n - 6, 2 * n - 3, 4 * n - 5]
}

/// The stratification of the Kirwan desingularization of `M_2n`: divisors
/// `D_1, D_2, D_3` with discrepancies `6n - 7`, `2n - 4`, `4n - 6`, and the
/// seven open exceptional strata from [`k3::open_strata_e`]. The empty
/// subset (the stable locus, whose E-polynomial has no closed form) is
/// deliberately not part of the data; see [`s_rational`].
pub fn build_moduli_spec(n: usize) -> Result<StratificationSpec, Error> {
    let strata = k3::open_strata_e(n)?;
    let discrepancies = [6 * n as i64 - 7, 2 * n as i64 - 4, 4 * n as i64 - 6];
    let divisors = discrepancies
        .iter()
        .enumerate()
        .map(|(i, &a)| DivisorInfo {
            name: format!("D{}", i + 1),
            discrepancy: Rat::from_integer(Int::from(a)),
        })
        .collect();
    Ok(StratificationSpec { divisors, strata })
}

/// The display denominator `(1 - t^(2n-3)) (1 - t^(4n-5)) (1 - t^(6n-6))`
/// of the singular series of `M_2n`.
pub fn display_denominator(n: usize) -> Result<Poly, Error> {
    if n < 3 {
        return Err(Error::NBelowThree(n as u64));
    }
    Ok(&(&Poly::one_minus_power(2 * n - 3) * &Poly::one_minus_power(4 * n - 5))
        * &Poly::one_minus_power(6 * n - 6))
}

/// Assemble the numerator of `sum_J E_J (1-t)^|J| / prod_{j in J} (1 - t^(e_j))`
/// over the display denominator `prod_j (1 - t^(e_j))`: each stratum
/// contributes `E_J (1-t)^|J| prod_{j not in J} (1 - t^(e_j))`.
///
/// Exposed so that alternative stratum tables (synthetic test data, subsets
/// of the real table) can be pushed through the same assembly.
pub fn numerator_from_strata(table: &StrataTable, n: usize) -> Result<Poly, Error> {
    if n < 3 {
        return Err(Error::NBelowThree(n as u64));
    }
    let exps = weight_exponents(n);
    let mut num = Poly::zero();
    for (subset, e_poly) in table {
        if let Some(&bad) = subset.indices().iter().find(|&&i| i >= 3) {
            return Err(Error::UnknownDivisor(bad));
        }
        let mut term = e_poly * &Poly::one_minus_power(1).pow(subset.len());
        for (j, &e) in exps.iter().enumerate() {
            if !subset.contains(j) {
                term = &term * &Poly::one_minus_power(e);
            }
        }
        num = &num + &term;
    }
    Ok(num)
}

/// The singular part `S = E_st(M_2n) - E(M_2n^s)` of the stringy
/// E-function, kept as one fraction over the display denominator (the
/// numerator and denominator are *not* reduced to lowest terms).
pub fn s_rational(n: usize) -> Result<RationalFn, Error> {
    let table = k3::open_strata_e(n)?;
    let num = numerator_from_strata(&table, n)?;
    RationalFn::new(num, display_denominator(n)?)
}

/// Power-series expansion of [`s_rational`] through `t^order`, by
/// geometric expansion of each display-denominator factor. The
/// coefficients are integers; a fractional coefficient aborts.
pub fn s_series(n: usize, order: usize) -> Result<SeriesWindow, Error> {
    let rational = s_rational(n)?;
    let mut acc = rational.num().truncated(order);
    for e in weight_exponents(n) {
        let mut geo = vec![Rat::zero(); order + 1];
        let mut j = 0;
        while j * e <= order {
            geo[j * e] = Rat::one();
            j += 1;
        }
        acc = (&acc * &Poly::from_coeffs(geo)).truncated(order);
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let c = acc.coeff(m);
        if !c.is_integer() {
            return Err(Error::invariant(format!(
                "singular series coefficient of t^{m} is not an integer at n = {n}"
            )));
        }
        coeffs.push(c.to_integer());
    }
    Ok(SeriesWindow { order, coeffs })
}
