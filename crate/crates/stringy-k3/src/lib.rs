//! Exact computation of stringy E-functions for the moduli spaces `M_2n` of
//! rank-2 semistable sheaves with trivial determinant and second Chern class
//! `n >= 3` on a polarized K3 surface.
//!
//! Everything is evaluated on the diagonal `u = v = z` of the Hodge-Deligne
//! plane and reindexed to `t = z^2`, so the whole pipeline runs in exact
//! univariate arithmetic over arbitrary-precision rationals:
//!
//! * [`poly`] — dense polynomials, rational functions, division, gcd;
//! * [`series`] — truncated power series and infinite-product expansion,
//!   used for the Hilbert-scheme Poincare generating function;
//! * [`k3`] — closed-form E-polynomials of the exceptional strata of the
//!   Kirwan desingularization `widetilde(M)_2n -> M_2n`;
//! * [`stringy`] — assembly of the stringy E-function from a stratification
//!   with discrepancy data, both for `M_2n` and for user-supplied input;
//! * [`certify`] — certificates that the stringy E-function of `M_2n` is not
//!   a polynomial, which rules out a crepant resolution of `M_2n`.
//!
//! The certificate logic is redundant on purpose: a direct polynomial
//! division decides the verdict, and an independent modular argument
//! (reduction mod `1 - t^(2n-3)`, a gcd case split on `n mod 3`, and an
//! explicit failed divisibility of the Hilbert-scheme Poincare polynomial)
//! must reach the same conclusion or the run aborts.

pub mod certify;
pub mod cli;
pub mod k3;
pub mod poly;
pub mod series;
pub mod stringy;

use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// `InvariantViolation` is special: it never reflects bad user input but a
/// broken internal identity (a formula transcribed wrong, a cross-check that
/// two independent computation paths disagree). Callers are expected to treat
/// it as fatal; the command-line driver maps it to its own exit code.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// Polynomial division by the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZero,

    /// `gcd(0, 0)` has no monic normal form.
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeroPair,

    /// A division that must be exact left a nonzero remainder.
    #[error("expected exact division, got nonzero remainder: {0}")]
    InexactDivision(String),

    /// `t -> t^k` substitution needs `k >= 1`.
    #[error("substitution exponent must be at least 1")]
    ZeroSubstitutionPower,

    /// An infinite-product factor with `q`-exponent 0 does not define a
    /// power series in `q`.
    #[error("product factor has q-exponent 0")]
    ZeroQExponent,

    /// Isotropic Grassmannian parameters out of range.
    #[error("isotropic Grassmannian Gr^w(k, 2n) needs 1 <= k <= n, got k = {k}, n = {n}")]
    GrassmannianRange { k: usize, n: usize },

    /// The stratification of `M_2n` is only defined for `n >= 3`.
    #[error("moduli space M_2n requires n >= 3, got n = {0}")]
    NBelowThree(u64),

    /// The modular certificate path (reduction mod `1 - t^(2n-3)`) starts
    /// at `n = 4`; the `n = 3` case is certified by a degree argument.
    #[error("the modular certificate path requires n >= 4, got n = {0}")]
    NBelowFour(u64),

    /// A stratum subset refers to a divisor index that was never declared.
    #[error("stratum subset refers to undeclared divisor index {0}")]
    UnknownDivisor(usize),

    /// A discrepancy `<= -1` puts the variety outside the log-terminal range
    /// where the stringy E-function is defined.
    #[error("discrepancy {0} is not greater than -1; the stringy E-function is undefined")]
    NotLogTerminal(String),

    /// Discrepancies whose `a + 1` is not a machine-sized positive integer
    /// would need weight factors outside the univariate polynomial model.
    #[error("discrepancy {0} does not give a supported integer weight exponent a + 1")]
    UnsupportedWeight(String),

    /// An internal identity failed; the result cannot be trusted.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Shorthand for an [`Error::InvariantViolation`] with a formatted message.
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
