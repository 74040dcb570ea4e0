//! Sparse Laurent polynomials over F_p with exponents in Z[1/p].
//!
//! [`PuiseuxPoly`] models monomial-supported elements of the perfection of a
//! polynomial ring in `e` base variables: exponents are rationals whose
//! denominators are powers of the fixed prime `p`, and may be negative so
//! that fractions with a monomial denominator can be stored directly.
//! Coefficients live in the prime field F_p, which makes the p-th root
//! coefficientwise trivial.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::rat::{has_p_power_denominator, to_fraction_string, Rat};

/// Error type for ring operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerfringError {
    /// Operands live over a different number of base variables.
    VariableCountMismatch { left: usize, right: usize },
    /// Operands have inconsistent characteristic.
    PrimeMismatch { left: u64, right: u64 },
    /// A monomial was required but the polynomial has several terms (or none).
    NotAMonomial,
    /// An exponent whose denominator is not a power of p.
    BadExponent(String),
    /// Wrong exponent-vector length for this ring.
    BadExponentLength { expected: usize, got: usize },
}

impl fmt::Display for PerfringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerfringError::VariableCountMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            PerfringError::PrimeMismatch { left, right } => {
                write!(f, "characteristic mismatch: {left} vs {right}")
            }
            PerfringError::NotAMonomial => write!(f, "expected a single-term polynomial"),
            PerfringError::BadExponent(s) => {
                write!(f, "exponent {s} does not have a p-power denominator")
            }
            PerfringError::BadExponentLength { expected, got } => {
                write!(f, "exponent vector of length {got}, expected {expected}")
            }
        }
    }
}

/// Exponent vector of a term, ordered graded-lexicographically so that term
/// maps have a canonical, serialization-stable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpVec(pub Vec<Rat>);

impl ExpVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree (sum of entries), the grading used for ordering.
    pub fn total(&self) -> Rat {
        let mut t = Rat::zero();
        for x in &self.0 {
            t += x;
        }
        t
    }

    fn scaled(&self, factor: &Rat) -> ExpVec {
        ExpVec(self.0.iter().map(|x| x * factor).collect())
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent-Puiseux polynomial over F_p.
///
/// Invariants: no zero coefficients are stored, every exponent vector has
/// length `e`, and every exponent denominator is a power of `p`. The zero
/// polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxPoly {
    p: u64,
    e: usize,
    terms: BTreeMap<ExpVec, u64>,
}

impl PuiseuxPoly {
    /// The zero polynomial in `e` variables over F_p.
    pub fn zero(p: u64, e: usize) -> Self {
        PuiseuxPoly {
            p,
            e,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 1.
    pub fn one(p: u64, e: usize) -> Self {
        Self::constant(p, e, 1)
    }

    /// A constant `c mod p`.
    pub fn constant(p: u64, e: usize, c: u64) -> Self {
        let mut poly = Self::zero(p, e);
        let c = c % p;
        if c != 0 {
            poly.terms.insert(ExpVec(alloc::vec![Rat::zero(); e]), c);
        }
        poly
    }

    /// Single term `c * x^exps`. Validates the exponent invariants.
    pub fn monomial(p: u64, e: usize, c: u64, exps: Vec<Rat>) -> Result<Self, PerfringError> {
        if exps.len() != e {
            return Err(PerfringError::BadExponentLength {
                expected: e,
                got: exps.len(),
            });
        }
        for x in &exps {
            if !has_p_power_denominator(x, p) {
                return Err(PerfringError::BadExponent(to_fraction_string(x)));
            }
        }
        let mut poly = Self::zero(p, e);
        poly.add_term(ExpVec(exps), c);
        Ok(poly)
    }

    /// The base variable `x_i` (0-based).
    pub fn variable(p: u64, e: usize, i: usize) -> Self {
        assert!(i < e, "variable index out of range");
        let mut exps = alloc::vec![Rat::zero(); e];
        exps[i] = Rat::from_integer(1.into());
        Self::monomial(p, e, 1, exps).expect("integral exponents are always valid")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, u64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    /// True if the polynomial has exactly one term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The single (exponent, coefficient) pair of a monomial.
    pub fn as_monomial(&self) -> Result<(&ExpVec, u64), PerfringError> {
        if self.terms.len() != 1 {
            return Err(PerfringError::NotAMonomial);
        }
        let (k, &c) = self.terms.iter().next().expect("one term");
        Ok((k, c))
    }

    fn add_term(&mut self, k: ExpVec, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.entry(k) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (o.get() + c) % self.p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PerfringError> {
        if self.p != other.p {
            return Err(PerfringError::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.e != other.e {
            return Err(PerfringError::VariableCountMismatch {
                left: self.e,
                right: other.e,
            });
        }
        Ok(())
    }

    /// Exact sum in the ring.
    pub fn add(&self, other: &Self) -> Result<Self, PerfringError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.p, self.e);
        for (k, &c) in &self.terms {
            out.terms.insert(k.clone(), (self.p - c) % self.p);
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    /// Exact difference.
    pub fn sub(&self, other: &Self) -> Result<Self, PerfringError> {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Result<Self, PerfringError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.p, self.e);
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let exps: Vec<Rat> = ka.0.iter().zip(&kb.0).map(|(a, b)| a + b).collect();
                out.add_term(ExpVec(exps), ca * cb);
            }
        }
        Ok(out)
    }

    /// Scales every coefficient by `c mod p`.
    pub fn scale_coeff(&self, c: u64) -> Self {
        let mut out = Self::zero(self.p, self.e);
        let c = c % self.p;
        if c == 0 {
            return out;
        }
        for (k, &a) in &self.terms {
            out.terms.insert(k.clone(), (a * c) % self.p);
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    /// Frobenius `f -> f^p`: every exponent is multiplied by p, coefficients
    /// in F_p are fixed.
    pub fn frobenius(&self) -> Self {
        self.frobenius_pow(1)
    }

    /// Iterated Frobenius `f -> f^(p^k)`.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        let mut factor = Rat::from_integer(1.into());
        for _ in 0..k {
            factor *= Rat::from_integer(self.p.into());
        }
        let mut out = Self::zero(self.p, self.e);
        for (kv, &c) in &self.terms {
            out.terms.insert(kv.scaled(&factor), c);
        }
        out
    }

    /// The unique p-th root in the perfection: every exponent is divided by
    /// p. Inverse of [`Self::frobenius`].
    pub fn p_root(&self) -> Self {
        self.p_root_pow(1)
    }

    /// Iterated p-th root `f -> f^(1/p^k)`.
    pub fn p_root_pow(&self, k: u32) -> Self {
        let mut factor = Rat::from_integer(1.into());
        for _ in 0..k {
            factor /= Rat::from_integer(self.p.into());
        }
        let mut out = Self::zero(self.p, self.e);
        for (kv, &c) in &self.terms {
            out.terms.insert(kv.scaled(&factor), c);
        }
        out
    }

    /// Exact division by a single-term polynomial (exponentwise subtraction).
    pub fn divide_monomial(&self, m: &Self) -> Result<Self, PerfringError> {
        self.check_compatible(m)?;
        let (me, mc) = m.as_monomial()?;
        // In F_p the coefficient inverse is mc^(p-2).
        let inv = mod_inverse(mc, self.p);
        let mut out = Self::zero(self.p, self.e);
        for (k, &c) in &self.terms {
            let exps: Vec<Rat> = k.0.iter().zip(&me.0).map(|(a, b)| a - b).collect();
            out.terms.insert(ExpVec(exps), (c * inv) % self.p);
        }
        Ok(out)
    }

    /// Largest power of p dividing every exponent denominator, i.e. the
    /// perfection depth of the polynomial. 0 for integral polynomials.
    pub fn depth(&self) -> u32 {
        let mut depth = 0u32;
        for (k, _) in self.terms() {
            for x in &k.0 {
                let mut d = x.denom().clone();
                let p = num_bigint::BigInt::from(self.p);
                let mut k = 0u32;
                while (&d % &p).is_zero() {
                    d /= &p;
                    k += 1;
                }
                depth = depth.max(k);
            }
        }
        depth
    }

    /// True if every exponent is a non-negative integer.
    pub fn is_integral_polynomial(&self) -> bool {
        self.terms().all(|(k, _)| {
            k.0.iter()
                .all(|x| x.denom() == &num_bigint::BigInt::from(1) && !x.numer().is_negative())
        })
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p and a != 0.
    assert!(a % p != 0, "division by zero in F_p");
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

use num_traits::Signed;

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut printed = false;
            if c != 1 || k.0.iter().all(|x| x.is_zero()) {
                write!(f, "{c}")?;
                printed = true;
            }
            for (i, x) in k.0.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "s{}", i + 1)?;
                if *x != Rat::from_integer(1.into()) {
                    write!(f, "^{}", to_fraction_string(x))?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}
