//! The leading-valuation invariants of a fiber series.
//!
//! For a series `h = (sum a_k x^k)/pi` and a toric valuation `v`,
//!
//! * `np(h)(v)`   = min over nonzero fiber indices of `{0, v(a_k/pi)}`,
//! * `npinf(h)(v)` = min over branches `n` of `{0, v(section_n)}` where
//!   `section_n` is the branch's Frobenius partial sum at full depth.
//!
//! The constant index 0 is excluded from both minima. `npinf` is the
//! stabilized value of `np` under Artin-Schreier twists; truncation makes
//! the limit an exact finite minimum. The symbol is the graded leading part
//! at level `np < 0`; it is separable exactly when some attaining fiber
//! index is prime to p, which happens exactly when no further mollification
//! can raise `np` (weak admissibility).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::perfring::PuiseuxPoly;
use crate::rat::Rat;
use crate::series::FiberSeries;
use crate::valuation::{ToricValuation, ValuationError, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpError {
    /// Underlying valuation failure (dimension mismatch and friends).
    Valuation(ValuationError),
    /// symbol() at np = 0; the symbol is only defined at negative levels.
    NonNegativeNp,
}

impl From<ValuationError> for NpError {
    fn from(e: ValuationError) -> Self {
        NpError::Valuation(e)
    }
}

impl fmt::Display for NpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NpError::Valuation(e) => write!(f, "{e}"),
            NpError::NonNegativeNp => write!(f, "symbol undefined at level 0"),
        }
    }
}

/// `np(h)(v) <= 0`: the clipped minimum of coefficient values over nonzero
/// fiber indices. Zero series (and series with only a constant term) give 0.
pub fn np(h: &FiberSeries, v: &ToricValuation) -> Result<Rat, NpError> {
    let mut best = Rat::zero();
    for (k, c) in h.coeffs() {
        if k.iter().all(|&x| x == 0) {
            continue;
        }
        let val = v
            .val_fraction(c, h.pi())
            .map_err(NpError::from)?;
        if let Some(x) = val.finite() {
            if *x < best {
                best = x.clone();
            }
        }
    }
    Ok(best)
}

/// `npinf(h)(v) <= 0`: minimum over branches of the clipped value of the
/// full-depth Frobenius partial sum. Exact: truncation bounds every branch.
pub fn npinf(h: &FiberSeries, v: &ToricValuation) -> Result<Rat, NpError> {
    let mut best = Rat::zero();
    for branch in h.lambda_decompose() {
        let section = h.frobenius_section(&branch.n, branch.max_depth());
        match v.val(&section).map_err(NpError::from)? {
            Value::Finite(x) => {
                if x < best {
                    best = x;
                }
            }
            Value::Infinity => {}
        }
    }
    Ok(best)
}

/// The symbol of `h` at `v`: for each fiber index attaining `np(h)(v) < 0`,
/// the part of `a_k/pi` supported on monomials of exactly that weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPart {
    p: u64,
    level: Rat,
    terms: BTreeMap<Vec<u64>, PuiseuxPoly>,
}

impl SymbolPart {
    pub fn level(&self) -> &Rat {
        &self.level
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &PuiseuxPoly)> {
        self.terms.iter()
    }

    pub fn fiber_indices(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.terms.keys()
    }
}

/// Extracts the symbol. Errors with [`NpError::NonNegativeNp`] when
/// `np(h)(v) = 0` (the graded leading part at level 0 is not a symbol).
pub fn symbol(h: &FiberSeries, v: &ToricValuation) -> Result<SymbolPart, NpError> {
    let level = np(h, v)?;
    if level >= Rat::zero() {
        return Err(NpError::NonNegativeNp);
    }
    let mut terms = BTreeMap::new();
    for (k, c) in h.coeffs() {
        if k.iter().all(|&x| x == 0) {
            continue;
        }
        let over_pi = c.divide_monomial(h.pi()).expect("pi is a monomial");
        let graded = graded_part(&over_pi, v, &level);
        if !graded.is_zero() {
            terms.insert(k.clone(), graded);
        }
    }
    debug_assert!(!terms.is_empty(), "np < 0 is attained by some index");
    Ok(SymbolPart {
        p: h.p(),
        level,
        terms,
    })
}

/// The sub-polynomial supported on monomials of exact weight `level`.
pub fn graded_part(f: &PuiseuxPoly, v: &ToricValuation, level: &Rat) -> PuiseuxPoly {
    let mut out = PuiseuxPoly::zero(f.p(), f.e());
    for (k, c) in f.terms() {
        if &v.pair(k) == level {
            let m = PuiseuxPoly::monomial(f.p(), f.e(), c, k.0.clone())
                .expect("existing exponents are valid");
            out = out.add(&m).expect("same ring");
        }
    }
    out
}

/// A symbol is separable iff some attaining fiber index is not divisible
/// by p.
pub fn is_separable_symbol(sym: &SymbolPart) -> bool {
    sym.terms
        .keys()
        .any(|k| k.iter().any(|&x| x % sym.p != 0))
}

/// Weak admissibility: `np(h)(v) == npinf(h)(v)`.
pub fn is_weakly_admissible(h: &FiberSeries, v: &ToricValuation) -> Result<bool, NpError> {
    Ok(np(h, v)? == npinf(h, v)?)
}
