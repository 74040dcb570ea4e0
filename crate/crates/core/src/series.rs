//! Truncated fiber series with Puiseux coefficients and a monomial
//! denominator.
//!
//! A [`FiberSeries`] stores the numerators `a_k` of `f = (sum a_k x^k) / pi`
//! for fiber indices `k` in the box `|k|_inf <= D`, together with the
//! monomial `pi`. The Lambda-branch decomposition groups indices along the
//! chains `n, p*n, p^2*n, ...` for `p`-indivisible `n`, and the Frobenius
//! partial sums of a branch are the quantities whose values drive `np` and
//! `npinf`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::perfring::{PerfringError, PuiseuxPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Fiber dimension mismatch between two series.
    DimensionMismatch { left: usize, right: usize },
    /// Underlying ring mismatch (p or base variable count).
    Ring(PerfringError),
    /// An index outside the truncation box.
    IndexOutOfBox { index: Vec<u64>, bound: u64 },
    /// pi must be a single term with non-negative integral exponents.
    BadPi,
    /// In strict mode, a twist whose g^p would leave the truncation box.
    BoundOverflow { index: Vec<u64>, bound: u64 },
    /// Bounds differ where equality is required.
    BoundMismatch { left: u64, right: u64 },
    /// A Lambda index must be nonzero with some coordinate prime to p.
    BadLambdaIndex(Vec<u64>),
}

impl From<PerfringError> for SeriesError {
    fn from(e: PerfringError) -> Self {
        SeriesError::Ring(e)
    }
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::DimensionMismatch { left, right } => {
                write!(f, "fiber dimension mismatch: {left} vs {right}")
            }
            SeriesError::Ring(e) => write!(f, "{e}"),
            SeriesError::IndexOutOfBox { index, bound } => {
                write!(f, "index {index:?} outside box of bound {bound}")
            }
            SeriesError::BadPi => write!(f, "pi must be a monomial with integral exponents >= 0"),
            SeriesError::BoundOverflow { index, bound } => {
                write!(f, "twist index {index:?} overflows bound {bound}")
            }
            SeriesError::BoundMismatch { left, right } => {
                write!(f, "bound mismatch: {left} vs {right}")
            }
            SeriesError::BadLambdaIndex(n) => {
                write!(f, "{n:?} is not a valid branch index (nonzero, p-indivisible)")
            }
        }
    }
}

/// A branch label: a nonzero fiber index with some coordinate not divisible
/// by p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LambdaIndex(Vec<u64>);

impl LambdaIndex {
    pub fn new(p: u64, n: Vec<u64>) -> Result<Self, SeriesError> {
        if n.iter().all(|&x| x == 0) || n.iter().all(|&x| x % p == 0) {
            return Err(SeriesError::BadLambdaIndex(n));
        }
        Ok(LambdaIndex(n))
    }

    pub fn index(&self) -> &[u64] {
        &self.0
    }

    /// `p^k * n`.
    pub fn scaled(&self, p: u64, k: u32) -> Vec<u64> {
        let factor = p.pow(k);
        self.0.iter().map(|&x| x * factor).collect()
    }
}

/// The Lambda-reduction of a nonzero index: the pair (n, k) with
/// `index = p^k * n` and `p` not dividing `n`.
pub fn lambda_reduce(p: u64, index: &[u64]) -> Option<(Vec<u64>, u32)> {
    if index.iter().all(|&x| x == 0) {
        return None;
    }
    let mut n: Vec<u64> = index.to_vec();
    let mut k = 0u32;
    while n.iter().all(|&x| x % p == 0) {
        for x in n.iter_mut() {
            *x /= p;
        }
        k += 1;
    }
    Some((n, k))
}

/// One branch of a series: the coefficient chain `a_n, a_{p n}, a_{p^2 n}, ...`
/// up to the truncation box. Interior entries may be zero; the chain as a
/// whole is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSequence {
    pub n: LambdaIndex,
    pub entries: Vec<PuiseuxPoly>,
}

impl BranchSequence {
    /// Stabilization depth: sections are constant from this depth on.
    pub fn max_depth(&self) -> u32 {
        (self.entries.len() as u32).saturating_sub(1)
    }
}

/// Truncated series `(sum a_k x^k) / pi` in `d` fiber variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSeries {
    p: u64,
    e: usize,
    d: usize,
    bound: u64,
    coeffs: BTreeMap<Vec<u64>, PuiseuxPoly>,
    pi: PuiseuxPoly,
}

impl FiberSeries {
    /// Builds a series, validating the box, pi, and ring consistency.
    pub fn new(
        p: u64,
        e: usize,
        d: usize,
        bound: u64,
        coeffs: impl IntoIterator<Item = (Vec<u64>, PuiseuxPoly)>,
        pi: PuiseuxPoly,
    ) -> Result<Self, SeriesError> {
        if !pi.is_monomial() || !pi.is_integral_polynomial() || pi.p() != p || pi.e() != e {
            return Err(SeriesError::BadPi);
        }
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if k.len() != d {
                return Err(SeriesError::DimensionMismatch {
                    left: d,
                    right: k.len(),
                });
            }
            if k.iter().any(|&x| x > bound) {
                return Err(SeriesError::IndexOutOfBox { index: k, bound });
            }
            if c.p() != p || c.e() != e {
                return Err(SeriesError::Ring(PerfringError::PrimeMismatch {
                    left: p,
                    right: c.p(),
                }));
            }
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(k).or_insert_with(|| PuiseuxPoly::zero(p, e));
            *entry = entry.add(&c)?;
        }
        map.retain(|_, c: &mut PuiseuxPoly| !c.is_zero());
        Ok(FiberSeries {
            p,
            e,
            d,
            bound,
            coeffs: map,
            pi,
        })
    }

    /// The zero series over trivial denominator.
    pub fn zero(p: u64, e: usize, d: usize, bound: u64) -> Self {
        FiberSeries {
            p,
            e,
            d,
            bound,
            coeffs: BTreeMap::new(),
            pi: PuiseuxPoly::one(p, e),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn pi(&self) -> &PuiseuxPoly {
        &self.pi
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Numerator coefficients in index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u64>, &PuiseuxPoly)> {
        self.coeffs.iter()
    }

    /// Numerator coefficient at `k` (zero polynomial if absent).
    pub fn coeff(&self, k: &[u64]) -> PuiseuxPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| PuiseuxPoly::zero(self.p, self.e))
    }

    /// The mathematical coefficient `a_k / pi`.
    pub fn coeff_over_pi(&self, k: &[u64]) -> PuiseuxPoly {
        self.coeff(k)
            .divide_monomial(&self.pi)
            .expect("pi is a monomial")
    }

    /// Same series with a larger box (bound can only grow).
    pub fn with_bound(&self, bound: u64) -> Self {
        let mut out = self.clone();
        out.bound = out.bound.max(bound);
        out
    }

    /// Negates every coefficient.
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    /// Exact sum; the two series must share p, e, d. Denominators are
    /// brought to the componentwise max of the two monomials; the result
    /// bound is the max of the two bounds.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.d != other.d {
            return Err(SeriesError::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        let pi = monomial_lcm(&self.pi, &other.pi)?;
        let scale_self = pi.divide_monomial(&self.pi)?;
        let scale_other = pi.divide_monomial(&other.pi)?;
        let bound = self.bound.max(other.bound);
        let mut coeffs: BTreeMap<Vec<u64>, PuiseuxPoly> = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.clone(), c.mul(&scale_self)?);
        }
        for (k, c) in &other.coeffs {
            let scaled = c.mul(&scale_other)?;
            let entry = coeffs
                .entry(k.clone())
                .or_insert_with(|| PuiseuxPoly::zero(self.p, self.e));
            *entry = entry.add(&scaled)?;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(FiberSeries {
            p: self.p,
            e: self.e,
            d: self.d,
            bound,
            coeffs,
            pi,
        })
    }

    /// The Lambda-branch decomposition: every nonzero index `k` lands in
    /// the branch of its reduction `n` (with `k = p^j n`) at depth `j`.
    /// Branch entries run to the edge of the box; the constant index 0 is
    /// not part of any branch.
    pub fn lambda_decompose(&self) -> Vec<BranchSequence> {
        let mut by_branch: BTreeMap<Vec<u64>, BTreeMap<u32, PuiseuxPoly>> = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let Some((n, j)) = lambda_reduce(self.p, k) else {
                continue;
            };
            by_branch.entry(n).or_default().insert(j, c.clone());
        }
        let mut out = Vec::new();
        for (n, entries) in by_branch {
            let n = LambdaIndex(n);
            let len = 1 + self.branch_box_depth(&n);
            let mut chain = Vec::with_capacity(len as usize);
            for j in 0..=self.branch_box_depth(&n) {
                chain.push(
                    entries
                        .get(&j)
                        .cloned()
                        .unwrap_or_else(|| PuiseuxPoly::zero(self.p, self.e)),
                );
            }
            out.push(BranchSequence { n, entries: chain });
        }
        out
    }

    /// Largest k with `p^k * n` inside the box.
    pub fn branch_box_depth(&self, n: &LambdaIndex) -> u32 {
        let max_coord = n.0.iter().copied().max().unwrap_or(1).max(1);
        let mut k = 0u32;
        while max_coord * self.p.pow(k + 1) <= self.bound {
            k += 1;
        }
        k
    }

    /// The Frobenius partial sum of the branch `n` at depth `m`:
    /// `sum_{k=0..min(m, chain)} p_root^k(a_{p^k n} / pi)`. Stabilizes once
    /// `p^m n` leaves the box.
    pub fn frobenius_section(&self, n: &LambdaIndex, m: u32) -> PuiseuxPoly {
        let mut acc = PuiseuxPoly::zero(self.p, self.e);
        for k in 0..=m {
            let idx = n.scaled(self.p, k);
            if idx.iter().any(|&x| x > self.bound) {
                break;
            }
            let c = match self.coeffs.get(&idx) {
                Some(c) => c,
                None => continue,
            };
            let term = c
                .divide_monomial(&self.pi)
                .expect("pi is a monomial")
                .p_root_pow(k);
            acc = acc.add(&term).expect("same ring");
        }
        acc
    }

    /// Depth from which `frobenius_section(n, m)` is constant.
    pub fn section_stabilization_depth(&self, n: &LambdaIndex) -> u32 {
        self.branch_box_depth(n)
    }

    /// The Artin-Schreier twist `self + (g^p - g)`, over the common
    /// denominator. Indices of `g^p` beyond the box are dropped unless
    /// `strict` is set, in which case they are an error.
    pub fn as_twist(&self, g: &FiberSeries, strict: bool) -> Result<FiberSeries, SeriesError> {
        if self.d != g.d {
            return Err(SeriesError::DimensionMismatch {
                left: self.d,
                right: g.d,
            });
        }
        // common denominator pi = lcm(self.pi, g.pi^p)
        let g_pi_p = g.pi.frobenius();
        let pi = monomial_lcm(&monomial_lcm(&self.pi, &g_pi_p)?, &g.pi)?;
        let scale_f = pi.divide_monomial(&self.pi)?;
        let scale_gp = pi.divide_monomial(&g_pi_p)?;
        let scale_g = pi.divide_monomial(&g.pi)?;

        let mut coeffs: BTreeMap<Vec<u64>, PuiseuxPoly> = BTreeMap::new();
        let mut push = |k: Vec<u64>, c: PuiseuxPoly| -> Result<(), SeriesError> {
            if c.is_zero() {
                return Ok(());
            }
            let entry = coeffs
                .entry(k)
                .or_insert_with(|| PuiseuxPoly::zero(self.p, self.e));
            *entry = entry.add(&c)?;
            Ok(())
        };
        for (k, c) in &self.coeffs {
            push(k.clone(), c.mul(&scale_f)?)?;
        }
        for (k, c) in &g.coeffs {
            // g^p contributes (a_k)^p at p*k
            let kp: Vec<u64> = k.iter().map(|&x| x * self.p).collect();
            if kp.iter().any(|&x| x > self.bound) {
                if strict {
                    return Err(SeriesError::BoundOverflow {
                        index: kp,
                        bound: self.bound,
                    });
                }
            } else {
                push(kp, c.frobenius().mul(&scale_gp)?)?;
            }
            // -g contributes -a_k at k
            if k.iter().any(|&x| x > self.bound) {
                if strict {
                    return Err(SeriesError::BoundOverflow {
                        index: k.clone(),
                        bound: self.bound,
                    });
                }
            } else {
                push(k.clone(), c.neg().mul(&scale_g)?)?;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(FiberSeries {
            p: self.p,
            e: self.e,
            d: self.d,
            bound: self.bound,
            coeffs,
            pi,
        })
    }

    /// Coefficientwise (Hadamard) product. Denominators multiply.
    pub fn hadamard(&self, other: &Self) -> Result<FiberSeries, SeriesError> {
        if self.d != other.d {
            return Err(SeriesError::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        if self.bound != other.bound {
            return Err(SeriesError::BoundMismatch {
                left: self.bound,
                right: other.bound,
            });
        }
        let pi = self.pi.mul(&other.pi)?;
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            if let Some(c2) = other.coeffs.get(k) {
                let prod = c.mul(c2)?;
                if !prod.is_zero() {
                    coeffs.insert(k.clone(), prod);
                }
            }
        }
        Ok(FiberSeries {
            p: self.p,
            e: self.e,
            d: self.d,
            bound: self.bound,
            coeffs,
            pi,
        })
    }
}

/// The truncated geometric branch `sum_{k : p^k n <= D} x^(p^k n)`, i.e. the
/// series `g` with `g - g^p = x^n` modulo indices beyond the box.
pub fn geometric_as_branch(
    p: u64,
    e: usize,
    n: &LambdaIndex,
    d: usize,
    bound: u64,
) -> FiberSeries {
    let mut coeffs = BTreeMap::new();
    let mut k = 0u32;
    loop {
        let idx = n.scaled(p, k);
        if idx.iter().any(|&x| x > bound) {
            break;
        }
        coeffs.insert(idx, PuiseuxPoly::one(p, e));
        k += 1;
    }
    FiberSeries {
        p,
        e,
        d,
        bound,
        coeffs,
        pi: PuiseuxPoly::one(p, e),
    }
}

/// Componentwise max of two monomials (the monomial lcm).
fn monomial_lcm(a: &PuiseuxPoly, b: &PuiseuxPoly) -> Result<PuiseuxPoly, SeriesError> {
    let (ea, _) = a.as_monomial()?;
    let (eb, _) = b.as_monomial()?;
    let exps: Vec<crate::rat::Rat> = ea
        .0
        .iter()
        .zip(&eb.0)
        .map(|(x, y)| if x >= y { x.clone() } else { y.clone() })
        .collect();
    Ok(PuiseuxPoly::monomial(a.p(), a.e(), 1, exps)?)
}
