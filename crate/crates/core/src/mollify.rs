//! Mollifier construction.
//!
//! Three routes to raise `np` up to `npinf` by Artin-Schreier twists
//! `h -> h + (g^p - g)`:
//!
//! * [`reduce_step`]: one strict improvement, rooting out the graded
//!   leading part (all of whose fiber indices are p-divisible when
//!   `np < npinf`);
//! * [`mollify_minimal`]: the terminating loop of reduction steps, with its
//!   trace and the finite value window as the termination certificate;
//! * [`mollify_monomial`]: the explicit closed-form mollifier for a set of
//!   designated graded base variables, which either reaches `np = 0` or
//!   produces a [`NegativeCertificate`] witnessing `npinf < 0`;
//! * [`divisor_chain_mollify`]: iterates the monomial construction against
//!   the coordinate divisors of the denominator, absorbing an x-free shift
//!   and shrinking the denominator support one coordinate at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::np::{graded_part, np, npinf, NpError};
use crate::perfring::{ExpVec, PuiseuxPoly};
use crate::rat::{div_p_pow, Rat};
use crate::series::{FiberSeries, SeriesError};
use crate::valuation::ToricValuation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MollifyError {
    Np(NpError),
    Series(SeriesError),
    /// reduce_step on a series with np already equal to npinf.
    AlreadyOptimal,
    /// Internal contract violation: a graded leading index not divisible
    /// by p although np < npinf. Cannot fire when the precondition holds.
    NotPDivisible,
    /// The designated weights collide in value on the relevant exponent
    /// window.
    WeightsDependent,
    /// pi is not a monomial in the designated variables (or the designated
    /// set is invalid).
    PiNotMonomial,
    /// A coordinate divisor of the chain fails the npinf = 0 precondition.
    DivisorObstruction {
        coordinate: usize,
        certificate: NegativeCertificate,
    },
}

impl From<NpError> for MollifyError {
    fn from(e: NpError) -> Self {
        MollifyError::Np(e)
    }
}

impl From<SeriesError> for MollifyError {
    fn from(e: SeriesError) -> Self {
        MollifyError::Series(e)
    }
}

impl fmt::Display for MollifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MollifyError::Np(e) => write!(f, "{e}"),
            MollifyError::Series(e) => write!(f, "{e}"),
            MollifyError::AlreadyOptimal => write!(f, "np already equals npinf"),
            MollifyError::NotPDivisible => {
                write!(f, "graded leading index not p-divisible (internal)")
            }
            MollifyError::WeightsDependent => {
                write!(f, "designated weights collide on the exponent window")
            }
            MollifyError::PiNotMonomial => {
                write!(f, "pi is not a monomial in the designated variables")
            }
            MollifyError::DivisorObstruction { coordinate, .. } => {
                write!(f, "divisor obstruction at coordinate {coordinate}")
            }
        }
    }
}

/// How a mollification ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifyCase {
    /// Nothing to do: np was already equal to npinf.
    AlreadyAdmissible,
    /// A mollifier g with np(h + g^p - g) = npinf(h) was constructed.
    Mollified,
    /// npinf < 0 was certified (monomial route only).
    NegativeCertificate,
}

/// Outcome of a successful mollification.
#[derive(Debug, Clone)]
pub struct MollifierReport {
    /// The accumulated mollifier (denominator 1, possibly fractional
    /// exponents).
    pub g: FiberSeries,
    /// np after each reduction step; strictly increasing. Empty for the
    /// one-shot monomial construction and for divisor chains.
    pub trace: Vec<Rat>,
    pub initial_np: Rat,
    pub final_np: Rat,
    pub npinf: Rat,
    pub case: MollifyCase,
}

/// Witness that `npinf < 0` from the monomial construction: the folded sum
/// at base exponent `n0` carries the fiber index `k0 = p^depth * l0` with
/// `p` not dividing `l0`, which pins `npinf <= p^-depth * v(s^n0) < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCertificate {
    /// Full base exponent vector of the witness monomial.
    pub n0: Vec<Rat>,
    /// Witness fiber index.
    pub k0: Vec<u64>,
    /// The p-depth of k0.
    pub depth: u32,
    /// `p^-depth * v(s^n0)`, an upper bound for npinf.
    pub bound: Rat,
}

/// Either a mollifier reaching np = 0 or a negative certificate.
#[derive(Debug, Clone)]
pub enum MonomialOutcome {
    Report(MollifierReport),
    Certificate(NegativeCertificate),
}

/// One reduction step: requires `np(h)(v) < npinf(h)(v)`; returns the g
/// whose twist strictly raises np. The graded leading part of h has all
/// fiber indices divisible by p (the symbol is inseparable), so its p-th
/// root exists in the model: indices and exponents divide by p, and g is
/// its negation.
pub fn reduce_step(h: &FiberSeries, v: &ToricValuation) -> Result<FiberSeries, MollifyError> {
    let level = np(h, v)?;
    let target = npinf(h, v)?;
    if level == target {
        return Err(MollifyError::AlreadyOptimal);
    }
    reduce_step_at(h, v, &level)
}

fn reduce_step_at(
    h: &FiberSeries,
    v: &ToricValuation,
    level: &Rat,
) -> Result<FiberSeries, MollifyError> {
    let p = h.p();
    let mut g_coeffs: Vec<(Vec<u64>, PuiseuxPoly)> = Vec::new();
    for (k, c) in h.coeffs() {
        if k.iter().all(|&x| x == 0) {
            continue;
        }
        let over_pi = c.divide_monomial(h.pi()).expect("pi is a monomial");
        let graded = graded_part(&over_pi, v, level);
        if graded.is_zero() {
            continue;
        }
        if k.iter().any(|&x| x % p != 0) {
            return Err(MollifyError::NotPDivisible);
        }
        let k_over_p: Vec<u64> = k.iter().map(|&x| x / p).collect();
        g_coeffs.push((k_over_p, graded.p_root().neg()));
    }
    Ok(FiberSeries::new(
        p,
        h.e(),
        h.d(),
        h.bound(),
        g_coeffs,
        PuiseuxPoly::one(p, h.e()),
    )?)
}

/// Iterates [`reduce_step`] until `np = npinf`, summing the mollifiers.
/// Terminates because each step strictly shrinks the total p-depth of the
/// fiber support; the visited np values live in the finite value window
/// between the initial np and npinf.
pub fn mollify_minimal(
    h: &FiberSeries,
    v: &ToricValuation,
) -> Result<MollifierReport, MollifyError> {
    let initial_np = np(h, v)?;
    let target = npinf(h, v)?;
    let mut current = h.clone();
    let mut g_total = FiberSeries::zero(h.p(), h.e(), h.d(), h.bound());
    let mut trace: Vec<Rat> = Vec::new();

    // Hard cap from the depth-potential argument: each step removes at
    // least one level of p-depth from some chain.
    let mut cap: usize = 4;
    for (k, _) in h.coeffs() {
        let mut depth = 0usize;
        let mut idx: Vec<u64> = k.clone();
        while !idx.iter().all(|&x| x == 0) && idx.iter().all(|&x| x % h.p() == 0) {
            for x in idx.iter_mut() {
                *x /= h.p();
            }
            depth += 1;
        }
        cap += depth + 1;
    }

    let mut level = initial_np.clone();
    while level != target {
        let g = reduce_step_at(&current, v, &level)?;
        current = current.as_twist(&g, true)?;
        g_total = g_total.add(&g)?;
        let next = np(&current, v)?;
        assert!(next > level, "reduction step failed to increase np");
        debug_assert_eq!(npinf(&current, v)?, target);
        trace.push(next.clone());
        level = next;
        assert!(trace.len() <= cap, "mollifier loop exceeded its depth potential");
    }

    let case = if trace.is_empty() {
        MollifyCase::AlreadyAdmissible
    } else {
        MollifyCase::Mollified
    };
    Ok(MollifierReport {
        g: g_total,
        trace,
        initial_np,
        final_np: level,
        npinf: target,
        case,
    })
}

// ---------------------------------------------------------------------
// The explicit monomial construction.
// ---------------------------------------------------------------------

/// Sparse map fiber-index -> base polynomial, the working representation
/// of the grouped coefficients.
type RawSeries = BTreeMap<Vec<u64>, PuiseuxPoly>;

fn raw_add(p: u64, e: usize, into: &mut RawSeries, k: &[u64], c: &PuiseuxPoly) {
    if c.is_zero() {
        return;
    }
    let entry = into
        .entry(k.to_vec())
        .or_insert_with(|| PuiseuxPoly::zero(p, e));
    *entry = entry.add(c).expect("same ring");
    if entry.is_zero() {
        into.remove(k);
    }
}

/// `raw^(p^j)`: Frobenius on coefficients, fiber indices multiplied by p^j.
fn raw_frobenius_pow(p: u64, raw: &RawSeries, j: u32) -> RawSeries {
    let factor = p.pow(j);
    raw.iter()
        .map(|(k, c)| {
            let idx: Vec<u64> = k.iter().map(|&x| x * factor).collect();
            (idx, c.frobenius_pow(j))
        })
        .collect()
}

/// The explicit mollifier for a toric valuation with designated graded
/// base variables.
///
/// The support of `f/pi` is grouped by its exponents in the designated
/// variables; the groups with negative designated weight form chains
/// `eta, eta/p, eta/p^2, ...` headed by the maximal elements. Per chain the
/// mollifier `g` telescopes the chain onto the single folded coefficient
/// `c_eta = sum_j b_{eta/p^j}^(p^j)`; if every folded coefficient is free
/// of the fiber variables the twist reaches `np = 0` exactly, otherwise a
/// fiber-carrying witness monomial certifies `npinf < 0`.
pub fn mollify_monomial(
    f: &FiberSeries,
    v: &ToricValuation,
    designated: &[usize],
) -> Result<MonomialOutcome, MollifyError> {
    let p = f.p();
    let e = f.e();
    if v.dim() != e {
        return Err(MollifyError::Np(NpError::Valuation(
            crate::valuation::ValuationError::DimensionMismatch {
                weights: v.dim(),
                vars: e,
            },
        )));
    }
    let mut des: Vec<usize> = designated.to_vec();
    des.sort_unstable();
    des.dedup();
    if des.is_empty() || des.len() != designated.len() || des.iter().any(|&i| i >= e) {
        return Err(MollifyError::PiNotMonomial);
    }
    // Designated-part pairing.
    let pair_des = |exps: &ExpVec| -> Rat {
        let mut acc = Rat::zero();
        for &i in &des {
            if !exps.0[i].is_zero() {
                acc += &exps.0[i] * &v.weights()[i];
            }
        }
        acc
    };

    // Group the support of f/pi by designated exponents (full-length
    // vectors, zero outside the designated set); only groups of negative
    // designated weight take part in the construction.
    let mut groups: BTreeMap<ExpVec, RawSeries> = BTreeMap::new();
    for (k, c) in f.coeffs() {
        let over_pi = c.divide_monomial(f.pi()).expect("pi is a monomial");
        for (exps, coef) in over_pi.terms() {
            let mut eta = alloc::vec![Rat::zero(); e];
            let mut rho = exps.0.clone();
            for &i in &des {
                eta[i] = exps.0[i].clone();
                rho[i] = Rat::zero();
            }
            let eta = ExpVec(eta);
            if pair_des(&eta) >= Rat::zero() {
                continue;
            }
            let residual = PuiseuxPoly::monomial(p, e, coef, rho).expect("valid exponents");
            raw_add(p, e, groups.entry(eta).or_default(), k, &residual);
        }
    }
    groups.retain(|_, raw| !raw.is_empty());

    // Designated weights must separate the group exponents (the desk-scale
    // reading of Q-linear independence).
    {
        let mut seen: BTreeMap<Rat, &ExpVec> = BTreeMap::new();
        for eta in groups.keys() {
            let val = pair_des(eta);
            if let Some(other) = seen.get(&val) {
                if *other != eta {
                    return Err(MollifyError::WeightsDependent);
                }
            }
            seen.insert(val, eta);
        }
    }

    let scale_eta = |eta: &ExpVec, factor: &Rat| -> ExpVec {
        ExpVec(eta.0.iter().map(|x| x * factor).collect())
    };
    let p_rat = Rat::from_integer((p as i64).into());

    // Heads: groups with no multiple p^i * eta (i >= 1) in the support.
    // Designated values p^i * v(eta) fall strictly, so the probe can stop
    // once it passes the least value present.
    let keys: BTreeSet<ExpVec> = groups.keys().cloned().collect();
    let min_val = groups.keys().map(&pair_des).min().unwrap_or_else(Rat::zero);
    let mut heads: Vec<ExpVec> = Vec::new();
    for eta in &keys {
        let mut is_head = true;
        let mut probe = scale_eta(eta, &p_rat);
        while pair_des(&probe) >= min_val {
            if keys.contains(&probe) {
                is_head = false;
                break;
            }
            probe = scale_eta(&probe, &p_rat);
        }
        if is_head {
            heads.push(eta.clone());
        }
    }

    // Chain depth per head: largest i with eta/p^i in the support.
    let mut g_raw: RawSeries = RawSeries::new();
    let mut folded: Vec<(ExpVec, RawSeries)> = Vec::new();
    for eta in &heads {
        let mut depth = 0u32;
        loop {
            let probe = scale_eta(eta, &div_p_pow(&Rat::one(), p, depth + 1));
            if keys.contains(&probe) {
                depth += 1;
            } else {
                break;
            }
        }
        // folded coefficient c_eta = sum_j b_(eta/p^j)^(p^j)
        let mut c_eta: RawSeries = RawSeries::new();
        for j in 0..=depth {
            let pos = scale_eta(eta, &div_p_pow(&Rat::one(), p, j));
            if let Some(b) = groups.get(&pos) {
                for (k, c) in raw_frobenius_pow(p, b, j) {
                    raw_add(p, e, &mut c_eta, &k, &c);
                }
            }
        }
        // mollifier part: sum_{i=1..depth} (sum_{k=i..depth} b_(eta/p^k)
        // s^(eta/p^k))^(p^(i-1))
        for i in 1..=depth {
            let mut inner: RawSeries = RawSeries::new();
            for kk in i..=depth {
                let pos = scale_eta(eta, &div_p_pow(&Rat::one(), p, kk));
                if let Some(b) = groups.get(&pos) {
                    let monom = PuiseuxPoly::monomial(p, e, 1, pos.0.clone())
                        .expect("valid exponents");
                    for (k, c) in b {
                        raw_add(p, e, &mut inner, k, &c.mul(&monom).expect("same ring"));
                    }
                }
            }
            for (k, c) in raw_frobenius_pow(p, &inner, i - 1) {
                raw_add(p, e, &mut g_raw, &k, &c);
            }
        }
        folded.push((eta.clone(), c_eta));
    }

    // Box large enough for the exact twist.
    let mut needed = f.bound();
    for k in g_raw.keys() {
        for &x in k {
            needed = needed.max(x.saturating_mul(p));
        }
    }
    let g = FiberSeries::new(
        p,
        e,
        f.d(),
        needed,
        g_raw.into_iter(),
        PuiseuxPoly::one(p, e),
    )?;
    let twisted = f.with_bound(needed).as_twist(&g, true)?;

    // Case split: a fiber-carrying monomial in some folded coefficient?
    let mut witnesses: Vec<(Rat, ExpVec, Vec<u64>, u32)> = Vec::new();
    for (eta, c_eta) in &folded {
        for (k, c) in c_eta {
            if k.iter().all(|&x| x == 0) {
                continue;
            }
            let (_, kdepth) = crate::series::lambda_reduce(p, k).expect("nonzero index");
            for (rho, _) in c.terms() {
                let mut full = rho.0.clone();
                for &i in &des {
                    full[i] = eta.0[i].clone();
                }
                let full = ExpVec(full);
                let value = v.pair(&full);
                if value < Rat::zero() {
                    let bound = div_p_pow(&value, p, kdepth);
                    witnesses.push((bound, full, k.clone(), kdepth));
                }
            }
        }
    }

    if witnesses.is_empty() {
        // Every folded coefficient is x-free (or carries only non-negative
        // values): the twist reaches np = 0 exactly.
        let initial_np = np(f, v)?;
        let final_np = np(&twisted, v)?;
        assert!(final_np.is_zero(), "monomial mollifier must reach np = 0");
        let case = if g.is_zero() && initial_np.is_zero() {
            MollifyCase::AlreadyAdmissible
        } else {
            MollifyCase::Mollified
        };
        let trace = if g.is_zero() {
            Vec::new()
        } else {
            alloc::vec![final_np.clone()]
        };
        return Ok(MonomialOutcome::Report(MollifierReport {
            g,
            trace,
            initial_np,
            final_np,
            npinf: Rat::zero(),
            case,
        }));
    }

    witnesses.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let (bound, full, k0, depth) = witnesses.swap_remove(0);
    debug_assert!(npinf(&twisted, v)? <= bound);
    Ok(MonomialOutcome::Certificate(NegativeCertificate {
        n0: full.0,
        k0,
        depth,
        bound,
    }))
}

// ---------------------------------------------------------------------
// Divisor chains.
// ---------------------------------------------------------------------

/// Weights modeling the divisorial valuation of the coordinate divisor
/// `V(s_coord)`: 1 at the coordinate, a deterministic epsilon elsewhere,
/// chosen smaller than any gap the series data can produce so that signs
/// and comparisons match the genuine divisorial valuation.
pub fn divisorial_weights(f: &FiberSeries, coord: usize) -> Vec<Rat> {
    let p = f.p();
    // Denominator depth of anything the construction can produce.
    let mut log_bound = 0u32;
    while p.pow(log_bound + 1) <= f.bound().max(1) {
        log_bound += 1;
    }
    let mut depth = f.pi().depth();
    for (_, c) in f.coeffs() {
        depth = depth.max(c.depth());
    }
    let lattice = depth + 2 * (log_bound + 2);
    // Exponent mass of a single monomial after the worst-case Frobenius
    // power in the construction.
    let sum_abs = |poly: &PuiseuxPoly| -> Rat {
        let mut best = Rat::zero();
        for (k, _) in poly.terms() {
            let mut s = Rat::zero();
            for x in &k.0 {
                s += x.abs();
            }
            if s > best {
                best = s;
            }
        }
        best
    };
    let mut mass = Rat::one() + sum_abs(f.pi());
    for (_, c) in f.coeffs() {
        mass = mass.max(sum_abs(c) + Rat::one() + sum_abs(f.pi()));
    }
    let mut blowup = Rat::from_integer(4.into());
    for _ in 0..(log_bound + 2 + lattice) {
        blowup *= Rat::from_integer((p as i64).into());
    }
    let eps = Rat::one() / (mass * blowup).ceil();
    (0..f.e())
        .map(|i| if i == coord { Rat::one() } else { eps.clone() })
        .collect()
}

/// Iterates the monomial construction against the coordinate divisors of
/// `order` (last coordinate first). Each successful step absorbs the
/// x-free negative part into a base-field shift and drops the processed
/// coordinate from the denominator support. The precondition
/// `npinf(f)(v_Di) = 0` is checked, not assumed: a failing divisor aborts
/// with its certificate.
///
/// The returned report carries the total mollifier g; the absorbed x-free
/// shifts do not affect np and are not part of g. Trace is empty (per-step
/// values refer to different valuations).
pub fn divisor_chain_mollify(
    f: &FiberSeries,
    order: &[usize],
) -> Result<MollifierReport, MollifyError> {
    if order.is_empty() {
        return Err(MollifyError::PiNotMonomial);
    }
    let (pi_exps, _) = f.pi().as_monomial().map_err(|_| MollifyError::PiNotMonomial)?;
    for (i, x) in pi_exps.0.iter().enumerate() {
        if !x.is_zero() && !order.contains(&i) {
            return Err(MollifyError::PiNotMonomial);
        }
    }
    let mut initial_np: Option<Rat> = None;
    for &coord in order {
        let v = ToricValuation::new(divisorial_weights(f, coord)).expect("positive weights");
        let this = np(f, &v)?;
        initial_np = Some(match initial_np {
            None => this.clone(),
            Some(prev) => prev.min(this.clone()),
        });
    }

    let mut current = f.clone();
    let mut g_total = FiberSeries::zero(f.p(), f.e(), f.d(), f.bound());
    for &coord in order.iter().rev() {
        let v = ToricValuation::new(divisorial_weights(&current, coord)).expect("positive weights");
        match mollify_monomial(&current, &v, &[coord])? {
            MonomialOutcome::Certificate(certificate) => {
                return Err(MollifyError::DivisorObstruction {
                    coordinate: coord,
                    certificate,
                });
            }
            MonomialOutcome::Report(report) => {
                let needed = current.bound().max(report.g.bound());
                current = current
                    .with_bound(needed)
                    .as_twist(&report.g, true)?;
                g_total = g_total.add(&report.g)?;
                current = absorb_free_part_and_renormalize(&current, coord)?;
                debug_assert!(np(&current, &v)?.is_zero());
            }
        }
    }

    Ok(MollifierReport {
        g: g_total,
        trace: Vec::new(),
        initial_np: initial_np.expect("nonempty order"),
        final_np: Rat::zero(),
        npinf: Rat::zero(),
        case: MollifyCase::Mollified,
    })
}

/// Drops the fiber-free monomials whose `coord`-exponent is negative (the
/// shift absorbed into the base field) and re-normalizes the denominator so
/// that its support no longer contains `coord`.
fn absorb_free_part_and_renormalize(
    h: &FiberSeries,
    coord: usize,
) -> Result<FiberSeries, MollifyError> {
    let p = h.p();
    let e = h.e();
    // Collect f/pi monomials per fiber index, dropping the absorbed part.
    let mut raw: RawSeries = RawSeries::new();
    for (k, c) in h.coeffs() {
        let over_pi = c.divide_monomial(h.pi()).expect("pi is a monomial");
        let fiber_free = k.iter().all(|&x| x == 0);
        for (exps, coef) in over_pi.terms() {
            if fiber_free && exps.0[coord].is_negative() {
                continue; // absorbed into the base-field shift
            }
            assert!(
                !exps.0[coord].is_negative(),
                "x-carrying monomial with negative divisor exponent after mollification"
            );
            let m = PuiseuxPoly::monomial(p, e, coef, exps.0.clone()).expect("valid exponents");
            raw_add(p, e, &mut raw, k, &m);
        }
    }
    // New denominator: clear the remaining negative ranges coordinatewise.
    let mut pi_exps = alloc::vec![Rat::zero(); e];
    for c in raw.values() {
        for (exps, _) in c.terms() {
            for (i, x) in exps.0.iter().enumerate() {
                if x.is_negative() {
                    let need = (-x).ceil();
                    if need > pi_exps[i] {
                        pi_exps[i] = need;
                    }
                }
            }
        }
    }
    let pi = PuiseuxPoly::monomial(p, e, 1, pi_exps).expect("integral exponents");
    let coeffs: Vec<(Vec<u64>, PuiseuxPoly)> = raw
        .into_iter()
        .map(|(k, c)| (k, c.mul(&pi).expect("same ring")))
        .collect();
    Ok(FiberSeries::new(p, e, h.d(), h.bound(), coeffs, pi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};
    use rand::{Rng, SeedableRng};

    fn mono(p: u64, e: usize, exps: &[(i64, i64)]) -> PuiseuxPoly {
        let exps: Vec<Rat> = exps.iter().map(|&(n, d)| rat(n, d)).collect();
        PuiseuxPoly::monomial(p, e, 1, exps).unwrap()
    }

    fn tv(weights: &[i64]) -> ToricValuation {
        ToricValuation::new(weights.iter().map(|&w| rint(w)).collect()).unwrap()
    }

    fn intro_series(p: u64) -> FiberSeries {
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let t = mono(p, 2, &[(0, 1), (1, 1)]);
        FiberSeries::new(
            p,
            2,
            1,
            (p * p) as u64,
            [
                (alloc::vec![p], PuiseuxPoly::one(p, 2)),
                (alloc::vec![1], t),
            ],
            s,
        )
        .unwrap()
    }

    #[test]
    fn reduce_step_on_intro_series() {
        let p = 3;
        let h = intro_series(p);
        let v = tv(&[9, 3]);
        let g = reduce_step(&h, &v).unwrap();
        // g = -s^(-1/3) x
        let expected = FiberSeries::new(
            p,
            2,
            1,
            9,
            [(alloc::vec![1], mono(p, 2, &[(-1, 3), (0, 1)]).neg())],
            PuiseuxPoly::one(p, 2),
        )
        .unwrap();
        assert_eq!(g, expected);
        let twisted = h.as_twist(&g, true).unwrap();
        assert_eq!(np(&twisted, &v).unwrap(), rint(-6));
    }

    #[test]
    fn reduce_step_rejects_admissible_input() {
        let p = 3;
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let t = mono(p, 2, &[(0, 1), (1, 1)]);
        let h = FiberSeries::new(p, 2, 1, 9, [(alloc::vec![1], t)], s).unwrap();
        assert!(matches!(
            reduce_step(&h, &tv(&[9, 3])),
            Err(MollifyError::AlreadyOptimal)
        ));
    }

    #[test]
    fn reduce_step_monomial_symbol_gives_monomial_g() {
        let p = 2;
        let s = mono(p, 1, &[(1, 1)]);
        let h = FiberSeries::new(p, 1, 1, 4, [(alloc::vec![2], PuiseuxPoly::one(p, 1))], s)
            .unwrap();
        let g = reduce_step(&h, &tv(&[1])).unwrap();
        assert_eq!(g.num_terms(), 1);
        let (_, c) = g.coeffs().next().unwrap();
        assert!(c.is_monomial());
    }

    #[test]
    fn minimal_loop_on_intro_series_takes_one_step() {
        let p = 3;
        let h = intro_series(p);
        let v = tv(&[9, 3]);
        let report = mollify_minimal(&h, &v).unwrap();
        assert_eq!(report.case, MollifyCase::Mollified);
        assert_eq!(report.initial_np, rint(-9));
        assert_eq!(report.final_np, rint(-6));
        assert_eq!(report.npinf, rint(-6));
        assert_eq!(report.trace, alloc::vec![rint(-6)]);
        // the accumulated g twists h to the reported final np
        let twisted = h.as_twist(&report.g, true).unwrap();
        assert_eq!(np(&twisted, &v).unwrap(), report.final_np);
    }

    #[test]
    fn minimal_loop_two_step_descent() {
        // h = x^(p^2)/s at p = 2, v(s) = 1: trace -1/2 then -1/4.
        let p = 2;
        let s = mono(p, 1, &[(1, 1)]);
        let h = FiberSeries::new(p, 1, 1, 4, [(alloc::vec![4], PuiseuxPoly::one(p, 1))], s)
            .unwrap();
        let v = tv(&[1]);
        let report = mollify_minimal(&h, &v).unwrap();
        assert_eq!(report.initial_np, rint(-1));
        assert_eq!(report.trace, alloc::vec![rat(-1, 2), rat(-1, 4)]);
        assert_eq!(report.final_np, rat(-1, 4));
        assert_eq!(report.npinf, rat(-1, 4));
    }

    #[test]
    fn minimal_loop_no_op_on_admissible_series() {
        let p = 3;
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let t = mono(p, 2, &[(0, 1), (1, 1)]);
        let h = FiberSeries::new(p, 2, 1, 9, [(alloc::vec![1], t)], s).unwrap();
        let report = mollify_minimal(&h, &tv(&[9, 3])).unwrap();
        assert_eq!(report.case, MollifyCase::AlreadyAdmissible);
        assert!(report.g.is_zero());
        assert!(report.trace.is_empty());
    }

    #[test]
    fn monomial_trivial_case_already_admissible() {
        // f in pi * (ring): all b's vanish, g = 0, final np = 0.
        let p = 2;
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [(alloc::vec![1], mono(p, 2, &[(2, 1), (0, 1)]))],
            s,
        )
        .unwrap();
        let v = tv(&[1, 1]);
        match mollify_monomial(&f, &v, &[0]).unwrap() {
            MonomialOutcome::Report(r) => {
                assert_eq!(r.case, MollifyCase::AlreadyAdmissible);
                assert!(r.g.is_zero());
                assert_eq!(r.final_np, rint(0));
            }
            MonomialOutcome::Certificate(_) => panic!("expected report"),
        }
    }

    #[test]
    fn monomial_x_free_group_needs_no_g() {
        // f/pi = t * s^(-1) + x*s: the negative group at s^(-1) is x-free
        // with chain depth 0, so g = 0 and np = 0 ... but np(f) < 0 is
        // impossible here: the x-carrying part has positive value. The
        // final np must be 0 and the case Mollified-with-empty-g collapses
        // to AlreadyAdmissible.
        let p = 2;
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let t = mono(p, 2, &[(0, 1), (1, 1)]);
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [
                (alloc::vec![0], t),
                (alloc::vec![1], mono(p, 2, &[(2, 1), (0, 1)])),
            ],
            s,
        )
        .unwrap();
        let v = ToricValuation::new(alloc::vec![rint(1), rat(1, 7)]).unwrap();
        match mollify_monomial(&f, &v, &[0]).unwrap() {
            MonomialOutcome::Report(r) => {
                assert_eq!(r.final_np, rint(0));
                assert!(r.g.is_zero());
            }
            MonomialOutcome::Certificate(_) => panic!("expected report"),
        }
    }

    #[test]
    fn monomial_certificate_for_p_power_term() {
        // f/pi = x^p * s^(-beta) with p not dividing beta: the folded
        // coefficient at -beta is x^p, witness k0 = (p), depth 1,
        // bound = v(s^-beta)/p < 0. Cross-checked against npinf.
        let p = 3;
        let f = FiberSeries::new(
            p,
            1,
            1,
            9,
            [(alloc::vec![3], mono(p, 1, &[(-5, 1)]))],
            PuiseuxPoly::one(p, 1),
        )
        .unwrap();
        let v = tv(&[2]);
        match mollify_monomial(&f, &v, &[0]).unwrap() {
            MonomialOutcome::Certificate(c) => {
                assert_eq!(c.k0, alloc::vec![3]);
                assert_eq!(c.depth, 1);
                assert_eq!(c.n0, alloc::vec![rint(-5)]);
                assert_eq!(c.bound, rat(-10, 3));
                assert!(c.bound < rint(0));
                // soundness against the independent np-module computation
                assert!(npinf(&f, &v).unwrap() <= c.bound);
            }
            MonomialOutcome::Report(_) => panic!("expected certificate"),
        }
    }

    #[test]
    fn monomial_mollifier_reaches_zero_on_intro_like_group() {
        // f = x^p * s^(p-1) / s^p + ... : designated chain of depth 1 whose
        // folded coefficient is x-free.
        // Take f/pi with pi = s^2, f = t*x^2*s + s (p = 2):
        // groups: s^(-1) (from s/s^2, x-free, chain depth 0) and
        // t*x^2*s^(-1): fiber-carrying at s^(-1)?? that one must be
        // handled: p | (2) and chain: eta = -1, p*eta = -2 not in support:
        // head at -1 with c = b_(-1) = t x^2 + 1 -> witness!
        // So instead make the x-part cancel: f = x^2 s + (x s^(1/2))-ish...
        // Simplest honest case-1 instance with nonzero g:
        // f/pi = c * s^(-2) + c^2... take f = x^2*s^0 ... we build the
        // series directly with chain s^(-2) <- s^(-1)... a chain needs two
        // groups: eta = (-2) head with eta/p = (-1): b_(-2) = t^2 x^2,
        // b_(-1) = t x: folded c = b_(-1)... wait heads go downward:
        // head eta has p*eta not in support: candidates -1 (p*(-1) = -2 in
        // support -> not a head) and -2 (p*(-2) = -4 absent -> head), chain
        // depth 1: positions -2, -1. c = b_(-2) + b_(-1)^p = t^2x^2 + t^2x^2
        // = 0 in char 2: x-free (empty). Case 1 with nonzero g.
        let p = 2;
        let t2x2 = mono(p, 2, &[(0, 1), (2, 1)]);
        let tx = mono(p, 2, &[(0, 1), (1, 1)]);
        let pi = mono(p, 2, &[(2, 1), (0, 1)]);
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [
                (alloc::vec![2], t2x2),         // t^2 x^2 / s^2 -> group -2
                (alloc::vec![1], tx.mul(&mono(p, 2, &[(1, 1), (0, 1)])).unwrap()), // t x / s -> group -1
            ],
            pi,
        )
        .unwrap();
        let v = ToricValuation::new(alloc::vec![rint(1), rat(1, 9)]).unwrap();
        match mollify_monomial(&f, &v, &[0]).unwrap() {
            MonomialOutcome::Report(r) => {
                assert_eq!(r.case, MollifyCase::Mollified);
                assert!(!r.g.is_zero());
                assert_eq!(r.final_np, rint(0));
                // cross-check through the series module
                let needed = f.bound().max(r.g.bound());
                let twisted = f.with_bound(needed).as_twist(&r.g, true).unwrap();
                assert_eq!(np(&twisted, &v).unwrap(), rint(0));
                assert_eq!(npinf(&f, &v).unwrap(), rint(0));
            }
            MonomialOutcome::Certificate(_) => panic!("expected report"),
        }
    }

    #[test]
    fn monomial_rejects_bad_designations() {
        let p = 2;
        let f = FiberSeries::zero(p, 2, 1, 4);
        assert!(matches!(
            mollify_monomial(&f, &tv(&[1, 1]), &[]),
            Err(MollifyError::PiNotMonomial)
        ));
        assert!(matches!(
            mollify_monomial(&f, &tv(&[1, 1]), &[5]),
            Err(MollifyError::PiNotMonomial)
        ));
    }

    #[test]
    fn weights_dependent_detected() {
        // two distinct designated groups with equal designated value:
        // eta = (-1, -2) and (-2, ... ) hmm: use weights (1, 1) and groups
        // (-1, -2), (-2, -1): both value -3.
        let p = 2;
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [
                (alloc::vec![1], mono(p, 2, &[(-1, 1), (-2, 1)])),
                (alloc::vec![1], mono(p, 2, &[(-2, 1), (-1, 1)])),
            ],
            PuiseuxPoly::one(p, 2),
        )
        .unwrap();
        assert!(matches!(
            mollify_monomial(&f, &tv(&[1, 1]), &[0, 1]),
            Err(MollifyError::WeightsDependent)
        ));
    }

    #[test]
    fn divisor_chain_on_clean_series() {
        // f = (t x + s1 s2 x^2) / (s1 s2): both divisor valuations see
        // npinf = 0 ... t x / (s1 s2) has negative value at both divisors!
        // Use f = (s1 s2 x + s1^2 s2^2 x^2)/(s1 s2) = x + s1 s2 x^2:
        // already regular; chain is a no-op reaching np = 0.
        let p = 2;
        let pi = mono(p, 2, &[(1, 1), (1, 1)]);
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [
                (alloc::vec![1], mono(p, 2, &[(1, 1), (1, 1)])),
                (alloc::vec![2], mono(p, 2, &[(2, 1), (2, 1)])),
            ],
            pi,
        )
        .unwrap();
        let report = divisor_chain_mollify(&f, &[0, 1]).unwrap();
        assert_eq!(report.final_np, rint(0));
        assert_eq!(report.npinf, rint(0));
    }

    #[test]
    fn divisor_chain_mollifies_a_p_power_chain() {
        // f = (x^p s^(p-1) + ...) / s: the group s^(-1/p)-chain... simplest:
        // f = x^2 s / s^2 = x^2 / s at p = 2: npinf(v_D) = -1/2 < 0:
        // obstruction expected.
        let p = 2;
        let f = FiberSeries::new(
            p,
            1,
            1,
            4,
            [(alloc::vec![2], mono(p, 1, &[(1, 1)]))],
            mono(p, 1, &[(2, 1)]),
        )
        .unwrap();
        match divisor_chain_mollify(&f, &[0]) {
            Err(MollifyError::DivisorObstruction {
                coordinate,
                certificate,
            }) => {
                assert_eq!(coordinate, 0);
                assert!(certificate.bound < rint(0));
                let v = ToricValuation::new(divisorial_weights(&f, 0)).unwrap();
                assert!(npinf(&f, &v).unwrap() <= certificate.bound);
            }
            _ => panic!("expected obstruction"),
        }

        // f = (x^2 s + x s) / s = x^2 + x: fine (regular).
        let g = FiberSeries::new(
            p,
            1,
            1,
            4,
            [
                (alloc::vec![2], mono(p, 1, &[(1, 1)])),
                (alloc::vec![1], mono(p, 1, &[(1, 1)])),
            ],
            mono(p, 1, &[(1, 1)]),
        )
        .unwrap();
        let report = divisor_chain_mollify(&g, &[0]).unwrap();
        assert_eq!(report.final_np, rint(0));
    }

    #[test]
    fn divisor_chain_with_genuine_mollification() {
        // f/pi = t^2 x^2 / s^2 + t^2 x^2 / s ... reuse the case-1 chain
        // from the monomial test but against the divisor of s (coordinate
        // 0) with pi = s^2.
        let p = 2;
        let t2x2 = mono(p, 2, &[(0, 1), (2, 1)]);
        let tx_s = mono(p, 2, &[(1, 1), (1, 1)]);
        let pi = mono(p, 2, &[(2, 1), (0, 1)]);
        let f = FiberSeries::new(
            p,
            2,
            1,
            4,
            [(alloc::vec![2], t2x2), (alloc::vec![1], tx_s)],
            pi,
        )
        .unwrap();
        let report = divisor_chain_mollify(&f, &[0]).unwrap();
        assert!(!report.g.is_zero());
        assert_eq!(report.final_np, rint(0));
        // re-derive: np(as_twist(f, g)) = 0 at the divisorial valuation
        let v = ToricValuation::new(divisorial_weights(&f, 0)).unwrap();
        let needed = f.bound().max(report.g.bound());
        let twisted = f.with_bound(needed).as_twist(&report.g, true).unwrap();
        assert_eq!(np(&twisted, &v).unwrap(), rint(0));
    }

    #[test]
    fn minimal_loop_randomized_contract() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0x1001);
        for _ in 0..120 {
            let p = [2u64, 3][rng.gen_range(0..2)];
            let h = random_series(&mut rng, p, 2, 1, 16);
            let v = ToricValuation::new(alloc::vec![
                rint(rng.gen_range(1..6)),
                rint(rng.gen_range(1..6)),
            ])
            .unwrap();
            let report = mollify_minimal(&h, &v).unwrap();
            // strictly increasing trace
            for w in report.trace.windows(2) {
                assert!(w[0] < w[1]);
            }
            assert_eq!(report.final_np, report.npinf);
            assert_eq!(report.npinf, npinf(&h, &v).unwrap());
            // idempotence: re-mollifying the twist is a no-op
            let twisted = h.as_twist(&report.g, true).unwrap();
            let again = mollify_minimal(&twisted, &v).unwrap();
            assert_eq!(again.case, MollifyCase::AlreadyAdmissible);
        }
    }

    fn random_series(
        rng: &mut impl Rng,
        p: u64,
        e: usize,
        d: usize,
        bound: u64,
    ) -> FiberSeries {
        let mut coeffs = Vec::new();
        for _ in 0..rng.gen_range(1..6) {
            let idx: Vec<u64> = (0..d).map(|_| rng.gen_range(0..=bound)).collect();
            let exps: Vec<Rat> = (0..e).map(|_| rint(rng.gen_range(0..5))).collect();
            let c = PuiseuxPoly::monomial(p, e, rng.gen_range(1..p), exps).unwrap();
            coeffs.push((idx, c));
        }
        let pi_exps: Vec<Rat> = (0..e).map(|_| rint(rng.gen_range(0..3))).collect();
        let pi = PuiseuxPoly::monomial(p, e, 1, pi_exps).unwrap();
        FiberSeries::new(p, e, d, bound, coeffs, pi).unwrap()
    }
}
