//! Height-1 toric (monomial) valuations on the perfection ring.
//!
//! A [`ToricValuation`] is a strictly positive rational weight vector U; it
//! sends a nonzero polynomial to the minimum weight pairing over its support
//! and the zero polynomial to infinity. [`ToricValuation::value_window`]
//! enumerates the finite set of values attainable in a bounded window, the
//! discreteness fact that makes the mollifier loop terminate.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::perfring::{ExpVec, PuiseuxPoly};
use crate::rat::{div_p_pow, to_fraction_string, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationError {
    /// Weight vector length differs from the polynomial's variable count.
    DimensionMismatch { weights: usize, vars: usize },
    /// A weight that is not strictly positive.
    NonpositiveWeight(usize),
    /// val_fraction with a zero denominator.
    ZeroDenominator,
    /// value_window requires val(pi) > 0.
    NonpositivePi,
    /// value_window requires generators of non-negative value.
    NegativeGenerator(usize),
}

impl fmt::Display for ValuationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationError::DimensionMismatch { weights, vars } => {
                write!(f, "{weights} weights against {vars} variables")
            }
            ValuationError::NonpositiveWeight(i) => {
                write!(f, "weight {i} is not strictly positive")
            }
            ValuationError::ZeroDenominator => write!(f, "zero denominator"),
            ValuationError::NonpositivePi => write!(f, "val(pi) must be strictly positive"),
            ValuationError::NegativeGenerator(i) => {
                write!(f, "generator {i} has negative value")
            }
        }
    }
}

/// A rational value or the value of the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Finite(Rat),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Value::Finite(x) => Some(x),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    /// Value addition, with infinity absorbing.
    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }

    pub fn sub(&self, other: &Rat) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(a - other),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Infinity, Value::Infinity) => Ordering::Equal,
            (Value::Infinity, Value::Finite(_)) => Ordering::Greater,
            (Value::Finite(_), Value::Infinity) => Ordering::Less,
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{}", to_fraction_string(x)),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

/// The monomial valuation v_U determined by a strictly positive weight
/// vector U: v_U of a polynomial is the minimal `sum k_i * u_i` over its
/// support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricValuation {
    weights: Vec<Rat>,
}

impl ToricValuation {
    pub fn new(weights: Vec<Rat>) -> Result<Self, ValuationError> {
        for (i, w) in weights.iter().enumerate() {
            if *w <= Rat::zero() {
                return Err(ValuationError::NonpositiveWeight(i));
            }
        }
        Ok(ToricValuation { weights })
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Weight pairing of a single exponent vector.
    pub fn pair(&self, k: &ExpVec) -> Rat {
        let mut acc = Rat::zero();
        for (x, w) in k.0.iter().zip(&self.weights) {
            if !x.is_zero() {
                acc += x * w;
            }
        }
        acc
    }

    /// v_U(f): infinity for f = 0, else the minimum pairing over the support.
    pub fn val(&self, f: &PuiseuxPoly) -> Result<Value, ValuationError> {
        if f.e() != self.weights.len() {
            return Err(ValuationError::DimensionMismatch {
                weights: self.weights.len(),
                vars: f.e(),
            });
        }
        let mut best: Option<Rat> = None;
        for (k, _) in f.terms() {
            let v = self.pair(k);
            best = Some(match best {
                None => v,
                Some(b) => b.min(v),
            });
        }
        Ok(match best {
            None => Value::Infinity,
            Some(b) => Value::Finite(b),
        })
    }

    /// v_U(num/den) = val(num) - val(den).
    pub fn val_fraction(&self, num: &PuiseuxPoly, den: &PuiseuxPoly) -> Result<Value, ValuationError> {
        if den.is_zero() {
            return Err(ValuationError::ZeroDenominator);
        }
        let vd = match self.val(den)? {
            Value::Finite(x) => x,
            Value::Infinity => unreachable!("nonzero polynomial has finite value"),
        };
        Ok(self.val(num)?.sub(&vd))
    }

    /// All values `(v(m) - v(pi)) / p^j` with `0 <= j <= depth` and `m` a
    /// monomial in the given generators, clipped to the window
    /// `[-v(pi), 0]`; sorted ascending and deduplicated.
    ///
    /// Since the window forces `v(m) <= v(pi)` and every generator has
    /// non-negative value, the enumeration is finite; generators of value 0
    /// contribute nothing new and are skipped.
    pub fn value_window(
        &self,
        pi: &PuiseuxPoly,
        generators: &[PuiseuxPoly],
        depth: u32,
    ) -> Result<Vec<Rat>, ValuationError> {
        let v_pi = match self.val(pi)? {
            Value::Finite(x) if x > Rat::zero() => x,
            _ => return Err(ValuationError::NonpositivePi),
        };
        let mut gen_vals = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            match self.val(g)? {
                Value::Finite(x) => {
                    if x < Rat::zero() {
                        return Err(ValuationError::NegativeGenerator(i));
                    }
                    if x > Rat::zero() && x <= v_pi {
                        gen_vals.push(x);
                    }
                }
                Value::Infinity => {}
            }
        }
        // Depth-first enumeration of monoid sums <= v(pi).
        let mut sums: Vec<Rat> = Vec::new();
        let mut stack: Vec<(usize, Rat)> = alloc::vec![(0, Rat::zero())];
        while let Some((start, acc)) = stack.pop() {
            sums.push(acc.clone());
            for (i, g) in gen_vals.iter().enumerate().skip(start) {
                let next = &acc + g;
                if next <= v_pi {
                    stack.push((i, next));
                }
            }
        }
        let mut out: Vec<Rat> = Vec::new();
        let p = pi.p();
        for j in 0..=depth {
            for x in &sums {
                out.push(div_p_pow(&(x - &v_pi), p, j));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
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

    fn v(weights: &[(i64, i64)]) -> ToricValuation {
        ToricValuation::new(weights.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn single_monomial_values() {
        let val = v(&[(4, 1), (3, 1)]);
        let s = mono(5, 2, &[(1, 1), (0, 1)]);
        let t = mono(5, 2, &[(0, 1), (1, 1)]);
        let st2 = mono(5, 2, &[(1, 1), (2, 1)]);
        assert_eq!(val.val(&s).unwrap(), Value::Finite(rint(4)));
        assert_eq!(val.val(&t).unwrap(), Value::Finite(rint(3)));
        assert_eq!(val.val(&st2).unwrap(), Value::Finite(rint(10)));
        assert_eq!(
            val.val(&PuiseuxPoly::zero(5, 2)).unwrap(),
            Value::Infinity
        );
    }

    #[test]
    fn fraction_subtracts() {
        let val = v(&[(9, 1), (3, 1)]);
        let t = mono(3, 2, &[(0, 1), (1, 1)]);
        let s = mono(3, 2, &[(1, 1), (0, 1)]);
        assert_eq!(val.val_fraction(&t, &s).unwrap(), Value::Finite(rint(-6)));
        assert_eq!(
            val.val_fraction(&t, &PuiseuxPoly::zero(3, 2)).unwrap_err(),
            ValuationError::ZeroDenominator
        );
    }

    #[test]
    fn rejects_bad_weights_and_dimensions() {
        assert_eq!(
            ToricValuation::new(alloc::vec![rint(1), rint(0)]).unwrap_err(),
            ValuationError::NonpositiveWeight(1)
        );
        let val = v(&[(1, 1)]);
        let f = mono(3, 2, &[(1, 1), (0, 1)]);
        assert!(matches!(
            val.val(&f),
            Err(ValuationError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn window_depth_zero_examples() {
        let val = v(&[(1, 1), (1, 1)]);
        let s = mono(2, 2, &[(1, 1), (0, 1)]);
        let t = mono(2, 2, &[(0, 1), (1, 1)]);
        let gens = [s.clone(), t.clone()];

        // pi = s: values a+b-1 in [-1, 0] => {-1, 0}
        let w = val.value_window(&s, &gens, 0).unwrap();
        assert_eq!(w, alloc::vec![rint(-1), rint(0)]);

        // pi = s^2: a+b-2 clipped => {-2, -1, 0}
        let s2 = mono(2, 2, &[(2, 1), (0, 1)]);
        let w = val.value_window(&s2, &gens, 0).unwrap();
        assert_eq!(w, alloc::vec![rint(-2), rint(-1), rint(0)]);
    }

    #[test]
    fn window_depth_one_includes_half() {
        let val = v(&[(1, 1), (1, 1)]);
        let s = mono(2, 2, &[(1, 1), (0, 1)]);
        let t = mono(2, 2, &[(0, 1), (1, 1)]);
        let w = val.value_window(&s, &[s.clone(), t], 1).unwrap();
        assert!(w.contains(&rat(-1, 2))); // (s^(1/2))/s at depth 1
        assert_eq!(w, alloc::vec![rint(-1), rat(-1, 2), rint(0)]);
    }

    #[test]
    fn window_error_paths() {
        let val = v(&[(1, 1), (1, 1)]);
        let s = mono(2, 2, &[(1, 1), (0, 1)]);
        let inv = mono(2, 2, &[(-1, 1), (0, 1)]);
        assert_eq!(
            val.value_window(&PuiseuxPoly::one(2, 2), &[s.clone()], 0)
                .unwrap_err(),
            ValuationError::NonpositivePi
        );
        assert_eq!(
            val.value_window(&s, &[inv], 0).unwrap_err(),
            ValuationError::NegativeGenerator(0)
        );
    }

    fn random_poly(rng: &mut impl Rng, p: u64, e: usize) -> PuiseuxPoly {
        let mut out = PuiseuxPoly::zero(p, e);
        for _ in 0..rng.gen_range(1..5) {
            let exps: Vec<Rat> = (0..e)
                .map(|_| {
                    let depth: u32 = rng.gen_range(0..2);
                    rat(rng.gen_range(-5..=5), (p as i64).pow(depth))
                })
                .collect();
            out = out
                .add(&PuiseuxPoly::monomial(p, e, rng.gen_range(1..p), exps).unwrap())
                .unwrap();
        }
        out
    }

    #[test]
    fn multiplicative_on_polynomials() {
        // With generic (Q-linearly independent enough) weights no two
        // distinct monomials share a value, so the minimum never cancels.
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xA11);
        let val = v(&[(1, 1), (355, 113)]);
        for p in [2u64, 3, 5] {
            for _ in 0..334 {
                let f = random_poly(&mut rng, p, 2);
                let g = random_poly(&mut rng, p, 2);
                if f.is_zero() || g.is_zero() {
                    continue;
                }
                let lhs = val.val(&f.mul(&g).unwrap()).unwrap();
                let rhs = val.val(&f).unwrap().add(&val.val(&g).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn submultiplicative_with_dependent_weights() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xA12);
        let val = v(&[(1, 1), (1, 1)]);
        for _ in 0..300 {
            let f = random_poly(&mut rng, 3, 2);
            let g = random_poly(&mut rng, 3, 2);
            let lhs = val.val(&f.mul(&g).unwrap()).unwrap();
            let rhs = val.val(&f).unwrap().add(&val.val(&g).unwrap());
            assert!(lhs >= rhs);
        }
    }

    #[test]
    fn ultrametric_inequality() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xA13);
        let val = v(&[(2, 1), (3, 1)]);
        for _ in 0..500 {
            let f = random_poly(&mut rng, 3, 2);
            let g = random_poly(&mut rng, 3, 2);
            let vf = val.val(&f).unwrap();
            let vg = val.val(&g).unwrap();
            let vsum = val.val(&f.add(&g).unwrap()).unwrap();
            let min = vf.clone().min(vg.clone());
            assert!(vsum >= min);
            if vf != vg {
                assert_eq!(vsum, min);
            }
        }
    }

    #[test]
    fn window_contains_every_enumerated_monomial_value() {
        // Spot brute force: enumerate small monomials directly and check
        // membership of the clipped values.
        let val = v(&[(1, 1), (2, 1)]);
        let p = 3u64;
        let s = mono(p, 2, &[(1, 1), (0, 1)]);
        let t = mono(p, 2, &[(0, 1), (1, 1)]);
        let pi = mono(p, 2, &[(2, 1), (0, 1)]); // v(pi) = 2
        let w = val.value_window(&pi, &[s, t], 1).unwrap();
        for a in 0..=4i64 {
            for b in 0..=2i64 {
                for j in 0..=1u32 {
                    let value = div_p_pow(&(rint(a) + rint(2 * b) - rint(2)), p, j);
                    if value >= rint(-2) && value <= rint(0) {
                        assert!(w.contains(&value), "missing {value}");
                    }
                }
            }
        }
        // sorted and finite
        let mut sorted = w.clone();
        sorted.sort();
        assert_eq!(w, sorted);
    }
}
