//! Piecewise-affine lower envelopes of finite line families.
//!
//! A [`Polygon`] is the pointwise minimum of finitely many affine functions
//! on a parameter interval, stored as maximal pieces with strictly
//! decreasing slopes (a pointwise minimum of lines is concave). Everything
//! is exact rational arithmetic; crossings are solved, never approximated.
//!
//! On top of the envelope primitive the module builds the complete
//! valuation polygon of a univariate polynomial (whose break slope-changes
//! count roots by value), the polygon of a polynomial along a Gauss path,
//! and the branchwise stabilized polygon of a fiber series along an affine
//! weight path.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::perfring::PuiseuxPoly;
use crate::rat::{div_p_pow, Rat};
use crate::series::FiberSeries;
use crate::valuation::{ToricValuation, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolygonError {
    /// envelope of an empty family.
    EmptyFamily,
    /// Degenerate interval (hi <= lo or both ends infinite on one side).
    BadInterval,
    /// A scale factor that is not strictly positive.
    NonpositiveScale,
    /// All coefficient values infinite in a valuation polygon.
    AllInfinite,
    /// Weight path leaves the positive orthant on the interval.
    WeightsNonpositive,
    /// Mismatched dimensions between weights and exponents.
    DimensionMismatch,
}

impl fmt::Display for PolygonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolygonError::EmptyFamily => write!(f, "empty line family"),
            PolygonError::BadInterval => write!(f, "degenerate interval"),
            PolygonError::NonpositiveScale => write!(f, "scale factor must be positive"),
            PolygonError::AllInfinite => write!(f, "no finite coefficient values"),
            PolygonError::WeightsNonpositive => {
                write!(f, "weights not strictly positive on the interval")
            }
            PolygonError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

/// Affine function `s -> intercept + slope * s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub intercept: Rat,
    pub slope: Rat,
}

impl Line {
    pub fn new(intercept: Rat, slope: Rat) -> Self {
        Line { intercept, slope }
    }

    pub fn at(&self, s: &Rat) -> Rat {
        &self.intercept + &self.slope * s
    }
}

/// An interval endpoint; infinite endpoints carry the adjacent piece's line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        use Bound::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// One maximal affine piece of a polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Bound,
    pub end: Bound,
    pub line: Line,
}

/// A breakpoint between two pieces: parameter, value, and the (positive)
/// drop in slope across it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakPoint {
    pub s: Rat,
    pub value: Rat,
    pub slope_drop: Rat,
}

/// Pointwise minimum of a finite line family on an interval: continuous,
/// piecewise affine, with strictly decreasing slopes left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pieces: Vec<Piece>,
}

impl Polygon {
    /// Lower envelope of the family on `[lo, hi]`. Lines of equal slope are
    /// collapsed to the lowest intercept (first wins ties), so pieces are
    /// maximal.
    pub fn envelope(lines: &[Line], lo: Bound, hi: Bound) -> Result<Polygon, PolygonError> {
        if lines.is_empty() {
            return Err(PolygonError::EmptyFamily);
        }
        if lo >= hi {
            return Err(PolygonError::BadInterval);
        }
        // Deduplicate by slope, keeping the lowest intercept.
        let mut dedup: Vec<Line> = Vec::new();
        let mut sorted: Vec<&Line> = lines.iter().collect();
        sorted.sort_by(|a, b| b.slope.cmp(&a.slope).then(a.intercept.cmp(&b.intercept)));
        for line in sorted {
            match dedup.last() {
                Some(last) if last.slope == line.slope => {}
                _ => dedup.push(line.clone()),
            }
        }
        // Sweep in decreasing slope order; stack of (line, start of its piece).
        let mut stack: Vec<(Line, Bound)> = Vec::new();
        for line in dedup {
            let mut start = Bound::NegInf;
            while let Some((top, top_start)) = stack.last() {
                // top.slope > line.slope: line is below top for s > crossing.
                let crossing =
                    (&line.intercept - &top.intercept) / (&top.slope - &line.slope);
                if Bound::Finite(crossing.clone()) <= *top_start {
                    stack.pop();
                } else {
                    start = Bound::Finite(crossing);
                    break;
                }
            }
            stack.push((line, start));
        }
        // Assemble pieces over the whole line, then clip to [lo, hi].
        let mut pieces = Vec::new();
        for (i, (line, start)) in stack.iter().enumerate() {
            let end = stack
                .get(i + 1)
                .map(|(_, s)| s.clone())
                .unwrap_or(Bound::PosInf);
            pieces.push(Piece {
                start: start.clone(),
                end,
                line: line.clone(),
            });
        }
        let mut clipped = Vec::new();
        for piece in pieces {
            let start = piece.start.clone().max(lo.clone());
            let end = piece.end.clone().min(hi.clone());
            if start < end {
                clipped.push(Piece {
                    start,
                    end,
                    line: piece.line,
                });
            }
        }
        debug_assert!(!clipped.is_empty());
        Ok(Polygon { pieces: clipped })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn lo(&self) -> &Bound {
        &self.pieces.first().expect("nonempty").start
    }

    pub fn hi(&self) -> &Bound {
        &self.pieces.last().expect("nonempty").end
    }

    /// The interior breakpoints with their slope drops.
    pub fn breaks(&self) -> Vec<BreakPoint> {
        let mut out = Vec::new();
        for w in self.pieces.windows(2) {
            let s = w[0]
                .end
                .finite()
                .expect("interior boundary is finite")
                .clone();
            out.push(BreakPoint {
                value: w[0].line.at(&s),
                slope_drop: &w[0].line.slope - &w[1].line.slope,
                s,
            });
        }
        out
    }

    /// Value at a parameter inside the interval.
    pub fn value_at(&self, s: &Rat) -> Rat {
        for piece in &self.pieces {
            let after_start = match &piece.start {
                Bound::NegInf => true,
                Bound::Finite(x) => s >= x,
                Bound::PosInf => false,
            };
            let before_end = match &piece.end {
                Bound::PosInf => true,
                Bound::Finite(x) => s <= x,
                Bound::NegInf => false,
            };
            if after_start && before_end {
                return piece.line.at(s);
            }
        }
        panic!("parameter outside the polygon interval");
    }

    /// The distinct lines supporting the pieces, left to right.
    pub fn lines(&self) -> Vec<Line> {
        self.pieces.iter().map(|p| p.line.clone()).collect()
    }

    /// Pointwise minimum with the zero line.
    pub fn min_with_zero(&self) -> Polygon {
        let mut lines = self.lines();
        lines.push(Line::new(Rat::zero(), Rat::zero()));
        Polygon::envelope(&lines, self.lo().clone(), self.hi().clone())
            .expect("nonempty family on a valid interval")
    }

    /// Values and slopes multiplied by a positive factor (parameter axis
    /// unchanged). Used for the `p^-k` scalings of line families.
    pub fn scale(&self, factor: &Rat) -> Result<Polygon, PolygonError> {
        if *factor <= Rat::zero() {
            return Err(PolygonError::NonpositiveScale);
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                start: p.start.clone(),
                end: p.end.clone(),
                line: Line::new(&p.line.intercept * factor, &p.line.slope * factor),
            })
            .collect();
        Ok(Polygon { pieces })
    }

    /// Slope of the last piece.
    pub fn terminal_slope(&self) -> &Rat {
        &self.pieces.last().expect("nonempty").line.slope
    }

    /// Structural checks: continuity at boundaries and strictly decreasing
    /// slopes. Used by tests and the verification suites.
    pub fn check_geometry(&self) -> bool {
        if self.pieces.is_empty() {
            return false;
        }
        for w in self.pieces.windows(2) {
            if w[0].line.slope <= w[1].line.slope {
                return false;
            }
            match (&w[0].end, &w[1].start) {
                (Bound::Finite(a), Bound::Finite(b)) => {
                    if a != b || w[0].line.at(a) != w[1].line.at(b) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

/// The complete valuation polygon of a univariate polynomial with
/// coefficient values `coeff_vals[i] = v(a_i)`: the function
/// `a -> min_i { v(a_i) + i * a }` on the whole real line. Breaks carry the
/// slope-change integers that count roots by value.
pub fn complete_valuation_polygon(coeff_vals: &[Value]) -> Result<Polygon, PolygonError> {
    let lines: Vec<Line> = coeff_vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            v.finite()
                .map(|x| Line::new(x.clone(), Rat::from_integer((i as i64).into())))
        })
        .collect();
    if lines.is_empty() {
        return Err(PolygonError::AllInfinite);
    }
    Polygon::envelope(&lines, Bound::NegInf, Bound::PosInf)
}

/// The polygon of `f = sum c_i t^i` along the Gauss path based at `v0`:
/// `s -> min_i { v0(c_i) + i * s }` on `[0, hi]`. Recentering at a point
/// `omega` is the caller's job (shift the polynomial first).
pub fn gauss_path_polygon(
    coeffs: &[PuiseuxPoly],
    v0: &ToricValuation,
    hi: Bound,
) -> Result<Polygon, PolygonError> {
    let mut lines = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let v = v0.val(c).map_err(|_| PolygonError::DimensionMismatch)?;
        if let Some(x) = v.finite() {
            lines.push(Line::new(x.clone(), Rat::from_integer((i as i64).into())));
        }
    }
    if lines.is_empty() {
        return Err(PolygonError::AllInfinite);
    }
    Polygon::envelope(&lines, Bound::Finite(Rat::zero()), hi)
}

/// The stabilized branchwise polygon of `f` along the affine weight path
/// `U(s) = u0 + s * direction` on `[lo, hi]`, clipped at zero: the envelope
/// over every branch `n` and every monomial of the branch's full-depth
/// Frobenius section of the line `s -> <U(s), exponent>`, together with the
/// zero line. Exact because truncation makes every branch finite.
pub fn npinf_polygon(
    f: &FiberSeries,
    u0: &[Rat],
    direction: &[Rat],
    lo: Rat,
    hi: Bound,
) -> Result<Polygon, PolygonError> {
    if u0.len() != f.e() || direction.len() != f.e() {
        return Err(PolygonError::DimensionMismatch);
    }
    // Positivity of every weight on the whole interval.
    let positive_at = |s: &Rat| -> bool {
        u0.iter()
            .zip(direction)
            .all(|(u, d)| &(u + d * s) > &Rat::zero())
    };
    if !positive_at(&lo) {
        return Err(PolygonError::WeightsNonpositive);
    }
    match &hi {
        Bound::Finite(s) => {
            if !positive_at(s) {
                return Err(PolygonError::WeightsNonpositive);
            }
        }
        Bound::PosInf => {
            if direction.iter().any(|d| d < &Rat::zero()) {
                return Err(PolygonError::WeightsNonpositive);
            }
        }
        Bound::NegInf => return Err(PolygonError::BadInterval),
    }
    let mut lines = alloc::vec![Line::new(Rat::zero(), Rat::zero())];
    for branch in f.lambda_decompose() {
        let section = f.frobenius_section(&branch.n, branch.max_depth());
        for (k, _) in section.terms() {
            let mut intercept = Rat::zero();
            let mut slope = Rat::zero();
            for (x, (u, dir)) in k.0.iter().zip(u0.iter().zip(direction)) {
                intercept += x * u;
                slope += x * dir;
            }
            lines.push(Line::new(intercept, slope));
        }
    }
    Polygon::envelope(&lines, Bound::Finite(lo), hi)
}

/// Scaled copies `p^-k * L` of a polygon's line family enter the stabilized
/// polygons; provided as a helper for family constructions.
pub fn scale_lines(lines: &[Line], p: u64, k: u32) -> Vec<Line> {
    lines
        .iter()
        .map(|l| {
            Line::new(
                div_p_pow(&l.intercept, p, k),
                div_p_pow(&l.slope, p, k),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};
    use crate::valuation::Value;

    fn line(i: i64, s: i64) -> Line {
        Line::new(rint(i), rint(s))
    }

    #[test]
    fn single_line_is_one_piece() {
        let poly = Polygon::envelope(&[line(2, 1)], Bound::Finite(rint(0)), Bound::PosInf)
            .unwrap();
        assert_eq!(poly.pieces().len(), 1);
        assert_eq!(poly.terminal_slope(), &rint(1));
        assert!(poly.breaks().is_empty());
        assert!(poly.check_geometry());
    }

    #[test]
    fn two_lines_cross_at_one() {
        // {y = 0, y = -1 + s} on [0, inf): -1+s on [0,1], 0 afterwards.
        let poly = Polygon::envelope(
            &[line(0, 0), line(-1, 1)],
            Bound::Finite(rint(0)),
            Bound::PosInf,
        )
        .unwrap();
        assert_eq!(poly.pieces().len(), 2);
        assert_eq!(poly.pieces()[0].line, line(-1, 1));
        assert_eq!(poly.pieces()[1].line, line(0, 0));
        let breaks = poly.breaks();
        assert_eq!(breaks.len(), 1);
        assert_eq!(breaks[0].s, rint(1));
        assert_eq!(breaks[0].value, rint(0));
        assert_eq!(breaks[0].slope_drop, rint(1));
        assert!(poly.check_geometry());
    }

    #[test]
    fn dominated_line_is_absent() {
        let poly = Polygon::envelope(
            &[line(0, 0), line(5, 0), line(-1, 1)],
            Bound::Finite(rint(0)),
            Bound::PosInf,
        )
        .unwrap();
        assert!(poly.lines().iter().all(|l| l != &line(5, 0)));
        assert_eq!(poly.pieces().len(), 2);
    }

    #[test]
    fn envelope_is_below_every_line_and_touches_survivors() {
        let family = [line(0, 0), line(-3, 2), line(1, -1), line(-1, 1)];
        let poly =
            Polygon::envelope(&family, Bound::Finite(rint(-10)), Bound::Finite(rint(10)))
                .unwrap();
        assert!(poly.check_geometry());
        // sample at midpoints of each piece: value equals min of the family
        for piece in poly.pieces() {
            let (a, b) = (piece.start.finite().unwrap(), piece.end.finite().unwrap());
            let mid = (a + b) / rint(2);
            let min = family.iter().map(|l| l.at(&mid)).min().unwrap();
            assert_eq!(poly.value_at(&mid), min);
        }
    }

    #[test]
    fn parallel_lines_keep_lowest_intercept() {
        let poly = Polygon::envelope(
            &[line(3, 1), line(2, 1), line(7, 1)],
            Bound::Finite(rint(0)),
            Bound::PosInf,
        )
        .unwrap();
        assert_eq!(poly.pieces().len(), 1);
        assert_eq!(poly.pieces()[0].line, line(2, 1));
    }

    #[test]
    fn empty_family_and_bad_interval_error() {
        assert_eq!(
            Polygon::envelope(&[], Bound::NegInf, Bound::PosInf).unwrap_err(),
            PolygonError::EmptyFamily
        );
        assert_eq!(
            Polygon::envelope(&[line(0, 0)], Bound::Finite(rint(1)), Bound::Finite(rint(1)))
                .unwrap_err(),
            PolygonError::BadInterval
        );
    }

    #[test]
    fn min_with_zero_clips() {
        let poly = Polygon::envelope(&[line(-2, 1)], Bound::Finite(rint(0)), Bound::PosInf)
            .unwrap();
        let clipped = poly.min_with_zero();
        assert_eq!(clipped.value_at(&rint(0)), rint(-2));
        assert_eq!(clipped.value_at(&rint(2)), rint(0));
        assert_eq!(clipped.value_at(&rint(5)), rint(0));
        assert_eq!(clipped.terminal_slope(), &rint(0));
    }

    #[test]
    fn scale_multiplies_values_and_slopes() {
        let poly = Polygon::envelope(
            &[line(0, 0), line(-1, 1)],
            Bound::Finite(rint(0)),
            Bound::PosInf,
        )
        .unwrap();
        let scaled = poly.scale(&rat(1, 2)).unwrap();
        assert_eq!(scaled.value_at(&rint(0)), rat(-1, 2));
        assert_eq!(scaled.pieces()[0].line.slope, rat(1, 2));
        // parameter axis unchanged: the break stays at s = 1
        assert_eq!(scaled.breaks()[0].s, rint(1));
        assert!(Polygon::envelope(&[line(0, 0)], Bound::NegInf, Bound::PosInf)
            .unwrap()
            .scale(&rint(0))
            .is_err());
    }

    #[test]
    fn valuation_polygon_of_linear_factor() {
        // P = X - alpha with v(alpha) = r: single break at a = r, change 1.
        let r = rat(3, 2);
        let poly =
            complete_valuation_polygon(&[Value::Finite(r.clone()), Value::Finite(rint(0))])
                .unwrap();
        let breaks = poly.breaks();
        assert_eq!(breaks.len(), 1);
        assert_eq!(breaks[0].s, r);
        assert_eq!(breaks[0].slope_drop, rint(1));
    }

    #[test]
    fn valuation_polygon_of_constant_is_flat() {
        let poly = complete_valuation_polygon(&[Value::Finite(rint(2))]).unwrap();
        assert!(poly.breaks().is_empty());
        assert_eq!(poly.terminal_slope(), &rint(0));
        assert_eq!(
            complete_valuation_polygon(&[Value::Infinity]).unwrap_err(),
            PolygonError::AllInfinite
        );
    }

    #[test]
    fn valuation_polygon_counts_roots_with_multiplicity() {
        // P = prod (X - alpha_i), v(alpha_i) = {0, 0, 2} over F_p(s):
        // multiply out with alpha_i monomials and read off coefficient
        // values exactly, then compare against the root multiset.
        use crate::perfring::PuiseuxPoly;
        use crate::valuation::ToricValuation;
        let p = 5;
        let v = ToricValuation::new(alloc::vec![rint(1)]).unwrap();
        // alpha = 1, 2 (value 0), s^2 (value 2)
        let a0 = PuiseuxPoly::constant(p, 1, 1);
        let a1 = PuiseuxPoly::constant(p, 1, 2);
        let a2 = PuiseuxPoly::monomial(p, 1, 1, alloc::vec![rint(2)]).unwrap();
        // coefficients of prod (X - alpha_i): elementary symmetric sums
        let e1 = a0.add(&a1).unwrap().add(&a2).unwrap();
        let e2 = a0
            .mul(&a1)
            .unwrap()
            .add(&a0.mul(&a2).unwrap())
            .unwrap()
            .add(&a1.mul(&a2).unwrap())
            .unwrap();
        let e3 = a0.mul(&a1).unwrap().mul(&a2).unwrap();
        let coeffs = [
            e3.neg(), // -e3 ... signs do not affect values
            e2,
            e1.neg(),
            PuiseuxPoly::one(p, 1),
        ];
        let vals: Vec<Value> = coeffs.iter().map(|c| v.val(c).unwrap()).collect();
        let poly = complete_valuation_polygon(&vals).unwrap();
        let breaks = poly.breaks();
        assert_eq!(breaks.len(), 2);
        assert_eq!((breaks[0].s.clone(), breaks[0].slope_drop.clone()), (rint(0), rint(2)));
        assert_eq!((breaks[1].s.clone(), breaks[1].slope_drop.clone()), (rint(2), rint(1)));
    }

    #[test]
    fn gauss_path_examples() {
        use crate::perfring::PuiseuxPoly;
        use crate::valuation::ToricValuation;
        let p = 3;
        let v0 = ToricValuation::new(alloc::vec![rint(1)]).unwrap();
        let s = PuiseuxPoly::monomial(p, 1, 1, alloc::vec![rint(1)]).unwrap();
        let zero = PuiseuxPoly::zero(p, 1);
        let one = PuiseuxPoly::one(p, 1);

        // f = t: a single slope-1 line through 0
        let poly = gauss_path_polygon(&[zero.clone(), one.clone()], &v0, Bound::PosInf).unwrap();
        assert_eq!(poly.pieces().len(), 1);
        assert_eq!(poly.pieces()[0].line, Line::new(rint(0), rint(1)));

        // f = s + t: slope 1 until 1, then constant 1
        let poly = gauss_path_polygon(&[s.clone(), one.clone()], &v0, Bound::PosInf).unwrap();
        assert_eq!(poly.breaks().len(), 1);
        assert_eq!(poly.breaks()[0].s, rint(1));
        assert_eq!(poly.terminal_slope(), &rint(0));

        // f = s*t + t^2: envelope of {1 + r, 2r}: slope 2 on [0,1], then 1
        let poly =
            gauss_path_polygon(&[zero, s.clone(), one.clone()], &v0, Bound::PosInf).unwrap();
        assert_eq!(poly.pieces()[0].line.slope, rint(2));
        assert_eq!(poly.pieces()[1].line.slope, rint(1));
        assert_eq!(poly.breaks()[0].s, rint(1));
    }

    #[test]
    fn npinf_polygon_of_intro_series() {
        use crate::perfring::PuiseuxPoly;
        use crate::series::FiberSeries;
        // h = x^3/s + t x/s (p = 3). Branch 1 full section: t/s + s^(-1/3).
        // Along U(tau) = (9, 3) + tau*(0, 1) (pi = s is off the t axis):
        //   t/s monomial: intercept 3 - 9 = -6, slope 1
        //   s^(-1/3): intercept -3, slope 0
        // plus the zero line: -6+tau until tau = 3, then constant -3.
        let p = 3;
        let s = PuiseuxPoly::monomial(p, 2, 1, alloc::vec![rint(1), rint(0)]).unwrap();
        let t = PuiseuxPoly::monomial(p, 2, 1, alloc::vec![rint(0), rint(1)]).unwrap();
        let f = FiberSeries::new(
            p,
            2,
            1,
            9,
            [
                (alloc::vec![3], PuiseuxPoly::one(p, 2)),
                (alloc::vec![1], t),
            ],
            s,
        )
        .unwrap();
        let poly = npinf_polygon(
            &f,
            &[rint(9), rint(3)],
            &[rint(0), rint(1)],
            rint(0),
            Bound::PosInf,
        )
        .unwrap();
        assert!(poly.check_geometry());
        assert_eq!(poly.value_at(&rint(0)), rint(-6));
        assert_eq!(poly.value_at(&rint(3)), rint(-3));
        assert_eq!(poly.value_at(&rint(100)), rint(-3));
        assert_eq!(poly.terminal_slope(), &rint(0));
        let breaks = poly.breaks();
        assert_eq!(breaks.len(), 1);
        assert_eq!(breaks[0].s, rint(3));
    }

    #[test]
    fn npinf_polygon_weight_positivity() {
        use crate::series::FiberSeries;
        let f = FiberSeries::zero(2, 1, 1, 4);
        assert_eq!(
            npinf_polygon(&f, &[rint(1)], &[rint(-1)], rint(0), Bound::PosInf).unwrap_err(),
            PolygonError::WeightsNonpositive
        );
        assert_eq!(
            npinf_polygon(&f, &[rint(1)], &[rint(-1)], rint(0), Bound::Finite(rint(2)))
                .unwrap_err(),
            PolygonError::WeightsNonpositive
        );
        // decreasing but positive on a finite interval is fine
        assert!(npinf_polygon(
            &f,
            &[rint(2)],
            &[rint(-1)],
            rint(0),
            Bound::Finite(rint(1))
        )
        .is_ok());
    }

    #[test]
    fn scaled_lines_helper() {
        let scaled = scale_lines(&[line(-4, 2)], 2, 1);
        assert_eq!(scaled, alloc::vec![Line::new(rint(-2), rint(1))]);
    }
}
