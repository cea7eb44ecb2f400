use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ratpi::RationalPi;

/// A finite union of half-open intervals `[a, b)` with rational-π endpoints,
/// kept in canonical form: endpoints exact, intervals disjoint, sorted, and
/// adjacent touching intervals merged. Canonical form is unique, so `==` is
/// set equality.
///
/// Intervals are half-open by convention; every almost-everywhere statement
/// in the crate is insensitive to the measure-zero difference against closed
/// intervals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencySet {
    ivs: Vec<(RationalPi, RationalPi)>,
}

/// Set operations accepted by [`set_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

impl FrequencySet {
    pub fn empty() -> Self {
        FrequencySet { ivs: Vec::new() }
    }

    /// Build from raw intervals; overlapping or touching inputs are unioned.
    /// Empty or reversed intervals (`a >= b`) are rejected.
    pub fn from_intervals<I>(ivs: I) -> Result<Self, super::TorusError>
    where
        I: IntoIterator<Item = (RationalPi, RationalPi)>,
    {
        let mut v: Vec<(RationalPi, RationalPi)> = Vec::new();
        for (a, b) in ivs {
            if a >= b {
                return Err(super::TorusError::EmptyInterval(
                    a.to_string(),
                    b.to_string(),
                ));
            }
            v.push((a, b));
        }
        v.sort();
        let mut merged: Vec<(RationalPi, RationalPi)> = Vec::new();
        for (a, b) in v {
            match merged.last_mut() {
                Some((_, hi)) if a <= *hi => {
                    if b > *hi {
                        *hi = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        Ok(FrequencySet { ivs: merged })
    }

    /// Single interval `[a, b)`.
    pub fn interval(a: RationalPi, b: RationalPi) -> Self {
        Self::from_intervals([(a, b)]).expect("nonempty interval")
    }

    /// The set together with its reflection through 0 (`S ∪ (−S)`).
    pub fn symmetrized(&self) -> Self {
        self.union(&self.affine_image(&BigRational::from_integer(BigInt::from(-1)), &RationalPi::zero()))
    }

    pub fn intervals(&self) -> &[(RationalPi, RationalPi)] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn contains(&self, x: &RationalPi) -> bool {
        self.ivs.iter().any(|(a, b)| a <= x && x < b)
    }

    /// Total measure `Σ (b − a)`, exact.
    pub fn measure(&self) -> RationalPi {
        self.ivs
            .iter()
            .fold(RationalPi::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// `inf { |x| : x ∈ S }`, exact; `None` for the empty set.
    pub fn inf_abs(&self) -> Option<RationalPi> {
        self.ivs
            .iter()
            .map(|(a, b)| {
                if !a.is_negative() {
                    a.clone()
                } else if !b.ratio().is_positive() {
                    b.abs()
                } else {
                    RationalPi::zero()
                }
            })
            .min()
    }

    /// `sup { |x| : x ∈ S }` (closure bound), exact; `None` for the empty set.
    pub fn sup_abs(&self) -> Option<RationalPi> {
        self.ivs
            .iter()
            .map(|(a, b)| a.abs().max(b.abs()))
            .max()
    }

    pub fn union(&self, other: &FrequencySet) -> FrequencySet {
        self.boolean(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &FrequencySet) -> FrequencySet {
        self.boolean(other, SetOp::Intersect)
    }

    pub fn difference(&self, other: &FrequencySet) -> FrequencySet {
        self.boolean(other, SetOp::Difference)
    }

    /// Image under `x ↦ scale·x + shift` with nonzero rational `scale`.
    /// A negative scale maps `[a, b)` onto `(scale·b, scale·a]`, which is
    /// stored as the almost-everywhere-equal half-open `[scale·b, scale·a)`.
    pub fn affine_image(&self, scale: &BigRational, shift: &RationalPi) -> FrequencySet {
        assert!(!scale.is_zero(), "affine_image requires nonzero scale");
        let ivs = self.ivs.iter().map(|(a, b)| {
            let ia = a.scale(scale) + shift.clone();
            let ib = b.scale(scale) + shift.clone();
            if scale.is_positive() {
                (ia, ib)
            } else {
                (ib, ia)
            }
        });
        FrequencySet::from_intervals(ivs).expect("affine image of canonical set")
    }

    /// Linear sweep computing any of the three boolean operations.
    fn boolean(&self, other: &FrequencySet, op: SetOp) -> FrequencySet {
        // Event sweep over all endpoints; inside-ness of each operand flips
        // at its endpoints.
        let mut events: Vec<&RationalPi> = Vec::new();
        for (a, b) in &self.ivs {
            events.push(a);
            events.push(b);
        }
        for (a, b) in &other.ivs {
            events.push(a);
            events.push(b);
        }
        events.sort();
        events.dedup();

        let keep = |in_a: bool, in_b: bool| match op {
            SetOp::Union => in_a || in_b,
            SetOp::Intersect => in_a && in_b,
            SetOp::Difference => in_a && !in_b,
        };

        let mut out: Vec<(RationalPi, RationalPi)> = Vec::new();
        for w in events.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if keep(self.contains(lo), other.contains(lo)) {
                match out.last_mut() {
                    Some((_, end)) if end == lo => *end = hi.clone(),
                    _ => out.push((lo.clone(), hi.clone())),
                }
            }
        }
        FrequencySet { ivs: out }
    }
}

/// Free-function form of the boolean set operations.
pub fn set_combine(op: SetOp, a: &FrequencySet, b: &FrequencySet) -> FrequencySet {
    a.boolean(b, op)
}

impl fmt::Display for FrequencySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ivs.is_empty() {
            return write!(f, "∅");
        }
        for (i, (a, b)) in self.ivs.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{}π, {}π)", a, b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(an: i64, ad: i64, bn: i64, bd: i64) -> FrequencySet {
        FrequencySet::interval(RationalPi::new(an, ad), RationalPi::new(bn, bd))
    }

    #[test]
    fn union_merges_adjacent() {
        // [0,π) ∪ [π,2π) = [0,2π)
        let u = iv(0, 1, 1, 1).union(&iv(1, 1, 2, 1));
        assert_eq!(u, iv(0, 1, 2, 1));
    }

    #[test]
    fn intersect_overlap() {
        // [4π/7,π) ∩ [6π/7,8π/7) = [6π/7,π)
        let i = iv(4, 7, 1, 1).intersect(&iv(6, 7, 8, 7));
        assert_eq!(i, iv(6, 7, 1, 1));
    }

    #[test]
    fn difference_splits() {
        // [−π,π) \ [−2π/7,2π/7) = [−π,−2π/7) ∪ [2π/7,π)
        let d = iv(-1, 1, 1, 1).difference(&iv(-2, 7, 2, 7));
        let expect = FrequencySet::from_intervals([
            (RationalPi::new(-1, 1), RationalPi::new(-2, 7)),
            (RationalPi::new(2, 7), RationalPi::new(1, 1)),
        ])
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn affine_images() {
        // [π/2,π) scaled by 2 → [π,2π)
        let two = BigRational::from_integer(2.into());
        assert_eq!(iv(1, 2, 1, 1).affine_image(&two, &RationalPi::zero()), iv(1, 1, 2, 1));
        // [4π,32π/7) scaled by 1/4 → [π,8π/7)
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(iv(4, 1, 32, 7).affine_image(&quarter, &RationalPi::zero()), iv(1, 1, 8, 7));
        // [0,π) scaled by −1 → [−π,0) under the right-endpoint policy
        let neg = BigRational::from_integer(BigInt::from(-1));
        assert_eq!(iv(0, 1, 1, 1).affine_image(&neg, &RationalPi::zero()), iv(-1, 1, 0, 1));
    }

    #[test]
    fn measure_additivity() {
        let a = iv(0, 1, 1, 1);
        let b = iv(1, 2, 3, 2);
        let lhs = a.union(&b).measure() + a.intersect(&b).measure();
        let rhs = a.measure() + b.measure();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn affine_scales_measure() {
        let s = FrequencySet::from_intervals([
            (RationalPi::new(0, 1), RationalPi::new(1, 3)),
            (RationalPi::new(1, 2), RationalPi::new(5, 4)),
        ])
        .unwrap();
        let scale = BigRational::new(BigInt::from(-3), BigInt::from(2));
        let img = s.affine_image(&scale, &RationalPi::new(1, 7));
        assert_eq!(img.measure(), s.measure().scale(&scale.abs()));
    }

    #[test]
    fn inf_sup_abs() {
        let s = FrequencySet::from_intervals([
            (RationalPi::new(-3, 1), RationalPi::new(-2, 1)),
            (RationalPi::new(1, 4), RationalPi::new(1, 2)),
        ])
        .unwrap();
        assert_eq!(s.inf_abs().unwrap(), RationalPi::new(1, 4));
        assert_eq!(s.sup_abs().unwrap(), RationalPi::new(3, 1));
        // straddling zero → inf 0
        let z = iv(-1, 2, 1, 3);
        assert_eq!(z.inf_abs().unwrap(), RationalPi::zero());
        // [0, b) has points arbitrarily close to 0
        assert_eq!(iv(0, 1, 1, 1).inf_abs().unwrap(), RationalPi::zero());
    }
}
