use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::amp::Amp;
use super::ratpi::RationalPi;
use super::step::Seg;

/// Step function on the two-sided annulus `{π/base ≤ |ξ| < π}`, the
/// fundamental domain of the dilation `ξ ↦ base·ξ` acting on a punctured
/// neighborhood of 0.
#[derive(Clone, Debug)]
pub struct Annulus {
    pub base: i64,
    /// Tiles `[π/base, π)`.
    pub pos: Vec<Seg>,
    /// Tiles `[−π, −π/base)`.
    pub neg: Vec<Seg>,
}

impl Annulus {
    pub fn constant(base: i64, pos: Amp, neg: Amp) -> Self {
        let inner = RationalPi::new(1, base);
        Annulus {
            base,
            pos: vec![Seg::new(inner.clone(), RationalPi::pi(), pos)],
            neg: vec![Seg::new(-RationalPi::pi(), -inner, neg)],
        }
    }

    /// Constant value per side, if any.
    pub fn constants(&self) -> Option<(Amp, Amp)> {
        let one_pos = self
            .pos
            .iter()
            .all(|s| s.amp.merge_eq(&self.pos[0].amp));
        let one_neg = self
            .neg
            .iter()
            .all(|s| s.amp.merge_eq(&self.neg[0].amp));
        if one_pos && one_neg {
            Some((self.pos[0].amp.clone(), self.neg[0].amp.clone()))
        } else {
            None
        }
    }

    /// Value at an annulus point (panics outside the annulus).
    pub fn eval(&self, x: &RationalPi) -> Amp {
        let segs = if x.is_negative() { &self.neg } else { &self.pos };
        for s in segs {
            if &s.lo <= x && x < &s.hi {
                return s.amp.clone();
            }
        }
        panic!("point {:?} outside annulus", x);
    }

    /// Common-mesh refinement of several annuli (equal bases required).
    pub fn refine(anns: &[&Annulus]) -> Vec<(RationalPi, RationalPi, Vec<Amp>)> {
        assert!(!anns.is_empty());
        let base = anns[0].base;
        assert!(anns.iter().all(|a| a.base == base), "mixed germ bases");
        let mut cells = Vec::new();
        for side in 0..2 {
            let mut bps: Vec<RationalPi> = Vec::new();
            for a in anns {
                let segs = if side == 0 { &a.neg } else { &a.pos };
                for s in segs {
                    bps.push(s.lo.clone());
                    bps.push(s.hi.clone());
                }
            }
            bps.sort();
            bps.dedup();
            for w in bps.windows(2) {
                let lo = w[0].clone();
                let hi = w[1].clone();
                let vals = anns.iter().map(|a| a.eval(&lo)).collect();
                cells.push((lo, hi, vals));
            }
        }
        cells
    }

    /// Rebuild from refined cells and one value per cell (inverse of
    /// [`Annulus::refine`] composed with a per-cell map).
    pub fn from_cells(base: i64, cells: &[(RationalPi, RationalPi, Amp)]) -> Self {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (lo, hi, amp) in cells {
            let seg = Seg::new(lo.clone(), hi.clone(), amp.clone());
            if lo.is_negative() {
                neg.push(seg);
            } else {
                pos.push(seg);
            }
        }
        pos.sort_by(|a, b| a.lo.cmp(&b.lo));
        neg.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut ann = Annulus { base, pos, neg };
        ann.merge();
        ann
    }

    fn merge(&mut self) {
        for segs in [&mut self.pos, &mut self.neg] {
            let mut out: Vec<Seg> = Vec::new();
            for s in segs.drain(..) {
                match out.last_mut() {
                    Some(prev) if prev.hi == s.lo && prev.amp.merge_eq(&s.amp) => {
                        prev.hi = s.hi;
                    }
                    _ => out.push(s),
                }
            }
            *segs = out;
        }
    }

    pub fn map(&self, f: impl Fn(&Amp) -> Amp) -> Annulus {
        let conv = |segs: &[Seg]| {
            let mut out: Vec<Seg> = segs
                .iter()
                .map(|s| Seg::new(s.lo.clone(), s.hi.clone(), f(&s.amp)))
                .collect();
            let mut merged: Vec<Seg> = Vec::new();
            for s in out.drain(..) {
                match merged.last_mut() {
                    Some(prev) if prev.hi == s.lo && prev.amp.merge_eq(&s.amp) => prev.hi = s.hi,
                    _ => merged.push(s),
                }
            }
            merged
        };
        Annulus {
            base: self.base,
            pos: conv(&self.pos),
            neg: conv(&self.neg),
        }
    }

    /// `∫ over the annulus`, in units of π.
    pub fn integral_pi(&self) -> Amp {
        let mut acc = Amp::zero();
        for s in self.pos.iter().chain(self.neg.iter()) {
            let w = (&s.hi - &s.lo).ratio().clone();
            acc = acc.add(&s.amp.scale_rat(&w));
        }
        acc
    }

    /// The annulus scaled into ring `m`, i.e. segments tiling
    /// `±[π·base^{−m−1}, π·base^{−m})`.
    pub fn ring_segs(&self, m: u32) -> Vec<Seg> {
        let scale = BigRational::new(BigInt::one(), BigInt::from(self.base).pow(m));
        let mut out: Vec<Seg> = self
            .neg
            .iter()
            .chain(self.pos.iter())
            .map(|s| Seg::new(s.lo.scale(&scale), s.hi.scale(&scale), s.amp.clone()))
            .collect();
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    pub fn iter_segs(&self) -> impl Iterator<Item = &Seg> {
        self.neg.iter().chain(self.pos.iter())
    }
}

/// Self-similar continuation near an accumulation point: for
/// `0 < |ζ| < π·base^{−level}` the function value is `ann(base^m·ζ)` with
/// `m` chosen so the argument lands in the fundamental annulus, and the
/// value exactly at the anchor is stored separately.
///
/// This is how the infinite dilate families of bandlimited systems stay
/// finitely representable: their brackets, Gramians, and dimension series
/// are dilation-periodic close to 0, so one annulus determines all rings.
#[derive(Clone, Debug)]
pub struct Germ {
    pub level: u32,
    pub ann: Annulus,
    pub at_anchor: Amp,
}

impl Germ {
    pub fn base(&self) -> i64 {
        self.ann.base
    }

    /// Validity radius `π·base^{−level}`.
    pub fn radius(&self) -> RationalPi {
        RationalPi::from_ratio(BigRational::new(
            BigInt::one(),
            BigInt::from(self.base()).pow(self.level),
        ))
    }

    /// Value at `ζ` relative to the anchor; requires `|ζ| < radius`.
    pub fn eval(&self, zeta: &RationalPi) -> Amp {
        if zeta.is_zero() {
            return self.at_anchor.clone();
        }
        let mut z = zeta.clone();
        let inner = RationalPi::new(1, self.base());
        // scale outward until ζ·base^m reaches the fundamental annulus
        while z.abs() < inner {
            z = z.scale_int(self.base());
        }
        debug_assert!(z.abs() < RationalPi::pi());
        self.ann.eval(&z)
    }

    /// Push rings `level..target` out as explicit segments and raise the
    /// validity level to `target`.
    pub fn materialize_to(&mut self, target: u32) -> Vec<Seg> {
        let mut segs = Vec::new();
        while self.level < target {
            segs.extend(self.ann.ring_segs(self.level));
            self.level += 1;
        }
        segs.sort_by(|a, b| a.lo.cmp(&b.lo));
        segs
    }

    pub fn map(&self, f: impl Fn(&Amp) -> Amp) -> Germ {
        Germ {
            level: self.level,
            ann: self.ann.map(&f),
            at_anchor: f(&self.at_anchor),
        }
    }

    /// `∫ over the punctured disc of validity`, in units of π:
    /// a geometric series over rings, exact.
    pub fn integral_pi(&self) -> Amp {
        // Σ_{m ≥ level} base^{−m} = base / ((base − 1)·base^level)
        let b = BigInt::from(self.base());
        let factor = BigRational::new(b.clone(), (&b - BigInt::one()) * b.pow(self.level));
        self.ann.integral_pi().scale_rat(&factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn germ_eval_pulls_back() {
        // annulus value 2 on positive side, 3 on negative side, base 2, level 1
        let g = Germ {
            level: 1,
            ann: Annulus::constant(2, Amp::from_int(2), Amp::from_int(3)),
            at_anchor: Amp::zero(),
        };
        assert_eq!(g.radius(), RationalPi::new(1, 2));
        assert!(g.eval(&RationalPi::new(1, 1000)).merge_eq(&Amp::from_int(2)));
        assert!(g.eval(&RationalPi::new(-1, 777)).merge_eq(&Amp::from_int(3)));
        assert!(g.eval(&RationalPi::zero()).merge_eq(&Amp::zero()));
    }

    #[test]
    fn germ_integral_geometric() {
        // constant 1 germ at level 1, base 2: ∫ over (−π/2, π/2) = π
        let g = Germ {
            level: 1,
            ann: Annulus::constant(2, Amp::one(), Amp::one()),
            at_anchor: Amp::zero(),
        };
        // annulus integral: ((π − π/2) both sides) = π; Σ rings = π/2·2 = π
        assert_eq!(
            g.integral_pi().exact_real().unwrap(),
            &BigRational::from_integer(1.into())
        );
    }

    #[test]
    fn materialize_rings() {
        let mut g = Germ {
            level: 1,
            ann: Annulus::constant(2, Amp::from_int(5), Amp::from_int(7)),
            at_anchor: Amp::zero(),
        };
        let segs = g.materialize_to(3);
        assert_eq!(g.level, 3);
        // rings 1 and 2 on both sides: 4 segments
        assert_eq!(segs.len(), 4);
        assert_eq!(segs[2].lo, RationalPi::new(1, 8));
        assert_eq!(segs[2].hi, RationalPi::new(1, 4));
        assert_eq!(segs[3].hi, RationalPi::new(1, 2));
    }
}
