use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::amp::Amp;
use super::germ::{Annulus, Germ};
use super::ratpi::RationalPi;
use super::set::FrequencySet;
use super::TorusError;

/// One cell `[lo, hi)` with a constant amplitude.
#[derive(Clone, Debug)]
pub struct Seg {
    pub lo: RationalPi,
    pub hi: RationalPi,
    pub amp: Amp,
}

impl Seg {
    pub fn new(lo: RationalPi, hi: RationalPi, amp: Amp) -> Self {
        debug_assert!(lo < hi, "empty segment");
        Seg { lo, hi, amp }
    }

    pub fn width_ratio(&self) -> BigRational {
        (&self.hi - &self.lo).ratio().clone()
    }
}

/// A 2π-periodic complex step function with exact rational-π breakpoints,
/// represented on the fundamental period `[−π, π)`.
///
/// Cells tile the period; adjacent cells with identical exact values are
/// merged, so canonical form is unique up to the optional germ. The germ,
/// when present, replaces the cells in a punctured disc around 0 by a
/// dilation-periodic annulus function — the exact closure of series like
/// `Σ_j [ψ̂(Mʲ·), ψ̂(Mʲ·)]` whose breakpoints accumulate at 0.
///
/// Equality is almost-everywhere equality (the stored value exactly at 0 is
/// excluded); evaluation returns the everywhere-defined representative.
#[derive(Clone)]
pub struct PeriodicStepFunction {
    segs: Vec<Seg>,
    germ: Option<Germ>,
}

impl PeriodicStepFunction {
    pub fn constant(amp: Amp) -> Self {
        PeriodicStepFunction {
            segs: vec![Seg::new(-RationalPi::pi(), RationalPi::pi(), amp)],
            germ: None,
        }
    }

    pub fn zero() -> Self {
        Self::constant(Amp::zero())
    }

    /// Build from cells that exactly tile `[−π, π)`.
    pub fn from_cells(mut cells: Vec<Seg>) -> Result<Self, TorusError> {
        cells.sort_by(|a, b| a.lo.cmp(&b.lo));
        if cells.is_empty() {
            return Err(TorusError::BadTiling("no cells".into()));
        }
        if cells[0].lo != -RationalPi::pi() || cells.last().unwrap().hi != RationalPi::pi() {
            return Err(TorusError::BadTiling("does not span [−π, π)".into()));
        }
        for w in cells.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(TorusError::BadTiling(format!(
                    "gap or overlap at {}π",
                    w[0].hi
                )));
            }
        }
        let mut f = PeriodicStepFunction {
            segs: cells,
            germ: None,
        };
        f.normalize();
        Ok(f)
    }

    /// Assemble from a gap-carrying cell list plus a germ filling the gap.
    pub(crate) fn from_parts(mut segs: Vec<Seg>, germ: Option<Germ>) -> Self {
        segs.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut f = PeriodicStepFunction { segs, germ };
        f.normalize();
        f
    }

    pub fn segs(&self) -> &[Seg] {
        &self.segs
    }

    pub fn germ(&self) -> Option<&Germ> {
        self.germ.as_ref()
    }

    /// Indicator of a bounded set periodized over 2πℤ:
    /// `Σ_k χ_S(ξ + 2πk)`, an exact integer-valued step function.
    pub fn periodize_indicator(set: &FrequencySet) -> Self {
        let pi = RationalPi::pi();
        // translate every interval into [−π, π), splitting at odd multiples of π
        let mut pieces: Vec<(RationalPi, RationalPi)> = Vec::new();
        for (a, b) in set.intervals() {
            let (_, k_lo) = a.reduce_mod_2pi();
            let (_, k_hi) = b.reduce_mod_2pi();
            let mut k = k_lo.clone();
            while k <= k_hi {
                let shift = RationalPi::from_ratio(BigRational::from_integer(&k * BigInt::from(2)));
                let lo = (a.clone() - shift.clone()).max(-pi.clone());
                let hi = (b.clone() - shift).min(pi.clone());
                if lo < hi {
                    pieces.push((lo, hi));
                }
                k += BigInt::from(1);
            }
        }
        let mut bps: Vec<RationalPi> = vec![-pi.clone(), pi.clone()];
        for (lo, hi) in &pieces {
            bps.push(lo.clone());
            bps.push(hi.clone());
        }
        bps.sort();
        bps.dedup();
        let cells = bps
            .windows(2)
            .map(|w| {
                let count = pieces
                    .iter()
                    .filter(|(lo, hi)| lo <= &w[0] && &w[0] < hi)
                    .count();
                Seg::new(w[0].clone(), w[1].clone(), Amp::from_int(count as i64))
            })
            .collect();
        Self::from_cells(cells).expect("periodization tiles the period")
    }

    /// Value at `ξ` (any real frequency; reduced mod 2π first).
    pub fn eval(&self, xi: &RationalPi) -> Amp {
        let (r, _) = xi.reduce_mod_2pi();
        if let Some(g) = &self.germ {
            if r.abs() < g.radius() {
                return g.eval(&r);
            }
        }
        for s in &self.segs {
            if s.lo <= r && r < s.hi {
                return s.amp.clone();
            }
        }
        // tiling invariant guarantees a hit
        unreachable!("point {:?} not covered", r)
    }

    pub fn map(&self, f: impl Fn(&Amp) -> Amp) -> Self {
        let segs = self
            .segs
            .iter()
            .map(|s| Seg::new(s.lo.clone(), s.hi.clone(), f(&s.amp)))
            .collect();
        let germ = self.germ.as_ref().map(|g| g.map(&f));
        Self::from_parts(segs, germ)
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn abs2(&self) -> Self {
        self.map(|a| a.abs2())
    }

    pub fn scale(&self, c: &Amp) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        zip_map(&[self, other], |v| v[0].add(v[1]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        zip_map(&[self, other], |v| v[0].sub(v[1]))
    }

    pub fn mul(&self, other: &Self) -> Self {
        zip_map(&[self, other], |v| v[0].mul(v[1]))
    }

    /// `∫_{[−π,π)} F(ξ) dξ` in units of π (the true integral is the returned
    /// amplitude times π). Exact whenever every cell is exact.
    pub fn integrate_pi(&self) -> Amp {
        let mut acc = Amp::zero();
        for s in &self.segs {
            acc = acc.add(&s.amp.scale_rat(&s.width_ratio()));
        }
        if let Some(g) = &self.germ {
            acc = acc.add(&g.integral_pi());
        }
        acc
    }

    /// The almost-everywhere constant value, if the function is a.e. constant.
    pub fn constant_value(&self) -> Option<Amp> {
        // canonical form: a constant function folds to a single cell
        if self.germ.is_none() && self.segs.len() == 1 {
            Some(self.segs[0].amp.clone())
        } else {
            None
        }
    }

    /// Maximum over cells of an exact real-valued function (`None` if any
    /// cell is inexact or non-real). The value at 0 is excluded: this is the
    /// essential supremum.
    pub fn max_real(&self) -> Option<BigRational> {
        let mut best: Option<BigRational> = None;
        let mut push = |a: &Amp| -> bool {
            match a.exact_real() {
                Some(r) => {
                    if best.as_ref().is_none_or(|b| r > b) {
                        best = Some(r.clone());
                    }
                    true
                }
                None => false,
            }
        };
        for s in &self.segs {
            if !push(&s.amp) {
                return None;
            }
        }
        if let Some(g) = &self.germ {
            for s in g.ann.iter_segs() {
                if !push(&s.amp) {
                    return None;
                }
            }
        }
        best
    }

    /// Largest cell magnitude (germ cells included).
    pub fn sup_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for s in &self.segs {
            m = m.max(s.amp.norm());
        }
        if let Some(g) = &self.germ {
            for s in g.ann.iter_segs() {
                m = m.max(s.amp.norm());
            }
        }
        m
    }

    /// Canonical form: merge adjacent equal cells, fold a constant germ back
    /// into plain cells.
    fn normalize(&mut self) {
        if let Some(g) = &self.germ {
            if let Some((cp, cn)) = g.ann.constants() {
                let h = g.radius();
                self.segs.push(Seg::new(-h.clone(), RationalPi::zero(), cn));
                self.segs.push(Seg::new(RationalPi::zero(), h, cp));
                self.segs.sort_by(|a, b| a.lo.cmp(&b.lo));
                self.germ = None;
            }
        }
        let mut out: Vec<Seg> = Vec::new();
        for s in self.segs.drain(..) {
            match out.last_mut() {
                Some(prev) if prev.hi == s.lo && prev.amp.merge_eq(&s.amp) => {
                    prev.hi = s.hi;
                }
                _ => out.push(s),
            }
        }
        self.segs = out;
    }
}

impl PartialEq for PeriodicStepFunction {
    fn eq(&self, other: &Self) -> bool {
        let mesh = CommonMesh::build(&[self, other]);
        mesh.cells.iter().all(|(_, _, v)| v[0].merge_eq(&v[1]))
            && mesh
                .germ
                .as_ref()
                .is_none_or(|g| g.cells.iter().all(|(_, _, v)| v[0].merge_eq(&v[1])))
    }
}

impl fmt::Debug for PeriodicStepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Step[")?;
        for (i, s) in self.segs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}π,{}π)↦{}", s.lo, s.hi, s.amp)?;
        }
        if let Some(g) = &self.germ {
            write!(f, ", germ@0 level {}", g.level)?;
        }
        write!(f, "]")
    }
}

/// Common refinement of several periodic step functions: proper cells plus,
/// when any input carries a germ, an aligned annulus mesh. All per-cell
/// computations in the crate (ranks, Gramians, orthogonalization) walk this.
pub struct CommonMesh {
    /// `(lo, hi, values)` tiling `[−π, π)` minus the germ gap, in order.
    pub cells: Vec<(RationalPi, RationalPi, Vec<Amp>)>,
    pub germ: Option<GermMesh>,
}

pub struct GermMesh {
    pub base: i64,
    pub level: u32,
    /// Annulus cells `(lo, hi, values)` on `±[π/base, π)`.
    pub cells: Vec<(RationalPi, RationalPi, Vec<Amp>)>,
    pub at_anchor: Vec<Amp>,
}

impl CommonMesh {
    pub fn build(fns: &[&PeriodicStepFunction]) -> CommonMesh {
        assert!(!fns.is_empty());
        let has_germ = fns.iter().any(|f| f.germ.is_some());
        if !has_germ {
            return CommonMesh {
                cells: refine_full(fns),
                germ: None,
            };
        }
        let base = fns
            .iter()
            .find_map(|f| f.germ.as_ref().map(|g| g.base()))
            .unwrap();
        for f in fns {
            if let Some(g) = &f.germ {
                assert_eq!(g.base(), base, "mixed germ bases in one mesh");
            }
        }
        // A germ level that clears every input's own germ and every nonzero
        // breakpoint, so germ-free inputs are constant per side of 0 inside.
        let mut target: u32 = 1;
        for f in fns {
            if let Some(g) = &f.germ {
                target = target.max(g.level);
            }
            if let Some(delta) = innermost_breakpoint(f) {
                target = target.max(level_clearing(base, &delta));
            }
        }
        let aligned: Vec<PeriodicStepFunction> =
            fns.iter().map(|f| align_to(f, base, target)).collect();
        let refs: Vec<&PeriodicStepFunction> = aligned.iter().collect();
        let cells = refine_full(&refs);
        let anns: Vec<&Annulus> = aligned
            .iter()
            .map(|f| &f.germ.as_ref().unwrap().ann)
            .collect();
        let germ_cells = Annulus::refine(&anns);
        let at_anchor = aligned
            .iter()
            .map(|f| f.germ.as_ref().unwrap().at_anchor.clone())
            .collect();
        CommonMesh {
            cells,
            germ: Some(GermMesh {
                base,
                level: target,
                cells: germ_cells,
                at_anchor,
            }),
        }
    }

    /// Reassemble a function from one computed amplitude per mesh cell.
    pub fn assemble(
        &self,
        cell_vals: Vec<Amp>,
        germ_vals: Option<(Vec<Amp>, Amp)>,
    ) -> PeriodicStepFunction {
        assert_eq!(cell_vals.len(), self.cells.len());
        let segs = self
            .cells
            .iter()
            .zip(cell_vals)
            .map(|((lo, hi, _), amp)| Seg::new(lo.clone(), hi.clone(), amp))
            .collect();
        let germ = match (&self.germ, germ_vals) {
            (Some(gm), Some((vals, at_anchor))) => {
                assert_eq!(vals.len(), gm.cells.len());
                let cells: Vec<(RationalPi, RationalPi, Amp)> = gm
                    .cells
                    .iter()
                    .zip(vals)
                    .map(|((lo, hi, _), amp)| (lo.clone(), hi.clone(), amp))
                    .collect();
                Some(Germ {
                    level: gm.level,
                    ann: Annulus::from_cells(gm.base, &cells),
                    at_anchor,
                })
            }
            (None, None) => None,
            _ => panic!("germ values must match mesh shape"),
        };
        PeriodicStepFunction::from_parts(segs, germ)
    }
}

/// Pointwise combination of several functions over their common mesh.
pub fn zip_map(
    fns: &[&PeriodicStepFunction],
    f: impl Fn(&[&Amp]) -> Amp,
) -> PeriodicStepFunction {
    let mesh = CommonMesh::build(fns);
    let cell_vals = mesh
        .cells
        .iter()
        .map(|(_, _, v)| f(&v.iter().collect::<Vec<_>>()))
        .collect();
    let germ_vals = mesh.germ.as_ref().map(|gm| {
        let vals = gm
            .cells
            .iter()
            .map(|(_, _, v)| f(&v.iter().collect::<Vec<_>>()))
            .collect();
        let anchor = f(&gm.at_anchor.iter().collect::<Vec<_>>());
        (vals, anchor)
    });
    mesh.assemble(cell_vals, germ_vals)
}

/// Refinement of the proper cells (inputs must have identical gaps, which
/// alignment guarantees).
fn refine_full(fns: &[&PeriodicStepFunction]) -> Vec<(RationalPi, RationalPi, Vec<Amp>)> {
    let mut bps: Vec<RationalPi> = Vec::new();
    for f in fns {
        for s in f.segs() {
            bps.push(s.lo.clone());
            bps.push(s.hi.clone());
        }
    }
    bps.sort();
    bps.dedup();
    let mut out = Vec::new();
    'cells: for w in bps.windows(2) {
        let lo = &w[0];
        let hi = &w[1];
        let mut vals = Vec::with_capacity(fns.len());
        for f in fns {
            match f.segs().iter().find(|s| &s.lo <= lo && lo < &s.hi) {
                Some(s) => vals.push(s.amp.clone()),
                // inside the common germ gap
                None => continue 'cells,
            }
        }
        out.push((lo.clone(), hi.clone(), vals));
    }
    out
}

/// Innermost nonzero breakpoint magnitude of the proper cells.
fn innermost_breakpoint(f: &PeriodicStepFunction) -> Option<RationalPi> {
    f.segs()
        .iter()
        .flat_map(|s| [&s.lo, &s.hi])
        .filter(|p| !p.is_zero() && p.abs() < RationalPi::pi())
        .map(|p| p.abs())
        .min()
}

/// Smallest level L ≥ 1 with π·base^{−L} ≤ delta.
fn level_clearing(base: i64, delta: &RationalPi) -> u32 {
    let mut level = 1u32;
    let mut radius = RationalPi::new(1, base);
    while radius > *delta {
        radius = radius.scale(&BigRational::new(BigInt::from(1), BigInt::from(base)));
        level += 1;
    }
    level
}

/// Give `f` a germ at exactly `target` level (synthesizing a constant germ
/// for germ-free inputs, materializing rings for coarser germs).
fn align_to(f: &PeriodicStepFunction, base: i64, target: u32) -> PeriodicStepFunction {
    let mut segs = f.segs.to_vec();
    let germ = match &f.germ {
        Some(g) => {
            let mut g = g.clone();
            segs.extend(g.materialize_to(target));
            g
        }
        None => {
            let radius = RationalPi::from_ratio(BigRational::new(
                BigInt::from(1),
                BigInt::from(base).pow(target),
            ));
            let half = radius.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
            let c_pos = f.eval(&half);
            let c_neg = f.eval(&-half);
            let at_anchor = f.eval(&RationalPi::zero());
            // carve the disc out of the cells
            let mut carved = Vec::new();
            for s in segs.drain(..) {
                if s.hi <= -radius.clone() || s.lo >= radius {
                    carved.push(s);
                    continue;
                }
                if s.lo < -radius.clone() {
                    carved.push(Seg::new(s.lo.clone(), -radius.clone(), s.amp.clone()));
                }
                if s.hi > radius {
                    carved.push(Seg::new(radius.clone(), s.hi.clone(), s.amp.clone()));
                }
            }
            segs = carved;
            Germ {
                level: target,
                ann: Annulus::constant(base, c_pos, c_neg),
                at_anchor,
            }
        }
    };
    segs.sort_by(|a, b| a.lo.cmp(&b.lo));
    // bypass normalize: alignment must keep the germ explicit
    PeriodicStepFunction {
        segs,
        germ: Some(germ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(an: i64, ad: i64, bn: i64, bd: i64) -> FrequencySet {
        FrequencySet::interval(RationalPi::new(an, ad), RationalPi::new(bn, bd))
    }

    #[test]
    fn shannon_tiling_periodizes_to_one() {
        // ±[π, 2π) periodizes to the constant 1
        let s = iv(1, 1, 2, 1).symmetrized();
        let p = PeriodicStepFunction::periodize_indicator(&s);
        assert_eq!(p, PeriodicStepFunction::constant(Amp::one()));
    }

    #[test]
    fn half_period_indicator() {
        let p = PeriodicStepFunction::periodize_indicator(&iv(0, 1, 1, 1));
        assert!(p.eval(&RationalPi::new(1, 2)).merge_eq(&Amp::one()));
        assert!(p.eval(&RationalPi::new(-1, 2)).merge_eq(&Amp::zero()));
        assert_eq!(p.segs().len(), 2);
    }

    #[test]
    fn two_full_periods() {
        // [0, 4π) covers every point exactly twice
        let p = PeriodicStepFunction::periodize_indicator(&iv(0, 1, 4, 1));
        assert_eq!(p, PeriodicStepFunction::constant(Amp::from_int(2)));
    }

    #[test]
    fn integral_matches_measure() {
        let s = FrequencySet::from_intervals([
            (RationalPi::new(-5, 2), RationalPi::new(-9, 4)),
            (RationalPi::new(1, 3), RationalPi::new(7, 5)),
        ])
        .unwrap();
        let p = PeriodicStepFunction::periodize_indicator(&s);
        assert_eq!(
            p.integrate_pi().exact_real().unwrap(),
            s.measure().ratio()
        );
    }

    #[test]
    fn pointwise_algebra() {
        let a = PeriodicStepFunction::periodize_indicator(&iv(0, 1, 1, 1));
        let b = PeriodicStepFunction::periodize_indicator(&iv(-1, 1, 0, 1));
        // χ_[0,π) + χ_[−π,0) = 1
        assert_eq!(a.add(&b), PeriodicStepFunction::constant(Amp::one()));
        // abs2 of (1+i)·χ_[0,π) = 2·χ_[0,π)
        let z = a.scale(&Amp::from_rational_pair(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
        ));
        assert_eq!(z.abs2(), a.scale(&Amp::from_int(2)));
    }

    #[test]
    fn constant_integrates_to_two() {
        // ∫ 1 over the period = 2π, i.e. coefficient 2 in π units
        let one = PeriodicStepFunction::constant(Amp::one());
        assert_eq!(
            one.integrate_pi().exact_real().unwrap(),
            &BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn germ_functions_combine() {
        // germ constant 1 on positive side, 0 negative, plus its mirror = 1 a.e.
        let g_pos = Germ {
            level: 2,
            ann: Annulus::constant(2, Amp::one(), Amp::zero()),
            at_anchor: Amp::zero(),
        };
        let mut segs = vec![
            Seg::new(-RationalPi::pi(), RationalPi::new(-1, 4), Amp::zero()),
            Seg::new(RationalPi::new(1, 4), RationalPi::pi(), Amp::one()),
        ];
        let f = PeriodicStepFunction::from_parts(segs.clone(), Some(g_pos));
        // constant germ folds away in canonical form
        assert!(f.germ().is_none());
        assert!(f.eval(&RationalPi::new(1, 1000)).merge_eq(&Amp::one()));
        assert!(f.eval(&RationalPi::new(-1, 1000)).merge_eq(&Amp::zero()));

        // non-constant germ survives and combines exactly
        let checker = Annulus {
            base: 2,
            pos: vec![
                Seg::new(RationalPi::new(1, 2), RationalPi::new(3, 4), Amp::one()),
                Seg::new(RationalPi::new(3, 4), RationalPi::pi(), Amp::zero()),
            ],
            neg: vec![Seg::new(
                -RationalPi::pi(),
                RationalPi::new(-1, 2),
                Amp::zero(),
            )],
        };
        segs.truncate(2);
        let g = PeriodicStepFunction::from_parts(
            segs,
            Some(Germ {
                level: 2,
                ann: checker,
                at_anchor: Amp::zero(),
            }),
        );
        assert!(g.germ().is_some());
        let total = g.add(&g.conj());
        // value on germ cells doubled: at ξ = 9/16·π·2^{-2} pull back lands in [1/2,3/4)
        let probe = RationalPi::new(9, 64);
        assert!(total.eval(&probe).merge_eq(&Amp::from_int(2)));
        // integral: segs part π·1/2·... just check exactness and symmetry
        assert!(total.integrate_pi().is_exact());
    }
}
