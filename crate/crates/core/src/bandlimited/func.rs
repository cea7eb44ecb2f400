use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::torus::{Amp, Annulus, FrequencySet, Germ, PeriodicStepFunction, RationalPi, Seg};

use super::BlError;

/// A function given by its Fourier transform: a finite complex step function
/// on the line with bounded support, plus optional self-similar germs
/// anchored at lattice points `2πk`.
///
/// Plain inputs never carry germs; germs appear in generators produced from
/// infinite dilate families, whose spectral pieces accumulate at lattice
/// points with exactly dilation-periodic values.
#[derive(Clone, Debug)]
pub struct BandlimitedFunction {
    /// Sorted, disjoint, nonzero-amplitude segments.
    segs: Vec<Seg>,
    /// Germs keyed by their anchor `2πk`, sorted by `k`. The zone
    /// `(2πk − h, 2πk + h)` of each germ is disjoint from all segments.
    germs: Vec<(i64, Germ)>,
}

impl BandlimitedFunction {
    pub fn zero() -> Self {
        BandlimitedFunction {
            segs: Vec::new(),
            germs: Vec::new(),
        }
    }

    /// `f̂ = amp · χ_set`.
    pub fn indicator(set: &FrequencySet, amp: Amp) -> Self {
        let segs = set
            .intervals()
            .iter()
            .map(|(a, b)| Seg::new(a.clone(), b.clone(), amp.clone()))
            .collect();
        Self::from_segs(segs)
    }

    /// Build from disjoint `(cell, amplitude)` pieces.
    pub fn from_cells(cells: Vec<(FrequencySet, Amp)>) -> Result<Self, BlError> {
        let mut segs = Vec::new();
        for (i, (set, amp)) in cells.iter().enumerate() {
            for (j, (other, _)) in cells.iter().enumerate() {
                if i < j && !set.intersect(other).is_empty() {
                    return Err(BlError::OverlappingCells);
                }
            }
            for (a, b) in set.intervals() {
                segs.push(Seg::new(a.clone(), b.clone(), amp.clone()));
            }
        }
        Ok(Self::from_segs(segs))
    }

    pub(crate) fn from_segs(mut segs: Vec<Seg>) -> Self {
        segs.retain(|s| !s.amp.is_zero());
        segs.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut f = BandlimitedFunction {
            segs,
            germs: Vec::new(),
        };
        f.normalize();
        f
    }

    pub(crate) fn from_parts(mut segs: Vec<Seg>, mut germs: Vec<(i64, Germ)>) -> Self {
        segs.retain(|s| !s.amp.is_zero());
        segs.sort_by(|a, b| a.lo.cmp(&b.lo));
        germs.sort_by_key(|(k, _)| *k);
        let mut f = BandlimitedFunction { segs, germs };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        // fold constant germs into plain segments
        let mut extra = Vec::new();
        self.germs.retain(|(k, g)| {
            if let Some((cp, cn)) = g.ann.constants() {
                let anchor = RationalPi::two_pi().scale_int(*k);
                let h = g.radius();
                if !cn.is_zero() {
                    extra.push(Seg::new(&anchor - &h, anchor.clone(), cn));
                }
                if !cp.is_zero() {
                    extra.push(Seg::new(anchor.clone(), anchor + h, cp));
                }
                false
            } else {
                true
            }
        });
        self.segs.extend(extra);
        self.segs.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<Seg> = Vec::new();
        for s in self.segs.drain(..) {
            match out.last_mut() {
                Some(prev) if prev.hi == s.lo && prev.amp.merge_eq(&s.amp) => prev.hi = s.hi,
                _ => out.push(s),
            }
        }
        self.segs = out;
    }

    pub fn segs(&self) -> &[Seg] {
        &self.segs
    }

    pub fn germs(&self) -> &[(i64, Germ)] {
        &self.germs
    }

    pub fn is_zero(&self) -> bool {
        self.segs.is_empty() && self.germs.is_empty()
    }

    /// Spectral support (germ zones included whole; a germ anchored at 0
    /// correctly defeats any `inf |supp| > 0` requirement).
    pub fn support(&self) -> FrequencySet {
        let mut ivs: Vec<(RationalPi, RationalPi)> = self
            .segs
            .iter()
            .map(|s| (s.lo.clone(), s.hi.clone()))
            .collect();
        for (k, g) in &self.germs {
            let anchor = RationalPi::two_pi().scale_int(*k);
            let h = g.radius();
            ivs.push((&anchor - &h, anchor + h));
        }
        FrequencySet::from_intervals(ivs).expect("support intervals are nonempty")
    }

    pub fn eval(&self, xi: &RationalPi) -> Amp {
        for (k, g) in &self.germs {
            let anchor = RationalPi::two_pi().scale_int(*k);
            let zeta = xi - &anchor;
            if zeta.abs() < g.radius() {
                return g.eval(&zeta);
            }
        }
        for s in &self.segs {
            if &s.lo <= xi && xi < &s.hi {
                return s.amp.clone();
            }
        }
        Amp::zero()
    }

    pub fn map(&self, f: impl Fn(&Amp) -> Amp) -> Self {
        let segs = self
            .segs
            .iter()
            .map(|s| Seg::new(s.lo.clone(), s.hi.clone(), f(&s.amp)))
            .collect();
        let germs = self
            .germs
            .iter()
            .map(|(k, g)| (*k, g.map(&f)))
            .collect();
        Self::from_parts(segs, germs)
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn scale(&self, c: &Amp) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        combine2(self, other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        combine2(self, other, |a, b| a.sub(b))
    }

    /// Pointwise product `f̂·ĝ` (no conjugation).
    pub fn mul(&self, other: &Self) -> Self {
        combine2(self, other, |a, b| a.mul(b))
    }

    /// `f̂(ξ) · p(ξ)` for a 2π-periodic multiplier.
    pub fn mul_periodic(&self, p: &PeriodicStepFunction) -> Self {
        let pf = periodic_as_bandlimited_near(self, p);
        combine2(self, &pf, |a, b| a.mul(b))
    }

    /// `ĝ(ξ) = f̂(M^j ξ)` — pure composition, no amplitude factor.
    /// This is the Fourier transform of `|det M|^{−j} f(M^{−j}·)`.
    pub fn compose_dilation(&self, m: i64, j: i32) -> Self {
        assert!(m.abs() >= 2, "dilation factor must satisfy |M| ≥ 2");
        // support scales by M^{−j}
        let scale = rational_power(m, -j);
        let segs = self
            .segs
            .iter()
            .map(|s| {
                let a = s.lo.scale(&scale);
                let b = s.hi.scale(&scale);
                let (lo, hi) = if scale.is_positive() { (a, b) } else { (b, a) };
                Seg::new(lo, hi, s.amp.clone())
            })
            .collect();
        let germs = self
            .germs
            .iter()
            .map(|(k, g)| {
                assert_eq!(*k, 0, "composition requires germs anchored at 0");
                assert_eq!(g.base(), m.abs(), "germ base must match the dilation");
                assert!(m > 0 || j % 2 == 0, "negative dilation of a germ flips sides");
                let new_level = g.level as i64 + j as i64;
                assert!(new_level >= 1, "composition would push the germ past the period");
                (
                    0i64,
                    Germ {
                        level: new_level as u32,
                        ann: g.ann.clone(),
                        at_anchor: g.at_anchor.clone(),
                    },
                )
            })
            .collect();
        Self::from_parts(segs, germs)
    }

    /// `f_{M^j;0}`: `f̂_out(ξ) = |M|^{−j/2} f̂(M^{−j}ξ)`, the L²-normalized
    /// dilate. Exact for even `j`; odd powers of `√|M|` go through floats.
    pub fn dilate(&self, j: i32, m: i64) -> Self {
        let composed = self.compose_dilation(m, -j);
        let amp = half_power(m.unsigned_abs(), -j);
        composed.scale(&amp)
    }

    /// `‖f‖²_{L₂} = (2π)^{−1} ∫ |f̂|²`, exact for exact amplitudes.
    pub fn norm_sq(&self) -> Amp {
        let mut acc = Amp::zero();
        for s in &self.segs {
            acc = acc.add(&s.amp.abs2().scale_rat(&s.width_ratio()));
        }
        for (_, g) in &self.germs {
            acc = acc.add(&g.map(|a| a.abs2()).integral_pi());
        }
        acc.scale_rat(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Proper segments translated into `[−π, π)`, each tagged with its
    /// lattice shift `k` (the original location was the cell plus `2πk`).
    pub(crate) fn translated_segs(&self) -> Vec<(BigInt, Seg)> {
        let pi = RationalPi::pi();
        let mut out = Vec::new();
        for s in &self.segs {
            let (_, k_lo) = s.lo.reduce_mod_2pi();
            let (_, k_hi) = s.hi.reduce_mod_2pi();
            let mut k = k_lo.clone();
            while k <= k_hi {
                let shift =
                    RationalPi::from_ratio(BigRational::from_integer(&k * BigInt::from(2)));
                let lo = (s.lo.clone() - shift.clone()).max(-pi.clone());
                let hi = (s.hi.clone() - shift).min(pi.clone());
                if lo < hi {
                    out.push((k.clone(), Seg::new(lo, hi, s.amp.clone())));
                }
                k += BigInt::one();
            }
        }
        out
    }

    /// 2π-periodization `Σ_k f̂(ξ + 2πk)` as an exact periodic step function.
    pub fn periodize(&self) -> PeriodicStepFunction {
        let translated = self.translated_segs();
        if self.germs.is_empty() {
            return periodize_plain(&translated);
        }
        // the germ target level must clear every translated breakpoint
        let base = self.germs[0].1.base();
        let mut level = self.germs.iter().map(|(_, g)| g.level).max().unwrap();
        for (_, s) in &translated {
            for p in [&s.lo, &s.hi] {
                if !p.is_zero() && p.abs() < RationalPi::pi() {
                    level = level.max(level_clearing(base, &p.abs()));
                }
            }
        }
        let radius = radius_of(base, level);
        // materialize germ rings down to the common level, then translate
        let mut all_translated = translated;
        let mut anns: Vec<Annulus> = Vec::new();
        let mut anchor_sum = Amp::zero();
        for (k, g) in &self.germs {
            let mut g = g.clone();
            let ring_segs = g.materialize_to(level);
            let shift = RationalPi::two_pi().scale_int(*k);
            for s in ring_segs {
                all_translated.push((
                    BigInt::from(*k),
                    Seg::new(s.lo + shift.clone(), s.hi + shift.clone(), s.amp.clone()),
                ));
            }
            // rings were translated in place above; shift back into the period
            anns.push(g.ann.clone());
            anchor_sum = anchor_sum.add(&g.at_anchor);
        }
        // the ring segments just pushed live near 2πk; re-reduce them
        let mut reduced = Vec::new();
        for (_, s) in &all_translated {
            let (lo_r, k1) = s.lo.reduce_mod_2pi();
            let (_, _k2) = s.hi.reduce_mod_2pi();
            let shift = RationalPi::from_ratio(BigRational::from_integer(&k1 * BigInt::from(2)));
            let hi_r = s.hi.clone() - shift;
            // segments never straddle odd multiples of π after the split
            reduced.push((k1, Seg::new(lo_r, hi_r, s.amp.clone())));
        }
        // contributions fully inside the germ zone join the annulus sum;
        // everything else is a proper cell. Constants covering a side of the
        // zone also join the annulus sum.
        let mut proper: Vec<(BigInt, Seg)> = Vec::new();
        let mut pos_const = Amp::zero();
        let mut neg_const = Amp::zero();
        for (k, s) in reduced {
            if s.hi <= -radius.clone() || s.lo >= radius {
                proper.push((k, s));
                continue;
            }
            if !s.lo.is_negative() {
                // covers (0, radius) fully by the clearing-level choice
                pos_const = pos_const.add(&s.amp);
                if s.hi > radius {
                    proper.push((k, Seg::new(radius.clone(), s.hi, s.amp)));
                }
                continue;
            }
            neg_const = neg_const.add(&s.amp);
            if s.lo < -radius.clone() {
                proper.push((
                    k.clone(),
                    Seg::new(s.lo.clone(), -radius.clone(), s.amp.clone()),
                ));
            }
            if s.hi > RationalPi::zero() {
                // straddles 0: positive side too
                pos_const = pos_const.add(&s.amp);
                if s.hi > radius {
                    proper.push((k, Seg::new(radius.clone(), s.hi, s.amp)));
                }
            }
        }
        // sum annuli cellwise plus the side constants
        let ann_refs: Vec<&Annulus> = anns.iter().collect();
        let cells = Annulus::refine(&ann_refs);
        let summed: Vec<(RationalPi, RationalPi, Amp)> = cells
            .into_iter()
            .map(|(lo, hi, vals)| {
                let side = if lo.is_negative() {
                    &neg_const
                } else {
                    &pos_const
                };
                let mut acc = side.clone();
                for v in vals {
                    acc = acc.add(&v);
                }
                (lo, hi, acc)
            })
            .collect();
        let germ = Germ {
            level,
            ann: Annulus::from_cells(base, &summed),
            at_anchor: anchor_sum,
        };
        // proper cells: sum overlaps, fill with zeros outside the zone
        let proper_sum = sum_pieces(&proper, Some(&radius));
        PeriodicStepFunction::from_parts(proper_sum, Some(germ))
    }
}

/// π·base^{−level}.
pub(crate) fn radius_of(base: i64, level: u32) -> RationalPi {
    RationalPi::from_ratio(BigRational::new(BigInt::one(), BigInt::from(base).pow(level)))
}

/// Smallest level L ≥ 1 with π·base^{−L} ≤ delta.
pub(crate) fn level_clearing(base: i64, delta: &RationalPi) -> u32 {
    let mut level = 1u32;
    let mut radius = RationalPi::new(1, base);
    while radius > *delta {
        radius = radius.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        level += 1;
    }
    level
}

/// `m^j` as an exact rational (j may be negative).
pub(crate) fn rational_power(m: i64, j: i32) -> BigRational {
    let p = BigInt::from(m).pow(j.unsigned_abs());
    if j >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `m^{j/2}` as an amplitude: exact when j is even, float otherwise.
pub(crate) fn half_power(m: u64, j: i32) -> Amp {
    if j % 2 == 0 {
        Amp::from_rational(rational_power(m as i64, j / 2))
    } else {
        let v = (m as f64).powf(j as f64 / 2.0);
        Amp::from_c64(num_complex::Complex64::new(v, 0.0))
    }
}

/// Plain periodization: sum overlapping translated segments over a full
/// tiling of `[−π, π)`.
fn periodize_plain(translated: &[(BigInt, Seg)]) -> PeriodicStepFunction {
    let cells = sum_pieces(translated, None);
    PeriodicStepFunction::from_cells(cells).expect("periodization tiles the period")
}

/// Sum overlapping tagged segments; fills zero cells so the result tiles
/// `[−π, π)` (minus the germ zone when `gap_radius` is given).
fn sum_pieces(pieces: &[(BigInt, Seg)], gap_radius: Option<&RationalPi>) -> Vec<Seg> {
    let pi = RationalPi::pi();
    let mut bps: BTreeSet<RationalPi> = BTreeSet::new();
    bps.insert(-pi.clone());
    bps.insert(pi.clone());
    if let Some(r) = gap_radius {
        bps.insert(-r.clone());
        bps.insert(r.clone());
    }
    for (_, s) in pieces {
        bps.insert(s.lo.clone());
        bps.insert(s.hi.clone());
    }
    let bps: Vec<RationalPi> = bps.into_iter().collect();
    let mut out = Vec::new();
    for w in bps.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if let Some(r) = gap_radius {
            if lo >= &-r.clone() && hi <= r {
                continue;
            }
        }
        let mut acc = Amp::zero();
        for (_, s) in pieces {
            if &s.lo <= lo && lo < &s.hi {
                acc = acc.add(&s.amp);
            }
        }
        out.push(Seg::new(lo.clone(), hi.clone(), acc));
    }
    out
}

/// View a periodic multiplier as a bandlimited overlay covering the lattice
/// neighborhoods that matter for `f`, so `combine2` can work cellwise.
/// The multiplier's cells are repeated at every lattice shift touched by
/// `f`'s segments or germs; its germ (if any) is copied to each anchor.
fn periodic_as_bandlimited_near(
    f: &BandlimitedFunction,
    p: &PeriodicStepFunction,
) -> BandlimitedFunction {
    let mut k_range: BTreeSet<BigInt> = BTreeSet::new();
    for s in f.segs() {
        let (_, k_lo) = s.lo.reduce_mod_2pi();
        let (_, k_hi) = s.hi.reduce_mod_2pi();
        let mut k = k_lo.clone();
        while k <= k_hi {
            k_range.insert(k.clone());
            k += BigInt::one();
        }
    }
    for (k, _) in f.germs() {
        k_range.insert(BigInt::from(*k));
    }
    let mut segs = Vec::new();
    let mut germs: Vec<(i64, Germ)> = Vec::new();
    for k in &k_range {
        let shift = RationalPi::from_ratio(BigRational::from_integer(k * BigInt::from(2)));
        for s in p.segs() {
            segs.push(Seg::new(
                s.lo.clone() + shift.clone(),
                s.hi.clone() + shift.clone(),
                s.amp.clone(),
            ));
        }
        if let Some(g) = p.germ() {
            germs.push((k.to_i64().expect("lattice index fits i64"), g.clone()));
        }
    }
    BandlimitedFunction::from_parts(segs, germs)
}

/// Cellwise combination with `op(0, 0) = 0` (both `add` and `mul` qualify).
pub(crate) fn combine2(
    f: &BandlimitedFunction,
    g: &BandlimitedFunction,
    op: impl Fn(&Amp, &Amp) -> Amp,
) -> BandlimitedFunction {
    // germ anchors that must be treated jointly
    let anchors: BTreeSet<i64> = f
        .germs()
        .iter()
        .chain(g.germs())
        .map(|(k, _)| *k)
        .collect();
    let base = f
        .germs()
        .first()
        .or_else(|| g.germs().first())
        .map(|(_, g)| g.base());

    let mut f_al = f.clone();
    let mut g_al = g.clone();
    let mut out_germs: Vec<(i64, Germ)> = Vec::new();
    for &k in &anchors {
        let base = base.expect("anchors imply a base");
        let anchor = RationalPi::two_pi().scale_int(k);
        // common validity level: existing germs and both sides' breakpoints
        let mut level = 1u32;
        for side in [&f_al, &g_al] {
            if let Some((_, gm)) = side.germs().iter().find(|(kk, _)| *kk == k) {
                level = level.max(gm.level);
            }
            for s in side.segs() {
                for b in [&s.lo, &s.hi] {
                    let d = (b - &anchor).abs();
                    if !d.is_zero() && d < RationalPi::pi() {
                        level = level.max(level_clearing(base, &d));
                    }
                }
            }
        }
        let fa = extract_germ(&mut f_al, k, base, level, &anchor);
        let ga = extract_germ(&mut g_al, k, base, level, &anchor);
        let cells = Annulus::refine(&[&fa.ann, &ga.ann]);
        let combined: Vec<(RationalPi, RationalPi, Amp)> = cells
            .into_iter()
            .map(|(lo, hi, v)| (lo, hi, op(&v[0], &v[1])))
            .collect();
        let germ = Germ {
            level,
            ann: Annulus::from_cells(base, &combined),
            at_anchor: op(&fa.at_anchor, &ga.at_anchor),
        };
        out_germs.push((k, germ));
    }
    // proper sweep over both carved segment lists
    let mut bps: BTreeSet<RationalPi> = BTreeSet::new();
    for s in f_al.segs().iter().chain(g_al.segs()) {
        bps.insert(s.lo.clone());
        bps.insert(s.hi.clone());
    }
    let bps: Vec<RationalPi> = bps.into_iter().collect();
    let mut segs = Vec::new();
    for w in bps.windows(2) {
        let lo = &w[0];
        let a = eval_segs(f_al.segs(), lo);
        let b = eval_segs(g_al.segs(), lo);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        segs.push(Seg::new(lo.clone(), w[1].clone(), op(&a, &b)));
    }
    BandlimitedFunction::from_parts(segs, out_germs)
}

fn eval_segs(segs: &[Seg], x: &RationalPi) -> Amp {
    for s in segs {
        if &s.lo <= x && x < &s.hi {
            return s.amp.clone();
        }
    }
    Amp::zero()
}

/// Remove and return the germ of `f` at anchor `k`, materialized or
/// synthesized at exactly `level`, carving the zone out of the segments.
fn extract_germ(
    f: &mut BandlimitedFunction,
    k: i64,
    base: i64,
    level: u32,
    anchor: &RationalPi,
) -> Germ {
    let radius = radius_of(base, level);
    let existing = f.germs.iter().position(|(kk, _)| *kk == k);
    let germ = match existing {
        Some(idx) => {
            let (_, mut g) = f.germs.remove(idx);
            let rings = g.materialize_to(level);
            for s in rings {
                f.segs.push(Seg::new(
                    s.lo + anchor.clone(),
                    s.hi + anchor.clone(),
                    s.amp,
                ));
            }
            f.segs.sort_by(|a, b| a.lo.cmp(&b.lo));
            g
        }
        None => {
            let half = radius.scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
            Germ {
                level,
                ann: Annulus::constant(
                    base,
                    f.eval(&(anchor + &half)),
                    f.eval(&(anchor.clone() - half.clone())),
                ),
                at_anchor: f.eval(anchor),
            }
        }
    };
    // carve the zone out of the proper segments
    let lo_edge = anchor.clone() - radius.clone();
    let hi_edge = anchor.clone() + radius;
    let mut carved = Vec::new();
    for s in f.segs.drain(..) {
        if s.hi <= lo_edge || s.lo >= hi_edge {
            carved.push(s);
            continue;
        }
        if s.lo < lo_edge {
            carved.push(Seg::new(s.lo.clone(), lo_edge.clone(), s.amp.clone()));
        }
        if s.hi > hi_edge {
            carved.push(Seg::new(hi_edge.clone(), s.hi.clone(), s.amp.clone()));
        }
    }
    f.segs = carved;
    germ
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(an: i64, ad: i64, bn: i64, bd: i64) -> FrequencySet {
        FrequencySet::interval(RationalPi::new(an, ad), RationalPi::new(bn, bd))
    }

    fn shannon() -> BandlimitedFunction {
        BandlimitedFunction::indicator(&iv(1, 1, 2, 1).symmetrized(), Amp::one())
    }

    fn sinc() -> BandlimitedFunction {
        BandlimitedFunction::indicator(&iv(-1, 1, 1, 1), Amp::one())
    }

    #[test]
    fn norms() {
        // ‖sinc‖² = (2π)⁻¹·2π = 1; same for the Shannon generator
        assert_eq!(sinc().norm_sq().exact_real().unwrap(), &BigRational::one());
        assert_eq!(shannon().norm_sq().exact_real().unwrap(), &BigRational::one());
    }

    #[test]
    fn dilate_shannon() {
        // j = −1, M = 2: amplitude √2 on ±[π/2, π)
        let d = shannon().dilate(-1, 2);
        let expect_support = iv(1, 2, 1, 1).symmetrized();
        assert_eq!(d.support(), expect_support);
        let amp = d.eval(&RationalPi::new(3, 4));
        assert!((amp.to_c64().re - 2f64.sqrt()).abs() < 1e-15);
        // j = 0 is the identity
        let same = shannon().dilate(0, 2);
        assert_eq!(same.support(), shannon().support());
    }

    #[test]
    fn journe_dilate_by_quarter() {
        // ψ̂ = χ_{±K}, K = [4π/7, π) ∪ [4π, 32π/7); j = −2, M = 2 gives
        // amplitude 2 on ±([π/7, π/4) ∪ [π, 8π/7))
        let k = FrequencySet::from_intervals([
            (RationalPi::new(4, 7), RationalPi::pi()),
            (RationalPi::new(4, 1), RationalPi::new(32, 7)),
        ])
        .unwrap();
        let psi = BandlimitedFunction::indicator(&k.symmetrized(), Amp::one());
        let d = psi.dilate(-2, 2);
        let expect = FrequencySet::from_intervals([
            (RationalPi::new(1, 7), RationalPi::new(1, 4)),
            (RationalPi::new(1, 1), RationalPi::new(8, 7)),
        ])
        .unwrap()
        .symmetrized();
        assert_eq!(d.support(), expect);
        assert!(d
            .eval(&RationalPi::new(1, 5))
            .merge_eq(&Amp::from_int(2)));
    }

    #[test]
    fn periodize_journe_member() {
        // supp(ĥ₁) = ±(A₁ ∪ B₋₁) periodizes to χ_{±[0, π/2)}
        let h1_supp = FrequencySet::from_intervals([
            (RationalPi::new(2, 7), RationalPi::new(1, 2)),
            (RationalPi::new(2, 1), RationalPi::new(16, 7)),
        ])
        .unwrap()
        .symmetrized();
        let h1 = BandlimitedFunction::indicator(&h1_supp, Amp::one());
        let p = h1.periodize();
        assert!(p.eval(&RationalPi::new(1, 4)).merge_eq(&Amp::one()));
        assert!(p.eval(&RationalPi::new(-1, 4)).merge_eq(&Amp::one()));
        assert!(p.eval(&RationalPi::new(3, 4)).merge_eq(&Amp::zero()));
        assert_eq!(
            p.integrate_pi().exact_real().unwrap(),
            h1_supp.measure().ratio()
        );
    }

    #[test]
    fn combine_with_disjoint_supports() {
        let a = shannon();
        let b = sinc();
        let prod = a.mul(&b.conj());
        assert!(prod.is_zero());
        let sum = a.add(&b);
        assert_eq!(sum.support().measure(), RationalPi::new(4, 1));
    }

    #[test]
    fn germ_function_periodizes() {
        // germ at 0 with constant-1 positive side only, level 2, base 2:
        // χ_{(0, π/4)} in effect; periodization equals that indicator
        let g = Germ {
            level: 2,
            ann: Annulus::constant(2, Amp::one(), Amp::zero()),
            at_anchor: Amp::zero(),
        };
        let f = BandlimitedFunction::from_parts(vec![], vec![(0, g)]);
        // constant germ folds to a plain segment
        assert!(f.germs().is_empty());
        assert_eq!(f.support().measure(), RationalPi::new(1, 4));
        let p = f.periodize();
        assert!(p.eval(&RationalPi::new(1, 8)).merge_eq(&Amp::one()));
        assert!(p.eval(&RationalPi::new(-1, 8)).merge_eq(&Amp::zero()));
    }
}
