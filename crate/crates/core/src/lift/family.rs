use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::bandlimited::{DilateFamily, StackCell, StackGermMesh, StackMesh};
use crate::torus::{Amp, RationalPi, Seg};

use super::LiftError;

/// Layout bookkeeping of a stacked dilate-family mesh.
#[derive(Clone, Debug)]
pub struct FamilyStackInfo {
    pub base: i64,
    pub level: u32,
    pub radius: RationalPi,
    /// Scales whose dilates can still meet a nonzero lattice shift.
    pub j_lattice: u32,
    /// Scales enumerated as explicit proper-region rows.
    pub j_enum: u32,
    /// Scale offsets of the self-similar annulus slots.
    pub offsets: Vec<i32>,
    /// Rows per family group (identical layout across groups).
    pub slots_per_group: usize,
}

/// Smallest integer `i` with `base^i ≥ x` (x > 0).
fn ceil_log(base: i64, x: &BigRational) -> i32 {
    let b = BigRational::from_integer(BigInt::from(base));
    let mut i = 0i32;
    let mut p = BigRational::one();
    if p >= *x {
        loop {
            let next = &p / &b;
            if next >= *x {
                p = next;
                i -= 1;
            } else {
                break;
            }
        }
    } else {
        while p < *x {
            p = &p * &b;
            i += 1;
        }
    }
    i
}

/// Largest integer `i` with `base^i ≤ y` (y > 0).
fn floor_log(base: i64, y: &BigRational) -> i32 {
    let b = BigRational::from_integer(BigInt::from(base));
    let mut i = 0i32;
    let mut p = BigRational::one();
    if p <= *y {
        loop {
            let next = &p * &b;
            if next <= *y {
                p = next;
                i += 1;
            } else {
                break;
            }
        }
    } else {
        while p > *y {
            p = &p / &b;
            i -= 1;
        }
    }
    i
}

fn level_clearing(base: i64, delta: &RationalPi) -> u32 {
    let mut level = 1u32;
    let mut radius = RationalPi::new(1, base);
    while radius > *delta {
        radius = radius.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        level += 1;
    }
    level
}

fn radius_of(base: i64, level: u32) -> RationalPi {
    RationalPi::from_ratio(BigRational::new(BigInt::one(), BigInt::from(base).pow(level)))
}

/// Build the stacked mesh of one or more negative-dilate families sharing a
/// dilation. Rows per cell are grouped family-major with identical slot
/// layouts, so paired constructions stay index-aligned.
///
/// Proper cells carry one row per enumerated member `(j ≤ j_enum, ℓ)`.
/// Annulus cells carry static rows (lattice-shifted constants of the
/// low scales) followed by shifting rows (scale offsets): at ring `m` the
/// shifting row with offset `o` stands for the member at scale `m + o`,
/// whose values are ring-invariant by dilation coherence.
pub fn dilate_stack(
    groups: &[&DilateFamily],
) -> Result<(StackMesh, FamilyStackInfo), LiftError> {
    assert!(!groups.is_empty());
    let m = groups[0].m;
    assert!(
        groups.iter().all(|g| g.m == m),
        "paired families must share the dilation"
    );
    assert!(m >= 2, "family stacks require a positive dilation");
    let n_gen = groups[0].num_generators();
    assert!(
        groups.iter().all(|g| g.num_generators() == n_gen),
        "paired families must have equal generator counts"
    );
    let base = m;
    // union support bounds
    let inner = groups
        .iter()
        .map(|g| g.cert.inner.clone())
        .min()
        .expect("nonempty groups");
    let outer = groups
        .iter()
        .map(|g| g.cert.outer.clone())
        .max()
        .expect("nonempty groups");

    // scales that can meet a nonzero lattice shift: |M|^{−j}·outer > π
    let j_lattice = {
        let mut j = 0u32;
        let mut reach = outer.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        while reach > RationalPi::pi() {
            j += 1;
            reach = reach.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        }
        j
    };
    // germ level: static members of the lattice range must keep their
    // lattice-free supports outside the zone (purity), every lattice piece
    // breakpoint must clear the zone, and every ring must index a member
    // with scale ≥ 1
    let mut level = level_clearing(
        base,
        &inner.scale(&BigRational::new(
            BigInt::one(),
            BigInt::from(base).pow(j_lattice),
        )),
    );
    for g in groups {
        for j in 1..=j_lattice {
            for ell in 0..n_gen {
                let member = g.member(j, ell);
                for (k, seg) in member.translated_segs() {
                    if k == BigInt::from(0) {
                        continue;
                    }
                    for p in [&seg.lo, &seg.hi] {
                        if !p.is_zero() && p.abs() < RationalPi::pi() {
                            level = level.max(level_clearing(base, &p.abs()));
                        }
                    }
                }
            }
        }
    }
    let o_min = ceil_log(base, inner.ratio());
    if 1 - o_min > 0 {
        level = level.max((1 - o_min) as u32);
    }
    let radius = radius_of(base, level);
    // enumerated scales: members still visible outside the zone
    let j_enum = {
        let mut j = 0u32;
        let mut reach = outer.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        while reach > radius {
            j += 1;
            reach = reach.scale(&BigRational::new(BigInt::one(), BigInt::from(base)));
        }
        j.max(1)
    };
    // shifting offsets with any nonzero annulus value
    let o_max = floor_log(
        base,
        &(outer.ratio() * BigRational::from_integer(BigInt::from(base))),
    );
    let offsets: Vec<i32> = (o_min..=o_max).collect();

    // ---- proper cells -------------------------------------------------
    let mut pieces: Vec<(usize, i64, Seg)> = Vec::new();
    let rows_per_group_proper = (j_enum as usize) * n_gen;
    for (gi, g) in groups.iter().enumerate() {
        for j in 1..=j_enum {
            for ell in 0..n_gen {
                let row = gi * rows_per_group_proper + ((j - 1) as usize) * n_gen + ell;
                let member = g.member(j, ell);
                for (k, seg) in member.translated_segs() {
                    let k = k.to_i64().expect("lattice index fits i64");
                    pieces.push((row, k, seg));
                }
            }
        }
    }
    let n_proper_rows = groups.len() * rows_per_group_proper;
    let cells = sweep_proper(n_proper_rows, &pieces, &radius);

    // ---- annulus cells -------------------------------------------------
    let statics_per_group = (j_lattice as usize) * n_gen;
    let shifting_per_group = offsets.len() * n_gen;
    let slots_per_group = statics_per_group + shifting_per_group;
    // mesh breakpoints: shifting values are ψ̂^ℓ(M^o ω)
    let mut bps_pos: Vec<RationalPi> = vec![RationalPi::new(1, base), RationalPi::pi()];
    let mut bps_neg: Vec<RationalPi> = vec![-RationalPi::pi(), RationalPi::new(-1, base)];
    let mut shifted_members: Vec<Vec<crate::bandlimited::BandlimitedFunction>> = Vec::new();
    for g in groups {
        let mut per_group = Vec::new();
        for &o in &offsets {
            for ell in 0..n_gen {
                let composed = g.generators()[ell].compose_dilation(m, o);
                for s in composed.segs() {
                    for p in [&s.lo, &s.hi] {
                        if *p > RationalPi::new(1, base) && *p < RationalPi::pi() {
                            bps_pos.push(p.clone());
                        }
                        if *p > -RationalPi::pi() && *p < RationalPi::new(-1, base) {
                            bps_neg.push(p.clone());
                        }
                    }
                }
                per_group.push(composed);
            }
        }
        shifted_members.push(per_group);
    }
    bps_pos.sort();
    bps_pos.dedup();
    bps_neg.sort();
    bps_neg.dedup();

    let mut germ_cells: Vec<StackCell> = Vec::new();
    for bps in [&bps_neg, &bps_pos] {
        for w in bps.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let positive_side = !lo.is_negative();
            let mut rows: Vec<Vec<(i64, Amp)>> =
                vec![Vec::new(); groups.len() * slots_per_group];
            for (gi, g) in groups.iter().enumerate() {
                // static rows: lattice-shifted pieces covering this side
                for j in 1..=j_lattice {
                    for ell in 0..n_gen {
                        let row = gi * slots_per_group + ((j - 1) as usize) * n_gen + ell;
                        let member = g.member(j, ell);
                        for (k, seg) in member.translated_segs() {
                            if k == BigInt::from(0) {
                                continue;
                            }
                            let covers = if positive_side {
                                seg.lo <= RationalPi::zero() && seg.hi >= radius
                            } else {
                                seg.lo <= -radius.clone() && seg.hi >= RationalPi::zero()
                            };
                            if covers && !seg.amp.is_zero() {
                                rows[row].push((
                                    k.to_i64().expect("lattice index fits i64"),
                                    seg.amp.clone(),
                                ));
                            }
                        }
                    }
                }
                // shifting rows: offset-indexed annulus values at k = 0
                for (oi, _) in offsets.iter().enumerate() {
                    for ell in 0..n_gen {
                        let row = gi * slots_per_group
                            + statics_per_group
                            + oi * n_gen
                            + ell;
                        let v = shifted_members[gi][oi * n_gen + ell].eval(lo);
                        if !v.is_zero() {
                            rows[row].push((0, v));
                        }
                    }
                }
            }
            for r in &mut rows {
                r.sort_by_key(|(k, _)| *k);
            }
            germ_cells.push(StackCell {
                lo: lo.clone(),
                hi: hi.clone(),
                rows,
            });
        }
    }

    let info = FamilyStackInfo {
        base,
        level,
        radius,
        j_lattice,
        j_enum,
        offsets,
        slots_per_group: rows_per_group_proper.max(slots_per_group),
    };
    // pad both layouts to a common row count per group so a single split
    // index separates the groups everywhere
    let per_group = info.slots_per_group;
    let cells = pad_rows(cells, groups.len(), rows_per_group_proper, per_group);
    let germ_cells = pad_rows(germ_cells, groups.len(), slots_per_group, per_group);

    Ok((
        StackMesh {
            cells,
            germ: Some(StackGermMesh {
                base,
                level,
                cells: germ_cells,
            }),
        },
        info,
    ))
}

/// Repack per-cell rows so every group occupies exactly `target` rows.
fn pad_rows(
    cells: Vec<StackCell>,
    n_groups: usize,
    current: usize,
    target: usize,
) -> Vec<StackCell> {
    if current == target {
        return cells;
    }
    cells
        .into_iter()
        .map(|c| {
            let mut rows = vec![Vec::new(); n_groups * target];
            for (i, row) in c.rows.into_iter().enumerate() {
                let group = i / current;
                let slot = i % current;
                rows[group * target + slot] = row;
            }
            StackCell {
                lo: c.lo,
                hi: c.hi,
                rows,
            }
        })
        .collect()
}

fn sweep_proper(
    n_rows: usize,
    pieces: &[(usize, i64, Seg)],
    radius: &RationalPi,
) -> Vec<StackCell> {
    let pi = RationalPi::pi();
    let mut bps: std::collections::BTreeSet<RationalPi> = std::collections::BTreeSet::new();
    bps.insert(-pi.clone());
    bps.insert(pi.clone());
    bps.insert(-radius.clone());
    bps.insert(radius.clone());
    for (_, _, s) in pieces {
        bps.insert(s.lo.clone());
        bps.insert(s.hi.clone());
    }
    let bps: Vec<RationalPi> = bps.into_iter().collect();
    let mut out = Vec::new();
    for w in bps.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if lo >= &-radius.clone() && hi <= radius {
            continue;
        }
        let mut rows: Vec<Vec<(i64, Amp)>> = vec![Vec::new(); n_rows];
        for (row, k, s) in pieces {
            if &s.lo <= lo && lo < &s.hi && !s.amp.is_zero() {
                rows[*row].push((*k, s.amp.clone()));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|(k, _)| *k);
        }
        out.push(StackCell {
            lo: lo.clone(),
            hi: hi.clone(),
            rows,
        });
    }
    out
}
