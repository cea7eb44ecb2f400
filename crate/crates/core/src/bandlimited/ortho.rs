use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::torus::{Amp, Annulus, Germ, PeriodicStepFunction, RationalPi, Seg};

use super::func::{level_clearing, radius_of};
use super::BandlimitedFunction;

/// One cell of a stacked mesh: per row (system member or family slot), the
/// nonzero fiber entries `(k, f̂(ξ + 2πk))` with `ξ` in the cell.
#[derive(Clone, Debug)]
pub struct StackCell {
    pub lo: RationalPi,
    pub hi: RationalPi,
    pub rows: Vec<Vec<(i64, Amp)>>,
}

/// Common periodized mesh of a family of bandlimited functions, carrying the
/// full fiber data `{f̂(ξ+2πk)}` per cell rather than any single reduction of
/// it. Dimension functions, orthogonalization, and Gramians all walk this.
pub struct StackMesh {
    pub cells: Vec<StackCell>,
    pub germ: Option<StackGermMesh>,
}

pub struct StackGermMesh {
    pub base: i64,
    pub level: u32,
    pub cells: Vec<StackCell>,
}

impl StackMesh {
    pub fn from_members(members: &[&BandlimitedFunction]) -> StackMesh {
        // translated pieces, tagged (member, k)
        let mut pieces: Vec<(usize, i64, Seg)> = Vec::new();
        for (m, f) in members.iter().enumerate() {
            for (k, seg) in f.translated_segs() {
                let k = k.to_i64().expect("lattice index fits i64");
                pieces.push((m, k, seg));
            }
        }
        let has_germ = members.iter().any(|f| !f.germs().is_empty());
        if !has_germ {
            let cells = sweep_cells(members.len(), &pieces, None);
            return StackMesh { cells, germ: None };
        }
        let base = members
            .iter()
            .find_map(|f| f.germs().first().map(|(_, g)| g.base()))
            .unwrap();
        // germ level: clear member germ levels and every translated breakpoint
        let mut level = 1u32;
        for f in members.iter() {
            for (_, g) in f.germs() {
                assert_eq!(g.base(), base, "mixed germ bases in one stack");
                level = level.max(g.level);
            }
        }
        for (_, _, s) in &pieces {
            for p in [&s.lo, &s.hi] {
                if !p.is_zero() && p.abs() < RationalPi::pi() {
                    level = level.max(level_clearing(base, &p.abs()));
                }
            }
        }
        // materialize member germs down to the common level; rings become
        // ordinary pieces
        let mut ann_rows: Vec<Vec<(i64, Annulus)>> = vec![Vec::new(); members.len()];
        for (m, f) in members.iter().enumerate() {
            for (k, g) in f.germs() {
                let mut g = g.clone();
                let rings = g.materialize_to(level);
                for s in rings {
                    // ring segments live near 2πk but reduce to themselves
                    pieces.push((m, *k, s));
                }
                ann_rows[m].push((*k, g.ann.clone()));
            }
        }
        let radius = radius_of(base, level);
        let cells = sweep_cells(members.len(), &pieces, Some(&radius));
        // annulus cells: refine all germ annuli, then add constant entries
        // from pieces covering a zone side
        let mut ann_bps: BTreeSet<RationalPi> = BTreeSet::new();
        for side in [-1i64, 1] {
            let inner = RationalPi::new(side, base);
            let outer = RationalPi::from_int(side);
            ann_bps.insert(inner.clone().min(outer.clone()));
            ann_bps.insert(inner.max(outer));
        }
        for row in &ann_rows {
            for (_, ann) in row {
                for s in ann.iter_segs() {
                    ann_bps.insert(s.lo.clone());
                    ann_bps.insert(s.hi.clone());
                }
            }
        }
        let ann_bps: Vec<RationalPi> = ann_bps.into_iter().collect();
        let mut germ_cells = Vec::new();
        for w in ann_bps.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            // skip the hole between the two annulus sides
            if !(lo.abs() >= RationalPi::new(1, base) && hi.abs() <= RationalPi::pi()) {
                continue;
            }
            if lo.is_negative() && !hi.ratio().le(&BigRational::from_integer(0.into())) {
                continue;
            }
            let positive_side = !lo.is_negative();
            let mut rows: Vec<Vec<(i64, Amp)>> = vec![Vec::new(); members.len()];
            for (m, row) in ann_rows.iter().enumerate() {
                for (k, ann) in row {
                    let v = ann.eval(lo);
                    if !v.is_zero() {
                        rows[m].push((*k, v));
                    }
                }
            }
            // pieces covering a whole zone side contribute constants
            for (m, k, s) in &pieces {
                let covers = if positive_side {
                    s.lo <= RationalPi::zero() && s.hi >= radius
                } else {
                    s.lo <= -radius.clone() && s.hi >= RationalPi::zero()
                };
                // a piece with endpoint exactly at 0 still covers one side
                let covers = covers
                    || (positive_side && s.lo.is_zero() && s.hi >= radius)
                    || (!positive_side && s.hi.is_zero() && s.lo <= -radius.clone());
                if covers && !s.amp.is_zero() {
                    rows[*m].push((*k, s.amp.clone()));
                }
            }
            for r in &mut rows {
                r.sort_by_key(|(k, _)| *k);
                merge_same_column(r);
            }
            germ_cells.push(StackCell {
                lo: lo.clone(),
                hi: hi.clone(),
                rows,
            });
        }
        StackMesh {
            cells,
            germ: Some(StackGermMesh {
                base,
                level,
                cells: germ_cells,
            }),
        }
    }
}

/// A member may touch the same column twice only through bookkeeping
/// duplicates; sum them.
fn merge_same_column(row: &mut Vec<(i64, Amp)>) {
    let mut out: Vec<(i64, Amp)> = Vec::with_capacity(row.len());
    for (k, a) in row.drain(..) {
        match out.last_mut() {
            Some((k0, a0)) if *k0 == k => *a0 = a0.add(&a),
            _ => out.push((k, a)),
        }
    }
    *row = out;
}

fn sweep_cells(
    n_rows: usize,
    pieces: &[(usize, i64, Seg)],
    gap_radius: Option<&RationalPi>,
) -> Vec<StackCell> {
    let pi = RationalPi::pi();
    let mut bps: BTreeSet<RationalPi> = BTreeSet::new();
    bps.insert(-pi.clone());
    bps.insert(pi.clone());
    if let Some(r) = gap_radius {
        bps.insert(-r.clone());
        bps.insert(r.clone());
    }
    for (_, _, s) in pieces {
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
        let mut rows: Vec<Vec<(i64, Amp)>> = vec![Vec::new(); n_rows];
        for (m, k, s) in pieces {
            if &s.lo <= lo && lo < &s.hi && !s.amp.is_zero() {
                rows[*m].push((*k, s.amp.clone()));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|(k, _)| *k);
            merge_same_column(r);
        }
        out.push(StackCell {
            lo: lo.clone(),
            hi: hi.clone(),
            rows,
        });
    }
    out
}

/// Fiber vector arithmetic over the translate columns.
pub(crate) type Fiber = BTreeMap<i64, Amp>;

pub(crate) fn fiber_inner(a: &Fiber, b: &Fiber) -> Amp {
    // ⟨a, b⟩ = Σ_k a_k · conj(b_k)
    let mut acc = Amp::zero();
    for (k, av) in a {
        if let Some(bv) = b.get(k) {
            acc = acc.add(&av.mul(&bv.conj()));
        }
    }
    acc
}

fn fiber_scale_sub(v: &mut Fiber, coeff: &Amp, e: &Fiber) {
    for (k, ev) in e {
        let delta = coeff.mul(ev);
        let entry = v.entry(*k).or_insert_with(Amp::zero);
        *entry = entry.sub(&delta);
    }
    v.retain(|_, a| !a.is_zero());
}

fn fiber_norm_scale(rows: &[Vec<(i64, Amp)>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max)
}

/// Gram–Schmidt over the fiber vectors of one cell, processed in member
/// order with exact arithmetic while the inputs stay exact. Returns the
/// orthonormal basis (normalized last, so irrational norms cannot
/// contaminate the elimination) and keeps basis order: the p-th vector
/// exists exactly where the local rank is ≥ p+1, which is what makes the
/// assembled generators' supports nested.
pub(crate) fn fiber_basis(rows: &[Vec<(i64, Amp)>]) -> Vec<Fiber> {
    let scale = fiber_norm_scale(rows);
    let zero_cut = (1e-12 * scale.max(1e-300)).powi(2);
    let mut raw: Vec<(Fiber, Amp)> = Vec::new();
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let mut v: Fiber = row.iter().cloned().collect();
        for (e, nsq) in &raw {
            let ip = fiber_inner(&v, e);
            if ip.is_zero() {
                continue;
            }
            let coeff = ip.mul(&nsq.recip_or_zero());
            fiber_scale_sub(&mut v, &coeff, e);
        }
        let nsq = v
            .values()
            .fold(Amp::zero(), |acc, a| acc.add(&a.abs2()));
        let vanished = match &nsq {
            a if a.is_zero() => true,
            a if !a.is_exact() => a.to_c64().re <= zero_cut,
            _ => false,
        };
        if !vanished {
            raw.push((v, nsq));
        }
    }
    raw.into_iter()
        .map(|(v, nsq)| {
            let inv = nsq.sqrt_real().recip_or_zero();
            v.into_iter().map(|(k, a)| (k, a.mul(&inv))).collect()
        })
        .collect()
}

pub(crate) fn fiber_rank(rows: &[Vec<(i64, Amp)>]) -> usize {
    fiber_basis(rows).len()
}

/// The dimension function of the shift-invariant space generated by the
/// members: per cell, the rank of the fiber matrix `{f̂(ξ+2πk)}`.
pub fn dimension_function(members: &[&BandlimitedFunction]) -> PeriodicStepFunction {
    let mesh = StackMesh::from_members(members);
    let segs: Vec<Seg> = mesh
        .cells
        .iter()
        .map(|c| {
            Seg::new(
                c.lo.clone(),
                c.hi.clone(),
                Amp::from_int(fiber_rank(&c.rows) as i64),
            )
        })
        .collect();
    let germ = mesh.germ.as_ref().map(|gm| {
        let cells: Vec<(RationalPi, RationalPi, Amp)> = gm
            .cells
            .iter()
            .map(|c| {
                (
                    c.lo.clone(),
                    c.hi.clone(),
                    Amp::from_int(fiber_rank(&c.rows) as i64),
                )
            })
            .collect();
        Germ {
            level: gm.level,
            ann: Annulus::from_cells(gm.base, &cells),
            at_anchor: Amp::from_int(anchor_rank(members) as i64),
        }
    });
    PeriodicStepFunction::from_parts(segs, germ)
}

/// Rank of the fiber exactly at ξ = 0 (a measure-zero point; reported for
/// completeness in germ-carrying dimension functions).
fn anchor_rank(members: &[&BandlimitedFunction]) -> usize {
    let mut rows: Vec<Vec<(i64, Amp)>> = Vec::new();
    for f in members {
        let mut row = Vec::new();
        for k in -64i64..=64 {
            let v = f.eval(&RationalPi::two_pi().scale_int(k));
            if !v.is_zero() {
                row.push((k, v));
            }
        }
        rows.push(row);
    }
    fiber_rank(&rows)
}

/// `len(S(Φ)) = ‖dim‖_{L∞}`: the essential supremum of the dimension
/// function (exact; dimension values are integers).
pub fn length(members: &[&BandlimitedFunction]) -> usize {
    dimension_function(members)
        .max_real()
        .map(|r| r.to_integer().to_usize().unwrap_or(0))
        .unwrap_or(0)
}

/// Orthogonalize a generating family: returns `φ¹..φ^r` with
/// `r = len(S(Φ))`, pairwise-zero brackets, indicator self-brackets, and
/// nested supports. Zero residuals are dropped under the `0/0 := 0`
/// convention.
pub fn orthogonalize(members: &[&BandlimitedFunction]) -> Vec<BandlimitedFunction> {
    let mesh = StackMesh::from_members(members);
    let cell_bases: Vec<Vec<Fiber>> = crate::exec::map_slice(&mesh.cells, |c| fiber_basis(&c.rows));
    let rank = cell_bases.iter().map(|b| b.len()).max().unwrap_or(0);
    let (germ_bases, germ_rank) = match &mesh.germ {
        Some(gm) => {
            let bases: Vec<Vec<Fiber>> =
                crate::exec::map_slice(&gm.cells, |c| fiber_basis(&c.rows));
            let r = bases.iter().map(|b| b.len()).max().unwrap_or(0);
            (bases, r)
        }
        None => (Vec::new(), 0),
    };
    let r = rank.max(germ_rank);
    assemble_generators(&mesh, &cell_bases, &germ_bases, r)
}

/// Build generator functions out of per-cell fiber vectors: entry `(k, amp)`
/// of the p-th basis vector on a cell becomes a spectral piece of generator
/// p at that cell shifted by `2πk` (or an annulus piece of its germ anchored
/// at `2πk`, for germ cells).
pub(crate) fn assemble_generators(
    mesh: &StackMesh,
    cell_bases: &[Vec<Fiber>],
    germ_bases: &[Vec<Fiber>],
    r: usize,
) -> Vec<BandlimitedFunction> {
    let mut segs: Vec<Vec<Seg>> = vec![Vec::new(); r];
    let mut germ_cells: Vec<BTreeMap<i64, Vec<(RationalPi, RationalPi, Amp)>>> =
        vec![BTreeMap::new(); r];
    for (cell, basis) in mesh.cells.iter().zip(cell_bases) {
        for (p, fiber) in basis.iter().enumerate() {
            for (k, amp) in fiber {
                let shift = RationalPi::two_pi().scale_int(*k);
                segs[p].push(Seg::new(
                    cell.lo.clone() + shift.clone(),
                    cell.hi.clone() + shift,
                    amp.clone(),
                ));
            }
        }
    }
    if let Some(gm) = &mesh.germ {
        for (cell, basis) in gm.cells.iter().zip(germ_bases) {
            for (p, fiber) in basis.iter().enumerate() {
                for (k, amp) in fiber {
                    germ_cells[p].entry(*k).or_default().push((
                        cell.lo.clone(),
                        cell.hi.clone(),
                        amp.clone(),
                    ));
                }
            }
        }
    }
    let level = mesh.germ.as_ref().map(|gm| gm.level).unwrap_or(1);
    let base = mesh.germ.as_ref().map(|gm| gm.base).unwrap_or(2);
    (0..r)
        .map(|p| {
            let germs: Vec<(i64, Germ)> = germ_cells[p]
                .iter()
                .map(|(k, cells)| {
                    // fill uncovered annulus cells with zero
                    let ann = annulus_from_partial(base, cells);
                    (
                        *k,
                        Germ {
                            level,
                            ann,
                            at_anchor: Amp::zero(),
                        },
                    )
                })
                .collect();
            BandlimitedFunction::from_parts(segs[p].clone(), germs)
        })
        .collect()
}

fn annulus_from_partial(base: i64, cells: &[(RationalPi, RationalPi, Amp)]) -> Annulus {
    let mut bps: BTreeSet<RationalPi> = BTreeSet::new();
    let inner = RationalPi::new(1, base);
    bps.insert(inner.clone());
    bps.insert(RationalPi::pi());
    bps.insert(-inner);
    bps.insert(-RationalPi::pi());
    for (lo, hi, _) in cells {
        bps.insert(lo.clone());
        bps.insert(hi.clone());
    }
    let bps: Vec<RationalPi> = bps.into_iter().collect();
    let mut filled = Vec::new();
    for w in bps.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let in_pos = *lo >= RationalPi::new(1, base) && *hi <= RationalPi::pi();
        let in_neg = *hi <= RationalPi::new(-1, base) && *lo >= -RationalPi::pi();
        if !(in_pos || in_neg) {
            continue;
        }
        let amp = cells
            .iter()
            .find(|(a, b, _)| a <= lo && lo < b)
            .map(|(_, _, v)| v.clone())
            .unwrap_or_else(Amp::zero);
        filled.push((lo.clone(), hi.clone(), amp));
    }
    Annulus::from_cells(base, &filled)
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use crate::bandlimited::bracket;
    use crate::torus::FrequencySet;

    use super::*;

    fn iv(an: i64, ad: i64, bn: i64, bd: i64) -> FrequencySet {
        FrequencySet::interval(RationalPi::new(an, ad), RationalPi::new(bn, bd))
    }

    fn sinc() -> BandlimitedFunction {
        BandlimitedFunction::indicator(&iv(-1, 1, 1, 1), Amp::one())
    }

    #[test]
    fn dimension_of_singletons() {
        let one = PeriodicStepFunction::constant(Amp::one());
        assert_eq!(dimension_function(&[&sinc()]), one);
        assert_eq!(length(&[&sinc()]), 1);
        // empty system
        assert_eq!(
            dimension_function(&[]),
            PeriodicStepFunction::constant(Amp::zero())
        );
        assert_eq!(length(&[]), 0);
    }

    #[test]
    fn orthogonalize_keeps_tight_singleton() {
        let out = orthogonalize(&[&sinc()]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].support(), sinc().support());
        assert_eq!(
            bracket(&out[0], &out[0]),
            PeriodicStepFunction::constant(Amp::one())
        );
    }

    #[test]
    fn orthogonalize_drops_duplicate() {
        let f = BandlimitedFunction::indicator(&iv(0, 1, 1, 1), Amp::one());
        let out = orthogonalize(&[&f, &f]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].support(), f.support());
    }

    #[test]
    fn orthogonalize_two_member_example() {
        // f̂ = χ_[0,π), ĝ = χ_[0,2π): rank is 1 on every cell, so a single
        // generator spanning both; its spectrum is χ_[0,2π)
        let f = BandlimitedFunction::indicator(&iv(0, 1, 1, 1), Amp::one());
        let g = BandlimitedFunction::indicator(&iv(0, 1, 2, 1), Amp::one());
        let dim = dimension_function(&[&f, &g]);
        assert_eq!(dim, PeriodicStepFunction::constant(Amp::one()));
        let out = orthogonalize(&[&f, &g]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].support(), iv(0, 1, 2, 1));
        // tight generator: self-bracket ≡ 1
        assert_eq!(
            bracket(&out[0], &out[0]),
            PeriodicStepFunction::constant(Amp::one())
        );
        // the pair (f, g) and the reduced generator span the same space:
        // dimension functions agree exactly
        assert_eq!(dim, dimension_function(&[&out[0]]));
    }

    #[test]
    fn orthogonalize_nested_supports() {
        // fibers differ in translate structure on [−π, 0), agree on [0, π):
        // rank 2 there, rank 1 here, so two generators with nested supports
        let f = BandlimitedFunction::indicator(&iv(-1, 1, 1, 1), Amp::one());
        let g = BandlimitedFunction::indicator(&iv(0, 1, 2, 1), Amp::from_int(3));
        let out = orthogonalize(&[&f, &g]);
        assert_eq!(out.len(), 2);
        // supports nested: supp(φ²) ⊆ supp(φ¹) as periodized sets
        let s1 = bracket(&out[0], &out[0]);
        let s2 = bracket(&out[1], &out[1]);
        // s2 ≤ s1 cellwise (both indicators)
        let diff = s1.sub(&s2);
        for s in diff.segs() {
            assert!(!s.amp.exact_real().unwrap().lt(&BigRational::zero()));
        }
        // cross bracket exactly zero
        assert_eq!(bracket(&out[0], &out[1]), PeriodicStepFunction::zero());
    }
}
