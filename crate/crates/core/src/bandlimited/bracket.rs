use num_bigint::BigInt;
use num_rational::BigRational;

use crate::torus::{Amp, PeriodicStepFunction};

use super::func::combine2;
use super::BandlimitedFunction;

/// The bracket product `[f̂, ĝ](ξ) = Σ_k f̂(ξ+2πk)·conj(ĝ(ξ+2πk))`:
/// the pointwise product on the line, periodized. Exact, with finitely many
/// lattice shifts contributing per cell.
pub fn bracket(f: &BandlimitedFunction, g: &BandlimitedFunction) -> PeriodicStepFunction {
    combine2(f, g, |a, b| a.mul(&b.conj())).periodize()
}

/// Total shift energy `Σ_k |⟨f, g(·−k)⟩|² = (2π)^{−1}∫|[f̂, ĝ]|²`,
/// computed without enumerating translates.
pub fn shift_energy(f: &BandlimitedFunction, g: &BandlimitedFunction) -> Amp {
    let br = bracket(f, g);
    br.abs2()
        .integrate_pi()
        .scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(2)))
}

/// Mixed Parseval pairing `Σ_k ⟨f, g(·−k)⟩·⟨g̃(·−k), h⟩
/// = (2π)^{−1}∫ [f̂, ĝ]·[g̃̂, ĥ]`.
pub fn mixed_parseval(
    f: &BandlimitedFunction,
    g: &BandlimitedFunction,
    g_dual: &BandlimitedFunction,
    h: &BandlimitedFunction,
) -> Amp {
    let left = bracket(f, g);
    let right = bracket(g_dual, h);
    left.mul(&right)
        .integrate_pi()
        .scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(2)))
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use crate::torus::{FrequencySet, RationalPi};

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
    fn disjoint_tilings_bracket_to_constants() {
        let one = PeriodicStepFunction::constant(Amp::one());
        assert_eq!(bracket(&shannon(), &shannon()), one);
        assert_eq!(bracket(&sinc(), &sinc()), one);
        assert_eq!(
            bracket(&shannon(), &sinc()),
            PeriodicStepFunction::zero()
        );
    }

    #[test]
    fn shift_energy_values() {
        // orthonormal shifts: energy 1
        assert_eq!(
            shift_energy(&shannon(), &shannon()).exact_real().unwrap(),
            &BigRational::one()
        );
        // disjoint supports: 0
        assert!(shift_energy(&shannon(), &sinc()).is_zero());
        // [f̂,ĝ] = χ_[0,π) gives 1/2
        let f = BandlimitedFunction::indicator(&iv(0, 1, 1, 1), Amp::one());
        assert_eq!(
            shift_energy(&f, &f).exact_real().unwrap(),
            &BigRational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn norm_identity_through_bracket() {
        // ‖f‖² = (2π)⁻¹ ∫ [f̂,f̂] for several shapes
        for f in [
            shannon(),
            sinc(),
            BandlimitedFunction::indicator(&iv(1, 3, 9, 5), Amp::from_ratio(3, 7)),
        ] {
            let via_bracket = bracket(&f, &f)
                .integrate_pi()
                .scale_rat(&BigRational::new(1.into(), 2.into()));
            assert_eq!(
                via_bracket.exact_real().unwrap(),
                f.norm_sq().exact_real().unwrap()
            );
        }
    }

    #[test]
    fn cauchy_schwarz_per_cell() {
        let f = BandlimitedFunction::indicator(&iv(0, 1, 3, 2), Amp::from_ratio(2, 3));
        let g = BandlimitedFunction::indicator(&iv(1, 2, 5, 2), Amp::from_ratio(5, 4));
        let fg = bracket(&f, &g).abs2();
        let ff = bracket(&f, &f);
        let gg = bracket(&g, &g);
        let bound = ff.mul(&gg);
        let diff = bound.sub(&fg);
        // |[f,g]|² ≤ [f,f]·[g,g] cellwise
        for s in diff.segs() {
            assert!(
                !s.amp
                    .exact_real()
                    .expect("real cells")
                    .lt(&BigRational::from_integer(0.into())),
                "Cauchy–Schwarz violated on a cell"
            );
        }
    }
}
