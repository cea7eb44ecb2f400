use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bandlimited::BandlimitedFunction;
use crate::torus::{Amp, FrequencySet, RationalPi};

/// Deterministic battery of pseudo-random bandlimited test functions.
///
/// Supports are unions of a few dyadic-rational-π intervals inside
/// `[−range, range]`, amplitudes are exact dyadic rationals, so every
/// residual computed against them is an exact quantity polluted only by
/// whatever inexactness the system under test carries.
pub fn test_battery(seed: u64, count: usize, range: &RationalPi) -> Vec<BandlimitedFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = 16i64;
    let span_units = {
        // range in units of π/16, at least 1
        let r = (range.ratio() * BigRational::from_integer(denom.into()))
            .floor()
            .to_integer();
        num_traits::ToPrimitive::to_i64(&r).unwrap_or(16).max(1)
    };
    (0..count)
        .map(|_| loop {
            let pieces = rng.gen_range(1..=3usize);
            let mut cells = Vec::new();
            for _ in 0..pieces {
                let a = rng.gen_range(-span_units..span_units);
                let w = rng.gen_range(1..=span_units.min(8));
                let re = rng.gen_range(-32..=32i64);
                let im = rng.gen_range(-32..=32i64);
                if re == 0 && im == 0 {
                    continue;
                }
                cells.push((
                    FrequencySet::interval(
                        RationalPi::new(a, denom),
                        RationalPi::new(a + w, denom),
                    ),
                    Amp::from_rational_pair(
                        BigRational::new(re.into(), 16.into()),
                        BigRational::new(im.into(), 16.into()),
                    ),
                ));
            }
            // overlapping pieces just re-draw; disjointness is an input
            // contract of bandlimited cells
            let mut merged: Vec<(FrequencySet, Amp)> = Vec::new();
            let mut ok = true;
            for (set, amp) in cells {
                if merged.iter().any(|(s, _)| !s.intersect(&set).is_empty()) {
                    ok = false;
                    break;
                }
                merged.push((set, amp));
            }
            if !ok || merged.is_empty() {
                continue;
            }
            break BandlimitedFunction::from_cells(merged).expect("disjoint by construction");
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_deterministic_and_exact() {
        let a = test_battery(7, 5, &RationalPi::new(2, 1));
        let b = test_battery(7, 5, &RationalPi::new(2, 1));
        for (f, g) in a.iter().zip(&b) {
            assert_eq!(f.support(), g.support());
            assert!(f.norm_sq().is_exact());
            assert!(!f.is_zero());
        }
        let c = test_battery(8, 5, &RationalPi::new(2, 1));
        assert!(a.iter().zip(&c).any(|(f, g)| f.support() != g.support()));
    }
}
