use num_rational::BigRational;

use crate::torus::RationalPi;

use super::{BandlimitedFunction, BandlimitedSystem, BlError, SystemRole};

/// Certificate that a family of spectral supports stays inside an annulus
/// `{ε·π ≤ |ξ| ≤ π/ε}`, which is what makes every dilate-family computation
/// in the crate terminate with an exactly accounted tail.
#[derive(Clone, Debug)]
pub struct FinitenessCertificate {
    /// Largest rational with `supp ⊆ {ε·π ≤ |ξ| ≤ π/ε}` (π-unit convention).
    pub epsilon: BigRational,
    /// `inf |supp|` over all members, in π units; strictly positive.
    pub inner: RationalPi,
    /// `sup |supp|` over all members, in π units.
    pub outer: RationalPi,
    /// Every scale `j ≥ j_star` has its dilated support inside `(−π/2, π/2)`,
    /// so it meets the period only through the lattice shift `k = 0`.
    pub j_star: u32,
}

impl FinitenessCertificate {
    /// Build from explicit support bounds (`inner > 0` required).
    pub fn from_bounds(inner: RationalPi, outer: RationalPi, m: i64) -> Result<Self, BlError> {
        if inner.is_zero() || inner.is_negative() {
            return Err(BlError::CertificateFailure {
                inf: inner.to_string(),
                sup: outer.to_string(),
            });
        }
        let inv_outer = RationalPi::from_ratio(outer.ratio().recip());
        let epsilon = inner.clone().min(inv_outer).ratio().clone();
        let base = m.abs();
        let mut j_star = 1u32;
        let half = RationalPi::new(1, 2);
        let mut scaled = outer.scale(&BigRational::new(1.into(), base.into()));
        while scaled > half {
            scaled = scaled.scale(&BigRational::new(1.into(), base.into()));
            j_star += 1;
        }
        Ok(FinitenessCertificate {
            epsilon,
            inner,
            outer,
            j_star,
        })
    }

    pub fn certify(members: &[&BandlimitedFunction], m: i64) -> Result<Self, BlError> {
        let mut inner: Option<RationalPi> = None;
        let mut outer: Option<RationalPi> = None;
        for f in members {
            let supp = f.support();
            let (lo, hi) = match (supp.inf_abs(), supp.sup_abs()) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => continue, // zero member constrains nothing
            };
            inner = Some(match inner {
                Some(cur) => cur.min(lo),
                None => lo,
            });
            outer = Some(match outer {
                Some(cur) => cur.max(hi),
                None => hi,
            });
        }
        let (inner, outer) = match (inner, outer) {
            (Some(i), Some(o)) => (i, o),
            _ => return Err(BlError::EmptySystem),
        };
        Self::from_bounds(inner, outer, m)
    }
}

/// The lazily represented negative-dilate family
/// `H = { |det M|^{−j} ψ(M^{−j}·) : j ≥ 1, ψ ∈ Ψ }`, whose members are the
/// amplitude-free compositions `ĥ_{j,ℓ}(ξ) = ψ̂^ℓ(M^j ξ)`.
#[derive(Clone, Debug)]
pub struct DilateFamily {
    generators: Vec<BandlimitedFunction>,
    pub m: i64,
    pub cert: FinitenessCertificate,
}

impl DilateFamily {
    pub fn new(generators: Vec<BandlimitedFunction>, m: i64) -> Result<Self, BlError> {
        if m.abs() < 2 {
            return Err(BlError::BadDilation(m));
        }
        if generators.is_empty() {
            return Err(BlError::EmptySystem);
        }
        let refs: Vec<&BandlimitedFunction> = generators.iter().collect();
        let cert = FinitenessCertificate::certify(&refs, m)?;
        Ok(DilateFamily {
            generators,
            m,
            cert,
        })
    }

    pub fn generators(&self) -> &[BandlimitedFunction] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Family member at scale `j ≥ 1`.
    pub fn member(&self, j: u32, ell: usize) -> BandlimitedFunction {
        self.generators[ell].compose_dilation(self.m, j as i32)
    }
}

/// Materialize the certified prefix of the negative-dilate family: every
/// scale up to `j_star`, beyond which each dilate lies inside `(−π/2, π/2)`
/// and its interactions are closed by geometric tails rather than further
/// members.
pub fn negative_dilates(
    psi: &BandlimitedSystem,
    m: i64,
) -> Result<(BandlimitedSystem, FinitenessCertificate, DilateFamily), BlError> {
    let family = DilateFamily::new(psi.members().to_vec(), m)?;
    let cert = family.cert.clone();
    let mut named = Vec::new();
    for j in 1..=cert.j_star {
        for (ell, name) in psi.names().iter().enumerate() {
            named.push((format!("{}@-{}", name, j), family.member(j, ell)));
        }
    }
    Ok((
        BandlimitedSystem::new(SystemRole::Dilates, named),
        cert,
        family,
    ))
}

#[cfg(test)]
mod tests {
    use crate::torus::{Amp, FrequencySet};

    use super::*;

    fn iv(an: i64, ad: i64, bn: i64, bd: i64) -> FrequencySet {
        FrequencySet::interval(RationalPi::new(an, ad), RationalPi::new(bn, bd))
    }

    #[test]
    fn shannon_dilates() {
        let shannon = BandlimitedFunction::indicator(&iv(1, 1, 2, 1).symmetrized(), Amp::one());
        let psi = BandlimitedSystem::from_members(SystemRole::Generators, vec![shannon]);
        let (h, cert, _) = negative_dilates(&psi, 2).unwrap();
        assert_eq!(cert.inner, RationalPi::pi());
        assert_eq!(cert.outer, RationalPi::new(2, 1));
        // 2·2^{−j} ≤ 1/2 first at j = 2
        assert_eq!(cert.j_star, 2);
        assert_eq!(h.len(), 2);
        // ĥ₁ = ψ̂(2ξ): support ±[π/2, π)
        assert_eq!(h.members()[0].support(), iv(1, 2, 1, 1).symmetrized());
    }

    #[test]
    fn support_through_zero_rejected() {
        let f = BandlimitedFunction::indicator(&iv(-1, 1, 1, 1), Amp::one());
        let psi = BandlimitedSystem::from_members(SystemRole::Generators, vec![f]);
        assert!(matches!(
            negative_dilates(&psi, 2),
            Err(BlError::CertificateFailure { .. })
        ));
    }

    #[test]
    fn journe_dilates() {
        let k = FrequencySet::from_intervals([
            (RationalPi::new(4, 7), RationalPi::pi()),
            (RationalPi::new(4, 1), RationalPi::new(32, 7)),
        ])
        .unwrap();
        let psi_fn = BandlimitedFunction::indicator(&k.symmetrized(), Amp::one());
        let psi = BandlimitedSystem::from_members(SystemRole::Generators, vec![psi_fn]);
        let (h, cert, _) = negative_dilates(&psi, 2).unwrap();
        assert_eq!(cert.inner, RationalPi::new(4, 7));
        assert_eq!(cert.outer, RationalPi::new(32, 7));
        // 32/7·2^{−j} ≤ 1/2 first at j = 4 (32/7·1/8 = 4/7 > 1/2, /16 = 2/7)
        assert_eq!(cert.j_star, 4);
        // ĥ₂ supported on ±2^{−2}K
        let expect = FrequencySet::from_intervals([
            (RationalPi::new(1, 7), RationalPi::new(1, 4)),
            (RationalPi::new(1, 1), RationalPi::new(8, 7)),
        ])
        .unwrap()
        .symmetrized();
        assert_eq!(h.members()[1].support(), expect);
    }
}
