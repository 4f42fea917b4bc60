//! S-integrality certificates between root sets of monic integer
//! polynomials, carried by exact resultants.
//!
//! For monic a, b ∈ Z[c] every root is an algebraic integer, and
//! |Res(a, b)| = Π |α - β| over all root pairs. A prime p divides the
//! resultant exactly when some conjugates of a root of a and a root of b are
//! p-adically closer than 1, so the prime support of the resultant is the
//! set of finite places where S-integrality can fail.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynpoly::{Constructor, FamilyDegree};
use crate::error::{Error, Result};
use crate::numtheory::{factorize, prime_factors_u64, FactorLimits};
use crate::poly::IntPolynomial;
use crate::resultant::resultant;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_big::uint")]
    pub prime: BigUint,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantCertificate {
    pub poly_a: String,
    pub poly_b: String,
    #[serde(with = "crate::serde_big::int")]
    pub resultant: BigInt,
    pub prime_support: Vec<PrimePower>,
    /// Composite part of |resultant| that resisted factorization.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::serde_big::opt_uint"
    )]
    pub unfactored: Option<BigUint>,
    pub is_unit: bool,
}

impl ResultantCertificate {
    pub fn support_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.prime_support.iter().map(|pp| &pp.prime)
    }

    /// Whether every prime of the support lies in `allowed` (and nothing
    /// was left unfactored).
    pub fn support_within(&self, allowed: &[u64]) -> bool {
        self.unfactored.is_none()
            && self
                .support_primes()
                .all(|p| allowed.iter().any(|&q| *p == BigUint::from(q)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SIntegralityVerdict {
    pub certificate: ResultantCertificate,
    /// Finite primes of S; the archimedean place is always in S.
    pub s_primes: Vec<u64>,
    pub integral: bool,
    pub violating_primes: Vec<PrimePower>,
}

/// Exact resultant of two monic polynomials with its prime factorization.
pub fn certify_resultant(a: &IntPolynomial, b: &IntPolynomial) -> Result<ResultantCertificate> {
    certify_labeled(a, b, a.to_string(), b.to_string())
}

pub fn certify_labeled(
    a: &IntPolynomial,
    b: &IntPolynomial,
    label_a: String,
    label_b: String,
) -> Result<ResultantCertificate> {
    for (p, name) in [(a, "first"), (b, "second")] {
        if p.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !p.is_monic() {
            return Err(Error::InvalidArgument(format!("{name} polynomial is not monic")));
        }
    }
    let res = resultant(a, b);
    if res.is_zero() {
        return Err(Error::CommonRoot);
    }
    let magnitude = res.magnitude();
    let (prime_support, unfactored) = if magnitude.is_one() {
        (Vec::new(), None)
    } else {
        let f = factorize(magnitude, FactorLimits::default());
        let support = f
            .primes
            .into_iter()
            .map(|(prime, multiplicity)| PrimePower { prime, multiplicity })
            .collect();
        (support, f.cofactor)
    };
    Ok(ResultantCertificate {
        poly_a: label_a,
        poly_b: label_b,
        is_unit: magnitude.is_one(),
        resultant: res,
        prime_support,
        unfactored,
    })
}

/// Whether each root set is S-integral relative to the other, for S made of
/// the archimedean place and `s_primes`.
pub fn s_integrality(a: &IntPolynomial, b: &IntPolynomial, s_primes: &[u64]) -> Result<SIntegralityVerdict> {
    let certificate = certify_resultant(a, b)?;
    Ok(verdict_from(certificate, s_primes))
}

pub fn verdict_from(certificate: ResultantCertificate, s_primes: &[u64]) -> SIntegralityVerdict {
    // strip S-primes from |Res| exactly; integrality does not depend on
    // having factored the rest
    let mut rest = certificate.resultant.magnitude().clone();
    for &p in s_primes {
        if p < 2 {
            continue;
        }
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
    }
    let violating_primes = certificate
        .prime_support
        .iter()
        .filter(|pp| !s_primes.iter().any(|&q| pp.prime == BigUint::from(q)))
        .cloned()
        .collect();
    let mut s_primes = s_primes.to_vec();
    s_primes.sort_unstable();
    s_primes.dedup();
    SIntegralityVerdict {
        integral: rest.is_one(),
        certificate,
        s_primes,
        violating_primes,
    }
}

/// Certificate for one pair of Gleason polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GleasonPairCell {
    pub n: u32,
    pub n_other: u32,
    pub certificate: ResultantCertificate,
    /// A non-unit resultant would contradict S-integrality with S = {∞}.
    pub violation: bool,
}

/// Resultants Res(Φ_{d,n}, Φ_{d,n'}) for all 1 <= n < n' <= n_max.
pub fn gleason_pairwise_unit_table(d: FamilyDegree, n_max: u32) -> Result<Vec<GleasonPairCell>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be >= 2".into()));
    }
    let mut ctor = Constructor::new(d);
    let polys = (1..=n_max)
        .map(|n| ctor.gleason(n).map(|g| g.poly))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(u32, u32)> = (1..=n_max).flat_map(|n| (n + 1..=n_max).map(move |m| (n, m))).collect();
    pairs
        .into_par_iter()
        .map(|(n, m)| {
            let certificate = certify_labeled(
                &polys[n as usize - 1],
                &polys[m as usize - 1],
                format!("Phi_{{{d},{n}}}"),
                format!("Phi_{{{d},{m}}}"),
            )?;
            Ok(GleasonPairCell {
                n,
                n_other: m,
                violation: !certificate.is_unit,
                certificate,
            })
        })
        .collect()
}

/// Certificate for a Gleason / Misiurewicz pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GleasonMisiurewiczCell {
    /// Period of the Gleason side.
    pub n: u32,
    /// Tail and period of the Misiurewicz side.
    pub m: u32,
    pub mis_period: u32,
    pub certificate: ResultantCertificate,
    /// Tail m differs from the Gleason side's tail 0, so the strictly
    /// preperiodic argument applies (true for every cell with m >= 2).
    pub hypothesis_applies: bool,
    /// Primes dividing d: where the argument allows the support to lie.
    pub predicted_primes: Vec<u64>,
    pub within_prediction: bool,
}

/// Resultants Res(Φ_{d,n}, M_{d,m,k}) for 1 <= n <= n_max, 2 <= m <= m_max,
/// 1 <= k <= k_max. Profiles with no Misiurewicz parameters are skipped.
pub fn gleason_misiurewicz_table(
    d: FamilyDegree,
    n_max: u32,
    m_max: u32,
    k_max: u32,
) -> Result<Vec<GleasonMisiurewiczCell>> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("m_max must be >= 2".into()));
    }
    if n_max < 1 || k_max < 1 {
        return Err(Error::InvalidArgument("period ranges must be nonempty".into()));
    }
    let mut ctor = Constructor::new(d);
    let gleasons = (1..=n_max)
        .map(|n| ctor.gleason(n).map(|g| g.poly))
        .collect::<Result<Vec<_>>>()?;
    let mut mis = Vec::new();
    for m in 2..=m_max {
        for k in 1..=k_max {
            match ctor.misiurewicz(m, k) {
                Ok(p) => mis.push((m, k, p.poly)),
                Err(Error::DegenerateEmpty { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let predicted_primes = prime_factors_u64(d.get() as u64);
    let jobs: Vec<(u32, usize)> = (1..=n_max).flat_map(|n| (0..mis.len()).map(move |j| (n, j))).collect();
    jobs.into_par_iter()
        .map(|(n, j)| {
            let (m, k, ref mp) = mis[j];
            let certificate = certify_labeled(
                &gleasons[n as usize - 1],
                mp,
                format!("Phi_{{{d},{n}}}"),
                format!("M_{{{d},{m},{k}}}"),
            )?;
            Ok(GleasonMisiurewiczCell {
                n,
                m,
                mis_period: k,
                within_prediction: certificate.support_within(&predicted_primes),
                hypothesis_applies: m != 0,
                predicted_primes: predicted_primes.clone(),
                certificate,
            })
        })
        .collect()
}
