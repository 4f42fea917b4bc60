//! Critical-orbit, Gleason and Misiurewicz polynomials of z^d + c.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{divisors, mobius};
use crate::poly::IntPolynomial;

/// Default ceiling on the degree of any critical-orbit polynomial we expand.
pub const DEFAULT_DEGREE_CAP: u64 = 1 << 16;

/// Degree d >= 2 of the family z^d + c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FamilyDegree(u32);

impl FamilyDegree {
    pub fn new(d: u32) -> Result<Self> {
        if d >= 2 {
            Ok(FamilyDegree(d))
        } else {
            Err(Error::InvalidArgument(format!("family degree must be >= 2, got {d}")))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Radius beyond which every orbit of z^d + c escapes when |c| is small.
    pub fn critical_radius(self) -> f64 {
        2f64.powf(1.0 / (self.0 as f64 - 1.0))
    }
}

impl TryFrom<u32> for FamilyDegree {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        FamilyDegree::new(d)
    }
}

impl From<FamilyDegree> for u32 {
    fn from(d: FamilyDegree) -> u32 {
        d.0
    }
}

impl fmt::Display for FamilyDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Gleason polynomial: its roots are the parameters whose critical point is
/// periodic of exact period `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GleasonPoly {
    pub d: FamilyDegree,
    pub n: u32,
    pub poly: IntPolynomial,
    pub degree: usize,
}

/// Misiurewicz polynomial: roots are the parameters whose critical orbit has
/// exact tail `m` and then cycles with exact period `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisiurewiczPoly {
    pub d: FamilyDegree,
    pub m: u32,
    pub n: u32,
    pub poly: IntPolynomial,
}

fn check_degree(d: FamilyDegree, iterate: u32, cap: u64) -> Result<()> {
    let value = (d.get() as u128).checked_pow(iterate.saturating_sub(1));
    match value {
        Some(v) if v <= cap as u128 => Ok(()),
        _ => Err(Error::ResourceLimit {
            what: "critical-orbit polynomial degree",
            value: value.unwrap_or(u128::MAX),
            limit: cap as u128,
        }),
    }
}

/// Builder that constructs dynamical polynomials for one family degree and
/// caches intermediate results, since Gleason and Misiurewicz polynomials
/// share the same critical-orbit polynomials.
#[derive(Debug, Clone)]
pub struct Constructor {
    d: FamilyDegree,
    cap: u64,
    orbit: Vec<IntPolynomial>,
    gleason: HashMap<u32, IntPolynomial>,
    misiurewicz: HashMap<(u32, u32), Option<IntPolynomial>>,
}

impl Constructor {
    pub fn new(d: FamilyDegree) -> Self {
        Self::with_cap(d, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(d: FamilyDegree, cap: u64) -> Self {
        Constructor {
            d,
            cap,
            orbit: Vec::new(),
            gleason: HashMap::new(),
            misiurewicz: HashMap::new(),
        }
    }

    pub fn degree(&self) -> FamilyDegree {
        self.d
    }

    /// f^n(0) as a polynomial in c (n >= 1).
    pub fn critical_orbit(&mut self, n: u32) -> Result<&IntPolynomial> {
        if n == 0 {
            return Err(Error::InvalidArgument("orbit index must be >= 1".into()));
        }
        check_degree(self.d, n, self.cap)?;
        let c = IntPolynomial::var();
        while self.orbit.len() < n as usize {
            let next = match self.orbit.last() {
                None => c.clone(),
                Some(prev) => &prev.pow(self.d.get()) + &c,
            };
            self.orbit.push(next);
        }
        Ok(&self.orbit[n as usize - 1])
    }

    /// Φ_{d,n}: product of f^ℓ(0)^μ(n/ℓ) over ℓ | n, realized as an exact
    /// quotient of the positive-exponent factors by the negative ones.
    pub fn gleason(&mut self, n: u32) -> Result<GleasonPoly> {
        if n == 0 {
            return Err(Error::InvalidArgument("period must be >= 1".into()));
        }
        if let Some(poly) = self.gleason.get(&n) {
            return Ok(self.wrap_gleason(n, poly.clone()));
        }
        self.critical_orbit(n)?;
        let mut numer = IntPolynomial::one();
        let mut denom = IntPolynomial::one();
        for l in divisors(n as u64) {
            let factor = &self.orbit[l as usize - 1];
            match mobius(n as u64 / l) {
                1 => numer = &numer * factor,
                -1 => denom = &denom * factor,
                _ => {}
            }
        }
        let poly = numer.exact_div(&denom)?;
        self.gleason.insert(n, poly.clone());
        Ok(self.wrap_gleason(n, poly))
    }

    fn wrap_gleason(&self, n: u32, poly: IntPolynomial) -> GleasonPoly {
        let degree = poly.degree().unwrap_or(0);
        GleasonPoly {
            d: self.d,
            n,
            poly,
            degree,
        }
    }

    /// Misiurewicz polynomial for tail `m >= 2` and period `n >= 1`.
    ///
    /// Starts from f^{m+n}(0) - f^m(0) and strips, as often as they divide,
    /// the Gleason polynomials Φ_{d,ℓ} (ℓ | n) and every Misiurewicz
    /// polynomial of a simpler profile (m', n') with m' <= m, n' | n.
    pub fn misiurewicz(&mut self, m: u32, n: u32) -> Result<MisiurewiczPoly> {
        if m < 2 || n < 1 {
            return Err(Error::InvalidArgument(format!(
                "Misiurewicz profile needs m >= 2 and n >= 1, got m = {m}, n = {n}"
            )));
        }
        match self.misiurewicz_inner(m, n)? {
            Some(poly) => Ok(MisiurewiczPoly { d: self.d, m, n, poly }),
            None => Err(Error::DegenerateEmpty { d: self.d.get(), m, n }),
        }
    }

    fn misiurewicz_inner(&mut self, m: u32, n: u32) -> Result<Option<IntPolynomial>> {
        if let Some(cached) = self.misiurewicz.get(&(m, n)) {
            return Ok(cached.clone());
        }
        self.critical_orbit(m + n)?;
        let mut rest = &self.orbit[(m + n) as usize - 1] - &self.orbit[m as usize - 1];
        let periods = divisors(n as u64);
        let mut factors = Vec::new();
        for &l in &periods {
            factors.push(self.gleason(l as u32)?.poly);
        }
        for tail in 2..=m {
            for &l in &periods {
                let l = l as u32;
                if (tail, l) == (m, n) {
                    continue;
                }
                if let Some(f) = self.misiurewicz_inner(tail, l)? {
                    factors.push(f);
                }
            }
        }
        for f in &factors {
            while let Some(q) = rest.checked_div(f) {
                rest = q;
            }
        }
        // f^{m+n}(0) - f^m(0) is monic up to sign once the lower terms cancel
        if rest.leading().is_some_and(|l| *l == -BigInt::one()) {
            rest = -rest;
        }
        let result = match rest.degree() {
            Some(deg) if deg > 0 => Some(rest),
            _ => None,
        };
        self.misiurewicz.insert((m, n), result.clone());
        Ok(result)
    }

    /// Exact critical orbit f^1(0), ..., f^len(0) at a rational parameter.
    pub fn orbit_at(&self, alpha: &BigRational, len: u32) -> Vec<BigRational> {
        critical_orbit_at(self.d, alpha, len)
    }
}

/// f^n(0) as a polynomial in c, with the default degree cap.
pub fn critical_orbit_poly(d: FamilyDegree, n: u32) -> Result<IntPolynomial> {
    Constructor::new(d).critical_orbit(n).cloned()
}

pub fn gleason(d: FamilyDegree, n: u32) -> Result<GleasonPoly> {
    Constructor::new(d).gleason(n)
}

pub fn misiurewicz(d: FamilyDegree, m: u32, n: u32) -> Result<MisiurewiczPoly> {
    Constructor::new(d).misiurewicz(m, n)
}

/// Closed-form degree of Φ_{d,n}: Σ_{ℓ | n} μ(n/ℓ) d^{ℓ-1}.
///
/// Panics if d^{n-1} does not fit in an i128.
pub fn gleason_degree(d: FamilyDegree, n: u32) -> u128 {
    assert!(n >= 1, "period must be >= 1");
    let total: i128 = divisors(n as u64)
        .into_iter()
        .map(|l| {
            let power = (d.get() as i128)
                .checked_pow(l as u32 - 1)
                .expect("d^(n-1) overflows i128");
            mobius(n as u64 / l) as i128 * power
        })
        .sum();
    total as u128
}

/// f^1(0), ..., f^len(0) evaluated exactly at a rational parameter.
pub fn critical_orbit_at(d: FamilyDegree, alpha: &BigRational, len: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len as usize);
    let mut z = BigRational::zero();
    for _ in 0..len {
        z = num_traits::pow(z, d.get() as usize) + alpha;
        out.push(z.clone());
    }
    out
}

/// Exact value Φ_{d,n}(α).
///
/// Uses the Möbius product of critical-orbit values, which avoids expanding
/// Φ_{d,n}. If some f^ℓ(0) vanishes at α (α is itself a center of period
/// dividing ℓ) the product is 0/0 and the polynomial is built instead.
pub fn gleason_value(d: FamilyDegree, n: u32, alpha: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("period must be >= 1".into()));
    }
    let orbit = critical_orbit_at(d, alpha, n);
    if orbit.iter().any(Zero::is_zero) {
        return Ok(gleason(d, n)?.poly.eval_rational(alpha));
    }
    let mut value = BigRational::one();
    for l in divisors(n as u64) {
        let term = &orbit[l as usize - 1];
        match mobius(n as u64 / l) {
            1 => value *= term,
            -1 => value /= term,
            _ => {}
        }
    }
    Ok(value)
}
