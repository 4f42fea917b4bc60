//! Places of Q, p-adic valuations, product-formula decompositions, and
//! canonical heights of rational parameters.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dynpoly::FamilyDegree;
use crate::error::{Error, Result};
use crate::green::{default_escape_radius, green_arch, GreenValue};
use crate::numtheory::{factorize, ln_abs_rational, ln_uint, rational_to_f64, FactorLimits};

pub use crate::numtheory::valuation as padic_valuation;

/// Bit size past which an exact integer orbit is abandoned.
pub const ORBIT_BIT_CAP: u64 = 1_000_000;

/// A place of Q: the archimedean absolute value or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinite),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("place must be 'inf' or a prime, got {other:?}")))?;
                if crate::modular::is_prime_u64(p) {
                    Ok(Place::Prime(p))
                } else {
                    Err(Error::InvalidArgument(format!("{p} is not prime")))
                }
            }
        }
    }
}

impl From<Place> for String {
    fn from(p: Place) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Place {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Which absolute value a [`PlaceValuation`] entry stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalFactor {
    Infinite,
    Prime {
        #[serde(with = "crate::serde_big::uint")]
        value: BigUint,
    },
    /// A composite that resisted factorization; the entry aggregates every
    /// place dividing it, all with the same valuation.
    Unfactored {
        #[serde(with = "crate::serde_big::uint")]
        value: BigUint,
    },
}

/// One term ln|x|_v of the product formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceValuation {
    pub factor: LocalFactor,
    /// Exponent of the prime (or unfactored block) in x; 0 for the infinite place.
    pub valuation: i64,
    pub log_abs: f64,
}

/// ln|x|_v over every place where it is nonzero: first the archimedean term
/// ln|x|, then -v·ln(base) for each prime (or unfactored composite) dividing
/// the numerator or denominator.
pub fn valuation_decomposition(x: &BigRational) -> Result<Vec<PlaceValuation>> {
    valuation_decomposition_with(x, FactorLimits::default())
}

pub fn valuation_decomposition_with(x: &BigRational, limits: FactorLimits) -> Result<Vec<PlaceValuation>> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = vec![PlaceValuation {
        factor: LocalFactor::Infinite,
        valuation: 0,
        log_abs: ln_abs_rational(x),
    }];
    for (part, sign) in [(x.numer(), 1i64), (x.denom(), -1i64)] {
        let f = factorize(part.magnitude(), limits);
        for (p, e) in f.primes {
            let v = sign * e as i64;
            out.push(PlaceValuation {
                log_abs: -(v as f64) * ln_uint(&p),
                factor: LocalFactor::Prime { value: p },
                valuation: v,
            });
        }
        if let Some(rest) = f.cofactor {
            out.push(PlaceValuation {
                log_abs: -(sign as f64) * ln_uint(&rest),
                factor: LocalFactor::Unfactored { value: rest },
                valuation: sign,
            });
        }
    }
    out[1..].sort_by(|a, b| factor_base(&a.factor).cmp(factor_base(&b.factor)));
    Ok(out)
}

fn factor_base(f: &LocalFactor) -> &BigUint {
    static ZERO: BigUint = BigUint::ZERO;
    match f {
        LocalFactor::Infinite => &ZERO,
        LocalFactor::Prime { value: p } | LocalFactor::Unfactored { value: p } => p,
    }
}

/// Exact check of the product formula at the level of integer valuations:
/// Π base^valuation over the finite entries must equal |x|, so that the
/// archimedean term is exactly the negated finite sum.
pub fn product_formula_exact(x: &BigRational, entries: &[PlaceValuation]) -> bool {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for e in entries {
        let base = match &e.factor {
            LocalFactor::Infinite => continue,
            LocalFactor::Prime { value: p } | LocalFactor::Unfactored { value: p } => BigInt::from(p.clone()),
        };
        let power = base.pow(e.valuation.unsigned_abs() as u32);
        if e.valuation >= 0 {
            num *= power;
        } else {
            den *= power;
        }
    }
    BigRational::new(num, den) == x.abs()
}

/// Non-archimedean contribution at one prime dividing den(α).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePart {
    pub factor: LocalFactor,
    /// max(0, -v_p(α)).
    pub multiplicity: u64,
    pub log_term: f64,
}

/// Canonical height of the critical value, split by place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightBreakdown {
    pub arch_part: f64,
    pub arch_error_bound: f64,
    pub arch_escaped: bool,
    pub finite_parts: Vec<FinitePart>,
    pub total: f64,
}

/// ĥ_{d,α}(α) = G_d(α) + Σ_p max(0, -v_p(α)) ln p = G_d(α) + ln den(α), using
/// G_{d,p}(α) = ln max(1, |α|_p) at every prime.
pub fn canonical_height_critical_value(
    d: FamilyDegree,
    alpha: &BigRational,
    max_iter: usize,
    escape_radius: Option<f64>,
) -> HeightBreakdown {
    let c = Complex64::new(rational_to_f64(alpha), 0.0);
    let radius = escape_radius.unwrap_or_else(|| default_escape_radius(d, c));
    let g: GreenValue = green_arch(d, c, max_iter, radius);
    let mut finite_parts = Vec::new();
    if !alpha.denom().is_one() {
        let f = factorize(alpha.denom().magnitude(), FactorLimits::default());
        for (p, e) in f.primes {
            finite_parts.push(FinitePart {
                log_term: e as f64 * ln_uint(&p),
                factor: LocalFactor::Prime { value: p },
                multiplicity: e as u64,
            });
        }
        if let Some(rest) = f.cofactor {
            finite_parts.push(FinitePart {
                log_term: ln_uint(&rest),
                factor: LocalFactor::Unfactored { value: rest },
                multiplicity: 1,
            });
        }
    }
    let total = g.value + finite_parts.iter().map(|f| f.log_term).sum::<f64>();
    HeightBreakdown {
        arch_part: g.value,
        arch_error_bound: g.error_bound,
        arch_escaped: g.escaped,
        finite_parts,
        total,
    }
}

/// Whether z^d + α is postcritically finite, for rational α.
///
/// Non-integers are never PCF (PCF parameters are algebraic integers), nor
/// is any α with |α| > 2^{1/(d-1)}. Otherwise the exact integer orbit of 0
/// is followed until it repeats (PCF), provably escapes (not PCF), or the
/// budget runs out (reported as not PCF).
pub fn is_pcf_rational(d: FamilyDegree, alpha: &BigRational, budget: usize) -> Result<bool> {
    if !alpha.denom().is_one() {
        return Ok(false);
    }
    let a = alpha.numer();
    let bound = d.critical_radius();
    let a_abs = a.abs().to_f64().unwrap_or(f64::INFINITY);
    if a_abs > bound {
        return Ok(false);
    }
    // |z| > max(|a|, 2^{1/(d-1)}) forces escape
    let escape = a_abs.max(bound);
    let mut seen: HashSet<BigInt> = HashSet::new();
    let mut z = BigInt::zero();
    seen.insert(z.clone());
    for _ in 0..budget {
        z = num_traits::pow(z, d.get() as usize) + a;
        if !seen.insert(z.clone()) {
            return Ok(true);
        }
        if z.bits() > ORBIT_BIT_CAP {
            return Err(Error::ResourceLimit {
                what: "orbit bit length",
                value: z.bits() as u128,
                limit: ORBIT_BIT_CAP as u128,
            });
        }
        if z.abs().to_f64().unwrap_or(f64::INFINITY) > escape {
            return Ok(false);
        }
    }
    Ok(false)
}
