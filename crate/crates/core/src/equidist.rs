//! Averages of ln|x − α|_v over the roots of Φ_{d,n}, compared with their
//! limits, and the product-formula bookkeeping around them.
//!
//! Φ_{d,n} is monic, so Π_x (α − x) = Φ_{d,n}(α) and the average over the
//! full root set is exactly ln|Φ_{d,n}(α)|_v / D_n at every place.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynpoly::{gleason_degree, gleason_value, FamilyDegree};
use crate::error::{Error, Result};
use crate::green::{default_escape_radius, green_arch, membership, MembershipVerdict};
use crate::heights::{
    canonical_height_critical_value, is_pcf_rational, product_formula_exact, valuation_decomposition, LocalFactor,
    Place, PlaceValuation,
};
use crate::numtheory::{ln_abs_rational, rational_to_f64, valuation};
use crate::rootfind::gleason_roots;

/// Iteration budget for Green's function targets and membership flags.
pub const GREEN_MAX_ITER: usize = 500;
/// Orbit budget for the PCF warning.
pub const PCF_BUDGET: usize = 64;

/// Exact average of ln|x − α|_v over the roots x of Φ_{d,n}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogAverage {
    pub d: u32,
    pub n: u32,
    pub dn: u64,
    pub place: Place,
    pub average: f64,
    /// v_p(Φ_{d,n}(α)) at a finite place; the average is then
    /// −(valuation / D_n)·ln p.
    pub valuation: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistRow {
    pub d: u32,
    pub n: u32,
    pub dn: u64,
    pub place: Place,
    pub average: f64,
    pub target: f64,
    pub gap: f64,
    pub valuation: Option<i64>,
}

/// Membership of α as a heuristic for the boundary hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisFlag {
    /// The critical orbit escapes, so α is off the multibrot set.
    Exterior,
    /// Bounded for the whole budget; α may lie on the boundary.
    BoundedAtBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistTable {
    pub d: u32,
    #[serde(with = "crate::serde_big::rational")]
    pub alpha: BigRational,
    pub place: Place,
    pub target: f64,
    pub rows: Vec<EquidistRow>,
    /// Periods n with Φ_{d,n}(α) = 0.
    pub skipped: Vec<u32>,
    /// Set when z^d + α is PCF, where the limit statement does not apply.
    pub alpha_is_pcf: bool,
    pub hypothesis: HypothesisFlag,
}

fn dn_u64(d: FamilyDegree, n: u32) -> Result<u64> {
    let dn = gleason_degree(d, n);
    u64::try_from(dn).map_err(|_| Error::ResourceLimit {
        what: "gleason degree",
        value: dn,
        limit: u64::MAX as u128,
    })
}

fn nonzero_value(d: FamilyDegree, n: u32, alpha: &BigRational) -> Result<BigRational> {
    let v = gleason_value(d, n, alpha)?;
    if v.is_zero() {
        return Err(Error::AlphaIsRoot { n });
    }
    Ok(v)
}

/// (1/D_n) Σ_x ln|x − α|_v, computed exactly from Φ_{d,n}(α).
pub fn average_log_distance_exact(d: FamilyDegree, n: u32, alpha: &BigRational, place: Place) -> Result<LogAverage> {
    let dn = dn_u64(d, n)?;
    let value = nonzero_value(d, n, alpha)?;
    let (average, val) = match place {
        Place::Infinite => (ln_abs_rational(&value) / dn as f64, None),
        Place::Prime(p) => {
            let v = valuation(&value, p)?;
            let coef = BigRational::new(BigInt::from(-v), BigInt::from(dn));
            (rational_to_f64(&coef) * (p as f64).ln(), Some(v))
        }
    };
    Ok(LogAverage {
        d: d.get(),
        n,
        dn,
        place,
        average,
        valuation: val,
    })
}

/// Direct root sum, for cross-checking the exact value at the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericAverage {
    pub average: f64,
    pub min_distance: f64,
    pub max_residual: f64,
}

/// (1/D_n) Σ ln|x − α| over numerically computed roots of Φ_{d,n}.
pub fn average_log_distance_numeric(d: FamilyDegree, n: u32, alpha: Complex64, tol: f64) -> Result<NumericAverage> {
    let roots = gleason_roots(d, n, tol)?;
    let distances: Vec<f64> = roots.roots.iter().map(|z| (z - alpha).norm()).collect();
    let min_distance = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let guard = 10.0 * roots.max_residual;
    if min_distance.is_nan() || min_distance <= guard {
        return Err(Error::TooCloseToRoot {
            distance: min_distance,
            guard,
        });
    }
    let sum = neumaier_sum(distances.iter().map(|r| r.ln()));
    Ok(NumericAverage {
        average: sum / distances.len() as f64,
        min_distance,
        max_residual: roots.max_residual,
    })
}

fn neumaier_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Limit of the averages: G_d(α) at ∞ and ln max(1, |α|_p) at p.
pub fn equidist_target(d: FamilyDegree, alpha: &BigRational, place: Place) -> Result<f64> {
    Ok(match place {
        Place::Infinite => {
            let c = Complex64::new(rational_to_f64(alpha), 0.0);
            green_arch(d, c, GREEN_MAX_ITER, default_escape_radius(d, c)).value
        }
        Place::Prime(p) => {
            if alpha.is_zero() {
                0.0
            } else {
                (-valuation(alpha, p)?).max(0) as f64 * (p as f64).ln()
            }
        }
    })
}

fn row(avg: LogAverage, alpha: &BigRational, target: f64) -> EquidistRow {
    let gap = match (avg.place, avg.valuation) {
        (Place::Prime(p), Some(v)) => {
            // (−v/D_n − m)·ln p, zero exactly when the rational part is
            let m = if alpha.is_zero() {
                0
            } else {
                (-valuation(alpha, p).unwrap_or(0)).max(0)
            };
            let coef = BigRational::new(BigInt::from(-v), BigInt::from(avg.dn)) - BigRational::from_integer(m.into());
            rational_to_f64(&coef) * (p as f64).ln()
        }
        _ => avg.average - target,
    };
    EquidistRow {
        d: avg.d,
        n: avg.n,
        dn: avg.dn,
        place: avg.place,
        average: avg.average,
        target,
        gap,
        valuation: avg.valuation,
    }
}

/// Rows for n = 1..=n_max, sorted by n; periods where α is a root are skipped.
pub fn equidist_table(d: FamilyDegree, alpha: &BigRational, n_max: u32, place: Place) -> Result<EquidistTable> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    let target = equidist_target(d, alpha, place)?;
    let results: Vec<(u32, Result<LogAverage>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| (n, average_log_distance_exact(d, n, alpha, place)))
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in results {
        match r {
            Ok(avg) => rows.push(row(avg, alpha, target)),
            Err(Error::AlphaIsRoot { .. }) => skipped.push(n),
            Err(e) => return Err(e),
        }
    }
    let c = Complex64::new(rational_to_f64(alpha), 0.0);
    let hypothesis = match membership(d, c, GREEN_MAX_ITER) {
        MembershipVerdict::Exterior(_) => HypothesisFlag::Exterior,
        MembershipVerdict::BoundedAtBudget { .. } => HypothesisFlag::BoundedAtBudget,
    };
    Ok(EquidistTable {
        d: d.get(),
        alpha: alpha.clone(),
        place,
        target,
        rows,
        skipped,
        alpha_is_pcf: is_pcf_rational(d, alpha, PCF_BUDGET)?,
        hypothesis,
    })
}

/// Place-by-place breakdown of ln|Φ_{d,n}(α)|_v / D_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductFormulaWitness {
    pub d: u32,
    pub n: u32,
    pub dn: u64,
    #[serde(with = "crate::serde_big::rational")]
    pub value: BigRational,
    pub entries: Vec<ScaledPlace>,
    /// Π base^valuation over the finite entries equals |Φ_{d,n}(α)|.
    pub exact_zero: bool,
    /// Floating-point sum of the scaled terms, for display.
    pub float_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledPlace {
    pub factor: LocalFactor,
    pub valuation: i64,
    pub average: f64,
}

pub fn product_formula_check(d: FamilyDegree, n: u32, alpha: &BigRational) -> Result<ProductFormulaWitness> {
    let dn = dn_u64(d, n)?;
    let value = nonzero_value(d, n, alpha)?;
    let entries = valuation_decomposition(&value)?;
    let exact_zero = product_formula_exact(&value, &entries);
    let scaled: Vec<ScaledPlace> = entries
        .into_iter()
        .map(
            |PlaceValuation {
                 factor,
                 valuation,
                 log_abs,
             }| ScaledPlace {
                factor,
                valuation,
                average: log_abs / dn as f64,
            },
        )
        .collect();
    let float_sum = neumaier_sum(scaled.iter().map(|e| e.average));
    Ok(ProductFormulaWitness {
        d: d.get(),
        n,
        dn,
        value,
        entries: scaled,
        exact_zero,
        float_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassRow {
    pub n: u32,
    pub dn: u64,
    /// Σ_{v∈S} of the averages.
    pub s_term_sum: f64,
    /// Σ_{v∉S} of the averages.
    pub complement_mass: f64,
    pub height_target: f64,
    pub excess: f64,
    /// The S-part and the complement multiply to 1 exactly.
    pub exact_balance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassTable {
    pub d: u32,
    #[serde(with = "crate::serde_big::rational")]
    pub alpha: BigRational,
    pub s_primes: Vec<u64>,
    pub height_target: f64,
    pub rows: Vec<MassRow>,
    pub skipped: Vec<u32>,
}

/// Strip every prime of S from x: the result Y satisfies
/// ln Y = Σ_{v∈S} ln|x|_v.
fn s_part(x: &BigRational, s_primes: &[u64]) -> BigRational {
    let strip = |mut v: BigUint| {
        for &p in s_primes {
            let p = BigUint::from(p);
            loop {
                let (q, r) = v.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                v = q;
            }
        }
        BigInt::from(v)
    };
    BigRational::new(
        strip(x.numer().magnitude().clone()),
        strip(x.denom().magnitude().clone()),
    )
}

fn mass_row(d: FamilyDegree, n: u32, alpha: &BigRational, s_primes: &[u64], height: f64) -> Result<MassRow> {
    let dn = dn_u64(d, n)?;
    let value = nonzero_value(d, n, alpha)?;
    let y_s = s_part(&value, s_primes);
    let s_term_sum = ln_abs_rational(&y_s) / dn as f64;
    // Y_C = Π_{p∉S} |x|_p, rebuilt from the factorization of the S-free part
    let entries = valuation_decomposition(&y_s)?;
    let outside_s = entries.iter().all(|e| match &e.factor {
        LocalFactor::Infinite => true,
        LocalFactor::Prime { value: p } => !s_primes.iter().any(|&q| *p == BigUint::from(q)),
        LocalFactor::Unfactored { value: v } => s_primes.iter().all(|&q| !(v % q).is_zero()),
    });
    let exact_balance = outside_s && product_formula_exact(&y_s, &entries);
    Ok(MassRow {
        n,
        dn,
        s_term_sum,
        complement_mass: -s_term_sum,
        height_target: height,
        excess: s_term_sum - height,
        exact_balance,
    })
}

/// For each n, split the vanishing sum of ln|Φ_{d,n}(α)|_v over all places
/// into the part inside S and the part outside it.
pub fn non_integrality_mass(d: FamilyDegree, alpha: &BigRational, n_max: u32, s_primes: &[u64]) -> Result<MassTable> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    for &p in s_primes {
        if !crate::modular::is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
    }
    let mut s: Vec<u64> = s_primes.to_vec();
    s.sort_unstable();
    s.dedup();
    let den = alpha.denom().magnitude();
    let stripped = s_part(&BigRational::from_integer(BigInt::from(den.clone())), &s);
    if !stripped.is_integer() || stripped.numer().abs() != BigInt::from(1) {
        return Err(Error::InvalidArgument(
            "S must contain every prime dividing den(alpha)".into(),
        ));
    }
    let height = canonical_height_critical_value(d, alpha, GREEN_MAX_ITER, None).total;
    let results: Vec<(u32, Result<MassRow>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| (n, mass_row(d, n, alpha, &s, height)))
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(Error::AlphaIsRoot { .. }) => skipped.push(n),
            Err(e) => return Err(e),
        }
    }
    Ok(MassTable {
        d: d.get(),
        alpha: alpha.clone(),
        s_primes: s,
        height_target: height,
        rows,
        skipped,
    })
}
