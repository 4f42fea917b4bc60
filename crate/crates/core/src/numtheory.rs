//! Elementary number theory: Möbius function, divisors, p-adic valuations,
//! logarithms of big numbers, and integer factorization.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modular::is_prime_u64;

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct prime factors of a machine integer.
pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in a nonzero integer.
pub fn valuation_int(x: &BigInt, p: u64) -> u64 {
    assert!(p >= 2);
    assert!(!x.is_zero(), "valuation of zero");
    let mut m = x.magnitude().clone();
    let mut v = 0u64;
    // strip p^k in blocks so huge valuations do not cost one division each
    let mut block = BigUint::from(p);
    let mut block_exp = 1u64;
    loop {
        let (q, r) = m.div_rem(&block);
        if r.is_zero() {
            m = q;
            v += block_exp;
            if block_exp < 1 << 12 {
                block = &block * &block;
                block_exp *= 2;
            }
        } else if block_exp == 1 {
            return v;
        } else {
            block = BigUint::from(p);
            block_exp = 1;
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(valuation_int(x.numer(), p) as i64 - valuation_int(x.denom(), p) as i64)
}

/// Natural logarithm of |x| for a nonzero big integer, accurate to a few ulps
/// regardless of size.
pub fn ln_abs_int(x: &BigInt) -> f64 {
    ln_uint(x.magnitude())
}

pub fn ln_uint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln |x| for a nonzero rational.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    ln_abs_int(x.numer()) - ln_abs_int(x.denom())
}

/// Floating-point value of a rational, without overflow for huge operands.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    let n = x.numer();
    let d = x.denom();
    if n.is_zero() {
        return 0.0;
    }
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        return n.to_f64().unwrap() / d.to_f64().unwrap();
    }
    sign * (ln_abs_int(n) - ln_abs_int(d)).exp()
}

/// Outcome of factoring a positive integer with bounded effort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime (or probable-prime, for factors above 2^64) factors with multiplicity, sorted.
    pub primes: Vec<(BigUint, u32)>,
    /// Composite part that resisted factorization, if any.
    pub cofactor: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Multiply everything back together.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.primes {
            acc *= p.pow(*e);
        }
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }
}

/// Effort limits for [`factorize`].
#[derive(Debug, Clone, Copy)]
pub struct FactorLimits {
    pub trial_bound: u32,
    /// Composites larger than this many bits are not handed to Pollard rho.
    pub rho_max_bits: u64,
    pub rho_iterations: u64,
}

impl Default for FactorLimits {
    fn default() -> Self {
        FactorLimits {
            trial_bound: 1_000_000,
            rho_max_bits: 192,
            rho_iterations: 2_000_000,
        }
    }
}

fn small_primes() -> &'static [u32] {
    static SIEVE: OnceLock<Vec<u32>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let limit = FactorLimits::default().trial_bound as usize;
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

const MR_BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin with fixed bases; deterministic below 3.3e24 and a strong
/// probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of an odd
/// composite `n`, or `None` once the iteration budget is spent.
pub fn pollard_rho(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for increment in 1u32.. {
        if spent >= max_iterations {
            return None;
        }
        let c = BigUint::from(increment);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
                spent += BATCH;
            }
            r *= 2;
            if spent >= max_iterations {
                break;
            }
        }
        if g == *n {
            // batch overshot; walk back one step at a time
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

/// Factor a positive integer: trial division up to `limits.trial_bound`, then
/// Pollard rho on what remains. Anything that resists is kept as an explicit
/// composite cofactor.
pub fn factorize(n: &BigUint, limits: FactorLimits) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if p > limits.trial_bound {
            break;
        }
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0u32;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            primes.push((pb, e));
        }
    }
    let mut cofactor = None;
    let mut pending = vec![rest];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push_prime(&mut primes, m);
            continue;
        }
        let split = if m.bits() <= limits.rho_max_bits {
            pollard_rho(&m, limits.rho_iterations)
        } else {
            None
        };
        match split {
            Some(f) => {
                let other = &m / &f;
                pending.push(f);
                pending.push(other);
            }
            None => {
                cofactor = Some(match cofactor {
                    None => m,
                    Some(c) => c * m,
                });
            }
        }
    }
    primes.sort();
    Factorization { primes, cofactor }
}

fn push_prime(primes: &mut Vec<(BigUint, u32)>, p: BigUint) {
    if let Some(entry) = primes.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        primes.push((p, 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(7), -1);
        assert_eq!(mobius(30), -1);
        // sum over divisors of n of mu(d) is [n == 1]
        for n in 1..200 {
            let s: i32 = divisors(n).into_iter().map(mobius).sum();
            assert_eq!(s, i32::from(n == 1));
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn valuations() {
        let x = BigRational::new(8.into(), 3.into());
        assert_eq!(valuation(&x, 2).unwrap(), 3);
        assert_eq!(valuation(&x, 3).unwrap(), -1);
        assert_eq!(valuation(&x, 5).unwrap(), 0);
        assert_eq!(valuation(&BigRational::zero(), 2), Err(Error::ZeroInput));
        let big = BigInt::from(3).pow(5000u32) * 7;
        assert_eq!(valuation_int(&big, 3), 5000);
        assert_eq!(valuation_int(&big, 7), 1);
    }

    #[test]
    fn big_logs() {
        let x = BigInt::from(10).pow(400u32);
        assert!((ln_abs_int(&x) - 400.0 * 10f64.ln()).abs() < 1e-9);
        let r = BigRational::new(BigInt::from(1), BigInt::from(3).pow(2000u32));
        assert!((ln_abs_rational(&r) + 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn factor_mixed() {
        let n = BigUint::from(2u32).pow(10)
            * BigUint::from(999_983u32)
            * BigUint::from(1_000_003u32)
            * BigUint::from(1_000_000_007u64);
        let f = factorize(&n, FactorLimits::default());
        assert!(f.is_complete());
        assert_eq!(f.product(), n);
        assert_eq!(f.primes[0], (BigUint::from(2u32), 10));
        assert_eq!(f.primes.len(), 4);
    }

    #[test]
    fn rho_splits_semiprime() {
        let p = BigUint::from(4_294_967_291u64);
        let q = BigUint::from(4_294_967_279u64);
        let n = &p * &q;
        let f = factorize(&n, FactorLimits::default());
        assert!(f.is_complete());
        assert_eq!(f.primes, vec![(q, 1), (p, 1)]);
    }

    #[test]
    fn hard_composites_are_kept() {
        let p = BigUint::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        let q = BigUint::parse_bytes(b"162259276829213363391578010288127", 10).unwrap();
        let n = &p * &q;
        let f = factorize(
            &n,
            FactorLimits {
                rho_iterations: 1000,
                ..Default::default()
            },
        );
        assert_eq!(f.cofactor, Some(n.clone()));
        assert_eq!(f.product(), n);
    }
}
