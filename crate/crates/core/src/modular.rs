//! Word-sized modular arithmetic used by the multi-prime resultant.

use std::sync::Mutex;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_CEILING: u64 = 1 << 62;

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The first `count` primes below 2^62, in decreasing order.
///
/// The list is cached and only ever extended, so a given index always names
/// the same prime.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut cache = PRIMES.lock().unwrap_or_else(|e| e.into_inner());
    let mut candidate = cache.last().map_or(PRIME_CEILING - 1, |&p| p - 2);
    while cache.len() < count {
        if is_prime_u64(candidate) {
            cache.push(candidate);
        }
        candidate -= 2;
    }
    cache[..count].to_vec()
}

/// Dense polynomial over F_p, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub coeffs: Vec<u64>,
    pub p: u64,
}

impl ModPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { coeffs, p }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Remainder of `self` divided by `divisor` (which must be nonzero).
    pub fn rem(&self, divisor: &ModPoly) -> ModPoly {
        let p = self.p;
        let db = divisor.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let inv_lead = inv_mod(divisor.lead(), p);
        while r.len() > db {
            let top = r.len() - 1;
            let q = mul_mod(r[top], inv_lead, p);
            if q != 0 {
                let shift = top - db;
                for (i, &b) in divisor.coeffs.iter().enumerate() {
                    r[shift + i] = sub_mod(r[shift + i], mul_mod(q, b, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly::new(r, p)
    }

    /// Resultant of `self` and `other` over F_p, following the Euclidean
    /// remainder sequence.
    ///
    /// Both inputs must have the degrees of their integer preimages, i.e. the
    /// prime must not divide either leading coefficient.
    pub fn resultant(&self, other: &ModPoly) -> u64 {
        let p = self.p;
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.is_zero() || b.is_zero() {
            return 0;
        }
        let mut acc = 1u64;
        loop {
            let m = a.degree().unwrap();
            let n = b.degree().unwrap();
            if m == 0 {
                return mul_mod(acc, pow_mod(a.lead(), n as u64, p), p);
            }
            if n == 0 {
                return mul_mod(acc, pow_mod(b.lead(), m as u64, p), p);
            }
            let r = a.rem(&b);
            let Some(k) = r.degree() else {
                return 0;
            };
            // Res(a, b) = (-1)^{mn} lc(b)^{m-k} Res(b, a mod b)
            if (m * n) % 2 == 1 {
                acc = sub_mod(0, acc, p);
            }
            acc = mul_mod(acc, pow_mod(b.lead(), (m - k) as u64, p), p);
            a = b;
            b = r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..5000 {
            let naive = n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0);
            assert_eq!(is_prime_u64(n), naive, "n = {n}");
        }
        assert!(is_prime_u64(4_293_490_987));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn prime_cache_is_stable() {
        let a = large_primes(5);
        let b = large_primes(12);
        assert_eq!(a[..], b[..5]);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
        assert!(b.iter().all(|&p| p < PRIME_CEILING && is_prime_u64(p)));
    }

    #[test]
    fn small_resultants_mod_p() {
        let p = 1_000_000_007;
        // Res(x, x + 2) = 2
        let a = ModPoly::new(vec![0, 1], p);
        let b = ModPoly::new(vec![2, 1], p);
        assert_eq!(a.resultant(&b), 2);
        // Res(x + 2, x) = (-1)^{1} * 2
        assert_eq!(b.resultant(&a), p - 2);
        // Res(x^2 - 1, x - 1) = 0
        let c = ModPoly::new(vec![p - 1, 0, 1], p);
        let e = ModPoly::new(vec![p - 1, 1], p);
        assert_eq!(c.resultant(&e), 0);
    }
}
