//! Exact resultants by multi-prime modular reduction and Chinese remaindering.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::modular::{inv_mod, large_primes, mul_mod, sub_mod, ModPoly};
use crate::poly::IntPolynomial;

/// Reduce an integer polynomial modulo a word-sized prime.
pub fn reduce_mod(p: &IntPolynomial, prime: u64) -> ModPoly {
    let coeffs = p.coeffs().iter().map(|c| reduce_int(c, prime)).collect();
    ModPoly::new(coeffs, prime)
}

fn reduce_int(c: &BigInt, prime: u64) -> u64 {
    let r = (c.magnitude() % prime).to_u64().unwrap();
    if c.sign() == Sign::Minus {
        sub_mod(0, r, prime)
    } else {
        r
    }
}

/// Upper bound, in bits, on |Res(a, b)| from Hadamard's inequality applied to
/// the Sylvester matrix: ||a||^deg(b) * ||b||^deg(a).
pub fn hadamard_bound_bits(a: &IntPolynomial, b: &IntPolynomial) -> u64 {
    let norm_bits = |p: &IntPolynomial| -> u64 {
        let sq: BigInt = p.coeffs().iter().map(|c| c * c).sum();
        sq.bits() / 2 + 1
    };
    let m = a.degree().unwrap_or(0) as u64;
    let n = b.degree().unwrap_or(0) as u64;
    n * norm_bits(a) + m * norm_bits(b)
}

/// Primes (below 2^62) that keep both leading coefficients nonzero and whose
/// product exceeds 2^`bits`.
fn usable_primes(a: &IntPolynomial, b: &IntPolynomial, bits: u64) -> Vec<u64> {
    let la = a.leading().cloned().unwrap_or_else(BigInt::one);
    let lb = b.leading().cloned().unwrap_or_else(BigInt::one);
    let mut want = (bits / 61 + 2) as usize;
    loop {
        let mut chosen = Vec::with_capacity(want);
        let mut covered = 0u64;
        let pool = large_primes(want + 16);
        for &q in &pool {
            if reduce_int(&la, q) == 0 || reduce_int(&lb, q) == 0 {
                continue;
            }
            chosen.push(q);
            covered += 61;
            if covered > bits {
                return chosen;
            }
        }
        want *= 2;
    }
}

/// Reconstruct the symmetric-range integer congruent to `residues[i]` modulo
/// `primes[i]` (Garner's mixed-radix scheme, sequential and deterministic).
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    assert_eq!(residues.len(), primes.len());
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&r, &q) in residues.iter().zip(primes) {
        let current = (&value % q).to_u64().unwrap();
        let m_mod_q = (&modulus % q).to_u64().unwrap();
        let t = mul_mod(sub_mod(r, current, q), inv_mod(m_mod_q, q), q);
        value += &modulus * t;
        modulus *= q;
    }
    let half = &modulus >> 1;
    if value > half {
        BigInt::from(value) - BigInt::from(modulus)
    } else {
        BigInt::from(value)
    }
}

/// Exact resultant Res(a, b), equal to the determinant of the Sylvester
/// matrix with a's coefficients in the first deg(b) rows.
///
/// Constants follow the usual conventions: Res(a0, b) = a0^deg(b),
/// Res(a, b0) = b0^deg(a). Either input being zero gives zero.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let bits = hadamard_bound_bits(a, b) + 1;
    let primes = usable_primes(a, b, bits);
    let residues: Vec<u64> = primes
        .par_iter()
        .map(|&q| reduce_mod(a, q).resultant(&reduce_mod(b, q)))
        .collect();
    crt_symmetric(&residues, &primes)
}

/// Whether Res(a, b) is nonzero, i.e. a and b have no common complex root.
///
/// A single nonzero residue settles the question; only when the first few
/// primes all vanish is the full resultant computed.
pub fn resultant_is_nonzero(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    for &q in usable_primes(a, b, 4 * 61).iter().take(4) {
        if reduce_mod(a, q).resultant(&reduce_mod(b, q)) != 0 {
            return true;
        }
    }
    !resultant(a, b).is_zero()
}

/// True iff `p` has no repeated complex root, decided exactly through the
/// discriminant: gcd(p, p') is constant exactly when Res(p, p') != 0.
pub fn is_squarefree(p: &IntPolynomial) -> bool {
    assert!(!p.is_zero(), "squarefree test of the zero polynomial");
    match p.degree() {
        Some(0) | Some(1) => true,
        _ => resultant_is_nonzero(p, &p.derivative()),
    }
}

/// Degree of gcd(a, b) over F_q for a word-sized prime; an upper bound for the
/// degree of the gcd over Q whenever q misses both leading coefficients.
pub fn gcd_degree_mod(a: &IntPolynomial, b: &IntPolynomial, q: u64) -> usize {
    let (mut x, mut y) = (reduce_mod(a, q), reduce_mod(b, q));
    while !y.is_zero() {
        let r = x.rem(&y);
        x = y;
        y = r;
    }
    x.degree().unwrap_or(0)
}
