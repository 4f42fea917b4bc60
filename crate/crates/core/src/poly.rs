//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in one variable with `BigInt` coefficients, stored in ascending
/// degree with no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder for a divisor whose leading coefficient divides
    /// every intermediate leading term; `NotDivisible` as soon as one does not.
    fn long_division(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading().unwrap();
        let Some(da) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if da < db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - db + 1];
        for top in (db..=da).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let (q, r) = rem[top].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let shift = top - db;
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * b;
            }
            quot[shift] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient `self / divisor`; errors unless the remainder is zero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.long_division(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// `Some(quotient)` when `divisor` divides `self` exactly.
    pub fn checked_div(&self, divisor: &Self) -> Option<Self> {
        self.exact_div(divisor).ok()
    }

    /// Horner evaluation at an integer.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact Horner evaluation at a rational point.
    ///
    /// Works over the common denominator so the result is reduced once.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let Some(deg) = self.degree() else {
            return BigRational::zero();
        };
        let (num, den) = (x.numer(), x.denom());
        // sum a_i num^i den^(deg - i), then divide by den^deg
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        BigRational::new(acc, den.pow(deg as u32))
    }

    /// Write in the text exchange format: `deg d` followed by one decimal
    /// coefficient per line in ascending degree. The zero polynomial is
    /// written as `deg -1` with no coefficient lines.
    pub fn to_text(&self) -> String {
        let mut out = match self.degree() {
            Some(d) => format!("deg {d}\n"),
            None => "deg -1\n".to_string(),
        };
        for c in &self.coeffs {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the text exchange format. Blank lines and lines starting with
    /// `#` are ignored, so a file may carry a comment header.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polynomial file".into()))?;
        let deg: i64 = header
            .strip_prefix("deg")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header line {header:?}")))?;
        let coeffs = lines
            .map(|l| BigInt::from_str(l).map_err(|_| Error::Parse(format!("bad coefficient {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() as i64 != deg + 1 {
            return Err(Error::Parse(format!(
                "header says degree {deg} but found {} coefficients",
                coeffs.len()
            )));
        }
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::Parse("leading coefficient is zero".into()));
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "c")?,
                _ => write!(f, "c^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        IntPolynomial::new(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $f(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn addition() {
        assert_eq!(&p(&[0, 1]) + &p(&[1, 1]), p(&[1, 2]));
        assert_eq!(&p(&[3, 0, 5]) + &IntPolynomial::zero(), p(&[3, 0, 5]));
        let sum = &p(&[0, 1, 1]) + &p(&[0, 0, -1]);
        assert_eq!(sum, p(&[0, 1]));
        assert_eq!(sum.degree(), Some(1));
    }

    #[test]
    fn multiplication() {
        assert_eq!(&p(&[0, 1]) * &p(&[1, 1]), p(&[0, 1, 1]));
        assert_eq!(&p(&[4, -1, 7]) * &IntPolynomial::one(), p(&[4, -1, 7]));
        assert_eq!(&p(&[2, 1]) * &p(&[-2, 1]), p(&[-4, 0, 1]));
        assert!((&p(&[1, 1]) * &IntPolynomial::zero()).is_zero());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[0, 1, 1]).exact_div(&p(&[0, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[0, 1, 1, 2, 1]).exact_div(&p(&[0, 1])).unwrap(), p(&[1, 1, 2, 1]));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[0, 1])), Err(Error::NotDivisible));
        assert_eq!(p(&[1, 1]).exact_div(&IntPolynomial::zero()), Err(Error::DivisionByZero));
        // non-monic divisor with an integral quotient
        assert_eq!(p(&[2, 6, 4]).exact_div(&p(&[2, 2])).unwrap(), p(&[1, 2]));
        // quotient would need fractions
        assert_eq!(p(&[1, 1]).exact_div(&p(&[1, 2])), Err(Error::NotDivisible));
    }

    #[test]
    fn rational_evaluation() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(
            p(&[0, 1, 1]).eval_rational(&third),
            BigRational::new(4.into(), 9.into())
        );
        assert_eq!(
            p(&[1, 1, 2, 1]).eval_rational(&BigRational::from_integer((-1).into())),
            BigRational::one()
        );
        assert!(p(&[0, 1]).eval_rational(&BigRational::zero()).is_zero());
        assert!(IntPolynomial::zero().eval_rational(&third).is_zero());
    }

    #[test]
    fn derivative_and_content() {
        assert_eq!(p(&[1, 1, 2, 1]).derivative(), p(&[1, 4, 3]));
        assert_eq!(p(&[6, -4, 10]).content(), BigInt::from(2));
        assert!(p(&[7]).derivative().is_zero());
    }

    #[test]
    fn text_format() {
        let q = p(&[1, -1, 0, 123456789]);
        let text = q.to_text();
        assert_eq!(text, "deg 3\n1\n-1\n0\n123456789\n");
        assert_eq!(IntPolynomial::from_text(&text).unwrap(), q);
        assert_eq!(IntPolynomial::from_text("deg -1\n").unwrap(), IntPolynomial::zero());
        assert!(IntPolynomial::from_text("deg 2\n1\n2\n").is_err());
        assert!(IntPolynomial::from_text("deg 1\n1\n0\n").is_err());
        assert!(IntPolynomial::from_text("degree 1\n1\n1\n").is_err());
        let commented = "# {\"d\":2}\ndeg 1\n1\n1\n";
        assert_eq!(IntPolynomial::from_text(commented).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 1, 2, 1]).to_string(), "c^3 + 2c^2 + c + 1");
        assert_eq!(p(&[-4, 0, 1]).to_string(), "c^2 - 4");
        assert_eq!(p(&[0, -1]).to_string(), "-c");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
