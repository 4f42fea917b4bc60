use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use pcf_core::resultant::{is_squarefree, resultant};
use pcf_core::rootfind::aberth_roots;
use pcf_core::IntPolynomial;

/// Coefficients with a nonzero leading term, degree in `deg`.
fn poly(deg: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    deg.prop_flat_map(move |n| {
        (
            prop::collection::vec(-bound..=bound, n),
            (1..=bound).prop_flat_map(|l| prop_oneof![Just(l), Just(-l)]),
        )
    })
    .prop_map(|(mut c, lead)| {
        c.push(lead);
        IntPolynomial::from_i64(&c)
    })
}

fn monic(deg: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    deg.prop_flat_map(move |n| prop::collection::vec(-bound..=bound, n))
        .prop_map(|mut c| {
            c.push(1);
            IntPolynomial::from_i64(&c)
        })
}

/// Determinant by fraction-free elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn sylvester(a: &IntPolynomial, b: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let n = a.degree().unwrap();
    let m = b.degree().unwrap();
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    for (p, deg, count) in [(a, n, m), (b, m, n)] {
        for shift in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (i, c) in p.coeffs().iter().enumerate() {
                row[shift + deg - i] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn naive_eval(p: &IntPolynomial, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        acc += BigRational::from_integer(c.clone()) * num_traits::pow(x.clone(), i);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn resultant_matches_sylvester_determinant(a in poly(1..=6, 9), b in poly(1..=6, 9)) {
        prop_assert_eq!(resultant(&a, &b), bareiss(sylvester(&a, &b)));
    }

    #[test]
    fn resultant_swap_sign(a in poly(0..=8, 20), b in poly(0..=8, 20)) {
        let n = a.degree().unwrap();
        let m = b.degree().unwrap();
        let ab = resultant(&a, &b);
        let ba = resultant(&b, &a);
        if (n * m) % 2 == 0 {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, -ba);
        }
    }

    #[test]
    fn resultant_is_multiplicative(a in poly(1..=4, 9), b in poly(1..=4, 9), c in poly(1..=4, 9)) {
        prop_assert_eq!(resultant(&a, &(&b * &c)), resultant(&a, &b) * resultant(&a, &c));
    }

    #[test]
    fn exact_division_round_trip(a in poly(0..=10, 50), b in monic(0..=6, 50)) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a.clone());
        let nonmonic = &b * &IntPolynomial::from_i64(&[3]);
        prop_assert_eq!((&a * &nonmonic).exact_div(&nonmonic).unwrap(), a);
    }

    #[test]
    fn rational_evaluation_matches_power_sums(p in poly(0..=10, 100), num in -50i64..=50, den in 1i64..=30) {
        let x = BigRational::new(num.into(), den.into());
        prop_assert_eq!(p.eval_rational(&x), naive_eval(&p, &x));
        prop_assert_eq!(p.eval_rational(&BigRational::from_integer(num.into())), BigRational::from_integer(p.eval_int(&num.into())));
    }

    #[test]
    fn text_format_round_trip(p in poly(0..=12, 1_000_000)) {
        prop_assert_eq!(IntPolynomial::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn resultant_is_product_over_roots(a in monic(1..=12, 5), b in poly(1..=8, 5)) {
        prop_assume!(is_squarefree(&a));
        let roots = aberth_roots(&a, 1e-12).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for z in &roots.roots {
            let mut v = Complex64::new(0.0, 0.0);
            for c in b.coeffs().iter().rev() {
                v = v * z + c.to_f64().unwrap();
            }
            prod *= v;
        }
        let exact = resultant(&a, &b).to_f64().unwrap();
        let scale = exact.abs().max(1.0);
        prop_assert!((prod.re - exact).abs() <= 1e-6 * scale, "product {} vs resultant {}", prod, exact);
        prop_assert!(prod.im.abs() <= 1e-6 * scale);
    }
}

#[test]
fn bareiss_oracle_sanity() {
    let m = vec![
        vec![BigInt::from(0), BigInt::from(2), BigInt::from(1)],
        vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
        vec![BigInt::from(3), BigInt::from(0), BigInt::from(5)],
    ];
    // 0·5 - 2·2 + 1·(-3)
    assert_eq!(bareiss(m), BigInt::from(-7));
}
