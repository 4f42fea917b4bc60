//! Simultaneous complex root extraction (Ehrlich-Aberth) for integer
//! polynomials, with double-double Newton polishing.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::dd::{CDd, Dd};
use crate::dynpoly::{gleason_degree, FamilyDegree};
use crate::error::{Error, Result};
use crate::numtheory::{divisors, ln_abs_int, mobius};
use crate::poly::IntPolynomial;
use crate::resultant::is_squarefree;

/// Working precision used for the Newton corrections inside the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

/// All complex roots of a squarefree polynomial.
///
/// `max_residual` is the largest residual over the roots in the evaluator's
/// scale (normwise backward error for dense coefficients, |Φ(z)| for the
/// orbit-based Gleason evaluator), evaluated in double-double arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRootSet {
    pub source_degree: usize,
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub precision: Precision,
    pub sweeps: usize,
}

impl ComplexRootSet {
    /// Smallest distance between two distinct listed roots (infinite for < 2 roots).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AberthConfig {
    pub max_sweeps: usize,
    pub polish_steps: usize,
    /// Retry in double-double when the double-precision pass fails.
    pub escalate: bool,
}

impl Default for AberthConfig {
    fn default() -> Self {
        AberthConfig {
            max_sweeps: 2000,
            polish_steps: 6,
            escalate: true,
        }
    }
}

/// Newton correction and residual at one point.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    /// f(z) / f'(z).
    pub newton: Complex64,
    /// Residual in the evaluator's own scale (see [`RootEvaluator::residual`]).
    pub residual: f64,
}

/// Something whose roots Aberth iteration can chase: a squarefree function
/// with a known number of roots and a way to compute Newton corrections.
pub trait RootEvaluator: Sync {
    /// Number of roots (the polynomial degree).
    fn degree(&self) -> usize;

    fn step(&self, z: Complex64, precision: Precision) -> Step;

    /// Residual reported in [`ComplexRootSet::max_residual`], always
    /// computed in double-double.
    fn residual(&self, z: Complex64) -> f64 {
        self.step(z, Precision::DoubleDouble).residual
    }

    /// Radius of the circle the initial guesses are placed on.
    fn start_radius(&self) -> f64;

    /// Residual below which double-precision evaluation is pure rounding
    /// noise; zero disables the residual stopping test.
    fn noise_floor(&self) -> f64 {
        0.0
    }
}

/// Dense-coefficient evaluation. Coefficients are held in both precisions,
/// with reversal for |z| > 1 so that no evaluation overflows. The residual
/// is the normwise backward error |p(z)| / (max_i |a_i| · Σ_i |z|^i).
pub struct DenseEvaluator {
    f: Vec<f64>,
    dd: Vec<Dd>,
    max_abs: f64,
    radius: f64,
}

impl DenseEvaluator {
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        match p.degree() {
            None => return Err(Error::ZeroInput),
            Some(0) => return Err(Error::InvalidArgument("constant polynomial has no roots".into())),
            Some(_) => {}
        }
        let dd: Vec<Dd> = p.coeffs().iter().map(Dd::from_bigint).collect();
        let f: Vec<f64> = dd.iter().map(|c| c.to_f64()).collect();
        if f.iter().any(|c| !c.is_finite()) {
            return Err(Error::ResourceLimit {
                what: "coefficient bit length",
                value: p.max_abs_coeff().bits() as u128,
                limit: 1023,
            });
        }
        let max_abs = f.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        Ok(DenseEvaluator {
            f,
            dd,
            max_abs,
            radius: Self::root_radius(p),
        })
    }

    /// max_k |a_{n-k}/a_n|^{1/k}: every root lies within twice this radius.
    fn root_radius(p: &IntPolynomial) -> f64 {
        let n = p.degree().unwrap();
        let lead = ln_abs_int(p.leading().unwrap());
        let mut best = f64::NEG_INFINITY;
        for (i, c) in p.coeffs().iter().enumerate().take(n) {
            if c.is_zero() {
                continue;
            }
            let k = (n - i) as f64;
            best = best.max((ln_abs_int(c) - lead) / k);
        }
        if best.is_finite() {
            best.exp()
        } else {
            1.0
        }
    }

    fn step_f64(&self, z: Complex64) -> Step {
        let n = self.degree();
        let reversed = z.norm() > 1.0;
        let x = if reversed { z.inv() } else { z };
        let ax = x.norm();
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        let mut scale = 0.0;
        for i in 0..=n {
            let idx = if reversed { i } else { n - i };
            dp = dp * x + p;
            p = p * x + self.f[idx];
            scale = scale * ax + 1.0;
        }
        let newton = if reversed {
            z * p / (p * n as f64 - x * dp)
        } else {
            p / dp
        };
        Step {
            newton,
            residual: p.norm() / (scale * self.max_abs),
        }
    }

    fn step_dd(&self, z: Complex64) -> Step {
        let n = self.degree();
        let reversed = z.norm() > 1.0;
        let x = if reversed {
            CDd::new(Dd::ONE, Dd::ZERO) / CDd::from_c64(z)
        } else {
            CDd::from_c64(z)
        };
        let ax = x.norm();
        let mut p = CDd::ZERO;
        let mut dp = CDd::ZERO;
        let mut scale = Dd::ZERO;
        for i in 0..=n {
            let idx = if reversed { i } else { n - i };
            dp = dp * x + p;
            p = p * x + CDd::new(self.dd[idx], Dd::ZERO);
            scale = scale * ax + Dd::ONE;
        }
        let newton = if reversed {
            let denom = p.scale(Dd::from_f64(n as f64)) - x * dp;
            CDd::from_c64(z) * p / denom
        } else {
            p / dp
        };
        Step {
            newton: newton.to_c64(),
            residual: (p.norm() / scale).to_f64() / self.max_abs,
        }
    }
}

impl RootEvaluator for DenseEvaluator {
    fn degree(&self) -> usize {
        self.f.len() - 1
    }

    fn step(&self, z: Complex64, precision: Precision) -> Step {
        match precision {
            Precision::Double => self.step_f64(z),
            Precision::DoubleDouble => self.step_dd(z),
        }
    }

    fn start_radius(&self) -> f64 {
        self.radius
    }

    fn noise_floor(&self) -> f64 {
        4.0 * self.degree() as f64 * f64::EPSILON
    }
}

/// Evaluates the Gleason polynomial Φ_{d,n} through the critical orbit,
/// Φ = Π_{ℓ|n} (f^ℓ(0))^{μ(n/ℓ)}, instead of through its coefficients.
///
/// The dense coefficients of Φ_{d,n} suffer cancellation of order
/// exp(d^{n-1} G(|c|)) near the multibrot boundary, far past what double or
/// double-double evaluation can absorb once n >= 7 (d = 2). The orbit
/// recurrence has no such cancellation. The residual is |Φ(z)|.
pub struct GleasonEvaluator {
    d: u32,
    n: u32,
    exponents: Vec<(u32, i32)>,
    degree: usize,
}

impl GleasonEvaluator {
    pub fn new(d: FamilyDegree, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("period must be >= 1".into()));
        }
        let exponents = divisors(n as u64)
            .into_iter()
            .map(|l| (l as u32, mobius(n as u64 / l)))
            .filter(|&(_, mu)| mu != 0)
            .collect();
        let degree = gleason_degree(d, n);
        if degree > 1 << 20 {
            return Err(Error::ResourceLimit {
                what: "Gleason polynomial degree",
                value: degree,
                limit: 1 << 20,
            });
        }
        Ok(GleasonEvaluator {
            d: d.get(),
            n,
            exponents,
            degree: degree as usize,
        })
    }

    /// Past this modulus the orbit is followed asymptotically: z -> z^d.
    const HUGE: f64 = 1e30;

    /// Walks the critical orbit tracking z_k, the ratio r_k = z_k'/z_k and
    /// ln|z_k|. Once |z_k| is huge, c is negligible against z_k^d and the
    /// recurrences collapse to r <- d r, ln|z| <- d ln|z|, which cannot
    /// overflow.
    fn step_f64(&self, c: Complex64) -> Step {
        let d = self.d as f64;
        let mut z = Complex64::zero();
        let mut dz = Complex64::zero();
        let mut ratio = Complex64::zero();
        let mut ln_abs = f64::NEG_INFINITY;
        let mut asymptotic = false;
        let mut log_deriv = Complex64::zero();
        let mut log_phi = 0.0;
        let mut next = self.exponents.iter().peekable();
        for k in 1..=self.n {
            if asymptotic {
                ratio *= d;
                ln_abs *= d;
            } else {
                dz = z.powu(self.d - 1) * dz * d + 1.0;
                z = z.powu(self.d) + c;
                ratio = dz / z;
                ln_abs = z.norm().ln();
                if z.norm() > Self::HUGE {
                    asymptotic = true;
                }
            }
            if let Some(&&(l, mu)) = next.peek() {
                if l == k {
                    log_deriv += ratio * mu as f64;
                    log_phi += ln_abs * mu as f64;
                    next.next();
                }
            }
        }
        Step {
            newton: log_deriv.inv(),
            residual: log_phi.exp(),
        }
    }

    fn step_dd(&self, c: Complex64) -> Step {
        let c = CDd::from_c64(c);
        let one = CDd::new(Dd::ONE, Dd::ZERO);
        let d = CDd::new(Dd::from_f64(self.d as f64), Dd::ZERO);
        let mut z = CDd::ZERO;
        let mut dz = CDd::ZERO;
        let mut ratio = CDd::ZERO;
        let mut ln_abs = f64::NEG_INFINITY;
        let mut asymptotic = false;
        let mut log_deriv = CDd::ZERO;
        // |Φ| as a DD ratio over moderate iterates, in logs for huge ones
        let mut numer = Dd::ONE;
        let mut denom = Dd::ONE;
        let mut log_extra = 0.0;
        let mut next = self.exponents.iter().peekable();
        for k in 1..=self.n {
            if asymptotic {
                ratio = ratio * d;
                ln_abs *= self.d as f64;
            } else {
                let mut zpow = one;
                for _ in 1..self.d {
                    zpow = zpow * z;
                }
                dz = d * zpow * dz + one;
                z = zpow * z + c;
                ratio = dz / z;
                let modulus = z.norm();
                ln_abs = modulus.to_f64().ln();
                if modulus.hi > Self::HUGE {
                    asymptotic = true;
                }
            }
            if let Some(&&(l, mu)) = next.peek() {
                if l == k {
                    if mu > 0 {
                        log_deriv = log_deriv + ratio;
                    } else {
                        log_deriv = log_deriv - ratio;
                    }
                    if asymptotic {
                        log_extra += ln_abs * mu as f64;
                    } else if mu > 0 {
                        numer = numer * z.norm();
                    } else {
                        denom = denom * z.norm();
                    }
                    next.next();
                }
            }
        }
        let residual = (numer / denom).to_f64() * log_extra.exp();
        Step {
            newton: (one / log_deriv).to_c64(),
            residual: if residual.is_nan() { f64::INFINITY } else { residual },
        }
    }
}

impl RootEvaluator for GleasonEvaluator {
    fn degree(&self) -> usize {
        self.degree
    }

    fn step(&self, z: Complex64, precision: Precision) -> Step {
        match precision {
            Precision::Double => self.step_f64(z),
            Precision::DoubleDouble => self.step_dd(z),
        }
    }

    fn start_radius(&self) -> f64 {
        // all centers lie in the multibrot set, inside |c| <= 2^{1/(d-1)}
        1.05 * 2f64.powf(1.0 / (self.d as f64 - 1.0))
    }
}

fn initial_guesses(n: usize, radius: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + golden * k as f64))
        .collect()
}

fn aberth_pass<E: RootEvaluator + ?Sized>(
    eval: &E,
    mut z: Vec<Complex64>,
    precision: Precision,
    max_sweeps: usize,
) -> (Vec<Complex64>, usize, bool) {
    let n = z.len();
    let noise = eval.noise_floor();
    let step_floor = match precision {
        Precision::Double => 8.0 * f64::EPSILON,
        Precision::DoubleDouble => 2.0 * f64::EPSILON,
    };
    let mut done = vec![false; n];
    for sweep in 1..=max_sweeps {
        // Jacobi order: every correction uses the previous sweep's iterates
        let corrections: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k| {
                if done[k] {
                    return Complex64::zero();
                }
                let ratio = eval.step(z[k], precision).newton;
                let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if w.is_finite() {
                    w
                } else if ratio.is_finite() {
                    ratio
                } else {
                    Complex64::zero()
                }
            })
            .collect();
        for k in 0..n {
            if done[k] {
                continue;
            }
            let w = corrections[k];
            z[k] -= w;
            if w.norm() <= step_floor * z[k].norm().max(1.0)
                || (noise > 0.0 && eval.step(z[k], precision).residual <= noise)
            {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return (z, sweep, true);
        }
    }
    (z, max_sweeps, false)
}

/// Newton refinement in double-double; a step is kept only if it lowers the
/// residual, so the residual sequence is non-increasing.
fn polish<E: RootEvaluator + ?Sized>(eval: &E, z: Complex64, steps: usize) -> (Complex64, f64) {
    let mut best = z;
    let mut best_res = eval.residual(z);
    for _ in 0..steps {
        if best_res == 0.0 {
            break;
        }
        let candidate = best - eval.step(best, Precision::DoubleDouble).newton;
        if !candidate.is_finite() {
            break;
        }
        let res = eval.residual(candidate);
        if res < best_res {
            best = candidate;
            best_res = res;
        } else {
            break;
        }
    }
    (best, best_res)
}

/// All complex roots of `p` by Ehrlich-Aberth iteration with the default
/// configuration, evaluating through the dense coefficients. `tol` bounds the
/// accepted backward-error residual.
pub fn aberth_roots(p: &IntPolynomial, tol: f64) -> Result<ComplexRootSet> {
    aberth_roots_with(p, tol, &AberthConfig::default())
}

pub fn aberth_roots_with(p: &IntPolynomial, tol: f64, config: &AberthConfig) -> Result<ComplexRootSet> {
    let eval = DenseEvaluator::new(p)?;
    if !is_squarefree(p) {
        return Err(Error::NotSquarefree);
    }
    aberth_with_evaluator(&eval, tol, config)
}

/// Roots of Φ_{d,n} using orbit-based evaluation; `max_residual` bounds |Φ(root)|.
pub fn gleason_roots(d: FamilyDegree, n: u32, tol: f64) -> Result<ComplexRootSet> {
    let eval = GleasonEvaluator::new(d, n)?;
    aberth_with_evaluator(&eval, tol, &AberthConfig::default())
}

/// Ehrlich-Aberth iteration against any evaluator: a double-precision pass,
/// escalated to double-double corrections if it stalls or its polished
/// residual misses `tol`.
pub fn aberth_with_evaluator<E: RootEvaluator + ?Sized>(
    eval: &E,
    tol: f64,
    config: &AberthConfig,
) -> Result<ComplexRootSet> {
    let n = eval.degree();
    let start = initial_guesses(n, eval.start_radius());
    let mut precisions = vec![Precision::Double];
    if config.escalate {
        precisions.push(Precision::DoubleDouble);
    }
    let mut total_sweeps = 0;
    for precision in precisions {
        let (raw, sweeps, converged) = aberth_pass(eval, start.clone(), precision, config.max_sweeps);
        total_sweeps += sweeps;
        if !converged {
            continue;
        }
        let (roots, residuals): (Vec<_>, Vec<_>) = raw
            .into_par_iter()
            .map(|z| polish(eval, z, config.polish_steps))
            .unzip();
        let max_residual = residuals
            .iter()
            .fold(0.0, |acc: f64, &r| if r.is_nan() { f64::INFINITY } else { acc.max(r) });
        if max_residual <= tol {
            return Ok(ComplexRootSet {
                source_degree: n,
                roots,
                residuals,
                max_residual,
                precision,
                sweeps: total_sweeps,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: total_sweeps,
    })
}

/// Number of roots within the closed disk |z - center| <= radius.
pub fn roots_in_disk(rs: &ComplexRootSet, center: Complex64, radius: f64) -> usize {
    rs.roots.iter().filter(|z| (*z - center).norm() <= radius).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn linear_and_quadratic() {
        let rs = aberth_roots(&p(&[1, 1]), 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!((rs.roots[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let rs = sorted(aberth_roots(&p(&[0, 1, 1]), 1e-12).unwrap().roots);
        assert!((rs[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!(rs[1].norm() < 1e-14);
    }

    /// Cardano's formula for c^3 + 2c^2 + c + 1, computed independently.
    fn cubic_oracle() -> Vec<Complex64> {
        let (a, b, c): (f64, f64, f64) = (2.0, 1.0, 1.0);
        // depressed cubic t^3 + pt + q with c = t - a/3
        let pp = b - a * a / 3.0;
        let qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let disc = (qq / 2.0) * (qq / 2.0) + (pp / 3.0).powi(3);
        let sq = disc.sqrt();
        let u = (-qq / 2.0 + sq).cbrt();
        let v = (-qq / 2.0 - sq).cbrt();
        let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let shift = Complex64::new(-a / 3.0, 0.0);
        vec![
            Complex64::new(u + v, 0.0) + shift,
            omega * u + omega.conj() * v + shift,
            omega.conj() * u + omega * v + shift,
        ]
    }

    #[test]
    fn period_three_centers() {
        let rs = aberth_roots(&p(&[1, 1, 2, 1]), 1e-12).unwrap();
        let got = sorted(rs.roots.clone());
        let want = sorted(cubic_oracle());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
        assert!((want[0].re + 1.7549).abs() < 1e-4);
        assert!((want[1].re + 0.1226).abs() < 1e-4 && (want[2].im - 0.7449).abs() < 1e-4);
        assert_eq!(roots_in_disk(&rs, Complex64::new(-2.0, 0.0), 0.1), 0);
    }

    #[test]
    fn disk_counts() {
        let rs = aberth_roots(&p(&[0, 1, 1]), 1e-12).unwrap();
        assert_eq!(roots_in_disk(&rs, Complex64::zero(), 0.5), 1);
        assert_eq!(roots_in_disk(&rs, Complex64::new(0.3, 0.3), 0.0), 0);
        assert_eq!(roots_in_disk(&rs, Complex64::zero(), 5.0), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(aberth_roots(&p(&[0, 0, 1]), 1e-12).unwrap_err(), Error::NotSquarefree);
        assert_eq!(
            aberth_roots(&IntPolynomial::zero(), 1e-12).unwrap_err(),
            Error::ZeroInput
        );
        assert!(aberth_roots(&p(&[3]), 1e-12).is_err());
    }

    #[test]
    fn polishing_never_increases_residual() {
        let q = p(&[1, 1, 2, 1]);
        let eval = DenseEvaluator::new(&q).unwrap();
        for z in [
            Complex64::new(-1.7, 0.0),
            Complex64::new(-0.12, 0.74),
            Complex64::new(3.0, 1.0),
        ] {
            let (_, after) = polish(&eval, z, 10);
            assert!(after <= eval.residual(z));
        }
    }

    #[test]
    fn non_monic_and_large_roots() {
        // 3c^2 - 300 has roots ±10
        let rs = sorted(aberth_roots(&p(&[-300, 0, 3]), 1e-12).unwrap().roots);
        assert!((rs[0] + 10.0).norm() < 1e-12 && (rs[1] - 10.0).norm() < 1e-12);
    }
    #[test]
    fn orbit_evaluator_matches_dense_on_small_periods() {
        let two = FamilyDegree::new(2).unwrap();
        for n in 3..=5 {
            let dense = aberth_roots(&crate::dynpoly::gleason(two, n).unwrap().poly, 1e-12).unwrap();
            let orbit = gleason_roots(two, n, 1e-12).unwrap();
            assert_eq!(dense.roots.len(), orbit.roots.len());
            for z in &orbit.roots {
                let nearest = dense.roots.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-12, "n = {n}: {z}");
            }
        }
    }

    #[test]
    fn orbit_evaluator_handles_escaping_points() {
        let ev = GleasonEvaluator::new(FamilyDegree::new(2).unwrap(), 12).unwrap();
        for z in [
            Complex64::new(5.0, 1.0),
            Complex64::new(-2.1, 0.0),
            Complex64::new(0.3, 0.6),
        ] {
            let fast = ev.step(z, Precision::Double);
            let slow = ev.step(z, Precision::DoubleDouble);
            assert!(fast.newton.is_finite() && slow.newton.is_finite());
            assert!((fast.newton - slow.newton).norm() <= 1e-8 * fast.newton.norm().max(1e-300));
            assert!(slow.residual > 1.0, "{z}: residual {}", slow.residual);
        }
    }

    #[test]
    fn gleason_roots_period_four() {
        let rs = gleason_roots(FamilyDegree::new(2).unwrap(), 4, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 6);
        // the real period-4 center of the "airplane" cascade
        assert!(rs
            .roots
            .iter()
            .any(|z| (z - Complex64::new(-1.3107026413368328, 0.0)).norm() < 1e-12));
    }
}
