use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use pcf_core::dynpoly::FamilyDegree;
use pcf_core::heights::Place;
use pcf_core::modular::is_prime_u64;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "pcf",
    version,
    about = "Experiments with postcritically finite parameters of z^d + c"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the generation time from the metadata header.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Gleason polynomial Φ_{d,n} in the polynomial text format.
    Gleason {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long)]
        n: u32,
    },
    /// Misiurewicz polynomial M_{d,m,n}.
    Misiurewicz {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Complex roots of a polynomial file, or of Φ_{d,n}.
    Roots(RootsArgs),
    /// Archimedean Green's function / local height.
    Green {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        /// Parameter as RE,IM.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        c: ComplexArg,
        /// Starting point (defaults to c, giving G_d(c)).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        x: Option<ComplexArg>,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long)]
        escape_radius: Option<f64>,
    },
    /// Canonical height of the critical value for rational α.
    Height {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        alpha: RationalArg,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Rational parameters num/den with z^d + num/den postcritically finite.
    PcfScan {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long, default_value_t = 100)]
        num_max: i64,
        #[arg(long, default_value_t = 10)]
        den_max: i64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Resultant certificate and S-integrality verdict for two monic polynomials.
    Certify {
        /// FILE, gleason(D,N) or misiurewicz(D,M,N).
        #[arg(long, value_parser = parse_source)]
        a: PolySource,
        #[arg(long, value_parser = parse_source)]
        b: PolySource,
        /// Finite primes of S, comma separated.
        #[arg(long, value_parser = parse_primes, default_value = "")]
        s_primes: PrimeList,
    },
    /// Pairwise Gleason resultants, or Gleason/Misiurewicz resultants with --m-max.
    GleasonTable {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        m_max: Option<u32>,
        /// Largest Misiurewicz period (defaults to n-max).
        #[arg(long, requires = "m_max")]
        period_max: Option<u32>,
    },
    /// Averages of ln|x - α|_v over the roots of Φ_{d,n}, n = 1..n-max.
    Equidist {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        alpha: RationalArg,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value = "inf", value_parser = parse_place)]
        place: PlaceArg,
    },
    /// Split of the product formula for Φ_{d,n}(α) into S and its complement.
    Mass {
        #[arg(long, value_parser = parse_degree)]
        d: FamilyDegree,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        alpha: RationalArg,
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_parser = parse_primes, default_value = "")]
        s_primes: PrimeList,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct RootsArgs {
    /// Polynomial file in the text format.
    #[arg(long, conflicts_with_all = ["d", "n"], required_unless_present_all = ["d", "n"])]
    pub poly: Option<PathBuf>,
    #[arg(long, value_parser = parse_degree, requires = "n")]
    pub d: Option<FamilyDegree>,
    #[arg(long, requires = "d")]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

macro_rules! display_wrapper {
    ($name:ident($inner:ty)) => {
        #[derive(Debug, Clone)]
        pub struct $name(pub $inner);

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    };
}

display_wrapper!(RationalArg(BigRational));
display_wrapper!(ComplexArg(Complex64));
display_wrapper!(PlaceArg(Place));
display_wrapper!(PrimeList(Vec<u64>));

impl fmt::Display for RationalArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl fmt::Display for PlaceArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for PrimeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolySource {
    Gleason { d: u32, n: u32 },
    Misiurewicz { d: u32, m: u32, n: u32 },
    File(PathBuf),
}

impl fmt::Display for PolySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolySource::Gleason { d, n } => write!(f, "gleason({d},{n})"),
            PolySource::Misiurewicz { d, m, n } => write!(f, "misiurewicz({d},{m},{n})"),
            PolySource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Serialize for PolySource {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn parse_degree(s: &str) -> Result<FamilyDegree, String> {
    let d: u32 = s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))?;
    FamilyDegree::new(d).map_err(|e| e.to_string())
}

/// A, A/B, with optional sign.
pub fn parse_rational(s: &str) -> Result<RationalArg, String> {
    let s = s.trim();
    let x = BigRational::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
    Ok(RationalArg(x))
}

/// RE,IM or RE.
pub fn parse_complex(s: &str) -> Result<ComplexArg, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().map(str::trim).unwrap_or("0");
    if parts.next().is_some() {
        return Err(format!("expected RE,IM, got {s:?}"));
    }
    let re: f64 = re.parse().map_err(|_| format!("bad real part in {s:?}"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in {s:?}"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("non-finite complex value {s:?}"));
    }
    Ok(ComplexArg(Complex64::new(re, im)))
}

pub fn parse_place(s: &str) -> Result<PlaceArg, String> {
    Place::from_str(s).map(PlaceArg).map_err(|e| e.to_string())
}

pub fn parse_primes(s: &str) -> Result<PrimeList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let p: u64 = part.parse().map_err(|_| format!("bad prime {part:?}"))?;
        if !is_prime_u64(p) {
            return Err(format!("{p} is not prime"));
        }
        out.push(p);
    }
    out.sort_unstable();
    out.dedup();
    Ok(PrimeList(out))
}

pub fn parse_source(s: &str) -> Result<PolySource, String> {
    let t = s.trim();
    let call = |prefix: &str| -> Option<Result<Vec<u32>, String>> {
        let inner = t.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
        Some(
            inner
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad argument in {t:?}")))
                .collect(),
        )
    };
    if let Some(args) = call("gleason") {
        return match args?.as_slice() {
            &[d, n] => Ok(PolySource::Gleason { d, n }),
            _ => Err(format!("expected gleason(D,N), got {t:?}")),
        };
    }
    if let Some(args) = call("misiurewicz") {
        return match args?.as_slice() {
            &[d, m, n] => Ok(PolySource::Misiurewicz { d, m, n }),
            _ => Err(format!("expected misiurewicz(D,M,N), got {t:?}")),
        };
    }
    Ok(PolySource::File(PathBuf::from(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("-1/1").unwrap().0,
            BigRational::from_integer((-1).into())
        );
        assert_eq!(parse_rational("2/4").unwrap().to_string(), "1/2");
        assert_eq!(parse_rational("+3").unwrap().to_string(), "3/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("-0.5,0.25").unwrap().0, Complex64::new(-0.5, 0.25));
        assert_eq!(parse_complex("2").unwrap().0, Complex64::new(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan,0").is_err());
    }

    #[test]
    fn sources_and_primes() {
        assert_eq!(
            parse_source("gleason(2,3)").unwrap(),
            PolySource::Gleason { d: 2, n: 3 }
        );
        assert_eq!(
            parse_source("misiurewicz(2, 2, 1)").unwrap(),
            PolySource::Misiurewicz { d: 2, m: 2, n: 1 }
        );
        assert!(parse_source("gleason(2)").is_err());
        assert_eq!(parse_source("a.txt").unwrap(), PolySource::File("a.txt".into()));
        assert_eq!(parse_primes("5,2,2").unwrap().0, vec![2, 5]);
        assert!(parse_primes("4").is_err());
        assert!(parse_primes("").unwrap().0.is_empty());
    }
}
