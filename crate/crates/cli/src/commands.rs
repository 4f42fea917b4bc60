use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use pcf_core::dynpoly::{Constructor, FamilyDegree};
use pcf_core::equidist::{equidist_table, non_integrality_mass};
use pcf_core::green::{default_escape_radius, local_height_arch, membership};
use pcf_core::heights::{canonical_height_critical_value, is_pcf_rational};
use pcf_core::integrality::{
    gleason_misiurewicz_table, gleason_pairwise_unit_table, s_integrality, PrimePower, ResultantCertificate,
};
use pcf_core::rootfind::{aberth_roots, gleason_roots};
use pcf_core::IntPolynomial;

use crate::args::{Cli, Command, Format, PolySource, RootsArgs};
use crate::error::CliError;
use crate::output::{choose, csv_body, Artifact, Body};

const TABLE: &[Format] = &[Format::Csv, Format::Json];
const RECORD: &[Format] = &[Format::Json];
const POLY: &[Format] = &[Format::Text, Format::Json];

pub fn run(cli: &Cli) -> Result<Artifact, CliError> {
    let fmt = cli.output.format;
    match &cli.command {
        Command::Gleason { d, n } => {
            let g = Constructor::new(*d).gleason(*n)?;
            poly_artifact(choose(fmt, POLY)?, &g.poly, json!({"d": d.get(), "n": n}))
        }
        Command::Misiurewicz { d, m, n } => {
            let p = Constructor::new(*d).misiurewicz(*m, *n)?;
            poly_artifact(choose(fmt, POLY)?, &p.poly, json!({"d": d.get(), "m": m, "n": n}))
        }
        Command::Roots(args) => roots(choose(fmt, TABLE)?, args),
        Command::Green {
            d,
            c,
            x,
            max_iter,
            escape_radius,
        } => {
            choose(fmt, RECORD)?;
            let c = c.0;
            let x = x.as_ref().map_or(c, |x| x.0);
            let radius = escape_radius.unwrap_or_else(|| default_escape_radius(*d, c).max(x.norm() + 1.0));
            let value = local_height_arch(*d, c, x, *max_iter, radius);
            Ok(Artifact::new(Body::Json(json!({
                "value": value.value,
                "escaped": value.escaped,
                "iterations": value.iterations,
                "error_bound": value.error_bound,
                "escape_radius": radius,
                "membership": membership(*d, c, *max_iter),
            }))))
        }
        Command::Height {
            d,
            alpha,
            max_iter,
            budget,
        } => {
            choose(fmt, RECORD)?;
            let h = canonical_height_critical_value(*d, &alpha.0, *max_iter, None);
            let mut body = serde_json::to_value(&h)?;
            body["is_pcf"] = json!(is_pcf_rational(*d, &alpha.0, *budget)?);
            Ok(Artifact::new(Body::Json(body)))
        }
        Command::PcfScan {
            d,
            num_max,
            den_max,
            budget,
        } => pcf_scan(choose(fmt, TABLE)?, *d, *num_max, *den_max, *budget),
        Command::Certify { a, b, s_primes } => {
            choose(fmt, RECORD)?;
            let pa = load(a)?;
            let pb = load(b)?;
            let verdict = s_integrality(&pa, &pb, &s_primes.0)?;
            let mut body = serde_json::to_value(&verdict.certificate)?;
            body["poly_a"] = json!(a.to_string());
            body["poly_b"] = json!(b.to_string());
            body["s_primes"] = json!(verdict.s_primes);
            body["integral"] = json!(verdict.integral);
            body["violating_primes"] = serde_json::to_value(&verdict.violating_primes)?;
            Ok(Artifact::new(Body::Json(body)))
        }
        Command::GleasonTable {
            d,
            n_max,
            m_max,
            period_max,
        } => {
            let fmt = choose(fmt, TABLE)?;
            match m_max {
                None => gleason_table(fmt, *d, *n_max),
                Some(m) => misiurewicz_table(fmt, *d, *n_max, *m, period_max.unwrap_or(*n_max)),
            }
        }
        Command::Equidist { d, alpha, n_max, place } => {
            let fmt = choose(fmt, TABLE)?;
            let t = equidist_table(*d, &alpha.0, *n_max, place.0)?;
            let notes = json!({
                "target": t.target,
                "alpha_is_pcf": t.alpha_is_pcf,
                "hypothesis": t.hypothesis,
                "skipped": t.skipped,
            });
            let body = match fmt {
                Format::Json => Body::Json(serde_json::to_value(&t)?),
                _ => {
                    let rows: Vec<EquidistCsv> = t
                        .rows
                        .iter()
                        .map(|r| EquidistCsv {
                            d: r.d,
                            n: r.n,
                            dn: r.dn,
                            place: r.place.to_string(),
                            average: r.average,
                            target: r.target,
                            gap: r.gap,
                        })
                        .collect();
                    Body::Csv(csv_body(&rows, &["d", "n", "Dn", "place", "average", "target", "gap"])?)
                }
            };
            Ok(Artifact::with_notes(body, notes))
        }
        Command::Mass {
            d,
            alpha,
            n_max,
            s_primes,
        } => {
            let fmt = choose(fmt, TABLE)?;
            let t = non_integrality_mass(*d, &alpha.0, *n_max, &s_primes.0)?;
            let notes = json!({"height_target": t.height_target, "skipped": t.skipped});
            let body = match fmt {
                Format::Json => Body::Json(serde_json::to_value(&t)?),
                _ => Body::Csv(csv_body(
                    &t.rows,
                    &[
                        "n",
                        "Dn",
                        "s_term_sum",
                        "complement_mass",
                        "height_target",
                        "excess",
                        "exact_balance",
                    ],
                )?),
            };
            Ok(Artifact::with_notes(body, notes))
        }
    }
}

#[derive(Serialize)]
struct EquidistCsv {
    d: u32,
    n: u32,
    dn: u64,
    place: String,
    average: f64,
    target: f64,
    gap: f64,
}

fn poly_artifact(fmt: Format, p: &IntPolynomial, ident: Value) -> Result<Artifact, CliError> {
    let body = match fmt {
        Format::Json => {
            let mut v = ident.clone();
            v["degree"] = json!(p.degree());
            v["coefficients"] = json!(p.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>());
            Body::Json(v)
        }
        _ => Body::Text(p.to_text()),
    };
    Ok(Artifact::with_notes(body, ident))
}

fn load(src: &PolySource) -> Result<IntPolynomial, CliError> {
    let degree = |d: u32| FamilyDegree::new(d).map_err(CliError::from);
    Ok(match src {
        PolySource::Gleason { d, n } => Constructor::new(degree(*d)?).gleason(*n)?.poly,
        PolySource::Misiurewicz { d, m, n } => Constructor::new(degree(*d)?).misiurewicz(*m, *n)?.poly,
        PolySource::File(path) => IntPolynomial::from_text(&std::fs::read_to_string(path)?)?,
    })
}

#[derive(Serialize)]
struct RootCsv {
    index: usize,
    re: f64,
    im: f64,
    residual: f64,
}

fn roots(fmt: Format, args: &RootsArgs) -> Result<Artifact, CliError> {
    let set = match (&args.poly, &args.d, args.n) {
        (Some(path), _, _) => {
            let p = IntPolynomial::from_text(&std::fs::read_to_string(path)?)?;
            aberth_roots(&p, args.tol)?
        }
        (None, Some(d), Some(n)) => gleason_roots(*d, n, args.tol)?,
        _ => return Err(CliError::Usage("give --poly FILE or both --d and --n".into())),
    };
    let notes = json!({
        "degree": set.source_degree,
        "max_residual": set.max_residual,
        "precision": set.precision,
        "sweeps": set.sweeps,
    });
    let body = match fmt {
        Format::Json => Body::Json(serde_json::to_value(&set)?),
        _ => {
            let rows: Vec<RootCsv> = set
                .roots
                .iter()
                .zip(&set.residuals)
                .enumerate()
                .map(|(index, (z, r))| RootCsv {
                    index,
                    re: z.re,
                    im: z.im,
                    residual: *r,
                })
                .collect();
            Body::Csv(csv_body(&rows, &["index", "re", "im", "residual"])?)
        }
    };
    Ok(Artifact::with_notes(body, notes))
}

#[derive(Serialize)]
struct PcfHit {
    alpha: String,
    num: i64,
    den: i64,
}

fn pcf_scan(fmt: Format, d: FamilyDegree, num_max: i64, den_max: i64, budget: usize) -> Result<Artifact, CliError> {
    if num_max < 0 || den_max < 1 {
        return Err(CliError::Usage("need num-max >= 0 and den-max >= 1".into()));
    }
    let mut hits = Vec::new();
    let mut scanned = 0u64;
    for den in 1..=den_max {
        for num in -num_max..=num_max {
            let a = BigRational::new(num.into(), den.into());
            if *a.denom() != BigInt::from(den) {
                continue;
            }
            scanned += 1;
            if is_pcf_rational(d, &a, budget)? {
                hits.push(PcfHit {
                    alpha: a.to_string(),
                    num,
                    den,
                });
            }
        }
    }
    hits.sort_by(|x, y| (x.num * y.den).cmp(&(y.num * x.den)));
    let notes = json!({"scanned": scanned, "hits": hits.len()});
    let body = match fmt {
        Format::Json => Body::Json(json!({"scanned": scanned, "hits": hits})),
        _ => Body::Csv(csv_body(&hits, &["alpha", "num", "den"])?),
    };
    Ok(Artifact::with_notes(body, notes))
}

fn support_string(support: &[PrimePower]) -> String {
    support
        .iter()
        .map(|p| format!("{}^{}", p.prime, p.multiplicity))
        .collect::<Vec<_>>()
        .join(";")
}

fn unfactored_string(c: &ResultantCertificate) -> String {
    c.unfactored.as_ref().map(ToString::to_string).unwrap_or_default()
}

#[derive(Serialize)]
struct GleasonCsv {
    n: u32,
    n_other: u32,
    resultant: String,
    is_unit: bool,
    violation: bool,
}

fn gleason_table(fmt: Format, d: FamilyDegree, n_max: u32) -> Result<Artifact, CliError> {
    let t = gleason_pairwise_unit_table(d, n_max)?;
    let violations = t.iter().filter(|c| c.violation).count();
    let notes = json!({"pairs": t.len(), "violations": violations});
    let body = match fmt {
        Format::Json => Body::Json(json!({"cells": t, "violations": violations})),
        _ => {
            let rows: Vec<GleasonCsv> = t
                .iter()
                .map(|c| GleasonCsv {
                    n: c.n,
                    n_other: c.n_other,
                    resultant: c.certificate.resultant.to_string(),
                    is_unit: c.certificate.is_unit,
                    violation: c.violation,
                })
                .collect();
            Body::Csv(csv_body(&rows, &["n", "n_other", "resultant", "is_unit", "violation"])?)
        }
    };
    Ok(Artifact::with_notes(body, notes))
}

#[derive(Serialize)]
struct MisiurewiczCsv {
    n: u32,
    m: u32,
    period: u32,
    resultant: String,
    prime_support: String,
    unfactored: String,
    hypothesis_applies: bool,
    within_prediction: bool,
}

fn misiurewicz_table(fmt: Format, d: FamilyDegree, n_max: u32, m_max: u32, k_max: u32) -> Result<Artifact, CliError> {
    let t = gleason_misiurewicz_table(d, n_max, m_max, k_max)?;
    let outside = t.iter().filter(|c| !c.within_prediction).count();
    let notes = json!({"cells": t.len(), "outside_prediction": outside});
    let body = match fmt {
        Format::Json => Body::Json(json!({"cells": t, "outside_prediction": outside})),
        _ => {
            let rows: Vec<MisiurewiczCsv> = t
                .iter()
                .map(|c| MisiurewiczCsv {
                    n: c.n,
                    m: c.m,
                    period: c.mis_period,
                    resultant: c.certificate.resultant.to_string(),
                    prime_support: support_string(&c.certificate.prime_support),
                    unfactored: unfactored_string(&c.certificate),
                    hypothesis_applies: c.hypothesis_applies,
                    within_prediction: c.within_prediction,
                })
                .collect();
            Body::Csv(csv_body(
                &rows,
                &[
                    "n",
                    "m",
                    "period",
                    "resultant",
                    "prime_support",
                    "unfactored",
                    "hypothesis_applies",
                    "within_prediction",
                ],
            )?)
        }
    };
    Ok(Artifact::with_notes(body, notes))
}
