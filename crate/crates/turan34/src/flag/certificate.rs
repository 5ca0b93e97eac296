//! Rational flag certificates: JSON (de)serialization, exact verification,
//! and rounding of floating solver output.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::constructions::parse_family;
use crate::error::{Error, Result};
use crate::format::{emit_threegraph, parse_threegraph, FMT_VERSION};
use crate::hypergraph::enumerate_graphs;

use super::linalg::{nearest_rational, psd_check, psd_truncate, PsdFailure, RatMatrix};
use super::sdpa::SdpProblem;
use super::{edge_density, moment_matrix, Flag, FlagType};

/// Per-type PSD matrices and a claimed lower bound on a Turán density.
#[derive(Clone, Debug)]
pub struct FlagCertificate {
    pub family: Vec<String>,
    pub ell: usize,
    pub types: Vec<FlagType>,
    pub flags: Vec<Vec<Flag>>,
    pub matrices: Vec<RatMatrix>,
    pub bound: BigRational,
}

#[derive(Serialize, Deserialize)]
struct TypeDto {
    graph: Option<String>,
    labels: usize,
}

#[derive(Serialize, Deserialize)]
struct FlagDto {
    graph: String,
    labels: usize,
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    fmt_version: u32,
    family: Vec<String>,
    ell: usize,
    types: Vec<TypeDto>,
    flags: Vec<Vec<FlagDto>>,
    matrices: Vec<Vec<Vec<String>>>,
    bound: String,
}

fn ratio_to_string(r: &BigRational) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_from_string(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::BadCertificate(format!("bad rational {s:?}: {e}")))
}

impl FlagCertificate {
    pub fn to_json(&self) -> String {
        let dto = CertificateDto {
            fmt_version: FMT_VERSION,
            family: self.family.clone(),
            ell: self.ell,
            types: self
                .types
                .iter()
                .map(|t| TypeDto {
                    graph: t.graph().map(emit_threegraph),
                    labels: t.size(),
                })
                .collect(),
            flags: self
                .flags
                .iter()
                .map(|fl| {
                    fl.iter()
                        .map(|f| FlagDto {
                            graph: emit_threegraph(&f.graph),
                            labels: f.labels,
                        })
                        .collect()
                })
                .collect(),
            matrices: self
                .matrices
                .iter()
                .map(|m| {
                    m.rows()
                        .iter()
                        .map(|row| row.iter().map(ratio_to_string).collect())
                        .collect()
                })
                .collect(),
            bound: ratio_to_string(&self.bound),
        };
        serde_json::to_string_pretty(&dto).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: CertificateDto = serde_json::from_str(text)
            .map_err(|e| Error::BadCertificate(format!("json: {e}")))?;
        let types: Vec<FlagType> = dto
            .types
            .iter()
            .map(|t| {
                Ok(match &t.graph {
                    None => FlagType::empty(),
                    Some(g) => FlagType::of(parse_threegraph(g)?),
                })
            })
            .collect::<Result<_>>()?;
        let flags: Vec<Vec<Flag>> = dto
            .flags
            .iter()
            .map(|fl| {
                fl.iter()
                    .map(|f| {
                        Ok(Flag {
                            graph: parse_threegraph(&f.graph)?,
                            labels: f.labels,
                        })
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let matrices: Vec<RatMatrix> = dto
            .matrices
            .iter()
            .map(|rows| {
                let parsed: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|row| row.iter().map(|s| ratio_from_string(s)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                RatMatrix::from_rows(parsed)
                    .ok_or_else(|| Error::BadCertificate("non-square matrix".into()))
            })
            .collect::<Result<_>>()?;
        Ok(FlagCertificate {
            family: dto.family,
            ell: dto.ell,
            types,
            flags,
            matrices,
            bound: ratio_from_string(&dto.bound)?,
        })
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug)]
pub enum Rejection {
    Shape(String),
    NotPsd {
        type_index: usize,
        failure: PsdFailure,
    },
    BoundShortfall {
        verified: BigRational,
        claimed: BigRational,
        worst: crate::hypergraph::ThreeGraph,
    },
}

#[derive(Clone, Debug)]
pub enum VerifyOutcome {
    /// The exact minimum slack, which is at least the claimed bound.
    Accepted {
        verified: BigRational,
        worst: crate::hypergraph::ThreeGraph,
    },
    Rejected(Rejection),
}

/// Exact verification: (1) each `Q_t` is symmetric PSD by pivoted LDL^T;
/// (2) `slack(G) = p(ρ, G) − Σ_t ⟨Q_t, M_t(G)⟩` over every family-free `G`
/// on `ell` vertices; (3) accepted iff `min_G slack(G) >=` the claimed
/// bound, and the minimum is the verified lower bound. No floating point
/// anywhere on the accept path.
pub fn verify_certificate(cert: &FlagCertificate) -> Result<VerifyOutcome> {
    if cert.ell > 6 {
        return Err(Error::CapExceeded(cert.ell, 6));
    }
    if cert.types.len() != cert.flags.len() || cert.types.len() != cert.matrices.len() {
        return Ok(VerifyOutcome::Rejected(Rejection::Shape(format!(
            "{} types, {} flag lists, {} matrices",
            cert.types.len(),
            cert.flags.len(),
            cert.matrices.len()
        ))));
    }
    for (t, (fl, m)) in cert.flags.iter().zip(&cert.matrices).enumerate() {
        if fl.len() != m.dim() {
            return Ok(VerifyOutcome::Rejected(Rejection::Shape(format!(
                "type {t}: {} flags vs {}x{} matrix",
                fl.len(),
                m.dim(),
                m.dim()
            ))));
        }
        if !fl.is_empty() {
            let f = fl[0].size();
            let s = cert.types[t].size();
            if fl.iter().any(|x| x.size() != f || x.labels != s) {
                return Ok(VerifyOutcome::Rejected(Rejection::Shape(format!(
                    "type {t}: mixed flag sizes or label counts"
                ))));
            }
            if 2 * f < s || 2 * f - s > cert.ell {
                return Ok(VerifyOutcome::Rejected(Rejection::Shape(format!(
                    "type {t}: flags of size {f} do not fit at ell {}",
                    cert.ell
                ))));
            }
        }
        if !m.is_symmetric() {
            return Ok(VerifyOutcome::Rejected(Rejection::NotPsd {
                type_index: t,
                failure: PsdFailure::NotSymmetric,
            }));
        }
        if let Err(failure) = psd_check(m) {
            return Ok(VerifyOutcome::Rejected(Rejection::NotPsd { type_index: t, failure }));
        }
    }
    let family = parse_family(&cert.family.join(","))?;
    let graphs = enumerate_graphs(cert.ell, &family)?;
    let mut min_slack: Option<(BigRational, usize)> = None;
    for (gi, g) in graphs.iter().enumerate() {
        let mut slack = edge_density(g);
        for (t, ty) in cert.types.iter().enumerate() {
            if cert.flags[t].is_empty() {
                continue;
            }
            let m = moment_matrix(ty, &cert.flags[t], g)?;
            slack -= cert.matrices[t].inner(&m);
        }
        if min_slack.as_ref().is_none_or(|(s, _)| slack < *s) {
            min_slack = Some((slack, gi));
        }
    }
    let (verified, worst_idx) = min_slack.ok_or_else(|| {
        Error::BadCertificate("no family-free graphs at this size".into())
    })?;
    let worst = graphs[worst_idx].clone();
    if verified >= cert.bound {
        Ok(VerifyOutcome::Accepted { verified, worst })
    } else {
        Ok(VerifyOutcome::Rejected(Rejection::BoundShortfall {
            verified,
            claimed: cert.bound.clone(),
            worst,
        }))
    }
}

/// Rounds floating per-type matrices to rationals with denominators at most
/// `max_den`, symmetrizes, projects to PSD by truncating negative LDL^T
/// pivots, and assembles a certificate. The claimed bound is the rounded
/// solver bound when given, otherwise the exact minimum slack of the rounded
/// matrices; either way the certificate must still pass
/// [`verify_certificate`].
pub fn round_solution(
    problem: &SdpProblem,
    float_matrices: &[Vec<Vec<f64>>],
    solver_bound: Option<f64>,
    max_den: u64,
) -> Result<FlagCertificate> {
    if float_matrices.len() != problem.types.len() {
        return Err(Error::BadCertificate(format!(
            "{} matrices for {} types",
            float_matrices.len(),
            problem.types.len()
        )));
    }
    let mut matrices = Vec::with_capacity(float_matrices.len());
    for (t, rows) in float_matrices.iter().enumerate() {
        let dim = problem.flag_lists[t].len();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadCertificate(format!(
                "type {t}: expected a {dim}x{dim} matrix"
            )));
        }
        let exact = RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| nearest_rational(x, max_den)).collect())
                .collect(),
        )
        .expect("dimensions checked");
        matrices.push(psd_truncate(&exact));
    }
    let bound = match solver_bound {
        Some(b) => nearest_rational(b, max_den),
        None => {
            let mut min_slack: Option<BigRational> = None;
            for gi in 0..problem.graphs.len() {
                let mut slack = problem.densities[gi].clone();
                for (t, m) in matrices.iter().enumerate() {
                    if m.dim() > 0 {
                        slack -= m.inner(&problem.moments[t][gi]);
                    }
                }
                if min_slack.as_ref().is_none_or(|s| slack < *s) {
                    min_slack = Some(slack);
                }
            }
            min_slack.unwrap_or_else(BigRational::zero)
        }
    };
    Ok(FlagCertificate {
        family: problem.family.clone(),
        ell: problem.ell,
        types: problem.types.clone(),
        flags: problem.flag_lists.clone(),
        matrices,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{default_flag_size, default_types, enumerate_flags};
    use super::*;
    use crate::constructions::named;
    use crate::hypergraph::is_isomorphic;
    use num_traits::One;

    /// All-zero certificate over the given family at size `ell`.
    pub(crate) fn zero_certificate(family: &[&str], ell: usize, bound: BigRational) -> FlagCertificate {
        let types = default_types(ell);
        let fam_graphs: Vec<_> = family.iter().map(|n| named(n).unwrap()).collect();
        let flags: Vec<Vec<Flag>> = types
            .iter()
            .map(|t| enumerate_flags(t, default_flag_size(t, ell), &fam_graphs).unwrap())
            .collect();
        let matrices = flags.iter().map(|f| RatMatrix::zeros(f.len())).collect();
        FlagCertificate {
            family: family.iter().map(|s| s.to_string()).collect(),
            ell,
            types,
            flags,
            matrices,
            bound,
        }
    }

    #[test]
    fn zero_certificate_at_four_gives_quarter() {
        let cert = zero_certificate(&["I34"], 4, BigRational::new(1.into(), 4.into()));
        match verify_certificate(&cert).unwrap() {
            VerifyOutcome::Accepted { verified, worst } => {
                assert_eq!(verified, BigRational::new(1.into(), 4.into()));
                // worst graph: one edge on 4 vertices
                assert_eq!(worst.edge_count(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_certificate_empty_family_at_three() {
        let cert = zero_certificate(&[], 3, BigRational::zero());
        match verify_certificate(&cert).unwrap() {
            VerifyOutcome::Accepted { verified, worst } => {
                assert!(verified.is_zero());
                assert_eq!(worst.edge_count(), 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_eigenvalue_rejected_by_name() {
        let mut cert = zero_certificate(&["I34"], 4, BigRational::zero());
        // the 1-vertex type has a single flag at size 2; poison its matrix
        let idx = cert.types.iter().position(|t| t.size() == 1).unwrap();
        cert.matrices[idx] = RatMatrix::from_rows(vec![vec![BigRational::from_integer((-1).into())]])
            .unwrap();
        match verify_certificate(&cert).unwrap() {
            VerifyOutcome::Rejected(Rejection::NotPsd { type_index, failure }) => {
                assert_eq!(type_index, idx);
                assert!(matches!(failure, PsdFailure::NegativePivot { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bound_shortfall_reports_worst_graph() {
        let cert = zero_certificate(&["I34"], 4, BigRational::new(1.into(), 3.into()));
        match verify_certificate(&cert).unwrap() {
            VerifyOutcome::Rejected(Rejection::BoundShortfall { verified, worst, .. }) => {
                assert_eq!(verified, BigRational::new(1.into(), 4.into()));
                assert_eq!(worst.edge_count(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn accepted_i34_bounds_respect_the_sandwich() {
        // any accepted bound must stay below the constructed densities
        let four_ninths = BigRational::new(4.into(), 9.into());
        for ell in [4usize, 5] {
            let cert = zero_certificate(&["I34"], ell, BigRational::zero());
            if let VerifyOutcome::Accepted { verified, .. } = verify_certificate(&cert).unwrap() {
                assert!(verified < four_ninths, "ell={ell}: {verified}");
            } else {
                panic!("zero certificate must verify");
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut cert = zero_certificate(&["I34"], 4, BigRational::new(1.into(), 4.into()));
        let idx = cert.types.iter().position(|t| t.size() == 1).unwrap();
        cert.matrices[idx] =
            RatMatrix::from_rows(vec![vec![BigRational::new(3.into(), 7.into())]]).unwrap();
        let json = cert.to_json();
        let back = FlagCertificate::from_json(&json).unwrap();
        assert_eq!(back.family, cert.family);
        assert_eq!(back.ell, cert.ell);
        assert_eq!(back.bound, cert.bound);
        assert_eq!(back.matrices, cert.matrices);
        assert_eq!(back.flags.len(), cert.flags.len());
        for (a, b) in back.types.iter().zip(&cert.types) {
            assert_eq!(a, b);
        }
        assert!(FlagCertificate::from_json("{").is_err());
    }

    #[test]
    fn rounding_identity_on_exact_input() {
        let problem = SdpProblem::build(&["I34".into()], 4, default_types(4)).unwrap();
        let floats: Vec<Vec<Vec<f64>>> = problem
            .flag_lists
            .iter()
            .map(|fl| vec![vec![0.25; fl.len()]; fl.len()])
            .collect();
        let cert = round_solution(&problem, &floats, None, 1_000_000).unwrap();
        for m in &cert.matrices {
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    assert_eq!(*m.get(i, j), BigRational::new(1.into(), 4.into()));
                }
            }
        }
        assert!(matches!(verify_certificate(&cert).unwrap(), VerifyOutcome::Accepted { .. }));
    }

    #[test]
    fn rounding_projects_to_psd() {
        let problem = SdpProblem::build(&["I34".into()], 5, default_types(5)).unwrap();
        // garbage indefinite floats everywhere
        let floats: Vec<Vec<Vec<f64>>> = problem
            .flag_lists
            .iter()
            .map(|fl| {
                let d = fl.len();
                (0..d)
                    .map(|i| (0..d).map(|j| if i == j { -0.3 } else { 0.7 }).collect())
                    .collect()
            })
            .collect();
        let cert = round_solution(&problem, &floats, None, 10_000).unwrap();
        for m in &cert.matrices {
            assert!(psd_check(m).is_ok());
        }
        // self-computed bound always verifies
        assert!(matches!(verify_certificate(&cert).unwrap(), VerifyOutcome::Accepted { .. }));
    }

    #[test]
    fn known_m2_is_worst_graph_at_six_for_zero_certificate() {
        let cert = zero_certificate(&["I34"], 6, BigRational::zero());
        match verify_certificate(&cert).unwrap() {
            VerifyOutcome::Accepted { verified, worst } => {
                assert_eq!(verified, BigRational::new(6.into(), 20.into()));
                assert!(is_isomorphic(&worst, &named("M2").unwrap()));
            }
            other => panic!("unexpected {other:?}"),
        }
        let _ = BigRational::one();
    }
}
