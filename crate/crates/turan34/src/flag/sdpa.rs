//! SDPA sparse export of the bound-maximization problem, the sidecar
//! manifest fixing the variable order, and a round-trip parser for the
//! sparse grammar.
//!
//! Encoded problem (SDPA primal convention `min c^T x` s.t.
//! `X(x) = Σ_i x_i F_i − F_0 ⪰ 0`): variable 1 is the bound `c` with
//! objective coefficient −1 (so the SDPA optimum is `−max c`); then one
//! variable per upper-triangle entry of each `Q_t`, type-major, row-major.
//! One PSD block per nonempty type pins `X_t = Q_t`; a final diagonal block
//! has one entry per family-free graph `G` carrying
//! `p(ρ, G) − Σ ⟨Q_t, M_t(G)⟩ − c >= 0`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{emit_threegraph, FMT_VERSION};
use crate::hypergraph::{enumerate_graphs, ThreeGraph};
use num_rational::BigRational;

use super::linalg::RatMatrix;
use super::{
    default_flag_size, edge_density, enumerate_flags, moment_matrix, Flag, FlagType,
};

/// A fully materialized export problem: graphs, densities and exact moment
/// matrices for every (type, graph) pair.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub family: Vec<String>,
    pub ell: usize,
    pub types: Vec<FlagType>,
    pub flag_lists: Vec<Vec<Flag>>,
    pub graphs: Vec<ThreeGraph>,
    pub densities: Vec<BigRational>,
    pub moments: Vec<Vec<RatMatrix>>,
}

impl SdpProblem {
    pub fn build(family: &[String], ell: usize, types: Vec<FlagType>) -> Result<Self> {
        if ell > 6 {
            return Err(Error::CapExceeded(ell, 6));
        }
        let fam_graphs = crate::constructions::parse_family(&family.join(","))?;
        let graphs = enumerate_graphs(ell, &fam_graphs)?;
        let flag_lists: Vec<Vec<Flag>> = types
            .iter()
            .map(|t| {
                let f = default_flag_size(t, ell);
                if f <= t.size() && t.size() > 0 {
                    // no room to extend: use the type itself as its only flag
                    enumerate_flags(t, t.size(), &fam_graphs)
                } else {
                    enumerate_flags(t, f, &fam_graphs)
                }
            })
            .collect::<Result<_>>()?;
        let densities: Vec<BigRational> = graphs.iter().map(edge_density).collect();
        let moments: Vec<Vec<RatMatrix>> = types
            .iter()
            .zip(&flag_lists)
            .map(|(t, fl)| {
                graphs
                    .iter()
                    .map(|g| moment_matrix(t, fl, g))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        Ok(SdpProblem {
            family: family.to_vec(),
            ell,
            types,
            flag_lists,
            graphs,
            densities,
            moments,
        })
    }

    /// Number of scalar variables: the bound plus each upper-triangle entry.
    pub fn variable_count(&self) -> usize {
        1 + self
            .flag_lists
            .iter()
            .map(|fl| fl.len() * (fl.len() + 1) / 2)
            .sum::<usize>()
    }

    /// Exact minimum slack of given `Q` matrices over the problem's graphs.
    pub fn min_slack(&self, mats: &[RatMatrix]) -> Option<(BigRational, usize)> {
        let mut best: Option<(BigRational, usize)> = None;
        for (gi, _) in self.graphs.iter().enumerate() {
            let mut slack = self.densities[gi].clone();
            for (t, m) in mats.iter().enumerate() {
                if m.dim() > 0 {
                    slack -= m.inner(&self.moments[t][gi]);
                }
            }
            if best.as_ref().is_none_or(|(s, _)| slack < *s) {
                best = Some((slack, gi));
            }
        }
        best
    }

    /// SDPA sparse (`.dat-s`) text.
    pub fn to_sdpa(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "\"turan density lower bound: family {:?} ell {}\"\n",
            self.family.join(","),
            self.ell
        ));
        let psd_blocks: Vec<usize> = self
            .flag_lists
            .iter()
            .enumerate()
            .filter(|(_, fl)| !fl.is_empty())
            .map(|(t, _)| t)
            .collect();
        let m = self.variable_count();
        let nblocks = psd_blocks.len() + 1;
        out.push_str(&format!("{m}\n{nblocks}\n"));
        let mut sizes: Vec<String> = psd_blocks
            .iter()
            .map(|&t| self.flag_lists[t].len().to_string())
            .collect();
        sizes.push(format!("-{}", self.graphs.len()));
        out.push_str(&sizes.join(" "));
        out.push('\n');
        // objective: minimize -bound
        let mut c = vec!["0".to_string(); m];
        c[0] = "-1".to_string();
        out.push_str(&c.join(" "));
        out.push('\n');
        let lp_block = nblocks;
        let fmt = |r: &BigRational| format!("{:.17}", r.to_f64().unwrap_or(0.0));
        // F_0 on the LP block: -p(rho, G)
        for (gi, d) in self.densities.iter().enumerate() {
            out.push_str(&format!("0 {lp_block} {} {} {}\n", gi + 1, gi + 1, fmt(&-d.clone())));
        }
        // bound variable: -1 on every LP diagonal entry
        for gi in 0..self.graphs.len() {
            out.push_str(&format!("1 {lp_block} {} {} -1\n", gi + 1, gi + 1));
        }
        // Q entries: identity into the PSD block, -mult*M into the LP block
        let mut var = 1usize;
        for (bi, &t) in psd_blocks.iter().enumerate() {
            let dim = self.flag_lists[t].len();
            for a in 0..dim {
                for b in a..dim {
                    var += 1;
                    out.push_str(&format!("{var} {} {} {} 1\n", bi + 1, a + 1, b + 1));
                    for (gi, mg) in self.moments[t].iter().enumerate() {
                        let mult: BigRational = if a == b {
                            BigRational::from_integer(1.into())
                        } else {
                            BigRational::from_integer(2.into())
                        };
                        let coeff = -(mg.get(a, b) * mult);
                        if !num_traits::Zero::is_zero(&coeff) {
                            out.push_str(&format!(
                                "{var} {lp_block} {} {} {}\n",
                                gi + 1,
                                gi + 1,
                                fmt(&coeff)
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Sidecar JSON documenting variable ordering and everything needed to
    /// rebuild the problem for rounding.
    pub fn manifest_json(&self) -> String {
        #[derive(Serialize)]
        struct VarDto {
            index: usize,
            role: String,
        }
        #[derive(Serialize)]
        struct ManifestDto {
            fmt_version: u32,
            family: Vec<String>,
            ell: usize,
            objective: String,
            types: Vec<Option<String>>,
            flag_sizes: Vec<usize>,
            flags: Vec<Vec<String>>,
            graphs: Vec<String>,
            variables: Vec<VarDto>,
        }
        let mut variables = vec![VarDto { index: 1, role: "bound".into() }];
        let mut var = 1usize;
        for (t, fl) in self.flag_lists.iter().enumerate() {
            if fl.is_empty() {
                continue;
            }
            for a in 0..fl.len() {
                for b in a..fl.len() {
                    var += 1;
                    variables.push(VarDto {
                        index: var,
                        role: format!("Q[{t}][{a}][{b}]"),
                    });
                }
            }
        }
        let dto = ManifestDto {
            fmt_version: FMT_VERSION,
            family: self.family.clone(),
            ell: self.ell,
            objective: "minimize -bound (SDPA primal); optimum = -(best lower bound)".into(),
            types: self.types.iter().map(|t| t.graph().map(emit_threegraph)).collect(),
            flag_sizes: self
                .flag_lists
                .iter()
                .map(|fl| fl.first().map_or(0, Flag::size))
                .collect(),
            flags: self
                .flag_lists
                .iter()
                .map(|fl| fl.iter().map(|f| emit_threegraph(&f.graph)).collect())
                .collect(),
            graphs: self.graphs.iter().map(emit_threegraph).collect(),
            variables,
        };
        serde_json::to_string_pretty(&dto).expect("manifest serialization cannot fail")
    }
}

/// Manifest fields needed to rebuild an [`SdpProblem`] for rounding.
#[derive(Deserialize)]
pub struct ManifestHeader {
    pub family: Vec<String>,
    pub ell: usize,
    pub types: Vec<Option<String>>,
}

pub fn problem_from_manifest(text: &str) -> Result<SdpProblem> {
    let header: ManifestHeader =
        serde_json::from_str(text).map_err(|e| Error::BadCertificate(format!("manifest: {e}")))?;
    let types: Vec<FlagType> = header
        .types
        .iter()
        .map(|t| {
            Ok(match t {
                None => FlagType::empty(),
                Some(g) => FlagType::of(crate::format::parse_threegraph(g)?),
            })
        })
        .collect::<Result<_>>()?;
    SdpProblem::build(&header.family, header.ell, types)
}

/// Parsed SDPA sparse file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSdpa {
    pub m: usize,
    pub blocks: Vec<i64>,
    pub c: Vec<f64>,
    /// `(matno, block, i, j, value)` with 1-based indices; `matno` 0 is F_0.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

/// Parser for the published sparse grammar: `"`/`*` comment lines, then
/// mDIM, nBLOCK, the block structure (separators `,(){}` allowed), the
/// objective vector, then 5-tuples.
pub fn parse_sdpa(text: &str) -> Result<ParsedSdpa> {
    let mut tokens: Vec<(usize, String)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.starts_with('"') || trimmed.starts_with('*') {
            continue;
        }
        for tok in line
            .replace(['(', ')', '{', '}', ','], " ")
            .split_whitespace()
        {
            tokens.push((ln + 1, tok.to_string()));
        }
    }
    fn take(tokens: &[(usize, String)], pos: &mut usize, what: &str) -> Result<(usize, String)> {
        let t = tokens
            .get(*pos)
            .cloned()
            .ok_or_else(|| Error::parse(tokens.last().map_or(1, |t| t.0), 1, format!("missing {what}")))?;
        *pos += 1;
        Ok(t)
    }
    let mut pos = 0usize;
    let (ln, tok) = take(&tokens, &mut pos, "mDIM")?;
    let m: usize = tok
        .parse()
        .map_err(|_| Error::parse(ln, 1, format!("bad mDIM {tok:?}")))?;
    let (ln, tok) = take(&tokens, &mut pos, "nBLOCK")?;
    let nblock: usize = tok
        .parse()
        .map_err(|_| Error::parse(ln, 1, format!("bad nBLOCK {tok:?}")))?;
    let mut blocks = Vec::with_capacity(nblock);
    for _ in 0..nblock {
        let (ln, tok) = take(&tokens, &mut pos, "block size")?;
        blocks.push(
            tok.parse::<i64>()
                .map_err(|_| Error::parse(ln, 1, format!("bad block size {tok:?}")))?,
        );
    }
    let mut c = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, tok) = take(&tokens, &mut pos, "objective entry")?;
        c.push(
            tok.parse::<f64>()
                .map_err(|_| Error::parse(ln, 1, format!("bad objective entry {tok:?}")))?,
        );
    }
    let mut entries = Vec::new();
    while pos < tokens.len() {
        let mut tuple = [0f64; 5];
        let mut lns = 0;
        for slot in &mut tuple {
            let (ln, tok) = take(&tokens, &mut pos, "entry field")?;
            lns = ln;
            *slot = tok
                .parse::<f64>()
                .map_err(|_| Error::parse(ln, 1, format!("bad entry field {tok:?}")))?;
        }
        let (matno, blk, i, j) = (tuple[0] as usize, tuple[1] as usize, tuple[2] as usize, tuple[3] as usize);
        if matno > m {
            return Err(Error::parse(lns, 1, format!("matrix number {matno} exceeds mDIM {m}")));
        }
        if blk == 0 || blk > nblock {
            return Err(Error::parse(lns, 1, format!("block {blk} out of range")));
        }
        let dim = blocks[blk - 1].unsigned_abs() as usize;
        if i == 0 || j == 0 || i > dim || j > dim {
            return Err(Error::parse(lns, 1, format!("entry ({i}, {j}) outside block of size {dim}")));
        }
        entries.push((matno, blk, i, j, tuple[4]));
    }
    Ok(ParsedSdpa { m, blocks, c, entries })
}
