//! Flag enumeration, exact moment matrices, certificate verification and
//! SDPA export for lower bounds on Turán densities.
//!
//! A type `σ` is a fully labeled 3-graph (possibly empty); a `σ`-flag is a
//! 3-graph whose first `|V(σ)|` vertices induce exactly `σ`. The moment
//! matrix of a flag list evaluated in `G` collects, for every pair of flags,
//! the probability that a uniformly random injective labeling of `σ` into
//! `G` together with two random disjoint extensions induces that pair. For
//! any positive-semidefinite `Q` the quantity `Σ_G p(G, Ĝ) ⟨Q, M(G)⟩` is a
//! nonnegative functional in the limit, which is what makes
//! `min_G [p(ρ, G) − Σ_t ⟨Q_t, M_t(G)⟩]` a valid lower bound on the limiting
//! edge density; everything here is evaluated in exact rational arithmetic.

mod certificate;
mod linalg;
mod sdpa;

pub use certificate::{
    round_solution, verify_certificate, FlagCertificate, Rejection, VerifyOutcome,
};
pub use linalg::{nearest_rational, psd_check, psd_truncate, PsdFailure, RatMatrix};
pub use sdpa::{parse_sdpa, ParsedSdpa, SdpProblem};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hypergraph::{binom_small, triple_index, ForbiddenFilter, ThreeGraph};

/// Flag sizes are capped here; moment matrices need `2f - |σ| <= l <= 6`.
pub const FLAG_SIZE_CAP: usize = 5;

/// A fully labeled 3-graph, possibly on zero vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagType {
    sigma: Option<ThreeGraph>,
}

impl FlagType {
    pub fn empty() -> Self {
        FlagType { sigma: None }
    }

    pub fn of(graph: ThreeGraph) -> Self {
        FlagType { sigma: Some(graph) }
    }

    pub fn size(&self) -> usize {
        self.sigma.as_ref().map_or(0, ThreeGraph::n)
    }

    pub fn graph(&self) -> Option<&ThreeGraph> {
        self.sigma.as_ref()
    }

    fn has_edge(&self, i: usize, j: usize, k: usize) -> bool {
        self.sigma.as_ref().is_some_and(|g| g.has_edge(i, j, k))
    }
}

/// A 3-graph whose first `labels` vertices are the (pointwise fixed) type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    pub graph: ThreeGraph,
    pub labels: usize,
}

impl Flag {
    pub fn size(&self) -> usize {
        self.graph.n()
    }

    /// The type induced by the labeled vertices.
    pub fn flag_type(&self) -> FlagType {
        if self.labels == 0 {
            FlagType::empty()
        } else {
            FlagType::of(self.graph.induced(&(0..self.labels).collect::<Vec<_>>()).unwrap())
        }
    }

    /// Minimal edge pattern over permutations fixing the labels pointwise.
    pub fn canonical_pattern(&self) -> u64 {
        flag_canonical_pattern(&self.graph, self.labels)
    }
}

fn flag_canonical_pattern(g: &ThreeGraph, labels: usize) -> u64 {
    debug_assert!(g.n() <= 8);
    let n = g.n();
    let free: Vec<usize> = (labels..n).collect();
    let mut best = u64::MAX;
    for perm_tail in free.iter().copied().permutations(free.len()) {
        let mut perm: Vec<usize> = (0..labels).collect();
        perm.extend(perm_tail);
        // perm maps positions to original vertices; invert for relabeling
        let mut inv = vec![0usize; n];
        for (pos, &orig) in perm.iter().enumerate() {
            inv[orig] = pos;
        }
        let mut mask = 0u64;
        for e in g.edges() {
            let mut t = [inv[e[0]], inv[e[1]], inv[e[2]]];
            t.sort_unstable();
            mask |= 1u64 << triple_index(t[0], t[1], t[2]);
        }
        best = best.min(mask);
    }
    if n == 0 {
        0
    } else {
        best
    }
}

/// True iff the first `labels` vertices of `g` induce exactly the type.
fn labeled_part_matches(g: &ThreeGraph, t: &FlagType) -> bool {
    let s = t.size();
    if g.n() < s {
        return false;
    }
    for k in 2..s {
        for j in 1..k {
            for i in 0..j {
                if g.has_edge(i, j, k) != t.has_edge(i, j, k) {
                    return false;
                }
            }
        }
    }
    true
}

/// One representative per flag-isomorphism class (isomorphisms fixing labels
/// pointwise) of `size`-vertex `forbidden`-free flags of type `t`, in
/// canonical-pattern order.
pub fn enumerate_flags(t: &FlagType, size: usize, forbidden: &[ThreeGraph]) -> Result<Vec<Flag>> {
    let s = t.size();
    if size > FLAG_SIZE_CAP {
        return Err(Error::CapExceeded(size, FLAG_SIZE_CAP));
    }
    if size < s || size == 0 {
        return Err(Error::SizeOrder { small: s.max(1), large: size });
    }
    let filter = ForbiddenFilter::new(forbidden);
    // triples not entirely inside the labeled part are free
    let all_triples: Vec<[usize; 3]> = (0..size)
        .combinations(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    let free: Vec<[usize; 3]> = all_triples
        .iter()
        .copied()
        .filter(|t| t[2] >= s)
        .collect();
    let mut seen = std::collections::HashMap::new();
    for choice in 0u64..(1 << free.len()) {
        let mut edges: Vec<[usize; 3]> = Vec::new();
        if let Some(sg) = t.graph() {
            edges.extend(sg.edges());
        }
        for (b, tri) in free.iter().enumerate() {
            if choice >> b & 1 == 1 {
                edges.push(*tri);
            }
        }
        let g = ThreeGraph::new(size, &edges)?;
        if !filter.passes(&g) {
            continue;
        }
        let flag = Flag { graph: g, labels: s };
        let key = flag.canonical_pattern();
        seen.entry(key).or_insert(flag);
    }
    let mut out: Vec<(u64, Flag)> = seen.into_iter().collect();
    out.sort_by_key(|(k, _)| *k);
    Ok(out.into_iter().map(|(_, f)| f).collect())
}

/// The default type set: the empty type and the 1-vertex type for `l >= 4`,
/// plus both 3-vertex types for `l >= 5`. Flag sizes are the largest `f`
/// with `2f - |σ| <= l`.
pub fn default_types(l: usize) -> Vec<FlagType> {
    let mut out = vec![FlagType::empty(), FlagType::of(ThreeGraph::empty(1))];
    if l >= 5 {
        out.push(FlagType::of(ThreeGraph::empty(3)));
        out.push(FlagType::of(ThreeGraph::new(3, &[[0, 1, 2]]).unwrap()));
    }
    out
}

pub fn default_flag_size(t: &FlagType, l: usize) -> usize {
    (l + t.size()) / 2
}

/// Exact moment matrix of a flag list in `G`: entry `(a, b)` is the
/// probability that a uniformly random injective tuple `θ` of `|σ|` vertices
/// induces `σ` and two uniformly random disjoint `(f - |σ|)`-subsets of the
/// rest extend `θ` to flags `a` and `b` respectively. If `G` admits no
/// `σ`-embedding the matrix is zero (the "empty average" convention, which
/// can only weaken a bound).
pub fn moment_matrix(t: &FlagType, flags: &[Flag], g: &ThreeGraph) -> Result<RatMatrix> {
    let s = t.size();
    let dim = flags.len();
    if dim == 0 {
        return Ok(RatMatrix::zeros(0));
    }
    let f = flags[0].size();
    for fl in flags {
        if fl.size() != f || fl.labels != s || !labeled_part_matches(&fl.graph, t) {
            return Err(Error::BadCertificate(
                "flag list mixes sizes or types".into(),
            ));
        }
    }
    let n = g.n();
    if 2 * f - s > n {
        return Err(Error::SizeOrder { small: 2 * f - s, large: n });
    }
    let ext = f - s;
    let index_of: std::collections::HashMap<u64, usize> = flags
        .iter()
        .enumerate()
        .map(|(i, fl)| (fl.canonical_pattern(), i))
        .collect();

    let mut counts = vec![vec![0u64; dim]; dim];
    let mut theta_count = 0u64;
    for theta in (0..n).permutations(s) {
        if !theta_induces(g, t, &theta) {
            continue;
        }
        theta_count += 1;
        let rest: Vec<usize> = (0..n).filter(|v| !theta.contains(v)).collect();
        for u_set in rest.iter().copied().combinations(ext) {
            let ia = classify(g, &theta, &u_set, &index_of);
            let rest2: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|v| !u_set.contains(v))
                .collect();
            for w_set in rest2.into_iter().combinations(ext) {
                let ib = classify(g, &theta, &w_set, &index_of);
                if let (Some(a), Some(b)) = (ia, ib) {
                    counts[a][b] += 1;
                }
            }
        }
    }
    let _ = theta_count;
    // denominator: injective θ tuples times ordered disjoint extension pairs
    let mut total = BigInt::from(1u64);
    for i in 0..s {
        total *= BigInt::from((n - i) as u64);
    }
    total *= crate::hypergraph::binom_big(n - s, ext);
    total *= crate::hypergraph::binom_big(n - f, ext);
    let mut m = RatMatrix::zeros(dim);
    for a in 0..dim {
        for b in 0..dim {
            m.set(
                a,
                b,
                BigRational::new(BigInt::from(counts[a][b]), total.clone()),
            );
        }
    }
    Ok(m)
}

fn theta_induces(g: &ThreeGraph, t: &FlagType, theta: &[usize]) -> bool {
    let s = theta.len();
    for k in 2..s {
        for j in 1..k {
            for i in 0..j {
                if g.has_edge(theta[i], theta[j], theta[k]) != t.has_edge(i, j, k) {
                    return false;
                }
            }
        }
    }
    true
}

/// Flag index of the extension `θ ∪ U`, or `None` when the induced flag is
/// not in the list (possible under forbidden-filtered lists).
fn classify(
    g: &ThreeGraph,
    theta: &[usize],
    u_set: &[usize],
    index_of: &std::collections::HashMap<u64, usize>,
) -> Option<usize> {
    let s = theta.len();
    let mut verts: Vec<usize> = theta.to_vec();
    verts.extend_from_slice(u_set);
    let k = verts.len();
    let mut sub = ThreeGraph::empty(k);
    for c in (0..k).combinations(3) {
        let (i, j, l) = (c[0], c[1], c[2]);
        if g.has_edge(verts[i], verts[j], verts[l]) {
            sub.add_edge_unchecked(i, j, l);
        }
    }
    index_of
        .get(&flag_canonical_pattern(&sub, s))
        .copied()
}

/// Edge density `p(ρ, G)` as an exact rational.
pub fn edge_density(g: &ThreeGraph) -> BigRational {
    BigRational::new(
        BigInt::from(g.edge_count() as u64),
        BigInt::from(binom_small(g.n(), 3)),
    )
}
