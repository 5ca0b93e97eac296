//! Doubled embeddings and the orientation-extraction engine.
//!
//! A doubled embedding designates `l` disjoint vertex pairs `(a_i, b_i)` in
//! a host 3-graph such that (pattern consistency) every choice of one
//! representative per pair induces the same pattern graph on `[l]`, and
//! (homogeneity) `(a_i b_i a_j)` is an edge exactly when `(a_i b_i b_j)` is.
//! From a valid embedding an orgraph on `[l]` is derived by the negation
//! rule: arc `<i, j>` iff both `(a_i b_i a_j)` and `(a_i b_i b_j)` are
//! non-edges of the host. When the host has no induced `I34`, `H1`, `H2`,
//! `H3` among the designated vertices, the derived orgraph is a
//! Fon-der-Flaass realization of the pattern; any failure is certified by a
//! concrete induced copy of one of those four graphs.

use itertools::Itertools;

use crate::constructions::named;
use crate::error::{Error, Result};
use crate::hypergraph::{iso_orbit, ThreeGraph};
use crate::orgraph::Orgraph;
use crate::regularity::{trace_of, Realization};

/// Designated pairs in a host graph. The pattern is always recomputed from
/// the host, never taken from the caller.
#[derive(Clone, Debug)]
pub struct DoubledEmbedding {
    host: ThreeGraph,
    pairs: Vec<(usize, usize)>,
}

/// Report of violated embedding conditions; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DoubledReport {
    /// Ordered index pairs `(i, j)` with `(a_i b_i a_j)` and `(a_i b_i b_j)`
    /// disagreeing.
    pub homogeneity: Vec<(usize, usize)>,
    /// `(triple of pair indices, chosen host vertices)` whose edge status
    /// disagrees with the pattern.
    pub consistency: Vec<([usize; 3], [usize; 3])>,
}

impl DoubledReport {
    pub fn is_valid(&self) -> bool {
        self.homogeneity.is_empty() && self.consistency.is_empty()
    }
}

/// Outcome of the orientation-derivation rule.
#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    Oriented(Orgraph),
    /// Both `<i, j>` and `<j, i>` were produced; the four designated
    /// vertices span no edge, i.e. an induced `I34`.
    Antiparallel {
        i: usize,
        j: usize,
        four_set: [usize; 4],
    },
}

/// Which certification step failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolatedClaim {
    Orientedness { i: usize, j: usize },
    FdfContainment { triple: [usize; 3] },
    P3barFreeness { triple: [usize; 3] },
    C4Freeness { quad: [usize; 4] },
}

/// A failed certification, localized to an induced forbidden subgraph among
/// the designated host vertices.
#[derive(Clone, Debug)]
pub struct FailureWitness {
    pub claim: ViolatedClaim,
    /// `"I34"`, `"H1"`, `"H2"` or `"H3"`.
    pub forbidden: &'static str,
    /// Host vertices inducing the named graph.
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(Realization),
    Failed(FailureWitness),
}

impl DoubledEmbedding {
    /// Structural validation only: pairs disjoint, vertices in range.
    /// Condition checking is [`DoubledEmbedding::check`].
    pub fn new(host: ThreeGraph, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidEmbedding("no pairs".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::InvalidEmbedding(format!("pair ({a}, {b}) repeats a vertex")));
            }
            for v in [a, b] {
                if v >= host.n() {
                    return Err(Error::InvalidEmbedding(format!(
                        "vertex {v} out of range for host on {} vertices",
                        host.n()
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidEmbedding(format!("vertex {v} used twice")));
                }
            }
        }
        Ok(DoubledEmbedding { host, pairs })
    }

    pub fn host(&self) -> &ThreeGraph {
        &self.host
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn ell(&self) -> usize {
        self.pairs.len()
    }

    /// All `2l` designated vertices, sorted.
    pub fn designated(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        d.sort_unstable();
        d
    }

    /// The pattern graph on `[l]` induced by the `a_i` representatives.
    pub fn pattern(&self) -> ThreeGraph {
        let l = self.ell();
        let mut g = ThreeGraph::empty(l);
        for k in 2..l {
            for j in 1..k {
                for i in 0..j {
                    if self
                        .host
                        .has_edge(self.pairs[i].0, self.pairs[j].0, self.pairs[k].0)
                    {
                        g.add_edge_unchecked(i, j, k);
                    }
                }
            }
        }
        g
    }

    /// Lists every homogeneity and pattern-consistency violation.
    pub fn check(&self) -> DoubledReport {
        let l = self.ell();
        let mut report = DoubledReport::default();
        for i in 0..l {
            for j in 0..l {
                if i == j {
                    continue;
                }
                let (ai, bi) = self.pairs[i];
                let with_a = self.host.has_edge(ai, bi, self.pairs[j].0);
                let with_b = self.host.has_edge(ai, bi, self.pairs[j].1);
                if with_a != with_b {
                    report.homogeneity.push((i, j));
                }
            }
        }
        let pattern = self.pattern();
        for tri in (0..l).combinations(3) {
            let (i, j, k) = (tri[0], tri[1], tri[2]);
            let expected = pattern.has_edge(i, j, k);
            for choice in 0..8u8 {
                let ci = if choice & 1 == 0 { self.pairs[i].0 } else { self.pairs[i].1 };
                let cj = if choice & 2 == 0 { self.pairs[j].0 } else { self.pairs[j].1 };
                let ck = if choice & 4 == 0 { self.pairs[k].0 } else { self.pairs[k].1 };
                if self.host.has_edge(ci, cj, ck) != expected {
                    report.consistency.push(([i, j, k], [ci, cj, ck]));
                }
            }
        }
        report
    }

    /// Arc `<i, j>` iff `(a_i b_i a_j)` and `(a_i b_i b_j)` are both
    /// non-edges of the host. Requires a passing [`DoubledEmbedding::check`].
    pub fn derive_orientation(&self) -> Result<DeriveOutcome> {
        if !self.check().is_valid() {
            return Err(Error::InvalidEmbedding(
                "embedding conditions violated; run check() for details".into(),
            ));
        }
        let l = self.ell();
        for i in 0..l {
            for j in i + 1..l {
                if self.rule_arc(i, j) && self.rule_arc(j, i) {
                    let (ai, bi) = self.pairs[i];
                    let (aj, bj) = self.pairs[j];
                    let mut four = [ai, bi, aj, bj];
                    four.sort_unstable();
                    debug_assert_eq!(self.host.induced(&four).unwrap().edge_count(), 0);
                    return Ok(DeriveOutcome::Antiparallel { i, j, four_set: four });
                }
            }
        }
        let mut arcs = Vec::new();
        for i in 0..l {
            for j in 0..l {
                if i != j && self.rule_arc(i, j) {
                    arcs.push((i, j));
                }
            }
        }
        Ok(DeriveOutcome::Oriented(
            Orgraph::new(l, &arcs).expect("antiparallel pairs handled above"),
        ))
    }

    #[inline]
    fn rule_arc(&self, i: usize, j: usize) -> bool {
        let (ai, bi) = self.pairs[i];
        let (aj, bj) = self.pairs[j];
        !self.host.has_edge(ai, bi, aj) && !self.host.has_edge(ai, bi, bj)
    }

    /// Derives the orgraph and checks, in order: orientedness, Fon-der-Flaass
    /// containment in the pattern, `P3bar`-freeness, `C4`-freeness. On
    /// success the pattern is regular with the derived witness; on failure
    /// the returned witness names an induced `I34`, `H1`, `H2` or `H3` among
    /// the designated host vertices.
    pub fn certify(&self) -> Result<CertifyOutcome> {
        let gamma = match self.derive_orientation()? {
            DeriveOutcome::Oriented(g) => g,
            DeriveOutcome::Antiparallel { i, j, four_set } => {
                return Ok(CertifyOutcome::Failed(FailureWitness {
                    claim: ViolatedClaim::Orientedness { i, j },
                    forbidden: "I34",
                    subset: four_set.to_vec(),
                }));
            }
        };
        let pattern = self.pattern();
        let fdf = gamma.fdf_interpret();
        for e in fdf.edges() {
            if !pattern.has_edge(e[0], e[1], e[2]) {
                return self.fail(ViolatedClaim::FdfContainment { triple: e });
            }
        }
        if let Some(t) = gamma.find_induced_p3bar() {
            return self.fail(ViolatedClaim::P3barFreeness { triple: t });
        }
        if let Some(q) = gamma.find_induced_c4() {
            return self.fail(ViolatedClaim::C4Freeness { quad: q });
        }
        let trace = trace_of(&pattern, &gamma);
        Ok(CertifyOutcome::Certified(Realization { orgraph: gamma, trace }))
    }

    fn fail(&self, claim: ViolatedClaim) -> Result<CertifyOutcome> {
        match self.locate_forbidden() {
            Some((name, subset)) => Ok(CertifyOutcome::Failed(FailureWitness {
                claim,
                forbidden: name,
                subset,
            })),
            // a violated claim without a forbidden copy among the designated
            // vertices would falsify the extraction argument itself
            None => Err(Error::InvalidEmbedding(format!(
                "claim {claim:?} violated but no induced I34/H1/H2/H3 found among designated vertices"
            ))),
        }
    }

    /// Exhaustive scan of the designated vertices: 4-subsets for `I34`
    /// first, then 5-subsets for `H1`, `H2`, `H3`.
    fn locate_forbidden(&self) -> Option<(&'static str, Vec<usize>)> {
        let d = self.designated();
        for quad in d.iter().copied().combinations(4) {
            if self.host.induced_pattern(&quad) == 0 {
                return Some(("I34", quad));
            }
        }
        if d.len() >= 5 {
            let targets: Vec<(&'static str, Vec<u64>)> = ["H1", "H2", "H3"]
                .iter()
                .map(|&n| (n, iso_orbit(&named(n).unwrap())))
                .collect();
            for five in d.iter().copied().combinations(5) {
                let mask = self.host.induced_pattern(&five);
                for (name, orbit) in &targets {
                    if orbit.binary_search(&mask).is_ok() {
                        return Some((name, five));
                    }
                }
            }
        }
        None
    }
}

/// Outcome of the brute-force embedding search.
#[derive(Clone, Debug)]
pub enum EmbeddingSearch {
    Found(DoubledEmbedding),
    /// The whole space was covered without finding a valid embedding.
    ExhaustedNone { evaluated: u64 },
    /// The budget ran out first; absence is not proven.
    BudgetExceeded { evaluated: u64 },
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// Brute-force search for a valid doubled embedding of `l` pairs in `host`,
/// over tuples of disjoint pairs with early homogeneity and consistency
/// pruning. Pair tuples are explored with ascending first elements; every
/// reindexing or within-pair swap of a valid embedding is valid, so this
/// loses nothing.
pub fn find_doubled_embedding(host: &ThreeGraph, l: usize, budget: u64) -> Result<EmbeddingSearch> {
    if l == 0 {
        return Err(Error::InvalidEmbedding("no pairs requested".into()));
    }
    let n = host.n();
    if 2 * l > n {
        return Err(Error::SizeOrder { small: 2 * l, large: n });
    }
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(l);
    let mut used = vec![false; n];
    let mut evaluated = 0u64;
    let found = extend(host, l, &mut chosen, &mut used, &mut evaluated, budget);
    Ok(match found {
        Extend::Found(pairs) => EmbeddingSearch::Found(DoubledEmbedding::new(host.clone(), pairs)?),
        Extend::None => EmbeddingSearch::ExhaustedNone { evaluated },
        Extend::OutOfBudget => EmbeddingSearch::BudgetExceeded { evaluated },
    })
}

enum Extend {
    Found(Vec<(usize, usize)>),
    None,
    OutOfBudget,
}

fn extend(
    host: &ThreeGraph,
    l: usize,
    chosen: &mut Vec<(usize, usize)>,
    used: &mut Vec<bool>,
    evaluated: &mut u64,
    budget: u64,
) -> Extend {
    if chosen.len() == l {
        return Extend::Found(chosen.clone());
    }
    let n = host.n();
    // a_i ascending across pairs; within a pair a < b is no loss since the
    // conditions and the derivation rule are swap-invariant
    let start = chosen.last().map_or(0, |&(a, _)| a + 1);
    for a in start..n {
        if used[a] {
            continue;
        }
        for b in a + 1..n {
            if used[b] {
                continue;
            }
            *evaluated += 1;
            if *evaluated > budget {
                return Extend::OutOfBudget;
            }
            if !compatible(host, chosen, (a, b)) {
                continue;
            }
            chosen.push((a, b));
            used[a] = true;
            used[b] = true;
            let sub = extend(host, l, chosen, used, evaluated, budget);
            chosen.pop();
            used[a] = false;
            used[b] = false;
            match sub {
                Extend::None => {}
                other => return other,
            }
        }
    }
    Extend::None
}

/// Homogeneity and consistency of the new pair against everything chosen.
fn compatible(host: &ThreeGraph, chosen: &[(usize, usize)], new: (usize, usize)) -> bool {
    let (at, bt) = new;
    for &(aj, bj) in chosen {
        if host.has_edge(at, bt, aj) != host.has_edge(at, bt, bj) {
            return false;
        }
        if host.has_edge(aj, bj, at) != host.has_edge(aj, bj, bt) {
            return false;
        }
    }
    for (x, &(aj, bj)) in chosen.iter().enumerate() {
        for &(ak, bk) in chosen.iter().skip(x + 1) {
            let expected = host.has_edge(aj, ak, at);
            for &cj in &[aj, bj] {
                for &ck in &[ak, bk] {
                    for &ct in &[at, bt] {
                        if host.has_edge(cj, ck, ct) != expected {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Support constructor: a Kostochka slice where every base height gets a
/// `+1/100` clone, with the clone pairs designated. Base heights must be
/// integers and pass the strict spec validation; integral pairwise sums are
/// then nonzero and cannot change sign under the perturbation, which is what
/// makes the clones homogeneous.
pub fn kostochka_doubled(base: &[(usize, i64)]) -> DoubledEmbedding {
    use num_rational::BigRational;
    let eps = BigRational::new(1.into(), 100.into());
    let mut base_heights: [Vec<BigRational>; 3] = Default::default();
    let mut heights: [Vec<BigRational>; 3] = Default::default();
    for &(class, x) in base {
        let x = BigRational::from_integer(x.into());
        base_heights[class].push(x.clone());
        heights[class].push(x.clone());
        heights[class].push(x + &eps);
    }
    crate::constructions::KostochkaSpec::new(base_heights, true)
        .expect("base heights must form a strict spec");
    let spec = crate::constructions::KostochkaSpec::new(heights, true).expect("clone heights are valid");
    let pairs: Vec<(usize, usize)> = {
        let verts = spec.vertices();
        base.iter()
            .map(|&(class, x)| {
                let x = BigRational::from_integer(x.into());
                let xe = &x + &eps;
                let i = verts.iter().position(|&(c, h)| c == class && *h == x).unwrap();
                let j = verts.iter().position(|&(c, h)| c == class && *h == xe).unwrap();
                (i, j)
            })
            .collect()
    };
    let host = spec.three_graph();
    DoubledEmbedding::new(host, pairs).expect("clone pairs are disjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_isomorphic;
    use crate::regularity::validate_realization;

    #[test]
    fn structural_validation() {
        let k6 = ThreeGraph::complete(6);
        assert!(DoubledEmbedding::new(k6.clone(), vec![(0, 0)]).is_err());
        assert!(DoubledEmbedding::new(k6.clone(), vec![(0, 1), (1, 2)]).is_err());
        assert!(DoubledEmbedding::new(k6.clone(), vec![(0, 7)]).is_err());
        assert!(DoubledEmbedding::new(k6, vec![(0, 1), (2, 3), (4, 5)]).is_ok());
    }

    #[test]
    fn complete_host_always_valid() {
        let k6 = ThreeGraph::complete(6);
        let d = DoubledEmbedding::new(k6, vec![(0, 3), (1, 4), (2, 5)]).unwrap();
        assert!(d.check().is_valid());
        assert_eq!(d.pattern(), ThreeGraph::complete(3));
    }

    #[test]
    fn kostochka_clone_pairs_are_valid() {
        let d = kostochka_doubled(&[(0, 1), (1, 1), (2, 1)]);
        assert!(d.check().is_valid());
        let d = kostochka_doubled(&[(0, -3), (0, 2), (1, 1), (2, -5), (2, 4)]);
        assert!(d.check().is_valid());
    }

    #[test]
    fn homogeneity_violation_reported() {
        // single edge (a1 b1 a2) with (a1 b1 b2) missing
        let host = ThreeGraph::new(4, &[[0, 1, 2]]).unwrap();
        let d = DoubledEmbedding::new(host, vec![(0, 1), (2, 3)]).unwrap();
        let report = d.check();
        assert!(report.consistency.is_empty());
        assert_eq!(report.homogeneity, vec![(0, 1)]);
        assert!(d.derive_orientation().is_err());
    }

    #[test]
    fn derive_on_complete_host_is_empty() {
        let k4 = ThreeGraph::complete(4);
        let d = DoubledEmbedding::new(k4, vec![(0, 1), (2, 3)]).unwrap();
        match d.derive_orientation().unwrap() {
            DeriveOutcome::Oriented(g) => assert_eq!(g.arc_count(), 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derive_single_arc_case() {
        // (a2 b2 a1) and (a2 b2 b1) are edges, so no arc <2,1>; the pair
        // (a1, b1) sees only non-edges toward pair 2, giving the arc <1,2>
        let host = ThreeGraph::new(4, &[[0, 2, 3], [1, 2, 3]]).unwrap();
        let d = DoubledEmbedding::new(host, vec![(0, 1), (2, 3)]).unwrap();
        assert!(d.check().is_valid());
        match d.derive_orientation().unwrap() {
            DeriveOutcome::Oriented(g) => {
                assert!(g.arc(0, 1));
                assert!(!g.arc(1, 0));
                assert_eq!(g.arc_count(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derive_on_positive_kostochka_is_cyclic() {
        let d = kostochka_doubled(&[(0, 1), (1, 1), (2, 1)]);
        match d.derive_orientation().unwrap() {
            DeriveOutcome::Oriented(g) => {
                // class a points at class a-1
                assert!(g.arc(0, 2) && g.arc(1, 0) && g.arc(2, 1));
                assert_eq!(g.arc_count(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn antiparallel_derivation_names_i34() {
        // pairs (0,1) and (2,3) with no edge inside {0,1,2,3}; vertex 4
        // covers every other 4-set
        let host = ThreeGraph::new(
            5,
            &[[0, 1, 4], [0, 2, 4], [0, 3, 4], [1, 2, 4], [1, 3, 4], [2, 3, 4]],
        )
        .unwrap();
        let d = DoubledEmbedding::new(host, vec![(0, 1), (2, 3)]).unwrap();
        assert!(d.check().is_valid());
        match d.derive_orientation().unwrap() {
            DeriveOutcome::Antiparallel { four_set, .. } => {
                assert_eq!(four_set, [0, 1, 2, 3]);
            }
            other => panic!("unexpected {other:?}"),
        }
        match d.certify().unwrap() {
            CertifyOutcome::Failed(w) => {
                assert_eq!(w.forbidden, "I34");
                assert!(matches!(w.claim, ViolatedClaim::Orientedness { .. }));
                assert_eq!(d.host().induced(&w.subset).unwrap().edge_count(), 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derive_is_swap_invariant() {
        let d = kostochka_doubled(&[(0, 1), (1, -2), (2, 3)]);
        let swapped = DoubledEmbedding::new(
            d.host().clone(),
            d.pairs().iter().map(|&(a, b)| (b, a)).collect(),
        )
        .unwrap();
        let g1 = match d.derive_orientation().unwrap() {
            DeriveOutcome::Oriented(g) => g,
            other => panic!("unexpected {other:?}"),
        };
        let g2 = match swapped.derive_orientation().unwrap() {
            DeriveOutcome::Oriented(g) => g,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(g1, g2);
    }

    #[test]
    fn certify_kostochka_doubled_hosts() {
        for base in [
            vec![(0usize, 1i64), (1, 1), (2, 1)],
            vec![(0, -3), (1, 2), (2, 1)],
            vec![(0, 1), (0, 2), (1, 1), (2, 1)],
            vec![(0, -1), (0, 3), (1, -2), (1, 4), (2, 5)],
        ] {
            let d = kostochka_doubled(&base);
            match d.certify().unwrap() {
                CertifyOutcome::Certified(r) => {
                    assert!(validate_realization(&d.pattern(), &r).is_ok(), "{base:?}");
                }
                CertifyOutcome::Failed(w) => panic!("{base:?} failed: {w:?}"),
            }
        }
    }

    #[test]
    fn certify_complete_host() {
        let k6 = ThreeGraph::complete(6);
        let d = DoubledEmbedding::new(k6, vec![(0, 1), (2, 3), (4, 5)]).unwrap();
        match d.certify().unwrap() {
            CertifyOutcome::Certified(r) => {
                assert_eq!(r.orgraph.arc_count(), 0);
                assert!(validate_realization(&d.pattern(), &r).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    /// Host from the proof of the middle claim: clique on pairs 1, 2, both
    /// independent of pair 3 in the derived orgraph, and the cross edges
    /// `(c_1 c_2 a_3)` all absent.
    fn planted_h1_host() -> DoubledEmbedding {
        let mut edges: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        for t in [
            [0, 1, 4],
            [0, 1, 5],
            [2, 3, 4],
            [2, 3, 5],
            [0, 4, 5],
            [1, 4, 5],
            [2, 4, 5],
            [3, 4, 5],
        ] {
            edges.push(t);
        }
        let host = ThreeGraph::new(6, &edges).unwrap();
        DoubledEmbedding::new(host, vec![(0, 1), (2, 3), (4, 5)]).unwrap()
    }

    #[test]
    fn planted_h1_produces_failure_witness() {
        let d = planted_h1_host();
        assert!(d.check().is_valid());
        // all index pairs are independent, so the derived orgraph is empty
        // and FDF is complete while the pattern triple is a non-edge
        match d.certify().unwrap() {
            CertifyOutcome::Failed(w) => {
                assert_eq!(w.forbidden, "H1");
                assert!(matches!(w.claim, ViolatedClaim::FdfContainment { .. }));
                let induced = d.host().induced(&w.subset).unwrap();
                assert!(is_isomorphic(&induced, &named("H1").unwrap()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_complete_host_succeeds_immediately() {
        let k6 = ThreeGraph::complete(6);
        match find_doubled_embedding(&k6, 3, 1_000_000).unwrap() {
            EmbeddingSearch::Found(d) => assert!(d.check().is_valid()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_finds_clone_pairing_in_kostochka_host() {
        // Z3 x {1, 1+1/100, 2, 2+1/100}
        let d0 = kostochka_doubled(&[(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)]);
        let host = d0.host().clone();
        match find_doubled_embedding(&host, 3, 10_000_000).unwrap() {
            EmbeddingSearch::Found(d) => {
                assert!(d.check().is_valid());
                assert!(matches!(d.certify().unwrap(), CertifyOutcome::Certified(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_preconditions_and_budget() {
        let small = ThreeGraph::complete(5);
        assert!(find_doubled_embedding(&small, 3, 1000).is_err());
        let k8 = ThreeGraph::complete(8);
        match find_doubled_embedding(&k8, 4, 3).unwrap() {
            EmbeddingSearch::BudgetExceeded { evaluated } => assert!(evaluated > 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_covers_tiny_spaces() {
        let host = ThreeGraph::new(4, &[[0, 1, 2]]).unwrap();
        match find_doubled_embedding(&host, 2, 1_000_000).unwrap() {
            EmbeddingSearch::Found(d) => assert!(d.check().is_valid()),
            EmbeddingSearch::ExhaustedNone { evaluated } => assert!(evaluated > 0),
            EmbeddingSearch::BudgetExceeded { .. } => panic!("tiny space exceeded budget"),
        }
    }

    #[test]
    fn certify_depends_only_on_designated_vertices() {
        // junk vertices and edges around the planted configuration must not
        // change the outcome
        let d = planted_h1_host();
        let mut edges: Vec<[usize; 3]> = d.host().edges().collect();
        edges.push([0, 6, 7]);
        edges.push([5, 6, 7]);
        edges.push([1, 2, 6]);
        let bigger = ThreeGraph::new(8, &edges).unwrap();
        let d2 = DoubledEmbedding::new(bigger, d.pairs().to_vec()).unwrap();
        let (w1, w2) = match (d.certify().unwrap(), d2.certify().unwrap()) {
            (CertifyOutcome::Failed(a), CertifyOutcome::Failed(b)) => (a, b),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(w1.forbidden, w2.forbidden);
        assert_eq!(w1.subset, w2.subset);
        assert_eq!(w1.claim, w2.claim);
    }
}
