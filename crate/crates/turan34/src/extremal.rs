//! Exact minimal edge counts `ex_min(n; F)` with witness graphs.
//!
//! Iterative deepening on the edge count: at depth `m` the search branches
//! on the lexicographically first uncovered 4-set (adding one of its four
//! triples) and, once every 4-set is covered, on the absent triples of any
//! remaining induced forbidden copy. Canonical-form memoization prunes
//! isomorphic partial states; completions of isomorphic partials are
//! isomorphic, so the witness inventory up to isomorphism is unaffected.
//!
//! The uncovered-4-set branching assumes `I34` is in the family, which makes
//! every 4-set need an edge; for families without `I34` the cover loop is
//! skipped and only the forbidden-copy branching applies.

use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{
    binom_big, binom_small, canonical_form, iso_orbit, triple_index, Density, ForbiddenFilter,
    ThreeGraph,
};
use num_rational::BigRational;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
pub const DEFAULT_WITNESS_CAP: usize = 100;

#[derive(Clone, Debug)]
pub struct ExtremalOptions {
    pub node_budget: u64,
    pub witness_cap: usize,
    /// Collect every witness class at the minimum instead of stopping at the
    /// first.
    pub all_witnesses: bool,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        ExtremalOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
            all_witnesses: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub deepening_passes: u32,
}

#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub n: usize,
    /// Exact minimum when `exact`, otherwise unknown.
    pub minimum: Option<usize>,
    /// Proven lower bound (equals the minimum when exact).
    pub lower_bound: usize,
    /// Best known feasible edge count.
    pub upper_bound: Option<usize>,
    pub exact: bool,
    /// One representative per witness class, capped.
    pub witnesses: Vec<ThreeGraph>,
    pub stats: SearchStats,
}

impl ExtremalResult {
    pub fn density(&self) -> Option<Density> {
        self.minimum.map(|m| {
            Density::from_ratio(BigRational::new((m as u64).into(), binom_big(self.n, 3)))
        })
    }
}

fn family_contains_i34(forbidden: &[ThreeGraph]) -> bool {
    forbidden.iter().any(|h| h.n() == 4 && h.edge_count() == 0)
}

/// Counting bound when every 4-set must span an edge: each triple lies in
/// `n - 3` of the `C(n, 4)` 4-sets.
pub fn covering_lower_bound(n: usize) -> usize {
    if n < 4 {
        return 0;
    }
    (binom_small(n, 3) as usize).div_ceil(4)
}

struct BranchSearch<'a> {
    n: usize,
    filter: &'a ForbiddenFilter,
    cover_fours: bool,
    limit: usize,
    budget: u64,
    witness_cap: usize,
    collect_all: bool,
    graph: ThreeGraph,
    memo: HashSet<Vec<u8>>,
    witnesses: Vec<(Vec<u8>, ThreeGraph)>,
    stats: SearchStats,
    out_of_budget: bool,
}

impl<'a> BranchSearch<'a> {
    fn first_uncovered_four_set(&self) -> Option<[usize; 4]> {
        if !self.cover_fours {
            return None;
        }
        for q in (0..self.n).combinations(4) {
            let covered = q
                .iter()
                .copied()
                .combinations(3)
                .any(|t| self.graph.has_edge(t[0], t[1], t[2]));
            if !covered {
                return Some([q[0], q[1], q[2], q[3]]);
            }
        }
        None
    }

    /// Returns true when the subtree is fully explored (false = budget).
    fn dfs(&mut self) -> bool {
        if self.out_of_budget {
            return false;
        }
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            self.out_of_budget = true;
            return false;
        }
        let key = canonical_form(&self.graph).key().to_vec();
        if !self.memo.insert(key) {
            self.stats.memo_hits += 1;
            return true;
        }
        let branch_triples: Vec<[usize; 3]> = if let Some(q) = self.first_uncovered_four_set() {
            q.iter()
                .copied()
                .combinations(3)
                .map(|t| [t[0], t[1], t[2]])
                .collect()
        } else if let Some(subset) = self.filter.find_violation(&self.graph) {
            subset
                .iter()
                .copied()
                .combinations(3)
                .map(|t| [t[0], t[1], t[2]])
                .filter(|&[a, b, c]| !self.graph.has_edge(a, b, c))
                .collect()
        } else {
            // feasible: all 4-sets covered, no forbidden copy
            let cf = canonical_form(&self.graph);
            if self.witnesses.len() < self.witness_cap
                && !self.witnesses.iter().any(|(k, _)| *k == *cf.key())
            {
                let rep = self.graph.permuted(cf.permutation());
                self.witnesses.push((cf.key().to_vec(), rep));
            }
            return true;
        };
        if self.graph.edge_count() == self.limit {
            return true; // no room to repair
        }
        let mut complete = true;
        for [a, b, c] in branch_triples {
            self.graph.add_edge_unchecked(a, b, c);
            let done = self.dfs();
            self.graph.remove_edge_unchecked(a, b, c);
            complete &= done;
            if !self.collect_all && !self.witnesses.is_empty() {
                return complete;
            }
            if self.out_of_budget {
                return false;
            }
        }
        complete
    }
}

/// A forbidden-free graph built greedily, as an upper bound when the exact
/// search runs out of budget. `None` when even the complete graph is
/// forbidden.
fn greedy_feasible(n: usize, forbidden: &[ThreeGraph], filter: &ForbiddenFilter) -> Option<ThreeGraph> {
    let mut g = ThreeGraph::empty(n);
    let cover = family_contains_i34(forbidden);
    loop {
        let fix: Option<[usize; 3]> = if cover {
            (0..n)
                .combinations(4)
                .find(|q| {
                    !q.iter()
                        .copied()
                        .combinations(3)
                        .any(|t| g.has_edge(t[0], t[1], t[2]))
                })
                .map(|q| [q[0], q[1], q[2]])
        } else {
            None
        };
        let fix = fix.or_else(|| {
            filter.find_violation(&g).and_then(|s| {
                s.iter()
                    .copied()
                    .combinations(3)
                    .map(|t| [t[0], t[1], t[2]])
                    .find(|&[a, b, c]| !g.has_edge(a, b, c))
            })
        });
        match fix {
            Some([a, b, c]) => {
                if g.has_edge(a, b, c) {
                    return None;
                }
                g.add_edge_unchecked(a, b, c);
            }
            None => {
                if filter.passes(&g) {
                    return Some(g);
                }
                return None;
            }
        }
    }
}

/// Exact minimal edge count of an `n`-vertex graph containing no forbidden
/// member induced, with witnesses. When the node budget runs out the result
/// carries the best proven bounds and `exact = false`.
pub fn ex_min(n: usize, forbidden: &[ThreeGraph], opts: &ExtremalOptions) -> Result<ExtremalResult> {
    if n == 0 || n > crate::hypergraph::MAX_VERTICES {
        return Err(Error::BadVertexCount(n, crate::hypergraph::MAX_VERTICES));
    }
    let filter = ForbiddenFilter::new(forbidden);
    let cover = family_contains_i34(forbidden);
    let mut stats = SearchStats::default();
    let lb0 = if cover { covering_lower_bound(n) } else { 0 };
    let max_m = binom_small(n, 3) as usize;
    let mut budget_left = opts.node_budget;
    for m in lb0..=max_m {
        stats.deepening_passes += 1;
        let mut search = BranchSearch {
            n,
            filter: &filter,
            cover_fours: cover,
            limit: m,
            budget: budget_left,
            witness_cap: opts.witness_cap,
            collect_all: opts.all_witnesses,
            graph: ThreeGraph::empty(n),
            memo: HashSet::new(),
            witnesses: Vec::new(),
            stats: SearchStats::default(),
            out_of_budget: false,
        };
        let completed = search.dfs();
        stats.nodes += search.stats.nodes;
        stats.memo_hits += search.stats.memo_hits;
        budget_left = budget_left.saturating_sub(search.stats.nodes);
        if !search.witnesses.is_empty() {
            let mut witnesses: Vec<(Vec<u8>, ThreeGraph)> = search.witnesses;
            witnesses.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(ExtremalResult {
                n,
                minimum: Some(m),
                lower_bound: m,
                upper_bound: Some(m),
                exact: true,
                witnesses: witnesses.into_iter().map(|(_, g)| g).collect(),
                stats,
            });
        }
        if !completed {
            // budget exhausted mid-pass: minimum proven >= m only
            let upper = greedy_feasible(n, forbidden, &filter).map(|g| g.edge_count());
            return Ok(ExtremalResult {
                n,
                minimum: None,
                lower_bound: m,
                upper_bound: upper,
                exact: false,
                witnesses: Vec::new(),
                stats,
            });
        }
    }
    // every edge count up to the complete graph is infeasible
    Ok(ExtremalResult {
        n,
        minimum: None,
        lower_bound: max_m + 1,
        upper_bound: None,
        exact: true,
        witnesses: Vec::new(),
        stats,
    })
}

#[derive(Clone, Debug)]
pub struct DensityRow {
    pub n: usize,
    pub result: ExtremalResult,
}

impl DensityRow {
    pub fn density(&self) -> Option<Density> {
        self.result.density()
    }
}

/// Exact rational rows `n -> ex_min(n) / C(n, 3)`; rows that blow the budget
/// are flagged inexact via their result.
pub fn density_table(
    n_min: usize,
    n_max: usize,
    forbidden: &[ThreeGraph],
    opts: &ExtremalOptions,
) -> Result<Vec<DensityRow>> {
    (n_min..=n_max)
        .map(|n| Ok(DensityRow { n, result: ex_min(n, forbidden, opts)? }))
        .collect()
}

/// DIMACS CNF encoding of "at most `m` edges, no forbidden induced subgraph"
/// (with the 4-set covering clauses arising from `I34` membership in the
/// family). Variable `t + 1` is the triple with colex index `t`; cardinality
/// uses the sequential-counter encoding.
pub fn emit_cnf(n: usize, forbidden: &[ThreeGraph], m: usize) -> Result<String> {
    if n == 0 || n > 12 {
        return Err(Error::BadVertexCount(n, 12));
    }
    let nt = binom_small(n, 3) as usize;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for h in forbidden {
        let k = h.n();
        if k > n {
            continue;
        }
        let orbit = iso_orbit(h);
        for subset in (0..n).combinations(k) {
            let positions: Vec<[usize; 3]> = subset
                .iter()
                .copied()
                .combinations(3)
                .map(|t| [t[0], t[1], t[2]])
                .collect();
            for &mask in &orbit {
                // forbid "the induced pattern equals mask" on this subset
                let mut clause: Vec<i64> = Vec::with_capacity(positions.len());
                for (bit, t) in positions.iter().enumerate() {
                    let var = (triple_index(t[0], t[1], t[2]) + 1) as i64;
                    // position indices within the subset follow the same
                    // colex order as `bit`
                    let _ = t;
                    if mask >> bit & 1 == 1 {
                        clause.push(-var);
                    } else {
                        clause.push(var);
                    }
                }
                clause.sort_unstable();
                if seen.insert(clause.clone()) {
                    clauses.push(clause);
                }
            }
        }
    }
    // sequential counter for sum(x) <= m
    let mut next_var = (nt + 1) as i64;
    if m < nt {
        let s = |i: usize, j: usize| -> i64 { next_var + ((i - 1) * m + (j - 1)) as i64 };
        let x = |i: usize| -> i64 { i as i64 };
        if m == 0 {
            for i in 1..=nt {
                clauses.push(vec![-x(i)]);
            }
        } else {
            clauses.push(vec![-x(1), s(1, 1)]);
            for j in 2..=m {
                clauses.push(vec![-s(1, j)]);
            }
            for i in 2..=nt {
                clauses.push(vec![-x(i), s(i, 1)]);
                clauses.push(vec![-s(i - 1, 1), s(i, 1)]);
                for j in 2..=m {
                    clauses.push(vec![-x(i), -s(i - 1, j - 1), s(i, j)]);
                    clauses.push(vec![-s(i - 1, j), s(i, j)]);
                }
                clauses.push(vec![-x(i), -s(i - 1, m)]);
            }
            next_var += (nt * m) as i64;
        }
    }
    let mut out = String::new();
    out.push_str(&format!(
        "c ex_min feasibility: n={n} edges<={m} vars 1..{nt} are colex triples\n"
    ));
    out.push_str(&format!("c FMT_VERSION {}\n", crate::format::FMT_VERSION));
    out.push_str(&format!("p cnf {} {}\n", next_var - 1, clauses.len()));
    for c in &clauses {
        for lit in c {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::named;
    use crate::hypergraph::{contains_induced, is_isomorphic};

    fn i34() -> Vec<ThreeGraph> {
        vec![named("I34").unwrap()]
    }

    #[test]
    fn tiny_cases() {
        let r = ex_min(4, &i34(), &ExtremalOptions::default()).unwrap();
        assert_eq!(r.minimum, Some(1));
        assert!(r.exact);
        let r3 = ex_min(3, &i34(), &ExtremalOptions::default()).unwrap();
        assert_eq!(r3.minimum, Some(0));
    }

    /// Full brute force over all labeled graphs, the oracle for n = 5.
    #[test]
    fn n5_matches_brute_force() {
        let fam = i34();
        let filter = ForbiddenFilter::new(&fam);
        let mut best = usize::MAX;
        for mask in 0u64..(1 << 10) {
            let g = ThreeGraph::from_pattern(5, mask);
            if filter.passes(&g) {
                best = best.min(g.edge_count());
            }
        }
        assert_eq!(best, 3);
        let r = ex_min(5, &fam, &ExtremalOptions::default()).unwrap();
        assert_eq!(r.minimum, Some(3));
        assert_eq!(r.lower_bound, 3);
    }

    #[test]
    fn n6_is_six_with_unique_witness_m2() {
        let opts = ExtremalOptions { all_witnesses: true, ..Default::default() };
        let r = ex_min(6, &i34(), &opts).unwrap();
        assert_eq!(r.minimum, Some(6));
        assert_eq!(r.witnesses.len(), 1);
        assert!(is_isomorphic(&r.witnesses[0], &named("M2").unwrap()));
    }

    #[test]
    fn witnesses_revalidate() {
        let opts = ExtremalOptions { all_witnesses: true, ..Default::default() };
        let r = ex_min(5, &i34(), &opts).unwrap();
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            assert_eq!(w.edge_count(), 3);
            assert!(contains_induced(w, &named("I34").unwrap()).unwrap().is_none());
        }
        // no two isomorphic
        for (i, a) in r.witnesses.iter().enumerate() {
            for b in &r.witnesses[i + 1..] {
                assert!(!is_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn covering_bound_is_valid_up_to_7() {
        for n in 4..=7 {
            let r = ex_min(n, &i34(), &ExtremalOptions::default()).unwrap();
            assert!(r.minimum.unwrap() >= covering_lower_bound(n), "n={n}");
        }
        // the counting bound is weak at 7: C(7,3)/4 rounds to 9, while the
        // exhausted search proves 12, matching the (3,2,2)-class slice
        assert_eq!(covering_lower_bound(7), 9);
        let r7 = ex_min(7, &i34(), &ExtremalOptions::default()).unwrap();
        assert_eq!(r7.minimum, Some(12));
        let slice = crate::constructions::KostochkaSpec::new(
            [
                crate::constructions::parse_height_list("1,2,3").unwrap(),
                crate::constructions::parse_height_list("1,2").unwrap(),
                crate::constructions::parse_height_list("1,2").unwrap(),
            ],
            true,
        )
        .unwrap()
        .three_graph();
        assert_eq!(slice.edge_count(), 12);
    }

    #[test]
    fn superfamily_cannot_decrease_minimum() {
        let small = i34();
        let big: Vec<ThreeGraph> = ["I34", "H1", "H2", "H3"]
            .iter()
            .map(|n| named(n).unwrap())
            .collect();
        for n in 4..=6 {
            let a = ex_min(n, &small, &ExtremalOptions::default()).unwrap();
            let b = ex_min(n, &big, &ExtremalOptions::default()).unwrap();
            assert!(b.minimum.unwrap() >= a.minimum.unwrap(), "n={n}");
        }
    }

    #[test]
    fn sandwiched_by_kostochka_slices() {
        // the 6-vertex balanced slice has 6 edges, matching the minimum
        let slice = crate::constructions::KostochkaSpec::balanced_ints(&[1, 2], true)
            .unwrap()
            .three_graph();
        let r = ex_min(6, &i34(), &ExtremalOptions::default()).unwrap();
        assert!(r.minimum.unwrap() <= slice.edge_count());
    }

    #[test]
    fn budget_exhaustion_returns_bounds() {
        let opts = ExtremalOptions { node_budget: 5, ..Default::default() };
        let r = ex_min(6, &i34(), &opts).unwrap();
        assert!(!r.exact);
        assert!(r.minimum.is_none());
        assert!(r.lower_bound >= covering_lower_bound(6));
        // greedy repair always terminates on this family
        assert!(r.upper_bound.is_some());
        assert!(r.upper_bound.unwrap() >= 6);
    }

    #[test]
    fn table_rows() {
        let rows = density_table(4, 6, &i34(), &ExtremalOptions::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].density().unwrap(), Density::new(1, 4));
        assert_eq!(rows[2].density().unwrap(), Density::new(6, 20));
    }

    #[test]
    fn cnf_shape() {
        let text = emit_cnf(5, &i34(), 3).unwrap();
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
        let parts: Vec<&str> = header.split_whitespace().collect();
        let nvars: usize = parts[2].parse().unwrap();
        let nclauses: usize = parts[3].parse().unwrap();
        // 10 triple vars + 10 * 3 counter vars
        assert_eq!(nvars, 40);
        // 5 covering clauses + counter clauses
        assert!(nclauses > 5);
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with(['c', 'p'])).collect();
        assert_eq!(body.len(), nclauses);
        for line in body {
            assert!(line.ends_with('0'));
        }
    }

    #[test]
    fn cnf_with_h_family_contains_pattern_clauses() {
        let fam: Vec<ThreeGraph> = ["I34", "H1"].iter().map(|n| named(n).unwrap()).collect();
        let text = emit_cnf(5, &fam, 10).unwrap();
        // some clause must mix positive and negative triple literals (an H1
        // pattern exclusion)
        let mixed = text
            .lines()
            .filter(|l| !l.starts_with(['c', 'p']))
            .any(|l| {
                let lits: Vec<i64> = l
                    .split_whitespace()
                    .map(|x| x.parse::<i64>().unwrap())
                    .filter(|&x| x != 0)
                    .collect();
                lits.iter().any(|&x| x > 0 && x <= 10) && lits.iter().any(|&x| x < 0 && x >= -10)
            });
        assert!(mixed);
    }
}
