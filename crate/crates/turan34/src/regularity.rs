//! Regular / singular classification of 3-graphs.
//!
//! A 3-graph `G` is regular when some orgraph `Γ` on the same vertices is
//! free of induced `C4` and `P3bar` and satisfies `E(FDF(Γ)) ⊆ E(G)`;
//! otherwise `G` is singular. The search walks the three states per
//! unordered pair (forward, backward, independent), pruning as soon as a
//! completed triple forces a Fon-der-Flaass edge outside `E(G)` or a
//! completed 3- or 4-subset violates `P3bar`- or `C4`-freeness.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{canonical_form, enumerate_graphs, ThreeGraph};
use crate::orgraph::Orgraph;

/// Cap for the realization search: `3^21` raw states at 7 vertices.
pub const REALIZATION_CAP: usize = 7;

/// Which Fon-der-Flaass clause decided a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdfClause {
    /// The named vertex has in- and out-degree 0 within the triple.
    Isolated(usize),
    /// The named vertex has out-degree 2 within the triple.
    OutDegreeTwo(usize),
    /// No clause fires; the triple is a non-edge of the interpretation.
    NonEdge,
}

/// A witness orgraph together with the per-triple clause trace.
#[derive(Clone, Debug)]
pub struct Realization {
    pub orgraph: Orgraph,
    pub trace: Vec<([usize; 3], FdfClause)>,
}

/// A defect found by the independent realization checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationDefect {
    WrongVertexCount,
    InducedC4([usize; 4]),
    InducedP3bar([usize; 3]),
    FdfEdgeOutsideGraph([usize; 3]),
    TraceMismatch([usize; 3]),
}

fn clause_for(or: &Orgraph, t: [usize; 3]) -> FdfClause {
    for (i, &x) in t.iter().enumerate() {
        let (a, b) = (t[(i + 1) % 3], t[(i + 2) % 3]);
        if !or.arc(x, a) && !or.arc(x, b) && !or.arc(a, x) && !or.arc(b, x) {
            return FdfClause::Isolated(x);
        }
    }
    for (i, &x) in t.iter().enumerate() {
        let (a, b) = (t[(i + 1) % 3], t[(i + 2) % 3]);
        if or.arc(x, a) && or.arc(x, b) {
            return FdfClause::OutDegreeTwo(x);
        }
    }
    FdfClause::NonEdge
}

pub(crate) fn trace_of(g: &ThreeGraph, or: &Orgraph) -> Vec<([usize; 3], FdfClause)> {
    let n = g.n();
    let mut trace = Vec::new();
    for w in 2..n {
        for v in 1..w {
            for u in 0..v {
                trace.push(([u, v, w], clause_for(or, [u, v, w])));
            }
        }
    }
    trace
}

/// Re-validates a claimed realization with checks separate from the search:
/// `C4`- and `P3bar`-freeness, FDF containment, and trace consistency.
pub fn validate_realization(
    g: &ThreeGraph,
    r: &Realization,
) -> std::result::Result<(), RealizationDefect> {
    if r.orgraph.n() != g.n() {
        return Err(RealizationDefect::WrongVertexCount);
    }
    if let Some(q) = r.orgraph.find_induced_c4() {
        return Err(RealizationDefect::InducedC4(q));
    }
    if let Some(t) = r.orgraph.find_induced_p3bar() {
        return Err(RealizationDefect::InducedP3bar(t));
    }
    let fdf = r.orgraph.fdf_interpret();
    for e in fdf.edges() {
        if !g.has_edge(e[0], e[1], e[2]) {
            return Err(RealizationDefect::FdfEdgeOutsideGraph(e));
        }
    }
    for &(t, clause) in &r.trace {
        if clause_for(&r.orgraph, t) != clause {
            return Err(RealizationDefect::TraceMismatch(t));
        }
    }
    Ok(())
}

// pair states
const INDEP: u8 = 0;
const FWD: u8 = 1; // low -> high
const BACK: u8 = 2; // high -> low

struct Search<'a> {
    g: &'a ThreeGraph,
    pairs: Vec<(usize, usize)>,
    // triples and quads whose last pair (in processing order) is at index t
    triples_at: Vec<Vec<[usize; 3]>>,
    quads_at: Vec<Vec<[usize; 4]>>,
    out: Vec<u32>,
    solution: Option<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a ThreeGraph) -> Self {
        let n = g.n();
        let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        // non-edges are the binding constraints; schedule pairs touching many
        // of them first
        let non_edges_at = |u: usize, v: usize| {
            (0..n)
                .filter(|&w| w != u && w != v && !g.has_edge(u, v, w))
                .count()
        };
        pairs.sort_by_key(|&(u, v)| std::cmp::Reverse(non_edges_at(u, v)));
        let mut order = vec![vec![0usize; n]; n];
        for (t, &(u, v)) in pairs.iter().enumerate() {
            order[u][v] = t;
            order[v][u] = t;
        }
        let mut triples_at = vec![Vec::new(); pairs.len()];
        for tri in (0..n).combinations(3) {
            let (a, b, c) = (tri[0], tri[1], tri[2]);
            let last = order[a][b].max(order[a][c]).max(order[b][c]);
            triples_at[last].push([a, b, c]);
        }
        let mut quads_at = vec![Vec::new(); pairs.len()];
        for q in (0..n).combinations(4) {
            let last = q
                .iter()
                .tuple_combinations()
                .map(|(&x, &y)| order[x][y])
                .max()
                .unwrap();
            quads_at[last].push([q[0], q[1], q[2], q[3]]);
        }
        Search {
            g,
            pairs,
            triples_at,
            quads_at,
            out: vec![0; n],
            solution: None,
        }
    }

    #[inline]
    fn arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    fn triple_ok(&self, t: [usize; 3]) -> bool {
        let mut arcs = 0u8;
        for (i, &x) in t.iter().enumerate() {
            let a = t[(i + 1) % 3];
            arcs += self.arc(x, a) as u8 + self.arc(a, x) as u8;
        }
        if arcs == 1 {
            return false; // induced P3bar
        }
        if self.g.has_edge(t[0], t[1], t[2]) {
            return true;
        }
        // non-edge of G: no Fon-der-Flaass clause may fire
        for (i, &x) in t.iter().enumerate() {
            let (a, b) = (t[(i + 1) % 3], t[(i + 2) % 3]);
            let outdeg = self.arc(x, a) as u8 + self.arc(x, b) as u8;
            let indeg = self.arc(a, x) as u8 + self.arc(b, x) as u8;
            if outdeg == 2 || (outdeg + indeg == 0) {
                return false;
            }
        }
        true
    }

    fn quad_ok(&self, q: [usize; 4]) -> bool {
        for &x in &q {
            let outdeg = q.iter().filter(|&&y| y != x && self.arc(x, y)).count();
            let indeg = q.iter().filter(|&&y| y != x && self.arc(y, x)).count();
            if outdeg != 1 || indeg != 1 {
                return true;
            }
        }
        // a fixed-point- and transposition-free permutation on 4 points is a
        // 4-cycle
        false
    }

    fn run(&mut self, t: usize) {
        if self.solution.is_some() {
            return;
        }
        if t == self.pairs.len() {
            self.solution = Some(self.out.clone());
            return;
        }
        let (u, v) = self.pairs[t];
        for state in [INDEP, FWD, BACK] {
            match state {
                FWD => self.out[u] |= 1 << v,
                BACK => self.out[v] |= 1 << u,
                _ => {}
            }
            let ok = self.triples_at[t].iter().all(|&tri| self.triple_ok(tri))
                && self.quads_at[t].iter().all(|&q| self.quad_ok(q));
            if ok {
                self.run(t + 1);
            }
            match state {
                FWD => self.out[u] &= !(1 << v),
                BACK => self.out[v] &= !(1 << u),
                _ => {}
            }
            if self.solution.is_some() {
                return;
            }
        }
    }
}

/// Searches for a Fon-der-Flaass realization of `G`; `None` proves `G`
/// singular (the state space is exhausted).
///
/// No direction symmetry is broken on the first pair: reversing every arc of
/// a witness maps out-degree-2 vertices to in-degree-2 vertices, which the
/// interpretation does not treat symmetrically, so the reversed orgraph need
/// not be a witness and the halving would lose completeness.
pub fn find_realization(g: &ThreeGraph) -> Result<Option<Realization>> {
    find_realization_capped(g, REALIZATION_CAP)
}

pub fn find_realization_capped(g: &ThreeGraph, cap: usize) -> Result<Option<Realization>> {
    if g.n() > cap {
        return Err(Error::CapExceeded(g.n(), cap));
    }
    let mut search = Search::new(g);
    if g.n() >= 2 {
        search.run(0);
    } else {
        search.solution = Some(vec![0; g.n()]);
    }
    Ok(search.solution.map(|out| {
        let n = g.n();
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if out[u] >> v & 1 == 1 {
                    arcs.push((u, v));
                }
            }
        }
        let orgraph =
            Orgraph::new(n, &arcs).expect("search states exclude loops and antiparallel arcs");
        let trace = trace_of(g, &orgraph);
        Realization { orgraph, trace }
    }))
}

/// Verdict produced by [`classify_all`] for a single isomorphism class.
#[derive(Clone, Debug)]
pub struct ClassVerdict {
    pub graph: ThreeGraph,
    pub key_hex: String,
    pub realization: Option<Realization>,
}

#[derive(Clone, Debug, Default)]
pub struct Classification {
    pub verdicts: Vec<ClassVerdict>,
}

impl Classification {
    pub fn regular_count(&self) -> usize {
        self.verdicts.iter().filter(|v| v.realization.is_some()).count()
    }

    pub fn singular_count(&self) -> usize {
        self.verdicts.len() - self.regular_count()
    }
}

/// Labels every isomorphism class of `l`-vertex `forbidden`-free graphs as
/// regular (with witness) or singular.
pub fn classify_all(l: usize, forbidden: &[ThreeGraph]) -> Result<Classification> {
    if l > 6 {
        return Err(Error::CapExceeded(l, 6));
    }
    let classes = enumerate_graphs(l, forbidden)?;
    let mut verdicts = Vec::with_capacity(classes.len());
    for graph in classes {
        let realization = find_realization(&graph)?;
        if let Some(r) = &realization {
            debug_assert!(validate_realization(&graph, r).is_ok());
        }
        let key_hex = canonical_form(&graph).key_hex();
        verdicts.push(ClassVerdict { graph, key_hex, realization });
    }
    Ok(Classification { verdicts })
}

/// Exhaustive reference search over every orgraph on `V(G)`, for testing the
/// pruned search: returns whether any `C4`- and `P3bar`-free orgraph has
/// `E(FDF(Γ)) ⊆ E(G)`.
pub fn naive_is_regular(g: &ThreeGraph) -> bool {
    crate::orgraph::all_orgraphs(g.n()).into_iter().any(|or| {
        or.is_c4_free()
            && or.is_p3bar_free()
            && or
                .fdf_interpret()
                .edges()
                .all(|e| g.has_edge(e[0], e[1], e[2]))
    })
}
