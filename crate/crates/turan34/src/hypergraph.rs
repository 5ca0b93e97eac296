//! 3-uniform hypergraphs: canonical forms, isomorphism, enumeration and
//! exact induced densities.
//!
//! Vertices are `0..n` in the Rust API; the text format of [`crate::format`]
//! uses 1-based labels. Edges are 3-element subsets stored both as a sorted
//! triple list and as a bitset over the colexicographic triple indices, so
//! edge queries in enumeration inner loops are O(1).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Hard cap on vertex counts for the whole crate.
pub const MAX_VERTICES: usize = 32;

/// Default cap for isomorph-free enumeration. `M_7` already has millions of
/// classes; past that the canonical-form strategy is the wrong tool.
pub const DEFAULT_ENUM_CAP: usize = 7;

const BINOM: [[u64; 4]; MAX_VERTICES + 1] = build_binom();

const fn build_binom() -> [[u64; 4]; MAX_VERTICES + 1] {
    let mut t = [[0u64; 4]; MAX_VERTICES + 1];
    let mut n = 0;
    while n <= MAX_VERTICES {
        t[n][0] = 1;
        let mut k = 1;
        while k < 4 {
            if n > 0 {
                t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            }
            k += 1;
        }
        n += 1;
    }
    t
}

/// `C(n, k)` for small `k` (table-backed, `k <= 3`).
#[inline]
pub fn binom_small(n: usize, k: usize) -> u64 {
    if k > 3 || n > MAX_VERTICES {
        panic!("binom_small out of table range");
    }
    BINOM[n][k]
}

/// Exact `C(n, k)` as a big integer.
pub fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Colexicographic index of the triple `u < v < w`.
#[inline]
pub fn triple_index(u: usize, v: usize, w: usize) -> usize {
    debug_assert!(u < v && v < w);
    (BINOM[w][3] + BINOM[v][2] + u as u64) as usize
}

/// Inverse of [`triple_index`].
pub fn triple_at(mut idx: u64) -> [usize; 3] {
    let mut w = 2;
    while w + 1 <= MAX_VERTICES && BINOM[w + 1][3] <= idx {
        w += 1;
    }
    idx -= BINOM[w][3];
    let mut v = 1;
    while v + 1 < w && BINOM[v + 1][2] <= idx {
        v += 1;
    }
    idx -= BINOM[v][2];
    [idx as usize, v, w]
}

fn sort3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// Exact rational density value in `[0, 1]`, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Density(BigRational);

impl Density {
    pub fn new(count: u64, total: u64) -> Self {
        Density(BigRational::new(BigInt::from(count), BigInt::from(total)))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Density(r)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// A 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone)]
pub struct ThreeGraph {
    n: u8,
    edges: Vec<[u8; 3]>,
    bits: Vec<u64>,
}

impl PartialEq for ThreeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}
impl Eq for ThreeGraph {}

impl std::hash::Hash for ThreeGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for ThreeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThreeGraph(n={}, edges=[", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}{}", e[0], e[1], e[2])?;
        }
        write!(f, "])")
    }
}

impl ThreeGraph {
    /// Builds a graph from unordered triples, validating the invariants.
    pub fn new(n: usize, edges: &[[usize; 3]]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n, MAX_VERTICES));
        }
        let mut g = ThreeGraph::empty(n);
        for &t in edges {
            let [u, v, w] = sort3(t);
            if u == v || v == w {
                return Err(Error::RepeatedVertex(t[0], t[1], t[2]));
            }
            if w >= n {
                return Err(Error::VertexOutOfRange { vertex: w, n });
            }
            if g.has_edge(u, v, w) {
                return Err(Error::DuplicateEdge(u, v, w));
            }
            g.add_edge_unchecked(u, v, w);
        }
        g.normalize();
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_VERTICES);
        let words = (binom_small(n, 3) as usize).div_ceil(64).max(1);
        ThreeGraph {
            n: n as u8,
            edges: Vec::new(),
            bits: vec![0; words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = ThreeGraph::empty(n);
        for w in 2..n {
            for v in 1..w {
                for u in 0..v {
                    g.add_edge_unchecked(u, v, w);
                }
            }
        }
        g.normalize();
        g
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize, w: usize) {
        let idx = triple_index(u, v, w);
        self.bits[idx / 64] |= 1u64 << (idx % 64);
        self.edges.push([u as u8, v as u8, w as u8]);
    }

    pub(crate) fn remove_edge_unchecked(&mut self, u: usize, v: usize, w: usize) {
        let idx = triple_index(u, v, w);
        self.bits[idx / 64] &= !(1u64 << (idx % 64));
        self.edges
            .retain(|e| *e != [u as u8, v as u8, w as u8]);
    }

    fn normalize(&mut self) {
        self.edges
            .sort_unstable_by_key(|e| triple_index(e[0] as usize, e[1] as usize, e[2] as usize));
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.edges
            .iter()
            .map(|e| [e[0] as usize, e[1] as usize, e[2] as usize])
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize, w: usize) -> bool {
        let [a, b, c] = sort3([u, v, w]);
        debug_assert!(a < b && b < c && c < self.n());
        let idx = triple_index(a, b, c);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Relabels the graph: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> ThreeGraph {
        debug_assert_eq!(perm.len(), self.n());
        let mut g = ThreeGraph::empty(self.n());
        for e in self.edges() {
            let [u, v, w] = sort3([perm[e[0]], perm[e[1]], perm[e[2]]]);
            g.add_edge_unchecked(u, v, w);
        }
        g.normalize();
        g
    }

    /// The 3-graph induced on a vertex subset, relabeled to `0..k`
    /// order-preservingly.
    pub fn induced(&self, subset: &[usize]) -> Result<ThreeGraph> {
        let mut vs: Vec<usize> = subset.to_vec();
        vs.sort_unstable();
        for win in vs.windows(2) {
            if win[0] == win[1] {
                return Err(Error::DuplicateInSubset(win[0]));
            }
        }
        if let Some(&v) = vs.last() {
            if v >= self.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
            }
        }
        if vs.is_empty() {
            return Err(Error::BadVertexCount(0, MAX_VERTICES));
        }
        let k = vs.len();
        let mut g = ThreeGraph::empty(k);
        for w in 2..k {
            for v in 1..w {
                for u in 0..v {
                    if self.has_edge(vs[u], vs[v], vs[w]) {
                        g.add_edge_unchecked(u, v, w);
                    }
                }
            }
        }
        g.normalize();
        Ok(g)
    }

    /// Bit pattern of the subgraph induced on a *sorted* subset of up to 8
    /// vertices: bit `triple_index(i, j, k)` is set iff positions `i < j < k`
    /// of the subset span an edge.
    #[inline]
    pub(crate) fn induced_pattern(&self, sorted: &[usize]) -> u64 {
        debug_assert!(sorted.len() <= 8);
        let k = sorted.len();
        let mut mask = 0u64;
        for w in 2..k {
            for v in 1..w {
                for u in 0..v {
                    if self.has_edge(sorted[u], sorted[v], sorted[w]) {
                        mask |= 1u64 << triple_index(u, v, w);
                    }
                }
            }
        }
        mask
    }

    /// Graph on `k <= 8` vertices from a triple bit pattern.
    pub(crate) fn from_pattern(k: usize, mask: u64) -> ThreeGraph {
        let mut g = ThreeGraph::empty(k);
        let nt = binom_small(k, 3);
        for idx in 0..nt {
            if mask >> idx & 1 == 1 {
                let [u, v, w] = triple_at(idx);
                g.add_edge_unchecked(u, v, w);
            }
        }
        g.normalize();
        g
    }

    pub(crate) fn pattern(&self) -> u64 {
        debug_assert!(self.n() <= 8);
        self.bits[0]
    }

    /// Number of edges containing vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges().filter(|e| e.contains(&v)).count()
    }

    /// Number of edges containing both `u` and `v`.
    pub fn pair_degree(&self, u: usize, v: usize) -> usize {
        self.edges()
            .filter(|e| e.contains(&u) && e.contains(&v))
            .count()
    }
}

/// Relabeling-invariant identity of a 3-graph: a total-order key equal for
/// two graphs exactly when they are isomorphic, plus the permutation that
/// maps the graph onto its canonical representative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm {
    key: Vec<u8>,
    perm: Vec<usize>,
}

impl CanonicalForm {
    pub fn key(&self) -> &[u8] {
        &self.key
    }

    /// Permutation `perm[v] = canonical label of v`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn key_hex(&self) -> String {
        self.key.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Iterated vertex-invariant refinement: colors vertices by degree and
/// pair-degree data until stable. Returns per-vertex color ranks; equal
/// ranks are canonical across isomorphic graphs.
fn refine_colors(g: &ThreeGraph) -> Vec<usize> {
    let n = g.n();
    let mut pair = vec![vec![0usize; n]; n];
    for e in g.edges() {
        pair[e[0]][e[1]] += 1;
        pair[e[1]][e[0]] += 1;
        pair[e[0]][e[2]] += 1;
        pair[e[2]][e[0]] += 1;
        pair[e[1]][e[2]] += 1;
        pair[e[2]][e[1]] += 1;
    }
    let mut color: Vec<usize> = (0..n)
        .map(|v| {
            let mut ds: Vec<usize> = (0..n).filter(|&u| u != v).map(|u| pair[v][u]).collect();
            ds.sort_unstable();
            (g.degree(v), ds)
        })
        .collect::<Vec<_>>()
        .ranks();
    loop {
        let sig: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(usize, usize)> = (0..n)
                    .filter(|&u| u != v)
                    .map(|u| (color[u], pair[v][u]))
                    .collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let next = sig.ranks();
        if next == color {
            return color;
        }
        color = next;
    }
}

trait Ranks {
    fn ranks(&self) -> Vec<usize>;
}

impl<T: Ord + Clone> Ranks for Vec<T> {
    fn ranks(&self) -> Vec<usize> {
        let mut sorted: Vec<&T> = self.iter().collect();
        sorted.sort();
        sorted.dedup();
        self.iter()
            .map(|x| sorted.binary_search(&x).unwrap())
            .collect()
    }
}

struct CanonSearch<'a> {
    g: &'a ThreeGraph,
    n: usize,
    // positions grouped by color class, in canonical class order
    slots: Vec<Vec<usize>>, // slots[class] = candidate original vertices
    best: Option<Vec<u64>>,
    best_perm: Vec<usize>,
    cur: Vec<usize>, // cur[pos] = original vertex
    used: u64,
}

impl<'a> CanonSearch<'a> {
    fn prefix_cmp(&self, cand: &[u64], upto_bits: usize) -> Ordering {
        let best = self.best.as_ref().unwrap();
        let full_words = upto_bits / 64;
        for i in 0..full_words {
            match cand[i].reverse_bits().cmp(&best[i].reverse_bits()) {
                Ordering::Equal => {}
                // bit-reversed compare: lower colex index decided first,
                // and a set bit sorts above a clear one
                o => return o,
            }
        }
        let rem = upto_bits % 64;
        if rem > 0 {
            let m = (1u64 << rem) - 1;
            let a = (cand[full_words] & m).reverse_bits();
            let b = (best[full_words] & m).reverse_bits();
            return a.cmp(&b);
        }
        Ordering::Equal
    }

    fn place(&mut self, pos: usize, pattern: &mut Vec<u64>) {
        if pos == self.n {
            let better = match &self.best {
                None => true,
                Some(_) => self.prefix_cmp(pattern, binom_small(self.n, 3) as usize).is_lt(),
            };
            if better {
                self.best = Some(pattern.clone());
                self.best_perm = vec![0; self.n];
                for (p, &v) in self.cur.iter().enumerate() {
                    self.best_perm[v] = p;
                }
            }
            return;
        }
        let class = self
            .slots
            .iter()
            .position(|s| s.iter().any(|&v| self.used >> v & 1 == 0))
            .unwrap();
        let cands: Vec<usize> = self.slots[class]
            .iter()
            .copied()
            .filter(|&v| self.used >> v & 1 == 0)
            .collect();
        for v in cands {
            self.cur.push(v);
            self.used |= 1 << v;
            // triples newly determined by label `pos` all have max element pos
            let mut added = Vec::new();
            for j in 1..pos {
                for i in 0..j {
                    if self.g.has_edge(self.cur[i], self.cur[j], v) {
                        let idx = triple_index(i, j, pos);
                        pattern[idx / 64] |= 1 << (idx % 64);
                        added.push(idx);
                    }
                }
            }
            let keep = match &self.best {
                None => true,
                Some(_) => self
                    .prefix_cmp(pattern, binom_small(pos + 1, 3) as usize)
                    .is_le(),
            };
            if keep {
                self.place(pos + 1, pattern);
            }
            for idx in added {
                pattern[idx / 64] &= !(1 << (idx % 64));
            }
            self.used &= !(1 << v);
            self.cur.pop();
        }
    }
}

/// Canonical form via invariant refinement plus backtracking over the
/// remaining within-class permutations.
pub fn canonical_form(g: &ThreeGraph) -> CanonicalForm {
    let n = g.n();
    let colors = refine_colors(g);
    let classes = colors.iter().copied().max().unwrap_or(0) + 1;
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for v in 0..n {
        slots[colors[v]].push(v);
    }
    let words = (binom_small(n, 3) as usize).div_ceil(64).max(1);
    let mut search = CanonSearch {
        g,
        n,
        slots,
        best: None,
        best_perm: Vec::new(),
        cur: Vec::new(),
        used: 0,
    };
    let mut pattern = vec![0u64; words];
    search.place(0, &mut pattern);
    let bits = search.best.unwrap();
    let mut key = Vec::with_capacity(1 + bits.len() * 8);
    key.push(n as u8);
    let nbytes = (binom_small(n, 3) as usize).div_ceil(8).max(1);
    for b in 0..nbytes {
        key.push((bits[b / 8] >> (8 * (b % 8))) as u8);
    }
    CanonicalForm {
        key,
        perm: search.best_perm,
    }
}

/// True iff an edge-preserving bijection of vertex sets exists.
pub fn is_isomorphic(a: &ThreeGraph, b: &ThreeGraph) -> bool {
    if a.n != b.n || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a).key == canonical_form(b).key
}

/// All bit patterns of graphs on `k <= 7` vertices isomorphic to `h`.
pub(crate) fn iso_orbit(h: &ThreeGraph) -> Vec<u64> {
    let k = h.n();
    debug_assert!(k <= 7);
    let mut out: Vec<u64> = (0..k)
        .permutations(k)
        .map(|perm| {
            let mut mask = 0u64;
            for e in h.edges() {
                let [u, v, w] = sort3([perm[e[0]], perm[e[1]], perm[e[2]]]);
                mask |= 1u64 << triple_index(u, v, w);
            }
            mask
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Searches for a vertex subset of `g` inducing a copy of `h`; returns a
/// witness subset or `None`.
pub fn contains_induced(g: &ThreeGraph, h: &ThreeGraph) -> Result<Option<Vec<usize>>> {
    let k = h.n();
    let n = g.n();
    if k > n {
        return Err(Error::SizeOrder { small: k, large: n });
    }
    if k <= 7 {
        let orbit = iso_orbit(h);
        for subset in (0..n).combinations(k) {
            let mask = g.induced_pattern(&subset);
            if orbit.binary_search(&mask).is_ok() {
                return Ok(Some(subset));
            }
        }
        return Ok(None);
    }
    let hkey = canonical_form(h).key;
    for subset in (0..n).combinations(k) {
        let ind = g.induced(&subset)?;
        if ind.edge_count() == h.edge_count() && canonical_form(&ind).key == hkey {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Number of `|V(h)|`-subsets of `g` inducing a copy of `h`.
pub fn count_induced(g: &ThreeGraph, h: &ThreeGraph) -> Result<u64> {
    let k = h.n();
    let n = g.n();
    if k > n {
        return Err(Error::SizeOrder { small: k, large: n });
    }
    let mut count = 0u64;
    if k <= 7 {
        let orbit = iso_orbit(h);
        for subset in (0..n).combinations(k) {
            if orbit.binary_search(&g.induced_pattern(&subset)).is_ok() {
                count += 1;
            }
        }
    } else {
        let hkey = canonical_form(h).key;
        for subset in (0..n).combinations(k) {
            let ind = g.induced(&subset)?;
            if ind.edge_count() == h.edge_count() && canonical_form(&ind).key == hkey {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Exact density of induced copies of `h` in `g`.
pub fn induced_density(h: &ThreeGraph, g: &ThreeGraph) -> Result<Density> {
    let count = count_induced(g, h)?;
    Ok(Density::from_ratio(BigRational::new(
        BigInt::from(count),
        binom_big(g.n(), h.n()),
    )))
}

/// A forbidden-subgraph filter with precomputed isomorphism orbits, for use
/// in enumeration and search inner loops.
pub struct ForbiddenFilter {
    // (size, sorted bit patterns of every labeled copy)
    orbits: Vec<(usize, Vec<u64>)>,
    large: Vec<ThreeGraph>,
}

impl ForbiddenFilter {
    pub fn new(forbidden: &[ThreeGraph]) -> Self {
        let mut orbits = Vec::new();
        let mut large = Vec::new();
        for h in forbidden {
            if h.n() <= 7 {
                orbits.push((h.n(), iso_orbit(h)));
            } else {
                large.push(h.clone());
            }
        }
        ForbiddenFilter { orbits, large }
    }

    /// True iff `g` contains no forbidden member as an induced subgraph.
    pub fn passes(&self, g: &ThreeGraph) -> bool {
        self.find_violation(g).is_none()
    }

    /// A witness subset inducing some forbidden member, if one exists.
    pub fn find_violation(&self, g: &ThreeGraph) -> Option<Vec<usize>> {
        let n = g.n();
        for (k, orbit) in &self.orbits {
            if *k > n {
                continue;
            }
            for subset in (0..n).combinations(*k) {
                if orbit.binary_search(&g.induced_pattern(&subset)).is_ok() {
                    return Some(subset);
                }
            }
        }
        for h in &self.large {
            if h.n() <= n {
                if let Some(w) = contains_induced(g, h).unwrap() {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Like [`ForbiddenFilter::passes`] but only scans subsets containing
    /// vertex `v` (sufficient when the graph without `v` already passed).
    pub fn passes_incremental(&self, g: &ThreeGraph, v: usize) -> bool {
        let n = g.n();
        for (k, orbit) in &self.orbits {
            if *k > n {
                continue;
            }
            for mut subset in (0..n).filter(|&u| u != v).combinations(*k - 1) {
                subset.push(v);
                subset.sort_unstable();
                if orbit.binary_search(&g.induced_pattern(&subset)).is_ok() {
                    return false;
                }
            }
        }
        for h in &self.large {
            if h.n() <= n && contains_induced(g, h).unwrap().is_some() {
                return false;
            }
        }
        true
    }
}

/// One representative per isomorphism class of `l`-vertex 3-graphs that
/// contain no member of `forbidden` as an induced subgraph, in canonical-key
/// order. Enumeration extends one vertex at a time, pruning with the
/// hereditary filter at every level.
pub fn enumerate_graphs(l: usize, forbidden: &[ThreeGraph]) -> Result<Vec<ThreeGraph>> {
    enumerate_graphs_capped(l, forbidden, DEFAULT_ENUM_CAP)
}

pub fn enumerate_graphs_capped(
    l: usize,
    forbidden: &[ThreeGraph],
    cap: usize,
) -> Result<Vec<ThreeGraph>> {
    if l == 0 || l > cap || l > MAX_VERTICES {
        return Err(Error::CapExceeded(l, cap.min(MAX_VERTICES)));
    }
    let filter = ForbiddenFilter::new(forbidden);
    let passes = |g: &ThreeGraph| -> bool { filter.passes(g) };
    let mut level: Vec<ThreeGraph> = vec![ThreeGraph::empty(1)];
    level.retain(passes);
    for k in 1..l {
        use rayon::prelude::*;
        let sets: Vec<HashMap<Vec<u8>, ThreeGraph>> = level
            .par_iter()
            .map(|g| {
                let mut out: HashMap<Vec<u8>, ThreeGraph> = HashMap::new();
                let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
                for choice in 0u64..(1 << pairs.len()) {
                    let mut ext = ThreeGraph::empty(k + 1);
                    for e in g.edges() {
                        ext.add_edge_unchecked(e[0], e[1], e[2]);
                    }
                    for (b, &(u, v)) in pairs.iter().enumerate() {
                        if choice >> b & 1 == 1 {
                            ext.add_edge_unchecked(u, v, k);
                        }
                    }
                    ext.normalize();
                    // the k-vertex base already passed, so any new forbidden
                    // copy must use the new vertex
                    if !filter.passes_incremental(&ext, k) {
                        continue;
                    }
                    let cf = canonical_form(&ext);
                    out.entry(cf.key().to_vec())
                        .or_insert_with(|| ext.permuted(cf.permutation()));
                }
                out
            })
            .collect();
        let mut merged: HashMap<Vec<u8>, ThreeGraph> = HashMap::new();
        for s in sets {
            merged.extend(s);
        }
        let mut next: Vec<(Vec<u8>, ThreeGraph)> = merged.into_iter().collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    Ok(level)
}

/// Checks the chain rule `p(H, Ĝ) = Σ_{G ∈ M_l} p(H, G) p(G, Ĝ)` with exact
/// rationals. Classes with `p(G, Ĝ) = 0` contribute nothing, so the sum runs
/// over the induced `l`-subgraphs of `Ĝ` only.
pub fn verify_chain_rule(h: &ThreeGraph, ghat: &ThreeGraph, l: usize) -> Result<bool> {
    if h.n() > l {
        return Err(Error::SizeOrder { small: h.n(), large: l });
    }
    if l > ghat.n() {
        return Err(Error::SizeOrder { small: l, large: ghat.n() });
    }
    let left = induced_density(h, ghat)?.into_ratio();

    let mut class_counts: HashMap<Vec<u8>, (ThreeGraph, u64)> = HashMap::new();
    for subset in (0..ghat.n()).combinations(l) {
        let ind = ghat.induced(&subset)?;
        let cf = canonical_form(&ind);
        class_counts
            .entry(cf.key().to_vec())
            .or_insert_with(|| (ind, 0))
            .1 += 1;
    }
    let total = binom_big(ghat.n(), l);
    let mut right = BigRational::zero();
    for (g, count) in class_counts.values() {
        let p_g_ghat = BigRational::new(BigInt::from(*count), total.clone());
        right += induced_density(h, g)?.into_ratio() * p_g_ghat;
    }
    Ok(left == right)
}
