//! Oriented graphs and the Fon-der-Flaass interpretation.
//!
//! An orgraph is a directed graph with no loops, duplicate arcs or
//! antiparallel pairs. The Fon-der-Flaass interpretation turns an orgraph
//! into a 3-graph: a triple spans an edge iff its induced sub-orgraph has an
//! isolated vertex (in- and out-degree 0 within the triple) or a vertex of
//! out-degree 2 within the triple.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{ThreeGraph, MAX_VERTICES};

/// A directed graph without loops, duplicate or antiparallel arcs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Orgraph {
    n: u8,
    out: Vec<u32>,
}

impl std::fmt::Debug for Orgraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Orgraph(n={}, arcs={:?})", self.n, self.arcs())
    }
}

impl Orgraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n, MAX_VERTICES));
        }
        let mut g = Orgraph::empty(n);
        for &(u, v) in arcs {
            if u == v {
                return Err(Error::LoopArc(u));
            }
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if g.arc(u, v) {
                return Err(Error::DuplicateArc(u, v));
            }
            if g.arc(v, u) {
                return Err(Error::AntiparallelArcs(v, u));
            }
            g.out[u] |= 1 << v;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_VERTICES);
        Orgraph {
            n: n as u8,
            out: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    /// Arcs in sorted order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|u| (0..n).filter(move |&v| self.arc(u, v)).map(move |v| (u, v)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Neither `<u, v>` nor `<v, u>` is an arc.
    pub fn is_independent(&self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::SamePair(u));
        }
        if u >= self.n() || v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: u.max(v), n: self.n() });
        }
        Ok(!self.arc(u, v) && !self.arc(v, u))
    }

    /// Relabels: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Orgraph {
        debug_assert_eq!(perm.len(), self.n());
        let mut g = Orgraph::empty(self.n());
        for (u, v) in self.arcs() {
            g.out[perm[u]] |= 1 << perm[v];
        }
        g
    }

    /// The Fon-der-Flaass interpretation: same vertex set, a triple spans an
    /// edge iff its induced sub-orgraph contains an isolated vertex or a
    /// vertex of out-degree 2.
    pub fn fdf_interpret(&self) -> ThreeGraph {
        let n = self.n();
        let mut g = ThreeGraph::empty(n);
        for w in 2..n {
            for v in 1..w {
                for u in 0..v {
                    if self.fdf_edge(u, v, w) {
                        g.add_edge_unchecked(u, v, w);
                    }
                }
            }
        }
        g
    }

    #[inline]
    pub(crate) fn fdf_edge(&self, u: usize, v: usize, w: usize) -> bool {
        let tri = [u, v, w];
        for (i, &x) in tri.iter().enumerate() {
            let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            let outdeg = self.arc(x, a) as u8 + self.arc(x, b) as u8;
            let indeg = self.arc(a, x) as u8 + self.arc(b, x) as u8;
            if outdeg == 2 || (outdeg == 0 && indeg == 0) {
                return true;
            }
        }
        false
    }

    /// Witness 4-subset inducing an oriented 4-cycle (the four vertices carry
    /// exactly the four cycle arcs), or `None`.
    pub fn find_induced_c4(&self) -> Option<[usize; 4]> {
        let n = self.n();
        for quad in (0..n).combinations(4) {
            if self.induces_c4(&quad) {
                return Some([quad[0], quad[1], quad[2], quad[3]]);
            }
        }
        None
    }

    pub(crate) fn induces_c4(&self, quad: &[usize]) -> bool {
        debug_assert_eq!(quad.len(), 4);
        // within-quad out- and in-degrees all 1: the induced arcs form a
        // permutation without fixed points or transpositions, so a cycle;
        // still verify the cycle visits all four vertices
        for &x in quad {
            let outdeg = quad.iter().filter(|&&y| y != x && self.arc(x, y)).count();
            let indeg = quad.iter().filter(|&&y| y != x && self.arc(y, x)).count();
            if outdeg != 1 || indeg != 1 {
                return false;
            }
        }
        let succ = |x: usize| quad.iter().copied().find(|&y| y != x && self.arc(x, y)).unwrap();
        let start = quad[0];
        let mut len = 1;
        let mut cur = succ(start);
        while cur != start {
            cur = succ(cur);
            len += 1;
        }
        len == 4
    }

    /// Witness 3-subset inducing exactly one arc (an oriented edge plus an
    /// isolated vertex), or `None`.
    pub fn find_induced_p3bar(&self) -> Option<[usize; 3]> {
        let n = self.n();
        for tri in (0..n).combinations(3) {
            if self.induces_p3bar(&tri) {
                return Some([tri[0], tri[1], tri[2]]);
            }
        }
        None
    }

    pub(crate) fn induces_p3bar(&self, tri: &[usize]) -> bool {
        debug_assert_eq!(tri.len(), 3);
        let mut arcs = 0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j && self.arc(tri[i], tri[j]) {
                    arcs += 1;
                }
            }
        }
        arcs == 1
    }

    pub fn is_c4_free(&self) -> bool {
        self.find_induced_c4().is_none()
    }

    pub fn is_p3bar_free(&self) -> bool {
        self.find_induced_p3bar().is_none()
    }
}

/// Every orgraph on `n` vertices: one of three states per unordered pair.
/// `3^C(n,2)` graphs, so only sensible for `n <= 5` or so.
pub fn all_orgraphs(n: usize) -> Vec<Orgraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut out = Vec::with_capacity(3usize.pow(pairs.len() as u32));
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut c = code;
        let mut arcs = Vec::new();
        for &(u, v) in &pairs {
            match c % 3 {
                0 => arcs.push((u, v)),
                1 => arcs.push((v, u)),
                _ => {}
            }
            c /= 3;
        }
        out.push(Orgraph::new(n, &arcs).unwrap());
    }
    out
}
