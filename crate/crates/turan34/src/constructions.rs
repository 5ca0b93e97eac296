//! The Kostochka family of oriented graphs on `Z3 x R`, the catalog of named
//! 3-graphs, and exhaustive scans of the slices for forbidden induced
//! subgraphs.
//!
//! A Kostochka spec is a finite multiset of nonzero rational heights per
//! class `a ∈ {0, 1, 2}`. The orgraph on those vertices has an arc
//! `<(a,x), (b,y)>` iff `x + y < 0` and `b = a + 1`, or `x + y > 0` and
//! `b = a - 1`, with class arithmetic mod 3. Only the signs of pairwise sums
//! matter, so rationals reproduce the real construction exactly.

use std::str::FromStr;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{induced_density, iso_orbit, Density, ThreeGraph};
use crate::orgraph::Orgraph;

/// Default cap on the total vertex count of a slice scanned by
/// [`KostochkaSpec::verify_missing`].
pub const DEFAULT_MISSING_BUDGET: usize = 24;

/// Finite slice spec for the Kostochka construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostochkaSpec {
    heights: [Vec<BigRational>; 3],
    strict: bool,
}

impl KostochkaSpec {
    /// Validates and normalizes (heights sorted ascending within class).
    ///
    /// Strict mode rejects any cross-class pair summing to zero; permissive
    /// mode keeps such pairs and treats them as independent, consistent with
    /// the strict inequalities in the arc rule.
    pub fn new(mut heights: [Vec<BigRational>; 3], strict: bool) -> Result<Self> {
        for class in heights.iter_mut() {
            class.sort();
        }
        for (a, class) in heights.iter().enumerate() {
            for h in class {
                if h.is_zero() {
                    return Err(Error::ZeroHeight);
                }
            }
            for w in class.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedHeight(w[0].to_string(), a));
                }
            }
        }
        if strict {
            // classes are pairwise adjacent mod 3, so every cross-class pair
            // is constrained
            for a in 0..3 {
                for b in a + 1..3 {
                    for x in &heights[a] {
                        for y in &heights[b] {
                            if (x + y).is_zero() {
                                return Err(Error::ZeroPairSum {
                                    a,
                                    x: x.to_string(),
                                    b,
                                    y: y.to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(KostochkaSpec { heights, strict })
    }

    /// The same height set in every class.
    pub fn balanced(s: &[BigRational], strict: bool) -> Result<Self> {
        KostochkaSpec::new([s.to_vec(), s.to_vec(), s.to_vec()], strict)
    }

    pub fn balanced_ints(s: &[i64], strict: bool) -> Result<Self> {
        let hs: Vec<BigRational> = s.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        KostochkaSpec::balanced(&hs, strict)
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    pub fn heights(&self) -> &[Vec<BigRational>; 3] {
        &self.heights
    }

    /// Vertices in class-major, height-ascending order.
    pub fn vertices(&self) -> Vec<(usize, &BigRational)> {
        (0..3)
            .flat_map(|a| self.heights[a].iter().map(move |h| (a, h)))
            .collect()
    }

    pub fn total_vertices(&self) -> usize {
        self.heights.iter().map(Vec::len).sum()
    }

    /// The orgraph of the slice under the arc rule on signs of pairwise sums.
    pub fn orgraph(&self) -> Orgraph {
        let verts = self.vertices();
        let n = verts.len();
        let mut arcs = Vec::new();
        for (i, &(a, x)) in verts.iter().enumerate() {
            for (j, &(b, y)) in verts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let s = x + y;
                let plus_one = (a + 1) % 3 == b;
                let minus_one = (a + 2) % 3 == b;
                if (s < BigRational::zero() && plus_one) || (s > BigRational::zero() && minus_one) {
                    arcs.push((i, j));
                }
            }
        }
        Orgraph::new(n, &arcs).expect("slice arcs are loop- and antiparallel-free")
    }

    /// `FDF` of [`KostochkaSpec::orgraph`].
    pub fn three_graph(&self) -> ThreeGraph {
        self.orgraph().fdf_interpret()
    }

    /// Exact edge density of the slice.
    pub fn density_profile(&self) -> Density {
        let g = self.three_graph();
        induced_density(&named("RHO").unwrap(), &g).expect("slice has >= 3 vertices")
    }

    /// Scans every 5-subset of the slice for induced copies of `H1`, `H2`,
    /// `H3`.
    pub fn verify_missing(&self, budget: usize) -> Result<MissingReport> {
        let n = self.total_vertices();
        if n > budget {
            return Err(Error::CapExceeded(n, budget));
        }
        Ok(scan_for_h123(&self.three_graph()))
    }
}

/// Result of a forbidden-subgraph scan: how many subsets were checked and
/// which of them induce a forbidden graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingReport {
    pub scanned: u64,
    pub witnesses: Vec<MissingWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingWitness {
    pub name: &'static str,
    pub subset: Vec<usize>,
}

impl MissingReport {
    pub fn clean(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Exhaustive 5-subset scan of an arbitrary host for induced `H1`, `H2`,
/// `H3` copies. Parallel over subsets; the report is deterministic.
pub fn scan_for_h123(host: &ThreeGraph) -> MissingReport {
    let n = host.n();
    let targets: Vec<(&'static str, Vec<u64>)> = ["H1", "H2", "H3"]
        .iter()
        .map(|&name| (name, iso_orbit(&named(name).unwrap())))
        .collect();
    if n < 5 {
        return MissingReport { scanned: 0, witnesses: Vec::new() };
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(5).collect();
    let mut witnesses: Vec<MissingWitness> = subsets
        .par_iter()
        .flat_map_iter(|subset| {
            let mask = host.induced_pattern(subset);
            targets.iter().filter_map(move |(name, orbit)| {
                orbit.binary_search(&mask).is_ok().then(|| MissingWitness {
                    name,
                    subset: subset.clone(),
                })
            })
        })
        .collect();
    witnesses.sort_by(|a, b| (&a.subset, a.name).cmp(&(&b.subset, b.name)));
    MissingReport {
        scanned: subsets.len() as u64,
        witnesses,
    }
}

/// Concrete graphs for the named catalog entries.
///
/// `H1`..`H3` are complete on their first four vertices; the link of the
/// fifth is a perfect matching (`H1`), the complement of a perfect matching
/// (`H2`) or the complement of a single pair (`H3`). `H4` uses its second
/// published labeling; `H4_ALT` is the isomorphic first one.
pub fn named(name: &str) -> Result<ThreeGraph> {
    let make = |n: usize, edges: &[[usize; 3]]| ThreeGraph::new(n, edges);
    match name.to_ascii_uppercase().as_str() {
        "RHO" => make(3, &[[0, 1, 2]]),
        "I34" => Ok(ThreeGraph::empty(4)),
        "G3" => make(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3]]),
        "H1" => make(
            5,
            &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3], [0, 1, 4], [2, 3, 4]],
        ),
        "H2" => make(
            5,
            &[
                [0, 1, 2],
                [0, 1, 3],
                [0, 2, 3],
                [1, 2, 3],
                [0, 2, 4],
                [0, 3, 4],
                [1, 2, 4],
                [1, 3, 4],
            ],
        ),
        "H3" => make(
            5,
            &[
                [0, 1, 2],
                [0, 1, 3],
                [0, 2, 3],
                [1, 2, 3],
                [0, 1, 4],
                [0, 2, 4],
                [0, 3, 4],
                [1, 2, 4],
                [1, 3, 4],
            ],
        ),
        "H4" => make(5, &[[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 4]]),
        "H4_ALT" => make(5, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 4]]),
        "M2" => Ok(KostochkaSpec::balanced_ints(&[1, 2], true)
            .expect("static spec")
            .three_graph()),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

pub const CATALOG_NAMES: [&str; 9] = ["RHO", "I34", "G3", "H1", "H2", "H3", "H4", "H4_ALT", "M2"];

/// Parses a family given as comma-separated catalog names.
pub fn parse_family(s: &str) -> Result<Vec<ThreeGraph>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(named)
        .collect()
}

/// Parses `a:1,2;b:1,2;c:1,2` into per-class height lists. Heights are
/// integers or `p/q` rationals.
pub fn parse_heights(s: &str) -> Result<[Vec<BigRational>; 3]> {
    let mut heights: [Option<Vec<BigRational>>; 3] = [None, None, None];
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (cls, rest) = part
            .split_once(':')
            .ok_or_else(|| Error::parse(1, 1, format!("class spec {part:?} missing ':'")))?;
        let idx = match cls.trim() {
            "a" | "A" | "0" => 0,
            "b" | "B" | "1" => 1,
            "c" | "C" | "2" => 2,
            other => return Err(Error::parse(1, 1, format!("unknown class {other:?}"))),
        };
        if heights[idx].is_some() {
            return Err(Error::parse(1, 1, format!("class {cls:?} given twice")));
        }
        heights[idx] = Some(parse_height_list(rest)?);
    }
    Ok(heights.map(|h| h.unwrap_or_default()))
}

pub fn parse_height_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            BigRational::from_str(p)
                .map_err(|e| Error::parse(1, 1, format!("bad height {p:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{contains_induced, is_isomorphic};

    fn spec(s: &[i64]) -> KostochkaSpec {
        KostochkaSpec::balanced_ints(s, true).unwrap()
    }

    #[test]
    fn catalog_edge_counts() {
        assert_eq!(named("H1").unwrap().edge_count(), 6);
        assert_eq!(named("H2").unwrap().edge_count(), 8);
        assert_eq!(named("H3").unwrap().edge_count(), 9);
        assert_eq!(named("G3").unwrap().edge_count(), 3);
        assert_eq!(named("G3").unwrap().n(), 4);
        assert_eq!(named("I34").unwrap().edge_count(), 0);
        assert_eq!(named("RHO").unwrap().edge_count(), 1);
        assert!(named("H5").is_err());
    }

    #[test]
    fn h123_have_clique_on_first_four() {
        let k4 = ThreeGraph::complete(4);
        for name in ["H1", "H2", "H3"] {
            let h = named(name).unwrap();
            assert_eq!(h.induced(&[0, 1, 2, 3]).unwrap(), k4);
        }
    }

    #[test]
    fn h4_alias_is_isomorphic_but_distinct_labeling() {
        let h4 = named("H4").unwrap();
        let alt = named("H4_ALT").unwrap();
        assert_ne!(h4, alt);
        assert!(is_isomorphic(&h4, &alt));
        assert_eq!(h4.edge_count(), 4);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            KostochkaSpec::balanced_ints(&[0, 1], true),
            Err(Error::ZeroHeight)
        ));
        assert!(matches!(
            KostochkaSpec::balanced_ints(&[1, 1], true),
            Err(Error::RepeatedHeight(..))
        ));
        // 1 in class a and -1 in class b sum to zero
        assert!(matches!(
            KostochkaSpec::balanced_ints(&[-1, 1], true),
            Err(Error::ZeroPairSum { .. })
        ));
        assert!(KostochkaSpec::balanced_ints(&[-1, 1], false).is_ok());
        assert!(KostochkaSpec::balanced_ints(&[-3, -1, 2, 4], true).is_ok());
    }

    #[test]
    fn all_positive_arcs_point_to_previous_class() {
        let g = spec(&[1, 2]).orgraph();
        // vertices 0,1 class 0; 2,3 class 1; 4,5 class 2
        for i in 0..2 {
            for j in 4..6 {
                assert!(g.arc(i, j), "class 0 -> class 2");
            }
        }
        for i in 2..4 {
            for j in 0..2 {
                assert!(g.arc(i, j), "class 1 -> class 0");
            }
        }
        for i in 4..6 {
            for j in 2..4 {
                assert!(g.arc(i, j), "class 2 -> class 1");
            }
        }
        assert_eq!(g.arc_count(), 12);
        // same class: independent
        assert!(g.is_independent(0, 1).unwrap());
        assert!(g.is_independent(2, 3).unwrap());
    }

    #[test]
    fn m2_has_six_vertices_and_six_edges() {
        let m2 = spec(&[1, 2]).three_graph();
        assert_eq!(m2.n(), 6);
        assert_eq!(m2.edge_count(), 6);
        assert_eq!(named("M2").unwrap(), m2);
    }

    #[test]
    fn turan_example_has_thirty_edges() {
        let g = spec(&[1, 2, 3]).three_graph();
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 30);
    }

    #[test]
    fn single_height_gives_empty_triangle() {
        let g = spec(&[1]).three_graph();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn density_examples() {
        assert_eq!(spec(&[1, 2]).density_profile(), Density::new(6, 20));
        assert_eq!(spec(&[1, 2, 3]).density_profile(), Density::new(30, 84));
    }

    #[test]
    fn density_trend_toward_four_ninths() {
        let target = BigRational::new(4.into(), 9.into());
        let mut last: Option<BigRational> = None;
        for k in 2..=8 {
            let s: Vec<i64> = (1..=k).collect();
            let d = spec(&s).density_profile().into_ratio();
            assert!(d < target);
            let gap = &target - &d;
            let bound = BigRational::new(2.into(), k.into());
            assert!(gap <= bound, "k={k}: gap {gap} > {bound}");
            if let Some(prev) = last {
                assert!(d > prev, "density not increasing at k={k}");
            }
            last = Some(d);
        }
    }

    #[test]
    fn verify_missing_on_small_slices() {
        let r = spec(&[1, 2]).verify_missing(DEFAULT_MISSING_BUDGET).unwrap();
        assert!(r.clean());
        assert_eq!(r.scanned, 6);
        let r = KostochkaSpec::balanced_ints(&[-3, -1, 2, 4], true)
            .unwrap()
            .verify_missing(DEFAULT_MISSING_BUDGET)
            .unwrap();
        assert!(r.clean());
        assert_eq!(r.scanned, 792);
        assert!(spec(&[1, 2]).verify_missing(5).is_err());
    }

    #[test]
    fn missing_scan_control_finds_planted_h1() {
        let r = scan_for_h123(&named("H1").unwrap());
        assert_eq!(r.scanned, 1);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].name, "H1");
        assert_eq!(r.witnesses[0].subset, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn slices_are_c4_and_p3bar_free() {
        let specs = [
            spec(&[1, 2]),
            spec(&[1, 2, 3, 4, 5]),
            KostochkaSpec::balanced_ints(&[-3, -1, 2, 4], true).unwrap(),
            KostochkaSpec::new(
                [
                    vec![BigRational::from_integer(1.into())],
                    crate::constructions::parse_height_list("-2,3,7/2").unwrap(),
                    crate::constructions::parse_height_list("1/3,5").unwrap(),
                ],
                true,
            )
            .unwrap(),
        ];
        for s in &specs {
            let g = s.orgraph();
            assert!(g.is_c4_free(), "{s:?}");
            assert!(g.is_p3bar_free(), "{s:?}");
            let fdf = s.three_graph();
            if fdf.n() >= 4 {
                assert!(contains_induced(&fdf, &named("I34").unwrap()).unwrap().is_none());
            }
        }
    }

    #[test]
    fn scaling_heights_preserves_the_orgraph() {
        let base = KostochkaSpec::balanced_ints(&[-3, -1, 2, 4], true).unwrap();
        let factor = BigRational::new(7.into(), 3.into());
        let scaled = KostochkaSpec::new(
            base.heights().clone().map(|c| c.iter().map(|h| h * &factor).collect()),
            true,
        )
        .unwrap();
        assert_eq!(base.orgraph(), scaled.orgraph());
    }

    #[test]
    fn g3_presence_tracks_sign_mixture() {
        let g3 = named("G3").unwrap();
        // all-positive slices never contain G3
        for k in 2..=5 {
            let s: Vec<i64> = (1..=k).collect();
            let g = spec(&s).three_graph();
            assert!(contains_induced(&g, &g3).unwrap().is_none(), "k={k}");
        }
        // mixed-sign slices with >= 4 heights per class always do
        for s in [[-3i64, -1, 2, 4], [-4, -2, 1, 3], [-1, 2, 3, 4], [-4, -3, -2, 1]] {
            let mixed = KostochkaSpec::balanced_ints(&s, true).unwrap();
            assert!(contains_induced(&mixed.three_graph(), &g3).unwrap().is_some(), "{s:?}");
        }
    }

    #[test]
    fn two_height_mixed_slices_collapse_to_m2() {
        // at six vertices the interpretation cannot distinguish sign
        // mixtures: any 6-vertex 6-edge slice is the unique extremal graph,
        // which is G3-free
        let g3 = named("G3").unwrap();
        let m2 = named("M2").unwrap();
        for s in [[-1i64, 2], [-2, 1]] {
            let g = KostochkaSpec::balanced_ints(&s, true).unwrap().three_graph();
            assert_eq!(g.edge_count(), 6);
            assert!(is_isomorphic(&g, &m2));
            assert!(contains_induced(&g, &g3).unwrap().is_none());
        }
    }

    #[test]
    fn clique_spanning_suborgraphs_fall_into_three_classes() {
        // canonical arc matrices of 4-vertex sub-orgraphs spanning cliques in
        // the interpretation, collected across a family of slices
        use std::collections::BTreeSet;
        let mut shapes: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        let specs = [
            spec(&[1, 2, 3, 4]),
            KostochkaSpec::balanced_ints(&[-3, -1, 2, 4], true).unwrap(),
            KostochkaSpec::balanced_ints(&[-5, -2, 1, 3], true).unwrap(),
        ];
        for s in &specs {
            let or = s.orgraph();
            let fdf = or.fdf_interpret();
            for quad in (0..fdf.n()).combinations(4) {
                let clique = quad
                    .iter()
                    .copied()
                    .combinations(3)
                    .all(|t| fdf.has_edge(t[0], t[1], t[2]));
                if !clique {
                    continue;
                }
                let mut arcs: Vec<(usize, usize)> = Vec::new();
                for (i, &u) in quad.iter().enumerate() {
                    for (j, &v) in quad.iter().enumerate() {
                        if i != j && or.arc(u, v) {
                            arcs.push((i, j));
                        }
                    }
                }
                let sub = Orgraph::new(4, &arcs).unwrap();
                let canon = (0..4)
                    .permutations(4)
                    .map(|p| sub.permuted(&p).arcs())
                    .min()
                    .unwrap();
                shapes.insert(canon);
            }
        }
        assert_eq!(shapes.len(), 3, "{shapes:?}");
    }

    #[test]
    fn heights_parser() {
        let h = parse_heights("a:1,2;b:-3,1/2;c:4").unwrap();
        assert_eq!(h[0].len(), 2);
        assert_eq!(h[1][0], BigRational::from_integer((-3).into()));
        assert_eq!(h[1][1], BigRational::new(1.into(), 2.into()));
        assert_eq!(h[2].len(), 1);
        assert!(parse_heights("a:1;a:2").is_err());
        assert!(parse_heights("d:1").is_err());
        assert!(parse_heights("a:x").is_err());
    }
}
