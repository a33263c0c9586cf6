//! The domination order on isomorphism classes of complexes.
//!
//! `[C] ≽ [C']` when some simplicial map `C → C'` is surjective on vertices.
//! This module searches for such maps, enumerates all classes up to a vertex
//! bound, and reduces the resulting order to its Hasse diagram.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complexes::{
    canonical_form, canonical_form_capped, IsoClass, Simplex, SimplicialComplex, SimplicialMap,
};
use crate::error::{Error, Result};

/// Default vertex cap for [`dominates`].
pub const DEFAULT_DOMINATES_CAP: usize = 8;

/// Default vertex cap for [`enumerate_classes`].
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

/// Searches for a vertex-surjective simplicial map `source → target`.
pub fn dominates(source: &SimplicialComplex, target: &SimplicialComplex) -> Result<Option<SimplicialMap>> {
    dominates_capped(source, target, DEFAULT_DOMINATES_CAP)
}

/// [`dominates`] with an explicit vertex cap.
///
/// Vertices of `source` are assigned in index order and targets are tried in
/// index order, so the witness is the lexicographically least valid vertex
/// map.
pub fn dominates_capped(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    cap: usize,
) -> Result<Option<SimplicialMap>> {
    for c in [source, target] {
        if c.n_vertices() > cap {
            return Err(Error::CapExceeded {
                what: "domination search vertex count",
                size: c.n_vertices(),
                cap,
            });
        }
    }
    let n = source.n_vertices();
    let m = target.n_vertices();
    if n < m {
        return Ok(None);
    }

    // simplices of dimension ≥ 1 grouped by their largest vertex
    let mut closing: Vec<Vec<Simplex>> = vec![Vec::new(); n];
    for s in source.simplices().filter(|s| s.len() > 1) {
        closing[s.max_vertex()].push(s);
    }

    let mut search = Search {
        target,
        closing: &closing,
        assignment: vec![0; n],
        hits: vec![0; m],
        uncovered: m,
    };
    if search.extend(0) {
        let map = SimplicialMap::new(source.clone(), target.clone(), search.assignment)?;
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    target: &'a SimplicialComplex,
    closing: &'a [Vec<Simplex>],
    assignment: Vec<usize>,
    hits: Vec<usize>,
    uncovered: usize,
}

impl Search<'_> {
    fn extend(&mut self, v: usize) -> bool {
        let n = self.assignment.len();
        if v == n {
            return self.uncovered == 0;
        }
        let remaining = n - v - 1;
        for w in 0..self.hits.len() {
            self.assignment[v] = w;
            self.hits[w] += 1;
            if self.hits[w] == 1 {
                self.uncovered -= 1;
            }
            let feasible = remaining >= self.uncovered
                && self.closing[v]
                    .iter()
                    .all(|s| self.target.contains(s.map(&self.assignment)));
            if feasible && self.extend(v + 1) {
                return true;
            }
            self.hits[w] -= 1;
            if self.hits[w] == 0 {
                self.uncovered += 1;
            }
        }
        false
    }
}

/// All isomorphism classes on `1..=n_max` vertices with their domination relation.
#[derive(Clone, Debug)]
pub struct PosetUniverse {
    n_max: usize,
    classes: Vec<IsoClass>,
    relation: Vec<Vec<bool>>,
    index: HashMap<Vec<u8>, usize>,
}

#[derive(Serialize, Deserialize)]
struct UniverseRepr {
    n_max: usize,
    classes: Vec<SimplicialComplex>,
    relation: Vec<Vec<bool>>,
}

impl Serialize for PosetUniverse {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        UniverseRepr {
            n_max: self.n_max,
            classes: self.classes.iter().map(|c| c.canonical().clone()).collect(),
            relation: self.relation.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PosetUniverse {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = UniverseRepr::deserialize(deserializer)?;
        let k = repr.classes.len();
        if repr.relation.len() != k || repr.relation.iter().any(|row| row.len() != k) {
            return Err(serde::de::Error::custom("relation matrix must be square over the classes"));
        }
        let classes = repr
            .classes
            .iter()
            .map(|c| canonical_form_capped(c, c.n_vertices().max(DEFAULT_DOMINATES_CAP)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(PosetUniverse::from_parts(repr.n_max, classes, repr.relation))
    }
}

impl PosetUniverse {
    fn from_parts(n_max: usize, classes: Vec<IsoClass>, relation: Vec<Vec<bool>>) -> Self {
        let index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.key().to_vec(), i))
            .collect();
        PosetUniverse {
            n_max,
            classes,
            relation,
            index,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `relation()[i][j]` iff `classes[i] ≽ classes[j]`.
    pub fn relation(&self) -> &[Vec<bool>] {
        &self.relation
    }

    pub fn index_of(&self, cls: &IsoClass) -> Option<usize> {
        self.index.get(cls.key()).copied()
    }

    pub fn geq(&self, i: usize, j: usize) -> bool {
        self.relation[i][j]
    }

    /// Indices of the classes dominating `cls`, i.e. its upset; `None` if `cls` is not in the universe.
    pub fn upset(&self, cls: &IsoClass) -> Option<Vec<usize>> {
        let j = self.index_of(cls)?;
        Some((0..self.len()).filter(|&i| self.relation[i][j]).collect())
    }

    /// Indices of the classes dominated by `cls`.
    pub fn downset(&self, cls: &IsoClass) -> Option<Vec<usize>> {
        let i = self.index_of(cls)?;
        Some((0..self.len()).filter(|&j| self.relation[i][j]).collect())
    }

    /// Point count of a class: the coarser stratification it refines.
    pub fn point_count(&self, i: usize) -> usize {
        self.classes[i].n_vertices()
    }
}

/// Upset of `cls` as classes.
pub fn upset<'u>(cls: &IsoClass, universe: &'u PosetUniverse) -> Option<Vec<&'u IsoClass>> {
    universe
        .upset(cls)
        .map(|idx| idx.into_iter().map(|i| &universe.classes[i]).collect())
}

/// Enumerates every class on `1..=n_max` vertices under the default cap.
pub fn enumerate_classes(n_max: usize) -> Result<PosetUniverse> {
    enumerate_classes_capped(n_max, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_classes_capped(n_max: usize, cap: usize) -> Result<PosetUniverse> {
    if n_max > cap {
        return Err(Error::CapExceeded {
            what: "enumeration vertex count",
            size: n_max,
            cap,
        });
    }
    let mut found: BTreeMap<IsoClass, ()> = BTreeMap::new();
    for n in 1..=n_max {
        for c in labeled_complexes(n)? {
            let cls = canonical_form_capped(&c, n.max(1))?;
            found.entry(cls).or_insert(());
        }
    }
    let classes: Vec<IsoClass> = found.into_keys().collect();
    let k = classes.len();
    let mut relation = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            relation[i][j] = i == j
                || dominates_capped(classes[i].canonical(), classes[j].canonical(), cap.max(n_max))?.is_some();
        }
    }
    Ok(PosetUniverse::from_parts(n_max, classes, relation))
}

/// Every downward-closed family on exactly `n` labeled vertices.
fn labeled_complexes(n: usize) -> Result<Vec<SimplicialComplex>> {
    let mut candidates: Vec<u64> = (1u64..1 << n).filter(|m| m.count_ones() >= 2).collect();
    candidates.sort_by_key(|m| (m.count_ones(), *m));
    let mut present = vec![false; 1 << n];
    for v in 0..n {
        present[1 << v] = true;
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    walk(n, &candidates, 0, &mut present, &mut chosen, &mut out)?;
    Ok(out)
}

fn walk(
    n: usize,
    candidates: &[u64],
    i: usize,
    present: &mut [bool],
    chosen: &mut Vec<u64>,
    out: &mut Vec<SimplicialComplex>,
) -> Result<()> {
    if i == candidates.len() {
        let simplices = chosen.iter().filter_map(|&m| Simplex::from_mask(m));
        out.push(SimplicialComplex::from_simplices(n, simplices)?);
        return Ok(());
    }
    let m = candidates[i];
    walk(n, candidates, i + 1, present, chosen, out)?;
    let s = Simplex::from_mask(m).expect("nonzero mask");
    if s.boundary().all(|f| present[f.mask() as usize]) {
        present[m as usize] = true;
        chosen.push(m);
        walk(n, candidates, i + 1, present, chosen, out)?;
        chosen.pop();
        present[m as usize] = false;
    }
    Ok(())
}

/// Transitive reduction of the strict domination order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HasseDiagram {
    pub nodes: Vec<IsoClass>,
    /// `(higher, lower)` index pairs.
    pub cover_edges: Vec<(usize, usize)>,
}

pub fn hasse(universe: &PosetUniverse) -> HasseDiagram {
    let k = universe.len();
    let rel = &universe.relation;
    let mut cover_edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j || !rel[i][j] {
                continue;
            }
            let factors = (0..k).any(|m| m != i && m != j && rel[i][m] && rel[m][j]);
            if !factors {
                cover_edges.push((i, j));
            }
        }
    }
    HasseDiagram {
        nodes: universe.classes.clone(),
        cover_edges,
    }
}

/// Reflexive-transitive closure of an edge list on `k` nodes.
pub fn transitive_closure(k: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; k]; k];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for m in 0..k {
        for i in 0..k {
            if reach[i][m] {
                let via = reach[m].clone();
                for (dst, r) in reach[i].iter_mut().zip(via) {
                    *dst |= r;
                }
            }
        }
    }
    reach
}

/// Facet list of a complex as compact text, e.g. `[[0,1],[2]]`.
pub fn facet_label(c: &SimplicialComplex) -> String {
    let parts: Vec<String> = c
        .facets()
        .into_iter()
        .map(|s| {
            let vs: Vec<String> = s.vertices().map(|v| v.to_string()).collect();
            format!("[{}]", vs.join(","))
        })
        .collect();
    format!("[{}]", parts.join(","))
}

/// Graphviz DOT text for a Hasse diagram, edges pointing from higher to lower.
pub fn export_dot(h: &HasseDiagram) -> String {
    let mut out = String::from("digraph hasse {\n");
    for (i, node) in h.nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", facet_label(node.canonical()));
    }
    for &(a, b) in &h.cover_edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

/// Convenience: does `a ≽ b` as classes.
pub fn class_geq(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<bool> {
    Ok(dominates(a, b)?.is_some())
}

/// Canonical class of a complex; re-exported for callers of this module.
pub fn class_of(c: &SimplicialComplex) -> Result<IsoClass> {
    canonical_form(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{compose, make_complex};
    use proptest::prelude::*;

    fn cx(n: usize, gens: &[&[usize]]) -> SimplicialComplex {
        make_complex(n, gens).unwrap()
    }

    fn cls(n: usize, gens: &[&[usize]]) -> IsoClass {
        canonical_form(&cx(n, gens)).unwrap()
    }

    /// All vertex maps, brute force; the oracle for `dominates`.
    fn brute_force_dominates(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
        let n = a.n_vertices();
        let m = b.n_vertices();
        let total = m.pow(n as u32);
        (0..total).any(|mut code| {
            let mut map = vec![0; n];
            for slot in map.iter_mut() {
                *slot = code % m;
                code /= m;
            }
            let mut hit = vec![false; m];
            map.iter().for_each(|&w| hit[w] = true);
            hit.iter().all(|&h| h) && crate::complexes::is_simplicial(a, b, &map)
        })
    }

    #[test]
    fn complexes_c_d_e_witness() {
        let (c, d, e) = crate::complexes::tests::complexes_c_d_e();
        let w = dominates(&c, &d).unwrap().expect("C ≽ D");
        assert!(w.is_simplicial() && w.is_vertex_surjective());
        let v = dominates(&d, &e).unwrap().expect("D ≽ E");
        assert_eq!(v.vertex_map(), &[0, 1, 2, 3]);
        assert!(dominates(&e, &d).unwrap().is_none());
        assert!(dominates(&d, &c).unwrap().is_none());
    }

    #[test]
    fn reflexive_identity_witness() {
        let c = cx(4, &[&[0, 1, 2], &[2, 3]]);
        let w = dominates(&c, &c).unwrap().unwrap();
        assert_eq!(w.vertex_map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn path_does_not_dominate_two_points() {
        let path = cx(3, &[&[0, 1], &[1, 2]]);
        let two = cx(2, &[]);
        assert!(dominates(&path, &two).unwrap().is_none());
        assert!(!brute_force_dominates(&path, &two));
    }

    #[test]
    fn fewer_vertices_never_dominate() {
        assert!(dominates(&cx(2, &[]), &cx(3, &[])).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let big = SimplicialComplex::discrete(9).unwrap();
        assert!(dominates(&big, &cx(1, &[])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_classes(1).unwrap().len(), 1);
        assert_eq!(enumerate_classes(2).unwrap().len(), 3);
        assert_eq!(enumerate_classes(3).unwrap().len(), 8);
        // 1 + 2 + 5 + 20 classes on exactly 1..4 vertices
        assert_eq!(enumerate_classes(4).unwrap().len(), 28);
        assert!(enumerate_classes(6).is_err());
    }

    #[test]
    fn upsets_in_three_vertex_universe() {
        let u = enumerate_classes(3).unwrap();
        let point = cls(1, &[]);
        assert_eq!(u.upset(&point).unwrap().len(), 8);

        let filled = cls(3, &[&[0, 1, 2]]);
        let up: Vec<IsoClass> = upset(&filled, &u).unwrap().into_iter().cloned().collect();
        let expected = vec![
            cls(3, &[]),
            cls(3, &[&[0, 1]]),
            cls(3, &[&[0, 1], &[1, 2]]),
            cls(3, &[&[0, 1], &[1, 2], &[0, 2]]),
            filled.clone(),
        ];
        assert_eq!(up.len(), expected.len());
        for e in &expected {
            assert!(up.contains(e));
        }
        let discrete = cls(3, &[]);
        assert!(u.upset(&discrete).unwrap().contains(&u.index_of(&discrete).unwrap()));
        assert!(u.upset(&cls(4, &[])).is_none());
    }

    #[test]
    fn hasse_two_vertices() {
        let u = enumerate_classes(2).unwrap();
        let h = hasse(&u);
        let two = u.index_of(&cls(2, &[])).unwrap();
        let edge = u.index_of(&cls(2, &[&[0, 1]])).unwrap();
        let point = u.index_of(&cls(1, &[])).unwrap();
        let mut edges = h.cover_edges.clone();
        edges.sort();
        let mut expected = vec![(two, edge), (edge, point)];
        expected.sort();
        assert_eq!(edges, expected);
    }

    #[test]
    fn dot_export_shapes() {
        let empty = HasseDiagram {
            nodes: vec![],
            cover_edges: vec![],
        };
        assert_eq!(export_dot(&empty), "digraph hasse {\n}\n");
        let h = hasse(&enumerate_classes(2).unwrap());
        let dot = export_dot(&h);
        assert_eq!(dot.matches("label=").count(), 3);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("[[0,1]]"));
        assert_eq!(dot, export_dot(&h));
    }

    #[test]
    fn universe_json_roundtrip() {
        let u = enumerate_classes(3).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        let back: PosetUniverse = serde_json::from_str(&text).unwrap();
        assert_eq!(back.classes(), u.classes());
        assert_eq!(back.relation(), u.relation());
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn universe_four_is_partial_order_and_reduction_closes_back() {
        let u = enumerate_classes(4).unwrap();
        let k = u.len();
        let r = u.relation();
        for i in 0..k {
            assert!(r[i][i]);
            for j in 0..k {
                if i != j && r[i][j] {
                    assert!(!r[j][i], "antisymmetry {i} {j}");
                    assert!(u.point_count(i) >= u.point_count(j));
                }
                for m in 0..k {
                    if r[i][j] && r[j][m] {
                        assert!(r[i][m]);
                    }
                }
            }
        }
        let h = hasse(&u);
        assert_eq!(transitive_closure(k, &h.cover_edges), r.to_vec());
        for &(a, b) in &h.cover_edges {
            assert!(a != b && r[a][b]);
        }
    }

    proptest! {
        #[test]
        fn dominates_agrees_with_brute_force(
            a in crate::complexes::tests::arb_complex(4),
            b in crate::complexes::tests::arb_complex(3),
        ) {
            let w = dominates(&a, &b).unwrap();
            prop_assert_eq!(w.is_some(), brute_force_dominates(&a, &b));
            if let Some(w) = w {
                prop_assert!(w.is_simplicial() && w.is_vertex_surjective());
            }
        }

        #[test]
        fn composed_witnesses_are_witnesses(
            a in crate::complexes::tests::arb_complex(5),
            b in crate::complexes::tests::arb_complex(4),
            c in crate::complexes::tests::arb_complex(3),
        ) {
            if let (Some(f), Some(g)) = (dominates(&a, &b).unwrap(), dominates(&b, &c).unwrap()) {
                let h = compose(&f, &g).unwrap();
                prop_assert!(h.is_simplicial() && h.is_vertex_surjective());
                prop_assert!(dominates(&a, &c).unwrap().is_some());
            }
        }
    }
}
