//! Finite abstract simplicial complexes, simplicial maps and canonical forms.
//!
//! Vertices are the dense indices `0..n_vertices`. A simplex is stored as a
//! bitmask, so complexes are limited to [`MAX_VERTICES`] vertices. Simplices
//! order lexicographically by their sorted vertex lists, which is also the
//! order used for canonical forms and for JSON output.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard limit imposed by the bitmask representation.
pub const MAX_VERTICES: usize = 64;

/// Default vertex cap for brute-force canonicalization.
pub const DEFAULT_CANONICAL_CAP: usize = 8;

/// A nonempty set of vertices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex(u64);

impl Simplex {
    pub fn from_vertices(vertices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= MAX_VERTICES {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices: MAX_VERTICES,
                });
            }
            mask |= 1 << v;
        }
        Self::from_mask(mask).ok_or(Error::EmptySimplex)
    }

    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Simplex(mask))
    }

    pub fn singleton(v: usize) -> Self {
        assert!(v < MAX_VERTICES);
        Simplex(1 << v)
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(self) -> bool {
        false
    }

    pub fn dim(self) -> usize {
        self.len() - 1
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    pub fn is_face_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn max_vertex(self) -> usize {
        63 - self.0.leading_zeros() as usize
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// Faces of codimension one. Empty for vertices.
    pub fn boundary(self) -> impl Iterator<Item = Simplex> {
        let mask = self.0;
        let skip = self.len() == 1;
        self.vertices()
            .filter(move |_| !skip)
            .map(move |v| Simplex(mask & !(1 << v)))
    }

    /// Image of the simplex under a vertex function.
    #[inline]
    pub fn map(self, vertex_map: &[usize]) -> Simplex {
        let mut out = 0u64;
        for v in self.vertices() {
            out |= 1 << vertex_map[v];
        }
        Simplex(out)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self.0, other.0)
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices()).finish()
    }
}

/// Lexicographic comparison of the sorted vertex lists of two masks.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let p = diff.trailing_zeros();
    let above = if p >= 63 { 0 } else { !0u64 << (p + 1) };
    if a & (1 << p) != 0 {
        // b's list either stops here (b is a prefix of a) or continues with something larger than p
        if b & above == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if a & above == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// A finite abstract simplicial complex on the vertices `0..n_vertices`.
///
/// The full simplex set is stored; it is always downward closed and contains
/// every singleton.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ComplexRepr", try_from = "ComplexRepr")]
pub struct SimplicialComplex {
    n_vertices: usize,
    simplices: BTreeSet<Simplex>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    n_vertices: usize,
    simplices: Vec<Vec<usize>>,
}

impl From<SimplicialComplex> for ComplexRepr {
    fn from(c: SimplicialComplex) -> Self {
        ComplexRepr {
            n_vertices: c.n_vertices,
            simplices: c.to_lists(),
        }
    }
}

impl TryFrom<ComplexRepr> for SimplicialComplex {
    type Error = Error;

    fn try_from(r: ComplexRepr) -> Result<Self> {
        make_complex(r.n_vertices, &r.simplices)
    }
}

/// Downward closure of `generators` plus all singletons on `n_vertices` vertices.
pub fn make_complex<S: AsRef<[usize]>>(n_vertices: usize, generators: &[S]) -> Result<SimplicialComplex> {
    let masks = generators
        .iter()
        .map(|g| {
            let g = g.as_ref();
            if let Some(&v) = g.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices,
                });
            }
            Simplex::from_vertices(g)
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialComplex::from_simplices(n_vertices, masks)
}

impl SimplicialComplex {
    /// Closes the given simplices downward and adds all singletons.
    pub fn from_simplices<I>(n_vertices: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        if n_vertices == 0 {
            return Err(Error::EmptyComplex);
        }
        if n_vertices > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "vertex count",
                size: n_vertices,
                cap: MAX_VERTICES,
            });
        }
        let mut set = BTreeSet::new();
        for v in 0..n_vertices {
            set.insert(Simplex::singleton(v));
        }
        let allowed = if n_vertices == 64 {
            !0u64
        } else {
            (1u64 << n_vertices) - 1
        };
        for s in simplices {
            if s.mask() & !allowed != 0 {
                return Err(Error::VertexOutOfRange {
                    vertex: s.max_vertex(),
                    n_vertices,
                });
            }
            close_into(&mut set, s);
        }
        Ok(SimplicialComplex {
            n_vertices,
            simplices: set,
        })
    }

    /// `n` isolated vertices.
    pub fn discrete(n_vertices: usize) -> Result<Self> {
        Self::from_simplices(n_vertices, std::iter::empty())
    }

    /// The full simplex on `n` vertices.
    pub fn full(n_vertices: usize) -> Result<Self> {
        let top = if n_vertices >= 64 {
            !0u64
        } else {
            (1u64 << n_vertices) - 1
        };
        Self::from_simplices(n_vertices, Simplex::from_mask(top))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of simplices, vertices included.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.simplices.iter().copied()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.simplices.contains(&s)
    }

    pub fn contains_vertices(&self, vertices: &[usize]) -> bool {
        Simplex::from_vertices(vertices).is_ok_and(|s| self.contains(s))
    }

    pub fn dimension(&self) -> usize {
        self.simplices.iter().map(|s| s.dim()).max().unwrap_or(0)
    }

    /// Simplex counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension() + 1];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    /// Maximal simplices in lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .copied()
            .filter(|&s| {
                !(0..self.n_vertices)
                    .filter(|&v| !s.contains(v))
                    .any(|v| self.simplices.contains(&Simplex(s.0 | 1 << v)))
            })
            .collect()
    }

    /// Same vertex set and every simplex of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.n_vertices == other.n_vertices && self.simplices.is_subset(&other.simplices)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<SimplicialComplex> {
        if perm.len() != self.n_vertices || !is_permutation(perm) {
            return Err(Error::InvalidArgument("relabeling must be a permutation".into()));
        }
        Ok(SimplicialComplex {
            n_vertices: self.n_vertices,
            simplices: self.simplices.iter().map(|s| s.map(perm)).collect(),
        })
    }

    /// Re-checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.n_vertices == 0 {
            return Err(Error::EmptyComplex);
        }
        for v in 0..self.n_vertices {
            if !self.contains(Simplex::singleton(v)) {
                return Err(Error::InvalidArgument(format!("vertex {v} missing")));
            }
        }
        for s in &self.simplices {
            if s.max_vertex() >= self.n_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: s.max_vertex(),
                    n_vertices: self.n_vertices,
                });
            }
            if let Some(f) = s.boundary().find(|f| !self.contains(*f)) {
                return Err(Error::InvalidArgument(format!(
                    "not downward closed: {s:?} present but face {f:?} missing"
                )));
            }
        }
        Ok(())
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.simplices.iter().map(|s| s.to_vec()).collect()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex(n={}, facets={:?})", self.n_vertices, self.facets())
    }
}

fn close_into(set: &mut BTreeSet<Simplex>, s: Simplex) {
    if set.insert(s) {
        for face in s.boundary() {
            close_into(set, face);
        }
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter()
        .all(|&p| p < perm.len() && !std::mem::replace(&mut seen[p], true))
}

/// True iff every simplex of `source` maps onto a simplex of `target`.
///
/// Also false when `vertex_map` has the wrong length or leaves the target's
/// vertex range.
pub fn is_simplicial(source: &SimplicialComplex, target: &SimplicialComplex, vertex_map: &[usize]) -> bool {
    vertex_map.len() == source.n_vertices
        && vertex_map.iter().all(|&w| w < target.n_vertices)
        && source.simplices().all(|s| target.contains(s.map(vertex_map)))
}

/// A simplicial map between two complexes, given by its vertex function.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "MapRepr", try_from = "MapRepr")]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl From<SimplicialMap> for MapRepr {
    fn from(m: SimplicialMap) -> Self {
        MapRepr {
            source: m.source,
            target: m.target,
            vertex_map: m.vertex_map,
        }
    }
}

impl TryFrom<MapRepr> for SimplicialMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        SimplicialMap::new(r.source, r.target, r.vertex_map)
    }
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.n_vertices {
            return Err(Error::NotSimplicial(format!(
                "vertex map has length {} but the source has {} vertices",
                vertex_map.len(),
                source.n_vertices
            )));
        }
        if let Some(&w) = vertex_map.iter().find(|&&w| w >= target.n_vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: w,
                n_vertices: target.n_vertices,
            });
        }
        if let Some(s) = source.simplices().find(|s| !target.contains(s.map(&vertex_map))) {
            return Err(Error::NotSimplicial(format!(
                "{s:?} maps to {:?}, which is not a simplex of the target",
                s.map(&vertex_map)
            )));
        }
        Ok(SimplicialMap {
            source,
            target,
            vertex_map,
        })
    }

    pub fn identity(c: &SimplicialComplex) -> Self {
        SimplicialMap {
            source: c.clone(),
            target: c.clone(),
            vertex_map: (0..c.n_vertices).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Re-validates the map.
    pub fn is_simplicial(&self) -> bool {
        is_simplicial(&self.source, &self.target, &self.vertex_map)
    }

    pub fn is_vertex_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.n_vertices];
        for &w in &self.vertex_map {
            hit[w] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_vertex_bijective(&self) -> bool {
        self.source.n_vertices == self.target.n_vertices && self.is_vertex_surjective()
    }

    /// Inverse of a vertex bijection, when it is itself simplicial.
    pub fn inverse(&self) -> Option<SimplicialMap> {
        if !self.is_vertex_bijective() {
            return None;
        }
        let mut inv = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            inv[w] = v;
        }
        SimplicialMap::new(self.target.clone(), self.source.clone(), inv).ok()
    }
}

/// `g ∘ f`; requires `f.target() == g.source()`.
pub fn compose(f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap> {
    if f.target != g.source {
        return Err(Error::CompositionMismatch);
    }
    let vertex_map = f.vertex_map.iter().map(|&v| g.vertex_map[v]).collect();
    Ok(SimplicialMap {
        source: f.source.clone(),
        target: g.target.clone(),
        vertex_map,
    })
}

/// Isomorphism class of a complex, represented by its canonical relabeling.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "IsoRepr", try_from = "IsoRepr")]
pub struct IsoClass {
    canonical: SimplicialComplex,
    key: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct IsoRepr {
    canonical: SimplicialComplex,
    key: String,
}

impl From<IsoClass> for IsoRepr {
    fn from(c: IsoClass) -> Self {
        let key = c.key_hex();
        IsoRepr {
            canonical: c.canonical,
            key,
        }
    }
}

impl TryFrom<IsoRepr> for IsoClass {
    type Error = Error;

    fn try_from(r: IsoRepr) -> Result<Self> {
        let cap = r.canonical.n_vertices.max(DEFAULT_CANONICAL_CAP);
        let cls = canonical_form_capped(&r.canonical, cap)?;
        if cls.key_hex() != r.key {
            return Err(Error::InvalidArgument(
                "iso-class key does not match its canonical complex".into(),
            ));
        }
        Ok(cls)
    }
}

impl IsoClass {
    pub fn canonical(&self) -> &SimplicialComplex {
        &self.canonical
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn key_hex(&self) -> String {
        self.key.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn n_vertices(&self) -> usize {
        self.canonical.n_vertices
    }
}

impl PartialEq for IsoClass {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for IsoClass {}

impl std::hash::Hash for IsoClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for IsoClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by vertex count, then simplex count, then key.
impl Ord for IsoClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n_vertices(), self.canonical.len(), &self.key).cmp(&(
            other.n_vertices(),
            other.canonical.len(),
            &other.key,
        ))
    }
}

fn encode_key(n_vertices: usize, simplices: &[Simplex]) -> Vec<u8> {
    let width = n_vertices.div_ceil(8);
    let mut key = Vec::with_capacity(1 + width * simplices.len());
    key.push(n_vertices as u8);
    for s in simplices {
        key.extend_from_slice(&s.mask().to_le_bytes()[..width]);
    }
    key
}

/// Canonical form under the default vertex cap.
pub fn canonical_form(c: &SimplicialComplex) -> Result<IsoClass> {
    canonical_form_capped(c, DEFAULT_CANONICAL_CAP)
}

/// Least simplex set over all `n!` relabelings.
pub fn canonical_form_capped(c: &SimplicialComplex, cap: usize) -> Result<IsoClass> {
    canonical_labeling(c, cap).map(|(cls, _)| cls)
}

/// Canonical form plus one relabeling `perm` with `c.relabeled(perm)` canonical.
pub fn canonical_labeling(c: &SimplicialComplex, cap: usize) -> Result<(IsoClass, Vec<usize>)> {
    let n = c.n_vertices;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "canonicalization vertex count",
            size: n,
            cap,
        });
    }
    let simplices: Vec<Simplex> = c.simplices().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Vec<Simplex> = simplices.clone();
    let mut best_perm = perm.clone();
    let mut scratch = Vec::with_capacity(simplices.len());

    let mut consider = |perm: &[usize], best: &mut Vec<Simplex>, best_perm: &mut Vec<usize>| {
        scratch.clear();
        scratch.extend(simplices.iter().map(|s| s.map(perm)));
        scratch.sort_unstable();
        if scratch < *best {
            best.clone_from(&scratch);
            best_perm.copy_from_slice(perm);
        }
    };

    // Heap's algorithm, iterative form
    consider(&perm, &mut best, &mut best_perm);
    let mut counters = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            consider(&perm, &mut best, &mut best_perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }

    let key = encode_key(n, &best);
    let canonical = SimplicialComplex {
        n_vertices: n,
        simplices: best.into_iter().collect(),
    };
    Ok((IsoClass { canonical, key }, best_perm))
}

/// Isomorphism test via canonical keys.
pub fn are_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<bool> {
    if a.n_vertices != b.n_vertices || a.len() != b.len() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}
