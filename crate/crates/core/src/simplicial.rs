//! Combinatorics of Δ⁵ and its pentachoron clusters, orientation signs, and
//! simplicial 1- and 2-cochains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::exactfield::{Field, Ring, Scalar};

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("simplex has repeated vertices: {0:?}")]
    RepeatedVertex(Vec<Vertex>),
    #[error("face dimension {0} exceeds simplex dimension {1}")]
    FaceDimension(usize, usize),
    #[error("{0} is not a facet of {1}")]
    NotAFacet(Simplex, Simplex),
    #[error("{0} is not a pentachoron of the boundary of 123456")]
    NotBoundaryPentachoron(Simplex),
    #[error("a cluster needs between 1 and 5 distinct pentachora, got {0}")]
    ClusterSize(usize),
    #[error("tetrahedron {0} lies in {1} pentachora")]
    Branching(Simplex, usize),
    #[error("cochain is missing a value on {0}")]
    MissingValue(String),
}

/// A simplex given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the labels; repeated labels are rejected.
    pub fn new(mut vs: Vec<Vertex>) -> Result<Simplex, SimplicialError> {
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimplicialError::RepeatedVertex(vs));
        }
        Ok(Simplex(vs))
    }

    /// Panics unless `vs` is strictly increasing.
    pub fn from_sorted(vs: &[Vertex]) -> Simplex {
        assert!(
            vs.windows(2).all(|w| w[0] < w[1]),
            "vertices must increase: {vs:?}"
        );
        Simplex(vs.to_vec())
    }

    /// Parse a compact label such as `12345`.
    pub fn parse_digits(s: &str) -> Result<Simplex, SimplicialError> {
        Simplex::new(s.chars().filter_map(|c| c.to_digit(10)).collect())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Position and label of the vertex of `self` missing from the facet `t`.
    pub fn omitted(&self, t: &Simplex) -> Option<(usize, Vertex)> {
        if t.0.len() + 1 != self.0.len() || !self.contains(t) {
            return None;
        }
        self.0
            .iter()
            .enumerate()
            .find(|(_, v)| !t.has_vertex(**v))
            .map(|(i, v)| (i, *v))
    }

    pub fn without(&self, v: Vertex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    /// All `d`-dimensional faces in lexicographic order.
    pub fn faces(&self, d: usize) -> Result<Vec<Simplex>, SimplicialError> {
        if d > self.dim() {
            return Err(SimplicialError::FaceDimension(d, self.dim()));
        }
        Ok(combinations(&self.0, d + 1)
            .into_iter()
            .map(Simplex)
            .collect())
    }

    pub fn label(&self) -> String {
        if self.0.iter().all(|&v| v < 10) {
            self.0.iter().map(|v| v.to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn combinations(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    fn go(
        items: &[Vertex],
        k: usize,
        start: usize,
        cur: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `faces(s, d)` as a free function.
pub fn faces(s: &Simplex, d: usize) -> Result<Vec<Simplex>, SimplicialError> {
    s.faces(d)
}

/// The 5-simplex 123456.
pub fn delta5() -> Simplex {
    Simplex::from_sorted(&[1, 2, 3, 4, 5, 6])
}

/// The six pentachora of ∂Δ⁵ in lexicographic order (12345, 12346, …, 23456).
pub fn boundary_pentachora() -> Vec<Simplex> {
    delta5().faces(4).expect("Δ⁵ has 4-faces")
}

/// The fifteen tetrahedra of Δ⁵ in lexicographic order.
pub fn all_tetrahedra() -> Vec<Simplex> {
    delta5().faces(3).expect("Δ⁵ has 3-faces")
}

/// The pentachoron of ∂Δ⁵ that omits vertex `v`.
pub fn pentachoron_omitting(v: Vertex) -> Simplex {
    delta5().without(v)
}

/// `(-1)^p`, p the 0-based position in `u` of the vertex omitted by the facet `t`.
pub fn orientation_sign(t: &Simplex, u: &Simplex) -> Result<i64, SimplicialError> {
    match u.omitted(t) {
        Some((p, _)) => Ok(if p % 2 == 0 { 1 } else { -1 }),
        None => Err(SimplicialError::NotAFacet(t.clone(), u.clone())),
    }
}

/// Orientation of a pentachoron of ∂Δ⁵ induced from 123456.
pub fn boundary_sign(u: &Simplex) -> i64 {
    orientation_sign(u, &delta5()).expect("pentachoron of the boundary")
}

/// A set of pentachora with its tetrahedra classified as inner or boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub pentachora: Vec<Simplex>,
    pub tetrahedra: Vec<Simplex>,
    pub inner: Vec<Simplex>,
    pub boundary: Vec<Simplex>,
    pub edges: Vec<Simplex>,
    pub vertices: Vec<Vertex>,
}

impl Cluster {
    /// Classify an arbitrary list of pentachora; tetrahedra in three or more are rejected.
    pub fn from_pentachora(pents: &[Simplex]) -> Result<Cluster, SimplicialError> {
        let pentachora: Vec<Simplex> = pents
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut count: BTreeMap<Simplex, usize> = BTreeMap::new();
        let mut edges = BTreeSet::new();
        let mut vertices = BTreeSet::new();
        for u in &pentachora {
            for t in u.faces(3)? {
                *count.entry(t).or_default() += 1;
            }
            edges.extend(u.faces(1)?);
            vertices.extend(u.vertices().iter().copied());
        }
        let mut inner = Vec::new();
        let mut boundary = Vec::new();
        for (t, &c) in &count {
            match c {
                1 => boundary.push(t.clone()),
                2 => inner.push(t.clone()),
                _ => return Err(SimplicialError::Branching(t.clone(), c)),
            }
        }
        Ok(Cluster {
            pentachora,
            tetrahedra: count.keys().cloned().collect(),
            inner,
            boundary,
            edges: edges.into_iter().collect(),
            vertices: vertices.into_iter().collect(),
        })
    }

    /// Pentachora of ∂Δ⁵ not in this cluster.
    pub fn complement(&self) -> Result<Cluster, SimplicialError> {
        let rest: Vec<Simplex> = boundary_pentachora()
            .into_iter()
            .filter(|u| !self.pentachora.contains(u))
            .collect();
        cluster_build(&rest)
    }

    /// Omitted vertices of the member pentachora (for ∂Δ⁵ clusters).
    pub fn omit_label(&self) -> String {
        let d = delta5();
        let mut om: Vec<Vertex> = self
            .pentachora
            .iter()
            .filter_map(|u| d.omitted(u).map(|x| x.1))
            .collect();
        om.sort_unstable_by(|a, b| b.cmp(a));
        om.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Cluster of pentachora of ∂Δ⁵ (1 to 5 of them).
pub fn cluster_build(chosen: &[Simplex]) -> Result<Cluster, SimplicialError> {
    let d = delta5();
    let distinct: BTreeSet<&Simplex> = chosen.iter().collect();
    if distinct.is_empty() || distinct.len() > 5 || distinct.len() != chosen.len() {
        return Err(SimplicialError::ClusterSize(chosen.len()));
    }
    for u in chosen {
        if d.omitted(u).is_none() {
            return Err(SimplicialError::NotBoundaryPentachoron(u.clone()));
        }
    }
    Cluster::from_pentachora(chosen)
}

/// Cluster given by omitted vertices, e.g. `[6, 5]` for {12345, 12346}.
pub fn cluster_from_omitted(omitted: &[Vertex]) -> Result<Cluster, SimplicialError> {
    let mut pents = Vec::new();
    for &v in omitted {
        if !(1..=6).contains(&v) {
            return Err(SimplicialError::NotBoundaryPentachoron(Simplex(vec![v])));
        }
        pents.push(pentachoron_omitting(v));
    }
    cluster_build(&pents)
}

/// All nonempty proper subsets of the six pentachora, ordered by size then lexicographically.
pub fn all_clusters() -> Vec<Cluster> {
    let pents = boundary_pentachora();
    let mut subsets: Vec<Vec<usize>> = (1u32..63)
        .map(|mask| (0..6).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then(a.cmp(b)));
    subsets
        .into_iter()
        .map(|s| {
            cluster_build(&s.iter().map(|&i| pents[i].clone()).collect::<Vec<_>>())
                .expect("valid cluster")
        })
        .collect()
}

/// The 31 unordered splittings {C, C̄} of ∂Δ⁵; C has at most three pentachora and
/// contains 12345 when it has exactly three.
pub fn all_splittings() -> Vec<(Cluster, Cluster)> {
    let first = boundary_pentachora()[0].clone();
    all_clusters()
        .into_iter()
        .filter(|c| {
            c.pentachora.len() < 3 || (c.pentachora.len() == 3 && c.pentachora.contains(&first))
        })
        .map(|c| {
            let comp = c.complement().expect("complement of a proper cluster");
            (c, comp)
        })
        .collect()
}

/// Simplicial 1-cochain: a value per edge `ij`, `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain1<R> {
    values: BTreeMap<(Vertex, Vertex), R>,
}

/// Simplicial 2-cochain: a value per triangle `ijk`, `i < j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain2<R> {
    values: BTreeMap<(Vertex, Vertex, Vertex), R>,
}

fn sort2(i: Vertex, j: Vertex) -> (Vertex, Vertex) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn sort3(i: Vertex, j: Vertex, k: Vertex) -> (Vertex, Vertex, Vertex) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

impl<R: Ring> Cochain1<R> {
    pub fn from_map(values: BTreeMap<(Vertex, Vertex), R>) -> Self {
        Cochain1 { values }
    }

    /// Value on the edge {i, j} (order-insensitive).
    pub fn get(&self, i: Vertex, j: Vertex) -> &R {
        self.values.get(&sort2(i, j)).expect("edge value")
    }

    pub fn try_get(&self, i: Vertex, j: Vertex) -> Option<&R> {
        self.values.get(&sort2(i, j))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Cochain1<S> {
        Cochain1 {
            values: self.values.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &R)> {
        self.values.iter()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let s: BTreeSet<Vertex> = self.values.keys().flat_map(|&(a, b)| [a, b]).collect();
        s.into_iter().collect()
    }
}

impl<R: Ring> Cochain2<R> {
    pub fn from_map(values: BTreeMap<(Vertex, Vertex, Vertex), R>) -> Self {
        Cochain2 { values }
    }

    /// Value on the triangle {i, j, k} (order-insensitive).
    pub fn get(&self, i: Vertex, j: Vertex, k: Vertex) -> &R {
        self.values.get(&sort3(i, j, k)).expect("triangle value")
    }

    pub fn try_get(&self, i: Vertex, j: Vertex, k: Vertex) -> Option<&R> {
        self.values.get(&sort3(i, j, k))
    }

    pub fn set(&mut self, i: Vertex, j: Vertex, k: Vertex, v: R) {
        self.values.insert(sort3(i, j, k), v);
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Cochain2<S> {
        Cochain2 {
            values: self.values.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vertex, Vertex, Vertex), &R)> {
        self.values.iter()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let s: BTreeSet<Vertex> = self
            .values
            .keys()
            .flat_map(|&(a, b, c)| [a, b, c])
            .collect();
        s.into_iter().collect()
    }
}

/// Independent nonzero samples on every edge spanned by `vertices`.
pub fn random_cochain1(field: &Field, vertices: &[Vertex], rng: &mut impl Rng) -> Cochain1<Scalar> {
    let mut values = BTreeMap::new();
    for e in combinations(vertices, 2) {
        values.insert((e[0], e[1]), field.sample_nonzero(rng));
    }
    Cochain1 { values }
}

/// ω_ijk = b_ij − b_ik + b_jk on every triangle spanned by the edges of `b`.
pub fn delta1<R: Ring>(b: &Cochain1<R>) -> Cochain2<R> {
    let vs = b.vertices();
    let mut values = BTreeMap::new();
    for t in combinations(&vs, 3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        if let (Some(ij), Some(ik), Some(jk)) = (b.try_get(i, j), b.try_get(i, k), b.try_get(j, k))
        {
            values.insert((i, j, k), ij.clone() - ik.clone() + jk.clone());
        }
    }
    Cochain2 { values }
}

/// True iff ω_jkl − ω_ikl + ω_ijl − ω_ijk = 0 on every tetrahedron with all four faces defined.
pub fn cocycle_check<R: Ring>(w: &Cochain2<R>) -> bool {
    let vs = w.vertices();
    combinations(&vs, 4).into_iter().all(|t| {
        let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
        match (
            w.try_get(j, k, l),
            w.try_get(i, k, l),
            w.try_get(i, j, l),
            w.try_get(i, j, k),
        ) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                (a.clone() - b.clone() + c.clone() - d.clone()).is_zero()
            }
            _ => true,
        }
    })
}
