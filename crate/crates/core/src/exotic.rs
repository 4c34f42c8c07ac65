//! Exotic chain complexes built from η, ψ and φ, with exact homology.
//!
//! The single-pentachoron complex is
//! `0 → F⁵ (vertices) → F¹⁰ (edges) → F¹⁰ (colorings) → F¹⁰ (edges) → F⁵ (vertices) → 0`
//! and the general complex for a pentachoron list K is
//! `0 → F^V → F^E → F^(2T) → F^(5P) → 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::exactfield::{Ring, Scalar};
use crate::exactla::{kernel_basis, rank, Matrix, Subspace};
use crate::hexagon::{
    functional_matrix, functionals_generic, EtaParams, GammaParams, HexError, LOCAL_EDGES,
};
use crate::simplicial::{Simplex, SimplicialError, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExoticError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("differentials {0} and {1} do not compose to zero")]
    Composition(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("complex file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot read complex file: {0}")]
    Io(String),
    #[error(transparent)]
    Hex(#[from] HexError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A finite cochain-style sequence `0 → C₀ → C₁ → … → C_m → 0`; `maps[i]: C_i → C_{i+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    maps: Vec<Matrix<Scalar>>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix<Scalar>>) -> Result<Self, ExoticError> {
        if maps.len() + 1 != dims.len() {
            return Err(ExoticError::Shape(format!(
                "{} spaces need {} maps",
                dims.len(),
                dims.len() - 1
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.cols() != dims[i] || m.rows() != dims[i + 1] {
                return Err(ExoticError::Shape(format!(
                    "map {} is {}×{}, expected {}×{}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..maps.len() {
            if !maps[i].mul(&maps[i - 1]).is_zero() {
                return Err(ExoticError::Composition(i, i + 1));
            }
        }
        Ok(ChainComplex { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix<Scalar>] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(rank).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub kernel_dims: Vec<usize>,
    pub image_in_dims: Vec<usize>,
    pub homology_dims: Vec<usize>,
}

impl HomologyProfile {
    pub fn is_acyclic(&self) -> bool {
        self.homology_dims.iter().all(|&h| h == 0)
    }
}

pub fn homology_profile(c: &ChainComplex) -> HomologyProfile {
    let ranks = c.ranks();
    let n = c.dims.len();
    let kernel_dims: Vec<usize> = (0..n)
        .map(|i| {
            if i < ranks.len() {
                c.dims[i] - ranks[i]
            } else {
                c.dims[i]
            }
        })
        .collect();
    let image_in_dims: Vec<usize> = (0..n)
        .map(|i| if i == 0 { 0 } else { ranks[i - 1] })
        .collect();
    let homology_dims = kernel_dims
        .iter()
        .zip(&image_in_dims)
        .map(|(k, r)| k - r)
        .collect();
    HomologyProfile {
        kernel_dims,
        image_in_dims,
        homology_dims,
    }
}

pub fn euler_characteristic(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

fn first_nonzero_normalized(v: Vec<Scalar>) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let inv = p.try_inv().expect("nonzero field element");
            v.into_iter().map(|x| x * inv.clone()).collect()
        }
        None => v,
    }
}

fn one_dim_kernel(m: &Matrix<Scalar>, what: &str) -> Result<Vec<Scalar>, ExoticError> {
    let k = kernel_basis(m);
    if k.dim() != 1 {
        return Err(ExoticError::Degenerate(format!(
            "{what} has a {}-dimensional solution space",
            k.dim()
        )));
    }
    Ok(first_nonzero_normalized(k.basis_vectors().remove(0)))
}

/// The five-term complex of pentachoron `u` for generic γ.
pub fn pentachoron_complex(
    gamma: &GammaParams<Scalar>,
    u: &Simplex,
) -> Result<ChainComplex, ExoticError> {
    let funcs = functionals_generic(gamma, u)?;
    let tets = u.faces(3)?;
    let edges = u.faces(1)?;
    let verts = u.vertices().to_vec();
    let zero = gamma.get(verts[0], verts[1]).zero_like();
    let phi = functional_matrix(&funcs, &tets, &zero);

    let mut psi_cols = Vec::new();
    for e in &edges {
        let mut sys = phi.clone();
        for (n, t) in tets.iter().enumerate() {
            if !t.contains(e) {
                for q in 0..2 {
                    let mut row = vec![zero.clone(); 10];
                    row[2 * n + q] = zero.one_like();
                    sys = sys.vstack(&Matrix::from_rows(vec![row], 10, zero.clone()));
                }
            }
        }
        psi_cols.push(one_dim_kernel(&sys, &format!("edge vector of {e}"))?);
    }
    let psi = Matrix::from_cols(psi_cols.clone(), 10, zero.clone());

    let mut eta = Matrix::new(10, 5, zero.clone());
    for (c, &i) in verts.iter().enumerate() {
        let incident: Vec<usize> = (0..10).filter(|&n| edges[n].has_vertex(i)).collect();
        let m = Matrix::from_cols(
            incident.iter().map(|&n| psi_cols[n].clone()).collect(),
            10,
            zero.clone(),
        );
        let rel = one_dim_kernel(&m, &format!("edge-vector relation at vertex {i}"))?;
        for (&n, x) in incident.iter().zip(rel) {
            eta.set(n, c, x);
        }
    }

    let mut gam = Matrix::new(5, 10, zero.clone());
    for (n, e) in edges.iter().enumerate() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        let (ra, rb) = (
            u.position(a).expect("vertex"),
            u.position(b).expect("vertex"),
        );
        gam.set(ra, n, gamma.get(a, b).clone());
        gam.set(rb, n, gamma.get(b, a).clone());
    }
    ChainComplex::new(vec![5, 10, 10, 10, 5], vec![eta, psi, phi, gam])
}

/// The general complex together with the data it was assembled from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralComplex {
    pub complex: ChainComplex,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Simplex>,
    pub tetrahedra: Vec<Simplex>,
    pub pentachora: Vec<Simplex>,
    /// 2×6 ψ block per tetrahedron, columns in local edge order.
    pub blocks: BTreeMap<Simplex, Matrix<Scalar>>,
    /// Dimension of the span of edge-vector restrictions to each pentachoron.
    pub span_dims: Vec<usize>,
}

/// The 6×4 η-relation matrix of tetrahedron `t`: entry η_ab at (edge ab, vertex a).
pub fn eta_relation_matrix(eta: &EtaParams<Scalar>, t: &Simplex) -> Matrix<Scalar> {
    let v = t.vertices();
    let zero = eta.get(v[0], v[1]).zero_like();
    let mut m = Matrix::new(6, 4, zero);
    for (r, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
        m.set(r, a, eta.get(v[a], v[b]).clone());
        m.set(r, b, eta.get(v[b], v[a]).clone());
    }
    m
}

pub fn general_complex(
    k: &[Simplex],
    eta: &EtaParams<Scalar>,
) -> Result<GeneralComplex, ExoticError> {
    let pentachora: Vec<Simplex> = k
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if pentachora.is_empty() {
        return Err(ExoticError::Shape("empty pentachoron list".into()));
    }
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    let mut ts = BTreeSet::new();
    for u in &pentachora {
        if u.dim() != 4 {
            return Err(ExoticError::Shape(format!("{u} is not a pentachoron")));
        }
        vs.extend(u.vertices().iter().copied());
        es.extend(u.faces(1)?);
        ts.extend(u.faces(3)?);
    }
    let vertices: Vec<Vertex> = vs.into_iter().collect();
    let edges: Vec<Simplex> = es.into_iter().collect();
    let tetrahedra: Vec<Simplex> = ts.into_iter().collect();
    let zero = eta.get(vertices[0], vertices[1]).zero_like();

    let mut eta_map = Matrix::new(edges.len(), vertices.len(), zero.clone());
    for (n, e) in edges.iter().enumerate() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        eta_map.set(
            n,
            vertices.binary_search(&a).expect("vertex"),
            eta.get(a, b).clone(),
        );
        eta_map.set(
            n,
            vertices.binary_search(&b).expect("vertex"),
            eta.get(b, a).clone(),
        );
    }

    let mut blocks = BTreeMap::new();
    let mut psi = Matrix::new(2 * tetrahedra.len(), edges.len(), zero.clone());
    for (tn, t) in tetrahedra.iter().enumerate() {
        let rel = eta_relation_matrix(eta, t);
        if rank(&rel) < 4 {
            return Err(ExoticError::Degenerate(format!(
                "η-relation matrix of {t} has rank < 4"
            )));
        }
        let block = kernel_basis(&rel.transpose()).basis().clone();
        let v = t.vertices();
        for (c, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            let e = Simplex::from_sorted(&[v[a], v[b]]);
            let en = edges.binary_search(&e).expect("edge");
            psi.set(2 * tn, en, block.get(0, c).clone());
            psi.set(2 * tn + 1, en, block.get(1, c).clone());
        }
        blocks.insert(t.clone(), block);
    }

    let mut phi_rows = Vec::new();
    let mut span_dims = Vec::new();
    for u in &pentachora {
        let cols: Vec<usize> = u
            .faces(3)?
            .iter()
            .flat_map(|t| {
                let n = tetrahedra.binary_search(t).expect("tetrahedron");
                [2 * n, 2 * n + 1]
            })
            .collect();
        let edge_idx: Vec<usize> = u
            .faces(1)?
            .iter()
            .map(|e| edges.binary_search(e).expect("edge"))
            .collect();
        let restricted = psi.select_cols(&edge_idx).select_rows(&cols);
        let span = Subspace::column_space(&restricted);
        span_dims.push(span.dim());
        for row in span.annihilator().basis_vectors() {
            let mut full = vec![zero.clone(); 2 * tetrahedra.len()];
            for (&c, x) in cols.iter().zip(row) {
                full[c] = x;
            }
            phi_rows.push(full);
        }
    }
    let phi = Matrix::from_rows(phi_rows, 2 * tetrahedra.len(), zero);
    let dims = vec![
        vertices.len(),
        edges.len(),
        2 * tetrahedra.len(),
        phi.rows(),
    ];
    let complex = ChainComplex::new(dims, vec![eta_map, psi, phi])?;
    Ok(GeneralComplex {
        complex,
        vertices,
        edges,
        tetrahedra,
        pentachora,
        blocks,
        span_dims,
    })
}

/// One pentachoron per line as five whitespace-separated vertex labels; blank lines and `#` comments skipped.
pub fn parse_complex(text: &str) -> Result<Vec<Simplex>, ExoticError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ExoticError::Parse { line: n + 1, msg };
        let vs = line
            .split_whitespace()
            .map(|w| {
                w.parse::<Vertex>()
                    .map_err(|e| err(format!("bad vertex label {w:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vs.len() != 5 {
            return Err(err(format!("expected 5 vertices, found {}", vs.len())));
        }
        out.push(Simplex::new(vs).map_err(|e| err(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(ExoticError::Parse {
            line: 0,
            msg: "no pentachora".into(),
        });
    }
    Ok(out)
}

pub fn read_complex_file(path: &Path) -> Result<Vec<Simplex>, ExoticError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ExoticError::Io(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rng_from_seed, Field, DEFAULT_PRIME};
    use crate::hexagon::DELTA5_VERTICES;
    use crate::simplicial::boundary_pentachora;

    fn s(x: &str) -> Simplex {
        Simplex::parse_digits(x).unwrap()
    }

    #[test]
    fn five_term_complex_is_acyclic() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let g = GammaParams::random(&f, &DELTA5_VERTICES, &mut rng_from_seed(3));
        let c = pentachoron_complex(&g, &s("12345")).unwrap();
        assert_eq!(c.dims(), &[5, 10, 10, 10, 5]);
        assert_eq!(c.ranks(), vec![5, 5, 5, 5]);
        let h = homology_profile(&c);
        assert!(h.is_acyclic());
        assert_eq!(euler_characteristic(c.dims()), 0);
    }

    #[test]
    fn zero_differentials_give_ambient_homology() {
        let f = Field::prime(7).unwrap();
        let c = ChainComplex::new(vec![2, 3], vec![Matrix::new(3, 2, f.zero())]).unwrap();
        assert_eq!(homology_profile(&c).homology_dims, vec![2, 3]);
    }

    #[test]
    fn composition_is_checked() {
        let f = Field::prime(7).unwrap();
        let id = Matrix::identity(1, f.zero());
        assert_eq!(
            ChainComplex::new(vec![1, 1, 1], vec![id.clone(), id]),
            Err(ExoticError::Composition(1, 2))
        );
    }

    #[test]
    fn general_complex_on_boundary() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let eta = EtaParams::random(&f, &DELTA5_VERTICES, &mut rng_from_seed(9));
        let g = general_complex(&boundary_pentachora(), &eta).unwrap();
        assert_eq!(g.span_dims, vec![5; 6]);
        assert_eq!(g.complex.dims(), &[6, 15, 30, 30]);
        for b in g.blocks.values() {
            assert_eq!(rank(b), 2);
        }
        let h = homology_profile(&g.complex);
        let hx: i64 = h
            .homology_dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        assert_eq!(hx, euler_characteristic(g.complex.dims()));
    }

    #[test]
    fn general_complex_on_one_pentachoron_matches_truncation() {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let eta = EtaParams::random(&f, &DELTA5_VERTICES, &mut rng_from_seed(9));
        let g = general_complex(&[s("12345")], &eta).unwrap();
        assert_eq!(g.complex.dims(), &[5, 10, 10, 5]);
        let gamma = GammaParams::random(&f, &DELTA5_VERTICES, &mut rng_from_seed(9));
        let five = homology_profile(&pentachoron_complex(&gamma, &s("12345")).unwrap());
        let four = homology_profile(&g.complex);
        assert_eq!(four.homology_dims[..3], five.homology_dims[..3]);
        assert_eq!(four.homology_dims[3], 0);
    }

    #[test]
    fn parse_examples() {
        let k = parse_complex("1 2 3 4 5\n# c\n\n6 5 4 3 2\n").unwrap();
        assert_eq!(k, vec![s("12345"), s("23456")]);
        assert!(matches!(
            parse_complex("1 2 3 4\n"),
            Err(ExoticError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_complex("1 2 3 4 x"),
            Err(ExoticError::Parse { .. })
        ));
        assert!(parse_complex("1 1 2 3 4").is_err());
        assert!(parse_complex("").is_err());
    }
}
