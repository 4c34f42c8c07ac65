//! Edge functionals, edge vectors, permitted-coloring spaces and the full
//! hexagon check on ∂Δ⁵.
//!
//! A coloring of a set of tetrahedra is a vector with two coordinates
//! `(x_t, y_t)` per tetrahedron, tetrahedra in lexicographic order.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::exactfield::{Field, Ring, Scalar, Series};
use crate::exactla::{kernel_basis, LaError, Matrix, Subspace};
use crate::simplicial::{
    all_splittings, all_tetrahedra, boundary_pentachora, boundary_sign, delta1, orientation_sign,
    random_cochain1, Cluster, Cochain1, Cochain2, Simplex, SimplicialError, Vertex,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HexError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("edge {edge} keeps a nonzero component on inner tetrahedron {tet}")]
    InnerResidue { edge: Simplex, tet: Simplex },
    #[error("finite-o functional on {0} has a nonzero o⁰ term")]
    NonvanishingLeading(Simplex),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    La(#[from] LaError),
}

/// Expected inner degrees of freedom a_1..a_5.
pub const FIBER_TABLE: [usize; 5] = [0, 0, 0, 1, 4];

/// Local edge order inside a tetrahedron: 12, 13, 14, 23, 24, 34.
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Coefficients attached to ordered vertex pairs (γ_ij or η_ij), γ_ij and γ_ji independent.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaParams<R> {
    values: BTreeMap<(Vertex, Vertex), R>,
}

pub type EtaParams<R> = GammaParams<R>;

impl<R: Ring> GammaParams<R> {
    pub fn from_fn(vertices: &[Vertex], f: impl Fn(Vertex, Vertex) -> R) -> Self {
        let mut values = BTreeMap::new();
        for &i in vertices {
            for &j in vertices {
                if i != j {
                    values.insert((i, j), f(i, j));
                }
            }
        }
        GammaParams { values }
    }

    pub fn get(&self, i: Vertex, j: Vertex) -> &R {
        self.values
            .get(&(i, j))
            .expect("coefficient for ordered pair")
    }
}

impl GammaParams<Scalar> {
    pub fn random(field: &Field, vertices: &[Vertex], rng: &mut impl Rng) -> Self {
        let mut values = BTreeMap::new();
        for &i in vertices {
            for &j in vertices {
                if i != j {
                    values.insert((i, j), field.sample_nonzero(rng));
                }
            }
        }
        GammaParams { values }
    }
}

/// Linear functional on colorings, supported on the tetrahedra containing `edge`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunctional<R> {
    pub edge: Simplex,
    pub comps: Vec<(Simplex, [R; 2])>,
}

/// Coloring supported on the tetrahedra containing `edge`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeVector<R> {
    pub edge: Simplex,
    pub comps: Vec<(Simplex, [R; 2])>,
}

impl<R: Ring> EdgeFunctional<R> {
    pub fn component(&self, t: &Simplex) -> Option<&[R; 2]> {
        self.comps.iter().find(|(s, _)| s == t).map(|(_, c)| c)
    }

    /// Dense row over the coloring space of `tets`.
    pub fn row(&self, tets: &[Simplex], zero: &R) -> Vec<R> {
        dense(&self.comps, tets, zero)
    }
}

impl<R: Ring> EdgeVector<R> {
    pub fn column(&self, tets: &[Simplex], zero: &R) -> Vec<R> {
        dense(&self.comps, tets, zero)
    }
}

fn dense<R: Ring>(comps: &[(Simplex, [R; 2])], tets: &[Simplex], zero: &R) -> Vec<R> {
    let mut v = vec![zero.clone(); 2 * tets.len()];
    for (t, c) in comps {
        if let Ok(n) = tets.binary_search(t) {
            v[2 * n] = c[0].clone();
            v[2 * n + 1] = c[1].clone();
        }
    }
    v
}

/// Stack functionals as rows over the coloring space of `tets`.
pub fn functional_matrix<R: Ring>(
    funcs: &[EdgeFunctional<R>],
    tets: &[Simplex],
    zero: &R,
) -> Matrix<R> {
    Matrix::from_rows(
        funcs.iter().map(|f| f.row(tets, zero)).collect(),
        2 * tets.len(),
        zero.clone(),
    )
}

/// Edge vectors as columns over the coloring space of `tets`.
pub fn vector_matrix<R: Ring>(vecs: &[EdgeVector<R>], tets: &[Simplex], zero: &R) -> Matrix<R> {
    Matrix::from_cols(
        vecs.iter().map(|v| v.column(tets, zero)).collect(),
        2 * tets.len(),
        zero.clone(),
    )
}

// ------------------------------------------------------------ φ-columns

/// The explicit φ-column of a tetrahedron; `g(a, b)` is γ between local vertices a, b ∈ 1..=4.
pub fn phi_column_generic<R: Ring>(g: impl Fn(usize, usize) -> R) -> [[R; 2]; 6] {
    let a = g(2, 4) * g(3, 2) * g(4, 3) + g(2, 3) * g(3, 4) * g(4, 2);
    let b = g(1, 4) * g(3, 1) * g(4, 3) + g(1, 3) * g(3, 4) * g(4, 1);
    let c = g(1, 3) * g(2, 1) * g(3, 2) + g(1, 2) * g(2, 3) * g(3, 1);
    let zero = a.zero_like();
    [
        [zero.clone(), -(g(1, 3) * a.clone())],
        [g(1, 4) * a.clone(), g(1, 2) * a.clone()],
        [-(g(1, 3) * a), zero],
        [
            -(g(2, 4) * b.clone()),
            g(1, 3) * g(2, 1) * g(3, 4) * g(4, 2) - g(1, 2) * g(2, 4) * g(3, 1) * g(4, 3),
        ],
        [g(2, 3) * b, c.clone() * g(4, 3)],
        [
            g(1, 3) * g(2, 4) * g(3, 2) * g(4, 1) - g(1, 4) * g(2, 3) * g(3, 1) * g(4, 2),
            -(c * g(4, 2)),
        ],
    ]
}

/// Positions of the φ-column that vanish identically.
const STRUCTURAL_ZEROS: [(usize, usize); 2] = [(0, 0), (2, 1)];

/// The infinitesimal φ-column of `t = ijkl` (unsigned).
pub fn phi_column_infinitesimal<R: Ring>(w: &Cochain2<R>, t: &Simplex) -> [[R; 2]; 6] {
    let [w123, w124, w134, w234] = local_omegas(w, t);
    let zero = w123.zero_like();
    [
        [w234.clone() - w134.clone(), zero.clone()],
        [w124.clone(), w234.clone()],
        [-w123.clone(), -w234],
        [-w124.clone(), -w134.clone()],
        [w123.clone(), w134],
        [zero, w123 - w124],
    ]
}

/// Requires every entry of the infinitesimal φ-column of every tetrahedron, other than the two structural zeros, to be nonzero.
pub fn infinitesimal_genericity<R: Ring>(
    w: &Cochain2<R>,
    tets: &[Simplex],
) -> Result<(), HexError> {
    for t in tets {
        let col = phi_column_infinitesimal(w, t);
        for (r, row) in col.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                if x.is_zero() && (r, q) != (0, 1) && (r, q) != (5, 0) {
                    return Err(HexError::Degenerate(format!(
                        "infinitesimal entry ({}, {}) vanishes on {t}",
                        r + 1,
                        q + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// ω on the faces 123, 124, 134, 234 of `t` under 1..4 ↦ t.
pub fn local_omegas<R: Ring>(w: &Cochain2<R>, t: &Simplex) -> [R; 4] {
    let v = t.vertices();
    [
        w.get(v[0], v[1], v[2]).clone(),
        w.get(v[0], v[1], v[3]).clone(),
        w.get(v[0], v[2], v[3]).clone(),
        w.get(v[1], v[2], v[3]).clone(),
    ]
}

/// The infinitesimal edge-vector columns ψ_12 … ψ_34 of `t` (unsigned).
pub fn psi_column_infinitesimal<R: Ring>(
    w: &Cochain2<R>,
    t: &Simplex,
) -> Result<[[R; 2]; 6], HexError> {
    let [w123, w124, w134, w234] = local_omegas(w, t);
    let d = w134.clone() - w234.clone();
    let inv = |x: &R, what: &str| {
        x.try_inv()
            .ok_or_else(|| HexError::Degenerate(format!("{what} vanishes on {t}")))
    };
    let i123 = inv(&w123, "ω_ijk")?;
    let i124 = inv(&w124, "ω_ijl")?;
    let i134 = inv(&w134, "ω_ikl")?;
    let i234 = inv(&w234, "ω_jkl")?;
    let id = inv(&d, "ω_ikl − ω_jkl")?;
    let zero = w123.zero_like();
    Ok([
        [i123.clone() * i124.clone(), zero.clone()],
        [-(i123.clone() * id.clone()), i134.clone() * id.clone()],
        [i124.clone() * id.clone(), -(i134.clone() * id.clone())],
        [i123 * id.clone(), -(id.clone() * i234.clone())],
        [-(i124 * id.clone()), id * i234.clone()],
        [zero, -(i134 * i234)],
    ])
}

/// Finite-o φ-column with γ_ij = −1 + o·b_ij (i < j), 1 + o·b_ji (i > j), to order o².
pub fn phi_column_finite_o<R: Ring>(b: &Cochain1<R>, t: &Simplex) -> [[Series<R>; 2]; 6] {
    let v = t.vertices().to_vec();
    phi_column_generic(|x, y| {
        let (i, j) = (v[x - 1], v[y - 1]);
        let bij = b.get(i, j).clone();
        let sign = if i < j { -1 } else { 1 };
        Series::linear(bij.int_like(sign), bij, 3)
    })
}

/// The o¹ and o² coefficients of the finite-o φ-column as 6×2 matrices.
pub fn finite_o_coefficients<R: Ring>(
    b: &Cochain1<R>,
    t: &Simplex,
) -> Result<(Matrix<R>, Matrix<R>), HexError> {
    let col = phi_column_finite_o(b, t);
    let zero = col[0][0].coeff(0).zero_like();
    let mut c1 = Matrix::new(6, 2, zero.clone());
    let mut c2 = Matrix::new(6, 2, zero);
    for (r, row) in col.iter().enumerate() {
        for (q, s) in row.iter().enumerate() {
            if !s.coeff(0).is_zero() {
                return Err(HexError::NonvanishingLeading(t.clone()));
            }
            c1.set(r, q, s.coeff(1).clone());
            c2.set(r, q, s.coeff(2).clone());
        }
    }
    Ok((c1, c2))
}

fn assemble<R: Ring>(u: &Simplex, per_tet: Vec<(Simplex, [[R; 2]; 6])>) -> Vec<EdgeFunctional<R>> {
    u.faces(1)
        .expect("edges")
        .into_iter()
        .map(|e| {
            let comps = per_tet
                .iter()
                .filter(|(t, _)| t.contains(&e))
                .map(|(t, col)| {
                    let v = t.vertices();
                    let r = LOCAL_EDGES
                        .iter()
                        .position(|&(a, b)| v[a] == e.vertices()[0] && v[b] == e.vertices()[1])
                        .expect("edge of tetrahedron");
                    (t.clone(), col[r].clone())
                })
                .collect();
            EdgeFunctional { edge: e, comps }
        })
        .collect()
}

fn signed<R: Ring>(col: [[R; 2]; 6], s: i64) -> [[R; 2]; 6] {
    if s == 1 {
        col
    } else {
        col.map(|[a, b]| [-a, -b])
    }
}

/// Edge functionals of pentachoron `u` from generic γ, signed by orientation.
pub fn functionals_generic<R: Ring>(
    gamma: &GammaParams<R>,
    u: &Simplex,
) -> Result<Vec<EdgeFunctional<R>>, HexError> {
    let mut per_tet = Vec::new();
    for t in u.faces(3)? {
        let v = t.vertices().to_vec();
        let col = phi_column_generic(|a, b| gamma.get(v[a - 1], v[b - 1]).clone());
        for (r, row) in col.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                if x.is_zero() && !STRUCTURAL_ZEROS.contains(&(r, q)) {
                    return Err(HexError::Degenerate(format!(
                        "φ-column entry ({}, {}) vanishes on {t}",
                        r + 1,
                        q + 1
                    )));
                }
            }
        }
        per_tet.push((t.clone(), signed(col, orientation_sign(&t, u)?)));
    }
    Ok(assemble(u, per_tet))
}

/// Edge functionals of pentachoron `u` from the infinitesimal table, signed by orientation.
pub fn functionals_infinitesimal<R: Ring>(
    w: &Cochain2<R>,
    u: &Simplex,
) -> Result<Vec<EdgeFunctional<R>>, HexError> {
    let mut per_tet = Vec::new();
    for t in u.faces(3)? {
        let col = phi_column_infinitesimal(w, &t);
        per_tet.push((t.clone(), signed(col, orientation_sign(&t, u)?)));
    }
    Ok(assemble(u, per_tet))
}

/// Edge functionals of `u` from per-tetrahedron blocks (rows in local edge order), signed by orientation.
pub fn functionals_from_blocks<R: Ring>(
    blocks: &BTreeMap<Simplex, Matrix<R>>,
    u: &Simplex,
) -> Result<Vec<EdgeFunctional<R>>, HexError> {
    let mut per_tet = Vec::new();
    for t in u.faces(3)? {
        let m = &blocks[&t];
        let col: [[R; 2]; 6] = std::array::from_fn(|r| [m.get(r, 0).clone(), m.get(r, 1).clone()]);
        per_tet.push((t.clone(), signed(col, orientation_sign(&t, u)?)));
    }
    Ok(assemble(u, per_tet))
}

/// The infinitesimal edge vectors of pentachoron `u` (no orientation signs).
pub fn edge_vectors_infinitesimal<R: Ring>(
    w: &Cochain2<R>,
    u: &Simplex,
) -> Result<Vec<EdgeVector<R>>, HexError> {
    let mut per_tet = Vec::new();
    for t in u.faces(3)? {
        per_tet.push((t.clone(), psi_column_infinitesimal(w, &t)?));
    }
    Ok(assemble(u, per_tet)
        .into_iter()
        .map(|f| EdgeVector {
            edge: f.edge,
            comps: f.comps,
        })
        .collect())
}

/// Checks Ψ_t = (ω_jkl − ω_ikl)⁻¹ · diag((ω_ijk ω_ijl)⁻¹, −(ω_ikl ω_jkl)⁻¹) · Φ_tᵀ entrywise.
pub fn psi_phi_identity<R: Ring>(w: &Cochain2<R>, t: &Simplex) -> Result<bool, HexError> {
    let psi = psi_column_infinitesimal(w, t)?;
    let phi = phi_column_infinitesimal(w, t);
    let [w123, w124, w134, w234] = local_omegas(w, t);
    let pre = (w234 - w134.clone())
        .try_inv()
        .ok_or_else(|| HexError::Degenerate(format!("ω_jkl = ω_ikl on {t}")))?;
    let d0 = pre.clone() * (w123 * w124).try_inv().expect("checked by ψ");
    let d1 = -(pre
        * (w134 * local_omegas(w, t)[3].clone())
            .try_inv()
            .expect("checked by ψ"));
    Ok((0..6).all(|e| {
        psi[e][0] == d0.clone() * phi[e][0].clone() && psi[e][1] == d1.clone() * phi[e][1].clone()
    }))
}

/// V_u: the common kernel of the functionals, over the coloring space of the five tetrahedra of `u`.
pub fn permitted_space<R: Ring>(
    u: &Simplex,
    funcs: &[EdgeFunctional<R>],
) -> Result<Subspace<R>, HexError> {
    let tets = u.faces(3)?;
    let zero = funcs
        .iter()
        .flat_map(|f| f.comps.iter())
        .map(|(_, c)| c[0].zero_like())
        .next()
        .ok_or_else(|| HexError::Degenerate("no functionals".into()))?;
    Ok(kernel_basis(&functional_matrix(funcs, &tets, &zero)))
}

// ------------------------------------------------------------- families

/// Parameters of one of the two coloring families on the vertex set 1..6.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Generic(GammaParams<Scalar>),
    Infinitesimal {
        b: Cochain1<Scalar>,
        omega: Cochain2<Scalar>,
    },
}

pub const DELTA5_VERTICES: [Vertex; 6] = [1, 2, 3, 4, 5, 6];

impl Family {
    pub fn random_generic(field: &Field, rng: &mut impl Rng) -> Family {
        Family::Generic(GammaParams::random(field, &DELTA5_VERTICES, rng))
    }

    pub fn random_infinitesimal(field: &Field, rng: &mut impl Rng) -> Family {
        let b = random_cochain1(field, &DELTA5_VERTICES, rng);
        let omega = delta1(&b);
        Family::Infinitesimal { b, omega }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Generic(_) => "generic",
            Family::Infinitesimal { .. } => "infinitesimal",
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Family::Generic(g) => g.get(1, 2).zero_like(),
            Family::Infinitesimal { b, .. } => b.get(1, 2).zero_like(),
        }
    }

    pub fn functionals(&self, u: &Simplex) -> Result<Vec<EdgeFunctional<Scalar>>, HexError> {
        match self {
            Family::Generic(g) => functionals_generic(g, u),
            Family::Infinitesimal { omega, .. } => functionals_infinitesimal(omega, u),
        }
    }

    /// Certificate that the sampled parameters avoid the vanishing of required quantities.
    pub fn genericity(&self) -> Result<(), HexError> {
        match self {
            Family::Generic(_) => boundary_pentachora()
                .iter()
                .try_for_each(|u| self.functionals(u).map(|_| ())),
            Family::Infinitesimal { omega, .. } => {
                infinitesimal_genericity(omega, &all_tetrahedra())
            }
        }
    }

    /// Coefficient of the vertex relation Σ_j c_ij φ_ij = 0: γ_ij, or ∓1 in the infinitesimal limit.
    pub fn relation_coeff(&self, i: Vertex, j: Vertex) -> Scalar {
        match self {
            Family::Generic(g) => g.get(i, j).clone(),
            Family::Infinitesimal { b, .. } => b.get(i, j).int_like(if i < j { -1 } else { 1 }),
        }
    }

    /// Functionals of all six pentachora of ∂Δ⁵.
    pub fn all_functionals(
        &self,
    ) -> Result<BTreeMap<Simplex, Vec<EdgeFunctional<Scalar>>>, HexError> {
        boundary_pentachora()
            .into_iter()
            .map(|u| Ok((u.clone(), self.functionals(&u)?)))
            .collect()
    }
}

/// Sum of vertex relations: for each vertex i of `u`, Σ_j c_ij φ_ij.
pub fn vertex_relation_residues(
    family: &Family,
    u: &Simplex,
    funcs: &[EdgeFunctional<Scalar>],
) -> Result<Vec<Vec<Scalar>>, HexError> {
    let tets = u.faces(3)?;
    let zero = family.zero();
    Ok(u.vertices()
        .iter()
        .map(|&i| {
            let mut acc = vec![zero.clone(); 2 * tets.len()];
            for f in funcs.iter().filter(|f| f.edge.has_vertex(i)) {
                let j = *f
                    .edge
                    .vertices()
                    .iter()
                    .find(|&&x| x != i)
                    .expect("other end");
                let c = family.relation_coeff(i, j);
                for (a, x) in acc.iter_mut().zip(f.row(&tets, &zero)) {
                    *a = a.clone() + c.clone() * x;
                }
            }
            acc
        })
        .collect())
}

// ------------------------------------------------------------- clusters

/// Permitted colorings of a cluster and their restriction to its boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSpace {
    pub v_c: Subspace<Scalar>,
    pub boundary_restriction: Subspace<Scalar>,
    pub fiber_dim: usize,
}

pub fn cluster_space(
    cluster: &Cluster,
    funcs: &BTreeMap<Simplex, Vec<EdgeFunctional<Scalar>>>,
    zero: &Scalar,
) -> Result<ClusterSpace, HexError> {
    let tets = &cluster.tetrahedra;
    let mut m = Matrix::new(0, 2 * tets.len(), zero.clone());
    for u in &cluster.pentachora {
        m = m.vstack(&functional_matrix(&funcs[u], tets, zero));
    }
    let v_c = kernel_basis(&m);
    let cols: Vec<usize> = cluster
        .boundary
        .iter()
        .flat_map(|t| {
            let n = tets.binary_search(t).expect("boundary tetrahedron");
            [2 * n, 2 * n + 1]
        })
        .collect();
    let restricted = v_c.basis().select_cols(&cols);
    let boundary_restriction = Subspace::row_space(&restricted);
    let fiber_dim = v_c.dim() - boundary_restriction.dim();
    Ok(ClusterSpace {
        v_c,
        boundary_restriction,
        fiber_dim,
    })
}

/// φ^boundary_ij = Σ_{u ⊇ ij} σ_u φ_ij^(u), σ_u the orientation of u induced from 123456.
/// Components on inner tetrahedra must cancel exactly.
pub fn boundary_functionals(
    cluster: &Cluster,
    funcs: &BTreeMap<Simplex, Vec<EdgeFunctional<Scalar>>>,
) -> Result<Vec<EdgeFunctional<Scalar>>, HexError> {
    let mut out = Vec::new();
    for e in &cluster.edges {
        let mut acc: BTreeMap<Simplex, [Scalar; 2]> = BTreeMap::new();
        for u in cluster.pentachora.iter().filter(|u| u.contains(e)) {
            let s = boundary_sign(u);
            let f = funcs[u]
                .iter()
                .find(|f| &f.edge == e)
                .expect("functional of edge");
            for (t, c) in &f.comps {
                let c = if s == 1 {
                    c.clone()
                } else {
                    [-c[0].clone(), -c[1].clone()]
                };
                let entry = acc
                    .entry(t.clone())
                    .or_insert_with(|| [c[0].zero_like(), c[0].zero_like()]);
                entry[0] = entry[0].clone() + c[0].clone();
                entry[1] = entry[1].clone() + c[1].clone();
            }
        }
        for t in &cluster.inner {
            if let Some(c) = acc.get(t) {
                if !c[0].is_zero() || !c[1].is_zero() {
                    return Err(HexError::InnerResidue {
                        edge: e.clone(),
                        tet: t.clone(),
                    });
                }
            }
        }
        let comps = acc
            .into_iter()
            .filter(|(t, _)| cluster.boundary.contains(t))
            .collect();
        out.push(EdgeFunctional {
            edge: e.clone(),
            comps,
        });
    }
    Ok(out)
}

/// Kernel of the boundary functionals over the boundary colorings of `cluster`.
pub fn boundary_permitted_space(
    cluster: &Cluster,
    bfuncs: &[EdgeFunctional<Scalar>],
    zero: &Scalar,
) -> Subspace<Scalar> {
    kernel_basis(&functional_matrix(bfuncs, &cluster.boundary, zero))
}

/// Boundary vertex relations Σ_j c_ij φ^boundary_ij, one dense residue per vertex.
pub fn boundary_vertex_residues(
    family: &Family,
    cluster: &Cluster,
    bfuncs: &[EdgeFunctional<Scalar>],
) -> Vec<Vec<Scalar>> {
    let zero = family.zero();
    cluster
        .vertices
        .iter()
        .map(|&i| {
            let mut acc = vec![zero.clone(); 2 * cluster.boundary.len()];
            for f in bfuncs.iter().filter(|f| f.edge.has_vertex(i)) {
                let j = *f
                    .edge
                    .vertices()
                    .iter()
                    .find(|&&x| x != i)
                    .expect("other end");
                let c = family.relation_coeff(i, j);
                for (a, x) in acc.iter_mut().zip(f.row(&cluster.boundary, &zero)) {
                    *a = a.clone() + c.clone() * x;
                }
            }
            acc
        })
        .collect()
}

// ----------------------------------------------------------- full hexagon

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingRecord {
    pub k: usize,
    pub cluster: String,
    pub complement: String,
    pub boundary_dim: usize,
    pub complement_boundary_dim: usize,
    pub equal: bool,
    pub fiber: usize,
    pub complement_fiber: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonReport {
    pub family: String,
    pub pentachoron_dims: Vec<usize>,
    pub splittings: Vec<SplittingRecord>,
    pub full_dim: usize,
    pub restrictions_match: bool,
    pub pass: bool,
}

/// Dimension of V_u for every pentachoron of ∂Δ⁵.
pub fn pentachoron_dims(
    funcs: &BTreeMap<Simplex, Vec<EdgeFunctional<Scalar>>>,
) -> Result<Vec<usize>, HexError> {
    funcs
        .iter()
        .map(|(u, f)| Ok(permitted_space(u, f)?.dim()))
        .collect()
}

/// Permitted colorings of the whole ∂Δ⁵ over its fifteen tetrahedra.
pub fn full_space(
    funcs: &BTreeMap<Simplex, Vec<EdgeFunctional<Scalar>>>,
    zero: &Scalar,
) -> Subspace<Scalar> {
    let tets = all_tetrahedra();
    let mut m = Matrix::new(0, 30, zero.clone());
    for f in funcs.values() {
        m = m.vstack(&functional_matrix(f, &tets, zero));
    }
    kernel_basis(&m)
}

/// Column indices of the tetrahedra of `u` inside the 30-dimensional coloring space of ∂Δ⁵.
pub fn restriction_columns(u: &Simplex) -> Vec<usize> {
    let tets = all_tetrahedra();
    u.faces(3)
        .expect("tetrahedra")
        .iter()
        .flat_map(|t| {
            let n = tets.binary_search(t).expect("tetrahedron of Δ⁵");
            [2 * n, 2 * n + 1]
        })
        .collect()
}

/// Conditions 1 and 2 on all 31 splittings, plus dim V_{∂Δ⁵} = 9.
pub fn full_hexagon_check(family: &Family) -> Result<HexagonReport, HexError> {
    let funcs = family.all_functionals()?;
    let zero = family.zero();
    let pentachoron_dims = pentachoron_dims(&funcs)?;
    let mut splittings = Vec::new();
    for (c, cbar) in all_splittings() {
        let a = cluster_space(&c, &funcs, &zero)?;
        let b = cluster_space(&cbar, &funcs, &zero)?;
        let k = c.pentachora.len();
        let equal = a.boundary_restriction == b.boundary_restriction;
        let pass = equal && a.fiber_dim == FIBER_TABLE[k - 1] && b.fiber_dim == FIBER_TABLE[5 - k];
        splittings.push(SplittingRecord {
            k,
            cluster: c.omit_label(),
            complement: cbar.omit_label(),
            boundary_dim: a.boundary_restriction.dim(),
            complement_boundary_dim: b.boundary_restriction.dim(),
            equal,
            fiber: a.fiber_dim,
            complement_fiber: b.fiber_dim,
            pass,
        });
    }
    let full = full_space(&funcs, &zero);
    let mut restrictions_match = true;
    for (u, f) in &funcs {
        let vu = permitted_space(u, f)?;
        let img = Subspace::row_space(&full.basis().select_cols(&restriction_columns(u)));
        restrictions_match &= img == vu;
    }
    let pass = splittings.iter().all(|s| s.pass) && full.dim() == 9 && restrictions_match;
    Ok(HexagonReport {
        family: family.name().to_string(),
        pentachoron_dims,
        splittings,
        full_dim: full.dim(),
        restrictions_match,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rng_from_seed, DEFAULT_PRIME};
    use crate::exactla::rank;
    use crate::simplicial::cluster_build;

    fn s(x: &str) -> Simplex {
        Simplex::parse_digits(x).unwrap()
    }

    fn fp() -> Field {
        Field::prime(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn generic_vertex_relations_and_dimension() {
        let f = fp();
        let fam = Family::random_generic(&f, &mut rng_from_seed(11));
        let u = s("12345");
        let funcs = fam.functionals(&u).unwrap();
        assert_eq!(funcs.len(), 10);
        for r in vertex_relation_residues(&fam, &u, &funcs).unwrap() {
            assert!(r.iter().all(|x| x.is_zero()));
        }
        assert_eq!(permitted_space(&u, &funcs).unwrap().dim(), 5);
    }

    #[test]
    fn all_ones_gamma_is_degenerate() {
        let f = fp();
        let g = GammaParams::from_fn(&DELTA5_VERTICES, |_, _| f.one());
        assert!(matches!(
            functionals_generic(&g, &s("12345")),
            Err(HexError::Degenerate(_))
        ));
        let col = phi_column_generic(|_, _| f.one());
        let m = Matrix::from_rows(col.iter().map(|r| r.to_vec()).collect(), 2, f.zero());
        assert_eq!(rank(&m), 2);
        assert_eq!(col[3][1], f.zero());
    }

    #[test]
    fn infinitesimal_relations() {
        let f = fp();
        let fam = Family::random_infinitesimal(&f, &mut rng_from_seed(5));
        let Family::Infinitesimal { b, omega } = &fam else {
            unreachable!()
        };
        for u in boundary_pentachora() {
            let funcs = fam.functionals(&u).unwrap();
            assert_eq!(permitted_space(&u, &funcs).unwrap().dim(), 5);
            for r in vertex_relation_residues(&fam, &u, &funcs).unwrap() {
                assert!(r.iter().all(|x| x.is_zero()));
            }
            let tets = u.faces(3).unwrap();
            let mut acc = vec![f.zero(); 10];
            for func in &funcs {
                let e = func.edge.vertices();
                let c = b.get(e[0], e[1]).clone();
                for (a, x) in acc.iter_mut().zip(func.row(&tets, &f.zero())) {
                    *a = a.clone() + c.clone() * x;
                }
            }
            assert!(acc.iter().all(|x| x.is_zero()));
            for t in &tets {
                assert!(psi_phi_identity(omega, t).unwrap());
            }
        }
    }

    #[test]
    fn inner_cancellation_on_two_pentachora() {
        let f = fp();
        let fam = Family::random_generic(&f, &mut rng_from_seed(2));
        let funcs = fam.all_functionals().unwrap();
        let c = cluster_build(&[s("12345"), s("12346")]).unwrap();
        let bf = boundary_functionals(&c, &funcs).unwrap();
        let e12 = bf.iter().find(|x| x.edge == s("12")).unwrap();
        assert!(e12.component(&s("1234")).is_none());
    }

    #[test]
    fn single_pentachoron_boundary_functionals_are_signed_originals() {
        let f = fp();
        let fam = Family::random_generic(&f, &mut rng_from_seed(4));
        let funcs = fam.all_functionals().unwrap();
        let u = s("12346");
        let c = cluster_build(std::slice::from_ref(&u)).unwrap();
        let bf = boundary_functionals(&c, &funcs).unwrap();
        let sigma = boundary_sign(&u);
        for (b, o) in bf.iter().zip(&funcs[&u]) {
            assert_eq!(b.edge, o.edge);
            for (t, comp) in &o.comps {
                let got = b.component(t).unwrap();
                let want = if sigma == 1 {
                    comp.clone()
                } else {
                    [-comp[0].clone(), -comp[1].clone()]
                };
                assert_eq!(got, &want);
            }
        }
    }

    #[test]
    fn finite_o_leading_term_vanishes() {
        let f = fp();
        let b = random_cochain1(&f, &DELTA5_VERTICES, &mut rng_from_seed(8));
        for t in all_tetrahedra() {
            assert!(finite_o_coefficients(&b, &t).is_ok());
        }
    }

    #[test]
    fn full_hexagon_both_families() {
        let f = fp();
        for fam in [
            Family::random_generic(&f, &mut rng_from_seed(1)),
            Family::random_infinitesimal(&f, &mut rng_from_seed(1)),
        ] {
            let r = full_hexagon_check(&fam).unwrap();
            assert_eq!(r.pentachoron_dims, vec![5; 6]);
            assert_eq!(r.splittings.len(), 31);
            assert_eq!(r.full_dim, 9, "{}", r.family);
            assert!(r.restrictions_match);
            for s in &r.splittings {
                assert!(s.pass, "{} {:?}", r.family, s);
            }
            for (c, _) in all_splittings() {
                let funcs = fam.all_functionals().unwrap();
                let bf = boundary_functionals(&c, &funcs).unwrap();
                for res in boundary_vertex_residues(&fam, &c, &bf) {
                    assert!(res.iter().all(|x| x.is_zero()));
                }
            }
        }
    }
}
