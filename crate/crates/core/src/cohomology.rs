//! Symmetric bilinear hexagon cochains on Δ⁵ for the infinitesimal family.
//!
//! A cochain at level 3 is a symmetric 2×2 form per tetrahedron, at level 4 a
//! symmetric form on V_u per pentachoron, at level 5 a symmetric form on
//! V_{∂Δ⁵}. Forms are vectorized by their upper triangle (i ≤ j, row-major);
//! the coordinate at (i, j) is the matrix entry S_ij = S_ji.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::exactfield::{rng_from_seed, Galois, Ring, Scalar};
use crate::exactla::{
    kernel_basis, local_kernel, rank, solve, solve_matrix, try_rref, LaError, Matrix,
};
use crate::hexagon::{
    finite_o_coefficients, functional_matrix, functionals_from_blocks, functionals_infinitesimal,
    local_omegas, phi_column_infinitesimal, HexError,
};
use crate::simplicial::{
    all_tetrahedra, boundary_pentachora, boundary_sign, delta1, orientation_sign, Cochain1,
    Cochain2, Simplex,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("constant part of the first-order Gram matrix is nonzero on {0}")]
    NonvanishingConstantPart(Simplex),
    #[error("first-order data not divisible by 2 in the Galois-ring lift: {0}")]
    Char2Halving(String),
    #[error("operation requires characteristic 2")]
    CharNot2,
    #[error(transparent)]
    Hex(#[from] HexError),
    #[error(transparent)]
    La(#[from] LaError),
}

impl CohomError {
    /// Failures that a fresh parameter sample may avoid.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            CohomError::Degenerate(_)
                | CohomError::DimMismatch(_)
                | CohomError::La(LaError::DegenerateLift)
                | CohomError::Hex(HexError::Degenerate(_))
        )
    }
}

pub fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

pub fn sym_coords<R: Ring>(m: &Matrix<R>) -> Vec<R> {
    let n = m.rows();
    let mut v = Vec::with_capacity(sym_len(n));
    for i in 0..n {
        for j in i..n {
            v.push(m.get(i, j).clone());
        }
    }
    v
}

pub fn sym_from_coords<R: Ring>(n: usize, v: &[R]) -> Matrix<R> {
    assert_eq!(v.len(), sym_len(n));
    let mut m = Matrix::new(n, n, v[0].zero_like());
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m.set(i, j, v[k].clone());
            m.set(j, i, v[k].clone());
            k += 1;
        }
    }
    m
}

fn sym_unit<R: Ring>(n: usize, k: usize, zero: &R) -> Matrix<R> {
    let mut v = vec![zero.clone(); sym_len(n)];
    v[k] = zero.one_like();
    sym_from_coords(n, &v)
}

/// Basis of a kernel with one vector per free column (value 1 there, 0 at the other free columns).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis<R> {
    pub vectors: Vec<Vec<R>>,
    pub free: Vec<usize>,
}

impl<R: Ring> KernelBasis<R> {
    pub fn of(m: &Matrix<R>) -> Result<Self, LaError> {
        let e = try_rref(m)?;
        let free = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
        Ok(KernelBasis {
            vectors: local_kernel(m)?,
            free,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn coordinates(&self, v: &[R]) -> Option<Vec<R>> {
        let coords: Vec<R> = self.free.iter().map(|&f| v[f].clone()).collect();
        let mut recon: Vec<R> = v.iter().map(|x| x.zero_like()).collect();
        for (c, b) in coords.iter().zip(&self.vectors) {
            for (r, x) in recon.iter_mut().zip(b) {
                *r = r.clone() + c.clone() * x.clone();
            }
        }
        (recon == v).then_some(coords)
    }
}

/// Recorded bases of V_u for the six pentachora and, optionally, of V_{∂Δ⁵}.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainBasisContext<R> {
    pub omega: Cochain2<R>,
    pub pentachora: Vec<Simplex>,
    pub tetrahedra: Vec<Simplex>,
    pub bases: BTreeMap<Simplex, KernelBasis<R>>,
    pub full: Option<KernelBasis<R>>,
    /// P_u: coordinates in V_u of the restrictions of the V_{∂Δ⁵} basis (5×9).
    pub restrictions: BTreeMap<Simplex, Matrix<R>>,
    zero: R,
}

impl<R: Ring> CochainBasisContext<R> {
    /// Pentachoron-level bases only.
    pub fn build_local(omega: &Cochain2<R>) -> Result<Self, CohomError> {
        let zero = omega.get(1, 2, 3).zero_like();
        let mut bases = BTreeMap::new();
        for u in boundary_pentachora() {
            let m = functional_matrix(
                &functionals_infinitesimal(omega, &u)?,
                &u.faces(3).expect("tetrahedra"),
                &zero,
            );
            let kb = KernelBasis::of(&m)?;
            if kb.dim() != 5 {
                return Err(CohomError::DimMismatch(format!("dim V_{u} = {}", kb.dim())));
            }
            bases.insert(u, kb);
        }
        Ok(CochainBasisContext {
            omega: omega.clone(),
            pentachora: boundary_pentachora(),
            tetrahedra: all_tetrahedra(),
            bases,
            full: None,
            restrictions: BTreeMap::new(),
            zero,
        })
    }

    /// Bases of all V_u, of V_{∂Δ⁵}, and the restriction maps between them.
    pub fn build(omega: &Cochain2<R>) -> Result<Self, CohomError> {
        let mut ctx = Self::build_local(omega)?;
        let tets = &ctx.tetrahedra;
        let mut m = Matrix::new(0, 30, ctx.zero.clone());
        for u in &ctx.pentachora {
            m = m.vstack(&functional_matrix(
                &functionals_infinitesimal(omega, u)?,
                tets,
                &ctx.zero,
            ));
        }
        let full = KernelBasis::of(&m)?;
        if full.dim() != 9 {
            return Err(CohomError::DimMismatch(format!(
                "dim V_∂Δ⁵ = {}",
                full.dim()
            )));
        }
        for u in &ctx.pentachora {
            let cols = u_columns(tets, u);
            let mut p = Matrix::new(5, 9, ctx.zero.clone());
            for (j, v) in full.vectors.iter().enumerate() {
                let r: Vec<R> = cols.iter().map(|&c| v[c].clone()).collect();
                let coords = ctx.bases[u].coordinates(&r).ok_or_else(|| {
                    CohomError::DimMismatch(format!("restriction to {u} leaves V_{u}"))
                })?;
                for (i, x) in coords.into_iter().enumerate() {
                    p.set(i, j, x);
                }
            }
            ctx.restrictions.insert(u.clone(), p);
        }
        ctx.full = Some(full);
        Ok(ctx)
    }

    pub fn zero(&self) -> &R {
        &self.zero
    }

    /// Signed infinitesimal functionals of `u` over its ten local coordinates.
    pub fn functional_matrix(&self, u: &Simplex) -> Result<Matrix<R>, CohomError> {
        Ok(functional_matrix(
            &functionals_infinitesimal(&self.omega, u)?,
            &u.faces(3).expect("tetrahedra"),
            &self.zero,
        ))
    }

    /// R_t: 2×5 matrix sending V_u coordinates to the color (x_t, y_t).
    pub fn tet_restriction(&self, u: &Simplex, t: &Simplex) -> Matrix<R> {
        let n = u
            .faces(3)
            .expect("tetrahedra")
            .iter()
            .position(|s| s == t)
            .expect("face of u");
        let b = &self.bases[u];
        let mut m = Matrix::new(2, b.dim(), self.zero.clone());
        for (j, v) in b.vectors.iter().enumerate() {
            m.set(0, j, v[2 * n].clone());
            m.set(1, j, v[2 * n + 1].clone());
        }
        m
    }

    /// Σ_{t ⊂ u} ε_t R_tᵀ C_t R_t for per-tetrahedron symmetric forms C_t.
    pub fn pullback_sum(&self, u: &Simplex, form: impl Fn(&Simplex) -> Matrix<R>) -> Matrix<R> {
        let mut g = Matrix::new(5, 5, self.zero.clone());
        for t in u.faces(3).expect("tetrahedra") {
            let r = self.tet_restriction(u, &t);
            let term = r.transpose().mul(&form(&t)).mul(&r);
            g = if orientation_sign(&t, u).expect("face") == 1 {
                g.add(&term)
            } else {
                g.add(&term.scale(&self.zero.int_like(-1)))
            };
        }
        g
    }

    /// δ₃ as a 90×45 matrix.
    pub fn delta3_matrix(&self) -> Matrix<R> {
        let mut d = Matrix::new(
            15 * self.pentachora.len(),
            3 * self.tetrahedra.len(),
            self.zero.clone(),
        );
        for (un, u) in self.pentachora.iter().enumerate() {
            for t in u.faces(3).expect("tetrahedra") {
                let tn = self.tetrahedra.binary_search(&t).expect("tetrahedron");
                let sign = self.zero.int_like(orientation_sign(&t, u).expect("face"));
                let r = self.tet_restriction(u, &t);
                for p in 0..3 {
                    let g = r
                        .transpose()
                        .mul(&sym_unit(2, p, &self.zero))
                        .mul(&r)
                        .scale(&sign);
                    for (k, x) in sym_coords(&g).into_iter().enumerate() {
                        d.set(15 * un + k, 3 * tn + p, x);
                    }
                }
            }
        }
        d
    }

    /// The fifteen pulled-back elementary forms of `u`, one per row.
    pub fn elementary_forms(&self, u: &Simplex) -> Matrix<R> {
        let mut rows = Vec::new();
        for t in u.faces(3).expect("tetrahedra") {
            let r = self.tet_restriction(u, &t);
            for p in 0..3 {
                rows.push(sym_coords(
                    &r.transpose().mul(&sym_unit(2, p, &self.zero)).mul(&r),
                ));
            }
        }
        Matrix::from_rows(rows, 15, self.zero.clone())
    }

    /// The cocycle bilinear form B_u(c, c') = Σ ε_t z3_t(c|_t, c'|_t) on V_u.
    pub fn z3_gram(&self, u: &Simplex) -> Matrix<R> {
        self.pullback_sum(u, |t| sym_from_coords(2, &z3(&self.omega, t)))
    }

    pub fn z3_cochain(&self) -> Vec<R> {
        self.tetrahedra
            .iter()
            .flat_map(|t| z3(&self.omega, t))
            .collect()
    }
}

impl CochainBasisContext<Scalar> {
    /// Requires the full context.
    pub fn delta4_matrix(&self) -> Matrix<Scalar> {
        let mut d = Matrix::new(45, 15 * self.pentachora.len(), self.zero.clone());
        for (un, u) in self.pentachora.iter().enumerate() {
            let p = &self.restrictions[u];
            let sign = self.zero.int_like(boundary_sign(u));
            for k in 0..15 {
                let g = p
                    .transpose()
                    .mul(&sym_unit(5, k, &self.zero))
                    .mul(p)
                    .scale(&sign);
                for (r, x) in sym_coords(&g).into_iter().enumerate() {
                    d.set(r, 15 * un + k, x);
                }
            }
        }
        d
    }

    /// (δ₄ c) as a 9×9 form: Σ_u σ_u P_uᵀ c_u P_u.
    pub fn delta4_apply(&self, forms: &BTreeMap<Simplex, Matrix<Scalar>>) -> Matrix<Scalar> {
        let mut g = Matrix::new(9, 9, self.zero.clone());
        for u in &self.pentachora {
            let p = &self.restrictions[u];
            let term = p
                .transpose()
                .mul(&forms[u])
                .mul(p)
                .scale(&self.zero.int_like(boundary_sign(u)));
            g = g.add(&term);
        }
        g
    }

    /// Digest of the recorded bases (pentachora, then V_∂Δ⁵ if present).
    pub fn fingerprint(&self) -> String {
        let rows = self
            .bases
            .values()
            .flat_map(|b| b.vectors.iter().cloned())
            .collect();
        let local = crate::exactla::fingerprint(&Matrix::from_rows(rows, 10, self.zero.clone()));
        match &self.full {
            Some(f) => format!(
                "{local}-{}",
                crate::exactla::fingerprint(&Matrix::from_rows(
                    f.vectors.clone(),
                    30,
                    self.zero.clone()
                ))
            ),
            None => local,
        }
    }
}

fn u_columns(tets: &[Simplex], u: &Simplex) -> Vec<usize> {
    u.faces(3)
        .expect("tetrahedra")
        .iter()
        .flat_map(|t| {
            let n = tets.binary_search(t).expect("tetrahedron");
            [2 * n, 2 * n + 1]
        })
        .collect()
}

/// Concatenate per-pentachoron forms into a 90-vector.
pub fn four_cochain_vector<R: Ring>(forms: &BTreeMap<Simplex, Matrix<R>>) -> Vec<R> {
    forms.values().flat_map(sym_coords).collect()
}

pub fn four_cochain_forms<R: Ring>(v: &[R]) -> BTreeMap<Simplex, Matrix<R>> {
    boundary_pentachora()
        .into_iter()
        .enumerate()
        .map(|(n, u)| (u, sym_from_coords(5, &v[15 * n..15 * n + 15])))
        .collect()
}

/// z3 on `t = ijkl` in (xx, xy, yy) coordinates.
pub fn z3<R: Ring>(omega: &Cochain2<R>, t: &Simplex) -> [R; 3] {
    let [w123, w124, w134, w234] = local_omegas(omega, t);
    let d = w234.clone() - w134.clone();
    [d.clone() * w123 * w124, d.zero_like(), -(d * w134 * w234)]
}

/// Σ_{t ⊂ u} ε_t z3_t(c|_t, c'|_t) for colorings of `u` in local coordinates.
pub fn scalar_product<R: Ring>(u: &Simplex, c: &[R], cp: &[R], omega: &Cochain2<R>) -> R {
    let mut acc = c[0].zero_like();
    for (n, t) in u.faces(3).expect("tetrahedra").iter().enumerate() {
        let [a, _, d] = z3(omega, t);
        let v = a * c[2 * n].clone() * cp[2 * n].clone()
            + d * c[2 * n + 1].clone() * cp[2 * n + 1].clone();
        acc = if orientation_sign(t, u).expect("face") == 1 {
            acc + v
        } else {
            acc - v
        };
    }
    acc
}

/// True iff the scalar product vanishes on all basis pairs of V_u.
pub fn isotropy_check<R: Ring>(u: &Simplex, ctx: &CochainBasisContext<R>) -> bool {
    let b = &ctx.bases[u].vectors;
    b.iter().all(|c| {
        b.iter()
            .all(|cp| scalar_product(u, c, cp, &ctx.omega).is_zero())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NontrivialityTest {
    pub base_rank: usize,
    pub extended_rank: usize,
    pub nontrivial: bool,
}

/// Rank of the elementary forms of `u` before and after appending `form`.
pub fn nontrivial_on_pentachoron(
    form: &Matrix<Scalar>,
    u: &Simplex,
    ctx: &CochainBasisContext<Scalar>,
) -> NontrivialityTest {
    let e = ctx.elementary_forms(u);
    let base_rank = rank(&e);
    let ext = e.vstack(&Matrix::from_rows(
        vec![sym_coords(form)],
        15,
        ctx.zero.clone(),
    ));
    let extended_rank = rank(&ext);
    NontrivialityTest {
        base_rank,
        extended_rank,
        nontrivial: extended_rank > base_rank,
    }
}

/// Rank of im δ₃ and of im δ₃ with `v` adjoined.
pub fn image_rank_test(delta3: &Matrix<Scalar>, v: &[Scalar]) -> (usize, usize) {
    let base = rank(delta3);
    let col = Matrix::from_cols(vec![v.to_vec()], v.len(), delta3.zero_elem().clone());
    (base, rank(&delta3.hstack(&col)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    pub cochain_dims: (usize, usize, usize),
    pub rank_delta3: usize,
    pub rank_delta4: usize,
    pub h3: usize,
    pub ker_delta4: usize,
    pub h4: usize,
    pub delta_squared_zero: bool,
}

pub fn cochain_dims<R: Ring>(
    ctx: &CochainBasisContext<R>,
) -> Result<(usize, usize, usize), CohomError> {
    let full = ctx
        .full
        .as_ref()
        .ok_or_else(|| CohomError::DimMismatch("context has no V_∂Δ⁵ basis".into()))?;
    let c4 = ctx.bases.values().map(|b| sym_len(b.dim())).sum();
    Ok((3 * ctx.tetrahedra.len(), c4, sym_len(full.dim())))
}

pub fn cohomology_dims(ctx: &CochainBasisContext<Scalar>) -> Result<CohomologyDims, CohomError> {
    let cochain_dims = cochain_dims(ctx)?;
    let d3 = ctx.delta3_matrix();
    let d4 = ctx.delta4_matrix();
    let rank_delta3 = rank(&d3);
    let rank_delta4 = rank(&d4);
    let ker_delta4 = cochain_dims.1 - rank_delta4;
    Ok(CohomologyDims {
        cochain_dims,
        rank_delta3,
        rank_delta4,
        h3: cochain_dims.0 - rank_delta3,
        ker_delta4,
        h4: ker_delta4 - rank_delta3,
        delta_squared_zero: d4.mul(&d3).is_zero(),
    })
}

// ---------------------------------------------------------- limit 4-cocycle

/// Per-tetrahedron first-order block Φ₁ after aligning the o¹ coefficient with the infinitesimal table.
fn align<R: Ring>(
    c1: &Matrix<R>,
    c2: &Matrix<R>,
    table: &Matrix<R>,
    t: &Simplex,
) -> Result<Matrix<R>, CohomError> {
    let a = solve_matrix(c1, table)
        .map_err(|_| {
            CohomError::Degenerate(format!("first-order data on {t} admits no unit pivot"))
        })?
        .ok_or_else(|| {
            CohomError::Degenerate(format!(
                "first-order data on {t} does not span the infinitesimal table"
            ))
        })?;
    let det = a.get(0, 0).clone() * a.get(1, 1).clone() - a.get(0, 1).clone() * a.get(1, 0).clone();
    if !det.is_unit() || c1.mul(&a) != *table {
        return Err(CohomError::Degenerate(format!(
            "alignment on {t} is not invertible"
        )));
    }
    Ok(c2.mul(&a))
}

/// How the o¹ coefficient of the finite-o column relates to the infinitesimal table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FirstOrderRelation {
    pub equal: usize,
    pub scalar: usize,
    pub basis_change: usize,
}

/// Classify, per tetrahedron, the 2×2 change of basis A with c1·A = table.
pub fn first_order_relation(b: &Cochain1<Scalar>) -> Result<FirstOrderRelation, CohomError> {
    let omega = delta1(b);
    let mut out = FirstOrderRelation::default();
    for t in all_tetrahedra() {
        let (c1, c2) = finite_o_coefficients(b, &t)?;
        let table = table_matrix(&omega, &t);
        align(&c1, &c2, &table, &t)?;
        let a = solve_matrix(&c1, &table)?.expect("aligned");
        let diagonal = a.get(0, 1).is_zero() && a.get(1, 0).is_zero() && a.get(0, 0) == a.get(1, 1);
        if c1 == table {
            out.equal += 1;
        } else if diagonal {
            out.scalar += 1;
        } else {
            out.basis_change += 1;
        }
    }
    Ok(out)
}

fn table_matrix<R: Ring>(omega: &Cochain2<R>, t: &Simplex) -> Matrix<R> {
    let col = phi_column_infinitesimal(omega, t);
    let zero = col[0][1].zero_like();
    Matrix::from_rows(col.iter().map(|r| r.to_vec()).collect(), 2, zero)
}

/// Constant and first-order Gram matrices of B_u on a lifted basis v0 + o·v1 of V_u(o).
fn lift_pentachoron<R: Ring>(
    ctx: &CochainBasisContext<R>,
    phi1: &BTreeMap<Simplex, Matrix<R>>,
    u: &Simplex,
    shift: Option<u64>,
) -> Result<(Matrix<R>, Matrix<R>), CohomError> {
    let tets = u.faces(3).expect("tetrahedra");
    let zero = ctx.zero();
    let m0 = ctx.functional_matrix(u)?;
    let m1 = functional_matrix(&functionals_from_blocks(phi1, u)?, &tets, zero);
    let v0 = &ctx.bases[u].vectors;
    let mut v1 = Vec::new();
    for v in v0 {
        let rhs: Vec<R> = m1.mul_vec(v).into_iter().map(|x| -x).collect();
        let x = solve(&m0, &rhs)
            .map_err(|_| {
                CohomError::Degenerate(format!("first-order lift on {u} admits no unit pivot"))
            })?
            .ok_or_else(|| CohomError::Degenerate(format!("no first-order lift on {u}")))?;
        v1.push(x);
    }
    if let Some(seed) = shift {
        let mut rng = rng_from_seed(seed);
        for x in v1.iter_mut() {
            for k in v0 {
                let r = zero.int_like(rng.gen_range(-1000..=1000));
                for (a, b) in x.iter_mut().zip(k) {
                    *a = a.clone() + r.clone() * b.clone();
                }
            }
        }
    }
    let form = |a: &[R], b: &[R]| scalar_product(u, a, b, &ctx.omega);
    let n = v0.len();
    let mut g0 = Matrix::new(n, n, zero.clone());
    let mut g1 = Matrix::new(n, n, zero.clone());
    for i in 0..n {
        for j in 0..n {
            g0.set(i, j, form(&v0[i], &v0[j]));
            g1.set(i, j, form(&v1[i], &v0[j]) + form(&v0[i], &v1[j]));
        }
    }
    Ok((g0, g1))
}

fn limit_forms<R: Ring>(
    ctx: &CochainBasisContext<R>,
    phi1: &BTreeMap<Simplex, Matrix<R>>,
    shift_seed: u64,
) -> Result<(BTreeMap<Simplex, Matrix<R>>, bool), CohomError> {
    let mut forms = BTreeMap::new();
    let mut invariant = true;
    for u in &ctx.pentachora {
        let (g0, g1) = lift_pentachoron(ctx, phi1, u, None)?;
        if !g0.is_zero() {
            return Err(CohomError::NonvanishingConstantPart(u.clone()));
        }
        let (_, g1b) = lift_pentachoron(ctx, phi1, u, Some(shift_seed))?;
        invariant &= g1 == g1b;
        forms.insert(u.clone(), g1);
    }
    Ok((forms, invariant))
}

/// How the limit cocycle was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitRoute {
    /// Series arithmetic directly over the field.
    Direct,
    /// Galois-ring lift GR(8, k) → GR(4, k), then reduction to GF(2^k).
    Char2 {
        /// z⁽⁴⁾ mod 2 lies in im δ₃, so the refined class (z⁽⁴⁾ − δ₃c̃)/2 is reported.
        refined: bool,
        /// Per pentachoron: rank of the elementary forms mod 2, and with the halved relation residues adjoined.
        ambiguity_ranks: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitCocycle {
    pub forms: BTreeMap<Simplex, Matrix<Scalar>>,
    pub lift_invariant: bool,
    pub route: LimitRoute,
}

/// The per-tetrahedron alignment of the o¹ coefficient with the infinitesimal table is
/// possible exactly when ω_jkl ≠ 0 and ω_jkl − ω_ikl ≠ 0 for every tetrahedron ijkl.
pub fn limit_genericity<R: Ring>(omega: &Cochain2<R>) -> Result<(), CohomError> {
    for t in all_tetrahedra() {
        let [_, _, w134, w234] = local_omegas(omega, &t);
        if w234.is_zero() || (w234 - w134).is_zero() {
            return Err(CohomError::Degenerate(format!(
                "ω_jkl or ω_jkl − ω_ikl vanishes on {t}"
            )));
        }
    }
    Ok(())
}

/// The limit 4-cocycle z⁽⁴⁾ = lim δc⁽³⁾/o for γ_ij = ∓1 + o·b_ij, in the bases of `ctx`.
pub fn z4_limit(
    b: &Cochain1<Scalar>,
    ctx: &CochainBasisContext<Scalar>,
    shift_seed: u64,
) -> Result<LimitCocycle, CohomError> {
    limit_genericity(&ctx.omega)?;
    if ctx.zero().characteristic() == 2 {
        return z4_limit_char2(b, ctx, shift_seed);
    }
    let mut phi1 = BTreeMap::new();
    for t in &ctx.tetrahedra {
        let (c1, c2) = finite_o_coefficients(b, t)?;
        phi1.insert(t.clone(), align(&c1, &c2, &table_matrix(&ctx.omega, t), t)?);
    }
    let (forms, lift_invariant) = limit_forms(ctx, &phi1, shift_seed)?;
    Ok(LimitCocycle {
        forms,
        lift_invariant,
        route: LimitRoute::Direct,
    })
}

fn halve_matrix(m: &Matrix<Galois>, t: &Simplex) -> Result<Matrix<Galois>, CohomError> {
    let zero = m.zero_elem().halve().expect("zero halves");
    let mut out = Matrix::new(m.rows(), m.cols(), zero);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let h = m
                .get(i, j)
                .halve()
                .ok_or_else(|| CohomError::Char2Halving(t.to_string()))?;
            out.set(i, j, h);
        }
    }
    Ok(out)
}

fn residue_matrix(m: &Matrix<Galois>, zero: &Scalar) -> Matrix<Scalar> {
    m.map(zero.clone(), |x| x.residue())
}

fn z4_limit_char2(
    b: &Cochain1<Scalar>,
    ctx: &CochainBasisContext<Scalar>,
    shift_seed: u64,
) -> Result<LimitCocycle, CohomError> {
    let zero = ctx.zero().clone();
    let b8 = b.map(|s| Galois::lift(s, 3));
    let b4 = b.map(|s| Galois::lift(s, 2));
    let ctx4 = CochainBasisContext::build_local(&delta1(&b4))?;
    for u in &ctx.pentachora {
        let reduced: Vec<Vec<Scalar>> = ctx4.bases[u]
            .vectors
            .iter()
            .map(|v| v.iter().map(Galois::residue).collect())
            .collect();
        if reduced != ctx.bases[u].vectors {
            return Err(CohomError::DimMismatch(format!(
                "lifted basis of V_{u} does not reduce to the recorded basis"
            )));
        }
    }
    let mut phi1 = BTreeMap::new();
    for t in &ctx.tetrahedra {
        let (c1, c2) = finite_o_coefficients(&b8, t)?;
        let (c1, c2) = (halve_matrix(&c1, t)?, halve_matrix(&c2, t)?);
        phi1.insert(
            t.clone(),
            align(&c1, &c2, &table_matrix(&ctx4.omega, t), t)?,
        );
    }
    let (forms4, lift_invariant) = limit_forms(&ctx4, &phi1, shift_seed)?;

    let d3_4 = ctx4.delta3_matrix();
    let d3 = ctx.delta3_matrix();
    if residue_matrix(&d3_4, &zero) != d3 {
        return Err(CohomError::DimMismatch(
            "lifted δ₃ does not reduce to δ₃".into(),
        ));
    }
    let z = four_cochain_vector(&forms4);
    let z2: Vec<Scalar> = z.iter().map(Galois::residue).collect();
    let (w, refined) = match solve(&d3, &z2)? {
        Some(c) => {
            let lifted: Vec<Galois> = c.iter().map(|s| Galois::lift(s, 2)).collect();
            let img = d3_4.mul_vec(&lifted);
            let mut w = Vec::with_capacity(z.len());
            for (a, b) in z.iter().zip(img) {
                let h = (a.clone() - b)
                    .halve()
                    .ok_or_else(|| CohomError::Char2Halving("refinement".into()))?;
                w.push(h.residue());
            }
            (w, true)
        }
        None => (z2, false),
    };

    let mut ambiguity_ranks = Vec::new();
    for u in &ctx.pentachora {
        let e4 = ctx4.elementary_forms(u);
        let e2 = residue_matrix(&e4, &zero);
        let rels = kernel_basis(&e2.transpose());
        let mut rows = e2.row_vecs();
        for k in rels.basis_vectors() {
            let lifted: Vec<Galois> = k.iter().map(|s| Galois::lift(s, 2)).collect();
            let s = e4.transpose().mul_vec(&lifted);
            let mut r = Vec::new();
            for x in s {
                r.push(
                    x.halve()
                        .ok_or_else(|| CohomError::Char2Halving("elementary relation".into()))?
                        .residue(),
                );
            }
            rows.push(r);
        }
        ambiguity_ranks.push((rank(&e2), rank(&Matrix::from_rows(rows, 15, zero.clone()))));
    }
    Ok(LimitCocycle {
        forms: four_cochain_forms(&w),
        lift_invariant,
        route: LimitRoute::Char2 {
            refined,
            ambiguity_ranks,
        },
    })
}

// ------------------------------------------------------------------- ζ

/// ζ_u(c, c') for colorings of `u = ijklm` in local coordinates, by substitution 1↦i, …, 5↦m.
pub fn zeta_value(
    u: &Simplex,
    omega: &Cochain2<Scalar>,
    c: &[Scalar],
    cp: &[Scalar],
) -> Result<Scalar, CohomError> {
    let l = u.vertices();
    let w = |s: &str| {
        let d: Vec<usize> = s.bytes().map(|x| (x - b'1') as usize).collect();
        omega.get(l[d[0]], l[d[1]], l[d[2]]).clone()
    };
    let faces = u.faces(3).expect("tetrahedra");
    let idx = |s: &str| {
        let t = Simplex::from_sorted(
            &s.bytes()
                .map(|x| l[(x - b'1') as usize])
                .collect::<Vec<_>>(),
        );
        faces.iter().position(|f| *f == t).expect("face of u")
    };
    let x = |s: &str, v: &[Scalar]| v[2 * idx(s)].clone();
    let y = |s: &str, v: &[Scalar]| v[2 * idx(s) + 1].clone();
    let p = |a: &str, b: &str| x(a, c) * x(b, cp) + x(b, c) * x(a, cp);
    let q = |a: &str| x(a, c) * x(a, cp);

    let om = w("124") * w("125") * w("135")
        + w("123") * w("125") * w("135")
        + w("124") * w("125") * w("134")
        + w("123") * w("124") * w("134");
    let d1 = w("124") + w("123");
    let d2 = w("134") * w("235") + w("135") * w("234");
    let inv = |v: &Scalar, what: &str| {
        v.try_inv()
            .ok_or_else(|| CohomError::Degenerate(format!("ζ denominator {what} vanishes on {u}")))
    };
    inv(&om, "Ω")?;
    let (id1, id2) = (inv(&d1, "ω₁₂₄+ω₁₂₃")?, inv(&d2, "ω₁₃₄ω₂₃₅+ω₁₃₅ω₂₃₄")?);
    let a5 = w("125") + w("123");
    let b5 = w("125") + w("124");
    let c5 = w("135") + w("134");
    let d12 = id1.clone() * id2.clone();
    let terms = [
        w("123")
            * w("124")
            * a5.clone()
            * b5.clone()
            * om.clone()
            * d12.clone()
            * p("1245", "1235"),
        w("123")
            * a5.clone()
            * b5.clone()
            * w("134")
            * w("135")
            * c5.clone()
            * id2.clone()
            * p("1345", "1235"),
        w("123") * w("123") * a5.clone() * b5.clone() * om.clone() * d12.clone() * q("1235"),
        w("124")
            * a5.clone()
            * b5.clone()
            * w("134")
            * w("135")
            * c5.clone()
            * id2.clone()
            * p("1345", "1245"),
        w("124") * w("124") * a5 * b5.clone() * om.clone() * d12 * q("1245"),
        b5 * w("134") * w("134") * w("135") * w("135") * c5 * id2.clone() * q("1345"),
        w("234")
            * w("235")
            * (w("235") + w("234"))
            * (om + w("125") * w("134") * w("135") + w("124") * w("134") * w("135"))
            * id2
            * q("2345"),
        w("123") * w("234") * w("235") * (w("245") + w("345")) * q("2345"),
        (w("245") + w("145"))
            * (w("245") + w("345"))
            * w("245")
            * w("345")
            * y("2345", c)
            * y("2345", cp),
    ];
    Ok(terms.into_iter().fold(c[0].zero_like(), |acc, t| acc + t))
}

/// The explicit characteristic-2 4-cocycle ζ in the bases of `ctx`.
pub fn zeta4_char2(
    ctx: &CochainBasisContext<Scalar>,
) -> Result<BTreeMap<Simplex, Matrix<Scalar>>, CohomError> {
    if ctx.zero().characteristic() != 2 {
        return Err(CohomError::CharNot2);
    }
    let mut forms = BTreeMap::new();
    for u in &ctx.pentachora {
        let v = &ctx.bases[u].vectors;
        let mut g = Matrix::new(5, 5, ctx.zero().clone());
        for i in 0..5 {
            for j in 0..5 {
                g.set(i, j, zeta_value(u, &ctx.omega, &v[i], &v[j])?);
            }
        }
        forms.insert(u.clone(), g);
    }
    Ok(forms)
}
