//! Dense exact matrices over any [`Ring`].
//!
//! Elimination pivots only on units. Over a field this is ordinary reduced
//! row echelon form; over a local ring (dual numbers, truncated series,
//! Galois rings) it succeeds whenever the nonunit residue left after
//! elimination is exactly zero and reports [`LaError::DegenerateLift`]
//! otherwise.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactfield::{Dual, Ring, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("no unit pivot available; elimination residue is nonzero")]
    DegenerateLift,
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
    zero: R,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, zero: R) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero.clone(); rows * cols],
            zero,
        }
    }

    pub fn from_rows(rows: Vec<Vec<R>>, cols: usize, zero: R) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
            zero,
        }
    }

    pub fn from_cols(cols: Vec<Vec<R>>, rows: usize, zero: R) -> Self {
        Matrix::from_rows(cols, rows, zero).transpose()
    }

    pub fn identity(n: usize, zero: R) -> Self {
        let mut m = Matrix::new(n, n, zero.clone());
        for i in 0..n {
            m.set(i, i, zero.one_like());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::new(self.cols, self.rows, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::new(self.rows, other.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.zero.clone(), |acc, (a, b)| {
                        if a.is_zero() || b.is_zero() {
                            acc
                        } else {
                            acc + a.clone() * b.clone()
                        }
                    })
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, s: &R) -> Matrix<R> {
        let data = self.data.iter().map(|a| a.clone() * s.clone()).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
            zero: self.zero.clone(),
        }
    }

    pub fn vstack(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            zero: self.zero.clone(),
        }
    }

    pub fn hstack(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::new(self.rows, self.cols + other.cols, self.zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix<R> {
        let mut out = Matrix::new(self.rows, cols.len(), self.zero.clone());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<R> {
        let picked = rows.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(picked, self.cols, self.zero.clone())
    }

    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            zero,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced echelon form with its rank and pivot columns.
#[derive(Clone, PartialEq, Debug)]
pub struct Echelon<R> {
    pub reduced: Matrix<R>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Unit-pivot Gauss-Jordan restricted to the first `limit` columns.
fn eliminate<R: Ring>(m: &Matrix<R>, limit: usize) -> (Matrix<R>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| a.get(i, c).is_unit()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).try_inv().expect("unit pivot");
        for j in 0..a.cols {
            let v = a.get(r, j).clone() * inv.clone();
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..a.cols {
                let rj = a.get(r, j);
                if rj.is_zero() {
                    continue;
                }
                let v = a.get(i, j).clone() - f.clone() * rj.clone();
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Unit-pivot reduced echelon form; fails if a nonunit residue survives.
pub fn try_rref<R: Ring>(m: &Matrix<R>) -> Result<Echelon<R>, LaError> {
    let (a, pivots) = eliminate(m, m.cols);
    let rank = pivots.len();
    if (rank..a.rows).any(|i| a.row(i).iter().any(|x| !x.is_zero())) {
        return Err(LaError::DegenerateLift);
    }
    Ok(Echelon {
        reduced: a,
        rank,
        pivots,
    })
}

/// Reduced row echelon form over a field.
pub fn rref<R: Ring>(m: &Matrix<R>) -> Echelon<R> {
    try_rref(m).expect("rref over a field never leaves a residue")
}

pub fn rank<R: Ring>(m: &Matrix<R>) -> usize {
    rref(m).rank
}

fn kernel_from_echelon<R: Ring>(e: &Echelon<R>) -> Vec<Vec<R>> {
    let cols = e.reduced.cols;
    let zero = e.reduced.zero.clone();
    let one = zero.one_like();
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.reduced.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Right null space over a local ring (one vector per non-pivot column).
pub fn local_kernel<R: Ring>(m: &Matrix<R>) -> Result<Vec<Vec<R>>, LaError> {
    Ok(kernel_from_echelon(&try_rref(m)?))
}

/// Kernel over F[o]/(o²): lifted basis vectors `v0 + v1·o` with `m·v = 0` exactly.
pub fn dual_kernel_basis<R: Ring>(m: &Matrix<Dual<R>>) -> Result<Vec<Vec<Dual<R>>>, LaError> {
    local_kernel(m)
}

/// Canonical kernel subspace over a field.
pub fn kernel_basis<R: Ring>(m: &Matrix<R>) -> Subspace<R> {
    let vecs = kernel_from_echelon(&rref(m));
    Subspace::from_vectors(m.cols, vecs, m.zero.clone())
}

/// One solution of `a·x = b`, `Ok(None)` if inconsistent.
pub fn solve<R: Ring>(a: &Matrix<R>, b: &[R]) -> Result<Option<Vec<R>>, LaError> {
    assert_eq!(a.rows, b.len(), "solve: rhs length");
    let rhs = Matrix::from_cols(vec![b.to_vec()], a.rows, a.zero.clone());
    let aug = a.hstack(&rhs);
    let (red, pivots) = eliminate(&aug, a.cols);
    let n = a.cols;
    for i in pivots.len()..red.rows {
        if red.row(i)[..n].iter().any(|x| !x.is_zero()) {
            return Err(LaError::DegenerateLift);
        }
        if !red.get(i, n).is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![a.zero.clone(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = red.get(i, n).clone();
    }
    Ok(Some(x))
}

/// Solve `a·X = B` column by column.
pub fn solve_matrix<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Option<Matrix<R>>, LaError> {
    let mut cols = Vec::with_capacity(b.cols);
    for j in 0..b.cols {
        match solve(a, &b.col(j))? {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_cols(cols, a.cols, a.zero.clone())))
}

/// Subspace with a canonical basis: the nonzero rows of a reduced echelon form.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<R> {
    ambient: usize,
    basis: Matrix<R>,
    pivots: Vec<usize>,
}

impl<R: Ring> Subspace<R> {
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<R>>, zero: R) -> Self {
        let m = Matrix::from_rows(vectors, ambient, zero);
        let e = rref(&m);
        let basis = m_first_rows(&e.reduced, e.rank);
        Subspace {
            ambient,
            basis,
            pivots: e.pivots,
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix<R>) -> Self {
        Subspace::from_vectors(m.cols, m.row_vecs(), m.zero.clone())
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix<R>) -> Self {
        Subspace::row_space(&m.transpose())
    }

    pub fn zero_space(ambient: usize, zero: R) -> Self {
        Subspace {
            ambient,
            basis: Matrix::new(0, ambient, zero),
            pivots: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix<R> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<R>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[R]) -> Option<Vec<R>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<R> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![self.basis.zero.clone(); self.ambient];
        for (c, i) in coords.iter().zip(0..) {
            if c.is_zero() {
                continue;
            }
            for (j, r) in recon.iter_mut().enumerate() {
                *r = r.clone() + c.clone() * self.basis.get(i, j).clone();
            }
        }
        if recon == v {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[R]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace<R>) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<R>) -> Result<Subspace<R>, LaError> {
        if self.ambient != other.ambient {
            return Err(LaError::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut vecs = self.basis_vectors();
        vecs.extend(other.basis_vectors());
        Ok(Subspace::from_vectors(
            self.ambient,
            vecs,
            self.basis.zero.clone(),
        ))
    }

    /// Linear functionals vanishing on the subspace, as a canonical subspace of the dual.
    pub fn annihilator(&self) -> Subspace<R> {
        kernel_basis(&self.basis)
    }

    /// Image under the linear map `m` (vectors are columns: `v ↦ m·v`).
    pub fn image_under(&self, m: &Matrix<R>) -> Subspace<R> {
        let imgs = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_vectors(m.rows, imgs, self.basis.zero.clone())
    }
}

fn m_first_rows<R: Ring>(m: &Matrix<R>, k: usize) -> Matrix<R> {
    m.select_rows(&(0..k).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceComparison {
    pub equal: bool,
    pub sum_dim: usize,
    pub intersection_dim: usize,
}

pub fn subspace_ops<R: Ring>(
    a: &Subspace<R>,
    b: &Subspace<R>,
) -> Result<SubspaceComparison, LaError> {
    let s = a.sum(b)?;
    Ok(SubspaceComparison {
        equal: a == b,
        sum_dim: s.dim(),
        intersection_dim: a.dim() + b.dim() - s.dim(),
    })
}

/// Short hex digest of a scalar matrix, for reproducibility records.
pub fn fingerprint(m: &Matrix<Scalar>) -> String {
    let mut h = Sha256::new();
    h.update((m.rows as u64).to_le_bytes());
    h.update((m.cols as u64).to_le_bytes());
    for x in &m.data {
        h.update(x.canonical_bytes());
    }
    h.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Field, DEFAULT_PRIME};

    fn fp() -> Field {
        Field::prime(DEFAULT_PRIME).unwrap()
    }

    fn mat(f: &Field, rows: &[&[i64]]) -> Matrix<Scalar> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| f.int(x)).collect())
                .collect(),
            cols,
            f.zero(),
        )
    }

    #[test]
    fn trivial_examples() {
        let f = fp();
        let i2 = Matrix::identity(2, f.zero());
        let e = rref(&i2);
        assert_eq!(e.reduced, i2);
        assert_eq!(e.rank, 2);
        let z = Matrix::new(3, 4, f.zero());
        assert_eq!(rank(&z), 0);
        assert_eq!(kernel_basis(&Matrix::new(2, 3, f.zero())).dim(), 3);
        assert_eq!(kernel_basis(&Matrix::identity(4, f.zero())).dim(), 0);
    }

    #[test]
    fn subspace_predicates() {
        let f = fp();
        let a = Subspace::row_space(&mat(&f, &[&[1, 2, 3], &[0, 1, 1]]));
        let b = Subspace::row_space(&mat(&f, &[&[1, 3, 4], &[2, 5, 7]]));
        let c = subspace_ops(&a, &b).unwrap();
        assert!(c.equal);
        assert_eq!(c.sum_dim, 2);
        let z = Subspace::zero_space(3, f.zero());
        assert_eq!(subspace_ops(&a, &z).unwrap().intersection_dim, 0);
        assert!(a.contains(&[f.int(1), f.int(4), f.int(5)]));
        assert!(!a.contains(&[f.int(0), f.int(0), f.int(1)]));
        let w = Subspace::zero_space(4, f.zero());
        assert!(subspace_ops(&a, &w).is_err());
    }

    #[test]
    fn solve_and_inconsistency() {
        let f = fp();
        let a = mat(&f, &[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve(&a, &[f.int(3), f.int(1), f.int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![f.int(2), f.int(1)]);
        assert!(solve(&a, &[f.int(3), f.int(1), f.int(5)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn dual_kernel_examples() {
        let f = fp();
        let d = |a: i64, b: i64| Dual::new(f.int(a), f.int(b));
        let zero = d(0, 0);
        let m = Matrix::new(2, 3, zero.clone());
        let k = dual_kernel_basis(&m).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.iter().flatten().all(|x| x.b.is_zero()));
        let id = Matrix::from_rows(
            vec![vec![d(1, 5), d(0, 2)], vec![d(0, 7), d(1, 1)]],
            2,
            zero.clone(),
        );
        assert!(dual_kernel_basis(&id).unwrap().is_empty());
        // [o 1] has kernel (1, -o)
        let m = Matrix::from_rows(vec![vec![d(0, 1), d(1, 0)]], 2, zero.clone());
        let k = dual_kernel_basis(&m).unwrap();
        assert_eq!(k, vec![vec![d(1, 0), d(0, -1)]]);
        // [o] admits no unit pivot and leaves a residue
        let m = Matrix::from_rows(vec![vec![d(0, 1)]], 1, zero);
        assert_eq!(dual_kernel_basis(&m), Err(LaError::DegenerateLift));
    }
}
