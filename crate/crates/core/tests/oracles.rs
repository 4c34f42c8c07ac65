//! Independent recomputations of computed quantities, with the observed outputs frozen.

use std::collections::BTreeMap;

use hexalab::cohomology::{scalar_product, CochainBasisContext};
use hexalab::exactfield::{rng_from_seed, Dual, Field, Ring, Scalar, DEFAULT_PRIME};
use hexalab::exactla::{dual_kernel_basis, kernel_basis, rank, Matrix, Subspace};
use hexalab::exotic::eta_relation_matrix;
use hexalab::hexagon::{
    edge_vectors_infinitesimal, finite_o_coefficients, functional_matrix, functionals_from_blocks,
    vector_matrix, EtaParams, Family, DELTA5_VERTICES,
};
use hexalab::simplicial::{boundary_pentachora, delta1, random_cochain1, Simplex};
use rand::Rng;

fn fp() -> Field {
    Field::prime(DEFAULT_PRIME).unwrap()
}

fn s(x: &str) -> Simplex {
    Simplex::parse_digits(x).unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Largest k with a nonzero k×k minor.
fn minor_rank(m: &[Vec<i128>]) -> usize {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .rev()
        .find(|&k| {
            subsets(r, k).iter().any(|rows| {
                subsets(c, k).iter().any(|cols| {
                    let sub: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                        .collect();
                    det(&sub) != 0
                })
            })
        })
        .unwrap_or(0)
}

#[test]
fn vertex_relation_matrix_rank_matches_minor_oracle() {
    let q = Field::rational();
    let t = s("1234");
    let mut ranks = Vec::new();
    for seed in 0..24u64 {
        let mut rng = rng_from_seed(seed);
        let span = if seed < 12 { 9 } else { 1 };
        let table: BTreeMap<(u32, u32), i64> = (1..=4u32)
            .flat_map(|i| (1..=4u32).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|k| (k, rng.gen_range(-span..=span)))
            .collect();
        let eta = EtaParams::from_fn(&[1, 2, 3, 4], |i, j| q.int(table[&(i, j)]));
        let lib = rank(&eta_relation_matrix(&eta, &t));
        let oracle: Vec<Vec<i128>> = (1..=4u32)
            .map(|i| {
                [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
                    .iter()
                    .map(|&(a, b)| {
                        if a == i {
                            table[&(a, b)] as i128
                        } else if b == i {
                            table[&(b, a)] as i128
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(lib, minor_rank(&oracle), "seed {seed}");
        ranks.push(lib);
    }
    assert!(ranks[..12].iter().all(|&r| r == 4), "{ranks:?}");
}

#[test]
fn dual_lifts_have_constant_parts_spanning_the_limit_space() {
    let f = fp();
    let u = s("12345");
    let tets = u.faces(3).unwrap();
    for seed in 0..5u64 {
        let b = random_cochain1(&f, &DELTA5_VERTICES, &mut rng_from_seed(seed));
        let mut blocks = BTreeMap::new();
        for t in &tets {
            let (c1, c2) = finite_o_coefficients(&b, t).unwrap();
            let zero = Dual::constant(f.zero());
            let rows = (0..6)
                .map(|r| {
                    (0..2)
                        .map(|q| Dual::new(c1.get(r, q).clone(), c2.get(r, q).clone()))
                        .collect()
                })
                .collect();
            blocks.insert(t.clone(), Matrix::from_rows(rows, 2, zero));
        }
        let funcs = functionals_from_blocks(&blocks, &u).unwrap();
        let m = functional_matrix(&funcs, &tets, &Dual::constant(f.zero()));
        let lifts = dual_kernel_basis(&m).unwrap();
        assert_eq!(lifts.len(), 5, "seed {seed}");
        let m0 = m.map(f.zero(), |d| d.constant_part());
        let m1 = m.map(f.zero(), |d| d.b.clone());
        let v0: Vec<Vec<Scalar>> = lifts
            .iter()
            .map(|v| v.iter().map(|d| d.constant_part()).collect())
            .collect();
        for (lift, c) in lifts.iter().zip(&v0) {
            let v1: Vec<Scalar> = lift.iter().map(|d| d.b.clone()).collect();
            let first = m0.mul_vec(&v1);
            let cross = m1.mul_vec(c);
            assert!(first
                .iter()
                .zip(&cross)
                .all(|(a, b)| (a.clone() + b.clone()).is_zero()));
            assert!(m0.mul_vec(c).iter().all(|x| x.is_zero()));
        }
        let span = Subspace::from_vectors(10, v0, f.zero());
        assert_eq!(span, kernel_basis(&m0));
        assert_eq!(span.dim(), 5);
    }
}

fn rank_mod_p(m: &Matrix<Scalar>, p: u64) -> usize {
    let mut a: Vec<Vec<u128>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).as_u64().unwrap() as u128)
                .collect()
        })
        .collect();
    let p = p as u128;
    let pow = |mut b: u128, mut e: u128| {
        let mut r = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut r = 0;
    for c in 0..m.cols() {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = pow(a[r][c], p - 2);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let k = a[i][c] * inv % p;
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - k * y) % p;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn coboundary_ranks_match_modular_oracle() {
    let f = fp();
    for seed in 1..=4u64 {
        let b = random_cochain1(&f, &DELTA5_VERTICES, &mut rng_from_seed(seed));
        let ctx = CochainBasisContext::build(&delta1(&b)).unwrap();
        let d3 = ctx.delta3_matrix();
        let d4 = ctx.delta4_matrix();
        assert_eq!((d3.rows(), d3.cols()), (90, 45));
        assert_eq!((d4.rows(), d4.cols()), (45, 90));
        let (r3, r4) = (
            rank_mod_p(&d3, DEFAULT_PRIME),
            rank_mod_p(&d4, DEFAULT_PRIME),
        );
        assert_eq!((r3, r4), (rank(&d3), rank(&d4)));
        assert_eq!((r3, r4), (44, 45), "seed {seed}");
        assert_eq!((45 - r3, (90 - r4) - r3), (1, 1));
    }
}

#[test]
fn coboundary_rank_over_rationals() {
    let q = Field::rational();
    let b = random_cochain1(&q, &DELTA5_VERTICES, &mut rng_from_seed(3));
    let ctx = CochainBasisContext::build(&delta1(&b)).unwrap();
    assert_eq!(rank(&ctx.delta3_matrix()), 44);
}

#[test]
fn scalar_product_matches_direct_formula() {
    let f = fp();
    for seed in 0..6u64 {
        let mut rng = rng_from_seed(seed);
        let b = random_cochain1(&f, &DELTA5_VERTICES, &mut rng);
        let w = delta1(&b);
        for u in boundary_pentachora() {
            let c: Vec<Scalar> = (0..10).map(|_| f.sample_any(&mut rng)).collect();
            let cp: Vec<Scalar> = (0..10).map(|_| f.sample_any(&mut rng)).collect();
            let mut want = f.zero();
            for (pos, &omit) in u.vertices().iter().enumerate().rev() {
                let v: Vec<u32> = u
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&x| x != omit)
                    .collect();
                let n = u
                    .faces(3)
                    .unwrap()
                    .iter()
                    .position(|t| t.vertices() == v.as_slice())
                    .unwrap();
                let (i, j, k, l) = (v[0], v[1], v[2], v[3]);
                let om = |a, b, c| w.get(a, b, c).clone();
                let (x, y, xp, yp) = (
                    c[2 * n].clone(),
                    c[2 * n + 1].clone(),
                    cp[2 * n].clone(),
                    cp[2 * n + 1].clone(),
                );
                let term = (om(j, k, l) - om(i, k, l))
                    * (om(i, j, k) * om(i, j, l) * x * xp - om(i, k, l) * om(j, k, l) * y * yp);
                want = if pos % 2 == 0 {
                    want + term
                } else {
                    want - term
                };
            }
            let got = scalar_product(&u, &c, &cp, &w);
            assert_eq!(got, want);
            assert!(!got.is_zero(), "seed {seed} {u}");
            let zero = vec![f.zero(); 10];
            assert!(scalar_product(&u, &zero, &c, &w).is_zero());
        }
    }
}

#[test]
fn edge_vectors_are_permitted_and_span_five() {
    let f = fp();
    let fam = Family::random_infinitesimal(&f, &mut rng_from_seed(21));
    let Family::Infinitesimal { omega, .. } = &fam else {
        unreachable!()
    };
    for u in boundary_pentachora() {
        let tets = u.faces(3).unwrap();
        let psi = vector_matrix(
            &edge_vectors_infinitesimal(omega, &u).unwrap(),
            &tets,
            &f.zero(),
        );
        let phi = functional_matrix(&fam.functionals(&u).unwrap(), &tets, &f.zero());
        let product = phi.mul(&psi);
        for i in 0..10 {
            for j in 0..10 {
                let direct = (0..10).fold(f.zero(), |acc, k| {
                    acc + phi.get(i, k).clone() * psi.get(k, j).clone()
                });
                assert!(direct.is_zero() && product.get(i, j).is_zero());
            }
        }
        assert_eq!(rank_mod_p(&psi, DEFAULT_PRIME), 5);
    }
}
