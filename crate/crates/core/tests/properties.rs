use hexalab::cohomology::{isotropy_check, CochainBasisContext};
use hexalab::exactfield::{rng_from_seed, Dual, Field, FieldSpec, Ring, Scalar, DEFAULT_PRIME};
use hexalab::exactla::{dual_kernel_basis, kernel_basis, rank, rref, Matrix};
use hexalab::exotic::{euler_characteristic, general_complex, homology_profile};
use hexalab::hexagon::{
    full_hexagon_check, permitted_space, EtaParams, Family, GammaParams, DELTA5_VERTICES,
};
use hexalab::simplicial::{
    all_clusters, boundary_pentachora, delta1, random_cochain1, Simplex, Vertex,
};
use hexalab::verify::{run, RunConfig, Suite};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn fields() -> Vec<Field> {
    vec![
        Field::prime(DEFAULT_PRIME).unwrap(),
        Field::prime(7).unwrap(),
        Field::binary(16).unwrap(),
        Field::rational(),
    ]
}

fn random_matrix(f: &Field, rows: usize, cols: usize, seed: u64, sparse: bool) -> Matrix<Scalar> {
    let mut rng = rng_from_seed(seed);
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if sparse && rng.gen_bool(0.6) {
                        f.zero()
                    } else {
                        f.sample_any(&mut rng)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(data, cols, f.zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        for f in fields() {
            let mut rng = rng_from_seed(seed);
            let (a, b, c) = (f.sample_any(&mut rng), f.sample_any(&mut rng), f.sample_any(&mut rng));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() - a.clone(), f.zero());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.try_inv().unwrap(), f.one());
            }
        }
    }

    #[test]
    fn dual_arithmetic(seed in any::<u64>()) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let mut rng = rng_from_seed(seed);
        let mut d = || Dual::new(f.sample_any(&mut rng), f.sample_any(&mut rng));
        let (x, y) = (d(), d());
        let o = Dual::new(f.zero(), f.one());
        prop_assert!((o.clone() * o).is_zero());
        prop_assert_eq!((x.clone() * y.clone()).constant_part(), x.constant_part() * y.constant_part());
        prop_assert_eq!((x.clone() + y.clone()).constant_part(), x.constant_part() + y.constant_part());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity_and_canonical_rref(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, sparse in any::<bool>()) {
        for f in [Field::prime(7).unwrap(), Field::binary(8).unwrap(), Field::rational()] {
            let m = random_matrix(&f, rows, cols, seed, sparse);
            prop_assert_eq!(rank(&m) + kernel_basis(&m).dim(), cols);
            let e = rref(&m);
            prop_assert_eq!(&rref(&e.reduced).reduced, &e.reduced);
            let mut g = random_matrix(&f, rows, rows, seed ^ 0x5a5a, false);
            let mut n = 0u64;
            while rank(&g) < rows {
                n += 1;
                g = random_matrix(&f, rows, rows, seed.wrapping_add(n << 32), false);
            }
            prop_assert_eq!(&rref(&g.mul(&m)).reduced, &e.reduced);
            for v in kernel_basis(&m).basis_vectors() {
                prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn dual_kernel_lifts(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..7) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let m0 = random_matrix(&f, rows, cols, seed, true);
        let m1 = random_matrix(&f, rows, cols, seed.wrapping_add(1), false);
        let m = Matrix::from_rows(
            (0..rows).map(|i| (0..cols).map(|j| Dual::new(m0.get(i, j).clone(), m1.get(i, j).clone())).collect()).collect(),
            cols,
            Dual::constant(f.zero()),
        );
        if let Ok(k) = dual_kernel_basis(&m) {
            prop_assert_eq!(k.len(), cols - rank(&m0));
            for v in k {
                let v0: Vec<Scalar> = v.iter().map(|d| d.a.clone()).collect();
                let v1: Vec<Scalar> = v.iter().map(|d| d.b.clone()).collect();
                prop_assert!(m0.mul_vec(&v0).iter().all(|x| x.is_zero()));
                let s: Vec<Scalar> = m0.mul_vec(&v1).into_iter().zip(m1.mul_vec(&v0)).map(|(a, b)| a + b).collect();
                prop_assert!(s.iter().all(|x| x.is_zero()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>()) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let b = random_cochain1(&f, &DELTA5_VERTICES, &mut rng_from_seed(seed));
        let ctx = CochainBasisContext::build(&delta1(&b)).unwrap();
        let d3 = ctx.delta3_matrix();
        prop_assert!(ctx.delta4_matrix().mul(&d3).is_zero());
        prop_assert!(d3.mul_vec(&ctx.z3_cochain()).iter().all(|x| x.is_zero()));
        let mut rng = rng_from_seed(seed ^ 1);
        let c: Vec<Scalar> = (0..45).map(|_| f.sample_any(&mut rng)).collect();
        prop_assert!(ctx.delta4_matrix().mul_vec(&d3.mul_vec(&c)).iter().all(|x| x.is_zero()));
        for u in boundary_pentachora() {
            prop_assert_eq!(isotropy_check(&u, &ctx), ctx.z3_gram(&u).is_zero());
        }
    }

    #[test]
    fn euler_identity_on_subcomplexes(seed in any::<u64>(), mask in 1u8..64) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let k: Vec<Simplex> =
            boundary_pentachora().into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, u)| u).collect();
        let mut vs: Vec<Vertex> = k.iter().flat_map(|u| u.vertices().to_vec()).collect();
        vs.sort_unstable();
        vs.dedup();
        let eta = EtaParams::random(&f, &vs, &mut rng_from_seed(seed));
        if let Ok(g) = general_complex(&k, &eta) {
            let h = homology_profile(&g.complex);
            let alt: i64 = h.homology_dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
            prop_assert_eq!(alt, euler_characteristic(g.complex.dims()));
            prop_assert!(g.blocks.values().all(|b| rank(b) == 2));
        }
    }

    #[test]
    fn permitted_spaces_are_five_dimensional(seed in any::<u64>(), infinitesimal in any::<bool>()) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let mut rng = rng_from_seed(seed);
        let fam = if infinitesimal { Family::random_infinitesimal(&f, &mut rng) } else { Family::random_generic(&f, &mut rng) };
        prop_assume!(fam.genericity().is_ok());
        for u in boundary_pentachora() {
            let funcs = fam.functionals(&u).unwrap();
            let v = permitted_space(&u, &funcs).unwrap();
            prop_assert_eq!(v.dim(), 5);
            let tets = u.faces(3).unwrap();
            let phi = hexalab::hexagon::functional_matrix(&funcs, &tets, &f.zero());
            for b in v.basis_vectors() {
                prop_assert!(phi.mul_vec(&b).iter().all(|x| x.is_zero()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hexagon_dims_invariant_under_relabeling(seed in any::<u64>()) {
        let f = Field::prime(DEFAULT_PRIME).unwrap();
        let mut rng = rng_from_seed(seed);
        let g = GammaParams::random(&f, &DELTA5_VERTICES, &mut rng);
        let mut perm: Vec<Vertex> = DELTA5_VERTICES.to_vec();
        perm.shuffle(&mut rng);
        let pi = |v: Vertex| perm[(v - 1) as usize];
        let gp = GammaParams::from_fn(&DELTA5_VERTICES, |i, j| g.get(pi(i), pi(j)).clone());
        let dims = |g: GammaParams<Scalar>| {
            let r = full_hexagon_check(&Family::Generic(g)).unwrap();
            (r.full_dim, r.pentachoron_dims.clone(), r.splittings.iter().map(|s| (s.boundary_dim, s.fiber, s.pass)).collect::<Vec<_>>())
        };
        prop_assert_eq!(dims(g), dims(gp));
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        for suite in [Suite::Pentachoron, Suite::Cocycle4, Suite::Exotic] {
            let c = RunConfig::new(suite, FieldSpec::Prime { modulus: DEFAULT_PRIME }, seed, 2);
            prop_assert_eq!(run(&c).unwrap().to_json(), run(&c).unwrap().to_json());
        }
    }
}

#[test]
fn clusters_and_complements_share_boundaries() {
    for c in all_clusters() {
        assert_eq!(c.boundary, c.complement().unwrap().boundary);
    }
}
