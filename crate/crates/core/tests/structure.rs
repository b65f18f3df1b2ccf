use opspace_core::combinat::{binomial, Subset, SubsetIndexer};
use opspace_core::exact::IntMatrix;
use opspace_core::fock::{car_check, fock_vs_hnk, unitary_w, w_sign, FockSampling};
use opspace_core::matrix::{operator_norm, ComplexMatrix, ToleranceConfig};
use opspace_core::sampling::{random_vector, rng};
use opspace_core::spaces::{
    build_hnk, build_phi, build_uij, check_grid_relation, epsilon_ij, hnk_exact, intersect,
    ones_decomposition_defect,
};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn euclid(v: &[opspace_core::C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn grid_relation_is_exact_up_to_five() {
    for n in 1..=5 {
        for k in 1..=n {
            let r = check_grid_relation(n, k).unwrap();
            let cells = (binomial(n, k - 1) * binomial(n, n - k)) as u64;
            assert_eq!(r.triples_checked, cells * cells);
            assert_eq!(r.violations, 0, "n={n} k={k}");
        }
    }
}

#[test]
fn gram_sums_are_scalar() {
    for n in 1..=6 {
        for k in 1..=n {
            let b = hnk_exact(n, k).unwrap();
            let (p, q) = b[0].shape();
            let mut left = IntMatrix::zeros(p, p);
            let mut right = IntMatrix::zeros(q, q);
            for x in &b {
                left = &left + &(x * &x.adjoint());
                right = &right + &(&x.adjoint() * x);
            }
            assert_eq!(left, IntMatrix::identity(p).scale(k as i64), "n={n} k={k}");
            assert_eq!(right, IntMatrix::identity(q).scale((n - k + 1) as i64), "n={n} k={k}");
        }
    }
}

#[test]
fn generators_are_sums_of_their_ones() {
    for n in 1..=6 {
        for k in 1..=n {
            assert_eq!(ones_decomposition_defect(n, k).unwrap(), 0, "n={n} k={k}");
        }
    }
}

#[test]
fn overlapping_uij_are_signed_units() {
    let n = 5;
    for k in 1..=n {
        let cols = SubsetIndexer::new(n, k - 1).unwrap();
        let rows = SubsetIndexer::new(n, n - k).unwrap();
        for (ci, left) in cols.iter().enumerate() {
            for (ri, right) in rows.iter().enumerate() {
                let u = build_uij(n, k, &left, &right).unwrap();
                let sign = epsilon_ij(n, k, &left, &right).unwrap();
                let unit = ComplexMatrix::unit(u.rows(), u.cols(), ri, ci).scale_real(sign.as_f64());
                assert_eq!(u, unit);
            }
        }
    }
}

#[test]
fn built_spaces_are_orthonormal() {
    let mut r = rng(7);
    for n in 1..=6 {
        let mut spaces: Vec<_> = (1..=n).map(|k| build_hnk(n, k).unwrap()).collect();
        spaces.push(build_phi(n).unwrap());
        for space in &spaces {
            for _ in 0..20 {
                let c = random_vector(&mut r, n);
                let got = space.norm_of(&c, &cfg()).unwrap();
                assert!((got - euclid(&c)).abs() <= 1e-8, "{} n={n}", space.name());
            }
        }
    }
}

#[test]
fn intersection_of_all_levels_matches_phi() {
    let n = 4;
    let all = intersect((1..=n).map(|k| build_hnk(n, k).unwrap()).collect()).unwrap();
    let phi = build_phi(n).unwrap();
    let mut r = rng(9);
    for _ in 0..10 {
        let c = random_vector(&mut r, n);
        let a = all.norm_of(&c, &cfg()).unwrap();
        let b = phi.norm_of(&c, &cfg()).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn car_holds_through_eight() {
    for n in 1..=8 {
        let r = car_check(n, &cfg()).unwrap();
        assert!(r.max_residual <= 1e-12 && r.pass, "n={n}: {r:?}");
    }
}

#[test]
fn sign_diagonal_is_well_defined_on_rows() {
    for n in 1..=7 {
        for k in 1..=n {
            for right in SubsetIndexer::new(n, n - k).unwrap().iter() {
                let signs: Vec<_> = right.complement(n).iter().map(|i| w_sign(n, &right, i).unwrap()).collect();
                assert!(signs.windows(2).all(|w| w[0] == w[1]), "n={n} k={k} J={right}");
            }
            let w = unitary_w(n, k).unwrap();
            assert!((operator_norm(&w, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn fock_representation_small() {
    let sampling = FockSampling {
        samples: 8,
        max_level: 3,
    };
    for n in 1..=4 {
        for k in 1..=n {
            let r = fock_vs_hnk(n, k, sampling, &cfg()).unwrap();
            assert!(r.pass, "n={n} k={k}: {r:?}");
        }
    }
}

#[test]
fn column_level_signs_are_not_consistent() {
    // On the column index I the sign depends on which i is inserted, which
    // is why the diagonal lives on the row level.
    let n = 3;
    let left = Subset::new([1]).unwrap();
    let via = |i: usize| {
        let right = left.with(i).complement(n);
        w_sign(n, &right, i).unwrap()
    };
    assert_ne!(via(2), via(3));
}
