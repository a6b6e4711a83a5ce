use ginv::certify::{certify, CertContext};
use ginv::geninv::{drazin, group_inverse, mary_inverse, moore_penrose, Existence, InverseKind};
use ginv::io::{format_json, format_matrix_market, parse_matrix_str, AnyMatrix};
use ginv::linalg::{rank, range_basis, subspace_equal};
use ginv::spectral::{spectral_projection_schur, SpectralSet};
use ginv::{Backend, Complex64 as C, Field, Matrix, Rational, TolerancePolicy};
use proptest::prelude::*;

type Q = Matrix<Rational>;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Square integer matrices with entries in `[-2, 2]` and a random rank.
fn low_rank(max_n: usize) -> impl Strategy<Value = Q> {
    (2..=max_n).prop_flat_map(|n| {
        (1..=n).prop_flat_map(move |r| {
            (
                proptest::collection::vec(-2i64..=2, n * r),
                proptest::collection::vec(-2i64..=2, r * n),
            )
                .prop_map(move |(f, g)| {
                    let f = Q::from_fn(n, r, |i, j| Rational::from_i64(f[i * r + j]));
                    let g = Q::from_fn(r, n, |i, j| Rational::from_i64(g[i * n + j]));
                    f.mul(&g)
                })
        })
    })
}

fn rationals(rows: usize, cols: usize) -> impl Strategy<Value = Q> {
    proptest::collection::vec((-9i64..=9, 1i64..=7), rows * cols).prop_map(move |v| {
        Q::from_fn(rows, cols, |i, j| {
            let (p, q) = v[i * cols + j];
            Rational::from_ratio(p, q)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moore_penrose_satisfies_the_four_equations(a in low_rank(5)) {
        let cert = certify(&a, &moore_penrose(&a, &pol()), InverseKind::MoorePenrose, &CertContext::empty(), &pol()).unwrap();
        prop_assert!(cert.passed());
        let af = a.to_complex();
        let cert = certify(&af, &moore_penrose(&af, &pol()), InverseKind::MoorePenrose, &CertContext::empty(), &pol()).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert.identities);
    }

    #[test]
    fn group_inverse_exists_iff_rank_is_stable(a in low_rank(5)) {
        let stable = rank(&a, &pol()) == rank(&a.mul(&a), &pol());
        let g = group_inverse(&a, &pol()).unwrap();
        prop_assert_eq!(g.exists(), stable);
        if let Existence::Exists(g) = g {
            prop_assert_eq!(a.mul(&g), g.mul(&a));
            prop_assert_eq!(a.mul(&g).mul(&a), a.clone());
            prop_assert_eq!(g.mul(&a).mul(&g), g.clone());
        }
    }

    #[test]
    fn drazin_inverse_is_a_commuting_outer_inverse(a in low_rank(6)) {
        let d = drazin(&a, &pol()).unwrap();
        let x = &d.inverse;
        prop_assert_eq!(x.mul(&a).mul(x), x.clone());
        prop_assert_eq!(a.mul(x), x.mul(&a));
        let ak = a.pow(d.index);
        prop_assert_eq!(ak.mul(&a).mul(x), ak.clone());
        // the index is the first point where the rank stops dropping
        prop_assert_eq!(rank(&ak, &pol()), rank(&ak.mul(&a), &pol()));
        if d.index > 0 {
            let prev = a.pow(d.index - 1);
            prop_assert!(rank(&prev, &pol()) > rank(&ak, &pol()));
        }
    }

    #[test]
    fn inverse_along_d_is_the_outer_inverse_with_the_ranges_of_d(a in low_rank(5), seed in any::<u64>()) {
        let n = a.rows();
        let d = Q::from_fn(n, n, |i, j| Rational::from_i64(((seed >> ((i * n + j) % 60)) & 3) as i64 - 1));
        match mary_inverse(&a, &d, &pol()).unwrap() {
            Existence::Exists(b) => {
                prop_assert_eq!(b.mul(&a).mul(&b), b.clone());
                prop_assert!(subspace_equal(&range_basis(&b, &pol()), &range_basis(&d, &pol()), &pol()).unwrap());
                let cert = certify(&a, &b, InverseKind::Mary, &CertContext::along(d.clone()), &pol()).unwrap();
                prop_assert!(cert.passed());
            }
            Existence::NotExists(_) => {
                // either (AD)♯ is missing or N(AD) ⊄ N(D); since N(D) ⊆ N(AD)
                // the latter is a rank drop
                let ad = a.mul(&d);
                let stable = rank(&ad, &pol()) == rank(&ad.mul(&ad), &pol());
                prop_assert!(!stable || rank(&ad, &pol()) < rank(&d, &pol()));
            }
        }
    }

    #[test]
    fn rational_json_round_trips(a in rationals(3, 4)) {
        let text = format_json(&a);
        let back = parse_matrix_str(&text, Backend::Exact).unwrap();
        prop_assert_eq!(back, AnyMatrix::Exact(a));
    }

    #[test]
    fn matrix_market_round_trips_floats(v in proptest::collection::vec(-1e6f64..1e6, 6)) {
        let m = Matrix::from_fn(2, 3, |i, j| C::new(v[i * 3 + j], 0.0));
        let text = format_matrix_market(&m).unwrap();
        let back = parse_matrix_str(&text, Backend::Float).unwrap();
        prop_assert_eq!(back, AnyMatrix::Float(m));
    }

    #[test]
    fn spectral_projections_of_distinct_eigenvalues_partition_identity(
        d in proptest::collection::btree_set(-20i32..=20, 2..6),
        upper in proptest::collection::vec(-1.0f64..1.0, 15),
    ) {
        let eig: Vec<f64> = d.into_iter().map(|x| x as f64 / 4.0).collect();
        let n = eig.len();
        let a = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => C::new(eig[i], 0.0),
            std::cmp::Ordering::Less => C::new(upper[(i * n + j) % upper.len()], 0.0),
            std::cmp::Ordering::Greater => C::new(0.0, 0.0),
        });
        let mut total = Matrix::<C>::zeros(n, n);
        for &l in &eig {
            let set = SpectralSet::targets_with_capture(&a, &[C::new(l, 0.0)], 0.1).unwrap();
            let p = spectral_projection_schur(&a, &set, &pol()).unwrap();
            prop_assert_eq!(p.range.dim(), 1);
            total = total.add(&p.matrix);
        }
        prop_assert!(total.sub(&Matrix::identity(n)).max_abs() < 1e-9);
    }
}
