use std::collections::BTreeSet;

use coadstrat::catalog::{self, ComplexHeisenbergOrder};
use coadstrat::free::{free_algebra, WeightedAlphabet};
use coadstrat::io;
use coadstrat::report::{quasi_norm_class, quotient_normalize, Normalized};
use coadstrat::scalar::{Rational, Scalar};
use coadstrat::stratification::{
    canonical_representative, dim_matrix, jump_invariant, skew_matrix, subset_order, JumpInvariant,
};
use coadstrat::{Covector, NilpotentLieAlgebra, Vector};
use num_traits::Zero;
use proptest::prelude::*;

type Q = Rational;

fn algebras() -> Vec<NilpotentLieAlgebra<Q>> {
    vec![
        catalog::heisenberg(1),
        catalog::heisenberg(2),
        catalog::complex_heisenberg(ComplexHeisenbergOrder::ImaginaryFirst),
        catalog::complex_heisenberg(ComplexHeisenbergOrder::RealFirst),
        catalog::engel(),
        catalog::filiform(3),
        catalog::filiform(4),
        catalog::l6_21(),
        free_algebra(&WeightedAlphabet::uniform(2).unwrap(), 3).unwrap().into_algebra(),
        free_algebra(&WeightedAlphabet::new(vec![1, 2]).unwrap(), 4).unwrap().into_algebra(),
    ]
}

fn rational() -> impl Strategy<Value = Q> {
    prop_oneof![
        1 => Just(Q::zero()),
        3 => (-12i64..=12, 1i64..=5).prop_map(|(n, d)| Q::from_ratio(n, d)),
    ]
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=5).prop_map(|(n, d)| Q::from_ratio(n, d))
}

/// An algebra index with a covector and a Lie algebra element of matching size.
fn point() -> impl Strategy<Value = (usize, Vec<Q>, Vec<Q>)> {
    let dims: Vec<usize> = algebras().iter().map(NilpotentLieAlgebra::dim).collect();
    (0..dims.len()).prop_flat_map(move |k| {
        let n = dims[k];
        (Just(k), prop::collection::vec(rational(), n), prop::collection::vec(rational(), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jump_table_properties((k, xi, _) in point()) {
        let alg = &algebras()[k];
        let xi = Covector(xi);
        let d = dim_matrix(alg, &xi).unwrap();
        prop_assert!(d.violations().is_empty(), "{:?}", d.violations());
        let m = skew_matrix(alg, &xi).unwrap();
        for j in 0..=alg.dim() {
            for i in 0..=alg.dim() {
                prop_assert_eq!(d.get(j, i), m.leading_block(j, i).rank());
            }
        }
        let inv = JumpInvariant::from_dim_matrix(&d);
        prop_assert_eq!(inv.to_dim_matrix(), d);
    }

    #[test]
    fn orbit_dimension_is_even((k, xi, _) in point()) {
        let alg = &algebras()[k];
        let inv = jump_invariant(alg, &Covector(xi)).unwrap();
        prop_assert_eq!(inv.orbit_dim() % 2, 0);
        for i in 1..=alg.dim() {
            prop_assert!(inv.j(i).iter().all(|j| j <= i));
        }
    }

    #[test]
    fn invariants_are_coadjoint_invariant((k, xi, x) in point()) {
        let alg = &algebras()[k];
        let xi = Covector(xi);
        let moved = alg.coadjoint_exp(&Vector(x), &xi).unwrap();
        prop_assert_eq!(dim_matrix(alg, &moved).unwrap(), dim_matrix(alg, &xi).unwrap());
    }

    #[test]
    fn invariants_are_dilation_invariant((k, xi, _) in point(), lambda in positive()) {
        let alg = &algebras()[k];
        let xi = Covector(xi);
        let dilated = alg.dilate_dual(&lambda, &xi).unwrap();
        prop_assert_eq!(jump_invariant(alg, &dilated).unwrap(), jump_invariant(alg, &xi).unwrap());
    }

    #[test]
    fn canonical_representative_is_a_cross_section((k, xi, x) in point()) {
        let alg = &algebras()[k];
        let xi = Covector(xi);
        let inv = jump_invariant(alg, &xi).unwrap();
        let c = canonical_representative(alg, &xi).unwrap();
        prop_assert_eq!(jump_invariant(alg, &c).unwrap(), inv.clone());
        for j in inv.coarse().iter() {
            prop_assert!(c[j - 1].is_zero());
        }
        prop_assert_eq!(canonical_representative(alg, &c).unwrap(), c.clone());
        let moved = alg.coadjoint_exp(&Vector(x), &xi).unwrap();
        prop_assert_eq!(canonical_representative(alg, &moved).unwrap(), c);
    }

    #[test]
    fn quasi_norm_class_is_dilation_invariant((k, xi, _) in point(), lambda in positive()) {
        let alg = &algebras()[k];
        let xi = Covector(xi);
        prop_assume!(!xi.is_zero());
        let dilated = alg.dilate_dual(&lambda, &xi).unwrap();
        prop_assert_eq!(quasi_norm_class(alg, &dilated).unwrap(), quasi_norm_class(alg, &xi).unwrap());
        let a = quotient_normalize(alg, &xi).unwrap();
        let b = quotient_normalize(alg, &dilated).unwrap();
        prop_assert_eq!(a.class(alg), quasi_norm_class(alg, &xi).unwrap());
        if let Normalized::Exact(n) = &a {
            prop_assert_eq!(&b, &a);
            prop_assert_eq!(jump_invariant(alg, n).unwrap(), jump_invariant(alg, &xi).unwrap());
        }
    }

    #[test]
    fn subset_order_is_total(
        a in prop::collection::btree_set(1usize..8, 0..6),
        b in prop::collection::btree_set(1usize..8, 0..6),
        c in prop::collection::btree_set(1usize..8, 0..6),
    ) {
        use std::cmp::Ordering::*;
        prop_assert_eq!(subset_order(&a, &b), subset_order(&b, &a).reverse());
        prop_assert_eq!(subset_order(&a, &b) == Equal, a == b);
        if subset_order(&a, &b) != Greater && subset_order(&b, &c) != Greater {
            prop_assert_ne!(subset_order(&a, &c), Greater);
        }
        if !a.is_empty() {
            prop_assert_eq!(subset_order(&a, &BTreeSet::new()), Less);
        }
    }

    #[test]
    fn algebra_json_round_trips((k, _, _) in point()) {
        let alg = &algebras()[k];
        let text = io::algebra_json(alg, None, None).to_string();
        let back = io::parse_algebra(&text).unwrap();
        prop_assert_eq!(back.weights(), alg.weights());
        prop_assert_eq!(back.upper_entries(), alg.upper_entries());
    }

    #[test]
    fn vector_json_round_trips(v in prop::collection::vec(rational(), 0..8)) {
        let text = io::scalars_json(&v).to_string();
        prop_assert_eq!(io::parse_vector(&text).unwrap(), v.clone());
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        if !v.is_empty() {
            prop_assert_eq!(io::parse_vector(&parts.join(", ")).unwrap(), v);
        }
    }
}
