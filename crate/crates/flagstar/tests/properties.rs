//! Property-based invariants over randomized exact data.

use proptest::prelude::*;

use flagstar::mono::Mono;
use flagstar::poly::{parse_symbol_poly, SymbolPoly};
use flagstar::scalar::{parse_scalar, GaussianRational};
use flagstar::weyl::{parse_weyl_op, OpMono, WeylOp};

fn scalar_strategy() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, c, d)| {
        GaussianRational::from_ratio(a, b)
            + GaussianRational::i() * GaussianRational::from_ratio(c, d)
    })
}

fn symbol_strategy(m: usize) -> impl Strategy<Value = SymbolPoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..3, 2 * m), scalar_strategy()),
        0..5,
    )
    .prop_map(move |terms| {
        let mut out = SymbolPoly::zero(m);
        for (exps, c) in terms {
            let t = SymbolPoly {
                m,
                terms: [(Mono(exps), GaussianRational::one())].into_iter().collect(),
            };
            out = out.add(&t.scale(&c));
        }
        out
    })
}

fn weyl_strategy(m: usize) -> impl Strategy<Value = WeylOp> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..3, m),
            prop::collection::vec(0u32..3, m),
            scalar_strategy(),
        ),
        0..4,
    )
    .prop_map(move |terms| {
        let mut out = WeylOp::zero(m);
        for (z, d, c) in terms {
            let mut t = WeylOp::zero(m);
            t.terms.insert(
                OpMono {
                    z: Mono(z),
                    d: Mono(d),
                },
                GaussianRational::one(),
            );
            out = out.add(&t.scale(&c));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), &a * &c + &b * &c);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn scalar_serialization_roundtrip(a in scalar_strategy()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn poly_ring_axioms(a in symbol_strategy(2), b in symbol_strategy(2), c in symbol_strategy(2)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn poly_fiber_split_resums(a in symbol_strategy(2)) {
        let parts = a.p_degree_split();
        let mut sum = SymbolPoly::zero(2);
        for (d, c) in &parts {
            prop_assert_eq!(c.p_degree(), Some(*d));
            sum = sum.add(c);
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn poly_serialization_roundtrip(a in symbol_strategy(2)) {
        prop_assert_eq!(parse_symbol_poly(&a.to_string(), 2).unwrap(), a);
    }

    #[test]
    fn poisson_bracket_laws(a in symbol_strategy(1), b in symbol_strategy(1), c in symbol_strategy(1)) {
        // antisymmetry
        prop_assert_eq!(a.poisson(&b), b.poisson(&a).neg());
        // Leibniz
        prop_assert_eq!(
            a.poisson(&b.mul(&c)),
            a.poisson(&b).mul(&c).add(&b.mul(&a.poisson(&c)))
        );
        // Jacobi
        let j = a.poisson(&b.poisson(&c))
            .add(&b.poisson(&c.poisson(&a)))
            .add(&c.poisson(&a.poisson(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn weyl_associativity_and_symbols(a in weyl_strategy(2), b in weyl_strategy(2), c in weyl_strategy(2)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        let j = a.order();
        let k = b.order();
        let ab = a.compose(&b);
        prop_assert!(ab.order() <= j + k);
        prop_assert_eq!(
            ab.symbol(j + k).unwrap(),
            a.symbol(j).unwrap().mul(&b.symbol(k).unwrap())
        );
        if j + k > 0 {
            prop_assert_eq!(
                a.commutator(&b).symbol(j + k - 1).unwrap(),
                a.symbol(j).unwrap().poisson(&b.symbol(k).unwrap())
            );
        }
    }

    #[test]
    fn weyl_involutions(a in weyl_strategy(2), b in weyl_strategy(2)) {
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!(a.compose(&b).transpose(), b.transpose().compose(&a.transpose()));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.compose(&b).bar(), a.bar().compose(&b.bar()));
        prop_assert_eq!(a.transpose().bar(), a.bar().transpose());
    }

    #[test]
    fn weyl_serialization_roundtrip(a in weyl_strategy(2)) {
        prop_assert_eq!(parse_weyl_op(&a.to_string(), 2).unwrap(), a);
    }

    #[test]
    fn alpha_is_parity(a in symbol_strategy(2), b in symbol_strategy(2)) {
        // multiplicative and compatible with the bracket sign rule
        prop_assert_eq!(a.mul(&b).alpha(), a.alpha().mul(&b.alpha()));
        prop_assert_eq!(a.poisson(&b).alpha(), a.alpha().poisson(&b.alpha()).neg());
        prop_assert_eq!(a.alpha().alpha(), a);
    }
}
