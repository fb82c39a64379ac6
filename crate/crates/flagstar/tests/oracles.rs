//! Frozen expected values, each computed by an independent route before
//! being asserted against the pipeline.

use flagstar::classical::{GradedBasisR, IdealData};
use flagstar::dmodule::{FilteredBasisD, TraceData};
use flagstar::flag::{FlagConfig, FlagModel};
use flagstar::linalg::{all_pivots_positive, DenseMat};
use flagstar::quant::QuantEngine;
use flagstar::scalar::GaussianRational;
use flagstar::weyl::WeylOp;

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}

/// Hilbert series oracle for the projective plane: regular functions on the
/// minimal orbit cone have graded dimension (d+1)^3.
#[test]
fn sl3_projective_hilbert_series() {
    let model = FlagModel::build(FlagConfig::projective(3)).unwrap();
    let rb = GradedBasisR::build(&model, 4).unwrap();
    for d in 0..=4u32 {
        let expect = ((d + 1) * (d + 1) * (d + 1)) as usize;
        assert_eq!(rb.dim(d), expect, "degree {d}");
    }
}

/// Hilbert series oracle for the full flag of sl_3: the nilpotent cone has
/// series (1-t^2)(1-t^3)/(1-t)^8; expand independently by convolution.
#[test]
fn sl3_full_flag_hilbert_series() {
    let dmax = 6usize;
    // (1-t)^{-8} coefficients by iterated prefix sums of 1,1,1,...
    let mut inv = vec![1u64; dmax + 1];
    for _ in 0..8 - 1 {
        for i in 1..=dmax {
            inv[i] += inv[i - 1];
        }
    }
    // multiply by (1 - t^2)(1 - t^3) = 1 - t^2 - t^3 + t^5
    let coeff = |d: i64| -> i64 {
        let get = |k: i64| if k < 0 { 0 } else { inv[k as usize] as i64 };
        get(d) - get(d - 2) - get(d - 3) + get(d - 5)
    };
    let model = FlagModel::build(FlagConfig::full(3)).unwrap();
    let rb = GradedBasisR::build(&model, dmax as u32).unwrap();
    for d in 0..=dmax {
        assert_eq!(rb.dim(d as u32) as i64, coeff(d as i64), "degree {d}");
    }
}

/// The trace on quadratic generator words, solved by invariant projection,
/// must satisfy the casimir scalar identity: summing the quadratic invariant
/// through the trace reproduces the central character.
#[test]
fn trace_casimir_cross_check_all_configs() {
    for (config, dmax) in [
        (FlagConfig::projective(2), 4u32),
        (FlagConfig::projective(3), 2),
        (FlagConfig::full(3), 2),
    ] {
        let model = FlagModel::build(config).unwrap();
        let fb = FilteredBasisD::build(&model, dmax).unwrap();
        let tr = TraceData::build(&model, &fb).unwrap();
        let zw = &model.z_weights;
        // kappa from any nonzero pairing
        let dim = model.sl.dim;
        let mut kappa = None;
        for a in 0..dim {
            for b in 0..dim {
                let g = model.sl.gram.at(a, b);
                let t = tr
                    .eval(&model.eta[a].compose(&model.eta[b]), zw)
                    .unwrap();
                if g.is_zero() {
                    assert!(t.is_zero(), "off-form pairing must vanish");
                } else {
                    let k = &t / g;
                    match &kappa {
                        None => kappa = Some(k),
                        Some(prev) => assert_eq!(*prev, k, "pairing not proportional"),
                    }
                }
            }
        }
        let kappa = kappa.unwrap();
        // kappa * dim(g) equals the quadratic central character
        let expect = kappa * GaussianRational::from_int(dim as i64);
        assert_eq!(expect, model.casimir_scalars[0]);
    }
}

/// sl_2 trace values frozen from the casimir identity 3*kappa = -1/2.
#[test]
fn sl2_trace_frozen_values() {
    let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
    let fb = FilteredBasisD::build(&model, 4).unwrap();
    let tr = TraceData::build(&model, &fb).unwrap();
    let zw = &model.z_weights;
    let e = model.sl.index_of_name("E12").unwrap();
    let f = model.sl.index_of_name("E21").unwrap();
    let h = model.sl.index_of_name("H1").unwrap();
    assert_eq!(tr.eval(&WeylOp::one(1), zw).unwrap(), q(1, 1));
    assert_eq!(
        tr.eval(&model.eta[e].compose(&model.eta[f]), zw).unwrap(),
        q(-1, 6)
    );
    assert_eq!(
        tr.eval(&model.eta[h].compose(&model.eta[h]), zw).unwrap(),
        q(-1, 3)
    );
}

/// Positivity of the Fischer pairing certified independently by an exact
/// LDL* factorization of its Gram matrix on quadratic elements.
#[test]
fn fischer_gram_ldlt_oracle() {
    use flagstar::lie::{SpecialLinear, SymElement};
    use flagstar::mono::monomials_of_degree;
    let sl = SpecialLinear::new(3);
    let monos = monomials_of_degree(sl.dim, 2);
    let gram = DenseMat::from_fn(monos.len(), monos.len(), |i, j| {
        sl.fischer_pair(
            &SymElement::from_mono(monos[i].clone(), GaussianRational::one()),
            &SymElement::from_mono(monos[j].clone(), GaussianRational::one()),
        )
    });
    let pivots = gram.ldlt_pivots().unwrap();
    assert!(all_pivots_positive(&pivots));
}

/// Quantizing the momentum generators returns the twisted generators, and
/// the splitting rows at filtration degree one are forced.
#[test]
fn degree_one_splitting_is_forced() {
    let engine = QuantEngine::build(FlagConfig::projective(3), 2).unwrap();
    for a in 0..engine.model.sl.dim {
        assert_eq!(
            engine.bq(&engine.model.mu[a]).unwrap(),
            engine.model.eta[a]
        );
    }
}

/// The inner-product Gram of degree one equals the negated trace pairing of
/// generators twisted by the involution; for sl_2 it is positive diagonal up
/// to basis mixing, with <mu^e | mu^e> = 1/6.
#[test]
fn sl2_inner_product_values() {
    let engine = QuantEngine::build(FlagConfig::projective(2), 2).unwrap();
    let e = engine.model.sl.index_of_name("E12").unwrap();
    let h = engine.model.sl.index_of_name("H1").unwrap();
    let ip_e = engine
        .inner_product(&engine.model.mu[e], &engine.model.mu[e])
        .unwrap();
    assert_eq!(ip_e, q(1, 6));
    let ip_h = engine
        .inner_product(&engine.model.mu[h], &engine.model.mu[h])
        .unwrap();
    assert_eq!(ip_h, q(1, 3));
}

/// Membership tests must reject operators outside the generated algebra:
/// bare coordinate multiplication is not a twisted-generator word.
#[test]
fn coordinate_multiplication_is_outside_the_algebra() {
    let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
    let fb = FilteredBasisD::build(&model, 4).unwrap();
    let z = WeylOp::z(1, 0);
    assert!(fb.coords(&z, &model.z_weights).is_none());
}

/// Canonical serialization stays frozen: these strings are the golden-file
/// format downstream tooling parses.
#[test]
fn golden_canonical_text() {
    let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
    let e = model.sl.index_of_name("E12").unwrap();
    let f = model.sl.index_of_name("E21").unwrap();
    let h = model.sl.index_of_name("H1").unwrap();
    assert_eq!(model.eta[e].to_string(), "(1)*d1");
    assert_eq!(model.eta[h].to_string(), "(-1) + (-2)*z1*d1");
    assert_eq!(model.eta[f].to_string(), "(-1)*z1 + (-1)*z1^2*d1");
    assert_eq!(model.mu[h].to_string(), "(-2)*z1*p1");
    let engine = QuantEngine::build(FlagConfig::projective(2), 2).unwrap();
    let cs = engine
        .star_coeffs(&engine.model.mu[e].clone(), &engine.model.mu[f].clone())
        .unwrap();
    assert_eq!(cs[0].to_string(), "(-1)*z1^2*p1^2");
    assert_eq!(cs[1].to_string(), "(-1)*z1*p1");
    assert_eq!(cs[2].to_string(), "(-1/6)");
}

/// The dual grassmannian carries the same graded dimensions and central
/// characters as the projective plane.
#[test]
fn sl3_dual_grassmannian_symmetry() {
    let plane = FlagModel::build(FlagConfig::projective(3)).unwrap();
    let dual = FlagModel::build(FlagConfig::new(3, vec![2]).unwrap()).unwrap();
    assert_eq!(dual.m, plane.m);
    let rb_plane = GradedBasisR::build(&plane, 3).unwrap();
    let rb_dual = GradedBasisR::build(&dual, 3).unwrap();
    for d in 0..=3u32 {
        assert_eq!(rb_plane.dim(d), rb_dual.dim(d), "degree {d}");
    }
    assert_eq!(plane.casimir_scalars[0], dual.casimir_scalars[0]);
    // odd-degree characters vanish: the transpose anti-automorphism fixes
    // the symmetrized image while flipping its sign
    assert!(plane.casimir_scalars[1].is_zero());
    assert!(dual.casimir_scalars[1].is_zero());
}

/// Ideal kernel dimensions for sl_2: the quadratic line and its multiples.
#[test]
fn sl2_ideal_is_casimir_generated() {
    let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
    let rb = GradedBasisR::build(&model, 4).unwrap();
    let ideal = IdealData::build(&model, &rb, 4).unwrap();
    assert_eq!(ideal.dim_ideal(0), 0);
    assert_eq!(ideal.dim_ideal(1), 0);
    assert_eq!(ideal.dim_ideal(2), 1);
    // dim I^d = dim S^{d-2} for the principal ideal over three variables
    assert_eq!(ideal.dim_ideal(3), 3);
    assert_eq!(ideal.dim_ideal(4), 6);
    for d in 0..=4u32 {
        assert!(ideal.casimir_ideal_check(&model, d).unwrap(), "degree {d}");
    }
}
