//! The graded commutative side: bases of the symbol algebra, the substitution
//! ideal, harmonic complements, and the graded anti-linear involution.
//!
//! Degree-`d` symbols are spanned by `d`-fold products of the momentum
//! functions; the kernel of the substitution from the symmetric algebra and
//! its Fischer orthocomplement give exact harmonic lifts.

use std::collections::BTreeMap;

use crate::flag::FlagModel;
use crate::lie::SymElement;
use crate::linalg::{BlockedBasis, DenseMat, RowBasis, SparseVec, Weight};
use crate::mono::{monomials_of_degree, Mono};
use crate::poly::SymbolPoly;
use crate::scalar::GaussianRational;
use crate::{Error, Result};

/// Exact graded basis of the symbol algebra up to a degree bound, with
/// per-degree coordinate maps (weight-blocked echelon rows).
pub struct GradedBasisR {
    pub m: usize,
    pub max_degree: u32,
    pub degrees: Vec<RDegree>,
}

pub struct RDegree {
    pub basis: BlockedBasis<Mono>,
    /// Echelon rows as polynomials, in global insertion order.
    pub elems: Vec<SymbolPoly>,
    pub weights: Vec<Weight>,
}

impl RDegree {
    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    /// Global indices of the weight-`w` sub-block, in insertion order.
    pub fn block_indices(&self, w: &Weight) -> Vec<usize> {
        self.basis.block_rows(w)
    }
}

impl GradedBasisR {
    /// Row-reduces all degree-`d` products of momentum functions, degree by
    /// degree up to `max_degree`.
    pub fn build(model: &FlagModel, max_degree: u32) -> Result<GradedBasisR> {
        let m = model.m;
        let zw = &model.z_weights;
        let mut degrees: Vec<RDegree> = Vec::new();
        for d in 0..=max_degree {
            let mut basis: BlockedBasis<Mono> = BlockedBasis::new();
            let mut elems: Vec<SymbolPoly> = Vec::new();
            let mut weights: Vec<Weight> = Vec::new();
            if d == 0 {
                let one = SymbolPoly::one(m);
                let w = one.weight(zw).expect("constant is weight homogeneous");
                basis.insert(w.clone(), one.terms.clone());
                elems.push(one);
                weights.push(w);
            } else {
                let prev: Vec<SymbolPoly> = degrees[(d - 1) as usize].elems.clone();
                for b in &prev {
                    for a in 0..model.sl.dim {
                        let prod = model.mu[a].mul(b);
                        if prod.is_zero() {
                            continue;
                        }
                        let w = prod.weight(zw).ok_or_else(|| Error::Consistency {
                            anchor: "sec:cot".into(),
                            detail: "momentum product is not weight homogeneous".into(),
                        })?;
                        let ins = basis.insert(w.clone(), prod.terms.clone());
                        if let Some(g) = ins.new_row {
                            debug_assert_eq!(g, elems.len());
                            let row = basis
                                .block(&w)
                                .expect("block exists")
                                .row(basis_len_in_block(&basis, &w) - 1)
                                .clone();
                            elems.push(SymbolPoly { m, terms: row });
                            weights.push(w);
                        }
                    }
                }
            }
            degrees.push(RDegree {
                basis,
                elems,
                weights,
            });
        }
        Ok(GradedBasisR {
            m,
            max_degree,
            degrees,
        })
    }

    pub fn dim(&self, d: u32) -> usize {
        self.degrees[d as usize].dim()
    }

    /// Dense coordinates of a fiber-degree-`d` polynomial over the degree-`d`
    /// basis; `None` when outside the span (or not homogeneous of degree `d`).
    pub fn coords(&self, phi: &SymbolPoly, d: u32, z_weights: &[Vec<i64>]) -> Option<Vec<GaussianRational>> {
        if phi.is_zero() {
            return Some(vec![GaussianRational::zero(); self.dim(d)]);
        }
        if phi.p_degree() != Some(d) {
            return None;
        }
        let deg = &self.degrees[d as usize];
        let parts: Vec<(Weight, SparseVec<Mono>)> = phi
            .weight_split(z_weights)
            .into_iter()
            .map(|(w, p)| (w, p.terms))
            .collect();
        let sparse = deg.basis.coords_parts(&parts)?;
        let mut out = vec![GaussianRational::zero(); deg.dim()];
        for (i, c) in sparse {
            out[i] = c;
        }
        Some(out)
    }

    /// Reconstruct a polynomial from dense degree-`d` coordinates.
    pub fn from_coords(&self, coords: &[GaussianRational], d: u32) -> SymbolPoly {
        let deg = &self.degrees[d as usize];
        let mut out = SymbolPoly::zero(self.m);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&deg.elems[i].scale(c));
            }
        }
        out
    }
}

fn basis_len_in_block(basis: &BlockedBasis<Mono>, w: &Weight) -> usize {
    basis.block(w).map(|b| b.len()).unwrap_or(0)
}

/// Per-degree kernel of the substitution map and its Fischer-orthogonal
/// harmonic complement inside the symmetric algebra.
pub struct IdealData {
    pub degrees: Vec<IdealDegree>,
}

pub struct IdealDegree {
    /// All degree-`d` monomials over the Lie algebra basis, graded-lex order.
    pub monos: Vec<Mono>,
    /// Basis of the substitution kernel, in monomial coordinates.
    pub kernel: Vec<Vec<GaussianRational>>,
    /// Basis of the harmonic complement, in monomial coordinates.
    pub harmonics: Vec<Vec<GaussianRational>>,
    /// Maps symbol coordinates to harmonic coordinates (the inverse of the
    /// substitution restricted to harmonics).
    pub lift: DenseMat,
}

impl IdealDegree {
    pub fn sym_from_mono_coords(&self, coords: &[GaussianRational], dim: usize) -> SymElement {
        let mut out = SymElement::zero(dim);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&SymElement::from_mono(self.monos[i].clone(), c.clone()));
            }
        }
        out
    }
}

impl IdealData {
    pub fn build(model: &FlagModel, rb: &GradedBasisR, max_degree: u32) -> Result<IdealData> {
        let dim = model.sl.dim;
        let mut degrees = Vec::new();
        for d in 0..=max_degree {
            let monos = monomials_of_degree(dim, d);
            let rdim = rb.dim(d);
            // substitution matrix: symbol coordinates of each monomial image
            let mut subst = DenseMat::zeros(rdim, monos.len());
            for (j, mono) in monos.iter().enumerate() {
                let img = model.substitute(&SymElement::from_mono(mono.clone(), GaussianRational::one()));
                let coords = rb.coords(&img, d, &model.z_weights).ok_or_else(|| Error::Consistency {
                    anchor: "sec:RR".into(),
                    detail: format!("substituted monomial escapes the degree-{d} basis"),
                })?;
                for (i, c) in coords.into_iter().enumerate() {
                    *subst.at_mut(i, j) = c;
                }
            }
            let kernel = subst.kernel();
            if kernel.len() + rdim != monos.len() {
                return Err(Error::Consistency {
                    anchor: "sec:RR".into(),
                    detail: format!(
                        "degree {d}: kernel {} + rank {} != {}",
                        kernel.len(),
                        rdim,
                        monos.len()
                    ),
                });
            }
            // harmonics: Fischer-orthogonal complement of the kernel
            let harmonics = if kernel.is_empty() {
                DenseMat::identity(monos.len())
                    .a
                    .chunks(monos.len())
                    .map(|r| r.to_vec())
                    .collect::<Vec<_>>()
            } else {
                // constraint rows: bh(X^mono_j, kernel_r) as functions of j
                let kernel_elems: Vec<SymElement> = kernel
                    .iter()
                    .map(|v| sym_from_coords(&monos, v, dim))
                    .collect();
                let cons = DenseMat::from_fn(kernel_elems.len(), monos.len(), |r, j| {
                    model.sl.fischer_pair(
                        &SymElement::from_mono(monos[j].clone(), GaussianRational::one()),
                        &kernel_elems[r],
                    )
                    .conj()
                });
                // bh(h, k) = 0  <=>  sum_j h_j * bh(X^j, k) = 0 (linear in h)
                cons.kernel()
            };
            if harmonics.len() != rdim {
                return Err(Error::Consistency {
                    anchor: "rem:symm".into(),
                    detail: format!(
                        "degree {d}: harmonic dimension {} != symbol dimension {}",
                        harmonics.len(),
                        rdim
                    ),
                });
            }
            // direct sum check: kernel + harmonics spans everything
            {
                let mut rbas: RowBasis<usize> = RowBasis::new();
                for v in kernel.iter().chain(harmonics.iter()) {
                    let sv: SparseVec<usize> = v
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (i, c.clone()))
                        .collect();
                    rbas.insert(sv);
                }
                if rbas.len() != monos.len() {
                    return Err(Error::Consistency {
                        anchor: "rem:symm".into(),
                        detail: format!("degree {d}: kernel + harmonics do not span"),
                    });
                }
            }
            // substitution restricted to harmonics must be an isomorphism
            let mut sub_h = DenseMat::zeros(rdim, rdim);
            for (j, h) in harmonics.iter().enumerate() {
                let img = model.substitute(&sym_from_coords(&monos, h, dim));
                let coords = rb
                    .coords(&img, d, &model.z_weights)
                    .ok_or_else(|| Error::Consistency {
                        anchor: "sec:RR".into(),
                        detail: "harmonic image escapes the graded basis".into(),
                    })?;
                for (i, c) in coords.into_iter().enumerate() {
                    *sub_h.at_mut(i, j) = c;
                }
            }
            let lift = sub_h.inverse().ok_or_else(|| Error::Consistency {
                anchor: "thm:main".into(),
                detail: format!(
                    "degree {d}: substitution is not injective on harmonics; the generation hypothesis fails"
                ),
            })?;
            degrees.push(IdealDegree {
                monos,
                kernel,
                harmonics,
                lift,
            });
        }
        Ok(IdealData { degrees })
    }

    pub fn dim_ideal(&self, d: u32) -> usize {
        self.degrees[d as usize].kernel.len()
    }

    pub fn dim_sym(&self, d: u32) -> usize {
        self.degrees[d as usize].monos.len()
    }

    /// The unique harmonic element substituting to `phi`.
    pub fn harmonic_lift(
        &self,
        model: &FlagModel,
        rb: &GradedBasisR,
        phi: &SymbolPoly,
        d: u32,
    ) -> Result<SymElement> {
        let deg = &self.degrees[d as usize];
        let coords = rb
            .coords(phi, d, &model.z_weights)
            .ok_or_else(|| Error::Dimension(format!("polynomial is not a degree-{d} symbol")))?;
        let hcoords = deg.lift.mul_vec(&coords);
        let mut out = SymElement::zero(model.sl.dim);
        for (j, c) in hcoords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&sym_from_coords(&deg.monos, &deg.harmonics[j], model.sl.dim).scale(c));
            }
        }
        Ok(out)
    }

    /// Checks that the anti-linear involution respects the kernel, then
    /// applies it: lift, twist, substitute.
    pub fn sigma_r(
        &self,
        model: &FlagModel,
        rb: &GradedBasisR,
        phi: &SymbolPoly,
        d: u32,
    ) -> Result<SymbolPoly> {
        let h = self.harmonic_lift(model, rb, phi, d)?;
        Ok(model.substitute(&model.sl.sigma_sym(&h)))
    }

    /// Kernel stability of the involution: fails when the orbit geometry and
    /// the sign conventions disagree.
    pub fn sigma_kernel_check(&self, model: &FlagModel, d: u32) -> Result<()> {
        let deg = &self.degrees[d as usize];
        for v in &deg.kernel {
            let twisted = model.sl.sigma_sym(&sym_from_coords(&deg.monos, v, model.sl.dim));
            if !model.substitute(&twisted).is_zero() {
                return Err(Error::Consistency {
                    anchor: "prop:RjRk".into(),
                    detail: format!("involution does not preserve the degree-{d} kernel"),
                });
            }
        }
        Ok(())
    }

    /// For the full flag: the degree-`d` slice of the ideal generated by the
    /// casimirs must equal the substitution kernel.
    pub fn casimir_ideal_check(&self, model: &FlagModel, d: u32) -> Result<bool> {
        let deg = &self.degrees[d as usize];
        let dim = model.sl.dim;
        let mono_index: BTreeMap<Mono, usize> =
            deg.monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span: RowBasis<usize> = RowBasis::new();
        for cas in &model.casimirs {
            let k = cas.degree().expect("casimirs are homogeneous");
            if k > d {
                continue;
            }
            for g in monomials_of_degree(dim, d - k) {
                let prod = cas.mul(&SymElement::from_mono(g, GaussianRational::one()));
                let sv: SparseVec<usize> = prod
                    .terms
                    .iter()
                    .map(|(m, c)| (mono_index[m], c.clone()))
                    .collect();
                span.insert(sv);
            }
        }
        if span.len() != deg.kernel.len() {
            return Ok(false);
        }
        for v in &deg.kernel {
            let sv: SparseVec<usize> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect();
            if !span.contains(&sv) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn sym_from_coords(monos: &[Mono], coords: &[GaussianRational], dim: usize) -> SymElement {
    let mut out = SymElement::zero(dim);
    for (i, c) in coords.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&SymElement::from_mono(monos[i].clone(), c.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::FlagConfig;

    fn sl2_model() -> FlagModel {
        FlagModel::build(FlagConfig::projective(2)).unwrap()
    }

    #[test]
    fn sl2_graded_dimensions() {
        let model = sl2_model();
        let rb = GradedBasisR::build(&model, 4).unwrap();
        // dim R^d = 2d + 1 on the cone over the projective line
        for d in 0..=4u32 {
            assert_eq!(rb.dim(d), (2 * d + 1) as usize, "degree {d}");
        }
    }

    #[test]
    fn sl2_ideal_dimensions() {
        let model = sl2_model();
        let rb = GradedBasisR::build(&model, 3).unwrap();
        let ideal = IdealData::build(&model, &rb, 3).unwrap();
        // I^0 = 0, H^0 = S^0
        assert_eq!(ideal.dim_ideal(0), 0);
        // I^2 is the casimir line: dim S^2 = 6, dim R^2 = 5
        assert_eq!(ideal.dim_sym(2), 6);
        assert_eq!(ideal.dim_ideal(2), 1);
        // rank-nullity everywhere
        for d in 0..=3u32 {
            assert_eq!(ideal.dim_sym(d) - ideal.dim_ideal(d), rb.dim(d));
        }
    }

    #[test]
    fn sl2_casimir_spans_kernel() {
        let model = sl2_model();
        let rb = GradedBasisR::build(&model, 2).unwrap();
        let ideal = IdealData::build(&model, &rb, 2).unwrap();
        // the substituted casimir vanishes identically on the cone
        let img = model.substitute(&model.casimirs[0]);
        assert!(img.is_zero());
        assert!(ideal.casimir_ideal_check(&model, 2).unwrap());
    }

    #[test]
    fn harmonic_lift_roundtrip() {
        let model = sl2_model();
        let rb = GradedBasisR::build(&model, 3).unwrap();
        let ideal = IdealData::build(&model, &rb, 3).unwrap();
        let e = model.sl.index_of_name("E12").unwrap();
        let f = model.sl.index_of_name("E21").unwrap();
        let phi = model.mu[e].mul(&model.mu[f]);
        let h = ideal.harmonic_lift(&model, &rb, &phi, 2).unwrap();
        assert_eq!(model.substitute(&h), phi);
        // lift is Fischer-orthogonal to the kernel
        let deg = &ideal.degrees[2];
        for v in &deg.kernel {
            let k = sym_from_coords(&deg.monos, v, model.sl.dim);
            assert!(model.sl.fischer_pair(&h, &k).is_zero());
        }
    }

    #[test]
    fn sigma_r_involution() {
        let model = sl2_model();
        let rb = GradedBasisR::build(&model, 3).unwrap();
        let ideal = IdealData::build(&model, &rb, 3).unwrap();
        for d in 0..=3u32 {
            ideal.sigma_kernel_check(&model, d).unwrap();
        }
        let e = model.sl.index_of_name("E12").unwrap();
        let f = model.sl.index_of_name("E21").unwrap();
        // sigma_R(mu^e) = -mu^f
        let se = ideal.sigma_r(&model, &rb, &model.mu[e], 1).unwrap();
        assert_eq!(se, model.mu[f].neg());
        // involution on a mixed element
        let phi = model.mu[e]
            .mul(&model.mu[f])
            .scale(&GaussianRational::from_ratio(2, 3))
            .add(&model.mu[e].mul(&model.mu[e]).scale(&GaussianRational::i()));
        let s1 = ideal.sigma_r(&model, &rb, &phi, 2).unwrap();
        let s2 = ideal.sigma_r(&model, &rb, &s1, 2).unwrap();
        assert_eq!(s2, phi);
    }

    #[test]
    fn sl3_projective_dimensions() {
        let model = FlagModel::build(FlagConfig::projective(3)).unwrap();
        let rb = GradedBasisR::build(&model, 2).unwrap();
        // functions on the minimal orbit cone: (d+1)^3
        assert_eq!(rb.dim(0), 1);
        assert_eq!(rb.dim(1), 8);
        assert_eq!(rb.dim(2), 27);
        let ideal = IdealData::build(&model, &rb, 2).unwrap();
        assert_eq!(ideal.dim_ideal(2), 36 - 27);
        // the quadratic invariant substitutes to zero, but alone it does not
        // span the degree-2 kernel on a partial flag
        assert!(!ideal.casimir_ideal_check(&model, 2).unwrap());
    }

    #[test]
    fn substitution_equivariance() {
        // substitution intertwines the adjoint action with the momentum
        // Poisson action
        let model = sl2_model();
        let dim = model.sl.dim;
        let f = SymElement::generator(dim, 0)
            .mul(&SymElement::generator(dim, 2))
            .add(&SymElement::generator(dim, 1).scale(&GaussianRational::from_int(3)));
        for a in 0..dim {
            let lhs = model.substitute(&model.sl.ad_sym(a, &f));
            let rhs = model.mu[a].poisson(&model.substitute(&f));
            assert_eq!(lhs, rhs, "generator {a}");
        }
    }
}
