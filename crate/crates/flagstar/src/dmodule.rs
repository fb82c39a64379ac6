//! Filtered linear-algebra model of the generated operator algebra.
//!
//! The span of all words in the twisted generators is echelonized degree by
//! degree (weight block by weight block); every later question — the trace,
//! the Gram form, the quantization splitting — is exact linear algebra over
//! these rows. The anti-linear word involution is defined on spanning words
//! and certified well-defined against every relation the reduction finds.

use std::collections::BTreeMap;

use crate::flag::FlagModel;
use crate::linalg::{BlockedBasis, RowBasis, SparseVec, Weight};
use crate::weyl::{OpMono, WeylOp};
use crate::{Error, Result};
use crate::scalar::GaussianRational;

/// How an echelon row came to exist.
#[derive(Clone, Debug)]
pub enum Provenance {
    /// The unit operator.
    Unit,
    /// Inserted as `eta[gen] * row[src]`, reduced by `combo` and normalized
    /// by `scale`.
    Word {
        gen: usize,
        src: usize,
        combo: Vec<(usize, GaussianRational)>,
        scale: GaussianRational,
    },
}

/// Exact basis of the filtered operator algebra up to a degree bound.
///
/// Rows are indexed globally in insertion order; rows `0..dim_at[d]` form a
/// basis of the filtration step `<= d`, so the inclusion maps are prefix
/// inclusions.
pub struct FilteredBasisD {
    pub m: usize,
    pub max_degree: u32,
    pub basis: BlockedBasis<OpMono>,
    pub weights: Vec<Weight>,
    pub degrees: Vec<u32>,
    pub dim_at: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

impl FilteredBasisD {
    pub fn build(model: &FlagModel, max_degree: u32) -> Result<FilteredBasisD> {
        let m = model.m;
        let zw = &model.z_weights;
        let mut basis: BlockedBasis<OpMono> = BlockedBasis::new();
        let mut weights: Vec<Weight> = Vec::new();
        let mut degrees: Vec<u32> = Vec::new();
        let mut provenance: Vec<Provenance> = Vec::new();
        let mut dim_at: Vec<usize> = Vec::new();

        let one = WeylOp::one(m);
        let w0 = one.weight(zw).expect("unit weight");
        basis.insert(w0.clone(), one.terms.clone());
        weights.push(w0);
        degrees.push(0);
        provenance.push(Provenance::Unit);
        dim_at.push(1);

        for d in 1..=max_degree {
            // Rows created at degree d-1, each multiplied by every generator,
            // span the next filtration step together with what is already
            // stored.
            let lo = if d >= 2 { dim_at[(d - 2) as usize] } else { 0 };
            let hi = dim_at[(d - 1) as usize];
            for src in lo..hi {
                let src_op = op_of(&basis, &weights, src, m);
                for gen in 0..model.sl.dim {
                    let prod = model.eta[gen].compose(&src_op);
                    if prod.is_zero() {
                        continue;
                    }
                    let w = prod.weight(zw).ok_or_else(|| Error::Consistency {
                        anchor: "sec:RR".into(),
                        detail: "generator word is not weight homogeneous".into(),
                    })?;
                    let ins = basis.insert(w.clone(), prod.terms.clone());
                    if let Some(g) = ins.new_row {
                        debug_assert_eq!(g, weights.len());
                        weights.push(w);
                        degrees.push(d);
                        provenance.push(Provenance::Word {
                            gen,
                            src,
                            combo: ins.combo,
                            scale: ins.scale,
                        });
                    }
                }
            }
            dim_at.push(weights.len());
        }
        Ok(FilteredBasisD {
            m,
            max_degree,
            basis,
            weights,
            degrees,
            dim_at,
            provenance,
        })
    }

    /// Reconstructs a basis from serialized rows (cache reload). The caller
    /// vouches for the content; structural sanity (pivot uniqueness, degree
    /// monotonicity) is still asserted.
    pub fn from_rows(
        m: usize,
        max_degree: u32,
        rows: Vec<(u32, Weight, Provenance, WeylOp)>,
    ) -> Result<FilteredBasisD> {
        let mut basis: BlockedBasis<OpMono> = BlockedBasis::new();
        let mut weights = Vec::with_capacity(rows.len());
        let mut degrees = Vec::with_capacity(rows.len());
        let mut provenance = Vec::with_capacity(rows.len());
        let mut last = 0u32;
        for (d, w, p, op) in rows {
            if d < last {
                return Err(Error::Parse("cache rows out of degree order".into()));
            }
            last = d;
            basis.push_trusted(w.clone(), op.terms);
            weights.push(w);
            degrees.push(d);
            provenance.push(p);
        }
        let mut dim_at = Vec::with_capacity((max_degree + 1) as usize);
        for d in 0..=max_degree {
            dim_at.push(degrees.iter().filter(|&&x| x <= d).count());
        }
        Ok(FilteredBasisD {
            m,
            max_degree,
            basis,
            weights,
            degrees,
            dim_at,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Dimension of the filtration step `<= d`.
    pub fn dim_at(&self, d: u32) -> usize {
        self.dim_at[d as usize]
    }

    /// The echelon row as an operator.
    pub fn op(&self, i: usize) -> WeylOp {
        op_of(&self.basis, &self.weights, i, self.m)
    }

    /// Global indices of rows created at exactly degree `d`.
    pub fn rows_of_degree(&self, d: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Sparse coordinates of an operator over the basis rows; `None` when the
    /// operator lies outside the built span.
    pub fn coords(&self, op: &WeylOp, z_weights: &[Vec<i64>]) -> Option<Vec<(usize, GaussianRational)>> {
        let parts: Vec<(Weight, SparseVec<OpMono>)> = op
            .weight_split(z_weights)
            .into_iter()
            .map(|(w, o)| (w, o.terms))
            .collect();
        self.basis.coords_parts(&parts)
    }

    /// Reconstructs an operator from sparse coordinates.
    pub fn op_from_coords(&self, coords: &[(usize, GaussianRational)]) -> WeylOp {
        let mut out = WeylOp::zero(self.m);
        for (i, c) in coords {
            out = out.add(&self.op(*i).scale(c));
        }
        out
    }
}

fn op_of(basis: &BlockedBasis<OpMono>, _weights: &[Weight], i: usize, m: usize) -> WeylOp {
    let (_, terms) = basis.row_view(i);
    WeylOp {
        m,
        terms: terms.clone(),
    }
}

/// The anti-linear word involution on the filtered basis, with its
/// well-definedness certificate.
pub struct SigmaD {
    pub depth: u32,
    /// Image of each basis row with degree `<= depth`.
    pub ops: Vec<WeylOp>,
    /// Coordinates of each image over the basis rows.
    pub coords: Vec<Vec<(usize, GaussianRational)>>,
}

impl SigmaD {
    /// Defines the involution on spanning words and verifies consistency on
    /// every dependent word the echelon reduction discovers.
    pub fn build(model: &FlagModel, fb: &FilteredBasisD, depth: u32) -> Result<SigmaD> {
        let m = model.m;
        let zw = &model.z_weights;
        let count = fb.dim_at(depth);
        let mut ops: Vec<WeylOp> = Vec::with_capacity(count);
        let mut coords: Vec<Vec<(usize, GaussianRational)>> = Vec::with_capacity(count);
        ops.push(WeylOp::one(m));
        coords.push(vec![(0, GaussianRational::one())]);

        // sigma on a generator: sign * eta[perm]
        let sigma_eta = |a: usize| -> WeylOp {
            let p = model.sl.sigma_perm[a];
            let s = model.sl.sigma_sign[a];
            model.eta[p].scale(&GaussianRational::from_int(s))
        };

        let mut next_row = 1usize;
        for d in 1..=depth {
            let lo = if d >= 2 { fb.dim_at(d - 2) } else { 0 };
            let hi = fb.dim_at(d - 1);
            for src in lo..hi {
                let src_op = fb.op(src);
                for gen in 0..model.sl.dim {
                    let word = model.eta[gen].compose(&src_op);
                    if word.is_zero() {
                        continue;
                    }
                    let sigma_word = sigma_eta(gen).compose(&ops[src]);
                    let created = next_row < count
                        && matches!(
                            &fb.provenance[next_row],
                            Provenance::Word { gen: g, src: s, .. } if *g == gen && *s == src
                        );
                    if created {
                        let Provenance::Word { combo, scale, .. } = &fb.provenance[next_row] else {
                            unreachable!()
                        };
                        // word = sum combo_l row_l + scale * row_i
                        let mut img = sigma_word;
                        for (l, c) in combo {
                            img = img.sub(&ops[*l].scale(&c.conj()));
                        }
                        let img = img.scale(&scale.conj().inv());
                        let img_coords = fb.coords(&img, zw).ok_or_else(|| Error::Consistency {
                            anchor: "cor:ga".into(),
                            detail: "involution image escapes the filtration".into(),
                        })?;
                        ops.push(img);
                        coords.push(img_coords);
                        next_row += 1;
                    } else {
                        // dependent word: certify the involution respects the
                        // relation
                        let combo = fb.coords(&word, zw).ok_or_else(|| Error::Consistency {
                            anchor: "sec:RR".into(),
                            detail: "spanning word escapes the filtration".into(),
                        })?;
                        let mut expect = WeylOp::zero(m);
                        for (l, c) in &combo {
                            expect = expect.add(&ops[*l].scale(&c.conj()));
                        }
                        if expect != sigma_word {
                            return Err(Error::Consistency {
                                anchor: "cor:ga".into(),
                                detail: format!(
                                    "word involution is ill-defined on a degree-{d} relation"
                                ),
                            });
                        }
                    }
                }
            }
        }

        let sigma = SigmaD { depth, ops, coords };
        // involution check on every row
        for i in 0..count {
            let back = sigma.apply(fb, &sigma.ops[i], &model.z_weights)?;
            if back != fb.op(i) {
                return Err(Error::Consistency {
                    anchor: "cor:ga".into(),
                    detail: format!("involution fails to square to the identity on row {i}"),
                });
            }
        }
        Ok(sigma)
    }

    /// Applies the involution to any operator in the covered filtration span.
    pub fn apply(&self, fb: &FilteredBasisD, op: &WeylOp, z_weights: &[Vec<i64>]) -> Result<WeylOp> {
        let coords = fb.coords(op, z_weights).ok_or_else(|| Error::Dimension(
            "operator outside the filtration span".into(),
        ))?;
        let mut out = WeylOp::zero(fb.m);
        for (i, c) in coords {
            if i >= self.ops.len() {
                return Err(Error::Dimension(format!(
                    "operator needs degree beyond the involution depth {}",
                    self.depth
                )));
            }
            out = out.add(&self.ops[i].scale(&c.conj()));
        }
        Ok(out)
    }
}

/// The invariant trace as exact data.
///
/// Every weight-homogeneous element of nonzero weight `w` equals
/// `[eta^{H_i}, v] / w_i`, so it is itself a commutator and the trace
/// vanishes on it identically. Only the weight-zero block needs linear
/// algebra: its commutator span is generated by the root generators paired
/// against opposite-weight rows, and the invariant projection exists exactly
/// when that span has codimension one and misses the unit.
pub struct TraceData {
    comm_zero: RowBasis<OpMono>,
    unit_rem: SparseVec<OpMono>,
    zero_weight: Weight,
    /// Trace of every basis row.
    pub t_basis: Vec<GaussianRational>,
}

impl TraceData {
    pub fn build(model: &FlagModel, fb: &FilteredBasisD) -> Result<TraceData> {
        let zw = &model.z_weights;
        let rank = model.sl.n - 1;
        let zero_weight = vec![0i64; rank];
        let mut comm_zero: RowBasis<OpMono> = RowBasis::new();
        // weight-zero commutators: root generator against rows of the
        // opposite weight (Cartan generators act diagonally and contribute
        // nothing in weight zero)
        for a in 0..model.sl.dim {
            let wa = &model.sl.basis_weights[a];
            if wa.iter().all(|&x| x == 0) {
                continue;
            }
            let neg: Weight = wa.iter().map(|&x| -x).collect();
            for j in 0..fb.len() {
                if fb.weights[j] != neg {
                    continue;
                }
                let c = model.eta[a].commutator(&fb.op(j));
                if c.is_zero() {
                    continue;
                }
                debug_assert_eq!(c.weight(zw).as_ref(), Some(&zero_weight));
                comm_zero.insert(c.terms);
            }
        }
        let dim_zero = fb.weights.iter().filter(|w| **w == zero_weight).count();
        if comm_zero.len() + 1 != dim_zero {
            return Err(Error::Consistency {
                anchor: "prop:T".into(),
                detail: format!(
                    "weight-zero commutator span has dimension {} in a block of dimension {}",
                    comm_zero.len(),
                    dim_zero
                ),
            });
        }
        let unit = WeylOp::one(fb.m);
        let unit_rem = comm_zero.reduce(&unit.terms).1;
        if unit_rem.is_empty() {
            return Err(Error::Consistency {
                anchor: "prop:T".into(),
                detail: "the unit lies in the commutator span; no invariant projection exists".into(),
            });
        }
        let mut data = TraceData {
            comm_zero,
            unit_rem,
            zero_weight,
            t_basis: Vec::new(),
        };
        let mut t_basis = Vec::with_capacity(fb.len());
        for j in 0..fb.len() {
            let t = if fb.weights[j] == data.zero_weight {
                data.eval_homogeneous(&fb.weights[j], &fb.op(j))?
            } else {
                GaussianRational::zero()
            };
            t_basis.push(t);
        }
        data.t_basis = t_basis;
        Ok(data)
    }

    fn eval_homogeneous(&self, w: &Weight, op: &WeylOp) -> Result<GaussianRational> {
        if *w != self.zero_weight {
            // v = [eta^{H_i}, v] / w_i exhibits v as a commutator
            return Ok(GaussianRational::zero());
        }
        let rem = self.comm_zero.reduce(&op.terms).1;
        // remainder must be proportional to the reduced unit
        if rem.is_empty() {
            return Ok(GaussianRational::zero());
        }
        let (key, uc) = self.unit_rem.iter().next_back().expect("unit remainder nonzero");
        let Some(rc) = rem.get(key) else {
            return Err(Error::Consistency {
                anchor: "prop:T".into(),
                detail: "invariant projection is inconsistent".into(),
            });
        };
        let c = rc / uc;
        for (k, v) in &rem {
            let expect = self.unit_rem.get(k).map(|u| &c * u);
            if expect.as_ref() != Some(v) {
                return Err(Error::Consistency {
                    anchor: "prop:T".into(),
                    detail: "invariant projection is inconsistent".into(),
                });
            }
        }
        if rem.len() != self.unit_rem.len() {
            return Err(Error::Consistency {
                anchor: "prop:T".into(),
                detail: "invariant projection is inconsistent".into(),
            });
        }
        Ok(c)
    }

    /// The unique scalar with `op - T(op) * 1` in the commutator span.
    ///
    /// The argument must lie in the built filtration span; membership of the
    /// weight-zero part is verified by the reduction, while nonzero-weight
    /// parts are commutators outright by the Cartan identity.
    pub fn eval(&self, op: &WeylOp, z_weights: &[Vec<i64>]) -> Result<GaussianRational> {
        let mut total = GaussianRational::zero();
        for (w, part) in op.weight_split(z_weights) {
            total += &self.eval_homogeneous(&w, &part)?;
        }
        Ok(total)
    }
}

/// Adjoint action of a basis generator: `A -> [eta^x, A]`. Preserves every
/// filtration step.
pub fn ad_action(model: &FlagModel, x: usize, op: &WeylOp) -> WeylOp {
    model.eta[x].commutator(op)
}

/// Verifies that the only vectors killed by every `[eta^x, .]` inside the
/// filtration step `<= depth` are the constants.
pub fn invariants_are_constants(model: &FlagModel, fb: &FilteredBasisD, depth: u32) -> Result<bool> {
    use crate::linalg::DenseMat;
    let zw = &model.z_weights;
    let rank = model.sl.n - 1;
    let zero_w = vec![0i64; rank];
    let candidates: Vec<usize> = (0..fb.dim_at(depth))
        .filter(|&i| fb.weights[i] == zero_w)
        .collect();
    if candidates.is_empty() {
        return Ok(false);
    }
    // Iteratively intersect kernels of the ad maps restricted to the current
    // candidate space.
    let q = candidates.len();
    let mut space = DenseMat::identity(q);
    for a in 0..model.sl.dim {
        if space.cols == 0 {
            break;
        }
        // coordinates of [eta^a, op_cand] stacked
        let images: Vec<Vec<(usize, GaussianRational)>> = candidates
            .iter()
            .map(|&i| {
                let c = model.eta[a].commutator(&fb.op(i));
                fb.coords(&c, zw).ok_or_else(|| Error::Consistency {
                    anchor: "prop:T".into(),
                    detail: "adjoint action escapes the filtration".into(),
                })
            })
            .collect::<Result<_>>()?;
        let mut keys: Vec<usize> = images
            .iter()
            .flat_map(|v| v.iter().map(|(i, _)| *i))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let key_pos: BTreeMap<usize, usize> = keys.iter().cloned().enumerate().map(|(p, k)| (k, p)).collect();
        let mut mat = DenseMat::zeros(keys.len().max(1), q);
        for (col, img) in images.iter().enumerate() {
            for (i, c) in img {
                *mat.at_mut(key_pos[i], col) = c.clone();
            }
        }
        let restricted = mat.mul(&space);
        let ker = restricted.kernel();
        let mut next = DenseMat::zeros(q, ker.len());
        for (j, v) in ker.iter().enumerate() {
            let col = space.mul_vec(v);
            for i in 0..q {
                *next.at_mut(i, j) = col[i].clone();
            }
        }
        space = next;
    }
    if space.cols != 1 {
        return Ok(false);
    }
    // the surviving line must be the unit row
    let unit_pos = candidates.iter().position(|&i| i == 0).expect("unit is weight zero");
    let v: Vec<GaussianRational> = (0..space.rows).map(|i| space.at(i, 0).clone()).collect();
    if v[unit_pos].is_zero() {
        return Ok(false);
    }
    Ok(v
        .iter()
        .enumerate()
        .all(|(i, c)| i == unit_pos || c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::FlagConfig;
    use crate::classical::GradedBasisR;

    fn sl2_setup(dmax: u32) -> (FlagModel, FilteredBasisD) {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        let fb = FilteredBasisD::build(&model, dmax).unwrap();
        (model, fb)
    }

    #[test]
    fn sl2_filtered_dimensions() {
        let (model, fb) = sl2_setup(4);
        // dim D_{<=d} = (d+1)^2 over the projective line
        for d in 0..=4u32 {
            assert_eq!(fb.dim_at(d), ((d + 1) * (d + 1)) as usize, "degree {d}");
        }
        // graded consistency with the symbol side
        let rb = GradedBasisR::build(&model, 4).unwrap();
        for d in 1..=4u32 {
            assert_eq!(fb.dim_at(d) - fb.dim_at(d - 1), rb.dim(d));
        }
    }

    #[test]
    fn sl2_trace_values() {
        let (model, fb) = sl2_setup(4);
        let tr = TraceData::build(&model, &fb).unwrap();
        let zw = &model.z_weights;
        // T(1) = 1
        assert_eq!(tr.eval(&WeylOp::one(1), zw).unwrap(), GaussianRational::one());
        // T(eta^x) = 0
        for a in 0..model.sl.dim {
            assert!(tr.eval(&model.eta[a], zw).unwrap().is_zero());
        }
        let e = model.sl.index_of_name("E12").unwrap();
        let f = model.sl.index_of_name("E21").unwrap();
        let h = model.sl.index_of_name("H1").unwrap();
        // T(eta^e eta^f) = -1/6, T(eta^h eta^h) = -1/3
        let tef = tr.eval(&model.eta[e].compose(&model.eta[f]), zw).unwrap();
        assert_eq!(tef, GaussianRational::from_ratio(-1, 6));
        let thh = tr.eval(&model.eta[h].compose(&model.eta[h]), zw).unwrap();
        assert_eq!(thh, GaussianRational::from_ratio(-1, 3));
        // casimir cross-check: 2 T(eta^e eta^f) + T(eta^h eta^h)/2 = -1/2
        let lhs = tef.clone() + &tef + (thh / GaussianRational::from_int(2));
        assert_eq!(lhs, GaussianRational::from_ratio(-1, 2));
    }

    #[test]
    fn trace_is_a_trace() {
        let (model, fb) = sl2_setup(4);
        let tr = TraceData::build(&model, &fb).unwrap();
        let zw = &model.z_weights;
        let e = model.sl.index_of_name("E12").unwrap();
        let h = model.sl.index_of_name("H1").unwrap();
        let a = model.eta[e].compose(&model.eta[h]);
        let b = model.eta[h].compose(&model.eta[model.sl.index_of_name("E21").unwrap()]);
        let tab = tr.eval(&a.compose(&b), zw).unwrap();
        let tba = tr.eval(&b.compose(&a), zw).unwrap();
        assert_eq!(tab, tba);
    }

    #[test]
    fn sigma_word_involution() {
        let (model, fb) = sl2_setup(4);
        let sigma = SigmaD::build(&model, &fb, 2).unwrap();
        let zw = &model.z_weights;
        let e = model.sl.index_of_name("E12").unwrap();
        let f = model.sl.index_of_name("E21").unwrap();
        // sigma(eta^e) = -eta^f
        let img = sigma.apply(&fb, &model.eta[e], zw).unwrap();
        assert_eq!(img, model.eta[f].neg());
        // sigma(1) = 1
        assert_eq!(sigma.apply(&fb, &WeylOp::one(1), zw).unwrap(), WeylOp::one(1));
        // sigma(eta^e eta^f) = eta^f eta^e
        let ef = model.eta[e].compose(&model.eta[f]);
        let img2 = sigma.apply(&fb, &ef, zw).unwrap();
        assert_eq!(img2, model.eta[f].compose(&model.eta[e]));
        // multiplicativity sample: sigma(eta^e eta^e) = eta^f eta^f
        let ee = model.eta[e].compose(&model.eta[e]);
        assert_eq!(
            sigma.apply(&fb, &ee, zw).unwrap(),
            model.eta[f].compose(&model.eta[f])
        );
    }

    #[test]
    fn only_constant_invariants() {
        let (model, fb) = sl2_setup(3);
        assert!(invariants_are_constants(&model, &fb, 3).unwrap());
    }

    #[test]
    fn adjoint_action_examples() {
        let (model, _fb) = sl2_setup(2);
        let e = model.sl.index_of_name("E12").unwrap();
        let h = model.sl.index_of_name("H1").unwrap();
        // ad(h)(eta^e) = 2 eta^e
        assert_eq!(
            ad_action(&model, h, &model.eta[e]),
            model.eta[e].scale(&GaussianRational::from_int(2))
        );
        // ad(x)(1) = 0
        for a in 0..model.sl.dim {
            assert!(ad_action(&model, a, &WeylOp::one(1)).is_zero());
        }
    }

    #[test]
    fn transpose_and_bar_stability() {
        let (model, fb) = sl2_setup(3);
        let zw = &model.z_weights;
        for d in 0..=3u32 {
            for i in 0..fb.dim_at(d) {
                let op = fb.op(i);
                let t = op.transpose();
                assert!(fb.coords(&t, zw).is_some(), "transpose escapes at row {i}");
                let b = op.bar();
                assert!(fb.coords(&b, zw).is_some(), "bar escapes at row {i}");
            }
        }
    }

    #[test]
    fn transpose_induces_parity_on_symbols() {
        let (_model, fb) = sl2_setup(3);
        for d in 0..=3u32 {
            for &i in fb.rows_of_degree(d).iter() {
                let op = fb.op(i);
                let sym = op.symbol(d).unwrap();
                let tsym = op.transpose().symbol(d).unwrap();
                let expect = sym.alpha();
                assert_eq!(tsym, expect, "row {i} degree {d}");
            }
        }
    }

    #[test]
    fn sl3_projective_filtered_dims() {
        let model = FlagModel::build(FlagConfig::projective(3)).unwrap();
        let fb = FilteredBasisD::build(&model, 2).unwrap();
        assert_eq!(fb.dim_at(0), 1);
        assert_eq!(fb.dim_at(1), 9);
        assert_eq!(fb.dim_at(2), 36);
    }
}
