//! The quantization engine: trace pairings, the orthogonal splitting of the
//! order filtration, the preferred quantization map, star coefficients, and
//! the annihilation operators.
//!
//! Everything is driven by two exact pairing tables on the filtered basis:
//! `lambda(A, B) = T(AB)` and `gamma(A, B) = T(A sigma(B))`. Torus weights
//! make both block sparse; entries outside the blocks vanish because the
//! trace is certified zero on every nonzero-weight block.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::classical::{GradedBasisR, IdealData};
use crate::dmodule::{FilteredBasisD, SigmaD, TraceData};
use crate::flag::{FlagConfig, FlagModel};
use crate::linalg::{DenseMat, RowBasis, SparseVec, Weight};
use crate::mono::{monomials_of_degree, Mono};
use crate::poly::SymbolPoly;
use crate::scalar::GaussianRational;
use crate::weyl::WeylOp;
use crate::{Error, Result};

/// One vector of the orthogonal splitting: a filtration element orthogonal to
/// everything of lower degree.
#[derive(Clone, Debug)]
pub struct VRow {
    /// Sparse coordinates over the filtered basis rows.
    pub coords: Vec<(usize, GaussianRational)>,
    pub degree: u32,
    pub weight: Weight,
}

struct BqBlock {
    /// Global filtered-basis indices of the splitting rows of this block.
    v_rows: Vec<usize>,
    /// In-degree indices of the symbol basis elements of this block.
    r_cols: Vec<usize>,
    /// Maps block symbol coordinates to splitting coefficients.
    inv_symbol: DenseMat,
}

/// Per-degree certificates and matrices produced by the splitting.
pub struct QuantEngine {
    pub model: FlagModel,
    /// Quantization depth: all graded data is exact up to this degree.
    pub depth: u32,
    pub rb: GradedBasisR,
    pub ideal: IdealData,
    pub fb: FilteredBasisD,
    pub sigma: SigmaD,
    pub trace: TraceData,
    /// `T(B_i B_j)` on opposite-weight pairs of rows of degree <= depth.
    pub lambda_table: BTreeMap<(usize, usize), GaussianRational>,
    /// `T(B_i sigma(B_j))` on same-weight pairs of rows of degree <= depth.
    pub gamma_table: BTreeMap<(usize, usize), GaussianRational>,
    /// Splitting row for each filtered-basis row of degree <= depth.
    pub v_rows: Vec<VRow>,
    bq_blocks: BTreeMap<(u32, Weight), BqBlock>,
    /// Quantization of every graded basis element: sparse filtered coords.
    pub bq_basis_coords: Vec<Vec<Vec<(usize, GaussianRational)>>>,
    /// Quantization of every graded basis element as an operator.
    pub bq_basis_ops: Vec<Vec<WeylOp>>,
    /// Inner-product Gram matrix on each graded piece.
    pub gram_r: Vec<DenseMat>,
    /// Blockwise inverse of each `gram_r`.
    gram_r_inv: Vec<DenseMat>,
    /// `LDL*` pivots of the graded Gram matrices, per weight block.
    pub gram_r_pivots: Vec<Vec<(Weight, Vec<BigRational>)>>,
    /// `LDL*` pivots of the operator-side Gram form, per weight block.
    pub gram_d_pivots: Vec<(Weight, Vec<BigRational>)>,
    /// Annihilation matrices `lambda_ops[d][a]` mapping degree `d` to `d-1`.
    pub lambda_ops: Vec<Vec<DenseMat>>,
}

/// Pairing data requires the filtration out to twice the quantization depth
/// (and always past the generator products).
pub fn pairing_depth(depth: u32) -> u32 {
    (2 * depth).max(2)
}

impl QuantEngine {
    /// Runs the full pipeline for a configuration at quantization depth `d`.
    pub fn build(config: FlagConfig, depth: u32) -> Result<QuantEngine> {
        Self::build_with_basis(config, depth, None)
    }

    /// As [`QuantEngine::build`], reusing a previously constructed filtered
    /// basis when it matches the configuration (cache path).
    pub fn build_with_basis(
        config: FlagConfig,
        depth: u32,
        cached: Option<FilteredBasisD>,
    ) -> Result<QuantEngine> {
        let model = FlagModel::build(config)?;
        let full_depth = pairing_depth(depth);
        let rb = GradedBasisR::build(&model, full_depth)?;
        let ideal = IdealData::build(&model, &rb, depth)?;
        let fb = match cached {
            Some(fb) if fb.m == model.m && fb.max_degree == full_depth => fb,
            _ => FilteredBasisD::build(&model, full_depth)?,
        };
        // graded dimension consistency between the two sides
        for d in 1..=full_depth {
            let drb = rb.dim(d);
            let dfb = fb.dim_at(d) - fb.dim_at(d - 1);
            if drb != dfb {
                return Err(Error::Consistency {
                    anchor: "prop:res".into(),
                    detail: format!(
                        "degree {d}: graded symbol dimension {drb} != filtered step {dfb}"
                    ),
                });
            }
        }
        let sigma = SigmaD::build(&model, &fb, depth)?;
        let trace = TraceData::build(&model, &fb)?;

        let zw = model.z_weights.clone();
        let nrows = fb.dim_at(depth);

        // lambda table on opposite-weight pairs; both orders are computed
        // independently so the trace property stays a checkable claim
        let mut lambda_table = BTreeMap::new();
        {
            let ops: Vec<WeylOp> = (0..nrows).map(|i| fb.op(i)).collect();
            for i in 0..nrows {
                for j in 0..nrows {
                    let wi = &fb.weights[i];
                    let wj = &fb.weights[j];
                    if !opposite(wi, wj) {
                        continue;
                    }
                    let t = trace.eval(&ops[i].compose(&ops[j]), &zw)?;
                    if !t.is_zero() {
                        lambda_table.insert((i, j), t);
                    }
                }
            }
        }

        // gamma(B_i, B_j) = sum_t sigma_coords[j][t] lambda(B_i, B_t)
        let mut gamma_table = BTreeMap::new();
        for i in 0..nrows {
            for j in 0..nrows {
                if fb.weights[i] != fb.weights[j] {
                    continue;
                }
                let mut acc = GaussianRational::zero();
                for (t, s) in &sigma.coords[j] {
                    if let Some(l) = lambda_table.get(&(i, *t)) {
                        acc += &(s * l);
                    }
                }
                if !acc.is_zero() {
                    gamma_table.insert((i, j), acc);
                }
            }
        }

        let gamma = |i: usize, j: usize| -> GaussianRational {
            gamma_table.get(&(i, j)).cloned().unwrap_or_default()
        };

        // orthogonal splitting: correct each degree-d row against the
        // gamma-projection onto the lower filtration step
        let mut v_rows: Vec<VRow> = Vec::with_capacity(nrows);
        v_rows.push(VRow {
            coords: vec![(0, GaussianRational::one())],
            degree: 0,
            weight: fb.weights[0].clone(),
        });
        for i in 1..nrows {
            let d = fb.degrees[i];
            let w = fb.weights[i].clone();
            let lower: Vec<usize> = (0..fb.dim_at(d - 1))
                .filter(|&l| fb.weights[l] == w)
                .collect();
            let mut coords: Vec<(usize, GaussianRational)> = vec![(i, GaussianRational::one())];
            if !lower.is_empty() {
                let mat = DenseMat::from_fn(lower.len(), lower.len(), |k, l| {
                    gamma(lower[l], lower[k])
                });
                let rhs: Vec<GaussianRational> =
                    lower.iter().map(|&k| gamma(i, k)).collect();
                let sol = mat.solve_vec(&rhs).ok_or_else(|| Error::Consistency {
                    anchor: "thm:main".into(),
                    detail: format!("singular Gram block while splitting degree {d}"),
                })?;
                for (l, c) in lower.iter().zip(sol) {
                    if !c.is_zero() {
                        coords.push((*l, -c));
                    }
                }
                coords.sort_by_key(|(k, _)| *k);
            }
            v_rows.push(VRow {
                coords,
                degree: d,
                weight: w,
            });
        }

        // bq blocks: invert the principal-symbol map on each splitting block
        let mut bq_blocks = BTreeMap::new();
        for d in 0..=depth {
            let rdeg = &rb.degrees[d as usize];
            let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
            for i in fb.rows_of_degree(d) {
                by_weight
                    .entry(fb.weights[i].clone())
                    .or_default()
                    .push(i);
            }
            for (w, rows) in by_weight {
                let r_cols = rdeg.block_indices(&w);
                if r_cols.len() != rows.len() {
                    return Err(Error::Consistency {
                        anchor: "prop:res".into(),
                        detail: format!(
                            "degree {d}: weight block sizes disagree ({} vs {})",
                            r_cols.len(),
                            rows.len()
                        ),
                    });
                }
                let col_pos: BTreeMap<usize, usize> =
                    r_cols.iter().cloned().enumerate().map(|(p, c)| (c, p)).collect();
                let mut symbol_mat = DenseMat::zeros(r_cols.len(), rows.len());
                for (vj, &row) in rows.iter().enumerate() {
                    let op = fb.op_from_coords(&v_rows[row].coords);
                    let sym = op.symbol(d).map_err(Error::Order)?;
                    let coords = rb.coords(&sym, d, &zw).ok_or_else(|| Error::Consistency {
                        anchor: "prop:res".into(),
                        detail: format!("splitting symbol escapes the degree-{d} basis"),
                    })?;
                    for (ri, c) in coords.into_iter().enumerate() {
                        if !c.is_zero() {
                            let p = *col_pos.get(&ri).ok_or_else(|| Error::Consistency {
                                anchor: "prop:res".into(),
                                detail: "splitting symbol leaves its weight block".into(),
                            })?;
                            *symbol_mat.at_mut(p, vj) = c;
                        }
                    }
                }
                let inv_symbol = symbol_mat.inverse().ok_or_else(|| Error::Consistency {
                    anchor: "prop:res".into(),
                    detail: format!("principal symbol map is singular at degree {d}"),
                })?;
                bq_blocks.insert(
                    (d, w),
                    BqBlock {
                        v_rows: rows,
                        r_cols,
                        inv_symbol,
                    },
                );
            }
        }

        let mut engine = QuantEngine {
            model,
            depth,
            rb,
            ideal,
            fb,
            sigma,
            trace,
            lambda_table,
            gamma_table,
            v_rows,
            bq_blocks,
            bq_basis_coords: Vec::new(),
            bq_basis_ops: Vec::new(),
            gram_r: Vec::new(),
            gram_r_inv: Vec::new(),
            gram_r_pivots: Vec::new(),
            gram_d_pivots: Vec::new(),
            lambda_ops: Vec::new(),
        };

        // quantize every graded basis element once
        for d in 0..=depth {
            let dim = engine.rb.dim(d);
            let mut coords_list = Vec::with_capacity(dim);
            let mut ops_list = Vec::with_capacity(dim);
            for i in 0..dim {
                let mut unit = vec![GaussianRational::zero(); dim];
                unit[i] = GaussianRational::one();
                let c = engine.bq_coords_from_dense(&unit, d)?;
                let op = engine.fb.op_from_coords(&c);
                coords_list.push(c);
                ops_list.push(op);
            }
            engine.bq_basis_coords.push(coords_list);
            engine.bq_basis_ops.push(ops_list);
        }

        // graded Gram matrices and their certificates
        for d in 0..=depth {
            let dim = engine.rb.dim(d);
            let mut p = DenseMat::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    *p.at_mut(i, j) = engine.gamma_of_coords(
                        &engine.bq_basis_coords[d as usize][i],
                        &engine.bq_basis_coords[d as usize][j],
                    );
                }
            }
            let rdeg = &engine.rb.degrees[d as usize];
            let mut pivots = Vec::new();
            let mut inv = DenseMat::zeros(dim, dim);
            let weights: Vec<Weight> = rdeg
                .basis
                .weights()
                .cloned()
                .collect();
            for w in weights {
                let idx = rdeg.block_indices(&w);
                let sub = DenseMat::from_fn(idx.len(), idx.len(), |a, b| {
                    p.at(idx[a], idx[b]).clone()
                });
                let piv = sub.ldlt_pivots().map_err(|e| Error::Consistency {
                    anchor: "thm:main".into(),
                    detail: format!("graded Gram certificate failed at degree {d}: {e}"),
                })?;
                pivots.push((w.clone(), piv));
                let sub_inv = sub.inverse().ok_or_else(|| Error::Consistency {
                    anchor: "thm:main".into(),
                    detail: format!("graded Gram block singular at degree {d}"),
                })?;
                for (a, &ga) in idx.iter().enumerate() {
                    for (b, &gb) in idx.iter().enumerate() {
                        *inv.at_mut(ga, gb) = sub_inv.at(a, b).clone();
                    }
                }
            }
            engine.gram_r.push(p);
            engine.gram_r_inv.push(inv);
            engine.gram_r_pivots.push(pivots);
        }

        // operator-side Gram certificate on the depth filtration step
        {
            let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
            for i in 0..engine.fb.dim_at(depth) {
                by_weight
                    .entry(engine.fb.weights[i].clone())
                    .or_default()
                    .push(i);
            }
            for (w, idx) in by_weight {
                let sub = DenseMat::from_fn(idx.len(), idx.len(), |a, b| {
                    engine
                        .gamma_table
                        .get(&(idx[a], idx[b]))
                        .cloned()
                        .unwrap_or_default()
                });
                let piv = sub.ldlt_pivots().map_err(|e| Error::Consistency {
                    anchor: "thm:main".into(),
                    detail: format!("operator Gram certificate failed: {e}"),
                })?;
                engine.gram_d_pivots.push((w, piv));
            }
        }

        // annihilation matrices
        engine.lambda_ops.push(Vec::new()); // degree 0 placeholder
        for d in 1..=depth {
            let mut per_gen = Vec::with_capacity(engine.model.sl.dim);
            for a in 0..engine.model.sl.dim {
                per_gen.push(engine.lambda_matrix(a, d)?);
            }
            engine.lambda_ops.push(per_gen);
        }
        Ok(engine)
    }

    /// `gamma` pairing of two operators given by sparse filtered coordinates.
    pub fn gamma_of_coords(
        &self,
        a: &[(usize, GaussianRational)],
        b: &[(usize, GaussianRational)],
    ) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (i, ca) in a {
            for (j, cb) in b {
                if let Some(g) = self.gamma_table.get(&(*i, *j)) {
                    acc += &(&(ca * &cb.conj()) * g);
                }
            }
        }
        acc
    }

    /// `lambda` pairing (plain trace of the product) of sparse coordinates.
    pub fn lambda_of_coords(
        &self,
        a: &[(usize, GaussianRational)],
        b: &[(usize, GaussianRational)],
    ) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (i, ca) in a {
            for (j, cb) in b {
                if let Some(l) = self.lambda_table.get(&(*i, *j)) {
                    acc += &(&(ca * cb) * l);
                }
            }
        }
        acc
    }

    fn bq_coords_from_dense(
        &self,
        dense: &[GaussianRational],
        d: u32,
    ) -> Result<Vec<(usize, GaussianRational)>> {
        let rdeg = &self.rb.degrees[d as usize];
        let mut out: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        let weights: Vec<Weight> = rdeg.basis.weights().cloned().collect();
        for w in weights {
            let idx = rdeg.block_indices(&w);
            if idx.iter().all(|&i| dense[i].is_zero()) {
                continue;
            }
            let block = self.bq_blocks.get(&(d, w.clone())).ok_or_else(|| {
                Error::Dimension(format!("no splitting block at degree {d}"))
            })?;
            let sub: Vec<GaussianRational> = block
                .r_cols
                .iter()
                .map(|&i| dense[i].clone())
                .collect();
            let coeffs = block.inv_symbol.mul_vec(&sub);
            for (vj, c) in block.v_rows.iter().zip(coeffs) {
                if c.is_zero() {
                    continue;
                }
                for (g, vc) in &self.v_rows[*vj].coords {
                    let e = out.entry(*g).or_default();
                    *e += &(&c * vc);
                    if e.is_zero() {
                        out.remove(g);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Sparse filtered coordinates of the quantization of a polynomial
    /// (mixed fiber degrees allowed; each component must stay within depth).
    pub fn bq_coords(&self, phi: &SymbolPoly) -> Result<Vec<(usize, GaussianRational)>> {
        let mut out: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (d, part) in phi.p_degree_split() {
            if d > self.depth {
                return Err(Error::Dimension(format!(
                    "degree {d} exceeds quantization depth {}",
                    self.depth
                )));
            }
            let dense = self
                .rb
                .coords(&part, d, &self.model.z_weights)
                .ok_or_else(|| Error::Dimension("polynomial is not a symbol".into()))?;
            for (g, c) in self.bq_coords_from_dense(&dense, d)? {
                let e = out.entry(g).or_default();
                *e += &c;
                if e.is_zero() {
                    out.remove(&g);
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// The preferred quantization of a symbol polynomial.
    pub fn bq(&self, phi: &SymbolPoly) -> Result<WeylOp> {
        Ok(self.fb.op_from_coords(&self.bq_coords(phi)?))
    }

    /// Inverse of the quantization map: peel principal symbols down the
    /// filtration. Returns the graded components, highest degree first as
    /// `(degree, symbol)` pairs.
    pub fn bq_inverse(&self, op: &WeylOp) -> Result<Vec<(u32, SymbolPoly)>> {
        let mut rest = op.clone();
        let mut out = Vec::new();
        let mut r = rest.order();
        if r > self.depth * 2 {
            return Err(Error::Order(format!(
                "operator order {r} exceeds available data"
            )));
        }
        loop {
            if rest.is_zero() {
                break;
            }
            r = rest.order();
            let sym = rest.symbol(r).map_err(Error::Order)?;
            if !sym.is_zero() {
                out.push((r, sym.clone()));
                let q = self.bq(&sym)?;
                rest = rest.sub(&q);
            }
            if rest.order() >= r && !rest.is_zero() {
                return Err(Error::Consistency {
                    anchor: "sec:bqsm".into(),
                    detail: "symbol peeling failed to lower the order".into(),
                });
            }
            if r == 0 {
                break;
            }
        }
        if !rest.is_zero() {
            return Err(Error::Consistency {
                anchor: "sec:bqsm".into(),
                detail: "operator is not in the image of the quantization map".into(),
            });
        }
        Ok(out)
    }

    /// Star coefficients `C_p(phi, psi)` for fiber-homogeneous inputs of
    /// degrees `j` and `k`: index `p` runs `0..=j+k`.
    pub fn star_coeffs(&self, phi: &SymbolPoly, psi: &SymbolPoly) -> Result<Vec<SymbolPoly>> {
        let j = phi.p_degree().unwrap_or(0);
        let k = psi.p_degree().unwrap_or(0);
        if phi.p_degree().is_none() && !phi.is_zero() {
            return Err(Error::Dimension("first factor is not fiber homogeneous".into()));
        }
        if psi.p_degree().is_none() && !psi.is_zero() {
            return Err(Error::Dimension("second factor is not fiber homogeneous".into()));
        }
        if j + k > self.depth {
            return Err(Error::Dimension(format!(
                "product degree {} exceeds quantization depth {}",
                j + k,
                self.depth
            )));
        }
        let prod = self.bq(phi)?.compose(&self.bq(psi)?);
        let mut coeffs = vec![SymbolPoly::zero(self.model.m); (j + k + 1) as usize];
        for (r, sym) in self.bq_inverse(&prod)? {
            coeffs[(j + k - r) as usize] = sym;
        }
        Ok(coeffs)
    }

    /// Star coefficients for arbitrary (possibly inhomogeneous) symbols,
    /// extended bilinearly: returns the coefficient of each power of the
    /// deformation parameter.
    pub fn star_coeffs_mixed(&self, phi: &SymbolPoly, psi: &SymbolPoly) -> Result<Vec<SymbolPoly>> {
        let mut out: Vec<SymbolPoly> = Vec::new();
        for (j, pj) in phi.p_degree_split() {
            for (k, qk) in psi.p_degree_split() {
                let cs = self.star_coeffs(&pj, &qk)?;
                if out.len() < cs.len() {
                    out.resize((j + k + 1) as usize, SymbolPoly::zero(self.model.m));
                }
                for (p, c) in cs.into_iter().enumerate() {
                    out[p] = out[p].add(&c);
                }
            }
        }
        if out.is_empty() {
            out.push(SymbolPoly::zero(self.model.m));
        }
        Ok(out)
    }

    /// The invariant hermitian inner product, linear in the first slot.
    pub fn inner_product(&self, phi: &SymbolPoly, psi: &SymbolPoly) -> Result<GaussianRational> {
        let a = self.bq_coords(phi)?;
        let b = self.bq_coords(psi)?;
        Ok(self.gamma_of_coords(&a, &b))
    }

    /// Matrix of the annihilation operator for basis generator `a` on the
    /// degree-`d` graded piece: the inner-product adjoint of multiplication
    /// by the involuted momentum symbol.
    fn lambda_matrix(&self, a: usize, d: u32) -> Result<DenseMat> {
        let dim_lo = self.rb.dim(d - 1);
        let dim_hi = self.rb.dim(d);
        // multiplication by mu^{sigma(x_a)} = sign * mu[perm(a)]
        let p = self.model.sl.sigma_perm[a];
        let s = GaussianRational::from_int(self.model.sl.sigma_sign[a]);
        let mut mult = DenseMat::zeros(dim_hi, dim_lo);
        for j in 0..dim_lo {
            let img = self.model.mu[p]
                .scale(&s)
                .mul(&self.rb.degrees[(d - 1) as usize].elems[j]);
            let coords = self
                .rb
                .coords(&img, d, &self.model.z_weights)
                .ok_or_else(|| Error::Consistency {
                    anchor: "sec:RR".into(),
                    detail: "momentum multiple escapes the graded basis".into(),
                })?;
            for (i, c) in coords.into_iter().enumerate() {
                *mult.at_mut(i, j) = c;
            }
        }
        // adjoint: Lambda = conj(P_{d-1}^{-1} M^T P_d)
        let lam = self.gram_r_inv[(d - 1) as usize]
            .mul(&mult.transpose())
            .mul(&self.gram_r[d as usize]);
        Ok(lam.conj())
    }

    /// Applies the annihilation operator of a general Lie algebra element
    /// (complex linear in the element) to a degree-`d` symbol.
    pub fn lambda_apply(
        &self,
        x: &[GaussianRational],
        phi: &SymbolPoly,
        d: u32,
    ) -> Result<SymbolPoly> {
        if d == 0 {
            return Ok(SymbolPoly::zero(self.model.m));
        }
        let coords = self
            .rb
            .coords(phi, d, &self.model.z_weights)
            .ok_or_else(|| Error::Dimension("not a homogeneous symbol of the stated degree".into()))?;
        let mut out = vec![GaussianRational::zero(); self.rb.dim(d - 1)];
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.lambda_ops[d as usize][a].mul_vec(&coords);
            for (i, v) in img.into_iter().enumerate() {
                out[i] += &(c * &v);
            }
        }
        Ok(self.rb.from_coords(&out, d - 1))
    }

    /// The pairing `Lambda^{x_a}(mu^{x_b})` as a scalar matrix over the basis.
    pub fn lambda_mu_pairing(&self) -> Result<DenseMat> {
        let dim = self.model.sl.dim;
        let mut out = DenseMat::zeros(dim, dim);
        if self.depth == 0 {
            return Ok(out);
        }
        for a in 0..dim {
            for b in 0..dim {
                let img = self.lambda_apply(
                    &self.model.sl.basis_vector(a),
                    &self.model.mu[b].clone(),
                    1,
                )?;
                *out.at_mut(a, b) = img.constant_term();
            }
        }
        Ok(out)
    }

    /// Symmetrization quantization: harmonic lift, then the average over all
    /// orderings of each word.
    pub fn bfr(&self, phi: &SymbolPoly, d: u32) -> Result<WeylOp> {
        let h = self.ideal.harmonic_lift(&self.model, &self.rb, phi, d)?;
        let mut out = WeylOp::zero(self.model.m);
        for (mono, c) in &h.terms {
            out = out.add(&self.model.symmetrized_eta_word(mono).scale(c));
        }
        Ok(out)
    }

    /// All symmetrized words up to the quantization depth, for batch
    /// symmetrization.
    pub fn symmetrized_word_table(&self) -> BTreeMap<Mono, WeylOp> {
        let dim = self.model.sl.dim;
        let mut table = BTreeMap::new();
        for d in 0..=self.depth {
            for mono in monomials_of_degree(dim, d) {
                let op = self.model.symmetrized_eta_word(&mono);
                table.insert(mono, op);
            }
        }
        table
    }

    /// `bfr` against a precomputed word table.
    pub fn bfr_cached(
        &self,
        phi: &SymbolPoly,
        d: u32,
        table: &BTreeMap<Mono, WeylOp>,
    ) -> Result<WeylOp> {
        let h = self.ideal.harmonic_lift(&self.model, &self.rb, phi, d)?;
        let mut out = WeylOp::zero(self.model.m);
        for (mono, c) in &h.terms {
            out = out.add(&table[mono].scale(c));
        }
        Ok(out)
    }

    /// Recomputes the splitting from an alternative pairing and reports
    /// whether it coincides with the preferred one, degree by degree.
    ///
    /// `pairing(l, k)` must give the pairing of basis rows `l` and `k`; the
    /// orthocomplement uses constraints against all lower rows with the
    /// opposite weight and corrections in the same weight.
    fn alternative_splitting<F>(&self, pairing: F) -> Result<bool>
    where
        F: Fn(usize, usize) -> GaussianRational,
    {
        for i in 1..self.fb.dim_at(self.depth) {
            let d = self.fb.degrees[i];
            let w = self.fb.weights[i].clone();
            let neg: Weight = w.iter().map(|x| -x).collect();
            let lower_same: Vec<usize> = (0..self.fb.dim_at(d - 1))
                .filter(|&l| self.fb.weights[l] == w)
                .collect();
            let lower_opp: Vec<usize> = (0..self.fb.dim_at(d - 1))
                .filter(|&l| self.fb.weights[l] == neg)
                .collect();
            let mut coords: Vec<(usize, GaussianRational)> = vec![(i, GaussianRational::one())];
            if !lower_same.is_empty() || !lower_opp.is_empty() {
                let mat = DenseMat::from_fn(lower_opp.len(), lower_same.len(), |k, l| {
                    pairing(lower_same[l], lower_opp[k])
                });
                let rhs: Vec<GaussianRational> =
                    lower_opp.iter().map(|&k| pairing(i, k)).collect();
                let sol = mat.solve_vec(&rhs).ok_or_else(|| Error::Consistency {
                    anchor: "prop:sat".into(),
                    detail: format!("alternative splitting is infeasible at degree {d}"),
                })?;
                for (l, c) in lower_same.iter().zip(sol) {
                    if !c.is_zero() {
                        coords.push((*l, -c));
                    }
                }
            }
            // compare with the preferred splitting row
            let mut diff: BTreeMap<usize, GaussianRational> = BTreeMap::new();
            for (g, c) in &coords {
                let e = diff.entry(*g).or_default();
                *e += c;
                if e.is_zero() {
                    diff.remove(g);
                }
            }
            for (g, c) in &self.v_rows[i].coords {
                let e = diff.entry(*g).or_default();
                *e -= c;
                if e.is_zero() {
                    diff.remove(g);
                }
            }
            if !diff.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The hermitian pairing `T(A bar(B))` produces the same splitting.
    pub fn tau_splitting_check(&self) -> Result<bool> {
        // coordinates of bar(row) over the basis
        let n = self.fb.dim_at(self.depth);
        let mut bar_coords: Vec<Vec<(usize, GaussianRational)>> = Vec::with_capacity(n);
        for k in 0..n {
            let b = self.fb.op(k).bar();
            bar_coords.push(self.fb.coords(&b, &self.model.z_weights).ok_or_else(|| {
                Error::Consistency {
                    anchor: "rem:theta".into(),
                    detail: "conjugate escapes the filtration".into(),
                }
            })?);
        }
        self.alternative_splitting(|l, k| {
            let mut acc = GaussianRational::zero();
            for (t, c) in &bar_coords[k] {
                if let Some(v) = self.lambda_table.get(&(l, *t)) {
                    acc += &(c * v);
                }
            }
            acc
        })
    }

    /// The symmetric pairing `T(AB)` alone already pins down the splitting.
    pub fn trace_orthogonality_check(&self) -> Result<bool> {
        self.alternative_splitting(|l, k| {
            self.lambda_table
                .get(&(l, k))
                .cloned()
                .unwrap_or_default()
        })
    }

    /// Verifies that the two-sided filtration stability of the splitting
    /// rows holds: transpose, conjugation, and the adjoint action all
    /// preserve each graded splitting block.
    pub fn v_stability_check(&self) -> Result<bool> {
        let zw = &self.model.z_weights;
        for d in 0..=self.depth {
            // splitting rows of this degree as sparse coordinate vectors
            let rows: Vec<usize> = (0..self.fb.dim_at(self.depth))
                .filter(|&i| self.fb.degrees[i] == d)
                .collect();
            if rows.is_empty() && d > 0 {
                continue;
            }
            let mut span: RowBasis<usize> = RowBasis::new();
            for &i in &rows {
                let sv: SparseVec<usize> = self.v_rows[i].coords.iter().cloned().collect();
                span.insert(sv);
            }
            let check = |op: &WeylOp| -> Result<bool> {
                let coords = self.fb.coords(op, zw).ok_or_else(|| Error::Consistency {
                    anchor: "lem:cV".into(),
                    detail: "image escapes the filtration".into(),
                })?;
                let sv: SparseVec<usize> = coords.into_iter().collect();
                Ok(span.contains(&sv))
            };
            for &i in &rows {
                let op = self.fb.op_from_coords(&self.v_rows[i].coords);
                if !check(&op.transpose())? || !check(&op.bar())? {
                    return Ok(false);
                }
                for a in 0..self.model.sl.dim {
                    if !check(&self.model.eta[a].commutator(&op))? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn opposite(a: &Weight, b: &Weight) -> bool {
    a.iter().zip(b).all(|(x, y)| x + y == 0)
}

/// Feasibility probe for presenting the annihilation operators as
/// `P^{-1} L^x` with `L^x` a differential operator of bounded order on the
/// symbol variables. Evidence only; never asserted.
pub struct ProbeReport {
    pub generator: String,
    pub feasible: bool,
    /// One solution when feasible, in canonical operator text.
    pub witness: Option<String>,
    pub max_order: u32,
    pub coeff_degree_cap: u32,
    pub depth: u32,
}

/// Runs the probe for every Lie algebra basis generator. Requires a
/// projective configuration. The ansatz fixes fiber-degree `-1` terms
/// (annihilation operators are graded of degree `-1`) with coefficient
/// degrees capped at `max_order + 2`.
pub fn probe_vertical_presentation(
    engine: &QuantEngine,
    max_order: u32,
) -> Result<Vec<ProbeReport>> {
    let config = &engine.model.config;
    if !config.is_projective() {
        return Err(Error::Config(
            "the vertical-presentation probe needs a projective configuration".into(),
        ));
    }
    let m = engine.model.m;
    let proj_dim = (config.n - 1) as i64;
    let cap = max_order + 2;
    // Euler eigenvalue of the vertical operator on the degree-dd piece:
    // (dd + n/2)(dd + n/2 + 1)
    let scalar = |dd: i64| -> GaussianRational {
        let half_n = GaussianRational::from_ratio(proj_dim, 2);
        let a = GaussianRational::from_int(dd) + half_n.clone();
        let b = a.clone() + GaussianRational::one();
        a * b
    };

    // ansatz terms: z^a p^b dz^c dp^e with |c|+|e| <= max_order,
    // |b| = |e| - 1 >= 0, |a| <= cap, |b| <= cap
    let mut terms: Vec<(Mono, Mono, Mono, Mono)> = Vec::new();
    for ord in 1..=max_order {
        for csz in 0..=ord {
            let esz = ord - csz;
            if esz == 0 {
                continue;
            }
            for c in monomials_of_degree(m, csz) {
                for e in monomials_of_degree(m, esz) {
                    for asz in 0..=cap {
                        for a in monomials_of_degree(m, asz) {
                            let bsz = esz - 1;
                            if bsz > cap {
                                continue;
                            }
                            for b in monomials_of_degree(m, bsz) {
                                terms.push((a.clone(), b.clone(), c.clone(), e.clone()));
                            }
                        }
                    }
                }
            }
        }
    }

    let apply_term = |a: &Mono, b: &Mono, c: &Mono, e: &Mono, phi: &SymbolPoly| -> SymbolPoly {
        let mut out = phi.clone();
        for i in 0..m {
            for _ in 0..c.0[i] {
                out = out.diff_z(i);
            }
            for _ in 0..e.0[i] {
                out = out.diff_p(i);
            }
        }
        if out.is_zero() {
            return out;
        }
        let mut mono = a.0.clone();
        mono.extend_from_slice(&b.0);
        let shift = SymbolPoly {
            m,
            terms: [(Mono(mono), GaussianRational::one())].into_iter().collect(),
        };
        out.mul(&shift)
    };

    let mut reports = Vec::new();
    for gen in 0..engine.model.sl.dim {
        // constraint system over result monomials
        let mut row_index: BTreeMap<Mono, usize> = BTreeMap::new();
        let mut rows: Vec<Vec<(usize, GaussianRational)>> = Vec::new();
        let mut rhs: Vec<GaussianRational> = Vec::new();
        let touch = |mono: &Mono, rows: &mut Vec<Vec<(usize, GaussianRational)>>, rhs: &mut Vec<GaussianRational>, row_index: &mut BTreeMap<Mono, usize>| -> usize {
            if let Some(&r) = row_index.get(mono) {
                return r;
            }
            let r = rows.len();
            row_index.insert(mono.clone(), r);
            rows.push(Vec::new());
            rhs.push(GaussianRational::zero());
            r
        };
        for d in 0..=engine.depth {
            for phi in &engine.rb.degrees[d as usize].elems {
                // target: scalar(d-1) * Lambda^{x_gen}(phi)
                let target = if d == 0 {
                    SymbolPoly::zero(m)
                } else {
                    engine
                        .lambda_apply(&engine.model.sl.basis_vector(gen), phi, d)?
                        .scale(&scalar(d as i64 - 1))
                };
                let mut balance: BTreeMap<Mono, Vec<(usize, GaussianRational)>> = BTreeMap::new();
                for (t, (a, b, c, e)) in terms.iter().enumerate() {
                    let img = apply_term(a, b, c, e, phi);
                    for (mono, coeff) in img.terms {
                        balance.entry(mono).or_default().push((t, coeff));
                    }
                }
                for (mono, entries) in balance {
                    let r = touch(&mono, &mut rows, &mut rhs, &mut row_index);
                    rows[r].extend(entries);
                }
                for (mono, coeff) in &target.terms {
                    let r = touch(mono, &mut rows, &mut rhs, &mut row_index);
                    rhs[r] = coeff.clone();
                }
            }
        }
        let mut mat = DenseMat::zeros(rows.len(), terms.len());
        for (r, entries) in rows.iter().enumerate() {
            for (t, c) in entries {
                *mat.at_mut(r, *t) += c;
            }
        }
        let sol = mat.solve_vec(&rhs);
        let witness = sol.as_ref().map(|u| {
            let names = probe_term_names(m);
            let mut parts: Vec<String> = Vec::new();
            for (t, c) in u.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, b, cm, e) = &terms[t];
                let mut mono = a.0.clone();
                mono.extend_from_slice(&b.0);
                mono.extend_from_slice(&cm.0);
                mono.extend_from_slice(&e.0);
                let txt = Mono(mono).format_with(&names);
                if txt.is_empty() {
                    parts.push(format!("({c})"));
                } else {
                    parts.push(format!("({c})*{txt}"));
                }
            }
            if parts.is_empty() {
                "(0)".to_string()
            } else {
                parts.join(" + ")
            }
        });
        reports.push(ProbeReport {
            generator: engine.model.sl.names[gen].clone(),
            feasible: sol.is_some(),
            witness,
            max_order,
            coeff_degree_cap: cap,
            depth: engine.depth,
        });
    }
    Ok(reports)
}

fn probe_term_names(m: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
    names.extend((1..=m).map(|i| format!("p{i}")));
    names.extend((1..=m).map(|i| format!("dz{i}")));
    names.extend((1..=m).map(|i| format!("dp{i}")));
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_engine(depth: u32) -> QuantEngine {
        QuantEngine::build(FlagConfig::projective(2), depth).unwrap()
    }

    #[test]
    fn bq_fixes_unit_and_generators() {
        let q = sl2_engine(2);
        let one = SymbolPoly::one(1);
        assert_eq!(q.bq(&one).unwrap(), WeylOp::one(1));
        for a in 0..q.model.sl.dim {
            assert_eq!(q.bq(&q.model.mu[a]).unwrap(), q.model.eta[a], "generator {a}");
        }
    }

    #[test]
    fn inner_product_unit() {
        let q = sl2_engine(2);
        let one = SymbolPoly::one(1);
        assert_eq!(q.inner_product(&one, &one).unwrap(), GaussianRational::one());
    }

    #[test]
    fn sl2_lambda_is_minus_sixth_trace() {
        let q = sl2_engine(2);
        let pairing = q.lambda_mu_pairing().unwrap();
        let dim = q.model.sl.dim;
        for a in 0..dim {
            for b in 0..dim {
                let tr = q
                    .model
                    .sl
                    .trace_form(&q.model.sl.basis_vector(a), &q.model.sl.basis_vector(b));
                let expect = tr * GaussianRational::from_ratio(-1, 6);
                assert_eq!(*pairing.at(a, b), expect, "pair ({a},{b})");
            }
        }
    }

    #[test]
    fn star_product_of_generators() {
        let q = sl2_engine(2);
        let e = q.model.sl.index_of_name("E12").unwrap();
        let f = q.model.sl.index_of_name("E21").unwrap();
        let h = q.model.sl.index_of_name("H1").unwrap();
        let cs = q.star_coeffs(&q.model.mu[e].clone(), &q.model.mu[f].clone()).unwrap();
        assert_eq!(cs.len(), 3);
        // C0 = mu^e mu^f
        assert_eq!(cs[0], q.model.mu[e].mul(&q.model.mu[f]));
        // C1 = mu^h / 2
        assert_eq!(cs[1], q.model.mu[h].scale(&GaussianRational::from_ratio(1, 2)));
        // C2 = Lambda^e(mu^f) = -1/6
        assert_eq!(
            cs[2],
            SymbolPoly::one(1).scale(&GaussianRational::from_ratio(-1, 6))
        );
    }

    #[test]
    fn star_unit_is_identity() {
        let q = sl2_engine(2);
        let e = q.model.sl.index_of_name("E12").unwrap();
        let psi = q.model.mu[e].mul(&q.model.mu[e]);
        let cs = q.star_coeffs(&SymbolPoly::one(1), &psi).unwrap();
        assert_eq!(cs[0], psi);
        for c in &cs[1..] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn gram_pivots_positive() {
        use crate::linalg::all_pivots_positive;
        let q = sl2_engine(3);
        for (w, piv) in &q.gram_d_pivots {
            assert!(all_pivots_positive(piv), "operator Gram block {w:?}");
        }
        for per_degree in &q.gram_r_pivots {
            for (w, piv) in per_degree {
                assert!(all_pivots_positive(piv), "graded Gram block {w:?}");
            }
        }
    }

    #[test]
    fn orthogonal_grading() {
        let q = sl2_engine(3);
        for j in 0..=3u32 {
            for k in 0..=3u32 {
                if j == k {
                    continue;
                }
                for bi in &q.rb.degrees[j as usize].elems {
                    for bj in &q.rb.degrees[k as usize].elems {
                        assert!(q.inner_product(bi, bj).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn mult_free_symmetrization_agrees() {
        let q = sl2_engine(3);
        for d in 0..=3u32 {
            for phi in &q.rb.degrees[d as usize].elems {
                let via_split = q.bq(phi).unwrap();
                let via_symm = q.bfr(phi, d).unwrap();
                assert_eq!(via_split, via_symm, "degree {d}");
            }
        }
    }

    #[test]
    fn alternative_splittings_agree() {
        let q = sl2_engine(3);
        assert!(q.tau_splitting_check().unwrap());
        assert!(q.trace_orthogonality_check().unwrap());
        assert!(q.v_stability_check().unwrap());
    }

    #[test]
    fn probe_projective_line_is_feasible() {
        let q = sl2_engine(3);
        let reports = probe_vertical_presentation(&q, 4).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.feasible, "generator {} infeasible", r.generator);
            assert!(r.witness.is_some());
        }
    }
}
