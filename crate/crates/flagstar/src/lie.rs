//! Structure data for the special linear Lie algebra and its symmetric
//! algebra.
//!
//! The basis is the elementary matrices `E_ij` (i != j, row-major) followed by
//! the coroot diagonals `H_i = E_ii - E_{i+1,i+1}`. Everything downstream
//! (vector fields, momentum symbols, enveloping words) is indexed against this
//! order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::DenseMat;
use crate::mono::Mono;
use crate::poly::map_insert;
use crate::scalar::GaussianRational;

/// Dense rational `n x n` matrix, row major.
pub type RatMat = Vec<BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mat_mul(n: usize, a: &RatMat, b: &RatMat) -> RatMat {
    let mut out = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k * n + j].is_zero() {
                    continue;
                }
                let t = &a[i * n + k] * &b[k * n + j];
                out[i * n + j] += t;
            }
        }
    }
    out
}

fn mat_trace(n: usize, a: &RatMat) -> BigRational {
    (0..n).map(|i| a[i * n + i].clone()).sum()
}

/// Structure data for `sl_n` over the rationals.
pub struct SpecialLinear {
    pub n: usize,
    /// Dimension `n^2 - 1`.
    pub dim: usize,
    /// Basis element names: `E12`, `E13`, ..., `H1`, ...
    pub names: Vec<String>,
    /// Basis matrices in the defining representation.
    pub basis: Vec<RatMat>,
    /// `[x_a, x_b]` in basis coordinates (sparse).
    bracket_table: Vec<Vec<(usize, BigRational)>>,
    /// Invariant form `tr(x_a x_b)`.
    pub gram: DenseMat,
    pub gram_inv: DenseMat,
    /// Cartan involution on the basis: `sigma(x_a) = sign * x_perm`.
    pub sigma_perm: Vec<usize>,
    pub sigma_sign: Vec<i64>,
    /// Weight of each basis element under `ad H_1 .. ad H_{n-1}` (zero for the
    /// Cartan elements themselves).
    pub basis_weights: Vec<Vec<i64>>,
}

impl SpecialLinear {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "sl_n needs n >= 2");
        let dim = n * n - 1;
        let mut names = Vec::with_capacity(dim);
        let mut basis: Vec<RatMat> = Vec::with_capacity(dim);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                names.push(format!("E{}{}", i + 1, j + 1));
                let mut m = vec![BigRational::zero(); n * n];
                m[i * n + j] = rat(1);
                basis.push(m);
            }
        }
        for i in 0..n - 1 {
            names.push(format!("H{}", i + 1));
            let mut m = vec![BigRational::zero(); n * n];
            m[i * n + i] = rat(1);
            m[(i + 1) * n + (i + 1)] = rat(-1);
            basis.push(m);
        }

        // Express a traceless matrix in basis coordinates: off-diagonals are
        // immediate, diagonals solve against the H ladder.
        let expand = |m: &RatMat| -> Vec<BigRational> {
            let mut coords = vec![BigRational::zero(); dim];
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    coords[idx] = m[i * n + j].clone();
                    idx += 1;
                }
            }
            // diag(d_1..d_n) with sum 0 equals sum_i (d_1+..+d_i) H_i.
            let mut partial = BigRational::zero();
            for i in 0..n - 1 {
                partial += &m[i * n + i];
                coords[idx + i] = partial.clone();
            }
            coords
        };

        let mut bracket_table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let ab = mat_mul(n, &basis[a], &basis[b]);
                let ba = mat_mul(n, &basis[b], &basis[a]);
                let comm: RatMat = ab
                    .iter()
                    .zip(&ba)
                    .map(|(x, y)| x - y)
                    .collect();
                let coords = expand(&comm);
                let sparse: Vec<(usize, BigRational)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                bracket_table.push(sparse);
            }
        }

        let gram = DenseMat::from_fn(dim, dim, |a, b| {
            GaussianRational::from_rational(mat_trace(n, &mat_mul(n, &basis[a], &basis[b])))
        });
        let gram_inv = gram.inverse().expect("trace form is nondegenerate");

        // sigma(E_ij) = -E_ji, sigma(H_i) = -H_i: a signed basis permutation.
        let mut sigma_perm = vec![0usize; dim];
        let sigma_sign = vec![-1i64; dim];
        let index_of = |i: usize, j: usize| -> usize {
            // position of E_ij in the row-major off-diagonal enumeration
            let mut idx = 0;
            for r in 0..n {
                for c in 0..n {
                    if r == c {
                        continue;
                    }
                    if r == i && c == j {
                        return idx;
                    }
                    idx += 1;
                }
            }
            unreachable!()
        };
        {
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    sigma_perm[idx] = index_of(j, i);
                    idx += 1;
                }
            }
            for i in 0..n - 1 {
                sigma_perm[idx + i] = idx + i;
            }
        }

        let mut sl = SpecialLinear {
            n,
            dim,
            names,
            basis,
            bracket_table,
            gram,
            gram_inv,
            sigma_perm,
            sigma_sign,
            basis_weights: Vec::new(),
        };
        sl.sigma_sign = vec![-1; dim];
        sl.basis_weights = (0..dim)
            .map(|a| {
                (0..n - 1)
                    .map(|i| {
                        let h = sl.index_of_h(i);
                        let br = sl.bracket_basis(h, a);
                        if br.is_empty() {
                            0
                        } else {
                            assert!(br.len() == 1 && br[0].0 == a, "basis not ad-H diagonal");
                            let v = &br[0].1;
                            assert!(v.denom().is_one());
                            let digits = v.numer().to_string();
                            digits.parse::<i64>().unwrap()
                        }
                    })
                    .collect()
            })
            .collect();
        sl
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn index_of_h(&self, i: usize) -> usize {
        self.dim - (self.n - 1) + i
    }

    /// `[x_a, x_b]` in sparse basis coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, BigRational)] {
        &self.bracket_table[a * self.dim + b]
    }

    /// Bracket of general coordinate vectors.
    pub fn bracket(&self, x: &[GaussianRational], y: &[GaussianRational]) -> Vec<GaussianRational> {
        let mut out = vec![GaussianRational::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let xy = xa * yb;
                for (c, coef) in self.bracket_basis(a, b) {
                    out[*c] += &(&xy * &GaussianRational::from_rational(coef.clone()));
                }
            }
        }
        out
    }

    /// Anti-linear Cartan involution `x -> -conj(x)^t` on coordinates.
    pub fn cartan_involution(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        let mut out = vec![GaussianRational::zero(); self.dim];
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = GaussianRational::from_int(self.sigma_sign[a]);
            out[self.sigma_perm[a]] += &(c.conj() * &s);
        }
        out
    }

    /// Invariant bilinear form `(x, y) = tr(xy)` in the defining
    /// representation (complex bilinear, no conjugation).
    pub fn trace_form(&self, x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
        let mut out = GaussianRational::zero();
        for a in 0..self.dim {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                if y[b].is_zero() {
                    continue;
                }
                out += &(&(&x[a] * &y[b]) * self.gram.at(a, b));
            }
        }
        out
    }

    pub fn basis_vector(&self, a: usize) -> Vec<GaussianRational> {
        let mut v = vec![GaussianRational::zero(); self.dim];
        v[a] = GaussianRational::one();
        v
    }

    /// Generators of the invariant ring: the power-trace functions of degree
    /// `2..=n`, expanded over the trace-form dual basis. Each is killed by the
    /// full adjoint action.
    pub fn casimirs(&self) -> Vec<SymElement> {
        // dual basis matrices: x^a = sum_b graminv[a][b] x_b
        let dual: Vec<RatMat> = (0..self.dim)
            .map(|a| {
                let mut m = vec![BigRational::zero(); self.n * self.n];
                for b in 0..self.dim {
                    let c = self.gram_inv.at(a, b);
                    if c.is_zero() {
                        continue;
                    }
                    let r = c.as_rational().expect("trace form is rational");
                    for (mi, entry) in self.basis[b].iter().enumerate() {
                        if !entry.is_zero() {
                            m[mi] += r * entry;
                        }
                    }
                }
                m
            })
            .collect();
        let mut out = Vec::new();
        for k in 2..=self.n {
            let mut elt = SymElement::zero(self.dim);
            let mut tuple = vec![0usize; k];
            loop {
                // trace of the dual product along this tuple
                let mut prod = dual[tuple[0]].clone();
                for &t in &tuple[1..] {
                    prod = mat_mul(self.n, &prod, &dual[t]);
                }
                let tr = mat_trace(self.n, &prod);
                if !tr.is_zero() {
                    let mut mono = Mono::zero(self.dim);
                    for &t in &tuple {
                        mono.0[t] += 1;
                    }
                    map_insert(
                        &mut elt.terms,
                        mono,
                        GaussianRational::from_rational(tr),
                    );
                }
                // advance tuple
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    tuple[pos] += 1;
                    if tuple[pos] < self.dim {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
            out.push(elt);
        }
        out
    }

    /// Adjoint action of basis element `a` as a derivation of the symmetric
    /// algebra.
    pub fn ad_sym(&self, a: usize, f: &SymElement) -> SymElement {
        let mut out = SymElement::zero(self.dim);
        for (mono, c) in &f.terms {
            for b in 0..self.dim {
                if mono.0[b] == 0 {
                    continue;
                }
                let (e, lowered) = mono.step_down(b).unwrap();
                let fac = GaussianRational::from_int(e as i64);
                for (t, coef) in self.bracket_basis(a, b) {
                    let raised = lowered.step_up(*t);
                    let coeff = &(c * &fac) * &GaussianRational::from_rational(coef.clone());
                    map_insert(&mut out.terms, raised, coeff);
                }
            }
        }
        out
    }

    /// Anti-linear extension of the Cartan involution to the symmetric
    /// algebra (a signed monomial permutation on this basis).
    pub fn sigma_sym(&self, f: &SymElement) -> SymElement {
        let mut out = SymElement::zero(self.dim);
        for (mono, c) in &f.terms {
            let mut m2 = Mono::zero(self.dim);
            let mut sign = 1i64;
            for (a, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                m2.0[self.sigma_perm[a]] += e;
                if self.sigma_sign[a] < 0 && e % 2 == 1 {
                    sign = -sign;
                }
            }
            map_insert(
                &mut out.terms,
                m2,
                c.conj() * &GaussianRational::from_int(sign),
            );
        }
        out
    }

    /// `fischer_pair(f, g) = constant term of (d_g f)`, linear in `f` and
    /// anti-linear in `g`, where degree-one elements act by
    /// `d_x(y) = -(sigma(x), y)`.
    pub fn fischer_pair(&self, f: &SymElement, g: &SymElement) -> GaussianRational {
        // Directional matrix D[a][b] = -(sigma(x_a), x_b): real rational.
        let mut total = GaussianRational::zero();
        for (gmono, gc) in &g.terms {
            let mut work = f.clone();
            for (a, &e) in gmono.0.iter().enumerate() {
                for _ in 0..e {
                    work = self.fischer_derive(a, &work);
                    if work.terms.is_empty() {
                        break;
                    }
                }
                if work.terms.is_empty() {
                    break;
                }
            }
            let c0 = work
                .terms
                .get(&Mono::zero(self.dim))
                .cloned()
                .unwrap_or_else(GaussianRational::zero);
            total += &(gc.conj() * &c0);
        }
        total
    }

    /// Apply `d_{x_a}` once.
    fn fischer_derive(&self, a: usize, f: &SymElement) -> SymElement {
        let pa = self.sigma_perm[a];
        let sa = self.sigma_sign[a];
        let mut out = SymElement::zero(self.dim);
        for (mono, c) in &f.terms {
            for b in 0..self.dim {
                if mono.0[b] == 0 {
                    continue;
                }
                // -(sigma(x_a), x_b) = -sign_a * gram[perm_a][b]
                let g = self.gram.at(pa, b);
                if g.is_zero() {
                    continue;
                }
                let (e, lowered) = mono.step_down(b).unwrap();
                let coeff = c
                    * &GaussianRational::from_int(e as i64)
                    * &GaussianRational::from_int(-sa)
                    * g;
                map_insert(&mut out.terms, lowered, coeff);
            }
        }
        out
    }

    /// Compact real form basis (fixed points of the Cartan involution), with
    /// Gaussian-rational coordinates: `i H_a`, `E_ab - E_ba`, `i(E_ab + E_ba)`.
    pub fn compact_form_basis(&self) -> Vec<Vec<GaussianRational>> {
        let mut out = Vec::new();
        let i = GaussianRational::i();
        for a in 0..self.n - 1 {
            let mut v = vec![GaussianRational::zero(); self.dim];
            v[self.index_of_h(a)] = i.clone();
            out.push(v);
        }
        let mut idx = 0;
        let mut e_index = BTreeMap::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if r == c {
                    continue;
                }
                e_index.insert((r, c), idx);
                idx += 1;
            }
        }
        for r in 0..self.n {
            for c in r + 1..self.n {
                let ei = e_index[&(r, c)];
                let ej = e_index[&(c, r)];
                let mut v = vec![GaussianRational::zero(); self.dim];
                v[ei] = GaussianRational::one();
                v[ej] = -GaussianRational::one();
                out.push(v);
                let mut w = vec![GaussianRational::zero(); self.dim];
                w[ei] = i.clone();
                w[ej] = i.clone();
                out.push(w);
            }
        }
        out
    }
}

/// Element of the symmetric algebra `S(g)`: commutative monomials over the
/// basis indices with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymElement {
    pub terms: BTreeMap<Mono, GaussianRational>,
}

impl SymElement {
    pub fn zero(_dim: usize) -> Self {
        SymElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::zero(dim), GaussianRational::one());
        SymElement { terms }
    }

    pub fn generator(dim: usize, a: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(dim, a), GaussianRational::one());
        SymElement { terms }
    }

    pub fn from_mono(mono: Mono, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        map_insert(&mut terms, mono, c);
        SymElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            map_insert(&mut terms, m.clone(), c.clone());
        }
        SymElement { terms }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return SymElement {
                terms: BTreeMap::new(),
            };
        }
        SymElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                map_insert(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        SymElement { terms }
    }

    /// Total degree when homogeneous; `None` for zero or mixed.
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.total_degree();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn weight(&self, basis_weights: &[Vec<i64>]) -> Option<Vec<i64>> {
        let rank = basis_weights.first().map(|w| w.len()).unwrap_or(0);
        let mut found: Option<Vec<i64>> = None;
        for mono in self.terms.keys() {
            let mut w = vec![0i64; rank];
            for (a, &e) in mono.0.iter().enumerate() {
                for r in 0..rank {
                    w[r] += e as i64 * basis_weights[a][r];
                }
            }
            match &found {
                None => found = Some(w),
                Some(prev) if *prev != w => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or_else(|| vec![0; rank]))
    }
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (a, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "*g{}", a)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn sl2_bracket_relations() {
        let sl = SpecialLinear::new(2);
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        // [e, f] = h
        let ef = sl.bracket(&sl.basis_vector(e), &sl.basis_vector(f));
        assert_eq!(ef, sl.basis_vector(h));
        // [h, e] = 2e
        let he = sl.bracket(&sl.basis_vector(h), &sl.basis_vector(e));
        let mut expect = vec![GaussianRational::zero(); sl.dim];
        expect[e] = gq(2);
        assert_eq!(he, expect);
        // [x, x] = 0
        let x: Vec<_> = (0..sl.dim).map(|k| gq(k as i64 + 1)).collect();
        assert!(sl.bracket(&x, &x).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn jacobi_identity_small_ranks() {
        for n in 2..=4 {
            let sl = SpecialLinear::new(n);
            for a in 0..sl.dim {
                for b in 0..sl.dim {
                    for c in 0..sl.dim {
                        let va = sl.basis_vector(a);
                        let vb = sl.basis_vector(b);
                        let vc = sl.basis_vector(c);
                        let t1 = sl.bracket(&va, &sl.bracket(&vb, &vc));
                        let t2 = sl.bracket(&vb, &sl.bracket(&vc, &va));
                        let t3 = sl.bracket(&vc, &sl.bracket(&va, &vb));
                        for k in 0..sl.dim {
                            let s = t1[k].clone() + &t2[k] + &t3[k];
                            assert!(s.is_zero(), "jacobi fails for sl_{n} at ({a},{b},{c})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_involution_examples() {
        let sl = SpecialLinear::new(2);
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        // sigma(e) = -f, sigma(f) = -e, sigma(h) = -h
        let se = sl.cartan_involution(&sl.basis_vector(e));
        assert_eq!(se, sl.basis_vector(f).iter().map(|c| -c.clone()).collect::<Vec<_>>());
        let sh = sl.cartan_involution(&sl.basis_vector(h));
        assert_eq!(sh, sl.basis_vector(h).iter().map(|c| -c.clone()).collect::<Vec<_>>());
        // anti-linearity: sigma(i e) = -i sigma(e) = i f
        let mut ie = vec![GaussianRational::zero(); sl.dim];
        ie[e] = GaussianRational::i();
        let sie = sl.cartan_involution(&ie);
        let mut expect = vec![GaussianRational::zero(); sl.dim];
        expect[f] = GaussianRational::i();
        assert_eq!(sie, expect);
        // sigma is an involution and an automorphism of the twisted bracket
        let x: Vec<_> = (0..sl.dim).map(|k| gq(2 * k as i64 - 1)).collect();
        assert_eq!(sl.cartan_involution(&sl.cartan_involution(&x)), x);
        let y: Vec<_> = (0..sl.dim).map(|k| gq(k as i64 + 2)).collect();
        let lhs = sl.cartan_involution(&sl.bracket(&x, &y));
        let rhs = sl.bracket(&sl.cartan_involution(&x), &sl.cartan_involution(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_form_values() {
        let sl = SpecialLinear::new(2);
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        assert_eq!(sl.trace_form(&sl.basis_vector(e), &sl.basis_vector(f)), gq(1));
        assert_eq!(sl.trace_form(&sl.basis_vector(h), &sl.basis_vector(h)), gq(2));
        let sl3 = SpecialLinear::new(3);
        let e12 = sl3.index_of_name("E12").unwrap();
        let e13 = sl3.index_of_name("E13").unwrap();
        assert!(sl3
            .trace_form(&sl3.basis_vector(e12), &sl3.basis_vector(e13))
            .is_zero());
    }

    #[test]
    fn trace_form_invariance_random() {
        let sl = SpecialLinear::new(3);
        let x: Vec<_> = (0..sl.dim).map(|k| gq((k as i64 * 7 + 3) % 5 - 2)).collect();
        let y: Vec<_> = (0..sl.dim).map(|k| gq((k as i64 * 3 + 1) % 7 - 3)).collect();
        let w: Vec<_> = (0..sl.dim).map(|k| gq((k as i64 * 5 + 2) % 6 - 2)).collect();
        let lhs = sl.trace_form(&sl.bracket(&x, &y), &w);
        let rhs = sl.trace_form(&y, &sl.bracket(&x, &w));
        assert!((lhs + rhs).is_zero());
    }

    #[test]
    fn sl2_casimir() {
        let sl = SpecialLinear::new(2);
        let cs = sl.casimirs();
        assert_eq!(cs.len(), 1);
        let c2 = &cs[0];
        // 2 e f + 1/2 h^2 in the (E12, E21, H1) coordinates
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        let mut ef = Mono::zero(sl.dim);
        ef.0[e] += 1;
        ef.0[f] += 1;
        let mut hh = Mono::zero(sl.dim);
        hh.0[h] += 2;
        assert_eq!(c2.terms.get(&ef), Some(&gq(2)));
        assert_eq!(
            c2.terms.get(&hh),
            Some(&GaussianRational::from_ratio(1, 2))
        );
        assert_eq!(c2.terms.len(), 2);
        // killed by the adjoint action of every basis element
        for a in 0..sl.dim {
            assert!(sl.ad_sym(a, c2).is_zero(), "casimir not invariant under {a}");
        }
    }

    #[test]
    fn sl3_casimir_count_and_invariance() {
        let sl = SpecialLinear::new(3);
        let cs = sl.casimirs();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].degree(), Some(2));
        assert_eq!(cs[1].degree(), Some(3));
        for c in &cs {
            for a in 0..sl.dim {
                assert!(sl.ad_sym(a, c).is_zero());
            }
        }
    }

    #[test]
    fn fischer_degree_one() {
        let sl = SpecialLinear::new(2);
        let e = sl.index_of_name("E12").unwrap();
        let xe = SymElement::generator(sl.dim, e);
        // bh(e, e) = -(sigma(e), e) = (f, e) = 1
        assert_eq!(sl.fischer_pair(&xe, &xe), gq(1));
        // distinct degrees pair to zero
        let one = SymElement::one(sl.dim);
        assert!(sl.fischer_pair(&xe, &one.mul(&xe).mul(&xe)).is_zero());
        assert!(sl.fischer_pair(&xe.mul(&xe), &xe).is_zero());
    }

    #[test]
    fn fischer_hermitian_and_positive() {
        let sl = SpecialLinear::new(2);
        let e = SymElement::generator(sl.dim, 0);
        let f = SymElement::generator(sl.dim, 1);
        let h = SymElement::generator(sl.dim, 2);
        let p = e.mul(&f).add(&h.mul(&h).scale(&GaussianRational::i()));
        let q = h.mul(&e).sub(&f.mul(&f).scale(&gq(3)));
        let b1 = sl.fischer_pair(&p, &q);
        let b2 = sl.fischer_pair(&q, &p);
        assert_eq!(b1, b2.conj());
        let norm = sl.fischer_pair(&p, &p);
        assert!(norm.is_positive_real(), "bh(p,p) = {norm} not positive");
    }
}
