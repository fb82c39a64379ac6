//! Concrete realization on the big cell of a flag manifold of `SL_n`.
//!
//! Points of the flag variety are flags of row spans; the big cell is the
//! dense chart of unit block-unipotent matrices, with one coordinate per free
//! entry. Differentiating the matrix action of a one-parameter subgroup
//! produces the vector fields `xi^x` (quadratic coefficients), the
//! half-density twist adds half the divergence, and first-order symbols give
//! the momentum functions `mu^x`.

use num_traits::{One, Zero};

use crate::lie::{SpecialLinear, SymElement};
use crate::poly::{CellPoly, SymbolPoly};
use crate::scalar::GaussianRational;
use crate::weyl::WeylOp;
use crate::{Error, Result};

/// Flag type: the strictly increasing subspace dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagConfig {
    pub n: usize,
    pub dims: Vec<usize>,
}

impl FlagConfig {
    pub fn new(n: usize, dims: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {n}")));
        }
        if dims.is_empty() {
            return Err(Error::Config("flag type must be nonempty".into()));
        }
        for w in dims.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Config(format!(
                    "flag type must be strictly increasing, got {dims:?}"
                )));
            }
        }
        if dims[0] < 1 || *dims.last().unwrap() > n - 1 {
            return Err(Error::Config(format!(
                "flag type entries must lie in 1..={}, got {dims:?}",
                n - 1
            )));
        }
        Ok(FlagConfig { n, dims })
    }

    /// The projective space of lines.
    pub fn projective(n: usize) -> Self {
        FlagConfig { n, dims: vec![1] }
    }

    /// The full flag variety.
    pub fn full(n: usize) -> Self {
        FlagConfig {
            n,
            dims: (1..n).collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.dims.len() == self.n - 1
    }

    pub fn is_projective(&self) -> bool {
        self.dims == [1]
    }

    /// Consecutive block sizes cut out by the flag type.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len() + 1);
        let mut prev = 0;
        for &d in &self.dims {
            out.push(d - prev);
            prev = d;
        }
        out.push(self.n - prev);
        out
    }

    /// Block index of matrix row/column `i`.
    fn block_of(&self, i: usize) -> usize {
        let mut b = 0;
        let mut acc = 0;
        for s in self.block_sizes() {
            acc += s;
            if i < acc {
                return b;
            }
            b += 1;
        }
        unreachable!()
    }

    /// Matrix positions of the chart coordinates, row-major over the entries
    /// strictly above the block diagonal.
    pub fn coord_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.block_of(i) < self.block_of(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Dimension of the flag variety (number of free chart entries).
    pub fn cell_dim(&self) -> usize {
        self.coord_positions().len()
    }
}

/// The realized model: vector fields, half-density operators, and momentum
/// symbols for every basis element, plus torus weights of the coordinates.
///
/// Immutable after construction; construction verifies the homomorphism and
/// self-adjointness identities exactly and fails loudly otherwise.
pub struct FlagModel {
    pub config: FlagConfig,
    pub sl: SpecialLinear,
    /// Chart dimension.
    pub m: usize,
    /// Vector fields, one per basis element of `sl_n`.
    pub xi: Vec<WeylOp>,
    /// Half-density twisted operators `eta^x = xi^x + div(xi^x)/2`.
    pub eta: Vec<WeylOp>,
    /// Momentum symbols `mu^x = symbol(eta^x, 1)`.
    pub mu: Vec<SymbolPoly>,
    /// Torus weight vector of each chart coordinate.
    pub z_weights: Vec<Vec<i64>>,
    /// Invariant generators of degrees `2..=n`.
    pub casimirs: Vec<SymElement>,
    /// Scalar acting as the image of each casimir.
    pub casimir_scalars: Vec<GaussianRational>,
}

/// `n x n` matrix of chart polynomials.
type PolyMat = Vec<Vec<CellPoly>>;

fn poly_mat_mul(n: usize, a: &PolyMat, b: &PolyMat) -> PolyMat {
    let m = a[0][0].nvars;
    let mut out = vec![vec![CellPoly::zero(m); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

impl FlagModel {
    /// Builds and validates the model for a flag configuration.
    pub fn build(config: FlagConfig) -> Result<FlagModel> {
        let sl = SpecialLinear::new(config.n);
        let n = config.n;
        let positions = config.coord_positions();
        let m = positions.len();

        // Chart matrix W: identity plus one coordinate per free entry.
        let mut w: PolyMat = vec![vec![CellPoly::zero(m); n]; n];
        for i in 0..n {
            w[i][i] = CellPoly::one(m);
        }
        for (k, &(i, j)) in positions.iter().enumerate() {
            w[i][j] = CellPoly::var(m, k);
        }
        // W^{-1} = sum (-N)^k for the nilpotent part N = W - I.
        let mut nil: PolyMat = vec![vec![CellPoly::zero(m); n]; n];
        for (k, &(i, j)) in positions.iter().enumerate() {
            nil[i][j] = CellPoly::var(m, k);
        }
        let mut w_inv: PolyMat = vec![vec![CellPoly::zero(m); n]; n];
        for i in 0..n {
            w_inv[i][i] = CellPoly::one(m);
        }
        let mut power = nil.clone();
        let mut sign_neg = true;
        loop {
            let mut all_zero = true;
            for i in 0..n {
                for j in 0..n {
                    if !power[i][j].is_zero() {
                        all_zero = false;
                        let term = if sign_neg {
                            power[i][j].neg()
                        } else {
                            power[i][j].clone()
                        };
                        w_inv[i][j] = w_inv[i][j].add(&term);
                    }
                }
            }
            if all_zero {
                break;
            }
            power = poly_mat_mul(n, &power, &nil);
            sign_neg = !sign_neg;
        }

        let block_of: Vec<usize> = (0..n).map(|i| config.block_of(i)).collect();

        // xi^x from the first-order expansion of the action: the chart
        // velocity is (W x W^{-1})_{above-block-diagonal} * W.
        let mut xi = Vec::with_capacity(sl.dim);
        for a in 0..sl.dim {
            let xmat: PolyMat = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let e = &sl.basis[a][i * n + j];
                            if e.is_zero() {
                                CellPoly::zero(m)
                            } else {
                                CellPoly::constant(m, GaussianRational::from_rational(e.clone()))
                            }
                        })
                        .collect()
                })
                .collect();
            let b = poly_mat_mul(n, &poly_mat_mul(n, &w, &xmat), &w_inv);
            let mut upper: PolyMat = vec![vec![CellPoly::zero(m); n]; n];
            for i in 0..n {
                for j in 0..n {
                    if block_of[i] < block_of[j] {
                        upper[i][j] = b[i][j].clone();
                    }
                }
            }
            let vel = poly_mat_mul(n, &upper, &w);
            // Velocity must be supported exactly on the free entries.
            for i in 0..n {
                for j in 0..n {
                    if block_of[i] >= block_of[j] && !vel[i][j].is_zero() {
                        return Err(Error::Consistency {
                            anchor: "sec:cot".into(),
                            detail: format!(
                                "chart velocity of {} has entry outside the cell at ({i},{j})",
                                sl.names[a]
                            ),
                        });
                    }
                }
            }
            let coeffs: Vec<CellPoly> = positions.iter().map(|&(i, j)| vel[i][j].clone()).collect();
            // One-step flags have an abelian unipotent radical and the chart
            // action is then genuinely quadratic; multi-step flags can and do
            // produce higher-degree coefficients (sl_3 full flag reaches 3).
            if config.dims.len() == 1 {
                for c in &coeffs {
                    if c.degree() > 2 {
                        return Err(Error::Consistency {
                            anchor: "sec:cot".into(),
                            detail: format!(
                                "vector field coefficient of {} has degree {} > 2",
                                sl.names[a],
                                c.degree()
                            ),
                        });
                    }
                }
            }
            xi.push(WeylOp::first_order(&coeffs, &CellPoly::zero(m)));
        }

        // Lie algebra homomorphism, exhaustively on basis pairs.
        for a in 0..sl.dim {
            for b in 0..sl.dim {
                let mut expect = WeylOp::zero(m);
                for (c, coef) in sl.bracket_basis(a, b) {
                    expect = expect.add(&xi[*c].scale(&GaussianRational::from_rational(coef.clone())));
                }
                if xi[a].commutator(&xi[b]) != expect {
                    return Err(Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: format!(
                            "[xi^{}, xi^{}] != xi^[{},{}]",
                            sl.names[a], sl.names[b], sl.names[a], sl.names[b]
                        ),
                    });
                }
            }
        }

        let eta: Vec<WeylOp> = xi
            .iter()
            .map(|v| half_density_twist(v))
            .collect::<Result<_>>()?;

        // The twist makes every generator formally skew self-adjoint.
        for (a, op) in eta.iter().enumerate() {
            if op.transpose() != op.neg() {
                return Err(Error::Consistency {
                    anchor: "sec:eqprob".into(),
                    detail: format!("transpose(eta^{}) != -eta^{}", sl.names[a], sl.names[a]),
                });
            }
        }

        let mu: Vec<SymbolPoly> = eta
            .iter()
            .map(|op| op.symbol(1).map_err(Error::Order))
            .collect::<std::result::Result<_, _>>()?;

        // Torus weights: the Cartan fields must be diagonal with integer
        // coefficients.
        let mut z_weights = vec![vec![0i64; n - 1]; m];
        for i in 0..n - 1 {
            let h = sl.dim - (n - 1) + i;
            for (key, c) in &xi[h].terms {
                if key.d.total_degree() != 1 {
                    return Err(Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: "Cartan vector field is not first order".into(),
                    });
                }
                let slot = key.d.0.iter().position(|&e| e == 1).unwrap();
                let mut expected = key.z.clone();
                if expected.0[slot] == 0 {
                    return Err(Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: "Cartan vector field is not diagonal".into(),
                    });
                }
                expected.0[slot] -= 1;
                if !expected.is_zero() {
                    return Err(Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: "Cartan vector field is not diagonal".into(),
                    });
                }
                let r = c
                    .as_rational()
                    .filter(|r| r.denom().is_one())
                    .ok_or_else(|| Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: "non-integer torus weight".into(),
                    })?;
                z_weights[slot][i] = r.numer().to_string().parse::<i64>().map_err(|_| {
                    Error::Consistency {
                        anchor: "sec:cot".into(),
                        detail: "torus weight overflow".into(),
                    }
                })?;
            }
        }

        let casimirs = sl.casimirs();
        let mut model = FlagModel {
            config,
            sl,
            m,
            xi,
            eta,
            mu,
            z_weights,
            casimirs: casimirs.clone(),
            casimir_scalars: Vec::new(),
        };
        // Casimir images must be scalars; record the central character.
        let mut scalars = Vec::new();
        for c in &casimirs {
            let op = model.casimir_operator(c)?;
            match op.as_scalar() {
                Some(s) => scalars.push(s),
                None => {
                    return Err(Error::Consistency {
                        anchor: "sec:RR".into(),
                        detail: format!(
                            "casimir image is not scalar: order {} operator",
                            op.order()
                        ),
                    })
                }
            }
        }
        model.casimir_scalars = scalars;
        Ok(model)
    }

    /// Largest coefficient degree among the vector fields (2 for one-step
    /// flags, possibly more for multi-step flags).
    pub fn max_xi_degree(&self) -> u32 {
        self.xi
            .iter()
            .flat_map(|op| op.terms.keys().map(|k| k.z.total_degree()))
            .max()
            .unwrap_or(0)
    }

    /// `eta` of a general coordinate vector.
    pub fn eta_of(&self, x: &[GaussianRational]) -> WeylOp {
        let mut out = WeylOp::zero(self.m);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.eta[a].scale(c));
            }
        }
        out
    }

    /// `mu` of a general coordinate vector.
    pub fn mu_of(&self, x: &[GaussianRational]) -> SymbolPoly {
        let mut out = SymbolPoly::zero(self.m);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.mu[a].scale(c));
            }
        }
        out
    }

    /// Symmetrized operator word: the average over all distinct orderings of
    /// the monomial's letters, composed as `eta` operators.
    pub fn symmetrized_eta_word(&self, mono: &crate::mono::Mono) -> WeylOp {
        let mut letters: Vec<usize> = Vec::new();
        for (a, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                letters.push(a);
            }
        }
        if letters.is_empty() {
            return WeylOp::one(self.m);
        }
        let mut sum = WeylOp::zero(self.m);
        let mut count = 0u64;
        let mut perm = letters.clone();
        loop {
            let mut op = self.eta[perm[0]].clone();
            for &a in &perm[1..] {
                op = op.compose(&self.eta[a]);
            }
            sum = sum.add(&op);
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        sum.scale(&GaussianRational::from_ratio(1, count as i64))
    }

    /// Symmetrized image of an invariant; scalar by construction (checked at
    /// build time).
    pub fn casimir_operator(&self, c: &SymElement) -> Result<WeylOp> {
        let mut out = WeylOp::zero(self.m);
        for (mono, coeff) in &c.terms {
            out = out.add(&self.symmetrized_eta_word(mono).scale(coeff));
        }
        Ok(out)
    }

    /// Substitution `S(g) -> R`, sending each generator to its momentum
    /// symbol.
    pub fn substitute(&self, f: &SymElement) -> SymbolPoly {
        let mut out = SymbolPoly::zero(self.m);
        for (mono, coeff) in &f.terms {
            let mut prod = SymbolPoly::one(self.m);
            for (a, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&self.mu[a]);
                }
            }
            out = out.add(&prod.scale(coeff));
        }
        out
    }
}

/// `eta = xi + div(xi)/2` in the flat chart trivialization. Errors unless the
/// input is first order with zero constant term.
pub fn half_density_twist(xi: &WeylOp) -> Result<WeylOp> {
    let m = xi.m;
    let mut div = WeylOp::zero(m);
    for (key, c) in &xi.terms {
        if key.d.total_degree() != 1 {
            return Err(Error::Order(format!(
                "half-density twist needs a first-order vector field, found z^{:?} d^{:?}",
                key.z.0, key.d.0
            )));
        }
        let slot = key.d.0.iter().position(|&e| e == 1).unwrap();
        if let Some((e, lowered)) = key.z.step_down(slot) {
            let mut cp = CellPoly::zero(m);
            crate::poly::map_insert(
                &mut cp.terms,
                lowered,
                c * &GaussianRational::from_int(e as i64),
            );
            div = div.add(&WeylOp::first_order(&vec![CellPoly::zero(m); m], &cp));
        }
    }
    Ok(xi.add(&div.scale(&GaussianRational::from_ratio(1, 2))))
}

/// In-place next lexicographic permutation over possibly repeated letters.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn config_validation() {
        assert!(FlagConfig::new(3, vec![1, 2]).is_ok());
        assert!(FlagConfig::new(3, vec![2, 1]).is_err());
        assert!(FlagConfig::new(3, vec![0]).is_err());
        assert!(FlagConfig::new(3, vec![3]).is_err());
        assert!(FlagConfig::new(1, vec![1]).is_err());
    }

    #[test]
    fn cell_dimensions() {
        assert_eq!(FlagConfig::projective(2).cell_dim(), 1);
        assert_eq!(FlagConfig::projective(3).cell_dim(), 2);
        assert_eq!(FlagConfig::full(3).cell_dim(), 3);
        assert_eq!(FlagConfig::new(4, vec![2]).unwrap().cell_dim(), 4);
        assert_eq!(FlagConfig::full(4).cell_dim(), 6);
    }

    #[test]
    fn sl2_projective_fields() {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        let sl = &model.sl;
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        let m = 1;
        let z = WeylOp::z(m, 0);
        let d = WeylOp::dz(m, 0);
        // xi^e = d1, xi^h = -2 z1 d1, xi^f = -z1^2 d1
        assert_eq!(model.xi[e], d);
        assert_eq!(model.xi[h], z.compose(&d).scale(&gq(-2)));
        assert_eq!(model.xi[f], z.compose(&z).compose(&d).neg());
        // eta^e = d1, eta^h = -2 z1 d1 - 1, eta^f = -z1^2 d1 - z1
        assert_eq!(model.eta[e], d);
        assert_eq!(
            model.eta[h],
            z.compose(&d).scale(&gq(-2)).sub(&WeylOp::one(m))
        );
        assert_eq!(
            model.eta[f],
            z.compose(&z).compose(&d).neg().sub(&z)
        );
        // mu^h = -2 z1 p1
        let zp = SymbolPoly::z(m, 0).mul(&SymbolPoly::p(m, 0));
        assert_eq!(model.mu[h], zp.scale(&gq(-2)));
        // z-weight of z1 under H1 is -2
        assert_eq!(model.z_weights, vec![vec![-2]]);
    }

    #[test]
    fn sl2_casimir_scalar() {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        assert_eq!(model.casimir_scalars.len(), 1);
        assert_eq!(model.casimir_scalars[0], GaussianRational::from_ratio(-1, 2));
    }

    #[test]
    fn sl3_full_flag_model() {
        let model = FlagModel::build(FlagConfig::full(3)).unwrap();
        assert_eq!(model.m, 3);
        // The multi-step chart action is cubic in the lowest-root direction.
        assert_eq!(model.max_xi_degree(), 3);
        // both casimir images are scalars (checked in build); record count
        assert_eq!(model.casimir_scalars.len(), 2);
    }

    #[test]
    fn one_step_flags_are_quadratic() {
        for config in [FlagConfig::projective(2), FlagConfig::projective(3), FlagConfig::new(4, vec![2]).unwrap()] {
            let model = FlagModel::build(config).unwrap();
            assert!(model.max_xi_degree() <= 2);
        }
    }

    #[test]
    fn sl3_projective_model() {
        let model = FlagModel::build(FlagConfig::projective(3)).unwrap();
        assert_eq!(model.m, 2);
        assert_eq!(model.casimir_scalars.len(), 2);
    }

    #[test]
    fn mu_poisson_homomorphism_sl2() {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        let sl = &model.sl;
        let e = sl.index_of_name("E12").unwrap();
        let f = sl.index_of_name("E21").unwrap();
        let h = sl.index_of_name("H1").unwrap();
        assert_eq!(model.mu[e].poisson(&model.mu[f]), model.mu[h]);
    }

    #[test]
    fn twist_rejects_higher_order() {
        let m = 1;
        let second = WeylOp::dz(m, 0).compose(&WeylOp::dz(m, 0));
        assert!(half_density_twist(&second).is_err());
    }

    #[test]
    fn permutation_enumeration() {
        let mut p = vec![0usize, 1, 1];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 3);
    }
}
