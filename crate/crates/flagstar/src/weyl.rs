//! Polynomial-coefficient differential operators in normal order.
//!
//! A [`WeylOp`] is stored as a map from `z^a d^b` (all `z` factors to the left
//! of all derivatives) to its exact coefficient; normal order makes equality
//! canonical, which the basis extraction relies on. Composition expands
//! `d^b * z^c` with exact binomial bookkeeping.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::mono::Mono;
use crate::poly::{CellPoly, SymbolPoly};
use crate::scalar::{parse_scalar, GaussianRational};

/// Normal-ordered operator monomial `z^z d^d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OpMono {
    pub z: Mono,
    pub d: Mono,
}

impl OpMono {
    pub fn order(&self) -> u32 {
        self.d.total_degree()
    }
}

impl PartialOrd for OpMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpMono {
    fn cmp(&self, other: &Self) -> Ordering {
        let ta = self.z.total_degree() + self.d.total_degree();
        let tb = other.z.total_degree() + other.d.total_degree();
        ta.cmp(&tb)
            .then_with(|| self.d.total_degree().cmp(&other.d.total_degree()))
            .then_with(|| self.z.0.cmp(&other.z.0))
            .then_with(|| self.d.0.cmp(&other.d.0))
    }
}

/// Element of the Weyl algebra on `z1..zm`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylOp {
    pub m: usize,
    pub terms: BTreeMap<OpMono, GaussianRational>,
}

fn insert_term(terms: &mut BTreeMap<OpMono, GaussianRational>, k: OpMono, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&k) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                terms.remove(&k);
            }
        }
        None => {
            terms.insert(k, c);
        }
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for j in 0..k {
        r = r * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    r
}

fn factorial(n: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for j in 2..=n {
        r *= BigInt::from(j);
    }
    r
}

impl WeylOp {
    pub fn zero(m: usize) -> Self {
        WeylOp {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(
            &mut terms,
            OpMono {
                z: Mono::zero(m),
                d: Mono::zero(m),
            },
            c,
        );
        WeylOp { m, terms }
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, GaussianRational::one())
    }

    /// The coordinate operator `z_i`.
    pub fn z(m: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            OpMono {
                z: Mono::var(m, i),
                d: Mono::zero(m),
            },
            GaussianRational::one(),
        );
        WeylOp { m, terms }
    }

    /// The derivative `d/dz_i`.
    pub fn dz(m: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            OpMono {
                z: Mono::zero(m),
                d: Mono::var(m, i),
            },
            GaussianRational::one(),
        );
        WeylOp { m, terms }
    }

    /// First-order operator `sum_i coeffs[i] * d/dz_i + constant`.
    pub fn first_order(coeffs: &[CellPoly], constant: &CellPoly) -> Self {
        let m = coeffs.len();
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            assert_eq!(c.nvars, m);
            for (mono, v) in &c.terms {
                insert_term(
                    &mut terms,
                    OpMono {
                        z: mono.clone(),
                        d: Mono::var(m, i),
                    },
                    v.clone(),
                );
            }
        }
        for (mono, v) in &constant.terms {
            insert_term(
                &mut terms,
                OpMono {
                    z: mono.clone(),
                    d: Mono::zero(m),
                },
                v.clone(),
            );
        }
        WeylOp { m, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max total derivative degree; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|k| k.order()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mismatched variable counts");
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            insert_term(&mut terms, k.clone(), c.clone());
        }
        WeylOp { m: self.m, terms }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return WeylOp::zero(self.m);
        }
        WeylOp {
            m: self.m,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Normal-ordered product. The order of the result is at most the sum of
    /// the factor orders.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mismatched variable counts");
        let m = self.m;
        let mut terms = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                // d^beta z^gamma = sum_k prod_i C(beta_i,k_i) C(gamma_i,k_i) k_i!
                //                  z^{gamma-k} d^{beta-k}
                let beta = &ka.d;
                let gamma = &kb.z;
                let coeff = ca * cb;
                expand_reorder(&mut terms, m, &ka.z, beta, gamma, &kb.d, &coeff);
            }
        }
        WeylOp { m, terms }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Formal transpose: `z_i -> z_i`, `d_i -> -d_i`, extended as an algebra
    /// anti-automorphism. An involution.
    pub fn transpose(&self) -> Self {
        let m = self.m;
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            // transpose(z^a d^b) = (-1)^{|b|} d^b z^a, then normal order.
            let sign = if k.d.total_degree() % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            expand_reorder(&mut terms, m, &Mono::zero(m), &k.d, &k.z, &Mono::zero(m), &sign);
        }
        WeylOp { m, terms }
    }

    /// Coefficientwise complex conjugation; fixes `z_i` and `d_i`.
    pub fn bar(&self) -> Self {
        WeylOp {
            m: self.m,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect(),
        }
    }

    /// The degree-`d` symbol: each term `z^a d^b` with `|b| = d` contributes
    /// `z^a p^b`; lower-order terms drop. Errors when the operator order
    /// exceeds `d`.
    pub fn symbol(&self, d: u32) -> Result<SymbolPoly, String> {
        if self.order() > d {
            return Err(format!(
                "operator order {} exceeds requested symbol degree {}",
                self.order(),
                d
            ));
        }
        let mut out = SymbolPoly::zero(self.m);
        for (k, c) in &self.terms {
            if k.order() != d {
                continue;
            }
            let mut exps = k.z.0.clone();
            exps.extend_from_slice(&k.d.0);
            crate::poly::map_insert(&mut out.terms, Mono(exps), c.clone());
        }
        Ok(out)
    }

    /// `Some(c)` when the operator is the constant `c`.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(GaussianRational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if k.z.is_zero() && k.d.is_zero() {
            Some(c.clone())
        } else {
            None
        }
    }

    /// Torus weight given per-variable weight vectors (derivatives carry the
    /// opposite weight of their coordinate). `None` when mixed.
    pub fn weight(&self, z_weights: &[Vec<i64>]) -> Option<Vec<i64>> {
        let rank = z_weights.first().map(|w| w.len()).unwrap_or(0);
        let mut found: Option<Vec<i64>> = None;
        for k in self.terms.keys() {
            let mut w = vec![0i64; rank];
            for i in 0..self.m {
                let net = k.z.0[i] as i64 - k.d.0[i] as i64;
                for a in 0..rank {
                    w[a] += net * z_weights[i][a];
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

    /// Splits into weight-homogeneous parts keyed by torus weight.
    pub fn weight_split(&self, z_weights: &[Vec<i64>]) -> Vec<(Vec<i64>, WeylOp)> {
        let rank = z_weights.first().map(|w| w.len()).unwrap_or(0);
        let mut buckets: BTreeMap<Vec<i64>, WeylOp> = BTreeMap::new();
        for (key, c) in &self.terms {
            let mut w = vec![0i64; rank];
            for i in 0..self.m {
                let net = key.z.0[i] as i64 - key.d.0[i] as i64;
                for a in 0..rank {
                    w[a] += net * z_weights[i][a];
                }
            }
            let entry = buckets.entry(w).or_insert_with(|| WeylOp::zero(self.m));
            insert_term(&mut entry.terms, key.clone(), c.clone());
        }
        buckets.into_iter().collect()
    }

    fn var_names(m: usize) -> Vec<String> {
        let mut names: Vec<String> = (1..=m).map(|i| format!("z{}", i)).collect();
        names.extend((1..=m).map(|i| format!("d{}", i)));
        names
    }
}

/// Accumulates `coeff * z^alpha (d^beta z^gamma) d^delta` in normal order.
fn expand_reorder(
    terms: &mut BTreeMap<OpMono, GaussianRational>,
    m: usize,
    alpha: &Mono,
    beta: &Mono,
    gamma: &Mono,
    delta: &Mono,
    coeff: &GaussianRational,
) {
    // Iterate over contraction multi-indices k with k_i <= min(beta_i, gamma_i).
    let caps: Vec<u32> = (0..m).map(|i| beta.0[i].min(gamma.0[i])).collect();
    let mut k = vec![0u32; m];
    loop {
        let mut factor = BigInt::from(1);
        for i in 0..m {
            if k[i] > 0 {
                factor *= binom(beta.0[i], k[i]) * binom(gamma.0[i], k[i]) * factorial(k[i]);
            }
        }
        let mut znew = alpha.0.clone();
        let mut dnew = delta.0.clone();
        for i in 0..m {
            znew[i] += gamma.0[i] - k[i];
            dnew[i] += beta.0[i] - k[i];
        }
        let c = coeff * &GaussianRational::from_rational(BigRational::from_integer(factor));
        insert_term(
            terms,
            OpMono {
                z: Mono(znew),
                d: Mono(dnew),
            },
            c,
        );
        // next multi-index
        let mut pos = 0;
        loop {
            if pos == m {
                return;
            }
            if k[pos] < caps[pos] {
                k[pos] += 1;
                break;
            }
            k[pos] = 0;
            pos += 1;
        }
    }
}

impl fmt::Display for WeylOp {
    /// Canonical text form mirroring `SymbolPoly` with derivative exponents
    /// named `d1..dm`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let names = Self::var_names(self.m);
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            let mut exps = k.z.0.clone();
            exps.extend_from_slice(&k.d.0);
            let ms = Mono(exps).format_with(&names);
            if !ms.is_empty() {
                write!(f, "*{}", ms)?;
            }
        }
        Ok(())
    }
}

/// Parses the canonical `WeylOp` serialization for `m` chart variables.
pub fn parse_weyl_op(s: &str, m: usize) -> Result<WeylOp, String> {
    let mut out = WeylOp::zero(m);
    for term in s.split(" + ") {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        if !term.starts_with('(') {
            return Err(format!("term must start with `(`: `{term}`"));
        }
        let close = term
            .find(')')
            .ok_or_else(|| format!("missing coefficient parens in `{term}`"))?;
        let coeff = parse_scalar(&term[1..close])?;
        if coeff.is_zero() {
            continue;
        }
        let rest = term[close + 1..].trim_start_matches('*');
        let mut z = Mono::zero(m);
        let mut d = Mono::zero(m);
        if !rest.is_empty() {
            for factor in rest.split('*') {
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>().map_err(|_| format!("bad power `{factor}`"))?,
                    ),
                    None => (factor, 1),
                };
                let (kind, num) = name.split_at(1);
                let idx: usize = num.parse().map_err(|_| format!("bad variable `{name}`"))?;
                if idx == 0 || idx > m {
                    return Err(format!("variable `{name}` out of range"));
                }
                match kind {
                    "z" => z.0[idx - 1] += pow,
                    "d" => d.0[idx - 1] += pow,
                    _ => return Err(format!("unknown variable `{name}`")),
                }
            }
        }
        insert_term(&mut out.terms, OpMono { z, d }, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn canonical_commutation() {
        let m = 1;
        // compose(d1, z1) = z1 d1 + 1
        let a = WeylOp::dz(m, 0).compose(&WeylOp::z(m, 0));
        let expect = WeylOp::z(m, 0).compose(&WeylOp::dz(m, 0)).add(&WeylOp::one(m));
        assert_eq!(a, expect);
        // compose(z1, d1) = z1 d1 (already normal ordered)
        let b = WeylOp::z(m, 0).compose(&WeylOp::dz(m, 0));
        assert_eq!(b.terms.len(), 1);
    }

    #[test]
    fn transpose_examples() {
        let m = 1;
        // transpose(d1) = -d1
        assert_eq!(WeylOp::dz(m, 0).transpose(), WeylOp::dz(m, 0).neg());
        // transpose(z1 d1) = -z1 d1 - 1
        let zd = WeylOp::z(m, 0).compose(&WeylOp::dz(m, 0));
        let expect = zd.neg().sub(&WeylOp::one(m));
        assert_eq!(zd.transpose(), expect);
    }

    #[test]
    fn transpose_is_anti_automorphism() {
        let m = 2;
        let a = WeylOp::z(m, 0)
            .compose(&WeylOp::dz(m, 1))
            .add(&WeylOp::dz(m, 0).scale(&gq(3)));
        let b = WeylOp::z(m, 1).compose(&WeylOp::z(m, 0)).compose(&WeylOp::dz(m, 0));
        let lhs = a.compose(&b).transpose();
        let rhs = b.transpose().compose(&a.transpose());
        assert_eq!(lhs, rhs);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn bar_is_antilinear_involution() {
        let m = 1;
        let a = WeylOp::dz(m, 0).scale(&GaussianRational::i());
        assert_eq!(a.bar(), WeylOp::dz(m, 0).scale(&-GaussianRational::i()));
        assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn symbol_extraction() {
        let m = 1;
        // symbol(z1 d1 + 1, 1) = z1 p1
        let a = WeylOp::z(m, 0).compose(&WeylOp::dz(m, 0)).add(&WeylOp::one(m));
        let s = a.symbol(1).unwrap();
        let expect = SymbolPoly::z(m, 0).mul(&SymbolPoly::p(m, 0));
        assert_eq!(s, expect);
        // order violation
        assert!(a.symbol(0).is_err());
    }

    #[test]
    fn symbol_multiplicativity() {
        let m = 2;
        let a = WeylOp::z(m, 0).compose(&WeylOp::dz(m, 1)); // order 1
        let b = WeylOp::dz(m, 0).compose(&WeylOp::dz(m, 1)); // order 2
        let ab = a.compose(&b);
        let sa = a.symbol(1).unwrap();
        let sb = b.symbol(2).unwrap();
        assert_eq!(ab.symbol(3).unwrap(), sa.mul(&sb));
    }

    #[test]
    fn commutator_symbol_is_poisson_bracket() {
        let m = 2;
        let a = WeylOp::z(m, 0)
            .compose(&WeylOp::z(m, 0))
            .compose(&WeylOp::dz(m, 0))
            .add(&WeylOp::z(m, 1).compose(&WeylOp::dz(m, 1)));
        let b = WeylOp::dz(m, 0).compose(&WeylOp::dz(m, 1));
        let j = 1u32;
        let k = 2u32;
        let comm = a.commutator(&b);
        let lhs = comm.symbol(j + k - 1).unwrap();
        let rhs = a.symbol(j).unwrap().poisson(&b.symbol(k).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sl2_eta_product() {
        // eta^e = d1, eta^f = -z1^2 d1 - z1; their product is
        // -z1^2 d1^2 - 3 z1 d1 - 1.
        let m = 1;
        let eta_e = WeylOp::dz(m, 0);
        let z = WeylOp::z(m, 0);
        let eta_f = z.compose(&z).compose(&WeylOp::dz(m, 0)).neg().sub(&z);
        let prod = eta_e.compose(&eta_f);
        let z2d2 = z.compose(&z).compose(&WeylOp::dz(m, 0)).compose(&WeylOp::dz(m, 0));
        let zd = z.compose(&WeylOp::dz(m, 0));
        let expect = z2d2.neg().sub(&zd.scale(&gq(3))).sub(&WeylOp::one(m));
        assert_eq!(prod, expect);
    }

    #[test]
    fn display_parse_roundtrip() {
        let m = 2;
        let a = WeylOp::z(m, 0)
            .compose(&WeylOp::dz(m, 1))
            .scale(&GaussianRational::from_ratio(-2, 3))
            .add(&WeylOp::one(m).scale(&GaussianRational::i()));
        let text = a.to_string();
        assert_eq!(parse_weyl_op(&text, m).unwrap(), a);
    }
}
