//! Sparse exact polynomials in the big-cell coordinates.
//!
//! [`CellPoly`] lives in the chart coordinates `z1..zm` and is the
//! coefficient ring of differential operators. [`SymbolPoly`] adds the fiber
//! coordinates `p1..pm` and houses symbol functions; its grading by `p`-degree
//! is the fiber grading everything else is built on. Zero coefficients are
//! never stored and iteration order is the canonical graded-lex order.

use std::collections::BTreeMap;
use std::fmt;

use crate::mono::Mono;
use crate::scalar::{parse_scalar, GaussianRational};

pub(crate) fn map_insert(terms: &mut BTreeMap<Mono, GaussianRational>, m: Mono, c: GaussianRational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

fn map_add(a: &BTreeMap<Mono, GaussianRational>, b: &BTreeMap<Mono, GaussianRational>) -> BTreeMap<Mono, GaussianRational> {
    let mut out = a.clone();
    for (m, c) in b {
        map_insert(&mut out, m.clone(), c.clone());
    }
    out
}

fn map_scale(a: &BTreeMap<Mono, GaussianRational>, s: &GaussianRational) -> BTreeMap<Mono, GaussianRational> {
    if s.is_zero() {
        return BTreeMap::new();
    }
    a.iter().map(|(m, c)| (m.clone(), c * s)).collect()
}

fn map_mul(a: &BTreeMap<Mono, GaussianRational>, b: &BTreeMap<Mono, GaussianRational>) -> BTreeMap<Mono, GaussianRational> {
    let mut out = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            map_insert(&mut out, ma.mul(mb), ca * cb);
        }
    }
    out
}

/// Polynomial in the chart coordinates `z1..zm`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, GaussianRational>,
}

impl CellPoly {
    pub fn zero(nvars: usize) -> Self {
        CellPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        map_insert(&mut terms, Mono::zero(nvars), c);
        CellPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(nvars, i), GaussianRational::one());
        CellPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        CellPoly {
            nvars: self.nvars,
            terms: map_add(&self.terms, &other.terms),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        CellPoly {
            nvars: self.nvars,
            terms: map_scale(&self.terms, s),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        CellPoly {
            nvars: self.nvars,
            terms: map_mul(&self.terms, &other.terms),
        }
    }

    /// Partial derivative with respect to `z_i`.
    pub fn diff(&self, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((e, m2)) = m.step_down(i) {
                map_insert(&mut terms, m2, c * &GaussianRational::from_int(e as i64));
            }
        }
        CellPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&Mono::zero(self.nvars))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }
}

/// Polynomial in `z1..zm, p1..pm`; the first `m` exponent slots are the
/// `z`-variables and the last `m` the fiber variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolPoly {
    /// Number of chart coordinates (half the exponent slots).
    pub m: usize,
    pub terms: BTreeMap<Mono, GaussianRational>,
}

impl SymbolPoly {
    pub fn zero(m: usize) -> Self {
        SymbolPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        map_insert(&mut terms, Mono::zero(2 * m), c);
        SymbolPoly { m, terms }
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, GaussianRational::one())
    }

    pub fn z(m: usize, i: usize) -> Self {
        assert!(i < m);
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(2 * m, i), GaussianRational::one());
        SymbolPoly { m, terms }
    }

    pub fn p(m: usize, i: usize) -> Self {
        assert!(i < m);
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(2 * m, m + i), GaussianRational::one());
        SymbolPoly { m, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mismatched variable counts");
        SymbolPoly {
            m: self.m,
            terms: map_add(&self.terms, &other.terms),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        SymbolPoly {
            m: self.m,
            terms: map_scale(&self.terms, s),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mismatched variable counts");
        SymbolPoly {
            m: self.m,
            terms: map_mul(&self.terms, &other.terms),
        }
    }

    fn p_degree_of(&self, mono: &Mono) -> u32 {
        mono.0[self.m..].iter().sum()
    }

    /// Splits into fiber-homogeneous components `(d, component)`, ascending in
    /// `d`, omitting zero components. Re-summing reproduces the input.
    pub fn p_degree_split(&self) -> Vec<(u32, SymbolPoly)> {
        let mut buckets: BTreeMap<u32, SymbolPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let d = self.p_degree_of(mono);
            let entry = buckets.entry(d).or_insert_with(|| SymbolPoly::zero(self.m));
            map_insert(&mut entry.terms, mono.clone(), c.clone());
        }
        buckets.into_iter().collect()
    }

    /// Fiber degree when homogeneous; `None` for 0 or mixed polynomials.
    pub fn p_degree(&self) -> Option<u32> {
        let mut deg = None;
        for mono in self.terms.keys() {
            let d = self.p_degree_of(mono);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn z_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0[..self.m].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn diff_z(&self, i: usize) -> Self {
        self.diff_slot(i)
    }

    pub fn diff_p(&self, i: usize) -> Self {
        self.diff_slot(self.m + i)
    }

    fn diff_slot(&self, slot: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            if let Some((e, m2)) = mono.step_down(slot) {
                map_insert(&mut terms, m2, c * &GaussianRational::from_int(e as i64));
            }
        }
        SymbolPoly { m: self.m, terms }
    }

    /// Canonical Poisson bracket
    /// `{a,b} = sum_i (da/dp_i db/dz_i - da/dz_i db/dp_i)`.
    ///
    /// The sign is fixed so that momentum symbols give a Lie algebra
    /// homomorphism: `{mu^x, mu^y} = mu^[x,y]`.
    pub fn poisson(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mismatched variable counts");
        let mut out = SymbolPoly::zero(self.m);
        for i in 0..self.m {
            let t1 = self.diff_p(i).mul(&other.diff_z(i));
            let t2 = self.diff_z(i).mul(&other.diff_p(i));
            out = out.add(&t1).sub(&t2);
        }
        out
    }

    /// Parity involution: multiplies each fiber-degree-`d` component by
    /// `(-1)^d`.
    pub fn alpha(&self) -> Self {
        let minus_one = -GaussianRational::one();
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            let d = self.p_degree_of(mono);
            let c2 = if d % 2 == 1 { c * &minus_one } else { c.clone() };
            terms.insert(mono.clone(), c2);
        }
        SymbolPoly { m: self.m, terms }
    }

    /// Pointwise complex conjugation (real coordinates fixed).
    pub fn bar(&self) -> Self {
        SymbolPoly {
            m: self.m,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&Mono::zero(2 * self.m))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Torus weight of the polynomial given the weight vector of each `z_k`
    /// (the fiber variable `p_k` carries the opposite weight). Returns `None`
    /// when terms have mixed weights; the zero polynomial reports weight 0.
    pub fn weight(&self, z_weights: &[Vec<i64>]) -> Option<Vec<i64>> {
        let rank = z_weights.first().map(|w| w.len()).unwrap_or(0);
        let mut found: Option<Vec<i64>> = None;
        for mono in self.terms.keys() {
            let mut w = vec![0i64; rank];
            for k in 0..self.m {
                let net = mono.0[k] as i64 - mono.0[self.m + k] as i64;
                for a in 0..rank {
                    w[a] += net * z_weights[k][a];
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
    pub fn weight_split(&self, z_weights: &[Vec<i64>]) -> Vec<(Vec<i64>, SymbolPoly)> {
        let rank = z_weights.first().map(|w| w.len()).unwrap_or(0);
        let mut buckets: BTreeMap<Vec<i64>, SymbolPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut w = vec![0i64; rank];
            for k in 0..self.m {
                let net = mono.0[k] as i64 - mono.0[self.m + k] as i64;
                for a in 0..rank {
                    w[a] += net * z_weights[k][a];
                }
            }
            let entry = buckets.entry(w).or_insert_with(|| SymbolPoly::zero(self.m));
            map_insert(&mut entry.terms, mono.clone(), c.clone());
        }
        buckets.into_iter().collect()
    }

    fn var_names(m: usize) -> Vec<String> {
        let mut names: Vec<String> = (1..=m).map(|i| format!("z{}", i)).collect();
        names.extend((1..=m).map(|i| format!("p{}", i)));
        names
    }
}

impl fmt::Display for SymbolPoly {
    /// Canonical text form: `(coeff)*mono` terms joined by ` + `, in graded-lex
    /// order; the zero polynomial prints `(0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let names = Self::var_names(self.m);
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            let ms = mono.format_with(&names);
            if !ms.is_empty() {
                write!(f, "*{}", ms)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CellPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("z{}", i)).collect();
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            let ms = mono.format_with(&names);
            if !ms.is_empty() {
                write!(f, "*{}", ms)?;
            }
        }
        Ok(())
    }
}

/// Parses the canonical `SymbolPoly` serialization for `m` chart variables.
pub fn parse_symbol_poly(s: &str, m: usize) -> Result<SymbolPoly, String> {
    let mut out = SymbolPoly::zero(m);
    for term in s.split(" + ") {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        let close = term
            .find(')')
            .ok_or_else(|| format!("missing coefficient parens in `{term}`"))?;
        if !term.starts_with('(') {
            return Err(format!("term must start with `(`: `{term}`"));
        }
        let coeff = parse_scalar(&term[1..close])?;
        if coeff.is_zero() {
            continue;
        }
        let rest = term[close + 1..].trim_start_matches('*');
        let mut mono = Mono::zero(2 * m);
        if !rest.is_empty() {
            for factor in rest.split('*') {
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u32>().map_err(|_| format!("bad power `{factor}`"))?),
                    None => (factor, 1),
                };
                let idx = parse_var_name(name, m)?;
                mono.0[idx] += pow;
            }
        }
        map_insert(&mut out.terms, mono, coeff);
    }
    Ok(out)
}

fn parse_var_name(name: &str, m: usize) -> Result<usize, String> {
    let (kind, num) = name.split_at(1);
    let k: usize = num.parse().map_err(|_| format!("bad variable `{name}`"))?;
    if k == 0 || k > m {
        return Err(format!("variable `{name}` out of range for m={m}"));
    }
    match kind {
        "z" => Ok(k - 1),
        "p" => Ok(m + k - 1),
        _ => Err(format!("unknown variable `{name}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn add_cancels() {
        // (z1 + p1) + (-z1) = p1
        let m = 1;
        let a = SymbolPoly::z(m, 0).add(&SymbolPoly::p(m, 0));
        let b = SymbolPoly::z(m, 0).neg();
        assert_eq!(a.add(&b), SymbolPoly::p(m, 0));
    }

    #[test]
    fn mul_squares() {
        // (z1*p1)*(z1*p1) = z1^2 p1^2
        let m = 1;
        let zp = SymbolPoly::z(m, 0).mul(&SymbolPoly::p(m, 0));
        let sq = zp.mul(&zp);
        assert_eq!(sq.terms.len(), 1);
        let (mono, c) = sq.terms.iter().next().unwrap();
        assert_eq!(mono.0, vec![2, 2]);
        assert!(c.is_one());
    }

    #[test]
    fn scale_by_i_squares_to_minus() {
        // scale(p1, i) * scale(p1, i) = -p1^2
        let m = 1;
        let ip = SymbolPoly::p(m, 0).scale(&GaussianRational::i());
        let prod = ip.mul(&ip);
        let expect = SymbolPoly::p(m, 0).mul(&SymbolPoly::p(m, 0)).scale(&gq(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn p_degree_split_examples() {
        // z1 p1 + p2^2 -> [(1, z1 p1), (2, p2^2)]
        let m = 2;
        let a = SymbolPoly::z(m, 0).mul(&SymbolPoly::p(m, 0));
        let b = SymbolPoly::p(m, 1).mul(&SymbolPoly::p(m, 1));
        let s = a.add(&b);
        let parts = s.p_degree_split();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (1, a));
        assert_eq!(parts[1], (2, b));
        // zero splits into nothing
        assert!(SymbolPoly::zero(m).p_degree_split().is_empty());
        // components re-sum to the input
        let resum = parts
            .iter()
            .fold(SymbolPoly::zero(m), |acc, (_, c)| acc.add(c));
        assert_eq!(resum, s);
    }

    #[test]
    fn poisson_convention() {
        // {p1, z1} = 1 with the fixed sign convention.
        let m = 1;
        let br = SymbolPoly::p(m, 0).poisson(&SymbolPoly::z(m, 0));
        assert_eq!(br, SymbolPoly::one(m));
        // antisymmetry
        let br2 = SymbolPoly::z(m, 0).poisson(&SymbolPoly::p(m, 0));
        assert_eq!(br2, SymbolPoly::one(m).neg());
    }

    #[test]
    fn alpha_flips_odd_degrees() {
        let m = 1;
        let phi = SymbolPoly::p(m, 0); // degree 1
        assert_eq!(phi.alpha(), phi.neg());
        let prod = phi.mul(&phi); // degree 2
        assert_eq!(prod.alpha(), prod);
    }

    #[test]
    fn display_parse_roundtrip() {
        let m = 2;
        let phi = SymbolPoly::z(m, 0)
            .mul(&SymbolPoly::p(m, 1))
            .scale(&GaussianRational::from_ratio(-1, 6))
            .add(&SymbolPoly::one(m).scale(&GaussianRational::i()));
        let text = phi.to_string();
        let back = parse_symbol_poly(&text, m).unwrap();
        assert_eq!(back, phi);
    }
}
