//! Exponent multi-indices with the canonical graded-lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// A multi-index of exponents over a fixed set of variables.
///
/// Ordering is graded-lexicographic: first by total degree, then
/// lexicographically on the exponent vector. This fixes the canonical term
/// order used by every polynomial and operator in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn zero(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, or `None` if any exponent would go negative.
    pub fn checked_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }

    /// Decrements exponent `i`, returning the old exponent, or `None` at zero.
    pub fn step_down(&self, i: usize) -> Option<(u32, Mono)> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some((self.0[i], Mono(e)))
    }

    pub fn step_up(&self, i: usize) -> Mono {
        let mut e = self.0.clone();
        e[i] += 1;
        Mono(e)
    }

    /// Formats with variable names `prefix1..prefixN`; empty string for the
    /// constant monomial.
    pub fn format_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&names[i]);
            if e > 1 {
                out.push_str(&format!("^{}", e));
            }
        }
        out
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len(), "comparing monomials over different variable sets");
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "]")
    }
}

/// All monomials of total degree exactly `d` in `nvars` variables, in
/// increasing graded-lex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out.sort();
    out
}

fn fill(out: &mut Vec<Mono>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Mono(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = Mono(vec![0, 2]); // degree 2
        let b = Mono(vec![1, 0]); // degree 1
        let c = Mono(vec![1, 1]); // degree 2
        assert!(b < a);
        assert!(a < c);
    }

    #[test]
    fn enumeration_counts() {
        // C(n+d-1, d) monomials of degree d in n variables.
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
        let ms = monomials_of_degree(3, 2);
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(ms, sorted);
    }

    #[test]
    fn division() {
        let a = Mono(vec![2, 1]);
        let b = Mono(vec![1, 1]);
        assert_eq!(a.checked_div(&b), Some(Mono(vec![1, 0])));
        assert_eq!(b.checked_div(&a), None);
    }
}
