//! Exact scalars over the Gaussian rationals.
//!
//! Every quantity in the pipeline is a [`GaussianRational`]: a complex number
//! `re + im*i` with arbitrary-precision rational real and imaginary parts.
//! There is no floating point anywhere; equality is exact and certificates
//! carry zero tolerance.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element of the field `Q(i)`, stored in reduced form.
///
/// `num_rational::Ratio` keeps numerator and denominator gcd-reduced with a
/// positive denominator, so two equal values always compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussianRational {
            re: r,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the multiplicative norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// The real part as a rational, or `None` when the value is not real.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    /// True for real values strictly greater than zero.
    pub fn is_positive_real(&self) -> bool {
        self.im.is_zero() && self.re.is_positive()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Default for GaussianRational {
    fn default() -> Self {
        GaussianRational::zero()
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a Self) -> Self {
        GaussianRational {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a Self) -> Self {
        GaussianRational {
            re: self.re - &rhs.re,
            im: self.im - &rhs.im,
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        self.mul_ref(rhs)
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a Self) -> Self {
        self.mul_ref(rhs)
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &Self) {
        *self = self.mul_ref(rhs);
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> Self {
        self.mul_ref(&rhs.inv())
    }
}

impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        self.mul_ref(&rhs.inv())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form: `a/b`, `c/d*i`, or `a/b+c/d*i` (with `-` folded into
    /// the numerator). Integer values print without the denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            fmt_rational(&self.im, f)?;
            return write!(f, "*i");
        }
        fmt_rational(&self.re, f)?;
        if self.im.is_positive() {
            write!(f, "+")?;
        }
        fmt_rational(&self.im, f)?;
        write!(f, "*i")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses the canonical serialization produced by `Display`.
pub fn parse_scalar(s: &str) -> Result<GaussianRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty scalar".into());
    }
    // Split into at most two signed parts.
    let mut parts: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (k, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && k > 0 && !cur.is_empty() && !cur.ends_with('/') {
            parts.push(cur.clone());
            cur.clear();
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
    }
    parts.push(cur);
    let mut value = GaussianRational::zero();
    for p in parts {
        let (body, imaginary) = if let Some(b) = p.strip_suffix("*i") {
            (b.to_string(), true)
        } else if p == "i" {
            ("1".to_string(), true)
        } else if p == "-i" {
            ("-1".to_string(), true)
        } else {
            (p.clone(), false)
        };
        let r: BigRational = body
            .parse()
            .map_err(|_| format!("bad rational `{body}` in scalar `{s}`"))?;
        if imaginary {
            value.im += r;
        } else {
            value.re += r;
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn conjugation_is_involution_and_multiplicative() {
        let a = GaussianRational::new(
            BigRational::new(BigInt::from(3), BigInt::from(7)),
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
        );
        let b = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(4), BigInt::from(3)),
        );
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn field_inverse() {
        let a = GaussianRational::new(
            BigRational::new(BigInt::from(3), BigInt::from(4)),
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
        );
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn display_roundtrip() {
        let samples = [
            GaussianRational::zero(),
            GaussianRational::one(),
            GaussianRational::i(),
            q(-5, 3),
            GaussianRational::new(
                BigRational::new(BigInt::from(2), BigInt::from(3)),
                BigRational::new(BigInt::from(-7), BigInt::from(4)),
            ),
            GaussianRational::new(BigRational::zero(), BigRational::new(BigInt::from(-1), BigInt::from(6))),
        ];
        for v in samples {
            let text = v.to_string();
            assert_eq!(parse_scalar(&text).unwrap(), v, "roundtrip of `{text}`");
        }
    }

    #[test]
    fn canonical_display_values() {
        assert_eq!(q(1, 1).to_string(), "1");
        assert_eq!(q(-1, 6).to_string(), "-1/6");
        let z = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
        );
        assert_eq!(z.to_string(), "1/2-3/4*i");
    }
}
