//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{from_i64, Field};

/// Coefficients stored in ascending order, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Builds from coefficients listed highest degree first.
    pub fn from_descending(mut coeffs: Vec<T>) -> Self {
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    /// Coefficients `[c_D, …, c_0]` padded to `degree + 1` entries.
    pub fn descending(&self, degree: usize) -> Vec<T> {
        (0..=degree).rev().map(|k| self.coeff(k)).collect()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_i64(&self, x: i64) -> T {
        self.eval(&from_i64(x))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x + s)`
    pub fn shift(&self, s: &T) -> Self {
        let lin = Self::new(vec![s.clone(), T::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Monic multiple, or zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(T::one() / lc))
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap().clone() / lc.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - f.clone() * c.clone();
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(T::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Unique polynomial of degree `< points.len()` through the points
    /// (Newton divided differences). Abscissae must be distinct.
    pub fn interpolate(points: &[(T, T)]) -> Self {
        let m = points.len();
        let xs: Vec<T> = points.iter().map(|p| p.0.clone()).collect();
        let mut dd: Vec<T> = points.iter().map(|p| p.1.clone()).collect();
        for level in 1..m {
            for i in (level..m).rev() {
                let num = dd[i].clone() - dd[i - 1].clone();
                let den = xs[i].clone() - xs[i - level].clone();
                dd[i] = num / den;
            }
        }
        let mut result = Self::zero();
        for i in (0..m).rev() {
            let lin = Self::new(vec![-xs[i].clone(), T::one()]);
            result = &(&result * &lin) + &Self::constant(dd[i].clone());
        }
        result
    }
}

impl<T: Field> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Field> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Field> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Field> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Field> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Field> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})n")?,
                _ => write!(f, "({c})n^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::Rational;
    use num_rational::Ratio;
    use proptest::prelude::*;

    type P = Polynomial<Rational>;

    fn p(c: &[i64]) -> P {
        P::new(c.iter().map(|&v| frac(v, 1)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!(&a - &a, P::zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[0, 1, 0, 5]).reflect(), p(&[0, -1, 0, -5]));
        assert_eq!(p(&[0, 0, 1]).shift(&frac(1, 1)), p(&[1, 2, 1]));
        assert_eq!(p(&[3, 0, 2]).eval_i64(-2), frac(11, 1));
    }

    #[test]
    fn division_and_gcd() {
        let f = &p(&[-1, 0, 1]) * &p(&[2, 1]);
        let (q, r) = f.div_rem(&p(&[1, 1]));
        assert_eq!(q, &p(&[-1, 1]) * &p(&[2, 1]));
        assert!(r.is_zero());
        let g = P::gcd(&(&p(&[1, 1]) * &p(&[3, 1])), &(&p(&[1, 1]) * &p(&[5, 1])));
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(P::gcd(&p(&[2]), &p(&[0, 1])), P::one());
    }

    #[test]
    fn interpolation_generic_over_i128_rationals() {
        type R = Ratio<i128>;
        let pts: Vec<(R, R)> = (0..4)
            .map(|x| (R::from_integer(x), R::from_integer(x * x * x - 2 * x + 7)))
            .collect();
        let f = Polynomial::interpolate(&pts);
        assert_eq!(f.coeffs(), &[7, -2, 0, 1].map(R::from_integer)[..]);
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_points(coeffs in proptest::collection::vec(-20i64..20, 1..7), start in -5i64..5) {
            let f = p(&coeffs);
            let pts: Vec<(Rational, Rational)> = (0..coeffs.len() as i64)
                .map(|k| (frac(start + 2 * k, 1), f.eval_i64(start + 2 * k)))
                .collect();
            prop_assert_eq!(P::interpolate(&pts), f);
        }

        #[test]
        fn div_rem_identity(a in proptest::collection::vec(-9i64..9, 0..7), b in proptest::collection::vec(-9i64..9, 1..4)) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
