//! Generating functions of quasipolynomial sequences and recurrence lengths.
//!
//! For a quasipolynomial `f` of degree `D` and period `p`,
//! `Σ_{n≥0} f(n) xⁿ = N(x) / (1 - x^p)^(D+1)` with `deg N < p(D+1)`. The
//! fraction is usually not in lowest terms; the degree of the reduced
//! denominator is the length of the shortest constant-coefficient
//! recurrence with that characteristic polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::quasi::Quasipolynomial;
use crate::scalar::{Field, RationalField};
use crate::Rational;

/// `numerator / denominator` as a formal power series in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction<T: Field> {
    pub numerator: Polynomial<T>,
    pub denominator: Polynomial<T>,
}

impl<T: Field> GeneratingFunction<T> {
    /// The unreduced form `N(x) / (1 - x^p)^(D+1)`.
    pub fn standard(qp: &Quasipolynomial<T>) -> Self {
        let p = qp.period();
        let e = qp.degree() + 1;
        let one_minus = &Polynomial::one() - &Polynomial::monomial(T::one(), p);
        let denominator = one_minus.pow(e as u32);
        let len = p * e;
        let head = Polynomial::new((0..len as i64).map(|n| qp.evaluate(n)).collect());
        let product = &head * &denominator;
        let numerator = Polynomial::new((0..len).map(|k| product.coeff(k)).collect());
        GeneratingFunction { numerator, denominator }
    }

    /// Cancels the polynomial gcd and scales so the denominator has
    /// constant term 1.
    pub fn reduce(&self) -> Self {
        let g = Polynomial::gcd(&self.numerator, &self.denominator);
        let (num, _) = self.numerator.div_rem(&g);
        let (den, _) = self.denominator.div_rem(&g);
        let c0 = den.coeff(0);
        let inv = T::one() / c0;
        GeneratingFunction {
            numerator: num.scale(&inv),
            denominator: den.scale(&inv),
        }
    }

    /// First `terms` coefficients of the power series.
    pub fn series(&self, terms: usize) -> Vec<T> {
        let d0 = self.denominator.coeff(0);
        assert!(!d0.is_zero(), "denominator must not vanish at 0");
        let mut out: Vec<T> = Vec::with_capacity(terms);
        for n in 0..terms {
            let mut acc = self.numerator.coeff(n);
            let top = self.denominator.degree().unwrap_or(0).min(n);
            for k in 1..=top {
                acc = acc - self.denominator.coeff(k) * out[n - k].clone();
            }
            out.push(acc / d0.clone());
        }
        out
    }
}

/// A reduced generating function with integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalGF {
    /// Ascending coefficients; jointly primitive with the denominator.
    pub numerator: Vec<BigInt>,
    /// Ascending coefficients, constant term positive.
    pub denominator: Vec<BigInt>,
    /// Degree of the reduced denominator.
    pub recurrence_length: usize,
    /// Degree `p(D+1)` of the unreduced denominator.
    pub naive_length: usize,
}

impl RationalGF {
    pub fn was_reduced(&self) -> bool {
        self.recurrence_length < self.naive_length
    }

    pub fn series(&self, terms: usize) -> Vec<Rational> {
        let lift = |v: &[BigInt]| Polynomial::new(v.iter().cloned().map(Rational::from_integer).collect());
        GeneratingFunction {
            numerator: lift(&self.numerator),
            denominator: lift(&self.denominator),
        }
        .series(terms)
    }

    /// Order of the minimal linear recurrence satisfied by every term:
    /// `max(deg denominator, deg numerator + 1)`.
    pub fn recurrence_order(&self) -> usize {
        let num_deg = self.numerator.iter().rposition(|c| !c.is_zero());
        self.recurrence_length.max(num_deg.map_or(0, |d| d + 1))
    }
}

/// Builds the reduced generating function of `n ↦ qp(n)`, `n ≥ 0`.
pub fn generating_function(qp: &Quasipolynomial<Rational>) -> RationalGF {
    let standard = GeneratingFunction::standard(qp);
    let naive_length = standard.denominator.degree().unwrap_or(0);
    let reduced = standard.reduce();
    let (numerator, denominator) = clear_denominators(&reduced.numerator, &reduced.denominator);
    RationalGF {
        recurrence_length: denominator.len().saturating_sub(1),
        numerator,
        denominator,
        naive_length,
    }
}

fn clear_denominators<T>(num: &Polynomial<T>, den: &Polynomial<T>) -> (Vec<BigInt>, Vec<BigInt>)
where
    T: RationalField<Int = BigInt>,
{
    let all = num.coeffs().iter().chain(den.coeffs());
    let lcm = all.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom_ref()));
    let scaled = |p: &Polynomial<T>| -> Vec<BigInt> {
        p.coeffs()
            .iter()
            .map(|c| c.numer_ref() * (&lcm / c.denom_ref()))
            .collect()
    };
    let (mut n, mut d) = (scaled(num), scaled(den));
    let content = n.iter().chain(&d).fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if d.first().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let unit = content * sign;
    if !unit.is_zero() {
        n.iter_mut().for_each(|c| *c = &*c / &unit);
        d.iter_mut().for_each(|c| *c = &*c / &unit);
    }
    (n, d)
}

/// Berlekamp–Massey over a field: the shortest linear recurrence
/// `s_n = -Σ_{k=1}^{L} c_k s_{n-k}` generating `seq`.
///
/// Returns `(L, [1, c_1, …, c_L])`.
pub fn berlekamp_massey<T: Field>(seq: &[T]) -> (usize, Vec<T>) {
    let mut c = vec![T::one()];
    let mut b = vec![T::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = T::one();
    for n in 0..seq.len() {
        let mut delta = seq[n].clone();
        for i in 1..=l {
            delta = delta + c.get(i).cloned().unwrap_or_else(T::zero) * seq[n - i].clone();
        }
        if delta.is_zero() {
            m += 1;
            continue;
        }
        let coef = delta.clone() / bd.clone();
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, T::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m].clone() - coef.clone() * bi.clone();
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = delta;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, T::zero());
    (l, c)
}

/// Values `qp(0), …, qp(terms-1)`.
pub fn sequence<T: Field>(qp: &Quasipolynomial<T>, terms: usize) -> Vec<T> {
    (0..terms as i64).map(|n| qp.evaluate(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::{Poly, QuasiPoly};

    fn queen_q2() -> QuasiPoly {
        QuasiPoly::polynomial(Poly::from_descending(vec![
            frac(1, 2),
            frac(-5, 3),
            frac(3, 2),
            frac(-1, 3),
            frac(0, 1),
        ]))
    }

    #[test]
    fn constant_one() {
        let gf = generating_function(&QuasiPoly::polynomial(Poly::one()));
        assert_eq!(gf.denominator, vec![BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(gf.numerator, vec![BigInt::from(1)]);
        assert_eq!(gf.recurrence_length, 1);
        assert!(!gf.was_reduced());
    }

    #[test]
    fn polynomial_has_full_length() {
        let qp = queen_q2();
        let gf = generating_function(&qp);
        assert_eq!(gf.recurrence_length, 5);
        assert_eq!(gf.series(13), sequence(&qp, 13));
    }

    #[test]
    fn period_two_cancels() {
        // (-1)^n has GF 1/(1+x): the standard form over (1-x^2) reduces.
        let qp = QuasiPoly::new(vec![Poly::one(), Poly::constant(frac(-1, 1))]);
        let gf = generating_function(&qp);
        assert_eq!(gf.naive_length, 2);
        assert_eq!(gf.recurrence_length, 1);
        assert_eq!(gf.denominator, vec![BigInt::from(1), BigInt::from(1)]);
        assert!(gf.was_reduced());
        assert_eq!(gf.series(10), sequence(&qp, 10));
    }

    #[test]
    fn berlekamp_massey_agrees() {
        let qp = queen_q2();
        let seq = sequence(&qp, 20);
        let (l, _) = berlekamp_massey(&seq);
        assert_eq!(l, generating_function(&qp).recurrence_order());
        let fib: Vec<Rational> = [0, 1, 1, 2, 3, 5, 8, 13, 21].iter().map(|&v| frac(v, 1)).collect();
        let (l, c) = berlekamp_massey(&fib);
        assert_eq!(l, 2);
        assert_eq!(c, vec![frac(1, 1), frac(-1, 1), frac(-1, 1)]);
    }
}
