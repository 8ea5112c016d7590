//! Quasipolynomials with exact coefficients.
//!
//! A quasipolynomial of period `p` is a list of `p` constituent polynomials;
//! the value at an integer `n` is constituent `n mod p` (Euclidean remainder,
//! so negative arguments work) evaluated at `n`.

pub mod falling;
pub mod fit;
pub mod gf;
pub mod json;

use std::fmt;

use num_integer::Integer;

use crate::poly::Polynomial;
use crate::scalar::Field;

pub use falling::{falling_factorial, falling_factorial_decomposition, FallingDecomposition};
pub use fit::{fit_quasipolynomial, fit_with_coefficient_periods, minimal_period, TailModel};

#[derive(Clone, PartialEq)]
pub struct Quasipolynomial<T> {
    constituents: Vec<Polynomial<T>>,
    degree: usize,
}

impl<T: Field> Quasipolynomial<T> {
    /// Panics if `constituents` is empty.
    pub fn new(constituents: Vec<Polynomial<T>>) -> Self {
        assert!(!constituents.is_empty(), "a quasipolynomial needs a constituent");
        let degree = constituents.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
        Quasipolynomial { constituents, degree }
    }

    pub fn polynomial(p: Polynomial<T>) -> Self {
        Self::new(vec![p])
    }

    /// Builds a period-`p` quasipolynomial from a constituent generator.
    pub fn from_fn(period: usize, f: impl FnMut(usize) -> Polynomial<T>) -> Self {
        Self::new((0..period).map(f).collect())
    }

    pub fn period(&self) -> usize {
        self.constituents.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn constituents(&self) -> &[Polynomial<T>] {
        &self.constituents
    }

    pub fn constituent(&self, residue: usize) -> &Polynomial<T> {
        &self.constituents[residue % self.period()]
    }

    pub fn residue_of(&self, n: i64) -> usize {
        n.rem_euclid(self.period() as i64) as usize
    }

    pub fn evaluate(&self, n: i64) -> T {
        self.constituents[self.residue_of(n)].eval_i64(n)
    }

    /// Coefficient of `n^k` in constituent `residue`.
    pub fn coefficient(&self, residue: usize, k: usize) -> T {
        self.constituent(residue).coeff(k)
    }

    /// The same function presented with period `period`, a multiple of the
    /// current one.
    pub fn with_period(&self, period: usize) -> Self {
        assert!(period.is_multiple_of(self.period()), "period must be a multiple");
        Self::from_fn(period, |r| self.constituent(r).clone())
    }

    /// The representation with the smallest period.
    pub fn reduced(&self) -> Self {
        let p = self.period();
        let t = (1..=p)
            .filter(|t| p.is_multiple_of(*t))
            .find(|&t| (0..p).all(|r| self.constituents[r] == self.constituents[r % t]))
            .unwrap_or(p);
        Self::from_fn(t, |r| self.constituents[r].clone())
    }

    pub fn minimal_period(&self) -> usize {
        self.reduced().period()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.constituents.iter().map(|p| p.scale(c)).collect())
    }

    /// Multiplies every constituent by a polynomial in `n`.
    pub fn mul_poly(&self, f: &Polynomial<T>) -> Self {
        Self::new(self.constituents.iter().map(|p| p * f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.period().lcm(&other.period());
        Self::from_fn(p, |r| self.constituent(r) + other.constituent(r))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.period().lcm(&other.period());
        Self::from_fn(p, |r| self.constituent(r) - other.constituent(r))
    }

    pub fn coefficient_table(&self) -> CoefficientTable<T> {
        coefficient_table(self)
    }

    /// Reciprocity-style parity of a subspace counting function: the
    /// function `f` satisfies `f(-n) = (-1)^dim f(n)`.
    ///
    /// Checked constituent-wise: `f_0` and (for even period) `f_{p/2}` have
    /// parity `dim` as polynomials, and `f_{p-i}(n) = (-1)^dim f_i(-n)`.
    pub fn parity_check(&self, dim: u32) -> bool {
        parity_check(self, dim)
    }
}

impl<T: Field> fmt::Debug for Quasipolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Quasipolynomial(period {}, degree {})", self.period(), self.degree)?;
        for (r, c) in self.constituents.iter().enumerate() {
            writeln!(f, "  [{r}] {c}")?;
        }
        Ok(())
    }
}

/// Per-coefficient view of a quasipolynomial.
///
/// Row `i` holds the coefficient of `n^(D-i)` across residues `0..p`
/// together with its own minimal period `p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    pub degree: usize,
    pub period: usize,
    pub rows: Vec<CoefficientRow<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow<T> {
    pub values: Vec<T>,
    pub period: usize,
}

impl<T: Field> CoefficientTable<T> {
    /// Row for the coefficient of `n^(D-i)`.
    pub fn row(&self, i: usize) -> &CoefficientRow<T> {
        &self.rows[i]
    }

    pub fn periods(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.period).collect()
    }

    /// Whether the coefficient of `n^(D-i)` is the same in every constituent.
    pub fn is_constant(&self, i: usize) -> bool {
        self.rows[i].period == 1
    }

    /// The coefficient of `n^(D-i)` if it does not depend on the residue.
    pub fn constant_value(&self, i: usize) -> Option<&T> {
        self.is_constant(i).then(|| &self.rows[i].values[0])
    }
}

impl<T: Field> CoefficientRow<T> {
    /// Mean over a full period: the residue-independent part.
    pub fn mean(&self) -> T {
        let sum = self.values.iter().cloned().fold(T::zero(), |a, b| a + b);
        sum / crate::scalar::from_i64::<T>(self.values.len() as i64)
    }

    /// Value minus the mean, per residue.
    pub fn periodic_part(&self) -> Vec<T> {
        let m = self.mean();
        self.values.iter().map(|v| v.clone() - m.clone()).collect()
    }
}

/// Smallest `t` dividing `values.len()` with `values[r] == values[r + t]`.
pub fn cyclic_period<T: PartialEq>(values: &[T]) -> usize {
    let p = values.len();
    (1..=p)
        .filter(|t| p.is_multiple_of(*t))
        .find(|&t| (0..p).all(|r| values[r] == values[(r + t) % p]))
        .unwrap_or(p)
}

pub fn coefficient_table<T: Field>(qp: &Quasipolynomial<T>) -> CoefficientTable<T> {
    let d = qp.degree();
    let rows = (0..=d)
        .map(|i| {
            let values: Vec<T> = (0..qp.period()).map(|r| qp.coefficient(r, d - i)).collect();
            let period = cyclic_period(&values);
            CoefficientRow { values, period }
        })
        .collect();
    CoefficientTable {
        degree: d,
        period: qp.period(),
        rows,
    }
}

pub fn parity_check<T: Field>(qp: &Quasipolynomial<T>, dim: u32) -> bool {
    let p = qp.period();
    let signed = |f: &Polynomial<T>| if dim.is_multiple_of(2) { f.clone() } else { -f };
    let own_parity = |f: &Polynomial<T>| f.reflect() == signed(f);
    if !own_parity(qp.constituent(0)) {
        return false;
    }
    if p.is_multiple_of(2) && !own_parity(qp.constituent(p / 2)) {
        return false;
    }
    (1..p).all(|i| *qp.constituent(p - i) == signed(&qp.constituent(i).reflect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::{Poly, QuasiPoly, Rational};

    fn poly(desc: &[(i64, i64)]) -> Poly {
        Poly::from_descending(desc.iter().map(|&(a, b)| frac(a, b)).collect())
    }

    #[test]
    fn evaluation_uses_euclidean_residue() {
        let even = poly(&[(1, 2), (-5, 24), (0, 1), (-11, 48), (0, 1)]);
        let even = &even + &poly(&[(1, 16), (0, 1)]);
        let odd = &poly(&[(1, 2), (-5, 24), (0, 1), (-11, 48), (0, 1)]) - &poly(&[(1, 16), (0, 1)]);
        let qp = QuasiPoly::new(vec![even, odd]);
        assert_eq!(qp.evaluate(3), frac::<Rational>(34, 1));
        assert_eq!(qp.evaluate(2), frac::<Rational>(6, 1));
        assert_eq!(qp.evaluate(-1), frac::<Rational>(1, 1));
        assert_eq!(qp.residue_of(-3), 1);
        let table = qp.coefficient_table();
        assert_eq!(table.periods(), vec![1, 1, 1, 2, 1]);
        assert_eq!(table.row(3).periodic_part(), vec![frac(1, 16), frac(-1, 16)]);
    }

    #[test]
    fn reduce_and_expand() {
        let qp = QuasiPoly::polynomial(poly(&[(1, 1), (2, 1)]));
        let wide = qp.with_period(6);
        assert_eq!(wide.period(), 6);
        assert_eq!(wide.reduced(), qp);
        assert_eq!(wide.coefficient_table().periods(), vec![1, 1]);
    }

    #[test]
    fn cyclic_periods() {
        assert_eq!(cyclic_period(&[1, 2, 1, 2, 1, 2]), 2);
        assert_eq!(cyclic_period(&[1, 2, 3, 1, 2, 3]), 3);
        assert_eq!(cyclic_period(&[1, 1, 1, 1]), 1);
        assert_eq!(cyclic_period(&[1, 2, 2, 1]), 4);
    }

    #[test]
    fn parity_of_simple_functions() {
        let odd = QuasiPoly::polynomial(poly(&[(2, 3), (0, 1), (1, 3), (0, 1)]));
        assert!(odd.parity_check(3));
        assert!(!odd.parity_check(4));
        let even = QuasiPoly::polynomial(poly(&[(1, 2), (0, 1), (1, 2), (0, 1), (0, 1)]));
        assert!(even.parity_check(4));
        // constant term of one constituent breaks oddness
        let broken = QuasiPoly::new(vec![poly(&[(1, 1), (0, 1)]), poly(&[(1, 1), (1, 1)])]);
        assert!(!broken.parity_check(1));
    }
}
