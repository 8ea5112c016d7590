//! Expressing `q!·γ_i` in the falling-factorial basis `(q)_2, …, (q)_{2i}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{solve, Solve};
use crate::scalar::{from_i64, Field};

/// `(q)_k = q (q-1) … (q-k+1)`.
pub fn falling_factorial<T: Field>(q: i64, k: u32) -> T {
    (0..k as i64).fold(T::one(), |acc, j| acc * from_i64::<T>(q - j))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FallingDecomposition<T> {
    /// Coefficient of `(q)_κ`, keyed by `κ` in `2..=2i`.
    pub theta: BTreeMap<u32, T>,
    /// Equations beyond those needed; all were satisfied.
    pub redundant: usize,
}

impl<T: Field> FallingDecomposition<T> {
    pub fn theta(&self, kappa: u32) -> T {
        self.theta.get(&kappa).cloned().unwrap_or_else(T::zero)
    }

    /// `Σ_κ (q)_κ θ_κ`
    pub fn evaluate(&self, q: i64) -> T {
        self.theta
            .iter()
            .fold(T::zero(), |acc, (&k, t)| acc + falling_factorial::<T>(q, k) * t.clone())
    }
}

/// Solves `scaled_gammas[q] = Σ_{κ=2}^{2i} (q)_κ θ_κ` for the `θ_κ`.
///
/// `scaled_gammas` maps `q` to `q!·γ_i` (at one fixed residue of `n`).
pub fn falling_factorial_decomposition<T: Field>(
    scaled_gammas: &BTreeMap<u32, T>,
    i: u32,
) -> Result<FallingDecomposition<T>> {
    assert!(i >= 1, "coefficient index must be positive");
    let kappas: Vec<u32> = (2..=2 * i).collect();
    let rows: Vec<Vec<T>> = scaled_gammas
        .keys()
        .map(|&q| kappas.iter().map(|&k| falling_factorial(q as i64, k)).collect())
        .collect();
    let rhs: Vec<T> = scaled_gammas.values().cloned().collect();
    match solve(&rows, &rhs) {
        Solve::Unique { x, redundant } => Ok(FallingDecomposition {
            theta: kappas.into_iter().zip(x).collect(),
            redundant,
        }),
        Solve::Underdetermined { rank } => Err(Error::InsufficientData {
            residue: 0,
            have: rank,
            need: kappas.len(),
        }),
        Solve::Inconsistent { row } => {
            let q = *scaled_gammas.keys().nth(row).unwrap();
            Err(Error::InconsistentSystem(format!(
                "q!γ_{i} at q = {q} is not a combination of (q)_2..(q)_{}",
                2 * i
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::Rational;

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial::<Rational>(5, 2), frac(20, 1));
        assert_eq!(falling_factorial::<Rational>(1, 2), frac(0, 1));
        assert_eq!(falling_factorial::<Rational>(4, 0), frac(1, 1));
        assert_eq!(falling_factorial::<Rational>(3, 3), frac(6, 1));
    }

    #[test]
    fn recovers_known_coefficients() {
        // q!γ_2 = (q)_2·a + (q)_3·b + (q)_4·c
        let (a, b, c): (Rational, Rational, Rational) = (frac(-1, 2), frac(1, 16), frac(25, 1152));
        let data: BTreeMap<u32, Rational> = (2..=5)
            .map(|q| {
                let v = falling_factorial::<Rational>(q, 2) * a.clone()
                    + falling_factorial::<Rational>(q, 3) * b.clone()
                    + falling_factorial::<Rational>(q, 4) * c.clone();
                (q as u32, v)
            })
            .collect();
        let dec = falling_factorial_decomposition(&data, 2).unwrap();
        assert_eq!(dec.theta(2), a);
        assert_eq!(dec.theta(3), b);
        assert_eq!(dec.theta(4), c);
        assert_eq!(dec.redundant, 1);
    }

    #[test]
    fn detects_inconsistency_and_shortage() {
        let mut data: BTreeMap<u32, Rational> = (2..=4).map(|q| (q, falling_factorial(q as i64, 2))).collect();
        assert_eq!(falling_factorial_decomposition(&data, 1).unwrap().theta(2), frac(1, 1));
        data.insert(5, frac(1, 1));
        assert!(matches!(
            falling_factorial_decomposition(&data, 1),
            Err(Error::InconsistentSystem(_))
        ));
        let short: BTreeMap<u32, Rational> = (2..=3).map(|q| (q, frac(1, 1))).collect();
        assert!(matches!(
            falling_factorial_decomposition(&short, 2),
            Err(Error::InsufficientData { .. })
        ));
    }
}
