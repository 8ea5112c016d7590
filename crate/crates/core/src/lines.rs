//! Lines of one slope on the `n × n` board.
//!
//! For a move `(c, d)` the board splits into maximal lines of squares that
//! attack each other along that move. Everything here depends only on the
//! multiset of line sizes, which is a function of `(ĉ, d̂)` and `n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::model::{BoardSize, Move, MoveNormalized};
use crate::scalar::{frac, from_i64, RationalField};
use crate::{Poly, QuasiPoly, Rational};

/// Line sizes with multiplicities for one move on one board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMultiset {
    pub entries: BTreeMap<u64, u64>,
    pub n: BoardSize,
    pub mv: Move,
}

impl LineMultiset {
    /// `Σ ℓ · mult`, which is always `n²`.
    pub fn total_squares(&self) -> u64 {
        self.entries.iter().map(|(l, m)| l * m).sum()
    }

    pub fn line_count(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `Σ ℓ^power · mult`.
    pub fn power_sum(&self, power: u32) -> BigInt {
        self.entries
            .iter()
            .map(|(&l, &m)| Pow::pow(BigInt::from(l), power) * m)
            .sum()
    }

    /// Sizes repeated by multiplicity, largest first.
    pub fn sizes(&self) -> Vec<u64> {
        self.entries
            .iter()
            .rev()
            .flat_map(|(&l, &m)| std::iter::repeat_n(l, m as usize))
            .collect()
    }
}

/// Groups the squares by the invariant `d·x − c·y` of their line.
pub fn line_multiset_enumerated(mv: Move, n: BoardSize) -> LineMultiset {
    let size = n.n() as i64;
    let mut lines: BTreeMap<i64, u64> = BTreeMap::new();
    for y in 1..=size {
        for x in 1..=size {
            *lines.entry(mv.d() * x - mv.c() * y).or_default() += 1;
        }
    }
    let mut entries = BTreeMap::new();
    for len in lines.into_values() {
        *entries.entry(len).or_default() += 1;
    }
    LineMultiset { entries, n, mv }
}

/// The multiset from the size/multiplicity table in `(ĉ, d̂, n)`.
pub fn line_multiset_closed(mv: Move, n: BoardSize) -> LineMultiset {
    let MoveNormalized { chat, dhat } = mv.normalized();
    let size = n.n() as i64;
    let mut entries = BTreeMap::new();
    if size > 0 {
        let delta = size / dhat;
        let nbar = size % dhat;
        let rest = size - chat * delta;
        let mut put = |len: i64, mult: i64| {
            if len > 0 && mult > 0 {
                *entries.entry(len as u64).or_insert(0) += mult as u64;
            }
        };
        for len in 1..delta {
            put(len, 2 * chat * dhat);
        }
        put(delta, (dhat - nbar) * rest + chat * (nbar + dhat));
        put(delta + 1, nbar * rest);
    }
    LineMultiset { entries, n, mv }
}

/// `Σ ℓ^power` over the lines of `mv` on the `n × n` board.
pub fn attack_power_sum(mv: Move, n: BoardSize, power: u32) -> BigInt {
    line_multiset_closed(mv, n).power_sum(power)
}

/// Checks that a closed-form value is an integer.
pub(crate) fn integral(what: &'static str, n: i64, value: Rational) -> Result<BigInt> {
    if value.is_integral() {
        Ok(value.numer_ref().clone())
    } else {
        Err(Error::NonIntegerResult {
            what,
            n,
            value: value.to_string(),
        })
    }
}

fn poly(desc: Vec<Rational>) -> Poly {
    Poly::from_descending(desc)
}

/// Residue-independent part `(3d−c)/(3d²) n³ + (c/3) n` of `α`.
pub fn alpha_invariant(mv: MoveNormalized) -> Poly {
    let (c, d) = (mv.chat, mv.dhat);
    poly(vec![
        frac(3 * d - c, 3 * d * d),
        Rational::zero(),
        frac(c, 3),
        Rational::zero(),
    ])
}

/// Periodic part of `α` at residue `n̄`:
/// `n̄(d−n̄)/d² · ((d−c) n − c(d−2n̄)/3)`.
pub fn alpha_periodic(mv: MoveNormalized, nbar: i64) -> Poly {
    let (c, d) = (mv.chat, mv.dhat);
    let w: Rational = frac(nbar * (d - nbar), d * d);
    poly(vec![from_i64::<Rational>(d - c), frac(-c * (d - 2 * nbar), 3)]).scale(&w)
}

/// Residue-independent part `(2d−c)/(2d³) n⁴ + c/(2d) n²` of `β`.
pub fn beta_invariant(mv: MoveNormalized) -> Poly {
    let (c, d) = (mv.chat, mv.dhat);
    poly(vec![
        frac(2 * d - c, 2 * d * d * d),
        Rational::zero(),
        frac(c, 2 * d),
        Rational::zero(),
        Rational::zero(),
    ])
}

/// Periodic part of `β` at residue `n̄`:
/// `n̄(d−n̄)/d³ · (3(d−c) n² + (d−2c)(d−2n̄) n + 3c n̄(d−n̄)/2)`.
pub fn beta_periodic(mv: MoveNormalized, nbar: i64) -> Poly {
    let (c, d) = (mv.chat, mv.dhat);
    let w: Rational = frac(nbar * (d - nbar), d * d * d);
    poly(vec![
        from_i64::<Rational>(3 * (d - c)),
        from_i64((d - 2 * c) * (d - 2 * nbar)),
        frac(3 * c * nbar * (d - nbar), 2),
    ])
    .scale(&w)
}

/// `α^{d/c}` as a quasipolynomial of period `d̂`.
pub fn alpha_quasi(mv: Move) -> QuasiPoly {
    let m = mv.normalized();
    let inv = alpha_invariant(m);
    QuasiPoly::from_fn(m.dhat as usize, |r| &inv + &alpha_periodic(m, r as i64))
}

/// `β^{d/c}` as a quasipolynomial of period `d̂`.
pub fn beta_quasi(mv: Move) -> QuasiPoly {
    let m = mv.normalized();
    let inv = beta_invariant(m);
    QuasiPoly::from_fn(m.dhat as usize, |r| &inv + &beta_periodic(m, r as i64))
}

/// Ordered pairs of squares on a common line of slope `d/c`, from the
/// closed formula.
pub fn alpha_closed(mv: Move, n: BoardSize) -> Result<BigInt> {
    let n = n.n() as i64;
    integral("alpha", n, alpha_quasi(mv).evaluate(n))
}

/// Ordered triples of squares on a common line of slope `d/c`, from the
/// closed formula.
pub fn beta_closed(mv: Move, n: BoardSize) -> Result<BigInt> {
    let n = n.n() as i64;
    integral("beta", n, beta_quasi(mv).evaluate(n))
}

/// Elementary symmetric function `e_q` of the line sizes: the number of
/// ways to put `q` pieces on distinct lines, one per line.
pub fn elementary_symmetric(ms: &LineMultiset, q: usize) -> BigInt {
    let mut e = vec![BigInt::zero(); q + 1];
    e[0] = BigInt::one();
    for (&len, &mult) in &ms.entries {
        let len = BigInt::from(len);
        for _ in 0..mult {
            for k in (1..=q).rev() {
                let add = &e[k - 1] * &len;
                e[k] += add;
            }
        }
    }
    e.swap_remove(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mv(c: i64, d: i64) -> Move {
        Move::normalize(c, d).unwrap()
    }

    fn ms(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn examples() {
        assert_eq!(line_multiset_enumerated(mv(1, 0), BoardSize(3)).entries, ms(&[(3, 3)]));
        assert_eq!(
            line_multiset_enumerated(mv(1, 1), BoardSize(3)).entries,
            ms(&[(1, 2), (2, 2), (3, 1)])
        );
        assert_eq!(
            line_multiset_enumerated(mv(1, 2), BoardSize(3)).entries,
            ms(&[(1, 5), (2, 2)])
        );
        assert_eq!(
            line_multiset_closed(mv(1, 2), BoardSize(3)).entries,
            ms(&[(1, 5), (2, 2)])
        );
        assert_eq!(
            line_multiset_closed(mv(1, 1), BoardSize(4)).entries,
            ms(&[(1, 2), (2, 2), (3, 2), (4, 1)])
        );
        assert_eq!(line_multiset_closed(mv(0, 1), BoardSize(5)).entries, ms(&[(5, 5)]));
        assert!(line_multiset_closed(mv(2, 3), BoardSize(0)).entries.is_empty());
    }

    #[test]
    fn power_sums() {
        assert_eq!(attack_power_sum(mv(1, 2), BoardSize(3), 2), BigInt::from(13));
        assert_eq!(attack_power_sum(mv(1, 1), BoardSize(2), 3), BigInt::from(10));
        assert_eq!(attack_power_sum(mv(1, 0), BoardSize(4), 2), BigInt::from(64));
        assert_eq!(attack_power_sum(mv(3, 5), BoardSize(7), 1), BigInt::from(49));
    }

    #[test]
    fn closed_alpha_beta() {
        assert_eq!(alpha_closed(mv(1, 2), BoardSize(3)).unwrap(), BigInt::from(13));
        assert_eq!(alpha_closed(mv(1, 1), BoardSize(3)).unwrap(), BigInt::from(19));
        assert_eq!(alpha_closed(mv(1, 0), BoardSize(3)).unwrap(), BigInt::from(27));
        assert_eq!(beta_closed(mv(1, 2), BoardSize(3)).unwrap(), BigInt::from(21));
        assert_eq!(beta_closed(mv(1, 1), BoardSize(2)).unwrap(), BigInt::from(10));
        assert_eq!(beta_closed(mv(0, 1), BoardSize(3)).unwrap(), BigInt::from(81));
    }

    #[test]
    fn periodic_parts() {
        for (c, d) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 5), (2, 5)] {
            let m = mv(c, d).normalized();
            assert!(alpha_periodic(m, 0).is_zero());
            assert!(beta_periodic(m, 0).is_zero());
            // coefficient of n^(e-i) picks up (-1)^i under n̄ -> d - n̄
            for nbar in 1..d {
                for (e, f) in [
                    (3usize, alpha_periodic as fn(MoveNormalized, i64) -> Poly),
                    (4, beta_periodic),
                ] {
                    let (a, b) = (f(m, nbar), f(m, d - nbar));
                    for i in 0..=e {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        assert_eq!(b.coeff(e - i), a.coeff(e - i) * frac::<Rational>(sign, 1));
                    }
                }
            }
            let (a, b) = (alpha_quasi(mv(c, d)), beta_quasi(mv(c, d)));
            for r in 0..d as usize {
                assert!(a.coefficient(r, 2).is_zero());
                assert!(b.coefficient(r, 3).is_zero());
            }
        }
    }

    #[test]
    fn elementary_symmetric_small() {
        let m = line_multiset_closed(mv(1, 2), BoardSize(3));
        assert_eq!(elementary_symmetric(&m, 0), BigInt::from(1));
        assert_eq!(elementary_symmetric(&m, 1), BigInt::from(9));
        assert_eq!(elementary_symmetric(&m, 4), BigInt::from(85));
    }

    fn arb_move() -> impl Strategy<Value = Move> {
        (-6i64..=6, -6i64..=6)
            .prop_filter("nonzero", |&(c, d)| (c, d) != (0, 0))
            .prop_map(|(c, d)| mv(c, d))
            .prop_filter("d̂ ≤ 6", |m| m.dhat() <= 6)
    }

    proptest! {
        #[test]
        fn closed_matches_enumeration(m in arb_move(), n in 0u32..=30) {
            let closed = line_multiset_closed(m, BoardSize(n));
            prop_assert_eq!(&closed.entries, &line_multiset_enumerated(m, BoardSize(n)).entries);
            prop_assert_eq!(closed.total_squares(), (n * n) as u64);
            prop_assert_eq!(alpha_closed(m, BoardSize(n)).unwrap(), closed.power_sum(2));
            prop_assert_eq!(beta_closed(m, BoardSize(n)).unwrap(), closed.power_sum(3));
        }
    }
}
