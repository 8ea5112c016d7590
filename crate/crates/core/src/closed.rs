//! Closed formulas: two pieces of any rider, the low-order coefficients of
//! `u_P(q;n)` for any `q`, and one-move riders with up to four pieces.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lines::{alpha_closed, elementary_symmetric, integral, line_multiset_closed, LineMultiset};
use crate::model::{BoardSize, Move, MoveNormalized, Piece};
use crate::quasi::falling_factorial;
use crate::scalar::{frac, from_i64};
use crate::{Poly, QuasiPoly, Rational};

/// Ordered attacking pairs, counting a doubled square once:
/// `Σ_m α^m(n) − (|M|−1) n²`.
pub fn a_attacking_pairs(piece: &Piece, n: BoardSize) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for &m in piece.moves() {
        total += alpha_closed(m, n)?;
    }
    let sq = BigInt::from(n.n()).pow(2);
    Ok(total - sq * (piece.move_count() as i64 - 1))
}

/// `u_P(2;n)` as a quasipolynomial of period `Λ`, term by term from the
/// two-piece formula.
pub fn u2_quasi(piece: &Piece) -> QuasiPoly {
    let lambda = piece.lambda() as usize;
    let m = piece.move_count() as i64;
    let moves: Vec<MoveNormalized> = piece.moves().map(Move::normalized).collect();
    let cubic = moves.iter().fold(Rational::zero(), |acc, v| {
        acc + frac::<Rational>(3 * v.dhat - v.chat, v.dhat * v.dhat)
    });
    let linear = moves
        .iter()
        .fold(Rational::zero(), |acc, v| acc + from_i64::<Rational>(v.chat));
    QuasiPoly::from_fn(lambda, |r| {
        let mut wobble = Rational::zero();
        let mut constant = Rational::zero();
        for v in &moves {
            let (c, d) = (v.chat, v.dhat);
            let nb = v.residue(r as i64);
            wobble += frac::<Rational>(nb * (d - nb) * (d - c), d * d);
            constant += frac::<Rational>(c * (d - nb) * (d - 2 * nb) * nb, d * d);
        }
        Poly::from_descending(vec![
            frac(1, 2),
            -cubic.clone() / from_i64::<Rational>(6),
            frac(m - 1, 2),
            -linear.clone() / from_i64::<Rational>(6) - wobble / from_i64::<Rational>(2),
            constant / from_i64::<Rational>(6),
        ])
    })
}

/// Nonattacking placements of two identical pieces, from the two-piece
/// formula.
pub fn u2_closed(piece: &Piece, n: BoardSize) -> Result<BigInt> {
    let n = n.n() as i64;
    integral("u2", n, u2_quasi(piece).evaluate(n))
}

/// The two-piece formula at `n = −1`, where every `n̄_r = d̂_r − 1`. This is
/// the number of combinatorial types and must equal `|M|`.
pub fn u2_at_minus_one(piece: &Piece) -> Result<BigInt> {
    let value = u2_quasi(piece).evaluate(-1);
    let expected = Rational::from_integer(BigInt::from(piece.move_count()));
    if value != expected {
        return Err(Error::TypeCountMismatch {
            piece: piece.label(),
            q: 2,
            expected: expected.to_string(),
            actual: value.to_string(),
        });
    }
    integral("u2", -1, value)
}

/// `A₁(n) = Σ_m α^m(n) = a₁₀ n³ + a₁₂ n + a₁₃`, with `a₁₂` and `a₁₃`
/// tabulated over residues mod `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct A1Data {
    pub a10: Rational,
    pub a12: Vec<Rational>,
    pub a13: Vec<Rational>,
}

impl A1Data {
    pub fn period(&self) -> usize {
        self.a12.len()
    }

    pub fn a12_at(&self, n: i64) -> Rational {
        self.a12[n.rem_euclid(self.period() as i64) as usize].clone()
    }

    pub fn a13_at(&self, n: i64) -> Rational {
        self.a13[n.rem_euclid(self.period() as i64) as usize].clone()
    }

    pub fn eval(&self, n: i64) -> Rational {
        let x: Rational = from_i64(n);
        self.a10.clone() * x.clone() * x.clone() * x.clone() + self.a12_at(n) * x + self.a13_at(n)
    }

    pub fn to_quasi(&self) -> QuasiPoly {
        QuasiPoly::from_fn(self.period(), |r| {
            Poly::from_descending(vec![
                self.a10.clone(),
                Rational::zero(),
                self.a12[r].clone(),
                self.a13[r].clone(),
            ])
        })
    }
}

pub fn a1_data(piece: &Piece) -> A1Data {
    let lambda = piece.lambda();
    let moves: Vec<MoveNormalized> = piece.moves().map(Move::normalized).collect();
    let a10 = moves.iter().fold(Rational::zero(), |acc, v| {
        acc + frac::<Rational>(3 * v.dhat - v.chat, 3 * v.dhat * v.dhat)
    });
    let per_residue = |f: &dyn Fn(i64, i64, i64) -> Rational| -> Vec<Rational> {
        (0..lambda)
            .map(|r| {
                moves
                    .iter()
                    .fold(Rational::zero(), |acc, v| acc + f(v.chat, v.dhat, v.residue(r)))
            })
            .collect()
    };
    let a12 = per_residue(&|c, d, nb| frac(c * d * d + 3 * (d - c) * nb * (d - nb), 3 * d * d));
    let a13 = per_residue(&|c, d, nb| frac(-c * nb * (d - nb) * (d - 2 * nb), 3 * d * d));
    A1Data { a10, a12, a13 }
}

/// The closed low-order coefficients of `u_P(q;n) = Σ γ_i n^{2q−i}` and the
/// known entries of `q!γ_i = Σ_κ (q)_κ θ̄_{i,κ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaClosed {
    pub q: u32,
    pub gamma0: Rational,
    pub gamma1: Rational,
    /// `θ̄_{i,2}` for `i = 1..=4`, tabulated over residues mod `Λ`.
    pub theta_i2: Vec<Vec<Rational>>,
    pub b10: Rational,
    pub a1: A1Data,
}

impl GammaClosed {
    /// `θ̄_{i,2}` at residue `r`; zero for `i > 4`.
    pub fn theta_2(&self, i: u32, r: i64) -> Rational {
        match i {
            1..=4 => {
                let row = &self.theta_i2[i as usize - 1];
                row[r.rem_euclid(row.len() as i64) as usize].clone()
            }
            _ => Rational::zero(),
        }
    }

    /// `θ̄_{i,2i} = (−a₁₀/2)^i / i!`
    pub fn theta_2i(&self, i: u32) -> Rational {
        let base = -self.a1.a10.clone() / from_i64::<Rational>(2);
        let mut out = Rational::one();
        for k in 1..=i {
            out = out * base.clone() / from_i64::<Rational>(k as i64);
        }
        out
    }
}

pub fn gamma_closed(piece: &Piece, q: u32) -> GammaClosed {
    let a1 = a1_data(piece);
    let qfact: Rational = falling_factorial(q as i64, q);
    let two: Rational = from_i64(2);
    let gamma0 = Rational::one() / qfact.clone();
    let gamma1 = -falling_factorial::<Rational>(q as i64, 2) * a1.a10.clone() / two.clone() / qfact;
    let lambda = a1.period();
    let theta_i2 = vec![
        vec![-a1.a10.clone() / two.clone(); lambda],
        vec![frac(piece.move_count() as i64 - 1, 2); lambda],
        a1.a12.iter().map(|v| -v.clone() / two.clone()).collect(),
        a1.a13.iter().map(|v| -v.clone() / two.clone()).collect(),
    ];
    let b10 = piece.moves().map(Move::normalized).fold(Rational::zero(), |acc, v| {
        acc + frac::<Rational>(2 * v.dhat - v.chat, 2 * v.dhat * v.dhat * v.dhat)
    });
    GammaClosed {
        q,
        gamma0,
        gamma1,
        theta_i2,
        b10,
        a1,
    }
}

fn r(num: i64, den: i64) -> Rational {
    frac(num, den)
}

/// Residue-independent part of the one-move formula for `q` pieces.
fn one_move_invariant(c: i64, d: i64, q: u32) -> Poly {
    let z = Rational::zero;
    let d2 = d * d;
    let d3 = d2 * d;
    let d4 = d2 * d2;
    let (coeffs, scale) = match q {
        1 => (vec![r(1, 1), z(), z()], r(1, 1)),
        2 => (vec![r(1, 1), r(c - 3 * d, 3 * d2), z(), r(-c, 3), z()], r(1, 2)),
        3 => (
            vec![
                r(1, 1),
                r(c - 3 * d, d2),
                r(-(c - 2 * d), d3),
                r(-c, 1),
                r(c, d),
                z(),
                z(),
            ],
            r(1, 6),
        ),
        4 => (
            vec![
                r(1, 1),
                r(2 * (c - 3 * d), d2),
                r(c * c - 18 * c * d + 33 * d2, 3 * d4),
                r(18 * c - 30 * d - 10 * c * d4, 5 * d4),
                r(18 * c * d - 2 * c * c, 3 * d2),
                r(-4 * c, d2),
                r(c * c, 3),
                r(2 * c, 5),
                z(),
            ],
            r(1, 24),
        ),
        _ => unreachable!("q checked by caller"),
    };
    Poly::from_descending(coeffs).scale(&scale)
}

/// Periodic part of the one-move formula for `q` pieces at residue `n̄`.
fn one_move_periodic(c: i64, d: i64, q: u32, nb: i64) -> Poly {
    let w = nb * (d - nb);
    let d2 = d * d;
    let d3 = d2 * d;
    let (coeffs, den): (Vec<i64>, i64) = match q {
        1 => (vec![0], 1),
        2 => (vec![3 * (c - d), c * (d - 2 * nb)], 6 * d2),
        3 => (
            vec![
                3 * d * (c - d),
                6 * d + c * d2 - 2 * c * d * nb - 6 * c,
                2 * (d - 2 * c) * (d - 2 * nb),
                3 * c * (d - nb) * nb,
            ],
            6 * d3,
        ),
        4 => (
            vec![
                90 * d2 * (c - d),
                30 * (c * c + 15 * d2 - 16 * c * d + c * d3 - 2 * c * d2 * nb),
                10 * (6 * d * (-9 + 2 * d * (d - 2 * nb)) + c * c * (d - 2 * nb) + 27 * c * (2 - d2 + 2 * d * nb)),
                15 * (2 * d * (-12 * d + c * (18 - c * d + d2))
                    + 3 * (-24 * c + (16 + c * c) * d + 2 * c * d2 + d3) * nb
                    - 3 * (c + d) * (c + d) * nb * nb),
                10 * (9 * c * d2 - 9 * d3 - c * c * d3 + (27 * d2 - 81 * c * d + 5 * c * c * d2 - 3 * c * d3) * nb
                    - 9 * (3 * d + c * (c * d - d2 - 9)) * nb * nb
                    - 6 * c * (d - c) * nb * nb * nb),
                c * (d - 2 * nb)
                    * (d2 * (-6 + 5 * c * nb) - 3 * d * nb * (36 + 5 * c * nb) + 2 * nb * nb * (54 + 5 * c * nb)),
            ],
            360 * d2 * d2,
        ),
        _ => unreachable!("q checked by caller"),
    };
    Poly::from_descending(coeffs.into_iter().map(|v| r(v, 1)).collect()).scale(&r(w, den))
}

fn check_one_move_q(q: u32) -> Result<()> {
    if (1..=4).contains(&q) {
        Ok(())
    } else {
        Err(Error::UnsupportedQ { q, supported: "1..=4" })
    }
}

/// `u_P(q;n)` for the one-move rider `{mv}` as a quasipolynomial of period
/// `d̂`, `1 ≤ q ≤ 4`.
pub fn one_move_quasi(mv: Move, q: u32) -> Result<QuasiPoly> {
    check_one_move_q(q)?;
    let MoveNormalized { chat: c, dhat: d } = mv.normalized();
    let inv = one_move_invariant(c, d, q);
    Ok(QuasiPoly::from_fn(d as usize, |nb| {
        &inv + &one_move_periodic(c, d, q, nb as i64)
    }))
}

pub fn one_move_closed(mv: Move, q: u32, n: BoardSize) -> Result<BigInt> {
    let n = n.n() as i64;
    integral("one-move", n, one_move_quasi(mv, q)?.evaluate(n))
}

/// `C(n, k)` for a nonnegative big integer `n`.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    if n < &BigInt::from(k) {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    out
}

fn line_binomial_sum(ms: &LineMultiset, k: u32, weight: impl Fn(&BigInt) -> BigInt) -> BigInt {
    ms.entries
        .iter()
        .map(|(&l, &m)| {
            let l = BigInt::from(l);
            binomial(&l, k) * weight(&l) * m
        })
        .sum()
}

/// One-move rider counts by inclusion–exclusion over lines, `2 ≤ q ≤ 4`.
pub fn one_move_count_via_lines(mv: Move, q: u32, n: BoardSize) -> Result<BigInt> {
    if !(2..=4).contains(&q) {
        return Err(Error::UnsupportedQ { q, supported: "2..=4" });
    }
    let ms = line_multiset_closed(mv, n);
    let sq = BigInt::from(n.n()).pow(2);
    let one = |_: &BigInt| BigInt::one();
    let rest = |l: &BigInt| &sq - l;
    Ok(match q {
        2 => binomial(&sq, 2) - line_binomial_sum(&ms, 2, one),
        3 => binomial(&sq, 3) - line_binomial_sum(&ms, 3, one) - line_binomial_sum(&ms, 2, rest),
        _ => {
            let s2 = line_binomial_sum(&ms, 2, one);
            let s2_sq = line_binomial_sum(&ms, 2, |l| binomial(l, 2));
            let pairs = (&s2 * &s2 - &s2_sq) / 2;
            let lone = line_binomial_sum(&ms, 2, |l| binomial(&(&sq - l), 2) - &s2 + binomial(l, 2));
            binomial(&sq, 4) - line_binomial_sum(&ms, 4, one) - line_binomial_sum(&ms, 3, rest) - pairs - lone
        }
    })
}

/// One-move rider counts for any `q`: pieces must occupy distinct lines,
/// so the count is the elementary symmetric function `e_q` of the line
/// sizes.
pub fn one_move_count_elementary(mv: Move, q: u32, n: BoardSize) -> BigInt {
    elementary_symmetric(&line_multiset_closed(mv, n), q as usize)
}

/// Periodic part of `γ₃` for the one-move rider `{mv}` with `q ≥ 2`
/// pieces, indexed by `n̄ = 0..d̂`:
/// `−n̄(d−n̄)(d−c) / (2d² (q−2)!)`.
pub fn gamma3_periodic_one_move(mv: Move, q: u32) -> Vec<Rational> {
    assert!(q >= 2, "γ₃ needs at least two pieces");
    let MoveNormalized { chat: c, dhat: d } = mv.normalized();
    let fact: Rational = falling_factorial(q as i64 - 2, q - 2);
    (0..d)
        .map(|nb| -frac::<Rational>(nb * (d - nb) * (d - c), 2 * d * d) / fact.clone())
        .collect()
}
