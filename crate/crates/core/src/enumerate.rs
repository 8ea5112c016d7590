//! Brute-force counting of nonattacking configurations.
//!
//! Squares are indexed row-major: `(x, y) ∈ [n]²` has index
//! `(y−1)·n + (x−1)`. The attack relation is stored as one bitset per square
//! and configurations are counted as independent sets of the attack graph,
//! choosing squares in increasing index order.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed::binomial;
use crate::error::{Error, Result};
use crate::model::{BoardSize, Piece};

/// Attack relation between the squares of the `n × n` board.
#[derive(Debug, Clone)]
pub struct AttackGraph {
    n: BoardSize,
    piece: Piece,
    words: usize,
    adjacency: Vec<u64>,
}

impl AttackGraph {
    pub fn build(piece: &Piece, n: BoardSize) -> AttackGraph {
        let size = n.n() as i64;
        let squares = n.squares();
        let words = squares.div_ceil(64).max(1);
        let mut adjacency = vec![0u64; squares * words];
        for i in 0..squares {
            let (x0, y0) = ((i as i64) % size, (i as i64) / size);
            for m in piece.moves() {
                for sign in [1, -1] {
                    let (dx, dy) = (sign * m.c(), sign * m.d());
                    let (mut x, mut y) = (x0 + dx, y0 + dy);
                    while (0..size).contains(&x) && (0..size).contains(&y) {
                        let j = (y * size + x) as usize;
                        adjacency[i * words + j / 64] |= 1 << (j % 64);
                        x += dx;
                        y += dy;
                    }
                }
            }
        }
        AttackGraph {
            n,
            piece: piece.clone(),
            words,
            adjacency,
        }
    }

    pub fn n(&self) -> BoardSize {
        self.n
    }

    pub fn piece(&self) -> &Piece {
        &self.piece
    }

    pub fn squares(&self) -> usize {
        self.n.squares()
    }

    pub fn index(&self, x: u32, y: u32) -> usize {
        ((y - 1) * self.n.n() + (x - 1)) as usize
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adjacency[i * self.words..(i + 1) * self.words]
    }

    pub fn attacks(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.squares()).filter(move |&j| self.attacks(i, j))
    }

    /// Number of unordered attacking pairs.
    pub fn edge_count(&self) -> usize {
        let ones: usize = self.adjacency.iter().map(|w| w.count_ones() as usize).sum();
        ones / 2
    }
}

/// One exact count `u_P(q;n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountRecord {
    pub piece: String,
    pub q: u32,
    pub n: u32,
    #[serde(with = "decimal")]
    pub count: BigUint,
}

impl CountRecord {
    pub fn new(piece: &Piece, q: u32, n: u32, count: BigUint) -> CountRecord {
        CountRecord {
            piece: piece.canonical_text(),
            q,
            n,
            count,
        }
    }
}

/// Big integers as decimal strings in JSON.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Controls for [`count_nonattacking_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum number of search nodes; `None` is unlimited.
    pub budget: Option<u64>,
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: None,
            parallel: true,
        }
    }
}

const FLUSH: u64 = 1 << 14;

struct Search<'a, const W: usize> {
    rows: &'a [[u64; W]],
    budget: Option<u64>,
    spent: &'a AtomicU64,
    stop: &'a AtomicBool,
    local: u64,
}

impl<const W: usize> Search<'_, W> {
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == FLUSH {
            let total = self.spent.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if self.budget.is_some_and(|b| total > b) {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    /// Independent sets of size `left` inside `avail`.
    fn count(&mut self, mut avail: [u64; W], left: u32) -> u128 {
        if left == 1 {
            return avail.iter().map(|w| w.count_ones() as u128).sum();
        }
        let mut total = 0u128;
        for w in 0..W {
            while avail[w] != 0 {
                let bit = avail[w].trailing_zeros() as usize;
                avail[w] &= avail[w] - 1;
                if !self.tick() {
                    return total;
                }
                let row = &self.rows[w * 64 + bit];
                let mut next = avail;
                for k in w..W {
                    next[k] &= !row[k];
                }
                total += self.count(next, left - 1);
            }
        }
        total
    }

    fn finish(&mut self) {
        self.spent.fetch_add(self.local, Ordering::Relaxed);
        self.local = 0;
    }
}

fn count_words<const W: usize>(graph: &AttackGraph, q: u32, opts: &CountOptions) -> Result<BigUint> {
    let squares = graph.squares();
    let rows: Vec<[u64; W]> = (0..squares)
        .map(|i| {
            let mut r = [0u64; W];
            r[..graph.words].copy_from_slice(graph.row(i));
            r
        })
        .collect();
    let spent = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let root = |first: usize| -> u128 {
        let mut s = Search::<W> {
            rows: &rows,
            budget: opts.budget,
            spent: &spent,
            stop: &stop,
            local: 0,
        };
        // squares above `first` that `first` does not attack
        let mut avail = [0u64; W];
        for j in first + 1..squares {
            avail[j / 64] |= 1 << (j % 64);
        }
        for k in 0..W {
            avail[k] &= !rows[first][k];
        }
        let c = if s.tick() { s.count(avail, q - 1) } else { 0 };
        s.finish();
        c
    };
    let parts: Vec<u128> = if opts.parallel {
        (0..squares).into_par_iter().map(root).collect()
    } else {
        (0..squares).map(root).collect()
    };
    let total = spent.load(Ordering::Relaxed);
    if stop.load(Ordering::Relaxed) || opts.budget.is_some_and(|b| total > b) {
        return Err(Error::ResourceLimit {
            what: "search node",
            budget: opts.budget.unwrap_or(0),
        });
    }
    Ok(parts.into_iter().fold(BigUint::zero(), |acc, c| acc + BigUint::from(c)))
}

/// `u_P(q;n)` by exhaustive search with default options.
pub fn count_nonattacking(piece: &Piece, q: u32, n: BoardSize) -> Result<CountRecord> {
    count_nonattacking_with(piece, q, n, &CountOptions::default())
}

pub fn count_nonattacking_with(piece: &Piece, q: u32, n: BoardSize, opts: &CountOptions) -> Result<CountRecord> {
    let squares = n.squares();
    let count = match q {
        0 => BigUint::one(),
        1 => BigUint::from(squares),
        _ if q as usize > squares => BigUint::zero(),
        _ => {
            let graph = AttackGraph::build(piece, n);
            count_graph(&graph, q, opts)?
        }
    };
    Ok(CountRecord::new(piece, q, n.n(), count))
}

/// Independent sets of size `q ≥ 2` in `graph`.
pub fn count_graph(graph: &AttackGraph, q: u32, opts: &CountOptions) -> Result<BigUint> {
    if q as usize > graph.squares() {
        return Ok(BigUint::zero());
    }
    match graph.words {
        1 => count_words::<1>(graph, q, opts),
        2 => count_words::<2>(graph, q, opts),
        3..=4 => count_words::<4>(graph, q, opts),
        5..=8 => count_words::<8>(graph, q, opts),
        9..=16 => count_words::<16>(graph, q, opts),
        17..=32 => count_words::<32>(graph, q, opts),
        33..=64 => count_words::<64>(graph, q, opts),
        65..=128 => count_words::<128>(graph, q, opts),
        _ => Err(Error::BoardTooLarge {
            squares: graph.squares(),
            max: 128 * 64,
        }),
    }
}

/// Default largest board for [`count_diagonal_queen`].
pub const DIAGONAL_QUEEN_MAX: u32 = 10;

/// `u_Q(n;n)`, the number of ways to place `n` nonattacking queens.
pub fn count_diagonal_queen(n: BoardSize) -> Result<CountRecord> {
    count_diagonal_queen_with_limit(n, DIAGONAL_QUEEN_MAX)
}

pub fn count_diagonal_queen_with_limit(n: BoardSize, max: u32) -> Result<CountRecord> {
    let size = n.n();
    if size > max || size > 31 {
        return Err(Error::ResourceLimit {
            what: "board size",
            budget: max.min(31) as u64,
        });
    }
    let count = if size == 0 {
        1
    } else {
        let full = (1u64 << size) - 1;
        queens_rows(full, 0, 0, 0)
    };
    Ok(CountRecord::new(&Piece::queen(), size, size, BigUint::from(count)))
}

/// One queen per row; `cols`, `left`, `right` are the attacked columns on
/// the current row.
fn queens_rows(full: u64, cols: u64, left: u64, right: u64) -> u64 {
    if cols == full {
        return 1;
    }
    let mut free = full & !(cols | left | right);
    let mut total = 0;
    while free != 0 {
        let bit = free & free.wrapping_neg();
        free ^= bit;
        total += queens_rows(full, cols | bit, ((left | bit) << 1) & full, (right | bit) >> 1);
    }
    total
}

/// `C(n², q)`, the count when nothing attacks.
pub fn unrestricted(q: u32, n: BoardSize) -> BigUint {
    let sq = num_bigint::BigInt::from(n.squares());
    binomial(&sq, q).to_biguint().expect("binomials are nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Move;

    fn count(p: &Piece, q: u32, n: u32) -> u64 {
        let c = count_nonattacking(p, q, BoardSize(n)).unwrap().count;
        u64::try_from(c).unwrap()
    }

    fn one(c: i64, d: i64) -> Piece {
        Piece::single(Move::normalize(c, d).unwrap())
    }

    /// Plain subset enumeration with a pairwise attack test.
    fn naive(p: &Piece, q: usize, n: u32) -> u64 {
        let s = (n * n) as usize;
        let attack = |i: usize, j: usize| {
            let (dx, dy) = (
                (j % n as usize) as i64 - (i % n as usize) as i64,
                (j / n as usize) as i64 - (i / n as usize) as i64,
            );
            p.moves().any(|m| dx * m.d() == dy * m.c())
        };
        fn rec(
            start: usize,
            left: usize,
            chosen: &mut Vec<usize>,
            s: usize,
            attack: &dyn Fn(usize, usize) -> bool,
        ) -> u64 {
            if left == 0 {
                return 1;
            }
            let mut total = 0;
            for j in start..s {
                if chosen.iter().all(|&i| !attack(i, j)) {
                    chosen.push(j);
                    total += rec(j + 1, left - 1, chosen, s, attack);
                    chosen.pop();
                }
            }
            total
        }
        rec(0, q, &mut Vec::new(), s, &attack)
    }

    #[test]
    fn graphs() {
        assert_eq!(AttackGraph::build(&one(1, 2), BoardSize(2)).edge_count(), 0);
        assert_eq!(AttackGraph::build(&Piece::queen(), BoardSize(2)).edge_count(), 6);
        let g = AttackGraph::build(&one(1, 2), BoardSize(3));
        assert_eq!(g.edge_count(), 2);
        assert!(g.attacks(g.index(1, 1), g.index(2, 3)));
        assert!(g.attacks(g.index(2, 1), g.index(3, 3)));
        assert!(!g.attacks(g.index(1, 1), g.index(1, 1)));
    }

    #[test]
    fn examples() {
        assert_eq!(count(&Piece::queen(), 2, 4), 44);
        assert_eq!(count(&one(1, 2), 3, 3), 70);
        for n in 0..6 {
            assert_eq!(count(&Piece::nightrider(), 1, n), (n * n) as u64);
            assert_eq!(count(&Piece::nightrider(), 0, n), 1);
        }
        assert_eq!(count(&Piece::rook(), 5, 2), 0);
        assert_eq!(count(&Piece::rook(), 4, 4), 24);
    }

    #[test]
    fn matches_naive_enumeration() {
        let pieces = [Piece::queen(), Piece::nightrider(), one(2, 3), Piece::bishop()];
        for p in &pieces {
            for q in 2..=4 {
                for n in 0..=6 {
                    assert_eq!(count(p, q, n), naive(p, q as usize, n), "{p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn large_boards_use_wide_masks() {
        // rooks: choose q rows and q columns, then match them
        assert_eq!(count(&Piece::rook(), 2, 17), 17 * 17 * 16 * 16 / 2);
        assert_eq!(count(&Piece::rook(), 3, 9), 84 * 84 * 6);
    }

    #[test]
    fn adding_moves_never_increases() {
        let small = one(1, 2);
        let big = Piece::from_pairs(&[(1, 2), (2, 1)]).unwrap();
        let bigger = Piece::nightrider();
        for q in 2..=4 {
            for n in 2..=7 {
                let (a, b, c) = (count(&small, q, n), count(&big, q, n), count(&bigger, q, n));
                assert!(a >= b && b >= c, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn parallel_equals_sequential() {
        let seq = CountOptions {
            budget: None,
            parallel: false,
        };
        for (p, q, n) in [(Piece::queen(), 3, 7), (Piece::nightrider(), 4, 6), (one(1, 3), 3, 9)] {
            let a = count_nonattacking(&p, q, BoardSize(n)).unwrap();
            let b = count_nonattacking_with(&p, q, BoardSize(n), &seq).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = CountOptions {
            budget: Some(1000),
            parallel: false,
        };
        let err = count_nonattacking_with(&Piece::rook(), 4, BoardSize(10), &opts).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { budget: 1000, .. }));
        let roomy = CountOptions {
            budget: Some(1_000_000),
            parallel: true,
        };
        assert!(count_nonattacking_with(&Piece::rook(), 2, BoardSize(4), &roomy).is_ok());
    }

    #[test]
    fn diagonal_queens() {
        let got: Vec<u64> = (1..=8)
            .map(|n| u64::try_from(count_diagonal_queen(BoardSize(n)).unwrap().count).unwrap())
            .collect();
        assert_eq!(got, vec![1, 0, 0, 2, 10, 4, 40, 92]);
        for n in 1..=6 {
            assert_eq!(
                count_diagonal_queen(BoardSize(n)).unwrap().count,
                count_nonattacking(&Piece::queen(), n, BoardSize(n)).unwrap().count
            );
        }
        assert!(matches!(
            count_diagonal_queen(BoardSize(11)),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn nothing_attacks_on_tiny_boards() {
        assert_eq!(
            count_nonattacking(&one(1, 2), 4, BoardSize(2)).unwrap().count,
            unrestricted(4, BoardSize(2))
        );
    }
}
