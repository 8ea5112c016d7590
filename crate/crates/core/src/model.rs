//! Moves, pieces and board sizes.
//!
//! A rider attacks along every integer multiple of each of its basic moves.
//! A basic move is stored in a canonical orientation so that `(c, d)` and
//! `(-c, -d)` describe the same line direction exactly once.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A reduced, canonically oriented direction `(c, d)` with slope `d/c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    c: i64,
    d: i64,
}

impl Move {
    /// Reduces `(cx, dy)` by its gcd and orients it so that `d > 0`, or
    /// `d == 0` and `c == 1`.
    pub fn normalize(cx: i64, dy: i64) -> Result<Move> {
        if cx == 0 && dy == 0 {
            return Err(Error::ZeroMove);
        }
        let g = cx.gcd(&dy);
        let (mut c, mut d) = (cx / g, dy / g);
        if d < 0 || (d == 0 && c < 0) {
            c = -c;
            d = -d;
        }
        Ok(Move { c, d })
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The board-symmetric form `(min(|c|,|d|), max(|c|,|d|))`.
    pub fn normalized(&self) -> MoveNormalized {
        let (a, b) = (self.c.abs(), self.d.abs());
        MoveNormalized {
            chat: a.min(b),
            dhat: a.max(b),
        }
    }

    pub fn dhat(&self) -> i64 {
        self.normalized().dhat
    }

    pub fn chat(&self) -> i64 {
        self.normalized().chat
    }

    pub fn is_parallel_to(&self, other: &Move) -> bool {
        self.c * other.d == self.d * other.c
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.c, self.d)
    }
}

/// `ĉ = min(|c|,|d|)` and `d̂ = max(|c|,|d|)` of a move.
///
/// Every quantity that depends only on the multiset of line sizes is a
/// function of this pair, since the square board is invariant under
/// reflections and the diagonal swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveNormalized {
    pub chat: i64,
    pub dhat: i64,
}

impl MoveNormalized {
    /// Euclidean residue `n mod d̂`, also for negative `n`.
    pub fn residue(&self, n: i64) -> i64 {
        n.rem_euclid(self.dhat)
    }
}

/// A rider: a nonempty set of pairwise non-parallel basic moves.
///
/// Equality and ordering ignore the optional display name.
#[derive(Debug, Clone)]
pub struct Piece {
    moves: BTreeSet<Move>,
    name: Option<String>,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.moves == other.moves
    }
}

impl Eq for Piece {}

impl std::hash::Hash for Piece {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.moves.hash(state);
    }
}

const ROOK_MOVES: [(i64, i64); 2] = [(1, 0), (0, 1)];
const BISHOP_MOVES: [(i64, i64); 2] = [(1, 1), (1, -1)];
const KNIGHT_MOVES: [(i64, i64); 4] = [(1, 2), (2, 1), (1, -2), (2, -1)];

impl Piece {
    pub fn new<I>(moves: I) -> Result<Piece>
    where
        I: IntoIterator<Item = Move>,
    {
        let mut set = BTreeSet::new();
        for m in moves {
            if let Some(prev) = set.iter().find(|p: &&Move| p.is_parallel_to(&m)) {
                return Err(Error::ParallelMoves(*prev, m));
            }
            set.insert(m);
        }
        if set.is_empty() {
            return Err(Error::EmptyPiece);
        }
        Ok(Piece { moves: set, name: None })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Piece> {
        let moves = pairs
            .iter()
            .map(|&(c, d)| Move::normalize(c, d))
            .collect::<Result<Vec<_>>>()?;
        Piece::new(moves)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Piece {
        self.name = Some(name.into());
        self
    }

    pub fn queen() -> Piece {
        named(&[&ROOK_MOVES[..], &BISHOP_MOVES[..]], "Q")
    }

    pub fn rook() -> Piece {
        named(&[&ROOK_MOVES[..]], "R")
    }

    pub fn bishop() -> Piece {
        named(&[&BISHOP_MOVES[..]], "B")
    }

    pub fn nightrider() -> Piece {
        named(&[&KNIGHT_MOVES[..]], "N")
    }

    /// A one-move rider.
    pub fn single(m: Move) -> Piece {
        Piece {
            moves: BTreeSet::from([m]),
            name: None,
        }
    }

    pub fn moves(&self) -> impl ExactSizeIterator<Item = &Move> + '_ {
        self.moves.iter()
    }

    pub fn move_count(&self) -> usize {
        self.moves.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The only move of a one-move rider.
    pub fn sole_move(&self) -> Option<Move> {
        if self.moves.len() == 1 {
            self.moves.iter().next().copied()
        } else {
            None
        }
    }

    /// `Λ`, the lcm of `d̂` over all moves.
    pub fn lambda(&self) -> i64 {
        self.moves.iter().fold(1, |acc, m| acc.lcm(&m.dhat()))
    }

    /// The move range: the largest `d̂`.
    pub fn range(&self) -> i64 {
        self.moves.iter().map(Move::dhat).max().unwrap_or(0)
    }

    /// The name-independent text form `c,d;c,d;...`, moves in sorted order.
    pub fn canonical_text(&self) -> String {
        self.moves.iter().map(Move::to_string).collect::<Vec<_>>().join(";")
    }

    /// Label for reports: the alias name if there is one.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => self.canonical_text(),
        }
    }

    /// Whether every move of `self` is also a move of `other`.
    pub fn is_subpiece_of(&self, other: &Piece) -> bool {
        self.moves.is_subset(&other.moves)
    }
}

fn named(groups: &[&[(i64, i64)]], name: &str) -> Piece {
    let pairs: Vec<(i64, i64)> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    Piece::from_pairs(&pairs)
        .expect("alias move tables are valid")
        .with_name(name)
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Parses `NAME | move (";" move)*` where `move = int "," int`.
///
/// Names: `Q`, `R`, `B`, `N`, and partial queens `Qhk` with `h` rook moves
/// and `k` bishop moves (`h, k` in `0..=2`, not both zero).
pub fn parse_piece(text: &str) -> Result<Piece> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::EmptyPiece);
    }
    if let Some(p) = alias(&compact)? {
        return Ok(p);
    }
    let mut moves = Vec::new();
    for part in compact.split(';') {
        let (a, b) = part
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `c,d`, found `{part}`")))?;
        let c: i64 = a
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{a}` in `{part}`")))?;
        let d: i64 = b
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{b}` in `{part}`")))?;
        moves.push(Move::normalize(c, d)?);
    }
    Piece::new(moves)
}

fn alias(name: &str) -> Result<Option<Piece>> {
    let piece = match name {
        "Q" => Piece::queen(),
        "R" => Piece::rook(),
        "B" => Piece::bishop(),
        "N" => Piece::nightrider(),
        _ => {
            let Some(code) = name.strip_prefix('Q') else {
                return Ok(None);
            };
            let digits: Vec<u32> = code.chars().filter_map(|c| c.to_digit(10)).collect();
            if code.len() != 2 || digits.len() != 2 {
                return Err(Error::Parse(format!("unknown piece name `{name}`")));
            }
            let (h, k) = (digits[0] as usize, digits[1] as usize);
            if h > 2 || k > 2 || h + k == 0 {
                return Err(Error::Parse(format!("bad partial-queen code `{name}`")));
            }
            named(&[&ROOK_MOVES[..h], &BISHOP_MOVES[..k]], name)
        }
    };
    Ok(Some(piece))
}

impl FromStr for Piece {
    type Err = Error;

    fn from_str(s: &str) -> Result<Piece> {
        parse_piece(s)
    }
}

/// Side length of the square board `[n]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardSize(pub u32);

impl BoardSize {
    pub fn n(self) -> u32 {
        self.0
    }

    pub fn squares(self) -> usize {
        (self.0 as usize) * (self.0 as usize)
    }
}

impl From<u32> for BoardSize {
    fn from(n: u32) -> Self {
        BoardSize(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(Move::normalize(2, 4).unwrap(), Move::normalize(1, 2).unwrap());
        let m = Move::normalize(-1, -2).unwrap();
        assert_eq!((m.c(), m.d()), (1, 2));
        let h = Move::normalize(3, 0).unwrap();
        assert_eq!((h.c(), h.d()), (1, 0));
        let h = Move::normalize(-3, 0).unwrap();
        assert_eq!((h.c(), h.d()), (1, 0));
        assert!(matches!(Move::normalize(0, 0), Err(Error::ZeroMove)));
    }

    #[test]
    fn aliases() {
        let q = parse_piece("Q").unwrap();
        assert_eq!(q.move_count(), 4);
        assert_eq!(q, Piece::from_pairs(&[(1, 0), (0, 1), (1, 1), (-1, 1)]).unwrap());
        assert_eq!(parse_piece("R").unwrap().move_count(), 2);
        assert_eq!(parse_piece("B").unwrap().move_count(), 2);
        assert_eq!(parse_piece("N").unwrap().move_count(), 4);
        assert_eq!(parse_piece("Q22").unwrap(), q);
        assert_eq!(parse_piece("Q20").unwrap(), Piece::rook());
        assert_eq!(parse_piece("Q01").unwrap(), Piece::from_pairs(&[(1, 1)]).unwrap());
        assert!(parse_piece("Q00").is_err());
        assert!(parse_piece("Q3").is_err());
        assert!(parse_piece("K").is_err());
    }

    #[test]
    fn move_lists() {
        let p = parse_piece("1,2").unwrap();
        assert_eq!(p.sole_move(), Some(Move::normalize(1, 2).unwrap()));
        let p = parse_piece(" 1, 2 ; 2 ,1 ").unwrap();
        assert_eq!(p.move_count(), 2);
        assert!(matches!(parse_piece("1,2;2,4"), Err(Error::ParallelMoves(..))));
        assert!(matches!(parse_piece("1,2;-1,-2"), Err(Error::ParallelMoves(..))));
        assert!(matches!(parse_piece("0,0"), Err(Error::ZeroMove)));
        assert!(matches!(parse_piece(""), Err(Error::EmptyPiece)));
        assert!(matches!(parse_piece("1;2"), Err(Error::Parse(_))));
        assert!(matches!(parse_piece("1,x"), Err(Error::Parse(_))));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(Piece::queen().lambda(), 1);
        assert_eq!(Piece::nightrider().lambda(), 2);
        assert_eq!(parse_piece("1,2;1,3").unwrap().lambda(), 6);
    }

    #[test]
    fn normalized_form() {
        let m = Move::normalize(-3, 1).unwrap();
        assert_eq!(m.normalized(), MoveNormalized { chat: 1, dhat: 3 });
        assert_eq!(m.normalized().residue(-1), 2);
        let r = Move::normalize(0, 1).unwrap().normalized();
        assert_eq!(r, MoveNormalized { chat: 0, dhat: 1 });
    }

    fn arb_pair() -> impl Strategy<Value = (i64, i64)> {
        (-50i64..=50, -50i64..=50).prop_filter("nonzero", |&(c, d)| c != 0 || d != 0)
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_sign_invariant((c, d) in arb_pair(), k in 1i64..7) {
            let m = Move::normalize(c, d).unwrap();
            prop_assert_eq!(Move::normalize(m.c(), m.d()).unwrap(), m);
            prop_assert_eq!(Move::normalize(-c, -d).unwrap(), m);
            prop_assert_eq!(Move::normalize(k * c, k * d).unwrap(), m);
            prop_assert_eq!(m.c().gcd(&m.d()), 1);
            prop_assert!(m.d() > 0 || (m.d() == 0 && m.c() == 1));
        }

        #[test]
        fn canonical_text_round_trips(pairs in proptest::collection::vec(arb_pair(), 1..6)) {
            if let Ok(p) = Piece::from_pairs(&pairs) {
                let back = parse_piece(&p.canonical_text()).unwrap();
                prop_assert_eq!(&back, &p);
                prop_assert_eq!(back.canonical_text(), p.canonical_text());
                for m in p.moves() {
                    prop_assert_eq!(p.lambda() % m.dhat(), 0);
                }
            }
        }
    }
}
