//! `ridercount`: counts, closed forms, fits and theorem checks for
//! nonattacking riders.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rider_count::analysis::{
    fit_json, recurrence_check, test_conjectures, type_count, verify_gamma_theorem, verify_parity_theorem,
    verify_two_piece_theorem, CheckReport, ConjectureResult, Fit, Lab, Verdict, MIN_VALIDATION,
};
use rider_count::cache::CacheStore;
use rider_count::closed::{one_move_closed, u2_closed};
use rider_count::enumerate::{count_diagonal_queen_with_limit, CountOptions, DIAGONAL_QUEEN_MAX};
use rider_count::quasi::{fit_quasipolynomial, TailModel};
use rider_count::{parse_piece, BoardSize, Error, Move, Piece};

const CACHE_ENV: &str = "RIDERCOUNT_CACHE";

#[derive(Parser, Debug)]
#[command(name = "ridercount", version, about = "Count nonattacking riders on n×n boards")]
struct Cli {
    /// Emit JSON (one object per line) instead of CSV or text.
    #[arg(long, global = true)]
    json: bool,
    /// Count cache; defaults to $RIDERCOUNT_CACHE, then ./counts.csv.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Do not read or write the count cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brute-force counts u_P(q;n).
    Count {
        #[arg(short, long, value_parser = piece_arg)]
        piece: Piece,
        #[arg(short, long)]
        q: u32,
        /// Board sizes, `a..b` (inclusive) or a single `n`.
        #[arg(short, long, value_parser = range_arg)]
        n: RangeInclusive<u32>,
        /// Abort a count after this many search nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Closed-form values (q = 2, or q ≤ 4 for one-move riders).
    Formula {
        #[arg(short, long, value_parser = piece_arg)]
        piece: Piece,
        #[arg(short, long)]
        q: u32,
        #[arg(short, long, value_parser = range_arg)]
        n: RangeInclusive<u32>,
        /// Also brute-force each value and report mismatches.
        #[arg(long)]
        diff_brute: bool,
    },
    /// Fit a quasipolynomial to counts for 0 ≤ n ≤ n-max.
    Fit {
        #[arg(short, long, value_parser = piece_arg)]
        piece: Piece,
        #[arg(short, long)]
        q: u32,
        #[arg(long)]
        period_bound: usize,
        #[arg(long)]
        n_max: u32,
    },
    /// Run a verification suite and stream reports.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Pieces to check; defaults to a standard set.
        #[arg(short, long = "piece", value_parser = piece_arg)]
        pieces: Vec<Piece>,
        /// Number of pieces, `a..b` or a single value.
        #[arg(short, long, value_parser = range_arg)]
        q: Option<RangeInclusive<u32>>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        period_bound: Option<usize>,
        /// Count one-move riders by search instead of line sizes.
        #[arg(long)]
        brute_only: bool,
        /// Append JSON-lines reports to this file.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Inspect or re-verify the count cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Ways to place n nonattacking queens, for n = 1..n-max.
    Nqueens {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = DIAGONAL_QUEEN_MAX)]
        limit: u32,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Print every cached record.
    List,
    /// Recount cached records with n ≤ n-max; exit 4 on any mismatch.
    Verify {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    TwoPiece,
    Parity,
    Gamma,
    Conjectures,
    Recurrence,
    All,
}

fn piece_arg(s: &str) -> Result<Piece, String> {
    parse_piece(s).map_err(|e| e.to_string())
}

fn range_arg(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad number `{t}` in `{s}`"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            Ok(a..=b)
        }
        None => {
            let a = num(s)?;
            Ok(a..=a)
        }
    }
}

enum Failure {
    Lib(Error),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::ZeroMove
        | Error::EmptyPiece
        | Error::ParallelMoves(..)
        | Error::UnsupportedQ { .. } => 2,
        Error::ResourceLimit { .. } | Error::BoardTooLarge { .. } => 3,
        Error::CacheCorrupt(_) => 4,
        _ => 1,
    }
}

/// Accepts `-n-max` as `--n-max`.
fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.strip_prefix("-n-max") {
            Some(rest) if rest.is_empty() || rest.starts_with('=') => format!("--n-max{rest}"),
            _ => a,
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize_args(std::env::args()));
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(k)) => {
            eprintln!("{k} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn open_cache(cli: &Cli) -> Result<Option<CacheStore>, Error> {
    if cli.no_cache {
        return Ok(None);
    }
    let path = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("counts.csv"));
    CacheStore::open(path).map(Some)
}

fn lab(cli: &Cli, budget: Option<u64>, by_lines: bool) -> Result<Lab, Error> {
    Ok(Lab {
        cache: open_cache(cli)?,
        opts: CountOptions {
            budget,
            ..CountOptions::default()
        },
        one_move_by_lines: by_lines,
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = io::stdout();
    let mut out = out.lock();
    match &cli.command {
        Command::Count { piece, q, n, budget } => {
            let mut lab = lab(cli, *budget, false)?;
            let mut rows = Vec::new();
            let mut failure = None;
            for n in n.clone() {
                match lab.count(piece, *q, n) {
                    Ok(c) => rows.push(rider_count::enumerate::CountRecord::new(piece, *q, n, c)),
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            lab.save()?;
            if cli.json {
                for r in &rows {
                    writeln!(out, "{}", serde_json::to_string(r).map_err(Error::from)?)?;
                }
            } else {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["piece", "q", "n", "count"])?;
                for r in &rows {
                    w.write_record([r.piece.clone(), r.q.to_string(), r.n.to_string(), r.count.to_string()])?;
                }
                w.flush()?;
            }
            match failure {
                Some(e) => Err(e.into()),
                None => Ok(()),
            }
        }
        Command::Formula {
            piece,
            q,
            n,
            diff_brute,
        } => formula(cli, &mut out, piece, *q, n.clone(), *diff_brute),
        Command::Fit {
            piece,
            q,
            period_bound,
            n_max,
        } => fit(cli, &mut out, piece, *q, *period_bound, *n_max),
        Command::Check {
            suite,
            pieces,
            q,
            n_max,
            period_bound,
            brute_only,
            report,
        } => {
            let mut lab = lab(cli, None, !brute_only)?;
            let opts = CheckOptions {
                pieces: pieces.clone(),
                q: q.clone(),
                n_max: *n_max,
                period_bound: *period_bound,
            };
            let mut sink = Sink::new(cli.json, report.as_ref())?;
            let result = check(*suite, &opts, &mut lab, &mut sink, &mut out);
            lab.save()?;
            result?;
            match sink.failures {
                0 => Ok(()),
                k => Err(Failure::Checks(k)),
            }
        }
        Command::Cache { action } => {
            let Some(cache) = open_cache(cli)? else {
                return Ok(());
            };
            let records: Vec<_> = cache.records().collect();
            if let CacheAction::Verify { n_max } = action {
                let opts = CountOptions::default();
                let mut checked = 0;
                for r in records.iter().filter(|r| r.n <= *n_max) {
                    cache.verify(&parse_piece(&r.piece)?, r.q, r.n, &opts)?;
                    checked += 1;
                }
                eprintln!("{checked} of {} records recounted", records.len());
                return Ok(());
            }
            if cli.json {
                for r in &records {
                    writeln!(out, "{}", serde_json::to_string(r).map_err(Error::from)?)?;
                }
            } else {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["piece", "q", "n", "count"])?;
                for r in &records {
                    w.write_record([r.piece.clone(), r.q.to_string(), r.n.to_string(), r.count.to_string()])?;
                }
                w.flush()?;
            }
            Ok(())
        }
        Command::Nqueens { n_max, limit } => {
            if !cli.json {
                writeln!(out, "n,count")?;
            }
            for n in 1..=*n_max {
                let rec = count_diagonal_queen_with_limit(BoardSize(n), *limit)?;
                if cli.json {
                    writeln!(out, "{}", serde_json::json!({"n": n, "count": rec.count.to_string()}))?;
                } else {
                    writeln!(out, "{n},{}", rec.count)?;
                }
            }
            Ok(())
        }
    }
}

fn closed_value(piece: &Piece, q: u32, n: u32) -> Result<BigInt, Error> {
    match (piece.sole_move(), q) {
        (_, 2) => u2_closed(piece, BoardSize(n)),
        (Some(m), _) => one_move_closed(m, q, BoardSize(n)),
        (None, _) => Err(Error::UnsupportedQ {
            q,
            supported: "2 for pieces with several moves",
        }),
    }
}

fn formula(
    cli: &Cli,
    out: &mut impl Write,
    piece: &Piece,
    q: u32,
    ns: RangeInclusive<u32>,
    diff_brute: bool,
) -> Result<(), Failure> {
    let mut lab = if diff_brute { Some(lab(cli, None, false)?) } else { None };
    let mut mismatches = 0;
    let mut w = csv::Writer::from_writer(Vec::new());
    if !cli.json {
        let mut header = vec!["piece", "q", "n", "value"];
        if diff_brute {
            header.extend(["brute", "match"]);
        }
        w.write_record(header)?;
    }
    for n in ns {
        let value = closed_value(piece, q, n)?;
        let brute = match &mut lab {
            Some(lab) => Some(BigInt::from(lab.count(piece, q, n)?)),
            None => None,
        };
        let matched = brute.as_ref().map(|b| *b == value);
        if matched == Some(false) {
            mismatches += 1;
        }
        if cli.json {
            let mut obj = serde_json::json!({
                "piece": piece.canonical_text(),
                "q": q,
                "n": n,
                "value": value.to_string(),
            });
            if let (Some(b), Some(m)) = (&brute, matched) {
                obj["brute"] = b.to_string().into();
                obj["match"] = m.into();
            }
            writeln!(out, "{obj}")?;
        } else {
            let mut row = vec![piece.canonical_text(), q.to_string(), n.to_string(), value.to_string()];
            if let (Some(b), Some(m)) = (&brute, matched) {
                row.push(b.to_string());
                row.push(if m { "match" } else { "MISMATCH" }.to_string());
            }
            w.write_record(row)?;
        }
    }
    out.write_all(&w.into_inner().map_err(|e| io::Error::other(e.to_string()))?)?;
    if let Some(lab) = &mut lab {
        lab.save()?;
    }
    match mismatches {
        0 => Ok(()),
        k => Err(Failure::Checks(k)),
    }
}

fn fit(cli: &Cli, out: &mut impl Write, piece: &Piece, q: u32, bound: usize, n_max: u32) -> Result<(), Failure> {
    let degree = 2 * q as usize;
    let mut lab = lab(cli, None, false)?;
    let data = lab.series(piece, q, 0..=n_max)?;
    lab.save()?;
    let (qp, model) = match fit_quasipolynomial(&data, degree, bound) {
        Ok(qp) => (qp.reduced(), None),
        Err(Error::InsufficientData { .. }) => match TailModel::search(&data, degree, bound, MIN_VALIDATION) {
            Ok((model, qp)) => (qp.reduced(), Some(model)),
            Err(_) => {
                let need = degree + 1;
                let have: Vec<usize> = (0..bound)
                    .map(|r| data.keys().filter(|&&n| n as usize % bound == r).count())
                    .collect();
                let missing: Vec<String> = have
                    .iter()
                    .enumerate()
                    .filter(|(_, &h)| h < need)
                    .map(|(r, h)| format!("residue {r}: {} more", need - h))
                    .collect();
                eprintln!("missing points per residue class mod {bound}: {}", missing.join(", "));
                let residue = have.iter().position(|&h| h < need).unwrap_or(0);
                return Err(Error::InsufficientData {
                    residue,
                    have: have[residue],
                    need,
                }
                .into());
            }
        },
        Err(e) => return Err(e.into()),
    };
    let fit = Fit {
        qp,
        model,
        n_range: (0, n_max),
    };
    let mut v = fit_json(&fit);
    v["piece"] = piece.canonical_text().into();
    v["q"] = q.into();
    v["period_bound"] = bound.into();
    if let Some(m) = model {
        v["model"] = serde_json::json!({"constant_terms": m.constant_terms, "tail_period": m.tail_period});
    }
    match type_count(piece, q, &fit.qp) {
        Ok(t) => v["type_count"] = t.to_string().into(),
        Err(e) => v["type_count_error"] = e.to_string().into(),
    }
    if cli.json {
        writeln!(out, "{v}")?;
    } else {
        let qp_json = rider_count::quasi::json::to_json(&fit.qp);
        writeln!(out, "{qp_json}")?;
        writeln!(
            out,
            "coefficient periods (gamma_0..gamma_{degree}): {}",
            v["coefficient_periods"]
        )?;
        writeln!(
            out,
            "u({q};-1) = {}",
            v["value_at_minus_one"].as_str().unwrap_or_default()
        )?;
        if let Some(m) = model {
            writeln!(
                out,
                "fitted with the top {} coefficients constant and tail period {}",
                m.constant_terms, m.tail_period
            )?;
        }
    }
    Ok(())
}

struct CheckOptions {
    pieces: Vec<Piece>,
    q: Option<RangeInclusive<u32>>,
    n_max: Option<u32>,
    period_bound: Option<usize>,
}

fn standard_pieces() -> Vec<Piece> {
    let one = |c, d| Piece::single(Move::normalize(c, d).expect("nonzero"));
    vec![
        Piece::queen(),
        Piece::rook(),
        Piece::bishop(),
        Piece::nightrider(),
        one(1, 2),
        one(1, 3),
        one(2, 3),
        Piece::from_pairs(&[(1, 2), (2, 1)]).expect("valid piece"),
    ]
}

impl CheckOptions {
    fn pieces(&self) -> Vec<Piece> {
        if self.pieces.is_empty() {
            standard_pieces()
        } else {
            self.pieces.clone()
        }
    }

    fn qs(&self, default: RangeInclusive<u32>) -> RangeInclusive<u32> {
        self.q.clone().unwrap_or(default)
    }

    fn bound(&self, piece: &Piece, q: u32) -> usize {
        let lambda = piece.lambda() as usize;
        self.period_bound.unwrap_or(if q == 2 {
            2 * lambda
        } else {
            num_integer::lcm(12, lambda)
        })
    }

    fn n_max(&self, piece: &Piece, q: u32) -> u32 {
        self.n_max.unwrap_or_else(|| {
            if q == 2 {
                (10 * piece.lambda() as u32 + 2).max(12)
            } else {
                22
            }
        })
    }
}

struct Sink {
    json: bool,
    file: Option<std::fs::File>,
    failures: usize,
}

impl Sink {
    fn new(json: bool, path: Option<&PathBuf>) -> Result<Sink, Failure> {
        let file = match path {
            Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
            None => None,
        };
        Ok(Sink {
            json,
            file,
            failures: 0,
        })
    }

    fn line(&mut self, out: &mut impl Write, json: String, text: String) -> Result<(), Failure> {
        if let Some(f) = &mut self.file {
            writeln!(f, "{json}")?;
        }
        writeln!(out, "{}", if self.json { json } else { text })?;
        Ok(())
    }

    fn report(&mut self, out: &mut impl Write, r: &CheckReport) -> Result<(), Failure> {
        if r.verdict == Verdict::Fail {
            self.failures += 1;
        }
        let verdict = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        let mut text = format!("{verdict} {} {}", r.check, r.piece.as_deref().unwrap_or("-"));
        if let Some(q) = r.params.q {
            text.push_str(&format!(" q={q}"));
        }
        if let Some(reason) = &r.reason {
            text.push_str(&format!(": {reason}"));
        }
        if let Some(w) = &r.witness {
            text.push_str(&format!(": {} expected {} got {}", w.what, w.expected, w.actual));
        }
        self.line(out, r.to_json_line(), text)
    }

    fn conjecture(&mut self, out: &mut impl Write, c: &ConjectureResult) -> Result<(), Failure> {
        if c.consistent == Some(false) {
            self.failures += 1;
        }
        let status = match c.consistent {
            Some(true) => "CONSISTENT",
            Some(false) => "INCONSISTENT",
            None => "UNTESTED",
        };
        let text = format!("{status} {} {} q={}: {}", c.conjecture, c.piece, c.q, c.notes);
        self.line(out, c.to_json_line(), text)
    }
}

fn check(
    suite: Suite,
    opts: &CheckOptions,
    lab: &mut Lab,
    sink: &mut Sink,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let run = |s: Suite| suite == s || suite == Suite::All;
    if run(Suite::TwoPiece) {
        for piece in opts.pieces() {
            let n_max = opts.n_max(&piece, 2);
            for r in verify_two_piece_theorem(std::slice::from_ref(&piece), n_max, lab)? {
                sink.report(out, &r)?;
            }
        }
    }
    if run(Suite::Parity) {
        let moves: Vec<Move> = if opts.pieces.is_empty() {
            (0..=5i64)
                .flat_map(|d| (-5..=5i64).map(move |c| (c, d)))
                .filter(|&(c, d)| num_integer::gcd(c, d) == 1 && (d > 0 || c == 1))
                .map(|(c, d)| Move::normalize(c, d).expect("nonzero"))
                .collect()
        } else {
            opts.pieces
                .iter()
                .flat_map(|p| p.moves().copied().collect::<Vec<_>>())
                .collect()
        };
        for r in verify_parity_theorem(&moves, opts.n_max.unwrap_or(40))? {
            sink.report(out, &r)?;
        }
    }
    if run(Suite::Gamma) {
        for piece in opts.pieces() {
            for q in opts.qs(2..=3) {
                let (r, _) = verify_gamma_theorem(&piece, q, opts.n_max(&piece, q), opts.bound(&piece, q), lab)?;
                sink.report(out, &r)?;
            }
        }
    }
    if run(Suite::Conjectures) {
        let pieces = opts.pieces();
        let results = test_conjectures(
            &pieces,
            opts.qs(2..=4),
            opts.n_max.unwrap_or(22),
            |p, q| opts.bound(p, q),
            lab,
        )?;
        for c in &results {
            sink.conjecture(out, c)?;
        }
    }
    if run(Suite::Recurrence) {
        for piece in opts.pieces() {
            for q in opts.qs(2..=2) {
                let r = recurrence_check(&piece, q, opts.n_max(&piece, q), opts.bound(&piece, q), lab)?;
                sink.report(out, &r)?;
            }
        }
    }
    Ok(())
}
