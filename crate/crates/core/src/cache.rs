//! Persistent store of exact counts, a CSV file with header
//! `piece,q,n,count`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::enumerate::{count_nonattacking_with, CountOptions, CountRecord};
use crate::error::{Error, Result};
use crate::model::{BoardSize, Piece};

const HEADER: [&str; 4] = ["piece", "q", "n", "count"];

type Key = (String, u32, u32);

#[derive(Debug, Clone)]
pub struct CacheStore {
    path: PathBuf,
    index: BTreeMap<Key, BigUint>,
    dirty: bool,
}

impl CacheStore {
    /// Loads `path`; a missing file is an empty cache, created on the first
    /// [`save`](Self::save) that has something to write.
    pub fn open(path: impl AsRef<Path>) -> Result<CacheStore> {
        let path = path.as_ref().to_path_buf();
        let mut store = CacheStore {
            path,
            index: BTreeMap::new(),
            dirty: false,
        };
        if !store.path.exists() {
            return Ok(store);
        }
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(&store.path)?;
        let header = reader.headers()?.clone();
        if header.iter().ne(HEADER.iter().copied()) {
            return Err(Error::CacheCorrupt(format!(
                "{}: expected header `{}`",
                store.path.display(),
                HEADER.join(",")
            )));
        }
        for (line, row) in reader.records().enumerate() {
            let row = row?;
            let bad =
                |what: &str| Error::CacheCorrupt(format!("{}: record {}: {what}", store.path.display(), line + 1));
            if row.len() != 4 {
                return Err(bad("wrong field count"));
            }
            let piece: Piece = row[0].parse().map_err(|_| bad("bad piece"))?;
            let q: u32 = row[1].parse().map_err(|_| bad("bad q"))?;
            let n: u32 = row[2].parse().map_err(|_| bad("bad n"))?;
            let count: BigUint = row[3].parse().map_err(|_| bad("bad count"))?;
            let key = (piece.canonical_text(), q, n);
            if let Some(old) = store.index.get(&key) {
                if *old != count {
                    return Err(bad("conflicting duplicate"));
                }
            }
            store.index.insert(key, count);
        }
        Ok(store)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, piece: &Piece, q: u32, n: u32) -> Option<&BigUint> {
        self.index.get(&(piece.canonical_text(), q, n))
    }

    /// Adds a record. A different count under an existing key means the
    /// cache or the counter is wrong, and is reported as corruption.
    pub fn insert(&mut self, record: &CountRecord) -> Result<()> {
        let key = (record.piece.clone(), record.q, record.n);
        match self.index.get(&key) {
            Some(old) if *old == record.count => Ok(()),
            Some(old) => Err(Error::CacheCorrupt(format!(
                "{} q={} n={}: cached {old}, computed {}",
                record.piece, record.q, record.n, record.count
            ))),
            None => {
                self.index.insert(key, record.count.clone());
                self.dirty = true;
                Ok(())
            }
        }
    }

    /// Cached count, or a fresh one that is then recorded.
    pub fn count(&mut self, piece: &Piece, q: u32, n: u32, opts: &CountOptions) -> Result<BigUint> {
        if let Some(c) = self.get(piece, q, n) {
            return Ok(c.clone());
        }
        let rec = count_nonattacking_with(piece, q, BoardSize(n), opts)?;
        self.insert(&rec)?;
        Ok(rec.count)
    }

    /// Recounts a cached entry and fails on disagreement.
    pub fn verify(&self, piece: &Piece, q: u32, n: u32, opts: &CountOptions) -> Result<bool> {
        let Some(cached) = self.get(piece, q, n) else {
            return Ok(false);
        };
        let fresh = count_nonattacking_with(piece, q, BoardSize(n), opts)?;
        if fresh.count != *cached {
            return Err(Error::CacheCorrupt(format!(
                "{} q={q} n={n}: cached {cached}, recomputed {}",
                piece.canonical_text(),
                fresh.count
            )));
        }
        Ok(true)
    }

    pub fn records(&self) -> impl Iterator<Item = CountRecord> + '_ {
        self.index.iter().map(|((piece, q, n), count)| CountRecord {
            piece: piece.clone(),
            q: *q,
            n: *n,
            count: count.clone(),
        })
    }

    /// Records for one piece and `q`, keyed by `n`.
    pub fn series(&self, piece: &Piece, q: u32) -> BTreeMap<u32, BigUint> {
        let text = piece.canonical_text();
        self.index
            .iter()
            .filter(|((p, qq, _), _)| *p == text && *qq == q)
            .map(|((_, _, n), c)| (*n, c.clone()))
            .collect()
    }

    /// Rewrites the file sorted by key if anything was added.
    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = self.path.with_extension("csv.tmp");
        {
            let mut w = csv::Writer::from_path(&tmp)?;
            w.write_record(HEADER)?;
            for ((piece, q, n), count) in &self.index {
                w.write_record([piece.clone(), q.to_string(), n.to_string(), count.to_string()])?;
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, &self.path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("counts.csv");
        let mut store = CacheStore::open(&path).unwrap();
        store.save().unwrap();
        assert!(!path.exists());
        let opts = CountOptions::default();
        let q = Piece::queen();
        assert_eq!(store.count(&q, 2, 4, &opts).unwrap(), BigUint::from(44u32));
        store.count(&Piece::nightrider(), 2, 3, &opts).unwrap();
        store.save().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "piece,q,n,count\n\"-1,1;0,1;1,0;1,1\",2,4,44\n\"-2,1;-1,2;1,2;2,1\",2,3,28\n"
        );
        let mut again = CacheStore::open(&path).unwrap();
        assert_eq!(again.len(), 2);
        assert!(again.verify(&q, 2, 4, &opts).unwrap());
        again.save().unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn conflicts_are_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.csv");
        std::fs::write(&path, "piece,q,n,count\n\"1,2\",3,3,71\n").unwrap();
        let store = CacheStore::open(&path).unwrap();
        let p: Piece = "1,2".parse().unwrap();
        assert!(matches!(
            store.verify(&p, 3, 3, &CountOptions::default()),
            Err(Error::CacheCorrupt(_))
        ));
        let mut store = store;
        let rec = CountRecord::new(&p, 3, 3, BigUint::from(70u32));
        assert!(matches!(store.insert(&rec), Err(Error::CacheCorrupt(_))));
        std::fs::write(&path, "piece,count\n").unwrap();
        assert!(matches!(CacheStore::open(&path), Err(Error::CacheCorrupt(_))));
        std::fs::write(&path, "piece,q,n,count\nQ,2,x,1\n").unwrap();
        assert!(matches!(CacheStore::open(&path), Err(Error::CacheCorrupt(_))));
    }
}
