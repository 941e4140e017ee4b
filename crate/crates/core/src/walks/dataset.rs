//! Trajectory datasets and their versioned CSV form.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::Rational;

pub const CSV_MAGIC: &str = "# weylwalk-csv v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    Group,
    Iso,
    Reduced,
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Group => "group",
            WalkKind::Iso => "iso",
            WalkKind::Reduced => "reduced",
        })
    }
}

impl FromStr for WalkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(WalkKind::Group),
            "iso" => Ok(WalkKind::Iso),
            "reduced" => Ok(WalkKind::Reduced),
            other => Err(Error::Parse(format!("unknown walk kind {other:?}"))),
        }
    }
}

/// Checkpoint of a building walk: Busemann value `h(X_n)` and vector
/// distance `d(o, X_n)`, both in coweight coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkRecord {
    pub traj: u64,
    pub n: u64,
    pub h: Vec<Rational>,
    pub lam: Vec<Rational>,
}

/// Checkpoint of a reduced chain with cumulative hit statistics: `hits`
/// counts times `n' < n` with `xbar = y`, split by the value of `Z` there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedRecord {
    pub traj: u64,
    pub n: u64,
    pub xbar: i64,
    pub y: i64,
    pub hits: u64,
    pub z_up: u64,
    pub z_zero: u64,
    pub z_down: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Records {
    Walk(Vec<WalkRecord>),
    Reduced(Vec<ReducedRecord>),
}

/// Records plus the configuration that produced them (`key=value` pairs,
/// kept in insertion order so output is byte-stable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub kind: WalkKind,
    pub rank: usize,
    pub meta: Vec<(String, String)>,
    pub records: Records,
}

impl Dataset {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: String) {
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.meta.push((key.to_string(), value)),
        }
    }

    pub fn walk_records(&self) -> Result<&[WalkRecord]> {
        match &self.records {
            Records::Walk(r) => Ok(r),
            Records::Reduced(_) => Err(Error::InvalidState("expected a building-walk dataset".into())),
        }
    }

    pub fn reduced_records(&self) -> Result<&[ReducedRecord]> {
        match &self.records {
            Records::Reduced(r) => Ok(r),
            Records::Walk(_) => Err(Error::InvalidState("expected a reduced-chain dataset".into())),
        }
    }

    pub fn trajectory_ids(&self) -> BTreeSet<u64> {
        match &self.records {
            Records::Walk(r) => r.iter().map(|x| x.traj).collect(),
            Records::Reduced(r) => r.iter().map(|x| x.traj).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.records {
            Records::Walk(r) => r.is_empty(),
            Records::Reduced(r) => r.is_empty(),
        }
    }

    /// Last record of each trajectory, in trajectory order.
    pub fn final_walk_records(&self) -> Result<Vec<&WalkRecord>> {
        let recs = self.walk_records()?;
        let mut out: Vec<&WalkRecord> = Vec::new();
        for r in recs {
            match out.last_mut() {
                Some(last) if last.traj == r.traj => {
                    if r.n >= last.n {
                        *last = r;
                    }
                }
                _ => out.push(r),
            }
        }
        Ok(out)
    }

    pub fn final_reduced_records(&self) -> Result<Vec<&ReducedRecord>> {
        let recs = self.reduced_records()?;
        let mut out: Vec<&ReducedRecord> = Vec::new();
        for r in recs {
            match out.last_mut() {
                Some(last) if last.traj == r.traj => {
                    if r.n >= last.n {
                        *last = r;
                    }
                }
                _ => out.push(r),
            }
        }
        Ok(out)
    }

    /// Union of two datasets over disjoint trajectory ranges.
    pub fn merge(&self, other: &Dataset) -> Result<Dataset> {
        if self.kind != other.kind || self.rank != other.rank {
            return Err(Error::InvalidConfig("datasets differ in kind or rank".into()));
        }
        for key in ["q", "steps", "seed"] {
            if self.meta_value(key) != other.meta_value(key) {
                return Err(Error::InvalidConfig(format!("datasets differ in {key}")));
            }
        }
        if !self.trajectory_ids().is_disjoint(&other.trajectory_ids()) {
            return Err(Error::InvalidConfig("trajectory ranges overlap".into()));
        }
        let records = match (&self.records, &other.records) {
            (Records::Walk(a), Records::Walk(b)) => {
                let mut v: Vec<WalkRecord> = a.iter().chain(b).cloned().collect();
                v.sort_by_key(|r| (r.traj, r.n));
                Records::Walk(v)
            }
            (Records::Reduced(a), Records::Reduced(b)) => {
                let mut v: Vec<ReducedRecord> = a.iter().chain(b).cloned().collect();
                v.sort_by_key(|r| (r.traj, r.n));
                Records::Reduced(v)
            }
            _ => unreachable!("kinds checked above"),
        };
        let mut merged = Dataset { kind: self.kind, rank: self.rank, meta: self.meta.clone(), records };
        let ids = merged.trajectory_ids();
        merged.set_meta("trajectories", ids.len().to_string());
        merged.set_meta("first_traj", ids.first().copied().unwrap_or(0).to_string());
        Ok(merged)
    }

    fn header(&self) -> Vec<String> {
        let mut cols = vec!["traj".to_string(), "n".to_string()];
        match self.kind {
            WalkKind::Reduced => {
                cols.extend(["xbar", "y", "hits", "z_up", "z_zero", "z_down"].map(String::from));
            }
            _ => {
                cols.extend((1..=self.rank).map(|i| format!("h_{i}")));
                cols.extend((1..=self.rank).map(|i| format!("lam_{i}")));
            }
        }
        cols
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_MAGIC}")?;
        writeln!(out, "# kind={}", self.kind)?;
        writeln!(out, "# rank={}", self.rank)?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(self.header()).map_err(io)?;
        match &self.records {
            Records::Walk(rs) => {
                for r in rs {
                    let mut row = vec![r.traj.to_string(), r.n.to_string()];
                    row.extend(r.h.iter().map(Rational::to_string));
                    row.extend(r.lam.iter().map(Rational::to_string));
                    w.write_record(&row).map_err(io)?;
                }
            }
            Records::Reduced(rs) => {
                for r in rs {
                    let row = [
                        r.traj.to_string(),
                        r.n.to_string(),
                        r.xbar.to_string(),
                        r.y.to_string(),
                        r.hits.to_string(),
                        r.z_up.to_string(),
                        r.z_zero.to_string(),
                        r.z_down.to_string(),
                    ];
                    w.write_record(&row).map_err(io)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf8")
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Dataset> {
        let mut lines = input.lines();
        let first = lines.next().transpose()?.unwrap_or_default();
        if first.trim() != CSV_MAGIC {
            return Err(Error::Parse(format!("missing {CSV_MAGIC:?} header")));
        }
        let mut meta = Vec::new();
        let mut body = String::new();
        for line in lines {
            let line = line?;
            if body.is_empty() {
                if let Some(rest) = line.strip_prefix('#') {
                    let (k, v) = rest
                        .trim()
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("bad header line {line:?}")))?;
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                    continue;
                }
            }
            body.push_str(&line);
            body.push('\n');
        }
        let take = |meta: &mut Vec<(String, String)>, key: &str| -> Result<String> {
            let pos = meta
                .iter()
                .position(|(k, _)| k == key)
                .ok_or_else(|| Error::Parse(format!("header lacks {key}")))?;
            Ok(meta.remove(pos).1)
        };
        let kind: WalkKind = take(&mut meta, "kind")?.parse()?;
        let rank: usize = take(&mut meta, "rank")?.parse().map_err(|_| Error::Parse("bad rank".into()))?;
        let mut ds = Dataset {
            kind,
            rank,
            meta,
            records: if kind == WalkKind::Reduced { Records::Reduced(Vec::new()) } else { Records::Walk(Vec::new()) },
        };
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let header: Vec<String> =
            reader.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(String::from).collect();
        if header != ds.header() {
            return Err(Error::Parse(format!("unexpected columns {header:?}")));
        }
        let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
        let uint = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad count {s:?}")));
        let rat = |s: &str| parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}")));
        for row in reader.records() {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            let f: Vec<&str> = row.iter().collect();
            match &mut ds.records {
                Records::Walk(v) => v.push(WalkRecord {
                    traj: uint(f[0])?,
                    n: uint(f[1])?,
                    h: f[2..2 + rank].iter().map(|s| rat(s)).collect::<Result<_>>()?,
                    lam: f[2 + rank..2 + 2 * rank].iter().map(|s| rat(s)).collect::<Result<_>>()?,
                }),
                Records::Reduced(v) => v.push(ReducedRecord {
                    traj: uint(f[0])?,
                    n: uint(f[1])?,
                    xbar: int(f[2])?,
                    y: int(f[3])?,
                    hits: uint(f[4])?,
                    z_up: uint(f[5])?,
                    z_zero: uint(f[6])?,
                    z_down: uint(f[7])?,
                }),
            }
        }
        Ok(ds)
    }
}
