//! Text renderings and argument parsers shared by the subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use weylwalk::coxeter::RootSystem;
use weylwalk::scalar::parse_rational;
use weylwalk::{Error, QVector, Result};

/// Parses a coweight given as `w1`, `2w1+w2`, `0`, or a coordinate list
/// `1,0` / `(1,0)`.
pub fn parse_coweight(s: &str, rank: usize) -> Result<QVector> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot read coweight {s:?}"));
    if s == "0" {
        return Ok(QVector::zero(rank));
    }
    if !s.contains('w') {
        let inner = s.trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split(',')
            .map(|t| parse_rational(t).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: coords.len() });
        }
        return Ok(QVector::new(coords));
    }
    let mut acc = QVector::zero(rank);
    for term in s.split('+') {
        let (coef, idx) = term.trim().split_once('w').ok_or_else(bad)?;
        let coef = match coef.trim().trim_end_matches('*') {
            "" => 1,
            c => c.parse::<i64>().map_err(|_| bad())?,
        };
        let i: usize = idx.trim().parse().map_err(|_| bad())?;
        if i == 0 || i > rank {
            return Err(Error::Domain(format!("w{i} outside w1..w{rank}")));
        }
        let mut coords = acc.into_coords();
        coords[i - 1] += coef;
        acc = QVector::new(coords);
    }
    Ok(acc)
}

pub fn join_coords(v: &[impl ToString]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Linear combination such as `e1 - e2` or `(1/2)e1 + (1/2)e2`.
fn combination(coeffs: &[String], basis: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        let term = match mag {
            "1" => basis(i),
            m if m.contains('/') => format!("({m}){}", basis(i)),
            m => format!("{m}{}", basis(i)),
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn root_combination(root: &[i64]) -> String {
    let strs: Vec<String> = root.iter().map(i64::to_string).collect();
    combination(&strs, |i| format!("alpha_{}", i + 1))
}

/// Two-column table of the root datum in the ambient basis `e1, e2, ...`.
pub fn root_system_table(rs: &RootSystem) -> String {
    let s = rs.summary();
    let e = |i: usize| format!("e{}", i + 1);
    let mut rows: Vec<(String, String)> = vec![
        ("type".into(), format!("{}{}", s.kind, s.rank)),
        ("weyl_order".into(), s.weyl_order.to_string()),
        ("longest".into(), s.longest_element.clone()),
        ("special".into(), join_coords(&s.special_types)),
    ];
    for (i, row) in s.cartan_matrix.iter().enumerate() {
        rows.push((format!("cartan_{}", i + 1), row.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")));
    }
    for (i, v) in s.simple_roots.iter().enumerate() {
        rows.push((format!("alpha_{}", i + 1), combination(v, e)));
    }
    for (i, v) in s.simple_coroots.iter().enumerate() {
        rows.push((format!("coroot_{}", i + 1), combination(v, e)));
    }
    for (i, v) in s.fundamental_coweights.iter().enumerate() {
        rows.push((format!("omega_{}", i + 1), combination(v, e)));
    }
    rows.push(("highest_root".into(), root_combination(&s.highest_root)));
    rows.push((
        "positive_roots".into(),
        s.positive_roots.iter().map(|r| root_combination(r)).collect::<Vec<_>>().join("; "),
    ));
    let mut out = String::from("# weylwalk-rootsys v1\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<15} {v}");
    }
    out
}

/// Offsets sorted by coordinate sum, then lexicographically.
pub fn sorted_offsets(hist: &BTreeMap<Vec<i64>, u64>) -> Vec<(&Vec<i64>, u64)> {
    let mut rows: Vec<(&Vec<i64>, u64)> = hist.iter().map(|(k, &c)| (k, c)).collect();
    rows.sort_by_key(|(k, _)| (k.iter().sum::<i64>(), (*k).clone()));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use weylwalk::coxeter::RootKind;

    #[test]
    fn coweight_forms() {
        let v = |c: &[i64]| QVector::from_ints(c);
        assert_eq!(parse_coweight("w1", 2).unwrap(), v(&[1, 0]));
        assert_eq!(parse_coweight("2w1+w2", 2).unwrap(), v(&[2, 1]));
        assert_eq!(parse_coweight("0", 3).unwrap(), v(&[0, 0, 0]));
        assert_eq!(parse_coweight("(1,-1)", 2).unwrap(), v(&[1, -1]));
        assert!(parse_coweight("w3", 2).is_err());
        assert!(parse_coweight("1,0,0", 2).is_err());
        assert!(parse_coweight("wx", 2).is_err());
    }

    #[test]
    fn combinations_read_naturally() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let e = |i: usize| format!("e{}", i + 1);
        assert_eq!(combination(&s(&["1", "-1"]), e), "e1 - e2");
        assert_eq!(combination(&s(&["0", "2"]), e), "2e2");
        assert_eq!(combination(&s(&["1/2", "1/2"]), e), "(1/2)e1 + (1/2)e2");
        assert_eq!(combination(&s(&["-1", "0"]), e), "-e1");
        assert_eq!(combination(&s(&["0", "0"]), e), "0");
    }

    #[test]
    fn c2_table_rows() {
        let t = root_system_table(&RootSystem::new(RootKind::C, 2).unwrap());
        for line in [
            "alpha_1         e1 - e2",
            "alpha_2         2e2",
            "coroot_2        e2",
            "omega_1         e1",
            "omega_2         (1/2)e1 + (1/2)e2",
            "highest_root    2alpha_1 + alpha_2",
        ] {
            assert!(t.lines().any(|l| l == line), "{line:?} missing from\n{t}");
        }
    }
}
