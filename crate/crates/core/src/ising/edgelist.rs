//! Plain-text edge lists: a header line `n m` followed by `m` lines `i k w`.
//! Blank lines and lines starting with `#` are ignored.

use std::io::{BufRead, Write};

use super::CouplingMatrix;
use crate::error::{Error, Result};

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<CouplingMatrix> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(no, l)| l.map(|l| (no + 1, l)))
        .filter(|r| !matches!(r, Ok((_, l)) if l.trim().is_empty() || l.trim_start().starts_with('#')));

    let (no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields.as_slice() else {
        return Err(Error::Parse(format!("line {no}: expected header `n m`")));
    };
    let n: usize = parse(n, no)?;
    let m: usize = parse(m, no)?;

    let mut j = CouplingMatrix::zeros(n);
    let mut seen = 0usize;
    for line in lines {
        let (no, line) = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, k, w] = fields.as_slice() else {
            return Err(Error::Parse(format!("line {no}: expected `i k w`")));
        };
        let (i, k): (usize, usize) = (parse(i, no)?, parse(k, no)?);
        let w: f64 = parse(w, no)?;
        if i == k {
            return Err(Error::Parse(format!("line {no}: self-coupling on spin {i}")));
        }
        if i >= n || k >= n {
            return Err(Error::Parse(format!("line {no}: spin index out of range for n = {n}")));
        }
        let existing = j.get(i, k);
        if existing != 0.0 && existing != w {
            return Err(Error::Parse(format!(
                "line {no}: coupling ({i},{k}) = {w} conflicts with earlier value {existing}"
            )));
        }
        j.set_edge(i, k, w)
            .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse(format!("header announces {m} edges, found {seen}")));
    }
    Ok(j)
}

pub fn write_edge_list<W: Write>(j: &CouplingMatrix, mut out: W) -> Result<()> {
    let edges = j.edges();
    writeln!(out, "{} {}", j.n(), edges.len())?;
    for (i, k, w) in edges {
        writeln!(out, "{i} {k} {w}")?;
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse `{s}`")))
}
