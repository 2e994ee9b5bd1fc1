//! Monoid files:
//!
//! ```text
//! monoid 2 0
//! 0 1
//! 1 0
//! hom a 1
//! hom b 0
//! ```
//!
//! Letters without a `hom` line map to the identity.

use crate::error::{Error, Result};
use crate::model::Vass;
use crate::monoid::{FiniteMonoid, Hom};

fn err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.into(), line, col: 1, msg: msg.into() }
}

fn num(path: &str, line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| err(path, line, format!("expected an index, found {s:?}")))
}

/// Parses a monoid file against the alphabet of `v`.
pub fn parse_monoid(text: &str, path: &str, v: &Vass) -> Result<(FiniteMonoid, Hom)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| err(path, 1, "missing monoid header"))?;
    let (size, identity) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["monoid", s, e] => (num(path, hl, s)?, num(path, hl, e)?),
        _ => return Err(err(path, hl, "expected `monoid SIZE IDENTITY`")),
    };
    let mut table = Vec::with_capacity(size);
    for _ in 0..size {
        let (ln, row) = lines.next().ok_or_else(|| err(path, hl, "multiplication table is short"))?;
        let row: Vec<usize> = row.split_whitespace().map(|s| num(path, ln, s)).collect::<Result<_>>()?;
        if row.len() != size {
            return Err(err(path, ln, format!("row has {} entries, expected {size}", row.len())));
        }
        table.push(row);
    }
    let monoid = FiniteMonoid::new(table, identity).map_err(|e| err(path, hl, e.to_string()))?;
    let mut images = vec![monoid.identity(); v.alphabet.len()];
    for (ln, l) in lines {
        match l.split_whitespace().collect::<Vec<_>>()[..] {
            ["hom", a, x] => {
                let s = v.symbol(a).ok_or_else(|| err(path, ln, format!("unknown letter {a:?}")))?;
                images[s] = num(path, ln, x)?;
            }
            _ => return Err(err(path, ln, "expected `hom LETTER INDEX`")),
        }
    }
    let hom = Hom::new(&monoid, images).map_err(|e| err(path, hl, e.to_string()))?;
    Ok((monoid, hom))
}
