use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored in both directions.
///
/// `new_of(old)` gives the position an original index moves to;
/// `old_of(new)` is the inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            perm: (0..n).collect(),
            inv: (0..n).collect(),
        }
    }

    /// From an old-to-new map.
    pub fn from_old_to_new(perm: Vec<usize>) -> Result<Self> {
        let inv = invert(&perm)?;
        Ok(Permutation { perm, inv })
    }

    /// From a new-to-old map, i.e. the list of original indices in their new
    /// order.
    pub fn from_new_to_old(inv: Vec<usize>) -> Result<Self> {
        let perm = invert(&inv)?;
        Ok(Permutation { perm, inv })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    #[inline]
    pub fn new_of(&self, old: usize) -> usize {
        self.perm[old]
    }

    #[inline]
    pub fn old_of(&self, new: usize) -> usize {
        self.inv[new]
    }

    pub fn old_to_new(&self) -> &[usize] {
        &self.perm
    }

    pub fn new_to_old(&self) -> &[usize] {
        &self.inv
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            perm: self.inv.clone(),
            inv: self.perm.clone(),
        }
    }

    /// The permutation that applies `self` first and `then` second.
    pub fn then(&self, then: &Permutation) -> Permutation {
        assert_eq!(self.len(), then.len(), "composing permutations of different sizes");
        let perm: Vec<usize> = self.perm.iter().map(|&p| then.perm[p]).collect();
        let inv: Vec<usize> = then.inv.iter().map(|&p| self.inv[p]).collect();
        Permutation { perm, inv }
    }

    /// Reads a permutation file: one 1-based integer per line, line `i` holding
    /// the new position of original index `i`. Blank lines and `%`/`#`
    /// comments are ignored.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut perm = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
                continue;
            }
            let v: usize = t.parse().map_err(|_| Error::MalformedEntry {
                line: lineno + 1,
                reason: format!("expected a positive integer, found {t:?}"),
            })?;
            if v == 0 {
                return Err(Error::InvalidPermutation(format!(
                    "line {}: positions are 1-based",
                    lineno + 1
                )));
            }
            perm.push(v - 1);
        }
        Self::from_old_to_new(perm)
    }

    pub fn write(&self, mut out: impl Write) -> Result<()> {
        for &p in &self.perm {
            writeln!(out, "{}", p + 1)?;
        }
        Ok(())
    }
}

fn invert(map: &[usize]) -> Result<Vec<usize>> {
    let n = map.len();
    let mut inv = vec![usize::MAX; n];
    for (i, &p) in map.iter().enumerate() {
        if p >= n {
            return Err(Error::InvalidPermutation(format!(
                "entry {} maps to {}, outside 1..={n}",
                i + 1,
                p + 1
            )));
        }
        if inv[p] != usize::MAX {
            return Err(Error::InvalidPermutation(format!(
                "position {} is the image of both {} and {}",
                p + 1,
                inv[p] + 1,
                i + 1
            )));
        }
        inv[p] = i;
    }
    Ok(inv)
}
