//! Freely reduced words over a free basis.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter is `±k` for the k-th generator (1-based); negative means inverse.
pub type Letter = i8;

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

/// Cancels adjacent inverse pairs.
pub fn free_reduce(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        free_reduce(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn mul(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        for &l in &o.0 {
            if v.last() == Some(&-l) {
                v.pop();
            } else {
                v.push(l);
            }
        }
        Word(v)
    }

    pub fn push(&self, l: Letter) -> Word {
        self.mul(&Word::letter(l))
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut r = Word::identity();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Cyclic reduction: strips matching inverse letters from both ends.
    /// Returns the conjugator `c` and core `w'` with `self = c w' c⁻¹`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let v = &self.0;
        let (mut i, mut j) = (0usize, v.len());
        while j >= i + 2 && v[i] == -v[j - 1] {
            i += 1;
            j -= 1;
        }
        (Word(v[..i].to_vec()), Word(v[i..j].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// Cyclic rotation by `k` letters (for cyclically reduced words).
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Shortest `r` with `self = r^k` for a cyclically reduced word.
    pub fn primitive_root(&self) -> (Word, usize) {
        let n = self.0.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[i % p]) {
                return (Word(self.0[..p].to_vec()), n / p);
            }
        }
        (self.clone(), 1)
    }

    /// Canonical key of the unoriented conjugacy class generated by a
    /// cyclically reduced word: the least rotation of the word or its inverse.
    pub fn conjugacy_key(&self) -> Word {
        let (_, core) = self.cyclic_reduce();
        let inv = core.inverse();
        let n = core.len();
        let mut best = core.clone();
        for k in 0..n {
            for c in [core.rotate(k), inv.rotate(k)] {
                if c < best {
                    best = c;
                }
            }
        }
        best
    }

    /// Parses words over `aAbB…` (`1` or the empty string is the identity).
    pub fn parse(s: &str, names: &[char]) -> Result<Word> {
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "id" {
            return Ok(Word::identity());
        }
        let mut out = Vec::new();
        for ch in t.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let lower = ch.to_ascii_lowercase();
            let k = names
                .iter()
                .position(|&n| n == lower)
                .ok_or_else(|| Error::Parse(format!("unknown letter '{ch}' in '{s}'")))?;
            let l = (k + 1) as Letter;
            out.push(if ch.is_ascii_uppercase() { -l } else { l });
        }
        Ok(free_reduce(&out))
    }

    pub fn to_string_with(&self, names: &[char]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&l| {
                let c = names[(l.unsigned_abs() - 1) as usize];
                if l < 0 {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }

    /// Uniformly random reduced word of exact length `len` over `rank` generators.
    pub fn random<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
        let mut v: Vec<Letter> = Vec::with_capacity(len);
        while v.len() < len {
            let k = rng.gen_range(1..=rank) as Letter;
            let l = if rng.gen_bool(0.5) { k } else { -k };
            if v.last() != Some(&-l) {
                v.push(l);
            }
        }
        Word(v)
    }
}

/// Shortlex order: length first, then letters.
pub fn shortlex(x: &Word, y: &Word) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

/// All reduced words of length at most `max_len` over `rank` generators, in shortlex order.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in 1..=rank as Letter {
                for l in [k, -k] {
                    if w.0.last() != Some(&-l) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&DEFAULT_NAMES))
    }
}

pub const DEFAULT_NAMES: [char; 4] = ['a', 'b', 'c', 'd'];
