//! Words in the free group over indexed generators.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type GenId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GenId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: GenId) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    pub fn inv_gen(g: GenId) -> Self {
        Word(vec![Letter::new(g, true)])
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed 1-based generator indices: `3` is generator 2,
    /// `-3` its inverse.
    pub fn from_signed(signed: &[i64]) -> Self {
        Word(
            signed
                .iter()
                .map(|&s| {
                    assert!(s != 0, "signed generator index must be nonzero");
                    Letter::new(s.unsigned_abs() as usize - 1, s < 0)
                })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, n: u32) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() * n as usize);
        for _ in 0..n {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn reduced(&self) -> Word {
        free_reduce(self)
    }

    /// Replaces generator `i` by `images[i]` throughout.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.gen];
            if l.inverse {
                out.extend(img.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&img.0);
            }
        }
        Word(out)
    }

    /// Exponent-sum vector over `rank` generators.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.gen] += l.exponent();
        }
        v
    }

    pub fn max_gen(&self) -> Option<GenId> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// All cyclic rotations, starting with the word itself.
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.0.len();
        (0..n.max(1))
            .map(|i| {
                let mut v = self.0[i.min(n)..].to_vec();
                v.extend_from_slice(&self.0[..i.min(n)]);
                Word(v)
            })
            .collect()
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

/// Cancels adjacent `g g⁻¹` and `g⁻¹ g` pairs.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for l in self.word.letters() {
            match self.names.get(l.gen) {
                Some(name) => write!(f, "{}", name.as_ref())?,
                None => write!(f, "g{}", l.gen)?,
            }
            if l.inverse {
                write!(f, "\u{207b}\u{b9}")?;
            }
        }
        Ok(())
    }
}

/// Unicode subscript rendering of a positive integer.
pub fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}
