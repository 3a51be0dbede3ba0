use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word over the alphabet `{1..d}`.
///
/// Letters are stored left to right as they are written: the word
/// `j_n ... j_2 j_1` has `j_n` at index 0 and `j_1` last. Creation operators
/// prepend, right annihilation strips the last letter.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(i: u8) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// `j_k` in the right-to-left numbering, `k` in `1..=len`.
    pub fn from_right(&self, k: usize) -> u8 {
        self.0[self.0.len() - k]
    }

    pub fn prepend(&self, i: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn append(&self, i: u8) -> Word {
        let mut v = self.0.clone();
        v.push(i);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The word with the letter at index `p` removed.
    pub fn without(&self, p: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(p);
        Word(v)
    }

    pub fn split_first(&self) -> Option<(u8, Word)> {
        self.0
            .split_first()
            .map(|(a, rest)| (*a, Word(rest.to_vec())))
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// Sorted letter counts; words sharing a multiset span one Gram block.
    pub fn content(&self, d: usize) -> Vec<u8> {
        let mut c = vec![0u8; d];
        for &a in &self.0 {
            c[a as usize - 1] += 1;
        }
        c
    }

    pub fn check(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a == 0 || a as usize > d) {
            Some(&a) => Err(Error::LetterOutOfRange {
                letter: a as usize,
                d,
            }),
            None => Ok(()),
        }
    }

    /// All `d^n` words of length `n`, in lexicographic order.
    pub fn all(d: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| (1..=d as u8).map(move |a| w.append(a)))
                .collect();
        }
        out
    }

    /// All words of length at most `n`.
    pub fn all_up_to(d: usize, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| Word::all(d, k)).collect()
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Word {
    fn from(v: [u8; N]) -> Self {
        Word(v.to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let sep = if self.0.iter().any(|&a| a > 9) { "," } else { "" };
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_length_then_lex() {
        let mut ws = vec![Word::from([2, 1]), Word::from([1]), Word::empty(), Word::from([1, 2])];
        ws.sort();
        assert_eq!(
            ws,
            vec![Word::empty(), Word::from([1]), Word::from([1, 2]), Word::from([2, 1])]
        );
    }

    #[test]
    fn right_numbering() {
        let w = Word::from([3, 2, 1]);
        assert_eq!(w.from_right(1), 1);
        assert_eq!(w.from_right(3), 3);
        assert_eq!(w.prepend(4), Word::from([4, 3, 2, 1]));
        assert_eq!(w.without(0), Word::from([2, 1]));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(Word::all(2, 3).len(), 8);
        assert_eq!(Word::all_up_to(2, 3).len(), 15);
        assert_eq!(Word::all(3, 0), vec![Word::empty()]);
    }

    #[test]
    fn letter_range() {
        assert!(Word::from([1, 2]).check(2).is_ok());
        assert!(Word::from([1, 3]).check(2).is_err());
        assert!(Word::from([0]).check(2).is_err());
    }
}
