use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::qscalar::Coeff;
use crate::word::Word;

/// Finitely supported vector `sum_w c_w e_w`. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct FockVector<C> {
    coeffs: BTreeMap<Word, C>,
}

impl<C: Coeff> Default for FockVector<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> FockVector<C> {
    pub fn zero() -> Self {
        FockVector {
            coeffs: BTreeMap::new(),
        }
    }

    /// The vacuum `e_0`.
    pub fn vacuum() -> Self {
        Self::basis(Word::empty())
    }

    pub fn basis(w: Word) -> Self {
        Self::term(w, C::one())
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut v = Self::zero();
        v.add_term(w, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &C, other: &FockVector<C>) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.coeffs {
            self.add_term(w.clone(), x.clone() * c);
        }
    }

    pub fn add(&self, other: &FockVector<C>) -> FockVector<C> {
        let mut out = self.clone();
        out.add_scaled(&C::one(), other);
        out
    }

    pub fn sub(&self, other: &FockVector<C>) -> FockVector<C> {
        let mut out = self.clone();
        out.add_scaled(&-C::one(), other);
        out
    }

    pub fn scale(&self, c: &C) -> FockVector<C> {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn get(&self, w: &Word) -> C {
        self.coeffs.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest level carrying a nonzero coefficient.
    pub fn max_level(&self) -> Option<usize> {
        self.coeffs.keys().map(Word::len).max()
    }

    /// Component in the `n`-particle space.
    pub fn level(&self, n: usize) -> FockVector<C> {
        FockVector {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest coefficient magnitude, and the word where it occurs.
    pub fn max_magnitude(&self) -> (f64, Option<Word>) {
        self.coeffs
            .iter()
            .map(|(w, c)| (c.magnitude(), w))
            .fold((0.0, None), |acc, (m, w)| {
                if m > acc.0 {
                    (m, Some(w.clone()))
                } else {
                    acc
                }
            })
    }

    pub fn map<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> FockVector<D> {
        FockVector::from_terms(self.coeffs.iter().map(|(w, c)| (w.clone(), f(c))))
    }
}

impl<C: Coeff> fmt::Display for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(w, c)| format!("({c}) e_{w}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
