use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::fock::{FockSpace, FockVector};
use crate::qscalar::Coeff;
use crate::word::Word;

/// `sum_w c_w A^w` with `A^0 = 1`. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct NCPoly<C> {
    terms: BTreeMap<Word, C>,
}

fn insert_add<K: Ord, C: Coeff>(map: &mut BTreeMap<K, C>, k: K, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
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

impl<C: Coeff> Default for NCPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> NCPoly<C> {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty())
    }

    pub fn monomial(w: Word) -> Self {
        Self::term(w, C::one())
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        insert_add(&mut self.terms, w, c);
    }

    pub fn add_scaled(&mut self, c: &C, other: &NCPoly<C>) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.clone() * c);
        }
    }

    pub fn add(&self, other: &NCPoly<C>) -> NCPoly<C> {
        let mut out = self.clone();
        out.add_scaled(&C::one(), other);
        out
    }

    pub fn sub(&self, other: &NCPoly<C>) -> NCPoly<C> {
        let mut out = self.clone();
        out.add_scaled(&-C::one(), other);
        out
    }

    pub fn scale(&self, c: &C) -> NCPoly<C> {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    /// Product in the free algebra: monomials concatenate.
    pub fn mul(&self, other: &NCPoly<C>) -> NCPoly<C> {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.clone() * b);
            }
        }
        out
    }

    /// `A_a * self`.
    pub fn left_mul_letter(&self, a: u8) -> NCPoly<C> {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.prepend(a), c.clone())).collect(),
        }
    }

    pub fn get(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Homogeneous part of degree `k`.
    pub fn homogeneous(&self, k: usize) -> NCPoly<C> {
        self.filter(|w| w.len() == k)
    }

    /// Terms of degree at most `k`.
    pub fn truncate(&self, k: usize) -> NCPoly<C> {
        self.filter(|w| w.len() <= k)
    }

    fn filter<F: Fn(&Word) -> bool>(&self, keep: F) -> NCPoly<C> {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_magnitude(&self) -> (f64, Option<Word>) {
        self.terms
            .iter()
            .fold((0.0, None), |acc, (w, c)| {
                let m = c.magnitude();
                if m > acc.0 {
                    (m, Some(w.clone()))
                } else {
                    acc
                }
            })
    }

    /// `p(A) v`.
    pub fn apply(&self, space: &FockSpace<C>, v: &FockVector<C>) -> Result<FockVector<C>> {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            out.add_scaled(c, &space.apply_monomial(w, v)?);
        }
        Ok(out)
    }

    /// The vector `p(A) e_0`.
    pub fn to_vector(&self, space: &FockSpace<C>) -> Result<FockVector<C>> {
        self.apply(space, &FockVector::vacuum())
    }

    pub fn map<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> NCPoly<D> {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    /// `{terms: [{word, coeff}]}` with coefficients rendered as text.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term<'a> {
            word: &'a Word,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(w, c)| Term {
                word: w,
                coeff: c.to_string(),
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

impl<C: Coeff> fmt::Display for NCPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) A^{w}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for NCPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum c_{u,v} A^u (x) A^v`.
#[derive(Clone, PartialEq)]
pub struct NCTensorPoly<C> {
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coeff> Default for NCTensorPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> NCTensorPoly<C> {
    pub fn zero() -> Self {
        NCTensorPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: C) {
        insert_add(&mut self.terms, (u, v), c);
    }

    /// `self += c * (a (x) b)`.
    pub fn add_tensor(&mut self, c: &C, a: &NCPoly<C>, b: &NCPoly<C>) {
        for (u, x) in a.iter() {
            for (v, y) in b.iter() {
                self.add_term(u.clone(), v.clone(), x.clone() * y * c);
            }
        }
    }

    pub fn get(&self, u: &Word, v: &Word) -> C {
        self.terms
            .get(&(u.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &NCTensorPoly<C>) -> NCTensorPoly<C> {
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), -c.clone());
        }
        out
    }

    /// `a (x) b -> b (x) a`.
    pub fn flip(&self) -> NCTensorPoly<C> {
        NCTensorPoly {
            terms: self
                .terms
                .iter()
                .map(|((u, v), c)| ((v.clone(), u.clone()), c.clone()))
                .collect(),
        }
    }

    /// `a (x) b -> b a`.
    pub fn m_flip(&self) -> NCPoly<C> {
        NCPoly::from_terms(self.terms.iter().map(|((u, v), c)| (v.concat(u), c.clone())))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Coeff::magnitude).fold(0.0, f64::max)
    }
}

impl<C: Coeff> fmt::Display for NCTensorPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((u, v), c)| format!("({c}) A^{u} (x) A^{v}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for NCTensorPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
