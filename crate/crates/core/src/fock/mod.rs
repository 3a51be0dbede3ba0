//! The truncated `q_ij`-deformed Fock space and its operators.

mod gram;
mod vector;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

pub use gram::{GramBlock, GramMethod, LevelGram, PERMUTATION_SUM_MAX};
pub use vector::FockVector;

use crate::error::{Error, Result};
use crate::qscalar::{Coeff, Deformation};
use crate::word::Word;

/// The Fock space over `C^d` truncated at particle number `level`.
///
/// Operators are pure; the only interior mutability is the write-once Gram
/// cache, one slot per level.
pub struct FockSpace<C> {
    d: usize,
    deformation: Deformation<C>,
    level: usize,
    method: Option<GramMethod>,
    grams: Vec<OnceLock<Arc<LevelGram<C>>>>,
}

impl<C: Coeff> FockSpace<C> {
    pub fn new(d: usize, deformation: Deformation<C>, level: usize) -> Result<Self> {
        if d == 0 || d > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("alphabet size {d} out of range")));
        }
        deformation.check_dimension(d)?;
        Ok(FockSpace {
            d,
            deformation,
            level,
            method: None,
            grams: (0..=level).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn scalar(d: usize, q: C, level: usize) -> Result<Self> {
        Self::new(d, Deformation::Scalar(q), level)
    }

    /// Forces a Gram construction method for every level.
    pub fn with_gram_method(mut self, method: GramMethod) -> Result<Self> {
        if method == GramMethod::PermutationSum && !self.deformation.is_scalar() {
            return Err(Error::InvalidDeformation(
                "the permutation sum needs a scalar q".into(),
            ));
        }
        self.method = Some(method);
        self.grams = (0..=self.level).map(|_| OnceLock::new()).collect();
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn deformation(&self) -> &Deformation<C> {
        &self.deformation
    }

    fn check_letter(&self, i: u8) -> Result<()> {
        if i == 0 || i as usize > self.d {
            return Err(Error::LetterOutOfRange {
                letter: i as usize,
                d: self.d,
            });
        }
        Ok(())
    }

    fn check_levels(&self, v: &FockVector<C>, max: usize) -> Result<()> {
        match v.max_level() {
            Some(n) if n > max => Err(Error::TruncationOverflow {
                level: n + self.level - max,
                max: self.level,
            }),
            _ => Ok(()),
        }
    }

    fn method_for(&self, n: usize) -> GramMethod {
        self.method.unwrap_or(match self.deformation {
            Deformation::Scalar(_) if n <= PERMUTATION_SUM_MAX => GramMethod::PermutationSum,
            _ => GramMethod::Recursive,
        })
    }

    /// Gram data of level `n`, built on first use.
    pub fn gram(&self, n: usize) -> Result<Arc<LevelGram<C>>> {
        if n > self.level {
            return Err(Error::TruncationOverflow {
                level: n,
                max: self.level,
            });
        }
        if let Some(g) = self.grams[n].get() {
            return Ok(Arc::clone(g));
        }
        let method = self.method_for(n);
        let prev = match method {
            GramMethod::Recursive if n > 0 => Some(self.gram(n - 1)?),
            _ => None,
        };
        let built = LevelGram::build(self.d, n, &self.deformation, method, prev.as_deref())?;
        Ok(Arc::clone(self.grams[n].get_or_init(|| Arc::new(built))))
    }

    /// Left annihilation `l_i`.
    pub fn annihilate(&self, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
        self.check_letter(i)?;
        let mut out = FockVector::zero();
        for (w, c) in v.iter() {
            for (p, &a) in w.letters().iter().enumerate() {
                if a == i {
                    let f = gram::annihilation_factor(&self.deformation, i, w, p);
                    out.add_term(w.without(p), f * c);
                }
            }
        }
        Ok(out)
    }

    /// Left creation `l_i^*`; a component at the top level is an overflow error.
    pub fn create(&self, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
        self.check_letter(i)?;
        if self.level == 0 {
            if v.is_zero() {
                return Ok(FockVector::zero());
            }
            return Err(Error::TruncationOverflow { level: 1, max: 0 });
        }
        self.check_levels(v, self.level - 1)?;
        Ok(FockVector::from_terms(
            v.iter().map(|(w, c)| (w.prepend(i), c.clone())),
        ))
    }

    /// The q-Gaussian `A_i = l_i + l_i^*`.
    pub fn gaussian(&self, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
        Ok(self.create(i, v)?.add(&self.annihilate(i, v)?))
    }

    /// `A^w v = A_{w_1} ... A_{w_n} v`, rightmost factor applied first.
    pub fn apply_monomial(&self, w: &Word, v: &FockVector<C>) -> Result<FockVector<C>> {
        let mut cur = v.clone();
        for &a in w.letters().iter().rev() {
            cur = self.gaussian(a, &cur)?;
        }
        Ok(cur)
    }

    /// `<u, v>_q`.
    pub fn inner(&self, u: &FockVector<C>, v: &FockVector<C>) -> Result<C> {
        self.check_levels(u, self.level)?;
        self.check_levels(v, self.level)?;
        let mut by_level: BTreeMap<usize, Vec<(&Word, &C)>> = BTreeMap::new();
        for (w, c) in v.iter() {
            by_level.entry(w.len()).or_default().push((w, c));
        }
        let mut acc = C::zero();
        for (n, vs) in &by_level {
            let g = self.gram(*n)?;
            for (wu, cu) in u.iter().filter(|(w, _)| w.len() == *n) {
                let (bu, iu) = g.locate(wu);
                let row = &g.blocks[bu].matrix[iu];
                for (wv, cv) in vs {
                    let (bv, iv) = g.locate(wv);
                    if bu == bv && !row[iv].is_zero() {
                        acc += &(cu.clone() * &row[iv] * *cv);
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self, v: &FockVector<C>) -> Result<C> {
        self.inner(v, v)
    }

    /// Free right annihilation `r_i e_{wj} = delta_{ij} e_w`.
    pub fn right_annihilate(&self, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
        self.check_letter(i)?;
        Ok(FockVector::from_terms(v.iter().filter_map(|(w, c)| {
            match w.letters().last() {
                Some(&a) if a == i => Some((w.slice(0..w.len() - 1), c.clone())),
                _ => None,
            }
        })))
    }

    /// The adjoint of `r_i` for `<.,.>_q`: on level `n` it solves
    /// `G_{n+1} z = R^T G_n x` blockwise.
    pub fn right_annihilate_adjoint(&self, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
        self.check_letter(i)?;
        if self.level == 0 {
            return if v.is_zero() {
                Ok(FockVector::zero())
            } else {
                Err(Error::TruncationOverflow { level: 1, max: 0 })
            };
        }
        self.check_levels(v, self.level - 1)?;
        let mut out = FockVector::zero();
        let top = v.max_level().unwrap_or(0);
        for n in 0..=top {
            let x = v.level(n);
            if x.is_zero() {
                continue;
            }
            let gn = self.gram(n)?;
            let gn1 = self.gram(n + 1)?;
            // rhs indexed by level-(n+1) block, then position
            let mut rhs: BTreeMap<usize, Vec<C>> = BTreeMap::new();
            let gx = apply_gram(&gn, &x);
            for (w, c) in gx.iter() {
                let (b, k) = gn1.locate(&w.append(i));
                rhs.entry(b)
                    .or_insert_with(|| vec![C::zero(); gn1.blocks[b].words.len()])[k] += c;
            }
            for (b, r) in rhs {
                let block = &gn1.blocks[b];
                let inv = block.inverse().ok_or(Error::SingularGram { level: n + 1 })?;
                for (row, w) in inv.iter().zip(&block.words) {
                    let mut s = C::zero();
                    for (a, y) in row.iter().zip(&r) {
                        if !a.is_zero() && !y.is_zero() {
                            s += &(a.clone() * y);
                        }
                    }
                    out.add_term(w.clone(), s);
                }
            }
        }
        Ok(out)
    }

    /// Vacuum state of the operator whose vector is `v`: its `e_0` coefficient.
    pub fn trace(&self, v: &FockVector<C>) -> C {
        v.get(&Word::empty())
    }
}

/// `G_n x` for `x` supported on level `n`.
fn apply_gram<C: Coeff>(g: &LevelGram<C>, x: &FockVector<C>) -> FockVector<C> {
    let mut out = FockVector::zero();
    for (w, c) in x.iter() {
        let (b, k) = g.locate(w);
        let block = &g.blocks[b];
        for (u, row) in block.words.iter().zip(&block.matrix) {
            if !row[k].is_zero() {
                out.add_term(u.clone(), row[k].clone() * c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{q_factorial, q_int, Scalar};

    fn e(w: &[u8]) -> FockVector<Scalar> {
        FockVector::basis(Word::from(w))
    }

    fn sym(d: usize, level: usize) -> FockSpace<Scalar> {
        FockSpace::scalar(d, Scalar::q(), level).unwrap()
    }

    #[test]
    fn annihilation_examples() {
        let f = sym(2, 4);
        assert_eq!(f.annihilate(1, &e(&[2, 1])).unwrap(), FockVector::term(Word::from([2]), Scalar::q()));
        assert!(f.annihilate(1, &FockVector::vacuum()).unwrap().is_zero());
        let f0 = FockSpace::scalar(2, Scalar::int(0), 4).unwrap();
        assert_eq!(f0.annihilate(1, &e(&[1, 2, 1])).unwrap(), e(&[2, 1]));
    }

    #[test]
    fn creation_and_gaussian() {
        let f = sym(1, 6);
        assert_eq!(f.create(1, &FockVector::vacuum()).unwrap(), e(&[1]));
        assert_eq!(f.gaussian(1, &FockVector::vacuum()).unwrap(), e(&[1]));
        for n in 1..5 {
            let w = vec![1u8; n];
            let mut expect = e(&vec![1u8; n + 1]);
            expect.add_term(Word::new(vec![1u8; n - 1]), q_int(n));
            assert_eq!(f.gaussian(1, &e(&w)).unwrap(), expect);
        }
        let err = f.create(1, &e(&[1; 6])).unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow { .. }));
    }

    #[test]
    fn inner_products() {
        let f = sym(1, 6);
        for n in 0..=6 {
            let v = e(&vec![1u8; n]);
            assert_eq!(f.inner(&v, &v).unwrap(), q_factorial(n));
        }
        let f2 = sym(2, 3);
        assert_eq!(f2.inner(&e(&[1, 2]), &e(&[2, 1])).unwrap(), Scalar::q());
        let f0 = FockSpace::scalar(2, Scalar::int(0), 3).unwrap();
        for u in Word::all_up_to(2, 3) {
            for w in Word::all_up_to(2, 3) {
                let ip = f0.inner(&FockVector::basis(u.clone()), &FockVector::basis(w.clone())).unwrap();
                assert_eq!(ip, Scalar::int((u == w) as i64));
            }
        }
    }

    #[test]
    fn right_annihilation() {
        let f = sym(2, 4);
        assert_eq!(f.right_annihilate(1, &e(&[2, 1])).unwrap(), e(&[2]));
        assert!(f.right_annihilate(2, &e(&[2, 1])).unwrap().is_zero());
        let f1 = sym(1, 6);
        for m in 0..5 {
            let got = f1.right_annihilate_adjoint(1, &e(&vec![1u8; m])).unwrap();
            let expect = FockVector::term(Word::new(vec![1u8; m + 1]), Scalar::int(1).div(&q_int(m + 1)).unwrap());
            assert_eq!(got, expect);
        }
        let f0 = FockSpace::scalar(2, Scalar::int(0), 4).unwrap();
        assert_eq!(f0.right_annihilate_adjoint(2, &e(&[1, 1])).unwrap(), e(&[1, 1, 2]));
    }

    #[test]
    fn traces() {
        let f = sym(1, 4);
        assert_eq!(f.trace(&FockVector::vacuum()), Scalar::int(1));
        let v = f.apply_monomial(&Word::from([1, 1, 1, 1]), &FockVector::vacuum()).unwrap();
        // three pairings of four points, one of them crossing
        assert_eq!(f.trace(&v), Scalar::int(2) + Scalar::q());
        assert_eq!(f.trace(&e(&[1])), Scalar::int(0));
    }
}
