//! The normalized dual system `D_i`, the conjugate variables `xi_i = D_i^* e_0`
//! and partial sums of the free Fisher information.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::bounds::{series_tail, SeriesId, TailReport};
use crate::combinat::{self, DrawnPartition, Family};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::qscalar::{Coeff, Deformation};
use crate::residual::Residual;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// `D_i e_{jw} = A_j D_i e_w + delta_{ij} P_0 e_w - D_i l_j e_w`, memoized.
    Recursive,
    /// Signed, crossing-weighted sum over `B(n+1)`.
    PartitionFormula,
}

/// `D_i` on a fixed Fock space.
pub struct DualOperator<'a, C> {
    space: &'a FockSpace<C>,
    i: u8,
    strategy: Strategy,
    memo: RwLock<HashMap<Word, FockVector<C>>>,
}

impl<'a, C: Coeff> DualOperator<'a, C> {
    pub fn new(space: &'a FockSpace<C>, i: u8, strategy: Strategy) -> Result<Self> {
        if i == 0 || i as usize > space.d() {
            return Err(Error::LetterOutOfRange {
                letter: i as usize,
                d: space.d(),
            });
        }
        Ok(DualOperator {
            space,
            i,
            strategy,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn index(&self) -> u8 {
        self.i
    }

    pub fn apply(&self, v: &FockVector<C>) -> Result<FockVector<C>> {
        let mut out = FockVector::zero();
        for (w, c) in v.iter() {
            out.add_scaled(c, &self.apply_word(w)?);
        }
        Ok(out)
    }

    /// `D_i e_w`.
    pub fn apply_word(&self, w: &Word) -> Result<FockVector<C>> {
        w.check(self.space.d())?;
        match self.strategy {
            Strategy::Recursive => self.recursive(w),
            Strategy::PartitionFormula => Ok(partition_formula(self.space.deformation(), self.i, w)),
        }
    }

    fn recursive(&self, w: &Word) -> Result<FockVector<C>> {
        if let Some(v) = self.memo.read().expect("memo poisoned").get(w) {
            return Ok(v.clone());
        }
        let Some((j, rest)) = w.split_first() else {
            return Ok(FockVector::zero());
        };
        let mut out = self.space.gaussian(j, &self.recursive(&rest)?)?;
        if j == self.i && rest.is_empty() {
            out.add_term(Word::empty(), C::one());
        }
        let lj = self.space.annihilate(j, &FockVector::basis(rest))?;
        for (u, c) in lj.iter() {
            out.add_scaled(&-c.clone(), &self.recursive(u)?);
        }
        self.memo
            .write()
            .expect("memo poisoned")
            .insert(w.clone(), out.clone());
        Ok(out)
    }
}

/// Product of `q_ab` over the crossings of a drawing, `letter(v)` giving the
/// letter on vertex `v`.
pub(crate) fn crossing_weight<C: Coeff, F: Fn(usize) -> u8>(
    deformation: &Deformation<C>,
    p: &DrawnPartition,
    letter: F,
    skip: impl Fn(usize, usize) -> bool,
) -> C {
    deformation.weight(
        p.crossing_blocks()
            .iter()
            .filter(|(a, b)| !skip(*a, *b))
            .map(|&(a, b)| (letter(a), letter(b))),
    )
}

/// `D_i e_w` as `sum over B(n+1)` of `(-1)^{pi(0)-1} q^{cross} delta_p e_{s}`.
pub fn partition_formula<C: Coeff>(deformation: &Deformation<C>, i: u8, w: &Word) -> FockVector<C> {
    let n = w.len();
    let letter = |v: usize| if v == 0 { i } else { w.from_right(v) };
    let mut out = FockVector::zero();
    for p in combinat::cached(Family::B, n + 1).iter() {
        if !p.pairs_match(letter) {
            continue;
        }
        let k = p.partner0.expect("B partitions pair 0");
        let mut c = crossing_weight(deformation, p, letter, |_, _| false);
        if k % 2 == 0 {
            c = -c;
        }
        out.add_term(DrawnPartition::word_of(&p.singletons, letter), c);
    }
    out
}

pub fn dual_recursive<C: Coeff>(space: &FockSpace<C>, i: u8, v: &FockVector<C>) -> Result<FockVector<C>> {
    DualOperator::new(space, i, Strategy::Recursive)?.apply(v)
}

pub fn dual_partition<C: Coeff>(space: &FockSpace<C>, i: u8, w: &Word) -> Result<FockVector<C>> {
    w.check(space.d())?;
    if i == 0 || i as usize > space.d() {
        return Err(Error::LetterOutOfRange {
            letter: i as usize,
            d: space.d(),
        });
    }
    Ok(partition_formula(space.deformation(), i, w))
}

/// Largest coefficient of `(D_i A_j - A_j D_i - delta_{ij} P_0) e_w` over all
/// words with `|w| <= level_limit`.
pub fn commutator_residual<C: Coeff>(
    space: &FockSpace<C>,
    i: u8,
    j: u8,
    level_limit: usize,
    strategy: Strategy,
) -> Result<Residual> {
    if level_limit >= space.level() {
        return Err(Error::InvalidArgument(format!(
            "level limit {level_limit} needs a space truncated above it (level {})",
            space.level()
        )));
    }
    let dual = DualOperator::new(space, i, strategy)?;
    let mut res = Residual::zero();
    for w in Word::all_up_to(space.d(), level_limit) {
        let ew = FockVector::basis(w.clone());
        let mut r = dual.apply(&space.gaussian(j, &ew)?)?;
        r = r.sub(&space.gaussian(j, &dual.apply(&ew)?)?);
        if i == j && w.is_empty() {
            r.add_term(Word::empty(), -C::one());
        }
        res.record(r.max_magnitude().0, &w);
    }
    Ok(res)
}

/// `q(w)` for the conjugate series: the product of `q_ab` over all unordered
/// pairs of letters in `i w`. For scalar `q` this is `q^{m(m+1)/2}`.
fn series_weight<C: Coeff>(deformation: &Deformation<C>, i: u8, w: &Word) -> C {
    let letters: Vec<u8> = std::iter::once(i).chain(w.letters().iter().copied()).collect();
    let mut pairs = Vec::new();
    for k in 1..letters.len() {
        for l in 0..k {
            pairs.push((letters[k], letters[l]));
        }
    }
    deformation.weight(pairs)
}

/// `sum_{|w| <= M} (-1)^{|w|} q(w) r_{iw}^* e_w`, where
/// `r_{iw}^* = r_{w_m}^* ... r_{w_1}^* r_i^*`.
pub fn conjugate_series<C: Coeff>(space: &FockSpace<C>, i: u8, m: usize) -> Result<FockVector<C>> {
    if 2 * m + 1 > space.level() {
        return Err(Error::TruncationOverflow {
            level: 2 * m + 1,
            max: space.level(),
        });
    }
    let mut out = FockVector::zero();
    for len in 0..=m {
        for w in Word::all(space.d(), len) {
            let mut c = series_weight(space.deformation(), i, &w);
            if c.is_zero() {
                continue;
            }
            if len % 2 == 1 {
                c = -c;
            }
            let mut v = space.right_annihilate_adjoint(i, &FockVector::basis(w.clone()))?;
            for &a in w.letters() {
                v = space.right_annihilate_adjoint(a, &v)?;
            }
            out.add_scaled(&c, &v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FisherReport<C> {
    /// `sum_i <xi_i, xi_i>_q` for the truncated series.
    pub value: C,
    pub per_index: Vec<C>,
    /// Bound on the dropped part; `None` while `q` is formal.
    pub tail: Option<TailReport>,
}

pub fn fisher_info<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<FisherReport<C>> {
    let mut per_index = Vec::with_capacity(space.d());
    for i in 1..=space.d() as u8 {
        let xi = conjugate_series(space, i, m)?;
        per_index.push(space.norm_sq(&xi)?);
    }
    let value = per_index.iter().fold(C::zero(), |acc, x| acc + x);
    let tail = match space.deformation().numeric_radius() {
        Some(r) => Some(series_tail(SeriesId::Fisher, m, r, space.d())?),
        None => None,
    };
    Ok(FisherReport {
        value,
        per_index,
        tail,
    })
}
