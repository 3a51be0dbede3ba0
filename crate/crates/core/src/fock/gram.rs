//! Per-level Gram data. The Gram operator only couples words with the same
//! letter multiset, so each level is stored as a list of dense blocks.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qscalar::{Coeff, Deformation};
use crate::word::Word;

/// How the Gram matrix of a level is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramMethod {
    /// `sum over S_n of q^{inv}` over permutations carrying one word to the other.
    /// Scalar deformations only.
    PermutationSum,
    /// `<e_{iu}, e_w> = <e_u, l_i e_w>`, valid for every deformation.
    Recursive,
}

/// Largest level for which the permutation sum is the default.
pub const PERMUTATION_SUM_MAX: usize = 8;

pub struct GramBlock<C> {
    pub words: Vec<Word>,
    pub matrix: Vec<Vec<C>>,
    inverse: OnceLock<Option<Vec<Vec<C>>>>,
}

impl<C: Coeff> GramBlock<C> {
    fn new(words: Vec<Word>, matrix: Vec<Vec<C>>) -> Self {
        GramBlock {
            words,
            matrix,
            inverse: OnceLock::new(),
        }
    }

    /// Exact (or pivoted floating) inverse, computed once.
    pub fn inverse(&self) -> Option<&Vec<Vec<C>>> {
        self.inverse.get_or_init(|| invert(&self.matrix)).as_ref()
    }
}

/// Gram matrix of one level, blocked by letter content.
pub struct LevelGram<C> {
    pub n: usize,
    pub blocks: Vec<GramBlock<C>>,
    index: HashMap<Word, (usize, usize)>,
}

impl<C: Coeff> LevelGram<C> {
    /// Block and position of a word of this level.
    pub fn locate(&self, w: &Word) -> (usize, usize) {
        self.index[w]
    }

    pub fn entry(&self, u: &Word, w: &Word) -> C {
        let (bu, iu) = self.locate(u);
        let (bw, iw) = self.locate(w);
        if bu != bw {
            return C::zero();
        }
        self.blocks[bu].matrix[iu][iw].clone()
    }

    pub(crate) fn build(
        d: usize,
        n: usize,
        deformation: &Deformation<C>,
        method: GramMethod,
        prev: Option<&LevelGram<C>>,
    ) -> Result<Self> {
        let mut groups: HashMap<Vec<u8>, Vec<Word>> = HashMap::new();
        for w in Word::all(d, n) {
            groups.entry(w.content(d)).or_default().push(w);
        }
        let mut keys: Vec<_> = groups.keys().cloned().collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        let mut index = HashMap::new();
        let mut word_blocks = Vec::new();
        for (b, key) in keys.iter().enumerate() {
            let words = groups.remove(key).expect("key present");
            for (i, w) in words.iter().enumerate() {
                index.insert(w.clone(), (b, i));
            }
            word_blocks.push(words);
        }
        let blocks = match method {
            GramMethod::PermutationSum => {
                let Deformation::Scalar(q) = deformation else {
                    return Err(Error::InvalidDeformation(
                        "the permutation sum needs a scalar q".into(),
                    ));
                };
                permutation_blocks(n, q, word_blocks, &index)
            }
            GramMethod::Recursive => recursive_blocks(n, deformation, word_blocks, prev),
        };
        Ok(LevelGram { n, blocks, index })
    }
}

/// Permutations of `0..n` with their inversion counts.
fn permutations(n: usize) -> Vec<(Vec<usize>, usize)> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], inv: usize, out: &mut Vec<(Vec<usize>, usize)>) {
        let n = used.len();
        if cur.len() == n {
            out.push((cur.clone(), inv));
            return;
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            // earlier entries larger than x each form an inversion
            let extra = cur.iter().filter(|&&y| y > x).count();
            used[x] = true;
            cur.push(x);
            go(cur, used, inv + extra, out);
            cur.pop();
            used[x] = false;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], 0, &mut out);
    out
}

fn permutation_blocks<C: Coeff>(
    n: usize,
    q: &C,
    word_blocks: Vec<Vec<Word>>,
    index: &HashMap<Word, (usize, usize)>,
) -> Vec<GramBlock<C>> {
    let perms = permutations(n);
    let max_inv = n * n.saturating_sub(1) / 2;
    let qpow: Vec<C> = (0..=max_inv as u32).map(|k| q.pow(k)).collect();
    word_blocks
        .into_iter()
        .map(|words| {
            let m = words.len();
            // counts[u][w][k]: permutations of inversion number k carrying w to u
            let mut counts = vec![vec![vec![0u64; max_inv + 1]; m]; m];
            let mut image = vec![0u8; n];
            for (iw, w) in words.iter().enumerate() {
                let letters = w.letters();
                for (perm, inv) in &perms {
                    for (k, &p) in perm.iter().enumerate() {
                        image[k] = letters[p];
                    }
                    let (_, iu) = index[&Word::from(&image[..])];
                    counts[iu][iw][*inv] += 1;
                }
            }
            let matrix = counts
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|cs| {
                            cs.iter().zip(&qpow).fold(C::zero(), |acc, (&c, qk)| {
                                if c == 0 {
                                    acc
                                } else {
                                    acc + C::from_i64(c as i64) * qk
                                }
                            })
                        })
                        .collect()
                })
                .collect();
            GramBlock::new(words, matrix)
        })
        .collect()
}

/// Factor of the `p`-th term of `l_i e_w`: the product of `q_{i a}` over the
/// letters `a` standing left of position `p`.
pub(crate) fn annihilation_factor<C: Coeff>(deformation: &Deformation<C>, i: u8, w: &Word, p: usize) -> C {
    deformation.weight(w.letters()[..p].iter().map(|&a| (i, a)))
}

fn recursive_blocks<C: Coeff>(
    n: usize,
    deformation: &Deformation<C>,
    word_blocks: Vec<Vec<Word>>,
    prev: Option<&LevelGram<C>>,
) -> Vec<GramBlock<C>> {
    word_blocks
        .into_iter()
        .map(|words| {
            let matrix = if n == 0 {
                vec![vec![C::one()]]
            } else {
                let prev = prev.expect("previous level required");
                words
                    .iter()
                    .map(|u| {
                        let (i, rest) = u.split_first().expect("nonempty word");
                        words
                            .iter()
                            .map(|w| {
                                let mut acc = C::zero();
                                for (p, &a) in w.letters().iter().enumerate() {
                                    if a == i {
                                        let f = annihilation_factor(deformation, i, w, p);
                                        acc += &(f * prev.entry(&rest, &w.without(p)));
                                    }
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            };
            GramBlock::new(words, matrix)
        })
        .collect()
}

/// Gauss-Jordan inverse with largest-magnitude pivoting. `None` if singular.
pub(crate) fn invert<C: Coeff>(m: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].checked_div(&p).ok()?;
            inv[col][j] = inv[col][j].checked_div(&p).ok()?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let x = a[col][j].clone() * &f;
                a[r][j] -= &x;
                let y = inv[col][j].clone() * &f;
                inv[r][j] -= &y;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Scalar;

    #[test]
    fn permutation_inversions() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        let mut invs: Vec<_> = ps.iter().map(|p| p.1).collect();
        invs.sort_unstable();
        assert_eq!(invs, vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn exact_inverse() {
        let m = vec![
            vec![Scalar::int(2), Scalar::int(1)],
            vec![Scalar::int(1), Scalar::int(1)],
        ];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Scalar::int(1));
        assert_eq!(inv[0][1], Scalar::int(-1));
        assert_eq!(inv[1][1], Scalar::int(2));
        let sing = vec![vec![Scalar::int(1), Scalar::int(2)], vec![Scalar::int(2), Scalar::int(4)]];
        assert!(invert(&sing).is_none());
    }
}
