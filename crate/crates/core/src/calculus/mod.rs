//! Noncommutative polynomials in the q-Gaussians: the Wick transform in both
//! directions, the free difference quotient, the cyclic derivative, the
//! conjugate-variable duality check and the free Gibbs potential.

mod poly;

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

pub use poly::{NCPoly, NCTensorPoly};

use crate::combinat::{self, DrawnPartition, Family};
use crate::dualsys::{conjugate_series, crossing_weight};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::qscalar::{Coeff, Deformation};
use crate::word::Word;

/// Wick polynomials `Q[w]` (the unique polynomial with `Q[w] e_0 = e_w`),
/// memoized per word.
pub struct Wick<C> {
    deformation: Deformation<C>,
    memo: RwLock<HashMap<Word, NCPoly<C>>>,
}

impl<C: Coeff> Wick<C> {
    pub fn new(deformation: Deformation<C>) -> Self {
        Wick {
            deformation,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn deformation(&self) -> &Deformation<C> {
        &self.deformation
    }

    /// `Q[a w] = A_a Q[w] - sum_{p: w_p = a} (prod_{p' < p} q_{a w_p'}) Q[w without p]`.
    pub fn recursive(&self, w: &Word) -> NCPoly<C> {
        if let Some(p) = self.memo.read().expect("memo poisoned").get(w) {
            return p.clone();
        }
        let out = match w.split_first() {
            None => NCPoly::one(),
            Some((a, rest)) => {
                let mut out = self.recursive(&rest).left_mul_letter(a);
                for (p, &b) in rest.letters().iter().enumerate() {
                    if b == a {
                        let f = self
                            .deformation
                            .weight(rest.letters()[..p].iter().map(|&c| (a, c)));
                        out.add_scaled(&-f, &self.recursive(&rest.without(p)));
                    }
                }
                out
            }
        };
        self.memo
            .write()
            .expect("memo poisoned")
            .insert(w.clone(), out.clone());
        out
    }

    /// `Q[w] = sum over D(n) of (-1)^{|p|} q^{cross} delta_p A^{s}`.
    pub fn partition(&self, w: &Word) -> NCPoly<C> {
        let letter = |v: usize| w.from_right(v);
        let mut out = NCPoly::zero();
        for p in combinat::cached(Family::D, w.len()).iter() {
            if !p.pairs_match(letter) {
                continue;
            }
            let mut c = crossing_weight(&self.deformation, p, letter, |_, _| false);
            if p.pairs.len() % 2 == 1 {
                c = -c;
            }
            out.add_term(DrawnPartition::word_of(&p.singletons, letter), c);
        }
        out
    }
}

pub fn wick_recursive<C: Coeff>(deformation: &Deformation<C>, w: &Word) -> NCPoly<C> {
    Wick::new(deformation.clone()).recursive(w)
}

pub fn wick_partition<C: Coeff>(deformation: &Deformation<C>, w: &Word) -> NCPoly<C> {
    Wick::new(deformation.clone()).partition(w)
}

/// `sum_w v_w Q[w]`: the polynomial whose vector is `v`.
pub fn vector_to_poly<C: Coeff>(wick: &Wick<C>, v: &FockVector<C>) -> NCPoly<C> {
    let mut out = NCPoly::zero();
    for (w, c) in v.iter() {
        out.add_scaled(c, &wick.recursive(w));
    }
    out
}

/// `p(A) e_0`.
pub fn poly_to_vector<C: Coeff>(space: &FockSpace<C>, p: &NCPoly<C>) -> Result<FockVector<C>> {
    p.to_vector(space)
}

/// Free difference quotient: `A^w -> sum_{w_p = i} A^{w_<p} (x) A^{w_>p}`.
pub fn diff_quotient<C: Coeff>(i: u8, p: &NCPoly<C>) -> NCTensorPoly<C> {
    let mut out = NCTensorPoly::zero();
    for (w, c) in p.iter() {
        for (k, &a) in w.letters().iter().enumerate() {
            if a == i {
                out.add_term(w.slice(0..k), w.slice(k + 1..w.len()), c.clone());
            }
        }
    }
    out
}

/// `d_i e_w` as a sum over `C(n+1)` of
/// `(-1)^{|p|-1} q^{cross - |s_r|} delta_p Q[s_l] (x) Q[s_r]`.
///
/// With a matrix deformation the crossings between right singletons and the
/// pair containing 0 carry no weight; those are exactly the `|s_r|` crossings
/// removed in the scalar exponent.
pub fn diff_partition<C: Coeff>(wick: &Wick<C>, i: u8, w: &Word) -> NCTensorPoly<C> {
    let n = w.len();
    let letter = |v: usize| if v == 0 { i } else { w.from_right(v) };
    let mut out = NCTensorPoly::zero();
    for p in combinat::cached(Family::C, n + 1).iter() {
        if !p.pairs_match(letter) {
            continue;
        }
        let bd = p.block_data();
        let is_right = |v: usize| bd.s_r.contains(&v);
        let mut c = crossing_weight(wick.deformation(), p, letter, |a, b| {
            (a == 0 && is_right(b)) || (b == 0 && is_right(a))
        });
        if p.pairs.len() % 2 == 0 {
            c = -c;
        }
        let left = wick.recursive(&DrawnPartition::word_of(&bd.s_l, letter));
        let right = wick.recursive(&DrawnPartition::word_of(&bd.s_r, letter));
        out.add_tensor(&c, &left, &right);
    }
    out
}

/// Cyclic derivative `m_flip . d_i`.
pub fn cyclic_derivative<C: Coeff>(i: u8, p: &NCPoly<C>) -> NCPoly<C> {
    diff_quotient(i, p).m_flip()
}

fn tau_monomial<C: Coeff>(space: &FockSpace<C>, w: &Word) -> Result<C> {
    Ok(space.trace(&space.apply_monomial(w, &FockVector::vacuum())?))
}

/// `tau(A^u xi_i) - (tau (x) tau)(d_i A^u)` for a precomputed `xi_i`.
///
/// The first term is `<xi_i, A^{rev u} e_0>_q`. Truncating `xi_i` after
/// `|w| = M` drops only levels `>= 2M + 3`, so the residual is exact when
/// `|u| <= 2M + 2`.
pub fn duality_residual_with<C: Coeff>(space: &FockSpace<C>, xi: &FockVector<C>, u: &Word, i: u8) -> Result<C> {
    let lhs = space.inner(xi, &space.apply_monomial(&u.reversed(), &FockVector::vacuum())?)?;
    let mut rhs = C::zero();
    for (k, &a) in u.letters().iter().enumerate() {
        if a == i {
            let left = tau_monomial(space, &u.slice(0..k))?;
            let right = tau_monomial(space, &u.slice(k + 1..u.len()))?;
            rhs += &(left * &right);
        }
    }
    Ok(lhs - &rhs)
}

pub fn duality_residual<C: Coeff>(space: &FockSpace<C>, u: &Word, i: u8, m: usize) -> Result<C> {
    if u.len() > 2 * m + 2 {
        return Err(Error::InvalidArgument(format!(
            "|u| = {} exceeds 2M + 2 = {}",
            u.len(),
            2 * m + 2
        )));
    }
    let xi = conjugate_series(space, i, m)?;
    duality_residual_with(space, &xi, u, i)
}

/// `V = sum_i sum_w alpha(w, i) / (2 (1 + |w|)) (A^{iw} + A^{wi})`, where
/// `alpha(., i)` are the coefficients of `xi_i` expanded in monomials.
pub fn gibbs_from_conjugates<C: Coeff>(wick: &Wick<C>, xis: &[FockVector<C>]) -> Result<NCPoly<C>> {
    let mut v = NCPoly::zero();
    for (idx, xi) in xis.iter().enumerate() {
        let i = idx as u8 + 1;
        let alpha = vector_to_poly(wick, xi);
        let c0 = alpha.get(&Word::empty());
        if !c0.is_zero() {
            return Err(Error::ConstantTerm(c0.to_string()));
        }
        for (w, a) in alpha.iter() {
            let c = a.checked_div(&C::from_i64(2 * (1 + w.len() as i64)))?;
            v.add_term(w.prepend(i), c.clone());
            v.add_term(w.append(i), c);
        }
    }
    Ok(v)
}

pub fn gibbs_potential<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<NCPoly<C>> {
    let wick = Wick::new(space.deformation().clone());
    let xis = (1..=space.d() as u8)
        .map(|i| conjugate_series(space, i, m))
        .collect::<Result<Vec<_>>>()?;
    gibbs_from_conjugates(&wick, &xis)
}

/// Per-degree residual of `D_i V - xi_i`: for each degree, the largest
/// coefficient magnitude over all `i`.
pub fn gibbs_residuals<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<BTreeMap<usize, f64>> {
    let wick = Wick::new(space.deformation().clone());
    let xis = (1..=space.d() as u8)
        .map(|i| conjugate_series(space, i, m))
        .collect::<Result<Vec<_>>>()?;
    let v = gibbs_from_conjugates(&wick, &xis)?;
    let mut out = BTreeMap::new();
    for (idx, xi) in xis.iter().enumerate() {
        let diff = cyclic_derivative(idx as u8 + 1, &v).sub(&vector_to_poly(&wick, xi));
        for k in 0..=2 * m + 1 {
            let r = diff.homogeneous(k).max_magnitude().0;
            let e = out.entry(k).or_insert(0.0f64);
            *e = e.max(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Scalar;

    fn sym() -> Deformation<Scalar> {
        Deformation::Scalar(Scalar::q())
    }

    fn mono(w: &[u8]) -> NCPoly<Scalar> {
        NCPoly::monomial(Word::from(w))
    }

    #[test]
    fn low_degree_wick() {
        let wick = Wick::new(sym());
        assert_eq!(wick.recursive(&Word::empty()), NCPoly::one());
        assert_eq!(wick.recursive(&Word::from([2])), mono(&[2]));
        for w in Word::all(2, 2) {
            let (j2, j1) = (w.letters()[0], w.letters()[1]);
            let mut expect = mono(&[j2, j1]);
            if j2 == j1 {
                expect.add_term(Word::empty(), Scalar::int(-1));
            }
            assert_eq!(wick.recursive(&w), expect);
        }
        for w in Word::all(2, 3) {
            let (j3, j2, j1) = (w.letters()[0], w.letters()[1], w.letters()[2]);
            let mut expect = mono(&[j3, j2, j1]);
            if j2 == j1 {
                expect.add_term(Word::from([j3]), Scalar::int(-1));
            }
            if j3 == j2 {
                expect.add_term(Word::from([j1]), Scalar::int(-1));
            }
            if j3 == j1 {
                expect.add_term(Word::from([j2]), -Scalar::q());
            }
            assert_eq!(wick.recursive(&w), expect, "{w:?}");
            assert_eq!(wick.partition(&w), expect, "{w:?}");
        }
    }

    #[test]
    fn wick_vector_is_basis_vector() {
        let f = FockSpace::scalar(2, Scalar::q(), 4).unwrap();
        let wick = Wick::new(sym());
        for w in Word::all_up_to(2, 4) {
            assert_eq!(wick.recursive(&w).to_vector(&f).unwrap(), FockVector::basis(w.clone()));
        }
    }

    #[test]
    fn free_wick_has_no_crossing_terms() {
        let zero = Deformation::Scalar(Scalar::int(0));
        let p = wick_partition(&zero, &Word::from([1, 1, 1, 1]));
        // at q = 0 the Wick polynomial of x^4 is U_4 = x^4 - 3x^2 + 1
        assert_eq!(p.get(&Word::empty()), Scalar::int(1));
        assert_eq!(p.get(&Word::from([1, 1])), Scalar::int(-3));
        assert_eq!(p, wick_recursive(&zero, &Word::from([1, 1, 1, 1])));
    }

    #[test]
    fn difference_quotients() {
        let one = Word::empty();
        let d = diff_quotient(1, &mono(&[1]));
        assert_eq!(d.get(&one, &one), Scalar::int(1));
        assert_eq!(d.len(), 1);
        let d = diff_quotient(1, &mono(&[2, 1]));
        assert_eq!(d.get(&Word::from([2]), &one), Scalar::int(1));
        assert_eq!(d.len(), 1);
        let d = diff_quotient(1, &mono(&[1, 1]));
        assert_eq!(d.get(&one, &Word::from([1])), Scalar::int(1));
        assert_eq!(d.get(&Word::from([1]), &one), Scalar::int(1));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn cyclic_derivatives() {
        assert_eq!(cyclic_derivative(1, &mono(&[1, 1])), mono(&[1]).scale(&Scalar::int(2)));
        assert_eq!(cyclic_derivative(1, &mono(&[1, 2])), mono(&[2]));
        assert_eq!(cyclic_derivative(2, &mono(&[1, 2, 1])), mono(&[1, 1]));
    }

    #[test]
    fn derivative_of_three_letters() {
        let wick = Wick::new(sym());
        let one = Word::empty();
        for w in Word::all(2, 3) {
            let (j3, j2, j1) = (w.letters()[0], w.letters()[1], w.letters()[2]);
            for i in 1..=2u8 {
                let mut expect = NCTensorPoly::zero();
                let e = |x: &[u8]| wick.recursive(&Word::from(x));
                let unit = NCPoly::one();
                if i == j3 {
                    expect.add_tensor(&Scalar::int(1), &unit, &e(&[j2, j1]));
                }
                if i == j2 {
                    expect.add_tensor(&Scalar::int(1), &e(&[j3]), &e(&[j1]));
                }
                if i == j1 {
                    expect.add_tensor(&Scalar::int(1), &e(&[j3, j2]), &unit);
                }
                if i == j2 && j3 == j1 {
                    expect.add_term(one.clone(), one.clone(), -Scalar::q());
                }
                assert_eq!(diff_partition(&wick, i, &w), expect, "i={i} {w:?}");
            }
        }
    }

    #[test]
    fn duality_small() {
        let f = FockSpace::scalar(2, Scalar::ratio(1, 2), 5).unwrap();
        assert!(duality_residual(&f, &Word::empty(), 1, 2).unwrap().is_zero());
        assert!(duality_residual(&f, &Word::from([1]), 1, 0).unwrap().is_zero());
        for u in Word::all_up_to(2, 4) {
            assert!(duality_residual(&f, &u, 2, 2).unwrap().is_zero(), "{u:?}");
        }
    }

    #[test]
    fn gibbs_free_case() {
        let f = FockSpace::scalar(2, Scalar::int(0), 3).unwrap();
        let v = gibbs_potential(&f, 1).unwrap();
        let half = Scalar::ratio(1, 2);
        let expect = NCPoly::from_terms([(Word::from([1, 1]), half.clone()), (Word::from([2, 2]), half)]);
        assert_eq!(v, expect);
    }
}
