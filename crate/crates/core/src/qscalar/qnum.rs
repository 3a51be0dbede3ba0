//! q-integers, q-factorials and Gaussian binomials.
//!
//! The `*_at` functions evaluate at any coefficient value of `q`; the plain
//! versions return polynomials in the formal `q`.

use super::coeff::Coeff;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_int_at<C: Coeff>(q: &C, n: usize) -> C {
    let mut acc = C::zero();
    let mut pow = C::one();
    for _ in 0..n {
        acc += &pow;
        pow = pow * q;
    }
    acc
}

pub fn q_factorial_at<C: Coeff>(q: &C, n: usize) -> C {
    (1..=n).fold(C::one(), |acc, m| acc * q_int_at(q, m))
}

/// `[n]_q [n-1]_q ... [n-k+1]_q = [n]_q! / [n-k]_q!`.
pub fn q_falling_at<C: Coeff>(q: &C, n: usize, k: usize) -> Result<C> {
    if k > n {
        return Err(Error::InvalidArgument(format!("q_falling({n}, {k}) needs k <= n")));
    }
    Ok((n - k + 1..=n).fold(C::one(), |acc, m| acc * q_int_at(q, m)))
}

/// Gaussian binomial via the q-Pascal rule, so no division is needed.
pub fn q_binom_at<C: Coeff>(q: &C, n: usize, k: usize) -> Result<C> {
    if k > n {
        return Err(Error::InvalidArgument(format!("q_binom({n}, {k}) needs k <= n")));
    }
    // row[j] = binom(m, j)_q; binom(m, j) = binom(m-1, j-1) + q^j binom(m-1, j)
    let mut row = vec![C::one()];
    for m in 1..=n {
        let mut next = vec![C::one(); m + 1];
        for j in 1..m {
            next[j] = row[j - 1].clone() + q.pow(j as u32) * &row[j];
        }
        row = next;
    }
    Ok(row[k].clone())
}

pub fn q_int(n: usize) -> Scalar {
    q_int_at(&Scalar::q(), n)
}

pub fn q_factorial(n: usize) -> Scalar {
    q_factorial_at(&Scalar::q(), n)
}

pub fn q_falling(n: usize, k: usize) -> Result<Scalar> {
    q_falling_at(&Scalar::q(), n, k)
}

/// `[n]_q! / ([k]_q! [n-k]_q!)`, obtained by exact polynomial division.
pub fn q_binom(n: usize, k: usize) -> Result<Scalar> {
    if k > n {
        return Err(Error::InvalidArgument(format!("q_binom({n}, {k}) needs k <= n")));
    }
    let num = q_factorial(n).as_poly().expect("polynomial");
    let den = q_factorial(k)
        .as_poly()
        .expect("polynomial")
        .mul(&q_factorial(n - k).as_poly().expect("polynomial"));
    let quot = num
        .div_exact(&den)
        .expect("Gaussian binomial is a polynomial");
    Ok(Scalar::from_poly(quot))
}
