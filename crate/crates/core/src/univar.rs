//! The one-variable case: q-Hermite and Chebyshev polynomials, the closed
//! forms for `D e_n` and `xi`, and the accompanying identities.

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::qscalar::{analytic_constants, q_binom_at, q_factorial_at, q_falling_at, Coeff, Deformation};
use crate::word::Word;

/// Dense polynomial `sum_k c_k x^k` without trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly1<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly1<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![C::one()])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![C::zero(), C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add_scaled(&self, c: &C, other: &Poly1<C>) -> Poly1<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k) * c).collect())
    }

    pub fn mul_x(&self) -> Poly1<C> {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut v = vec![C::zero()];
        v.extend(self.coeffs.iter().cloned());
        Poly1 { coeffs: v }
    }

    pub fn scale(&self, c: &C) -> Poly1<C> {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    /// `p(s x)`.
    pub fn rescale(&self, s: &C) -> Poly1<C> {
        let mut pow = C::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * &pow);
            pow = pow * s;
        }
        Self::from_coeffs(out)
    }

    /// `p(A_1) e_0` in a one-letter Fock space.
    pub fn gns_vector(&self, space: &FockSpace<C>) -> Result<FockVector<C>> {
        let mut out = FockVector::zero();
        let mut cur = FockVector::vacuum();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                cur = space.gaussian(1, &cur)?;
            }
            out.add_scaled(c, &cur);
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for Poly1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c}) x"),
                _ => format!("({c}) x^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for Poly1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `H_{n+1} = x H_n - [n]_q H_{n-1}`, `H_0 = 1`, `H_1 = x`.
pub fn hermite<C: Coeff>(q: &C, n: usize) -> Poly1<C> {
    let (mut prev, mut cur) = (Poly1::zero(), Poly1::one());
    let mut qint = C::zero();
    let mut qpow = C::one();
    for _ in 0..n {
        let next = cur.mul_x().add_scaled(&-qint.clone(), &prev);
        qint += &qpow;
        qpow = qpow * q;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChebKind {
    /// Second kind: `U_{n+1} = x U_n - U_{n-1}`.
    U,
    /// `C_1 = U_1`, `C_n = U_n - U_{n-2}`.
    C,
}

fn cheb_u_all<C: Coeff>(n: usize) -> Vec<Poly1<C>> {
    let mut out = vec![Poly1::one(), Poly1::x()];
    for k in 2..=n {
        let next = out[k - 1].mul_x().add_scaled(&-C::one(), &out[k - 2]);
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

pub fn cheb<C: Coeff>(kind: ChebKind, n: usize) -> Result<Poly1<C>> {
    let u = cheb_u_all::<C>(n);
    match (kind, n) {
        (ChebKind::U, _) => Ok(u[n].clone()),
        (ChebKind::C, 0) => Err(Error::InvalidArgument("C_0 is not defined".into())),
        (ChebKind::C, 1) => Ok(u[1].clone()),
        (ChebKind::C, _) => Ok(u[n].add_scaled(&-C::one(), &u[n - 2])),
    }
}

/// Largest coefficient residual of
/// `U_n(x s) = sum_k (-1)^k q^{k(k+1)/2} binom(n-k, k)_q s^{n-2k} H_{n-2k}(x)`,
/// `s = sqrt(1 - q)`.
pub fn rescale_identity_residual(n: usize, q0: f64) -> Result<f64> {
    analytic_constants(q0)?;
    let s = (1.0 - q0).sqrt();
    let lhs = cheb::<f64>(ChebKind::U, n)?.rescale(&s);
    let mut rhs = Poly1::zero();
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * q0.powi((k * (k + 1) / 2) as i32) * q_binom_at(&q0, n - k, k)? * s.powi((n - 2 * k) as i32);
        rhs = rhs.add_scaled(&c, &hermite(&q0, n - 2 * k));
    }
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    Ok((0..len)
        .map(|k| (lhs.coeff(k) - rhs.coeff(k)).abs())
        .fold(0.0, f64::max))
}

fn scalar_q<C: Coeff>(space: &FockSpace<C>) -> Result<C> {
    match space.deformation() {
        Deformation::Scalar(q) if space.d() == 1 => Ok(q.clone()),
        _ => Err(Error::InvalidArgument("needs a one-letter space with scalar q".into())),
    }
}

fn moments<C: Coeff>(space: &FockSpace<C>, top: usize) -> Result<Vec<C>> {
    let mut out = Vec::with_capacity(top + 1);
    let mut cur = FockVector::vacuum();
    for k in 0..=top {
        if k > 0 {
            cur = space.gaussian(1, &cur)?;
        }
        out.push(space.trace(&cur));
    }
    Ok(out)
}

/// `tau(U_{2n}(A sqrt(1-q)))`. Only even powers of `A` occur, so the value is
/// a polynomial in `q` and is computed exactly from the moments of `A`.
pub fn trace_cheb<C: Coeff>(space: &FockSpace<C>, n: usize) -> Result<C> {
    let q = scalar_q(space)?;
    let u = cheb::<C>(ChebKind::U, 2 * n)?;
    let mu = moments(space, 2 * n)?;
    let one_minus_q = C::one() - &q;
    let mut acc = C::zero();
    for (j, c) in u.coeffs().iter().enumerate() {
        if !c.is_zero() {
            debug_assert!(j % 2 == 0);
            acc += &(c.clone() * one_minus_q.pow((j / 2) as u32) * &mu[j]);
        }
    }
    Ok(acc)
}

/// `tau(U_{2n-1}(A sqrt(1-q))) / sqrt(1-q)`, again a polynomial in `q`.
pub fn trace_cheb_odd<C: Coeff>(space: &FockSpace<C>, n: usize) -> Result<C> {
    if n == 0 {
        return Err(Error::InvalidArgument("odd index 2n-1 needs n >= 1".into()));
    }
    let q = scalar_q(space)?;
    let u = cheb::<C>(ChebKind::U, 2 * n - 1)?;
    let mu = moments(space, 2 * n - 1)?;
    let one_minus_q = C::one() - &q;
    let mut acc = C::zero();
    for (j, c) in u.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += &(c.clone() * one_minus_q.pow((j / 2) as u32) * &mu[j]);
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub residual: f64,
    /// Bound on the terms `n > N` dropped from the left-hand side.
    pub tail_bound: f64,
}

/// `|(1-q)^{m+1} sum_{n=m}^{N} q^{(n+1)(n-m)} (1+q^{n+1}) binom(n+m+1, n-m)_q - [m]_q!/[2m+1]_q!|`.
pub fn q_identity_residual(m: usize, q0: f64, big_n: usize) -> Result<IdentityResidual> {
    let k = analytic_constants(q0)?;
    if big_n < m {
        return Err(Error::InvalidArgument(format!("N = {big_n} < m = {m}")));
    }
    // binom(n+m+1, 2m+1)_q as a product of 2m+1 ratios
    let binom = |n: usize| -> f64 {
        (1..=2 * m + 1)
            .map(|j| (1.0 - q0.powi((n + m + 2 - j) as i32)) / (1.0 - q0.powi(j as i32)))
            .product()
    };
    let mut sum = 0.0;
    for n in m..=big_n {
        let e = ((n + 1) * (n - m)) as f64;
        let t = q0.signum().powi(((n + 1) * (n - m) % 2) as i32) * q0.abs().powf(e);
        if t == 0.0 && n > m {
            break;
        }
        sum += t * (1.0 + q0.powi(n as i32 + 1)) * binom(n);
    }
    let lhs = (1.0 - q0).powi(m as i32 + 1) * sum;
    let rhs = q_factorial_at(&q0, m) / q_factorial_at(&q0, 2 * m + 1);
    let a = q0.abs();
    let ratio_exp = (2 * big_n + 4 - m) as f64;
    let tail_bound = 2.0 * k.c * (1.0 - q0).abs().powi(m as i32 + 1)
        * a.powf(((big_n + 2) * (big_n + 1 - m)) as f64)
        / (1.0 - a.powf(ratio_exp));
    Ok(IdentityResidual {
        residual: (lhs - rhs).abs(),
        tail_bound,
    })
}

/// `sqrt(1-q) sum_{n<=M} (-1)^n q^{n(n+1)/2} C_{2n+1}(x sqrt(1-q))`.
pub fn conjugate_cheb_series(m: usize, q0: f64) -> Result<Poly1<f64>> {
    analytic_constants(q0)?;
    let s = (1.0 - q0).sqrt();
    let mut out = Poly1::zero();
    for n in 0..=m {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let c = s * sign * q0.powi((n * (n + 1) / 2) as i32);
        out = out.add_scaled(&c, &cheb::<f64>(ChebKind::C, 2 * n + 1)?.rescale(&s));
    }
    Ok(out)
}

/// GNS vector of [`conjugate_cheb_series`], computed by running the
/// three-term recurrence on vectors (the monomial coefficients of `C_n`
/// cancel badly in floating point).
pub fn conjugate_cheb_vector(m: usize, q0: f64) -> Result<FockVector<f64>> {
    analytic_constants(q0)?;
    let space = FockSpace::scalar(1, q0, 2 * m + 1)?;
    let s = (1.0 - q0).sqrt();
    // u[k] = U_k(s A) e_0
    let mut u = vec![FockVector::vacuum(), space.gaussian(1, &FockVector::vacuum())?.scale(&s)];
    for k in 2..=2 * m + 1 {
        let next = space.gaussian(1, &u[k - 1])?.scale(&s).sub(&u[k - 2]);
        u.push(next);
    }
    let mut out = FockVector::zero();
    for n in 0..=m {
        let k = 2 * n + 1;
        let ck = if k == 1 { u[1].clone() } else { u[k].sub(&u[k - 2]) };
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.add_scaled(&(s * sign * q0.powi((n * (n + 1) / 2) as i32)), &ck);
    }
    Ok(out)
}

/// One-letter closed form
/// `D e_n = sum_{k=1}^{ceil(n/2)} (-1)^{k-1} q^{k(k-1)/2} P_q(n-k, k-1) e_{n-2k+1}`,
/// with `P_q(a, b) = [a]_q! / [a-b]_q!`.
pub fn dual_closed_form<C: Coeff>(q: &C, n: usize) -> Result<FockVector<C>> {
    let mut out = FockVector::zero();
    for k in 1..=n.div_ceil(2) {
        let mut c = q.pow((k * (k - 1) / 2) as u32) * q_falling_at(q, n - k, k - 1)?;
        if k % 2 == 0 {
            c = -c;
        }
        out.add_term(Word::new(vec![1; n + 1 - 2 * k]), c);
    }
    Ok(out)
}

/// `sum_{m=1}^{M+1} (-1)^{m-1} q^{m(m-1)/2} [m-1]_q!/[2m-1]_q! e_{2m-1}`:
/// the one-letter conjugate variable through words of length `M`.
pub fn xi_closed_form<C: Coeff>(q: &C, big_m: usize) -> Result<FockVector<C>> {
    let mut out = FockVector::zero();
    for m in 1..=big_m + 1 {
        let mut c = q.pow((m * (m - 1) / 2) as u32)
            * q_factorial_at(q, m - 1).checked_div(&q_factorial_at(q, 2 * m - 1))?;
        if m % 2 == 0 {
            c = -c;
        }
        out.add_term(Word::new(vec![1; 2 * m - 1]), c);
    }
    Ok(out)
}

/// Terms `q^{m(m-1)} ([m-1]_q!)^2 / [2m-1]_q!`, `m = 1..=count`, of `||xi||^2`.
pub fn fisher_closed_terms<C: Coeff>(q: &C, count: usize) -> Result<Vec<C>> {
    (1..=count)
        .map(|m| {
            let f = q_factorial_at(q, m - 1);
            (q.pow((m * (m - 1)) as u32) * &f * &f).checked_div(&q_factorial_at(q, 2 * m - 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Scalar;

    #[test]
    fn small_polynomials() {
        let h2 = hermite(&Scalar::q(), 2);
        assert_eq!(h2.coeffs(), &[Scalar::int(-1), Scalar::int(0), Scalar::int(1)]);
        let u2 = cheb::<Scalar>(ChebKind::U, 2).unwrap();
        assert_eq!(u2.coeffs(), &[Scalar::int(-1), Scalar::int(0), Scalar::int(1)]);
        let c2 = cheb::<Scalar>(ChebKind::C, 2).unwrap();
        assert_eq!(c2.coeffs(), &[Scalar::int(-2), Scalar::int(0), Scalar::int(1)]);
        assert!(cheb::<Scalar>(ChebKind::C, 0).is_err());
        for n in 0..=8 {
            assert_eq!(hermite(&Scalar::int(0), n), cheb(ChebKind::U, n).unwrap());
        }
    }

    #[test]
    fn rescale_trivial_cases() {
        assert!(rescale_identity_residual(1, 0.7).unwrap() < 1e-15);
        for n in 0..=8 {
            assert!(rescale_identity_residual(n, 0.0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_traces() {
        let f = FockSpace::scalar(1, Scalar::q(), 4).unwrap();
        assert_eq!(trace_cheb(&f, 0).unwrap(), Scalar::int(1));
        assert_eq!(trace_cheb(&f, 1).unwrap(), -Scalar::q());
        assert!(trace_cheb_odd(&f, 2).unwrap().is_zero());
    }

    #[test]
    fn identity_free_case() {
        let r = q_identity_residual(0, 0.0, 10).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn cheb_series_free_case() {
        let p = conjugate_cheb_series(3, 0.0).unwrap();
        assert_eq!(p, Poly1::x());
    }

    #[test]
    fn closed_dual_low_degree() {
        let q = Scalar::q();
        assert_eq!(dual_closed_form(&q, 0).unwrap(), FockVector::zero());
        assert_eq!(dual_closed_form(&q, 1).unwrap(), FockVector::vacuum());
        let mut d3 = FockVector::basis(Word::from([1, 1]));
        d3.add_term(Word::empty(), -q);
        assert_eq!(dual_closed_form(&Scalar::q(), 3).unwrap(), d3);
    }
}
