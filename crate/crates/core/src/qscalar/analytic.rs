//! The constants `w(q)` and `C_q`, evaluated in floating point.

use crate::error::{Error, Result};

/// Multiplicative tail below which the infinite products are cut.
pub const PRODUCT_TAIL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticConstants {
    /// `w(q)`, with `w^2 = (1-|q|^2)^{-1} prod_k (1-|q|^k)/(1+|q|^k)`.
    pub w: f64,
    /// `C_{|q|}`, with `C^{-1} = prod_m (1-|q|^m)`.
    pub c: f64,
    /// Number of factors kept in each product.
    pub factors: usize,
}

/// `w(q0)` and `C_{|q0|}`. Both depend on `|q0|` only.
pub fn analytic_constants(q0: f64) -> Result<AnalyticConstants> {
    if !(q0.abs() < 1.0) {
        return Err(Error::Domain(format!("|q| must be < 1, got {q0}")));
    }
    let a = q0.abs();
    let mut w_prod = 1.0;
    let mut c_inv = 1.0;
    let mut k = 0usize;
    let mut ak = 1.0;
    loop {
        k += 1;
        ak *= a;
        w_prod *= (1.0 - ak) / (1.0 + ak);
        c_inv *= 1.0 - ak;
        // |ln((1-x)/(1+x))| <= 2x/(1-x), |ln(1-x)| <= x/(1-x); summed geometrically
        // over the remaining factors the log-tail is at most 2 a^{k+1} / ((1-a)(1-a^{k+1})).
        let next = ak * a;
        let tail = 2.0 * next / ((1.0 - a) * (1.0 - next));
        if tail < PRODUCT_TAIL || next == 0.0 {
            break;
        }
    }
    Ok(AnalyticConstants {
        w: (w_prod / (1.0 - a * a)).sqrt(),
        c: 1.0 / c_inv,
        factors: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_case_is_trivial() {
        let k = analytic_constants(0.0).unwrap();
        assert_eq!((k.w, k.c), (1.0, 1.0));
    }

    #[test]
    fn half_matches_direct_product() {
        let k = analytic_constants(0.5).unwrap();
        // 200-factor direct products
        let mut w2 = 1.0 / (1.0 - 0.25);
        let mut cinv = 1.0;
        for j in 1..=200 {
            let x = 0.5f64.powi(j);
            w2 *= (1.0 - x) / (1.0 + x);
            cinv *= 1.0 - x;
        }
        assert!((k.w * k.w - w2).abs() < 1e-12);
        assert!((k.c - 1.0 / cinv).abs() < 1e-12);
    }

    #[test]
    fn depends_on_absolute_value() {
        assert_eq!(analytic_constants(-0.5).unwrap(), analytic_constants(0.5).unwrap());
        assert_eq!(analytic_constants(-0.9).unwrap(), analytic_constants(0.9).unwrap());
    }

    #[test]
    fn rejects_boundary() {
        assert!(analytic_constants(1.0).is_err());
        assert!(analytic_constants(-1.5).is_err());
        assert!(analytic_constants(f64::NAN).is_err());
    }
}
