//! Floating-point checks of the analytic inequalities, and tail bounds for
//! every truncated series.

use std::fmt;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::Wick;
use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector, LevelGram};
use crate::qscalar::{analytic_constants, AnalyticConstants, Deformation};
use crate::word::Word;

fn check_domain(q0: f64) -> Result<AnalyticConstants> {
    analytic_constants(q0)
}

fn block_matrix(g: &LevelGram<f64>, b: usize) -> DMatrix<f64> {
    let m = &g.blocks[b].matrix;
    DMatrix::from_fn(m.len(), m.len(), |r, c| m[r][c])
}

/// Smallest eigenvalue of `w(q)^{-1} P^{(m+1)} - P^{(m)} (x) 1`, where the
/// identity factor acts on the last letter.
pub fn gram_domination_residual(m: usize, q0: f64, d: usize) -> Result<f64> {
    let k = check_domain(q0)?;
    let f = FockSpace::scalar(d, q0, m + 1)?;
    let top = f.gram(m + 1)?;
    let low = f.gram(m)?;
    let mut min = f64::INFINITY;
    for (b, block) in top.blocks.iter().enumerate() {
        let mut mat = block_matrix(&top, b) / k.w;
        for (r, u) in block.words.iter().enumerate() {
            for (c, v) in block.words.iter().enumerate() {
                let (ua, va) = (u.letters(), v.letters());
                if ua[m] == va[m] {
                    mat[(r, c)] -= low.entry(&u.slice(0..m), &v.slice(0..m));
                }
            }
        }
        let ev = SymmetricEigen::new(mat).eigenvalues;
        min = min.min(ev.min());
    }
    Ok(min)
}

/// Cholesky factor of a Gram block, failing distinctly when `f64` loses positivity.
fn cholesky(mat: DMatrix<f64>, level: usize) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(mat).ok_or(Error::GramNotPositive { level })
}

/// Largest eigenvalue of `L^{-1} B L^{-T}` where `G = L L^T`.
fn generalized_max(b: &DMatrix<f64>, g: DMatrix<f64>, level: usize) -> Result<f64> {
    let l = cholesky(g, level)?.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(Error::GramNotPositive { level })?;
    let m = &linv * b * linv.transpose();
    let sym = (&m + m.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.max())
}

/// Operator norm of `r_i` on the space truncated at `level`, for `<.,.>_q`:
/// the largest generalized singular value over all levels.
pub fn right_annihilation_norm(i: u8, q0: f64, d: usize, level: usize) -> Result<f64> {
    check_domain(q0)?;
    if i == 0 || i as usize > d {
        return Err(Error::LetterOutOfRange {
            letter: i as usize,
            d,
        });
    }
    let f = FockSpace::scalar(d, q0, level)?;
    let mut best = 0.0f64;
    for n in 1..=level {
        let g = f.gram(n)?;
        let low = f.gram(n - 1)?;
        for (b, block) in g.blocks.iter().enumerate() {
            let words = &block.words;
            let ends = |w: &Word| w.letters()[n - 1] == i;
            if !words.iter().any(ends) {
                continue;
            }
            let k = words.len();
            let rgr = DMatrix::from_fn(k, k, |r, c| {
                let (u, v) = (&words[r], &words[c]);
                if ends(u) && ends(v) {
                    low.entry(&u.slice(0..n - 1), &v.slice(0..n - 1))
                } else {
                    0.0
                }
            });
            let top = generalized_max(&rgr, block_matrix(&g, b), n)?;
            best = best.max(top.max(0.0).sqrt());
        }
    }
    Ok(best)
}

/// Checks that every Gram block up to `level` admits a Cholesky factorization.
pub fn gram_positive(q0: f64, d: usize, level: usize) -> Result<()> {
    let f = FockSpace::scalar(d, q0, level)?;
    for n in 0..=level {
        let g = f.gram(n)?;
        for b in 0..g.blocks.len() {
            cholesky(block_matrix(&g, b), n)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaagerupReport {
    /// `max over trials of ||Q[eta]||_trunc - (m+1) C^{3/2} ||eta||_q`.
    pub residual: f64,
    /// Largest ratio of the truncated norm to the bound.
    pub max_ratio: f64,
    /// Domain levels used for the truncated operator norm.
    pub domain_level: usize,
    pub trials: usize,
}

/// Dense matrix of the Gram form on all levels `<= top`, basis ordered as `words`.
fn dense_gram(f: &FockSpace<f64>, words: &[Word]) -> Result<DMatrix<f64>> {
    let n = words.len();
    let mut g = DMatrix::zeros(n, n);
    let grams = (0..=f.level()).map(|k| f.gram(k)).collect::<Result<Vec<_>>>()?;
    for r in 0..n {
        for c in 0..n {
            if words[r].len() == words[c].len() {
                g[(r, c)] = grams[words[r].len()].entry(&words[r], &words[c]);
            }
        }
    }
    Ok(g)
}

/// Randomized check of `||eta|| <= (m+1) C_{|q|}^{3/2} ||eta||_q` for
/// `eta` homogeneous of degree `m`, viewed as the operator `Q[eta]`.
///
/// The operator norm is taken on domain levels `<= K` (`K = 3` for `d <= 2`,
/// else 2), which bounds the true norm from below; a positive residual would
/// therefore be a genuine violation.
pub fn haagerup_residual(m: usize, q0: f64, d: usize, trials: usize, seed: u64) -> Result<HaagerupReport> {
    let k = check_domain(q0)?;
    let domain_level = if d <= 2 { 3 } else { 2 };
    let f = FockSpace::scalar(d, q0, m + domain_level)?;
    let wick = Wick::new(Deformation::Scalar(q0));
    let domain = Word::all_up_to(d, domain_level);
    let target = Word::all_up_to(d, m + domain_level);
    let pos: std::collections::HashMap<&Word, usize> =
        target.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let g_dom = dense_gram(&f, &domain)?;
    let g_tgt = dense_gram(&f, &target)?;
    let l_dom = cholesky(g_dom, domain_level)?.l();
    let l_inv = l_dom
        .try_inverse()
        .ok_or(Error::GramNotPositive { level: domain_level })?;

    // one operator matrix per degree-m basis word
    let eta_words = Word::all(d, m);
    let mut ops = Vec::with_capacity(eta_words.len());
    for w in &eta_words {
        let q = wick.recursive(w);
        let mut mat = DMatrix::zeros(target.len(), domain.len());
        for (c, u) in domain.iter().enumerate() {
            let img = q.apply(&f, &FockVector::basis(u.clone()))?;
            for (v, x) in img.iter() {
                mat[(pos[v], c)] = *x;
            }
        }
        ops.push(mat);
    }
    let g_m = f.gram(m)?;
    let constant = (m as f64 + 1.0) * k.c.powf(1.5);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual = f64::NEG_INFINITY;
    let mut max_ratio = 0.0f64;
    for _ in 0..trials {
        let eta: Vec<f64> = (0..eta_words.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut x = DMatrix::zeros(target.len(), domain.len());
        for (c, op) in eta.iter().zip(&ops) {
            x += op * *c;
        }
        let b = x.transpose() * &g_tgt * &x;
        let whitened = &l_inv * b * l_inv.transpose();
        let sym = (&whitened + whitened.transpose()) * 0.5;
        let op_norm = SymmetricEigen::new(sym).eigenvalues.max().max(0.0).sqrt();
        let mut eta_sq = 0.0;
        for (a, u) in eta_words.iter().enumerate() {
            for (b, v) in eta_words.iter().enumerate() {
                eta_sq += eta[a] * g_m.entry(u, v) * eta[b];
            }
        }
        let bound = constant * eta_sq.max(0.0).sqrt();
        residual = residual.max(op_norm - bound);
        if bound > 0.0 {
            max_ratio = max_ratio.max(op_norm / bound);
        }
    }
    Ok(HaagerupReport {
        residual: if trials == 0 { 0.0 } else { residual },
        max_ratio,
        domain_level,
        trials,
    })
}

/// The truncated series for which tail bounds are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesId {
    /// Operator-norm majorant of the conjugate series.
    Xi,
    /// Majorant of the power-series form of the Gibbs potential.
    Gibbs,
    /// `sum_i ||xi_i - xi_i^{(M)}||_q^2`.
    Fisher,
    /// Majorant of `d_j xi_i` in the operator norm on the tensor product.
    Lipschitz,
}

impl SeriesId {
    pub const ALL: [SeriesId; 4] = [SeriesId::Xi, SeriesId::Gibbs, SeriesId::Fisher, SeriesId::Lipschitz];

    fn formula(self) -> &'static str {
        match self {
            SeriesId::Xi => "sum d^m |q|^{m(m+1)/2} (2m+2) C^{3/2} w^{-(m+1)/2} sqrt([m]!)",
            SeriesId::Gibbs => {
                "d A sum |q|^{m(m+1)/2} (d/sqrt w)^{3m+2} sqrt([m]!) (2m+1)! A^{2m+1}, A = 2/sqrt(1-|q|)"
            }
            SeriesId::Fisher => "d (sum d^m |q|^{m(m+1)/2} w^{-(m+1)/2} sqrt([m]!))^2",
            SeriesId::Lipschitz => {
                "(d C^3 / w) sum |q|^{m(m+1)/2} (2m+1)^2 (2m+2)! (d/sqrt w)^{3m} sqrt([m]!) [2m]!"
            }
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesId::Xi => "xi",
            SeriesId::Gibbs => "gibbs",
            SeriesId::Fisher => "fisher",
            SeriesId::Lipschitz => "lipschitz",
        })
    }
}

impl std::str::FromStr for SeriesId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xi" => Ok(SeriesId::Xi),
            "gibbs" => Ok(SeriesId::Gibbs),
            "fisher" => Ok(SeriesId::Fisher),
            "lipschitz" => Ok(SeriesId::Lipschitz),
            _ => Err(Error::Parse(format!("unknown series {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub series: SeriesId,
    /// Last index kept in the partial sum.
    pub m: usize,
    /// Bound on the dropped part; `inf` only if it exceeds the `f64` range.
    pub bound: f64,
    /// `log10(bound)`, finite whenever the bound is (the majorants can be
    /// astronomically large near `|q| = 1`).
    pub log10_bound: f64,
    pub formula: &'static str,
}

/// `ln [k]_a` for `0 <= a < 1`.
fn ln_qint(a: f64, k: usize) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        ((1.0 - a.powi(k as i32)) / (1.0 - a)).ln()
    }
}

fn ln_qfact(a: f64, k: usize) -> f64 {
    (1..=k).map(|j| ln_qint(a, j)).sum()
}

fn ln_fact(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Terms of one majorant, in log space, plus an upper bound on how much the
/// log-ratio `ln t_{m+1} - ln t_m` can still grow from `m` on.
struct Majorant {
    ln_term: Box<dyn Fn(usize) -> f64>,
    ratio_growth: Box<dyn Fn(usize) -> f64>,
}

/// Cap on the number of terms examined before giving up.
const MAX_TERMS: usize = 1_000_000;

/// `ln sum_{m > big_m} t_m`: terms are summed exactly up to the first index
/// `K` from which the ratio is below 1/2 and provably nonincreasing, the
/// rest is bounded geometrically.
fn ln_tail(maj: &Majorant, big_m: usize, ln_a: f64) -> Result<f64> {
    if ln_a == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let lt = &maj.ln_term;
    let mut acc = f64::NEG_INFINITY;
    let mut m = big_m + 1;
    loop {
        acc = log_add(acc, lt(m));
        let ln_r = lt(m + 1) - lt(m);
        if ln_r < -std::f64::consts::LN_2 && (maj.ratio_growth)(m + 1) <= 0.0 {
            // t_{m+j} <= t_m r^j for j >= 1
            let r = ln_r.exp();
            return Ok(log_add(acc, lt(m) + ln_r - (-r).ln_1p()));
        }
        m += 1;
        if m > MAX_TERMS {
            return Err(Error::Domain("tail bound did not settle".into()));
        }
    }
}

/// Tail bound `sum_{m > M}` of the majorant of `series` at `|q| = |q0|`.
pub fn series_tail(series: SeriesId, big_m: usize, q0: f64, d: usize) -> Result<TailReport> {
    let k = check_domain(q0)?;
    let a = q0.abs();
    let ln_a = a.ln();
    let (ln_d, ln_w, ln_c) = ((d as f64).ln(), k.w.ln(), k.c.ln());
    let ln_big_a = (2.0 / (1.0 - a).sqrt()).ln();
    let ln_dw = ln_d - 0.5 * ln_w;
    let tri = move |m: usize| (m * (m + 1) / 2) as f64 * ln_a;
    // growth of the quadratic part is ln_a per step; the q-factorial parts
    // contribute at most a^m per step; factorial parts at most 2/m.
    let half_qf = move |m: usize| 0.5 * a.powi(m as i32);
    let (maj, outer) = match series {
        SeriesId::Xi => (
            Majorant {
                ln_term: Box::new(move |m| {
                    m as f64 * ln_d + tri(m) + (2.0 * m as f64 + 2.0).ln() + 1.5 * ln_c
                        - 0.5 * (m as f64 + 1.0) * ln_w
                        + 0.5 * ln_qfact(a, m)
                }),
                ratio_growth: Box::new(move |m| ln_a + half_qf(m)),
            },
            0.0,
        ),
        SeriesId::Fisher => (
            Majorant {
                ln_term: Box::new(move |m| {
                    m as f64 * ln_d + tri(m) - 0.5 * (m as f64 + 1.0) * ln_w + 0.5 * ln_qfact(a, m)
                }),
                ratio_growth: Box::new(move |m| ln_a + half_qf(m)),
            },
            0.0,
        ),
        SeriesId::Gibbs => (
            Majorant {
                ln_term: Box::new(move |m| {
                    tri(m)
                        + (3.0 * m as f64 + 2.0) * ln_dw
                        + 0.5 * ln_qfact(a, m)
                        + ln_fact(2 * m + 1)
                        + (2.0 * m as f64 + 1.0) * ln_big_a
                }),
                ratio_growth: Box::new(move |m| ln_a + half_qf(m) + 2.0 / m as f64),
            },
            ln_d + ln_big_a,
        ),
        SeriesId::Lipschitz => (
            Majorant {
                ln_term: Box::new(move |m| {
                    tri(m)
                        + 2.0 * (2.0 * m as f64 + 1.0).ln()
                        + ln_fact(2 * m + 2)
                        + 3.0 * m as f64 * ln_dw
                        + 0.5 * ln_qfact(a, m)
                        + ln_qfact(a, 2 * m)
                }),
                ratio_growth: Box::new(move |m| {
                    ln_a + half_qf(m) + 2.0 * a.powi(2 * m as i32 - 1) + 2.0 / m as f64
                }),
            },
            ln_d + 3.0 * ln_c - ln_w,
        ),
    };
    let ln_inner = ln_tail(&maj, big_m, ln_a)?;
    let ln_bound = match series {
        SeriesId::Fisher => ln_d + 2.0 * ln_inner,
        _ => outer + ln_inner,
    };
    Ok(TailReport {
        series,
        m: big_m,
        bound: ln_bound.exp(),
        log10_bound: if ln_bound == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            ln_bound / std::f64::consts::LN_10
        },
        formula: series.formula(),
    })
}
