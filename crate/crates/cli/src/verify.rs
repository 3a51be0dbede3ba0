use std::sync::Arc;

use clap::ValueEnum;
use qfock::bounds::{
    gram_domination_residual, haagerup_residual, right_annihilation_norm, series_tail, SeriesId,
};
use qfock::calculus::{
    diff_partition, diff_quotient, duality_residual_with, gibbs_residuals, wick_partition,
    wick_recursive, NCPoly, Wick,
};
use qfock::dualsys::{commutator_residual, conjugate_series, dual_partition, dual_recursive, Strategy};
use qfock::qscalar::analytic_constants;
use qfock::univar::{
    conjugate_cheb_vector, dual_closed_form, hermite, q_identity_residual, rescale_identity_residual,
    trace_cheb, trace_cheb_odd, xi_closed_form,
};
use qfock::{Coeff, Deformation, FockSpace, FockVector, Word};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::ConfigError;
use crate::report::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Commutator,
    DualAgree,
    WickAgree,
    DerivativeAgree,
    Duality,
    Gibbs,
    Bounds,
    Univar,
    All,
}

impl Suite {
    pub fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }

    fn expand(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Commutator, DualAgree, WickAgree, DerivativeAgree, Duality, Gibbs, Bounds, Univar],
            s => vec![s],
        }
    }

    fn needs_series(self) -> bool {
        matches!(self, Suite::Duality | Suite::Gibbs | Suite::Univar | Suite::All)
    }
}

pub struct Ctx<C> {
    pub space: FockSpace<C>,
    pub level: usize,
    pub m: usize,
    pub seed: u64,
    /// Residual tolerance: 0 for exact arithmetic.
    pub tol: f64,
}

type Job = Box<dyn Fn() -> Check + Send + Sync>;

impl<C: Coeff> Ctx<C> {
    pub fn new(d: usize, deformation: Deformation<C>, level: usize, m: usize, seed: u64) -> Result<Self, ConfigError> {
        Ok(Ctx {
            space: FockSpace::new(d, deformation, level)?,
            level,
            m,
            seed,
            tol: if C::is_exact() { 0.0 } else { 1e-8 },
        })
    }

    fn d(&self) -> usize {
        self.space.d()
    }

    fn deformation(&self) -> &Deformation<C> {
        self.space.deformation()
    }

    /// Signed scalar `q`, or `max |q_ij|` for a matrix (a heuristic surrogate).
    fn numeric_q(&self) -> Option<(f64, bool)> {
        match self.deformation() {
            Deformation::Scalar(q) => q.to_f64().map(|x| (x, false)),
            Deformation::Matrix(_) => self.deformation().numeric_radius().map(|x| (x, true)),
        }
    }
}

/// Scans items in order, keeping the largest residual and the first item
/// whose residual exceeds the tolerance.
struct Scan {
    max: f64,
    first_bad: Option<String>,
    checked: usize,
    tol: f64,
}

impl Scan {
    fn new(tol: f64) -> Self {
        Scan {
            max: 0.0,
            first_bad: None,
            checked: 0,
            tol,
        }
    }

    fn record(&mut self, r: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if r > self.max || r.is_nan() {
            self.max = if r.is_nan() { f64::INFINITY } else { r };
        }
        if self.first_bad.is_none() && !(r <= self.tol) {
            self.first_bad = Some(what());
        }
    }

    fn finish(self, check: String, params: Value) -> Check {
        let n = self.checked;
        Check::residual(check, params, self.max, self.tol)
            .witness(self.first_bad)
            .note(format!("{n} cases"))
    }
}

fn vec_diff<C: Coeff>(a: &FockVector<C>, b: &FockVector<C>) -> f64 {
    a.sub(b).max_magnitude().0
}

fn poly_diff<C: Coeff>(a: &NCPoly<C>, b: &NCPoly<C>) -> f64 {
    a.sub(b).max_magnitude().0
}

fn guarded(check: String, params: Value, f: impl FnOnce() -> qfock::Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(check, params, e.to_string()))
}

pub fn run<C: Coeff>(ctx: Arc<Ctx<C>>, suite: Suite) -> Result<Vec<Check>, ConfigError> {
    if suite.needs_series() && 2 * ctx.m + 1 > ctx.level {
        return Err(ConfigError(format!(
            "--series-m {} needs --level >= {}",
            ctx.m,
            2 * ctx.m + 1
        )));
    }
    let mut jobs: Vec<Job> = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Commutator => commutator_jobs(&ctx, &mut jobs),
            Suite::DualAgree => dual_jobs(&ctx, &mut jobs),
            Suite::WickAgree => wick_jobs(&ctx, &mut jobs),
            Suite::DerivativeAgree => derivative_jobs(&ctx, &mut jobs),
            Suite::Duality => duality_jobs(&ctx, &mut jobs),
            Suite::Gibbs => gibbs_jobs(&ctx, &mut jobs),
            Suite::Bounds => bounds_jobs(&ctx, &mut jobs),
            Suite::Univar => univar_jobs(&ctx, &mut jobs),
            Suite::All => unreachable!(),
        }
    }
    Ok(jobs.par_iter().map(|j| j()).collect())
}

fn letters(d: usize) -> impl Iterator<Item = u8> + Clone {
    1..=d as u8
}

fn commutator_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    for i in letters(ctx.d()) {
        for j in letters(ctx.d()) {
            for (sname, strategy) in [("partition", Strategy::PartitionFormula), ("recursive", Strategy::Recursive)] {
                let ctx = ctx.clone();
                jobs.push(Box::new(move || {
                    let limit = ctx.level - 1;
                    let id = format!("commutator/i{i}-j{j}/{sname}");
                    let params = json!({"i": i, "j": j, "strategy": sname, "max_len": limit});
                    guarded(id.clone(), params.clone(), || {
                        let r = commutator_residual(&ctx.space, i, j, limit, strategy)?;
                        let note = format!("{} words", r.checked);
                        Ok(Check::residual(id, params, r.max, ctx.tol)
                            .witness(r.witness.map(|w| format!("e_{w}")))
                            .note(note))
                    })
                }));
            }
        }
    }
}

fn dual_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    for i in letters(ctx.d()) {
        let ctx = ctx.clone();
        jobs.push(Box::new(move || {
            let max_len = ctx.level - 1;
            let id = format!("dual-agree/i{i}");
            let params = json!({"i": i, "max_len": max_len});
            guarded(id.clone(), params.clone(), || {
                let mut scan = Scan::new(ctx.tol);
                for w in Word::all_up_to(ctx.d(), max_len) {
                    let a = dual_partition(&ctx.space, i, &w)?;
                    let b = dual_recursive(&ctx.space, i, &FockVector::basis(w.clone()))?;
                    scan.record(vec_diff(&a, &b), || format!("e_{w}"));
                }
                Ok(scan.finish(id, params))
            })
        }));
    }
}

fn wick_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    for n in 0..=ctx.level {
        let ctx = ctx.clone();
        jobs.push(Box::new(move || {
            let mut scan = Scan::new(ctx.tol);
            for w in Word::all(ctx.d(), n) {
                let a = wick_partition(ctx.deformation(), &w);
                let b = wick_recursive(ctx.deformation(), &w);
                scan.record(poly_diff(&a, &b), || format!("e_{w}"));
            }
            scan.finish(format!("wick-agree/len{n}"), json!({"len": n}))
        }));
    }
}

fn derivative_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    for i in letters(ctx.d()) {
        let ctx = ctx.clone();
        jobs.push(Box::new(move || {
            let wick = Wick::new(ctx.deformation().clone());
            let mut scan = Scan::new(ctx.tol);
            for w in Word::all_up_to(ctx.d(), ctx.level) {
                let a = diff_partition(&wick, i, &w);
                let b = diff_quotient(i, &wick.recursive(&w));
                scan.record(a.sub(&b).max_magnitude(), || format!("e_{w}"));
            }
            scan.finish(format!("derivative-agree/i{i}"), json!({"i": i, "max_len": ctx.level}))
        }));
    }
}

fn duality_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    for i in letters(ctx.d()) {
        let ctx = ctx.clone();
        jobs.push(Box::new(move || {
            let max_len = ctx.level.min(2 * ctx.m + 2);
            let id = format!("duality/i{i}");
            let params = json!({"i": i, "series_m": ctx.m, "max_len": max_len});
            guarded(id.clone(), params.clone(), || {
                let xi = conjugate_series(&ctx.space, i, ctx.m)?;
                let mut scan = Scan::new(ctx.tol);
                for u in Word::all_up_to(ctx.d(), max_len) {
                    let r = duality_residual_with(&ctx.space, &xi, &u, i)?;
                    scan.record(r.magnitude(), || format!("A^{u}"));
                }
                Ok(scan.finish(id, params))
            })
        }));
    }
}

fn gibbs_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    let ctx = ctx.clone();
    jobs.push(Box::new(move || {
        let id = "gibbs/cyclic-gradient".to_string();
        let params = json!({"series_m": ctx.m, "max_degree": 2 * ctx.m});
        guarded(id.clone(), params.clone(), || {
            let res = gibbs_residuals(&ctx.space, ctx.m)?;
            let mut scan = Scan::new(ctx.tol);
            for (k, r) in res.range(..=2 * ctx.m) {
                scan.record(*r, || format!("degree {k}"));
            }
            let per_degree: Vec<String> = res.iter().map(|(k, r)| format!("{k}:{r:e}")).collect();
            Ok(scan
                .finish(id, params)
                .note(format!("per-degree residual {}", per_degree.join(" "))))
        })
    }));
}

fn bounds_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    let Some((q0, surrogate)) = ctx.numeric_q() else {
        jobs.push(Box::new(|| {
            Check::new("bounds/skipped", json!({}), 0.0, 0.0, true).note("analytic bounds need a numeric q")
        }));
        return;
    };
    let d = ctx.d();
    let level = ctx.level;
    let tag = move |c: Check| {
        if surrogate {
            c.note("heuristic: max|q_ij| used as scalar q")
        } else {
            c
        }
    };
    for m in 0..level {
        jobs.push(Box::new(move || {
            let id = format!("bounds/gram-domination/m{m}");
            let params = json!({"m": m, "q0": q0, "d": d});
            tag(guarded(id.clone(), params.clone(), || {
                let r = gram_domination_residual(m, q0, d)?;
                Ok(Check::new(id, params, r, -1e-9, r >= -1e-9))
            }))
        }));
    }
    for i in letters(d) {
        jobs.push(Box::new(move || {
            let id = format!("bounds/right-annihilation/i{i}");
            let params = json!({"i": i, "q0": q0, "d": d, "level": level});
            tag(guarded(id.clone(), params.clone(), || {
                let w = analytic_constants(q0)?.w;
                let n = right_annihilation_norm(i, q0, d, level)?;
                let bound = 1.0 / w.sqrt() + 1e-9;
                Ok(Check::new(id, params, n, bound, n <= bound))
            }))
        }));
    }
    let seed = ctx.seed;
    for m in 0..=level.min(4) {
        jobs.push(Box::new(move || {
            let id = format!("bounds/haagerup/m{m}");
            let params = json!({"m": m, "q0": q0, "d": d, "trials": 50, "seed": seed});
            tag(guarded(id.clone(), params.clone(), || {
                let h = haagerup_residual(m, q0, d, 50, seed)?;
                Ok(Check::new(id, params, h.residual, 0.0, h.residual <= 0.0)
                    .note(format!("max ratio {:.4}, domain level {}", h.max_ratio, h.domain_level)))
            }))
        }));
    }
    let big_m = ctx.m;
    for s in SeriesId::ALL {
        jobs.push(Box::new(move || {
            let id = format!("bounds/tail/{s}");
            let params = json!({"series": s, "series_m": big_m, "q0": q0, "d": d});
            tag(guarded(id.clone(), params.clone(), || {
                let a = series_tail(s, big_m, q0, d)?;
                let b = series_tail(s, big_m + 1, q0, d)?;
                let ok = a.log10_bound.is_finite() || a.bound == 0.0;
                let monotone = b.log10_bound <= a.log10_bound;
                Ok(Check::new(id, params, a.log10_bound, f64::INFINITY, ok && monotone)
                    .note(format!("log10 tail bound; {}", a.formula)))
            }))
        }));
    }
}

fn univar_jobs<C: Coeff>(ctx: &Arc<Ctx<C>>, jobs: &mut Vec<Job>) {
    let Deformation::Scalar(q) = ctx.deformation().clone() else {
        jobs.push(Box::new(|| {
            Check::new("univar/skipped", json!({}), 0.0, 0.0, true).note("one-variable checks need a scalar q")
        }));
        return;
    };
    let level = ctx.level;
    let big_m = ctx.m;
    let tol = ctx.tol;
    let one = match FockSpace::scalar(1, q.clone(), level) {
        Ok(f) => Arc::new(f),
        Err(e) => {
            let why = e.to_string();
            jobs.push(Box::new(move || Check::failed("univar/space", json!({}), why.clone())));
            return;
        }
    };
    {
        let (one, q) = (one.clone(), q.clone());
        jobs.push(Box::new(move || {
            let id = "univar/dual-closed-form".to_string();
            let params = json!({"max_n": level - 1});
            guarded(id.clone(), params.clone(), || {
                let mut scan = Scan::new(tol);
                for n in 0..level {
                    let rec = dual_recursive(&one, 1, &FockVector::basis(Word::new(vec![1; n])))?;
                    scan.record(vec_diff(&rec, &dual_closed_form(&q, n)?), || format!("De_{n}"));
                }
                Ok(scan.finish(id, params))
            })
        }));
    }
    {
        let (one, q) = (one.clone(), q.clone());
        jobs.push(Box::new(move || {
            let id = "univar/xi-closed-form".to_string();
            let params = json!({"max_series_m": big_m});
            guarded(id.clone(), params.clone(), || {
                let mut scan = Scan::new(tol);
                for m in 0..=big_m {
                    let xi = conjugate_series(&one, 1, m)?;
                    scan.record(vec_diff(&xi, &xi_closed_form(&q, m)?), || format!("M={m}"));
                }
                Ok(scan.finish(id, params))
            })
        }));
    }
    {
        let q = q.clone();
        jobs.push(Box::new(move || {
            let def = Deformation::Scalar(q.clone());
            let mut scan = Scan::new(tol);
            for n in 0..=level {
                let h = hermite(&q, n);
                let as_nc = NCPoly::from_terms(
                    h.coeffs().iter().enumerate().map(|(k, c)| (Word::new(vec![1; k]), c.clone())),
                );
                scan.record(poly_diff(&as_nc, &wick_recursive(&def, &Word::new(vec![1; n]))), || {
                    format!("H_{n}")
                });
            }
            scan.finish("univar/hermite".to_string(), json!({"max_n": level}))
        }));
    }
    {
        let (one, q) = (one.clone(), q.clone());
        jobs.push(Box::new(move || {
            let id = "univar/trace-cheb".to_string();
            let params = json!({"max_n": level / 2});
            guarded(id.clone(), params.clone(), || {
                let mut scan = Scan::new(tol);
                for n in 0..=level / 2 {
                    let mut expect = q.pow((n * (n + 1) / 2) as u32);
                    if n % 2 == 1 {
                        expect = -expect;
                    }
                    let got = trace_cheb(&one, n)?;
                    scan.record((got - &expect).magnitude(), || format!("U_{}", 2 * n));
                    if n > 0 {
                        scan.record(trace_cheb_odd(&one, n)?.magnitude(), || format!("U_{}", 2 * n - 1));
                    }
                }
                Ok(scan.finish(id, params))
            })
        }));
    }
    let Some(q0) = q.to_f64() else {
        return;
    };
    jobs.push(Box::new(move || {
        let id = "univar/rescale-identity".to_string();
        let params = json!({"q0": q0, "max_n": 8});
        guarded(id.clone(), params.clone(), || {
            let mut scan = Scan::new(1e-10);
            for n in 0..=8 {
                scan.record(rescale_identity_residual(n, q0)?, || format!("n={n}"));
            }
            Ok(scan.finish(id, params))
        })
    }));
    for m in 0..=5 {
        jobs.push(Box::new(move || {
            let id = format!("univar/q-identity/m{m}");
            let params = json!({"q0": q0, "m": m, "N": 200});
            guarded(id.clone(), params.clone(), || {
                let r = q_identity_residual(m, q0, 200)?;
                let bound = 1e-12 + r.tail_bound;
                Ok(Check::new(id, params, r.residual, bound, r.residual <= bound)
                    .note(format!("tail bound {:e}", r.tail_bound)))
            })
        }));
    }
    jobs.push(Box::new(move || {
        // enough Chebyshev terms that q^{n(n+1)/2} is below double precision
        let a = q0.abs();
        let mut n_cheb = big_m.max(12);
        while a > 0.0 && a.powf((n_cheb * (n_cheb + 1)) as f64 / 2.0) > 1e-17 {
            n_cheb += 1;
        }
        let id = "univar/chebyshev-series".to_string();
        let params = json!({"q0": q0, "series_m": big_m, "chebyshev_terms": n_cheb});
        guarded(id.clone(), params.clone(), || {
            let cheb = conjugate_cheb_vector(n_cheb, q0)?;
            let xi = xi_closed_form(&q0, big_m)?;
            let mut scan = Scan::new(1e-10);
            for n in 0..=2 * big_m + 1 {
                let w = Word::new(vec![1; n]);
                scan.record((cheb.get(&w) - xi.get(&w)).abs(), || format!("e_{w}"));
            }
            Ok(scan.finish(id, params))
        })
    }));
}
