//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use qfock::bounds::{
    gram_domination_residual, haagerup_residual, right_annihilation_norm, series_tail, SeriesId,
};
use qfock::calculus::{
    diff_partition, diff_quotient, duality_residual_with, gibbs_potential, gibbs_residuals,
    wick_partition, wick_recursive, NCPoly, Wick,
};
use qfock::combinat::{self, inversions, induced_permutation, DrawnPartition, Family};
use qfock::dualsys::{
    commutator_residual, conjugate_series, dual_partition, dual_recursive, fisher_info, Strategy,
};
use qfock::qscalar::{analytic_constants, q_int};
use qfock::univar::{
    dual_closed_form, hermite, q_identity_residual, rescale_identity_residual, trace_cheb,
    trace_cheb_odd, xi_closed_form,
};
use qfock::{Coeff, Deformation, DeformationMatrix, FockSpace, FockVector, Scalar, Word};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rationals() -> Vec<(String, Scalar)> {
    [(0, 1), (1, 2), (-1, 2), (9, 10), (-9, 10)]
        .into_iter()
        .map(|(a, b)| (format!("{a}/{b}"), Scalar::ratio(a, b)))
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn commutator_zero<C: Coeff>(f: &FockSpace<C>, limit: usize, label: &str) -> Outcome {
    for strategy in [Strategy::Recursive, Strategy::PartitionFormula] {
        for i in 1..=f.d() as u8 {
            for j in 1..=f.d() as u8 {
                let r = commutator_residual(f, i, j, limit, strategy).map_err(err)?;
                ensure!(r.is_zero(), "{label} i={i} j={j} {strategy:?}: {r}");
            }
        }
    }
    Ok(String::new())
}

fn c1_commutator() -> Outcome {
    let t = Instant::now();
    for (label, q) in rationals() {
        let f = FockSpace::scalar(2, q, 6).map_err(err)?;
        commutator_zero(&f, 5, &label)?;
    }
    let f = FockSpace::scalar(2, Scalar::q(), 7).map_err(err)?;
    commutator_zero(&f, 6, "symbolic")?;
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 30.0, "took {secs:.1}s");
    Ok(format!("{secs:.1}s"))
}

fn c2_dual() -> Outcome {
    for d in 1..=2 {
        let f = FockSpace::scalar(d, Scalar::q(), 8).map_err(err)?;
        for w in Word::all_up_to(d, 7) {
            for i in 1..=d as u8 {
                let a = dual_partition(&f, i, &w).map_err(err)?;
                let b = dual_recursive(&f, i, &FockVector::basis(w.clone())).map_err(err)?;
                ensure!(a == b, "d={d} i={i} {w:?}: {a} vs {b}");
            }
        }
    }
    let q = Scalar::q();
    let poly = |c: &[i64]| Scalar::from_poly(qfock::QPoly::from_i64_coeffs(c));
    let e = |n: usize| Word::new(vec![1; n]);
    let reference: Vec<(usize, Vec<(usize, Scalar)>)> = vec![
        (2, vec![(1, Scalar::int(1))]),
        (3, vec![(2, Scalar::int(1)), (0, -q.clone())]),
        (4, vec![(3, Scalar::int(1)), (1, -poly(&[0, 1, 1]))]),
        (5, vec![(4, Scalar::int(1)), (2, -poly(&[0, 1, 1, 1])), (0, poly(&[0, 0, 0, 1, 1]))]),
        (
            6,
            vec![
                (5, Scalar::int(1)),
                (3, -poly(&[0, 1, 0, 1, 1])),
                (1, poly(&[0, 0, 0, 1, 1]) * poly(&[1, 1, 1])),
            ],
        ),
    ];
    let f = FockSpace::scalar(1, Scalar::q(), 7).map_err(err)?;
    let mut notes = Vec::new();
    for (n, coeffs) in reference {
        let got = dual_recursive(&f, 1, &FockVector::basis(e(n))).map_err(err)?;
        ensure!(got.len() == coeffs.len(), "De_{n} has {} terms", got.len());
        for (k, c) in coeffs {
            let g = got.get(&e(k));
            if g == c {
                continue;
            }
            // the reference e_3 coefficient of De_6 drops the q^2 term of q[4]_q
            let misprint = n == 6 && k == 3 && g == -(q.clone() * q_int(4)) && g.clone() - &c == -(q.clone() * &q);
            ensure!(misprint, "De_{n}, e_{k}: computed {g}, reference {c}");
            notes.push(format!("De_6 e_3 reference {c} is a misprint, computed {g} = -q[4]_q"));
        }
    }
    Ok(notes.join("; "))
}

fn c3_wick() -> Outcome {
    let sym = Deformation::Scalar(Scalar::q());
    for d in 1..=2 {
        for w in Word::all_up_to(d, 6) {
            let a = wick_partition(&sym, &w);
            let b = wick_recursive(&sym, &w);
            ensure!(a == b, "{w:?}: {a} vs {b}");
        }
    }
    for n in 0..=8 {
        let h = hermite(&Scalar::q(), n);
        let as_nc = NCPoly::from_terms(h.coeffs().iter().enumerate().map(|(k, c)| (Word::new(vec![1; k]), c.clone())));
        ensure!(as_nc == wick_recursive(&sym, &Word::new(vec![1; n])), "H_{n}");
    }
    Ok(String::new())
}

fn c4_derivative() -> Outcome {
    let wick = Wick::new(Deformation::Scalar(Scalar::q()));
    for d in 1..=2 {
        for w in Word::all_up_to(d, 6) {
            for i in 1..=d as u8 {
                let a = diff_partition(&wick, i, &w);
                let b = diff_quotient(i, &wick.recursive(&w));
                ensure!(a == b, "d={d} i={i} {w:?}");
            }
        }
    }
    let unit = NCPoly::one();
    for w in Word::all(2, 3) {
        let (j3, j2, j1) = (w.letters()[0], w.letters()[1], w.letters()[2]);
        let e = |x: &[u8]| wick.recursive(&Word::from(x));
        for i in 1..=2u8 {
            let mut expect = qfock::calculus::NCTensorPoly::zero();
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
                expect.add_term(Word::empty(), Word::empty(), -Scalar::q());
            }
            ensure!(diff_partition(&wick, i, &w) == expect, "three-letter formula, i={i} {w:?}");
        }
    }
    Ok(String::new())
}

fn c5_duality() -> Outcome {
    let f = FockSpace::scalar(2, Scalar::ratio(1, 2), 7).map_err(err)?;
    for i in 1..=2u8 {
        let xi = conjugate_series(&f, i, 3).map_err(err)?;
        for u in Word::all_up_to(2, 5) {
            let r = duality_residual_with(&f, &xi, &u, i).map_err(err)?;
            ensure!(r.is_zero(), "i={i} u={u:?}: {r}");
        }
    }
    for d in 1..=2 {
        let f = FockSpace::scalar(d, Scalar::int(0), 7).map_err(err)?;
        for i in 1..=d as u8 {
            let xi = conjugate_series(&f, i, 3).map_err(err)?;
            ensure!(xi == FockVector::basis(Word::letter(i)), "q=0 xi_{i} = {xi}");
        }
        let fi = fisher_info(&f, 3).map_err(err)?;
        ensure!(fi.value == Scalar::int(d as i64), "q=0 Fisher {}", fi.value);
    }
    Ok(String::new())
}

fn find(family: Family, n_vertices: usize, pairs: &[(usize, usize)]) -> Option<DrawnPartition> {
    combinat::enumerate(family, n_vertices)
        .into_iter()
        .find(|p| p.pairs == pairs)
}

fn c6_crossings() -> Outcome {
    let mut count = 0;
    for m in 1..=5 {
        for p in combinat::enumerate(Family::B, 2 * m) {
            if p.partner0 != Some(m) || !p.singletons.is_empty() {
                continue;
            }
            let perm = induced_permutation(&p).map_err(err)?;
            ensure!(
                p.crossings() == m * (m - 1) / 2 + inversions(&perm),
                "m={m} {:?}: {} crossings",
                p.pairs,
                p.crossings()
            );
            count += 1;
        }
    }
    let reference = [
        (Family::B, 6, vec![(0, 3), (1, 5), (2, 4)], 4),
        (Family::B, 8, vec![(0, 3), (1, 7), (2, 5)], 7),
        (Family::B, 10, vec![(0, 4), (1, 8), (2, 9), (3, 6)], 13),
        (Family::C, 7, vec![(0, 3), (1, 6)], 5),
    ];
    for (fam, nv, pairs, want) in reference {
        let p = find(fam, nv, &pairs).ok_or_else(|| format!("{fam} {pairs:?} not enumerated"))?;
        ensure!(p.crossings() == want, "{fam} {pairs:?}: {} != {want}", p.crossings());
    }
    Ok(format!("{count} full pairings"))
}

fn c7_univar() -> Outcome {
    let q = Scalar::q();
    let f = FockSpace::scalar(1, q.clone(), 11).map_err(err)?;
    for n in 0..=10 {
        let rec = dual_recursive(&f, 1, &FockVector::basis(Word::new(vec![1; n]))).map_err(err)?;
        ensure!(rec == dual_closed_form(&q, n).map_err(err)?, "De_{n}");
    }
    let f = FockSpace::scalar(1, q.clone(), 9).map_err(err)?;
    for m in 0..=4 {
        let multi = conjugate_series(&f, 1, m).map_err(err)?;
        ensure!(multi == xi_closed_form(&q, m).map_err(err)?, "xi, M={m}");
    }
    Ok(String::new())
}

fn c8_identities() -> Outcome {
    let q = Scalar::q();
    let f = FockSpace::scalar(1, q.clone(), 8).map_err(err)?;
    for n in 0..=4 {
        let mut expect = q.pow((n * (n + 1) / 2) as u32);
        if n % 2 == 1 {
            expect = -expect;
        }
        ensure!(trace_cheb(&f, n).map_err(err)? == expect, "tau(U_{})", 2 * n);
        if n > 0 {
            ensure!(trace_cheb_odd(&f, n).map_err(err)?.is_zero(), "tau(U_{})", 2 * n - 1);
        }
    }
    let mut worst: f64 = 0.0;
    for q0 in [0.5, -0.5, 0.9, -0.9] {
        for n in 0..=8 {
            let r = rescale_identity_residual(n, q0).map_err(err)?;
            ensure!(r < 1e-10, "rescale n={n} q={q0}: {r:e}");
            worst = worst.max(r);
        }
    }
    let mut worst_id: f64 = 0.0;
    for q0 in [0.5, -0.5] {
        for m in 0..=5 {
            let r = q_identity_residual(m, q0, 200).map_err(err)?;
            ensure!(r.residual < 1e-12, "q-identity m={m} q={q0}: {:e}", r.residual);
            worst_id = worst_id.max(r.residual);
        }
    }
    Ok(format!("rescale max {worst:.1e}, q-identity max {worst_id:.1e}"))
}

fn c9_bounds() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for q0 in [0.5, -0.9] {
        let w = analytic_constants(q0).map_err(err)?.w;
        let mut min_dom = f64::INFINITY;
        for m in 0..=5 {
            let r = gram_domination_residual(m, q0, 2).map_err(err)?;
            min_dom = min_dom.min(r);
            if r < -1e-9 {
                failures.push(format!("domination q={q0} m={m}: {r:.6}"));
            }
        }
        notes.push(format!("q={q0}: min domination eigenvalue {min_dom:.4}"));
        for level in 1..=6 {
            let n = right_annihilation_norm(1, q0, 2, level).map_err(err)?;
            if n > 1.0 / w.sqrt() + 1e-9 {
                failures.push(format!("||r_1|| q={q0} L={level}: {n} > {}", 1.0 / w.sqrt()));
            }
        }
        for m in 0..=4 {
            let h = haagerup_residual(m, q0, 2, 50, 7).map_err(err)?;
            if h.residual > 0.0 {
                failures.push(format!("haagerup q={q0} m={m}: {:e}", h.residual));
            }
        }
    }
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(notes.join("; "))
}

fn c10_gibbs() -> Outcome {
    for d in 1..=2 {
        let f = FockSpace::scalar(d, Scalar::ratio(1, 2), 5).map_err(err)?;
        let res = gibbs_residuals(&f, 2).map_err(err)?;
        for (k, r) in res.range(..=4) {
            ensure!(*r == 0.0, "d={d} degree {k}: {r}");
        }
    }
    let f = FockSpace::scalar(2, Scalar::int(0), 5).map_err(err)?;
    let v = gibbs_potential(&f, 2).map_err(err)?;
    let half = Scalar::ratio(1, 2);
    let expect = NCPoly::from_terms([(Word::from([1, 1]), half.clone()), (Word::from([2, 2]), half)]);
    ensure!(v == expect, "q=0: V = {v}");
    Ok(String::new())
}

fn c11_mixed() -> Outcome {
    let m = DeformationMatrix::new(vec![
        vec![Scalar::ratio(1, 3), Scalar::ratio(1, 5)],
        vec![Scalar::ratio(1, 5), Scalar::ratio(-1, 4)],
    ])
    .map_err(err)?;
    let f = FockSpace::new(2, Deformation::Matrix(m), 5).map_err(err)?;
    commutator_zero(&f, 4, "mixed")?;

    for q in [Scalar::ratio(1, 2), Scalar::q()] {
        let scalar = FockSpace::scalar(2, q.clone(), 5).map_err(err)?;
        let constant = FockSpace::new(2, Deformation::Matrix(DeformationMatrix::constant(2, q.clone())), 5).map_err(err)?;
        let ws = Wick::new(scalar.deformation().clone());
        let wc = Wick::new(constant.deformation().clone());
        for w in Word::all_up_to(2, 5) {
            let ew = FockVector::basis(w.clone());
            for i in 1..=2u8 {
                ensure!(scalar.annihilate(i, &ew).map_err(err)? == constant.annihilate(i, &ew).map_err(err)?, "l_{i} {w:?}");
                ensure!(dual_partition(&scalar, i, &w).map_err(err)? == dual_partition(&constant, i, &w).map_err(err)?, "D_{i} {w:?}");
                ensure!(diff_partition(&ws, i, &w) == diff_partition(&wc, i, &w), "d_{i} {w:?}");
                if w.len() < 5 {
                    ensure!(
                        scalar.right_annihilate_adjoint(i, &ew).map_err(err)?
                            == constant.right_annihilate_adjoint(i, &ew).map_err(err)?,
                        "r*_{i} {w:?}"
                    );
                }
            }
            ensure!(ws.partition(&w) == wc.partition(&w), "Q[{w:?}]");
            ensure!(
                scalar.norm_sq(&ew).map_err(err)? == constant.norm_sq(&ew).map_err(err)?,
                "||e_w||, {w:?}"
            );
        }
        for i in 1..=2u8 {
            ensure!(
                conjugate_series(&scalar, i, 2).map_err(err)? == conjugate_series(&constant, i, 2).map_err(err)?,
                "xi_{i}"
            );
        }
        ensure!(gibbs_potential(&scalar, 2).map_err(err)? == gibbs_potential(&constant, 2).map_err(err)?, "V");
    }
    Ok(String::new())
}

fn c12_tails() -> Outcome {
    let mut checked = 0;
    for series in SeriesId::ALL {
        for q0 in [0.0, 0.5, -0.5, 0.9, -0.9] {
            for d in 1..=2 {
                let mut prev = f64::INFINITY;
                for m in 0..=20 {
                    let t = series_tail(series, m, q0, d).map_err(err)?;
                    ensure!(t.log10_bound < f64::INFINITY, "{series} q={q0} d={d} M={m}: not finite");
                    ensure!(t.log10_bound <= prev, "{series} q={q0} d={d}: M={m} tail grew");
                    if t.bound.is_finite() {
                        ensure!(t.bound >= 0.0, "{series} negative bound");
                    }
                    prev = t.log10_bound;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} reports, compared on log10(bound)"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("commutator identity", c1_commutator),
        ("dual system closed form vs recursion", c2_dual),
        ("Wick agreement", c3_wick),
        ("derivative agreement", c4_derivative),
        ("conjugate duality", c5_duality),
        ("crossing identity", c6_crossings),
        ("one-variable closed forms", c7_univar),
        ("one-variable identities", c8_identities),
        ("analytic bounds", c9_bounds),
        ("Gibbs potential", c10_gibbs),
        ("mixed q_ij", c11_mixed),
        ("series tails", c12_tails),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(note) if note.is_empty() => println!("criterion {:>2} {name}: PASS", k + 1),
            Ok(note) => println!("criterion {:>2} {name}: PASS ({note})", k + 1),
            Err(why) => {
                println!("criterion {:>2} {name}: FAIL ({why})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
