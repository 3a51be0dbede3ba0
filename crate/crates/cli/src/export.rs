use clap::ValueEnum;
use qfock::bounds::{series_tail, SeriesId};
use qfock::calculus::{gibbs_potential, gibbs_residuals};
use qfock::combinat::{self, Family};
use qfock::dualsys::{conjugate_series, fisher_info};
use qfock::univar::{fisher_closed_terms, hermite};
use qfock::{Coeff, Deformation, FockSpace};
use serde_json::{json, Value};

use crate::config::ConfigError;
use crate::report::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Export {
    Xi,
    Gibbs,
    Partitions,
    Hermite,
    Fisher,
}

pub struct Exported {
    pub json: Value,
    pub table: Table,
}

fn word_text(w: &qfock::Word) -> String {
    w.letters().iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}

fn tail_json<C: Coeff>(def: &Deformation<C>, s: SeriesId, m: usize, d: usize) -> Result<Value, ConfigError> {
    Ok(match def.numeric_radius() {
        Some(r) => serde_json::to_value(series_tail(s, m, r, d)?).expect("tail report serializes"),
        None => Value::Null,
    })
}

pub fn xi<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<Exported, ConfigError> {
    let mut per_index = Vec::new();
    let mut rows = Vec::new();
    for i in 1..=space.d() as u8 {
        let v = conjugate_series(space, i, m)?;
        let terms: Vec<Value> = v
            .iter()
            .map(|(w, c)| {
                rows.push(vec![i.to_string(), word_text(w), c.to_string()]);
                json!({"word": w, "coeff": c.to_string()})
            })
            .collect();
        per_index.push(json!({"i": i, "terms": terms}));
    }
    Ok(Exported {
        json: json!({
            "series_m": m,
            "xi": per_index,
            "tail": tail_json(space.deformation(), SeriesId::Xi, m, space.d())?,
        }),
        table: Table {
            columns: vec!["i", "word", "coeff"],
            rows,
        },
    })
}

pub fn gibbs<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<Exported, ConfigError> {
    let v = gibbs_potential(space, m)?;
    let residuals = gibbs_residuals(space, m)?;
    let rows = v.iter().map(|(w, c)| vec![word_text(w), c.to_string()]).collect();
    let mut json = v.to_json();
    json["series_m"] = json!(m);
    json["residual_by_degree"] = json!(residuals
        .iter()
        .map(|(k, r)| json!({"degree": k, "residual": r}))
        .collect::<Vec<_>>());
    json["tail"] = tail_json(space.deformation(), SeriesId::Gibbs, m, space.d())?;
    Ok(Exported {
        json,
        table: Table {
            columns: vec!["word", "coeff"],
            rows,
        },
    })
}

pub fn partitions(family: Family, n: usize) -> Exported {
    let list = combinat::cached(family, n);
    let mut rows = Vec::new();
    let items: Vec<Value> = list
        .iter()
        .map(|p| {
            let pairs: Vec<[usize; 2]> = p.pairs.iter().map(|&(a, b)| [a, b]).collect();
            let cr = p.crossings();
            rows.push(vec![
                format!("{pairs:?}"),
                format!("{:?}", p.singletons),
                p.partner0.map(|k| k.to_string()).unwrap_or_default(),
                cr.to_string(),
            ]);
            json!({
                "pairs": pairs,
                "singletons": p.singletons,
                "partner0": p.partner0,
                "crossings": cr,
            })
        })
        .collect();
    Exported {
        json: json!({"family": family.to_string(), "n": n, "partitions": items}),
        table: Table {
            columns: vec!["pairs", "singletons", "partner0", "crossings"],
            rows,
        },
    }
}

pub fn hermite_table<C: Coeff>(q: &C, max_n: usize) -> Exported {
    let mut rows = Vec::new();
    let polys: Vec<Value> = (0..=max_n)
        .map(|n| {
            let h = hermite(q, n);
            let coeffs: Vec<String> = h.coeffs().iter().map(ToString::to_string).collect();
            for (k, c) in coeffs.iter().enumerate() {
                rows.push(vec![n.to_string(), k.to_string(), c.clone()]);
            }
            json!({"n": n, "coeffs": coeffs})
        })
        .collect();
    Exported {
        json: json!({"hermite": polys}),
        table: Table {
            columns: vec!["n", "power", "coeff"],
            rows,
        },
    }
}

/// Partial sums of the Fisher information for `M' = 0..=M`; for one scalar
/// variable also the closed-form series next to them.
pub fn fisher<C: Coeff>(space: &FockSpace<C>, m: usize) -> Result<Exported, ConfigError> {
    let closed = match (space.d(), space.deformation()) {
        (1, Deformation::Scalar(q)) => Some(fisher_closed_terms(q, m + 1)?),
        _ => None,
    };
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut closed_sum = C::zero();
    for k in 0..=m {
        let f = fisher_info(space, k)?;
        let formula = closed.as_ref().map(|t| {
            closed_sum += &t[k];
            closed_sum.clone()
        });
        let residual = formula.as_ref().map(|c| (f.value.clone() - c).magnitude());
        rows.push(vec![
            k.to_string(),
            f.value.to_string(),
            formula.as_ref().map(ToString::to_string).unwrap_or_default(),
            residual.map(|r| r.to_string()).unwrap_or_default(),
            f.tail.as_ref().map(|t| t.bound.to_string()).unwrap_or_default(),
        ]);
        items.push(json!({
            "series_m": k,
            "value": f.value.to_string(),
            "per_index": f.per_index.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "formula": formula.map(|c| c.to_string()),
            "residual": residual,
            "tail": f.tail,
        }));
    }
    Ok(Exported {
        json: json!({"fisher": items}),
        table: Table {
            columns: vec!["series_m", "value", "formula", "residual", "tail_bound"],
            rows,
        },
    })
}
