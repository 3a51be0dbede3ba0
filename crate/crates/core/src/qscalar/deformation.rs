use serde::Deserialize;
use serde_json::Value;

use super::coeff::Coeff;
use super::scalar::parse_rational;
use crate::error::{Error, Result};

/// Symmetric matrix of mixed deformation parameters `q_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationMatrix<C> {
    d: usize,
    entries: Vec<Vec<C>>,
}

impl<C: Coeff> DeformationMatrix<C> {
    pub fn new(entries: Vec<Vec<C>>) -> Result<Self> {
        let d = entries.len();
        if d == 0 {
            return Err(Error::InvalidDeformation("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidDeformation(format!(
                    "row {} has {} entries, expected {d}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..d {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::InvalidDeformation(format!(
                        "not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(DeformationMatrix { d, entries })
    }

    /// `q_ij = q` for all `i, j`.
    pub fn constant(d: usize, q: C) -> Self {
        DeformationMatrix {
            d,
            entries: vec![vec![q; d]; d],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Entry for 1-based letters.
    pub fn get(&self, a: u8, b: u8) -> &C {
        &self.entries[a as usize - 1][b as usize - 1]
    }

    pub fn entries(&self) -> &[Vec<C>] {
        &self.entries
    }

    pub fn is_constant(&self) -> bool {
        let first = &self.entries[0][0];
        self.entries.iter().flatten().all(|e| e == first)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(Coeff::magnitude)
            .fold(0.0, f64::max)
    }

    /// Reads `{"d": 2, "entries": [["1/3", "1/5"], ["1/5", -0.25]]}`. Entries
    /// may be fraction strings or JSON numbers; numbers are read from their
    /// decimal text, so `0.2` means exactly `1/5`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            d: usize,
            entries: Vec<Vec<Value>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let entries = doc
            .entries
            .iter()
            .map(|row| row.iter().map(parse_entry::<C>).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = Self::new(entries)?;
        if m.d != doc.d {
            return Err(Error::InvalidDeformation(format!(
                "declared d = {} but matrix is {}x{}",
                doc.d, m.d, m.d
            )));
        }
        Ok(m)
    }
}

fn parse_entry<C: Coeff>(v: &Value) -> Result<C> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("bad matrix entry {other}"))),
    };
    Ok(C::from_rational(&parse_rational(&text)?))
}

/// The deformation of the Fock space: one scalar `q` or a matrix `q_ij`.
#[derive(Clone, Debug, PartialEq)]
pub enum Deformation<C> {
    Scalar(C),
    Matrix(DeformationMatrix<C>),
}

impl<C: Coeff> Deformation<C> {
    /// `q_ab` for 1-based letters.
    pub fn q(&self, a: u8, b: u8) -> &C {
        match self {
            Deformation::Scalar(q) => q,
            Deformation::Matrix(m) => m.get(a, b),
        }
    }

    /// Product of `q_ab` over the given letter pairs. In the scalar case this
    /// is `q^count`.
    pub fn weight<I>(&self, pairs: I) -> C
    where
        I: IntoIterator<Item = (u8, u8)>,
    {
        match self {
            Deformation::Scalar(q) => q.pow(pairs.into_iter().count() as u32),
            Deformation::Matrix(m) => pairs
                .into_iter()
                .fold(C::one(), |acc, (a, b)| acc * m.get(a, b)),
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Deformation::Scalar(_))
    }

    pub fn max_magnitude(&self) -> f64 {
        match self {
            Deformation::Scalar(q) => q.magnitude(),
            Deformation::Matrix(m) => m.max_magnitude(),
        }
    }

    /// `max |q_ij|` as a number, or `None` while `q` is formal. In the matrix
    /// case this is the scalar surrogate used by the analytic bounds.
    pub fn numeric_radius(&self) -> Option<f64> {
        match self {
            Deformation::Scalar(q) => q.to_f64().map(f64::abs),
            Deformation::Matrix(m) => m
                .entries()
                .iter()
                .flatten()
                .map(|c| c.to_f64().map(f64::abs))
                .try_fold(0.0, |acc: f64, x| x.map(|x| acc.max(x))),
        }
    }

    /// Checks that a matrix deformation matches the alphabet size.
    pub fn check_dimension(&self, d: usize) -> Result<()> {
        match self {
            Deformation::Matrix(m) if m.d() != d => Err(Error::InvalidDeformation(format!(
                "matrix is {0}x{0} but d = {d}",
                m.d()
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::Scalar;

    #[test]
    fn json_entries_exact() {
        let m = DeformationMatrix::<Scalar>::from_json_str(
            r#"{"d": 2, "entries": [["1/3", "1/5"], [0.2, -0.25]]}"#,
        )
        .unwrap();
        assert_eq!(m.get(1, 2), &Scalar::ratio(1, 5));
        assert_eq!(m.get(2, 2), &Scalar::ratio(-1, 4));
        assert!(!m.is_constant());
    }

    #[test]
    fn rejects_asymmetric_and_wrong_d() {
        assert!(DeformationMatrix::<Scalar>::from_json_str(
            r#"{"d": 2, "entries": [["0", "1/5"], ["1/4", "0"]]}"#
        )
        .is_err());
        assert!(DeformationMatrix::<Scalar>::from_json_str(r#"{"d": 3, "entries": [["0"]]}"#)
            .is_err());
    }

    #[test]
    fn scalar_weight_is_power() {
        let d = Deformation::Scalar(Scalar::ratio(1, 2));
        assert_eq!(d.weight([(1, 2), (2, 2), (1, 1)]), Scalar::ratio(1, 8));
        let m = Deformation::Matrix(DeformationMatrix::constant(2, Scalar::ratio(1, 2)));
        assert_eq!(m.weight([(1, 2), (2, 2), (1, 1)]), Scalar::ratio(1, 8));
    }
}
