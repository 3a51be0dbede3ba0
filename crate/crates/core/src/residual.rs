use std::fmt;

use serde::Serialize;

use crate::word::Word;

/// Outcome of an identity check over many basis words: the largest
/// coefficient magnitude seen and the first word where it occurred.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub max: f64,
    pub witness: Option<Word>,
    pub checked: usize,
}

impl Residual {
    pub fn zero() -> Self {
        Residual {
            max: 0.0,
            witness: None,
            checked: 0,
        }
    }

    pub fn record(&mut self, magnitude: f64, w: &Word) {
        self.checked += 1;
        if magnitude > self.max {
            self.max = magnitude;
            self.witness = Some(w.clone());
        }
    }

    pub fn merge(&mut self, other: Residual) {
        self.checked += other.checked;
        if other.max > self.max {
            self.max = other.max;
            self.witness = other.witness;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max == 0.0
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "max {:e} at e_{w} ({} words)", self.max, self.checked),
            None => write!(f, "0 ({} words)", self.checked),
        }
    }
}
