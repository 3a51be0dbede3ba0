use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use qfock::qscalar::parse_rational;
use qfock::{Coeff, Deformation, DeformationMatrix, Scalar};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Rational `q` (or `q_ij`), exact arithmetic.
    Exact,
    /// `q` left formal; coefficients are rational functions of `q`.
    Symbolic,
    /// `f64` arithmetic.
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Invalid configuration; the process exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<qfock::Error> for ConfigError {
    fn from(e: qfock::Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub enum Setup {
    Scalar(Deformation<Scalar>),
    Float(Deformation<f64>),
}

pub struct RunConfig {
    pub d: usize,
    pub level: usize,
    pub series_m: usize,
    pub mode: Mode,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub setup: Setup,
    q_label: String,
}

pub struct RawConfig {
    pub d: usize,
    pub q: Option<String>,
    pub q_matrix: Option<PathBuf>,
    pub level: usize,
    pub series_m: usize,
    pub mode: Mode,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn check_unit<C: Coeff>(what: &str, c: &C) -> Result<(), ConfigError> {
    match c.to_f64() {
        Some(x) if x.abs() < 1.0 => Ok(()),
        Some(x) => err(format!("{what} = {x} is outside (-1, 1)")),
        None => err(format!("{what} is not numeric")),
    }
}

fn matrix<C: Coeff>(path: &PathBuf, d: usize) -> Result<DeformationMatrix<C>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let m = DeformationMatrix::<C>::from_json_str(&text)?;
    if m.d() != d {
        return err(format!("--d {d} but the matrix in {} is {}x{}", path.display(), m.d(), m.d()));
    }
    for a in 1..=d as u8 {
        for b in 1..=d as u8 {
            check_unit(&format!("q_{a}{b}"), m.get(a, b))?;
        }
    }
    Ok(m)
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        if raw.d == 0 || raw.d > 9 {
            return err(format!("--d must be in 1..=9, got {}", raw.d));
        }
        if raw.level == 0 {
            return err("--level must be positive");
        }
        let (setup, q_label) = match (raw.mode, &raw.q, &raw.q_matrix) {
            (Mode::Symbolic, _, Some(_)) => return err("symbolic mode needs a scalar q"),
            (Mode::Symbolic, Some(q), None) if q != "q" => {
                return err(format!("symbolic mode keeps q formal; got --q {q}"))
            }
            (Mode::Symbolic, _, None) => (Setup::Scalar(Deformation::Scalar(Scalar::q())), "q".to_string()),
            (Mode::Exact, _, Some(p)) => (
                Setup::Scalar(Deformation::Matrix(matrix::<Scalar>(p, raw.d)?)),
                p.display().to_string(),
            ),
            (Mode::Float, _, Some(p)) => (
                Setup::Float(Deformation::Matrix(matrix::<f64>(p, raw.d)?)),
                p.display().to_string(),
            ),
            (mode, q, None) => {
                let text = q.clone().unwrap_or_else(|| "1/2".to_string());
                let r = parse_rational(&text).map_err(|_| ConfigError(format!("cannot parse --q {text}")))?;
                let setup = if mode == Mode::Exact {
                    let s = Scalar::from_rational(&r);
                    check_unit("q", &s)?;
                    Setup::Scalar(Deformation::Scalar(s))
                } else {
                    let x = f64::from_rational(&r);
                    check_unit("q", &x)?;
                    Setup::Float(Deformation::Scalar(x))
                };
                (setup, text)
            }
        };
        Ok(RunConfig {
            d: raw.d,
            level: raw.level,
            series_m: raw.series_m,
            mode: raw.mode,
            seed: raw.seed,
            format: raw.format,
            out: raw.out,
            setup,
            q_label,
        })
    }

    /// Series truncation must fit in the space: `2M + 1 <= L`.
    pub fn require_series_fits(&self) -> Result<(), ConfigError> {
        if 2 * self.series_m + 1 > self.level {
            return err(format!(
                "--series-m {} needs --level >= {}",
                self.series_m,
                2 * self.series_m + 1
            ));
        }
        Ok(())
    }

    pub fn params(&self) -> Value {
        json!({
            "d": self.d,
            "q": self.q_label,
            "level": self.level,
            "series_m": self.series_m,
            "mode": format!("{:?}", self.mode).to_lowercase(),
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(mode: Mode, q: Option<&str>) -> RawConfig {
        RawConfig {
            d: 2,
            q: q.map(str::to_string),
            q_matrix: None,
            level: 6,
            series_m: 2,
            mode,
            seed: 0,
            format: Format::Json,
            out: None,
        }
    }

    #[test]
    fn fractions_stay_exact() {
        let cfg = RunConfig::from_raw(raw(Mode::Exact, Some("-9/10"))).unwrap();
        match cfg.setup {
            Setup::Scalar(Deformation::Scalar(q)) => assert_eq!(q, Scalar::ratio(-9, 10)),
            _ => panic!("expected an exact scalar"),
        }
        let cfg = RunConfig::from_raw(raw(Mode::Exact, Some("0.2"))).unwrap();
        assert!(matches!(cfg.setup, Setup::Scalar(Deformation::Scalar(ref q)) if *q == Scalar::ratio(1, 5)));
    }

    #[test]
    fn domain_and_mode_guards() {
        assert!(RunConfig::from_raw(raw(Mode::Float, Some("1"))).is_err());
        assert!(RunConfig::from_raw(raw(Mode::Symbolic, Some("1/2"))).is_err());
        assert!(RunConfig::from_raw(raw(Mode::Symbolic, None)).is_ok());
        let mut r = raw(Mode::Exact, None);
        r.level = 4;
        let cfg = RunConfig::from_raw(r).unwrap();
        assert!(cfg.require_series_fits().is_err());
        assert_eq!(cfg.params()["q"], "1/2");
    }
}
