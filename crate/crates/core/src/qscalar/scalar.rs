use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coeff::Coeff;
use super::poly::QPoly;
use crate::error::{Error, Result};

/// Reduced ratio of polynomials in `q` with a monic denominator of positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRatFunc {
    num: QPoly,
    den: QPoly,
}

impl QRatFunc {
    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }
}

/// An exact scalar.
///
/// The representation is canonical: a ratio whose reduced denominator is
/// constant is stored as a polynomial, and a constant polynomial is stored as
/// a rational. Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// A plain rational number (either `q` was fixed, or the value is `q`-free).
    Rational(BigRational),
    /// A polynomial in the formal parameter `q` of degree at least one.
    Poly(QPoly),
    /// A reduced ratio of polynomials in `q`.
    RatFunc(QRatFunc),
}

/// Which of the three representations a scalar currently uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    RationalAt,
    PolyInQ,
    RatFuncInQ,
}

impl Scalar {
    /// The formal parameter `q`.
    pub fn q() -> Self {
        Scalar::Poly(QPoly::q())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_poly(p: QPoly) -> Self {
        if p.is_constant() {
            Scalar::Rational(p.coeff(0))
        } else {
            Scalar::Poly(p)
        }
    }

    /// Builds `num / den` in lowest terms.
    pub fn from_ratio_of_polys(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::Rational(BigRational::zero()));
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lead = den.leading().expect("nonzero").recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        if den.is_constant() {
            Ok(Scalar::from_poly(num))
        } else {
            Ok(Scalar::RatFunc(QRatFunc { num, den }))
        }
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::RationalAt,
            Scalar::Poly(_) => ScalarMode::PolyInQ,
            Scalar::RatFunc(_) => ScalarMode::RatFuncInQ,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Polynomial view; `None` for a proper rational function.
    pub fn as_poly(&self) -> Option<QPoly> {
        match self {
            Scalar::Rational(r) => Some(QPoly::constant(r.clone())),
            Scalar::Poly(p) => Some(p.clone()),
            Scalar::RatFunc(_) => None,
        }
    }

    fn num_den(&self) -> (QPoly, QPoly) {
        match self {
            Scalar::Rational(r) => (QPoly::constant(r.clone()), QPoly::one()),
            Scalar::Poly(p) => (p.clone(), QPoly::one()),
            Scalar::RatFunc(f) => (f.num.clone(), f.den.clone()),
        }
    }

    /// Substitutes an exact value for `q`.
    pub fn eval_at(&self, q: &BigRational) -> Result<BigRational> {
        match self {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::Poly(p) => Ok(p.eval(q)),
            Scalar::RatFunc(f) => {
                let d = f.den.eval(q);
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(f.num.eval(q) / d)
            }
        }
    }

    /// Floating evaluation at `q0`: exact substitution of the binary value of
    /// `q0`, followed by a single rounding.
    pub fn float_eval(&self, q0: f64) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            _ => match BigRational::from_float(q0) {
                Some(q) => self
                    .eval_at(&q)
                    .ok()
                    .and_then(|v| v.to_f64())
                    .unwrap_or(f64::NAN),
                None => f64::NAN,
            },
        }
    }

    /// Binary operation on the common `num/den` view, used when either side
    /// is a proper rational function.
    fn ratfunc_op(&self, rhs: &Scalar, add: Option<bool>) -> Scalar {
        let (a, b) = self.num_den();
        let (c, d) = rhs.num_den();
        let res = match add {
            Some(true) => Scalar::from_ratio_of_polys(a.mul(&d).add(&c.mul(&b)), b.mul(&d)),
            Some(false) => Scalar::from_ratio_of_polys(a.mul(&d).sub(&c.mul(&b)), b.mul(&d)),
            None => Scalar::from_ratio_of_polys(a.mul(&c), b.mul(&d)),
        };
        res.expect("product of nonzero denominators is nonzero")
    }

    fn add_ref(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::RatFunc(_), _) | (_, Scalar::RatFunc(_)) => self.ratfunc_op(rhs, Some(true)),
            _ => Scalar::from_poly(self.num_den().0.add(&rhs.num_den().0)),
        }
    }

    fn sub_ref(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::RatFunc(_), _) | (_, Scalar::RatFunc(_)) => self.ratfunc_op(rhs, Some(false)),
            _ => Scalar::from_poly(self.num_den().0.sub(&rhs.num_den().0)),
        }
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(a), Scalar::Poly(p)) | (Scalar::Poly(p), Scalar::Rational(a)) => {
                Scalar::from_poly(p.scale(a))
            }
            (Scalar::Poly(a), Scalar::Poly(b)) => Scalar::from_poly(a.mul(b)),
            _ => self.ratfunc_op(rhs, None),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Poly(p) => Scalar::Poly(p.neg()),
            Scalar::RatFunc(f) => Scalar::RatFunc(QRatFunc {
                num: f.num.neg(),
                den: f.den.clone(),
            }),
        }
    }

    /// Exact division. Dividing two polynomials yields a rational function
    /// (demoted back to a polynomial when the division is exact).
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a / b)),
            (Scalar::Poly(p), Scalar::Rational(b)) => Ok(Scalar::from_poly(p.scale(&b.recip()))),
            _ => {
                let (a, b) = self.num_den();
                let (c, d) = rhs.num_den();
                Scalar::from_ratio_of_polys(a.mul(&d), b.mul(&c))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }
    fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Scalar::int(n)
    }
    fn from_rational(r: &BigRational) -> Self {
        Scalar::Rational(r.clone())
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.div(rhs)
    }
    fn magnitude(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.abs().to_f64().unwrap_or(f64::INFINITY),
            Scalar::Poly(p) => p.max_abs_coeff(),
            Scalar::RatFunc(f) => f.num.max_abs_coeff(),
        }
    }
    fn is_exact() -> bool {
        true
    }
    fn to_f64(&self) -> Option<f64> {
        self.as_rational().and_then(|r| r.to_f64())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$inner(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$inner(rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &'a Scalar) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (&mut *self, rhs) {
            *a += b;
            return;
        }
        *self = self.add_ref(rhs);
    }
}

impl<'a> SubAssign<&'a Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &'a Scalar) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (&mut *self, rhs) {
            *a -= b;
            return;
        }
        *self = self.sub_ref(rhs);
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Poly(p) => write!(f, "{p}"),
            Scalar::RatFunc(r) => write!(f, "({})/({})", r.num, r.den),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-0.25"` or `"1e-3"` into
/// an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}
