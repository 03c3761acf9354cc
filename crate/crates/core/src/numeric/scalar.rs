use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

/// Environment variable consulted by [`tolerance_from_env`].
pub const TOLERANCE_ENV: &str = "GPTDARWIN_FLOAT_TOL";

pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOL: AtomicU64 = AtomicU64::new(DEFAULT_FLOAT_TOLERANCE.to_bits());

/// Absolute tolerance used by every float comparison in the process.
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOL.load(Ordering::Relaxed))
}

pub fn set_float_tolerance(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Invalid(format!("float tolerance must be positive, got {eps}")));
    }
    FLOAT_TOL.store(eps.to_bits(), Ordering::Relaxed);
    Ok(())
}

/// Applies the tolerance override from [`TOLERANCE_ENV`] if it is set.
pub fn tolerance_from_env() -> Result<Option<f64>> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(s) => {
            let eps: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{TOLERANCE_ENV}={s}")))?;
            set_float_tolerance(eps)?;
            Ok(Some(eps))
        }
        Err(_) => Ok(None),
    }
}

/// Field element used by every geometric computation.
///
/// Two implementations exist: [`BigRational`] (exact, zero tolerance) and
/// `f64` (absolute tolerance [`float_tolerance`]). Generic code never mixes
/// them, so cross-backend arithmetic is rejected by the type checker.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Zero + One + Num + Signed + Send + Sync + 'static
{
    const BACKEND: Backend;
    const EXACT: bool;

    /// Hashable identity, available only for exact backends.
    type Key: Clone + Eq + Hash + Debug + Send + Sync;

    fn key(&self) -> Option<Self::Key>;
    fn from_i64(v: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self;
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;

    fn is_negligible(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;

    fn mul_r(&self, o: &Self) -> Self;
    fn add_r(&self, o: &Self) -> Self;
    fn sub_r(&self, o: &Self) -> Self;
    fn div_r(&self, o: &Self) -> Self;

    /// Positive rescaling to the canonical representative of the ray.
    fn normalize_ray(v: &mut [Self]);

    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;

    fn approx_eq(&self, o: &Self) -> bool {
        self.sub_r(o).is_negligible()
    }
    fn is_nonneg(&self) -> bool {
        !self.is_neg()
    }
    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;
    const EXACT: bool = true;
    type Key = BigRational;

    fn key(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn from_f64(v: f64) -> Option<Self> {
        <BigRational as num_traits::FromPrimitive>::from_f64(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn mul_r(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        self * o
    }
    fn add_r(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_r(&self, o: &Self) -> Self {
        self - o
    }
    fn div_r(&self, o: &Self) -> Self {
        self / o
    }
    fn normalize_ray(v: &mut [Self]) {
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            if !lead.is_one() {
                for x in v.iter_mut() {
                    *x = &*x / &lead;
                }
            }
        }
    }
    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        // exact decimal literal
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| bad())
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;
    const EXACT: bool = false;
    type Key = ();

    fn key(&self) -> Option<()> {
        None
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= float_tolerance()
    }
    fn is_pos(&self) -> bool {
        *self > float_tolerance()
    }
    fn is_neg(&self) -> bool {
        *self < -float_tolerance()
    }
    fn mul_r(&self, o: &Self) -> Self {
        self * o
    }
    fn add_r(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_r(&self, o: &Self) -> Self {
        self - o
    }
    fn div_r(&self, o: &Self) -> Self {
        self / o
    }
    fn normalize_ray(v: &mut [Self]) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
                if x.abs() <= float_tolerance() {
                    *x = 0.0;
                }
            }
        }
    }
    fn to_text(&self) -> String {
        format!("{self}")
    }
    fn parse_text(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains('/') {
            let r = parse_rational(t)?;
            return Ok(Scalar::to_f64(&r));
        }
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a float literal: {s:?}")))
    }
}

/// Backend-tagged value for data whose backend is only known at run time
/// (theory files, reports).
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Rational(BigRational),
    Float(f64),
}

impl Value {
    pub fn backend(&self) -> Backend {
        match self {
            Value::Rational(_) => Backend::Rational,
            Value::Float(_) => Backend::Float,
        }
    }

    pub fn parse(backend: Backend, s: &str) -> Result<Value> {
        Ok(match backend {
            Backend::Rational => Value::Rational(BigRational::parse_text(s)?),
            Backend::Float => Value::Float(f64::parse_text(s)?),
        })
    }

    fn check_same(&self, o: &Value) -> Result<()> {
        if self.backend() == o.backend() {
            Ok(())
        } else {
            Err(Error::BackendMismatch(self.backend(), o.backend()))
        }
    }

    pub fn try_add(&self, o: &Value) -> Result<Value> {
        self.check_same(o)?;
        Ok(match (self, o) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Float(a), Value::Float(b)) => Value::Float(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, o: &Value) -> Result<Value> {
        self.check_same(o)?;
        Ok(match (self, o) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Float(a), Value::Float(b)) => Value::Float(a * b),
            _ => unreachable!(),
        })
    }
}

impl Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Rational(r) => f.write_str(&r.to_text()),
            Value::Float(x) => f.write_str(&x.to_text()),
        }
    }
}

/// Exact equality on rationals, `|a-b| <= eps` on floats.
pub fn scalar_eq(a: &Value, b: &Value) -> Result<bool> {
    a.check_same(b)?;
    Ok(match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => x == y,
        (Value::Float(x), Value::Float(y)) => x.approx_eq(y),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn rational_lowest_terms() {
        let r = q(2, -6);
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(3));
    }

    #[test]
    fn scalar_eq_cases() {
        let a = Value::Rational(q(1, 3));
        let b = Value::Rational(q(2, 6));
        assert!(scalar_eq(&a, &b).unwrap());
        assert!(scalar_eq(&Value::Float(0.1 + 0.2), &Value::Float(0.3)).unwrap());
        let err = scalar_eq(&a, &Value::Float(0.3333)).unwrap_err();
        assert!(matches!(err, Error::BackendMismatch(..)));
        assert!(Value::Rational(q(1, 2)).try_add(&Value::Float(0.5)).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["3/4", "-7/2", "0", "12"] {
            assert_eq!(BigRational::parse_text(s).unwrap().to_text(), s);
        }
        assert_eq!(BigRational::parse_text("0.25").unwrap(), q(1, 4));
        assert_eq!(BigRational::parse_text("-1.5").unwrap(), q(-3, 2));
        assert!(BigRational::parse_text("1/0").is_err());
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::parse_text(&x.to_text()).unwrap(), x);
        assert_eq!(f64::parse_text("1/4").unwrap(), 0.25);
    }

    #[test]
    fn rational_ray_normalization() {
        let mut v = vec![q(0, 1), q(-3, 2), q(3, 1)];
        BigRational::normalize_ray(&mut v);
        assert_eq!(v, vec![q(0, 1), q(-1, 1), q(2, 1)]);
    }
}
