//! Scalar backends and the tolerance policy.
//!
//! Two backends are supported: exact rationals ([`Rational`]) and complex
//! doubles ([`Complex64`]). Generic code is written against [`Field`]; the
//! dynamically tagged [`Scalar`] exists for the I/O boundary where the
//! backend is only known at run time.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GinvError, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// Rank and residual thresholds. All three are ignored by the exact backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Relative rank threshold.
    pub tau: f64,
    /// Residual acceptance threshold.
    pub eps: f64,
    /// Largest sine of a principal angle still treated as subspace equality.
    pub angle: f64,
}

impl TolerancePolicy {
    pub const DEFAULT_TAU: f64 = 1e-10;
    pub const DEFAULT_EPS: f64 = 1e-9;
    pub const DEFAULT_ANGLE: f64 = 1e-8;

    pub fn new(tau: f64, eps: f64) -> Result<Self> {
        Self::with_angle(tau, eps, Self::DEFAULT_ANGLE)
    }

    pub fn with_angle(tau: f64, eps: f64, angle: f64) -> Result<Self> {
        for (name, v) in [("tau", tau), ("eps", eps), ("angle", angle)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GinvError::InvalidPolicy(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { tau, eps, angle })
    }

    /// Threshold below which a quantity of the given scale counts as zero.
    #[inline]
    pub fn rank_threshold(&self, scale: f64) -> f64 {
        self.tau * scale.max(1.0)
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            tau: Self::DEFAULT_TAU,
            eps: Self::DEFAULT_EPS,
            angle: Self::DEFAULT_ANGLE,
        }
    }
}

/// Field operations shared by both backends.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    /// Absolute value as a double.
    fn magnitude(&self) -> f64;
    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn into_scalar(self) -> Scalar;
    fn try_from_scalar(s: &Scalar) -> Result<Self>;

    /// Exact: `x == 0`. Float: `|x| <= tau * max(scale, 1)`.
    fn is_negligible(&self, scale: f64, policy: &TolerancePolicy) -> bool;
}

impl Field for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }

    fn try_from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(q) => Ok(q.clone()),
            Scalar::Float(_) => Err(GinvError::BackendMismatch {
                left: "exact",
                right: "float",
            }),
        }
    }

    fn is_negligible(&self, _scale: f64, _policy: &TolerancePolicy) -> bool {
        self.is_zero()
    }
}

impl Field for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }

    fn try_from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Float(z) => Ok(*z),
            Scalar::Exact(_) => Err(GinvError::BackendMismatch {
                left: "float",
                right: "exact",
            }),
        }
    }

    fn is_negligible(&self, scale: f64, policy: &TolerancePolicy) -> bool {
        self.norm() <= policy.rank_threshold(scale)
    }
}

/// Converts a rational to the nearest double without overflowing on large
/// numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down to keep them representable.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as u64;
    let shift_d = (db - 60).max(0) as u64;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Parses a decimal literal such as `-2.25e3` into an exact rational.
pub fn parse_decimal_exact(s: &str) -> Result<Rational> {
    let bad = || GinvError::Parse(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        Rational::from_integer(numer * pow)
    } else {
        Rational::new(numer, pow)
    })
}

/// Parses `p/q` or `p` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| GinvError::Parse(format!("bad rational numerator in {s:?}")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| GinvError::Parse(format!("bad rational denominator in {s:?}")))?;
    if denom.is_zero() {
        return Err(GinvError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats a double with the shortest round-trip representation, folding
/// negative zero to `0`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// A scalar whose backend is known only at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(Complex64),
}

impl Scalar {
    /// Builds `num/den` in lowest terms.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(GinvError::DivisionByZero);
        }
        Ok(Scalar::Exact(Rational::from_ratio(num, den)))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    fn mismatch(&self, other: &Scalar) -> GinvError {
        GinvError::BackendMismatch {
            left: self.backend().name(),
            right: other.backend().name(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Err(GinvError::DivisionByZero)
                } else {
                    Ok(Scalar::Exact(a / b))
                }
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                if b.is_zero() {
                    Err(GinvError::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a / b))
                }
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn is_negligible(&self, scale: f64, policy: &TolerancePolicy) -> bool {
        match self {
            Scalar::Exact(q) => q.is_negligible(scale, policy),
            Scalar::Float(z) => z.is_negligible(scale, policy),
        }
    }
}

impl Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(z) => f.write_str(&format_complex(z)),
        }
    }
}

/// Human-readable complex number: the real part alone when the imaginary
/// part is exactly zero.
pub fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else if z.re == 0.0 {
        format!("{}i", format_f64(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", format_f64(z.re), format_f64(-z.im))
    } else {
        format!("{}+{}i", format_f64(z.re), format_f64(z.im))
    }
}
