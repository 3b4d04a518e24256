//! Binary floating point with a per-value significand precision.
//!
//! A `PFloat` is `(-1)^s · m · 2^e` with an arbitrary-size integer significand
//! of at most `precision` bits. Every operation computes the exact result (or
//! enough of it plus a sticky bit) and rounds once to nearest, ties to even.
//! Mixed-precision operands produce a result at the larger precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, ScalarError};

/// Smallest supported significand width (IEEE double).
pub const MIN_PRECISION: u32 = 53;
/// Widest precision for which [`PFloat::pi`] is correctly rounded.
pub const MAX_PI_PRECISION: u32 = 640;

// 210 significant digits (~697 bits), enough for correct rounding at 640 bits.
const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196442881098";

#[derive(Clone)]
pub struct PFloat {
    negative: bool,
    // zero, or odd with at most `precision` bits
    mantissa: BigUint,
    exponent: i64,
    precision: u32,
}

impl PFloat {
    pub fn zero(precision: u32) -> Self {
        check_precision(precision);
        PFloat {
            negative: false,
            mantissa: BigUint::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_i64(1, precision)
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        check_precision(precision);
        let mantissa = BigUint::from(value.unsigned_abs());
        round_parts(value < 0, mantissa, 0, false, precision)
    }

    /// Exact for every finite `f64` since `precision >= 53`.
    pub fn from_f64(value: f64, precision: u32) -> Self {
        check_precision(precision);
        assert!(value.is_finite(), "non-finite f64 has no PFloat value");
        if value == 0.0 {
            return Self::zero(precision);
        }
        let bits = value.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        round_parts(negative, BigUint::from(m), e, false, precision)
    }

    /// `value` correctly rounded to `precision` bits.
    pub fn from_rational(value: &Rational, precision: u32) -> Self {
        check_precision(precision);
        let negative = value.is_negative();
        let num = value.numer().magnitude().clone();
        let den = value.denom().magnitude().clone();
        divide_magnitudes(negative, num, 0, den, 0, precision)
    }

    /// π correctly rounded to `precision` bits.
    pub fn pi(precision: u32) -> Result<Self, ScalarError> {
        if precision > MAX_PI_PRECISION {
            return Err(ScalarError::PrecisionUnsupported {
                requested: precision,
                max: MAX_PI_PRECISION,
            });
        }
        let literal = super::parse_rational(PI_DIGITS).expect("pi literal parses");
        Ok(Self::from_rational(&literal, precision))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_positive(&self) -> bool {
        !self.negative && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        PFloat {
            negative: false,
            ..self.clone()
        }
    }

    /// Rounds (or exactly widens) to a new precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        check_precision(precision);
        round_parts(
            self.negative,
            self.mantissa.clone(),
            self.exponent,
            false,
            precision,
        )
    }

    /// `self · 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        PFloat {
            exponent: self.exponent + k,
            ..self.clone()
        }
    }

    pub fn sqrt(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.negative {
            return Err(ScalarError::NegativeOperand);
        }
        let p = self.precision as u64;
        let bits = self.mantissa.bits();
        let mut shift = (2 * p + 4).saturating_sub(bits) as i64;
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let widened = &self.mantissa << shift as u64;
        let root = widened.sqrt();
        let sticky = &root * &root != widened;
        Ok(round_parts(
            false,
            root,
            (self.exponent - shift) / 2,
            sticky,
            self.precision,
        ))
    }

    /// Division returning `None` for a zero divisor.
    pub fn checked_div(&self, rhs: &PFloat) -> Option<PFloat> {
        if rhs.is_zero() {
            return None;
        }
        let p = self.precision.max(rhs.precision);
        if self.is_zero() {
            return Some(PFloat::zero(p));
        }
        Some(divide_magnitudes(
            self.negative != rhs.negative,
            self.mantissa.clone(),
            self.exponent,
            rhs.mantissa.clone(),
            rhs.exponent,
            p,
        ))
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        let m = BigInt::from_biguint(
            if self.negative { Sign::Minus } else { Sign::Plus },
            self.mantissa.clone(),
        );
        if self.exponent >= 0 {
            Rational::from_integer(m << self.exponent as u64)
        } else {
            Rational::new(m, BigInt::one() << (-self.exponent) as u64)
        }
    }

    /// Nearest `f64` (ties to even); saturates to ±inf out of range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = round_parts(
            self.negative,
            self.mantissa.clone(),
            self.exponent,
            false,
            53,
        );
        let mut value = r.mantissa.to_f64().expect("53-bit significand fits f64");
        let mut e = r.exponent;
        while e > 0 {
            let step = e.min(512);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = e.max(-512);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        if r.negative {
            -value
        } else {
            value
        }
    }

    /// Exponent of the leading bit: `2^(ilog2) <= |self| < 2^(ilog2+1)`.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }

    /// Correctly rounded `Σ a_i · b_i`: products and sum are exact, one final rounding.
    pub fn dot<'a, I>(pairs: I, precision: u32) -> PFloat
    where
        I: IntoIterator<Item = (&'a PFloat, &'a PFloat)>,
    {
        let terms: Vec<(bool, BigUint, i64)> = pairs
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| {
                (
                    a.negative != b.negative,
                    &a.mantissa * &b.mantissa,
                    a.exponent + b.exponent,
                )
            })
            .collect();
        sum_exact_terms(terms, precision)
    }

    /// Correctly rounded sum of all values.
    pub fn sum<'a, I>(values: I, precision: u32) -> PFloat
    where
        I: IntoIterator<Item = &'a PFloat>,
    {
        let terms = values
            .into_iter()
            .filter(|v| !v.is_zero())
            .map(|v| (v.negative, v.mantissa.clone(), v.exponent))
            .collect();
        sum_exact_terms(terms, precision)
    }

    /// Rounds to `digits` significant decimal digits (ties to even).
    pub fn to_decimal(&self, digits: usize) -> Decimal {
        self.to_decimal_with(digits, DecimalRounding::HalfEven)
    }

    /// `digits` significant decimal digits under the given rounding rule.
    pub fn to_decimal_with(&self, digits: usize, rounding: DecimalRounding) -> Decimal {
        assert!(digits >= 1);
        if self.is_zero() {
            return Decimal {
                negative: false,
                digits: "0".repeat(digits),
                exp10: 0,
            };
        }
        let (num, den) = if self.exponent >= 0 {
            (&self.mantissa << self.exponent as u64, BigUint::one())
        } else {
            (self.mantissa.clone(), BigUint::one() << (-self.exponent) as u64)
        };
        // floor(log10) estimate from bit lengths, then corrected
        let approx = ((num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2).floor()
            as i64;
        let mut k = approx;
        let ten = BigUint::from(10u32);
        loop {
            // want 10^k <= num/den < 10^(k+1)
            let (lhs_num, lhs_den) = scale_pow10(&num, &den, -k, &ten);
            if lhs_num < lhs_den {
                k -= 1;
                continue;
            }
            if lhs_num >= &lhs_den * &ten {
                k += 1;
                continue;
            }
            break;
        }
        let shift = digits as i64 - 1 - k;
        let (n, d) = scale_pow10(&num, &den, shift, &ten);
        let (mut q, r) = n.div_rem(&d);
        if rounding == DecimalRounding::HalfEven {
            let twice = &r << 1u32;
            match twice.cmp(&d) {
                Ordering::Greater => q += 1u32,
                Ordering::Equal if q.is_odd() => q += 1u32,
                _ => {}
            }
        }
        let mut text = q.to_str_radix(10);
        if text.len() > digits {
            // rounded up to a power of ten
            text.truncate(digits);
            k += 1;
        }
        Decimal {
            negative: self.negative,
            digits: text,
            exp10: k,
        }
    }
}

fn scale_pow10(num: &BigUint, den: &BigUint, k: i64, ten: &BigUint) -> (BigUint, BigUint) {
    if k >= 0 {
        (num * num_traits::pow(ten.clone(), k as usize), den.clone())
    } else {
        (num.clone(), den * num_traits::pow(ten.clone(), (-k) as usize))
    }
}

/// How [`PFloat::to_decimal_with`] drops digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecimalRounding {
    HalfEven,
    /// Drop the remaining digits (truncate toward zero).
    TowardZero,
}

/// Significant digits of a rounded value: `0.d1d2… × 10^(exp10+1)`, i.e.
/// `d1.d2d3… × 10^exp10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    pub digits: String,
    pub exp10: i64,
}

impl Decimal {
    /// Positional notation keeping every significant digit (trailing zeros
    /// included); scientific notation outside `1e-5 <= |x| < 1e15`.
    pub fn to_fixed_string(&self) -> String {
        let sign = if self.negative { "-" } else { "" };
        let d = &self.digits;
        let k = self.exp10;
        let body = if !(-5..15).contains(&k) {
            let (head, tail) = d.split_at(1);
            if tail.is_empty() {
                format!("{head}e{k}")
            } else {
                format!("{head}.{tail}e{k}")
            }
        } else if k < 0 {
            format!("0.{}{}", "0".repeat((-k - 1) as usize), d)
        } else {
            let int_len = k as usize + 1;
            if int_len >= d.len() {
                format!("{}{}", d, "0".repeat(int_len - d.len()))
            } else {
                format!("{}.{}", &d[..int_len], &d[int_len..])
            }
        };
        format!("{sign}{body}")
    }
}

fn check_precision(precision: u32) {
    assert!(
        precision >= MIN_PRECISION,
        "precision {precision} below the {MIN_PRECISION}-bit minimum"
    );
}

/// Rounds `(-1)^negative · (m + δ) · 2^e` to `p` bits, where `sticky` means
/// `0 < δ < 1`. Callers that set `sticky` supply at least `p + 2` bits in `m`.
fn round_parts(negative: bool, mut m: BigUint, mut e: i64, sticky: bool, p: u32) -> PFloat {
    if m.is_zero() {
        debug_assert!(!sticky);
        return PFloat::zero(p);
    }
    let p64 = p as u64;
    let bits = m.bits();
    if bits <= p64 {
        if !sticky {
            return normalized(negative, m, e, p);
        }
        let pad = p64 + 2 - bits;
        m <<= pad;
        e -= pad as i64;
    }
    let mut shift = m.bits() - p64;
    let mut kept = &m >> shift;
    let round_bit = m.bit(shift - 1);
    let rest_nonzero = sticky || m.trailing_zeros().unwrap_or(0) < shift - 1;
    if round_bit && (rest_nonzero || kept.bit(0)) {
        kept += 1u32;
        if kept.bits() > p64 {
            kept >>= 1u32;
            shift += 1;
        }
    }
    normalized(negative, kept, e + shift as i64, p)
}

fn normalized(negative: bool, mut m: BigUint, mut e: i64, p: u32) -> PFloat {
    if m.is_zero() {
        return PFloat::zero(p);
    }
    let tz = m.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        m >>= tz;
        e += tz as i64;
    }
    PFloat {
        negative,
        mantissa: m,
        exponent: e,
        precision: p,
    }
}

fn divide_magnitudes(
    negative: bool,
    num: BigUint,
    num_exp: i64,
    den: BigUint,
    den_exp: i64,
    p: u32,
) -> PFloat {
    if num.is_zero() {
        return PFloat::zero(p);
    }
    let shift = (p as u64 + 2 + den.bits()).saturating_sub(num.bits());
    let (q, r) = (num << shift).div_rem(&den);
    round_parts(negative, q, num_exp - shift as i64 - den_exp, !r.is_zero(), p)
}

fn sum_exact_terms(terms: Vec<(bool, BigUint, i64)>, p: u32) -> PFloat {
    let Some(emin) = terms.iter().map(|t| t.2).min() else {
        return PFloat::zero(p);
    };
    let mut acc = BigInt::zero();
    for (negative, m, e) in terms {
        let aligned = BigInt::from_biguint(Sign::Plus, m << (e - emin) as u64);
        if negative {
            acc -= aligned;
        } else {
            acc += aligned;
        }
    }
    let negative = acc.is_negative();
    round_parts(negative, acc.into_parts().1, emin, false, p)
}

fn add_signed(a: &PFloat, b: &PFloat, negate_b: bool) -> PFloat {
    let p = a.precision.max(b.precision);
    let b_negative = b.negative != negate_b;
    if b.is_zero() {
        return a.with_precision(p);
    }
    if a.is_zero() {
        return round_parts(b_negative, b.mantissa.clone(), b.exponent, false, p);
    }
    let top_a = a.exponent + a.mantissa.bits() as i64;
    let top_b = b.exponent + b.mantissa.bits() as i64;
    let (hi, hi_neg, lo_neg, gap) = if top_a >= top_b {
        (a, a.negative, b_negative, top_a - top_b)
    } else {
        (b, b_negative, a.negative, top_b - top_a)
    };
    if gap > p as i64 + 3 {
        // `lo` is below half an ulp of the widened `hi`; it only contributes a sticky bit
        let k = p as u64 + 3 - hi.mantissa.bits();
        let mut m = &hi.mantissa << k;
        if hi_neg != lo_neg {
            m -= 1u32;
        }
        return round_parts(hi_neg, m, hi.exponent - k as i64, true, p);
    }
    sum_exact_terms(
        vec![
            (a.negative, a.mantissa.clone(), a.exponent),
            (b_negative, b.mantissa.clone(), b.exponent),
        ],
        p,
    )
}

impl PartialEq for PFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PFloat {}

impl PartialOrd for PFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let sign = |x: &PFloat| {
            if x.is_zero() {
                0
            } else if x.negative {
                -1
            } else {
                1
            }
        };
        let (sa, sb) = (sign(self), sign(other));
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let magnitude = {
            let top_a = self.ilog2().unwrap();
            let top_b = other.ilog2().unwrap();
            if top_a != top_b {
                top_a.cmp(&top_b)
            } else {
                let emin = self.exponent.min(other.exponent);
                let ma = &self.mantissa << (self.exponent - emin) as u64;
                let mb = &other.mantissa << (other.exponent - emin) as u64;
                ma.cmp(&mb)
            }
        };
        if sa < 0 {
            magnitude.reverse()
        } else {
            magnitude
        }
    }
}

impl Neg for PFloat {
    type Output = PFloat;
    fn neg(mut self) -> PFloat {
        if !self.is_zero() {
            self.negative = !self.negative;
        }
        self
    }
}

impl Neg for &PFloat {
    type Output = PFloat;
    fn neg(self) -> PFloat {
        -self.clone()
    }
}

impl Add<&PFloat> for &PFloat {
    type Output = PFloat;
    fn add(self, rhs: &PFloat) -> PFloat {
        add_signed(self, rhs, false)
    }
}

impl Sub<&PFloat> for &PFloat {
    type Output = PFloat;
    fn sub(self, rhs: &PFloat) -> PFloat {
        add_signed(self, rhs, true)
    }
}

impl Mul<&PFloat> for &PFloat {
    type Output = PFloat;
    fn mul(self, rhs: &PFloat) -> PFloat {
        let p = self.precision.max(rhs.precision);
        if self.is_zero() || rhs.is_zero() {
            return PFloat::zero(p);
        }
        round_parts(
            self.negative != rhs.negative,
            &self.mantissa * &rhs.mantissa,
            self.exponent + rhs.exponent,
            false,
            p,
        )
    }
}

impl Div<&PFloat> for &PFloat {
    type Output = PFloat;
    /// Panics on a zero divisor; see [`PFloat::checked_div`].
    fn div(self, rhs: &PFloat) -> PFloat {
        self.checked_div(rhs).expect("PFloat division by zero")
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<PFloat> for PFloat {
            type Output = PFloat;
            fn $method(self, rhs: PFloat) -> PFloat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PFloat> for PFloat {
            type Output = PFloat;
            fn $method(self, rhs: &PFloat) -> PFloat {
                (&self).$method(rhs)
            }
        }
        impl $tr<PFloat> for &PFloat {
            type Output = PFloat;
            fn $method(self, rhs: PFloat) -> PFloat {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Debug for PFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PFloat({}, p={})", self, self.precision)
    }
}

impl fmt::Display for PFloat {
    /// `{:.N}` prints N significant digits; the default shows every digit the
    /// precision supports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize)
            .max(1);
        f.write_str(&self.to_decimal(digits).to_fixed_string())
    }
}
