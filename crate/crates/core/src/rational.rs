//! Helpers around [`BigRational`], the only scalar type used by the engine.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

/// `n` or `n/d`, the literal syntax accepted by the formula parser.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering rounded to nearest at `digits` places.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&whole.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Simplest rational (smallest denominator, then smallest magnitude) in the open interval `(a, b)`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    assert!(a < b, "empty interval");
    if a.is_negative() && b.is_positive() {
        return Rational::zero();
    }
    if !a.is_negative() {
        simplest_positive(a, b)
    } else {
        -simplest_positive(&-b, &-a)
    }
}

// 0 <= a < b
fn simplest_positive(a: &Rational, b: &Rational) -> Rational {
    let fl = a.floor();
    let candidate = &fl + Rational::one();
    if &candidate < b {
        return candidate;
    }
    // a and b share the integer part fl (b may equal fl + 1)
    let fa = a - &fl;
    let fb = b - &fl;
    if fa.is_zero() {
        // (fl, fl + fb): 1/(1/fb ...) -- choose 1/n with n minimal
        let n = (fb.recip()).floor() + Rational::one();
        return fl + n.recip();
    }
    // recurse on reciprocals: x in (fa, fb) <=> 1/x in (1/fb, 1/fa)
    let inner = simplest_positive(&fb.recip(), &fa.recip());
    fl + inner.recip()
}

/// Simplest rational in `[a, b]` where each end may be open or closed.
pub fn simplest_in(a: &Rational, a_closed: bool, b: &Rational, b_closed: bool) -> Rational {
    match a.cmp(b) {
        Ordering::Equal => {
            assert!(a_closed && b_closed, "empty interval");
            return a.clone();
        }
        Ordering::Greater => panic!("empty interval"),
        Ordering::Less => {}
    }
    let s = simplest_between(a, b);
    let better = |c: &Rational| c.denom() < s.denom() || (c.denom() == s.denom() && c.abs() < s.abs());
    let mut best = s.clone();
    if a_closed && better(a) {
        best = a.clone();
    }
    if b_closed && (b.denom() < best.denom() || (b.denom() == best.denom() && b.abs() < best.abs())) {
        best = b.clone();
    }
    best
}

/// All positive divisors of `n` (trial division); `None` when `n` is too large to factor cheaply.
pub fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}
