//! Real algebraic numbers with rational defining polynomials.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field::{Rationals, Sign};
use super::upoly::{self, RootInterval};
use crate::error::AlgebraError;
use crate::poly::{Interval, Polynomial, VarOrder};
use crate::rational::{self, Rational};

/// A real root of a square-free rational polynomial, located by an isolating interval.
///
/// When `lo == hi` the number is the rational `lo`. Otherwise the defining
/// polynomial has exactly one root in the open interval `(lo, hi)` and does
/// not vanish at either endpoint.
#[derive(Clone)]
pub struct AlgebraicNumber {
    defining: Vec<Rational>,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicNumber {
    pub fn from_rational(q: Rational) -> Self {
        AlgebraicNumber { defining: vec![-q.clone(), Rational::one()], lo: q.clone(), hi: q }
    }

    /// Builds a number from a polynomial (dense, low degree first) and an isolating interval.
    ///
    /// The polynomial is reduced to its monic square-free part; the interval is
    /// validated with a Sturm count.
    pub fn new(defining: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self, AlgebraError> {
        let f = Rationals;
        let p = upoly::squarefree(&f, &upoly::trim(&f, defining));
        if p.len() < 2 || lo > hi {
            return Err(AlgebraError::BadInterval);
        }
        if lo == hi {
            if !upoly::eval(&f, &p, &lo).is_zero() {
                return Err(AlgebraError::BadInterval);
            }
            return Ok(Self::from_rational(lo));
        }
        let n = sturm_count_dense(&p, &lo, &hi)?;
        if n != 1 {
            return Err(AlgebraError::BadInterval);
        }
        Ok(AlgebraicNumber { defining: p, lo, hi }.collapse_linear())
    }

    pub(crate) fn from_parts(defining: Vec<Rational>, root: RootInterval) -> Self {
        match root {
            RootInterval::Exact(q) => Self::from_rational(q),
            RootInterval::Open(lo, hi) => AlgebraicNumber { defining, lo, hi }.collapse_linear(),
        }
    }

    fn collapse_linear(self) -> Self {
        if self.lo != self.hi && self.defining.len() == 2 {
            let q = -&self.defining[0] / &self.defining[1];
            return Self::from_rational(q);
        }
        self
    }

    pub fn defining(&self) -> &[Rational] {
        &self.defining
    }

    /// The defining polynomial as a univariate [`Polynomial`] in `var`.
    pub fn defining_polynomial(&self, var: &str) -> Polynomial {
        let vars = VarOrder::new(&[var]);
        let x = Polynomial::var(&vars, 0);
        let mut acc = Polynomial::zero(&vars);
        for c in self.defining.iter().rev() {
            acc = &(&acc * &x) + &Polynomial::constant(&vars, c.clone());
        }
        acc
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.lo.clone())
    }

    /// One bisection step; returns a new value representing the same number.
    pub fn refined(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let r = upoly::refine(&Rationals, &self.defining, &RootInterval::Open(self.lo.clone(), self.hi.clone()));
        Self::from_parts(self.defining.clone(), r)
    }

    /// Refines until the interval width is at most `w`.
    pub fn refined_to(&self, w: &Rational) -> Self {
        let mut a = self.clone();
        while &(&a.hi - &a.lo) > w {
            a = a.refined();
        }
        a
    }

    /// Decimal approximation truncated toward −∞ with `digits` fractional digits.
    pub fn approx(&self, digits: usize) -> String {
        let w = Rational::new(1.into(), num_bigint::BigInt::from(10u32).pow(digits as u32 + 1));
        let a = self.refined_to(&w);
        rational::to_decimal(&((&a.lo + &a.hi) / rational::int(2)), digits)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.refined_to(&Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 60)));
        rational::to_f64(&((&a.lo + &a.hi) / rational::int(2)))
    }

    /// Exact sign of a rational univariate polynomial (dense) at this number.
    pub fn sign_of(&self, q: &[Rational]) -> Sign {
        let f = Rationals;
        let q = upoly::trim(&f, q.to_vec());
        if let Some(v) = self.as_rational() {
            return Sign::of(&upoly::eval(&f, &q, &v));
        }
        if q.is_empty() {
            return Sign::Zero;
        }
        let g = upoly::gcd(&f, &q, &self.defining);
        if g.len() > 1 {
            let sl = upoly::sign_at(&f, &g, &self.lo);
            let sh = upoly::sign_at(&f, &g, &self.hi);
            if sl != sh {
                return Sign::Zero;
            }
        }
        let mut a = self.clone();
        loop {
            let enc = dense_eval_interval(&q, &a.interval());
            if !enc.contains_zero() {
                return if enc.lo.is_positive() { Sign::Positive } else { Sign::Negative };
            }
            a = a.refined();
            if let Some(v) = a.as_rational() {
                return Sign::of(&upoly::eval(&f, &q, &v));
            }
        }
    }

    /// Exact comparison of two algebraic numbers.
    pub fn compare(&self, other: &AlgebraicNumber) -> Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(a), None) => return other.compare_rational(&a).reverse(),
            (None, Some(b)) => return self.compare_rational(&b),
            _ => {}
        }
        let f = Rationals;
        let mut a = self.clone();
        let mut b = other.clone();
        let g = upoly::squarefree(&f, &upoly::gcd(&f, &a.defining, &b.defining));
        let common = g.len() > 1 && a.sign_of(&g) == Sign::Zero && b.sign_of(&g) == Sign::Zero;
        let gseq = if common { upoly::sturm_sequence(&f, &g) } else { Vec::new() };
        loop {
            if a.hi <= b.lo {
                return if a.hi == b.lo && a.is_rational() && b.is_rational() {
                    Ordering::Equal
                } else {
                    Ordering::Less
                };
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if common {
                // Hull endpoints are endpoints of isolating intervals, hence never roots of g.
                let lo = a.lo.clone().min(b.lo.clone());
                let hi = a.hi.clone().max(b.hi.clone());
                if upoly::count_between(&f, &gseq, &lo, &hi) == 1 {
                    return Ordering::Equal;
                }
            }
            a = a.refined();
            b = b.refined();
            if a.is_rational() || b.is_rational() {
                return a.compare(&b);
            }
        }
    }

    pub fn compare_rational(&self, q: &Rational) -> Ordering {
        let mut a = self.clone();
        loop {
            if let Some(v) = a.as_rational() {
                return v.cmp(q);
            }
            if &a.hi <= q {
                return Ordering::Less;
            }
            if &a.lo >= q {
                return Ordering::Greater;
            }
            // q inside the open interval: q is not a root unless the polynomial vanishes there.
            if upoly::eval(&Rationals, &a.defining, q).is_zero() {
                return Ordering::Equal;
            }
            a = a.refined();
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", rational::format(&q));
        }
        write!(
            f,
            "root of {} in ({}, {})",
            self.defining_polynomial("x"),
            rational::format(&self.lo),
            rational::format(&self.hi)
        )
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn dense_eval_interval(p: &[Rational], x: &Interval) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for c in p.iter().rev() {
        acc = acc.mul(x).add(&Interval::point(c.clone()));
    }
    acc
}

/// Converts a univariate polynomial into dense rational coefficients.
pub fn dense_coefficients(p: &Polynomial) -> Result<(Option<usize>, Vec<Rational>), AlgebraError> {
    let vars = p.variables();
    match vars.len() {
        0 => Ok((None, if p.is_zero() { Vec::new() } else { vec![p.constant_term()] })),
        1 => {
            let v = vars[0];
            let coeffs = p
                .coefficients_in(v)
                .into_iter()
                .map(|c| c.constant_term())
                .collect::<Vec<_>>();
            Ok((Some(v), upoly::trim(&Rationals, coeffs)))
        }
        _ => Err(AlgebraError::NotUnivariate(p.to_string())),
    }
}

fn sturm_count_dense(p: &[Rational], lo: &Rational, hi: &Rational) -> Result<usize, AlgebraError> {
    let f = Rationals;
    for e in [lo, hi] {
        if upoly::eval(&f, p, e).is_zero() {
            return Err(AlgebraError::EndpointIsRoot(rational::format(e)));
        }
    }
    if lo >= hi {
        return Err(AlgebraError::BadInterval);
    }
    let seq = upoly::sturm_sequence(&f, p);
    Ok(upoly::count_between(&f, &seq, lo, hi))
}

/// Cauchy root bound of a nonconstant univariate polynomial.
pub fn root_bound(p: &Polynomial) -> Result<Rational, AlgebraError> {
    let (_, d) = dense_coefficients(p)?;
    if d.len() < 2 {
        return Err(AlgebraError::ConstantPolynomial);
    }
    Ok(upoly::root_bound(&Rationals, &d))
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn sturm_count(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<usize, AlgebraError> {
    let (_, d) = dense_coefficients(p)?;
    if d.len() < 2 {
        if d.is_empty() {
            return Err(AlgebraError::EndpointIsRoot(rational::format(lo)));
        }
        return Ok(0);
    }
    sturm_count_dense(&d, lo, hi)
}

/// All distinct real roots of the product of the inputs, in increasing order.
pub fn isolate_roots(polys: &[Polynomial]) -> Result<Vec<AlgebraicNumber>, AlgebraError> {
    let f = Rationals;
    let mut factors: Vec<Vec<Rational>> = Vec::new();
    for p in polys {
        let (_, d) = dense_coefficients(p)?;
        if d.is_empty() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if d.len() >= 2 {
            factors.push(upoly::squarefree(&f, &d));
        }
    }
    Ok(isolate_dense(&factors))
}

/// Isolates the roots of a set of square-free dense polynomials; each root is
/// represented by the lowest-degree factor that has it.
pub(crate) fn isolate_dense(factors: &[Vec<Rational>]) -> Vec<AlgebraicNumber> {
    let f = Rationals;
    if factors.is_empty() {
        return Vec::new();
    }
    upoly::isolate_family(&f, factors)
        .into_iter()
        .map(|(r, def)| match r {
            RootInterval::Exact(q) => AlgebraicNumber::from_rational(q),
            open => AlgebraicNumber::from_parts(def, open).detect_rational(),
        })
        .collect()
}

impl AlgebraicNumber {
    /// Collapses to a rational when the root is rational with a small denominator.
    pub(crate) fn detect_rational(self) -> Self {
        if self.is_rational() {
            return self;
        }
        match rational_root_in(&self.defining, &self.lo, &self.hi) {
            Some(q) => Self::from_rational(q),
            None => self,
        }
    }
}

/// Finds a rational root of `p` in the open interval `(lo, hi)`, if one exists.
///
/// Uses the rational root theorem; gives up when the leading coefficient is
/// too large to factor cheaply.
pub(crate) fn rational_root_in(p: &[Rational], lo: &Rational, hi: &Rational) -> Option<Rational> {
    use num_integer::Integer;
    let lcm = p.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last()?.abs();
    if ints[0].is_zero() {
        if lo < &Rational::zero() && &Rational::zero() < hi {
            return Some(Rational::zero());
        }
        let k = p.iter().take_while(|c| c.is_zero()).count();
        return rational_root_in(&p[k..], lo, hi);
    }
    let dens = rational::small_divisors(&lead)?;
    let f = Rationals;
    let x = AlgebraicNumber { defining: p.to_vec(), lo: lo.clone(), hi: hi.clone() }
        .refined_to(&Rational::new(64.into(), lead.clone()));
    if let Some(q) = x.as_rational() {
        return Some(q);
    }
    for d in dens {
        let dq = Rational::from_integer(d.clone());
        let mut n: num_bigint::BigInt = (&x.lo * &dq).floor().to_integer() + 1;
        let b: num_bigint::BigInt = (&x.hi * &dq).ceil().to_integer() - 1;
        while n <= b {
            let cand = Rational::new(n.clone(), d.clone());
            if upoly::eval(&f, p, &cand).is_zero() {
                return Some(cand);
            }
            n += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn uni(s: &[i64]) -> Polynomial {
        let vars = VarOrder::new(&["x"]);
        let x = Polynomial::var(&vars, 0);
        let mut acc = Polynomial::zero(&vars);
        for &c in s.iter().rev() {
            acc = &(&acc * &x) + &Polynomial::from_int(&vars, c);
        }
        acc
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::new(vec![int(-2), int(0), int(1)], int(1), int(2)).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(root_bound(&uni(&[-4, 0, 1])).unwrap(), int(5));
        assert_eq!(root_bound(&uni(&[0, 1])).unwrap(), int(1));
        assert_eq!(root_bound(&uni(&[-1, 2])).unwrap(), ratio(3, 2));
        assert!(root_bound(&uni(&[3])).is_err());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_count(&uni(&[-1, 0, 1]), &int(-2), &int(2)).unwrap(), 2);
        assert_eq!(sturm_count(&uni(&[1, 0, 1]), &int(-10), &int(10)).unwrap(), 0);
        assert_eq!(sturm_count(&uni(&[-1, 1]), &int(0), &int(2)).unwrap(), 1);
        assert!(matches!(
            sturm_count(&uni(&[-1, 1]), &int(1), &int(2)),
            Err(AlgebraError::EndpointIsRoot(_))
        ));
    }

    #[test]
    fn isolation_examples() {
        let r = isolate_roots(&[uni(&[-2, 0, 1])]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].hi() <= r[1].lo());
        assert!(r[0].hi() <= &int(0) && r[1].lo() >= &int(0));
        let r = isolate_roots(&[uni(&[0, 2, -3, 1])]).unwrap();
        let vals: Vec<_> = r.iter().map(|a| a.as_rational().unwrap()).collect();
        assert_eq!(vals, vec![int(0), int(1), int(2)]);
        assert!(isolate_roots(&[uni(&[1])]).unwrap().is_empty());
    }

    #[test]
    fn rational_roots_collapse() {
        // (3x - 1)(x^2 - 2): 1/3 is not a bisection midpoint
        let r = isolate_roots(&[uni(&[2, -6, -1, 3])]).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1].as_rational(), Some(ratio(1, 3)));
    }

    #[test]
    fn comparisons() {
        let s = sqrt2();
        assert_eq!(s.compare(&AlgebraicNumber::from_rational(ratio(141, 100))), Ordering::Greater);
        let s4 = AlgebraicNumber::new(vec![int(-4), int(0), int(0), int(0), int(1)], int(1), int(2)).unwrap();
        assert_eq!(s.compare(&s4), Ordering::Equal);
        assert_eq!(s.compare(&s), Ordering::Equal);
        let s3 = AlgebraicNumber::new(vec![int(-3), int(0), int(1)], int(1), int(2)).unwrap();
        assert_eq!(s.compare(&s3), Ordering::Less);
        // same polynomial, different roots
        let m = AlgebraicNumber::new(vec![int(-2), int(0), int(1)], int(-2), int(2));
        assert!(m.is_err());
    }

    #[test]
    fn signs_and_approx() {
        let s = sqrt2();
        assert_eq!(s.sign_of(&[int(-2), int(0), int(1)]), Sign::Zero);
        assert_eq!(s.sign_of(&[int(-1), int(1)]), Sign::Positive);
        assert_eq!(s.approx(5), "1.41421");
        assert_eq!(format!("{:?}", AlgebraicNumber::from_rational(ratio(-1, 2))), "-1/2");
    }
}
