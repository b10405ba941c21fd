use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Closed rational interval `[lo, hi]` for exact interval arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(num_traits::One::one());
        }
        let a = crate::rational::pow(&self.lo, e);
        let b = crate::rational::pow(&self.hi, e);
        if e % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if self.contains_zero() {
            Interval { lo: Rational::zero(), hi: if a > b { a } else { b } }
        } else if a < b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Upper bound on `|x|` over the interval.
    pub fn magnitude(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Lower bound on `|x|` over the interval (zero if it straddles zero).
    pub fn mignitude(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl super::Polynomial {
    /// Interval enclosure of the polynomial over a box (one interval per variable).
    pub fn eval_interval(&self, boxes: &[Interval]) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for (m, c) in self.terms() {
            let mut t = Interval::point(c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&boxes[v].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}
