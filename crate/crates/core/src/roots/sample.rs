//! Sample points of CAD cells.

use std::fmt;

use super::algebraic::{isolate_dense, AlgebraicNumber};
use super::field::{Field, Rationals, Sign};
use super::tower::Tower;
use super::upoly;
use crate::error::AlgebraError;
use crate::poly::{Interval, Polynomial};
use crate::rational::{self, Rational};
use crate::resultant::sylvester_resultant;

/// A point whose coordinates are elements of a shared real algebraic tower.
///
/// Rational coordinates, and coordinates that are rational expressions in
/// earlier ones, add no tower level.
#[derive(Clone)]
pub struct SamplePoint {
    tower: Tower,
    coords: Vec<Polynomial>,
}

impl SamplePoint {
    /// The point in `R^0`, able to grow to `capacity` coordinates.
    pub fn empty(capacity: usize) -> Self {
        SamplePoint { tower: Tower::new(capacity), coords: Vec::new() }
    }

    pub fn from_rationals(qs: &[Rational]) -> Self {
        qs.iter().fold(Self::empty(qs.len()), |p, q| p.push_rational(q.clone()))
    }

    pub fn from_numbers(nums: &[AlgebraicNumber]) -> Self {
        let mut p = Self::empty(nums.len());
        for a in nums {
            p = match a.as_rational() {
                Some(q) => p.push_rational(q),
                None => {
                    let coeffs: Vec<Polynomial> = upoly::monic(&Rationals, a.defining())
                        .into_iter()
                        .map(|c| p.tower.constant(c))
                        .collect();
                    p.push_root(&coeffs, a.lo().clone(), a.hi().clone())
                }
            };
        }
        p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.tower.capacity()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn element(&self, k: usize) -> &Polynomial {
        &self.coords[k]
    }

    pub fn push_rational(&self, q: Rational) -> SamplePoint {
        self.push_element(self.tower.constant(q))
    }

    pub fn push_element(&self, e: Polynomial) -> SamplePoint {
        let mut coords = self.coords.clone();
        coords.push(self.tower.reduce(&e, self.tower.depth()));
        SamplePoint { tower: self.tower.clone(), coords }
    }

    /// Appends the unique root in `(lo, hi)` of the monic polynomial with
    /// tower coefficients `coeffs` (lowest degree first).
    pub fn push_root(&self, coeffs: &[Polynomial], lo: Rational, hi: Rational) -> SamplePoint {
        let d = self.tower.depth();
        let modulus = Polynomial::from_coefficients(self.tower.gens(), d, coeffs);
        let (tower, g) = self.tower.with_root(modulus, lo, hi);
        let mut coords = self.coords.clone();
        coords.push(g);
        SamplePoint { tower, coords }
    }

    pub fn truncated(&self, k: usize) -> SamplePoint {
        SamplePoint { tower: self.tower.clone(), coords: self.coords[..k].to_vec() }
    }

    pub fn rational_coordinate(&self, k: usize) -> Option<Rational> {
        self.tower.field().as_rational(&self.coords[k])
    }

    pub fn is_rational(&self) -> bool {
        (0..self.len()).all(|k| self.rational_coordinate(k).is_some())
    }

    /// Value of `p` at this point as a tower element.
    pub fn eval(&self, p: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if let Some(v) = p.variables().into_iter().find(|&v| v >= self.len()) {
            return Err(AlgebraError::Unbound(p.vars().name(v).to_string()));
        }
        let rats: Option<Vec<Rational>> = (0..self.len()).map(|k| self.rational_coordinate(k)).collect();
        if let Some(r) = rats {
            let binds: Vec<(usize, Rational)> = r.into_iter().enumerate().collect();
            return Ok(self.tower.constant(p.eval(&binds).constant_term()));
        }
        Ok(self.eval_rec(p))
    }

    fn eval_rec(&self, p: &Polynomial) -> Polynomial {
        let f = self.tower.field();
        match p.main_var() {
            None => self.tower.constant(p.constant_term()),
            Some(v) => {
                let x = &self.coords[v];
                let mut acc = f.zero();
                for c in p.coefficients_in(v).iter().rev() {
                    acc = f.add(&f.mul(&acc, x), &self.eval_rec(c));
                }
                acc
            }
        }
    }

    /// Exact sign of `p` at this point.
    pub fn sign(&self, p: &Polynomial) -> Result<Sign, AlgebraError> {
        let e = self.eval(p)?;
        Ok(self.tower.field().sign(&e))
    }

    /// Enclosure of coordinate `k` no wider than `w`.
    pub fn coordinate_interval(&self, k: usize, w: &Rational) -> Interval {
        self.tower.enclosure_within(&self.coords[k], w)
    }

    /// Decimal approximation of coordinate `k` with `digits` fractional digits.
    pub fn approx(&self, k: usize, digits: usize) -> String {
        if let Some(q) = self.rational_coordinate(k) {
            return rational::to_decimal(&q, digits);
        }
        let w = Rational::new(1.into(), num_bigint::BigInt::from(10u32).pow(digits as u32 + 2));
        let enc = self.coordinate_interval(k, &w);
        rational::to_decimal(&((&enc.lo + &enc.hi) / rational::int(2)), digits)
    }

    pub fn to_f64(&self, k: usize) -> f64 {
        let enc = self.coordinate_interval(k, &Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 52)));
        rational::to_f64(&((&enc.lo + &enc.hi) / rational::int(2)))
    }

    /// Coordinate `k` as an algebraic number with a rational defining polynomial.
    pub fn coordinate(&self, k: usize) -> AlgebraicNumber {
        let e = self.tower.reduce(&self.coords[k], self.tower.depth());
        if let Some(q) = e.constant_value() {
            return AlgebraicNumber::from_rational(q);
        }
        let vars = self.tower.gens().extended(&["t"]);
        let t = vars.len() - 1;
        let mut norm = &Polynomial::var(&vars, t) - &e.remap(&vars).expect("generator names");
        for d in (0..self.tower.depth()).rev() {
            if !norm.contains_var(d) {
                continue;
            }
            if let Some(q) = self.tower.exact_value(d) {
                norm = norm.eval(&[(d, q)]);
                continue;
            }
            let m = self.tower.modulus(d).remap(&vars).expect("generator names");
            norm = sylvester_resultant(&m, &norm, d).expect("modulus has positive degree");
        }
        let dense: Vec<Rational> = norm.coefficients_in(t).iter().map(|c| c.constant_term()).collect();
        let dense = upoly::trim(&Rationals, dense);
        let sq = upoly::squarefree(&Rationals, &dense);
        let mut cands = isolate_dense(&[sq]);
        loop {
            let enc = self.tower.enclosure(&self.tower.reduce(&e, self.tower.depth()));
            let hits: Vec<usize> = (0..cands.len())
                .filter(|&i| cands[i].lo() <= &enc.hi && cands[i].hi() >= &enc.lo)
                .collect();
            if hits.len() == 1 {
                return cands.swap_remove(hits[0]);
            }
            for &i in &hits {
                cands[i] = cands[i].refined();
            }
            for d in e.variables() {
                self.tower.refine_level(d);
            }
        }
    }
}

impl fmt::Debug for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len()).map(|k| self.approx(k, 6)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Exact sign of `p` at `pt`; `p` may only use variables bound by the point.
pub fn sign_at(p: &Polynomial, pt: &SamplePoint) -> Result<Sign, AlgebraError> {
    pt.sign(p)
}
