//! Sparse multivariate polynomials over the rationals.
//!
//! Every polynomial carries the [`VarOrder`] it lives in. Terms are kept in a
//! map keyed by [`Monomial`], ordered lexicographically with the *last*
//! variable most significant, so the final entry of the map is always the
//! leading term with respect to the highest variable. That is the recursive
//! `Q[x1..x(n-1)][xn]` view used by projection and lifting.

mod gcd;
mod interval;
mod normalize;

pub use gcd::{content_in, gcd, primitive_part_in, squarefree_part_in};
pub use interval::Interval;
pub use normalize::{canonical_pieces, normalize_set};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::rational::Rational;

/// A fixed, named variable order. Index `i` is CAD level `i + 1`.
#[derive(Clone)]
pub struct VarOrder(Arc<Vec<String>>);

impl VarOrder {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarOrder(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Order extended by the given names (skipping ones already present).
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> VarOrder {
        let mut names: Vec<String> = self.0.as_ref().clone();
        for e in extra {
            if !names.iter().any(|n| n == e.as_ref()) {
                names.push(e.as_ref().to_string());
            }
        }
        VarOrder(Arc::new(names))
    }
}

impl PartialEq for VarOrder {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarOrder {}

impl fmt::Debug for VarOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Exponent vector, one entry per variable of the ambient order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = vec![0; nvars];
        m[i] = e;
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone)]
pub struct Polynomial {
    vars: VarOrder,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &VarOrder) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarOrder) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarOrder, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Polynomial { vars: vars.clone(), terms }
    }

    pub fn from_int(vars: &VarOrder, c: i64) -> Self {
        Self::constant(vars, Rational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_i` itself.
    pub fn var(vars: &VarOrder, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn var_named(vars: &VarOrder, name: &str) -> Option<Self> {
        vars.index_of(name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &VarOrder, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { vars: vars.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(vars: &VarOrder, it: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &VarOrder {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.nvars())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree in variable `v`; `-1` for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> i64 {
        if self.is_zero() {
            return -1;
        }
        self.terms.keys().map(|m| m.0[v] as i64).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        if self.is_zero() {
            return -1;
        }
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(0)
    }

    /// Highest-indexed variable that actually occurs.
    pub fn main_var(&self) -> Option<usize> {
        let lead = self.terms.keys().next_back()?;
        lead.0.iter().rposition(|&e| e > 0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Indices of occurring variables, ascending.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.contains_var(v)).collect()
    }

    /// Leading (greatest) term in the last-variable-first lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    fn check_same(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VarOrderMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    /// Checked arithmetic; fails when the operands live in different variable orders.
    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial, AlgebraError> {
        self.check_same(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other),
            ArithOp::Sub => self.sub_unchecked(other),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    fn sub_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero(&self.vars);
        if self.is_zero() || other.is_zero() {
            return r;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes rational values for some variables; the rest stay symbolic.
    pub fn eval(&self, bindings: &[(usize, Rational)]) -> Polynomial {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut r = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for (v, val) in bindings {
                let e = mono.0[*v];
                if e > 0 {
                    coeff *= crate::rational::pow(val, e);
                    mono.0[*v] = 0;
                }
            }
            r.add_term(mono, coeff);
        }
        r
    }

    /// Evaluates with every variable bound.
    pub fn eval_all(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= crate::rational::pow(&point[v], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluation by name; fails if an occurring variable is unbound.
    pub fn eval_named(&self, lookup: &dyn Fn(&str) -> Option<Rational>) -> Result<Rational, AlgebraError> {
        let mut point = Vec::with_capacity(self.nvars());
        for v in 0..self.nvars() {
            if self.contains_var(v) {
                let name = self.vars.name(v);
                point.push(lookup(name).ok_or_else(|| AlgebraError::Unbound(name.to_string()))?);
            } else {
                point.push(Rational::zero());
            }
        }
        Ok(self.eval_all(&point))
    }

    /// Replaces variable `v` by the polynomial `q` (same order).
    pub fn compose(&self, v: usize, q: &Polynomial) -> Polynomial {
        let coeffs = self.coefficients_in(v);
        // Horner in q
        let mut acc = Polynomial::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut r = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                let mut mono = m.clone();
                mono.0[v] = e - 1;
                r.add_term(mono, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        r
    }

    /// Coefficients of `v^0 .. v^deg`, each free of `v`. Empty for the zero polynomial.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let d = self.degree_in(v);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![Polynomial::zero(&self.vars); d as usize + 1];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut mono = m.clone();
            mono.0[v] = 0;
            out[e].add_term(mono, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients(vars: &VarOrder, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut r = Polynomial::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, val) in &c.terms {
                let mut mono = m.clone();
                mono.0[v] += k as u32;
                r.add_term(mono, val.clone());
            }
        }
        r
    }

    pub fn leading_coeff_in(&self, v: usize) -> Polynomial {
        self.coefficients_in(v).pop().unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    /// Exact division in `Q[x1..xn]`; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut q = Polynomial::zero(&self.vars);
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let tm = rm.div(&dm);
            let tc = rc / &dc;
            q.add_term(tm.clone(), tc.clone());
            let sub = d.mul_monomial(&tm).scale(&tc);
            r = &r - &sub;
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v`.
    pub fn prem(&self, d: &Polynomial, v: usize) -> Polynomial {
        let dd = d.degree_in(v);
        assert!(dd >= 0);
        let lc = d.leading_coeff_in(v);
        let mut r = self.clone();
        loop {
            let dr = r.degree_in(v);
            if dr < dd {
                return r;
            }
            let lr = r.leading_coeff_in(v);
            let shift = Monomial::var(self.nvars(), v, (dr - dd) as u32);
            r = &(&r * &lc) - &(&d.mul_monomial(&shift) * &lr);
        }
    }

    /// Re-expresses the polynomial over another order that names every occurring variable.
    pub fn remap(&self, target: &VarOrder) -> Result<Polynomial, AlgebraError> {
        if &self.vars == target {
            return Ok(Polynomial { vars: target.clone(), terms: self.terms.clone() });
        }
        let mut index = Vec::with_capacity(self.nvars());
        for v in 0..self.nvars() {
            if self.contains_var(v) {
                let name = self.vars.name(v);
                index.push(Some(target.index_of(name).ok_or_else(|| AlgebraError::Unbound(name.to_string()))?));
            } else {
                index.push(None);
            }
        }
        let mut r = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut mono = Monomial::one(target.len());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    mono.0[index[v].unwrap()] += e;
                }
            }
            r.add_term(mono, c.clone());
        }
        Ok(r)
    }

    /// Renames variables by name, producing a polynomial over `target`.
    pub fn rename(&self, target: &VarOrder, rename: &dyn Fn(&str) -> String) -> Result<Polynomial, AlgebraError> {
        let mut r = Polynomial::zero(target);
        let mut index = vec![None; self.nvars()];
        for v in self.variables() {
            let n = rename(self.vars.name(v));
            index[v] = Some(target.index_of(&n).ok_or(AlgebraError::Unbound(n))?);
        }
        for (m, c) in &self.terms {
            let mut mono = Monomial::one(target.len());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    mono.0[index[v].unwrap()] += e;
                }
            }
            r.add_term(mono, c.clone());
        }
        Ok(r)
    }

    /// Names of occurring variables in order.
    pub fn variable_names(&self) -> Vec<String> {
        self.variables().into_iter().map(|v| self.vars.name(v).to_string()).collect()
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading coefficient.
    pub fn canonical_associate(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den / c.denom());
            g = g.gcd(&v);
        }
        let mut factor = Rational::new(den, g);
        if self.leading_coefficient().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Integer-normalized copy keeping the sign of the leading coefficient.
    pub fn integer_primitive(&self) -> Polynomial {
        let c = self.canonical_associate();
        if self.leading_coefficient().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Formats with the given variable names substituted for the order's names.
    pub fn display_with(&self, names: &[String]) -> String {
        format_poly(self, names)
    }
}

fn format_poly(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { names[v].clone() } else { format!("{}^{}", names[v], e) })
            .collect();
        if mono.is_empty() {
            out.push_str(&crate::rational::format(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&crate::rational::format(&abs));
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

/// Orders names so that embedded numbers compare by value: `x2 < x10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn key(s: &str) -> (&str, u64, &str) {
        let start = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (head, rest) = s.split_at(start);
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        (head, rest[..end].parse().unwrap_or(0), &rest[end..])
    }
    key(a).cmp(&key(b)).then_with(|| a.cmp(b))
}

impl Polynomial {
    /// Display over the occurring variables in natural name order, so the text
    /// does not depend on the order the polynomial happens to live in.
    pub fn canonical_display(&self) -> String {
        let mut names = self.variable_names();
        names.sort_by(|a, b| natural_cmp(a, b));
        match self.remap(&VarOrder::new(&names)) {
            Ok(q) => q.to_string(),
            Err(_) => self.to_string(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, self.vars.names()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

/// Term map keyed by variable names, used to compare across orders.
fn named_terms(p: &Polynomial) -> BTreeMap<Vec<(String, u32)>, Rational> {
    p.terms
        .iter()
        .map(|(m, c)| {
            let mut key: Vec<(String, u32)> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (p.vars.name(v).to_string(), e))
                .collect();
            key.sort();
            (key, c.clone())
        })
        .collect()
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            self.terms == other.terms
        } else {
            named_terms(self) == named_terms(other)
        }
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // name-based so that equal polynomials over different orders agree
        named_terms(self).hash(state);
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                assert!(self.vars == rhs.vars, "polynomials over different variable orders");
                self.$inner(rhs)
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_unchecked);
forward_binop!(Sub, sub, sub_unchecked);
forward_binop!(Mul, mul, mul_unchecked);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
