//! Exact arithmetic in a tower of real algebraic extensions `Q(β1)(β2)…(βd)`.
//!
//! Level `d` stores a modulus `T_d(g_d)` that is monic in the generator `g_d`
//! with coefficients in the lower levels, and a rational interval isolating
//! `βd` among the real roots of `T_d(β1, …, β(d−1), ·)`. Zero tests compute
//! `gcd(a, T_d)` over the lower levels; when the gcd is a proper factor the
//! modulus is replaced by whichever factor keeps `βd` as a root. Moduli never
//! need to be irreducible.
//!
//! Levels are shared between sample points through `Arc`, and their mutable
//! state (refined interval, split modulus) is behind a mutex. Every state
//! reachable through refinement or splitting describes the same real number,
//! so concurrent readers always see a valid representation.

use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use super::field::{Field, Sign};
use super::upoly;
use crate::poly::{Interval, Monomial, Polynomial, VarOrder};
use crate::rational::{self, Rational};

#[derive(Clone)]
struct LevelState {
    modulus: Arc<Polynomial>,
    lo: Rational,
    hi: Rational,
    exact: Option<Rational>,
    sign_lo: Option<Sign>,
    version: u64,
}

struct Level {
    state: Mutex<LevelState>,
}

#[derive(Clone)]
pub struct Tower {
    gens: VarOrder,
    levels: Vec<Arc<Level>>,
}

impl Tower {
    /// An empty tower (the rationals) with room for `capacity` generators.
    pub fn new(capacity: usize) -> Self {
        let names: Vec<String> = (1..=capacity).map(|i| format!("β{i}")).collect();
        Tower { gens: VarOrder::new(&names), levels: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn capacity(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &VarOrder {
        &self.gens
    }

    pub fn field(&self) -> TowerField<'_> {
        TowerField { tower: self, depth: self.depth() }
    }

    pub fn constant(&self, q: Rational) -> Polynomial {
        Polynomial::constant(&self.gens, q)
    }

    /// Adjoins the unique root in `(lo, hi)` of a polynomial monic in the next generator.
    ///
    /// `modulus` must be monic of positive degree in generator `depth()` with
    /// coefficients in the current tower, nonzero at `lo` and `hi`, and have
    /// exactly one root in between.
    pub fn with_root(&self, modulus: Polynomial, lo: Rational, hi: Rational) -> (Tower, Polynomial) {
        let d = self.depth();
        assert!(d < self.capacity(), "tower capacity exceeded");
        let level = Level {
            state: Mutex::new(LevelState {
                modulus: Arc::new(modulus),
                lo,
                hi,
                exact: None,
                sign_lo: None,
                version: 0,
            }),
        };
        let mut levels = self.levels.clone();
        levels.push(Arc::new(level));
        let t = Tower { gens: self.gens.clone(), levels };
        let g = Polynomial::var(&self.gens, d);
        let g = t.reduce(&g, d + 1);
        (t, g)
    }

    fn snapshot(&self, d: usize) -> LevelState {
        self.levels[d].state.lock().expect("tower level poisoned").clone()
    }

    /// Current modulus of level `d`; it may shrink to a factor over time.
    pub fn modulus(&self, d: usize) -> Polynomial {
        (*self.snapshot(d).modulus).clone()
    }

    pub fn exact_value(&self, d: usize) -> Option<Rational> {
        self.snapshot(d).exact
    }

    fn bounds(&self, d: usize) -> Interval {
        let st = self.levels[d].state.lock().expect("tower level poisoned");
        match &st.exact {
            Some(q) => Interval::point(q.clone()),
            None => Interval::new(st.lo.clone(), st.hi.clone()),
        }
    }

    fn set_modulus(&self, d: usize, m: Vec<Polynomial>, seen: u64) {
        let modulus = Polynomial::from_coefficients(&self.gens, d, &m);
        let exact = if m.len() == 2 { m[0].constant_value().map(|c| -c) } else { None };
        let mut st = self.levels[d].state.lock().expect("tower level poisoned");
        if st.version != seen {
            return;
        }
        st.modulus = Arc::new(modulus);
        st.sign_lo = None;
        if let Some(q) = exact {
            st.lo = q.clone();
            st.hi = q.clone();
            st.exact = Some(q);
        }
        st.version += 1;
    }

    /// Canonical-ish representative of `p` in the first `depth` levels: degree in
    /// each generator below that level's modulus degree, exact levels substituted.
    pub fn reduce(&self, p: &Polynomial, depth: usize) -> Polynomial {
        let mut p = p.clone();
        for d in (0..depth.min(self.depth())).rev() {
            if !p.contains_var(d) {
                continue;
            }
            let st = self.snapshot(d);
            if let Some(q) = &st.exact {
                p = p.eval(&[(d, q.clone())]);
                continue;
            }
            let dt = st.modulus.degree_in(d);
            let n = self.gens.len();
            loop {
                let k = p.degree_in(d);
                if k < dt {
                    break;
                }
                let lc = p.leading_coeff_in(d);
                let shift = Monomial::var(n, d, (k - dt) as u32);
                p = &p - &(&lc * &st.modulus.mul_monomial(&shift));
            }
        }
        p
    }

    /// Interval enclosure of the value of an element.
    pub fn enclosure(&self, p: &Polynomial) -> Interval {
        let boxes: Vec<Interval> = (0..self.gens.len())
            .map(|i| {
                if i < self.depth() && p.contains_var(i) {
                    self.bounds(i)
                } else {
                    Interval::point(Rational::zero())
                }
            })
            .collect();
        p.eval_interval(&boxes)
    }

    /// Halves the isolating interval of level `d` (or pins the root if the midpoint hits it).
    pub fn refine_level(&self, d: usize) {
        let st = self.snapshot(d);
        if st.exact.is_some() {
            return;
        }
        let mid = (&st.lo + &st.hi) / rational::int(2);
        let s_mid = self.sign(&st.modulus.eval(&[(d, mid.clone())]), d);
        let s_lo = match st.sign_lo {
            Some(s) => s,
            None => self.sign(&st.modulus.eval(&[(d, st.lo.clone())]), d),
        };
        let mut cur = self.levels[d].state.lock().expect("tower level poisoned");
        if cur.version != st.version {
            return;
        }
        if s_mid == Sign::Zero {
            cur.lo = mid.clone();
            cur.hi = mid.clone();
            cur.exact = Some(mid);
        } else if s_mid == s_lo {
            cur.lo = mid;
            cur.sign_lo = Some(s_lo);
        } else {
            cur.hi = mid;
            cur.sign_lo = Some(s_lo);
        }
        cur.version += 1;
    }

    fn refine_vars(&self, p: &Polynomial) {
        for d in p.variables() {
            if d < self.depth() {
                self.refine_level(d);
            }
        }
    }

    /// Refines the levels used by `p` until its enclosure is narrower than `w`.
    pub fn enclosure_within(&self, p: &Polynomial, w: &Rational) -> Interval {
        let mut p = self.reduce(p, self.depth());
        loop {
            let enc = self.enclosure(&p);
            if &enc.width() <= w {
                return enc;
            }
            self.refine_vars(&p);
            p = self.reduce(&p, self.depth());
        }
    }

    pub fn is_zero(&self, p: &Polynomial, depth: usize) -> bool {
        let p = self.reduce(p, depth);
        if p.is_zero() {
            return true;
        }
        if p.is_constant() || !self.enclosure(&p).contains_zero() {
            return false;
        }
        self.is_zero_reduced(&p)
    }

    fn is_zero_reduced(&self, p: &Polynomial) -> bool {
        let d = match p.main_var() {
            Some(d) => d,
            None => return p.is_zero(),
        };
        let field = TowerField { tower: self, depth: d };
        let st = self.snapshot(d);
        if let Some(q) = &st.exact {
            return self.is_zero(&p.eval(&[(d, q.clone())]), d);
        }
        let a = upoly::trim(&field, p.coefficients_in(d));
        match a.len() {
            0 => return true,
            1 => return false,
            _ => {}
        }
        let t = st.modulus.coefficients_in(d);
        let g = upoly::gcd(&field, &a, &t);
        if g.len() <= 1 {
            return false;
        }
        let zero = upoly::sign_at(&field, &g, &st.lo) != upoly::sign_at(&field, &g, &st.hi);
        if g.len() < t.len() {
            let factor = if zero { g } else { upoly::quo(&field, &t, &g) };
            self.set_modulus(d, factor, st.version);
        }
        zero
    }

    /// Exact sign of an element of the first `depth` levels.
    pub fn sign(&self, p: &Polynomial, depth: usize) -> Sign {
        let mut p = self.reduce(p, depth);
        let mut checked = false;
        loop {
            if let Some(c) = p.constant_value() {
                return Sign::of(&c);
            }
            let enc = self.enclosure(&p);
            if !enc.contains_zero() {
                return if enc.lo.is_positive() { Sign::Positive } else { Sign::Negative };
            }
            if !checked {
                if self.is_zero_reduced(&p) {
                    return Sign::Zero;
                }
                checked = true;
            }
            self.refine_vars(&p);
            p = self.reduce(&p, depth);
        }
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, p: &Polynomial, depth: usize) -> Polynomial {
        let mut p = self.reduce(p, depth);
        loop {
            if let Some(c) = p.constant_value() {
                assert!(!c.is_zero(), "inverse of zero");
                return self.constant(c.recip());
            }
            let d = p.main_var().expect("nonconstant");
            let field = TowerField { tower: self, depth: d };
            let st = self.snapshot(d);
            if st.exact.is_some() {
                p = self.reduce(&p, depth);
                continue;
            }
            let a = upoly::trim(&field, p.coefficients_in(d));
            if a.len() == 1 {
                return field.inv(&a[0]);
            }
            assert!(!a.is_empty(), "inverse of zero");
            let t = st.modulus.coefficients_in(d);
            let (g, s) = upoly::half_ext_gcd(&field, &a, &t);
            if g.len() == 1 {
                return self.reduce(&Polynomial::from_coefficients(&self.gens, d, &s), depth);
            }
            let vanishes = upoly::sign_at(&field, &g, &st.lo) != upoly::sign_at(&field, &g, &st.hi);
            assert!(!vanishes, "inverse of zero");
            self.set_modulus(d, upoly::quo(&field, &t, &g), st.version);
            p = self.reduce(&p, depth);
        }
    }
}

/// The field `Q(β1, …, β_depth)` as a [`Field`] over tower elements.
#[derive(Clone, Copy)]
pub struct TowerField<'a> {
    pub tower: &'a Tower,
    pub depth: usize,
}

impl Field for TowerField<'_> {
    type Elem = Polynomial;

    fn from_rational(&self, q: &Rational) -> Polynomial {
        self.tower.constant(q.clone())
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a + b
    }
    fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a - b
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_constant() || b.is_constant() {
            return a * b;
        }
        self.tower.reduce(&(a * b), self.depth)
    }
    fn neg(&self, a: &Polynomial) -> Polynomial {
        -a
    }
    fn inv(&self, a: &Polynomial) -> Polynomial {
        self.tower.inv(a, self.depth)
    }
    fn is_zero(&self, a: &Polynomial) -> bool {
        if a.is_zero() {
            return true;
        }
        if a.is_constant() {
            return false;
        }
        self.tower.is_zero(a, self.depth)
    }
    fn sign(&self, a: &Polynomial) -> Sign {
        self.tower.sign(a, self.depth)
    }
    fn magnitude_bounds(&self, a: &Polynomial) -> (Rational, Rational) {
        if self.sign(a) == Sign::Zero {
            return (Rational::zero(), Rational::zero());
        }
        let enc = self.tower.enclosure(&self.tower.reduce(a, self.depth));
        (enc.mignitude(), enc.magnitude())
    }
    fn as_rational(&self, a: &Polynomial) -> Option<Rational> {
        if let Some(c) = a.constant_value() {
            return Some(c);
        }
        self.tower.reduce(a, self.depth).constant_value()
    }
}
