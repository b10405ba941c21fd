//! Dense univariate polynomial algorithms over an arbitrary [`Field`].
//!
//! Coefficients are stored lowest degree first and kept trimmed: the last
//! entry, when present, is a nonzero element.

use num_traits::{One, Signed, Zero};

use super::field::{Field, Sign};
use crate::rational::Rational;

pub type UPoly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, mut p: UPoly<F::Elem>) -> UPoly<F::Elem> {
    while let Some(last) = p.last() {
        if f.is_zero(last) {
            p.pop();
        } else {
            break;
        }
    }
    p
}

/// Degree of a trimmed polynomial; −1 for zero.
pub fn degree<E>(p: &[E]) -> i64 {
    p.len() as i64 - 1
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    let nb: Vec<_> = b.iter().map(|x| f.neg(x)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> UPoly<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn eval<F: Field>(f: &F, p: &[F::Elem], x: &Rational) -> F::Elem {
    let xe = f.from_rational(x);
    let mut acc = f.zero();
    for c in p.iter().rev() {
        acc = f.add(&f.mul(&acc, &xe), c);
    }
    acc
}

pub fn derivative<F: Field>(f: &F, p: &[F::Elem]) -> UPoly<F::Elem> {
    let out = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_rational(&Rational::from_integer((i as i64).into()))))
        .collect();
    trim(f, out)
}

pub fn monic<F: Field>(f: &F, p: &[F::Elem]) -> UPoly<F::Elem> {
    match p.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc);
            let mut out: Vec<_> = p[..p.len() - 1].iter().map(|c| f.mul(c, &inv)).collect();
            out.push(f.one());
            out
        }
    }
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (UPoly<F::Elem>, UPoly<F::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Vec<F::Elem> = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = f.inv(&b[db]);
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(&r[r.len() - 1], &inv);
        for (i, bc) in b.iter().enumerate().take(db) {
            r[k + i] = f.sub(&r[k + i], &f.mul(&c, bc));
        }
        r.pop();
        q[k] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    divrem(f, a, b).1
}

pub fn quo<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    divrem(f, a, b).0
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> UPoly<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Returns `(g, s)` with `g = gcd(a, b)` monic and `s·a ≡ g (mod b)`.
pub fn half_ext_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (UPoly<F::Elem>, UPoly<F::Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    match r0.last() {
        None => (r0, s0),
        Some(lc) => {
            let inv = f.inv(lc);
            (monic(f, &r0), scale(f, &s0, &inv))
        }
    }
}

/// `p / gcd(p, p')`, made monic.
pub fn squarefree<F: Field>(f: &F, p: &[F::Elem]) -> UPoly<F::Elem> {
    if p.len() <= 2 {
        return monic(f, p);
    }
    let g = gcd(f, p, &derivative(f, p));
    monic(f, &quo(f, p, &g))
}

/// Cauchy root bound `1 + max |a_k| / |a_n|`, using magnitude bounds for inexact fields.
pub fn root_bound<F: Field>(f: &F, p: &[F::Elem]) -> Rational {
    let n = p.len() - 1;
    let (lead_lo, _) = f.magnitude_bounds(&p[n]);
    let mut max = Rational::zero();
    for c in &p[..n] {
        let (_, hi) = f.magnitude_bounds(c);
        if hi > max {
            max = hi;
        }
    }
    Rational::one() + max / lead_lo
}

pub fn sturm_sequence<F: Field>(f: &F, p: &[F::Elem]) -> Vec<UPoly<F::Elem>> {
    let mut seq = vec![p.to_vec()];
    let d = derivative(f, p);
    if d.is_empty() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = rem(f, &seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.iter().map(|c| f.neg(c)).collect());
    }
    seq
}

pub fn sign_at<F: Field>(f: &F, p: &[F::Elem], x: &Rational) -> Sign {
    f.sign(&eval(f, p, x))
}

/// Sign of the leading coefficient times `(±1)^deg`, i.e. the sign at ±∞.
pub fn sign_at_infinity<F: Field>(f: &F, p: &[F::Elem], positive: bool) -> Sign {
    match p.last() {
        None => Sign::Zero,
        Some(lc) => {
            let s = f.sign(lc);
            if positive || p.len() % 2 == 1 {
                s
            } else {
                -s
            }
        }
    }
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::Zero;
    let mut count = 0;
    for s in signs {
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn sign_variations<F: Field>(f: &F, seq: &[UPoly<F::Elem>], x: &Rational) -> usize {
    variations(seq.iter().map(|p| sign_at(f, p, x)))
}

/// Number of distinct roots in the open interval `(lo, hi)`; endpoints must not be roots.
pub fn count_between<F: Field>(f: &F, seq: &[UPoly<F::Elem>], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(f, seq, lo) - sign_variations(f, seq, hi)
}

/// A root located by isolation: either known exactly or the unique root in an open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootInterval {
    Exact(Rational),
    Open(Rational, Rational),
}

impl RootInterval {
    pub fn lo(&self) -> &Rational {
        match self {
            RootInterval::Exact(q) => q,
            RootInterval::Open(a, _) => a,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            RootInterval::Exact(q) => q,
            RootInterval::Open(_, b) => b,
        }
    }
}

/// Isolates all distinct real roots of a nonzero polynomial by bisection on `(−M, M)`.
///
/// Midpoints that happen to be roots are recorded exactly; the remaining
/// intervals are open and contain exactly one root each. Output is sorted.
pub fn isolate<F: Field>(f: &F, p: &[F::Elem]) -> Vec<RootInterval> {
    if p.len() <= 1 {
        return Vec::new();
    }
    let sq = squarefree(f, p);
    if sq.len() == 2 {
        if let (Some(c0), Some(c1)) = (f.as_rational(&sq[0]), f.as_rational(&sq[1])) {
            return vec![RootInterval::Exact(-c0 / c1)];
        }
    }
    let seq = sturm_sequence(f, &sq);
    let m = root_bound(f, &sq);
    let lo = -m.clone();
    let total = count_between(f, &seq, &lo, &m);
    let mut out = Vec::new();
    let mut stack = vec![(lo, m, total)];
    let two = Rational::from_integer(2.into());
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RootInterval::Open(a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        if sign_at(f, &sq, &mid) == Sign::Zero {
            out.push(RootInterval::Exact(mid.clone()));
            // Shrink a window around the exact root so both sides have rational non-root endpoints.
            let mut d = (&b - &a) / Rational::from_integer(4.into());
            loop {
                let l = &mid - &d;
                let r = &mid + &d;
                if sign_at(f, &sq, &l) != Sign::Zero
                    && sign_at(f, &sq, &r) != Sign::Zero
                    && count_between(f, &seq, &l, &r) == 1
                {
                    let nl = count_between(f, &seq, &a, &l);
                    let nr = count_between(f, &seq, &r, &b);
                    stack.push((a, l, nl));
                    stack.push((r, b, nr));
                    break;
                }
                d /= &two;
            }
            continue;
        }
        let nl = count_between(f, &seq, &a, &mid);
        stack.push((a, mid.clone(), nl));
        stack.push((mid, b, n - nl));
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    // Ensure neighbouring open intervals do not share an endpoint that is a root of nothing.
    out
}

/// Splits square-free factors into a pairwise coprime basis with the same roots.
pub fn coprime_basis<F: Field>(f: &F, factors: &[UPoly<F::Elem>]) -> Vec<UPoly<F::Elem>> {
    let mut work: Vec<UPoly<F::Elem>> = factors.iter().filter(|p| p.len() >= 2).map(|p| monic(f, p)).collect();
    let mut basis: Vec<UPoly<F::Elem>> = Vec::new();
    'next: while let Some(p) = work.pop() {
        for i in 0..basis.len() {
            let g = gcd(f, &p, &basis[i]);
            if g.len() >= 2 {
                let b = basis.swap_remove(i);
                for q in [quo(f, &b, &g), quo(f, &p, &g)] {
                    if q.len() >= 2 {
                        work.push(monic(f, &q));
                    }
                }
                work.push(monic(f, &g));
                continue 'next;
            }
        }
        basis.push(p);
    }
    basis
}

fn overlaps(a: &RootInterval, b: &RootInterval) -> bool {
    use RootInterval::*;
    match (a, b) {
        (Exact(p), Exact(q)) => p == q,
        // touching counts: a sector between them would be empty of rationals
        (Exact(q), Open(l, h)) | (Open(l, h), Exact(q)) => l <= q && q <= h,
        (Open(l1, h1), Open(l2, h2)) => l1 < h2 && l2 < h1,
    }
}

/// Roots of a family of polynomials, each paired with a square-free basis
/// element vanishing there. Intervals are pairwise disjoint and sorted.
///
/// Isolating the factors separately keeps the Sturm chains short; the product
/// of a large family has huge coefficients and a loose root bound.
pub fn isolate_family<F: Field>(f: &F, factors: &[UPoly<F::Elem>]) -> Vec<(RootInterval, UPoly<F::Elem>)> {
    let sq: Vec<UPoly<F::Elem>> = factors.iter().filter(|p| p.len() >= 2).map(|p| squarefree(f, p)).collect();
    let basis = coprime_basis(f, &sq);
    let mut roots: Vec<(RootInterval, usize)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        roots.extend(isolate(f, b).into_iter().map(|r| (r, i)));
    }
    // Distinct basis elements share no root, so refinement separates every pair.
    loop {
        roots.sort_by(|x, y| x.0.lo().cmp(y.0.lo()).then_with(|| x.0.hi().cmp(y.0.hi())));
        let mut clash = None;
        'scan: for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[j].0.lo() > roots[i].0.hi() {
                    break;
                }
                if overlaps(&roots[i].0, &roots[j].0) {
                    clash = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = clash else { break };
        for k in [i, j] {
            let (r, b) = &roots[k];
            roots[k].0 = refine(f, &basis[*b], r);
        }
    }
    roots.into_iter().map(|(r, i)| (r, basis[i].clone())).collect()
}

/// Bisects an isolating interval of a square-free `p` once, returning the refined location.
pub fn refine<F: Field>(f: &F, p: &[F::Elem], root: &RootInterval) -> RootInterval {
    match root {
        RootInterval::Exact(_) => root.clone(),
        RootInterval::Open(a, b) => {
            let mid = (a + b) / Rational::from_integer(2.into());
            let sm = sign_at(f, p, &mid);
            if sm == Sign::Zero {
                return RootInterval::Exact(mid);
            }
            let sa = sign_at(f, p, a);
            if sa == sm {
                RootInterval::Open(mid, b.clone())
            } else {
                RootInterval::Open(a.clone(), mid)
            }
        }
    }
}

/// Absolute value helper for interval widths.
pub fn width(root: &RootInterval) -> Rational {
    (root.hi() - root.lo()).abs()
}
