//! Multivariate gcd by recursive primitive pseudo-remainder sequences.

use super::Polynomial;

/// Greatest common divisor, returned as a canonical associate (integer
/// coefficients, content 1, positive leading coefficient). `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.canonical_associate();
    }
    if b.is_zero() {
        return a.canonical_associate();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.vars());
    }
    let v = a.main_var().max(b.main_var()).unwrap();
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut f, mut g) = if da >= db { (pa, pb) } else { (pb, pa) };
    loop {
        let r = f.prem(&g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            g = Polynomial::one(a.vars());
            break;
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
    (&c * &primitive_part_in(&g, v)).canonical_associate()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let mut coeffs = p.coefficients_in(v).into_iter().filter(|c| !c.is_zero());
    let mut g = coeffs.next().unwrap().canonical_associate();
    for c in coeffs {
        if g.is_one() {
            break;
        }
        g = gcd(&g, &c);
    }
    g
}

/// `p` divided by its content in `v`, scaled to a canonical associate.
pub fn primitive_part_in(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").canonical_associate()
}

/// `p / gcd(p, dp/dv)`, as a canonical associate. Every factor free of `v`
/// divides the derivative, so the content in `v` is dropped along with the
/// repeated factors. Polynomials free of `v` are returned unchanged.
pub fn squarefree_part_in(p: &Polynomial, v: usize) -> Polynomial {
    if p.degree_in(v) <= 0 {
        return p.canonical_associate();
    }
    let d = p.derivative(v);
    let g = gcd(p, &d);
    p.div_exact(&g).expect("gcd divides").canonical_associate()
}
