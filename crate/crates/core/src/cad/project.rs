//! Collins projection.

use std::collections::HashSet;

use crate::poly::{canonical_pieces, Polynomial};
use crate::resultant::psc;

/// Successive reducta of `f` in `v` that have positive degree, stopping after the
/// first one whose leading coefficient is a nonzero constant (later ones can never
/// become the leading part).
fn reducta(f: &Polynomial, v: usize) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let mut cur = f.clone();
    while cur.degree_in(v) >= 1 {
        out.push(cur.clone());
        let lc = cur.leading_coeff_in(v);
        if lc.is_constant() {
            break;
        }
        let d = cur.degree_in(v) as usize;
        let mut cs = cur.coefficients_in(v);
        cs.truncate(d);
        cur = Polynomial::from_coefficients(cur.vars(), v, &cs);
    }
    out
}

fn push_pieces(p: Polynomial, out: &mut Vec<Polynomial>, seen: &mut HashSet<Polynomial>) {
    if p.is_zero() || p.is_constant() {
        return;
    }
    for q in canonical_pieces(&p) {
        if !q.is_constant() && seen.insert(q.clone()) {
            out.push(q);
        }
    }
}

/// Projection `Φ(F)` with respect to `v`: coefficients, subresultant coefficients
/// of each reductum with its derivative, and of each pair of reducta. Every
/// element is split into canonical square-free pieces; the result is free of `v`.
pub fn project(family: &[Polynomial], v: usize) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let polys: Vec<&Polynomial> = family.iter().filter(|f| f.degree_in(v) >= 1).collect();
    for f in &polys {
        for c in f.coefficients_in(v) {
            push_pieces(c, &mut out, &mut seen);
        }
    }
    let reds: Vec<Vec<Polynomial>> = polys.iter().map(|f| reducta(f, v)).collect();
    for rs in &reds {
        for r in rs {
            let d = r.degree_in(v) as usize;
            let dr = r.derivative(v);
            for l in 0..d {
                if let Ok(p) = psc(r, &dr, v, l) {
                    push_pieces(p, &mut out, &mut seen);
                }
            }
        }
    }
    for i in 0..reds.len() {
        for j in i + 1..reds.len() {
            for a in &reds[i] {
                for b in &reds[j] {
                    let m = a.degree_in(v).min(b.degree_in(v)) as usize;
                    for l in 0..m {
                        if let Ok(p) = psc(a, b, v, l) {
                            push_pieces(p, &mut out, &mut seen);
                        }
                    }
                }
            }
        }
    }
    sort_family(&mut out);
    out
}

/// Deterministic family order: lower degree and fewer terms first, then by text.
pub fn sort_family(f: &mut [Polynomial]) {
    f.sort_by_cached_key(|p| (p.total_degree(), p.num_terms(), p.to_string()));
}
