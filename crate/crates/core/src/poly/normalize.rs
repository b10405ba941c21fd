use super::{content_in, squarefree_part_in, Polynomial};

/// Replaces each polynomial by the primitive part of its square-free part
/// (taken in `v`, or in the polynomial's own main variable when it does not
/// involve `v`), made canonical so that `p` and `-p` coincide. Constants are
/// dropped and duplicates removed; input order is otherwise kept.
pub fn normalize_set(polys: &[Polynomial], v: usize) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::new();
    for p in polys {
        let Some(main) = p.main_var() else { continue };
        let w = if p.contains_var(v) { v } else { main };
        let sf = squarefree_part_in(p, w);
        if !sf.is_constant() && !out.contains(&sf) {
            out.push(sf);
        }
    }
    out
}

/// Square-free primitive part of `p` in its main variable, followed by the
/// pieces of its content, recursively. Together they have the same real zero
/// set as `p`, and sign-invariance of every piece on a connected set implies
/// sign-invariance of `p` there.
pub fn canonical_pieces(p: &Polynomial) -> Vec<Polynomial> {
    let mut out = Vec::new();
    collect_pieces(p, &mut out);
    out
}

fn collect_pieces(p: &Polynomial, out: &mut Vec<Polynomial>) {
    let Some(v) = p.main_var() else { return };
    let sf = squarefree_part_in(p, v);
    if !sf.is_constant() && !out.contains(&sf) {
        out.push(sf);
    }
    let c = content_in(p, v);
    collect_pieces(&c, out);
}
