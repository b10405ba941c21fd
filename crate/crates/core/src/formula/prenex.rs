//! Negation and prenex normal forms.

use std::collections::HashSet;

use super::{Formula, Quantifier, Rel};
use crate::poly::VarOrder;

/// A formula `Q1 v1 … Qm vm. M` with `M` built from `and`, `or` and atoms over `<`, `=`, `>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrenexFormula {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
    pub free: Vec<String>,
    /// Free variables followed by the prefix variables; every atom is over this order.
    pub vars: VarOrder,
}

impl PrenexFormula {
    pub fn to_formula(&self) -> Formula {
        self.prefix
            .iter()
            .rev()
            .fold(self.matrix.clone(), |acc, (q, v)| Formula::Quant(*q, v.clone(), Box::new(acc)))
    }

    pub fn is_sentence(&self) -> bool {
        self.free.is_empty()
    }
}

fn atom_nnf(p: &crate::poly::Polynomial, rel: Rel, negate: bool) -> Formula {
    let a = |r| Formula::Atom(p.clone(), r);
    match (rel, negate) {
        (Rel::Gt, true) => Formula::Or(vec![a(Rel::Eq), a(Rel::Lt)]),
        (Rel::Lt, true) => Formula::Or(vec![a(Rel::Eq), a(Rel::Gt)]),
        _ => match if negate { rel.negated() } else { rel } {
            r @ (Rel::Lt | Rel::Eq | Rel::Gt) => a(r),
            Rel::Le => Formula::Or(vec![a(Rel::Lt), a(Rel::Eq)]),
            Rel::Ge => Formula::Or(vec![a(Rel::Gt), a(Rel::Eq)]),
            Rel::Ne => Formula::Or(vec![a(Rel::Lt), a(Rel::Gt)]),
        },
    }
}

/// Negation normal form over `<`, `=`, `>` atoms; `negate` pushes a pending negation.
pub(crate) fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True => Formula::from_bool(!negate),
        Formula::False => Formula::from_bool(negate),
        Formula::Atom(p, r) => atom_nnf(p, *r, negate),
        Formula::Not(a) => nnf(a, !negate),
        Formula::And(v) | Formula::Or(v) => {
            let kids = v.iter().map(|c| nnf(c, negate)).collect();
            if matches!(f, Formula::And(_)) != negate {
                Formula::And(kids)
            } else {
                Formula::Or(kids)
            }
        }
        Formula::Implies(a, b) => {
            if negate {
                Formula::And(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::Or(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            if negate {
                Formula::Or(vec![
                    Formula::And(vec![nnf(a, false), nnf(b, true)]),
                    Formula::And(vec![nnf(a, true), nnf(b, false)]),
                ])
            } else {
                Formula::Or(vec![
                    Formula::And(vec![nnf(a, false), nnf(b, false)]),
                    Formula::And(vec![nnf(a, true), nnf(b, true)]),
                ])
            }
        }
        Formula::Quant(q, v, body) => {
            let q = match (q, negate) {
                (Quantifier::Forall, true) => Quantifier::Exists,
                (Quantifier::Exists, true) => Quantifier::Forall,
                (q, false) => *q,
            };
            Formula::Quant(q, v.clone(), Box::new(nnf(body, negate)))
        }
    }
}

fn fresh(base: &str, taken: &HashSet<String>) -> String {
    (1..).map(|i| format!("{base}_{i}")).find(|n| !taken.contains(n)).unwrap()
}

/// Renames binders so that no variable is bound twice or both bound and free.
fn rename_apart(f: &Formula, used: &mut HashSet<String>, taken: &mut HashSet<String>) -> Formula {
    match f {
        Formula::Quant(q, v, body) => {
            if used.contains(v) {
                let n = fresh(v, taken);
                taken.insert(n.clone());
                used.insert(n.clone());
                let old = v.clone();
                let renamed = body.rename_vars(&|x| if x == old { n.clone() } else { x.to_string() });
                Formula::Quant(*q, n, Box::new(rename_apart(&renamed, used, taken)))
            } else {
                used.insert(v.clone());
                Formula::Quant(*q, v.clone(), Box::new(rename_apart(body, used, taken)))
            }
        }
        Formula::And(v) => Formula::And(v.iter().map(|c| rename_apart(c, used, taken)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| rename_apart(c, used, taken)).collect()),
        _ => f.clone(),
    }
}

fn pull(f: Formula, prefix: &mut Vec<(Quantifier, String)>) -> Formula {
    match f {
        Formula::Quant(q, v, body) => {
            prefix.push((q, v));
            pull(*body, prefix)
        }
        Formula::And(v) => Formula::And(v.into_iter().map(|c| pull(c, prefix)).collect()),
        Formula::Or(v) => Formula::Or(v.into_iter().map(|c| pull(c, prefix)).collect()),
        other => other,
    }
}

/// Flattens nested connectives, folds constants and drops duplicate children.
pub(crate) fn simplify(f: Formula) -> Formula {
    match f {
        Formula::And(v) if v.is_empty() => Formula::True,
        Formula::Or(v) if v.is_empty() => Formula::False,
        Formula::And(v) => {
            let mut out: Vec<Formula> = Vec::new();
            for c in v {
                match simplify(c) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(w) => {
                        for x in w {
                            if !out.contains(&x) {
                                out.push(x);
                            }
                        }
                    }
                    x => {
                        if !out.contains(&x) {
                            out.push(x);
                        }
                    }
                }
            }
            Formula::and(out)
        }
        Formula::Or(v) => {
            let mut out: Vec<Formula> = Vec::new();
            for c in v {
                match simplify(c) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(w) => {
                        for x in w {
                            if !out.contains(&x) {
                                out.push(x);
                            }
                        }
                    }
                    x => {
                        if !out.contains(&x) {
                            out.push(x);
                        }
                    }
                }
            }
            Formula::or(out)
        }
        other => other,
    }
}

/// Prenex form with negations pushed into atoms and bound variables renamed apart.
///
/// The variable order is `free_order` (extended by any missing free variables in
/// order of appearance) followed by the prefix variables, outermost first.
/// Quantifiers whose variable does not occur in the matrix are dropped.
pub fn to_prenex(f: &Formula, free_order: Option<&[String]>) -> PrenexFormula {
    let mut free: Vec<String> = free_order.map(|v| v.to_vec()).unwrap_or_default();
    for v in f.free_vars() {
        if !free.contains(&v) {
            free.push(v);
        }
    }
    let mut used: HashSet<String> = free.iter().cloned().collect();
    let mut taken: HashSet<String> = used.iter().cloned().chain(f.all_vars()).collect();
    let n = nnf(f, false);
    let apart = rename_apart(&n, &mut used, &mut taken);
    let mut prefix = Vec::new();
    let matrix = simplify(pull(apart, &mut prefix));
    let occurring: HashSet<String> = matrix.atoms().iter().flat_map(|(p, _)| p.variable_names()).collect();
    prefix.retain(|(_, v)| occurring.contains(v));
    let names: Vec<String> = free.iter().cloned().chain(prefix.iter().map(|(_, v)| v.clone())).collect();
    let vars = VarOrder::new(&names);
    let matrix = remap_atoms(&matrix, &vars);
    PrenexFormula { prefix, matrix, free, vars }
}

fn remap_atoms(f: &Formula, vars: &VarOrder) -> Formula {
    match f {
        Formula::Atom(p, r) => Formula::Atom(p.remap(vars).expect("all atom variables are ordered"), *r),
        Formula::And(v) => Formula::And(v.iter().map(|c| remap_atoms(c, vars)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| remap_atoms(c, vars)).collect()),
        other => other.clone(),
    }
}
