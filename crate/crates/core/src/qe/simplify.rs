//! Compact quantifier-free output from a truth table over sign vectors.

use crate::formula::{Formula, Rel};
use crate::poly::Polynomial;
use crate::roots::Sign;

const SIGNS: [Sign; 3] = [Sign::Negative, Sign::Zero, Sign::Positive];

/// Sign sets as bitmasks: bit 0 negative, bit 1 zero, bit 2 positive.
fn bit(s: Sign) -> u8 {
    match s {
        Sign::Negative => 1,
        Sign::Zero => 2,
        Sign::Positive => 4,
    }
}

fn covers(boxed: &[u8], v: &[Sign]) -> bool {
    boxed.iter().zip(v).all(|(m, s)| m & bit(*s) != 0)
}

/// Disjunction of sign-condition conjunctions true exactly on the true rows,
/// relative to the realized rows. Each true row is widened one sign at a
/// time while no false row falls inside; covered rows are then skipped.
pub fn minimize(polys: &[Polynomial], rows: &[(Vec<Sign>, bool)]) -> Formula {
    let falses: Vec<&Vec<Sign>> = rows.iter().filter(|(_, t)| !t).map(|(v, _)| v).collect();
    let trues: Vec<&Vec<Sign>> = rows.iter().filter(|(_, t)| *t).map(|(v, _)| v).collect();
    if trues.is_empty() {
        return Formula::False;
    }
    if falses.is_empty() {
        return Formula::True;
    }
    let mut boxes: Vec<Vec<u8>> = Vec::new();
    for v in &trues {
        if boxes.iter().any(|b| covers(b, v)) {
            continue;
        }
        let mut b: Vec<u8> = v.iter().map(|s| bit(*s)).collect();
        for i in 0..b.len() {
            for s in SIGNS {
                if b[i] & bit(s) != 0 {
                    continue;
                }
                b[i] |= bit(s);
                if falses.iter().any(|f| covers(&b, f)) {
                    b[i] &= !bit(s);
                }
            }
        }
        boxes.push(b);
    }
    // Drop boxes whose true rows are all covered by the others.
    let mut i = 0;
    while i < boxes.len() {
        let others: Vec<&Vec<u8>> = boxes.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b).collect();
        let redundant = trues.iter().filter(|v| covers(&boxes[i], v)).all(|v| others.iter().any(|b| covers(b, v)));
        if redundant {
            boxes.remove(i);
        } else {
            i += 1;
        }
    }
    let disjuncts: Vec<Formula> = boxes
        .iter()
        .map(|b| {
            let atoms: Vec<Formula> = b
                .iter()
                .zip(polys)
                .filter_map(|(m, p)| mask_rel(*m).map(|r| Formula::Atom(p.clone(), r)))
                .collect();
            conj(atoms)
        })
        .collect();
    if disjuncts.iter().any(|d| *d == Formula::True) {
        return Formula::True;
    }
    if disjuncts.len() == 1 {
        disjuncts.into_iter().next().unwrap()
    } else {
        Formula::Or(disjuncts)
    }
}

fn conj(mut atoms: Vec<Formula>) -> Formula {
    match atoms.len() {
        0 => Formula::True,
        1 => atoms.pop().unwrap(),
        _ => Formula::And(atoms),
    }
}

fn mask_rel(m: u8) -> Option<Rel> {
    match m {
        1 => Some(Rel::Lt),
        2 => Some(Rel::Eq),
        4 => Some(Rel::Gt),
        3 => Some(Rel::Le),
        6 => Some(Rel::Ge),
        5 => Some(Rel::Ne),
        _ => None,
    }
}
