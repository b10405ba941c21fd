//! Conditional independence for Gaussian vectors as vanishing minors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::StatsError;
use crate::formula::{Formula, Rel};
use crate::poly::{Polynomial, VarOrder};

/// `left ⊥ right | given` over variable indices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CiStatement {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub given: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatrixForm {
    /// Unit diagonal, off-diagonal symbols `r12`, `r13`, ...
    #[default]
    Correlation,
    /// Full symmetric matrix with symbols `s11`, `s12`, ...
    Covariance,
}

impl CiStatement {
    pub fn new(left: &[usize], right: &[usize], given: &[usize]) -> Result<Self, StatsError> {
        let s = CiStatement {
            left: left.iter().copied().collect(),
            right: right.iter().copied().collect(),
            given: given.iter().copied().collect(),
        };
        if s.left.is_empty() || s.right.is_empty() {
            return Err(StatsError::Invalid(format!("{s}: empty side")));
        }
        if !s.left.is_disjoint(&s.right) || !s.left.is_disjoint(&s.given) || !s.right.is_disjoint(&s.given) {
            return Err(StatsError::Invalid(format!("{s}: sets overlap")));
        }
        if s.indices().any(|i| i == 0) {
            return Err(StatsError::Invalid(format!("{s}: indices start at 1")));
        }
        Ok(s)
    }

    pub fn marginal(i: usize, j: usize) -> Self {
        CiStatement::new(&[i], &[j], &[]).expect("valid marginal statement")
    }

    pub fn conditional(i: usize, j: usize, k: usize) -> Self {
        CiStatement::new(&[i], &[j], &[k]).expect("valid conditional statement")
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.left.iter().chain(&self.right).chain(&self.given).copied()
    }

    pub fn max_index(&self) -> usize {
        self.indices().max().unwrap_or(0)
    }
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} _|_ {}", self.left.iter().join(","), self.right.iter().join(","))?;
        if !self.given.is_empty() {
            write!(f, " | {}", self.given.iter().join(","))?;
        }
        Ok(())
    }
}

/// Accepts `1 _|_ 3 | 2`, `1 ⊥ 3 | 2` and `1,2 _|_ 3`.
impl FromStr for CiStatement {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, StatsError> {
        let bad = || StatsError::Invalid(format!("cannot read independence statement {s:?}"));
        let s2 = s.replace('⊥', "_|_");
        let (l, rest) = s2.split_once("_|_").ok_or_else(bad)?;
        let (r, g) = rest.split_once('|').unwrap_or((rest, ""));
        let nums = |t: &str| -> Result<Vec<usize>, StatsError> {
            t.split([',', ' ']).filter(|x| !x.is_empty()).map(|x| x.parse().map_err(|_| bad())).collect()
        };
        CiStatement::new(&nums(l)?, &nums(r)?, &nums(g)?)
    }
}

/// Matrix symbol for entry `(i, j)`; `None` for a unit diagonal.
pub fn entry_name(form: MatrixForm, i: usize, j: usize) -> Option<String> {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match form {
        MatrixForm::Correlation if a == b => None,
        MatrixForm::Correlation => Some(format!("r{a}{b}")),
        MatrixForm::Covariance => Some(format!("s{a}{b}")),
    }
}

/// All matrix symbols in row-major upper-triangular order.
pub fn matrix_symbols(form: MatrixForm, n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| (i..=n).filter_map(move |j| entry_name(form, i, j))).collect()
}

fn entry(form: MatrixForm, vars: &VarOrder, i: usize, j: usize) -> Polynomial {
    match entry_name(form, i, j) {
        None => Polynomial::one(vars),
        Some(n) => Polynomial::var_named(vars, &n).expect("symbol in order"),
    }
}

/// Determinant by cofactor expansion; the matrices here are at most 4 by 4.
pub(crate) fn determinant(m: &[Vec<Polynomial>], vars: &VarOrder) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(vars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero(vars);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = &m[0][c] * &determinant(&minor, vars);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn submatrix_det(form: MatrixForm, vars: &VarOrder, rows: &[usize], cols: &[usize]) -> Polynomial {
    let m: Vec<Vec<Polynomial>> =
        rows.iter().map(|&i| cols.iter().map(|&j| entry(form, vars, i, j)).collect()).collect();
    determinant(&m, vars)
}

/// Polynomial equation equivalent to the statement for a nonsingular Gaussian:
/// the minor with rows `{i} ∪ K` and columns `{j} ∪ K` vanishes.
pub fn gaussian_constraints_in(stmt: &CiStatement, n: usize, form: MatrixForm) -> Result<Formula, StatsError> {
    if stmt.left.len() != 1 || stmt.right.len() != 1 {
        return Err(StatsError::Unsupported(format!("{stmt}: only single-variable sides are supported")));
    }
    if stmt.max_index() > n {
        return Err(StatsError::Invalid(format!("{stmt}: index beyond {n}")));
    }
    let vars = VarOrder::new(&matrix_symbols(form, n));
    let i = *stmt.left.iter().next().unwrap();
    let j = *stmt.right.iter().next().unwrap();
    let given: Vec<usize> = stmt.given.iter().copied().collect();
    let rows: Vec<usize> = std::iter::once(i).chain(given.iter().copied()).collect();
    let cols: Vec<usize> = std::iter::once(j).chain(given.iter().copied()).collect();
    Ok(Formula::atom(submatrix_det(form, &vars, &rows, &cols), Rel::Eq))
}

pub fn gaussian_constraints(stmt: &CiStatement, n: usize) -> Result<Formula, StatsError> {
    gaussian_constraints_in(stmt, n, MatrixForm::Correlation)
}

/// Positive definiteness: every principal minor of size at least 2 (all sizes
/// for covariance matrices) is positive.
pub fn positive_definite(n: usize, form: MatrixForm) -> Formula {
    let vars = VarOrder::new(&matrix_symbols(form, n));
    let min = if form == MatrixForm::Correlation { 2 } else { 1 };
    let mut conds = Vec::new();
    for size in min..=n {
        for idx in (1..=n).combinations(size) {
            conds.push(Formula::atom(submatrix_det(form, &vars, &idx, &idx), Rel::Gt));
        }
    }
    Formula::and(conds)
}

/// `∀ symbols (PD ∧ premises → some conclusion)`.
pub fn membership_sentence(premises: &[CiStatement], conclusion: &[CiStatement], n: usize) -> Result<Formula, StatsError> {
    membership_sentence_in(premises, conclusion, n, MatrixForm::Correlation)
}

pub fn membership_sentence_in(
    premises: &[CiStatement],
    conclusion: &[CiStatement],
    n: usize,
    form: MatrixForm,
) -> Result<Formula, StatsError> {
    let mut lhs = vec![positive_definite(n, form)];
    for p in premises {
        lhs.push(gaussian_constraints_in(p, n, form)?);
    }
    let rhs = conclusion.iter().map(|c| gaussian_constraints_in(c, n, form)).collect::<Result<Vec<_>, _>>()?;
    let body = Formula::implies(Formula::and(lhs), Formula::or(rhs));
    Ok(Formula::quantify(crate::formula::Quantifier::Forall, &matrix_symbols(form, n), body))
}
