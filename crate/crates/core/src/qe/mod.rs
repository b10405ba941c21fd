//! Decision and quantifier elimination by and-or evaluation over a CAD.

mod simplify;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::cad::{sign_rel, Budget, Cad, CadCell, CadError, CellKind};
use crate::error::AlgebraError;
use crate::formula::{to_prenex, Formula, PrenexFormula, Quantifier, Rel};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::roots::{AlgebraicNumber, SamplePoint, Sign};

pub use simplify::minimize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QeError {
    #[error(transparent)]
    Cad(#[from] CadError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("formula has free variables: {0:?}")]
    NotASentence(Vec<String>),
    #[error("variable order {0:?} is incompatible with the formula")]
    BadVarOrder(Vec<String>),
    #[error("cells with the same sign conditions disagree on truth: {0}")]
    SignConflict(String),
    #[error("solution formula disagrees with the decomposition at {0}")]
    OracleMismatch(String),
}

impl From<QeError> for CadError {
    fn from(e: QeError) -> CadError {
        match e {
            QeError::Cad(c) => c,
            other => CadError::Algebra(AlgebraError::Unbound(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QeOptions {
    /// Stop evaluating siblings once a quantifier's value is known, and skip
    /// lifting when the bound atoms already decide the matrix.
    pub short_circuit: bool,
    pub budget: Budget,
    /// Preferred variable order. For `decide` it may only permute variables
    /// inside a block of like quantifiers; for `eliminate` it orders the free variables.
    pub var_order: Option<Vec<String>>,
}

impl Default for QeOptions {
    fn default() -> Self {
        QeOptions { short_circuit: true, budget: Budget::default(), var_order: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub cells_built: usize,
    pub cells_skipped: usize,
    pub projection_sizes: Vec<usize>,
}

/// Values of the outermost quantifier block that settle the sentence.
#[derive(Clone)]
pub struct Witness {
    pub vars: Vec<String>,
    pub point: SamplePoint,
}

impl Witness {
    pub fn values(&self) -> Vec<(String, AlgebraicNumber)> {
        self.vars.iter().enumerate().map(|(k, v)| (v.clone(), self.point.coordinate(k))).collect()
    }

    pub fn rational_values(&self) -> Option<HashMap<String, Rational>> {
        self.vars
            .iter()
            .enumerate()
            .map(|(k, v)| self.point.rational_coordinate(k).map(|q| (v.clone(), q)))
            .collect()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values().iter().map(|(v, a)| format!("{v} = {a}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub value: bool,
    /// For an existential sentence that holds, or a universal one that fails.
    pub witness: Option<Witness>,
    pub stats: Stats,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    pub formula: Formula,
    pub stats: Stats,
    /// Number of free-variable cells examined.
    pub cells: usize,
}

/// Matrix compiled against a list of distinct atom polynomials.
enum Matrix {
    Const(bool),
    Atom(usize, Rel),
    And(Vec<Matrix>),
    Or(Vec<Matrix>),
}

struct Compiled {
    matrix: Matrix,
    atoms: Vec<Polynomial>,
    /// Number of leading coordinates an atom needs.
    atom_level: Vec<usize>,
}

fn compile(f: &Formula) -> Compiled {
    fn go(f: &Formula, atoms: &mut Vec<Polynomial>) -> Matrix {
        match f {
            Formula::True => Matrix::Const(true),
            Formula::False => Matrix::Const(false),
            Formula::Atom(p, r) => match p.constant_value() {
                Some(c) => Matrix::Const(r.holds(Sign::of(&c))),
                None => {
                    let i = atoms.iter().position(|q| q == p).unwrap_or_else(|| {
                        atoms.push(p.clone());
                        atoms.len() - 1
                    });
                    Matrix::Atom(i, *r)
                }
            },
            Formula::And(v) => Matrix::And(v.iter().map(|c| go(c, atoms)).collect()),
            Formula::Or(v) => Matrix::Or(v.iter().map(|c| go(c, atoms)).collect()),
            other => unreachable!("prenex matrix contains {other}"),
        }
    }
    let mut atoms = Vec::new();
    let matrix = go(f, &mut atoms);
    let atom_level = atoms.iter().map(|p| p.main_var().map_or(0, |v| v + 1)).collect();
    Compiled { matrix, atoms, atom_level }
}

type SignCache = Vec<Option<Sign>>;

struct Evaluator<'a> {
    cad: &'a Cad,
    compiled: &'a Compiled,
    /// Quantifier of each level from `first` on.
    quants: &'a [Quantifier],
    first: usize,
    short_circuit: bool,
    skipped: AtomicUsize,
}

struct Outcome {
    value: bool,
    witness: Option<SamplePoint>,
}

impl Evaluator<'_> {
    fn quant(&self, level: usize) -> Quantifier {
        self.quants[level - self.first]
    }

    fn eval_matrix(&self, m: &Matrix, cell: &CadCell, cache: &mut SignCache) -> Result<Option<bool>, CadError> {
        Ok(match m {
            Matrix::Const(b) => Some(*b),
            Matrix::Atom(i, r) => {
                if self.compiled.atom_level[*i] > cell.level {
                    return Ok(None);
                }
                let s = match cache[*i] {
                    Some(s) => s,
                    None => {
                        let s = cell.sample.sign(&self.compiled.atoms[*i])?;
                        cache[*i] = Some(s);
                        s
                    }
                };
                Some(r.holds(s))
            }
            Matrix::And(v) => {
                let mut all = true;
                for c in v {
                    match self.eval_matrix(c, cell, cache)? {
                        Some(false) => return Ok(Some(false)),
                        Some(true) => {}
                        None => all = false,
                    }
                }
                all.then_some(true)
            }
            Matrix::Or(v) => {
                let mut none = true;
                for c in v {
                    match self.eval_matrix(c, cell, cache)? {
                        Some(true) => return Ok(Some(true)),
                        Some(false) => {}
                        None => none = false,
                    }
                }
                none.then_some(false)
            }
        })
    }

    fn eval(&self, cell: &CadCell, mut cache: SignCache) -> Result<Outcome, CadError> {
        let n = self.cad.dimension();
        if self.short_circuit || cell.level == n {
            if let Some(v) = self.eval_matrix(&self.compiled.matrix, cell, &mut cache)? {
                return Ok(Outcome { value: v, witness: Some(cell.sample.clone()) });
            }
        }
        let q = self.quant(cell.level);
        let want = q == Quantifier::Exists;
        let children = self.cad.lift(cell)?;
        let order: Vec<&CadCell> = children
            .iter()
            .filter(|c| c.kind() == Some(CellKind::Section))
            .chain(children.iter().filter(|c| c.kind() == Some(CellKind::Sector)))
            .collect();
        let mut decisive: Option<(SamplePoint, Option<SamplePoint>)> = None;
        for (i, c) in order.iter().enumerate() {
            let o = self.eval(c, cache.clone())?;
            if o.value == want && decisive.is_none() {
                decisive = Some((c.sample.clone(), o.witness));
                if self.short_circuit {
                    self.skipped.fetch_add(order.len() - i - 1, Ordering::Relaxed);
                    break;
                }
            }
        }
        Ok(match decisive {
            None => Outcome { value: !want, witness: None },
            Some((sample, deeper)) => {
                let same_block = cell.level + 1 < n && self.quant(cell.level + 1) == q;
                let witness = if same_block { deeper.or(Some(sample)) } else { Some(sample) };
                Outcome { value: want, witness }
            }
        })
    }
}

fn block_reorder(p: &PrenexFormula, order: &[String]) -> Result<Vec<(Quantifier, String)>, QeError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < p.prefix.len() {
        let q = p.prefix[i].0;
        let mut j = i;
        while j < p.prefix.len() && p.prefix[j].0 == q {
            j += 1;
        }
        let block: Vec<&String> = p.prefix[i..j].iter().map(|(_, v)| v).collect();
        let mut ordered: Vec<&String> = order.iter().filter(|v| block.contains(v)).collect();
        for v in &block {
            if !ordered.contains(v) {
                ordered.push(v);
            }
        }
        out.extend(ordered.into_iter().map(|v| (q, v.clone())));
        i = j;
    }
    if order.iter().any(|v| !p.prefix.iter().any(|(_, w)| w == v)) {
        return Err(QeError::BadVarOrder(order.to_vec()));
    }
    Ok(out)
}

fn projection_sizes(cad: &Cad) -> Vec<usize> {
    cad.families().iter().map(|f| f.len()).collect()
}

/// Decides a sentence.
pub fn decide(sentence: &Formula, opts: &QeOptions) -> Result<Decision, QeError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(QeError::NotASentence(free));
    }
    if let Some(d) = decide_connective(sentence, opts)? {
        return Ok(d);
    }
    let mut p = to_prenex(sentence, None);
    if let Some(order) = &opts.var_order {
        let prefix = block_reorder(&p, order)?;
        let names: Vec<String> = prefix.iter().map(|(_, v)| v.clone()).collect();
        p = to_prenex(&p.to_formula(), None);
        p.prefix = prefix;
        p.vars = crate::poly::VarOrder::new(&names);
        p.matrix = remap(&p.matrix, &p.vars);
    }
    decide_prenex(&p, opts)
}

fn add_stats(a: &mut Stats, b: &Stats) {
    a.cells_built += b.cells_built;
    a.cells_skipped += b.cells_skipped;
    a.projection_sizes.extend(b.projection_sizes.iter().copied());
}

/// Boolean combinations of closed sentences are decided part by part, each
/// on its own decomposition, instead of merging all prefixes into one.
fn decide_connective(f: &Formula, opts: &QeOptions) -> Result<Option<Decision>, QeError> {
    let parts: Vec<&Formula> = match f {
        Formula::Not(_) | Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..) => f.children(),
        _ => return Ok(None),
    };
    if parts.iter().all(|c| c.is_quantifier_free()) {
        return Ok(None);
    }
    let mut stats = Stats::default();
    let mut run = |g: &Formula| -> Result<Decision, QeError> {
        let d = decide(g, opts)?;
        add_stats(&mut stats, &d.stats);
        Ok(d)
    };
    let value = match f {
        Formula::Not(a) => !run(a)?.value,
        Formula::And(v) => {
            let mut all = true;
            for c in v {
                if !run(c)?.value {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::Or(v) => {
            let mut any = false;
            for c in v {
                if run(c)?.value {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::Implies(a, b) => !run(a)?.value || run(b)?.value,
        Formula::Iff(a, b) => run(a)?.value == run(b)?.value,
        _ => unreachable!(),
    };
    Ok(Some(Decision { value, witness: None, stats }))
}

fn remap(f: &Formula, vars: &crate::poly::VarOrder) -> Formula {
    match f {
        Formula::Atom(q, r) => Formula::Atom(q.remap(vars).expect("variables present"), *r),
        Formula::And(v) => Formula::And(v.iter().map(|c| remap(c, vars)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|c| remap(c, vars)).collect()),
        other => other.clone(),
    }
}

fn decide_prenex(p: &PrenexFormula, opts: &QeOptions) -> Result<Decision, QeError> {
    let compiled = compile(&p.matrix);
    if let Matrix::Const(b) = compiled.matrix {
        return Ok(Decision { value: b, witness: None, stats: Stats::default() });
    }
    let cad = Cad::new(&compiled.atoms, &p.vars)?.with_eager_signs(false).with_budget(opts.budget.clone());
    let quants: Vec<Quantifier> = p.prefix.iter().map(|(q, _)| *q).collect();
    let ev = Evaluator { cad: &cad, compiled: &compiled, quants: &quants, first: 0, short_circuit: opts.short_circuit, skipped: AtomicUsize::new(0) };
    let out = ev.eval(&cad.root(), vec![None; compiled.atoms.len()])?;
    let root_q = quants[0];
    let decisive = out.value == (root_q == Quantifier::Exists);
    let witness = if decisive {
        out.witness.map(|pt| {
            let block = quants.iter().take_while(|q| **q == root_q).count();
            let mut pt = pt.truncated(pt.len().min(block));
            while pt.len() < block {
                pt = pt.push_rational(Rational::from_integer(0.into()));
            }
            Witness { vars: p.prefix[..block].iter().map(|(_, v)| v.clone()).collect(), point: pt }
        })
    } else {
        None
    };
    Ok(Decision {
        value: out.value,
        witness,
        stats: Stats {
            cells_built: cad.cells_built(),
            cells_skipped: ev.skipped.load(Ordering::Relaxed),
            projection_sizes: projection_sizes(&cad),
        },
    })
}

/// Equivalent quantifier-free formula over the free variables.
pub fn eliminate(f: &Formula, opts: &QeOptions) -> Result<Elimination, QeError> {
    let p = to_prenex(f, opts.var_order.as_deref());
    if p.free.is_empty() {
        let d = decide_prenex(&p, opts)?;
        return Ok(Elimination { formula: Formula::from_bool(d.value), stats: d.stats, cells: 0 });
    }
    let compiled = compile(&p.matrix);
    let free_atoms: Vec<Polynomial> = compiled.atoms.clone();
    let cad = Cad::new(&free_atoms, &p.vars)?.with_eager_signs(false).with_budget(opts.budget.clone());
    let k = p.free.len();
    let quants: Vec<Quantifier> = p.prefix.iter().map(|(q, _)| *q).collect();
    let ev = Evaluator { cad: &cad, compiled: &compiled, quants: &quants, first: k, short_circuit: opts.short_circuit, skipped: AtomicUsize::new(0) };

    // Full decomposition of the free space, with sign vectors.
    let mut frontier = vec![cad.root()];
    for _ in 0..k {
        let mut next = Vec::new();
        for c in &frontier {
            for mut child in cad.lift(c)? {
                let signs = cad.level_signs(&child.sample, child.level - 1)?;
                child.signs.push(signs);
                next.push(child);
            }
        }
        frontier = next;
    }
    let mut rows: Vec<(Vec<Sign>, bool, usize)> = Vec::new();
    for (i, cell) in frontier.iter().enumerate() {
        let value = if compiled.matrix_is_const() {
            compiled.const_value()
        } else {
            ev.eval(cell, vec![None; compiled.atoms.len()])?.value
        };
        let sv: Vec<Sign> = cell.signs.iter().flatten().copied().collect();
        rows.push((sv, value, i));
    }
    let mut seen: HashMap<&[Sign], bool> = HashMap::new();
    for (sv, v, i) in &rows {
        if let Some(prev) = seen.insert(sv.as_slice(), *v) {
            if prev != *v {
                return Err(QeError::SignConflict(format!("{:?}", frontier[*i].sample)));
            }
        }
    }
    let polys: Vec<Polynomial> = (0..k).flat_map(|l| cad.family(l).iter().cloned()).collect();
    let truths: Vec<(Vec<Sign>, bool)> = rows.iter().map(|(s, v, _)| (s.clone(), *v)).collect();
    let formula = minimize(&polys, &truths);
    for (cell, (_, v, _)) in frontier.iter().zip(&rows) {
        if evaluate_at_sample(&formula, &cell.sample)? != *v {
            return Err(QeError::OracleMismatch(format!("{:?}", cell.sample)));
        }
    }
    Ok(Elimination {
        formula,
        stats: Stats {
            cells_built: cad.cells_built(),
            cells_skipped: ev.skipped.load(Ordering::Relaxed),
            projection_sizes: projection_sizes(&cad),
        },
        cells: frontier.len(),
    })
}

impl Compiled {
    fn matrix_is_const(&self) -> bool {
        matches!(self.matrix, Matrix::Const(_))
    }

    fn const_value(&self) -> bool {
        matches!(self.matrix, Matrix::Const(true))
    }
}

/// Truth of a quantifier-free formula at an exact sample point.
pub fn evaluate_at_sample(f: &Formula, pt: &SamplePoint) -> Result<bool, CadError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, r) => r.holds(pt.sign(p)?),
        Formula::Not(a) => !evaluate_at_sample(a, pt)?,
        Formula::And(v) => {
            for c in v {
                if !evaluate_at_sample(c, pt)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(v) => {
            for c in v {
                if evaluate_at_sample(c, pt)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !evaluate_at_sample(a, pt)? || evaluate_at_sample(b, pt)?,
        Formula::Iff(a, b) => evaluate_at_sample(a, pt)? == evaluate_at_sample(b, pt)?,
        Formula::Quant(..) => return Err(CadError::Algebra(AlgebraError::Unbound("quantifier".into()))),
    })
}

/// Direct evaluation of a quantifier-free formula at a rational point.
pub fn evaluate_qf(f: &Formula, point: &HashMap<String, Rational>) -> Result<bool, AlgebraError> {
    f.evaluate(&|v| point.get(v).cloned())
}

/// Sign-condition atom for a polynomial.
pub fn sign_atom(p: &Polynomial, s: Sign) -> Formula {
    Formula::Atom(p.clone(), sign_rel(s))
}
