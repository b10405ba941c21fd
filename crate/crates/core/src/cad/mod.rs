//! Cylindrical algebraic decomposition: projection and lifting.

mod project;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use project::{project, sort_family};

use crate::error::AlgebraError;
use crate::formula::{Formula, Rel};
use crate::poly::{canonical_pieces, Polynomial, VarOrder};
use crate::rational::{self, Rational};
use crate::roots::upoly::{self, RootInterval};
use crate::roots::{isolate_roots, rational_root_in, AlgebraicNumber, Field, Rationals, SamplePoint, Sign};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CadError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("time budget exceeded")]
    Timeout,
    #[error("cell limit of {0} exceeded")]
    CellLimit(usize),
}

/// Cooperative resource limits checked before each lift.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_cells: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Sector,
    Section,
}

#[derive(Clone, Debug)]
pub struct CadCell {
    /// Number of coordinates fixed by this cell; 0 for the whole space `R^0`.
    pub level: usize,
    /// 1-based child indices from the root; odd entries are sectors.
    pub path: Vec<usize>,
    pub kinds: Vec<CellKind>,
    pub sample: SamplePoint,
    /// `signs[k]` holds the signs of the level-`k+1` family at the sample.
    /// Empty when the decomposition was built without eager sign vectors.
    pub signs: Vec<Vec<Sign>>,
}

impl CadCell {
    pub fn is_full_dimensional(&self) -> bool {
        self.kinds.iter().all(|k| *k == CellKind::Sector)
    }

    pub fn kind(&self) -> Option<CellKind> {
        self.kinds.last().copied()
    }
}

/// Projection families plus the lifting machinery for one variable order.
pub struct Cad {
    vars: VarOrder,
    families: Vec<Vec<Polynomial>>,
    eager_signs: bool,
    budget: Budget,
    cells: AtomicUsize,
}

impl Cad {
    /// Projects `polys` down to level 1. Constant inputs are ignored.
    pub fn new(polys: &[Polynomial], vars: &VarOrder) -> Result<Cad, CadError> {
        let n = vars.len();
        let mut families: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        let add = |fams: &mut Vec<Vec<Polynomial>>, p: &Polynomial| {
            for q in canonical_pieces(p) {
                if let Some(v) = q.main_var() {
                    if !fams[v].contains(&q) {
                        fams[v].push(q);
                    }
                }
            }
        };
        for p in polys {
            let p = p.remap(vars)?;
            add(&mut families, &p);
        }
        for k in (1..n).rev() {
            sort_family(&mut families[k]);
            let proj = project(&families[k], k);
            for p in proj {
                add(&mut families, &p);
            }
        }
        if n > 0 {
            sort_family(&mut families[0]);
        }
        Ok(Cad { vars: vars.clone(), families, eager_signs: true, budget: Budget::default(), cells: AtomicUsize::new(0) })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Whether lifted cells carry sign vectors of their level family.
    pub fn with_eager_signs(mut self, on: bool) -> Self {
        self.eager_signs = on;
        self
    }

    pub fn vars(&self) -> &VarOrder {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    /// Family of polynomials whose main variable is `k` (0-based level index).
    pub fn family(&self, k: usize) -> &[Polynomial] {
        &self.families[k]
    }

    pub fn families(&self) -> &[Vec<Polynomial>] {
        &self.families
    }

    pub fn cells_built(&self) -> usize {
        self.cells.load(AtomicOrdering::Relaxed)
    }

    pub fn root(&self) -> CadCell {
        CadCell {
            level: 0,
            path: Vec::new(),
            kinds: Vec::new(),
            sample: SamplePoint::empty(self.vars.len()),
            signs: Vec::new(),
        }
    }

    fn check_budget(&self, extra: usize) -> Result<(), CadError> {
        if let Some(d) = self.budget.deadline {
            if Instant::now() >= d {
                return Err(CadError::Timeout);
            }
        }
        let total = self.cells.fetch_add(extra, AtomicOrdering::Relaxed) + extra;
        if let Some(m) = self.budget.max_cells {
            if total > m {
                return Err(CadError::CellLimit(m));
            }
        }
        Ok(())
    }

    /// Signs of the level-`k` family (0-based) at a sample point with at least `k+1` coordinates.
    pub fn level_signs(&self, sample: &SamplePoint, k: usize) -> Result<Vec<Sign>, CadError> {
        let pt = sample.truncated(k + 1);
        self.families[k].iter().map(|f| Ok(pt.sign(f)?)).collect()
    }

    /// The cylinder above `cell`, as alternating sectors and sections in increasing order.
    pub fn lift(&self, cell: &CadCell) -> Result<Vec<CadCell>, CadError> {
        self.lift_over(cell, &self.families[cell.level])
    }

    /// Like [`Cad::lift`] but with an explicit next-level family.
    pub fn lift_over(&self, cell: &CadCell, family: &[Polynomial]) -> Result<Vec<CadCell>, CadError> {
        let k = cell.level;
        assert!(k < self.vars.len(), "cannot lift a top-level cell");
        self.check_budget(0)?;
        let sections = self.section_coordinates(&cell.sample, k, family)?;
        let m = sections.len();
        self.check_budget(2 * m + 1)?;
        let sector_samples = sector_rationals(&sections);
        let mut out = Vec::with_capacity(2 * m + 1);
        for (i, q) in sector_samples.into_iter().enumerate() {
            let sample = cell.sample.push_rational(q);
            out.push(self.child(cell, out.len() + 1, CellKind::Sector, sample)?);
            if let Some(sec) = sections.get(i) {
                out.push(self.child(cell, out.len() + 1, CellKind::Section, sec.sample.clone())?);
            }
        }
        Ok(out)
    }

    fn child(&self, parent: &CadCell, index: usize, kind: CellKind, sample: SamplePoint) -> Result<CadCell, CadError> {
        let mut path = parent.path.clone();
        path.push(index);
        let mut kinds = parent.kinds.clone();
        kinds.push(kind);
        let mut signs = parent.signs.clone();
        if self.eager_signs {
            signs.push(self.level_signs(&sample, parent.level)?);
        }
        Ok(CadCell { level: parent.level + 1, path, kinds, sample, signs })
    }

    /// Roots of the non-vanishing level-`k` polynomials above `pt`, as extended sample points.
    fn section_coordinates(&self, pt: &SamplePoint, k: usize, family: &[Polynomial]) -> Result<Vec<Section>, CadError> {
        let tower = pt.tower().clone();
        let field = tower.field();
        let mut factors: Vec<Vec<Polynomial>> = Vec::new();
        for f in family {
            let coeffs: Vec<Polynomial> = f
                .coefficients_in(k)
                .iter()
                .map(|c| pt.eval(c))
                .collect::<Result<_, _>>()?;
            let u = upoly::trim(&field, coeffs);
            if u.len() >= 2 {
                factors.push(upoly::squarefree(&field, &u));
            }
        }
        if factors.is_empty() {
            return Ok(Vec::new());
        }
        let rational: Option<Vec<Vec<Rational>>> = factors
            .iter()
            .map(|u| u.iter().map(|c| field.as_rational(c)).collect::<Option<Vec<_>>>())
            .collect();
        if let Some(rs) = rational {
            let roots = crate::roots::isolate_dense(&rs);
            return Ok(roots
                .into_iter()
                .map(|a| {
                    let sample = match a.as_rational() {
                        Some(q) => pt.push_rational(q),
                        None => {
                            let coeffs: Vec<Polynomial> = upoly::monic(&Rationals, a.defining())
                                .into_iter()
                                .map(|c| tower.constant(c))
                                .collect();
                            pt.push_root(&coeffs, a.lo().clone(), a.hi().clone())
                        }
                    };
                    Section { lo: a.lo().clone(), hi: a.hi().clone(), sample }
                })
                .collect());
        }
        let roots = upoly::isolate_family(&field, &factors);
        let mut out = Vec::with_capacity(roots.len());
        for (r, g) in roots {
            match r {
                RootInterval::Exact(q) => {
                    out.push(Section { lo: q.clone(), hi: q.clone(), sample: pt.push_rational(q) });
                }
                RootInterval::Open(lo, hi) => {
                    let sample = if g.len() == 2 {
                        pt.push_element(field.neg(&g[0]))
                    } else {
                        let rat: Option<Vec<Rational>> = g.iter().map(|c| field.as_rational(c)).collect();
                        match rat.and_then(|r| rational_root_in(&r, &lo, &hi)) {
                            Some(q) => pt.push_rational(q),
                            None => pt.push_root(&g, lo.clone(), hi.clone()),
                        }
                    };
                    out.push(Section { lo, hi, sample });
                }
            }
        }
        Ok(out)
    }

    /// Real roots of the level-`k` family above a rational point with `k` coordinates.
    pub fn roots_over(&self, prefix: &[Rational]) -> Result<Vec<AlgebraicNumber>, CadError> {
        let k = prefix.len();
        let binds: Vec<(usize, Rational)> = prefix.iter().cloned().enumerate().collect();
        let mut polys = Vec::new();
        for f in &self.families[k] {
            let g = f.eval(&binds);
            if !g.is_zero() {
                polys.push(g);
            }
        }
        Ok(isolate_roots(&polys)?)
    }
}

struct Section {
    lo: Rational,
    hi: Rational,
    sample: SamplePoint,
}

/// Rational sector samples: integers beyond the outermost roots, simplest
/// rationals in each gap.
fn sector_rationals(sections: &[Section]) -> Vec<Rational> {
    if sections.is_empty() {
        return vec![Rational::zero()];
    }
    let mut out = Vec::with_capacity(sections.len() + 1);
    let first = &sections[0];
    out.push(first.lo.floor() - rational::int(1));
    for w in sections.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let a_closed = a.lo != a.hi;
        let b_closed = b.lo != b.hi;
        out.push(rational::simplest_in(&a.hi, a_closed, &b.lo, b_closed));
    }
    out.push(sections[sections.len() - 1].hi.ceil() + rational::int(1));
    out
}

/// Lifts `cell` against an explicit family; polynomials vanishing identically above the cell are skipped.
pub fn lift_cell(cad: &Cad, cell: &CadCell, family: &[Polynomial]) -> Result<Vec<CadCell>, CadError> {
    cad.lift_over(cell, family)
}

/// Conjunction of sign conditions on the families of levels `1..=k` that holds on the
/// projection of `cell` onto the first `k` coordinates.
pub fn cell_description(cell: &CadCell, cad: &Cad, k: usize) -> Result<Formula, CadError> {
    let mut conj = Vec::new();
    for lvl in 0..k.min(cell.level) {
        let signs = match cell.signs.get(lvl) {
            Some(s) => s.clone(),
            None => cad.level_signs(&cell.sample, lvl)?,
        };
        for (p, s) in cad.family(lvl).iter().zip(signs) {
            conj.push(Formula::Atom(p.clone(), sign_rel(s)));
        }
    }
    Ok(Formula::and(conj))
}

pub fn sign_rel(s: Sign) -> Rel {
    match s {
        Sign::Negative => Rel::Lt,
        Sign::Zero => Rel::Eq,
        Sign::Positive => Rel::Gt,
    }
}

/// A decomposition lifted down to `depth` levels.
pub struct CadTree {
    pub cad: Cad,
    pub root: CadNode,
    pub depth: usize,
}

pub struct CadNode {
    pub cell: CadCell,
    pub children: Vec<CadNode>,
}

impl CadNode {
    fn collect_level<'a>(&'a self, level: usize, out: &mut Vec<&'a CadCell>) {
        if self.cell.level == level {
            out.push(&self.cell);
            return;
        }
        for c in &self.children {
            c.collect_level(level, out);
        }
    }
}

impl CadTree {
    /// Cells of the given level (1-based), in tree order.
    pub fn cells_at(&self, level: usize) -> Vec<&CadCell> {
        let mut out = Vec::new();
        self.root.collect_level(level, &mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&CadCell> {
        self.cells_at(self.depth)
    }

    pub fn node(&self, path: &[usize]) -> Option<&CadNode> {
        let mut n = &self.root;
        for &i in path {
            n = n.children.get(i.checked_sub(1)?)?;
        }
        Some(n)
    }

    /// Path of the leaf containing a rational point, or `None` if the tree's
    /// cylinder structure does not match the roots found above the point.
    pub fn locate(&self, point: &[Rational]) -> Result<Option<Vec<usize>>, CadError> {
        let mut node = &self.root;
        let mut path = Vec::new();
        for k in 0..self.depth {
            let roots = self.cad.roots_over(&point[..k])?;
            if node.children.len() != 2 * roots.len() + 1 {
                return Ok(None);
            }
            let x = AlgebraicNumber::from_rational(point[k].clone());
            let mut idx = 2 * roots.len() + 1;
            for (i, r) in roots.iter().enumerate() {
                match x.compare(r) {
                    Ordering::Less => {
                        idx = 2 * i + 1;
                        break;
                    }
                    Ordering::Equal => {
                        idx = 2 * i + 2;
                        break;
                    }
                    Ordering::Greater => {}
                }
            }
            path.push(idx);
            node = &node.children[idx - 1];
        }
        Ok(Some(path))
    }
}

/// Full decomposition of `R^j` for the first `j` variables of `vars`.
pub fn compute_cad(polys: &[Polynomial], vars: &VarOrder, j: usize) -> Result<CadTree, CadError> {
    compute_cad_with(polys, vars, j, Budget::default())
}

pub fn compute_cad_with(polys: &[Polynomial], vars: &VarOrder, j: usize, budget: Budget) -> Result<CadTree, CadError> {
    let cad = Cad::new(polys, vars)?.with_budget(budget);
    let depth = j.min(cad.dimension());
    let root = build(&cad, cad.root(), depth)?;
    Ok(CadTree { cad, root, depth })
}

fn build(cad: &Cad, cell: CadCell, depth: usize) -> Result<CadNode, CadError> {
    if cell.level == depth {
        return Ok(CadNode { cell, children: Vec::new() });
    }
    let children = cad.lift(&cell)?.into_iter().map(|c| build(cad, c, depth)).collect::<Result<_, _>>()?;
    Ok(CadNode { cell, children })
}
