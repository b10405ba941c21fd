//! First-order formulas over the reals: AST, parser, printer, normal forms.

mod parser;
mod prenex;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use parser::{parse, ParseError};
pub use prenex::{to_prenex, PrenexFormula};

use crate::error::AlgebraError;
use crate::poly::{Polynomial, VarOrder};
use crate::rational::Rational;
use crate::roots::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    pub fn holds(self, s: Sign) -> bool {
        match self {
            Rel::Eq => s == Sign::Zero,
            Rel::Ne => s != Sign::Zero,
            Rel::Lt => s == Sign::Negative,
            Rel::Le => s != Sign::Positive,
            Rel::Gt => s == Sign::Positive,
            Rel::Ge => s != Sign::Negative,
        }
    }

    pub fn negated(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `p ⋈ 0`
    Atom(Polynomial, Rel),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn atom(p: Polynomial, rel: Rel) -> Formula {
        Formula::Atom(p, rel)
    }

    /// Conjunction; flattens nothing, but collapses the empty and singleton cases.
    pub fn and(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Conjunction that drops `true`, absorbs into `false` and flattens nested conjunctions.
    pub fn conjunction(fs: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for f in fs {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(v) => out.extend(v),
                other => out.push(other),
            }
        }
        Formula::and(out)
    }

    pub fn or(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v.to_string(), Box::new(f))
    }

    /// Wraps `f` in quantifiers over `vars`, outermost first.
    pub fn quantify(q: Quantifier, vars: &[String], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::Quant(q, v.clone(), Box::new(acc)))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Quant(..) => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => vec![],
            Formula::Not(a) | Formula::Quant(_, _, a) => vec![a],
            Formula::And(v) | Formula::Or(v) => v.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<(&Polynomial, Rel)> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |p, r| out.push((p, r)));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut dyn FnMut(&'a Polynomial, Rel)) {
        if let Formula::Atom(p, r) = self {
            f(p, *r);
        }
        for c in self.children() {
            c.visit_atoms(f);
        }
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(p, _) => {
                for v in p.variable_names() {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// All variable names, free or bound, in order of first appearance.
    pub fn all_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &str| {
            if !out.iter().any(|x| x == v) {
                out.push(v.to_string());
            }
        };
        fn walk(f: &Formula, push: &mut dyn FnMut(&str)) {
            match f {
                Formula::Atom(p, _) => p.variable_names().iter().for_each(|v| push(v)),
                Formula::Quant(_, v, body) => {
                    push(v);
                    walk(body, push);
                }
                _ => f.children().into_iter().for_each(|c| walk(c, push)),
            }
        }
        walk(self, &mut push);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Truth value of a quantifier-free formula at a rational point.
    pub fn evaluate(&self, lookup: &dyn Fn(&str) -> Option<Rational>) -> Result<bool, AlgebraError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p, r) => r.holds(Sign::of(&p.eval_named(lookup)?)),
            Formula::Not(a) => !a.evaluate(lookup)?,
            Formula::And(v) => {
                for c in v {
                    if !c.evaluate(lookup)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(v) => {
                for c in v {
                    if c.evaluate(lookup)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !a.evaluate(lookup)? || b.evaluate(lookup)?,
            Formula::Iff(a, b) => a.evaluate(lookup)? == b.evaluate(lookup)?,
            Formula::Quant(_, v, _) => return Err(AlgebraError::Unbound(format!("quantified {v}"))),
        })
    }

    /// Partially evaluates atoms under `bindings` and simplifies constants away.
    pub fn substitute(&self, bindings: &HashMap<String, Rational>) -> Formula {
        if bindings.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(p, r) => {
                let binds: Vec<(usize, Rational)> = (0..p.nvars())
                    .filter_map(|i| bindings.get(p.vars().name(i)).map(|q| (i, q.clone())))
                    .collect();
                let q = p.eval(&binds);
                match q.constant_value() {
                    Some(c) => Formula::from_bool(r.holds(Sign::of(&c))),
                    None => Formula::Atom(q, *r),
                }
            }
            Formula::Not(a) => match a.substitute(bindings) {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                b => Formula::not(b),
            },
            Formula::And(v) => {
                let mut out = Vec::new();
                for c in v {
                    match c.substitute(bindings) {
                        Formula::False => return Formula::False,
                        Formula::True => {}
                        d => out.push(d),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(v) => {
                let mut out = Vec::new();
                for c in v {
                    match c.substitute(bindings) {
                        Formula::True => return Formula::True,
                        Formula::False => {}
                        d => out.push(d),
                    }
                }
                Formula::or(out)
            }
            Formula::Implies(a, b) => match (a.substitute(bindings), b.substitute(bindings)) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, d) => d,
                (c, Formula::False) => Formula::not(c),
                (c, d) => Formula::implies(c, d),
            },
            Formula::Iff(a, b) => match (a.substitute(bindings), b.substitute(bindings)) {
                (Formula::True, d) | (d, Formula::True) => d,
                (Formula::False, d) | (d, Formula::False) => match d {
                    Formula::True => Formula::False,
                    Formula::False => Formula::True,
                    e => Formula::not(e),
                },
                (c, d) => Formula::iff(c, d),
            },
            Formula::Quant(q, v, body) => {
                let inner = if bindings.contains_key(v) {
                    let mut b = bindings.clone();
                    b.remove(v);
                    body.substitute(&b)
                } else {
                    body.substitute(bindings)
                };
                match inner {
                    Formula::True => Formula::True,
                    Formula::False => Formula::False,
                    i => Formula::Quant(*q, v.clone(), Box::new(i)),
                }
            }
        }
    }

    pub fn from_bool(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    /// Renames variables in atoms and binders.
    pub fn rename_vars(&self, rename: &dyn Fn(&str) -> String) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(p, r) => {
                let names: Vec<String> = p.vars().names().iter().map(|n| rename(n)).collect();
                let mut uniq: Vec<String> = Vec::new();
                for n in &names {
                    if !uniq.contains(n) {
                        uniq.push(n.clone());
                    }
                }
                let target = VarOrder::new(&uniq);
                Formula::Atom(p.rename(&target, &|n| rename(n)).expect("renamed variables present"), *r)
            }
            Formula::Not(a) => Formula::not(a.rename_vars(rename)),
            Formula::And(v) => Formula::And(v.iter().map(|c| c.rename_vars(rename)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|c| c.rename_vars(rename)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename_vars(rename), b.rename_vars(rename)),
            Formula::Iff(a, b) => Formula::iff(a.rename_vars(rename), b.rename_vars(rename)),
            Formula::Quant(q, v, body) => Formula::Quant(*q, rename(v), Box::new(body.rename_vars(rename))),
        }
    }

    /// Distinct polynomials of all atoms.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (p, _) in self.atoms() {
            if seen.insert(p.clone()) {
                out.push(p.clone());
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::True | Formula::False | Formula::Atom(..) => 6,
        }
    }

    fn write_child(&self, out: &mut String, min: u8) {
        if self.precedence() < min {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Atom(p, r) => {
                out.push_str(&p.canonical_display());
                out.push(' ');
                out.push_str(r.symbol());
                out.push_str(" 0");
            }
            Formula::Not(a) => {
                out.push_str("not ");
                a.write_child(out, 5);
            }
            Formula::And(v) | Formula::Or(v) => {
                let (sep, min) = if matches!(self, Formula::And(_)) { (" and ", 5) } else { (" or ", 4) };
                if v.is_empty() {
                    out.push_str(if min == 5 { "true" } else { "false" });
                }
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    c.write_child(out, min);
                }
            }
            Formula::Implies(a, b) => {
                a.write_child(out, 3);
                out.push_str(" -> ");
                b.write_child(out, 2);
            }
            Formula::Iff(a, b) => {
                a.write_child(out, 1);
                out.push_str(" <-> ");
                b.write_child(out, 2);
            }
            Formula::Quant(q, v, body) => {
                out.push_str(q.keyword());
                out.push(' ');
                out.push_str(v);
                let mut body = body.as_ref();
                while let Formula::Quant(q2, v2, inner) = body {
                    if q2 != q {
                        break;
                    }
                    out.push(' ');
                    out.push_str(v2);
                    body = inner;
                }
                out.push_str(". ");
                body.write(out);
            }
        }
    }
}

/// Concrete syntax accepted by [`parse`].
pub fn render(f: &Formula) -> String {
    let mut s = String::new();
    f.write(&mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
