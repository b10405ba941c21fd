//! Text and line-delimited JSON renderings of decompositions and decisions.

use std::io::{self, Write};

use qecad::cad::{CadCell, CadNode, CadTree, CellKind};
use qecad::qe::Decision;
use qecad::roots::Sign;
use serde::{Deserialize, Serialize};

/// One cell per line in the JSON dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub level: usize,
    pub path: Vec<usize>,
    pub kind: Option<CellKind>,
    /// Signs of each level's polynomials, level 1 first.
    pub signs: Vec<Vec<Sign>>,
    pub sample: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
}

impl CellRecord {
    pub fn from_cell(cell: &CadCell, digits: usize, exact: bool) -> Self {
        let n = cell.sample.len();
        CellRecord {
            level: cell.level,
            path: cell.path.clone(),
            kind: cell.kind(),
            signs: cell.signs.clone(),
            sample: (0..n).map(|k| cell.sample.approx(k, digits)).collect(),
            exact: exact.then(|| (0..n).map(|k| cell.sample.coordinate(k).to_string()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub value: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(String, String)>>,
    pub cells_built: usize,
    pub cells_skipped: usize,
}

impl DecisionRecord {
    pub fn new(d: &Decision, with_witness: bool) -> Self {
        DecisionRecord {
            value: d.value,
            witness: if with_witness {
                d.witness.as_ref().map(|w| w.values().into_iter().map(|(v, a)| (v, a.to_string())).collect())
            } else {
                None
            },
            cells_built: d.stats.cells_built,
            cells_skipped: d.stats.cells_skipped,
        }
    }
}

fn sign_text(signs: &[Vec<Sign>]) -> String {
    signs
        .iter()
        .map(|lvl| format!("({})", lvl.iter().map(|s| s.symbol().to_string()).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("")
}

fn walk<'a>(node: &'a CadNode, max: usize, out: &mut Vec<&'a CadCell>) {
    if node.cell.level > 0 {
        out.push(&node.cell);
    }
    if node.cell.level < max {
        for c in &node.children {
            walk(c, max, out);
        }
    }
}

pub fn write_tree(tree: &CadTree, levels: usize, digits: usize, exact: bool, json: bool, out: &mut dyn Write) -> io::Result<()> {
    let mut cells = Vec::new();
    walk(&tree.root, levels, &mut cells);
    if !json {
        let names = tree.cad.vars().names();
        for k in 0..levels {
            let fam: Vec<String> = tree.cad.family(k).iter().map(|p| p.to_string()).collect();
            writeln!(out, "level {} ({}): {}", k + 1, names[k], fam.join(", "))?;
        }
    }
    for c in cells {
        let r = CellRecord::from_cell(c, digits, exact);
        if json {
            writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))?;
        } else {
            let path: Vec<String> = r.path.iter().map(|i| i.to_string()).collect();
            let kind = match r.kind {
                Some(CellKind::Section) => "section",
                _ => "sector",
            };
            write!(out, "{}[{}] {kind} signs {} sample ({})", "  ".repeat(r.level - 1), path.join(","), sign_text(&r.signs), r.sample.join(", "))?;
            if let Some(e) = &r.exact {
                write!(out, " exact ({})", e.join("; "))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
