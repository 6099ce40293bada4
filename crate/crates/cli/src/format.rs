//! Output formats for Poincaré polynomials.

use std::fmt::Write as _;

use icvp_core::{GroupType, IntPoly};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
    Latex,
}

/// `{"group", "d", "coeffs"}`, serialized in that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareRecord {
    pub group: String,
    pub d: usize,
    pub coeffs: Vec<Value>,
}

impl PoincareRecord {
    pub fn new(group: &GroupType, p: &IntPoly) -> Self {
        Self {
            group: group.to_string(),
            d: group.dim_x(),
            coeffs: p.to_dense().iter().map(icvp_core::report::big).collect(),
        }
    }
}

/// One labelled polynomial per entry; `label` is used by the LaTeX emitter.
pub struct Row<'a> {
    pub label: String,
    pub group: &'a GroupType,
    pub poly: &'a IntPoly,
}

pub fn render(rows: &[Row<'_>], format: Format) -> String {
    match format {
        Format::Plain => rows.iter().map(|r| format!("{}\n", r.poly)).collect(),
        Format::Json => rows
            .iter()
            .map(|r| format!("{}\n", serde_json::to_string(&PoincareRecord::new(r.group, r.poly)).unwrap()))
            .collect(),
        Format::Csv => csv(rows),
        Format::Latex => latex(rows),
    }
}

fn csv(rows: &[Row<'_>]) -> String {
    let width = rows.iter().filter_map(|r| r.poly.degree()).max().unwrap_or(0) + 1;
    let mut out = String::from("group,d");
    for i in 0..width {
        write!(out, ",c{i}").unwrap();
    }
    out.push('\n');
    for r in rows {
        write!(out, "{},{}", r.group, r.group.dim_x()).unwrap();
        let dense = r.poly.to_dense();
        for i in 0..width {
            write!(out, ",{}", dense.get(i).cloned().unwrap_or_default()).unwrap();
        }
        out.push('\n');
    }
    out
}

const TERMS_PER_LINE: usize = 12;

fn latex_term(c: &BigInt, i: usize) -> String {
    let coeff = if i > 0 && *c == BigInt::from(1) { String::new() } else { c.to_string() };
    match i {
        0 => coeff,
        1 => format!("{coeff}t"),
        _ => format!("{coeff}t^{{{i}}}"),
    }
}

/// `eqnarray*` lines `P(t) &=& … \\` with continuation lines `&& +\; …`.
fn latex(rows: &[Row<'_>]) -> String {
    let mut out = String::from("\\begin{eqnarray*}\n");
    for (idx, r) in rows.iter().enumerate() {
        let terms: Vec<String> = r.poly.terms().map(|(i, c)| latex_term(c, i)).collect();
        let terms = if terms.is_empty() { vec!["0".to_string()] } else { terms };
        let mut lines: Vec<String> = terms.chunks(TERMS_PER_LINE).map(|chunk| chunk.join(" + ")).collect();
        let first = lines.remove(0);
        write!(out, "{} &=& {}", r.label, first).unwrap();
        for line in lines {
            write!(out, "\\\\\n&& +\\; {line}").unwrap();
        }
        if idx + 1 < rows.len() {
            out.push_str("\\\\");
        }
        out.push('\n');
    }
    out.push_str("\\end{eqnarray*}\n");
    out
}

/// `P_{A_{2}+B_{3}}(t)`.
pub fn latex_label(group: &GroupType) -> String {
    if group.is_trivial() {
        return "P_{1}(t)".into();
    }
    let parts: Vec<String> = group
        .factors()
        .iter()
        .map(|f| format!("{}_{{{}}}", f.family().letter(), f.rank()))
        .collect();
    format!("P_{{{}}}(t)", parts.join("+"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn json_record_round_trips() {
        let g: GroupType = "A3".parse().unwrap();
        let poly = p(&[1, 0, 2, 1]);
        let text = serde_json::to_string(&PoincareRecord::new(&g, &poly)).unwrap();
        assert_eq!(text, r#"{"group":"A3","d":9,"coeffs":[1,0,2,1]}"#);
        let back: PoincareRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn csv_pads_rows() {
        let (a1, a2): (GroupType, GroupType) = ("A1".parse().unwrap(), "A2".parse().unwrap());
        let (p1, p2) = (p(&[1]), p(&[1, 0, 1]));
        let rows = [
            Row { label: String::new(), group: &a1, poly: &p1 },
            Row { label: String::new(), group: &a2, poly: &p2 },
        ];
        assert_eq!(render(&rows, Format::Csv), "group,d,c0,c1,c2\nA1,2,1,0,0\nA2,5,1,0,1\n");
    }

    #[test]
    fn latex_lines() {
        let g: GroupType = "A3".parse().unwrap();
        let poly = p(&[1, 0, 2, 1]);
        let rows = [Row { label: "P_4(t)".into(), group: &g, poly: &poly }];
        assert_eq!(
            render(&rows, Format::Latex),
            "\\begin{eqnarray*}\nP_4(t) &=& 1 + 2t^{2} + t^{3}\n\\end{eqnarray*}\n"
        );
        let long = IntPoly::from_coeffs(1..=14);
        let rows = [Row { label: "Q".into(), group: &g, poly: &long }];
        let text = render(&rows, Format::Latex);
        assert!(text.contains("12t^{11}\\\\\n&& +\\; 13t^{12} + 14t^{13}\n"), "{text}");
        assert_eq!(latex_label(&"A2+B3".parse().unwrap()), "P_{A_{2}+B_{3}}(t)");
    }
}
