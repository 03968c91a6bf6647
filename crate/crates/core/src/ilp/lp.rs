//! CPLEX LP text export.

use std::fmt::Write;

use crate::model::Model;

const TERMS_PER_LINE: usize = 8;

fn term(out: &mut String, coef: i64, name: &str) {
    let sign = if coef < 0 { '-' } else { '+' };
    if coef.abs() == 1 {
        let _ = write!(out, " {sign} {name}");
    } else {
        let _ = write!(out, " {sign} {} {name}", coef.unsigned_abs());
    }
}

/// Writes `model` as a pure feasibility problem: zero objective, every
/// variable bounded and general integer. Output depends only on the model.
pub fn export_lp(model: &Model) -> String {
    let mut out = String::new();
    let info = &model.info;
    if !info.complex.is_empty() {
        let _ = writeln!(out, "\\ complex {} m={} preset={}", info.complex, info.m, info.preset);
    }
    let vars = model.variables();
    let _ = writeln!(out, "\\ {} variables, {} rows", vars.len(), model.rows().len());
    let Some(first) = vars.first() else {
        out.push_str("End\n");
        return out;
    };

    let _ = writeln!(out, "Minimize\n obj: 0 {}", first.name);
    out.push_str("Subject To\n");
    for (row, name) in model.rows().iter().zip(model.row_names()) {
        let _ = write!(out, " {name}:");
        if row.terms.is_empty() {
            let _ = write!(out, " 0 {}", first.name);
        }
        for (i, &(v, c)) in row.terms.iter().enumerate() {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push_str("\n  ");
            }
            term(&mut out, c, &vars[v].name);
        }
        let _ = writeln!(out, " {} {}", row.relation.symbol(), row.rhs);
    }

    out.push_str("Bounds\n");
    for v in vars {
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, v.lower);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
        }
    }

    out.push_str("Generals\n");
    for chunk in vars.chunks(TERMS_PER_LINE) {
        out.push(' ');
        out.push_str(&chunk.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Relation, Row, RowFamily, VarKind};

    #[test]
    fn empty_model() {
        assert_eq!(export_lp(&Model::empty()), "\\ 0 variables, 0 rows\nEnd\n");
    }

    #[test]
    fn single_variable() {
        let mut m = Model::empty();
        let x = m.add_variable("x", -1, 1, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, 1)], Relation::Eq, 1, RowFamily::Other)).unwrap();
        let text = export_lp(&m);
        assert_eq!(
            text,
            "\\ 1 variables, 1 rows\nMinimize\n obj: 0 x\nSubject To\n r1: + x = 1\nBounds\n -1 <= x <= 1\nGenerals\n x\nEnd\n"
        );
    }

    #[test]
    fn long_rows_wrap() {
        let mut m = Model::empty();
        let vs: Vec<usize> = (0..20).map(|i| m.add_variable(format!("v{i}"), 0, 1, VarKind::Free).unwrap()).collect();
        m.add_row(Row::new(vs.iter().map(|&v| (v, -2)), Relation::Ge, -3, RowFamily::Other)).unwrap();
        let text = export_lp(&m);
        assert!(text.contains(" r1: - 2 v0"));
        assert!(text.lines().all(|l| l.len() < 255));
        assert!(text.contains("- 2 v19 >= -3\n"));
    }
}
