//! Efficiency tables for the uniform grid and equal-height designs.

use std::fmt::Write as _;

use super::{efficiency, Criterion};
use crate::design::{banded_design, equal_height_design, grid_design, SphereDesign};
use crate::quadrature::equal_weight_rule;
use crate::Result;

/// Rows of `(label, d, n1, n2)` keyed efficiencies, one column per criterion.
/// `n1`/`n2` are empty for designs that are not uniform products.
#[derive(Debug, Clone)]
pub struct EfficiencyTable {
    pub criteria: Vec<Criterion>,
    pub rows: Vec<EfficiencyRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub design: String,
    pub d: usize,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
    pub values: Vec<f64>,
}

impl EfficiencyTable {
    pub fn new(criteria: Vec<Criterion>) -> Self {
        Self {
            criteria,
            rows: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        design: &str,
        xi: &SphereDesign,
        d: usize,
        n1: Option<usize>,
        n2: Option<usize>,
    ) -> Result<()> {
        let values = self
            .criteria
            .iter()
            .map(|c| efficiency(xi, d, c))
            .collect::<Result<Vec<_>>>()?;
        self.rows.push(EfficiencyRow {
            design: design.to_string(),
            d,
            n1,
            n2,
            values,
        });
        Ok(())
    }

    /// Look up a value by design label, `d`, `n1` and criterion label.
    pub fn get(&self, design: &str, d: usize, n1: usize, criterion: &str) -> Option<f64> {
        let col = self.criteria.iter().position(|c| c.label() == criterion)?;
        self.rows
            .iter()
            .find(|r| r.design == design && r.d == d && r.n1 == Some(n1))
            .map(|r| r.values[col])
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["design", "d", "n1", "n2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        h.extend(self.criteria.iter().map(Criterion::label));
        h
    }

    fn cells(row: &EfficiencyRow) -> Vec<String> {
        let mut c = vec![
            row.design.clone(),
            row.d.to_string(),
            row.n1.map(|v| v.to_string()).unwrap_or_default(),
            row.n2.map(|v| v.to_string()).unwrap_or_default(),
        ];
        c.extend(row.values.iter().map(|v| format!("{v:.6}")));
        c
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&Self::cells(row).join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let header = self.header();
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
        for row in &self.rows {
            let _ = writeln!(out, "| {} |", Self::cells(row).join(" | "));
        }
        out
    }
}

/// Columns of the degree 1–4 tables: D, E, A, Ψ_{−1,2}, Ψ_{−1,3}.
pub fn uniform_design_criteria(d: usize) -> Vec<Criterion> {
    vec![
        Criterion::d_optimality(d),
        Criterion::e_optimality(d),
        Criterion::a_optimality(d),
        Criterion::psi(-1.0, 2),
        Criterion::psi(-1.0, 3),
    ]
}

/// Grid and equal-height rows for each `(d, n1)`, with `n2 = 2d + 1`.
/// The criteria depend on `d`, so all rows must share one degree.
fn uniform_table(d: usize, n1s: &[usize]) -> Result<EfficiencyTable> {
    let n2 = 2 * d + 1;
    let mut table = EfficiencyTable::new(uniform_design_criteria(d));
    for &n1 in n1s {
        table.push("grid", &grid_design(n1, n2)?, d, Some(n1), Some(n2))?;
        table.push(
            "equal-height",
            &equal_height_design(n1, n2)?,
            d,
            Some(n1),
            Some(n2),
        )?;
    }
    Ok(table)
}

fn concat(parts: Vec<EfficiencyTable>) -> EfficiencyTable {
    let mut iter = parts.into_iter();
    let mut first = iter.next().expect("at least one part");
    for t in iter {
        first.rows.extend(t.rows);
    }
    first
}

/// Degrees 1 and 2.
pub fn table2() -> Result<EfficiencyTable> {
    Ok(concat(vec![
        uniform_table(1, &[3, 4, 5, 6, 7])?,
        uniform_table(2, &[4, 5, 6, 7, 8])?,
    ]))
}

/// Degrees 3 and 4.
pub fn table3() -> Result<EfficiencyTable> {
    Ok(concat(vec![
        uniform_table(3, &[5, 6, 7, 8, 9])?,
        uniform_table(4, &[6, 7, 8, 9, 10])?,
    ]))
}

/// Band sizes of the 360-point design: 15 azimuths on the 8 lowest nodes,
/// 16 on the remaining 15.
pub fn reference_band_sizes() -> Vec<usize> {
    let mut bands = vec![15; 8];
    bands.extend(std::iter::repeat_n(16, 15));
    bands
}

/// 360-point exact design on the 23-node equal-weight rule of degree 14.
pub fn reference_banded_design() -> Result<SphereDesign> {
    banded_design(&equal_weight_rule(7)?, &reference_band_sizes())
}

/// Degree-7 comparison: equal-height (10, 36) and the 360-point banded
/// design. Columns Ψ_{−1,r} for r = 1..10, then A and D.
pub fn table4() -> Result<EfficiencyTable> {
    let d = 7;
    let mut criteria: Vec<Criterion> = (1..=10).map(|r| Criterion::psi(-1.0, r)).collect();
    criteria.push(Criterion::a_optimality(d));
    criteria.push(Criterion::d_optimality(d));
    let mut table = EfficiencyTable::new(criteria);
    table.push(
        "equal-height",
        &equal_height_design(10, 36)?,
        d,
        Some(10),
        Some(36),
    )?;
    table.push("banded", &reference_banded_design()?, d, None, None)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_first_rows() {
        let t = table2().unwrap();
        assert_eq!(t.rows.len(), 20);
        for c in ["eff_D", "eff_E", "eff_A", "eff_psi(-1,2)", "eff_psi(-1,3)"] {
            assert!((t.get("grid", 1, 3, c).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((t.get("equal-height", 1, 3, "eff_E").unwrap() - 0.5).abs() < 1e-12);
        assert!((t.get("grid", 1, 4, "eff_E").unwrap() - 0.9375).abs() < 1e-12);
    }

    #[test]
    fn formats() {
        let mut t = EfficiencyTable::new(vec![Criterion::e_optimality(1)]);
        t.push(
            "equal-height",
            &equal_height_design(3, 3).unwrap(),
            1,
            Some(3),
            Some(3),
        )
        .unwrap();
        assert_eq!(
            t.to_csv(),
            "design,d,n1,n2,eff_E\nequal-height,1,3,3,0.500000\n"
        );
        let md = t.to_markdown();
        assert!(md.starts_with("| design | d | n1 | n2 | eff_E |\n|---|---|---|---|---|\n"));
        assert!(md.contains("| equal-height | 1 | 3 | 3 | 0.500000 |"));
    }

    #[test]
    fn banded_design_shape() {
        let xi = reference_banded_design().unwrap();
        assert_eq!(xi.len(), 360);
        assert!(xi.is_distinct());
    }
}
