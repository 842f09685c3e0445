//! Column-named numeric tables and their CSV form.

use std::fmt::Write as _;

use esmix_core::solver::{Diagnostics, Record};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
}

impl Cell {
    pub fn value(self) -> f64 {
        match self {
            Cell::Float(x) => x,
            Cell::Int(i) => i as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: impl IntoIterator<Item = f64>) {
        self.push(row.into_iter().map(Cell::Float).collect());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].value()).collect())
    }

    /// Floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Float(x) => write!(out, "{x:.16e}"),
                    Cell::Int(n) => write!(out, "{n}"),
                }
                .unwrap();
            }
            out.push('\n');
        }
        out
    }
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Header of the relaxation diagnostics table.
pub fn diagnostics_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for k in 1..=2 {
        h.push(format!("n{k}"));
        h.extend(AXES.iter().map(|a| format!("u{k}{a}")));
        h.push(format!("T{k}"));
        for i in 0..3 {
            for j in i..3 {
                h.push(format!("P{k}{}{}", AXES[i], AXES[j]));
            }
        }
        h.extend(AXES.iter().map(|a| format!("q{k}{a}")));
    }
    h.extend(["total_mass1", "total_mass2"].map(String::from));
    h.extend(AXES.iter().map(|a| format!("total_momentum_{a}")));
    h.extend(["total_energy", "H", "aniso1", "aniso2", "negativity_flag"].map(String::from));
    h
}

fn record_row(r: &Record) -> Vec<Cell> {
    let mut row = vec![Cell::Float(r.t)];
    for s in &r.species {
        let mut vals = Vec::with_capacity(14);
        match s {
            Some(m) => {
                vals.push(m.n);
                vals.extend(m.u);
                vals.push(m.temperature);
                let p = m.pressure.rows();
                for i in 0..3 {
                    vals.extend(&p[i][i..]);
                }
                vals.extend(m.heat_flux);
            }
            None => {
                vals.push(0.0);
                vals.resize(14, f64::NAN);
            }
        }
        row.extend(vals.into_iter().map(Cell::Float));
    }
    row.extend(r.total_mass.map(Cell::Float));
    row.extend(r.total_momentum.map(Cell::Float));
    row.extend([r.total_energy, r.h, r.anisotropy[0], r.anisotropy[1]].map(Cell::Float));
    row.push(Cell::Int(r.negative as i64));
    row
}

pub fn diagnostics_table(d: &Diagnostics) -> Table {
    let mut t = Table::new(diagnostics_header());
    for r in &d.records {
        t.push(record_row(r));
    }
    t
}
