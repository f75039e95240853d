//! Text tables: method rows × accelerator (and coarse mode) columns.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SchwarzError;
use crate::fem::CoarseMode;

use super::config::Accelerator;
use super::run::TableRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Ascii,
    Csv,
}

impl FromStr for Format {
    type Err = SchwarzError;
    fn from_str(s: &str) -> Result<Self, SchwarzError> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "csv" => Ok(Format::Csv),
            other => Err(SchwarzError::Config(format!("unknown format '{other}'"))),
        }
    }
}

fn mode_tag(m: CoarseMode) -> &'static str {
    match m {
        CoarseMode::Galerkin => "gal",
        CoarseMode::Discretized => "disc",
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Header plus one line per distinct row label, in first-appearance order.
pub fn table_cells(rows: &[TableRow]) -> (Vec<String>, Vec<Vec<String>>) {
    cells_with(rows, TableRow::cell)
}

fn cells_with(rows: &[TableRow], cell: impl Fn(&TableRow) -> String) -> (Vec<String>, Vec<Vec<String>>) {
    let mut columns: Vec<(Accelerator, CoarseMode)> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut modes: Vec<CoarseMode> = Vec::new();
    for r in rows {
        push_unique(&mut columns, (r.config.accelerator, r.config.coarse_mode));
        push_unique(&mut labels, r.label());
        push_unique(&mut modes, r.config.coarse_mode);
    }
    let certified = rows.iter().any(|r| r.certification.is_some());
    let mut header = vec!["row".to_string()];
    for &(acc, mode) in &columns {
        header.push(if modes.len() > 1 {
            format!("{} {}", acc.heading(), mode_tag(mode))
        } else {
            acc.heading().into()
        });
    }
    if certified {
        header.push("cert".into());
    }
    let mut body = Vec::new();
    for label in &labels {
        let mine: Vec<&TableRow> = rows.iter().filter(|r| &r.label() == label).collect();
        let mut line = vec![label.clone()];
        for &(acc, mode) in &columns {
            let cell = mine
                .iter()
                .find(|r| r.config.accelerator == acc && r.config.coarse_mode == mode)
                .map_or_else(|| "-".to_string(), |r| cell(r));
            line.push(cell);
        }
        if certified {
            let mut tags = Vec::new();
            for &mode in &modes {
                let c = mine.iter().find(|r| r.config.coarse_mode == mode).and_then(|r| r.certification.as_ref());
                tags.push(match c {
                    Some(c) => {
                        format!("{}/{}", if c.conditions { "thm" } else { "-" }, if c.spd { "spd" } else { "nonspd" })
                    }
                    None => "?".into(),
                });
            }
            line.push(tags.join(" "));
        }
        body.push(line);
    }
    (header, body)
}

/// Renders rows as an aligned text table or CSV. Empty input gives the
/// header alone.
pub fn emit_table(rows: &[TableRow], format: Format) -> String {
    render(table_cells(rows), format)
}

/// Same layout with the total work to convergence in Mflop; runs that did
/// not converge keep their status text.
pub fn emit_work_table(rows: &[TableRow], format: Format) -> String {
    render(cells_with(rows, |r| if r.converged() { format!("{:.2}", r.flops as f64 / 1e6) } else { r.cell() }), format)
}

fn render((header, body): (Vec<String>, Vec<Vec<String>>), format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            writeln!(out, "{}", header.join(",")).unwrap();
            for line in &body {
                writeln!(out, "{}", line.join(",")).unwrap();
            }
        }
        Format::Ascii => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for line in &body {
                for (w, c) in widths.iter_mut().zip(line) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let render = |cells: &[String]| {
                let parts: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (c, &w))| {
                        let pad = w - c.chars().count();
                        if i == 0 {
                            format!("{c}{}", " ".repeat(pad))
                        } else {
                            format!("{}{c}", " ".repeat(pad))
                        }
                    })
                    .collect();
                parts.join(" | ").trim_end().to_string()
            };
            writeln!(out, "{}", render(&header)).unwrap();
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            writeln!(out, "{}", rule.join("-+-")).unwrap();
            for line in &body {
                writeln!(out, "{}", render(line)).unwrap();
            }
        }
    }
    out
}
