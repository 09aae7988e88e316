//! Text rendering of amplitudes, states and trace tables.

use std::f64::consts::FRAC_1_SQRT_2;

use qqa::{Amplitude, Qqa, SimulationTrace, StateVector, Step};

const MINUS: char = '−';
const TOLERANCE: f64 = 1e-9;

const NAMED: [(f64, &str); 5] = [
    (0.0, "0"),
    (0.5, "1/2"),
    (FRAC_1_SQRT_2, "1/√2"),
    (FRAC_1_SQRT_2 / 2.0, "1/(2√2)"),
    (1.0, "1"),
];

fn real(v: f64) -> String {
    let magnitude = NAMED
        .iter()
        .find(|(x, _)| (v.abs() - x).abs() < TOLERANCE)
        .map(|(_, name)| name.to_string())
        .unwrap_or_else(|| format!("{:.6}", v.abs()));
    if v < 0.0 && magnitude != "0" {
        format!("{MINUS}{magnitude}")
    } else {
        magnitude
    }
}

/// `1/√2`-style names for the common values, 6-decimal floats otherwise.
pub fn amplitude(z: Amplitude) -> String {
    if z.im.abs() < TOLERANCE {
        return real(z.re);
    }
    let sign = if z.im < 0.0 { MINUS } else { '+' };
    let im = real(z.im.abs());
    if z.re.abs() < TOLERANCE {
        format!("{}{im}i", if z.im < 0.0 { MINUS.to_string() } else { String::new() })
    } else {
        format!("{}{sign}{im}i", real(z.re))
    }
}

/// `(a, b, c)`, or `(a,b,c)` when `compact`.
pub fn state(s: &StateVector, compact: bool) -> String {
    let sep = if compact { "," } else { ", " };
    let parts: Vec<String> = s.entries().iter().map(|&z| amplitude(z)).collect();
    format!("({})", parts.join(sep))
}

/// Column headings and the trace positions shown: the state after every
/// query step, named by the gates applied so far.
pub fn query_columns(a: &Qqa) -> Vec<(String, usize)> {
    let (mut u, mut q) = (0, 0);
    let mut applied = String::new();
    let mut columns = Vec::new();
    for (k, step) in a.steps().iter().enumerate() {
        match step {
            Step::Unitary(_) => {
                applied.push_str(&format!("U{u}"));
                u += 1;
            }
            Step::Query(_) => {
                applied.push_str(&format!("Q{q}"));
                q += 1;
                columns.push((format!("after {applied}"), k + 1));
            }
        }
    }
    columns
}

pub fn most_likely(p_one: f64) -> u8 {
    u8::from(p_one >= 0.5)
}

/// A table with one row per trace: input, the state after each query, the
/// final state, the most likely result and the probability of 1.
pub fn trace_table(a: &Qqa, traces: &[SimulationTrace]) -> String {
    let columns = query_columns(a);
    let mut header = vec!["X".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.clone()));
    header.extend(["final state".to_string(), "result".to_string(), "P(1)".to_string()]);

    let mut rows = vec![header];
    for t in traces {
        let p_one: f64 = t
            .final_state()
            .entries()
            .iter()
            .zip(a.measurement().values())
            .filter(|(_, &v)| v)
            .map(|(z, _)| z.norm_sqr())
            .sum();
        let mut row = vec![t.input.to_string()];
        row.extend(columns.iter().map(|&(_, k)| state(&t.states[k], false)));
        row.push(state(t.final_state(), true));
        row.push(most_likely(p_one).to_string());
        row.push(format!("P(1) = {p_one:.6}"));
        rows.push(row);
    }

    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
