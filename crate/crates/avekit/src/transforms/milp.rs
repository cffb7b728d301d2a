//! Mixed 0-1 reformulations of the AVE and their MPS export.
//!
//! Two variants: the scaling model (max alpha with Ax - y = alpha b and
//! binaries switching the sign pattern of x), and the box-bounded model
//! whose constraints pin (A -+ I) x = b row-wise according to the binaries.
//! A built-in brute-force evaluator enumerates the binary assignments and
//! solves the continuous restriction, giving an exact reference for tests.

use crate::core::lp::{solve_lp, LinearProgram, LpStatus, RowKind};
use crate::core::mat::{self};
use crate::core::{gray_signs, AveProblem};
use crate::AveError;

#[derive(Clone, Debug)]
pub enum MilpVariant {
    /// max alpha; x := x*/alpha* is a maximum-norm-minimal solution.
    /// Requires b != 0.
    Prokopyev,
    /// Needs a valid solution box [lower, upper] (e.g. from the bound
    /// u = -(I-|A|)^-1 b: lower = -u, upper = u).
    Bounded { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilpRow {
    pub name: String,
    pub sense: Sense,
    /// (variable name, coefficient), in emission order.
    pub coeffs: Vec<(String, f64)>,
    pub rhs: f64,
}

/// A linear mixed 0-1 model with explicit variable lists; `to_mps` and
/// `parse_mps` round-trip exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedIntegerModel {
    pub name: String,
    /// Minimized objective (variable, coefficient) pairs.
    pub objective: Vec<(String, f64)>,
    pub rows: Vec<MilpRow>,
    pub continuous: Vec<String>,
    pub binaries: Vec<String>,
    /// Free continuous variables (default MPS bound is x >= 0).
    pub free_vars: Vec<String>,
    /// Explicit finite bounds (variable, lower, upper).
    pub var_bounds: Vec<(String, f64, f64)>,
}

pub fn export_milp(p: &AveProblem, variant: &MilpVariant) -> Result<MixedIntegerModel, AveError> {
    let n = p.n();
    let xname = |j: usize| format!("x{}", j + 1);
    let zname = |j: usize| format!("z{}", j + 1);
    match variant {
        MilpVariant::Prokopyev => {
            if p.b.iter().all(|&v| v == 0.0) {
                return Err(AveError::Parameter(
                    "the scaling model requires b != 0".into(),
                ));
            }
            let yname = |j: usize| format!("y{}", j + 1);
            let mut rows = Vec::new();
            for i in 0..n {
                // (Ax)_i - y_i - alpha b_i = 0
                let mut coeffs: Vec<(String, f64)> = Vec::new();
                for j in 0..n {
                    if p.a[(i, j)] != 0.0 {
                        coeffs.push((xname(j), p.a[(i, j)]));
                    }
                }
                coeffs.push((yname(i), -1.0));
                coeffs.push(("alpha".into(), -p.b[i]));
                rows.push(MilpRow {
                    name: format!("SCALE{}", i + 1),
                    sense: Sense::Eq,
                    coeffs,
                    rhs: 0.0,
                });
                // 0 <= y_i + x_i <= 1 - z_i; coefficients kept in the global
                // variable order (x, y, alpha, z) so MPS parsing round-trips
                rows.push(MilpRow {
                    name: format!("PLUSLO{}", i + 1),
                    sense: Sense::Ge,
                    coeffs: vec![(xname(i), 1.0), (yname(i), 1.0)],
                    rhs: 0.0,
                });
                rows.push(MilpRow {
                    name: format!("PLUSHI{}", i + 1),
                    sense: Sense::Le,
                    coeffs: vec![(xname(i), 1.0), (yname(i), 1.0), (zname(i), 1.0)],
                    rhs: 1.0,
                });
                // 0 <= y_i - x_i <= z_i
                rows.push(MilpRow {
                    name: format!("MINUSLO{}", i + 1),
                    sense: Sense::Ge,
                    coeffs: vec![(xname(i), -1.0), (yname(i), 1.0)],
                    rhs: 0.0,
                });
                rows.push(MilpRow {
                    name: format!("MINUSHI{}", i + 1),
                    sense: Sense::Le,
                    coeffs: vec![(xname(i), -1.0), (yname(i), 1.0), (zname(i), -1.0)],
                    rhs: 0.0,
                });
            }
            let continuous: Vec<String> = (0..n)
                .map(xname)
                .chain((0..n).map(yname))
                .chain(std::iter::once("alpha".into()))
                .collect();
            Ok(MixedIntegerModel {
                name: "AVESCALE".into(),
                // classic MPS minimizes: emit min -alpha
                objective: vec![("alpha".into(), -1.0)],
                rows,
                continuous,
                binaries: (0..n).map(zname).collect(),
                free_vars: (0..n).map(xname).collect(),
                var_bounds: Vec::new(),
            })
        }
        MilpVariant::Bounded { lower, upper } => {
            if lower.len() != n || upper.len() != n {
                return Err(AveError::Dim("box size mismatch".into()));
            }
            if lower.iter().zip(upper).any(|(&l, &u)| l > u) {
                return Err(AveError::Parameter("empty box".into()));
            }
            let mut rows = Vec::new();
            for i in 0..n {
                let row_coeffs = |shift: f64| -> Vec<(String, f64)> {
                    (0..n)
                        .filter_map(|j| {
                            let c = p.a[(i, j)] + if i == j { shift } else { 0.0 };
                            (c != 0.0).then(|| (xname(j), c))
                        })
                        .collect()
                };
                // (A - I) x >= b
                rows.push(MilpRow {
                    name: format!("NEGLO{}", i + 1),
                    sense: Sense::Ge,
                    coeffs: row_coeffs(-1.0),
                    rhs: p.b[i],
                });
                // (A - I) x + 2 diag(lower) z <= b
                let mut c = row_coeffs(-1.0);
                c.push((zname(i), 2.0 * lower[i]));
                rows.push(MilpRow {
                    name: format!("NEGHI{}", i + 1),
                    sense: Sense::Le,
                    coeffs: c,
                    rhs: p.b[i],
                });
                // (A + I) x >= b
                rows.push(MilpRow {
                    name: format!("POSLO{}", i + 1),
                    sense: Sense::Ge,
                    coeffs: row_coeffs(1.0),
                    rhs: p.b[i],
                });
                // (A + I) x + 2 diag(upper) z <= b + 2 upper
                let mut c = row_coeffs(1.0);
                c.push((zname(i), 2.0 * upper[i]));
                rows.push(MilpRow {
                    name: format!("POSHI{}", i + 1),
                    sense: Sense::Le,
                    coeffs: c,
                    rhs: p.b[i] + 2.0 * upper[i],
                });
            }
            Ok(MixedIntegerModel {
                name: "AVEBOX".into(),
                objective: Vec::new(),
                rows,
                continuous: (0..n).map(xname).collect(),
                binaries: (0..n).map(zname).collect(),
                free_vars: Vec::new(),
                var_bounds: (0..n).map(|j| (xname(j), lower[j], upper[j])).collect(),
            })
        }
    }
}

/// Brute force over the binary assignments; returns all solutions of the
/// underlying system found this way (bounded variant) or the best-scaling
/// solution x*/alpha* (scaling variant gives one point).
pub fn brute_force_bounded(
    p: &AveProblem,
    lower: &[f64],
    upper: &[f64],
    enum_cap: usize,
) -> Result<Vec<Vec<f64>>, AveError> {
    let n = p.n();
    if n > enum_cap {
        return Err(AveError::CapExceeded { n, cap: enum_cap });
    }
    let tol = 1e-9 * (1.0 + mat::norm_inf(&p.b));
    let mut found: Vec<Vec<f64>> = Vec::new();
    for (s, _) in gray_signs(n) {
        // z_i = 0 <-> s_i = +1; the equality rows are (A - diag(s)) x = b
        let m = p.a.add_diag(&mat::vec_scale(&s.as_f64(), -1.0));
        let candidate = match crate::core::linalg::LuFactors::factor(&m) {
            Ok(f) => Some(f.solve(&p.b)),
            Err(_) => {
                // singular restriction: fall back to LP feasibility
                let mut lp = LinearProgram::new(n);
                for i in 0..n {
                    lp.push_row(m.row(i), RowKind::Eq, p.b[i]);
                }
                for j in 0..n {
                    let mut row = vec![0.0; n];
                    row[j] = 1.0;
                    lp.push_row(&row, RowKind::Ge, lower[j]);
                    row[j] = -1.0;
                    lp.push_row(&row, RowKind::Ge, -upper[j]);
                }
                let sol = solve_lp(&lp);
                (sol.status == LpStatus::Optimal).then_some(sol.x)
            }
        };
        let Some(x) = candidate else { continue };
        // verify the full constraint block for this assignment
        let in_box = (0..n).all(|j| x[j] >= lower[j] - tol && x[j] <= upper[j] + tol);
        let sign_ok = (0..n).all(|j| {
            if s.0[j] > 0 {
                x[j] >= -tol
            } else {
                x[j] <= tol
            }
        });
        if in_box && sign_ok && p.residual_inf(&x) <= tol
            && found.iter().all(|y| mat::dist_inf(y, &x) > 1e-8)
        {
            found.push(x);
        }
    }
    Ok(found)
}

/// Brute force for the scaling variant: per assignment solve the LP
/// max alpha; alpha* = 0 certifies infeasibility of the original system.
pub fn brute_force_prokopyev(
    p: &AveProblem,
    enum_cap: usize,
) -> Result<Option<Vec<f64>>, AveError> {
    let n = p.n();
    if n > enum_cap {
        return Err(AveError::CapExceeded { n, cap: enum_cap });
    }
    if p.b.iter().all(|&v| v == 0.0) {
        return Err(AveError::Parameter("the scaling model requires b != 0".into()));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (s, _) in gray_signs(n) {
        // variables (x, y, alpha); z fixed by s (z_i = 1 <-> s_i = -1)
        let nv = 2 * n + 1;
        let mut obj = vec![0.0; nv];
        obj[2 * n] = -1.0; // max alpha
        let mut lp = LinearProgram::new(nv).minimize(&obj);
        for i in n..2 * n {
            lp.nonneg[i] = true; // y >= 0 (implied, declared for the solver)
        }
        lp.nonneg[2 * n] = true; // alpha >= 0
        for i in 0..n {
            // (Ax)_i - y_i - alpha b_i = 0
            let mut row = vec![0.0; nv];
            for j in 0..n {
                row[j] = p.a[(i, j)];
            }
            row[n + i] = -1.0;
            row[2 * n] = -p.b[i];
            lp.push_row(&row, RowKind::Eq, 0.0);
            let (lo_hi, hi_rhs) = if s.0[i] > 0 {
                // z_i = 0: y_i - x_i = 0, y_i + x_i <= 1
                (1.0, 1.0)
            } else {
                // z_i = 1: y_i + x_i = 0, y_i - x_i <= 1
                (-1.0, 1.0)
            };
            let mut row = vec![0.0; nv];
            row[i] = -lo_hi;
            row[n + i] = 1.0;
            lp.push_row(&row, RowKind::Eq, 0.0); // binding side
            let mut row = vec![0.0; nv];
            row[i] = -lo_hi; // loose side: y -+ x <= 1
            row[n + i] = -1.0;
            lp.push_row(&row, RowKind::Ge, -hi_rhs);
        }
        let sol = solve_lp(&lp);
        if sol.status == LpStatus::Optimal {
            let alpha = sol.x[2 * n];
            if best.as_ref().is_none_or(|(a, _)| alpha > *a) {
                best = Some((alpha, sol.x[..n].to_vec()));
            }
        }
    }
    match best {
        Some((alpha, x)) if alpha > 1e-9 => {
            Ok(Some(x.iter().map(|v| v / alpha).collect()))
        }
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// MPS emission and parsing
// ---------------------------------------------------------------------------

fn fmt_num(v: f64) -> String {
    // 17 significant digits: parses back to the identical double
    format!("{:.16e}", v)
}

impl MixedIntegerModel {
    /// Classic section layout (NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA) with
    /// binaries declared through BV lines. Numeric fields carry 17
    /// significant digits so that parsing reproduces the model exactly.
    pub fn to_mps(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("NAME          {}\n", self.name));
        out.push_str("ROWS\n");
        out.push_str(" N  COST\n");
        for row in &self.rows {
            let tag = match row.sense {
                Sense::Le => 'L',
                Sense::Ge => 'G',
                Sense::Eq => 'E',
            };
            out.push_str(&format!(" {}  {}\n", tag, row.name));
        }
        out.push_str("COLUMNS\n");
        // integer marker block around the binary columns
        let all_vars: Vec<&String> = self.continuous.iter().chain(&self.binaries).collect();
        let emit_column = |var: &String, out: &mut String| {
            let mut entries: Vec<(String, f64)> = Vec::new();
            for (v, c) in &self.objective {
                if v == var {
                    entries.push(("COST".into(), *c));
                }
            }
            for row in &self.rows {
                for (v, c) in &row.coeffs {
                    if v == var {
                        entries.push((row.name.clone(), *c));
                    }
                }
            }
            for (rname, c) in entries {
                out.push_str(&format!(
                    "    {:<10}{:<10}{}\n",
                    var,
                    rname,
                    fmt_num(c)
                ));
            }
        };
        for var in &self.continuous {
            emit_column(var, &mut out);
        }
        if !self.binaries.is_empty() {
            out.push_str("    MARKER    'MARKER'   'INTORG'\n");
            for var in &self.binaries {
                emit_column(var, &mut out);
            }
            out.push_str("    MARKER    'MARKER'   'INTEND'\n");
        }
        let _ = all_vars;
        out.push_str("RHS\n");
        for row in &self.rows {
            if row.rhs != 0.0 {
                out.push_str(&format!(
                    "    RHS       {:<10}{}\n",
                    row.name,
                    fmt_num(row.rhs)
                ));
            }
        }
        out.push_str("BOUNDS\n");
        for var in &self.free_vars {
            out.push_str(&format!(" FR BND       {}\n", var));
        }
        for (var, lo, hi) in &self.var_bounds {
            out.push_str(&format!(" LO BND       {:<10}{}\n", var, fmt_num(*lo)));
            out.push_str(&format!(" UP BND       {:<10}{}\n", var, fmt_num(*hi)));
        }
        for var in &self.binaries {
            out.push_str(&format!(" BV BND       {}\n", var));
        }
        out.push_str("ENDATA\n");
        out
    }

    pub fn parse_mps(text: &str) -> Result<MixedIntegerModel, AveError> {
        let bad = |line: usize, what: &str| {
            AveError::Parameter(format!("MPS parse error at line {}: {}", line + 1, what))
        };
        let mut name = String::new();
        let mut rows: Vec<MilpRow> = Vec::new();
        let mut objective: Vec<(String, f64)> = Vec::new();
        let mut continuous: Vec<String> = Vec::new();
        let mut binaries: Vec<String> = Vec::new();
        let mut free_vars: Vec<String> = Vec::new();
        let mut var_bounds: Vec<(String, f64, f64)> = Vec::new();
        let mut pending_lo: std::collections::BTreeMap<String, f64> = Default::default();
        let mut section = String::new();
        let mut integer_block = false;
        let mut seen_vars: Vec<String> = Vec::new();

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() {
                continue;
            }
            if !line.starts_with(' ') {
                let mut parts = line.split_whitespace();
                section = parts.next().unwrap_or("").to_string();
                if section == "NAME" {
                    name = parts.next().unwrap_or("").to_string();
                }
                if section == "ENDATA" {
                    break;
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match section.as_str() {
                "ROWS" => {
                    if fields.len() != 2 {
                        return Err(bad(ln, "expected row type and name"));
                    }
                    match fields[0] {
                        "N" => {}
                        t => {
                            let sense = match t {
                                "L" => Sense::Le,
                                "G" => Sense::Ge,
                                "E" => Sense::Eq,
                                _ => return Err(bad(ln, "unknown row type")),
                            };
                            rows.push(MilpRow {
                                name: fields[1].to_string(),
                                sense,
                                coeffs: Vec::new(),
                                rhs: 0.0,
                            });
                        }
                    }
                }
                "COLUMNS" => {
                    if fields.len() >= 3 && fields[1].contains("MARKER") {
                        integer_block = fields[2].contains("INTORG");
                        continue;
                    }
                    if fields.len() != 3 {
                        return Err(bad(ln, "expected column, row, value"));
                    }
                    let var = fields[0].to_string();
                    let value: f64 = fields[2]
                        .parse()
                        .map_err(|_| bad(ln, "unparseable numeric field"))?;
                    if !seen_vars.contains(&var) {
                        seen_vars.push(var.clone());
                        if integer_block {
                            binaries.push(var.clone());
                        } else {
                            continuous.push(var.clone());
                        }
                    }
                    if fields[1] == "COST" {
                        objective.push((var, value));
                    } else {
                        let row = rows
                            .iter_mut()
                            .find(|r| r.name == fields[1])
                            .ok_or_else(|| bad(ln, "unknown row in COLUMNS"))?;
                        row.coeffs.push((var, value));
                    }
                }
                "RHS" => {
                    if fields.len() != 3 {
                        return Err(bad(ln, "expected set, row, value"));
                    }
                    let value: f64 = fields[2]
                        .parse()
                        .map_err(|_| bad(ln, "unparseable numeric field"))?;
                    let row = rows
                        .iter_mut()
                        .find(|r| r.name == fields[1])
                        .ok_or_else(|| bad(ln, "unknown row in RHS"))?;
                    row.rhs = value;
                }
                "BOUNDS" => match fields[0] {
                    "FR" => free_vars.push(fields[2].to_string()),
                    "BV" => {
                        // binaries already known from the marker block
                    }
                    "LO" => {
                        let v: f64 = fields[3]
                            .parse()
                            .map_err(|_| bad(ln, "unparseable bound"))?;
                        pending_lo.insert(fields[2].to_string(), v);
                    }
                    "UP" => {
                        let v: f64 = fields[3]
                            .parse()
                            .map_err(|_| bad(ln, "unparseable bound"))?;
                        let lo = pending_lo.remove(fields[2]).unwrap_or(0.0);
                        var_bounds.push((fields[2].to_string(), lo, v));
                    }
                    _ => return Err(bad(ln, "unknown bound type")),
                },
                _ => return Err(bad(ln, "unexpected data line")),
            }
        }
        Ok(MixedIntegerModel {
            name,
            objective,
            rows,
            continuous,
            binaries,
            free_vars,
            var_bounds,
        })
    }
}
