//! Reader for user-supplied initial data on a rectangular grid.
//!
//! Schema: header `x,y,re,im`, one sample per row, row-major with `x` as
//! the outer (strictly increasing) coordinate and `y` the inner one; every
//! `x` block must repeat the same strictly increasing `y` column. The node
//! set itself defines the evolution grids, so it has to satisfy the same
//! constraints the planner imposes: a uniform power-of-two `x` grid read
//! as a periodic box, and a uniform odd `y` grid spanning the full strip
//! width (a trapezoid rule).

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::Failure;

#[derive(Debug)]
pub struct GridData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `values[ix][iy]`, aligned with `x` and `y`.
    pub values: Vec<Vec<Complex64>>,
}

impl GridData {
    /// Strip width implied by the grid: its last transverse node.
    pub fn width(&self) -> f64 {
        *self.y.last().unwrap()
    }

    /// Box half-width implied by the grid: minus its first node.
    pub fn x_box(&self) -> f64 {
        -self.x[0]
    }
}

fn usage(msg: String) -> Failure {
    Failure::Usage(msg)
}

pub fn read_grid(path: &Path) -> Result<GridData, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read grid file {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "x,y,re,im")) => {}
        other => {
            return Err(usage(format!(
                "grid file must start with the header 'x,y,re,im', found {:?}",
                other.map(|(_, l)| l)
            )));
        }
    }

    let mut x: Vec<f64> = Vec::new();
    let mut y: Vec<f64> = Vec::new();
    let mut values: Vec<Vec<Complex64>> = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let row = idx + 1;
        let mut fields = line.split(',');
        let mut next = |name: &str| -> Result<f64, Failure> {
            let field = fields
                .next()
                .ok_or_else(|| usage(format!("row {row}: missing column {name}")))?;
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| usage(format!("row {row}: {name} = {field:?} is not a number")))?;
            if !v.is_finite() {
                return Err(usage(format!("row {row}: {name} = {v} is not finite")));
            }
            Ok(v)
        };
        let (xv, yv, re, im) = (next("x")?, next("y")?, next("re")?, next("im")?);
        if fields.next().is_some() {
            return Err(usage(format!("row {row}: more than four columns")));
        }

        let new_block = match x.last() {
            None => true,
            Some(&last) if xv > last => true,
            Some(&last) if xv == last => false,
            Some(&last) => {
                return Err(usage(format!(
                    "row {row}: x = {xv} breaks the strictly increasing block order (previous {last})"
                )));
            }
        };
        if new_block {
            if let Some(prev) = values.last() {
                if prev.len() != y.len() {
                    return Err(usage(format!(
                        "row {row}: previous x block has {} of {} y samples",
                        prev.len(),
                        y.len()
                    )));
                }
            }
            x.push(xv);
            values.push(Vec::new());
        }
        let block = values.last_mut().unwrap();
        let iy = block.len();
        if x.len() == 1 {
            // First block defines the y column.
            if let Some(&last) = y.last() {
                if yv <= last {
                    return Err(usage(format!(
                        "row {row}: y = {yv} must increase strictly within a block (previous {last})"
                    )));
                }
            }
            y.push(yv);
        } else {
            if iy >= y.len() {
                return Err(usage(format!(
                    "row {row}: x block has more y samples than the first block ({})",
                    y.len()
                )));
            }
            if yv != y[iy] {
                return Err(usage(format!(
                    "row {row}: y = {yv} differs from the first block's node {}",
                    y[iy]
                )));
            }
        }
        block.push(Complex64::new(re, im));
    }

    match values.last() {
        None => return Err(usage("grid file has a header but no samples".into())),
        Some(prev) if prev.len() != y.len() => {
            return Err(usage(format!(
                "last x block has {} of {} y samples",
                prev.len(),
                y.len()
            )));
        }
        _ => {}
    }
    check_evolution_grid(&x, &y)?;
    Ok(GridData { x, y, values })
}

/// The planner's constraints, rephrased as grid-file diagnostics.
fn check_evolution_grid(x: &[f64], y: &[f64]) -> Result<(), Failure> {
    let n_x = x.len();
    if n_x < 16 || !n_x.is_power_of_two() {
        return Err(usage(format!(
            "grid needs a power-of-two number of x nodes >= 16 (periodic box), got {n_x}"
        )));
    }
    let x_box = -x[0];
    if !(x_box > 0.0) {
        return Err(usage(format!(
            "x nodes must start at the negative box edge, got {}",
            x[0]
        )));
    }
    let dx = 2.0 * x_box / n_x as f64;
    let tol = 1e-9 * x_box.max(1.0);
    for (j, &xv) in x.iter().enumerate() {
        let expect = -x_box + j as f64 * dx;
        if (xv - expect).abs() > tol {
            return Err(usage(format!(
                "x node {j} = {xv} is not on the uniform box grid (expected {expect}); \
                 the box covers [-L, L) with the right edge excluded"
            )));
        }
    }

    let n_y = y.len();
    if n_y < 5 || n_y % 2 == 0 {
        return Err(usage(format!(
            "grid needs an odd number of y nodes >= 5 (trapezoid rule), got {n_y}"
        )));
    }
    if y[0] != 0.0 {
        return Err(usage(format!("y nodes must start at 0, got {}", y[0])));
    }
    let l = y[n_y - 1];
    let dy = l / (n_y - 1) as f64;
    let tol = 1e-9 * l.max(1.0);
    for (i, &yv) in y.iter().enumerate() {
        let expect = i as f64 * dy;
        if (yv - expect).abs() > tol {
            return Err(usage(format!(
                "y node {i} = {yv} is not on the uniform transverse grid (expected {expect})"
            )));
        }
    }
    Ok(())
}
