//! Globally adaptive tensor Gauss–Kronrod (7/15) quadrature on rectangles.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Nodes on [−1, 1] with Kronrod and Gauss weights (0 for Kronrod-only nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: f64,
    error: f64,
    /// Error attributable to the x direction (Gauss in x against Kronrod).
    error_x: f64,
    error_y: f64,
}

fn eval_cell<F: Fn(f64, f64) -> f64>(f: &F, nodes: &[(f64, f64, f64); 15], x0: f64, x1: f64, y0: f64, y1: f64) -> Cell {
    let (cx, hx) = ((x0 + x1) / 2.0, (x1 - x0) / 2.0);
    let (cy, hy) = ((y0 + y1) / 2.0, (y1 - y0) / 2.0);
    // kk: Kronrod ⊗ Kronrod, gk: Gauss in x, kg: Gauss in y
    let (mut kk, mut gk, mut kg) = (0.0, 0.0, 0.0);
    for &(a, ka, ga) in nodes {
        let x = cx + hx * a;
        for &(b, kb, gb) in nodes {
            let v = f(x, cy + hy * b);
            kk += ka * kb * v;
            gk += ga * kb * v;
            kg += ka * gb * v;
        }
    }
    let area = hx * hy;
    let (ex, ey) = (((kk - gk) * area).abs(), ((kk - kg) * area).abs());
    Cell { x0, x1, y0, y1, value: kk * area, error: ex + ey, error_x: ex, error_y: ey }
}

/// Integral of `f` over `[xs[0], xs.last()] × [ys[0], ys.last()]`, starting
/// from the grid the breakpoints define and splitting the cell with the
/// largest error estimate in half (across the direction with the larger
/// error) until the summed estimate is below `tol`.
/// Returns the value and the final error estimate.
pub(crate) fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    xs: &[f64],
    ys: &[f64],
    tol: f64,
    max_cells: usize,
) -> Result<(f64, f64)> {
    let nodes = rule();
    let mut cells: Vec<Cell> = Vec::new();
    for wx in xs.windows(2) {
        for wy in ys.windows(2) {
            cells.push(eval_cell(&f, &nodes, wx[0], wx[1], wy[0], wy[1]));
        }
    }
    loop {
        let err: f64 = cells.iter().map(|c| c.error).sum();
        if !err.is_finite() {
            return Err(Error::Inconsistency("quadrature produced a non-finite value".into()));
        }
        if err <= tol {
            let value = cells.iter().map(|c| c.value).sum();
            return Ok((value, err));
        }
        if cells.len() >= max_cells {
            return Err(Error::Resource(alloc::format!(
                "quadrature error {:.3e} above {:.3e} after {} cells",
                err,
                tol,
                cells.len()
            )));
        }
        let (i, _) = cells
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, c)| if c.error > best.1 { (i, c.error) } else { best });
        let c = cells.swap_remove(i);
        if c.error_x >= c.error_y {
            let m = (c.x0 + c.x1) / 2.0;
            cells.push(eval_cell(&f, &nodes, c.x0, m, c.y0, c.y1));
            cells.push(eval_cell(&f, &nodes, m, c.x1, c.y0, c.y1));
        } else {
            let m = (c.y0 + c.y1) / 2.0;
            cells.push(eval_cell(&f, &nodes, c.x0, c.x1, c.y0, m));
            cells.push(eval_cell(&f, &nodes, c.x0, c.x1, m, c.y1));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_and_log_singularity_converges() {
        let (v, _) = integrate_2d(|x, y| x * x * y, &[0.0, 1.0], &[0.0, 2.0], 1e-12, 100).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
        // ∫₀¹ −ln(1 − x) dx = 1
        let (v, e) = integrate_2d(|x, _| -libm::log(1.0 - x), &[0.0, 1.0], &[0.0, 1.0], 1e-9, 400).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{} {}", v, e);
        assert!(matches!(
            integrate_2d(|x, _| 1.0 / (x * x), &[0.0, 1.0], &[0.0, 1.0], 1e-9, 40),
            Err(Error::Resource(_))
        ));
    }
}
