//! Marching-squares extraction of level sets of a scalar field.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSegment {
    pub level: f64,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

/// Rectangular sampling grid with `nx × ny` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max || self.nx < 2 || self.ny < 2 {
            return domain(format!("invalid grid {self:?}"));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64
    }
}

/// Segments of `{f = level}` for each level, with linear interpolation along
/// cell edges. Saddle cells are resolved by the value at the cell centre.
/// Non-finite samples drop the cells that touch them.
pub fn marching_squares<F>(grid: &Grid, levels: &[f64], mut f: F) -> Result<Vec<ContourSegment>>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    grid.validate()?;
    let mut values = vec![0.0; grid.nx * grid.ny];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            values[j * grid.nx + i] = f(grid.x(i), grid.y(j))?;
        }
    }
    let at = |i: usize, j: usize| values[j * grid.nx + i];
    let mut out = Vec::new();
    for &level in levels {
        for j in 0..grid.ny - 1 {
            for i in 0..grid.nx - 1 {
                // corners counter-clockwise from lower left
                let corners = [
                    (grid.x(i), grid.y(j), at(i, j)),
                    (grid.x(i + 1), grid.y(j), at(i + 1, j)),
                    (grid.x(i + 1), grid.y(j + 1), at(i + 1, j + 1)),
                    (grid.x(i), grid.y(j + 1), at(i, j + 1)),
                ];
                if corners.iter().any(|c| !c.2.is_finite()) {
                    continue;
                }
                cell_segments(&corners, level, &mut out);
            }
        }
    }
    Ok(out)
}

fn cell_segments(c: &[(f64, f64, f64); 4], level: f64, out: &mut Vec<ContourSegment>) {
    let above: Vec<bool> = c.iter().map(|p| p.2 >= level).collect();
    let crossing = |e: usize| {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        let t = (level - a.2) / (b.2 - a.2);
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    };
    // edge e joins corner e to corner e + 1
    let edges: Vec<usize> = (0..4).filter(|&e| above[e] != above[(e + 1) % 4]).collect();
    let mut push = |e0: usize, e1: usize| {
        let (p, q) = (crossing(e0), crossing(e1));
        out.push(ContourSegment { level, x0: p.0, y0: p.1, x1: q.0, y1: q.1 });
    };
    match edges.len() {
        2 => push(edges[0], edges[1]),
        4 => {
            let centre = 0.25 * c.iter().map(|p| p.2).sum::<f64>();
            // keep the corners that share the centre's side connected
            if (centre >= level) == above[0] {
                push(0, 1);
                push(2, 3);
            } else {
                push(3, 0);
                push(1, 2);
            }
        }
        _ => {}
    }
}
