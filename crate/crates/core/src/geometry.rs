//! Planar curves in the right half-plane, parametrized over [0, 1], and the
//! lift of half-plane points to the surface of revolution.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernel::HalfPlanePoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Curve {
    Segment { start: HalfPlanePoint, end: HalfPlanePoint },
    /// Traversed counterclockwise from the rightmost point.
    Circle { center: HalfPlanePoint, radius: f64 },
    /// Circular arc between two polar angles (radians) about `center`.
    Arc { center: HalfPlanePoint, radius: f64, start_angle: f64, end_angle: f64 },
    /// `|z² - a²| = b²` shifted right by `translate`. For `b < a` only the
    /// right loop.
    CassinianOval { a: f64, b: f64, translate: f64 },
    /// Counterclockwise from the lower-left corner, arc-length proportional.
    RectangleBoundary { lower_left: HalfPlanePoint, upper_right: HalfPlanePoint },
    /// Open polygonal path, arc-length proportional.
    Polyline { vertices: Vec<HalfPlanePoint> },
}

/// A point of 3-space; the third coordinate is the rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SurfacePoint3 {
    pub fn distance(&self, other: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Point of `curve` at parameter `t` in [0, 1].
pub fn curve_point(curve: &Curve, t: f64) -> Result<HalfPlanePoint> {
    curve.point(t)
}

/// Rotate `z` by `phi` about the axis.
pub fn lift_to_3d(z: HalfPlanePoint, phi: f64) -> SurfacePoint3 {
    SurfacePoint3 { x: z.x() * phi.cos(), y: z.x() * phi.sin(), z: z.y() }
}

fn pt(x: f64, y: f64) -> Result<HalfPlanePoint> {
    // absorb rounding of points that sit on the axis
    let x = if (-1e-12..0.0).contains(&x) { 0.0 } else { x };
    HalfPlanePoint::new(x, y)
}

fn geometry<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Geometry(msg.into()))
}

impl Curve {
    pub fn segment(start: HalfPlanePoint, end: HalfPlanePoint) -> Result<Self> {
        let c = Curve::Segment { start, end };
        c.validate()?;
        Ok(c)
    }

    pub fn circle(center: HalfPlanePoint, radius: f64) -> Result<Self> {
        let c = Curve::Circle { center, radius };
        c.validate()?;
        Ok(c)
    }

    pub fn arc(center: HalfPlanePoint, radius: f64, start_angle: f64, end_angle: f64) -> Result<Self> {
        let c = Curve::Arc { center, radius, start_angle, end_angle };
        c.validate()?;
        Ok(c)
    }

    pub fn cassinian_oval(a: f64, b: f64, translate: f64) -> Result<Self> {
        let c = Curve::CassinianOval { a, b, translate };
        c.validate()?;
        Ok(c)
    }

    /// Cassinian oval translated so that its leftmost point has abscissa `min_x`.
    pub fn cassinian_with_min_x(a: f64, b: f64, min_x: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return geometry(format!("Cassinian oval needs a, b > 0, got a = {a}, b = {b}"));
        }
        let reach = if b > a { (a * a + b * b).sqrt() } else { -(a * a - b * b).sqrt() };
        Self::cassinian_oval(a, b, min_x + reach)
    }

    pub fn rectangle(lower_left: HalfPlanePoint, upper_right: HalfPlanePoint) -> Result<Self> {
        let c = Curve::RectangleBoundary { lower_left, upper_right };
        c.validate()?;
        Ok(c)
    }

    pub fn polyline(vertices: Vec<HalfPlanePoint>) -> Result<Self> {
        let c = Curve::Polyline { vertices };
        c.validate()?;
        Ok(c)
    }

    /// The curve moved `dx` units to the right.
    pub fn translated(&self, dx: f64) -> Result<Self> {
        let mv = |p: &HalfPlanePoint| HalfPlanePoint::new(p.x() + dx, p.y());
        let c = match self {
            Curve::Segment { start, end } => Curve::Segment { start: mv(start)?, end: mv(end)? },
            Curve::Circle { center, radius } => Curve::Circle { center: mv(center)?, radius: *radius },
            Curve::Arc { center, radius, start_angle, end_angle } => Curve::Arc {
                center: mv(center)?,
                radius: *radius,
                start_angle: *start_angle,
                end_angle: *end_angle,
            },
            Curve::CassinianOval { a, b, translate } => Curve::CassinianOval { a: *a, b: *b, translate: translate + dx },
            Curve::RectangleBoundary { lower_left, upper_right } => {
                Curve::RectangleBoundary { lower_left: mv(lower_left)?, upper_right: mv(upper_right)? }
            }
            Curve::Polyline { vertices } => Curve::Polyline { vertices: vertices.iter().map(mv).collect::<Result<_>>()? },
        };
        c.validate()?;
        Ok(c)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Curve::Circle { .. } | Curve::CassinianOval { .. } | Curve::RectangleBoundary { .. })
    }

    /// Check parameters and half-plane containment.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Curve::Segment { start, end } => {
                if start == end {
                    return geometry("segment endpoints coincide");
                }
            }
            Curve::Circle { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return geometry(format!("circle radius {radius} must be positive"));
                }
                if center.x() < *radius {
                    return geometry(format!(
                        "circle of radius {radius} about x = {} crosses the axis",
                        center.x()
                    ));
                }
            }
            Curve::Arc { center, radius, start_angle, end_angle } => {
                if !(finite(&[*radius, *start_angle, *end_angle]) && *radius > 0.0) {
                    return geometry("arc needs a positive radius and finite angles");
                }
                if !(end_angle > start_angle && end_angle - start_angle < TAU) {
                    return geometry("arc angles must increase by less than a full turn");
                }
                let k = ((start_angle - PI) / TAU).ceil();
                let min_cos = if PI + k * TAU <= *end_angle {
                    -1.0
                } else {
                    start_angle.cos().min(end_angle.cos())
                };
                if center.x() + radius * min_cos < -1e-12 {
                    return geometry("arc crosses the axis");
                }
            }
            Curve::CassinianOval { a, b, translate } => {
                if !(finite(&[*a, *b, *translate]) && *a > 0.0 && *b > 0.0 && *translate >= 0.0) {
                    return geometry("Cassinian oval needs a, b > 0 and translate >= 0");
                }
                if a == b {
                    return geometry("a = b gives a lemniscate, not an oval");
                }
                let min_x = if b > a {
                    translate - (a * a + b * b).sqrt()
                } else {
                    translate + (a * a - b * b).sqrt()
                };
                if min_x < -1e-12 {
                    return geometry(format!("Cassinian oval reaches x = {min_x}"));
                }
            }
            Curve::RectangleBoundary { lower_left, upper_right } => {
                if !(lower_left.x() < upper_right.x() && lower_left.y() < upper_right.y()) {
                    return geometry("rectangle corners must be lower-left and upper-right");
                }
            }
            Curve::Polyline { vertices } => {
                if vertices.len() < 2 {
                    return geometry("polyline needs at least two vertices");
                }
                if vertices.windows(2).any(|v| v[0] == v[1]) {
                    return geometry("polyline has repeated consecutive vertices");
                }
            }
        }
        Ok(())
    }

    /// Point at parameter `t` in [0, 1].
    pub fn point(&self, t: f64) -> Result<HalfPlanePoint> {
        if !(0.0..=1.0).contains(&t) {
            return domain(format!("curve parameter {t} is outside [0, 1]"));
        }
        if self.is_closed() && t == 1.0 {
            return self.eval(0.0);
        }
        self.eval(t)
    }

    /// Point at any real parameter of a closed curve, reduced modulo 1.
    /// Open curves accept only [0, 1].
    pub fn point_wrapped(&self, t: f64) -> Result<HalfPlanePoint> {
        if self.is_closed() {
            self.eval(t.rem_euclid(1.0))
        } else {
            self.point(t)
        }
    }

    fn eval(&self, t: f64) -> Result<HalfPlanePoint> {
        match self {
            Curve::Segment { start, end } => pt(
                start.x() + t * (end.x() - start.x()),
                start.y() + t * (end.y() - start.y()),
            ),
            Curve::Circle { center, radius } => {
                let (s, c) = (TAU * t).sin_cos();
                pt(center.x() + radius * c, center.y() + radius * s)
            }
            Curve::Arc { center, radius, start_angle, end_angle } => {
                let (s, c) = (start_angle + t * (end_angle - start_angle)).sin_cos();
                pt(center.x() + radius * c, center.y() + radius * s)
            }
            Curve::CassinianOval { a, b, translate } => {
                let (x, y) = cassini(*a, *b, t);
                pt(translate + x, y)
            }
            Curve::RectangleBoundary { lower_left: ll, upper_right: ur } => {
                let corners = [
                    (ll.x(), ll.y()),
                    (ur.x(), ll.y()),
                    (ur.x(), ur.y()),
                    (ll.x(), ur.y()),
                    (ll.x(), ll.y()),
                ];
                let (x, y) = along_path(&corners, t);
                pt(x, y)
            }
            Curve::Polyline { vertices } => {
                let v: Vec<(f64, f64)> = vertices.iter().map(|p| (p.x(), p.y())).collect();
                let (x, y) = along_path(&v, t);
                pt(x, y)
            }
        }
    }

    /// Points at each parameter in `params`, wrapping for closed curves.
    pub fn points(&self, params: &[f64]) -> Result<Vec<HalfPlanePoint>> {
        params.iter().map(|&t| self.point_wrapped(t)).collect()
    }

    /// Total arc length, exact for straight and circular pieces and by dense
    /// chord sums otherwise.
    pub fn length(&self) -> f64 {
        match self {
            Curve::Segment { start, end } => start.distance(end),
            Curve::Circle { radius, .. } => TAU * radius,
            Curve::Arc { radius, start_angle, end_angle, .. } => radius * (end_angle - start_angle),
            Curve::RectangleBoundary { lower_left: ll, upper_right: ur } => {
                2.0 * ((ur.x() - ll.x()) + (ur.y() - ll.y()))
            }
            Curve::Polyline { vertices } => vertices.windows(2).map(|v| v[0].distance(&v[1])).sum(),
            Curve::CassinianOval { .. } => {
                let n = 1 << 16;
                let mut prev = self.eval(0.0).expect("validated curve");
                let mut total = 0.0;
                for k in 1..=n {
                    let next = self.eval(k as f64 / n as f64 % 1.0).expect("validated curve");
                    total += prev.distance(&next);
                    prev = next;
                }
                total
            }
        }
    }
}

/// Point of `|z² - a²| = b²` at parameter `t`, before translation.
fn cassini(a: f64, b: f64, t: f64) -> (f64, f64) {
    let (a2, b2) = (a * a, b * b);
    if b > a {
        // polar angle about the centre, radius from the quartic in ρ²
        let theta = TAU * t;
        let (s2, c2) = (2.0 * theta).sin_cos();
        let rho2 = a2 * c2 + (b2 * b2 - a2 * a2 * s2 * s2).sqrt();
        let rho = rho2.sqrt();
        (rho * theta.cos(), rho * theta.sin())
    } else {
        // right loop: z = sqrt(a² + b² e^{iφ})
        let phi = TAU * t;
        let (re, im) = (a2 + b2 * phi.cos(), b2 * phi.sin());
        let modulus = re.hypot(im);
        let x = (0.5 * (modulus + re)).sqrt();
        let y = 0.5 * im / x;
        (x, y)
    }
}

/// Arc-length-proportional position along a polygonal path.
fn along_path(v: &[(f64, f64)], t: f64) -> (f64, f64) {
    let lengths: Vec<f64> = v.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).collect();
    let total: f64 = lengths.iter().sum();
    let mut target = t * total;
    for (i, len) in lengths.iter().enumerate() {
        if target <= *len || i == lengths.len() - 1 {
            let f = if *len > 0.0 { (target / len).min(1.0) } else { 0.0 };
            let (p, q) = (v[i], v[i + 1]);
            return (p.0 + f * (q.0 - p.0), p.1 + f * (q.1 - p.1));
        }
        target -= len;
    }
    v[v.len() - 1]
}
