//! Closed loops in the `(J, H)` plane.
//!
//! Syntax: `circle:cJ,cH,r` or `poly:J1,H1;J2,H2;...` (closed implicitly).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::MonodromyError;

pub type Point2 = (f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub enum LoopSpec {
    Circle {
        center: Point2,
        radius: f64,
        clockwise: bool,
    },
    Polyline {
        vertices: Vec<Point2>,
    },
}

fn sub(a: Point2, b: Point2) -> Point2 {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: Point2, b: Point2) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: Point2, b: Point2) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn norm(a: Point2) -> f64 {
    a.0.hypot(a.1)
}

pub(crate) fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = sub(b, a);
    let l2 = dot(d, d);
    let s = if l2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), d) / l2).clamp(0.0, 1.0)
    };
    norm(sub(p, (a.0 + s * d.0, a.1 + s * d.1)))
}

/// Parameters `(s, u)` of the intersection `a + s (b - a) = c + u (d - c)`,
/// if the segments are not parallel.
pub(crate) fn segment_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Option<(f64, f64)> {
    let r = sub(b, a);
    let q = sub(d, c);
    let den = cross(r, q);
    if den.abs() < 1e-300 {
        return None;
    }
    let ac = sub(c, a);
    Some((cross(ac, q) / den, cross(ac, r) / den))
}

impl LoopSpec {
    pub fn circle(center: Point2, radius: f64) -> Result<Self, MonodromyError> {
        let l = LoopSpec::Circle {
            center,
            radius,
            clockwise: false,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn polyline(vertices: Vec<Point2>) -> Result<Self, MonodromyError> {
        let l = LoopSpec::Polyline { vertices };
        l.validate()?;
        Ok(l)
    }

    /// Checks closedness, nonzero length and simplicity.
    pub fn validate(&self) -> Result<(), MonodromyError> {
        match self {
            LoopSpec::Circle { center, radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0 && center.0.is_finite() && center.1.is_finite()) {
                    return Err(MonodromyError::InvalidLoop(format!(
                        "circle radius must be positive, got {radius}"
                    )));
                }
            }
            LoopSpec::Polyline { vertices } => {
                if vertices.len() < 3 {
                    return Err(MonodromyError::InvalidLoop("polyline needs at least 3 vertices".into()));
                }
                if vertices.iter().any(|v| !(v.0.is_finite() && v.1.is_finite())) {
                    return Err(MonodromyError::InvalidLoop("non-finite vertex".into()));
                }
                let e = self.edges();
                if e.iter().any(|(a, b)| a == b) {
                    return Err(MonodromyError::InvalidLoop("repeated consecutive vertex".into()));
                }
                if self.signed_area() == 0.0 {
                    return Err(MonodromyError::InvalidLoop("polyline encloses no area".into()));
                }
                let n = e.len();
                for i in 0..n {
                    for j in i + 1..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if adjacent {
                            // adjacent edges may only share their common vertex
                            let (a, b) = e[i];
                            let (c, d) = e[j];
                            if cross(sub(b, a), sub(d, c)) == 0.0 && dot(sub(b, a), sub(d, c)) < 0.0 {
                                return Err(MonodromyError::InvalidLoop(format!("edges {i} and {j} fold back")));
                            }
                            continue;
                        }
                        let (a, b) = e[i];
                        let (c, d) = e[j];
                        let touching = match segment_intersection(a, b, c, d) {
                            Some((s, u)) => (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u),
                            None => {
                                segment_distance(a, c, d) == 0.0
                                    || segment_distance(b, c, d) == 0.0
                                    || segment_distance(c, a, b) == 0.0
                            }
                        };
                        if touching {
                            return Err(MonodromyError::InvalidLoop(format!(
                                "polyline is not simple: edges {i} and {j} meet"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<(Point2, Point2)> {
        match self {
            LoopSpec::Polyline { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| (vertices[i], vertices[(i + 1) % n])).collect()
            }
            LoopSpec::Circle { .. } => {
                let pts = self.sample(720);
                let n = pts.len();
                (0..n).map(|i| (pts[i], pts[(i + 1) % n])).collect()
            }
        }
    }

    /// Positive for counterclockwise loops.
    pub fn signed_area(&self) -> f64 {
        match self {
            LoopSpec::Circle { radius, clockwise, .. } => {
                let a = std::f64::consts::PI * radius * radius;
                if *clockwise {
                    -a
                } else {
                    a
                }
            }
            LoopSpec::Polyline { vertices } => {
                let n = vertices.len();
                0.5 * (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum::<f64>()
            }
        }
    }

    pub fn is_counterclockwise(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> LoopSpec {
        match self {
            LoopSpec::Circle {
                center,
                radius,
                clockwise,
            } => LoopSpec::Circle {
                center: *center,
                radius: *radius,
                clockwise: !clockwise,
            },
            LoopSpec::Polyline { vertices } => {
                // keep the base point, reverse the direction
                let mut v = vertices.clone();
                v[1..].reverse();
                LoopSpec::Polyline { vertices: v }
            }
        }
    }

    /// The same loop traversed counterclockwise.
    pub fn normalized(&self) -> LoopSpec {
        if self.is_counterclockwise() {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            LoopSpec::Circle { radius, .. } => TAU * radius,
            LoopSpec::Polyline { .. } => self.edges().iter().map(|(a, b)| norm(sub(*b, *a))).sum(),
        }
    }

    /// Point at parameter `t` in `[0, 1)`, proportional to arc length.
    pub fn point_at(&self, t: f64) -> Point2 {
        let t = t.rem_euclid(1.0);
        match self {
            LoopSpec::Circle {
                center,
                radius,
                clockwise,
            } => {
                let a = if *clockwise { -TAU * t } else { TAU * t };
                (center.0 + radius * a.cos(), center.1 + radius * a.sin())
            }
            LoopSpec::Polyline { .. } => {
                let mut target = t * self.length();
                for (a, b) in self.edges() {
                    let l = norm(sub(b, a));
                    if target <= l {
                        let s = target / l;
                        return (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
                    }
                    target -= l;
                }
                self.edges()[0].0
            }
        }
    }

    /// `n` points at equal parameter spacing starting from `point_at(0)`.
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        (0..n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        match self {
            LoopSpec::Circle { center, radius, .. } => (norm(sub(p, *center)) - radius).abs(),
            LoopSpec::Polyline { .. } => self
                .edges()
                .iter()
                .map(|(a, b)| segment_distance(p, *a, *b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Intersections of the segment `a -> b` with the loop, as
    /// `(segment parameter, intersection point, unit loop tangent there)`.
    /// The segment is taken half-open, `[a, b)`, so consecutive segments of
    /// a polyline do not report a shared vertex twice.
    pub fn intersect_segment(&self, a: Point2, b: Point2) -> Vec<(f64, Point2, Point2)> {
        let d = sub(b, a);
        let mut out = Vec::new();
        match self {
            LoopSpec::Circle {
                center,
                radius,
                clockwise,
            } => {
                let f = sub(a, *center);
                let qa = dot(d, d);
                if qa == 0.0 {
                    return out;
                }
                let qb = 2.0 * dot(f, d);
                let qc = dot(f, f) - radius * radius;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return out;
                }
                let sq = disc.sqrt();
                let mut roots = vec![(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
                if sq == 0.0 {
                    roots.pop();
                }
                for s in roots {
                    if (0.0..1.0).contains(&s) {
                        let p = (a.0 + s * d.0, a.1 + s * d.1);
                        let r = sub(p, *center);
                        let mut t = (-r.1 / radius, r.0 / radius);
                        if *clockwise {
                            t = (-t.0, -t.1);
                        }
                        out.push((s, p, t));
                    }
                }
            }
            LoopSpec::Polyline { .. } => {
                for (c, e) in self.edges() {
                    if let Some((s, u)) = segment_intersection(a, b, c, e) {
                        if (0.0..1.0).contains(&s) && (0.0..1.0).contains(&u) {
                            let te = sub(e, c);
                            let l = norm(te);
                            out.push((s, (a.0 + s * d.0, a.1 + s * d.1), (te.0 / l, te.1 / l)));
                        }
                    }
                }
            }
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }
}

/// Planar winding number of `loop_` around `p`.
pub fn winding_number(loop_: &LoopSpec, p: Point2, tol: f64) -> Result<i32, MonodromyError> {
    let dist = loop_.distance_to(p);
    if dist <= tol {
        return Err(MonodromyError::PointOnLoop {
            point: p,
            distance: dist,
        });
    }
    match loop_ {
        LoopSpec::Circle {
            center,
            radius,
            clockwise,
        } => {
            if norm(sub(p, *center)) < *radius {
                Ok(if *clockwise { -1 } else { 1 })
            } else {
                Ok(0)
            }
        }
        LoopSpec::Polyline { .. } => {
            let mut w = 0;
            for (a, b) in loop_.edges() {
                if a.1 <= p.1 {
                    if b.1 > p.1 && cross(sub(b, a), sub(p, a)) > 0.0 {
                        w += 1;
                    }
                } else if b.1 <= p.1 && cross(sub(b, a), sub(p, a)) < 0.0 {
                    w -= 1;
                }
            }
            Ok(w)
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, MonodromyError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| MonodromyError::InvalidLoop(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(MonodromyError::InvalidLoop(format!("not finite: {s:?}")));
    }
    Ok(v)
}

impl FromStr for LoopSpec {
    type Err = MonodromyError;

    fn from_str(s: &str) -> Result<Self, MonodromyError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("circle:") {
            let v: Vec<f64> = rest.split(',').map(parse_f64).collect::<Result<_, _>>()?;
            let [cj, ch, r] = v.as_slice() else {
                return Err(MonodromyError::InvalidLoop(format!("circle needs cJ,cH,r: {s:?}")));
            };
            return LoopSpec::circle((*cj, *ch), *r);
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let mut vertices = Vec::new();
            for pair in rest.split(';').filter(|p| !p.trim().is_empty()) {
                let v: Vec<f64> = pair.split(',').map(parse_f64).collect::<Result<_, _>>()?;
                let [j, h] = v.as_slice() else {
                    return Err(MonodromyError::InvalidLoop(format!("vertex needs J,H: {pair:?}")));
                };
                vertices.push((*j, *h));
            }
            if vertices.len() > 1 && vertices.first() == vertices.last() {
                vertices.pop();
            }
            return LoopSpec::polyline(vertices);
        }
        Err(MonodromyError::InvalidLoop(format!(
            "expected circle:... or poly:..., got {s:?}"
        )))
    }
}

impl fmt::Display for LoopSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSpec::Circle {
                center,
                radius,
                clockwise,
            } => {
                write!(f, "circle:{},{},{}", center.0, center.1, radius)?;
                if *clockwise {
                    write!(f, " (clockwise)")?;
                }
                Ok(())
            }
            LoopSpec::Polyline { vertices } => {
                let parts: Vec<String> = vertices.iter().map(|(j, h)| format!("{j},{h}")).collect();
                write!(f, "poly:{}", parts.join(";"))
            }
        }
    }
}

impl Serialize for LoopSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
