//! Domain geometry: points, ball specifications, constructive-solid-geometry
//! domain trees, certified inradius lower bounds, and inversion through the
//! unit sphere.
//!
//! All domains are open sets. `dist_lower_bound` returns a *certified* lower
//! bound on the distance to the complement: the open ball of that radius
//! around the query point is always contained in the domain. Exactness is
//! tracked per node (balls, half-spaces and their intersections are exact;
//! everything else is conservative).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in `R^d`, stored as a coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn zeros(d: usize) -> Self {
        Point {
            coords: vec![0.0; d],
        }
    }

    /// The distinguished image of the origin under inversion.
    pub fn infinity(d: usize) -> Self {
        Point {
            coords: vec![f64::INFINITY; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_infinite(&self) -> bool {
        self.coords.iter().any(|c| c.is_infinite())
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.coords, &other.coords)
    }

    pub fn scale(&self, k: f64) -> Point {
        Point::new(self.coords.iter().map(|c| k * c).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Point::new(coords.to_vec())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An open ball `B(center, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(BallSpec { center, radius })
    }

    pub fn unit(d: usize) -> Self {
        BallSpec {
            center: Point::zeros(d),
            radius: 1.0,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        dist_sq(x.coords(), self.center.coords()) < self.radius * self.radius
    }
}

/// Certified inradius bound at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InradiusBound {
    /// Lower bound on the distance to the domain complement (0 outside).
    pub radius: f64,
    /// Whether `radius` is the exact distance.
    pub exact: bool,
}

/// Open-set domain tree.
///
/// `Difference(left, right)` denotes `left \ closure(right)`, which keeps the
/// result open; `right` must be a primitive ball or half-space (validation
/// rejects composite subtrahends because no certified distance to the closure
/// of a general tree is available).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSpec {
    /// Open ball.
    Ball { center: Point, radius: f64 },
    /// Open half-space `{x : normal·x < offset}`; `normal` must be a unit
    /// vector (construct through [`DomainSpec::half_space`] or run
    /// [`DomainSpec::validate`], which checks it).
    HalfSpace { normal: Point, offset: f64 },
    /// Power-profile thorn `{0 < x_1 < length, |x_⊥| < width_scale·x_1^gamma}`
    /// with apex at the origin; requires `d ≥ 2` and `0 < length ≤ 1`.
    ThornPower {
        gamma: f64,
        length: f64,
        width_scale: f64,
    },
    /// Planar cusp region `{(u, v) : v > |u|^gamma}`; requires `d = 2`.
    CuspRegion { gamma: f64 },
    Union { children: Vec<DomainSpec> },
    Intersection { children: Vec<DomainSpec> },
    Difference {
        left: Box<DomainSpec>,
        right: Box<DomainSpec>,
    },
}

impl DomainSpec {
    pub fn ball(center: Point, radius: f64) -> Self {
        DomainSpec::Ball { center, radius }
    }

    pub fn unit_ball(d: usize) -> Self {
        DomainSpec::Ball {
            center: Point::zeros(d),
            radius: 1.0,
        }
    }

    /// Half-space `{x : normal·x < offset}`; normalizes `normal`.
    pub fn half_space(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidDomain(
                "half-space normal must be a nonzero finite vector".to_string(),
            ));
        }
        Ok(DomainSpec::HalfSpace {
            normal: normal.scale(1.0 / n),
            offset: offset / n,
        })
    }

    pub fn thorn(gamma: f64, length: f64, width_scale: f64) -> Self {
        DomainSpec::ThornPower {
            gamma,
            length,
            width_scale,
        }
    }

    pub fn cusp(gamma: f64) -> Self {
        DomainSpec::CuspRegion { gamma }
    }

    pub fn union(children: Vec<DomainSpec>) -> Self {
        DomainSpec::Union { children }
    }

    pub fn intersection(children: Vec<DomainSpec>) -> Self {
        DomainSpec::Intersection { children }
    }

    pub fn difference(left: DomainSpec, right: DomainSpec) -> Self {
        DomainSpec::Difference {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Structural validation against the ambient dimension.
    ///
    /// Checks coordinate dimensions, parameter ranges, unit normals, and the
    /// primitive-subtrahend restriction for differences. Run this on any
    /// deserialized specification before use; the sampling code assumes it.
    pub fn validate(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::InvalidDomain("dimension must be ≥ 1".to_string()));
        }
        match self {
            DomainSpec::Ball { center, radius } => {
                if center.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: center.dim(),
                    });
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidDomain(format!(
                        "ball radius must be positive and finite, got {radius}"
                    )));
                }
                if center.coords().iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidDomain(
                        "ball center must be finite".to_string(),
                    ));
                }
                Ok(())
            }
            DomainSpec::HalfSpace { normal, offset } => {
                if normal.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: normal.dim(),
                    });
                }
                if !offset.is_finite() {
                    return Err(Error::InvalidDomain(
                        "half-space offset must be finite".to_string(),
                    ));
                }
                if (normal.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidDomain(
                        "half-space normal must be a unit vector (use DomainSpec::half_space)"
                            .to_string(),
                    ));
                }
                Ok(())
            }
            DomainSpec::ThornPower {
                gamma,
                length,
                width_scale,
            } => {
                if d < 2 {
                    return Err(Error::InvalidDomain(
                        "thorn-power requires dimension ≥ 2".to_string(),
                    ));
                }
                if !(*gamma > 0.0) || !(*length > 0.0 && *length <= 1.0) || !(*width_scale > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "thorn-power needs gamma > 0, 0 < length ≤ 1, width_scale > 0; \
                         got gamma = {gamma}, length = {length}, width_scale = {width_scale}"
                    )));
                }
                Ok(())
            }
            DomainSpec::CuspRegion { gamma } => {
                if d != 2 {
                    return Err(Error::InvalidDomain(
                        "cusp-region requires dimension 2".to_string(),
                    ));
                }
                if !(*gamma > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "cusp-region needs gamma > 0, got {gamma}"
                    )));
                }
                Ok(())
            }
            DomainSpec::Union { children } | DomainSpec::Intersection { children } => {
                if children.is_empty() {
                    return Err(Error::InvalidDomain(
                        "union/intersection needs at least one child".to_string(),
                    ));
                }
                children.iter().try_for_each(|c| c.validate(d))
            }
            DomainSpec::Difference { left, right } => {
                left.validate(d)?;
                right.validate(d)?;
                match **right {
                    DomainSpec::Ball { .. } | DomainSpec::HalfSpace { .. } => Ok(()),
                    _ => Err(Error::InvalidDomain(
                        "difference subtrahend must be a primitive ball or half-space"
                            .to_string(),
                    )),
                }
            }
        }
    }

    /// Open-set membership.
    pub fn contains(&self, x: &Point) -> bool {
        self.contains_coords(x.coords())
    }

    pub(crate) fn contains_coords(&self, x: &[f64]) -> bool {
        match self {
            DomainSpec::Ball { center, radius } => {
                dist_sq(x, center.coords()) < radius * radius
            }
            DomainSpec::HalfSpace { normal, offset } => dot(normal.coords(), x) < *offset,
            DomainSpec::ThornPower {
                gamma,
                length,
                width_scale,
            } => {
                let t = x[0];
                if !(t > 0.0 && t < *length) {
                    return false;
                }
                let rho = norm(&x[1..]);
                rho < width_scale * t.powf(*gamma)
            }
            DomainSpec::CuspRegion { gamma } => x[1] > x[0].abs().powf(*gamma),
            DomainSpec::Union { children } => children.iter().any(|c| c.contains_coords(x)),
            DomainSpec::Intersection { children } => {
                children.iter().all(|c| c.contains_coords(x))
            }
            DomainSpec::Difference { left, right } => {
                left.contains_coords(x) && !right.closure_contains(x)
            }
        }
    }

    /// Closed-set membership for primitive subtrahends.
    fn closure_contains(&self, x: &[f64]) -> bool {
        match self {
            DomainSpec::Ball { center, radius } => {
                dist_sq(x, center.coords()) <= radius * radius
            }
            DomainSpec::HalfSpace { normal, offset } => dot(normal.coords(), x) <= *offset,
            // Unreachable after validation; fall back to open membership.
            other => other.contains_coords(x),
        }
    }

    /// Exact distance from an exterior point to a primitive's closure
    /// (used for difference subtrahends).
    fn dist_to_closure(&self, x: &[f64]) -> f64 {
        match self {
            DomainSpec::Ball { center, radius } => dist(x, center.coords()) - radius,
            DomainSpec::HalfSpace { normal, offset } => dot(normal.coords(), x) - offset,
            _ => 0.0,
        }
    }

    /// Certified lower bound on the distance from `x` to the complement.
    ///
    /// The open ball `B(x, radius)` is contained in the domain whenever
    /// `radius > 0`; the bound is positive for every interior point (up to
    /// f64 resolution for points pathologically close to a curved wall) and
    /// zero outside.
    pub fn dist_lower_bound(&self, x: &Point) -> InradiusBound {
        self.dist_lower_bound_coords(x.coords())
    }

    pub(crate) fn dist_lower_bound_coords(&self, x: &[f64]) -> InradiusBound {
        const OUTSIDE: InradiusBound = InradiusBound {
            radius: 0.0,
            exact: true,
        };
        match self {
            DomainSpec::Ball { center, radius } => {
                let r = radius - dist(x, center.coords());
                if r > 0.0 {
                    InradiusBound {
                        radius: r,
                        exact: true,
                    }
                } else {
                    OUTSIDE
                }
            }
            DomainSpec::HalfSpace { normal, offset } => {
                let r = offset - dot(normal.coords(), x);
                if r > 0.0 {
                    InradiusBound {
                        radius: r,
                        exact: true,
                    }
                } else {
                    OUTSIDE
                }
            }
            DomainSpec::ThornPower {
                gamma,
                length,
                width_scale,
            } => {
                if !self.contains_coords(x) {
                    return OUTSIDE;
                }
                let t = x[0];
                let rho = norm(&x[1..]);
                // Largest r with width_scale·(t-r)^gamma ≥ rho + r: any ball
                // of smaller radius stays inside the lateral wall and the
                // inlet plane (the profile is increasing in t). Monotone in
                // r, so bisection converges; capped by the far cap at
                // x_1 = length.
                let profile_gap = |r: f64| width_scale * (t - r).powf(*gamma) - (rho + r);
                let lateral = bisect_positive_root(profile_gap, t);
                InradiusBound {
                    radius: lateral.min(length - t),
                    exact: false,
                }
            }
            DomainSpec::CuspRegion { gamma } => {
                if !self.contains_coords(x) {
                    return OUTSIDE;
                }
                let (u, v) = (x[0].abs(), x[1]);
                // Largest r with v - r ≥ (u + r)^gamma; same certification
                // argument as the thorn (profile increasing in |u|).
                let gap = |r: f64| (v - r) - (u + r).powf(*gamma);
                InradiusBound {
                    radius: bisect_positive_root(gap, v),
                    exact: false,
                }
            }
            DomainSpec::Union { children } => {
                let mut best = 0.0f64;
                for c in children {
                    let b = c.dist_lower_bound_coords(x);
                    if b.radius > best {
                        best = b.radius;
                    }
                }
                if best > 0.0 {
                    InradiusBound {
                        radius: best,
                        exact: false,
                    }
                } else {
                    OUTSIDE
                }
            }
            DomainSpec::Intersection { children } => {
                let mut radius = f64::INFINITY;
                let mut exact = true;
                for c in children {
                    let b = c.dist_lower_bound_coords(x);
                    if b.radius <= 0.0 {
                        return OUTSIDE;
                    }
                    radius = radius.min(b.radius);
                    exact &= b.exact;
                }
                InradiusBound { radius, exact }
            }
            DomainSpec::Difference { left, right } => {
                if right.closure_contains(x) {
                    return OUTSIDE;
                }
                let a = left.dist_lower_bound_coords(x);
                if a.radius <= 0.0 {
                    return OUTSIDE;
                }
                let b = right.dist_to_closure(x);
                InradiusBound {
                    radius: a.radius.min(b),
                    exact: a.exact,
                }
            }
        }
    }

    /// A ball containing the whole domain, when one exists. `d` is the
    /// ambient dimension (needed for primitives that do not store it).
    pub fn bounding_ball(&self, d: usize) -> Option<BallSpec> {
        match self {
            DomainSpec::Ball { center, radius } => Some(BallSpec {
                center: center.clone(),
                radius: *radius,
            }),
            DomainSpec::HalfSpace { .. } | DomainSpec::CuspRegion { .. } => None,
            DomainSpec::ThornPower {
                gamma,
                length,
                width_scale,
            } => {
                // The thorn sits inside the cylinder 0 < t < length,
                // rho < width_scale·length^gamma.
                let half = length / 2.0;
                let w = width_scale * length.powf(*gamma);
                let mut center = vec![0.0; d];
                center[0] = half;
                Some(BallSpec {
                    center: Point::new(center),
                    radius: (half * half + w * w).sqrt() * (1.0 + 1e-12),
                })
            }
            DomainSpec::Union { children } => {
                let balls: Option<Vec<BallSpec>> =
                    children.iter().map(|c| c.bounding_ball(d)).collect();
                let balls = balls?;
                let mut center = vec![0.0; d];
                for b in &balls {
                    for (ci, bi) in center.iter_mut().zip(b.center.coords()) {
                        *ci += bi / balls.len() as f64;
                    }
                }
                let center = Point::new(center);
                let radius = balls
                    .iter()
                    .map(|b| center.dist(&b.center) + b.radius)
                    .fold(0.0f64, f64::max);
                Some(BallSpec { center, radius })
            }
            DomainSpec::Intersection { children } => children
                .iter()
                .filter_map(|c| c.bounding_ball(d))
                .min_by(|a, b| a.radius.total_cmp(&b.radius)),
            DomainSpec::Difference { left, .. } => left.bounding_ball(d),
        }
    }

    /// Certified lower bound on the distance from `y` to the domain
    /// (0 when `y` may touch the domain or no bound is available).
    pub fn exterior_clearance(&self, y: &Point) -> f64 {
        self.exterior_clearance_coords(y.coords())
    }

    pub(crate) fn exterior_clearance_coords(&self, y: &[f64]) -> f64 {
        match self {
            DomainSpec::Ball { center, radius } => (dist(y, center.coords()) - radius).max(0.0),
            DomainSpec::HalfSpace { normal, offset } => {
                (dot(normal.coords(), y) - offset).max(0.0)
            }
            DomainSpec::ThornPower {
                gamma,
                length,
                width_scale,
            } => {
                let t = y[0];
                let rho = norm(&y[1..]);
                let mut best = (-t).max(t - length).max(rho - width_scale * length.powf(*gamma));
                if let Some(bb) = self.bounding_ball(y.len()) {
                    best = best.max(dist(y, bb.center.coords()) - bb.radius);
                }
                best.max(0.0)
            }
            // Only the containing upper half-plane gives a certified bound.
            DomainSpec::CuspRegion { .. } => (-y[1]).max(0.0),
            DomainSpec::Union { children } => children
                .iter()
                .map(|c| c.exterior_clearance_coords(y))
                .fold(f64::INFINITY, f64::min),
            DomainSpec::Intersection { children } => children
                .iter()
                .map(|c| c.exterior_clearance_coords(y))
                .fold(0.0, f64::max),
            DomainSpec::Difference { left, right } => {
                let a = left.exterior_clearance_coords(y);
                let pen = match &**right {
                    DomainSpec::Ball { center, radius } => {
                        (radius - dist(y, center.coords())).max(0.0)
                    }
                    DomainSpec::HalfSpace { normal, offset } => {
                        (offset - dot(normal.coords(), y)).max(0.0)
                    }
                    _ => 0.0,
                };
                a.max(pen)
            }
        }
    }
}

/// Bisect the largest `r ∈ (0, hi)` with `gap(r) ≥ 0`, for `gap` strictly
/// decreasing with `gap(0) > 0 > gap(hi)`. Returns a certified value `≤` the
/// true root.
fn bisect_positive_root<F: Fn(f64) -> f64>(gap: F, hi: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = hi;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Inversion through the unit sphere, `Tx = x/|x|²`.
///
/// The origin maps to the distinguished value [`Point::infinity`] and an
/// infinite point maps back to the origin.
pub fn invert_point(x: &Point) -> Point {
    if x.is_infinite() {
        return Point::zeros(x.dim());
    }
    let n2 = x.norm_sq();
    if n2 == 0.0 {
        return Point::infinity(x.dim());
    }
    x.scale(1.0 / n2)
}

/// Image of a ball under inversion: `B(c, r)` with `|c| > r` maps to
/// `B(c/(|c|²-r²), r/(|c|²-r²))`. A ball whose closure contains the origin
/// has an unbounded image and is rejected.
pub fn invert_ball(ball: &BallSpec) -> Result<BallSpec> {
    let c2 = ball.center.norm_sq();
    let denom = c2 - ball.radius * ball.radius;
    if denom <= 0.0 {
        return Err(Error::domain(
            "invert_ball: ball closure contains the origin, image is unbounded",
        ));
    }
    Ok(BallSpec {
        center: ball.center.scale(1.0 / denom),
        radius: ball.radius / denom,
    })
}
