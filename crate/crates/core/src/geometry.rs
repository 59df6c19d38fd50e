//! Plane domains and their geometric functionals.
//!
//! Polygons are integrated exactly by a fan of triangles from the centroid;
//! ellipses use closed forms. Ellipses are meshed as inscribed polygons (see
//! [`crate::mesh`]) but every functional here is the analytic one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg2::{Mat2, Vec2};

/// Symmetry-order value meaning "invariant under every rotation" (disks).
pub const ALL_ORDERS: usize = 0;

/// Vertex count of the polygon that stands in for an ellipse boundary.
pub const ELLIPSE_POLYGON_SIDES: usize = 256;

const SYMMETRY_TOL: f64 = 1e-9;
const CONFORMAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Counter-clockwise vertex list.
    Polygon(Vec<Vec2>),
    /// Axis-aligned ellipse with the given semi-axes and center.
    Ellipse { semi_axes: [f64; 2], center: Vec2 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    shape: Shape,
    symmetry_order: Option<usize>,
}

fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn diameter(vertices: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in vertices.iter().enumerate() {
        for q in &vertices[i + 1..] {
            d = d.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    d
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |a: Vec2, b: Vec2, p: Vec2| {
        p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn is_simple(vertices: &[Vec2]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            // adjacent edges share a vertex by construction
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Second moment `∫_K |x − o|² dx` of the triangle `(o, p, q)` about its
/// vertex `o`, signed by orientation.
fn fan_second_moment(o: Vec2, p: Vec2, q: Vec2) -> f64 {
    let a = [p[0] - o[0], p[1] - o[1]];
    let b = [q[0] - o[0], q[1] - o[1]];
    let area = 0.5 * (a[0] * b[1] - a[1] * b[0]);
    area / 6.0 * (a[0] * a[0] + a[1] * a[1] + b[0] * b[0] + b[1] * b[1] + a[0] * b[0] + a[1] * b[1])
}

fn polygon_centroid(vertices: &[Vec2]) -> Vec2 {
    let n = vertices.len();
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        let cross = p[0] * q[1] - q[0] * p[1];
        a += cross;
        cx += (p[0] + q[0]) * cross;
        cy += (p[1] + q[1]) * cross;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

impl Domain {
    /// Builds a polygon domain, reorienting clockwise input.
    ///
    /// A declared symmetry order `N > 1` is verified by matching the rotated
    /// vertex set against the original.
    pub fn polygon(vertices: Vec<Vec2>, symmetry_order: Option<usize>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDomain("non-finite vertex coordinate".into()));
        }
        let mut vertices = vertices;
        let diam = diameter(&vertices);
        let area = signed_area(&vertices);
        if area.abs() <= 1e-14 * diam * diam {
            return Err(Error::DegenerateDomain(format!("polygon area {area:e}")));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidDomain("polygon is self-intersecting".into()));
        }
        let domain = Domain {
            shape: Shape::Polygon(vertices),
            symmetry_order,
        };
        if let Some(order) = symmetry_order {
            if order == ALL_ORDERS {
                return Err(Error::InvalidDomain(
                    "only ellipses with equal semi-axes can declare all symmetry orders".into(),
                ));
            }
            if order > 1 && !domain.has_rotational_symmetry(order) {
                return Err(Error::InvalidDomain(format!(
                    "polygon is not invariant under rotation by 2π/{order}"
                )));
            }
        }
        Ok(domain)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::ellipse_at(a, b, [0.0, 0.0])
    }

    pub fn ellipse_at(a: f64, b: f64, center: Vec2) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidDomain(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        let symmetry_order = if a == b { ALL_ORDERS } else { 2 };
        Ok(Domain {
            shape: Shape::Ellipse {
                semi_axes: [a, b],
                center,
            },
            symmetry_order: Some(symmetry_order),
        })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius)
    }

    /// Regular `N`-gon centered at the origin with a vertex straight up.
    pub fn regular_polygon(order: usize, circumradius: f64) -> Result<Self> {
        if order < 3 {
            return Err(Error::OrderTooLow(order));
        }
        if !(circumradius > 0.0) {
            return Err(Error::InvalidDomain(format!("circumradius must be positive, got {circumradius}")));
        }
        let vertices = (0..order)
            .map(|k| {
                let angle = 2.0 * PI * k as f64 / order as f64 + PI / 2.0;
                [circumradius * angle.cos(), circumradius * angle.sin()]
            })
            .collect();
        Ok(Domain {
            shape: Shape::Polygon(vertices),
            symmetry_order: Some(order),
        })
    }

    /// Equilateral triangle of unit side, centered at the origin.
    pub fn equilateral_triangle() -> Self {
        Self::regular_polygon(3, 1.0 / 3f64.sqrt()).expect("valid")
    }

    /// Unit square `[0,1]²` declared 4-fold symmetric.
    pub fn unit_square() -> Self {
        Self::polygon(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            Some(4),
        )
        .expect("valid")
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn symmetry_order(&self) -> Option<usize> {
        self.symmetry_order
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.shape, Shape::Polygon(_))
    }

    /// True when the declared symmetry satisfies the `N ≥ 3` hypothesis of
    /// the averaging argument (disks count).
    pub fn has_sufficient_symmetry(&self) -> bool {
        matches!(self.symmetry_order, Some(n) if n == ALL_ORDERS || n >= 3)
    }

    /// Boundary vertices: the polygon itself, or the inscribed
    /// [`ELLIPSE_POLYGON_SIDES`]-gon of an ellipse.
    pub fn boundary_polygon(&self) -> Vec<Vec2> {
        match &self.shape {
            Shape::Polygon(v) => v.clone(),
            Shape::Ellipse { semi_axes, center } => (0..ELLIPSE_POLYGON_SIDES)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / ELLIPSE_POLYGON_SIDES as f64;
                    [center[0] + semi_axes[0] * t.cos(), center[1] + semi_axes[1] * t.sin()]
                })
                .collect(),
        }
    }

    fn has_rotational_symmetry(&self, order: usize) -> bool {
        let Shape::Polygon(v) = &self.shape else {
            return true;
        };
        let c = polygon_centroid(v);
        let rot = Mat2::rotation(2.0 * PI / order as f64);
        let tol = SYMMETRY_TOL * diameter(v).max(1.0);
        v.iter().all(|p| {
            let q = rot.apply([p[0] - c[0], p[1] - c[1]]);
            let q = [q[0] + c[0], q[1] + c[1]];
            v.iter().any(|r| (r[0] - q[0]).hypot(r[1] - q[1]) <= tol)
        })
    }

    pub fn translated(&self, offset: Vec2) -> Domain {
        let shape = match &self.shape {
            Shape::Polygon(v) => Shape::Polygon(
                v.iter().map(|p| [p[0] + offset[0], p[1] + offset[1]]).collect(),
            ),
            Shape::Ellipse { semi_axes, center } => Shape::Ellipse {
                semi_axes: *semi_axes,
                center: [center[0] + offset[0], center[1] + offset[1]],
            },
        };
        Domain {
            shape,
            symmetry_order: self.symmetry_order,
        }
    }

    /// The same domain moved so that its centroid is the origin.
    pub fn centered(&self) -> Domain {
        let c = centroid(self);
        self.translated([-c[0], -c[1]])
    }
}

pub fn area(d: &Domain) -> f64 {
    match &d.shape {
        Shape::Polygon(v) => signed_area(v),
        Shape::Ellipse { semi_axes, .. } => PI * semi_axes[0] * semi_axes[1],
    }
}

pub fn centroid(d: &Domain) -> Vec2 {
    match &d.shape {
        Shape::Polygon(v) => polygon_centroid(v),
        Shape::Ellipse { center, .. } => *center,
    }
}

/// Polar moment of inertia about the centroid, `∫ |x − c|² dx`.
pub fn moment_of_inertia(d: &Domain) -> f64 {
    match &d.shape {
        Shape::Polygon(v) => {
            let c = polygon_centroid(v);
            let n = v.len();
            (0..n).map(|i| fan_second_moment(c, v[i], v[(i + 1) % n])).sum()
        }
        Shape::Ellipse { semi_axes: [a, b], .. } => PI * a * b * (a * a + b * b) / 4.0,
    }
}

/// `∫ |x − p|² dx` about an arbitrary point.
pub fn second_moment_about(d: &Domain, p: Vec2) -> f64 {
    match &d.shape {
        Shape::Polygon(v) => {
            let n = v.len();
            (0..n).map(|i| fan_second_moment(p, v[i], v[(i + 1) % n])).sum()
        }
        Shape::Ellipse { center, .. } => {
            let dx = center[0] - p[0];
            let dy = center[1] - p[1];
            moment_of_inertia(d) + area(d) * (dx * dx + dy * dy)
        }
    }
}

/// Image of a domain under `x ↦ T x`.
///
/// Polygons map vertex by vertex (re-oriented when `det T < 0`). An ellipse
/// maps to an ellipse whose semi-axes are the singular values of
/// `T·diag(a, b)`; it is returned in principal-axis position, which is the
/// true image up to a rotation about its center.
pub fn apply_linear_map(d: &Domain, t: &Mat2) -> Result<Domain> {
    t.inverse()?;
    let symmetry_order = if t.is_conformal(CONFORMAL_TOL) {
        d.symmetry_order
    } else {
        None
    };
    match &d.shape {
        Shape::Polygon(v) => {
            let mut mapped: Vec<Vec2> = v.iter().map(|p| t.apply(*p)).collect();
            if t.det() < 0.0 {
                mapped.reverse();
            }
            Ok(Domain {
                shape: Shape::Polygon(mapped),
                symmetry_order,
            })
        }
        Shape::Ellipse { semi_axes, center } => {
            let (s1, s2) = (*t * Mat2::diag(semi_axes[0], semi_axes[1])).singular_values();
            let mut out = Domain::ellipse_at(s1, s2, t.apply(*center))?;
            if symmetry_order.is_none() && s1 != s2 {
                out.symmetry_order = Some(2);
            }
            Ok(out)
        }
    }
}

/// Planck constant, field strength and Robin parameter after a linear change
/// of domain, all scaled by `√2/‖T⁻¹‖` (the field additionally by `1/|det T|`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransformedParameters {
    pub hbar_t: f64,
    pub beta_t: f64,
    pub sigma_t: f64,
}

pub fn transformed_parameters(t: &Mat2, hbar: f64, beta: f64, sigma: f64) -> Result<TransformedParameters> {
    let inv = t.inverse()?;
    if !(hbar > 0.0) {
        return Err(Error::InvalidPlanck(hbar));
    }
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("Robin parameter must be non-negative, got {sigma}")));
    }
    let factor = 2f64.sqrt() / inv.hs_norm();
    Ok(TransformedParameters {
        hbar_t: factor * hbar,
        beta_t: factor * beta / t.det().abs(),
        sigma_t: factor * sigma,
    })
}

/// `(Σ λ_j) · A³ / I`.
pub fn normalized_functional(eigenvalues: &[f64], d: &Domain) -> Result<f64> {
    if eigenvalues.is_empty() {
        return Err(Error::NoEigenvalues);
    }
    let a = area(d);
    Ok(eigenvalues.iter().sum::<f64>() * a.powi(3) / moment_of_inertia(d))
}

/// Scale-invariant shape factor `A³/I`.
pub fn shape_factor(d: &Domain) -> f64 {
    area(d).powi(3) / moment_of_inertia(d)
}

/// `|2/‖T⁻¹‖² − (A³/I)(T d) / (A³/I)(d)|`.
///
/// The two sides agree when `d` has rotational symmetry of order at least 3;
/// for other domains the value is just reported.
pub fn functional_ratio_check(d: &Domain, t: &Mat2) -> Result<f64> {
    let inv = t.inverse()?;
    let image = apply_linear_map(d, t)?;
    let lhs = 2.0 / inv.hs_norm().powi(2);
    Ok((lhs - shape_factor(&image) / shape_factor(d)).abs())
}

/// Serialized form of a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainFile {
    Polygon {
        vertices: Vec<Vec2>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symmetry_order: Option<usize>,
    },
    Ellipse {
        semi_axes: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symmetry_order: Option<usize>,
    },
}

impl DomainFile {
    pub fn into_domain(self) -> Result<Domain> {
        match self {
            DomainFile::Polygon { vertices, symmetry_order } => Domain::polygon(vertices, symmetry_order),
            DomainFile::Ellipse { semi_axes, symmetry_order } => {
                let d = Domain::ellipse(semi_axes[0], semi_axes[1])?;
                match symmetry_order {
                    Some(n) if semi_axes[0] != semi_axes[1] && (n == ALL_ORDERS || n > 2) => {
                        Err(Error::InvalidDomain(format!(
                            "ellipse with unequal semi-axes cannot have symmetry order {n}"
                        )))
                    }
                    _ => Ok(d),
                }
            }
        }
    }

    pub fn from_domain(d: &Domain) -> Self {
        match &d.shape {
            Shape::Polygon(v) => DomainFile::Polygon {
                vertices: v.clone(),
                symmetry_order: d.symmetry_order,
            },
            Shape::Ellipse { semi_axes, .. } => DomainFile::Ellipse {
                semi_axes: *semi_axes,
                symmetry_order: d.symmetry_order,
            },
        }
    }
}

pub fn parse_domain(text: &str) -> Result<Domain> {
    let file: DomainFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_domain()
}

pub fn domain_to_string(d: &Domain) -> String {
    serde_json::to_string_pretty(&DomainFile::from_domain(d)).expect("domain serializes")
}
