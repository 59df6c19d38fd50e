//! Conforming triangle meshes with uniform red refinement.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Shape};
use crate::linalg2::{Mat2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    /// Index of the polygon side the edge lies on.
    pub side: usize,
}

/// Curve that boundary midpoints are placed on during refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BoundaryCurve {
    /// Midpoints stay on the straight polygon sides.
    Polygonal,
    /// The ellipse `center + axes·(unit circle)`; midpoints are pushed
    /// radially out onto it.
    Ellipse { center: Vec2, axes: Mat2 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    level: u32,
    #[serde(skip)]
    boundary: BoundaryCurve,
}

fn tri_area(p: Vec2, q: Vec2, r: Vec2) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

fn cross_at(prev: Vec2, cur: Vec2, next: Vec2) -> f64 {
    (cur[0] - prev[0]) * (next[1] - cur[1]) - (cur[1] - prev[1]) * (next[0] - cur[0])
}

fn is_convex(v: &[Vec2]) -> bool {
    let n = v.len();
    let scale = v.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    (0..n).all(|i| cross_at(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) >= -1e-14 * scale * scale)
}

fn point_in_triangle(p: Vec2, a: Vec2, b: Vec2, c: Vec2) -> bool {
    tri_area(a, b, p) >= 0.0 && tri_area(b, c, p) >= 0.0 && tri_area(c, a, p) >= 0.0
}

/// Ear clipping of a counter-clockwise simple polygon; yields `n − 2`
/// triangles.
fn ear_clip(v: &[Vec2]) -> Result<Vec<[usize; 3]>> {
    let mut remaining: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));
    while remaining.len() > 3 {
        let n = remaining.len();
        let ear = (0..n).find(|&i| {
            let (ia, ib, ic) = (remaining[(i + n - 1) % n], remaining[i], remaining[(i + 1) % n]);
            let (a, b, c) = (v[ia], v[ib], v[ic]);
            if tri_area(a, b, c) <= 0.0 {
                return false;
            }
            remaining
                .iter()
                .filter(|&&k| k != ia && k != ib && k != ic)
                .all(|&k| !point_in_triangle(v[k], a, b, c))
        });
        let Some(i) = ear else {
            return Err(Error::DegenerateDomain("ear clipping found no ear".into()));
        };
        out.push([remaining[(i + n - 1) % n], remaining[i], remaining[(i + 1) % n]]);
        remaining.remove(i);
    }
    out.push([remaining[0], remaining[1], remaining[2]]);
    Ok(out)
}

/// Level-0 mesh of a domain: a fan from the centroid for convex polygons,
/// ear clipping otherwise. Ellipses are replaced by their inscribed polygon.
pub fn triangulate(d: &Domain) -> Result<Mesh> {
    let polygon = d.boundary_polygon();
    let n = polygon.len();
    let boundary = match d.shape() {
        Shape::Polygon(_) => BoundaryCurve::Polygonal,
        Shape::Ellipse { semi_axes, center } => BoundaryCurve::Ellipse {
            center: *center,
            axes: Mat2::diag(semi_axes[0], semi_axes[1]),
        },
    };
    let boundary_edges = (0..n)
        .map(|i| BoundaryEdge {
            vertices: [i, (i + 1) % n],
            side: i,
        })
        .collect();
    let mut vertices = polygon.clone();
    let triangles = if is_convex(&polygon) {
        let c = match d.shape() {
            Shape::Ellipse { center, .. } => *center,
            Shape::Polygon(_) => crate::geometry::centroid(d),
        };
        vertices.push(c);
        (0..n).map(|i| [n, i, (i + 1) % n]).collect()
    } else {
        ear_clip(&polygon)?
    };
    let mesh = Mesh {
        vertices,
        triangles,
        boundary_edges,
        level: 0,
        boundary,
    };
    if mesh.triangles.iter().any(|t| mesh.triangle_area(t) <= 0.0) {
        return Err(Error::DegenerateDomain("triangulation produced a non-positive triangle".into()));
    }
    Ok(mesh)
}

/// `k` rounds of red refinement.
pub fn refine(m: &Mesh, k: u32) -> Mesh {
    (0..k).fold(m.clone(), |mesh, _| mesh.red_refine())
}

/// Mesh of `T(Ω)` with unchanged connectivity.
pub fn map_mesh(m: &Mesh, t: &Mat2) -> Result<Mesh> {
    t.inverse()?;
    let flip = t.det() < 0.0;
    let vertices = m.vertices.iter().map(|p| t.apply(*p)).collect();
    let triangles = if flip {
        m.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect()
    } else {
        m.triangles.clone()
    };
    let boundary_edges = if flip {
        m.boundary_edges
            .iter()
            .map(|e| BoundaryEdge {
                vertices: [e.vertices[1], e.vertices[0]],
                side: e.side,
            })
            .collect()
    } else {
        m.boundary_edges.clone()
    };
    let boundary = match m.boundary {
        BoundaryCurve::Polygonal => BoundaryCurve::Polygonal,
        BoundaryCurve::Ellipse { center, axes } => BoundaryCurve::Ellipse {
            center: t.apply(center),
            axes: *t * axes,
        },
    };
    Ok(Mesh {
        vertices,
        triangles,
        boundary_edges,
        level: m.level,
        boundary,
    })
}

pub fn translate_mesh(m: &Mesh, offset: Vec2) -> Mesh {
    let shift = |p: &Vec2| [p[0] + offset[0], p[1] + offset[1]];
    Mesh {
        vertices: m.vertices.iter().map(shift).collect(),
        boundary: match m.boundary {
            BoundaryCurve::Polygonal => BoundaryCurve::Polygonal,
            BoundaryCurve::Ellipse { center, axes } => BoundaryCurve::Ellipse {
                center: shift(&center),
                axes,
            },
        },
        ..m.clone()
    }
}

impl Mesh {
    /// Level-0 mesh from explicit counter-clockwise triangles. Edges used by a
    /// single triangle become boundary edges, each tagged as its own side.
    pub fn from_triangles(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>) -> Result<Mesh> {
        let mut mesh = Mesh {
            vertices,
            triangles,
            boundary_edges: Vec::new(),
            level: 0,
            boundary: BoundaryCurve::Polygonal,
        };
        if mesh.triangles.iter().flatten().any(|&v| v >= mesh.vertices.len()) {
            return Err(Error::InvalidDomain("triangle references a missing vertex".into()));
        }
        let counts = mesh.edge_counts();
        for t in &mesh.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if counts[&(a.min(b), a.max(b))] == 1 {
                    let side = mesh.boundary_edges.len();
                    mesh.boundary_edges.push(BoundaryEdge { vertices: [a, b], side });
                }
            }
        }
        mesh.validate().map_err(Error::InvalidDomain)?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn boundary_curve(&self) -> &BoundaryCurve {
        &self.boundary
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        tri_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
    }

    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }

    pub fn is_boundary_vertex(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            flags[e.vertices[0]] = true;
            flags[e.vertices[1]] = true;
        }
        flags
    }

    /// Undirected edges with the number of triangles sharing each.
    pub fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut best = f64::INFINITY;
        for t in &self.triangles {
            for k in 0..3 {
                let p = self.vertices[t[k]];
                let q = self.vertices[t[(k + 1) % 3]];
                let r = self.vertices[t[(k + 2) % 3]];
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [r[0] - p[0], r[1] - p[1]];
                let cross = u[0] * v[1] - u[1] * v[0];
                let dot = u[0] * v[0] + u[1] * v[1];
                best = best.min(cross.abs().atan2(dot));
            }
        }
        best
    }

    /// Checks orientation, conformity and boundary tagging.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (i, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= self.vertices.len()) {
                return Err(format!("triangle {i} references a missing vertex"));
            }
            if self.triangle_area(t) <= 0.0 {
                return Err(format!("triangle {i} is not counter-clockwise"));
            }
        }
        let counts = self.edge_counts();
        let mut boundary: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            *boundary.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        for (edge, &count) in &counts {
            let tagged = boundary.get(edge).copied().unwrap_or(0);
            match (count, tagged) {
                (1, 1) | (2, 0) => {}
                _ => return Err(format!("edge {edge:?} shared by {count} triangles, tagged {tagged} times")),
            }
        }
        if boundary.len() != counts.values().filter(|&&c| c == 1).count() {
            return Err("boundary tag on an edge that is not in the mesh".into());
        }
        Ok(())
    }

    fn red_refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec2>| -> usize {
            *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                vertices.len() - 1
            })
        };
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        let mut boundary_midpoints = Vec::with_capacity(self.boundary_edges.len());
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            let m = midpoint(a, b, &mut vertices);
            boundary_midpoints.push(m);
            boundary_edges.push(BoundaryEdge { vertices: [a, m], side: e.side });
            boundary_edges.push(BoundaryEdge { vertices: [m, b], side: e.side });
        }
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        if let BoundaryCurve::Ellipse { center, axes } = self.boundary {
            let inv = axes.inverse().expect("ellipse axes are invertible");
            for m in boundary_midpoints {
                let p = vertices[m];
                let rel = [p[0] - center[0], p[1] - center[1]];
                let q = inv.apply(rel);
                let s = 1.0 / q[0].hypot(q[1]);
                vertices[m] = [center[0] + s * rel[0], center[1] + s * rel[1]];
            }
        }
        Mesh {
            vertices,
            triangles,
            boundary_edges,
            level: self.level + 1,
            boundary: self.boundary,
        }
    }

    /// JSON dump of vertices, triangles and tagged boundary edges.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mesh serializes")
    }
}
