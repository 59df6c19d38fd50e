//! Piecewise-linear assembly of the magnetic form
//!
//! ```text
//! Q[u, v] = ∫ ((iħ∇ + F) u) · conj((iħ∇ + F) v) dx  (+ σ ∫_∂Ω u v̄ ds for Robin)
//! ```
//!
//! with a constant field `β` generated by one of three linear potentials.
//! Entries are ordered so that `x† A x = Q[u, u]` for `u = Σ x_j φ_j`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg2::{Mat2, Vec2};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeKind {
    /// `F(x) = (β/2)(−x₂, x₁)`
    Symmetric,
    /// `F(x) = β(0, x₁)`
    LandauY,
    /// `F(x) = β(−x₂, 0)`
    LandauX,
}

impl GaugeKind {
    pub const ALL: [GaugeKind; 3] = [GaugeKind::Symmetric, GaugeKind::LandauY, GaugeKind::LandauX];

    /// `G` with `F(x) = β G x` (F as a column).
    pub fn coefficients(self) -> Mat2 {
        match self {
            GaugeKind::Symmetric => Mat2::new(0.0, -0.5, 0.5, 0.0),
            GaugeKind::LandauY => Mat2::new(0.0, 0.0, 1.0, 0.0),
            GaugeKind::LandauX => Mat2::new(0.0, -1.0, 0.0, 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GaugeKind::Symmetric => "symmetric",
            GaugeKind::LandauY => "landau-y",
            GaugeKind::LandauX => "landau-x",
        }
    }
}

/// Linear vector potential `F(x) = β G (x − origin)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaugeChoice {
    pub kind: GaugeKind,
    pub beta: f64,
    pub origin: Vec2,
}

impl GaugeChoice {
    pub fn new(kind: GaugeKind, beta: f64) -> Self {
        GaugeChoice {
            kind,
            beta,
            origin: [0.0, 0.0],
        }
    }

    pub fn symmetric(beta: f64) -> Self {
        Self::new(GaugeKind::Symmetric, beta)
    }

    pub fn with_origin(self, origin: Vec2) -> Self {
        GaugeChoice { origin, ..self }
    }

    pub fn potential(&self, x: Vec2) -> Vec2 {
        let g = self.kind.coefficients();
        let f = g.apply([x[0] - self.origin[0], x[1] - self.origin[1]]);
        [self.beta * f[0], self.beta * f[1]]
    }

    /// `∂₁F₂ − ∂₂F₁`, read off the coefficient matrix.
    pub fn curl(&self) -> f64 {
        let g = self.kind.coefficients();
        self.beta * (g.get(1, 0) - g.get(0, 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Robin(f64),
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Robin(_) => "robin",
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            BoundaryCondition::Robin(s) => *s,
            _ => 0.0,
        }
    }

    /// The same condition with the Robin parameter replaced.
    pub fn with_sigma(&self, sigma: f64) -> Self {
        match self {
            BoundaryCondition::Robin(_) => BoundaryCondition::Robin(sigma),
            other => *other,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Robin(s) => write!(f, "robin({s})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Vertex ↔ unknown numbering; Dirichlet drops boundary vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    vertex_to_dof: Vec<Option<usize>>,
    dof_to_vertex: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &Mesh, bc: &BoundaryCondition) -> Self {
        let on_boundary = mesh.is_boundary_vertex();
        let mut vertex_to_dof = vec![None; mesh.vertices().len()];
        let mut dof_to_vertex = Vec::new();
        for (v, slot) in vertex_to_dof.iter_mut().enumerate() {
            if matches!(bc, BoundaryCondition::Dirichlet) && on_boundary[v] {
                continue;
            }
            *slot = Some(dof_to_vertex.len());
            dof_to_vertex.push(v);
        }
        DofMap {
            vertex_to_dof,
            dof_to_vertex,
        }
    }

    pub fn len(&self) -> usize {
        self.dof_to_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof_to_vertex.is_empty()
    }

    pub fn dof(&self, vertex: usize) -> Option<usize> {
        self.vertex_to_dof[vertex]
    }

    pub fn vertex(&self, dof: usize) -> usize {
        self.dof_to_vertex[dof]
    }

    /// Expands a dof vector to all vertices (zero on eliminated ones).
    pub fn to_vertex_values(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.vertex_to_dof
            .iter()
            .map(|d| d.map(|k| x[k]).unwrap_or_default())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorConfig {
    pub hbar: f64,
    pub gauge: GaugeChoice,
    pub bc: BoundaryCondition,
    pub mesh_level: u32,
    pub vertices: usize,
}

#[derive(Clone, Debug)]
pub struct MagneticOperator {
    pub stiffness: CsrMatrix<Complex64>,
    pub mass: CsrMatrix<f64>,
    pub dof_map: DofMap,
    pub config: OperatorConfig,
}

impl MagneticOperator {
    pub fn dofs(&self) -> usize {
        self.dof_map.len()
    }
}

/// Degree-5, 7-point symmetric rule on the reference triangle:
/// barycentric coordinates and weights summing to one.
fn quadrature() -> [([f64; 3], f64); 7] {
    let s15 = 15f64.sqrt();
    let a = (6.0 - s15) / 21.0;
    let b = (6.0 + s15) / 21.0;
    let wa = (155.0 - s15) / 1200.0;
    let wb = (155.0 + s15) / 1200.0;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 9.0 / 40.0),
        ([a, a, 1.0 - 2.0 * a], wa),
        ([a, 1.0 - 2.0 * a, a], wa),
        ([1.0 - 2.0 * a, a, a], wa),
        ([b, b, 1.0 - 2.0 * b], wb),
        ([b, 1.0 - 2.0 * b, b], wb),
        ([1.0 - 2.0 * b, b, b], wb),
    ]
}

struct Element {
    points: [Vec2; 3],
    area: f64,
    grads: [Vec2; 3],
}

impl Element {
    fn new(mesh: &Mesh, t: &[usize; 3]) -> Self {
        let p = t.map(|v| mesh.vertices()[v]);
        let area = mesh.triangle_area(t);
        let grads = std::array::from_fn(|i| {
            let pj = p[(i + 1) % 3];
            let pk = p[(i + 2) % 3];
            [(pj[1] - pk[1]) / (2.0 * area), (pk[0] - pj[0]) / (2.0 * area)]
        });
        Element {
            points: p,
            area,
            grads,
        }
    }

    fn point(&self, bary: &[f64; 3]) -> Vec2 {
        let p = &self.points;
        [
            bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
            bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
        ]
    }
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn sparsity(mesh: &Mesh, dofs: &DofMap) -> Vec<Vec<usize>> {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); dofs.len()];
    for t in mesh.triangles() {
        for &a in t {
            let Some(i) = dofs.dof(a) else { continue };
            for &b in t {
                if let Some(j) = dofs.dof(b) {
                    rows[i].push(j);
                }
            }
        }
    }
    for r in &mut rows {
        r.sort_unstable();
        r.dedup();
    }
    rows
}

fn validate(mesh: &Mesh, hbar: f64, bc: &BoundaryCondition) -> Result<DofMap> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidPlanck(hbar));
    }
    if let BoundaryCondition::Robin(s) = bc {
        if !(*s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("Robin parameter must be non-negative, got {s}")));
        }
    }
    let dofs = DofMap::new(mesh, bc);
    if dofs.is_empty() {
        return Err(Error::MeshTooCoarse);
    }
    Ok(dofs)
}

/// Scatter a 3×3 element matrix into the global pattern.
fn scatter<T: Copy + Default + std::ops::AddAssign>(
    global: &mut CsrMatrix<T>,
    dofs: &DofMap,
    t: &[usize; 3],
    local: &[[T; 3]; 3],
) {
    for a in 0..3 {
        let Some(i) = dofs.dof(t[a]) else { continue };
        for b in 0..3 {
            if let Some(j) = dofs.dof(t[b]) {
                global.add_at(i, j, local[a][b]);
            }
        }
    }
}

fn assemble_mass(mesh: &Mesh, dofs: &DofMap, pattern: &[Vec<usize>]) -> CsrMatrix<f64> {
    let mut mass = CsrMatrix::from_pattern(pattern);
    for t in mesh.triangles() {
        let area = mesh.triangle_area(t);
        let local = std::array::from_fn(|a| std::array::from_fn(|b| if a == b { area / 6.0 } else { area / 12.0 }));
        scatter(&mut mass, dofs, t, &local);
    }
    mass
}

/// `σ ∫_∂Ω u v̄ ds` on each boundary edge, exact for linear traces.
fn add_robin(stiffness: &mut CsrMatrix<Complex64>, mesh: &Mesh, dofs: &DofMap, sigma: f64) {
    if sigma == 0.0 {
        return;
    }
    for e in mesh.boundary_edges() {
        let [a, b] = e.vertices;
        let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = (p[0] - q[0]).hypot(p[1] - q[1]);
        let diag = Complex64::new(sigma * len / 3.0, 0.0);
        let off = Complex64::new(sigma * len / 6.0, 0.0);
        let (Some(i), Some(j)) = (dofs.dof(a), dofs.dof(b)) else {
            continue;
        };
        stiffness.add_at(i, i, diag);
        stiffness.add_at(j, j, diag);
        stiffness.add_at(i, j, off);
        stiffness.add_at(j, i, off);
    }
}

/// Assembles stiffness and mass matrices for the given gauge and boundary
/// condition.
pub fn assemble(mesh: &Mesh, gauge: &GaugeChoice, hbar: f64, bc: &BoundaryCondition) -> Result<MagneticOperator> {
    let dofs = validate(mesh, hbar, bc)?;
    let pattern = sparsity(mesh, &dofs);
    let mut stiffness = CsrMatrix::<Complex64>::from_pattern(&pattern);
    let rule = quadrature();
    for t in mesh.triangles() {
        let el = Element::new(mesh, t);
        let fields: Vec<(Vec2, f64, &[f64; 3])> = rule
            .iter()
            .map(|(bary, w)| (gauge.potential(el.point(bary)), *w, bary))
            .collect();
        let mut local = [[Complex64::default(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let kinetic = hbar * hbar * dot(el.grads[i], el.grads[j]);
                let mut cross = 0.0;
                let mut potential = 0.0;
                for (f, w, bary) in &fields {
                    cross += w * (bary[i] * dot(el.grads[j], *f) - bary[j] * dot(el.grads[i], *f));
                    potential += w * dot(*f, *f) * bary[i] * bary[j];
                }
                local[i][j] = Complex64::new(el.area * (kinetic + potential), el.area * hbar * cross);
            }
        }
        scatter(&mut stiffness, &dofs, t, &local);
    }
    add_robin(&mut stiffness, mesh, &dofs, bc.sigma());
    let mass = assemble_mass(mesh, &dofs, &pattern);
    Ok(MagneticOperator {
        stiffness,
        mass,
        dof_map: dofs,
        config: OperatorConfig {
            hbar,
            gauge: *gauge,
            bc: *bc,
            mesh_level: mesh.level(),
            vertices: mesh.vertices().len(),
        },
    })
}

/// The three pieces of the expanded square for the symmetric gauge about the
/// origin:
///
/// ```text
/// Q₁ = ħ² |∇u|²
/// Q₂ = 2ħβ Re{ i ū ∇u · Mx },   M = ½[[0, −1], [1, 0]]
/// Q₃ = (β²/4) |u|² |x|²
/// ```
#[derive(Clone, Debug)]
pub struct ExpandedParts {
    pub gradient: CsrMatrix<Complex64>,
    pub interaction: CsrMatrix<Complex64>,
    pub confinement: CsrMatrix<Complex64>,
}

pub fn assemble_expanded_parts(mesh: &Mesh, beta: f64, hbar: f64, bc: &BoundaryCondition) -> Result<(ExpandedParts, DofMap)> {
    let dofs = validate(mesh, hbar, bc)?;
    let pattern = sparsity(mesh, &dofs);
    let mut gradient = CsrMatrix::<Complex64>::from_pattern(&pattern);
    let mut interaction = gradient.clone();
    let mut confinement = gradient.clone();
    let half_rot = Mat2::J.scale(0.5);
    let rule = quadrature();
    for t in mesh.triangles() {
        let el = Element::new(mesh, t);
        let q1: [[Complex64; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| Complex64::new(hbar * hbar * el.area * dot(el.grads[i], el.grads[j]), 0.0))
        });
        let mut q2 = [[Complex64::default(); 3]; 3];
        let mut q3 = [[Complex64::default(); 3]; 3];
        for (bary, w) in &rule {
            let x = el.point(bary);
            let mx = half_rot.apply(x);
            let r2 = dot(x, x);
            for i in 0..3 {
                for j in 0..3 {
                    // i ū ∇u·Mx contributes i φ_i (∇φ_j·Mx); take the Hermitian part
                    let a = bary[i] * dot(el.grads[j], mx);
                    let b = bary[j] * dot(el.grads[i], mx);
                    q2[i][j] += Complex64::new(0.0, w * hbar * beta * el.area * (a - b));
                    q3[i][j] += Complex64::new(0.25 * beta * beta * w * el.area * r2 * bary[i] * bary[j], 0.0);
                }
            }
        }
        scatter(&mut gradient, &dofs, t, &q1);
        scatter(&mut interaction, &dofs, t, &q2);
        scatter(&mut confinement, &dofs, t, &q3);
    }
    Ok((
        ExpandedParts {
            gradient,
            interaction,
            confinement,
        },
        dofs,
    ))
}

/// Symmetric-gauge operator assembled as `Q₁ + Q₂ + Q₃` (plus the Robin
/// boundary term).
pub fn assemble_expanded(mesh: &Mesh, beta: f64, hbar: f64, bc: &BoundaryCondition) -> Result<MagneticOperator> {
    let (parts, dofs) = assemble_expanded_parts(mesh, beta, hbar, bc)?;
    let mut stiffness = parts
        .gradient
        .add_same_pattern(&parts.interaction)
        .add_same_pattern(&parts.confinement);
    add_robin(&mut stiffness, mesh, &dofs, bc.sigma());
    let pattern = sparsity(mesh, &dofs);
    let mass = assemble_mass(mesh, &dofs, &pattern);
    Ok(MagneticOperator {
        stiffness,
        mass,
        dof_map: dofs,
        config: OperatorConfig {
            hbar,
            gauge: GaugeChoice::symmetric(beta),
            bc: *bc,
            mesh_level: mesh.level(),
            vertices: mesh.vertices().len(),
        },
    })
}

/// `(u† A u) / (u† M u)`.
pub fn rayleigh_quotient(op: &MagneticOperator, u: &[Complex64]) -> Result<f64> {
    assert_eq!(u.len(), op.dofs(), "trial vector length must match the dof count");
    let denom = op.mass.quadratic_form(u);
    if !(denom > 0.0) {
        return Err(Error::ZeroTrialFunction);
    }
    Ok(op.stiffness.quadratic_form(u).re / denom)
}
