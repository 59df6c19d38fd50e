//! Numerical checks of the eigenvalue-sum inequality under linear maps, the
//! flux-normalized shape functional, and the exact symmetries of the
//! discrete operator.
//!
//! Every comparison is run on the domain moved to its centroid, with the
//! symmetric gauge centred there.

use std::f64::consts::PI;

use serde::Serialize;

use crate::eigensolve::lowest_eigenvalues;
use crate::error::{Error, Result};
use crate::geometry::{self, Domain, Shape, TransformedParameters};
use crate::linalg2::Mat2;
use crate::mesh::{map_mesh, refine, translate_mesh, triangulate, Mesh};
use crate::operator::{assemble, BoundaryCondition, GaugeChoice, GaugeKind};

/// Default refinement level: 5 for polygon seeds, 4 for the much finer
/// 256-sided ellipse seed.
pub fn default_level(d: &Domain) -> u32 {
    if d.is_polygon() {
        5
    } else {
        4
    }
}

/// Level used for an ellipse compared against polygons meshed at `level`.
fn ellipse_level(level: u32) -> u32 {
    level.saturating_sub(1).max(1)
}

/// Meshes at `level − 1` and `level` of the centred domain.
fn mesh_pair(d: &Domain, level: u32) -> Result<(Mesh, Mesh)> {
    if level == 0 {
        return Err(Error::InvalidParameter(
            "level must be at least 1 so that an error budget can be formed".into(),
        ));
    }
    let coarse = refine(&triangulate(&d.centered())?, level - 1);
    let fine = refine(&coarse, 1);
    Ok((coarse, fine))
}

fn lowest(mesh: &Mesh, gauge: &GaugeChoice, hbar: f64, bc: &BoundaryCondition, n: usize) -> Result<Vec<f64>> {
    let op = assemble(mesh, gauge, hbar, bc)?;
    Ok(lowest_eigenvalues(&op, n)?.eigenvalues)
}

/// Lowest eigenvalues of one problem on two nested meshes.
#[derive(Clone, Debug, Serialize)]
pub struct LevelSpectra {
    pub fine: Vec<f64>,
    pub coarse: Vec<f64>,
}

impl LevelSpectra {
    fn compute(meshes: &(Mesh, Mesh), gauge: &GaugeChoice, hbar: f64, bc: &BoundaryCondition, n: usize) -> Result<Self> {
        Ok(LevelSpectra {
            coarse: lowest(&meshes.0, gauge, hbar, bc, n)?,
            fine: lowest(&meshes.1, gauge, hbar, bc, n)?,
        })
    }

    pub fn sum(&self, n: usize) -> f64 {
        self.fine[..n].iter().sum()
    }

    /// `Σ_{j≤n} |λ_j(fine) − λ_j(coarse)|`.
    pub fn budget(&self, n: usize) -> f64 {
        self.fine[..n]
            .iter()
            .zip(&self.coarse)
            .map(|(f, c)| (f - c).abs())
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictClass {
    /// Margin exceeds the error budget.
    Strict,
    /// Margin is within the error budget of zero.
    WithinBudget,
    Violated,
}

impl VerdictClass {
    pub fn name(self) -> &'static str {
        match self {
            VerdictClass::Strict => "strict",
            VerdictClass::WithinBudget => "within-budget",
            VerdictClass::Violated => "violated",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityVerdict {
    pub n: usize,
    pub level: u32,
    pub map: Mat2,
    /// Ratio of the larger to the smaller singular value of the map.
    pub singular_value_ratio: f64,
    pub transformed: TransformedParameters,
    /// Eigenvalue sum on the image domain with transformed parameters.
    pub lhs: f64,
    /// Eigenvalue sum on the symmetric domain.
    pub rhs: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub holds: bool,
    pub class: VerdictClass,
    pub lhs_eigenvalues: Vec<f64>,
    pub rhs_eigenvalues: Vec<f64>,
}

impl InequalityVerdict {
    fn new(n: usize, level: u32, t: &Mat2, transformed: TransformedParameters, lhs: &LevelSpectra, rhs: &LevelSpectra) -> Self {
        let (s1, s2) = t.singular_values();
        let (l, r) = (lhs.sum(n), rhs.sum(n));
        let margin = r - l;
        let error_budget = lhs.budget(n) + rhs.budget(n);
        let class = if margin > error_budget {
            VerdictClass::Strict
        } else if margin + error_budget >= 0.0 {
            VerdictClass::WithinBudget
        } else {
            VerdictClass::Violated
        };
        InequalityVerdict {
            n,
            level,
            map: *t,
            singular_value_ratio: s1.max(s2) / s1.min(s2),
            transformed,
            lhs: l,
            rhs: r,
            margin,
            error_budget,
            holds: class != VerdictClass::Violated,
            class,
            lhs_eigenvalues: lhs.fine[..n].to_vec(),
            rhs_eigenvalues: rhs.fine[..n].to_vec(),
        }
    }

    pub fn is_strict(&self) -> bool {
        self.class == VerdictClass::Strict
    }
}

struct Reference {
    meshes: (Mesh, Mesh),
    spectra: LevelSpectra,
}

fn reference(d: &Domain, hbar: f64, beta: f64, bc: &BoundaryCondition, n: usize, level: u32) -> Result<Reference> {
    if !d.has_sufficient_symmetry() {
        return Err(Error::SymmetryRequired);
    }
    let meshes = mesh_pair(d, level)?;
    let spectra = LevelSpectra::compute(&meshes, &GaugeChoice::symmetric(beta), hbar, bc, n)?;
    Ok(Reference { meshes, spectra })
}

fn image_spectra(
    reference: &Reference,
    t: &Mat2,
    hbar: f64,
    beta: f64,
    bc: &BoundaryCondition,
    n: usize,
) -> Result<(TransformedParameters, LevelSpectra)> {
    let params = geometry::transformed_parameters(t, hbar, beta, bc.sigma())?;
    let meshes = (map_mesh(&reference.meshes.0, t)?, map_mesh(&reference.meshes.1, t)?);
    let spectra = LevelSpectra::compute(
        &meshes,
        &GaugeChoice::symmetric(params.beta_t),
        params.hbar_t,
        &bc.with_sigma(params.sigma_t),
        n,
    )?;
    Ok((params, spectra))
}

/// Compares `Σ_{j≤n} λ_j(T(D), ħ_t, β_t[, σ_t])` with `Σ_{j≤n} λ_j(D, ħ, β[, σ])`.
///
/// The image mesh is the linear image of the mesh of `D`, so both sides are
/// discretized consistently. The error budget is the change of both sums
/// between `level − 1` and `level`.
pub fn theorem_check(
    d: &Domain,
    t: &Mat2,
    hbar: f64,
    beta: f64,
    bc: &BoundaryCondition,
    n: usize,
    level: u32,
) -> Result<InequalityVerdict> {
    Ok(theorem_checks(d, t, hbar, beta, bc, n, level)?.pop().expect("n >= 1"))
}

/// Verdicts for every `n' = 1..=n` from a single pair of solves per side.
pub fn theorem_checks(
    d: &Domain,
    t: &Mat2,
    hbar: f64,
    beta: f64,
    bc: &BoundaryCondition,
    n: usize,
    level: u32,
) -> Result<Vec<InequalityVerdict>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let reference = reference(d, hbar, beta, bc, n, level)?;
    let (params, image) = image_spectra(&reference, t, hbar, beta, bc, n)?;
    Ok((1..=n)
        .map(|k| InequalityVerdict::new(k, level, t, params, &image, &reference.spectra))
        .collect())
}

/// Named seed domains of the regression grid.
pub fn regression_domains() -> Vec<(&'static str, Domain)> {
    vec![
        ("triangle", Domain::equilateral_triangle()),
        ("square", Domain::unit_square()),
        ("hexagon", Domain::regular_polygon(6, 1.0).expect("hexagon")),
        ("disk", Domain::disk(1.0).expect("disk")),
    ]
}

/// Named maps of the regression grid: stretches `diag(t, 1/t)` and shears.
pub fn regression_maps() -> Vec<(String, Mat2)> {
    let mut maps: Vec<(String, Mat2)> = [1.2, 1.5, 2.0]
        .iter()
        .map(|&t| (format!("stretch-{t}"), Mat2::diag(t, 1.0 / t)))
        .collect();
    maps.extend([0.5, 1.0].iter().map(|&s| (format!("shear-{s}"), Mat2::shear(s))));
    maps
}

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub domains: Vec<(String, Domain)>,
    pub maps: Vec<(String, Mat2)>,
    pub hbar: f64,
    pub beta: f64,
    pub bcs: Vec<BoundaryCondition>,
    pub n_max: usize,
    /// `None` picks [`default_level`] per domain.
    pub level: Option<u32>,
}

impl GridSpec {
    pub fn regression(hbar: f64, beta: f64) -> Self {
        GridSpec {
            domains: regression_domains()
                .into_iter()
                .map(|(name, d)| (name.to_string(), d))
                .collect(),
            maps: regression_maps(),
            hbar,
            beta,
            bcs: vec![
                BoundaryCondition::Dirichlet,
                BoundaryCondition::Neumann,
                BoundaryCondition::Robin(1.0),
            ],
            n_max: 3,
            level: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub domain: String,
    pub map: String,
    pub bc: BoundaryCondition,
    pub verdict: InequalityVerdict,
}

/// Runs [`theorem_checks`] over a grid, solving each reference problem once.
pub fn theorem_grid(spec: &GridSpec) -> Result<Vec<GridRow>> {
    let mut rows = Vec::new();
    for (name, d) in &spec.domains {
        let level = spec.level.unwrap_or_else(|| default_level(d));
        for bc in &spec.bcs {
            let reference = reference(d, spec.hbar, spec.beta, bc, spec.n_max, level)?;
            for (map_name, t) in &spec.maps {
                let (params, image) = image_spectra(&reference, t, spec.hbar, spec.beta, bc, spec.n_max)?;
                for n in 1..=spec.n_max {
                    rows.push(GridRow {
                        domain: name.clone(),
                        map: map_name.clone(),
                        bc: *bc,
                        verdict: InequalityVerdict::new(n, level, t, params, &image, &reference.spectra),
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn stretch_family(t: f64) -> Mat2 {
    Mat2::diag(t, 1.0 / t)
}

pub fn shear_family(s: f64) -> Mat2 {
    Mat2::shear(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanPoint {
    pub parameter: f64,
    pub area: f64,
    pub inertia: f64,
    pub eigenvalues: Vec<f64>,
    pub functional: f64,
    pub error_budget: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyScan {
    pub points: Vec<ScanPoint>,
    pub identity_parameter: f64,
    pub argmax_parameter: f64,
    /// The functional does not increase, beyond the error budgets of the
    /// two points compared, when moving away from the identity parameter.
    pub monotone: bool,
}

impl FamilyScan {
    pub fn argmax_at_identity(&self) -> bool {
        self.argmax_parameter == self.identity_parameter
    }
}

/// Evaluates `(Σ_{j≤n} λ_j(Ω, ħ, flux/A)) · A³/I` along `Ω = T(t) D`.
///
/// `family(identity_parameter)` must be the identity map. Area and moment of
/// inertia are the analytic values of each image domain.
#[allow(clippy::too_many_arguments)]
pub fn corollary_scan(
    d: &Domain,
    family: &dyn Fn(f64) -> Mat2,
    grid: &[f64],
    identity_parameter: f64,
    hbar: f64,
    flux: f64,
    bc: &BoundaryCondition,
    n: usize,
    level: u32,
) -> Result<FamilyScan> {
    if !d.has_sufficient_symmetry() {
        return Err(Error::SymmetryRequired);
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("scan grid must be non-empty and strictly increasing".into()));
    }
    let Some(identity_index) = grid.iter().position(|&t| t == identity_parameter) else {
        return Err(Error::InvalidParameter("scan grid must contain the identity parameter".into()));
    };
    if family(identity_parameter).max_abs_diff(&Mat2::IDENTITY) > 1e-14 {
        return Err(Error::InvalidParameter("family is not the identity at the identity parameter".into()));
    }
    let centered = d.centered();
    let meshes = mesh_pair(&centered, level)?;
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let map = family(t);
        let image = geometry::apply_linear_map(&centered, &map)?;
        let area = geometry::area(&image);
        let inertia = geometry::moment_of_inertia(&image);
        let image_meshes = (map_mesh(&meshes.0, &map)?, map_mesh(&meshes.1, &map)?);
        let spectra = LevelSpectra::compute(&image_meshes, &GaugeChoice::symmetric(flux / area), hbar, bc, n)?;
        let shape = area.powi(3) / inertia;
        points.push(ScanPoint {
            parameter: t,
            area,
            inertia,
            eigenvalues: spectra.fine.clone(),
            functional: spectra.sum(n) * shape,
            error_budget: spectra.budget(n) * shape,
        });
    }
    let argmax = points
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.functional > points[best].functional { i } else { best });
    let step_ok = |a: &ScanPoint, b: &ScanPoint| b.functional <= a.functional + a.error_budget + b.error_budget;
    let right = points[identity_index..].windows(2).all(|w| step_ok(&w[0], &w[1]));
    let left = points[..=identity_index].windows(2).all(|w| step_ok(&w[1], &w[0]));
    Ok(FamilyScan {
        argmax_parameter: points[argmax].parameter,
        identity_parameter,
        monotone: left && right,
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceCheck {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InvarianceReport {
    pub checks: Vec<InvarianceCheck>,
}

impl InvarianceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InvarianceCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvarianceOptions {
    /// Replaces every check tolerance when set.
    pub tolerance: Option<f64>,
    pub n: usize,
    pub dilation: f64,
    pub translation: [f64; 2],
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        InvarianceOptions {
            tolerance: None,
            n: 3,
            dilation: 2.0,
            translation: [0.7, -1.3],
        }
    }
}

/// `max_j |a_j − b_j| / max_j |a_j|`.
pub fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

pub fn invariance_suite(d: &Domain, hbar: f64, beta: f64, bc: &BoundaryCondition, level: u32) -> Result<InvarianceReport> {
    invariance_suite_with(d, hbar, beta, bc, level, &InvarianceOptions::default())
}

pub fn invariance_suite_with(
    d: &Domain,
    hbar: f64,
    beta: f64,
    bc: &BoundaryCondition,
    level: u32,
    opts: &InvarianceOptions,
) -> Result<InvarianceReport> {
    let tol = |default: f64| opts.tolerance.unwrap_or(default);
    let n = opts.n;
    let centered = d.centered();
    let seed = triangulate(&centered)?;
    let mesh = refine(&seed, level);
    let symmetric = GaugeChoice::symmetric(beta);
    let base_op = assemble(&mesh, &symmetric, hbar, bc)?;
    let base = lowest_eigenvalues(&base_op, n)?.eigenvalues;
    let mut report = InvarianceReport::default();
    let exact = |name: &'static str, value: f64, note: String| {
        let t = tol(1e-10);
        InvarianceCheck {
            name,
            value,
            tolerance: t,
            passed: value <= t,
            note,
        }
    };

    // gauge: λ₁ spread across gauges over three levels
    let first = level.saturating_sub(2);
    let mut spreads = Vec::new();
    for l in first..=level {
        let m = refine(&seed, l);
        let values = GaugeKind::ALL
            .iter()
            .map(|&k| Ok(lowest(&m, &GaugeChoice::new(k, beta), hbar, bc, 1)?[0]))
            .collect::<Result<Vec<f64>>>()?;
        let hi = values.iter().copied().fold(f64::MIN, f64::max);
        let lo = values.iter().copied().fold(f64::MAX, f64::min);
        spreads.push((hi - lo) / hi.abs().max(f64::MIN_POSITIVE));
    }
    let final_spread = *spreads.last().expect("one level");
    let shrinking = spreads.windows(2).all(|w| w[1] < w[0] || w[1] <= 1e-14);
    let gauge_tol = tol(1e-2);
    let spread_text: Vec<String> = spreads.iter().map(|s| format!("{s:.3e}")).collect();

    // sign: matrices conjugate, spectra equal
    let minus_op = assemble(&mesh, &GaugeChoice::symmetric(-beta), hbar, bc)?;
    let conj_dev = base_op
        .stiffness
        .triplets()
        .zip(minus_op.stiffness.triplets())
        .map(|((_, _, a), (_, _, b))| (a - b.conj()).norm())
        .fold(0.0, f64::max)
        / base_op.stiffness.max_abs();
    let minus = lowest_eigenvalues(&minus_op, n)?.eigenvalues;

    // rotation
    let angle = match centered.symmetry_order() {
        Some(k) if k >= 1 => 2.0 * PI / k as f64,
        _ => 1.0,
    };
    let rotated = lowest(&map_mesh(&mesh, &Mat2::rotation(angle))?, &symmetric, hbar, bc, n)?;

    // reflection, in the Landau gauge along x₂
    let landau = lowest(&mesh, &GaugeChoice::new(GaugeKind::LandauY, beta), hbar, bc, n)?;
    let mirrored = map_mesh(&mesh, &Mat2::diag(-1.0, 1.0))?;
    let reflected = lowest(&mirrored, &GaugeChoice::new(GaugeKind::LandauY, -beta), hbar, bc, n)?;
    let reflected_same = lowest(&mirrored, &GaugeChoice::new(GaugeKind::LandauY, beta), hbar, bc, n)?;

    // translation of mesh and potential together
    let shift = opts.translation;
    let translated = lowest(&translate_mesh(&mesh, shift), &symmetric.with_origin(shift), hbar, bc, n)?;

    // dilation
    let r = opts.dilation;
    let dilated = lowest(
        &map_mesh(&mesh, &Mat2::diag(r, r))?,
        &GaugeChoice::symmetric(beta / r),
        r * hbar,
        &bc.with_sigma(r * bc.sigma()),
        n,
    )?;

    report.checks.push(InvarianceCheck {
        name: "gauge",
        value: final_spread,
        tolerance: gauge_tol,
        passed: shrinking && final_spread <= gauge_tol,
        note: format!("relative λ₁ spread over levels {first}..={level}: {}", spread_text.join(", ")),
    });
    report.checks.push(exact(
        "sign",
        conj_dev.max(spectral_distance(&base, &minus)),
        "β ↦ −β conjugates the stiffness matrix".into(),
    ));
    report.checks.push(exact("rotation", spectral_distance(&base, &rotated), format!("rotation by {angle:.6} rad")));
    report.checks.push(exact(
        "reflection",
        spectral_distance(&landau, &reflected).max(spectral_distance(&landau, &reflected_same)),
        "mirror x₁ ↦ −x₁ with β ↦ −β, then sign symmetry".into(),
    ));
    report.checks.push(exact(
        "translation",
        spectral_distance(&base, &translated),
        format!("offset ({}, {})", shift[0], shift[1]),
    ));
    report.checks.push(exact(
        "dilation",
        spectral_distance(&base, &dilated),
        format!("r = {r}: ħ ↦ rħ, β ↦ β/r, σ ↦ rσ"),
    ));

    // positivity across boundary conditions
    let sigma = if bc.sigma() > 0.0 { bc.sigma() } else { 1.0 };
    let dirichlet = lowest(&mesh, &symmetric, hbar, &BoundaryCondition::Dirichlet, 1)?[0];
    let robin = lowest(&mesh, &symmetric, hbar, &BoundaryCondition::Robin(sigma), 1)?[0];
    let neumann = lowest(&mesh, &symmetric, hbar, &BoundaryCondition::Neumann, 1)?[0];
    let zero_tol = tol(1e-9);
    let (neumann_ok, neumann_note) = if beta == 0.0 {
        (
            neumann.abs() <= zero_tol,
            format!("β = 0: μ₁ = {neumann:.3e} expected zero"),
        )
    } else {
        (neumann > 1e-6, format!("β ≠ 0: μ₁ = {neumann:.6e} expected positive"))
    };
    report.checks.push(InvarianceCheck {
        name: "positivity",
        value: dirichlet.min(robin),
        tolerance: zero_tol,
        passed: dirichlet > 0.0 && robin > 0.0 && neumann_ok,
        note: format!("λ₁ = {dirichlet:.6e}, ρ₁ = {robin:.6e} (σ = {sigma}); {neumann_note}"),
    });
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaberKrahnRow {
    pub label: String,
    pub area: f64,
    pub lambda1: f64,
    /// `λ₁ · A`.
    pub scaled: f64,
    pub error_budget: f64,
    pub disk_scaled: f64,
    pub disk_error_budget: f64,
    pub disk_minimal: bool,
    /// `λ₁ A ≥ ħ² j₀,₁² π` (zero flux only).
    pub above_bessel_bound: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaberKrahnReport {
    pub flux: f64,
    pub bessel_bound: f64,
    pub rows: Vec<FaberKrahnRow>,
}

impl FaberKrahnReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.disk_minimal && r.above_bessel_bound.unwrap_or(true))
    }
}

fn scaled_ground_state(d: &Domain, hbar: f64, flux: f64, level: u32) -> Result<(f64, f64, f64)> {
    let area = geometry::area(d);
    let meshes = mesh_pair(d, level)?;
    let spectra = LevelSpectra::compute(
        &meshes,
        &GaugeChoice::symmetric(flux / area),
        hbar,
        &BoundaryCondition::Dirichlet,
        1,
    )?;
    Ok((area, spectra.fine[0], spectra.budget(1)))
}

/// Dirichlet `λ₁(Ω, ħ, flux/A)·A` of each domain against the disk of the same
/// area. Polygons use `level`; ellipses, including the reference disk, use
/// `level − 1`.
pub fn faber_krahn_check(domains: &[(String, Domain)], hbar: f64, flux: f64, level: u32) -> Result<FaberKrahnReport> {
    let bessel_bound = hbar * hbar * bessel_j0_first_zero().powi(2) * PI;
    let mut rows = Vec::with_capacity(domains.len());
    for (label, d) in domains {
        let own_level = if d.is_polygon() { level } else { ellipse_level(level) };
        let (area, lambda1, budget) = scaled_ground_state(d, hbar, flux, own_level)?;
        let disk = Domain::disk((area / PI).sqrt())?;
        let (disk_area, disk_lambda, disk_budget) = scaled_ground_state(&disk, hbar, flux, ellipse_level(level))?;
        let scaled = lambda1 * area;
        let disk_scaled = disk_lambda * disk_area;
        let error_budget = budget * area;
        let disk_error_budget = disk_budget * disk_area;
        rows.push(FaberKrahnRow {
            label: label.clone(),
            area,
            lambda1,
            scaled,
            error_budget,
            disk_scaled,
            disk_error_budget,
            disk_minimal: disk_scaled <= scaled + error_budget + disk_error_budget,
            above_bessel_bound: (flux == 0.0).then(|| scaled >= bessel_bound - error_budget),
        });
    }
    Ok(FaberKrahnReport {
        flux,
        bessel_bound,
        rows,
    })
}

/// First positive zero of the Bessel function `J₀`.
pub fn bessel_j0_first_zero() -> f64 {
    // power series for J₀ and J₁ converge quickly near x ≈ 2.4
    let series = |x: f64| {
        let q = -(x * x) / 4.0;
        let (mut j0, mut j1) = (0.0, 0.0);
        let (mut t0, mut t1) = (1.0, x / 2.0);
        for k in 0..40 {
            j0 += t0;
            j1 += t1;
            let k = k as f64;
            t0 *= q / ((k + 1.0) * (k + 1.0));
            t1 *= q / ((k + 1.0) * (k + 2.0));
        }
        (j0, j1)
    };
    let mut x = 2.4;
    for _ in 0..50 {
        let (j0, j1) = series(x);
        let step = j0 / j1;
        x += step;
        if step.abs() < 1e-16 * x {
            break;
        }
    }
    x
}

/// Ellipse semi-axes and polygon side count, for reporting.
pub fn describe_domain(d: &Domain) -> String {
    match d.shape() {
        Shape::Polygon(v) => format!("polygon with {} vertices", v.len()),
        Shape::Ellipse { semi_axes, .. } => format!("ellipse with semi-axes {} and {}", semi_axes[0], semi_axes[1]),
    }
}
