//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use magsum::eigensolve::lowest_eigenvalues;
use magsum::geometry::{self, Domain};
use magsum::linalg2::{self, Mat2};
use magsum::mesh::{map_mesh, refine, triangulate, Mesh};
use magsum::operator::{assemble, BoundaryCondition, GaugeChoice, GaugeKind};
use magsum::verify::{
    self, corollary_scan, default_level, invariance_suite, regression_domains, regression_maps, shear_family,
    stretch_family, theorem_grid, GridSpec, VerdictClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = magsum::Result<(bool, String)>;

fn lowest(mesh: &Mesh, gauge: &GaugeChoice, hbar: f64, bc: &BoundaryCondition, n: usize) -> magsum::Result<Vec<f64>> {
    Ok(lowest_eigenvalues(&assemble(mesh, gauge, hbar, bc)?, n)?.eigenvalues)
}

fn mesh_at(d: &Domain, level: u32) -> magsum::Result<Mesh> {
    Ok(refine(&triangulate(&d.centered())?, level))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// First zero of J₀ from the integral representation
/// `J₀(x) = (1/π) ∫₀^π cos(x sin θ) dθ`, located by bisection.
fn bessel_zero_by_bisection() -> f64 {
    let j0 = |x: f64| {
        let steps = 2000;
        let h = PI / steps as f64;
        let f = |k: usize| (x * (k as f64 * h).sin()).cos();
        let inner: f64 = (1..steps).map(|k| if k % 2 == 1 { 4.0 * f(k) } else { 2.0 * f(k) }).sum();
        (f(0) + inner + f(steps)) * h / 3.0 / PI
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if j0(lo) * j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn frames() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let orders: Vec<usize> = (3..=12).collect();
    let report = linalg2::frame_identity_trials(&mut rng, 1000, &orders);
    let secs = start.elapsed().as_secs_f64();
    let dev = report.max_deviation();
    Ok((dev <= 1e-12, format!("1000 trials, N in 3..12, max deviation {dev:.2e} (tol 1e-12), {secs:.3} s")))
}

fn geometry_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut point = || [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
    let dist2 = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
    let mut worst_tri = 0.0f64;
    let mut worst_par = 0.0f64;
    let mut tri = 0;
    while tri < 100 {
        let (a, b, c) = (point(), point(), point());
        let Ok(d) = Domain::polygon(vec![a, b, c], None) else { continue };
        let area = geometry::area(&d);
        if area < 0.05 {
            continue;
        }
        let formula = (dist2(a, b) + dist2(b, c) + dist2(c, a)) * area / 36.0;
        worst_tri = worst_tri.max(rel(geometry::moment_of_inertia(&d), formula));
        tri += 1;
    }
    let mut par = 0;
    while par < 100 {
        let (a, b, c) = (point(), point(), point());
        let d4 = [a[0] + c[0] - b[0], a[1] + c[1] - b[1]];
        let Ok(d) = Domain::polygon(vec![a, b, c, d4], None) else { continue };
        let area = geometry::area(&d);
        if area < 0.05 {
            continue;
        }
        let formula = (dist2(a, b) + dist2(b, c)) * area / 12.0;
        worst_par = worst_par.max(rel(geometry::moment_of_inertia(&d), formula));
        par += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    let worst = worst_tri.max(worst_par);
    Ok((
        worst <= 1e-10,
        format!("100 triangles {worst_tri:.2e}, 100 parallelograms {worst_par:.2e} (tol 1e-10), {secs:.3} s"),
    ))
}

fn ratio_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let domains = [
        Domain::equilateral_triangle(),
        Domain::unit_square(),
        Domain::regular_polygon(6, 1.0)?,
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 50 {
        let t = Mat2(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        if t.det().abs() < 0.05 {
            continue;
        }
        let expected = 2.0 / t.inverse()?.hs_norm().powi(2);
        for d in &domains {
            worst = worst.max(geometry::functional_ratio_check(d, &t)? / expected);
        }
        count += 1;
    }
    Ok((worst <= 1e-10, format!("3 domains x 50 maps, max relative error {worst:.2e} (tol 1e-10)")))
}

fn benchmarks() -> Outcome {
    let one = GaugeChoice::symmetric(0.0);
    let dir = BoundaryCondition::Dirichlet;
    let start = Instant::now();
    let square = lowest(&mesh_at(&Domain::unit_square(), 5)?, &one, 1.0, &dir, 3)?;
    let square_secs = start.elapsed().as_secs_f64();
    let e1 = rel(square[0], 2.0 * PI * PI);
    let e3 = rel(square.iter().sum(), 12.0 * PI * PI);
    let j01 = bessel_zero_by_bisection();
    let disk = Domain::disk(1.0)?;
    let start = Instant::now();
    let disk_l1 = lowest(&mesh_at(&disk, default_level(&disk))?, &one, 1.0, &dir, 1)?[0];
    let disk_secs = start.elapsed().as_secs_f64();
    let ed = rel(disk_l1, j01 * j01);
    let mut mu = 0.0f64;
    for d in [Domain::unit_square(), disk.clone()] {
        let m = mesh_at(&d, default_level(&d))?;
        mu = mu.max(lowest(&m, &one, 1.0, &BoundaryCondition::Neumann, 1)?[0].abs());
    }
    let ok = e1 <= 0.01 && e3 <= 0.01 && ed <= 0.01 && mu <= 1e-9;
    Ok((
        ok,
        format!(
            "square λ₁ {:.6} ({:.2}%), Σ₃ {:.4} ({:.2}%) in {square_secs:.2} s; disk λ₁ {disk_l1:.6} vs j₀,₁² {:.6} ({:.2}%) in {disk_secs:.2} s; max |μ₁| {mu:.1e}",
            square[0],
            100.0 * e1,
            square.iter().sum::<f64>(),
            100.0 * e3,
            j01 * j01,
            100.0 * ed,
        ),
    ))
}

fn invariances() -> Outcome {
    let cases = [
        ("triangle", Domain::equilateral_triangle(), BoundaryCondition::Dirichlet),
        ("square", Domain::unit_square(), BoundaryCondition::Robin(1.0)),
        ("hexagon", Domain::regular_polygon(6, 1.0)?, BoundaryCondition::Neumann),
    ];
    let mut worst = 0.0f64;
    let mut all = true;
    for (_, d, bc) in &cases {
        let report = invariance_suite(d, 1.0, 1.0, bc, 4)?;
        for name in ["sign", "rotation", "translation", "dilation", "reflection"] {
            let check = report.get(name).expect("check present");
            worst = worst.max(check.value);
            all &= check.value <= 1e-10;
        }
    }
    Ok((
        all,
        format!("sign, rotation, reflection, translation, dilation on triangle/square/hexagon: max {worst:.2e} (tol 1e-10)"),
    ))
}

fn gauge_convergence() -> Outcome {
    let seed = triangulate(&Domain::equilateral_triangle().centered())?;
    let mut spreads = Vec::new();
    for level in 3..=5 {
        let m = refine(&seed, level);
        let values = GaugeKind::ALL
            .iter()
            .map(|&k| Ok(lowest(&m, &GaugeChoice::new(k, 2.0), 1.0, &BoundaryCondition::Dirichlet, 1)?[0]))
            .collect::<magsum::Result<Vec<f64>>>()?;
        let hi = values.iter().copied().fold(f64::MIN, f64::max);
        let lo = values.iter().copied().fold(f64::MAX, f64::min);
        spreads.push((hi - lo) / hi);
    }
    let decreasing = spreads.windows(2).all(|w| w[1] < w[0]);
    let ok = decreasing && spreads[2] <= 1e-2;
    let text: Vec<String> = spreads.iter().map(|s| format!("{s:.2e}")).collect();
    Ok((ok, format!("triangle ħ=1 β=2 spread at levels 3,4,5: {} (tol 1e-2)", text.join(", "))))
}

fn landau_bound() -> Outcome {
    let mut maps = vec![("identity".to_string(), Mat2::IDENTITY)];
    maps.extend(regression_maps());
    let mut runs = 0;
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for (_, d) in regression_domains() {
        let base = mesh_at(&d, if d.is_polygon() { 3 } else { 2 })?;
        for (_, t) in &maps {
            let m = map_mesh(&base, t)?;
            for hbar in [0.5, 1.0] {
                for beta in [0.0, 1.0, 5.0] {
                    let p = geometry::transformed_parameters(t, hbar, beta, 0.0)?;
                    let l1 = lowest(&m, &GaugeChoice::symmetric(p.beta_t), p.hbar_t, &BoundaryCondition::Dirichlet, 1)?[0];
                    let bound = p.hbar_t * p.beta_t.abs();
                    ok &= l1 >= bound;
                    worst = worst.min(l1 - bound);
                    runs += 1;
                }
            }
        }
    }
    Ok((ok, format!("{runs} Dirichlet runs, min λ₁ − ħ|β| = {worst:.4}")))
}

fn theorem_grid_check(grid: &[verify::GridRow]) -> Outcome {
    let violated = grid.iter().filter(|r| !r.verdict.holds).count();
    let strict_needed: Vec<_> = grid.iter().filter(|r| r.verdict.singular_value_ratio >= 1.5).collect();
    let not_strict: Vec<String> = strict_needed
        .iter()
        .filter(|r| !r.verdict.is_strict())
        .map(|r| format!("{}/{}/{}/n={}", r.domain, r.map, r.bc, r.verdict.n))
        .collect();
    let min_ratio = strict_needed
        .iter()
        .map(|r| r.verdict.margin / r.verdict.error_budget)
        .fold(f64::INFINITY, f64::min);
    let within = grid.iter().filter(|r| r.verdict.class == VerdictClass::WithinBudget).count();
    let ok = violated == 0 && not_strict.is_empty();
    let mut detail = format!(
        "{} verdicts at ħ=1 β=5: {violated} violated, {within} within budget; {} with ratio ≥ 1.5, min margin/budget {min_ratio:.2}",
        grid.len(),
        strict_needed.len()
    );
    if !not_strict.is_empty() {
        detail.push_str(&format!("; not strict: {}", not_strict.join(" ")));
    }
    Ok((ok, detail))
}

fn scans() -> Outcome {
    let grid: Vec<f64> = (0..=10).map(|k| 1.0 + k as f64 / 10.0).collect();
    let shear_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let dir = BoundaryCondition::Dirichlet;
    let square = Domain::unit_square();
    let disk = Domain::disk(1.0)?;
    let runs = [
        ("square stretch", corollary_scan(&square, &stretch_family, &grid, 1.0, 1.0, TAU, &dir, 1, 5)?),
        ("square shear", corollary_scan(&square, &shear_family, &shear_grid, 0.0, 1.0, TAU, &dir, 1, 5)?),
        ("disk stretch", corollary_scan(&disk, &stretch_family, &grid, 1.0, 1.0, TAU, &dir, 1, default_level(&disk))?),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, scan) in &runs {
        ok &= scan.argmax_at_identity() && scan.monotone;
        let first = scan.points.first().expect("points").functional;
        let last = scan.points.last().expect("points").functional;
        parts.push(format!(
            "{name}: argmax {} monotone {} ({first:.3} → {last:.3})",
            scan.argmax_parameter, scan.monotone
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn positivity(grid: &[verify::GridRow]) -> Outcome {
    let mut ok = true;
    let mut min_pos = f64::INFINITY;
    let mut min_mu1 = f64::INFINITY;
    let mut max_mu0 = 0.0f64;
    for (_, d) in regression_domains() {
        let m = mesh_at(&d, default_level(&d))?;
        for beta in [0.0, 1.0] {
            let g = GaugeChoice::symmetric(beta);
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Robin(1.0)] {
                let v = lowest(&m, &g, 1.0, &bc, 1)?[0];
                ok &= v > 0.0;
                min_pos = min_pos.min(v);
            }
            let mu = lowest(&m, &g, 1.0, &BoundaryCondition::Neumann, 1)?[0];
            if beta == 0.0 {
                ok &= mu.abs() <= 1e-9;
                max_mu0 = max_mu0.max(mu.abs());
            } else {
                ok &= mu > 1e-6;
                min_mu1 = min_mu1.min(mu);
            }
        }
    }
    for row in grid.iter().filter(|r| r.bc != BoundaryCondition::Neumann) {
        let first = row.verdict.lhs_eigenvalues[0].min(row.verdict.rhs_eigenvalues[0]);
        ok &= first > 0.0;
        min_pos = min_pos.min(first);
    }
    Ok((
        ok,
        format!("min λ₁/ρ₁ {min_pos:.4}; μ₁ at β=1 ≥ {min_mu1:.4}; |μ₁| at β=0 ≤ {max_mu0:.1e}"),
    ))
}

fn report(index: usize, title: &str, outcome: Outcome, failures: &mut usize) {
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if !ok {
        *failures += 1;
    }
    println!("{} {index:>2} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let mut failures = 0;
    report(1, "frame identities", frames(), &mut failures);
    report(2, "inertia formulas", geometry_oracles(), &mut failures);
    report(3, "shape-factor ratio", ratio_identity(), &mut failures);
    report(4, "zero-field benchmarks", benchmarks(), &mut failures);
    report(5, "exact invariances", invariances(), &mut failures);
    report(6, "gauge convergence", gauge_convergence(), &mut failures);
    report(7, "Landau bound", landau_bound(), &mut failures);
    let start = Instant::now();
    let grid = theorem_grid(&GridSpec::regression(1.0, 5.0));
    let grid_secs = start.elapsed().as_secs_f64();
    match &grid {
        Ok(rows) => {
            let outcome = theorem_grid_check(rows).map(|(ok, d)| (ok, format!("{d}, {grid_secs:.0} s")));
            report(8, "eigenvalue-sum inequality grid", outcome, &mut failures);
        }
        Err(e) => println!("FAIL  8 eigenvalue-sum inequality grid: error: {e}"),
    }
    report(9, "flux-normalized scans", scans(), &mut failures);
    let rows = grid.unwrap_or_default();
    report(10, "positivity", positivity(&rows), &mut failures);
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
