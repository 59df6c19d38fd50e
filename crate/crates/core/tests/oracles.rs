//! Closed forms, independent numerical oracles and frozen reference values.

use std::f64::consts::{PI, TAU};

use magsum::eigensolve::{eigenvalue_sum, lowest_eigenvalues, lowest_eigenvalues_with, SolverOptions};
use magsum::geometry::{self, Domain};
use magsum::linalg2::Mat2;
use magsum::mesh::{refine, triangulate, Mesh};
use magsum::operator::{assemble, rayleigh_quotient, BoundaryCondition, GaugeChoice};
use magsum::verify::{
    bessel_j0_first_zero, corollary_scan, faber_krahn_check, invariance_suite, stretch_family, theorem_check,
    VerdictClass,
};
use magsum::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIR: BoundaryCondition = BoundaryCondition::Dirichlet;
const NEU: BoundaryCondition = BoundaryCondition::Neumann;

fn mesh(d: &Domain, level: u32) -> Mesh {
    refine(&triangulate(&d.centered()).unwrap(), level)
}

fn spectrum(m: &Mesh, beta: f64, hbar: f64, bc: &BoundaryCondition, n: usize) -> Vec<f64> {
    let op = assemble(m, &GaugeChoice::symmetric(beta), hbar, bc).unwrap();
    lowest_eigenvalues(&op, n).unwrap().eigenvalues
}

fn close(actual: f64, expected: f64, rel: f64) {
    assert!(
        (actual - expected).abs() <= rel * expected.abs(),
        "{actual} differs from {expected} by more than {rel:e} relative"
    );
}

/// J₀ through `(1/π) ∫₀^π cos(x sin θ) dθ` (Simpson) and bisection on [2, 3].
fn j0_zero_by_quadrature() -> f64 {
    let j0 = |x: f64| {
        let steps = 2000;
        let h = PI / steps as f64;
        let f = |k: usize| (x * (k as f64 * h).sin()).cos();
        let inner: f64 = (1..steps).map(|k| (if k % 2 == 1 { 4.0 } else { 2.0 }) * f(k)).sum();
        (f(0) + inner + f(steps)) * h / (3.0 * PI)
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if j0(lo) * j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn bessel_zero_matches_quadrature_oracle() {
    close(bessel_j0_first_zero(), j0_zero_by_quadrature(), 1e-12);
}

#[test]
fn square_inertia_matches_midpoint_double_integral() {
    let k = 400;
    let h = 1.0 / k as f64;
    let mut sum = 0.0;
    for i in 0..k {
        for j in 0..k {
            let (x, y) = ((i as f64 + 0.5) * h - 0.5, (j as f64 + 0.5) * h - 0.5);
            sum += (x * x + y * y) * h * h;
        }
    }
    close(geometry::moment_of_inertia(&Domain::unit_square()), 1.0 / 6.0, 1e-14);
    close(sum, 1.0 / 6.0, 1e-5);
}

#[test]
fn triangle_inertia_matches_monte_carlo() {
    let d = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]], None).unwrap();
    let c = geometry::centroid(&d);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = 400_000;
    let mut acc = 0.0;
    for _ in 0..samples {
        let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        let p = [u + 0.5 * v, v * 3f64.sqrt() / 2.0];
        acc += (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
    }
    let mc = acc / samples as f64 * geometry::area(&d);
    close(geometry::moment_of_inertia(&d), 3f64.sqrt() / 48.0, 1e-13);
    close(mc, 3f64.sqrt() / 48.0, 5e-3);
}

#[test]
fn disk_inertia_is_the_polar_integral() {
    let d = Domain::disk(1.0).unwrap();
    let steps = 10_000;
    let h = 1.0 / steps as f64;
    let polar: f64 = (0..steps).map(|k| (k as f64 + 0.5) * h).map(|r| r * r * TAU * r * h).sum();
    close(geometry::moment_of_inertia(&d), PI / 2.0, 1e-15);
    close(polar, PI / 2.0, 1e-7);
}

#[test]
fn square_spectrum_against_separation_of_variables() {
    let eigs = spectrum(&mesh(&Domain::unit_square(), 5), 0.0, 1.0, &DIR, 3);
    let exact = [2.0 * PI * PI, 5.0 * PI * PI, 5.0 * PI * PI];
    for (e, x) in eigs.iter().zip(exact) {
        assert!(*e >= x && *e <= 1.01 * x);
    }
    close(eigs.iter().sum(), 12.0 * PI * PI, 0.01);
    // frozen reference values of this discretization
    close(eigs[0], 19.755_039_292_789_88, 1e-9);
    close(eigs[1], 49.432_743_778_714_87, 1e-9);
    close(eigs[2], 49.432_743_778_715_7, 1e-9);
}

#[test]
fn rectangle_ground_state() {
    let rect = geometry::apply_linear_map(&Domain::unit_square(), &Mat2::diag(2.0, 1.0)).unwrap();
    let l1 = spectrum(&mesh(&rect, 5), 0.0, 1.0, &DIR, 1)[0];
    let exact = PI * PI * (0.25 + 1.0);
    assert!(l1 >= exact && l1 <= 1.01 * exact);
}

#[test]
fn disk_ground_state_against_bessel_zero() {
    let j = j0_zero_by_quadrature();
    let l1 = spectrum(&mesh(&Domain::disk(1.0).unwrap(), 3), 0.0, 1.0, &DIR, 1)[0];
    assert!((l1 - j * j).abs() <= 0.01 * j * j);
}

#[test]
fn neumann_ground_state_is_constant() {
    let m = mesh(&Domain::regular_polygon(6, 1.0).unwrap(), 3);
    let op = assemble(&m, &GaugeChoice::symmetric(0.0), 1.0, &NEU).unwrap();
    let res = lowest_eigenvalues(&op, 2).unwrap();
    assert!(res.eigenvalues[0].abs() <= 1e-9);
    assert!(res.eigenvalues[1] > 1.0);
    let v = &res.eigenvectors[0];
    let phase = v[0] / v[0].norm();
    let spread = v.iter().map(|z| (z / phase - v[0].norm()).norm()).fold(0.0, f64::max);
    assert!(spread <= 1e-6 * v[0].norm());
}

#[test]
fn frozen_triangle_spectra_at_unit_field() {
    let m = mesh(&Domain::equilateral_triangle(), 4);
    let cases = [
        (DIR, [53.062_001_942_062_61, 124.592_080_111_241_3, 126.067_189_397_343_5]),
        (NEU, [0.012_661_720_579_624_777, 17.254_570_038_918_24, 18.002_779_027_248_77]),
        (BoundaryCondition::Robin(1.0), [6.092_133_800_515_805, 27.606_192_157_978_83, 28.513_812_107_971_09]),
    ];
    for (bc, frozen) in cases {
        let eigs = spectrum(&m, 1.0, 1.0, &bc, 3);
        for (e, f) in eigs.iter().zip(frozen) {
            close(*e, f, 1e-9);
        }
    }
}

#[test]
fn eigenvalue_sum_examples() {
    let res = lowest_eigenvalues(
        &assemble(&mesh(&Domain::unit_square(), 2), &GaugeChoice::symmetric(0.0), 1.0, &DIR).unwrap(),
        3,
    )
    .unwrap();
    assert_eq!(eigenvalue_sum(&res, 1).unwrap(), res.eigenvalues[0]);
    let mut fixed = res.clone();
    fixed.eigenvalues = vec![1.0, 2.0, 3.0];
    assert_eq!(eigenvalue_sum(&fixed, 2).unwrap(), 3.0);
    assert!(matches!(eigenvalue_sum(&fixed, 4), Err(Error::TooManyEigenvalues { .. })));
}

#[test]
fn dirichlet_eigenvalues_decrease_under_refinement() {
    let seed = triangulate(&Domain::equilateral_triangle().centered()).unwrap();
    let mut previous: Option<Vec<f64>> = None;
    for level in 1..=4 {
        let eigs = spectrum(&refine(&seed, level), 1.0, 1.0, &DIR, 3);
        if let Some(p) = &previous {
            for (now, before) in eigs.iter().zip(p) {
                assert!(*now <= before + 1e-10);
            }
        }
        previous = Some(eigs);
    }
}

#[test]
fn requesting_more_eigenvalues_keeps_the_first_ones() {
    let m = mesh(&Domain::unit_square(), 4);
    for bc in [DIR, NEU] {
        let a = spectrum(&m, 2.0, 1.0, &bc, 3);
        let b = spectrum(&m, 2.0, 1.0, &bc, 5);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }
}

#[test]
fn dense_and_iterative_agree_with_field() {
    let m = mesh(&Domain::regular_polygon(6, 1.0).unwrap(), 3);
    let op = assemble(&m, &GaugeChoice::symmetric(3.0), 0.7, &BoundaryCondition::Robin(0.5)).unwrap();
    let dense = lowest_eigenvalues_with(&op, 4, &SolverOptions::dense()).unwrap();
    let iterative = lowest_eigenvalues_with(&op, 4, &SolverOptions::iterative()).unwrap();
    for (a, b) in dense.eigenvalues.iter().zip(&iterative.eigenvalues) {
        assert!((a - b).abs() <= 1e-8 * a.abs());
    }
}

#[test]
fn diamagnetic_and_landau_bounds() {
    let m = mesh(&Domain::unit_square(), 3);
    let zero = spectrum(&m, 0.0, 1.0, &DIR, 1)[0];
    for beta in [0.5, 2.0, 10.0, -4.0] {
        for hbar in [0.5, 1.0] {
            let l1 = spectrum(&m, beta, hbar, &DIR, 1)[0];
            assert!(l1 >= hbar * beta.abs());
            if hbar == 1.0 {
                assert!(l1 >= zero - 1e-10);
            }
        }
    }
}

#[test]
fn rayleigh_quotient_of_eigenvectors_and_constants() {
    let m = mesh(&Domain::equilateral_triangle(), 2);
    let op = assemble(&m, &GaugeChoice::symmetric(1.5), 1.0, &DIR).unwrap();
    let res = lowest_eigenvalues(&op, 2).unwrap();
    for (v, l) in res.eigenvectors.iter().zip(&res.eigenvalues) {
        close(rayleigh_quotient(&op, v).unwrap(), *l, 1e-10);
    }
    let ones = vec![Complex64::new(1.0, 0.0); m.vertices().len()];
    let neumann = |beta: f64| assemble(&m, &GaugeChoice::symmetric(beta), 1.0, &NEU).unwrap();
    assert!(rayleigh_quotient(&neumann(0.0), &ones).unwrap().abs() <= 1e-13);
    assert!(rayleigh_quotient(&neumann(1.0), &ones).unwrap() > 0.0);
}

#[test]
fn identity_and_rotation_are_equality_cases() {
    let d = Domain::equilateral_triangle();
    for bc in [DIR, NEU, BoundaryCondition::Robin(1.0)] {
        let id = theorem_check(&d, &Mat2::IDENTITY, 1.0, 1.0, &bc, 2, 3).unwrap();
        assert!(id.margin.abs() <= 1e-9 * id.rhs.max(1.0));
        let rot = theorem_check(&d, &Mat2::rotation(0.37).scale(1.3), 1.0, 1.0, &bc, 2, 3).unwrap();
        assert!(rot.margin.abs() <= 2.0 * rot.error_budget + 1e-9 * rot.rhs.max(1.0));
        assert!(rot.holds);
    }
}

#[test]
fn stretched_triangle_has_strict_margin() {
    let v = theorem_check(&Domain::equilateral_triangle(), &Mat2::diag(1.5, 1.0 / 1.5), 1.0, 1.0, &DIR, 1, 5).unwrap();
    assert_eq!(v.class, VerdictClass::Strict);
    close(v.lhs, 46.546_334_535_475_16, 1e-9);
    close(v.rhs, 52.751_708_763_210_03, 1e-9);
    close(v.error_budget, 0.727_186_143_144_329_8, 1e-7);
}

#[test]
fn robin_with_zero_sigma_reproduces_neumann_verdicts() {
    let d = Domain::unit_square();
    let t = Mat2::shear(0.5);
    let a = theorem_check(&d, &t, 1.0, 2.0, &NEU, 2, 3).unwrap();
    let b = theorem_check(&d, &t, 1.0, 2.0, &BoundaryCondition::Robin(0.0), 2, 3).unwrap();
    assert_eq!(a.lhs, b.lhs);
    assert_eq!(a.rhs, b.rhs);
    assert_eq!(a.error_budget, b.error_budget);
}

#[test]
fn symmetry_is_required_for_theorem_checks() {
    let rect = Domain::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]], None).unwrap();
    let err = theorem_check(&rect, &Mat2::IDENTITY, 1.0, 1.0, &DIR, 1, 2).unwrap_err();
    assert_eq!(err, Error::SymmetryRequired);
}

#[test]
fn single_point_scan_is_vacuous() {
    let scan = corollary_scan(&Domain::unit_square(), &stretch_family, &[1.0], 1.0, 1.0, TAU, &DIR, 1, 2).unwrap();
    assert!(scan.argmax_at_identity());
    assert!(scan.monotone);
}

#[test]
fn faber_krahn_zero_flux() {
    let report = faber_krahn_check(
        &[
            ("square".into(), Domain::unit_square()),
            ("triangle".into(), Domain::equilateral_triangle()),
            ("disk".into(), Domain::disk(0.8).unwrap()),
        ],
        1.0,
        0.0,
        5,
    )
    .unwrap();
    assert!(report.passed());
    let j = j0_zero_by_quadrature();
    close(report.bessel_bound, j * j * PI, 1e-12);
    close(report.rows[0].scaled, 2.0 * PI * PI, 0.01);
    assert!(report.rows[0].scaled > report.bessel_bound);
    let disk = &report.rows[2];
    assert!((disk.scaled - disk.disk_scaled).abs() <= 1e-8 * disk.scaled);
}

#[test]
fn faber_krahn_with_flux() {
    let report = faber_krahn_check(&[("triangle".into(), Domain::equilateral_triangle())], 1.0, TAU, 5).unwrap();
    assert!(report.passed());
    assert!(report.rows[0].disk_scaled < report.rows[0].scaled);
    assert_eq!(report.rows[0].above_bessel_bound, None);
}

#[test]
fn invariance_suite_examples() {
    let zero = invariance_suite(&Domain::equilateral_triangle(), 1.0, 0.0, &NEU, 3).unwrap();
    assert!(zero.all_passed(), "{zero:?}");
    let field = invariance_suite(&Domain::unit_square(), 1.0, 1.0, &DIR, 3).unwrap();
    assert!(field.all_passed(), "{field:?}");
    assert!(field.get("dilation").unwrap().value <= 1e-10);
    assert!(field.get("rotation").unwrap().value <= 1e-10);
}
