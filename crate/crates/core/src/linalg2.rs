//! Real 2×2 matrix algebra and averaging over the cyclic rotation group.
//!
//! Conjugation-averaging a matrix over the `N` rotations by `2πm/N` keeps only
//! its trace and antisymmetric part once `N ≥ 3`:
//!
//! ```text
//! (1/N) Σ U_m M U_mᵀ = (½ tr M) Id + ½ (M − Mᵀ)
//! ```
//!
//! The functions here compute both sides independently (explicit summation and
//! the closed form) so the identity can be checked rather than assumed.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A plane vector as a column.
pub type Vec2 = [f64; 2];

const UNIT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-14;

/// Real 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1.0, 0.0, 0.0, 1.0]);
    pub const ZERO: Mat2 = Mat2([0.0; 4]);
    /// Rotation by a right angle.
    pub const J: Mat2 = Mat2([0.0, -1.0, 1.0, 0.0]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2([a11, a12, a21, a22])
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Mat2([d1, 0.0, 0.0, d2])
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat2([c, -s, s, c])
    }

    pub fn shear(s: f64) -> Self {
        Mat2([1.0, s, 0.0, 1.0])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[2 * row + col]
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.0;
        Mat2([a, c, b, d])
    }

    pub fn scale(&self, s: f64) -> Self {
        Mat2(self.0.map(|x| x * s))
    }

    /// Explicit adjugate inverse.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let scale = self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if det == 0.0 || !det.is_finite() || det.abs() <= f64::EPSILON * scale * scale {
            return Err(Error::SingularMap);
        }
        let [a, b, c, d] = self.0;
        Ok(Mat2([d / det, -b / det, -c / det, a / det]))
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let [a, b, c, d] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// Hilbert–Schmidt (Frobenius) norm, `sqrt(tr M Mᵀ)`.
    pub fn hs_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Singular values, largest first.
    pub fn singular_values(&self) -> (f64, f64) {
        let [a, b, c, d] = self.0;
        let sum_sq = a * a + b * b + c * c + d * d;
        let det = self.det().abs();
        // σ1² + σ2² = ‖M‖²,  σ1 σ2 = |det M|
        let disc = ((sum_sq - 2.0 * det).max(0.0) * (sum_sq + 2.0 * det)).sqrt();
        let s1 = (0.5 * (sum_sq + disc)).sqrt();
        let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
        (s1, s2)
    }

    /// True when the map is a positive multiple of an orthogonal matrix.
    pub fn is_conformal(&self, rel_tol: f64) -> bool {
        let (s1, s2) = self.singular_values();
        s1 > 0.0 && (s1 - s2) <= rel_tol * s1
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

pub fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

pub fn dot(u: Vec2, v: Vec2) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

/// The cyclic group of plane rotations `U_m`, `m = 1..=N`, by angle `2πm/N`.
///
/// Any order `N ≥ 1` can be built; the averaging identities only hold for
/// `N ≥ 3`, which the checked entry points below enforce.
#[derive(Clone, Debug)]
pub struct RotationGroup {
    order: usize,
    members: Vec<Mat2>,
}

impl RotationGroup {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "rotation group order must be positive");
        let members = (1..=order)
            .map(|m| Mat2::rotation(2.0 * PI * m as f64 / order as f64))
            .collect();
        RotationGroup { order, members }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[Mat2] {
        &self.members
    }

    /// `(1/N) Σ U_m M U_mᵀ` by explicit summation.
    pub fn average(&self, m: &Mat2) -> Mat2 {
        let sum = self
            .members
            .iter()
            .fold(Mat2::ZERO, |acc, u| acc + *u * *m * u.transpose());
        sum.scale(1.0 / self.order as f64)
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < 3 {
        Err(Error::OrderTooLow(order))
    } else {
        Ok(())
    }
}

fn check_unit(y: Vec2) -> Result<()> {
    let n = norm(y);
    if (n - 1.0).abs() > UNIT_TOL {
        Err(Error::NotUnitVector(n))
    } else {
        Ok(())
    }
}

pub fn hs_norm(m: &Mat2) -> f64 {
    m.hs_norm()
}

/// `|‖T⁻¹‖ − ‖T‖/|det T||` with the inverse formed explicitly.
pub fn hs_inverse_identity_check(t: &Mat2) -> Result<f64> {
    let inv = t.inverse()?;
    Ok((inv.hs_norm() - t.hs_norm() / t.det().abs()).abs())
}

pub fn frame_average(m: &Mat2, order: usize) -> Result<Mat2> {
    check_order(order)?;
    Ok(RotationGroup::new(order).average(m))
}

pub fn frame_average_closed_form(m: &Mat2) -> Mat2 {
    Mat2::IDENTITY.scale(0.5 * m.trace()) + (*m - m.transpose()).scale(0.5)
}

/// The three averaged matrices
///
/// ```text
/// (1/N) Σ U_m T⁻¹ T⁻ᵀ U_mᵀ
/// (1/N) Σ U_m Tᵀ Mᵀ M T U_mᵀ
/// (1/N) Σ U_m T⁻¹ M T U_mᵀ        (requires tr M = 0)
/// ```
///
/// all by explicit summation. Their closed forms are `½‖T⁻¹‖² Id`,
/// `½‖MT‖² Id` and `½(T⁻¹MT − (T⁻¹MT)ᵀ)`.
pub fn frame_consequences(t: &Mat2, m: &Mat2, order: usize) -> Result<(Mat2, Mat2, Mat2)> {
    check_order(order)?;
    let inv = t.inverse()?;
    let tr = m.trace();
    if tr.abs() > TRACE_TOL {
        return Err(Error::TraceNotZero(tr));
    }
    let group = RotationGroup::new(order);
    Ok((
        group.average(&(inv * inv.transpose())),
        group.average(&(t.transpose() * m.transpose() * *m * *t)),
        group.average(&(inv * *m * *t)),
    ))
}

/// `(1/N) Σ |T U_m⁻¹ y|²`, which equals `½‖T‖²`.
pub fn frame_scalar_identity(t: &Mat2, y: Vec2, order: usize) -> Result<f64> {
    check_order(order)?;
    check_unit(y)?;
    let group = RotationGroup::new(order);
    let sum: f64 = group
        .members()
        .iter()
        .map(|u| {
            let w = t.apply(u.transpose().apply(y));
            dot(w, w)
        })
        .sum();
    Ok(sum / order as f64)
}

/// `Σ |x · U_m y|²`, which equals `(N/2)|x|²`.
pub fn tight_frame_constant(x: Vec2, y: Vec2, order: usize) -> Result<f64> {
    check_order(order)?;
    check_unit(y)?;
    let group = RotationGroup::new(order);
    Ok(group
        .members()
        .iter()
        .map(|u| dot(x, u.apply(y)).powi(2))
        .sum())
}

/// Worst relative deviation per identity over a batch of random trials.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FrameTrialReport {
    pub trials: usize,
    pub orders: Vec<usize>,
    pub average_vs_closed_form: f64,
    pub inverse_gram: f64,
    pub potential_gram: f64,
    pub conjugated_antisymmetric: f64,
    pub scalar_identity: f64,
    pub tight_frame: f64,
    pub hs_inverse: f64,
}

impl FrameTrialReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.average_vs_closed_form,
            self.inverse_gram,
            self.potential_gram,
            self.conjugated_antisymmetric,
            self.scalar_identity,
            self.tight_frame,
            self.hs_inverse,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("average_vs_closed_form", self.average_vs_closed_form),
            ("inverse_gram", self.inverse_gram),
            ("potential_gram", self.potential_gram),
            ("conjugated_antisymmetric", self.conjugated_antisymmetric),
            ("scalar_identity", self.scalar_identity),
            ("tight_frame", self.tight_frame),
            ("hs_inverse", self.hs_inverse),
        ]
    }
}

fn random_mat<R: Rng>(rng: &mut R) -> Mat2 {
    Mat2(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)))
}

fn random_invertible<R: Rng>(rng: &mut R) -> Mat2 {
    loop {
        let t = random_mat(rng);
        if t.det().abs() > 0.05 {
            return t;
        }
    }
}

/// Randomized check of every averaging identity.
///
/// Orders are drawn from `orders` (uniformly); deviations are relative to the
/// size of the quantity being compared. Orders below 3 are evaluated without
/// the order guard so the failure of the closed form can be observed.
pub fn frame_identity_trials<R: Rng>(rng: &mut R, trials: usize, orders: &[usize]) -> FrameTrialReport {
    assert!(!orders.is_empty());
    let mut report = FrameTrialReport {
        trials,
        orders: orders.to_vec(),
        ..Default::default()
    };
    let upd = |slot: &mut f64, v: f64| *slot = slot.max(v);
    for _ in 0..trials {
        let order = orders[rng.gen_range(0..orders.len())];
        let group = RotationGroup::new(order);
        let m = random_mat(rng);
        let t = random_invertible(rng);
        let inv = t.inverse().expect("invertible by construction");
        let theta: f64 = rng.gen_range(0.0..2.0 * PI);
        let y = [theta.cos(), theta.sin()];
        let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];

        let closed = frame_average_closed_form(&m);
        upd(
            &mut report.average_vs_closed_form,
            group.average(&m).max_abs_diff(&closed) / (1.0 + m.hs_norm()),
        );

        let inv_gram = group.average(&(inv * inv.transpose()));
        let expect = Mat2::IDENTITY.scale(0.5 * inv.hs_norm().powi(2));
        upd(&mut report.inverse_gram, inv_gram.max_abs_diff(&expect) / expect.hs_norm());

        let pot = group.average(&(t.transpose() * m.transpose() * m * t));
        let expect = Mat2::IDENTITY.scale(0.5 * (m * t).hs_norm().powi(2));
        upd(&mut report.potential_gram, pot.max_abs_diff(&expect) / expect.hs_norm().max(1e-300));

        let m0 = m - Mat2::IDENTITY.scale(0.5 * m.trace());
        let conj = inv * m0 * t;
        let got = group.average(&conj);
        let expect = (conj - conj.transpose()).scale(0.5);
        upd(
            &mut report.conjugated_antisymmetric,
            got.max_abs_diff(&expect) / (1.0 + conj.hs_norm()),
        );

        let scalar: f64 = group
            .members()
            .iter()
            .map(|u| {
                let w = t.apply(u.transpose().apply(y));
                dot(w, w)
            })
            .sum::<f64>()
            / order as f64;
        let expect = 0.5 * t.hs_norm().powi(2);
        upd(&mut report.scalar_identity, (scalar - expect).abs() / expect);

        let frame: f64 = group.members().iter().map(|u| dot(x, u.apply(y)).powi(2)).sum();
        let expect = 0.5 * order as f64 * dot(x, x);
        upd(&mut report.tight_frame, (frame - expect).abs() / expect.max(1e-300));

        upd(
            &mut report.hs_inverse,
            (inv.hs_norm() - t.hs_norm() / t.det().abs()).abs() / inv.hs_norm(),
        );
    }
    report
}
