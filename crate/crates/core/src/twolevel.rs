//! Two-level (computational subspace) model of dual-pulse control.
//!
//! All per-cycle operators here are expressed in the frame co-rotating with
//! the qubit at `omega01`, with each clock cycle's observation window centered
//! on the pulse pair. In that convention a cycle with intra-pair phase `phi`
//! acts as a rotation by `2*cos(phi)*delta_theta` about an equatorial axis,
//! times a physically irrelevant global sign.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SfqError};
use crate::pulsetrain::DualPulseSchedule;

fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

/// A 2x2 unitary in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn identity() -> Self {
        Unitary2 {
            m: [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
        }
    }

    pub fn from_matrix(m: [[C64; 2]; 2]) -> Self {
        Unitary2 { m }
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2 { m: out }
    }

    pub fn dagger(&self) -> Unitary2 {
        let a = &self.m;
        Unitary2 {
            m: [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]],
        }
    }

    pub fn phase_mul(&self, phase: C64) -> Unitary2 {
        let mut m = self.m;
        for row in &mut m {
            for v in row {
                *v *= phase;
            }
        }
        Unitary2 { m }
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn max_abs_diff(&self, other: &Unitary2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    /// Operator 2-norm (largest singular value) of `self - other`.
    pub fn sub_spectral_norm(&self, other: &Unitary2) -> f64 {
        let mut d = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                d[i][j] = self.m[i][j] - other.m[i][j];
            }
        }
        // Eigenvalues of the 2x2 Hermitian matrix D^dag D.
        let b00 = (d[0][0].conj() * d[0][0] + d[1][0].conj() * d[1][0]).re;
        let b11 = (d[0][1].conj() * d[0][1] + d[1][1].conj() * d[1][1]).re;
        let b01 = d[0][0].conj() * d[0][1] + d[1][0].conj() * d[1][1];
        let tr = b00 + b11;
        let det = b00 * b11 - b01.norm_sqr();
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        (0.5 * (tr + disc)).max(0.0).sqrt()
    }

    /// True when the two unitaries agree up to a global phase:
    /// `|tr(self^dag * other)| >= 2 - tol`.
    pub fn projectively_equal(&self, other: &Unitary2, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    /// `2 - |tr(self^dag * other)|`; zero iff equal up to global phase.
    pub fn projective_distance(&self, other: &Unitary2) -> f64 {
        2.0 - self.dagger().mul(other).trace().norm()
    }
}

/// Rotation about the z axis: `diag(exp(-i a/2), exp(i a/2))`.
pub fn rotation_z(angle: f64) -> Unitary2 {
    Unitary2 {
        m: [
            [cis(-0.5 * angle), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), cis(0.5 * angle)],
        ],
    }
}

/// Rotation about the y axis:
/// `[[cos a/2, -sin a/2], [sin a/2, cos a/2]]`.
pub fn rotation_y(angle: f64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    Unitary2 {
        m: [
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ],
    }
}

/// Rotation about the x axis:
/// `[[cos a/2, -i sin a/2], [-i sin a/2, cos a/2]]`.
pub fn rotation_x(angle: f64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    Unitary2 {
        m: [
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ],
    }
}

/// Exact per-cycle operator of a resonant dual-pulse cycle, in closed form.
///
/// `delta_theta` is the per-pulse tip angle, `phi` the intra-pair timing
/// phase. The diagonal is
/// `-cos^2(dt/2) - sin^2(dt/2) * exp(∓i(2 phi - pi))` and the off-diagonal
/// `±cos(phi) sin(dt)` (upper-right positive). The equivalent five-factor
/// z-y-z product form lives in the oracle crate so the two can be checked
/// against each other independently.
pub fn cycle_unitary_exact(delta_theta: f64, phi: f64) -> Unitary2 {
    let c2 = (0.5 * delta_theta).cos().powi(2);
    let s2 = (0.5 * delta_theta).sin().powi(2);
    let off = phi.cos() * delta_theta.sin();
    let w = 2.0 * phi - std::f64::consts::PI;
    let diag_upper = -C64::new(c2, 0.0) - C64::new(s2, 0.0) * cis(-w);
    let diag_lower = -C64::new(c2, 0.0) - C64::new(s2, 0.0) * cis(w);
    Unitary2 {
        m: [
            [diag_upper, C64::new(off, 0.0)],
            [C64::new(-off, 0.0), diag_lower],
        ],
    }
}

/// Per-cycle operator with the pair's axis phase `psi` folded in:
/// `Rz(psi) * cycle_unitary_exact * Rz(-psi)`. Shifting the pair later in the
/// cycle by `psi/omega01` rotates its equatorial kick axis by `psi`.
pub fn cycle_unitary_exact_with_axis(delta_theta: f64, phi: f64, psi: f64) -> Unitary2 {
    rotation_z(psi)
        .mul(&cycle_unitary_exact(delta_theta, phi))
        .mul(&rotation_z(-psi))
}

/// Small-angle form of the per-cycle operator:
/// `-Ry(2 cos(phi) * delta_theta)`. Differs from the exact operator at
/// second order in `delta_theta`.
pub fn cycle_unitary_approx(delta_theta: f64, phi: f64) -> Unitary2 {
    rotation_y(effective_delta_theta(delta_theta, phi)).phase_mul(C64::new(-1.0, 0.0))
}

/// Net per-cycle rotation angle `2 cos(phi) * delta_theta` (signed).
pub fn effective_delta_theta(delta_theta: f64, phi: f64) -> f64 {
    2.0 * phi.cos() * delta_theta
}

/// Product of the per-cycle operators of a schedule, in chronological order
/// (first cycle applied first). Equals the physical rotating-frame propagator
/// over the pair-centered window up to a global sign `(-1)^n`.
pub fn schedule_unitary(schedule: &DualPulseSchedule) -> Unitary2 {
    let dt = schedule.params.delta_theta;
    let mut u = Unitary2::identity();
    for cycle in &schedule.cycles {
        u = cycle_unitary_exact_with_axis(dt, cycle.phi, cycle.psi).mul(&u);
    }
    u
}

/// A point on (or inside) the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Bloch coordinates of a (not necessarily normalized) pure state.
    pub fn from_state(state: &[C64; 2]) -> Self {
        let n = state[0].norm_sqr() + state[1].norm_sqr();
        if n == 0.0 {
            return BlochPoint { x: 0.0, y: 0.0, z: 0.0 };
        }
        let cross = state[0].conj() * state[1];
        BlochPoint {
            x: 2.0 * cross.re / n,
            y: 2.0 * cross.im / n,
            z: (state[0].norm_sqr() - state[1].norm_sqr()) / n,
        }
    }

    /// State vector for a pure Bloch point. The direction is normalized to
    /// the sphere surface; a zero vector has no pure-state preimage.
    pub fn to_state(&self) -> Result<[C64; 2]> {
        let r = self.norm();
        if r < 1e-12 {
            return Err(SfqError::Domain(
                "Bloch vector of length zero has no pure-state representation".into(),
            ));
        }
        let z = (self.z / r).clamp(-1.0, 1.0);
        let theta = z.acos();
        let azimuth = self.y.atan2(self.x);
        Ok([
            C64::new((0.5 * theta).cos(), 0.0),
            cis(azimuth) * (0.5 * theta).sin(),
        ])
    }
}

/// One sampled point of a Bloch trajectory: `(time_s, lab_frame, rotating_frame)`.
pub type TrajectoryPoint = (f64, BlochPoint, BlochPoint);

/// Lab-frame Bloch trajectory of a pure state under a dual-pulse schedule.
///
/// The evolution window runs from half a clock period before the first pair
/// center to half a period after the last. Each free segment is sampled at
/// `substeps` evenly spaced points and each pulse contributes an extra point
/// immediately after its kick. See [`evolve_bloch_timed`] for the variant
/// that also reports times and the co-rotating-frame coordinates.
pub fn evolve_bloch(
    schedule: &DualPulseSchedule,
    initial: BlochPoint,
    substeps: usize,
) -> Result<Vec<BlochPoint>> {
    Ok(evolve_bloch_timed(schedule, initial, substeps)?
        .into_iter()
        .map(|(_, lab, _)| lab)
        .collect())
}

/// As [`evolve_bloch`], but each sample carries its time and both the lab
/// frame and the `omega01` co-rotating frame coordinates. In the rotating
/// frame the trajectory is constant between pulses, and its endpoint equals
/// the per-cycle operator product applied to the initial state.
pub fn evolve_bloch_timed(
    schedule: &DualPulseSchedule,
    initial: BlochPoint,
    substeps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if schedule.cycles.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    if substeps == 0 {
        return Err(SfqError::Domain("substeps must be at least 1".into()));
    }
    let p = &schedule.params;
    let period = p.clock_period();
    let omega = p.omega01;
    let dt_kick = schedule.params.delta_theta;

    // Pulse times and kick angles (all polarity +1 in the dual scheme).
    let mut events: Vec<f64> = Vec::with_capacity(2 * schedule.cycles.len());
    for cycle in &schedule.cycles {
        let center = (cycle.index as f64 + cycle.psi / std::f64::consts::TAU) * period;
        let offset = cycle.phi / omega;
        events.push(center - offset);
        events.push(center + offset);
    }
    let first_center =
        (schedule.cycles[0].index as f64
            + schedule.cycles[0].psi / std::f64::consts::TAU)
            * period;
    let last_center = (schedule.cycles[schedule.cycles.len() - 1].index as f64
        + schedule.cycles[schedule.cycles.len() - 1].psi / std::f64::consts::TAU)
        * period;
    let t_start = first_center - 0.5 * period;
    let t_end = last_center + 0.5 * period;

    let mut state = initial.to_state()?;
    let mut t = t_start;
    let mut out: Vec<TrajectoryPoint> = Vec::new();
    let push = |out: &mut Vec<TrajectoryPoint>, t: f64, s: &[C64; 2]| {
        let lab = BlochPoint::from_state(s);
        let rot = BlochPoint::from_state(&[s[0], s[1] * cis(omega * t)]);
        out.push((t, lab, rot));
    };
    push(&mut out, t, &state);

    let free = |s: &mut [C64; 2], tau: f64| {
        s[1] *= cis(-omega * tau);
    };
    let kick = |s: &mut [C64; 2]| {
        let (sn, cs) = (0.5 * dt_kick).sin_cos();
        let a0 = s[0];
        let a1 = s[1];
        s[0] = C64::new(cs, 0.0) * a0 - C64::new(sn, 0.0) * a1;
        s[1] = C64::new(sn, 0.0) * a0 + C64::new(cs, 0.0) * a1;
    };

    for &ev in &events {
        let seg = ev - t;
        for i in 1..=substeps {
            let mut s = state;
            free(&mut s, seg * i as f64 / substeps as f64);
            push(&mut out, t + seg * i as f64 / substeps as f64, &s);
        }
        free(&mut state, seg);
        kick(&mut state);
        t = ev;
        // Replace the pre-kick sample at the event time with the post-kick one.
        out.pop();
        push(&mut out, t, &state);
    }
    let seg = t_end - t;
    for i in 1..=substeps {
        let mut s = state;
        free(&mut s, seg * i as f64 / substeps as f64);
        push(&mut out, t + seg * i as f64 / substeps as f64, &s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::QubitParams;
    use crate::pulsetrain::dual_sequence;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    #[test]
    fn rotation_conventions() {
        // Rz(2 pi) = Ry(2 pi) = -I.
        let neg_i = Unitary2::identity().phase_mul(C64::new(-1.0, 0.0));
        assert!(rotation_z(2.0 * PI).max_abs_diff(&neg_i) < TOL);
        assert!(rotation_y(2.0 * PI).max_abs_diff(&neg_i) < TOL);
        // Ry(pi/2) sends |0> to (|0> + |1>)/sqrt(2).
        let s = rotation_y(FRAC_PI_2).apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!((s[0].re - 0.5f64.sqrt()).abs() < TOL);
        assert!((s[1].re - 0.5f64.sqrt()).abs() < TOL);
        // Rx(pi) maps |0> to -i|1>.
        let s = rotation_x(PI).apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(s[0].norm() < TOL);
        assert!((s[1] - C64::new(0.0, -1.0)).norm() < TOL);
    }

    #[test]
    fn cycle_unitary_frozen_entries() {
        // delta_theta = pi/30, phi = pi/4.
        let u = cycle_unitary_exact(PI / 30.0, PI / 4.0);
        let expect = [
            [
                C64::new(-0.997_260_947_684_136_5, -0.002_739_052_315_863_331_2),
                C64::new(0.073_912_785_203_566_71, 0.0),
            ],
            [
                C64::new(-0.073_912_785_203_566_71, 0.0),
                C64::new(-0.997_260_947_684_136_5, 0.002_739_052_315_863_331_2),
            ],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (u.entry(i, j) - expect[i][j]).norm() < 1e-12,
                    "entry ({i},{j}) = {:?}",
                    u.entry(i, j)
                );
            }
        }
    }

    #[test]
    fn cycle_unitary_degenerate_cases() {
        let neg_i = Unitary2::identity().phase_mul(C64::new(-1.0, 0.0));
        // Zero tip angle: the frame factor alone, -I.
        assert!(cycle_unitary_exact(0.0, 1.234).max_abs_diff(&neg_i) < TOL);
        // phi = pi/2: destructive pair, again -I.
        assert!(cycle_unitary_exact(PI / 30.0, FRAC_PI_2).max_abs_diff(&neg_i) < TOL);
        // n cycles at phi = pi/2 compose to (-1)^n I.
        let u = cycle_unitary_exact(PI / 30.0, FRAC_PI_2);
        let mut acc = Unitary2::identity();
        for _ in 0..5 {
            acc = u.mul(&acc);
        }
        assert!(acc.max_abs_diff(&neg_i) < 5.0 * TOL);
    }

    #[test]
    fn cycle_unitary_is_unitary() {
        for &dt in &[PI / 30.0, PI / 60.0, 0.3, 1.2] {
            for k in 0..16 {
                let phi = 0.1 + 0.18 * k as f64;
                let u = cycle_unitary_exact(dt, phi);
                let g = u.dagger().mul(&u);
                assert!(g.max_abs_diff(&Unitary2::identity()) < TOL, "dt={dt} phi={phi}");
            }
        }
    }

    #[test]
    fn approx_matches_exact_to_second_order() {
        let phi = 1.0;
        let e30 = cycle_unitary_exact(PI / 30.0, phi)
            .sub_spectral_norm(&cycle_unitary_approx(PI / 30.0, phi));
        let e60 = cycle_unitary_exact(PI / 60.0, phi)
            .sub_spectral_norm(&cycle_unitary_approx(PI / 60.0, phi));
        let ratio = e30 / e60;
        assert!((ratio - 4.0).abs() < 0.4, "ratio = {ratio}");
    }

    #[test]
    fn effective_angle_values() {
        assert!((effective_delta_theta(PI / 30.0, 0.0) - PI / 15.0).abs() < TOL);
        assert!(effective_delta_theta(PI / 30.0, FRAC_PI_2).abs() < TOL);
        assert!(effective_delta_theta(PI / 30.0, 2.0) < 0.0);
        // Lower end of the hardware-feasible phi window.
        let v = 2.0 * (0.0423 * PI).cos();
        assert!((v - 1.982_366_388_658_118_9).abs() < 1e-12);
    }

    #[test]
    fn axis_conjugation_moves_off_diagonals() {
        let u = cycle_unitary_exact_with_axis(PI / 30.0, PI / 3.0, FRAC_PI_2);
        let base = cycle_unitary_exact(PI / 30.0, PI / 3.0);
        // Diagonal untouched, off-diagonal multiplied by exp(-i psi).
        assert!((u.entry(0, 0) - base.entry(0, 0)).norm() < TOL);
        let expect01 = base.entry(0, 1) * cis(-FRAC_PI_2);
        assert!((u.entry(0, 1) - expect01).norm() < TOL);
    }

    #[test]
    fn thirty_cycle_endpoint() {
        // 30 identical cycles at delta_theta = pi/30 with 2 cos(phi) = 5/6
        // rotate by almost exactly 5 pi/6... the headline case instead: a
        // calibrated pi rotation. phi = arccos(1/2): 30 * 2*(1/2)*(pi/30) = pi.
        let params = QubitParams::parameter_set_i();
        let phi = (0.5f64).acos();
        let (schedule, _) = dual_sequence(30, phi, 0.0, &params, false).unwrap();
        let u = schedule_unitary(&schedule);
        let z = (u.apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])[0].norm_sqr()) * 2.0 - 1.0;
        // Frozen endpoint: small second-order corrections keep |z + 1| at the
        // few-1e-3 level for delta_theta = pi/30.
        assert!((z - -0.995_888_027_647_671_8).abs() < 1e-9, "z = {z}");

        // In the small-tip regime the residual shrinks below 1e-3: same
        // rotation built from delta_theta = pi/50 over 30 cycles with
        // 2 cos(phi) = 5/6 -> total angle (5/6) * 30 * pi/50 = pi/2... use
        // matched pi: phi = arccos(5/6), 30 * 2*(5/6)*(pi/50) = pi.
        let params_small = QubitParams::new(params.omega01, params.alpha, PI / 50.0).unwrap();
        let phi_small = (5.0f64 / 6.0).acos();
        let (schedule_small, _) = dual_sequence(30, phi_small, 0.0, &params_small, false).unwrap();
        let u_small = schedule_unitary(&schedule_small);
        let z_small =
            (u_small.apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])[0].norm_sqr()) * 2.0 - 1.0;
        assert!((z_small + 1.0).abs() <= 1e-3, "z = {z_small}");
    }

    #[test]
    fn bloch_roundtrip() {
        let pts = [
            BlochPoint { x: 0.0, y: 0.0, z: 1.0 },
            BlochPoint { x: 1.0, y: 0.0, z: 0.0 },
            BlochPoint { x: 0.0, y: -1.0, z: 0.0 },
            BlochPoint { x: 0.36, y: -0.48, z: 0.8 },
        ];
        for p in pts {
            let s = p.to_state().unwrap();
            let q = BlochPoint::from_state(&s);
            assert!((p.x - q.x).abs() < TOL && (p.y - q.y).abs() < TOL && (p.z - q.z).abs() < TOL);
        }
        assert!(BlochPoint { x: 0.0, y: 0.0, z: 0.0 }.to_state().is_err());
    }

    #[test]
    fn trajectory_endpoint_matches_cycle_product() {
        let params = QubitParams::parameter_set_i();
        let (schedule, _) = dual_sequence(8, 1.1, 0.4, &params, false).unwrap();
        let initial = BlochPoint { x: 0.0, y: 0.0, z: 1.0 };
        let pts = evolve_bloch_timed(&schedule, initial, 4).unwrap();
        let (_, _, rot_end) = pts[pts.len() - 1];

        let u = schedule_unitary(&schedule);
        let expect = BlochPoint::from_state(&u.apply(&initial.to_state().unwrap()));
        assert!((rot_end.x - expect.x).abs() < 1e-9, "{rot_end:?} vs {expect:?}");
        assert!((rot_end.y - expect.y).abs() < 1e-9);
        assert!((rot_end.z - expect.z).abs() < 1e-9);
        // Norm is preserved along the whole trajectory.
        for (_, lab, rot) in &pts {
            assert!((lab.norm() - 1.0).abs() < 1e-12);
            assert!((rot.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_sample_count() {
        let params = QubitParams::parameter_set_i();
        let (schedule, _) = dual_sequence(3, 0.9, 0.0, &params, false).unwrap();
        let substeps = 5;
        let pts = evolve_bloch(&schedule, BlochPoint { x: 0.0, y: 0.0, z: 1.0 }, substeps).unwrap();
        // 1 initial + one per substep per segment (6 pulse segments + final),
        // with the sample at each pulse time replaced by its post-kick value.
        assert_eq!(pts.len(), 1 + 7 * substeps);
    }
}
