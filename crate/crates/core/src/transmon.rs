//! Three-level transmon model driven by SFQ pulse trains.
//!
//! The computational levels 0 and 1 sit at 0 and `omega01`; the leakage
//! level 2 sits at `omega02 = 2*omega01 - alpha`. Between pulses the state
//! accumulates bare phases; each pulse applies an instantaneous orthogonal
//! kick generated by the charge-coupling matrix `M`. Finite-width drives go
//! through the Runge-Kutta waveform integrator instead.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SfqError};
use crate::params::{QubitParams, PHI0};
use crate::pulsetrain::{PulseEvent, PulseTrain, Waveform};
use crate::twolevel::Unitary2;

/// Converts a pulse's integrated flux (in units of the flux quantum) into
/// the exponent scale of its kick: a unit pulse applies `exp((delta_theta/2) M)`,
/// which rotates the 0-1 transition by exactly `delta_theta`.
pub const KICK_AREA_FACTOR: f64 = 0.5;

fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

/// Charge-coupling kick generator.
///
/// `M` is real and antisymmetric with matrix elements 1 and sqrt(2) on the
/// 0-1 and 1-2 transitions; it satisfies `M^3 = -3 M`, so its exponential
/// has the closed form used by [`kick_propagator`].
pub struct KickGenerator;

impl KickGenerator {
    pub const M: [[f64; 3]; 3] = [
        [0.0, -1.0, 0.0],
        [1.0, 0.0, -std::f64::consts::SQRT_2],
        [0.0, std::f64::consts::SQRT_2, 0.0],
    ];

    /// `M` squared (symmetric, negative semidefinite).
    pub const M2: [[f64; 3]; 3] = [
        [-1.0, 0.0, std::f64::consts::SQRT_2],
        [0.0, -3.0, 0.0],
        [std::f64::consts::SQRT_2, 0.0, -2.0],
    ];

    /// The generator scaled for a kick of 0-1 rotation angle `angle`:
    /// `(angle/2) * M`.
    pub fn scaled(angle: f64) -> [[f64; 3]; 3] {
        let a = KICK_AREA_FACTOR * angle;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = a * Self::M[i][j];
            }
        }
        out
    }
}

/// A 3x3 complex matrix, usually unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary3 {
    m: [[C64; 3]; 3],
}

impl Unitary3 {
    pub fn identity() -> Self {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        Unitary3 {
            m: [[one, zero, zero], [zero, one, zero], [zero, zero, one]],
        }
    }

    pub fn from_matrix(m: [[C64; 3]; 3]) -> Self {
        Unitary3 { m }
    }

    pub fn matrix(&self) -> &[[C64; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn mul(&self, rhs: &Unitary3) -> Unitary3 {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Unitary3 { m: out }
    }

    pub fn dagger(&self) -> Unitary3 {
        let mut out = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[j][i].conj();
            }
        }
        Unitary3 { m: out }
    }

    pub fn transpose(&self) -> Unitary3 {
        let mut out = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[j][i];
            }
        }
        Unitary3 { m: out }
    }

    pub fn apply(&self, s: &State3) -> State3 {
        let a = &s.amp;
        let mut out = [C64::new(0.0, 0.0); 3];
        for (i, v) in out.iter_mut().enumerate() {
            *v = self.m[i][0] * a[0] + self.m[i][1] * a[1] + self.m[i][2] * a[2];
        }
        State3 { amp: out }
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn max_abs_diff(&self, other: &Unitary3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    /// Upper-left 2x2 block (the computational subspace). Not unitary in
    /// general; leakage removes weight from it.
    pub fn block01(&self) -> Unitary2 {
        Unitary2::from_matrix([
            [self.m[0][0], self.m[0][1]],
            [self.m[1][0], self.m[1][1]],
        ])
    }
}

/// Three-level state vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State3 {
    pub amp: [C64; 3],
}

impl State3 {
    pub fn ground() -> Self {
        State3 {
            amp: [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    pub fn from_amplitudes(a0: C64, a1: C64, a2: C64) -> Self {
        State3 { amp: [a0, a1, a2] }
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn populations(&self) -> [f64; 3] {
        [
            self.amp[0].norm_sqr(),
            self.amp[1].norm_sqr(),
            self.amp[2].norm_sqr(),
        ]
    }

    /// Population of the leakage level, `|a2|^2`.
    pub fn leakage(&self) -> f64 {
        self.amp[2].norm_sqr()
    }
}

/// Free (drive-off) propagator over a nonnegative interval `dt`:
/// `diag(1, exp(-i omega01 dt), exp(-i omega02 dt))`.
pub fn free_propagator(dt: f64, params: &QubitParams) -> Result<Unitary3> {
    if dt < 0.0 {
        return Err(SfqError::Domain(format!(
            "free_propagator requires dt >= 0, got {dt}"
        )));
    }
    let zero = C64::new(0.0, 0.0);
    Ok(Unitary3 {
        m: [
            [C64::new(1.0, 0.0), zero, zero],
            [zero, cis(-params.omega01 * dt), zero],
            [zero, zero, cis(-params.omega02() * dt)],
        ],
    })
}

/// Instantaneous kick `exp((angle/2) M)` for a pulse rotating the 0-1
/// transition by `angle` (signed). Evaluated in closed form using
/// `M^3 = -3M`:
/// `exp(aM) = I + sin(sqrt(3) a)/sqrt(3) * M + (1 - cos(sqrt(3) a))/3 * M^2`.
///
/// The per-pulse tip is a perturbative quantity; angles at or beyond pi are
/// outside the model's validity and are rejected.
pub fn kick_propagator(angle: f64) -> Result<Unitary3> {
    if !angle.is_finite() || angle.abs() >= std::f64::consts::PI {
        return Err(SfqError::Domain(format!(
            "kick angle must satisfy |angle| < pi, got {angle}"
        )));
    }
    let a = KICK_AREA_FACTOR * angle;
    let sqrt3 = 3.0f64.sqrt();
    let s = (sqrt3 * a).sin() / sqrt3;
    let c = (1.0 - (sqrt3 * a).cos()) / 3.0;
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let base = if i == j { 1.0 } else { 0.0 };
            *cell = C64::new(
                base + s * KickGenerator::M[i][j] + c * KickGenerator::M2[i][j],
                0.0,
            );
        }
    }
    Ok(Unitary3 { m })
}

fn kick_angle(params: &QubitParams, area: f64, polarity: i8) -> f64 {
    // Unit flux quantum <-> delta_theta; other areas scale linearly.
    params.delta_theta * polarity as f64 * (area / PHI0)
}

/// Kicks for the overwhelmingly common unit-area events, computed once per
/// train instead of once per pulse.
struct KickCache {
    plus: Unitary3,
    minus: Unitary3,
}

impl KickCache {
    fn new(params: &QubitParams) -> Result<Self> {
        Ok(KickCache {
            plus: kick_propagator(params.delta_theta)?,
            minus: kick_propagator(-params.delta_theta)?,
        })
    }

    fn get(&self, params: &QubitParams, ev: &PulseEvent) -> Result<Unitary3> {
        if ev.area == PHI0 {
            Ok(if ev.polarity == 1 { self.plus } else { self.minus })
        } else {
            kick_propagator(kick_angle(params, ev.area, ev.polarity))
        }
    }
}

/// Evolve an initial state through a pulse train with the kick-operator
/// engine, timing phases referenced to the first pulse. Returns the final
/// state and the total propagator over `[t_first, t_last]`.
pub fn evolve_kicks(
    train: &PulseTrain,
    params: &QubitParams,
    initial: &State3,
) -> Result<(State3, Unitary3)> {
    let cache = KickCache::new(params)?;
    let mut u = Unitary3::identity();
    let mut prev_time = None;
    for (i, ev) in train.events().iter().enumerate() {
        let gap = match prev_time {
            None => 0.0,
            Some(t) => {
                if ev.time <= t {
                    return Err(SfqError::NonMonotone { index: i, prev: t, next: ev.time });
                }
                ev.time - t
            }
        };
        if gap > 0.0 {
            u = free_propagator(gap, params)?.mul(&u);
        }
        u = cache.get(params, ev)?.mul(&u);
        prev_time = Some(ev.time);
    }
    Ok((u.apply(initial), u))
}

/// State-only fast path of [`evolve_kicks`]; identical arithmetic on the
/// state vector without accumulating the 3x3 propagator.
pub fn evolve_kicks_state(
    train: &PulseTrain,
    params: &QubitParams,
    initial: &State3,
) -> Result<State3> {
    let cache = KickCache::new(params)?;
    let mut s = *initial;
    let mut prev_time = None;
    for (i, ev) in train.events().iter().enumerate() {
        let gap = match prev_time {
            None => 0.0,
            Some(t) => {
                if ev.time <= t {
                    return Err(SfqError::NonMonotone { index: i, prev: t, next: ev.time });
                }
                ev.time - t
            }
        };
        if gap > 0.0 {
            let w1 = cis(-params.omega01 * gap);
            let w2 = cis(-params.omega02() * gap);
            s.amp[1] *= w1;
            s.amp[2] *= w2;
        }
        let k = cache.get(params, ev)?;
        s = k.apply(&s);
        prev_time = Some(ev.time);
    }
    Ok(s)
}

/// Propagator over `[t0, t1]` in the frame co-rotating with the bare levels
/// (`D(t) = diag(1, e^{-i omega01 t}, e^{-i omega02 t})`,
/// `U_rot = D(t1)^dag U_lab D(t0)`). The window must contain the train.
pub fn rotating_frame_propagator(
    train: &PulseTrain,
    params: &QubitParams,
    t0: f64,
    t1: f64,
) -> Result<Unitary3> {
    if train.is_empty() {
        return Err(SfqError::EmptyTrain);
    }
    let first = train.first_time().unwrap();
    let last = train.last_time().unwrap();
    if t0 > first || t1 < last {
        return Err(SfqError::Domain(format!(
            "window [{t0}, {t1}] does not contain the train [{first}, {last}]"
        )));
    }
    let (_, mut u) = evolve_kicks(train, params, &State3::ground())?;
    u = free_propagator(t1 - last, params)?.mul(&u);
    u = u.mul(&free_propagator(first - t0, params)?);
    let frame = |t: f64| {
        Unitary3::from_matrix([
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), cis(-params.omega01 * t), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0), cis(-params.omega02() * t)],
        ])
    };
    Ok(frame(t1).dagger().mul(&u).mul(&frame(t0)))
}

/// Average gate fidelity of the computational block of `u_sim` against a
/// two-level target: `F = (tr(M^dag M) + |tr M|^2) / 6` with
/// `M = target^dag * block01(u_sim)`. Leakage shows up as `tr(M^dag M) < 2`.
pub fn gate_fidelity(u_sim: &Unitary3, target: &Unitary2) -> f64 {
    let m = target.dagger().mul(&u_sim.block01());
    let mdm = m.dagger().mul(&m);
    (mdm.trace().re + m.trace().norm_sqr()) / 6.0
}

/// Integrate the time-dependent Schroedinger equation for a sampled drive
/// waveform with classic fourth-order Runge-Kutta.
///
/// The coupling is `g * v(t) * M` with `g = delta_theta * KICK_AREA_FACTOR / phi0`,
/// so a rendered unit SFQ pulse reproduces [`kick_propagator`] of
/// `delta_theta` up to pulse-overlap corrections. Each RK4 step spans two
/// sample intervals so the odd samples provide exact midpoints; the grid
/// must resolve the fastest bare frequency with at least 20 samples per
/// period. Returns the final state and the propagator over the full grid.
pub fn evolve_waveform(
    waveform: &Waveform,
    params: &QubitParams,
    initial: &State3,
) -> Result<(State3, Unitary3)> {
    if waveform.len() < 3 {
        return Err(SfqError::Resolution(
            "waveform needs at least 3 samples for RK4 integration".into(),
        ));
    }
    let dt = waveform.sample_interval;
    let fastest_period = std::f64::consts::TAU / params.omega02();
    if dt > fastest_period / 20.0 {
        return Err(SfqError::Resolution(format!(
            "sample interval {dt:.3e} s exceeds 1/20 of the fastest period {fastest_period:.3e} s"
        )));
    }
    let g = params.delta_theta * KICK_AREA_FACTOR / PHI0;
    let freqs = [0.0, params.omega01, params.omega02()];

    // Columns of the propagator evolve like states; carry all three plus
    // nothing else (the final state is U * initial, computed at the end so
    // the state and propagator cannot drift apart).
    let mut cols = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];

    let deriv = |v: f64, y: &[C64; 3]| -> [C64; 3] {
        let gv = g * v;
        let m = &KickGenerator::M;
        let mut out = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            let mut acc = C64::new(0.0, -freqs[i]) * y[i];
            for j in 0..3 {
                if m[i][j] != 0.0 {
                    acc += gv * m[i][j] * y[j];
                }
            }
            out[i] = acc;
        }
        out
    };
    let rk4_step = |y: &mut [C64; 3], h: f64, v0: f64, vm: f64, v1: f64| {
        let k1 = deriv(v0, y);
        let y2 = add_scaled(y, &k1, 0.5 * h);
        let k2 = deriv(vm, &y2);
        let y3 = add_scaled(y, &k2, 0.5 * h);
        let k3 = deriv(vm, &y3);
        let y4 = add_scaled(y, &k3, h);
        let k4 = deriv(v1, &y4);
        for i in 0..3 {
            y[i] += (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * (h / 6.0);
        }
    };

    let s = &waveform.samples;
    let mut i = 0;
    while i + 2 < s.len() {
        for col in &mut cols {
            rk4_step(col, 2.0 * dt, s[i], s[i + 1], s[i + 2]);
        }
        i += 2;
    }
    if i + 1 < s.len() {
        // One sample interval left over: a single RK4 step with the midpoint
        // drive approximated by the endpoint average.
        let vm = 0.5 * (s[i] + s[i + 1]);
        for col in &mut cols {
            rk4_step(col, dt, s[i], vm, s[i + 1]);
        }
    }

    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = col[i];
        }
    }
    let u = Unitary3::from_matrix(m);
    Ok((u.apply(initial), u))
}

fn add_scaled(y: &[C64; 3], k: &[C64; 3], h: f64) -> [C64; 3] {
    [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulsetrain::{
        dual_sequence, render_waveform, single_sequence, PulseEvent, PulseShape,
    };
    use crate::twolevel::{rotation_y, Unitary2};
    use std::f64::consts::PI;

    #[test]
    fn generator_identities() {
        let m = KickGenerator::M;
        // Antisymmetric.
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[i][j], -m[j][i]);
            }
        }
        // M^2 matches the stored constant and M^3 = -3M.
        let mut m2 = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m2[i][j] = (0..3).map(|k| m[i][k] * m[k][j]).sum();
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((m2[i][j] - KickGenerator::M2[i][j]).abs() < 1e-15);
                let m3: f64 = (0..3).map(|k| m2[i][k] * m[k][j]).sum();
                assert!((m3 - -3.0 * m[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn kick_closed_form_properties() {
        assert!(kick_propagator(0.0).unwrap().max_abs_diff(&Unitary3::identity()) < 1e-15);
        for &angle in &[PI / 30.0, -PI / 30.0, 0.7, -1.4, 3.0] {
            let k = kick_propagator(angle).unwrap();
            // Unitary (real orthogonal).
            assert!(k.dagger().mul(&k).max_abs_diff(&Unitary3::identity()) < 1e-14);
            // Eigenvalue sum: 1 + 2 cos(sqrt(3) angle / 2).
            let expect = 1.0 + 2.0 * (3.0f64.sqrt() * angle / 2.0).cos();
            assert!((k.trace().re - expect).abs() < 1e-13);
            assert!(k.trace().im.abs() < 1e-15);
            // Exponential additivity.
            let half = kick_propagator(angle / 2.0).unwrap();
            assert!(half.mul(&half).max_abs_diff(&k) < 1e-14);
        }
        assert!(kick_propagator(PI).is_err());
        assert!(kick_propagator(-4.0).is_err());
    }

    #[test]
    fn free_propagator_phases() {
        let params = QubitParams::parameter_set_i();
        assert!(free_propagator(-1e-12, &params).is_err());
        let u = free_propagator(0.0, &params).unwrap();
        assert!(u.max_abs_diff(&Unitary3::identity()) < 1e-15);
        // Over one clock period the 0-1 phase returns to +1 (resonant clock)
        // while level 2 advances by alpha*T = 2 pi * 0.08.
        let t = params.clock_period();
        let u = free_propagator(t, &params).unwrap();
        assert!((u.entry(1, 1) - C64::new(1.0, 0.0)).norm() < 1e-9);
        let phase = u.entry(2, 2).arg();
        assert!((phase - std::f64::consts::TAU * 0.08).abs() < 1e-9, "phase = {phase}");
    }

    #[test]
    fn evolve_kicks_single_pi_train() {
        let params = QubitParams::parameter_set_i();
        let train = single_sequence(30, &params);
        let (state, u) = evolve_kicks(&train, &params, &State3::ground()).unwrap();
        // Unitarity of the accumulated propagator.
        assert!(u.dagger().mul(&u).max_abs_diff(&Unitary3::identity()) < 1e-12);
        // The state path and the propagator path agree.
        let via_u = u.apply(&State3::ground());
        let diff: f64 = state
            .amp
            .iter()
            .zip(&via_u.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
        // Frozen leakage of the 30-pulse single-pulse pi rotation, set I.
        let leak = state.leakage();
        assert!((leak - 0.021_047_061_105_607_02).abs() < 1e-9, "leak = {leak}");
        assert!(leak > 1e-3);
        // Fast path matches exactly.
        let fast = evolve_kicks_state(&train, &params, &State3::ground()).unwrap();
        for (a, b) in fast.amp.iter().zip(&state.amp) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn evolve_kicks_edge_cases() {
        let params = QubitParams::parameter_set_i();
        let empty = PulseTrain::new(vec![], params.clock_period()).unwrap();
        let (s, u) = evolve_kicks(&empty, &params, &State3::ground()).unwrap();
        assert!(u.max_abs_diff(&Unitary3::identity()) < 1e-15);
        assert!((s.amp[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mirror_train_gives_transpose() {
        let params = QubitParams::parameter_set_i();
        let (_, train) = dual_sequence(7, 1.05, 0.3, &params, false).unwrap();
        let (_, u_fwd) = evolve_kicks(&train, &params, &State3::ground()).unwrap();

        let first = train.first_time().unwrap();
        let last = train.last_time().unwrap();
        let mut mirrored: Vec<PulseEvent> = train
            .events()
            .iter()
            .rev()
            .map(|e| PulseEvent {
                time: first + last - e.time,
                area: e.area,
                polarity: -e.polarity,
            })
            .collect();
        mirrored.sort_by(|a, b| a.time.total_cmp(&b.time));
        let train_m = PulseTrain::new(mirrored, train.clock_period()).unwrap();
        let (_, u_m) = evolve_kicks(&train_m, &params, &State3::ground()).unwrap();
        // Polarity-flipped time reversal transposes the propagator: free
        // segments are symmetric diagonals and inverted kicks are transposed
        // orthogonals, so the reversed product is the transpose.
        assert!(u_m.max_abs_diff(&u_fwd.transpose()) < 1e-12);
    }

    #[test]
    fn rotating_frame_window_checks() {
        let params = QubitParams::parameter_set_i();
        let (_, train) = dual_sequence(3, 1.0, 0.0, &params, false).unwrap();
        let first = train.first_time().unwrap();
        let last = train.last_time().unwrap();
        assert!(rotating_frame_propagator(&train, &params, first + 1e-12, last + 1e-10).is_err());
        let u = rotating_frame_propagator(&train, &params, first - 1e-10, last + 1e-10).unwrap();
        assert!(u.dagger().mul(&u).max_abs_diff(&Unitary3::identity()) < 1e-12);
    }

    #[test]
    fn gate_fidelity_reference_points() {
        let id3 = Unitary3::identity();
        assert!((gate_fidelity(&id3, &Unitary2::identity()) - 1.0).abs() < 1e-15);
        // Orthogonal target: F = 2/6.
        let f = gate_fidelity(&id3, &rotation_y(PI));
        assert!((f - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn waveform_integrator_matches_kick_engine() {
        let params = QubitParams::parameter_set_i();
        let train = single_sequence(3, &params);
        let shape = PulseShape::default_gaussian();
        let rate = 2.0e13;
        let padding = 1.0e-11;
        let wf = render_waveform(&train, shape, rate, padding).unwrap();
        let (s_wf, u_wf) = evolve_waveform(&wf, &params, &State3::ground()).unwrap();
        assert!((s_wf.norm() - 1.0).abs() < 1e-7, "norm drift {}", s_wf.norm() - 1.0);

        // Compare in the rotating frame over the same window.
        let u_kick =
            rotating_frame_propagator(&train, &params, wf.start_time, wf.time(wf.len() - 1))
                .unwrap();
        let d = |t: f64| {
            Unitary3::from_matrix([
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), cis(-params.omega01 * t), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(0.0, 0.0), cis(-params.omega02() * t)],
            ])
        };
        let t_end = wf.time(wf.len() - 1);
        let u_wf_rot = d(t_end).dagger().mul(&u_wf).mul(&d(wf.start_time));
        // Fidelity-style overlap of the two 3x3 propagators.
        let overlap = u_kick.dagger().mul(&u_wf_rot).trace().norm() / 3.0;
        assert!(overlap > 1.0 - 1e-4, "overlap = {overlap}");
        assert!((s_wf.leakage() - u_kick.apply(&State3::ground()).leakage()).abs() < 1e-4);
    }

    #[test]
    fn waveform_resolution_guard() {
        let params = QubitParams::parameter_set_i();
        let wf = Waveform {
            samples: vec![0.0; 100],
            sample_interval: 1.0e-11,
            start_time: 0.0,
        };
        assert!(matches!(
            evolve_waveform(&wf, &params, &State3::ground()),
            Err(SfqError::Resolution(_))
        ));
        // Drive-free grid reproduces bare phases. Fourth-order truncation
        // error scales as (omega h)^5 per step, so a 0.1 ps grid leaves
        // only ~1e-9 over the 200 ps span.
        let wf = Waveform {
            samples: vec![0.0; 2001],
            sample_interval: 1.0e-13,
            start_time: 0.0,
        };
        let (_, u) = evolve_waveform(&wf, &params, &State3::ground()).unwrap();
        let expect = free_propagator(200.0e-12, &params).unwrap();
        assert!(u.max_abs_diff(&expect) < 1e-6, "diff = {}", u.max_abs_diff(&expect));
    }
}
