//! Fourth-order symplectic integration of the driven mode system.
//!
//! The Hamiltonian splits into the free oscillators, whose flow is an exact
//! rotation of each `(q_k, p_k)` pair, and the rank-one drive term
//! `−½ f(t) (Σ ω_k q_k)²`, whose flow is an exact momentum kick. A Yoshida
//! triple-jump composition of the symmetric drift-kick-drift step gives a
//! time-reversible fourth-order scheme that conserves the undriven energy
//! to rounding error.

use num_complex::Complex64;

use super::ModeSystem;
use crate::error::{Error, Result};

/// Amplitudes above this are treated as a blow-up.
const OVERFLOW_GUARD: f64 = 1e150;

/// Complex amplitudes `A_k` and velocities `Ȧ_k` of all modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub amplitude: Vec<Complex64>,
    pub velocity: Vec<Complex64>,
}

impl ModeState {
    /// Pure positive-frequency excitation of mode `seed`:
    /// `A = δ_k,seed`, `Ȧ = −iω_seed δ_k,seed`.
    pub fn seed(frequencies: &[f64], seed: usize) -> Self {
        let k = frequencies.len();
        let mut amplitude = vec![Complex64::new(0.0, 0.0); k];
        let mut velocity = amplitude.clone();
        amplitude[seed] = Complex64::new(1.0, 0.0);
        velocity[seed] = Complex64::new(0.0, -frequencies[seed]);
        ModeState {
            amplitude,
            velocity,
        }
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }
}

/// `Σ_k (|Ȧ_k|² + ω_k²|A_k|²)`, conserved by the undriven flow.
pub fn undriven_energy(frequencies: &[f64], state: &ModeState) -> f64 {
    frequencies
        .iter()
        .zip(state.amplitude.iter().zip(&state.velocity))
        .map(|(w, (q, p))| p.norm_sqr() + w * w * q.norm_sqr())
        .sum()
}

// Yoshida triple-jump weights.
fn yoshida() -> ([f64; 2], [f64; 3]) {
    let cbrt2 = 2f64.cbrt();
    let w1 = 1.0 / (2.0 - cbrt2);
    let w0 = -cbrt2 * w1;
    ([0.5 * w1, 0.5 * (w0 + w1)], [w1, w0, w1])
}

struct Rotation {
    cos: Vec<f64>,
    sin_over_w: Vec<f64>,
    w_sin: Vec<f64>,
}

impl Rotation {
    fn new(frequencies: &[f64], tau: f64) -> Self {
        let mut cos = Vec::with_capacity(frequencies.len());
        let mut sin_over_w = Vec::with_capacity(frequencies.len());
        let mut w_sin = Vec::with_capacity(frequencies.len());
        for &w in frequencies {
            let (s, c) = (w * tau).sin_cos();
            cos.push(c);
            sin_over_w.push(s / w);
            w_sin.push(w * s);
        }
        Rotation {
            cos,
            sin_over_w,
            w_sin,
        }
    }
}

/// Split real/imaginary storage so the inner loops vectorise.
struct Workspace {
    q_re: Vec<f64>,
    q_im: Vec<f64>,
    p_re: Vec<f64>,
    p_im: Vec<f64>,
    /// ω_k, the weights of the mode sum.
    sum_weight: Vec<f64>,
    /// ±ω_k, the weights of the force (sign flipped on a defective mode).
    kick_weight: Vec<f64>,
}

impl Workspace {
    /// Applies the pending kick `p_k += kick · kick_weight_k`, rotates every
    /// mode and returns the new mode sum `Σ ω_k q_k`.
    #[inline]
    fn kick_rotate_sum(&mut self, kick: Complex64, rot: &Rotation) -> Complex64 {
        let n = self.q_re.len();
        let (mut s_re, mut s_im) = (0.0, 0.0);
        let (q_re, q_im) = (&mut self.q_re[..n], &mut self.q_im[..n]);
        let (p_re, p_im) = (&mut self.p_re[..n], &mut self.p_im[..n]);
        let (sw, kw) = (&self.sum_weight[..n], &self.kick_weight[..n]);
        let (c, so, ws) = (&rot.cos[..n], &rot.sin_over_w[..n], &rot.w_sin[..n]);
        for k in 0..n {
            let pr = p_re[k] + kick.re * kw[k];
            let pi = p_im[k] + kick.im * kw[k];
            let qr = q_re[k];
            let qi = q_im[k];
            let nqr = c[k] * qr + so[k] * pr;
            let nqi = c[k] * qi + so[k] * pi;
            p_re[k] = c[k] * pr - ws[k] * qr;
            p_im[k] = c[k] * pi - ws[k] * qi;
            q_re[k] = nqr;
            q_im[k] = nqi;
            s_re += sw[k] * nqr;
            s_im += sw[k] * nqi;
        }
        Complex64::new(s_re, s_im)
    }
}

/// Evolves the seed state of mode `seed` from t = 0 to `total_time`.
pub fn evolve(system: &ModeSystem, seed: usize) -> Result<ModeState> {
    system.validate()?;
    if seed >= system.mode_count {
        return Err(Error::validation(format!(
            "seed mode {seed} out of range for {} modes",
            system.mode_count
        )));
    }
    let state = ModeState::seed(&system.frequencies(), seed);
    evolve_state(system, state, 0.0, system.total_time)
}

/// Evolves `state` from `t0` to `t1`; `t1 < t0` integrates backwards and
/// retraces a forward run to rounding error.
pub fn evolve_state(system: &ModeSystem, state: ModeState, t0: f64, t1: f64) -> Result<ModeState> {
    system.validate()?;
    let frequencies = system.frequencies();
    if state.len() != frequencies.len() || state.velocity.len() != frequencies.len() {
        return Err(Error::validation(format!(
            "state has {} modes, system has {}",
            state.len(),
            frequencies.len()
        )));
    }
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(state);
    }
    let steps = (span.abs() / system.time_step).ceil().max(1.0) as usize;
    let dt = span / steps as f64;

    let ([c1, c2], [d1, d2, d3]) = yoshida();
    let first = Rotation::new(&frequencies, c1 * dt);
    let inner = Rotation::new(&frequencies, c2 * dt);
    let joined = Rotation::new(&frequencies, 2.0 * c1 * dt);

    let mut kick_weight = frequencies.clone();
    if let Some(k) = system.coupling_defect {
        kick_weight[k] = -kick_weight[k];
    }
    let mut ws = Workspace {
        q_re: state.amplitude.iter().map(|z| z.re).collect(),
        q_im: state.amplitude.iter().map(|z| z.im).collect(),
        p_re: state.velocity.iter().map(|z| z.re).collect(),
        p_im: state.velocity.iter().map(|z| z.im).collect(),
        sum_weight: frequencies.clone(),
        kick_weight,
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut sum = ws.kick_rotate_sum(zero, &first);
    for n in 0..steps {
        let t = t0 + dt * n as f64;
        let t_a = t + c1 * dt;
        let t_b = t_a + c2 * dt;
        let t_c = t_b + c2 * dt;
        sum = ws.kick_rotate_sum(sum * (d1 * dt * system.modulation(t_a)), &inner);
        sum = ws.kick_rotate_sum(sum * (d2 * dt * system.modulation(t_b)), &inner);
        let last = if n + 1 == steps { &first } else { &joined };
        sum = ws.kick_rotate_sum(sum * (d3 * dt * system.modulation(t_c)), last);

        let magnitude = sum.norm();
        if !magnitude.is_finite() || magnitude > OVERFLOW_GUARD {
            return Err(Error::Instability {
                time: t + dt,
                amplitude: magnitude,
            });
        }
    }

    let join = |re: &[f64], im: &[f64]| {
        re.iter()
            .zip(im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect::<Vec<_>>()
    };
    Ok(ModeState {
        amplitude: join(&ws.q_re, &ws.q_im),
        velocity: join(&ws.p_re, &ws.p_im),
    })
}
