//! Dormand–Prince 5(4) integrator with terminal event location.
//!
//! Events are located by re-stepping from the start of the step that
//! changed the sign of the event function, root-finding on the step size.
//! Each trial step is a full 5th-order step no longer than an accepted one,
//! so located states carry the same local accuracy as ordinary steps.

use thiserror::Error;

use super::roots::brent_with_values;

/// Right-hand side of `dy/ds = f(s, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, s: f64, y: &[f64; N], dy: &mut [f64; N]);
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },
    #[error("step budget of {max_steps} exhausted at s = {s}")]
    StepLimit { s: f64, max_steps: usize },
    #[error("non-finite state at s = {s}")]
    NonFinite { s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the requested end of the interval.
    Reached,
    /// The event function changed sign; the final sample sits on its zero.
    Event,
    /// The stop predicate requested termination.
    Stopped,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub samples: Vec<(f64, [f64; N])>,
    pub termination: Termination,
    pub steps: usize,
    pub rejected: usize,
}

impl<const N: usize> Solution<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        *self.samples.last().expect("solution always holds the initial state")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `0` selects `1e-3·|s_end − s0|`.
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Keep every accepted state, not just the first and last.
    pub record: bool,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, h_init: 0.0, h_max: f64::INFINITY, max_steps: 200_000, record: true }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Step<const N: usize> {
    y: [f64; N],
    k_end: [f64; N],
    err: f64,
}

impl Dopri5 {
    fn step<const N: usize, S: OdeSystem<N>>(&self, sys: &S, s: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> Step<N> {
        let mut k2 = [0.0; N];
        let mut k3 = [0.0; N];
        let mut k4 = [0.0; N];
        let mut k5 = [0.0; N];
        let mut k6 = [0.0; N];
        let mut k7 = [0.0; N];
        let mut tmp = [0.0; N];

        for i in 0..N {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(s + C2 * h, &tmp, &mut k2);
        for i in 0..N {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(s + C3 * h, &tmp, &mut k3);
        for i in 0..N {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(s + C4 * h, &tmp, &mut k4);
        for i in 0..N {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(s + C5 * h, &tmp, &mut k5);
        for i in 0..N {
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(s + h, &tmp, &mut k6);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        sys.rhs(s + h, &y_new, &mut k7);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        Step { y: y_new, k_end: k7, err }
    }

    /// Integrates from `s0` to `s_end` without events.
    pub fn solve<const N: usize, S: OdeSystem<N>>(&self, sys: &S, s0: f64, y0: [f64; N], s_end: f64) -> Result<Solution<N>, OdeError> {
        self.solve_with(sys, s0, y0, s_end, |_, _| 1.0, |_, _| false)
    }

    /// Integrates until `s_end`, a sign change of `event`, or until `stop`
    /// returns true on an accepted state (whichever comes first).
    pub fn solve_with<const N: usize, S, E, P>(
        &self,
        sys: &S,
        s0: f64,
        y0: [f64; N],
        s_end: f64,
        event: E,
        mut stop: P,
    ) -> Result<Solution<N>, OdeError>
    where
        S: OdeSystem<N>,
        E: Fn(f64, &[f64; N]) -> f64,
        P: FnMut(f64, &[f64; N]) -> bool,
    {
        let span = s_end - s0;
        let dir = span.signum();
        let mut samples = vec![(s0, y0)];
        if span == 0.0 {
            return Ok(Solution { samples, termination: Termination::Reached, steps: 0, rejected: 0 });
        }
        let mut s = s0;
        let mut y = y0;
        let mut k1 = [0.0; N];
        sys.rhs(s, &y, &mut k1);
        let mut g = event(s, &y);
        let mut h = if self.h_init > 0.0 { self.h_init } else { 1e-3 * span.abs() };
        h = h.min(self.h_max).min(span.abs());
        let mut steps = 0;
        let mut rejected = 0;

        loop {
            if steps >= self.max_steps {
                return Err(OdeError::StepLimit { s, max_steps: self.max_steps });
            }
            let remaining = (s_end - s).abs();
            let last = h >= remaining;
            let h_try = if last { remaining } else { h };
            let trial = self.step(sys, s, &y, &k1, dir * h_try);
            if !trial.err.is_finite() || trial.y.iter().any(|v| !v.is_finite()) {
                if h_try <= 1e-14 * (1.0 + s.abs()) {
                    return Err(OdeError::NonFinite { s });
                }
                h = 0.25 * h_try;
                rejected += 1;
                continue;
            }
            if trial.err > 1.0 {
                let factor = (0.9 * trial.err.powf(-0.2)).clamp(0.2, 1.0);
                h = h_try * factor;
                rejected += 1;
                if h <= 1e-15 * (1.0 + s.abs()) {
                    return Err(OdeError::StepUnderflow { s });
                }
                continue;
            }
            steps += 1;
            let s_new = if last { s_end } else { s + dir * h_try };
            let g_new = event(s_new, &trial.y);
            if g != 0.0 && g_new.signum() != g.signum() {
                let (s_hit, y_hit) = self.locate(sys, s, &y, &k1, dir * h_try, g, g_new, &event);
                samples.push((s_hit, y_hit));
                return Ok(Solution { samples, termination: Termination::Event, steps, rejected });
            }
            s = s_new;
            y = trial.y;
            k1 = trial.k_end;
            g = g_new;
            if self.record || last {
                samples.push((s, y));
            } else if samples.len() == 1 {
                samples.push((s, y));
            } else {
                *samples.last_mut().expect("non-empty") = (s, y);
            }
            if stop(s, &y) {
                return Ok(Solution { samples, termination: Termination::Stopped, steps, rejected });
            }
            if last {
                return Ok(Solution { samples, termination: Termination::Reached, steps, rejected });
            }
            let factor = if trial.err == 0.0 { 5.0 } else { (0.9 * trial.err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h_try * factor).min(self.h_max);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn locate<const N: usize, S, E>(
        &self,
        sys: &S,
        s: f64,
        y: &[f64; N],
        k1: &[f64; N],
        h: f64,
        g0: f64,
        g1: f64,
        event: &E,
    ) -> (f64, [f64; N])
    where
        S: OdeSystem<N>,
        E: Fn(f64, &[f64; N]) -> f64,
    {
        let eval = |frac: f64| {
            let st = self.step(sys, s, y, k1, frac * h);
            event(s + frac * h, &st.y)
        };
        let frac = match brent_with_values(eval, 0.0, g0, 1.0, g1, 1e-15, 200) {
            Ok(root) => root.x,
            Err(_) => 1.0,
        };
        let st = self.step(sys, s, y, k1, frac * h);
        (s + frac * h, st.y)
    }
}
