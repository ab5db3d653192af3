//! Dormand-Prince 5(4) with adaptive step control.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; 0 picks one from the interval length.
    pub h0: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h0: 0.0,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    /// The observer modified the state (e.g. rescaled it).
    Modified,
    Stop,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrator for an `N`-component first-order system.
pub struct Dopri5<const N: usize> {
    pub opts: OdeOptions,
    pub accepted: usize,
    pub rejected: usize,
}

impl<const N: usize> Dopri5<N> {
    pub fn new(opts: OdeOptions) -> Self {
        Self {
            opts,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
    ///
    /// `observe` sees every accepted step and may modify the state. Returns
    /// the final `(t, y)`, which is earlier than `t1` if the observer stopped.
    pub fn solve<F, O>(&mut self, mut f: F, t0: f64, y0: [f64; N], t1: f64, mut observe: O) -> Result<(f64, [f64; N])>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &mut [f64; N]) -> Step,
    {
        let dir = (t1 - t0).signum();
        let span = (t1 - t0).abs();
        if span == 0.0 {
            return Ok((t0, y0));
        }
        let mut t = t0;
        let mut y = y0;
        let mut h = if self.opts.h0 > 0.0 { self.opts.h0 } else { span * 1e-3 };
        h = h.min(self.opts.h_max).min(span);
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, &y);
        let mut steps = 0;
        while (t1 - t) * dir > 0.0 {
            steps += 1;
            if steps > self.opts.max_steps {
                return Err(Error::StiffFailure(t));
            }
            let remaining = (t1 - t).abs();
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = h * dir;
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    *yi += hs * acc;
                }
                k[s] = f(t + C[s] * hs, &ys);
            }
            let mut y_new = y;
            let mut err = 0.0;
            for i in 0..N {
                let acc: f64 = (0..6).map(|s| A[6][s] * k[s][i]).sum();
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum();
                y_new[i] = y[i] + hs * acc;
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                err += (hs * e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() {
                h *= 0.1;
                self.rejected += 1;
                if h < 1e-14 * span {
                    return Err(Error::StiffFailure(t));
                }
                continue;
            }
            if err <= 1.0 {
                self.accepted += 1;
                t = if last { t1 } else { t + hs };
                y = y_new;
                k[0] = k[6];
                match observe(t, &mut y) {
                    Step::Continue => {}
                    Step::Modified => k[0] = f(t, &y),
                    Step::Stop => return Ok((t, y)),
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * fac).min(self.opts.h_max);
            } else {
                self.rejected += 1;
                h *= (0.9 * err.powf(-0.2)).max(0.2);
                if h < 1e-14 * span {
                    return Err(Error::StiffFailure(t));
                }
            }
        }
        Ok((t, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let mut ode = Dopri5::<2>::new(OdeOptions::default());
        let (t, y) = ode
            .solve(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, |_, _| Step::Continue)
            .unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-8);
        assert!((y[1] - 10f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn backward_exponential() {
        let mut ode = Dopri5::<1>::new(OdeOptions::default());
        let (_, y) = ode
            .solve(|_, y| [y[0]], 1.0, [1.0], 0.0, |_, _| Step::Continue)
            .unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn observer_can_rescale_and_stop() {
        let mut ode = Dopri5::<1>::new(OdeOptions::default());
        let mut scale = 0.0;
        let (_, y) = ode
            .solve(
                |_, y| [y[0]],
                0.0,
                [1.0],
                5.0,
                |_, y| {
                    if y[0] > 10.0 {
                        scale += y[0].ln();
                        y[0] = 1.0;
                        Step::Modified
                    } else {
                        Step::Continue
                    }
                },
            )
            .unwrap();
        assert!((scale + y[0].ln() - 5.0).abs() < 1e-8);
        let (t, _) = ode
            .solve(
                |_, y| [y[0]],
                0.0,
                [1.0],
                5.0,
                |t, _| if t > 1.0 { Step::Stop } else { Step::Continue },
            )
            .unwrap();
        assert!(t > 1.0 && t < 5.0);
    }
}
