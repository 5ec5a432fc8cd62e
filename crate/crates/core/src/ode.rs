//! Dormand–Prince 5(4) with step-size control and the standard
//! fourth-order continuous extension, used to sample the solution on a
//! prescribed set of output times.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Dopri5Options {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_step: Option<f64>,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            initial_step: None,
            min_step: 1e-14,
            max_step: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Dopri5Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `f(t, y, dy)` from `times[0]` and returns y at every entry of
/// `times` (non-decreasing).
pub fn integrate_dense<const N: usize, F>(
    mut f: F,
    y0: [f64; N],
    times: &[f64],
    opts: &Dopri5Options,
) -> Result<(Vec<[f64; N]>, Dopri5Stats)>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    let mut stats = Dopri5Stats::default();
    let mut out = Vec::with_capacity(times.len());
    if times.is_empty() {
        return Ok((out, stats));
    }
    let t_end = *times.last().unwrap();
    let mut t = times[0];
    let mut y = y0;
    let mut next = 0;
    while next < times.len() && times[next] <= t {
        out.push(y);
        next += 1;
    }
    if next == times.len() {
        return Ok((out, stats));
    }

    let mut k1 = [0.0; N];
    f(t, &y, &mut k1);
    stats.evaluations += 1;
    let mut h = opts
        .initial_step
        .unwrap_or(1e-3 * (t_end - t))
        .min(opts.max_step)
        .min(t_end - t);
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        ([0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N]);

    while next < times.len() {
        if stats.accepted + stats.rejected >= opts.max_steps || h < opts.min_step {
            return Err(Error::StepSize { t });
        }
        let h_step = h.min(t_end - t);
        f(t + C2 * h_step, &axpy(&y, h_step, &[(A21, &k1)]), &mut k2);
        f(t + C3 * h_step, &axpy(&y, h_step, &[(A31, &k1), (A32, &k2)]), &mut k3);
        f(
            t + C4 * h_step,
            &axpy(&y, h_step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            &mut k4,
        );
        f(
            t + C5 * h_step,
            &axpy(&y, h_step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            &mut k5,
        );
        f(
            t + h_step,
            &axpy(
                &y,
                h_step,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
            &mut k6,
        );
        let y_new = axpy(
            &y,
            h_step,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        f(t + h_step, &y_new, &mut k7);
        stats.evaluations += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e = h_step
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            let t_new = t + h_step;
            // Continuous extension on [t, t_new].
            while next < times.len() && times[next] <= t_new {
                let theta = (times[next] - t) / h_step;
                let theta1 = 1.0 - theta;
                let mut ys = [0.0; N];
                for i in 0..N {
                    let r1 = y[i];
                    let r2 = y_new[i] - y[i];
                    let r3 = h_step * k1[i] - r2;
                    let r4 = r2 - h_step * k7[i] - r3;
                    let r5 = h_step
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                    ys[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
                }
                out.push(if times[next] == t_new { y_new } else { ys });
                next += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else if err.is_finite() {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            0.2
        };
        h = (h_step * factor).min(opts.max_step);
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_dense_output() {
        let times: Vec<f64> = (0..=200).map(|k| k as f64 * 0.05).collect();
        let (ys, stats) = integrate_dense(
            |_, y: &[f64; 2], dy: &mut [f64; 2]| {
                dy[0] = y[1];
                dy[1] = -4.0 * y[0];
            },
            [1.0, 0.0],
            &times,
            &Dopri5Options::default(),
        )
        .unwrap();
        assert_eq!(ys.len(), times.len());
        for (y, t) in ys.iter().zip(&times) {
            assert!((y[0] - (2.0 * t).cos()).abs() < 1e-7, "t={t}");
        }
        assert!(stats.accepted > 10);
    }

    #[test]
    fn time_dependent_decay() {
        // y' = -2t y, y = exp(-t²)
        let times = [0.0, 0.3, 1.0, 2.5];
        let (ys, _) = integrate_dense(
            |t, y: &[f64; 1], dy: &mut [f64; 1]| dy[0] = -2.0 * t * y[0],
            [1.0],
            &times,
            &Dopri5Options::default(),
        )
        .unwrap();
        for (y, t) in ys.iter().zip(&times) {
            assert!((y[0] - (-t * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn step_budget_is_reported() {
        let opts = Dopri5Options {
            max_steps: 3,
            ..Default::default()
        };
        let err = integrate_dense(
            |_, y: &[f64; 1], dy: &mut [f64; 1]| dy[0] = 50.0 * y[0].cos(),
            [0.0],
            &[0.0, 100.0],
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }
}
