//! Dormand-Prince 5(4) with step-size control and the standard continuous
//! extension.

use serde::Serialize;

/// Right-hand side `dy/dt = f(t, y)`.
pub trait Rhs {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F: Fn(f64, &[f64], &mut [f64])> Rhs for (usize, F) {
    fn dim(&self) -> usize {
        self.0
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.1)(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Pole,
    StepUnderflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: Vec<f64>,
    /// `f(t, state)`, kept for interpolation.
    #[serde(skip)]
    pub deriv: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub accepted: usize,
    pub rejected: usize,
    /// Notes such as interior zeros of the denominator of `b`.
    pub warnings: Vec<String>,
    /// Fifth interpolation coefficient of every step (between samples `k`
    /// and `k + 1`).
    #[serde(skip)]
    pub dense: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.samples[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Interpolated state, `None` outside the covered interval.
    pub fn state_at(&self, t: f64) -> Option<Vec<f64>> {
        let n = self.samples.len();
        if t < self.t_start() || t > self.t_end() {
            return None;
        }
        if n == 1 {
            return Some(self.samples[0].state.clone());
        }
        let k = self.samples.partition_point(|s| s.t <= t).clamp(1, n - 1) - 1;
        let (a, b) = (&self.samples[k], &self.samples[k + 1]);
        let h = b.t - a.t;
        let th = (t - a.t) / h;
        let th1 = 1.0 - th;
        let d = &self.dense[k];
        Some(
            (0..a.state.len())
                .map(|i| {
                    let r2 = b.state[i] - a.state[i];
                    let r3 = h * a.deriv[i] - r2;
                    let r4 = r2 - h * b.deriv[i] - r3;
                    a.state[i] + th * (r2 + th1 * (r3 + th * (r4 + th1 * d[i])))
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub max_magnitude: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
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
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const MAX_STEPS: usize = 1_000_000;

/// Integrate from `t0` to `t1 >= t0`, stopping early at a pole or when the
/// step size underflows.
pub fn dopri5(rhs: &dyn Rhs, t0: f64, t1: f64, y0: &[f64], tol: Tolerances) -> Trajectory {
    let n = rhs.dim();
    let mut f0 = vec![0.0; n];
    rhs.eval(t0, y0, &mut f0);
    let mut traj = Trajectory {
        samples: vec![Sample {
            t: t0,
            state: y0.to_vec(),
            deriv: f0.clone(),
        }],
        events: Vec::new(),
        accepted: 0,
        rejected: 0,
        warnings: Vec::new(),
        dense: Vec::new(),
    };
    if t1 <= t0 {
        return traj;
    }
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = initial_step(rhs, t0, &y, &f0, tol, t1 - t0);
    let mut k = vec![vec![0.0; n]; 7];
    k[0] = f0;
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    for _ in 0..MAX_STEPS {
        if t >= t1 {
            break;
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            traj.events.push(Event {
                kind: EventKind::StepUnderflow,
                t,
            });
            break;
        }
        for s in 1..7 {
            for i in 0..n {
                ytmp[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            rhs.eval(t + C[s] * h, &ytmp, &mut k[s]);
        }
        // the last stage was evaluated at the fifth-order solution
        ynew.copy_from_slice(&ytmp);
        let mut err = 0.0;
        for i in 0..n {
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = tol.abs + tol.rel * y[i].abs().max(ynew[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            traj.rejected += 1;
            h *= MIN_FACTOR;
            continue;
        }
        if err <= 1.0 {
            let dense: Vec<f64> = (0..n)
                .map(|i| h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>())
                .collect();
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&ynew);
            traj.accepted += 1;
            traj.samples.push(Sample {
                t,
                state: y.clone(),
                deriv: k[6].clone(),
            });
            traj.dense.push(dense);
            if y.iter().any(|v| v.abs() > tol.max_magnitude) {
                traj.events.push(Event {
                    kind: EventKind::Pole,
                    t,
                });
                break;
            }
            k.swap(0, 6);
            let fac = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= fac;
        } else {
            traj.rejected += 1;
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }
    traj
}

/// Starting step from the size of the state and its derivative.
fn initial_step(rhs: &dyn Rhs, t0: f64, y0: &[f64], f0: &[f64], tol: Tolerances, span: f64) -> f64 {
    let n = y0.len() as f64;
    let sc: Vec<f64> = y0.iter().map(|v| tol.abs + tol.rel * v.abs()).collect();
    let d0 = (y0
        .iter()
        .zip(&sc)
        .map(|(v, s)| (v / s).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let d1 = (f0
        .iter()
        .zip(&sc)
        .map(|(v, s)| (v / s).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    rhs.eval(t0 + h0, &y1, &mut f1);
    let d2 = (f1
        .iter()
        .zip(f0)
        .zip(&sc)
        .map(|((a, b), s)| ((a - b) / s).powi(2))
        .sum::<f64>()
        / n)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances {
        rel: 1e-10,
        abs: 1e-12,
        max_magnitude: 1e8,
    };

    #[test]
    fn exponential() {
        let rhs = (1, |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0]);
        let tr = dopri5(&rhs, 0.0, 1.0, &[1.0], TOL);
        assert!((tr.samples.last().unwrap().state[0] - 1f64.exp()).abs() < 1e-9);
        assert!(tr.events.is_empty());
        let mid = tr.state_at(0.37).unwrap()[0];
        assert!((mid - 0.37f64.exp()).abs() < 1e-9, "{}", mid);
    }

    #[test]
    fn blowup_is_a_pole() {
        let rhs = (1, |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0]);
        let tr = dopri5(&rhs, 0.0, 2.0, &[1.0], TOL);
        assert_eq!(tr.events.len(), 1);
        assert!(tr.events[0].t < 1.0 + 1e-6);
    }

    #[test]
    fn zero_length_interval() {
        let rhs = (1, |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0]);
        let tr = dopri5(&rhs, 1.0, 1.0, &[2.0], TOL);
        assert_eq!(tr.samples.len(), 1);
        assert_eq!(tr.state_at(1.0).unwrap(), vec![2.0]);
    }

    #[test]
    fn times_increase() {
        let rhs = (2, |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        });
        let tr = dopri5(&rhs, 0.0, 10.0, &[1.0, 0.0], TOL);
        assert!(tr.samples.windows(2).all(|w| w[0].t < w[1].t));
        assert_eq!(tr.t_end(), 10.0);
        assert!((tr.samples.last().unwrap().state[0] - 10f64.cos()).abs() < 1e-8);
    }
}
