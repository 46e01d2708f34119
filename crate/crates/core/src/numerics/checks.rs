use serde::Serialize;

use crate::algebra::RationalFunc;
use crate::birational::BirationalMap;
use crate::systems::{generators, hamiltonian, HamiltonianKind, WeylType};

use super::{dopri5, integrate, IntegrationSpec, NumericModel, NumericsError, Rhs, Trajectory};

/// Points of the uniform grid the residual stencil runs on.
pub const RESIDUAL_GRID: usize = 801;

/// Points at which two trajectories are compared.
const COMPARE_GRID: usize = 201;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    /// Grid time of the largest residual.
    pub t_max: f64,
}

fn grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                t1
            } else {
                t0 + (t1 - t0) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Five-point central difference at interior index `i`.
fn stencil(v: &[f64], i: usize, h: f64) -> f64 {
    (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h)
}

/// `|finite-difference derivative - field|` on a uniform resampling of the
/// trajectory, max-norm over components.
pub fn residual(rhs: &dyn Rhs, traj: &Trajectory) -> Result<ResidualStats, NumericsError> {
    if traj.samples.len() < 2 {
        return Err(NumericsError::TooFewSamples(traj.samples.len()));
    }
    let ts = grid(traj.t_start(), traj.t_end(), RESIDUAL_GRID);
    let h = ts[1] - ts[0];
    let ys: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| traj.state_at(t).expect("grid inside trajectory"))
        .collect();
    let n = rhs.dim();
    let comps: Vec<Vec<f64>> = (0..n).map(|k| ys.iter().map(|y| y[k]).collect()).collect();
    let mut f = vec![0.0; n];
    let mut stats = ResidualStats {
        max: 0.0,
        mean: 0.0,
        t_max: ts[2],
    };
    let mut count = 0;
    for i in 2..ts.len() - 2 {
        rhs.eval(ts[i], &ys[i], &mut f);
        let r = (0..n)
            .map(|k| (stencil(&comps[k], i, h) - f[k]).abs())
            .fold(0.0, f64::max);
        if r > stats.max {
            stats.max = r;
            stats.t_max = ts[i];
        }
        stats.mean += r;
        count += 1;
    }
    stats.mean /= count as f64;
    Ok(stats)
}

fn image(map: &BirationalMap, point: &[f64]) -> Vec<f64> {
    map.var_images.iter().map(|r| r.eval_f64(point)).collect()
}

/// Integrate `spec` and, separately, its image under generator `index`;
/// returns the largest deviation between the transformed first trajectory
/// and the second.
pub fn numeric_symmetry_check(
    ty: WeylType,
    index: usize,
    spec: &IntegrationSpec,
) -> Result<f64, NumericsError> {
    let map = generators(ty)?
        .get(index)
        .cloned()
        .ok_or_else(|| NumericsError::BadSpec(format!("{} has no generator {}", ty, index)))?;
    numeric_symmetry_check_map(&map, spec)
}

pub fn numeric_symmetry_check_map(
    map: &BirationalMap,
    spec: &IntegrationSpec,
) -> Result<f64, NumericsError> {
    let model = NumericModel::new(spec)?;
    let start = model.point(spec.t0, &spec.initial_state);
    let moved = image(map, &start);
    if moved.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::Indeterminate(map.name.clone()));
    }
    let act = &map.param_action;
    let params: Vec<f64> = (0..act.params.len())
        .map(|i| {
            act.offset[i] as f64
                + act.matrix[i]
                    .iter()
                    .zip(&spec.params)
                    .map(|(m, p)| *m as f64 * p)
                    .sum::<f64>()
        })
        .collect();
    let spec2 = IntegrationSpec {
        params,
        initial_state: moved,
        ..spec.clone()
    };
    let first = integrate(spec)?;
    let second = integrate(&spec2)?;
    let end = first.t_end().min(second.t_end());
    let mut dev: f64 = 0.0;
    for t in grid(spec.t0, end, COMPARE_GRID) {
        let y1 = first.state_at(t).expect("inside");
        let y2 = second.state_at(t).expect("inside");
        let img = image(map, &model.point(t, &y1));
        if img.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::Indeterminate(map.name.clone()));
        }
        dev = img
            .iter()
            .zip(&y2)
            .map(|(a, b)| (a - b).abs())
            .fold(dev, f64::max);
    }
    Ok(dev)
}

#[derive(Debug, Clone)]
pub enum InvariantExpr {
    /// Compare `x - y` with the scalar equation it satisfies on its own.
    XMinusYFlow,
    /// Any expression in the system's symbols; reports its largest value.
    Custom(RationalFunc),
}

/// `du/dt = b/(2 eta) u (u + 1) (u + 1 - eta) (u - eta)` from
/// `u(t0) = x0 - y0`.
pub fn scalar_xy_flow(spec: &IntegrationSpec) -> Result<Trajectory, NumericsError> {
    let model = NumericModel::new(spec)?;
    let eta = model
        .table
        .try_index("eta")
        .map(|i| model.point(spec.t0, &spec.initial_state)[i])
        .unwrap_or(0.0);
    let rhs = (1, |t: f64, u: &[f64], du: &mut [f64]| {
        let u = u[0];
        du[0] = model.b_at(t) / (2.0 * eta) * u * (u + 1.0) * (u + 1.0 - eta) * (u - eta);
    });
    let u0 = spec.initial_state[0] - spec.initial_state[1];
    Ok(dopri5(&rhs, spec.t0, spec.t1, &[u0], spec.tolerances()))
}

/// Largest drift of an invariant along `traj`.
pub fn track_invariant(
    spec: &IntegrationSpec,
    traj: &Trajectory,
    expr: &InvariantExpr,
) -> Result<f64, NumericsError> {
    match expr {
        InvariantExpr::XMinusYFlow => {
            if !matches!(
                spec.weyl,
                WeylType::D4 | WeylType::B3 | WeylType::D3 | WeylType::G2 | WeylType::A2
            ) {
                return Err(NumericsError::BadSpec(format!(
                    "{} has no x - y equation",
                    spec.weyl
                )));
            }
            let u = scalar_xy_flow(spec)?;
            let end = traj.t_end().min(u.t_end());
            Ok(grid(traj.t_start(), end, COMPARE_GRID)
                .into_iter()
                .map(|t| {
                    let y = traj.state_at(t).expect("inside");
                    (y[0] - y[1] - u.state_at(t).expect("inside")[0]).abs()
                })
                .fold(0.0, f64::max))
        }
        InvariantExpr::Custom(f) => {
            let model = NumericModel::new(spec)?;
            Ok(traj
                .samples
                .iter()
                .map(|s| f.eval_f64(&model.point(s.t, &s.state)).abs())
                .fold(0.0, f64::max))
        }
    }
}

/// Along a trajectory of the two-dimensional `x = y` system, compare the
/// finite-difference rate of change of `H` with its explicit
/// time-derivative `dH/db * b'(t)`.
pub fn energy_check(spec: &IntegrationSpec) -> Result<f64, NumericsError> {
    if spec.weyl != WeylType::D4Reduced {
        return Err(NumericsError::BadSpec(
            "the energy check runs on the reduced two-dimensional system".into(),
        ));
    }
    let model = NumericModel::new(spec)?;
    let traj = integrate(spec)?;
    if traj.samples.len() < 2 {
        return Err(NumericsError::TooFewSamples(traj.samples.len()));
    }
    let h = hamiltonian(HamiltonianKind::XEqY)?;
    let b_sym = h
        .table
        .symbol("b")
        .map_err(crate::systems::SystemError::from)?;
    let t_sym = h
        .table
        .symbol("t")
        .map_err(crate::systems::SystemError::from)?;
    let dh_db = h.expression.differentiate(b_sym);
    let db_dt = match spec.b {
        crate::systems::BSpec::PviForm => Some(
            crate::algebra::parse_rf(&h.table, crate::systems::PVI_FORM)
                .map_err(crate::systems::SystemError::from)?
                .differentiate(t_sym),
        ),
        crate::systems::BSpec::Generic => None,
    };
    let ts = grid(traj.t_start(), traj.t_end(), RESIDUAL_GRID);
    let step = ts[1] - ts[0];
    let points: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| model.point(t, &traj.state_at(t).expect("inside")))
        .collect();
    let hv: Vec<f64> = points.iter().map(|p| h.expression.eval_f64(p)).collect();
    let mut worst: f64 = 0.0;
    for (i, p) in points.iter().enumerate().take(ts.len() - 2).skip(2) {
        let explicit = db_dt
            .as_ref()
            .map_or(0.0, |d| dh_db.eval_f64(p) * d.eval_f64(p));
        worst = worst.max((stencil(&hv, i, step) - explicit).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceStudy {
    pub residual: ResidualStats,
    pub residual_halved: ResidualStats,
    /// `residual.max / residual_halved.max`.
    pub residual_ratio: f64,
    pub symmetry_deviation: f64,
    pub symmetry_deviation_halved: f64,
    pub symmetry_ratio: f64,
}

/// Repeat the residual and the `s1` symmetry comparison with both
/// tolerances halved.
pub fn tolerance_study(spec: &IntegrationSpec) -> Result<ToleranceStudy, NumericsError> {
    let halved = spec.scaled_tolerances(0.5);
    let model = NumericModel::new(spec)?;
    let residual = super::residual(&model, &integrate(spec)?)?;
    let residual_halved = super::residual(&model, &integrate(&halved)?)?;
    let symmetry_deviation = numeric_symmetry_check(spec.weyl, 1, spec)?;
    let symmetry_deviation_halved = numeric_symmetry_check(spec.weyl, 1, &halved)?;
    Ok(ToleranceStudy {
        residual_ratio: residual.max / residual_halved.max,
        residual,
        residual_halved,
        symmetry_ratio: symmetry_deviation / symmetry_deviation_halved,
        symmetry_deviation,
        symmetry_deviation_halved,
    })
}
