//! Generators, holomorphy charts, invariant divisors and Poisson data for
//! each symmetry type.

use super::{SystemError, WeylType};
use crate::algebra::{parse_poly, parse_rf, MultiPoly, RationalFunc};
use crate::birational::{BirationalMap, ChartMap, PoissonStructure};

type GenRow = (&'static str, [&'static str; 3], &'static [&'static str]);

const D4_GENS: &[GenRow] = &[
    (
        "s0",
        ["x", "y", "z - alpha0/(x - eta)"],
        &["-alpha0", "alpha1", "alpha2 + alpha0", "alpha3", "alpha4"],
    ),
    (
        "s1",
        ["x", "y", "z - alpha1/x"],
        &["alpha0", "-alpha1", "alpha2 + alpha1", "alpha3", "alpha4"],
    ),
    (
        "s2",
        ["x + alpha2/z", "y + alpha2/z", "z"],
        &[
            "alpha0 + alpha2",
            "alpha1 + alpha2",
            "-alpha2",
            "alpha3 + alpha2",
            "alpha4 + alpha2",
        ],
    ),
    (
        "s3",
        ["x", "y", "z - alpha3/(y - 1)"],
        &["alpha0", "alpha1", "alpha2 + alpha3", "-alpha3", "alpha4"],
    ),
    (
        "s4",
        ["x", "y", "z - alpha4/y"],
        &["alpha0", "alpha1", "alpha2 + alpha4", "alpha3", "-alpha4"],
    ),
];

const B3_GENS: &[GenRow] = &[
    (
        "s0",
        ["x", "y", "z - beta0/(x - eta)"],
        &["-beta0", "beta1", "beta2 + beta0", "beta3"],
    ),
    (
        "s1",
        ["x", "y", "z - beta1/(y - 1)"],
        &["beta0", "-beta1", "beta2 + beta1", "beta3"],
    ),
    (
        "s2",
        ["x + beta2/z", "y + beta2/z", "z"],
        &["beta0 + beta2", "beta1 + beta2", "-beta2", "beta3 + beta2"],
    ),
    (
        "s3",
        ["x", "y", "z - beta3 (x + y)/(x y)"],
        &["beta0", "beta1", "beta2 + 2 beta3", "-beta3"],
    ),
];

const D3_GENS: &[GenRow] = &[
    (
        "s0",
        ["x", "y", "z - beta0 (x + y - eta - 1)/((x - eta) (y - 1))"],
        &["-beta0", "beta1 + 2 beta0", "beta2"],
    ),
    (
        "s1",
        ["x + beta1/z", "y + beta1/z", "z"],
        &["beta0 + beta1", "-beta1", "beta2 + beta1"],
    ),
    (
        "s2",
        ["x", "y", "z - beta2 (x + y)/(x y)"],
        &["beta0", "beta1 + 2 beta2", "-beta2"],
    ),
];

const G2_GENS: &[GenRow] = &[
    (
        "s0",
        ["x", "y", "z - beta0/(x - eta)"],
        &["-beta0", "beta1 + beta0", "beta2"],
    ),
    (
        "s1",
        ["x + beta1/z", "y + beta1/z", "z"],
        &["beta0 + beta1", "-beta1", "beta2 + beta1"],
    ),
    (
        "s2",
        [
            "x",
            "y",
            "z - beta2 (y (y - 1) + x (y - 1) + x y)/(x y (y - 1))",
        ],
        &["beta0", "beta1 + 3 beta2", "-beta2"],
    ),
];

const A2_GENS: &[GenRow] = &[
    ("s0", ["x + beta0/z", "y + beta0/z", "z"], &["-beta0", "beta1 + beta0"]),
    (
        "s1",
        [
            "x",
            "y",
            "z - beta1 (y (x - eta) (y - 1) + x (x - eta) (y - 1) + x y (y - 1) + x y (x - eta))/(x y (x - eta) (y - 1))",
        ],
        &["beta0 + 4 beta1", "-beta1"],
    ),
];

const PV_GENS: &[GenRow] = &[
    (
        "s0",
        ["f0", "f1 + alpha0/f0", "f2"],
        &["-alpha0", "alpha1 + alpha0", "alpha2", "alpha3 + alpha0"],
    ),
    (
        "s1",
        ["f0 - alpha1/f1", "f1", "f2 - alpha1/f1"],
        &["alpha0 + alpha1", "-alpha1", "alpha2 + alpha1", "alpha3"],
    ),
    (
        "s2",
        ["f0", "f1 + alpha2/f2", "f2"],
        &["alpha0", "alpha1 + alpha2", "-alpha2", "alpha3 + alpha2"],
    ),
    (
        "s3",
        ["f0 - alpha3/(f1 - a)", "f1", "f2 - alpha3/(f1 - a)"],
        &["alpha0 + alpha3", "alpha1", "alpha2 + alpha3", "-alpha3"],
    ),
    (
        "pi",
        ["f2", "f1", "f0"],
        &["alpha2", "alpha1", "alpha0", "alpha3"],
    ),
];

const PIII_GENS: &[GenRow] = &[
    (
        "s0",
        ["f0", "f1 + alpha0/f0", "f2"],
        &["eta", "-alpha0", "alpha1 + alpha0", "alpha2"],
    ),
    (
        "s1",
        [
            "f0 - 2 alpha1/f1 + eta/f1^2",
            "f1",
            "f2 - 2 alpha1/f1 + eta/f1^2",
        ],
        &["-eta", "alpha0 + 2 alpha1", "-alpha1", "alpha2 + 2 alpha1"],
    ),
    (
        "s2",
        ["f0", "f1 + alpha2/f2", "f2"],
        &["eta", "alpha0", "alpha1 + alpha2", "-alpha2"],
    ),
    (
        "pi",
        ["f2", "f1", "f0"],
        &["eta", "alpha2", "alpha1", "alpha0"],
    ),
];

type GenRow2 = (&'static str, [&'static str; 2], &'static [&'static str]);

const REDUCED_GENS: &[GenRow2] = &[
    (
        "s0",
        ["X", "Y - alpha0/(X - eta)"],
        &["-alpha0", "alpha1", "alpha2 + alpha0", "alpha3", "alpha4"],
    ),
    (
        "s1",
        ["X", "Y - alpha1/X"],
        &["alpha0", "-alpha1", "alpha2 + alpha1", "alpha3", "alpha4"],
    ),
    (
        "s2",
        ["X + alpha2/Y", "Y"],
        &[
            "alpha0 + alpha2",
            "alpha1 + alpha2",
            "-alpha2",
            "alpha3 + alpha2",
            "alpha4 + alpha2",
        ],
    ),
    (
        "s3",
        ["X", "Y - alpha3/(X - 1)"],
        &["alpha0", "alpha1", "alpha2 + alpha3", "-alpha3", "alpha4"],
    ),
    (
        "s4",
        ["X", "Y - alpha4/X"],
        &["alpha0", "alpha1", "alpha2 + alpha4", "alpha3", "-alpha4"],
    ),
];

/// All generators of `ty`, reflections first and `pi` last.
pub fn generators(ty: WeylType) -> Result<Vec<BirationalMap>, SystemError> {
    let rows: &[GenRow] = match ty {
        WeylType::D4 => D4_GENS,
        WeylType::B3 => B3_GENS,
        WeylType::D3 => D3_GENS,
        WeylType::G2 => G2_GENS,
        WeylType::A2 => A2_GENS,
        WeylType::A3Pv => PV_GENS,
        WeylType::C2Piii => PIII_GENS,
        WeylType::D4Reduced => {
            return REDUCED_GENS
                .iter()
                .map(|(n, img, act)| Ok(BirationalMap::parse(ty, n, img, act)?))
                .collect();
        }
    };
    rows.iter()
        .map(|(n, img, act)| Ok(BirationalMap::parse(ty, n, img, act)?))
        .collect()
}

/// Generator of `ty` by name (`s0`, ..., `pi`).
pub fn generator(ty: WeylType, name: &str) -> Result<BirationalMap, SystemError> {
    generators(ty)?
        .into_iter()
        .find(|g| g.name == name)
        .ok_or_else(|| SystemError::UnknownName(format!("generator '{}' of {}", name, ty)))
}

type ChartRow = (&'static str, [&'static str; 3], [&'static str; 3]);

const D4_CHARTS: &[ChartRow] = &[
    (
        "chart0",
        ["x - eta", "y", "z - alpha0/(x - eta)"],
        ["x + eta", "y", "z + alpha0/x"],
    ),
    (
        "chart1",
        ["x", "y", "z - alpha1/x"],
        ["x", "y", "z + alpha1/x"],
    ),
    (
        "chart2",
        ["x + alpha2/z", "y + alpha2/z", "z"],
        ["x - alpha2/z", "y - alpha2/z", "z"],
    ),
    (
        "chart3",
        ["x", "y - 1", "z - alpha3/(y - 1)"],
        ["x", "y + 1", "z + alpha3/y"],
    ),
    (
        "chart4",
        ["x", "y", "z - alpha4/y"],
        ["x", "y", "z + alpha4/y"],
    ),
];

const B3_CHARTS: &[ChartRow] = &[
    (
        "chart0",
        ["x - eta", "y", "z - beta0/(x - eta)"],
        ["x + eta", "y", "z + beta0/x"],
    ),
    (
        "chart1",
        ["x", "y - 1", "z - beta1/(y - 1)"],
        ["x", "y + 1", "z + beta1/y"],
    ),
    (
        "chart2",
        ["x + beta2/z", "y + beta2/z", "z"],
        ["x - beta2/z", "y - beta2/z", "z"],
    ),
    (
        "chart3",
        ["x", "y", "z - beta3 (x + y)/(x y)"],
        ["x", "y", "z + beta3 (x + y)/(x y)"],
    ),
];

const D3_CHARTS: &[ChartRow] = &[
    (
        "chart1",
        [
            "x - eta",
            "y - 1",
            "z - beta0 (x + y - eta - 1)/((x - eta) (y - 1))",
        ],
        ["x + eta", "y + 1", "z + beta0 (x + y)/(x y)"],
    ),
    (
        "chart2",
        ["x + beta1/z", "y + beta1/z", "z"],
        ["x - beta1/z", "y - beta1/z", "z"],
    ),
    (
        "chart3",
        ["x", "y", "z - beta2 (x + y)/(x y)"],
        ["x", "y", "z + beta2 (x + y)/(x y)"],
    ),
];

/// Holomorphy charts; `Unavailable` for types without a stated atlas.
pub fn charts(ty: WeylType) -> Result<Vec<ChartMap>, SystemError> {
    let rows = match ty {
        WeylType::D4 => D4_CHARTS,
        WeylType::B3 => B3_CHARTS,
        WeylType::D3 => D3_CHARTS,
        _ => {
            return Err(SystemError::Unavailable(format!(
                "no holomorphy atlas for {}",
                ty
            )))
        }
    };
    rows.iter()
        .map(|(n, img, inv)| Ok(ChartMap::parse(ty, n, img, inv)?))
        .collect()
}

/// One row of an invariant-divisor table.
#[derive(Debug, Clone)]
pub struct DivisorRow {
    pub param: &'static str,
    pub divisor: MultiPoly,
    /// Irreducible factors, used by the component-wise fallback.
    pub components: Vec<MultiPoly>,
    /// Further parameters that must vanish together with `param`.
    pub also_zero: Vec<&'static str>,
}

type DivRow = (
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
);

/// Invariant divisors per generator index.
pub fn invariant_divisors(ty: WeylType) -> Result<Vec<DivisorRow>, SystemError> {
    let rows: &[DivRow] = match ty {
        WeylType::D4 => &[
            ("alpha0", &["x - eta"], &[]),
            ("alpha1", &["x"], &[]),
            ("alpha2", &["z"], &[]),
            ("alpha3", &["y - 1"], &[]),
            ("alpha4", &["y"], &[]),
        ],
        WeylType::B3 => &[
            ("beta0", &["x - eta"], &[]),
            ("beta1", &["y - 1"], &[]),
            ("beta2", &["z"], &[]),
            ("beta3", &["x", "y"], &[]),
        ],
        WeylType::D3 => &[
            ("beta0", &["x - eta", "y - 1"], &[]),
            ("beta1", &["z"], &[]),
            ("beta2", &["x", "y"], &[]),
        ],
        WeylType::G2 => &[
            ("beta0", &["x - eta"], &[]),
            ("beta1", &["z"], &[]),
            ("beta2", &["x", "y", "y - 1"], &[]),
        ],
        WeylType::A2 => &[
            ("beta0", &["z"], &[]),
            ("beta1", &["x", "y", "x - eta", "y - 1"], &[]),
        ],
        WeylType::A3Pv => &[
            ("alpha0", &["f0"], &[]),
            ("alpha1", &["f1"], &[]),
            ("alpha2", &["f2"], &[]),
            ("alpha3", &["f1 - a"], &[]),
        ],
        WeylType::C2Piii => &[
            ("alpha0", &["f0"], &[]),
            ("alpha1", &["f1"], &["eta"]),
            ("alpha2", &["f2"], &[]),
        ],
        WeylType::D4Reduced => &[
            ("alpha0", &["X - eta"], &[]),
            ("alpha1", &["X"], &[]),
            ("alpha2", &["Y"], &[]),
            ("alpha3", &["X - 1"], &[]),
            ("alpha4", &["X"], &[]),
        ],
    };
    let table = ty.table();
    rows.iter()
        .map(|(param, comps, also)| {
            let components = comps
                .iter()
                .map(|c| parse_poly(&table, c))
                .collect::<Result<Vec<_>, _>>()?;
            let divisor = components
                .iter()
                .fold(MultiPoly::one(&table), |acc, c| &acc * c);
            Ok(DivisorRow {
                param,
                divisor,
                components,
                also_zero: also.to_vec(),
            })
        })
        .collect()
}

/// Data of the exponential form `exp(c/f ad_f)` of a reflection.
#[derive(Debug, Clone)]
pub struct PoissonForm {
    pub divisor: MultiPoly,
    pub coefficient: RationalFunc,
}

/// The Poisson-series data of generator `index`, if it has one.
pub fn poisson_form(ty: WeylType, index: usize) -> Result<Option<PoissonForm>, SystemError> {
    let names = ty.generator_names();
    let name = names
        .get(index)
        .ok_or_else(|| SystemError::UnknownName(format!("generator {} of {}", index, ty)))?;
    if name == "pi" {
        return Ok(None);
    }
    let table = ty.table();
    let row = invariant_divisors(ty)?.swap_remove(index);
    let coefficient = if ty == WeylType::C2Piii && index == 1 {
        parse_rf(&table, "2 alpha1 - eta/f1")?
    } else {
        RationalFunc::var(&table, row.param)?
    };
    Ok(Some(PoissonForm {
        divisor: row.divisor,
        coefficient,
    }))
}

/// Bracket table on the dependent variables.
pub fn poisson_structure(ty: WeylType) -> PoissonStructure {
    let table = ty.table();
    let vars: Vec<usize> = ty
        .variable_names()
        .iter()
        .map(|v| table.index(v).unwrap())
        .collect();
    let matrix = match ty {
        // {z,x} = {z,y} = 1, {x,y} = 0
        WeylType::D4 | WeylType::B3 | WeylType::D3 | WeylType::G2 | WeylType::A2 => {
            vec![vec![0, 0, -1], vec![0, 0, -1], vec![1, 1, 0]]
        }
        // {f0,f1} = {f2,f1} = 1, {f0,f2} = 0
        WeylType::A3Pv | WeylType::C2Piii => vec![vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]],
        // {Y,X} = 1
        WeylType::D4Reduced => vec![vec![0, -1], vec![1, 0]],
    };
    PoissonStructure {
        table,
        vars,
        matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rf_equal;

    #[test]
    fn generator_counts_and_names() {
        for ty in WeylType::ALL {
            let gens = generators(ty).unwrap();
            let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
            assert_eq!(names, ty.generator_names(), "{}", ty);
        }
    }

    #[test]
    fn d4_s2_matches_display() {
        let g = generator(WeylType::D4, "s2").unwrap();
        let t = g.table.clone();
        assert!(rf_equal(
            &g.var_images[0],
            &parse_rf(&t, "x + alpha2/z").unwrap()
        ));
        let p: Vec<String> = g
            .param_action
            .images(&t)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            p,
            [
                "alpha0 + alpha2",
                "alpha1 + alpha2",
                "-alpha2",
                "alpha2 + alpha3",
                "alpha2 + alpha4"
            ]
        );
    }

    #[test]
    fn a2_s1_denominator() {
        let g = generator(WeylType::A2, "s1").unwrap();
        let t = g.table.clone();
        let d = parse_poly(&t, "x y (x - eta) (y - 1)").unwrap();
        let z = &g.var_images[2];
        assert!(
            z.den().exact_divide(&d).unwrap().is_some()
                || d.exact_divide(z.den()).unwrap().is_some()
        );
    }

    #[test]
    fn chart_availability() {
        assert_eq!(charts(WeylType::D4).unwrap().len(), 5);
        assert_eq!(charts(WeylType::B3).unwrap().len(), 4);
        assert_eq!(charts(WeylType::D3).unwrap().len(), 3);
        assert!(matches!(
            charts(WeylType::G2),
            Err(SystemError::Unavailable(_))
        ));
    }

    #[test]
    fn divisor_examples() {
        let t = WeylType::D4.table();
        assert_eq!(
            invariant_divisors(WeylType::D4).unwrap()[0].divisor,
            parse_poly(&t, "x - eta").unwrap()
        );
        assert_eq!(
            invariant_divisors(WeylType::G2).unwrap()[2].divisor,
            parse_poly(&t, "x y (y - 1)").unwrap()
        );
        assert_eq!(
            invariant_divisors(WeylType::A2).unwrap()[1].divisor,
            parse_poly(&t, "x y (x - eta) (y - 1)").unwrap()
        );
    }

    #[test]
    fn param_actions_preserve_normalization() {
        for ty in WeylType::ALL {
            let table = ty.table();
            let params: Vec<MultiPoly> = ty
                .parameter_names()
                .iter()
                .map(|p| MultiPoly::var(&table, p).unwrap())
                .collect();
            let before = super::super::normalization_residual(ty, &params).unwrap();
            for g in generators(ty).unwrap() {
                let after =
                    super::super::normalization_residual(ty, &g.param_action.apply_poly(&params))
                        .unwrap();
                assert_eq!(before, after, "{} {}", ty, g.name);
            }
        }
    }
}
