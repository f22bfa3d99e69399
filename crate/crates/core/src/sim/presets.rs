//! Named configurations of the published simulation tables, with the
//! reported cells for comparison.
//!
//! | preset                         | model | varies                       |
//! |--------------------------------|-------|------------------------------|
//! | `table1:p400,n100[,power]`     | 1     | p, n = 50/100/200 (2:3:5)    |
//! | `table2:p200,n110[,power]`     | 2     | p, n = 55/110/220 (2:3:5)    |
//! | `table3:n10-10-80,theta0.005`  | 1     | theta; 10-10-80 or 15-15-70  |
//! | `table4:n10-10-80,a0.10`       | 2     | a; same designs              |
//! | `table5:n10-20-70,theta0.005`  | 1     | theta; 10-20-70 or 10-30-60  |
//! | `table6:n10-20-70,a0.10`       | 2     | a; same designs              |
//! | `table7:p200,n40`              | bias  | p, n1                        |
//!
//! Model 1 presets take an optional `chisq4` token to switch innovations.
//! Table 1 and 2 presets run the size configuration unless `power` is given.

use serde::{Deserialize, Serialize};

use super::bias::{BiasConfig, RatioSummary};
use super::model1::MODEL1_RHO;
use super::{Innovation, Model1Config, Model2Config, ModelConfig, SimConfig};
use crate::error::{Error, Result};

pub const DEFAULT_REPLICATIONS: usize = 5000;
pub const DEFAULT_SEED: u64 = 20240601;
/// Signal used for the power columns of the Case 1 tables.
pub const CASE_ONE_THETA: f64 = 0.005;
pub const CASE_ONE_A: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasReference {
    pub split: RatioSummary,
    pub plug_in: RatioSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preset {
    Simulation {
        name: String,
        config: SimConfig,
        /// Reported rates for `t1`, `t2`, `th`.
        reference: [f64; 3],
    },
    Bias {
        name: String,
        config: BiasConfig,
        reference: BiasReference,
    },
}

impl Preset {
    pub fn name(&self) -> &str {
        match self {
            Preset::Simulation { name, .. } | Preset::Bias { name, .. } => name,
        }
    }

    /// Sets replications and seed on either kind.
    pub fn with_run(mut self, replications: Option<usize>, seed: Option<u64>) -> Self {
        match &mut self {
            Preset::Simulation { config, .. } => {
                if let Some(r) = replications {
                    config.replications = r;
                }
                if let Some(s) = seed {
                    config.seed = s;
                    if let ModelConfig::Model2(m) = &mut config.model {
                        m.mean_seed = s;
                    }
                }
            }
            Preset::Bias { config, .. } => {
                if let Some(r) = replications {
                    config.replications = r;
                }
                if let Some(s) = seed {
                    config.seed = s;
                }
            }
        }
        self
    }
}

struct CaseOneRow {
    p: usize,
    n: usize,
    size: [f64; 3],
    power: [f64; 3],
}

struct GridRow {
    level: f64,
    left: [f64; 3],
    right: [f64; 3],
}

struct BiasRow {
    p: usize,
    n1: usize,
    split: (f64, f64),
    plug_in: (f64, f64),
}

/// Reported `tr(Sigma_1^2)` per dimension in the bias table.
pub const TABLE7_TRACES: [(usize, f64); 4] = [
    (50, 25000.0),
    (200, 100900.0),
    (500, 252700.0),
    (1000, 505700.0),
];

const CASE_TWO: [[usize; 3]; 2] = [[10, 10, 80], [15, 15, 70]];
const CASE_THREE: [[usize; 3]; 2] = [[10, 20, 70], [10, 30, 60]];

/// Splits `n` in proportion to `weights` by largest remainders; ties go to
/// the later group.
pub fn apportion(n: usize, weights: &[usize]) -> Vec<usize> {
    let total: usize = weights.iter().sum();
    let mut sizes: Vec<usize> = weights.iter().map(|w| n * w / total).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = n * weights[i] % total;
        let rj = n * weights[j] % total;
        rj.cmp(&ri).then(j.cmp(&i))
    });
    let short = n - sizes.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        sizes[i] += 1;
    }
    sizes
}

fn bad(spec: &str, why: impl std::fmt::Display) -> Error {
    Error::invalid(format!("preset `{spec}`: {why}"))
}

fn number<T: std::str::FromStr>(spec: &str, token: &str, prefix: &str) -> Option<Result<T>> {
    token.strip_prefix(prefix).map(|rest| {
        rest.parse()
            .map_err(|_| bad(spec, format!("cannot parse `{token}`")))
    })
}

struct Tokens {
    p: Option<usize>,
    n: Option<usize>,
    design: Option<Vec<usize>>,
    theta: Option<f64>,
    a: Option<f64>,
    power: bool,
    innovation: Innovation,
}

fn tokens(spec: &str, body: &str) -> Result<Tokens> {
    let mut t = Tokens {
        p: None,
        n: None,
        design: None,
        theta: None,
        a: None,
        power: false,
        innovation: Innovation::StandardNormal,
    };
    for tok in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let tok = tok.to_ascii_lowercase();
        if tok == "power" {
            t.power = true;
        } else if tok == "size" {
            t.power = false;
        } else if let Ok(inn) = tok.parse::<Innovation>() {
            t.innovation = inn;
        } else if let Some(v) = number(spec, &tok, "theta") {
            t.theta = Some(v?);
        } else if tok.starts_with('n') && tok.contains('-') {
            let parts = tok[1..]
                .split('-')
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| bad(spec, format!("bad design `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            t.design = Some(parts);
        } else if let Some(v) = number(spec, &tok, "n") {
            t.n = Some(v?);
        } else if let Some(v) = number(spec, &tok, "p") {
            t.p = Some(v?);
        } else if let Some(v) = number(spec, &tok, "a") {
            t.a = Some(v?);
        } else {
            return Err(bad(spec, format!("unknown token `{tok}`")));
        }
    }
    Ok(t)
}

fn sim(model: ModelConfig) -> SimConfig {
    SimConfig::new(model, DEFAULT_REPLICATIONS, DEFAULT_SEED)
}

fn model1(p: usize, sizes: Vec<usize>, theta: f64, innovation: Innovation) -> ModelConfig {
    ModelConfig::Model1(Model1Config::new(p, sizes, theta).with_innovation(innovation))
}

fn model2(p: usize, sizes: Vec<usize>, a: f64) -> ModelConfig {
    ModelConfig::Model2(Model2Config::new(p, sizes, a, DEFAULT_SEED))
}

fn grid_cell(
    spec: &str,
    table: &[GridRow],
    designs: &[[usize; 3]; 2],
    design: Option<Vec<usize>>,
    level: Option<f64>,
    key: &str,
) -> Result<(Vec<usize>, f64, [f64; 3])> {
    let design = design.ok_or_else(|| bad(spec, "missing design such as `n10-10-80`"))?;
    let col = designs
        .iter()
        .position(|d| d[..] == design[..])
        .ok_or_else(|| bad(spec, format!("design {design:?} is not in this table")))?;
    let level = level.ok_or_else(|| bad(spec, format!("missing `{key}` level")))?;
    let row = table
        .iter()
        .find(|r| (r.level - level).abs() < 1e-12)
        .ok_or_else(|| bad(spec, format!("{key} = {level} is not in this table")))?;
    Ok((design, level, if col == 0 { row.left } else { row.right }))
}

/// Builds the preset named by `spec`, for example `table3:n10-10-80,theta0.005`.
pub fn parse_preset(spec: &str) -> Result<Preset> {
    let (table, body) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected `tableN:...`"))?;
    let table = table.trim().to_ascii_lowercase();
    let t = tokens(spec, body)?;
    let name = spec.trim().to_string();
    match table.as_str() {
        "table1" | "table2" => {
            let p = t.p.ok_or_else(|| bad(spec, "missing `p`"))?;
            let n = t.n.ok_or_else(|| bad(spec, "missing `n`"))?;
            let rows = if table == "table1" { TABLE1 } else { TABLE2 };
            let row = rows
                .iter()
                .find(|r| r.p == p && r.n == n)
                .ok_or_else(|| bad(spec, format!("no row p = {p}, n = {n}")))?;
            let sizes = apportion(n, &[2, 3, 5]);
            let model = if table == "table1" {
                let theta = if t.power { CASE_ONE_THETA } else { 0.0 };
                model1(p, sizes, theta, t.innovation)
            } else {
                let a = if t.power { CASE_ONE_A } else { 0.0 };
                model2(p, sizes, a)
            };
            Ok(Preset::Simulation {
                name,
                config: sim(model),
                reference: if t.power { row.power } else { row.size },
            })
        }
        "table3" | "table5" => {
            let (tab, designs) = if table == "table3" {
                (TABLE3, &CASE_TWO)
            } else {
                (TABLE5, &CASE_THREE)
            };
            let (sizes, theta, reference) =
                grid_cell(spec, tab, designs, t.design, t.theta, "theta")?;
            Ok(Preset::Simulation {
                name,
                config: sim(model1(400, sizes, theta, t.innovation)),
                reference,
            })
        }
        "table4" | "table6" => {
            let (tab, designs) = if table == "table4" {
                (TABLE4, &CASE_TWO)
            } else {
                (TABLE6, &CASE_THREE)
            };
            let (sizes, a, reference) = grid_cell(spec, tab, designs, t.design, t.a, "a")?;
            Ok(Preset::Simulation {
                name,
                config: sim(model2(400, sizes, a)),
                reference,
            })
        }
        "table7" => {
            let p = t.p.ok_or_else(|| bad(spec, "missing `p`"))?;
            let n1 = t.n.ok_or_else(|| bad(spec, "missing `n`"))?;
            let row = TABLE7
                .iter()
                .find(|r| r.p == p && r.n1 == n1)
                .ok_or_else(|| bad(spec, format!("no row p = {p}, n1 = {n1}")))?;
            let trace = TABLE7_TRACES.iter().find(|(q, _)| *q == p).map(|t| t.1);
            let config = BiasConfig {
                p,
                n1,
                replications: DEFAULT_REPLICATIONS,
                seed: DEFAULT_SEED,
                rho: MODEL1_RHO[0],
                innovation: Innovation::CenteredChiSq4,
                reference_trace: trace,
            };
            let summary = |(mean, sd): (f64, f64)| RatioSummary { mean, sd };
            Ok(Preset::Bias {
                name,
                config,
                reference: BiasReference {
                    split: summary(row.split),
                    plug_in: summary(row.plug_in),
                },
            })
        }
        other => Err(bad(spec, format!("unknown table `{other}`"))),
    }
}

fn fmt_design(d: &[usize]) -> String {
    d.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

/// Every preset name accepted by [`parse_preset`], size variants only for
/// the Case 1 tables.
pub fn preset_names() -> Vec<String> {
    let mut out = Vec::new();
    for (table, rows) in [("table1", TABLE1), ("table2", TABLE2)] {
        for r in rows {
            out.push(format!("{table}:p{},n{}", r.p, r.n));
            out.push(format!("{table}:p{},n{},power", r.p, r.n));
        }
    }
    for (table, rows, designs, key) in [
        ("table3", TABLE3, &CASE_TWO, "theta"),
        ("table4", TABLE4, &CASE_TWO, "a"),
        ("table5", TABLE5, &CASE_THREE, "theta"),
        ("table6", TABLE6, &CASE_THREE, "a"),
    ] {
        for d in designs {
            for r in rows {
                out.push(format!("{table}:n{},{key}{}", fmt_design(d), r.level));
            }
        }
    }
    for r in TABLE7 {
        out.push(format!("table7:p{},n{}", r.p, r.n1));
    }
    out
}

#[rustfmt::skip]
const TABLE1: &[CaseOneRow] = &[
    CaseOneRow { p: 50, n: 50, size: [0.0626, 0.0594, 0.0600], power: [0.0896, 0.0850, 0.0808] },
    CaseOneRow { p: 50, n: 100, size: [0.0564, 0.0534, 0.0584], power: [0.0830, 0.0810, 0.0702] },
    CaseOneRow { p: 50, n: 200, size: [0.0576, 0.0570, 0.0590], power: [0.0830, 0.0806, 0.0760] },
    CaseOneRow { p: 100, n: 50, size: [0.0588, 0.0546, 0.0564], power: [0.1218, 0.1176, 0.0936] },
    CaseOneRow { p: 100, n: 100, size: [0.0630, 0.0598, 0.0494], power: [0.1204, 0.1178, 0.1022] },
    CaseOneRow { p: 100, n: 200, size: [0.0550, 0.0544, 0.0560], power: [0.1282, 0.1252, 0.1054] },
    CaseOneRow { p: 200, n: 50, size: [0.0590, 0.0562, 0.0604], power: [0.2190, 0.2060, 0.1604] },
    CaseOneRow { p: 200, n: 100, size: [0.0528, 0.0502, 0.0548], power: [0.2240, 0.2150, 0.1618] },
    CaseOneRow { p: 200, n: 200, size: [0.0558, 0.0552, 0.0536], power: [0.2224, 0.2172, 0.1664] },
    CaseOneRow { p: 400, n: 50, size: [0.0536, 0.0492, 0.0510], power: [0.4848, 0.4656, 0.3394] },
    CaseOneRow { p: 400, n: 100, size: [0.0612, 0.0580, 0.0604], power: [0.4624, 0.4536, 0.3412] },
    CaseOneRow { p: 400, n: 200, size: [0.0578, 0.0556, 0.0576], power: [0.4870, 0.4812, 0.3524] },
    CaseOneRow { p: 800, n: 50, size: [0.0580, 0.0522, 0.0512], power: [0.9146, 0.9060, 0.7688] },
    CaseOneRow { p: 800, n: 100, size: [0.0600, 0.0560, 0.0572], power: [0.9080, 0.9040, 0.7634] },
    CaseOneRow { p: 800, n: 200, size: [0.0534, 0.0514, 0.0516], power: [0.9106, 0.9078, 0.7778] },
    CaseOneRow { p: 1000, n: 50, size: [0.0552, 0.0488, 0.0478], power: [0.9766, 0.9732, 0.8940] },
    CaseOneRow { p: 1000, n: 100, size: [0.0524, 0.0500, 0.0462], power: [0.9776, 0.9764, 0.8994] },
    CaseOneRow { p: 1000, n: 200, size: [0.0550, 0.0532, 0.0534], power: [0.9752, 0.9746, 0.9060] },
];

#[rustfmt::skip]
const TABLE2: &[CaseOneRow] = &[
    CaseOneRow { p: 50, n: 55, size: [0.0617, 0.0557, 0.0560], power: [0.1782, 0.1697, 0.1573] },
    CaseOneRow { p: 50, n: 110, size: [0.0602, 0.0578, 0.0572], power: [0.2828, 0.2774, 0.2588] },
    CaseOneRow { p: 50, n: 220, size: [0.0608, 0.0594, 0.0598], power: [0.5153, 0.5119, 0.4848] },
    CaseOneRow { p: 100, n: 55, size: [0.0634, 0.0608, 0.0620], power: [0.2276, 0.2182, 0.2023] },
    CaseOneRow { p: 100, n: 110, size: [0.0660, 0.0640, 0.0658], power: [0.4077, 0.4002, 0.3698] },
    CaseOneRow { p: 100, n: 220, size: [0.0628, 0.0622, 0.0640], power: [0.7933, 0.7909, 0.7705] },
    CaseOneRow { p: 200, n: 55, size: [0.0588, 0.0550, 0.0564], power: [0.2838, 0.2742, 0.2556] },
    CaseOneRow { p: 200, n: 110, size: [0.0614, 0.0604, 0.0604], power: [0.5548, 0.5484, 0.5202] },
    CaseOneRow { p: 200, n: 220, size: [0.0598, 0.0588, 0.0588], power: [0.8710, 0.8692, 0.8566] },
    CaseOneRow { p: 400, n: 55, size: [0.0626, 0.0610, 0.0612], power: [0.3494, 0.3406, 0.3226] },
    CaseOneRow { p: 400, n: 110, size: [0.0644, 0.0630, 0.0636], power: [0.6632, 0.6596, 0.6360] },
    CaseOneRow { p: 400, n: 220, size: [0.0586, 0.0580, 0.0608], power: [0.9424, 0.9418, 0.9328] },
    CaseOneRow { p: 800, n: 55, size: [0.0667, 0.0658, 0.0652], power: [0.4122, 0.4046, 0.3780] },
    CaseOneRow { p: 800, n: 110, size: [0.0628, 0.0614, 0.0610], power: [0.7762, 0.7734, 0.7512] },
    CaseOneRow { p: 800, n: 220, size: [0.0562, 0.0554, 0.0564], power: [0.9928, 0.9926, 0.9912] },
    CaseOneRow { p: 1000, n: 55, size: [0.0574, 0.0564, 0.0554], power: [0.4592, 0.4516, 0.4236] },
    CaseOneRow { p: 1000, n: 110, size: [0.0588, 0.0578, 0.0594], power: [0.8406, 0.8380, 0.8212] },
    CaseOneRow { p: 1000, n: 220, size: [0.0566, 0.0558, 0.0571], power: [0.9952, 0.9952, 0.9950] },
];

#[rustfmt::skip]
const TABLE3: &[GridRow] = &[
    GridRow { level: 0.0, left: [0.0572, 0.0494, 0.0500], right: [0.0606, 0.0564, 0.0584] },
    GridRow { level: 0.002, left: [0.0840, 0.0752, 0.0670], right: [0.0886, 0.0814, 0.0678] },
    GridRow { level: 0.003, left: [0.1408, 0.1234, 0.0850], right: [0.1400, 0.1304, 0.0936] },
    GridRow { level: 0.004, left: [0.2358, 0.2146, 0.1242], right: [0.2444, 0.2350, 0.1430] },
    GridRow { level: 0.005, left: [0.3990, 0.3768, 0.1884], right: [0.4172, 0.3994, 0.2248] },
    GridRow { level: 0.006, left: [0.6042, 0.5786, 0.2630], right: [0.6506, 0.6316, 0.3414] },
    GridRow { level: 0.007, left: [0.8098, 0.7948, 0.4140], right: [0.8340, 0.8242, 0.5066] },
    GridRow { level: 0.008, left: [0.9324, 0.9232, 0.5828], right: [0.9442, 0.9390, 0.6870] },
    GridRow { level: 0.009, left: [0.9840, 0.9816, 0.7376], right: [0.9898, 0.9882, 0.8414] },
];

#[rustfmt::skip]
const TABLE4: &[GridRow] = &[
    GridRow { level: 0.0, left: [0.0620, 0.0560, 0.0546], right: [0.0546, 0.0508, 0.0516] },
    GridRow { level: 0.05, left: [0.0844, 0.0756, 0.0690], right: [0.0816, 0.0774, 0.0732] },
    GridRow { level: 0.10, left: [0.1794, 0.1640, 0.1314], right: [0.1540, 0.1468, 0.1380] },
    GridRow { level: 0.15, left: [0.3424, 0.3254, 0.2600], right: [0.3812, 0.3718, 0.3456] },
    GridRow { level: 0.20, left: [0.5314, 0.5110, 0.4190], right: [0.6314, 0.6188, 0.6086] },
    GridRow { level: 0.25, left: [0.8102, 0.7954, 0.7182], right: [0.8066, 0.7996, 0.7902] },
    GridRow { level: 0.30, left: [0.9276, 0.9178, 0.8710], right: [0.9646, 0.9626, 0.9552] },
];

#[rustfmt::skip]
const TABLE5: &[GridRow] = &[
    GridRow { level: 0.0, left: [0.0604, 0.0507, 0.0512], right: [0.0538, 0.0440, 0.0508] },
    GridRow { level: 0.002, left: [0.0944, 0.0826, 0.0670], right: [0.0974, 0.0834, 0.0698] },
    GridRow { level: 0.003, left: [0.1572, 0.1402, 0.0916], right: [0.1850, 0.1590, 0.1034] },
    GridRow { level: 0.004, left: [0.2736, 0.2510, 0.1314], right: [0.3290, 0.2928, 0.1476] },
    GridRow { level: 0.005, left: [0.4598, 0.4318, 0.2098], right: [0.5628, 0.5282, 0.2548] },
    GridRow { level: 0.006, left: [0.6736, 0.6462, 0.3144], right: [0.7990, 0.7714, 0.4034] },
    GridRow { level: 0.007, left: [0.8716, 0.8554, 0.4910], right: [0.9458, 0.9364, 0.5934] },
    GridRow { level: 0.008, left: [0.9586, 0.9526, 0.6704], right: [0.9902, 0.9874, 0.7566] },
    GridRow { level: 0.009, left: [0.9934, 0.9922, 0.8254], right: [0.9996, 0.9996, 0.9002] },
];

#[rustfmt::skip]
const TABLE6: &[GridRow] = &[
    GridRow { level: 0.0, left: [0.0554, 0.0526, 0.0516], right: [0.0608, 0.0588, 0.0568] },
    GridRow { level: 0.05, left: [0.0836, 0.0792, 0.0762], right: [0.0954, 0.0942, 0.0876] },
    GridRow { level: 0.10, left: [0.2226, 0.2164, 0.1928], right: [0.2160, 0.2132, 0.1820] },
    GridRow { level: 0.15, left: [0.4210, 0.4136, 0.3666], right: [0.4394, 0.4352, 0.3818] },
    GridRow { level: 0.20, left: [0.6726, 0.6672, 0.6236], right: [0.6872, 0.6816, 0.6288] },
    GridRow { level: 0.25, left: [0.8964, 0.8926, 0.8660], right: [0.9110, 0.9082, 0.8804] },
    GridRow { level: 0.30, left: [0.9754, 0.9746, 0.9638], right: [0.9822, 0.9814, 0.9740] },
];

#[rustfmt::skip]
const TABLE7: &[BiasRow] = &[
    BiasRow { p: 50, n1: 10, split: (1.0807, 0.4031), plug_in: (1.2045, 0.4650) },
    BiasRow { p: 50, n1: 40, split: (1.0850, 0.1575), plug_in: (1.1211, 0.1682) },
    BiasRow { p: 50, n1: 70, split: (1.0852, 0.1147), plug_in: (1.1059, 0.1194) },
    BiasRow { p: 50, n1: 100, split: (1.0849, 0.0958), plug_in: (1.0998, 0.0986) },
    BiasRow { p: 50, n1: 130, split: (1.0858, 0.0853), plug_in: (1.0974, 0.0872) },
    BiasRow { p: 50, n1: 160, split: (1.0828, 0.0738), plug_in: (1.0921, 0.0751) },
    BiasRow { p: 200, n1: 10, split: (1.0836, 0.3212), plug_in: (1.2058, 0.3316) },
    BiasRow { p: 200, n1: 40, split: (1.0854, 0.0955), plug_in: (1.1220, 0.0986) },
    BiasRow { p: 200, n1: 70, split: (1.0847, 0.0640), plug_in: (1.1056, 0.0653) },
    BiasRow { p: 200, n1: 100, split: (1.0839, 0.0519), plug_in: (1.0987, 0.0530) },
    BiasRow { p: 200, n1: 130, split: (1.0852, 0.0440), plug_in: (1.0967, 0.0445) },
    BiasRow { p: 200, n1: 160, split: (1.0837, 0.0390), plug_in: (1.0931, 0.0394) },
    BiasRow { p: 500, n1: 10, split: (1.0773, 0.2930), plug_in: (1.2029, 0.2947) },
    BiasRow { p: 500, n1: 40, split: (1.0861, 0.0747), plug_in: (1.1220, 0.0756) },
    BiasRow { p: 500, n1: 70, split: (1.0832, 0.0482), plug_in: (1.1040, 0.0482) },
    BiasRow { p: 500, n1: 100, split: (1.0837, 0.0366), plug_in: (1.0987, 0.0367) },
    BiasRow { p: 500, n1: 130, split: (1.0841, 0.0311), plug_in: (1.0955, 0.0313) },
    BiasRow { p: 500, n1: 160, split: (1.0840, 0.0272), plug_in: (1.0932, 0.0273) },
    BiasRow { p: 1000, n1: 10, split: (1.0846, 0.2868), plug_in: (1.2045, 0.2822) },
    BiasRow { p: 1000, n1: 40, split: (1.0843, 0.0675), plug_in: (1.1209, 0.0673) },
    BiasRow { p: 1000, n1: 70, split: (1.0845, 0.0407), plug_in: (1.1054, 0.0405) },
    BiasRow { p: 1000, n1: 100, split: (1.0843, 0.0312), plug_in: (1.0991, 0.0309) },
    BiasRow { p: 1000, n1: 130, split: (1.0844, 0.0258), plug_in: (1.0957, 0.0256) },
    BiasRow { p: 1000, n1: 160, split: (1.0840, 0.0217), plug_in: (1.0933, 0.0215) },
];
