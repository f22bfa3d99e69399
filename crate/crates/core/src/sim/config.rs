//! Campaign files: one `key = value` pair per line.
//!
//! ```text
//! # Model 1, unbalanced, moderate signal
//! model        = model1          # model1 | model2
//! p            = 400
//! sizes        = 10, 10, 80
//! theta        = 0.005           # model1 only
//! replications = 5000
//! seed         = 20240601
//! alpha        = 0.05            # optional, default 0.05
//! methods      = t1, t2, th      # optional, default all
//! innovation   = normal          # optional: normal | chisq4
//! ```
//!
//! Model 2 takes `a` instead of `theta` and an optional `mean_seed`
//! (defaults to `seed`). Optional coefficient overrides are `rho`
//! (model 1, rows separated by `;`) and `b` (model 2). Text after `#` is a
//! comment; keys may not repeat.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::model1::MODEL1_RHO;
use super::model2::MODEL2_B;
use super::{Innovation, Model1Config, Model2Config, ModelConfig, SimConfig};
use crate::error::{Error, Result};
use crate::stats::Method;

const KEYS: &[&str] = &[
    "model",
    "p",
    "sizes",
    "theta",
    "a",
    "mean_seed",
    "innovation",
    "rho",
    "b",
    "replications",
    "seed",
    "alpha",
    "methods",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    last_line: usize,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<(usize, String)> {
        self.take(key).ok_or_else(|| Error::Config {
            line: self.last_line,
            reason: format!("missing required key `{key}`"),
        })
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => parse_value(line, key, &v).map(Some),
        }
    }

    fn parse_required<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, v) = self.required(key)?;
        parse_value(line, key, &v)
    }

    fn reject(&mut self, key: &str, why: &str) -> Result<()> {
        match self.take(key) {
            Some((line, _)) => Err(Error::Config {
                line,
                reason: format!("`{key}` {why}"),
            }),
            None => Ok(()),
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config {
        line,
        reason: format!("cannot parse `{v}` for `{key}`"),
    })
}

fn parse_list<T: FromStr>(line: usize, key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|s| parse_value(line, key, s.trim()))
        .collect()
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            reason: format!("expected `key = value`, found `{body}`"),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config {
                line,
                reason: format!("unknown key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(Error::Config {
                line,
                reason: format!("empty value for `{key}`"),
            });
        }
        if let Some((first, _)) = map.get(&key) {
            return Err(Error::Config {
                line,
                reason: format!("duplicate key `{key}` (first set on line {first})"),
            });
        }
        map.insert(key, (line, value));
    }
    Ok(Entries { map, last_line })
}

pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut e = tokenize(text)?;
    let (model_line, model) = e.required("model")?;
    let p: usize = e.parse_required("p")?;
    let (sizes_line, sizes) = e.required("sizes")?;
    let sizes: Vec<usize> = parse_list(sizes_line, "sizes", &sizes)?;
    let replications: usize = e.parse_required("replications")?;
    let seed: u64 = e.parse_required("seed")?;
    let alpha: f64 = e.parse("alpha")?.unwrap_or(0.05);
    let methods = match e.take("methods") {
        None => Method::ALL.to_vec(),
        Some((_, v)) if v.eq_ignore_ascii_case("all") => Method::ALL.to_vec(),
        Some((line, v)) => parse_list(line, "methods", &v)?,
    };
    let innovation: Innovation = e.parse("innovation")?.unwrap_or_default();

    let model = match model.to_ascii_lowercase().as_str() {
        "model1" => {
            e.reject("a", "applies to model2 only")?;
            e.reject("mean_seed", "applies to model2 only")?;
            e.reject("b", "applies to model2 only")?;
            let theta: f64 = e.parse_required("theta")?;
            let rho = match e.take("rho") {
                None => MODEL1_RHO.to_vec(),
                Some((line, v)) => v
                    .split(';')
                    .map(|row| {
                        let r: Vec<f64> = parse_list(line, "rho", row)?;
                        <[f64; 3]>::try_from(r).map_err(|_| Error::Config {
                            line,
                            reason: "each `rho` row needs three coefficients".into(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            ModelConfig::Model1(Model1Config {
                rho,
                innovation,
                p,
                sizes,
                theta,
            })
        }
        "model2" => {
            e.reject("theta", "applies to model1 only")?;
            e.reject("rho", "applies to model1 only")?;
            let a: f64 = e.parse_required("a")?;
            let mean_seed: u64 = e.parse("mean_seed")?.unwrap_or(seed);
            let b = match e.take("b") {
                None => MODEL2_B.to_vec(),
                Some((line, v)) => parse_list(line, "b", &v)?,
            };
            ModelConfig::Model2(Model2Config {
                b,
                innovation,
                p,
                sizes,
                a,
                mean_seed,
            })
        }
        other => {
            return Err(Error::Config {
                line: model_line,
                reason: format!("unknown model `{other}`; expected model1 or model2"),
            })
        }
    };
    let cfg = SimConfig {
        model,
        replications,
        seed,
        alpha,
        methods,
    };
    cfg.validate().map_err(|err| Error::Config {
        line: 0,
        reason: err.to_string(),
    })?;
    match &cfg.model {
        ModelConfig::Model1(c) => c.validate(),
        ModelConfig::Model2(c) => c.validate(),
    }
    .map_err(|err| Error::Config {
        line: 0,
        reason: err.to_string(),
    })?;
    Ok(cfg)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Canonical text form; [`parse_config`] reads it back unchanged.
pub fn render_config(cfg: &SimConfig) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    match &cfg.model {
        ModelConfig::Model1(c) => {
            put("model", "model1".into());
            put("p", c.p.to_string());
            put("sizes", join(&c.sizes));
            put("theta", c.theta.to_string());
            put("innovation", c.innovation.name().into());
            let rows: Vec<String> = c.rho.iter().map(|r| join(r)).collect();
            put("rho", rows.join("; "));
        }
        ModelConfig::Model2(c) => {
            put("model", "model2".into());
            put("p", c.p.to_string());
            put("sizes", join(&c.sizes));
            put("a", c.a.to_string());
            put("mean_seed", c.mean_seed.to_string());
            put("innovation", c.innovation.name().into());
            put("b", join(&c.b));
        }
    }
    put("replications", cfg.replications.to_string());
    put("seed", cfg.seed.to_string());
    put("alpha", cfg.alpha.to_string());
    put("methods", join(&cfg.methods));
    out
}
