//! `key = value` experiment configuration files.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::evaluation::ExperimentConfig;
use crate::{Error, Result};

/// Every accepted key, in serialization order.
pub const KEYS: [&str; 19] = [
    "n_bs",
    "n_users",
    "trials",
    "seed",
    "v_list",
    "methods",
    "schemes",
    "delta",
    "bandwidth_hz",
    "carrier_hz",
    "noise_psd_dbm_hz",
    "max_power_dbm",
    "area_side_m",
    "outer_max_iters",
    "inner_max_iters",
    "outer_tol",
    "inner_tol",
    "sinr_floor",
    "bisection_tol",
];

/// Splits a config document into `(key, value)` pairs in file order.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            parse_assignment(line).map_err(|message| Error::Config { key: format!("line {}", i + 1), message })?;
        out.push((key, value));
    }
    Ok(out)
}

/// Parses one `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    parse_assignment(s.trim()).map_err(|message| Error::Config { key: s.to_string(), message })
}

fn parse_assignment(line: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = line.split_once('=').ok_or_else(|| "expected `key = value`".to_string())?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err("empty key".into());
    }
    Ok((k.to_string(), v.to_string()))
}

/// Applies entries over the defaults; later entries win. `v_list` defaults to
/// `1..=n_bs` when never given.
pub fn build_config(entries: &[(String, String)]) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut v_list_set = false;
    for (key, value) in entries {
        let err = |message: String| Error::Config { key: key.clone(), message };
        match key.as_str() {
            "n_bs" => cfg.n_bs = scalar(value).map_err(err)?,
            "n_users" => cfg.n_users = scalar(value).map_err(err)?,
            "trials" => cfg.trials = scalar(value).map_err(err)?,
            "seed" => cfg.base_seed = scalar(value).map_err(err)?,
            "v_list" => {
                cfg.v_list = list(value).map_err(err)?;
                v_list_set = true;
            }
            "methods" => cfg.methods = list(value).map_err(err)?,
            "schemes" => cfg.schemes = list(value).map_err(err)?,
            "delta" => cfg.delta = scalar(value).map_err(err)?,
            "bandwidth_hz" => cfg.params.bandwidth_hz = scalar(value).map_err(err)?,
            "carrier_hz" => cfg.params.carrier_hz = scalar(value).map_err(err)?,
            "noise_psd_dbm_hz" => cfg.params.noise_psd_dbm_hz = scalar(value).map_err(err)?,
            "max_power_dbm" => cfg.params.max_power_dbm = scalar(value).map_err(err)?,
            "area_side_m" => cfg.params.area_side_m = scalar(value).map_err(err)?,
            "outer_max_iters" => cfg.solver.outer_max_iters = scalar(value).map_err(err)?,
            "inner_max_iters" => cfg.solver.inner_max_iters = scalar(value).map_err(err)?,
            "outer_tol" => cfg.solver.outer_tol = scalar(value).map_err(err)?,
            "inner_tol" => cfg.solver.inner_tol = scalar(value).map_err(err)?,
            "sinr_floor" => cfg.solver.sinr_floor = scalar(value).map_err(err)?,
            "bisection_tol" => cfg.solver.bisection_tol = scalar(value).map_err(err)?,
            _ => return Err(err("unknown key".into())),
        }
    }
    if !v_list_set {
        cfg.v_list = (1..=cfg.n_bs).collect();
    }
    if cfg.trials == 0 {
        return Err(Error::Config { key: "trials".into(), message: "must be at least 1".into() });
    }
    cfg.validate().map_err(|e| match e {
        Error::CutOutOfRange { .. } => Error::Config { key: "v_list".into(), message: e.to_string() },
        other => other,
    })?;
    Ok(cfg)
}

/// Parses a config document, then applies `overrides` on top.
pub fn load_config(text: &str, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let mut entries = parse_entries(text)?;
    entries.extend_from_slice(overrides);
    build_config(&entries)
}

/// Writes every key; [`load_config`] reads it back to the same config.
pub fn serialize_config(cfg: &ExperimentConfig) -> String {
    let join = |items: Vec<String>| items.join(", ");
    let mut s = String::new();
    let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
    put("n_bs", cfg.n_bs.to_string());
    put("n_users", cfg.n_users.to_string());
    put("trials", cfg.trials.to_string());
    put("seed", cfg.base_seed.to_string());
    put("v_list", join(cfg.v_list.iter().map(|v| v.to_string()).collect()));
    put("methods", join(cfg.methods.iter().map(|m| m.to_string()).collect()));
    put("schemes", join(cfg.schemes.iter().map(|m| m.to_string()).collect()));
    put("delta", format!("{:?}", cfg.delta));
    put("bandwidth_hz", format!("{:?}", cfg.params.bandwidth_hz));
    put("carrier_hz", format!("{:?}", cfg.params.carrier_hz));
    put("noise_psd_dbm_hz", format!("{:?}", cfg.params.noise_psd_dbm_hz));
    put("max_power_dbm", format!("{:?}", cfg.params.max_power_dbm));
    put("area_side_m", format!("{:?}", cfg.params.area_side_m));
    put("outer_max_iters", cfg.solver.outer_max_iters.to_string());
    put("inner_max_iters", cfg.solver.inner_max_iters.to_string());
    put("outer_tol", format!("{:?}", cfg.solver.outer_tol));
    put("inner_tol", format!("{:?}", cfg.solver.inner_tol));
    put("sinr_floor", format!("{:?}", cfg.solver.sinr_floor));
    put("bisection_tol", format!("{:?}", cfg.solver.bisection_tol));
    s
}

fn scalar<T: FromStr>(value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("cannot parse `{value}`: {e}"))
}

fn list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|x| scalar(x.trim())).collect()
}
