//! Plain `key = value` configuration files for overriding simulation
//! parameters from the command line.
//!
//! Format: one `key = value` pair per line; blank lines and lines starting
//! with `#` are ignored, as is anything after a `#` on a value line. All
//! values are numbers except `f_n_override`, which also accepts `none` to
//! fall back to the N^(2/3) gathered-radius formula.
//!
//! Recognized keys: `r_sheep_sheep`, `r_sheep_dog`, `w_inertia`, `w_lcm`,
//! `w_dog`, `w_sep`, `f_n_override`, `unit_distance`, `sheep_speed`,
//! `dog_speed`, `dt`, `goal_x`, `goal_y`, `goal_radius`.

use anyhow::{anyhow, bail, Context, Result};
use herding_core::{ArenaConfig, SwarmParams, Vec2};

/// One parsed `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: Option<f64>,
}

/// Parse the full text of a config file into override entries.
pub fn parse_config(text: &str) -> Result<Vec<Override>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`, got {raw:?}", lineno + 1))?;
        let key = key.trim().to_string();
        let value = value.trim();
        let value = if key == "f_n_override" && value.eq_ignore_ascii_case("none") {
            None
        } else {
            Some(value.parse::<f64>().with_context(|| {
                format!("line {}: value for {key} is not a number: {value:?}", lineno + 1)
            })?)
        };
        out.push(Override { key, value });
    }
    Ok(out)
}

/// Apply overrides to the swarm parameters and arena, then re-validate both.
pub fn apply_overrides(
    overrides: &[Override],
    params: &mut SwarmParams,
    arena: &mut ArenaConfig,
) -> Result<()> {
    for o in overrides {
        let v = o.value;
        let num = || v.ok_or_else(|| anyhow!("{} requires a numeric value", o.key));
        match o.key.as_str() {
            "r_sheep_sheep" => params.r_sheep_sheep = num()?,
            "r_sheep_dog" => params.r_sheep_dog = num()?,
            "w_inertia" => params.w_inertia = num()?,
            "w_lcm" => params.w_lcm = num()?,
            "w_dog" => params.w_dog = num()?,
            "w_sep" => params.w_sep = num()?,
            "f_n_override" => params.f_n_override = v,
            "unit_distance" => params.unit_distance = num()?,
            "sheep_speed" => params.sheep_speed = num()?,
            "dog_speed" => params.dog_speed = num()?,
            "dt" => params.dt = num()?,
            "goal_x" => arena.goal.x = num()?,
            "goal_y" => arena.goal.y = num()?,
            "goal_radius" => arena.goal_radius = num()?,
            other => bail!("unknown config key {other:?}"),
        }
    }
    params
        .validate()
        .map_err(|e| anyhow!("invalid parameters after overrides: {e}"))?;
    // Rebuild through the validating constructor so goal/radius checks run.
    *arena = ArenaConfig::new(
        arena.width,
        arena.height,
        Vec2::new(arena.goal.x, arena.goal.y),
        arena.goal_radius,
    )
    .map_err(|e| anyhow!("invalid arena after overrides: {e}"))?;
    Ok(())
}

/// Read and apply a config file in one call.
pub fn load_config_file(
    path: &std::path::Path,
    params: &mut SwarmParams,
    arena: &mut ArenaConfig,
) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let overrides = parse_config(&text)
        .with_context(|| format!("cannot parse config file {}", path.display()))?;
    apply_overrides(&overrides, params, arena)
}
