//! Plain-text simulation recipes.
//!
//! One directive per line; `#` starts a comment. Directives:
//!
//! ```text
//! n <int>                      series length (default 20000)
//! seed <u64>                   generator seed (default 1)
//! grid <int>                   transfer-curve grid points (default 1024)
//! noise sigma=<real>           white noise component
//! sinusoid period=<real> amplitude=<real> [phase=<real>]
//! filter m=<real> k=<int>      filter applied to the series
//! reference m=<real> k=<int>   transfer curve only
//! ```
//!
//! `n`, `seed` and `grid` may appear at most once. At least one signal
//! component is required.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulate::{Component, SimulationRecipe, DEFAULT_SEED, DESK_SCALE_N};
use crate::window::FilterSpec;

pub fn read_recipe(path: impl AsRef<Path>) -> Result<SimulationRecipe> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_recipe(&text)
}

pub fn parse_recipe(text: &str) -> Result<SimulationRecipe> {
    let mut recipe = SimulationRecipe::new(DESK_SCALE_N, DEFAULT_SEED);
    let mut seen = [false; 3];

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Config { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let directive = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();

        match directive {
            "n" | "seed" | "grid" => {
                let slot = ["n", "seed", "grid"].iter().position(|d| *d == directive).unwrap();
                if std::mem::replace(&mut seen[slot], true) {
                    return Err(err(format!("{directive} given more than once")));
                }
                let [value] = rest[..] else {
                    return Err(err(format!("{directive} takes exactly one value")));
                };
                match directive {
                    "n" => recipe.n = parse_num(value, directive, line)?,
                    "seed" => recipe.seed = parse_num(value, directive, line)?,
                    _ => recipe.grid_points = parse_num(value, directive, line)?,
                }
            }
            "noise" => {
                let mut kv = Pairs::parse(&rest, line)?;
                let sigma = kv.take("sigma")?;
                kv.finish()?;
                recipe.components.push(Component::WhiteNoise { sigma });
            }
            "sinusoid" => {
                let mut kv = Pairs::parse(&rest, line)?;
                let period = kv.take("period")?;
                let amplitude = kv.take("amplitude")?;
                let phase = kv.take_or("phase", 0.0)?;
                kv.finish()?;
                recipe.components.push(Component::Sinusoid { period, amplitude, phase });
            }
            "filter" | "reference" => {
                let mut kv = Pairs::parse(&rest, line)?;
                let m: f64 = kv.take("m")?;
                let k: u32 = kv.take("k")?;
                kv.finish()?;
                let spec = FilterSpec::new(m, k).map_err(|e| err(e.to_string()))?;
                if directive == "filter" {
                    recipe.filters.push(spec);
                } else {
                    recipe.references.push(spec);
                }
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    if recipe.components.is_empty() {
        return Err(Error::Config {
            line: text.lines().count(),
            message: "recipe has no signal components (noise or sinusoid)".into(),
        });
    }
    recipe.validate().map_err(|e| Error::Config {
        line: 0,
        message: e.to_string(),
    })?;
    Ok(recipe)
}

/// Renders a recipe in the same format `parse_recipe` reads.
pub fn format_recipe(recipe: &SimulationRecipe) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n {}", recipe.n);
    let _ = writeln!(s, "seed {}", recipe.seed);
    let _ = writeln!(s, "grid {}", recipe.grid_points);
    for c in &recipe.components {
        let _ = match c {
            Component::WhiteNoise { sigma } => writeln!(s, "noise sigma={sigma:?}"),
            Component::Sinusoid { period, amplitude, phase } => writeln!(
                s,
                "sinusoid period={period:?} amplitude={amplitude:?} phase={phase:?}"
            ),
        };
    }
    for f in &recipe.filters {
        let _ = writeln!(s, "filter m={:?} k={}", f.m_r(), f.k());
    }
    for f in &recipe.references {
        let _ = writeln!(s, "reference m={:?} k={}", f.m_r(), f.k());
    }
    s
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("invalid value {value:?} for {key}"),
    })
}

struct Pairs<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Pairs<'a> {
    fn parse(words: &[&'a str], line: usize) -> Result<Self> {
        let mut map = BTreeMap::new();
        for w in words {
            let Some((k, v)) = w.split_once('=') else {
                return Err(Error::Config {
                    line,
                    message: format!("expected key=value, got {w:?}"),
                });
            };
            if map.insert(k, v).is_some() {
                return Err(Error::Config {
                    line,
                    message: format!("{k} given more than once"),
                });
            }
        }
        Ok(Pairs { line, map })
    }

    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        match self.map.remove(key) {
            Some(v) => parse_num(v, key, self.line),
            None => Err(Error::Config {
                line: self.line,
                message: format!("missing {key}=..."),
            }),
        }
    }

    fn take_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.map.remove(key) {
            Some(v) => parse_num(v, key, self.line),
            None => Ok(default),
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(Error::Config {
                line: self.line,
                message: format!("unexpected key {k:?}"),
            }),
            None => Ok(()),
        }
    }
}
