//! Parsing of `simulate --init` specifications.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use thresh_core::dynamics::{ball_coloring, random_coloring};
use thresh_core::{Coloring, Graph, NodeSet};

#[derive(Clone, Debug, PartialEq)]
pub enum InitSpec {
    /// File of blue node ids: whitespace separated (with `#` comments), a
    /// JSON array, or a JSON set `{"nodes": [...]}`.
    BlueList(PathBuf),
    Random {
        b0: usize,
        seed: u64,
    },
    Ball {
        v: usize,
        ell: usize,
    },
}

fn key_values(body: &str) -> anyhow::Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("expected key=value, got {kv:?}"))
        })
        .collect()
}

fn take<T: FromStr>(pairs: &[(&str, &str)], key: &str) -> anyhow::Result<Option<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    pairs
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.parse::<T>().with_context(|| format!("bad value for {key}")))
        .transpose()
}

impl FromStr for InitSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        if let Some(body) = s.strip_prefix("random:") {
            let kv = key_values(body)?;
            let b0 = take(&kv, "b0")?.ok_or_else(|| anyhow!("random: needs b0=K"))?;
            let seed = take(&kv, "seed")?.unwrap_or(0);
            return Ok(InitSpec::Random { b0, seed });
        }
        if let Some(body) = s.strip_prefix("ball:") {
            let kv = key_values(body)?;
            let v = take(&kv, "v")?.ok_or_else(|| anyhow!("ball: needs v=V"))?;
            let ell = take(&kv, "ell")?.ok_or_else(|| anyhow!("ball: needs ell=L"))?;
            return Ok(InitSpec::Ball { v, ell });
        }
        let path = s.strip_prefix("file:").unwrap_or(s);
        if path.is_empty() {
            bail!("empty --init");
        }
        Ok(InitSpec::BlueList(PathBuf::from(path)))
    }
}

pub fn parse_blue_list(text: &str, n: usize) -> anyhow::Result<NodeSet> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let set: NodeSet = serde_json::from_str(text).context("parsing blue set JSON")?;
        if set.capacity() != n {
            bail!("blue set is for n={}, graph has n={n}", set.capacity());
        }
        return Ok(set);
    }
    let ids: Vec<usize> = if trimmed.starts_with('[') {
        serde_json::from_str(text).context("parsing blue id array")?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|t| t.parse::<usize>().with_context(|| format!("bad node id {t:?}")))
            .collect::<anyhow::Result<_>>()?
    };
    Ok(NodeSet::from_nodes(n, ids)?)
}

impl InitSpec {
    pub fn coloring(&self, g: &Graph) -> anyhow::Result<Coloring> {
        Ok(match self {
            InitSpec::BlueList(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Coloring::from_blue(parse_blue_list(&text, g.n())?)
            }
            InitSpec::Random { b0, seed } => random_coloring(g.n(), *b0, *seed)?,
            InitSpec::Ball { v, ell } => ball_coloring(g, *v, *ell)?,
        })
    }
}
