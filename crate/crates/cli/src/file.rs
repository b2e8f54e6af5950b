//! JSON module and extension files.
//!
//! ```json
//! {
//!   "primes": [2],
//!   "m": 1,
//!   "components": { "0": { "even": { "rank": 1, "torsion": [] }, "odd": { "rank": 0, "torsion": [] } } },
//!   "maps": { "p=2:alpha10": { "0": [["2"]] } }
//! }
//! ```
//!
//! Missing vertices are zero. Maps are keyed by prime and arrow, then by source vertex;
//! blocks are target rows by source columns with entries as fraction strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use kgring_core::intlinalg::GroupPart;
use kgring_core::ring::{all_vertices, Vertex};
use kgring_core::{Arrow, Extension, GradedGroup, IntMatrix, KGModule, Localization, ModuleMap, Parity, Rational};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_RANK: usize = 512;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartFile {
    #[serde(default)]
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentFile {
    #[serde(default)]
    pub even: PartFile,
    #[serde(default)]
    pub odd: PartFile,
}

pub type Block = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub primes: Vec<u64>,
    #[serde(default = "one")]
    pub m: u64,
    #[serde(default)]
    pub components: BTreeMap<String, ComponentFile>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, Block>>,
}

fn one() -> u64 {
    1
}

/// A short exact sequence `sub -> middle -> quotient`; `iota` and `beta` are full matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub sub: ModuleFile,
    pub middle: ModuleFile,
    pub quotient: ModuleFile,
    pub iota: Block,
    pub beta: Block,
}

pub fn vertex_key(v: &[Vertex]) -> String {
    v.iter().map(|d| char::from(b'0' + d)).collect()
}

fn parse_vertex(s: &str, k: usize) -> Result<Vec<Vertex>> {
    let v: Vec<Vertex> = s
        .chars()
        .map(|c| match c {
            '0'..='2' => Ok(c as u8 - b'0'),
            _ => Err(anyhow!("bad vertex {s:?}: digits must be 0, 1 or 2")),
        })
        .collect::<Result<_>>()?;
    if v.len() != k {
        bail!("vertex {s:?} needs {k} digits");
    }
    Ok(v)
}

fn map_key(p: u64, a: Arrow) -> String {
    format!("p={p}:{}", a.name())
}

fn parse_map_key(s: &str, primes: &[u64]) -> Result<(usize, Arrow)> {
    let (p, a) = s
        .strip_prefix("p=")
        .and_then(|r| r.split_once(':'))
        .ok_or_else(|| anyhow!("bad map key {s:?}, expected p=<prime>:alpha<j><k>"))?;
    let p: u64 = p.parse().with_context(|| format!("bad prime in {s:?}"))?;
    let j = primes
        .iter()
        .position(|&q| q == p)
        .ok_or_else(|| anyhow!("map key {s:?} names a prime not in {primes:?}"))?;
    let a = Arrow::from_name(a).ok_or_else(|| anyhow!("unknown arrow in {s:?}"))?;
    Ok((j, a))
}

pub fn parse_matrix(rows: &Block, shape: Option<(usize, usize)>) -> Result<IntMatrix> {
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| Rational::from_str(x.trim()).map_err(|_| anyhow!("bad fraction {x:?}")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = match shape {
        Some((r, 0)) => {
            if parsed.iter().any(|row| !row.is_empty()) {
                bail!("expected an empty block");
            }
            IntMatrix::zeros(r, 0)
        }
        Some((0, c)) if parsed.is_empty() => IntMatrix::zeros(0, c),
        _ => IntMatrix::from_rows(parsed).map_err(|e| anyhow!("{e}"))?,
    };
    if let Some((r, c)) = shape {
        if (m.rows(), m.cols()) != (r, c) {
            bail!("block is {}x{}, expected {r}x{c}", m.rows(), m.cols());
        }
    }
    Ok(m)
}

pub fn matrix_rows(m: &IntMatrix) -> Block {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_string()).collect())
        .collect()
}

fn part(p: &PartFile) -> GroupPart {
    GroupPart::new(p.rank, p.torsion.iter().map(|&d| BigInt::from(d)).collect())
}

fn part_file(p: &GroupPart) -> PartFile {
    PartFile {
        rank: p.rank,
        torsion: p
            .torsion
            .iter()
            .map(|d| u64::try_from(d).expect("torsion order fits in u64"))
            .collect(),
    }
}

impl ModuleFile {
    pub fn to_module(&self, max_rank: usize) -> Result<KGModule> {
        let k = self.primes.len();
        let ring = Localization::new(self.m).map_err(|e| anyhow!("{e}"))?;
        let verts = all_vertices(k);
        let mut comps = vec![GradedGroup::zero(ring.clone()); verts.len()];
        for (key, c) in &self.components {
            let v = parse_vertex(key, k)?;
            let vi = verts.iter().position(|w| w == &v).unwrap();
            let g = GradedGroup::new(ring.clone(), part(&c.even), part(&c.odd))
                .map_err(|e| anyhow!("component {key}: {e}"))?;
            if g.dim() > max_rank {
                bail!(
                    "component {key} has {} generators, above the cap of {max_rank}",
                    g.dim()
                );
            }
            comps[vi] = g;
        }
        let mut blocks = BTreeMap::new();
        for (key, by_vertex) in &self.maps {
            let (j, a) = parse_map_key(key, &self.primes)?;
            for (vkey, rows) in by_vertex {
                let v = parse_vertex(vkey, k)?;
                if v[j] != a.source() {
                    bail!("{key} does not start at vertex {vkey}");
                }
                let mut w = v.clone();
                w[j] = a.target();
                let (vi, wi) = (
                    verts.iter().position(|x| x == &v).unwrap(),
                    verts.iter().position(|x| x == &w).unwrap(),
                );
                let m = parse_matrix(rows, Some((comps[wi].dim(), comps[vi].dim())))
                    .with_context(|| format!("{key} at {vkey}"))?;
                blocks.insert((j, a, v), m);
            }
        }
        KGModule::from_blocks(&self.primes, ring, comps, &blocks).map_err(|e| anyhow!("{e}"))
    }

    pub fn from_module(m: &KGModule) -> Self {
        let mut components = BTreeMap::new();
        for (v, c) in m.vertices().iter().zip(m.components()) {
            if !c.is_zero() {
                components.insert(
                    vertex_key(v),
                    ComponentFile {
                        even: part_file(c.even()),
                        odd: part_file(c.odd()),
                    },
                );
            }
        }
        let mut maps: BTreeMap<String, BTreeMap<String, Block>> = BTreeMap::new();
        for ((j, a, v), b) in m.blocks() {
            if b.is_zero() {
                continue;
            }
            maps.entry(map_key(m.primes()[j], a))
                .or_default()
                .insert(vertex_key(&v), matrix_rows(&b));
        }
        ModuleFile {
            primes: m.primes().to_vec(),
            m: m.ring().modulus(),
            components,
            maps,
        }
    }
}

impl ExtensionFile {
    pub fn to_extension(&self, max_rank: usize) -> Result<Extension> {
        let sub = self.sub.to_module(max_rank).context("sub")?;
        let middle = self.middle.to_module(max_rank).context("middle")?;
        let quotient = self.quotient.to_module(max_rank).context("quotient")?;
        let iota = parse_matrix(&self.iota, Some((middle.dim(), sub.dim()))).context("iota")?;
        let beta = parse_matrix(&self.beta, Some((quotient.dim(), middle.dim()))).context("beta")?;
        let iota = ModuleMap::new(sub, middle.clone(), Parity::Even, iota).map_err(|e| anyhow!("iota: {e}"))?;
        let beta = ModuleMap::new(middle, quotient, Parity::Even, beta).map_err(|e| anyhow!("beta: {e}"))?;
        Extension::new(iota, beta).map_err(|e| anyhow!("{e}"))
    }

    pub fn from_extension(e: &Extension) -> Self {
        ExtensionFile {
            sub: ModuleFile::from_module(e.sub()),
            middle: ModuleFile::from_module(e.middle()),
            quotient: ModuleFile::from_module(e.quotient()),
            iota: matrix_rows(e.iota().matrix()),
            beta: matrix_rows(e.beta().matrix()),
        }
    }
}

pub fn read_module(path: &std::path::Path, max_rank: usize) -> Result<KGModule> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ModuleFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_module(max_rank)
        .with_context(|| format!("in {}", path.display()))
}

pub fn read_extension(path: &std::path::Path, max_rank: usize) -> Result<Extension> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ExtensionFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_extension(max_rank)
        .with_context(|| format!("in {}", path.display()))
}
