//! JSON problem bundles: the on-disk exchange format for instances.
//! Serialization goes through serde_json, whose float emission is the
//! shortest representation that parses back to the identical double, so
//! round trips are lossless.

use anyhow::{bail, Context, Result};
use avekit::{AveProblem, GaveProblem, Mat};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BundleMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProblemBundle {
    pub schema_version: u32,
    pub n: usize,
    /// Row-major n*n entries.
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    /// Optional second matrix for generalized systems, row-major.
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b_matrix: Option<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BundleMeta>,
}

impl ProblemBundle {
    pub fn from_ave(p: &AveProblem) -> Self {
        ProblemBundle {
            schema_version: SCHEMA_VERSION,
            n: p.n(),
            a: p.a.data().to_vec(),
            b_matrix: None,
            b: p.b.clone(),
            metadata: None,
        }
    }

    pub fn from_gave(g: &GaveProblem) -> Self {
        ProblemBundle {
            schema_version: SCHEMA_VERSION,
            n: g.n(),
            a: g.a.data().to_vec(),
            b_matrix: Some(g.b.data().to_vec()),
            b: g.rhs.clone(),
            metadata: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.n * self.n {
            bail!(
                "field A must hold n*n = {} entries, found {}",
                self.n * self.n,
                self.a.len()
            );
        }
        if self.b.len() != self.n {
            bail!("field b must hold n = {} entries, found {}", self.n, self.b.len());
        }
        if let Some(bm) = &self.b_matrix {
            if bm.len() != self.n * self.n {
                bail!(
                    "field B must hold n*n = {} entries, found {}",
                    self.n * self.n,
                    bm.len()
                );
            }
        }
        Ok(())
    }

    pub fn to_ave(&self) -> Result<AveProblem> {
        self.validate()?;
        Ok(AveProblem::new(
            Mat::from_vec(self.n, self.n, self.a.clone()),
            self.b.clone(),
        )?)
    }

    /// Interpret as a generalized system; B defaults to the identity.
    pub fn to_gave(&self) -> Result<GaveProblem> {
        self.validate()?;
        let b = match &self.b_matrix {
            Some(bm) => Mat::from_vec(self.n, self.n, bm.clone()),
            None => Mat::identity(self.n),
        };
        Ok(GaveProblem::new(
            Mat::from_vec(self.n, self.n, self.a.clone()),
            b,
            self.b.clone(),
        )?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: ProblemBundle =
            serde_json::from_str(text).context("could not parse the problem bundle")?;
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .with_context(|| format!("writing bundle to {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading bundle from {}", path.display()))?;
        Self::from_json(&text)
    }
}
