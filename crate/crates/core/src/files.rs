//! Serializable forms of models, sections and fields. Rationals travel as
//! strings such as `"2/3"`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configspace::{BaseSpace, Configuration, PointId, PointSpec};
use crate::error::Error;
use crate::expr::{parse_element, render, ParseError};
use crate::field_model::Field;
use crate::poisson::Kernel;
use crate::scalar::{self, Scalar};
use crate::sections::Section;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub id: String,
    pub rank: usize,
    #[serde(default = "unit_weight")]
    pub weight: String,
}

fn unit_weight() -> String {
    "1".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    pub x: String,
    pub i: usize,
    pub y: String,
    pub j: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub kernel: Vec<KernelEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionEntry {
    pub config: Vec<String>,
    pub element: String,
}

pub type SectionFile = Vec<SectionEntry>;

pub type FieldFile = BTreeMap<String, Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub base: BaseSpace,
    pub kernel: Kernel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("`{0}` is not a rational number")]
    BadRational(String),
    #[error("entry {entry}: {source}")]
    Expr {
        entry: usize,
        #[source]
        source: ParseError,
    },
    #[error("entry {entry}: {source}")]
    Entry {
        entry: usize,
        #[source]
        source: Error,
    },
}

fn rational(text: &str) -> Result<Scalar, LoadError> {
    scalar::parse(text).ok_or_else(|| LoadError::BadRational(text.into()))
}

fn point(base: &BaseSpace, label: &str) -> Result<PointId, Error> {
    base.point(label).cloned().ok_or_else(|| Error::UnknownPoint(label.into()))
}

impl ModelFile {
    pub fn to_model(&self) -> Result<Model, LoadError> {
        let specs = self
            .points
            .iter()
            .map(|p| Ok(PointSpec::new(&p.id, p.rank, rational(&p.weight)?)))
            .collect::<Result<Vec<_>, LoadError>>()?;
        let base = BaseSpace::new(specs)?;
        let mut kernel = Kernel::new();
        let mut seen = BTreeSet::new();
        for e in &self.kernel {
            let x = point(&base, &e.x)?;
            let y = point(&base, &e.y)?;
            if x == y {
                return Err(Error::SamePoint(e.x.clone()).into());
            }
            if x > y {
                return Err(Error::InvalidModel(format!(
                    "kernel entry ({},{}),({},{}) must list the earlier point first",
                    e.x, e.i, e.y, e.j
                ))
                .into());
            }
            base.check_basis(&x, e.i)?;
            base.check_basis(&y, e.j)?;
            if !seen.insert((x.clone(), e.i, y.clone(), e.j)) {
                return Err(Error::InvalidModel(format!(
                    "kernel entry ({},{}),({},{}) is listed twice",
                    e.x, e.i, e.y, e.j
                ))
                .into());
            }
            kernel.set((x, e.i), (y, e.j), rational(&e.value)?)?;
        }
        Ok(Model { base, kernel })
    }

    pub fn from_model(model: &Model) -> Self {
        ModelFile {
            points: model
                .base
                .specs()
                .map(|s| PointEntry { id: s.id.to_string(), rank: s.rank, weight: scalar::render(&s.weight) })
                .collect(),
            kernel: model
                .kernel
                .entries()
                .map(|(u, v, c)| KernelEntry {
                    x: u.0.to_string(),
                    i: u.1,
                    y: v.0.to_string(),
                    j: v.1,
                    value: scalar::render(c),
                })
                .collect(),
        }
    }
}

/// The bundled three-point model.
pub fn m3() -> Model {
    let base = BaseSpace::uniform(&["p", "q", "r"], 1).expect("valid labels");
    let kernel = Kernel::new()
        .with(("p", 0), ("q", 0), scalar::int(1))
        .and_then(|k| k.with(("p", 0), ("r", 0), scalar::int(2)))
        .expect("distinct points");
    Model { base, kernel }
}

/// Builds a section bounded by `max_points`; every element must live over
/// the configuration listed next to it.
pub fn section_from_entries(entries: &[SectionEntry], base: &BaseSpace, max_points: usize) -> Result<Section, LoadError> {
    let mut s = Section::zero(max_points);
    for (n, entry) in entries.iter().enumerate() {
        let labelled = entry
            .config
            .iter()
            .map(|l| point(base, l))
            .collect::<Result<Vec<_>, _>>()
            .and_then(Configuration::from_points)
            .map_err(|source| LoadError::Entry { entry: n, source })?;
        let e = parse_element(&entry.element, base).map_err(|source| LoadError::Expr { entry: n, source })?;
        if e.config() != &labelled {
            return Err(LoadError::Entry {
                entry: n,
                source: Error::ConfigMismatch { left: labelled, right: e.config().clone() },
            });
        }
        s.add(e).map_err(|source| LoadError::Entry { entry: n, source })?;
    }
    Ok(s)
}

pub fn section_to_entries(s: &Section) -> SectionFile {
    s.values()
        .iter()
        .map(|(x, e)| SectionEntry { config: x.iter().map(|p| p.to_string()).collect(), element: render(e) })
        .collect()
}

pub fn field_from_file(file: &FieldFile, base: &BaseSpace) -> Result<Field, LoadError> {
    let mut values = BTreeMap::new();
    for (label, xs) in file {
        let p = point(base, label)?;
        values.insert(p, xs.iter().map(|x| rational(x)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Field::new(base, values)?)
}
