//! The JSON group-file format. Rationals are strings such as `"3/4"`.

use std::fs;
use std::path::Path;

use orbispec_core::crystal::{
    closure, AffineIsometry, CrystalGroup, FiniteAffine, FiniteAffineGroup, DEFAULT_CLOSURE_BOUND,
};
use orbispec_core::exact::{parse_rational, IntMatrix, RatMatrix, Rational};
use orbispec_core::homog::FiniteOrthGroup;
use orbispec_core::lattice::Lattice;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: field {field}: {message}")]
    Field { path: String, field: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub linear: Vec<Vec<i64>>,
    pub transl: Vec<String>,
}

/// One group file. `torus` files hold generators of a finite group of
/// isometries of a torus, in the torus lattice's coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupFile {
    Crystal {
        name: String,
        dim: usize,
        gram: Vec<Vec<String>>,
        cosets: Vec<CosetEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sublattice: Option<Vec<Vec<i64>>>,
    },
    Orthogonal {
        name: String,
        dim: usize,
        elements: Vec<Vec<Vec<String>>>,
    },
    Torus {
        name: String,
        dim: usize,
        generators: Vec<CosetEntry>,
    },
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Crystal { name: String, group: CrystalGroup, sublattice: Option<IntMatrix> },
    Orthogonal { name: String, group: FiniteOrthGroup },
    Torus { name: String, group: FiniteAffineGroup },
}

impl Loaded {
    pub fn name(&self) -> &str {
        match self {
            Loaded::Crystal { name, .. } | Loaded::Orthogonal { name, .. } | Loaded::Torus { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Crystal { .. } => "crystal",
            Loaded::Orthogonal { .. } => "orthogonal",
            Loaded::Torus { .. } => "torus",
        }
    }
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: impl Into<String>, message: impl ToString) -> FileError {
        FileError::Field { path: self.path.to_string(), field: field.into(), message: message.to_string() }
    }

    fn rational(&self, field: String, s: &str) -> Result<Rational, FileError> {
        parse_rational(s).map_err(|e| self.err(field, e))
    }

    fn square<T>(&self, field: &str, rows: &[Vec<T>], n: usize) -> Result<(), FileError> {
        if rows.len() != n {
            return Err(self.err(field, format!("expected {n} rows, found {}", rows.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(self.err(format!("{field}[{i}]"), format!("expected {n} entries, found {}", r.len())));
        }
        Ok(())
    }

    fn rat_matrix(&self, field: &str, rows: &[Vec<String>], n: usize) -> Result<RatMatrix, FileError> {
        self.square(field, rows, n)?;
        let mut out = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let parsed: Result<Vec<Rational>, FileError> =
                row.iter().enumerate().map(|(j, s)| self.rational(format!("{field}[{i}][{j}]"), s)).collect();
            out.push(parsed?);
        }
        Ok(RatMatrix::from_rows(out))
    }

    fn int_matrix(&self, field: &str, rows: &[Vec<i64>], n: usize) -> Result<IntMatrix, FileError> {
        self.square(field, rows, n)?;
        Ok(IntMatrix::from_rows(rows.to_vec()))
    }

    fn coset(&self, field: &str, c: &CosetEntry, n: usize) -> Result<(IntMatrix, Vec<Rational>), FileError> {
        let linear = self.int_matrix(&format!("{field}.linear"), &c.linear, n)?;
        if c.transl.len() != n {
            return Err(self.err(format!("{field}.transl"), format!("expected {n} entries, found {}", c.transl.len())));
        }
        let transl = c
            .transl
            .iter()
            .enumerate()
            .map(|(j, s)| self.rational(format!("{field}.transl[{j}]"), s))
            .collect::<Result<_, _>>()?;
        Ok((linear, transl))
    }
}

impl GroupFile {
    /// Parses and validates the group the file describes.
    pub fn to_loaded(&self, path: &str) -> Result<Loaded, FileError> {
        let cx = Ctx { path };
        match self {
            GroupFile::Crystal { name, dim, gram, cosets, sublattice } => {
                let n = *dim;
                let lattice = Lattice::new(cx.rat_matrix("gram", gram, n)?).map_err(|e| cx.err("gram", e))?;
                let mut reps = Vec::with_capacity(cosets.len());
                for (i, c) in cosets.iter().enumerate() {
                    let (linear, transl) = cx.coset(&format!("cosets[{i}]"), c, n)?;
                    reps.push(AffineIsometry::new(linear, transl));
                }
                let group = CrystalGroup::new(lattice, reps).map_err(|e| cx.err("cosets", e))?;
                let sublattice = match sublattice {
                    Some(s) => {
                        let s = cx.int_matrix("sublattice", s, n)?;
                        group.quotient_mod_sublattice(&s).map_err(|e| cx.err("sublattice", e))?;
                        Some(s)
                    }
                    None => None,
                };
                Ok(Loaded::Crystal { name: name.clone(), group, sublattice })
            }
            GroupFile::Orthogonal { name, dim, elements } => {
                let mut mats = Vec::with_capacity(elements.len());
                for (i, m) in elements.iter().enumerate() {
                    mats.push(cx.rat_matrix(&format!("elements[{i}]"), m, *dim)?);
                }
                let group = FiniteOrthGroup::new(mats).map_err(|e| cx.err("elements", e))?;
                Ok(Loaded::Orthogonal { name: name.clone(), group })
            }
            GroupFile::Torus { name, dim, generators } => {
                let mut gens = Vec::with_capacity(generators.len());
                for (i, c) in generators.iter().enumerate() {
                    let (linear, transl) = cx.coset(&format!("generators[{i}]"), c, *dim)?;
                    if linear.det().abs() != 1 {
                        return Err(cx.err(format!("generators[{i}].linear"), "not invertible over the integers"));
                    }
                    gens.push(FiniteAffine::new(linear, transl));
                }
                if gens.is_empty() {
                    gens.push(FiniteAffine::identity(*dim));
                }
                let group = closure(&gens, DEFAULT_CLOSURE_BOUND).map_err(|e| cx.err("generators", e))?;
                Ok(Loaded::Torus { name: name.clone(), group })
            }
        }
    }

    pub fn from_crystal(name: &str, g: &CrystalGroup, sublattice: Option<&IntMatrix>) -> Self {
        GroupFile::Crystal {
            name: name.to_string(),
            dim: g.dim(),
            gram: strings(&g.lattice().gram().to_rows()),
            cosets: g.reps().iter().map(|r| coset_entry(&r.linear, &r.transl)).collect(),
            sublattice: sublattice.map(IntMatrix::to_rows),
        }
    }

    pub fn from_orthogonal(name: &str, g: &FiniteOrthGroup) -> Self {
        GroupFile::Orthogonal {
            name: name.to_string(),
            dim: g.dim(),
            elements: g.elements().iter().map(|m| strings(&m.to_rows())).collect(),
        }
    }

    pub fn from_torus(name: &str, generators: &[FiniteAffine]) -> Self {
        GroupFile::Torus {
            name: name.to_string(),
            dim: generators.first().map_or(0, FiniteAffine::dim),
            generators: generators.iter().map(|g| coset_entry(&g.linear, &g.transl)).collect(),
        }
    }
}

fn strings(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn coset_entry(linear: &IntMatrix, transl: &[Rational]) -> CosetEntry {
    CosetEntry { linear: linear.to_rows(), transl: transl.iter().map(ToString::to_string).collect() }
}

pub fn read(path: &Path) -> Result<GroupFile, FileError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| FileError::Io { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json { path: shown, source })
}

pub fn load(path: &Path) -> Result<Loaded, FileError> {
    read(path)?.to_loaded(&path.display().to_string())
}

pub fn write(path: &Path, file: &GroupFile) -> Result<(), FileError> {
    let text = serde_json::to_string_pretty(file).expect("group files serialize");
    fs::write(path, text + "\n").map_err(|source| FileError::Io { path: path.display().to_string(), source })
}
