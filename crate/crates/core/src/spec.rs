//! Plain-text key-value description of a graded matrix algebra.
//!
//! ```text
//! kind = MnF        # MnF | MnE | Mab
//! n = 2             # or a = 1, b = 1 for Mab
//! group = Z2        # Z2xZ4, 1, or table:path.csv
//! tuple = e, g
//! conductor = 1
//! budget = 6
//! ```
//!
//! Entries may also be separated by `;` on one line.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::matalg::{AlgebraKind, ElementaryGrading, GradedMatrixAlgebra};

pub const DEFAULT_BUDGET: usize = 6;
pub const DEFAULT_CONDUCTOR: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSpec {
    pub kind: String,
    pub n: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub group: String,
    pub tuple: Vec<String>,
    pub conductor: u32,
    pub budget: usize,
}

impl AlgebraSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = AlgebraSpec {
            kind: String::new(),
            n: None,
            a: None,
            b: None,
            group: "1".into(),
            tuple: Vec::new(),
            conductor: DEFAULT_CONDUCTOR,
            budget: DEFAULT_BUDGET,
        };
        let mut group_given = false;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("");
            for entry in line.split(';').map(str::trim).filter(|e| !e.is_empty()) {
                let (key, value) = entry
                    .split_once('=')
                    .ok_or_else(|| Error::Spec(format!("expected `key = value`, got `{entry}`")))?;
                let (key, value) = (key.trim(), value.trim());
                let number = |v: &str| {
                    v.parse::<usize>()
                        .map_err(|_| Error::Spec(format!("`{key}` must be a natural number, got `{v}`")))
                };
                match key {
                    "kind" => spec.kind = value.to_string(),
                    "n" => spec.n = Some(number(value)?),
                    "a" => spec.a = Some(number(value)?),
                    "b" => spec.b = Some(number(value)?),
                    "group" => {
                        spec.group = value.to_string();
                        group_given = true;
                    }
                    "tuple" => spec.tuple = value.split(',').map(|s| s.trim().to_string()).collect(),
                    "conductor" => {
                        let c = number(value)?;
                        if c == 0 {
                            return Err(Error::Spec("conductor must be positive".into()));
                        }
                        spec.conductor = c as u32;
                    }
                    "budget" => spec.budget = number(value)?,
                    other => return Err(Error::Spec(format!("unknown key `{other}`"))),
                }
            }
        }
        match spec.kind.as_str() {
            "MnF" | "MnE" => {
                let n = spec.n.ok_or_else(|| Error::Spec(format!("kind {} needs `n`", spec.kind)))?;
                if !spec.tuple.is_empty() && spec.tuple.len() != n {
                    return Err(Error::Spec(format!("tuple has {} entries, n = {n}", spec.tuple.len())));
                }
            }
            "Mab" => {
                if spec.a.is_none() || spec.b.is_none() {
                    return Err(Error::Spec("kind Mab needs `a` and `b`".into()));
                }
                if !group_given {
                    spec.group = "Z2".into();
                }
            }
            "" => return Err(Error::Spec("missing `kind`".into())),
            other => return Err(Error::Spec(format!("unknown kind `{other}` (MnF, MnE, Mab)"))),
        }
        Ok(spec)
    }

    /// Reads a spec file; a relative `table:` group path is resolved against
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut spec = Self::parse(&text)?;
        if let Some(rel) = spec.group.strip_prefix("table:") {
            let rel = Path::new(rel.trim());
            if rel.is_relative() {
                if let Some(dir) = path.parent() {
                    spec.group = format!("table:{}", dir.join(rel).display());
                }
            }
        }
        Ok(spec)
    }

    /// A path to an existing file, or inline text.
    pub fn load(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.is_file() {
            Self::from_file(path)
        } else if arg.contains('=') {
            Self::parse(arg)
        } else {
            Err(Error::Io(format!("no such spec file `{arg}`")))
        }
    }

    pub fn build(&self) -> Result<GradedMatrixAlgebra> {
        let group = FiniteGroup::from_spec(&self.group)?;
        let grading = |n: usize| -> Result<ElementaryGrading> {
            if self.tuple.is_empty() {
                ElementaryGrading::new(group.clone(), vec![group.identity(); n])
            } else {
                let names: Vec<&str> = self.tuple.iter().map(String::as_str).collect();
                ElementaryGrading::from_names(group.clone(), &names)
            }
        };
        match self.kind.as_str() {
            "MnF" => Ok(GradedMatrixAlgebra::mnf(grading(self.n.unwrap_or(0))?, self.conductor)),
            "MnE" => Ok(GradedMatrixAlgebra::mne(
                grading(self.n.unwrap_or(0))?,
                self.budget,
                self.conductor,
            )),
            "Mab" => {
                if group.order() != 2 {
                    return Err(Error::Spec("kind Mab is graded by Z2".into()));
                }
                GradedMatrixAlgebra::mab(self.a.unwrap_or(0), self.b.unwrap_or(0), self.budget, self.conductor)
            }
            _ => unreachable!("validated in parse"),
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        match self.kind.as_str() {
            "MnE" => AlgebraKind::MnE,
            "Mab" => AlgebraKind::Mab,
            _ => AlgebraKind::MnF,
        }
    }

    /// Canonical one-line form, echoed in reports.
    pub fn echo(&self) -> String {
        let mut parts = vec![format!("kind = {}", self.kind)];
        if let Some(n) = self.n {
            parts.push(format!("n = {n}"));
        }
        if let (Some(a), Some(b)) = (self.a, self.b) {
            parts.push(format!("a = {a}; b = {b}"));
        }
        parts.push(format!("group = {}", self.group));
        if !self.tuple.is_empty() {
            parts.push(format!("tuple = {}", self.tuple.join(", ")));
        }
        parts.push(format!("conductor = {}", self.conductor));
        parts.push(format!("budget = {}", self.budget));
        parts.join("; ")
    }
}
