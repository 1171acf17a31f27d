//! Monoid sources as accepted on the command line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::families::{family_i, family_j, gowers};
use crate::monoid::Monoid;
use crate::mu::tower;

/// A parsed family description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    G(usize),
    I(usize),
    J(Vec<String>, Vec<String>),
    Tower(usize),
    File(String),
}

fn number(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Input(format!("{what} expects a positive integer, got {s:?}")))
}

fn list(s: &str) -> Vec<String> {
    s.split(',').filter(|x| !x.is_empty()).map(str::to_string).collect()
}

impl FamilySpec {
    /// `g:<n>`, `i:<n>`, `j:<A>:<B>` with comma-separated labels,
    /// `tower:<k>`, or a path to a monoid JSON file.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.splitn(3, ':').collect();
        match parts.as_slice() {
            ["g", n] => Ok(FamilySpec::G(number(n, "g")?)),
            ["i", n] => Ok(FamilySpec::I(number(n, "i")?)),
            ["tower", k] => Ok(FamilySpec::Tower(number(k, "tower")?)),
            ["j", a, b] => Ok(FamilySpec::J(list(a), list(b))),
            _ if Path::new(s).is_file() => Ok(FamilySpec::File(s.to_string())),
            _ => Err(Error::Input(format!(
                "unrecognised monoid {s:?}: expected g:<n>, i:<n>, j:<A>:<B>, tower:<k> or a JSON file"
            ))),
        }
    }

    pub fn build(&self) -> Result<Monoid> {
        match self {
            FamilySpec::G(n) => gowers(*n),
            FamilySpec::I(n) => family_i(*n),
            FamilySpec::J(a, b) => {
                let name = format!("J({{{}}},{{{}}})", a.join(","), b.join(","));
                Ok(family_j(a, b)?.with_name(name))
            }
            FamilySpec::Tower(k) => Ok(tower(*k)?.monoid().as_ref().clone()),
            FamilySpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
                Monoid::from_json_str(&text)
            }
        }
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySpec::G(n) => write!(f, "g:{n}"),
            FamilySpec::I(n) => write!(f, "i:{n}"),
            FamilySpec::J(a, b) => write!(f, "j:{}:{}", a.join(","), b.join(",")),
            FamilySpec::Tower(k) => write!(f, "tower:{k}"),
            FamilySpec::File(p) => write!(f, "{p}"),
        }
    }
}

pub fn load_monoid(s: &str) -> Result<Monoid> {
    FamilySpec::parse(s)?.build()
}
