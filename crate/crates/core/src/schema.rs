//! JSON instance files: an algebra, its `J`, and optionally a subalgebra `h`.
//!
//! ```json
//! {"name": "kt", "dim": 4,
//!  "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}],
//!  "J": ["0","0","-1","0", "0","0","0","-1", "1","0","0","0", "0","1","0","0"]}
//! ```
//! Indices are 1-based; `J` is row-major with column `c` equal to `J e_c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{format_rational, parse_rational, Gq, Matrix, Rational, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(rename = "J")]
    pub j: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<String>>>,
    #[serde(rename = "J_mod_h", default, skip_serializing_if = "std::ops::Not::not")]
    pub j_mod_h: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Value>,
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub algebra: LieAlgebra,
    pub j: Matrix,
    /// Present for homogeneous pairs.
    pub h: Option<Subspace>,
    pub seed: Option<u64>,
    pub expected: Option<serde_json::Value>,
}

fn parse_index(s: &str, dim: usize) -> Result<usize> {
    let k: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::Schema(format!("bracket output index `{s}` is not an integer")))?;
    if k == 0 || k > dim {
        return Err(Error::Schema(format!("index {k} out of range 1..={dim}")));
    }
    Ok(k - 1)
}

fn parse_real(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| Error::Schema(e.to_string()))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn parse(&self) -> Result<Instance> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Schema("dim must be positive".into()));
        }
        let mut entries = Vec::new();
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(Error::Schema(format!(
                    "bracket indices ({}, {}) out of range 1..={n}",
                    b.i, b.j
                )));
            }
            let mut coeffs = BTreeMap::new();
            for (k, v) in &b.coeffs {
                coeffs.insert(parse_index(k, n)?, parse_real(v)?);
            }
            entries.push((b.i - 1, b.j - 1, coeffs.into_iter().collect::<Vec<_>>()));
        }
        let algebra = LieAlgebra::new(n, entries)?;
        if self.j.len() != n * n {
            return Err(Error::Schema(format!(
                "J has {} entries, expected {}",
                self.j.len(),
                n * n
            )));
        }
        let mut j = Matrix::zeros(n, n);
        for (idx, s) in self.j.iter().enumerate() {
            j.set(idx / n, idx % n, Gq::real(parse_real(s)?));
        }
        let h = match &self.h {
            Some(rows) => {
                let vs = rows
                    .iter()
                    .map(|r| {
                        if r.len() != n {
                            return Err(Error::Schema(format!(
                                "h vector has {} entries, expected {n}",
                                r.len()
                            )));
                        }
                        r.iter().map(|s| Ok(Gq::real(parse_real(s)?))).collect::<Result<Vector>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Subspace::span(n, &vs)?)
            }
            None if self.j_mod_h => Some(Subspace::zero(n)),
            None => None,
        };
        Ok(Instance {
            name: self.name.clone().unwrap_or_else(|| "input".into()),
            algebra,
            j,
            h,
            seed: self.seed,
            expected: self.expected.clone(),
        })
    }
}

fn real_string(x: &Gq) -> String {
    format_rational(&x.re)
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        let n = self.algebra.dim();
        let brackets = self
            .algebra
            .entries()
            .map(|(&(i, j), c)| BracketEntry {
                i: i + 1,
                j: j + 1,
                coeffs: c
                    .iter()
                    .map(|(k, v)| ((k + 1).to_string(), format_rational(v)))
                    .collect(),
            })
            .collect();
        let j = (0..n * n).map(|idx| real_string(self.j.get(idx / n, idx % n))).collect();
        InstanceFile {
            name: Some(self.name.clone()),
            dim: n,
            brackets,
            j,
            h: self
                .h
                .as_ref()
                .map(|h| h.basis().iter().map(|b| b.iter().map(real_string).collect()).collect()),
            j_mod_h: self.h.is_some(),
            seed: self.seed,
            expected: self.expected.clone(),
        }
    }
}

pub fn load_instance_file(path: &std::path::Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&text)?.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    const KT: &str = r#"{"name": "kt", "dim": 4,
        "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}],
        "J": ["0","0","-1","0", "0","0","0","-1", "1","0","0","0", "0","1","0","0"]}"#;

    #[test]
    fn parses_kt() {
        let inst = InstanceFile::from_json(KT).unwrap().parse().unwrap();
        assert_eq!(inst.algebra.dim(), 4);
        assert_eq!(inst.algebra.basis_bracket(0, 1), crate::linalg::int_vec(&[0, 0, 1, 0]));
        assert_eq!(inst.j.get(2, 0), &Gq::from_int(1));
        assert!(inst.h.is_none());
    }

    #[test]
    fn roundtrip() {
        let f = InstanceFile::from_json(KT).unwrap();
        let g = f.parse().unwrap().to_file();
        assert_eq!(g.parse().unwrap().to_file(), g);
        assert_eq!(g.dim, f.dim);
        assert_eq!(g.j, f.j);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(InstanceFile::from_json("{"), Err(Error::Schema(_))));
        let bad = KT.replace("\"3\": \"1\"", "\"9\": \"1\"");
        assert!(matches!(
            InstanceFile::from_json(&bad).unwrap().parse(),
            Err(Error::Schema(_))
        ));
        let bad = KT.replace("\"3\": \"1\"", "\"3\": \"1/0\"");
        assert!(matches!(
            InstanceFile::from_json(&bad).unwrap().parse(),
            Err(Error::Schema(_))
        ));
    }
}
