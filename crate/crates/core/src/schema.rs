//! JSON input formats: `poisson-structure`, `group` and `sra`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{group_closure, MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::ideal::Ideal;
use crate::linalg::Matrix;
use crate::parse::{parse_poly, parse_scalar};
use crate::poisson::PoissonStructure;
use crate::poly::{Poly, PolyRing};
use crate::scalar::{Field, Scalar};
use crate::sra::{build_sra, SraEngine, TParam};
use crate::weyl::{build_weyl, RootSystemSpec, DEFAULT_WEYL_CAP};

/// `"Q"` or `{"cyclotomic": n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Cyclotomic { cyclotomic: u32 },
}

impl Default for FieldJson {
    fn default() -> Self {
        FieldJson::Name("Q".into())
    }
}

impl FieldJson {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldJson::Name(n) if n == "Q" || n == "QQ" => Ok(Field::Rationals),
            FieldJson::Name(n) => Err(Error::Schema(format!("unknown field `{n}`"))),
            FieldJson::Cyclotomic { cyclotomic } => Ok(Field::cyclotomic(*cyclotomic)),
        }
    }

    pub fn from_field(f: &Field) -> FieldJson {
        match f {
            Field::Rationals => FieldJson::Name("Q".into()),
            Field::Cyclotomic(n) => FieldJson::Cyclotomic { cyclotomic: *n },
        }
    }
}

/// A matrix or scalar entry: a JSON integer or a string in the polynomial grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn to_scalar(&self, field: &Field) -> Result<Scalar> {
        match self {
            Entry::Int(i) => Ok(Scalar::from_int(*i)),
            Entry::Text(s) => parse_scalar(s, field),
        }
    }
}

/// Row-major flat list or list of rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Flat(Vec<Entry>),
    Rows(Vec<Vec<Entry>>),
}

impl MatrixJson {
    pub fn to_matrix(&self, n: usize, field: &Field) -> Result<Matrix> {
        let flat: Vec<&Entry> = match self {
            MatrixJson::Flat(v) => v.iter().collect(),
            MatrixJson::Rows(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Schema(format!("matrix must be {n}x{n}")));
                }
                rows.iter().flatten().collect()
            }
        };
        if flat.len() != n * n {
            return Err(Error::Schema(format!("matrix must have {} entries, got {}", n * n, flat.len())));
        }
        let data = flat.into_iter().map(|e| e.to_scalar(field)).collect::<Result<Vec<_>>>()?;
        Matrix::from_row_major(n, data)
    }

    pub fn from_matrix(m: &Matrix) -> MatrixJson {
        MatrixJson::Rows((0..m.nrows()).map(|i| m.row(i).iter().map(|c| Entry::Text(c.to_string())).collect()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonJson {
    #[serde(default)]
    pub field: FieldJson,
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    /// Full table, or the strict upper triangle (row `i` lists `j > i`).
    pub bracket: Vec<Vec<String>>,
}

impl PoissonJson {
    pub fn to_structure(&self) -> Result<PoissonStructure> {
        let field = self.field.to_field()?;
        let ring = PolyRing::new(&self.variables, field)?;
        let n = ring.nvars();
        let relations = Ideal::parse(&ring, &self.relations.iter().map(String::as_str).collect::<Vec<_>>())?;
        let mut matrix = vec![vec![Poly::zero(&ring); n]; n];
        let full = self.bracket.len() == n && self.bracket.iter().all(|r| r.len() == n);
        if full {
            for (i, row) in self.bracket.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    matrix[i][j] = parse_poly(s, &ring)?;
                }
            }
        } else {
            if self.bracket.len() > n {
                return Err(Error::Schema(format!("bracket has {} rows for {n} variables", self.bracket.len())));
            }
            for (i, row) in self.bracket.iter().enumerate() {
                if row.len() != n - 1 - i {
                    return Err(Error::Schema(format!("bracket row {i} must have {n} entries or {} upper-triangle entries", n - 1 - i)));
                }
                for (k, s) in row.iter().enumerate() {
                    let j = i + 1 + k;
                    let p = parse_poly(s, &ring)?;
                    matrix[j][i] = -&p;
                    matrix[i][j] = p;
                }
            }
        }
        PoissonStructure::new(&ring, relations, matrix)
    }

    pub fn from_structure(p: &PoissonStructure) -> PoissonJson {
        PoissonJson {
            field: FieldJson::from_field(p.ring().field()),
            variables: p.ring().vars().to_vec(),
            relations: p.relations().gens().iter().map(ToString::to_string).collect(),
            bracket: p.matrix().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default)]
    pub field: FieldJson,
    pub dimension: usize,
    pub generators: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic_form: Option<MatrixJson>,
}

impl GroupJson {
    pub fn to_group(&self, cap: usize) -> Result<MatrixGroup> {
        let field = self.field.to_field()?;
        let n = self.dimension;
        let gens = self.generators.iter().map(|m| m.to_matrix(n, &field)).collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return Ok(MatrixGroup::trivial(n));
        }
        let form = self.symplectic_form.as_ref().map(|m| m.to_matrix(n, &field)).transpose()?;
        group_closure(&gens, form, cap)
    }

    pub fn from_group(g: &MatrixGroup) -> GroupJson {
        GroupJson {
            field: FieldJson::from_field(g.field()),
            dimension: g.dim(),
            generators: g.generators().iter().map(|&i| MatrixJson::from_matrix(g.element(i))).collect(),
            symplectic_form: g.explicit_form().map(MatrixJson::from_matrix),
        }
    }
}

/// A group given inline or by a registered name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(GroupJson),
}

impl GroupRef {
    pub fn to_group(&self, cap: usize) -> Result<MatrixGroup> {
        match self {
            GroupRef::Named(n) => named_group(n),
            GroupRef::Inline(g) => g.to_group(cap),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SraJson {
    pub group: GroupRef,
    pub t: String,
    #[serde(default)]
    pub c: BTreeMap<String, Entry>,
}

impl SraJson {
    pub fn to_engine(&self, cap: usize) -> Result<SraEngine> {
        let g = self.group.to_group(cap)?;
        let t = TParam::parse(&self.t)?;
        let c = parse_class_function(&self.c, g.field())?;
        build_sra(&g, t, &c)
    }
}

pub fn parse_class_function(c: &BTreeMap<String, Entry>, field: &Field) -> Result<BTreeMap<usize, Scalar>> {
    c.iter()
        .map(|(k, v)| {
            let idx = k.trim().parse::<usize>().map_err(|_| Error::Schema(format!("class index `{k}` is not an integer")))?;
            Ok((idx, v.to_scalar(field)?))
        })
        .collect()
}

/// Registered desk groups: `trivial` (on `C^2`), `z<n>` (`diag(zeta, zeta^-1)`),
/// and `weyl-<type>` such as `weyl-A2` (acting on `h ⊕ h*`).
pub fn named_group(name: &str) -> Result<MatrixGroup> {
    let lower = name.trim().to_ascii_lowercase();
    if lower == "trivial" || lower == "1" {
        return Ok(MatrixGroup::trivial(2));
    }
    if let Some(n) = lower.strip_prefix('z').and_then(|s| s.parse::<u32>().ok()) {
        if n == 0 {
            return Err(Error::Schema("cyclic group of order 0".into()));
        }
        return Ok(MatrixGroup::cyclic(n));
    }
    if let Some(spec) = name.trim().strip_prefix("weyl-") {
        let w = build_weyl(&RootSystemSpec::parse(spec)?, DEFAULT_WEYL_CAP)?;
        return w.doubled();
    }
    Err(Error::Schema(format!("unknown group `{name}` (use trivial, z<n>, weyl-<type>, or inline JSON)")))
}

/// Default cap for inline group closure.
pub const GROUP_CAP: usize = DEFAULT_CLOSURE_CAP;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_upper_triangle() {
        let j = r#"{"variables": ["x","y","z"], "bracket": [["0","-x"],["y"]]}"#;
        let p: PoissonJson = serde_json::from_str(j).unwrap();
        let s = p.to_structure().unwrap();
        assert_eq!(s.matrix()[2][0].to_string(), "x");
        assert!(s.is_valid().unwrap());
        let back = PoissonJson::from_structure(&s);
        assert_eq!(back.bracket.len(), 3);
    }

    #[test]
    fn group_forms() {
        let j = r#"{"dimension": 2, "generators": [[-1, 0, 0, -1]]}"#;
        let g: GroupJson = serde_json::from_str(j).unwrap();
        assert_eq!(g.to_group(GROUP_CAP).unwrap().order(), 2);
        let j = r#"{"field": {"cyclotomic": 4}, "dimension": 2, "generators": [[["zeta", 0], [0, "-zeta"]]]}"#;
        let g: GroupJson = serde_json::from_str(j).unwrap();
        assert_eq!(g.to_group(GROUP_CAP).unwrap().order(), 4);
        assert!(serde_json::from_str::<GroupJson>(r#"{"dimension": 2, "gens": []}"#).is_err());
    }

    #[test]
    fn sra_payload() {
        let j = r#"{"group": "z2", "t": "0", "c": {"0": 1}}"#;
        let s: SraJson = serde_json::from_str(j).unwrap();
        let e = s.to_engine(GROUP_CAP).unwrap();
        assert_eq!(e.pbw_dimension_check(1).dims, vec![2, 6]);
        assert_eq!(named_group("weyl-A2").unwrap().order(), 6);
        assert!(named_group("q8").is_err());
    }
}
