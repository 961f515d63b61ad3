//! JSON file formats. Rationals are written as `"p/q"` strings and read from
//! strings or plain integers.

use serde::{Deserialize, Serialize};

use crate::avi_solver::SolutionPiece;
use crate::complementarity::ComplementarityRelation;
use crate::error::{PolyregError, Result};
use crate::linalg::{Matrix, Vector};
use crate::polyhedra::{FaceLattice, Generators, HPolyhedron, PolyCone};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Int(i64),
    Text(String),
}

impl RatText {
    pub fn of<T: Scalar>(v: &T) -> Self {
        RatText::Text(v.to_string())
    }

    pub fn parse<T: Scalar>(&self) -> Result<T> {
        match self {
            RatText::Int(i) => Ok(T::from_ratio(*i, 1)),
            RatText::Text(s) => T::parse_scalar(s).ok_or_else(|| PolyregError::Parse(format!("not a rational: {s:?}"))),
        }
    }
}

fn parse_vector<T: Scalar>(entries: &[RatText], n: usize) -> Result<Vector<T>> {
    if entries.len() != n {
        return Err(PolyregError::DimensionMismatch { expected: n, found: entries.len() });
    }
    entries.iter().map(RatText::parse).collect()
}

fn write_vector<T: Scalar>(v: &Vector<T>) -> Vec<RatText> {
    v.iter().map(RatText::of).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityFile {
    pub y: Vec<RatText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RatText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsFile {
    pub rays: Vec<Vec<RatText>>,
    #[serde(default)]
    pub lineality: Vec<Vec<RatText>>,
}

/// `{"n", "inequalities": [{"y", "alpha"}], "generators"?}`. A missing alpha
/// means 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronFile {
    pub n: usize,
    #[serde(default)]
    pub inequalities: Vec<InequalityFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorsFile>,
}

impl PolyhedronFile {
    pub fn from_hpolyhedron<T: Scalar>(c: &HPolyhedron<T>) -> Self {
        PolyhedronFile {
            n: c.dim(),
            inequalities: c
                .rows()
                .iter()
                .zip(c.rhs_values())
                .map(|(y, a)| InequalityFile { y: write_vector(y), alpha: Some(RatText::of(a)) })
                .collect(),
            generators: None,
        }
    }

    pub fn from_cone<T: Scalar>(k: &PolyCone<T>) -> Self {
        let g = k.generators();
        PolyhedronFile {
            n: k.ambient_dim(),
            inequalities: k.h_rows().iter().map(|y| InequalityFile { y: write_vector(y), alpha: None }).collect(),
            generators: Some(GeneratorsFile {
                rays: g.rays.iter().map(write_vector).collect(),
                lineality: g.lineality.iter().map(write_vector).collect(),
            }),
        }
    }

    pub fn to_hpolyhedron<T: Scalar>(&self) -> Result<HPolyhedron<T>> {
        let rows = self
            .inequalities
            .iter()
            .map(|ineq| {
                let y = parse_vector(&ineq.y, self.n)?;
                let alpha = match &ineq.alpha {
                    Some(a) => a.parse()?,
                    None => T::zero(),
                };
                Ok((y, alpha))
            })
            .collect::<Result<Vec<_>>>()?;
        HPolyhedron::new(self.n, rows)
    }

    /// Reads a cone. Generators, when present, are trusted to describe the
    /// same cone as the inequalities; with no inequalities they alone define
    /// it.
    pub fn to_cone<T: Scalar>(&self) -> Result<PolyCone<T>> {
        let mut rows = Vec::with_capacity(self.inequalities.len());
        for ineq in &self.inequalities {
            if let Some(a) = &ineq.alpha {
                if !a.parse::<T>()?.is_negligible() {
                    return Err(PolyregError::Parse("a cone inequality has nonzero alpha".into()));
                }
            }
            rows.push(parse_vector(&ineq.y, self.n)?);
        }
        let Some(g) = &self.generators else {
            return Ok(PolyCone::from_h(self.n, rows));
        };
        let gens = Generators {
            rays: g.rays.iter().map(|r| parse_vector(r, self.n)).collect::<Result<_>>()?,
            lineality: g.lineality.iter().map(|r| parse_vector(r, self.n)).collect::<Result<_>>()?,
        };
        if rows.is_empty() {
            Ok(PolyCone::from_v(self.n, gens.rays, gens.lineality))
        } else {
            Ok(PolyCone::from_both(self.n, rows, gens))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFaceFile {
    pub active_set: Vec<usize>,
    pub lambda: PolyhedronFile,
}

/// `{"faces": [{"active_set", "lambda"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub faces: Vec<RelationFaceFile>,
}

impl RelationFile {
    pub fn from_relation<T: Scalar>(rel: &ComplementarityRelation<T>) -> Self {
        RelationFile {
            faces: rel
                .lattice
                .faces
                .iter()
                .zip(&rel.assignment)
                .map(|(f, lam)| RelationFaceFile { active_set: f.active_set.clone(), lambda: PolyhedronFile::from_cone(lam) })
                .collect(),
        }
    }

    pub fn to_relation<T: Scalar>(&self, c: &HPolyhedron<T>, lattice: &FaceLattice<T>) -> Result<ComplementarityRelation<T>> {
        let entries = self
            .faces
            .iter()
            .map(|f| {
                if f.lambda.n != c.dim() {
                    return Err(PolyregError::DimensionMismatch { expected: c.dim(), found: f.lambda.n });
                }
                let mut key = f.active_set.clone();
                key.sort_unstable();
                Ok((key, f.lambda.to_cone()?))
            })
            .collect::<Result<Vec<_>>>()?;
        ComplementarityRelation::from_keyed(c.clone(), lattice.clone(), entries)
    }
}

/// `{"n", "A", "C", "base_point"?, "relation"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<RatText>>,
    #[serde(rename = "C")]
    pub c: PolyhedronFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<RatText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationFile>,
}

/// A parsed instance file.
#[derive(Clone, Debug)]
pub struct Instance<T> {
    pub a: Matrix<T>,
    pub c: HPolyhedron<T>,
    pub base_point: Option<Vector<T>>,
    pub relation: Option<RelationFile>,
}

impl InstanceFile {
    pub fn new<T: Scalar>(a: &Matrix<T>, c: &HPolyhedron<T>) -> Self {
        InstanceFile {
            n: c.dim(),
            a: a.row_vectors().iter().map(write_vector).collect(),
            c: PolyhedronFile::from_hpolyhedron(c),
            base_point: None,
            relation: None,
        }
    }

    pub fn parse<T: Scalar>(&self) -> Result<Instance<T>> {
        let n = self.n;
        if self.c.n != n {
            return Err(PolyregError::DimensionMismatch { expected: n, found: self.c.n });
        }
        if self.a.len() != n {
            return Err(PolyregError::NotSquare { rows: self.a.len(), cols: n });
        }
        let rows = self
            .a
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(PolyregError::NotSquare { rows: n, cols: r.len() });
                }
                parse_vector(r, n)
            })
            .collect::<Result<Vec<_>>>()?;
        let base_point = self.base_point.as_ref().map(|b| parse_vector(b, n)).transpose()?;
        Ok(Instance {
            a: Matrix::from_rows(&rows, n),
            c: self.c.to_hpolyhedron()?,
            base_point,
            relation: self.relation.clone(),
        })
    }
}

pub fn read_instance<T: Scalar>(text: &str) -> Result<Instance<T>> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| PolyregError::Parse(e.to_string()))?;
    file.parse()
}

/// Parses `"p/q,p/q,..."`.
pub fn parse_point<T: Scalar>(text: &str) -> Result<Vector<T>> {
    if text.trim().is_empty() {
        return Ok(Vector::new(Vec::new()));
    }
    text.split(',')
        .map(|s| T::parse_scalar(s).ok_or_else(|| PolyregError::Parse(format!("not a rational: {s:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionPieceFile {
    pub face_active_set: Vec<usize>,
    pub witness: Vec<RatText>,
    pub piece: PolyhedronFile,
}

impl SolutionPieceFile {
    pub fn new<T: Scalar>(p: &SolutionPiece<T>) -> Self {
        SolutionPieceFile {
            face_active_set: p.face_active_set.clone(),
            witness: write_vector(&p.witness),
            piece: PolyhedronFile::from_hpolyhedron(&p.piece),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceFile {
    pub active_set: Vec<usize>,
    pub dim: usize,
    pub ri_point: Vec<RatText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeFile {
    pub n: usize,
    pub faces: Vec<FaceFile>,
    pub covering_pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl LatticeFile {
    pub fn new<T: Scalar>(lattice: &FaceLattice<T>) -> Self {
        let key = |i: usize| lattice.faces[i].active_set.clone();
        LatticeFile {
            n: lattice.n,
            faces: lattice
                .faces
                .iter()
                .map(|f| FaceFile { active_set: f.active_set.clone(), dim: f.dim, ri_point: write_vector(&f.ri_point) })
                .collect(),
            covering_pairs: lattice.covering_pairs.iter().map(|&(i, j)| (key(i), key(j))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::enumerate_faces;
    use crate::Rational;

    #[test]
    fn instance_roundtrip() {
        let text = r#"{"n":2,"A":[[1,"1/2"],[0,"3"]],"C":{"n":2,"inequalities":[{"y":[-1,0],"alpha":0},{"y":["1","1"],"alpha":"5/2"}]}}"#;
        let inst: Instance<Rational> = read_instance(text).unwrap();
        assert_eq!(*inst.a.get(0, 1), Rational::from_ratio(1, 2));
        assert_eq!(*inst.c.rhs(1), Rational::from_ratio(5, 2));
        let again = serde_json::to_string(&InstanceFile::new(&inst.a, &inst.c)).unwrap();
        let back: Instance<Rational> = read_instance(&again).unwrap();
        assert_eq!(back.a, inst.a);
        assert!(back.c.set_eq(&inst.c));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(read_instance::<Rational>("{"), Err(PolyregError::Parse(_))));
        let short = r#"{"n":2,"A":[[1,0]],"C":{"n":2,"inequalities":[]}}"#;
        assert!(read_instance::<Rational>(short).is_err());
        let typo = r#"{"n":1,"A":[[1]],"C":{"n":1,"inequalitys":[]}}"#;
        assert!(read_instance::<Rational>(typo).is_err());
        assert!(parse_point::<Rational>("1/2,x").is_err());
    }

    #[test]
    fn relation_roundtrip() {
        let c = HPolyhedron::<Rational>::orthant(2);
        let l = enumerate_faces(&c).unwrap();
        let rel = crate::complementarity::canonical_normal_relation(&c, &l);
        let text = serde_json::to_string(&RelationFile::from_relation(&rel)).unwrap();
        let file: RelationFile = serde_json::from_str(&text).unwrap();
        let back = file.to_relation(&c, &l).unwrap();
        for (x, y) in back.assignment.iter().zip(&rel.assignment) {
            assert!(x.set_eq(y));
        }
    }
}
