use crate::error::{PolyregError, Result};
use crate::linalg::Vector;
use crate::polyhedra::{minimal_face, Face, FaceLattice, PolyCone};
use crate::scalar::Scalar;

/// Two cones in `R^n` with a correspondence between their face lattices.
#[derive(Clone, Debug)]
pub struct ConePair<T> {
    pub k: PolyCone<T>,
    pub h: PolyCone<T>,
    pub k_lattice: FaceLattice<T>,
    pub h_lattice: FaceLattice<T>,
    /// `lambda[i]`: index in `h_lattice` of the image of face `i` of `K`.
    pub lambda: Vec<Option<usize>>,
    /// Active set (in the originating polyhedron) of the face each face of
    /// `K` was derived from, when the pair comes from a transform.
    pub provenance: Vec<Option<Vec<usize>>>,
}

/// One entry of a cone-to-cone face correspondence.
#[derive(Clone, Debug)]
pub struct FaceMapEntry<T> {
    pub k_face: PolyCone<T>,
    pub h_face: PolyCone<T>,
    pub origin: Option<Vec<usize>>,
}

/// Per-face line of a complementarity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDimensions {
    pub k_key: Vec<usize>,
    pub h_key: Vec<usize>,
    pub dim_k: usize,
    pub dim_h: usize,
    pub complementary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementarityReport {
    pub faces: Vec<FaceDimensions>,
    /// Pairs `(i, j)` of faces of `K` where `F_i ⊆ F_j` and `Λ(F_j) ⊆ Λ(F_i)`
    /// do not hold together.
    pub order_violations: Vec<(usize, usize)>,
}

impl ComplementarityReport {
    pub fn passes(&self) -> bool {
        self.order_violations.is_empty() && self.faces.iter().all(|f| f.complementary)
    }
}

/// Which cone a point of [`fmax_pair`] belongs to.
#[derive(Clone, Debug)]
pub enum PairPoint<T> {
    InK(Vector<T>),
    InH(Vector<T>),
}

impl<T: Scalar> ConePair<T> {
    /// Matches every listed face cone against the lattices of `k` and `h`.
    pub fn from_cone_map(k: PolyCone<T>, h: PolyCone<T>, entries: Vec<FaceMapEntry<T>>) -> Result<Self> {
        let k_lattice = k.lattice()?;
        let h_lattice = h.lattice()?;
        let mut lambda = vec![None; k_lattice.len()];
        let mut provenance = vec![None; k_lattice.len()];
        for e in entries {
            let i = locate_face(&k, &k_lattice, &e.k_face)?;
            let j = locate_face(&h, &h_lattice, &e.h_face)?;
            if lambda[i].is_some_and(|old| old != j) {
                return Err(PolyregError::MalformedRelation(format!(
                    "face {:?} of K is assigned twice",
                    k_lattice.faces[i].active_set
                )));
            }
            lambda[i] = Some(j);
            provenance[i] = e.origin;
        }
        Ok(ConePair { k, h, k_lattice, h_lattice, lambda, provenance })
    }

    /// Correspondence given directly by canonical face keys.
    pub fn from_key_map(k: PolyCone<T>, h: PolyCone<T>, keys: &[(Vec<usize>, Vec<usize>)]) -> Result<Self> {
        let k_lattice = k.lattice()?;
        let h_lattice = h.lattice()?;
        let mut lambda = vec![None; k_lattice.len()];
        for (kk, hk) in keys {
            let missing = |key: &Vec<usize>| PolyregError::MalformedRelation(format!("{key:?} is not a face key"));
            let i = k_lattice.index_of(kk).ok_or_else(|| missing(kk))?;
            let j = h_lattice.index_of(hk).ok_or_else(|| missing(hk))?;
            lambda[i] = Some(j);
        }
        let provenance = vec![None; k_lattice.len()];
        Ok(ConePair { k, h, k_lattice, h_lattice, lambda, provenance })
    }

    /// `(K, K°)` with `F ↦ N(K, F)`.
    pub fn polar_pair(k: PolyCone<T>) -> Result<Self> {
        let k = k.converted();
        let h = k.polar().converted();
        let lattice = k.lattice()?;
        let entries = lattice
            .faces
            .iter()
            .map(|f| FaceMapEntry {
                k_face: k.face_cone(&f.active_set),
                h_face: normal_cone_of_cone(&k, f),
                origin: Some(f.active_set.clone()),
            })
            .collect();
        Self::from_cone_map(k, h, entries)
    }

    pub fn ambient_dim(&self) -> usize {
        self.k.ambient_dim()
    }

    pub fn k_face_cone(&self, i: usize) -> PolyCone<T> {
        self.k.face_cone(&self.k_lattice.faces[i].active_set)
    }

    pub fn h_face_cone(&self, j: usize) -> PolyCone<T> {
        self.h.face_cone(&self.h_lattice.faces[j].active_set)
    }

    /// The correspondence as a total bijection, or the reason it is not one.
    pub fn bijection(&self) -> Result<Vec<usize>> {
        if self.k_lattice.len() != self.h_lattice.len() {
            return Err(PolyregError::MalformedRelation(format!(
                "K has {} faces and H has {}",
                self.k_lattice.len(),
                self.h_lattice.len()
            )));
        }
        let mut hit = vec![false; self.h_lattice.len()];
        let mut out = Vec::with_capacity(self.lambda.len());
        for (i, l) in self.lambda.iter().enumerate() {
            let j = l.ok_or_else(|| {
                PolyregError::MalformedRelation(format!("face {:?} of K is unmapped", self.k_lattice.faces[i].active_set))
            })?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(PolyregError::MalformedRelation(format!(
                    "face {:?} of H is hit twice",
                    self.h_lattice.faces[j].active_set
                )));
            }
            out.push(j);
        }
        Ok(out)
    }

    /// Inverse of the correspondence: face of `H` to face of `K`.
    pub fn inverse(&self) -> Result<Vec<usize>> {
        let map = self.bijection()?;
        let mut inv = vec![0; map.len()];
        for (i, &j) in map.iter().enumerate() {
            inv[j] = i;
        }
        Ok(inv)
    }
}

/// Index of the face of `cone` equal to `face`, via the minimal face of a
/// relative-interior point and a set-equality check.
pub fn locate_face<T: Scalar>(cone: &PolyCone<T>, lattice: &FaceLattice<T>, face: &PolyCone<T>) -> Result<usize> {
    let poly = cone.as_hpolyhedron();
    let x = face.ri_point();
    let found = minimal_face(&poly, lattice, &x)
        .map_err(|_| PolyregError::MalformedRelation("assigned cone is not contained in its cone".into()))?;
    let idx = lattice.index_of(&found.active_set).expect("face comes from this lattice");
    if !cone.face_cone(&found.active_set).set_eq(face) {
        return Err(PolyregError::MalformedRelation("assigned cone is not a face".into()));
    }
    Ok(idx)
}

/// `N(K, F)` for a face of a cone `K` in inequality form.
pub fn normal_cone_of_cone<T: Scalar>(k: &PolyCone<T>, face: &Face<T>) -> PolyCone<T> {
    crate::polyhedra::normal_cone(&k.as_hpolyhedron(), face)
}

/// Checks the dimension condition and order reversal of a cone pair.
pub fn verify_face_complementarity<T: Scalar>(pair: &ConePair<T>) -> Result<ComplementarityReport> {
    let map = pair.bijection()?;
    let n = pair.ambient_dim();
    let faces = map
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let fk = &pair.k_lattice.faces[i];
            let fh = &pair.h_lattice.faces[j];
            FaceDimensions {
                k_key: fk.active_set.clone(),
                h_key: fh.active_set.clone(),
                dim_k: fk.dim,
                dim_h: fh.dim,
                complementary: fk.dim + fh.dim == n,
            }
        })
        .collect();
    let m = map.len();
    let mut order_violations = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if pair.k_lattice.contains(i, j) != pair.h_lattice.contains(map[j], map[i]) {
                order_violations.push((i, j));
            }
        }
    }
    Ok(ComplementarityReport { faces, order_violations })
}

/// `F_max^H(x) = Λ(F_min^K(x))` for `x ∈ K`, or `F_max^K(y) = Λ⁻¹(F_min^H(y))`
/// for `y ∈ H`.
pub fn fmax_pair<'a, T: Scalar>(pair: &'a ConePair<T>, point: &PairPoint<T>) -> Result<&'a Face<T>> {
    match point {
        PairPoint::InK(x) => {
            let f = minimal_face(&pair.k.as_hpolyhedron(), &pair.k_lattice, x)?;
            let i = pair.k_lattice.index_of(&f.active_set).expect("face of this lattice");
            let j = pair.lambda[i]
                .ok_or_else(|| PolyregError::MalformedRelation(format!("face {:?} is unmapped", f.active_set)))?;
            Ok(&pair.h_lattice.faces[j])
        }
        PairPoint::InH(y) => {
            let g = minimal_face(&pair.h.as_hpolyhedron(), &pair.h_lattice, y)?;
            let j = pair.h_lattice.index_of(&g.active_set).expect("face of this lattice");
            let i = pair.inverse()?[j];
            Ok(&pair.k_lattice.faces[i])
        }
    }
}
