//! Face complementarity of cone pairs, complementarity relations on
//! polyhedral sets and the associated set-valued maps.

mod map;
mod pair;
mod relation;

pub use map::ComplementarityMap;
pub use pair::{
    fmax_pair, locate_face, normal_cone_of_cone, verify_face_complementarity, ComplementarityReport, ConePair, FaceDimensions,
    FaceMapEntry, PairPoint,
};
pub use relation::{canonical_normal_relation, ComplementarityRelation, NonsingularVerdict};
