//! Regularity certificates for an instance `(A, C)` and for general
//! complementarity maps.

pub mod audit;
pub mod coherent;
pub mod critical;
pub mod modulus;
pub mod separation;

pub use audit::{
    equivalence_audit, local_instance, normal_map, observe, regularity_report, AuditConfig, AuditReport, AuditRule,
    KhSeparation, RegularityReport, StressObservation,
};
pub use coherent::{check_coherent_orientation, det_t_face, face_determinant, CoherentOrientation, FaceDeterminant};
pub use critical::{check_critical_face, default_base_point, localize, polar_difference, CriticalFace};
pub use modulus::{face_difference, nnls, project_cone, surjection_modulus, ModulusConfig, ModulusReport};
pub use separation::{
    check_cone_separation, check_face_separation, check_instance_cone_separation, FaceSeparation, SeparationFailure,
};

use serde::Serializer;

use crate::scalar::Scalar;

pub(crate) fn ser_scalar<T: Scalar, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}
