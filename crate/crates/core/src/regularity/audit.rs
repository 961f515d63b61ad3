use serde::Serialize;

use super::coherent::{check_coherent_orientation, CoherentOrientation};
use super::critical::{check_critical_face, default_base_point, localize, CriticalFace};
use super::modulus::{surjection_modulus, ModulusConfig, ModulusReport};
use super::separation::{check_face_separation, check_instance_cone_separation, FaceSeparation};
use crate::avi_solver::{stress_samples, AviInstance, StressConfig};
use crate::complementarity::{canonical_normal_relation, ComplementarityMap, ComplementarityRelation};
use crate::error::Result;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// `A T(C, F̄) ∩ N(C, F̄) = {0}` at every face.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct KhSeparation<T> {
    pub holds: bool,
    /// Face `F̄` and a nonzero common point.
    pub witness: Option<(Vec<usize>, Vector<T>)>,
}

/// Every certificate for an instance. Critical face and modulus are computed
/// on `K = T(C, x̄)` with `T = A`, `S = I` and `Λ = N(K, ·)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct RegularityReport<T> {
    pub base_point: Vector<T>,
    pub coherent_orientation: CoherentOrientation<T>,
    pub face_separation: FaceSeparation,
    pub critical_face: CriticalFace<T>,
    pub modulus: ModulusReport<T>,
    pub separation_kh: KhSeparation<T>,
    pub notes: Vec<String>,
}

impl<T: Scalar> RegularityReport<T> {
    /// The certified verdict: coherent orientation of `A` on `C`.
    pub fn regular(&self) -> bool {
        self.coherent_orientation.coherent
    }
}

/// The cone instance `(A, T(C, x̄))`.
pub fn local_instance<T: Scalar>(inst: &AviInstance<T>, base_point: &Vector<T>) -> Result<AviInstance<T>> {
    let k = localize(&inst.c, base_point)?;
    AviInstance::new(inst.a.clone(), k.as_hpolyhedron())
}

/// `Φ(x) = A x + N(C, x)` as a complementarity map.
pub fn normal_map<T: Scalar>(inst: &AviInstance<T>) -> ComplementarityMap<T> {
    let n = inst.dim();
    ComplementarityMap {
        relation: inst.relation.clone(),
        t: inst.a.clone(),
        s: Matrix::identity(n),
    }
}

/// Face separation uses `relation` in place of `N(C, ·)` when given.
pub fn regularity_report<T: Scalar>(
    inst: &AviInstance<T>,
    base_point: Option<&Vector<T>>,
    relation: Option<&ComplementarityRelation<T>>,
    modulus_cfg: &ModulusConfig,
) -> Result<RegularityReport<T>> {
    let base_point = base_point.cloned().unwrap_or_else(|| default_base_point(&inst.lattice));
    let local = local_instance(inst, &base_point)?;
    Ok(assemble_report(inst, &local, base_point, relation, modulus_cfg))
}

fn assemble_report<T: Scalar>(
    inst: &AviInstance<T>,
    local: &AviInstance<T>,
    base_point: Vector<T>,
    relation: Option<&ComplementarityRelation<T>>,
    modulus_cfg: &ModulusConfig,
) -> RegularityReport<T> {
    let coherent_orientation = check_coherent_orientation(&inst.a, &inst.c, &inst.lattice, false);
    let mut map = normal_map(inst);
    if let Some(rel) = relation {
        map.relation = rel.clone();
    }
    let face_separation = check_face_separation(&map);
    let k = crate::polyhedra::PolyCone::from_h(inst.dim(), local.c.rows().to_vec());
    let critical_face = check_critical_face(&inst.a, &k, &local.lattice);
    let modulus = surjection_modulus(&normal_map(local), modulus_cfg);
    let kh = check_instance_cone_separation(&inst.a, &inst.c, &inst.lattice);
    let mut notes = Vec::new();
    if coherent_orientation.determinants.iter().any(|(_, d)| d.sign().is_none()) {
        notes.push("some face has L(F) + L(N(C,F)) != R^n".to_string());
    }
    if relation.is_some() {
        notes.push("face separation uses the supplied relation".to_string());
    }
    if !inst.c.is_cone() {
        notes.push(format!("critical face and modulus evaluated on the tangent cone at {base_point}"));
    }
    RegularityReport {
        base_point,
        coherent_orientation,
        face_separation,
        critical_face,
        modulus,
        separation_kh: KhSeparation { holds: kh.is_none(), witness: kh },
        notes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub stress: StressConfig,
    pub modulus: ModulusConfig,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { stress: StressConfig::default(), modulus: ModulusConfig::default() }
    }
}

/// Solver behavior on a stress set.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct StressObservation<T> {
    pub samples: usize,
    pub single_valued: bool,
    pub all_solvable: bool,
    /// First sample with no solution or several, with its count label.
    pub counterexample: Option<(Vector<T>, String)>,
    /// First sample with no solution.
    pub unsolvable: Option<Vector<T>>,
}

pub fn observe<T: Scalar>(inst: &AviInstance<T>, cfg: &StressConfig) -> Result<StressObservation<T>> {
    let samples = stress_samples(inst, cfg);
    let mut obs = StressObservation {
        samples: samples.len(),
        single_valued: true,
        all_solvable: true,
        counterexample: None,
        unsolvable: None,
    };
    for z in samples {
        let count = inst.count(&z)?;
        if count.is_unique() {
            continue;
        }
        obs.single_valued = false;
        if obs.counterexample.is_none() {
            obs.counterexample = Some((z.clone(), count.label().to_string()));
        }
        if count.label() == "0" && obs.unsolvable.is_none() {
            obs.all_solvable = false;
            obs.unsolvable = Some(z);
        }
    }
    Ok(obs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRule {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct AuditReport<T> {
    pub regular: bool,
    pub report: RegularityReport<T>,
    pub coherent_all_pairs: bool,
    pub local_coherent: bool,
    pub stress: StressObservation<T>,
    pub local_stress: StressObservation<T>,
    pub rules: Vec<AuditRule>,
    pub inconsistencies: Vec<&'static str>,
    /// Irregular, yet no stress sample had 0 or several solutions.
    pub unwitnessed: bool,
}

impl<T> AuditReport<T> {
    pub fn consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

/// All certificates plus solver observations, cross-checked against each
/// other.
pub fn equivalence_audit<T: Scalar>(
    inst: &AviInstance<T>,
    base_point: Option<&Vector<T>>,
    relation: Option<&ComplementarityRelation<T>>,
    cfg: &AuditConfig,
) -> Result<AuditReport<T>> {
    let base_point = base_point.cloned().unwrap_or_else(|| default_base_point(&inst.lattice));
    let local = local_instance(inst, &base_point)?;
    let report = assemble_report(inst, &local, base_point, relation, &cfg.modulus);
    let coherent_all_pairs = check_coherent_orientation(&inst.a, &inst.c, &inst.lattice, true).coherent;
    let local_coherent = check_coherent_orientation(&local.a, &local.c, &local.lattice, false).coherent;
    let stress = observe(inst, &cfg.stress)?;
    let local_stress = observe(&local, &cfg.stress)?;

    let coherent = report.coherent_orientation.coherent;
    let separation = report.face_separation.holds;
    let critical = report.critical_face.holds;
    let local_map = ComplementarityMap::plain(canonical_normal_relation(&local.c, &local.lattice));
    let local_nonsingular = ComplementarityMap { t: local.a.clone(), ..local_map }.nonsingular_violation().is_none();
    let yes_no = |b: bool| if b { "true" } else { "false" };
    let rules = vec![
        AuditRule {
            name: "coherent_equals_separation",
            holds: coherent == separation,
            detail: format!("coherent={} separation={}", yes_no(coherent), yes_no(separation)),
        },
        AuditRule {
            name: "covering_pairs_equal_all_pairs",
            holds: coherent == coherent_all_pairs,
            detail: format!("covering={} all_pairs={}", yes_no(coherent), yes_no(coherent_all_pairs)),
        },
        AuditRule {
            name: "coherent_implies_nonsingular",
            holds: implies(coherent, report.face_separation.nonsingular),
            detail: format!("nonsingular={}", yes_no(report.face_separation.nonsingular)),
        },
        AuditRule {
            name: "coherent_implies_single_valued",
            holds: implies(coherent, stress.single_valued),
            detail: format!("{} samples, single_valued={}", stress.samples, yes_no(stress.single_valued)),
        },
        AuditRule {
            name: "coherent_implies_trivial_kh",
            holds: implies(coherent, report.separation_kh.holds),
            detail: format!("kh_trivial={}", yes_no(report.separation_kh.holds)),
        },
        AuditRule {
            name: "separation_implies_solvable",
            holds: implies(separation, stress.all_solvable),
            detail: format!("all_solvable={}", yes_no(stress.all_solvable)),
        },
        AuditRule {
            name: "critical_equals_modulus_positivity",
            holds: critical == report.modulus.positive,
            detail: format!("critical={} positive={}", yes_no(critical), yes_no(report.modulus.positive)),
        },
        AuditRule {
            name: "coherent_implies_local_critical",
            holds: implies(coherent, critical),
            detail: format!("coherent={} critical={}", yes_no(coherent), yes_no(critical)),
        },
        AuditRule {
            name: "critical_equals_local_coherent",
            holds: critical == local_coherent,
            detail: format!("critical={} local_coherent={}", yes_no(critical), yes_no(local_coherent)),
        },
        AuditRule {
            name: "critical_implies_local_single_valued",
            holds: implies(critical, local_stress.single_valued && local_nonsingular),
            detail: format!(
                "{} local samples, single_valued={} nonsingular={}",
                local_stress.samples,
                yes_no(local_stress.single_valued),
                yes_no(local_nonsingular)
            ),
        },
    ];
    let inconsistencies = rules.iter().filter(|r| !r.holds).map(|r| r.name).collect();
    Ok(AuditReport {
        regular: coherent,
        unwitnessed: !coherent && stress.single_valued,
        report,
        coherent_all_pairs,
        local_coherent,
        stress,
        local_stress,
        rules,
        inconsistencies,
    })
}
