use proptest::prelude::*;

use polyreg::avi_solver::{count_solutions, AviInstance, SolutionCount};
use polyreg::generate::{generate, Family, GeneratorConfig};
use polyreg::linalg::span_basis;
use polyreg::polyhedra::{enumerate_faces, project};
use polyreg::regularity::face_determinant;
use polyreg::{Matrix, RatVector, Rational, Scalar, Vector};

fn rat_vec(n: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec((-12i64..=12, 1i64..=4), n).prop_map(|v| v.into_iter().map(|(p, q)| Rational::from_ratio(p, q)).collect())
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(vec![Family::RandomPolyhedron, Family::Box, Family::RandomCone, Family::Orthant])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_solve_is_projection(fam in family(), n in 1usize..=3, seed in 0u64..500, z in rat_vec(3)) {
        let (_, c) = generate::<Rational>(&GeneratorConfig::new(fam, n, n + 2, seed));
        let z: RatVector = z.iter().take(n).cloned().collect();
        let inst = AviInstance::new(Matrix::identity(n), c.clone()).unwrap();
        let pieces = inst.solve_all(&z).unwrap();
        prop_assert_eq!(count_solutions(&pieces), SolutionCount::Unique(project(&c, &z).unwrap()));
    }

    #[test]
    fn normal_map_correspondence(seed in 0u64..500, n in 1usize..=3, z in rat_vec(3)) {
        let (a, c) = generate::<Rational>(&GeneratorConfig::new(Family::RandomPolyhedron, n, n + 2, seed));
        let z: RatVector = z.iter().take(n).cloned().collect();
        let inst = AviInstance::new(a.clone(), c).unwrap();
        for p in inst.solve_all(&z).unwrap() {
            let x = &p.witness;
            let y = z.sub(&a.mul_vec(x)).add(x);
            prop_assert_eq!(inst.normal_map_eval(&y).unwrap(), z.clone());
        }
    }

    #[test]
    fn determinant_is_basis_independent(seed in 0u64..500, n in 1usize..=3, mix in rat_vec(9)) {
        let (a, c) = generate::<Rational>(&GeneratorConfig::new(Family::RandomPolyhedron, n, n + 2, seed));
        let lat = enumerate_faces(&c).unwrap();
        for face in &lat.faces {
            let rows: Vec<RatVector> = face.active_set.iter().map(|&i| c.row(i).clone()).collect();
            let normals = span_basis(&rows, n);
            let b = &face.span_basis;
            // A second basis of L(F): b_i + sum_j m_ij b_j with a unit-triangular mix.
            let other: Vec<RatVector> = (0..b.len())
                .map(|i| (0..i).fold(b[i].clone(), |acc, j| acc.axpy(&mix[(i * 3 + j) % 9], &b[j])))
                .collect();
            let flipped: Vec<RatVector> = normals.iter().enumerate().map(|(i, v)| if i == 0 { v.scale(&Rational::from_ratio(-3, 2)) } else { v.clone() }).collect();
            let d1 = face_determinant(&a, b, &normals);
            let d2 = face_determinant(&a, &other, &flipped);
            prop_assert_eq!(d1, d2);
        }
    }

    #[test]
    fn rationals_roundtrip_through_json(v in rat_vec(4)) {
        let text = serde_json::to_string(&v).unwrap();
        let back: Vec<String> = serde_json::from_str(&text).unwrap();
        let parsed: RatVector = back.iter().map(|s| Rational::parse_scalar(s).unwrap()).collect();
        prop_assert_eq!(parsed, v);
    }
}

#[test]
fn projection_of_interior_point_is_itself() {
    let c = polyreg::polyhedra::HPolyhedron::<Rational>::orthant(2);
    let x = Vector::from_ints(&[1, 2]);
    assert_eq!(project(&c, &x).unwrap(), x);
}
