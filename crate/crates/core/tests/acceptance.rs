//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyreg::avi_solver::{stress_samples, AviInstance, StressConfig};
use polyreg::complementarity::{canonical_normal_relation, ComplementarityMap};
use polyreg::generate::{generate, Family, GeneratorConfig};
use polyreg::polyhedra::{
    brute_force_faces, enumerate_faces, in_generated_cone, normal_cone, project_with, HPolyhedron, PolyCone,
};
use polyreg::regularity::{
    check_coherent_orientation, check_critical_face, check_face_separation, check_instance_cone_separation,
    normal_map, polar_difference, surjection_modulus, ModulusConfig,
};
use polyreg::{Matrix, RatMatrix, RatVector, Rational, Scalar, Vector};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::from_ratio(p, d)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> RatVector {
    (0..n).map(|_| q(rng.gen_range(-4 * bound..=4 * bound), rng.gen_range(1..=bound))).collect()
}

fn face_lattice_oracle() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for i in 0..100u64 {
        let n = 1 + (i % 3) as usize;
        let k = 1 + (i % 6) as usize;
        let family = if i % 4 == 3 { Family::RandomCone } else { Family::RandomPolyhedron };
        let (_, c) = generate::<Rational>(&GeneratorConfig::new(family, n, k, 100 + i));
        let fast = enumerate_faces(&c).expect("nonempty by construction");
        let slow = brute_force_faces(&c).expect("nonempty by construction");
        if fast.signature() != slow.signature() {
            mismatches.push(i);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches.is_empty() && secs < 60.0,
        format!("100 polyhedra, {} mismatches {mismatches:?}, {secs:.1} s", mismatches.len()),
    )
}

fn polar_difference_identity() -> Outcome {
    let (mut pairs, mut failures) = (0, Vec::new());
    for i in 0..50u64 {
        let n = 1 + (i % 4) as usize;
        let k = 1 + (i % 5) as usize;
        let (_, c) = generate::<Rational>(&GeneratorConfig::new(Family::RandomCone, n, k, 200 + i));
        let cone = PolyCone::from_h(n, c.rows().to_vec());
        let lat = enumerate_faces(&c).unwrap();
        for (f1, f2) in lat.nested_pairs() {
            pairs += 1;
            let direct = polar_difference(&cone, &lat, f1, f2).unwrap();
            let normals = normal_cone(&c, &lat.faces[f1]).minus(&normal_cone(&c, &lat.faces[f2]));
            if !direct.set_eq(&normals) {
                failures.push((i, f1, f2));
            }
        }
    }
    outcome(failures.is_empty(), format!("50 cones, {pairs} nested pairs, failures {failures:?}"))
}

/// Mixed families, `n <= 4`, `k <= 8`.
fn instance_set(count: u64) -> Vec<(GeneratorConfig, RatMatrix, HPolyhedron<Rational>)> {
    (0..count)
        .map(|i| {
            let family = Family::ALL[(i % 7) as usize];
            let n = 1 + ((i / 7) % 4) as usize;
            let k = (n + 1 + (i % 4) as usize).min(8);
            let cfg = GeneratorConfig::new(family, n, k, 1000 + i);
            let (a, c) = generate(&cfg);
            (cfg, a, c)
        })
        .collect()
}

struct Sweep {
    c3: Outcome,
    c5: Outcome,
    c6: Outcome,
}

fn certificate_sweep() -> Sweep {
    let set = instance_set(210);
    let (mut regular, mut disagreements) = (0, Vec::new());
    let (mut bad_regular, mut irregular, mut witnessed, mut unwitnessed) = (Vec::new(), 0, 0, Vec::new());
    let (mut kh_failures, mut min_samples) = (Vec::new(), usize::MAX);
    for (idx, (cfg, a, c)) in set.iter().enumerate() {
        let inst = AviInstance::new(a.clone(), c.clone()).unwrap();
        let coherent = check_coherent_orientation(&inst.a, &inst.c, &inst.lattice, false).coherent;
        let separation = check_face_separation(&normal_map(&inst)).holds;
        if coherent != separation {
            disagreements.push(idx);
        }
        let samples = stress_samples(&inst, &StressConfig { min_samples: 100, seed: cfg.seed, bound: 4 });
        min_samples = min_samples.min(samples.len());
        let single = inst.is_single_valued(&samples).unwrap();
        if coherent {
            regular += 1;
            if !single.single_valued {
                bad_regular.push(idx);
            }
            if check_instance_cone_separation(&inst.a, &inst.c, &inst.lattice).is_some() {
                kh_failures.push(idx);
            }
        } else {
            irregular += 1;
            if single.single_valued {
                unwitnessed.push(format!("{}:n={}:seed={}", cfg.family, cfg.n, cfg.seed));
            } else {
                witnessed += 1;
            }
        }
    }
    let total = set.len();
    let rate = if irregular == 0 { 1.0 } else { witnessed as f64 / irregular as f64 };
    Sweep {
        c3: outcome(
            disagreements.is_empty() && regular > 0 && regular < total,
            format!("{total} instances ({regular} regular), disagreements {disagreements:?}"),
        ),
        c5: outcome(
            bad_regular.is_empty() && rate >= 0.95 && min_samples >= 100,
            format!(
                "{regular} regular all single-valued: {}; irregular witnessed {witnessed}/{irregular} ({:.1}%); \
                 >= {min_samples} z per instance; unwitnessed {unwitnessed:?}",
                bad_regular.is_empty(),
                100.0 * rate
            ),
        ),
        c6: outcome(kh_failures.is_empty(), format!("{regular} regular instances, failures {kh_failures:?}")),
    }
}

fn principal_minors_positive(a: &RatMatrix) -> bool {
    let n = a.rows();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        a.principal_submatrix(&idx).det().unwrap().is_pos()
    })
}

fn lcp_minors() -> Outcome {
    let (mut p_count, mut disagreements) = (0, Vec::new());
    let total = 240u64;
    for i in 0..total {
        let n = 1 + (i % 4) as usize;
        let family = if i % 3 == 0 { Family::PMatrix } else { Family::Orthant };
        let (mut a, c) = generate::<Rational>(&GeneratorConfig::new(family, n, n, 3000 + i));
        if i % 12 == 5 {
            a.set(0, 0, -a.get(0, 0).clone().abs());
        }
        let lat = enumerate_faces(&c).unwrap();
        let coherent = check_coherent_orientation(&a, &c, &lat, false).coherent;
        let minors = principal_minors_positive(&a);
        p_count += minors as usize;
        if coherent != minors {
            disagreements.push(i);
        }
    }
    outcome(
        disagreements.is_empty() && p_count > 0 && p_count < total as usize,
        format!("{total} matrices ({p_count} P-matrices), disagreements {disagreements:?}"),
    )
}

fn identity_modulus() -> Outcome {
    let cfg = ModulusConfig { budget: 2000, seed: 5, descent_steps: 100 };
    let scales = [q(1, 2), q(3, 1), q(5, 3), q(7, 4)];
    let mut failures = Vec::new();
    let mut widest = 0.0f64;
    for i in 0..20u64 {
        let n = 1 + (i % 4) as usize;
        let k = 1 + (i % 5) as usize;
        let (_, c) = generate::<Rational>(&GeneratorConfig::new(Family::RandomCone, n, k, 400 + i));
        let lat = enumerate_faces(&c).unwrap();
        let base = ComplementarityMap::plain(canonical_normal_relation(&c, &lat));
        let rep = surjection_modulus(&base, &cfg);
        widest = widest.max(rep.upper - rep.lower);
        if !(rep.positive && rep.lower <= 1.0 && 1.0 <= rep.upper && rep.upper - rep.lower <= 1e-6) {
            failures.push(format!("cone {i}: [{}, {}]", rep.lower, rep.upper));
        }
        let scale = scales[(i % 4) as usize].clone();
        let scaled = ComplementarityMap { t: Matrix::scalar(n, scale.clone()), ..base };
        let rep = surjection_modulus(&scaled, &cfg);
        let target = scale.to_f64_lossy();
        if !(rep.positive && rep.lower <= target && target <= rep.upper) {
            failures.push(format!("cone {i}, c = {scale}: [{}, {}]", rep.lower, rep.upper));
        }
    }
    outcome(failures.is_empty(), format!("20 cones, widest identity bracket {widest:.2e}, failures {failures:?}"))
}

fn lipschitz_pairs(inst: &AviInstance<Rational>, seed: u64) -> Vec<(RatVector, RatVector)> {
    let n = inst.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = stress_samples(inst, &StressConfig { min_samples: 60, seed, bound: 4 });
    let mut pairs = Vec::new();
    for (i, z) in samples.iter().enumerate() {
        for _ in 0..3 {
            let d: RatVector = (0..n).map(|_| q(rng.gen_range(-2..=2), 16)).collect();
            pairs.push((z.clone(), z.add(&d)));
        }
        if i + 1 < samples.len() {
            pairs.push((z.clone(), samples[i + 1].clone()));
        }
    }
    pairs
}

fn modulus_vs_lipschitz() -> Outcome {
    let cfg = ModulusConfig { budget: 2000, seed: 9, descent_steps: 100 };
    let families = [Family::RandomCone, Family::Orthant, Family::PMatrix, Family::RandomCone];
    let (mut regular, mut visited, mut worst) = (0, 0, 0.0f64);
    let (mut lip_failures, mut positivity_failures) = (Vec::new(), Vec::new());
    let mut i = 0u64;
    while regular < 50 && i < 400 {
        let n = 1 + (i % 3) as usize;
        let family = families[(i % 4) as usize];
        let (a, c) = generate::<Rational>(&GeneratorConfig::new(family, n, n + (i % 3) as usize, 5000 + i));
        i += 1;
        let inst = AviInstance::new(a, c).unwrap();
        let k = PolyCone::from_h(n, inst.c.rows().to_vec());
        let rep = surjection_modulus(&normal_map(&inst), &cfg);
        let critical = check_critical_face(&inst.a, &k, &inst.lattice).holds;
        visited += 1;
        if rep.positive != critical {
            positivity_failures.push(i - 1);
        }
        if !check_coherent_orientation(&inst.a, &inst.c, &inst.lattice, false).coherent {
            continue;
        }
        regular += 1;
        let lip = inst.lipschitz_estimate(&lipschitz_pairs(&inst, i)).unwrap().to_f64_lossy().sqrt();
        let ratio = lip * rep.lower;
        worst = worst.max(ratio);
        if ratio > 1.10 {
            lip_failures.push(format!("instance {}: lip {lip:.4}, lower {:.4}", i - 1, rep.lower));
        }
    }
    outcome(
        regular >= 50 && lip_failures.is_empty() && positivity_failures.is_empty(),
        format!(
            "{regular} regular of {visited}; max lip*lower = {worst:.4}; lip failures {lip_failures:?}; \
             positivity disagreements {positivity_failures:?}"
        ),
    )
}

fn projection_contract() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..20u64 {
        let n = 2 + (i % 3) as usize;
        let family = if i % 2 == 0 { Family::RandomPolyhedron } else { Family::Box };
        let (_, c) = generate::<Rational>(&GeneratorConfig::new(family, n, n + 2, 600 + i));
        let lat = enumerate_faces(&c).unwrap();
        for _ in 0..200 {
            let z = random_point(&mut rng, n, 4);
            let w = random_point(&mut rng, n, 4);
            let pz = project_with(&c, &lat, &z).unwrap();
            let pw = project_with(&c, &lat, &w).unwrap();
            let idempotent = project_with(&c, &lat, &pz).unwrap() == pz;
            let active: Vec<Vector<Rational>> = c.active_set(&pz).iter().map(|&j| c.row(j).clone()).collect();
            let variational = c.contains(&pz) && in_generated_cone(&active, &[], &z.sub(&pz), n);
            let nonexpansive = pz.sub(&pw).norm_sq() <= z.sub(&w).norm_sq();
            if !(idempotent && variational && nonexpansive) {
                failures.push(format!("instance {i}, z = {z}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("20 instances x 200 pairs, failures {failures:?}"))
}

fn scaled(c: &HPolyhedron<Rational>, lambda: &Rational) -> HPolyhedron<Rational> {
    let rows = c.rows().iter().cloned().zip(c.rhs_values().iter().map(|a| a.clone() * lambda.clone())).collect();
    HPolyhedron::new(c.dim(), rows).unwrap()
}

fn homogeneity() -> Outcome {
    let lambdas = [q(1, 3), q(1, 2), q(2, 1), q(5, 2), q(7, 1)];
    let families = [Family::RandomCone, Family::Orthant, Family::PMatrix];
    let (mut checks, mut failures) = (0, Vec::new());
    for i in 0..12u64 {
        let n = 1 + (i % 3) as usize;
        let family = families[(i % 3) as usize];
        let (a, c) = generate::<Rational>(&GeneratorConfig::new(family, n, n + 1, 700 + i));
        let inst = AviInstance::new(a, c).unwrap();
        let samples = stress_samples(&inst, &StressConfig { min_samples: 20, seed: i, bound: 4 });
        for z in samples.iter().take(20) {
            let base = inst.solve_all(z).unwrap();
            for lambda in &lambdas {
                checks += 1;
                let pieces = inst.solve_all(&z.scale(lambda)).unwrap();
                let same = pieces.len() == base.len()
                    && pieces.iter().zip(&base).all(|(p, b)| {
                        p.face_active_set == b.face_active_set
                            && p.single_point == b.single_point
                            && p.piece.set_eq(&scaled(&b.piece, lambda))
                    });
                if !same {
                    failures.push(format!("instance {i}, z = {z}, lambda = {lambda}"));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checks} (z, lambda) checks, failures {failures:?}"))
}

fn run_audit(args: &[&str], threads: Option<&str>) -> (Vec<u8>, Option<i32>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polyreg"));
    cmd.arg("audit").args(args);
    if let Some(t) = threads {
        cmd.env("POLYREG_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    (out.stdout, out.status.code())
}

fn determinism() -> Outcome {
    let sweep = ["--n", "3", "--k", "6", "--count", "14", "--seed", "42", "--samples", "100", "--budget", "2000", "--json"];
    let (first, code1) = run_audit(&sweep, None);
    let (second, code2) = run_audit(&sweep, None);
    let (third, code3) = run_audit(&sweep, Some("1"));
    let same = !first.is_empty() && first == second && first == third;
    outcome(
        same && code1 == code2 && code1 == code3,
        format!("{} bytes, identical across runs and thread caps: {same}, exit codes {code1:?}/{code2:?}/{code3:?}", first.len()),
    )
}

fn print_line(id: u32, name: &str, o: &Outcome, timing: &str) {
    println!("criterion {id:>2} {}: {name} ({timing}) {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let before: [Criterion; 2] = [
        (1, "face lattice equals brute-force enumeration", face_lattice_oracle),
        (2, "polar of a face difference equals difference of normal cones", polar_difference_identity),
    ];
    let after: [Criterion; 6] = [
        (4, "orthant coherence equals positive principal minors", lcp_minors),
        (7, "identity and scaled identity modulus brackets", identity_modulus),
        (8, "Lipschitz estimate within modulus bound, positivity equals critical face", modulus_vs_lipschitz),
        (9, "projection is idempotent, variational and nonexpansive", projection_contract),
        (10, "solution sets scale with z on cones", homogeneity),
        (11, "audit JSON is byte-identical across runs", determinism),
    ];
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let run = |list: &[Criterion], results: &mut Vec<(u32, Outcome)>| {
        for &(id, name, f) in list {
            let start = Instant::now();
            let o = f();
            print_line(id, name, &o, &format!("{:.1} s", start.elapsed().as_secs_f64()));
            results.push((id, o));
        }
    };
    run(&before, &mut results);
    let start = Instant::now();
    let sweep = certificate_sweep();
    let timing = format!("shared sweep {:.1} s", start.elapsed().as_secs_f64());
    for (id, name, o) in [
        (3, "coherent orientation equals face separation", sweep.c3),
        (5, "regular instances are single-valued, irregular ones witnessed", sweep.c5),
        (6, "K and H meet only at the origin on regular instances", sweep.c6),
    ] {
        print_line(id, name, &o, &timing);
        results.push((id, o));
    }
    run(&after, &mut results);
    let failed: Vec<u32> = results.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    println!("acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
