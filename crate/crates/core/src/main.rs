use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyreg::avi_solver::{AviInstance, StressConfig};
use polyreg::complementarity::{canonical_normal_relation, ComplementarityMap};
use polyreg::generate::{generate, Family, GeneratorConfig};
use polyreg::io::{parse_point, read_instance, Instance, InstanceFile, LatticeFile, RelationFile, SolutionPieceFile};
use polyreg::polyhedra::{enumerate_faces, PolyCone};
use polyreg::regularity::{
    check_coherent_orientation, check_critical_face, check_face_separation, check_instance_cone_separation,
    default_base_point, equivalence_audit, local_instance, normal_map, surjection_modulus, AuditConfig, AuditReport,
    ModulusConfig,
};
use polyreg::{PolyregError, Rational, Result};

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "polyreg", version, about = "Exact regularity analysis of affine variational inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the faces of C with dimensions, relative-interior points and covering pairs.
    Faces {
        #[command(flatten)]
        common: Common,
        /// Print the canonical relation F -> N(C, F) instead.
        #[arg(long)]
        relation: bool,
    },
    /// Run regularity certificates. Exit 1 when one fails.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// All solutions of z in A x + N(C, x).
    Solve {
        #[command(flatten)]
        common: Common,
        /// Comma-separated rationals, e.g. "1/2,-3".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Surjection modulus on the tangent cone at the base point. Exit 1 when it is zero.
    Modulus {
        #[command(flatten)]
        common: Common,
        /// Sampled directions per face pair.
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check every certificate against the others and the solver. Exit 1 on any inconsistency.
    Audit {
        /// Instance file; without it instances come from the generator options.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Minimum number of stress right-hand sides per instance.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampled modulus directions per face pair.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[command(flatten)]
        gen: GenArgs,
        /// Number of generated instances.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Print a seeded random instance file.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct GenArgs {
    /// A family name, or "mixed" to cycle through all of them.
    #[arg(long, default_value = "mixed")]
    family: String,
    /// Dimension; for several instances, the largest dimension.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Inequality count; for several instances, the largest count.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    entry_bound: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Coherent,
    Separation,
    Critical,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("POLYREG_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| PolyregError::Usage(format!("POLYREG_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| PolyregError::Usage(e.to_string()))
}

fn load(path: &PathBuf) -> Result<Instance<Rational>> {
    let text = fs::read_to_string(path).map_err(|e| PolyregError::Usage(format!("{}: {e}", path.display())))?;
    read_instance(&text)
}

fn emit<S: Serialize>(value: &S) {
    say!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Faces { common, relation } => cmd_faces(&common, relation),
        Command::Check { common, which } => cmd_check(&common, which),
        Command::Solve { common, z } => cmd_solve(&common, &z),
        Command::Modulus { common, samples, seed } => cmd_modulus(&common, samples, seed),
        Command::Audit { file, json, samples, seed, budget, gen, count } => {
            let cfg = AuditConfig {
                stress: StressConfig { min_samples: samples, seed, ..StressConfig::default() },
                modulus: ModulusConfig { budget, seed, ..ModulusConfig::default() },
            };
            match file {
                Some(path) => cmd_audit_file(&path, json, &cfg),
                None => cmd_audit_sweep(&gen, count, seed, json, &cfg),
            }
        }
        Command::Generate { gen, seed } => {
            let cfg = sweep_config(&gen, 0, 1, seed)?;
            let (a, c) = generate::<Rational>(&cfg);
            emit(&InstanceFile::new(&a, &c));
            Ok(true)
        }
    }
}

fn cmd_faces(common: &Common, relation: bool) -> Result<bool> {
    let inst = load(&common.file)?;
    let lattice = enumerate_faces(&inst.c)?;
    if relation {
        emit(&RelationFile::from_relation(&canonical_normal_relation(&inst.c, &lattice)));
        return Ok(true);
    }
    if common.json {
        emit(&LatticeFile::new(&lattice));
    } else {
        say!("{} faces", lattice.len());
        for f in &lattice.faces {
            say!("face {:?} dim {} ri {}", f.active_set, f.dim, f.ri_point);
        }
        for &(i, j) in &lattice.covering_pairs {
            say!("cover {:?} < {:?}", lattice.faces[i].active_set, lattice.faces[j].active_set);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct CheckOutput {
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    coherent_orientation: Option<polyreg::regularity::CoherentOrientation<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    face_separation: Option<polyreg::regularity::FaceSeparation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_face: Option<polyreg::regularity::CriticalFace<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation_kh: Option<polyreg::regularity::KhSeparation<Rational>>,
}

fn cmd_check(common: &Common, which: Which) -> Result<bool> {
    let file = load(&common.file)?;
    let inst = AviInstance::new(file.a.clone(), file.c.clone())?;
    let wants = |w: Which| which == w || which == Which::All;
    let mut out = CheckOutput { pass: true, coherent_orientation: None, face_separation: None, critical_face: None, separation_kh: None };
    if wants(Which::Coherent) {
        let rep = check_coherent_orientation(&inst.a, &inst.c, &inst.lattice, false);
        out.pass &= rep.coherent;
        out.coherent_orientation = Some(rep);
    }
    if wants(Which::Separation) {
        let map = match &file.relation {
            Some(r) => {
                let n = inst.dim();
                ComplementarityMap::new(r.to_relation(&inst.c, &inst.lattice)?, inst.a.clone(), polyreg::Matrix::identity(n))?
            }
            None => normal_map(&inst),
        };
        let rep = check_face_separation(&map);
        out.pass &= rep.holds;
        out.face_separation = Some(rep);
    }
    if wants(Which::Critical) {
        let base = file.base_point.clone().unwrap_or_else(|| default_base_point(&inst.lattice));
        let local = local_instance(&inst, &base)?;
        let k = PolyCone::from_h(inst.dim(), local.c.rows().to_vec());
        let rep = check_critical_face(&inst.a, &k, &local.lattice);
        out.pass &= rep.holds;
        out.critical_face = Some(rep);
    }
    if which == Which::All {
        let kh = check_instance_cone_separation(&inst.a, &inst.c, &inst.lattice);
        out.pass &= kh.is_none();
        out.separation_kh = Some(polyreg::regularity::KhSeparation { holds: kh.is_none(), witness: kh });
    }
    if common.json {
        emit(&out);
    } else {
        if let Some(r) = &out.coherent_orientation {
            say!("coherent orientation: {}", verdict(r.coherent));
            if let Some((f, g)) = &r.first_bad_pair {
                say!("  faces {f:?} and {g:?}");
            }
        }
        if let Some(r) = &out.face_separation {
            say!("face separation: {}", verdict(r.holds));
            if let Some(f) = &r.singular_face {
                say!("  singular at face {f:?}");
            }
            if let Some((f, g, why)) = &r.violation {
                say!("  pair {f:?} < {g:?}: {why:?}");
            }
        }
        if let Some(r) = &out.critical_face {
            say!("critical face: {}", verdict(r.holds));
            if let Some((f1, f2, z)) = &r.witness {
                say!("  faces {f1:?} <= {f2:?}, z = {z}");
            }
        }
        if let Some(r) = &out.separation_kh {
            say!("K and H meet only at 0: {}", verdict(r.holds));
            if let Some((f, w)) = &r.witness {
                say!("  face {f:?}, common point {w}");
            }
        }
    }
    Ok(out.pass)
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_solve(common: &Common, z: &str) -> Result<bool> {
    let file = load(&common.file)?;
    let inst = AviInstance::new(file.a, file.c)?;
    let z = parse_point::<Rational>(z)?;
    let pieces = inst.solve_all(&z)?;
    if common.json {
        emit(&pieces.iter().map(SolutionPieceFile::new).collect::<Vec<_>>());
    } else {
        say!("{} solutions", polyreg::avi_solver::count_solutions(&pieces).label());
        for p in &pieces {
            let kind = if p.single_point { "point" } else { "set" };
            say!("face {:?}: {} x = {}", p.face_active_set, kind, p.witness);
        }
    }
    Ok(true)
}

fn cmd_modulus(common: &Common, samples: usize, seed: u64) -> Result<bool> {
    let file = load(&common.file)?;
    let inst = AviInstance::new(file.a.clone(), file.c.clone())?;
    let cfg = ModulusConfig { budget: samples, seed, ..ModulusConfig::default() };
    let map = match (&file.relation, &file.base_point) {
        (Some(r), None) if inst.c.is_cone() => {
            let n = inst.dim();
            ComplementarityMap::new(r.to_relation(&inst.c, &inst.lattice)?, inst.a.clone(), polyreg::Matrix::identity(n))?
        }
        _ => {
            let base = file.base_point.clone().unwrap_or_else(|| default_base_point(&inst.lattice));
            normal_map(&local_instance(&inst, &base)?)
        }
    };
    let rep = surjection_modulus(&map, &cfg);
    if common.json {
        emit(&rep);
    } else {
        say!("positive: {}", rep.positive);
        say!("lower: {}", rep.lower);
        say!("upper: {}", rep.upper);
        if let Some((f1, f2)) = &rep.argmin {
            say!("pair: {f1:?} <= {f2:?}");
        }
    }
    Ok(rep.positive)
}

fn print_audit(rep: &AuditReport<Rational>) {
    say!("regular: {}", rep.regular);
    for r in &rep.rules {
        say!("{} {}: {}", verdict(r.holds), r.name, r.detail);
    }
    if rep.unwitnessed {
        say!("note: irregular, but no stress sample had 0 or several solutions");
    }
}

fn cmd_audit_file(path: &PathBuf, json: bool, cfg: &AuditConfig) -> Result<bool> {
    let file = load(path)?;
    let inst = AviInstance::new(file.a, file.c)?;
    let relation = file.relation.as_ref().map(|r| r.to_relation(&inst.c, &inst.lattice)).transpose()?;
    let rep = equivalence_audit(&inst, file.base_point.as_ref(), relation.as_ref(), cfg)?;
    if json {
        emit(&rep);
    } else {
        print_audit(&rep);
    }
    Ok(rep.consistent())
}

/// Instance `i` of a sweep of `count`: families cycle when the family is
/// "mixed", and dimensions and inequality counts cycle up to their maxima.
fn sweep_config(gen: &GenArgs, i: usize, count: usize, seed: u64) -> Result<GeneratorConfig> {
    let family = if gen.family == "mixed" { Family::ALL[i % Family::ALL.len()] } else { gen.family.parse()? };
    if gen.n == 0 {
        return Err(PolyregError::Usage("--n must be positive".into()));
    }
    let (n, k) = if count == 1 {
        (gen.n, gen.k)
    } else {
        let n = 1 + (i / Family::ALL.len()) % gen.n;
        (n, (n + 1 + i % 3).min(gen.k.max(1)))
    };
    Ok(GeneratorConfig { seed: seed.wrapping_add(i as u64), n, k, entry_bound: gen.entry_bound, family })
}

#[derive(Serialize)]
struct SweepEntry {
    config: GeneratorConfig,
    regular: bool,
    consistent: bool,
    unwitnessed: bool,
    inconsistencies: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AuditReport<Rational>>,
}

#[derive(Serialize)]
struct SweepOutput {
    instances: usize,
    regular: usize,
    inconsistent: usize,
    unwitnessed: usize,
    entries: Vec<SweepEntry>,
}

fn cmd_audit_sweep(gen: &GenArgs, count: usize, seed: u64, json: bool, cfg: &AuditConfig) -> Result<bool> {
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let config = sweep_config(gen, i, count, seed)?;
        let (a, c) = generate::<Rational>(&config);
        let rep = equivalence_audit(&AviInstance::new(a, c)?, None, None, cfg)?;
        let consistent = rep.consistent();
        entries.push(SweepEntry {
            config,
            regular: rep.regular,
            consistent,
            unwitnessed: rep.unwitnessed,
            inconsistencies: rep.inconsistencies.clone(),
            report: (count == 1 || !consistent).then_some(rep),
        });
    }
    let out = SweepOutput {
        instances: count,
        regular: entries.iter().filter(|e| e.regular).count(),
        inconsistent: entries.iter().filter(|e| !e.consistent).count(),
        unwitnessed: entries.iter().filter(|e| e.unwitnessed).count(),
        entries,
    };
    if json {
        emit(&out);
    } else {
        say!(
            "{} instances, {} regular, {} inconsistent, {} unwitnessed",
            out.instances, out.regular, out.inconsistent, out.unwitnessed
        );
        for e in out.entries.iter().filter(|e| !e.consistent || e.unwitnessed) {
            say!(
                "{} n={} k={} seed={}: inconsistent {:?}{}",
                e.config.family,
                e.config.n,
                e.config.k,
                e.config.seed,
                e.inconsistencies,
                if e.unwitnessed { " (unwitnessed)" } else { "" }
            );
        }
    }
    Ok(out.inconsistent == 0)
}
