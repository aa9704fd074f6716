use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use semicrossed::dfk::compare_kernels;
use semicrossed::dilation::{product_oracle_check, verify_nica_axioms, NicaReport};
use semicrossed::dynsys::{simplicity_verdict, validate_system, SimplicityReport, ValidationReport};
use semicrossed::lattice::{parse_grid, parse_points};
use semicrossed::search::{plan, run_search, SearchParams, SearchReport, Target};
use semicrossed::shilov::{
    boundary_invariance_check, envelope_criterion, shilov_subspace, subgroup_compat, tower_oracle,
    CompatReport, SubgroupSpec,
};
use semicrossed::{
    ClassicalSystem, DilationElement, Error, Exec, Grid, GroupPoint, OrderSpec, ParseError,
    ScalarFunction, SystemFile,
};

const EXIT_FINDING: u8 = 1;
const EXIT_INVALID_SYSTEM: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "semicrossed", version, about = "Exact checks for finite lattice-ordered dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a system file describes commuting (or chain-compatible) maps.
    Validate(FileArgs),
    /// Verify the covariance axioms and the coordinatewise product on a grid.
    DilationCheck(GridArgs),
    /// Truncation of the maximal invariant boundary ideal on a grid.
    Shilov(GridArgs),
    /// Whether the product cover is already the envelope.
    EnvelopeReport(FileArgs),
    /// Kernel of the comparison representation against the tower oracle.
    DfkCompare(GridArgs),
    /// Compare a subgroup's boundary ideal with the ambient one.
    SubgroupCompat(SubgroupArgs),
    /// Minimality and exponent collisions.
    Simplicity(FileArgs),
    /// Enumerate or sample small systems for a target pattern.
    Search(SearchArgs),
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GridArgs {
    file: PathBuf,
    /// Semicolon-separated points, e.g. "0,0;1,0". Defaults to the origin.
    #[arg(long)]
    grid: Option<String>,
    /// Half-width of the window for the axiom checks; at least the
    /// periodicity bound.
    #[arg(long)]
    box_radius: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SubgroupArgs {
    file: PathBuf,
    /// coord:i (product orders) or index:k (chains).
    #[arg(long)]
    subgroup: String,
    /// Grid in the subgroup's own coordinates.
    #[arg(long, default_value = "0;1")]
    grid: String,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderKind {
    Product,
    Chain,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 3)]
    points: usize,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, value_enum, default_value_t = OrderKind::Product)]
    order: OrderKind,
    /// Chain levels, e.g. "1,2,6"; used with --order chain.
    #[arg(long, default_value = "1,2")]
    levels: String,
    /// Only bijective maps.
    #[arg(long)]
    bijective: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidates drawn when the space is too large to enumerate.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 20)]
    max_hits: usize,
    #[arg(long)]
    json: bool,
}

/// Failure that maps to a specific exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::System(_)) => EXIT_INVALID_SYSTEM,
        Some(Error::IdentityViolation(_)) => EXIT_FINDING,
        _ => EXIT_IO,
    }
}

fn load(path: &Path) -> anyhow::Result<ClassicalSystem> {
    let file = read_file(path)?;
    ClassicalSystem::from_file(&file)
        .map_err(Error::from)
        .with_context(|| format!("invalid system in {}", path.display()))
}

fn read_file(path: &Path) -> anyhow::Result<SystemFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SystemFile::from_json(&text)
        .map_err(Error::from)
        .with_context(|| format!("parsing {}", path.display()))
}

fn grid_for(sys: &ClassicalSystem, literal: Option<&str>) -> anyhow::Result<Grid> {
    match literal {
        Some(l) => Ok(parse_grid(l, sys.order()).map_err(Error::from)?),
        None => Ok(Grid::singleton(sys.zero())),
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn points_1(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", s.join(","))
}

fn cmd_validate(args: &FileArgs) -> anyhow::Result<u8> {
    let file = read_file(&args.file)?;
    let report: ValidationReport = validate_system(&file);
    if args.json {
        print_json(&report)?;
    } else if report.valid {
        println!("valid {} system on {} points", report.order, report.points);
        for (i, p) in report.periodicity.iter().enumerate() {
            println!("  generator {}: index {}, period {}", i + 1, p.index, p.period);
        }
    } else {
        println!("invalid: {}", report.error.as_deref().unwrap_or("unknown"));
        if let Some(z) = report.witness_point {
            println!("  witness point {z}");
        }
    }
    Ok(if report.valid { 0 } else { EXIT_INVALID_SYSTEM })
}

fn checked_radius(sys: &ClassicalSystem, radius: Option<i64>) -> anyhow::Result<i64> {
    let bound = sys.periodicity_bound() as i64;
    match radius {
        None => Ok(bound),
        Some(r) if r < bound => Err(Exit(
            EXIT_IO,
            format!("--box-radius {r} is below the periodicity bound {bound}"),
        )
        .into()),
        Some(r) => Ok(r),
    }
}

#[derive(Serialize)]
struct DilationOut {
    grid: Grid,
    axioms: NicaReport,
    product_oracle_points: usize,
    passed: bool,
}

/// Seeded coefficients on every grid point.
fn seeded_element(sys: &ClassicalSystem, grid: &Grid, rng: &mut ChaCha8Rng) -> anyhow::Result<DilationElement> {
    let coeffs: BTreeMap<GroupPoint, ScalarFunction> = grid
        .iter()
        .map(|g| {
            let v: Vec<i64> = (0..sys.points()).map(|_| rng.random_range(-2..=2)).collect();
            (g.clone(), ScalarFunction::from_ints(&v))
        })
        .collect();
    Ok(DilationElement::from_coeffs(sys, coeffs)?)
}

fn cmd_dilation_check(args: &GridArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let grid = grid_for(&sys, args.grid.as_deref())?;
    let radius = checked_radius(&sys, args.box_radius)?;
    let axioms = verify_nica_axioms(&sys, radius);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let x = seeded_element(&sys, &grid, &mut rng)?;
    let y = seeded_element(&sys, &grid, &mut rng)?;
    let points = product_oracle_check(&sys, &x, &y, |s, a, b| a.multiply(s, b))?;
    let out = DilationOut {
        grid,
        passed: axioms.passed(),
        axioms,
        product_oracle_points: points,
    };
    if args.json {
        print_json(&out)?;
    } else {
        for c in &out.axioms.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            println!("{status}  {}  ({} cases)", c.name, c.cases);
            if let Some(f) = &c.first_failure {
                println!("      first failure: {f}");
            }
        }
        println!("pass  coordinatewise product  ({points} box points)");
    }
    Ok(if out.passed { 0 } else { EXIT_FINDING })
}

#[derive(Serialize)]
struct Checks {
    boundary: bool,
    invariance: bool,
    oracle_agreement: bool,
}

#[derive(Serialize)]
struct ShilovOut {
    grid: Grid,
    dimension: usize,
    basis: Vec<DilationElement>,
    checks: Checks,
    tower_history: Vec<usize>,
}

fn cmd_shilov(args: &GridArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let grid = grid_for(&sys, args.grid.as_deref())?;
    checked_radius(&sys, args.box_radius)?;
    let sub = shilov_subspace(&sys, &grid)?;
    let boundary = boundary_invariance_check(&sys, &sub)?;
    let tower = tower_oracle(&sys, &grid, 4)?;
    let agreement = tower.stable && tower.subspace == sub;
    let out = ShilovOut {
        grid,
        dimension: sub.dim(),
        basis: sub.basis(),
        checks: Checks {
            boundary: boundary.iota_intersection == 0,
            invariance: true,
            oracle_agreement: agreement,
        },
        tower_history: tower.history,
    };
    if args.json {
        print_json(&out)?;
    } else {
        println!("dimension {} on a grid of {} points", out.dimension, out.grid.len());
        for (i, b) in out.basis.iter().enumerate() {
            println!("  b{}: {b}", i + 1);
        }
        println!(
            "boundary: ok ({} members), invariance: ok ({} shifts), oracle: {}",
            boundary.members_verified,
            boundary.shifts_verified,
            if agreement { "agrees" } else { "DISAGREES" }
        );
    }
    if !agreement {
        bail!(Exit(EXIT_FINDING, "primary algorithm and tower oracle disagree".into()));
    }
    Ok(0)
}

fn cmd_envelope(args: &FileArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let report = envelope_criterion(&sys);
    if args.json {
        print_json(&report)?;
    } else if let Some(w) = &report.witness {
        let f: Vec<String> = w.f.iter().map(ToString::to_string).collect();
        println!(
            "product cover is NOT the C*-envelope; witness F={{{}}}",
            f.join(",")
        );
        println!(
            "  K_F vanishes on {}, its annihilator on {}",
            points_1(&w.k_zero_set.zero_set_one_based()),
            points_1(&w.annihilator_zero_set.zero_set_one_based())
        );
    } else {
        println!("product cover is the C*-envelope ({} sets checked)", report.sets_checked);
    }
    Ok(0)
}

fn cmd_dfk(args: &GridArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let grid = grid_for(&sys, args.grid.as_deref())?;
    checked_radius(&sys, args.box_radius)?;
    let cmp = compare_kernels(&sys, &grid)?;
    if args.json {
        print_json(&cmp)?;
    } else {
        for s in &cmp.supports {
            println!(
                "S = {:<8} Q0 zero set {:<10} Q zero set {}",
                points_1(&s.support),
                points_1(&s.q0_zero_set.zero_set_one_based()),
                points_1(&s.zero_set.zero_set_one_based())
            );
        }
        println!(
            "kernel dimension {}, tower dimension {}: {}",
            cmp.kernel_dim,
            cmp.tower_dim,
            if cmp.agreement { "agree" } else { "DISAGREE" }
        );
        if let Some(m) = &cmp.mismatch {
            println!("  mismatch: {m}");
        }
    }
    Ok(if cmp.agreement { 0 } else { EXIT_FINDING })
}

fn cmd_subgroup(args: &SubgroupArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let spec: SubgroupSpec = args.subgroup.parse().map_err(Error::from)?;
    let sub_order = OrderSpec::product(1)?;
    let pts = parse_points(&args.grid, &sub_order).map_err(Error::from)?;
    let grid = Grid::from_closed(pts, &OrderSpec::chain(vec![1])?).map_err(Error::from)?;
    let report: CompatReport = subgroup_compat(&sys, spec, &grid, Exec::default())?;
    if args.json {
        print_json(&report)?;
    } else {
        println!(
            "subgroup {}: J has dimension {}, I ∩ C has dimension {}",
            report.subgroup, report.j_dimension, report.i_dimension
        );
        println!(
            "  J ⊆ I: {}, I ∩ C ⊆ J: {}, isometric on {} of {} samples",
            report.j_in_i,
            report.i_in_j,
            report.isometry_cases - report.isometry_failures,
            report.isometry_cases
        );
        if report.holds() {
            println!("J = I ∩ C holds");
        } else {
            println!("J = I ∩ C FAILS; witness element attached");
            if let Some(w) = &report.witness {
                println!("  element:  {}", w.element);
                println!("  embedded: {}", w.embedded);
                if let Some(v) = &w.violation {
                    println!(
                        "  entry at h = {} is {}, required to vanish on {}",
                        v.h,
                        v.entry,
                        points_1(&v.required_zero_on)
                    );
                }
            }
        }
    }
    Ok(if report.holds() { 0 } else { EXIT_FINDING })
}

fn cmd_simplicity(args: &FileArgs) -> anyhow::Result<u8> {
    let sys = load(&args.file)?;
    let report: SimplicityReport = simplicity_verdict(&sys);
    if args.json {
        print_json(&report)?;
    } else {
        match &report.minimal.witness {
            None => println!("minimal: no proper nonempty invariant subset"),
            Some(w) => println!("not minimal: {} is invariant", points_1(w)),
        }
        if let Some((v, w)) = &report.maps.witness {
            println!("exponent collision: φ^{v} = φ^{w}");
        }
        println!(
            "envelope is {}",
            if report.simple { "simple" } else { "not simple" }
        );
    }
    Ok(0)
}

fn search_params(args: &SearchArgs) -> anyhow::Result<SearchParams> {
    let target: Target = args.target.parse()?;
    let order = match args.order {
        OrderKind::Product => OrderSpec::Product { rank: args.rank },
        OrderKind::Chain => {
            let levels = args
                .levels
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::from(ParseError::Grid(format!("bad levels {:?}", args.levels))))?;
            OrderSpec::Chain { levels }
        }
    };
    if args.rank == 0 {
        bail!(Error::InvalidArgument("rank must be positive".into()));
    }
    Ok(SearchParams {
        target,
        order,
        points: args.points,
        bijective: args.bijective,
        seed: args.seed,
        samples: args.samples,
        max_hits: args.max_hits,
    })
}

fn cmd_search(args: &SearchArgs) -> anyhow::Result<u8> {
    let params = search_params(args)?;
    let (count, exhaustive) = plan(&params)?;
    if !args.json {
        println!(
            "{} {count} candidate systems",
            if exhaustive { "enumerating" } else { "sampling" }
        );
    }
    let report: SearchReport = run_search(&params, Exec::default())?;
    if args.json {
        print_json(&report)?;
    } else if report.hits.is_empty() {
        println!("no hit");
    } else {
        println!(
            "{} distinct hits up to relabeling, showing {}",
            report.hits_total,
            report.hits.len()
        );
        for hit in &report.hits {
            println!("{}", hit.system.to_json());
            println!("witness: {}", serde_json::to_string(&hit.witness)?);
        }
    }
    Ok(if report.hits_total == 0 { 0 } else { EXIT_FINDING })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_IO } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::DilationCheck(a) => cmd_dilation_check(a),
        Command::Shilov(a) => cmd_shilov(a),
        Command::EnvelopeReport(a) => cmd_envelope(a),
        Command::DfkCompare(a) => cmd_dfk(a),
        Command::SubgroupCompat(a) => cmd_subgroup(a),
        Command::Simplicity(a) => cmd_simplicity(a),
        Command::Search(a) => cmd_search(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
