//! Command-line front end: build and verify ternary-group cubes, compute
//! homology, run knot invariant reports, and evaluate cocycle state sums.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 mathematical
//! contract failure, 3 resource limit exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ternhom::coloring::invariant_report_with_classifier;
use ternhom::coset::{coset_enumerate, odd_even_split, DEFAULT_MAX_COSETS};
use ternhom::presentation::parse_presentation;
use ternhom::{
    cocycle_space, homology_group_with_cap, knot_by_name, parse_braid, state_sum, verify_cocycle,
    BraidWord, CocycleFunction, Error, HomologyClassifier, TernaryCube, DEFAULT_MAX_BASIS,
    KNOT_TABLE,
};

#[derive(Parser)]
#[command(
    name = "ternhom",
    about = "Homology of finite ternary groups and knot coloring invariants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap the worker pool at this many threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Coset limit for presentation-based cube construction
    /// (env: TERNHOM_MAX_COSETS).
    #[arg(long, global = true, env = "TERNHOM_MAX_COSETS")]
    max_cosets: Option<usize>,

    /// Basis-size limit for chain-complex enumeration
    /// (env: TERNHOM_MAX_BASIS).
    #[arg(long, global = true, env = "TERNHOM_MAX_BASIS")]
    max_basis: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Where the ternary group comes from.
#[derive(Args)]
struct CubeSource {
    /// Triangle group parameters l m n: the odd part of △(l,m,n).
    #[arg(long, num_args = 3, value_names = ["L", "M", "N"])]
    triangle: Option<Vec<usize>>,

    /// Presentation text, e.g. "a,b | a^2, b^2, (ab)^3".
    #[arg(long)]
    presentation: Option<String>,

    /// Cube JSON file ({"order": n, "table": [...1-based...]}).
    #[arg(long)]
    cube: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cube, verify the ternary-group axioms, report the skew
    /// elements, and optionally write the cube to a JSON file.
    Group {
        #[command(flatten)]
        source: CubeSource,
        /// Write the verified cube to this JSON file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti number and torsion of the quotient complex in one degree.
    Homology {
        #[command(flatten)]
        source: CubeSource,
        /// Homology degree.
        #[arg(long, default_value_t = 1)]
        degree: i64,
    },
    /// Region-coloring count and homology-class histogram of a braid
    /// closure.
    Knot {
        #[command(flatten)]
        source: CubeSource,
        /// Braid word, e.g. "[1,1,1]".
        #[arg(long)]
        braid: Option<String>,
        /// Strand count override for --braid.
        #[arg(long)]
        strands: Option<usize>,
        /// Run the whole built-in knot table.
        #[arg(long)]
        table: bool,
    },
    /// Mod-m cocycle space generators and state sums.
    Cocycle {
        #[command(flatten)]
        source: CubeSource,
        /// Coefficient modulus m of Z_m.
        #[arg(long)]
        modulus: u64,
        /// Evaluate state sums of this braid for every generator (or for
        /// --cocycle-file when given).
        #[arg(long)]
        braid: Option<String>,
        /// Strand count override for --braid.
        #[arg(long)]
        strands: Option<usize>,
        /// Evaluate this cocycle (JSON file) instead of the generators.
        #[arg(long)]
        cocycle_file: Option<PathBuf>,
    },
    /// Quick internal consistency checks.
    Selftest {
        /// Seed for the randomized matrix round-trip check.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Malformed(_) | Error::Syntax { .. } | Error::Io(_) | Error::Json(_) => 1,
        Error::NotAGroup(_) | Error::Contract(_) | Error::Structural(_) => 2,
        Error::ResourceLimit(_) => 3,
    }
}

fn load_cube(source: &CubeSource, max_cosets: usize) -> ternhom::Result<TernaryCube> {
    let picked = [
        source.triangle.is_some(),
        source.presentation.is_some(),
        source.cube.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if picked != 1 {
        return Err(Error::Malformed(
            "choose exactly one of --triangle, --presentation, --cube".into(),
        ));
    }
    if let Some(t) = &source.triangle {
        return ternhom::triangle_cube(t[0], t[1], t[2], max_cosets);
    }
    if let Some(text) = &source.presentation {
        let p = parse_presentation(text)?;
        let g = coset_enumerate(&p, max_cosets)?;
        let (cube, _, _) = odd_even_split(&g)?;
        return Ok(cube.with_name("presentation"));
    }
    let path = source.cube.as_ref().unwrap();
    let text = std::fs::read_to_string(path)?;
    TernaryCube::from_json(&text)
}

fn parse_braid_arg(braid: &str, strands: Option<usize>) -> ternhom::Result<BraidWord> {
    // built-in knot names double as braid arguments
    if let Some(b) = knot_by_name(braid) {
        return Ok(b);
    }
    parse_braid(braid, strands)
}

fn cmd_group(cube: TernaryCube, out: Option<&PathBuf>, format: Format) -> ternhom::Result<()> {
    let report = cube.verify_group();
    if !report.is_group() {
        let msg = serde_json::to_string(&report.witnesses)?;
        return Err(Error::NotAGroup(format!(
            "axiom check failed, witnesses: {msg}"
        )));
    }
    let skew = cube.skew_table()?;
    let reducible = cube.is_reducible();
    if let Some(path) = out {
        std::fs::write(path, cube.to_json())?;
    }
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "name": cube.name,
                "order": cube.order(),
                "is_group": true,
                "skew": skew.one_based(),
                "reducible": reducible.is_some(),
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Format::Text => {
            if let Some(name) = &cube.name {
                println!("cube: {name}");
            }
            println!("order: {}", cube.order());
            println!("ternary group axioms: ok");
            println!(
                "skew elements: ({})",
                skew.one_based()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            println!(
                "reducible: {}",
                if reducible.is_some() { "yes" } else { "no" }
            );
            print!("{}", cube.to_slices_text());
        }
    }
    Ok(())
}

fn cmd_homology(cube: TernaryCube, degree: i64, max_basis: usize, format: Format) -> ternhom::Result<()> {
    let skew = cube.skew_table()?;
    let h = homology_group_with_cap(&cube, &skew, degree, max_basis)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&h)?),
        Format::Text => {
            let tor = if h.torsion.is_empty() {
                "none".to_string()
            } else {
                h.torsion
                    .iter()
                    .map(|t| format!("Z{t}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            println!("H_{} : betti {}, torsion {}", h.degree, h.betti, tor);
        }
    }
    Ok(())
}

fn cmd_knot(
    cube: TernaryCube,
    braid: Option<&str>,
    strands: Option<usize>,
    table: bool,
    format: Format,
) -> ternhom::Result<()> {
    let skew = cube.skew_table()?;
    let classifier = HomologyClassifier::new(&cube, &skew, 1)?;
    let braids: Vec<BraidWord> = if table {
        KNOT_TABLE
            .iter()
            .map(|(name, _, _, _)| knot_by_name(name).unwrap())
            .collect()
    } else {
        let text = braid.ok_or_else(|| {
            Error::Malformed("knot needs --braid \"[...]\" or --table".into())
        })?;
        vec![parse_braid_arg(text, strands)?]
    };
    let mut reports = Vec::new();
    for b in &braids {
        reports.push(invariant_report_with_classifier(&cube, &skew, b, &classifier)?);
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
        Format::Text => {
            for r in &reports {
                let name = r.name.clone().unwrap_or_else(|| format!("{:?}", r.braid));
                println!(
                    "{name}: colorings {}, order-3 classes {}",
                    r.total, r.order3_count
                );
                for (class, count) in &r.class_histogram {
                    println!("  {count} x {class}");
                }
            }
        }
    }
    Ok(())
}

fn cmd_cocycle(
    cube: TernaryCube,
    modulus: u64,
    braid: Option<&str>,
    strands: Option<usize>,
    cocycle_file: Option<&PathBuf>,
    format: Format,
) -> ternhom::Result<()> {
    let skew = cube.skew_table()?;
    let cocycles: Vec<CocycleFunction> = if let Some(path) = cocycle_file {
        let text = std::fs::read_to_string(path)?;
        let f = CocycleFunction::from_json_value(&serde_json::from_str(&text)?)?;
        if f.modulus != modulus {
            return Err(Error::Malformed(format!(
                "cocycle file has modulus {}, expected {modulus}",
                f.modulus
            )));
        }
        verify_cocycle(&cube, &skew, &f)?;
        vec![f]
    } else {
        cocycle_space(&cube, &skew, modulus)?
    };
    let sums = match braid {
        Some(text) => {
            let b = parse_braid_arg(text, strands)?;
            Some(
                cocycles
                    .iter()
                    .map(|f| state_sum(&cube, &skew, &b, f))
                    .collect::<ternhom::Result<Vec<_>>>()?,
            )
        }
        None => None,
    };
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "modulus": modulus,
                "cocycles": cocycles.iter().map(|f| f.to_json_value()).collect::<Vec<_>>(),
                "state_sums": sums,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Format::Text => {
            println!("modulus: {modulus}");
            println!("cocycle generators: {}", cocycles.len());
            if let Some(sums) = &sums {
                for (i, s) in sums.iter().enumerate() {
                    println!("state sum [generator {i}]: {}", s.to_group_ring_string());
                }
            }
        }
    }
    Ok(())
}

fn cmd_selftest(seed: u64, max_cosets: usize, max_basis: usize) -> ternhom::Result<()> {
    // 1. reference cube round trip through the triangle construction
    let built = ternhom::triangle_cube(2, 2, 3, max_cosets)?;
    let reference = ternhom::cube::reference_cube_2_2_3();
    if built.find_isomorphism(&reference).is_none() {
        return Err(Error::Contract(
            "triangle(2,2,3) cube is not isomorphic to the reference cube".into(),
        ));
    }
    println!("triangle(2,2,3) reconstruction: ok");

    // 2. degree-1 torsion of the reference cube
    let skew = reference.skew_table()?;
    let h1 = homology_group_with_cap(&reference, &skew, 1, max_basis)?;
    if h1.torsion != vec!["9".to_string()] {
        return Err(Error::Contract(format!(
            "expected torsion [9], got {:?}",
            h1.torsion
        )));
    }
    println!("reference cube H_1 torsion Z9: ok");

    // 3. trefoil coloring counts
    let b = parse_braid("[1,1,1]", None)?;
    let report = ternhom::invariant_report(&reference, &skew, &b)?;
    if report.total != 72 || report.order3_count != 36 {
        return Err(Error::Contract(format!(
            "trefoil counts (72, 36) expected, got ({}, {})",
            report.total, report.order3_count
        )));
    }
    println!("trefoil colorings 72 / order-3 classes 36: ok");

    // 4. seeded random Smith round trip
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut entries = Vec::new();
    for i in 0..5usize {
        for j in 0..5usize {
            if next() % 2 == 0 {
                entries.push((i, j, (next() % 19) as i64 - 9));
            }
        }
    }
    let a = ternhom::SparseIntMatrix::from_i64(5, 5, &entries);
    let d = ternhom::smith_normal_form(&a, &ternhom::SmithOptions::with_transforms())?;
    let u = d.u.as_ref().unwrap();
    let v = d.v.as_ref().unwrap();
    let prod = ternhom::snf::dense_mul(&ternhom::snf::dense_mul(u, &d.s_matrix()), v);
    let mut dense = vec![vec![ternhom::BigInt::from(0); 5]; 5];
    for (i, j, val) in &a.entries {
        dense[*i][*j] += val;
    }
    if prod != dense {
        return Err(Error::Contract("U S V != A in seeded round trip".into()));
    }
    println!("seeded Smith round trip (seed {seed}): ok");
    println!("selftest passed");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are success, everything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        ternhom::par::set_jobs(jobs.max(1));
    }
    let max_cosets = cli.max_cosets.unwrap_or(DEFAULT_MAX_COSETS);
    let max_basis = cli.max_basis.unwrap_or(DEFAULT_MAX_BASIS);
    let format = cli.format;
    let result = match &cli.command {
        Command::Group { source, out } => {
            load_cube(source, max_cosets).and_then(|c| cmd_group(c, out.as_ref(), format))
        }
        Command::Homology { source, degree } => load_cube(source, max_cosets)
            .and_then(|c| cmd_homology(c, *degree, max_basis, format)),
        Command::Knot {
            source,
            braid,
            strands,
            table,
        } => load_cube(source, max_cosets)
            .and_then(|c| cmd_knot(c, braid.as_deref(), *strands, *table, format)),
        Command::Cocycle {
            source,
            modulus,
            braid,
            strands,
            cocycle_file,
        } => load_cube(source, max_cosets).and_then(|c| {
            cmd_cocycle(
                c,
                *modulus,
                braid.as_deref(),
                *strands,
                cocycle_file.as_ref(),
                format,
            )
        }),
        Command::Selftest { seed } => cmd_selftest(*seed, max_cosets, max_basis),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
