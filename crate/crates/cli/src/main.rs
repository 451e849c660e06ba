use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use so4sym::dynamics::{
    branch_and_jacobian, equivariance_residual, flow_invariance_defect, integrate, BranchReport, Coupling,
    CubicCoefficients, EquivarianceReport, StructureReport, DEFAULT_SAMPLES,
};
use so4sym::invariants::{compute_row, reference_table, TableRow, F_COLUMNS, G_COLUMNS};
use so4sym::series::{Family, FamilySpec, SeriesGroups};

mod report;

use report::{GroupDescriptor, Source, SCHEMA_VERSION};

/// Finite subgroups of SO(4) in quaternion-pair form.
///
/// Worker threads follow RAYON_NUM_THREADS.
#[derive(Parser, Debug)]
#[command(name = "so4sym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full structural analysis of one group.
    Analyze {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings (makes the output non-deterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Reproduce a reference table of invariant and equivariant counts.
    Tables {
        /// Series: 1, 2 or 3.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        which: u32,
        #[arg(long, default_value_t = 21)]
        m_max: u32,
        #[arg(long)]
        json: bool,
    },
    /// Absolute irreducibility without odd-dimensional fixed spaces.
    CheckIze {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Numerical checks of the cubic equivariant vector field (JSON output).
    Dynamics(DynamicsArgs),
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// g1, g2, g3, f1, f2, f3, h or fc.
    #[arg(long, requires = "m", conflicts_with = "file")]
    family: Option<String>,
    /// Odd m >= 3.
    #[arg(long)]
    m: Option<u32>,
    /// Generator file: {"N": .., "generators": [{"l": [..], "r": [..]}], "cap": ..}.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl GroupArgs {
    fn load(&self) -> Result<Source> {
        match (&self.family, self.m, &self.file) {
            (Some(f), Some(m), None) => Source::from_family(family_spec(f, m)?),
            (None, _, Some(p)) => Source::from_file(p),
            _ => bail!("give either --family and --m, or --file"),
        }
    }
}

fn family_spec(family: &str, m: u32) -> Result<FamilySpec> {
    Ok(FamilySpec::new(family.parse::<Family>()?, m)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    All,
    Equivariance,
    Structure,
    Branch,
    Flow,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
    #[arg(long, allow_hyphen_values = true)]
    c3: f64,
    /// hamiltonian or gradient; defaults to the one the family is equivariant for.
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long, value_enum, default_values_t = [Check::All])]
    check: Vec<Check>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Integrate with fixed-step RK4 for time T with step DT.
    #[arg(long, num_args = 2, value_names = ["T", "DT"], requires = "csv")]
    integrate: Option<Vec<f64>>,
    /// CSV file for the trajectory (columns t,x1,x2,x3,x4).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Initial point x1,x2,x3,x4.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, default_values_t = [0.1, 0.05, -0.2, 0.15])]
    x0: Vec<f64>,
}

#[derive(Serialize)]
struct TableRowReport {
    m: u32,
    published: TableRow,
    computed: TableRow,
    pass: bool,
}

#[derive(Serialize)]
struct TablesReport {
    schema: u32,
    series: u32,
    m_max: u32,
    rows: Vec<TableRowReport>,
    all_pass: bool,
}

#[derive(Serialize)]
struct TrajectoryInfo {
    path: String,
    t_end: f64,
    dt: f64,
    steps: usize,
    x0: [f64; 4],
    x_final: [f64; 4],
}

#[derive(Serialize)]
struct DynamicsReport {
    schema: u32,
    group: GroupDescriptor,
    coefficients: CubicCoefficients,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivariance: Option<EquivarianceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<BranchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow_invariance_defect: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<TrajectoryInfo>,
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_analyze(group: &GroupArgs, json: bool, timing: bool) -> Result<u8> {
    let start = Instant::now();
    let source = group.load()?;
    let closure_ms = start.elapsed().as_secs_f64() * 1e3;
    let r = report::analyze(&source, closure_ms, timing)?;
    if json {
        print_json(&r)?;
    } else {
        report::print_analysis(&r);
    }
    Ok(0)
}

fn fmt_cells(v: &[u64]) -> String {
    v.iter().map(|x| format!("{x:>4}")).collect()
}

fn cmd_tables(which: u32, m_max: u32, json: bool) -> Result<u8> {
    let reference: Vec<TableRow> = reference_table(which)?.into_iter().filter(|r| r.m <= m_max).collect();
    if reference.is_empty() {
        bail!("no table rows with m <= {m_max}");
    }
    let rows = reference
        .into_iter()
        .map(|published| {
            let computed = compute_row(which, published.m)?;
            Ok(TableRowReport {
                m: published.m,
                pass: computed == published,
                published,
                computed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(|r| r.pass);
    if json {
        print_json(&TablesReport {
            schema: SCHEMA_VERSION,
            series: which,
            m_max,
            rows,
            all_pass,
        })?;
    } else {
        let head = |cols: &[&str]| cols.iter().map(|c| format!("{c:>4}")).collect::<String>();
        let block = format!("{}  {}", head(&G_COLUMNS), head(&F_COLUMNS));
        println!("series {which}: G_{which}(m) columns, then F_{which}(m) columns");
        println!("{:>4} | {:^w$} | {:^w$} |", "", "published", "computed", w = block.len());
        println!("{:>4} | {block} | {block} | result", "m");
        for r in &rows {
            println!(
                "{:>4} | {}  {} | {}  {} | {}",
                r.m,
                fmt_cells(&r.published.g),
                fmt_cells(&r.published.f),
                fmt_cells(&r.computed.g),
                fmt_cells(&r.computed.f),
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(if all_pass { 0 } else { 2 })
}

fn cmd_check_ize(group: &GroupArgs, json: bool) -> Result<u8> {
    let source = group.load()?;
    let r = report::ize_report(&source)?;
    if json {
        print_json(&r)?;
    } else {
        println!("order {}: Ize verdict {}", r.order, r.ize.verdict);
        println!(
            "  commutant dimension {} (absolutely irreducible: {})",
            r.ize.commutant_dim, r.ize.absolutely_irreducible
        );
        println!("  fix dimensions {:?} (odd one present: {})", r.ize.fix_dims, r.ize.has_odd_dim_fix);
        for (order, dim, len) in &r.witnesses {
            println!("  isotropy subgroup of order {order}: dim Fix {dim}, {len} conjugates");
        }
    }
    Ok(0)
}

fn cmd_dynamics(a: &DynamicsArgs) -> Result<u8> {
    let spec = family_spec(&a.family, a.m)?;
    let coupling = match &a.coupling {
        Some(s) => s.parse::<Coupling>()?,
        None => Coupling::natural_for(spec.family),
    };
    let c = CubicCoefficients {
        lambda: a.lambda,
        c1: a.c1,
        c2: a.c2,
        c3: a.c3,
        coupling,
    };
    if ![c.lambda, c.c1, c.c2, c.c3].iter().all(|v| v.is_finite()) {
        bail!("coefficients must be finite");
    }
    if a.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let wants = |k: Check| a.check.contains(&Check::All) || a.check.contains(&k);
    let source = Source::from_family(spec)?;
    let g = &source.group;
    let mut r = DynamicsReport {
        schema: SCHEMA_VERSION,
        group: source.descriptor.clone(),
        coefficients: c,
        equivariance: None,
        structure: None,
        branch: None,
        flow_invariance_defect: None,
        notes: vec![],
        trajectory: None,
    };
    if wants(Check::Equivariance) {
        r.equivariance = Some(equivariance_residual(&c, g, a.samples));
    }
    if wants(Check::Structure) {
        match Family::ALL[..3].contains(&spec.family) {
            true => {
                let j = spec.family.series_index().expect("series family");
                let s = SeriesGroups::build(j, spec.m)?;
                r.structure = Some(so4sym::dynamics::structure_checks(&c, &s.g, &s.f)?);
            }
            false if a.check.contains(&Check::Structure) => {
                bail!("structure checks need a series group G_j(m) with its index-2 subgroup")
            }
            false => r.notes.push("structure checks skipped: not a series group G_j(m)".into()),
        }
    }
    if wants(Check::Branch) {
        match branch_and_jacobian(&c, &spec) {
            Ok(b) => r.branch = Some(b),
            Err(e) if a.check.contains(&Check::Branch) => return Err(e.into()),
            Err(e) => r.notes.push(format!("branch skipped: {e}")),
        }
    }
    if wants(Check::Flow) {
        r.flow_invariance_defect = Some(flow_invariance_defect(&c, g)?);
    }
    if let (Some(iv), Some(path)) = (&a.integrate, &a.csv) {
        let x0: [f64; 4] = a.x0.as_slice().try_into().context("--x0 needs four values")?;
        let path_points = integrate(&c, &x0, iv[0], iv[1])?;
        let mut w = std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        writeln!(w, "t,x1,x2,x3,x4")?;
        for (t, x) in &path_points {
            writeln!(w, "{t},{},{},{},{}", x[0], x[1], x[2], x[3])?;
        }
        w.flush()?;
        r.trajectory = Some(TrajectoryInfo {
            path: path.display().to_string(),
            t_end: iv[0],
            dt: iv[1],
            steps: path_points.len() - 1,
            x0,
            x_final: path_points.last().map(|p| p.1).unwrap_or(x0),
        });
    }
    print_json(&r)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze { group, json, timing } => cmd_analyze(group, *json, *timing),
        Command::Tables { which, m_max, json } => cmd_tables(*which, *m_max, *json),
        Command::CheckIze { group, json } => cmd_check_ize(group, *json),
        Command::Dynamics(a) => cmd_dynamics(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
