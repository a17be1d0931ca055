use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use genus_core::{
    bundled_catalogs, classify_genus, nu_table, plot_csv, Catalog, ClassificationDb,
    ClassifyError, OrderLookup,
};

/// Classify finite groups by strong symmetric genus.
#[derive(Parser)]
#[command(name = "genus-atlas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the classification pipeline for one genus or a range 2..=G.
    Classify(ClassifyArgs),
    /// Print all Riemann-Hurwitz candidate pairs for a genus.
    Signatures {
        #[arg(long)]
        genus: u64,
        /// Restrict output to candidates with this group order.
        #[arg(long)]
        order: Option<u64>,
    },
    /// Parse a catalog file and report consistency violations.
    VerifyCatalog {
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Print the nu(g) table from a classification database.
    NuTable {
        #[arg(long)]
        db: PathBuf,
    },
    /// Write the nu(g) plot data as CSV.
    PlotCsv {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Classify exactly this genus (db must be complete through genus-1).
    #[arg(long, conflicts_with = "max_genus")]
    genus: Option<u64>,
    /// Classify genera 2..=G in order.
    #[arg(long)]
    max_genus: Option<u64>,
    /// Catalog file; defaults to the bundled extended catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Classification database path (created if absent).
    #[arg(long)]
    db: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Log rejected candidate pairs.
    #[arg(long)]
    verbose: bool,
}

const EXIT_COVERAGE: u8 = 2;
const EXIT_MALFORMED: u8 = 3;
const EXIT_DB: u8 = 4;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog, ExitCode> {
    match path {
        None => Ok(bundled_catalogs::extended()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| fail(EXIT_MALFORMED, format!("{}: {e}", p.display())))?;
            Catalog::parse(&text).map_err(|e| fail(EXIT_MALFORMED, e))
        }
    }
}

fn run_classify(args: &ClassifyArgs) -> ExitCode {
    if let Some(jobs) = args.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            // pool already initialized; proceed with existing settings
        }
    }
    let catalog = match load_catalog(&args.catalog) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let genera: Vec<u64> = match (args.genus, args.max_genus) {
        (Some(g), None) => vec![g],
        (None, Some(max)) => (2..=max).collect(),
        _ => return fail(EXIT_MALFORMED, "exactly one of --genus/--max-genus required"),
    };
    if genera.iter().any(|&g| g < 2) {
        return fail(EXIT_MALFORMED, "genus must be at least 2");
    }
    let mut db = match ClassificationDb::load(&args.db) {
        Ok(db) => db,
        Err(e) => return fail(EXIT_DB, e),
    };
    for g in genera {
        if db.complete_through() >= g {
            println!("genus {g}: already complete (nu = {})", db.nu(g));
            continue;
        }
        match classify_genus(g, &catalog, &mut db) {
            Ok((records, rejects)) => {
                if args.verbose {
                    for r in &rejects {
                        println!(
                            "REJECT {},{} {} {}",
                            r.id.order,
                            r.id.index,
                            r.signature,
                            r.reason.as_str()
                        );
                    }
                }
                for r in &records {
                    println!(
                        "genus {g}: {} [{},{}] via {}",
                        r.name, r.id.order, r.id.index, r.signature
                    );
                }
                println!("genus {g}: nu({g}) = {}", records.len());
                if let Err(e) = db.store(&args.db) {
                    return fail(EXIT_DB, e);
                }
            }
            Err(ClassifyError::Coverage(missing)) => {
                return fail(
                    EXIT_COVERAGE,
                    format!(
                        "catalog does not cover candidate orders for genus {g}: {}",
                        missing
                            .iter()
                            .map(|o| o.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                );
            }
            Err(e @ ClassifyError::DbIncomplete(..)) | Err(e @ ClassifyError::Db(_)) => {
                return fail(EXIT_DB, e);
            }
            Err(e) => return fail(EXIT_MALFORMED, e),
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Signatures { genus, order } => {
            let pairs = match genus_core::candidate_pairs(*genus) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_MALFORMED, e),
            };
            for p in pairs {
                if order.is_some_and(|o| o != p.order) {
                    continue;
                }
                println!("{} {}", p.order, p.signature);
            }
            ExitCode::SUCCESS
        }
        Command::VerifyCatalog { catalog } => {
            let cat = match load_catalog(&Some(catalog.clone())) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let report = cat.verify();
            if report.is_empty() {
                let orders = cat.manifest.covered_orders.len();
                println!(
                    "catalog OK: {} records over {orders} covered orders",
                    cat.records.len()
                );
                // spot-check a prime order lookup to exercise the index
                if let OrderLookup::Covered(rs) = cat.groups_of_order(2) {
                    let _ = rs.len();
                }
                ExitCode::SUCCESS
            } else {
                for v in &report {
                    println!("VIOLATION {v}");
                }
                fail(EXIT_MALFORMED, format!("{} violation(s)", report.len()))
            }
        }
        Command::NuTable { db } => match ClassificationDb::load(db) {
            Ok(db) => {
                print!("{}", nu_table(&db));
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_DB, e),
        },
        Command::PlotCsv { db, out } => match ClassificationDb::load(db) {
            Ok(db) => {
                if let Err(e) = std::fs::write(out, plot_csv(&db)) {
                    return fail(EXIT_MALFORMED, format!("{}: {e}", out.display()));
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_DB, e),
        },
    }
}
