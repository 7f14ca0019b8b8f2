use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dyadic_lattice::lattice_core::invariants_report;
use dyadic_lattice::*;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "kuniv",
    version,
    about = "Universality and representation of integral lattices over unramified dyadic fields"
)]
struct Cli {
    /// Residue degree f of the field (1 gives Q_2).
    #[arg(long, global = true, default_value_t = 1)]
    field_f: i64,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 12)]
    precision: i64,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide (classic) k-universality of a lattice.
    Classify {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        classic: bool,
        /// Use the test-lattice oracle instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide whether `--lattice` represents `--ell`.
    Represents {
        #[arg(long)]
        ell: String,
        #[arg(long)]
        lattice: String,
        /// Only evaluate the lower-type conditions.
        #[arg(long, conflicts_with = "brute_force")]
        lower_type: bool,
        /// Congruence search on the Gram matrices.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = 9)]
        modulus_exp: u32,
    },
    /// Jordan invariants and the d_i / Delta_i tables.
    Invariants {
        #[arg(long)]
        lattice: String,
    },
    /// Print a family of lattices, one JSON object per line.
    Enumerate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Print the k-dimensional test lattices of the oracle instead.
        #[arg(long)]
        test_lattices: bool,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Compare the closed form with the oracle over a family.
    Crosscheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Print only the summary line.
        #[arg(long)]
        summary_only: bool,
    },
    /// Hilbert symbol (a, b).
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    classic: bool,
    #[arg(long, default_value_t = 3)]
    max_components: usize,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    scale_min: i32,
    #[arg(long, default_value_t = 3)]
    scale_max: i32,
    /// Total dimension bound; defaults to 5 for k=1 and k+5 otherwise.
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, default_value_t = 4)]
    max_component_dim: usize,
    #[arg(long, default_value_t = 5_000_000)]
    max_instances: usize,
    /// Draw this many members at random instead of the whole family.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl FamilyArgs {
    fn spec(&self, k: usize) -> FamilySpec {
        FamilySpec {
            max_components: self.max_components,
            scale_min: self.scale_min,
            scale_max: self.scale_max,
            max_dim: self.max_dim.unwrap_or(if k <= 1 { 5 } else { k + 5 }),
            max_component_dim: self.max_component_dim,
            classic: self.classic,
            max_instances: self.max_instances,
        }
    }

    fn lattices<'a>(
        &self,
        k: usize,
        fd: &'a Field,
    ) -> Result<Box<dyn Iterator<Item = JordanLattice> + 'a>> {
        let spec = self.spec(k);
        Ok(match self.sample {
            Some(n) => Box::new(sample_family(&spec, n, self.seed, fd).into_iter()),
            None => Box::new(enumerate_family(&spec, fd)?),
        })
    }
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn lattice_json(text: &str) -> Result<LatticeJson> {
    LatticeJson::parse(&read_arg(text)?)
}

fn emit(out: &mut impl Write, v: &Value) -> io::Result<()> {
    writeln!(out, "{v}")
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let fd = Field::new(cli.field_f, cli.precision)?;
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Guard(format!("thread pool: {e}")))?;
    }
    let io_err = |e: io::Error| Error::Guard(format!("output: {e}"));
    match cli.command {
        Command::Classify { lattice, k, classic, oracle } => {
            let l = lattice_json(&lattice)?.to_lattice(&fd)?;
            let v = if oracle {
                oracle_k_universal(&l, k, classic, &fd)?
            } else {
                classify(&l, k, classic, &fd)?
            };
            emit(out, &v.to_json(&fd)).map_err(io_err)?;
        }
        Command::Represents { ell, lattice, lower_type: lt, brute_force, modulus_exp } => {
            let small = lattice_json(&ell)?;
            let big = lattice_json(&lattice)?;
            let v = if brute_force {
                brute_force_represents(
                    &small.gram_matrix(&fd)?,
                    &big.gram_matrix(&fd)?,
                    modulus_exp,
                    &BruteOptions::default(),
                    &fd,
                )?
            } else {
                let (s, b) = (small.to_lattice(&fd)?, big.to_lattice(&fd)?);
                if lt {
                    lower_type(&s, &b, &fd)
                } else {
                    represents_lattice(&s, &b, &fd)
                }
            };
            emit(out, &v.to_json(&fd)).map_err(io_err)?;
        }
        Command::Invariants { lattice } => {
            let l = lattice_json(&lattice)?.to_lattice(&fd)?;
            emit(out, &invariants_report(&l, &fd)).map_err(io_err)?;
        }
        Command::Enumerate { family, test_lattices, k } => {
            if test_lattices {
                let tests = Oracle::new(k, family.classic, &fd)?;
                for l in tests.test_lattices() {
                    emit(out, &l.to_json(&fd)).map_err(io_err)?;
                }
            } else {
                for l in family.lattices(k, &fd)? {
                    emit(out, &l.to_json(&fd)).map_err(io_err)?;
                }
            }
        }
        Command::Crosscheck { family, k, summary_only } => {
            let lattices = family.lattices(k, &fd)?;
            let mut failure = None;
            let report = crosscheck(lattices, k, family.classic, &fd, |r| {
                if !summary_only && failure.is_none() {
                    failure = emit(out, &r.to_json(&fd)).err();
                }
            })?;
            if let Some(e) = failure {
                return Err(io_err(e));
            }
            emit(out, &json!({ "summary": report.to_json(&fd) })).map_err(io_err)?;
        }
        Command::Hilbert { a, b } => {
            let s = fd.hilbert(&fd.parse(&a)?, &fd.parse(&b)?)?;
            emit(out, &json!({ "symbol": s })).map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let code = match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = emit(&mut out, &json!({ "error": e.to_string() }));
            eprintln!("kuniv: {e}");
            ExitCode::from(1)
        }
    };
    let _ = out.flush();
    code
}
