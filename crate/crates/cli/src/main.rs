use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quicklex::parse::{parse_column_list, parse_fractions, parse_synthetic};
use quicklex::score::write_score_report;
use quicklex::{
    adtree_cost_bounds, epistasis_scan, generate_matrix, lex_sort, load_matrix_path, ordered_partition,
    presort_columns, run_scaling_experiment, DataMatrix, Enumerator, Error, Format, Mode,
};

#[derive(Parser)]
#[command(
    name = "quicklex",
    version,
    about = "Lexicographic ranking of categorical data by column refinement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the rows of a matrix by one column sequence.
    Sort(SortArgs),
    /// Rank every column subset or sequence up to a cardinality bound.
    Enumerate(EnumerateArgs),
    /// Score SNP sets against a phenotype column with BDeu.
    Epistasis(EpistasisArgs),
    /// Time refinement against iterated stable sort over row truncations.
    Bench(BenchArgs),
    /// Print AD-tree build time and size bounds.
    AdtreeBound(AdtreeArgs),
}

#[derive(Args)]
struct Input {
    /// Delimited text file, one record per line.
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Treat the first line as column names.
    #[arg(long)]
    header: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

impl Input {
    fn load(&self) -> quicklex::Result<DataMatrix> {
        load(&self.data, self.format, self.header)
    }
}

fn load(path: &Path, format: FormatArg, header: bool) -> quicklex::Result<DataMatrix> {
    let format = match format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Tsv => Format::Tsv,
    };
    load_matrix_path(path, format, header)
}

#[derive(Args)]
struct SortArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated column indices, most significant first.
    #[arg(long)]
    cols: String,
    #[arg(long, value_enum, default_value_t = SortEmit::Ranks)]
    emit: SortEmit,
}

#[derive(Clone, Copy, ValueEnum)]
enum SortEmit {
    /// One rank per input row.
    Ranks,
    /// One line per block: rank, then its rows.
    Order,
    /// Block sizes in rank order.
    Counts,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = ModeArg::Subsets)]
    mode: ModeArg,
    #[arg(long)]
    max_card: usize,
    #[arg(long, value_enum, default_value_t = EnumEmit::Ranks)]
    emit: EnumEmit,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Subsets,
    Sequences,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EnumEmit {
    Ranks,
    Counts,
    CountOnly,
}

#[derive(Args)]
struct EpistasisArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    pheno_col: usize,
    /// Largest SNP set size.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Equivalent sample size.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    ess: f64,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Input file; omit when using --synthetic.
    #[arg(required_unless_present = "synthetic", conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    header: bool,
    /// Uniform random matrix `m,n,arity,seed`.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long)]
    max_card: usize,
    /// Comma list, or `step..end` for step, 2*step, ... end.
    #[arg(long, default_value = "0.1..1.0")]
    fractions: String,
    /// Timed repetitions per truncation; medians are reported.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdtreeArgs {
    #[arg(long)]
    rows: u64,
    #[arg(long)]
    cols: u64,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ColumnOutOfRange { .. }
            | Error::CardinalityOutOfRange { .. }
            | Error::NonPositiveEss(_)
            | Error::BadFraction(_)
            | Error::BadPair { .. }
            | Error::BadNoise(_)
            | Error::BadArity
            | Error::PhenotypeColumnOutOfRange { .. }
            | Error::EmptySequence
            | Error::Parse { .. } => Failure::Usage(msg),
            _ => Failure::Data(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn cmd_sort(args: &SortArgs, out: &mut impl Write) -> CmdResult {
    let cols = parse_column_list(&args.cols)?;
    let d = args.input.load()?;
    let ranking = lex_sort(&d, &presort_columns(&d), &cols)?;
    match args.emit {
        SortEmit::Ranks => writeln!(out, "{}", join(ranking.ranks(), " "))?,
        SortEmit::Order => {
            let op = ordered_partition(&ranking);
            for b in 0..op.num_blocks() {
                writeln!(out, "{b}\t{}", join(op.block(b), ","))?;
            }
        }
        SortEmit::Counts => writeln!(out, "{}", join(ordered_partition(&ranking).block_sizes(), " "))?,
    }
    Ok(())
}

fn cmd_enumerate(args: &EnumerateArgs, out: &mut impl Write) -> CmdResult {
    let d = args.input.load()?;
    let q = presort_columns(&d);
    let mode = match args.mode {
        ModeArg::Subsets => Mode::Subsets,
        ModeArg::Sequences => Mode::Sequences,
    };
    let mut walk = Enumerator::new(&d, &q, mode, args.max_card)?.augmented(args.emit == EnumEmit::Counts);
    let mut written = Ok(());
    let nodes = walk.run(|node, _| {
        if written.is_err() {
            return;
        }
        written = match args.emit {
            EnumEmit::CountOnly => Ok(()),
            EnumEmit::Ranks => writeln!(out, "{}\t{}", join(node.columns, ","), join(node.ranking.ranks(), " ")),
            EnumEmit::Counts => {
                let sizes = node.partition.expect("augmented walk").block_sizes();
                writeln!(out, "{}\t{}", join(node.columns, ","), join(sizes, " "))
            }
        };
    });
    written?;
    if args.emit == EnumEmit::CountOnly {
        writeln!(out, "{nodes}")?;
    }
    Ok(())
}

fn cmd_epistasis(args: &EpistasisArgs, out: &mut impl Write) -> CmdResult {
    if !(args.ess > 0.0 && args.ess.is_finite()) {
        return Err(Error::NonPositiveEss(args.ess).into());
    }
    let d = args.input.load()?;
    let q = presort_columns(&d);
    let scan = epistasis_scan(&d, &q, args.pheno_col, args.k, args.ess, args.top)?;
    write_score_report(out, &scan.top)?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut impl Write) -> CmdResult {
    let fractions = parse_fractions(&args.fractions)?;
    let d = match (&args.synthetic, &args.data) {
        (Some(spec), _) => {
            let s = parse_synthetic(spec)?;
            generate_matrix(s.rows, &vec![s.arity; s.cols], s.seed)?
        }
        (None, Some(path)) => load(path, args.format, args.header)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let report = run_scaling_experiment(&d, args.max_card, &fractions, args.reps)?;
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            report.write_csv(&mut file)?;
            file.flush()?;
        }
        None => report.write_csv(out)?,
    }
    Ok(())
}

fn bound(x: f64) -> String {
    if x.fract() == 0.0 && x < 1e15 {
        format!("{}", x as u64)
    } else {
        format!("{x:e}")
    }
}

fn cmd_adtree(args: &AdtreeArgs, out: &mut impl Write) -> CmdResult {
    if args.rows == 0 || args.cols == 0 {
        return Err(Failure::Usage("--rows and --cols must be positive".into()));
    }
    let (time, space) = adtree_cost_bounds(args.rows, args.cols);
    writeln!(out, "time_bound={} space_bound={}", bound(time), bound(space))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Sort(a) => cmd_sort(a, &mut out),
        Command::Enumerate(a) => cmd_enumerate(a, &mut out),
        Command::Epistasis(a) => cmd_epistasis(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
        Command::AdtreeBound(a) => cmd_adtree(a, &mut out),
    }
    .and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("quicklex: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("quicklex: {msg}");
            ExitCode::from(1)
        }
    }
}
