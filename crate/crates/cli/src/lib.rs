//! The `kronrank` command line tool: file formats and subcommands over the
//! `kronrank` library.
//!
//! Exit codes: 0 success, 1 verification failed (witness on stdout),
//! 2 invalid input or parameters, 3 budget exceeded.

pub mod formats;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fixedbitset::FixedBitSet;
use kronrank::algebraic::{algebraic_family, algebraic_product_cover, asymptotic_params};
use kronrank::boolmat::kronecker_with_limit;
use kronrank::bounds::{
    exact_boolean_rank, isolation_number, kron_lower_bound, mu, LowerBound, RankOptions, RankStatus, DEFAULT_ISOLATION_BUDGET,
    DEFAULT_RANK_BUDGET,
};
use kronrank::cover::{
    check_q_covering, verify_cover, verify_kron_hypotheses, CoverFailure, KronFailure, MemberCoverFailure, QCoverOptions,
};
use kronrank::crown::{c4_triple, c5_triple, canonical_family, crown_matrix, gap_cover, sigma, sigma_big, triple_cover};
use kronrank::spanoid::{
    check_product_bound, spanoid_rank, MatrixSpanoid, ProductBoundFailure, ProductSpanoid, RankSearch, RuleSpanoid, Spanoid,
    SpanoidRank,
};
use kronrank::{BoolMatrix, Cover, MatrixFamily, Verdict, DEFAULT_MATERIALIZATION_LIMIT};
use num_bigint::BigUint;
use thiserror::Error;

use crate::formats::{ParseError, SpanoidSource};

pub const LIMIT_ENV: &str = "KRONRANK_MATERIALIZATION_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failed = 1,
    Invalid = 2,
    Budget = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Core(#[from] kronrank::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Core(kronrank::Error::BudgetExceeded { .. }) => Exit::Budget,
            _ => Exit::Invalid,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "kronrank", version, about = "Boolean rank and rectangle covers of Kronecker products")]
pub struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest number of entries a materialized matrix may have.
    #[arg(long, global = true, env = LIMIT_ENV)]
    pub materialization_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print sigma(n), the smallest k with n <= C(k, ceil(k/2)).
    Sigma { n: String },
    /// Write the crown matrix C_n.
    Crown {
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Write the Kronecker product of two matrices.
    Kron {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Build covers and matrix families.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Check covers and families.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Boolean rank.
    #[command(subcommand)]
    Rank(RankCommand),
    /// Lower bounds.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Largest isolation set.
    Isolation {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ISOLATION_BUDGET)]
        budget: u64,
    },
    /// Ones over the largest all-ones rectangle.
    Mu { matrix: PathBuf },
    /// Spanoid rank and product bounds.
    #[command(subcommand)]
    Spanoid(SpanoidCommand),
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Cover of C_n by the first n ceil(k/2)-subsets of [k], k = sigma(n).
    Canonical {
        n: usize,
        /// Write the subset family instead of the cover.
        #[arg(long)]
        sets: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Three matrices, every two covering C_n for n = C(k, ceil(k/2)).
    Triple {
        k: usize,
        r: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The (2,2,3)-coverable triple for C_5.
    C5 {
        #[command(flatten)]
        out: Output,
    },
    /// A (2,2,2)-coverable triple for C_4.
    C4 {
        #[command(flatten)]
        out: Output,
    },
    /// Cover of C_n x C_m with fewer than sigma(n) sigma(m) rectangles.
    Gap {
        n: usize,
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The family of p - 1 matrices, every q of which cover C_{p^q}.
    Algebraic {
        d: usize,
        q: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Parameter report for a cover of C_n x C_n with O(k log k)
    /// rectangles, and the cover itself when it can be built.
    Asymptotic {
        n: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Check that a cover covers a matrix exactly.
    Cover { matrix: PathBuf, cover: PathBuf },
    /// Check the Kronecker hypotheses for (A, M, B, N) without forming A x B.
    Kron { a: PathBuf, m: PathBuf, b: PathBuf, n: PathBuf },
    /// Check that every q members of a family cover a matrix.
    Qcover {
        matrix: PathBuf,
        family: PathBuf,
        q: usize,
        /// Largest number of q-subsets checked; above it they are sampled.
        #[arg(long, default_value_t = QCoverOptions::default().budget)]
        budget: u64,
        /// Seed of the sampler.
        #[arg(long, default_value_t = QCoverOptions::default().seed)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RankCommand {
    /// Exact Boolean rank by branch and bound over maximal rectangles.
    Exact {
        matrix: PathBuf,
        /// Stop once every cover smaller than this is refuted.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RANK_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// Lower bounds on the Boolean rank of A x B.
    Lower {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANK_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
pub struct SpanoidSearch {
    /// Largest spanning set tried.
    #[arg(long, default_value_t = RankSearch::default().max_size)]
    pub max_size: usize,
    #[arg(long, default_value_t = RankSearch::default().budget)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum SpanoidCommand {
    /// Smallest spanning set.
    Rank {
        file: PathBuf,
        #[command(flatten)]
        search: SpanoidSearch,
    },
    /// Smallest spanning set of the product spanoid.
    ProductRank {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        search: SpanoidSearch,
    },
    /// Check the product bound sum |M_t| |N_t| for given set families.
    Bound { first: PathBuf, second: PathBuf, m_sets: PathBuf, n_sets: PathBuf },
}

/// A spanoid loaded from a file.
#[derive(Debug, Clone)]
pub enum LoadedSpanoid {
    Rules(RuleSpanoid),
    Matrix(MatrixSpanoid),
}

impl Spanoid for LoadedSpanoid {
    fn universe_size(&self) -> usize {
        match self {
            LoadedSpanoid::Rules(s) => s.universe_size(),
            LoadedSpanoid::Matrix(s) => s.universe_size(),
        }
    }

    fn infers(&self, t: &FixedBitSet, i: usize) -> bool {
        match self {
            LoadedSpanoid::Rules(s) => s.infers(t, i),
            LoadedSpanoid::Matrix(s) => s.infers(t, i),
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, ParseError>) -> CliResult<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn load_matrix(path: &Path) -> CliResult<BoolMatrix> {
    load(path, formats::read_matrix)
}

fn load_family(path: &Path) -> CliResult<MatrixFamily> {
    load(path, formats::read_family)
}

/// Matrix references resolve against the spanoid file's directory.
pub fn load_spanoid(path: &Path) -> CliResult<LoadedSpanoid> {
    match load(path, formats::read_spanoid)? {
        SpanoidSource::Rules(r) => Ok(LoadedSpanoid::Rules(r)),
        SpanoidSource::Matrix(m) => {
            let base = path.parent().unwrap_or(Path::new("."));
            let a = load_matrix(&base.join(m))?;
            Ok(LoadedSpanoid::Matrix(MatrixSpanoid::new(&a)?))
        }
    }
}

fn parse_big(s: &str) -> CliResult<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Usage(format!("`{s}` is not a nonnegative decimal integer")));
    }
    Ok(s.parse().expect("digits"))
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, out: &Output, text: &str) -> CliResult<()> {
        match &out.output {
            Some(path) => {
                fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
            }
            None => self.print(text),
        }
    }

    fn print(&mut self, text: &str) -> CliResult<()> {
        self.stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: String::from("<stdout>"), source })
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.stderr, "{text}");
    }
}

fn cover_failure(f: &CoverFailure) -> String {
    match f {
        CoverFailure::RectangleHitsZero { rect, row, col } => {
            format!("FAILS rectangle {rect} contains the zero entry ({row}, {col})\n")
        }
        CoverFailure::Uncovered { row, col } => format!("FAILS entry ({row}, {col}) is not covered\n"),
    }
}

fn kron_failure(f: &KronFailure) -> String {
    match f {
        KronFailure::FamilyDoesNotCoverA(MemberCoverFailure::Excess { member, row, col }) => {
            format!("FAILS member {member} of M has a one at the zero entry ({row}, {col}) of A\n")
        }
        KronFailure::FamilyDoesNotCoverA(MemberCoverFailure::Uncovered { row, col }) => {
            format!("FAILS entry ({row}, {col}) of A is in no member of M\n")
        }
        KronFailure::SelectionFails { row, col, selected, b_row, b_col } => {
            let sel: Vec<String> = selected.iter().map(usize::to_string).collect();
            format!(
                "FAILS at entry ({row}, {col}) of A the members {{{}}} of N miss entry ({b_row}, {b_col}) of B\n",
                sel.join(",")
            )
        }
    }
}

fn join(v: impl IntoIterator<Item = usize>) -> String {
    let parts: Vec<String> = v.into_iter().map(|x| x.to_string()).collect();
    if parts.is_empty() {
        String::from("-")
    } else {
        parts.join(",")
    }
}

/// Parse `argv`, run the command and return its exit code, writing
/// certificates to `stdout` and diagnostics to `stderr`.
pub fn main_with(argv: impl IntoIterator<Item = String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Invalid } else { Exit::Success };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    match run(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            io.note(&format!("error: {e}"));
            e.exit()
        }
    }
}

fn run(cli: Cli, io: &mut Io<'_>) -> CliResult<Exit> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage(String::from("--threads must be positive")));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let limit = cli.materialization_limit.unwrap_or(DEFAULT_MATERIALIZATION_LIMIT);
    match cli.command {
        Command::Sigma { n } => {
            let n = parse_big(&n)?;
            io.print(&format!("{}\n", sigma_big(&n)))?;
            Ok(Exit::Success)
        }
        Command::Crown { n, out } => {
            guard_square(n, limit)?;
            io.emit(&out, &formats::write_matrix(&crown_matrix(n)))?;
            Ok(Exit::Success)
        }
        Command::Kron { a, b, out } => {
            let p = kronecker_with_limit(&load_matrix(&a)?, &load_matrix(&b)?, limit)?;
            io.emit(&out, &formats::write_matrix(&p))?;
            Ok(Exit::Success)
        }
        Command::Cover(c) => run_cover(c, limit, io),
        Command::Verify(v) => run_verify(v, io),
        Command::Rank(RankCommand::Exact { matrix, limit: rank_limit, budget }) => {
            let a = load_matrix(&matrix)?;
            let cert = exact_boolean_rank(&a, RankOptions { limit: rank_limit, budget })?;
            io.print(&formats::write_certificate(&cert.upper, std::slice::from_ref(&cert.lower)))?;
            Ok(match cert.status {
                RankStatus::Exact => {
                    io.note(&format!("rank = {}", cert.upper.len()));
                    Exit::Success
                }
                RankStatus::LimitReached => {
                    io.note(&format!("rank >= {}", cert.lower.value()));
                    Exit::Success
                }
                RankStatus::BudgetExceeded => {
                    io.note(&format!("budget exceeded: {} <= rank <= {}", cert.lower.value(), cert.upper.len()));
                    Exit::Budget
                }
            })
        }
        Command::Bound(BoundCommand::Lower { a, b, budget }) => {
            let (a, b) = (load_matrix(&a)?, load_matrix(&b)?);
            let lb = kron_lower_bound(&a, &b, RankOptions { limit: None, budget })?;
            io.print(&format!("LOWER kind=mu value={}\n", lb.mu_bound))?;
            io.print(&format!("LOWER kind=isolation value={}\n", lb.isolation_bound))?;
            io.note(&format!(
                "mu(A) = {}, mu(B) = {}, R_B(A) >= {}, R_B(B) >= {}, i(A) >= {}, i(B) >= {}",
                lb.mu_a.value,
                lb.mu_b.value,
                lb.rank_a,
                lb.rank_b,
                lb.isolation_a.len(),
                lb.isolation_b.len()
            ));
            Ok(Exit::Success)
        }
        Command::Isolation { matrix, budget } => {
            let a = load_matrix(&matrix)?;
            let iso = isolation_number(&a, budget);
            let mut text = format!("ISOLATION size={} exact={}\n", iso.size(), if iso.exact { "yes" } else { "no" });
            for (i, j) in &iso.witness {
                text.push_str(&format!("E {i} {j}\n"));
            }
            text.push_str(&formats::lower_line(&LowerBound::Isolation(iso.witness.clone())));
            io.print(&text)?;
            Ok(if iso.exact { Exit::Success } else { Exit::Budget })
        }
        Command::Mu { matrix } => {
            let a = load_matrix(&matrix)?;
            let m = mu(&a)?;
            io.print(&format!(
                "MU value={} ones={} max_area={}\nR {} C {}\n",
                m.value,
                m.ones,
                m.max_area,
                join(m.witness.rows().iter().copied()),
                join(m.witness.cols().iter().copied())
            ))?;
            io.print(&formats::lower_line(&LowerBound::Mu(m.value)))?;
            Ok(Exit::Success)
        }
        Command::Spanoid(s) => run_spanoid(s, io),
    }
}

fn guard_square(n: usize, limit: u64) -> CliResult<()> {
    match (n as u128).checked_mul(n as u128) {
        Some(e) if e <= limit as u128 => Ok(()),
        _ => Err(CliError::Core(kronrank::Error::TooLarge { entries: (n as u128).saturating_mul(n as u128), limit })),
    }
}

fn run_cover(c: CoverCommand, limit: u64, io: &mut Io<'_>) -> CliResult<Exit> {
    match c {
        CoverCommand::Canonical { n, sets, out } => {
            let fam = canonical_family(sigma(n as u64), n)?;
            let text = if sets { formats::write_subset_family(&fam) } else { formats::write_cover(&fam.cover()) };
            io.emit(&out, &text)?;
        }
        CoverCommand::Triple { k, r, out } => {
            let t = triple_cover(k, r, None)?;
            io.note(&format!("C_{} with member ranks {r}, {}, {}", t.dims().0, k - r, k - r));
            io.emit(&out, &formats::write_family(&t))?;
        }
        CoverCommand::C5 { out } => io.emit(&out, &formats::write_family(&c5_triple()))?,
        CoverCommand::C4 { out } => io.emit(&out, &formats::write_family(&c4_triple()))?,
        CoverCommand::Gap { n, m, out } => {
            let kc = gap_cover(n, m)?;
            io.note(&format!("{} rectangles, sigma(n) sigma(m) = {}", kc.len(), sigma(n as u64) * sigma(m as u64)));
            io.emit(&out, &formats::write_cover(&kc.to_cover()))?;
        }
        CoverCommand::Algebraic { d, q, out } => {
            let (params, fam) = algebraic_family(d, q, limit)?;
            io.note(&format!("p = {}, n = {}, k = {}, {} members", params.p, params.n, params.k, fam.len()));
            io.emit(&out, &formats::write_family(&fam))?;
        }
        CoverCommand::Asymptotic { n, out } => {
            let n = parse_big(&n)?;
            let params = asymptotic_params(&n, limit)?;
            io.print(&format!("{params}\n"))?;
            for reason in &params.infeasible {
                io.note(&format!("infeasible: {reason}"));
            }
            if params.feasible() {
                let side = usize::try_from(&n).map_err(|_| CliError::Usage(String::from("n does not fit in memory")))?;
                let c = algebraic_product_cover(params.d, params.q as usize, params.s as usize, Some(side), limit)?;
                io.note(&format!("{} rectangles", c.cover.len()));
                io.emit(&out, &formats::write_cover(&c.cover.to_cover()))?;
            }
        }
    }
    Ok(Exit::Success)
}

fn run_verify(v: VerifyCommand, io: &mut Io<'_>) -> CliResult<Exit> {
    match v {
        VerifyCommand::Cover { matrix, cover } => {
            let a = load_matrix(&matrix)?;
            let c: Cover = load(&cover, formats::read_cover)?;
            match verify_cover(&a, &c)? {
                Verdict::Holds => {
                    io.print(&format!("HOLDS size={}\n", c.len()))?;
                    Ok(Exit::Success)
                }
                Verdict::Fails(w) => {
                    io.print(&cover_failure(&w))?;
                    Ok(Exit::Failed)
                }
            }
        }
        VerifyCommand::Kron { a, m, b, n } => {
            let (a, b) = (load_matrix(&a)?, load_matrix(&b)?);
            let (m, n) = (load_family(&m)?, load_family(&n)?);
            match verify_kron_hypotheses(&a, &m, &b, &n)? {
                Verdict::Holds => {
                    let size: usize = m
                        .decomposition_sizes()
                        .iter()
                        .zip(n.decomposition_sizes())
                        .map(|(x, y)| x.unwrap_or(0) * y.unwrap_or(0))
                        .sum();
                    io.print(&format!("HOLDS size={size}\n"))?;
                    Ok(Exit::Success)
                }
                Verdict::Fails(w) => {
                    io.print(&kron_failure(&w))?;
                    Ok(Exit::Failed)
                }
            }
        }
        VerifyCommand::Qcover { matrix, family, q, budget, seed } => {
            let a = load_matrix(&matrix)?;
            let fam = load_family(&family)?;
            let r = check_q_covering(&a, &fam, q, QCoverOptions { budget, seed })?;
            match (&r.verdict, r.exhaustive) {
                (Verdict::Fails(w), _) => {
                    io.print(&format!("FAILS members {} do not cover\n", join(w.iter().copied())))?;
                    Ok(Exit::Failed)
                }
                (Verdict::Holds, true) => {
                    io.print(&format!("HOLDS checked={}\n", r.checked))?;
                    Ok(Exit::Success)
                }
                (Verdict::Holds, false) => {
                    io.print(&format!("SAMPLED checked={}\n", r.checked))?;
                    io.note("budget exceeded: no failing subset among the sampled ones");
                    Ok(Exit::Budget)
                }
            }
        }
    }
}

fn rank_line(r: SpanoidRank, show: impl Fn(usize) -> String) -> (String, Exit) {
    match r {
        SpanoidRank::Exact { rank, witness } => {
            let w: Vec<String> = witness.into_iter().map(show).collect();
            let w = if w.is_empty() { String::from("-") } else { w.join(",") };
            (format!("RANK {rank}\nWITNESS {w}\n"), Exit::Success)
        }
        SpanoidRank::Above(k) => (format!("RANK >{k}\n"), Exit::Budget),
    }
}

fn run_spanoid(s: SpanoidCommand, io: &mut Io<'_>) -> CliResult<Exit> {
    match s {
        SpanoidCommand::Rank { file, search } => {
            let sp = load_spanoid(&file)?;
            let opts = RankSearch { max_size: search.max_size, budget: search.budget, ..RankSearch::default() };
            let (text, code) = rank_line(spanoid_rank(&sp, opts)?, |e| e.to_string());
            io.print(&text)?;
            Ok(code)
        }
        SpanoidCommand::ProductRank { first, second, search } => {
            let (s1, s2) = (load_spanoid(&first)?, load_spanoid(&second)?);
            let u2 = s2.universe_size();
            let p = ProductSpanoid::new(&s1, &s2);
            let opts = RankSearch { max_size: search.max_size, budget: search.budget, ..RankSearch::default() };
            let (text, code) = rank_line(spanoid_rank(&p, opts)?, |e| format!("{}:{}", e / u2, e % u2));
            io.print(&text)?;
            Ok(code)
        }
        SpanoidCommand::Bound { first, second, m_sets, n_sets } => {
            let (s1, s2) = (load_spanoid(&first)?, load_spanoid(&second)?);
            let m = load(&m_sets, formats::read_sets)?;
            let n = load(&n_sets, formats::read_sets)?;
            match check_product_bound(&s1, &s2, &m, &n)? {
                Ok(bound) => {
                    io.print(&format!("BOUND {bound}\n"))?;
                    Ok(Exit::Success)
                }
                Err(ProductBoundFailure::Hypothesis { element }) => {
                    io.print(&format!("FAILS the N_t with {element} in M_t do not span the second universe\n"))?;
                    Ok(Exit::Failed)
                }
                Err(ProductBoundFailure::NotSpanning) => {
                    io.print("FAILS the union of M_t x N_t does not span the product\n")?;
                    Ok(Exit::Failed)
                }
            }
        }
    }
}
