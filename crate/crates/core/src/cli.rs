//! Command-line surface: solving, checking, decomposing, validating,
//! reporting stats, and generating instances.
//!
//! Exit codes: 0 success (or: exists / check passed), 1 does-not-exist or
//! check/validation failed, 2 input error, 3 method inapplicable, 4
//! enumeration guard exceeded. Diagnostics go to stderr; results go to
//! stdout as JSON documents (or a bare number for `--count`).

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::brute::{brute_nash, pareto_filter, strong_refutation, BruteError, Guard};
use crate::decomp::{
    join_tree, join_tree_to_hd, td_to_hd, tree_decomposition_heuristic,
    validate_hypertree_decomposition, validate_join_tree, validate_tree_decomposition, DecompError,
    JoinTree,
};
use crate::fileio::{
    parse_cnf_dimacs, parse_decomp, parse_game, parse_profile, parse_r2qbf, serialize_decomp,
    serialize_equilibria, serialize_game, Decomp, EquilibriaDoc, IoError,
};
use crate::game::{Action, AnyGame, Game, GameError, GnfGame, Player, Profile};
use crate::generators::{
    gen_friends, gen_qbf_acyclic, gen_qbf_challenger, gen_random, gen_sat_acyclic,
    gen_sat_clausevar, gen_tree_sat, pad_r2qbf, FriendsVariant, GenError, RandomGameParams,
};
use crate::solver::{
    solve_acyclic, solve_auto, solve_hypertree, EquilibriumKind, EquilibriumSet, FilteredJoinTree,
    SolveError, SolveLimits,
};
use crate::strong::{
    is_nash_check, is_pareto_check, strong_check_acyclic, strong_exists_acyclic, CoalitionWitness,
    StrongError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

const GUARD_ENV: &str = "PURENASH_GUARD";

#[derive(Parser)]
#[command(
    name = "purenash",
    version,
    about = "Pure Nash, Pareto, and strong equilibria of strategic games"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Nash,
    Pareto,
    Strong,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Acyclic,
    Hypertree,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecompKind {
    Jointree,
    Tree,
    Hypertree,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute equilibria of a game ("-" or no path reads stdin).
    Solve {
        game: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nash")]
        mode: Mode,
        /// Emit every equilibrium (the default selector).
        #[arg(long)]
        all: bool,
        /// Emit one equilibrium chosen by the selection walk.
        #[arg(long)]
        one: bool,
        /// Print only the number of equilibria.
        #[arg(long)]
        count: bool,
        /// Exit 0 when an equilibrium exists, 1 otherwise.
        #[arg(long)]
        exists: bool,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Decomposition file used by --method hypertree.
        #[arg(long)]
        decomp: Option<PathBuf>,
        /// Player whose payoff the selection walk maximizes first.
        #[arg(long)]
        root: Option<String>,
        /// Profile-enumeration guard (default 1000000 or $PURENASH_GUARD).
        #[arg(long)]
        guard: Option<u64>,
    },
    /// Check one global profile against an equilibrium notion.
    Check {
        game: PathBuf,
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "nash")]
        mode: Mode,
        #[arg(long)]
        guard: Option<u64>,
    },
    /// Build a decomposition of the game's interaction structure.
    Decompose {
        game: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: DecompKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a decomposition file against a game.
    Validate { game: PathBuf, decomp: PathBuf },
    /// Size, intricacy, acyclicity, and heuristic widths.
    Stats { game: Option<PathBuf> },
    /// Generate a game instance.
    Gen {
        #[command(subcommand)]
        kind: GenCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The five-player evening-planning fixture.
    Friends,
    /// The fixture extended with Laura (cyclic hypergraph, width 2).
    FriendsPrime,
    /// Clause/variable game of a DIMACS CNF.
    Sat31 { cnf: Option<PathBuf> },
    /// Tester/helper game of a DIMACS CNF (acyclic structure).
    Sat32 { cnf: Option<PathBuf> },
    /// Challenger game of an exists/forall formula (pads the matrix).
    Qbf37 {
        qbf: Option<PathBuf>,
        /// Build the base game without the duplicator player.
        #[arg(long)]
        no_duplicator: bool,
    },
    /// Tester/helper game of an exists/forall formula (acyclic structure).
    Qbf38 { qbf: Option<PathBuf> },
    /// Tree-of-clauses game of a DIMACS CNF (pads the clause count).
    Treesat { cnf: Option<PathBuf> },
    /// Seeded random game.
    Random {
        #[arg(long, default_value_t = 4)]
        players: usize,
        #[arg(long, default_value_t = 2)]
        max_actions: usize,
        #[arg(long, default_value_t = 2)]
        max_neigh: usize,
        #[arg(long, default_value_t = 0)]
        payoff_min: i64,
        #[arg(long, default_value_t = 3)]
        payoff_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Inapplicable(String),
    GuardExceeded(String),
    No,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Inapplicable(_) => EXIT_INAPPLICABLE,
            Failure::GuardExceeded(_) => EXIT_GUARD,
            Failure::No => EXIT_NO,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Input(m) | Failure::Inapplicable(m) | Failure::GuardExceeded(m) => Some(m),
            Failure::No => None,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<BruteError> for Failure {
    fn from(e: BruteError) -> Failure {
        match e {
            BruteError::GuardExceeded { .. } | BruteError::Overflow => {
                Failure::GuardExceeded(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::Cyclic => Failure::Inapplicable(e.to_string()),
            SolveError::GuardExceeded { .. } | SolveError::CountOverflow => {
                Failure::GuardExceeded(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<StrongError> for Failure {
    fn from(e: StrongError) -> Failure {
        match e {
            StrongError::Solve(inner) => inner.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

/// Runs the command line against explicit streams and returns the exit code.
pub fn cli_main(
    args: &[String],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
            return code;
        }
    };
    match run(cli, stdin, stdout) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            if let Some(msg) = failure.message() {
                let _ = writeln!(stderr, "error: {msg}");
            }
            failure.code()
        }
    }
}

fn load_bytes(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            Ok(std::fs::read(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?)
        }
        _ => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn load_game(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<AnyGame, Failure> {
    let bytes = load_bytes(path, stdin)?;
    Ok(parse_game(&bytes)?)
}

fn guard_from(flag: Option<u64>) -> Guard {
    let max_profiles = flag
        .or_else(|| std::env::var(GUARD_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(Guard::default().max_profiles);
    Guard { max_profiles }
}

fn limits_from(guard: &Guard) -> SolveLimits {
    SolveLimits {
        max_tuples: guard.max_profiles,
    }
}

fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Solve {
            game,
            mode,
            all,
            one,
            count,
            exists,
            method,
            decomp,
            root,
            guard,
        } => {
            let selector = match (all, one, count, exists) {
                (_, false, false, false) => Selector::All,
                (false, true, false, false) => Selector::One,
                (false, false, true, false) => Selector::Count,
                (false, false, false, true) => Selector::Exists,
                _ => {
                    return Err(Failure::Input(
                        "choose at most one of --all, --one, --count, --exists".into(),
                    ))
                }
            };
            let any = load_game(&game, stdin)?;
            let guard = guard_from(guard);
            let decomp = match decomp {
                Some(path) => {
                    let bytes = std::fs::read(&path)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Some(parse_decomp(&bytes, any.player_names())?)
                }
                None => None,
            };
            let root = match root {
                Some(name) => Some(any.player_by_name(&name).ok_or_else(|| {
                    Failure::Input(format!("unknown player {name:?} for --root"))
                })?),
                None => None,
            };
            solve_cmd(&any, mode, selector, method, decomp, root, &guard, stdout)
        }
        Cmd::Check {
            game,
            profile,
            mode,
            guard,
        } => {
            let any = load_game(&Some(game), stdin)?;
            let bytes = load_bytes(&Some(profile), stdin)?;
            let x = parse_profile(&bytes, &any)?;
            if !x.is_global(any.player_count()) {
                return Err(Failure::Input("profile is not global".into()));
            }
            check_cmd(&any, &x, mode, &guard_from(guard), stdout)
        }
        Cmd::Decompose { game, kind, out } => {
            let any = load_game(&game, stdin)?;
            let result = match kind {
                DecompKind::Jointree => {
                    let h = any.dependency_hypergraph();
                    match join_tree(&h) {
                        Some(jt) => Decomp::JoinTree(jt),
                        None => {
                            return Err(Failure::Inapplicable(
                                "dependency hypergraph is cyclic; no join tree exists".into(),
                            ))
                        }
                    }
                }
                DecompKind::Tree => {
                    Decomp::Tree(tree_decomposition_heuristic(&any.dependency_graph()))
                }
                DecompKind::Hypertree => {
                    let h = any.dependency_hypergraph();
                    match join_tree(&h) {
                        Some(jt) => Decomp::Hypertree(join_tree_to_hd(&h, &jt)),
                        None => {
                            let td = tree_decomposition_heuristic(&any.dependency_graph());
                            Decomp::Hypertree(td_to_hd(&any, &td)?)
                        }
                    }
                }
            };
            let text = serialize_decomp(&result, any.player_names());
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => write!(stdout, "{text}")?,
            }
            Ok(())
        }
        Cmd::Validate { game, decomp } => {
            let any = load_game(&Some(game), stdin)?;
            let bytes = load_bytes(&Some(decomp), stdin)?;
            let parsed = parse_decomp(&bytes, any.player_names())?;
            validate_cmd(&any, &parsed, stdout)
        }
        Cmd::Stats { game } => {
            let any = load_game(&game, stdin)?;
            stats_cmd(&any, stdout)
        }
        Cmd::Gen { kind } => {
            let game = match kind {
                GenCmd::Friends => AnyGame::Gnf(gen_friends(FriendsVariant::Base)),
                GenCmd::FriendsPrime => AnyGame::Gnf(gen_friends(FriendsVariant::Prime)),
                GenCmd::Sat31 { cnf } => {
                    let phi = parse_cnf_dimacs(&load_bytes(&cnf, stdin)?)?;
                    AnyGame::Gnf(gen_sat_clausevar(&phi)?)
                }
                GenCmd::Sat32 { cnf } => {
                    let phi = parse_cnf_dimacs(&load_bytes(&cnf, stdin)?)?;
                    AnyGame::Gnf(gen_sat_acyclic(&phi)?)
                }
                GenCmd::Qbf37 { qbf, no_duplicator } => {
                    let xi = parse_r2qbf(&load_bytes(&qbf, stdin)?)?;
                    let padded = pad_r2qbf(&xi)?;
                    AnyGame::Gnf(gen_qbf_challenger(&padded, !no_duplicator)?)
                }
                GenCmd::Qbf38 { qbf } => {
                    let xi = parse_r2qbf(&load_bytes(&qbf, stdin)?)?;
                    AnyGame::Gnf(gen_qbf_acyclic(&xi)?)
                }
                GenCmd::Treesat { cnf } => {
                    let phi = parse_cnf_dimacs(&load_bytes(&cnf, stdin)?)?;
                    AnyGame::Gnf(gen_tree_sat(&phi)?)
                }
                GenCmd::Random {
                    players,
                    max_actions,
                    max_neigh,
                    payoff_min,
                    payoff_max,
                    seed,
                } => AnyGame::Gnf(gen_random(&RandomGameParams {
                    seed,
                    players,
                    max_actions,
                    max_neigh,
                    payoff_min,
                    payoff_max,
                })),
            };
            write!(stdout, "{}", serialize_game(&game))?;
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Selector {
    All,
    One,
    Count,
    Exists,
}

/// How the Nash equilibria of a game are obtained under a method choice.
enum NashSource {
    Tree(FilteredJoinTree),
    Set(EquilibriumSet),
}

fn build_source(
    any: &AnyGame,
    method: Method,
    decomp: Option<Decomp>,
    guard: &Guard,
) -> Result<NashSource, Failure> {
    let limits = limits_from(guard);
    match (any, method) {
        (_, Method::Brute) => Ok(NashSource::Set(brute_nash(any, guard)?)),
        (AnyGame::Snf(_), Method::Auto) => Ok(NashSource::Set(brute_nash(any, guard)?)),
        (AnyGame::Snf(_), _) => Err(Failure::Inapplicable(
            "structural methods need a graphical-form game; use --method brute".into(),
        )),
        (AnyGame::Gnf(g), Method::Acyclic) => Ok(NashSource::Tree(solve_acyclic(g)?)),
        (AnyGame::Gnf(g), Method::Hypertree) => {
            let hd = match decomp {
                Some(Decomp::Hypertree(hd)) => Some(hd),
                Some(Decomp::JoinTree(jt)) => {
                    let h = g.dependency_hypergraph();
                    validate_join_tree(&h, &jt)?;
                    Some(join_tree_to_hd(&h, &jt))
                }
                Some(other) => {
                    return Err(Failure::Input(format!(
                        "expected a hypertree decomposition, found kind {:?}",
                        other.kind()
                    )))
                }
                None => None,
            };
            Ok(NashSource::Tree(solve_hypertree(g, hd.as_ref(), &limits)?))
        }
        (AnyGame::Gnf(g), Method::Auto) => match solve_auto(g, &limits) {
            Ok(tree) => Ok(NashSource::Tree(tree)),
            Err(SolveError::GuardExceeded { .. }) => Ok(NashSource::Set(brute_nash(any, guard)?)),
            Err(e) => Err(e.into()),
        },
    }
}

fn acyclic_join_tree(any: &AnyGame) -> Option<(&GnfGame, JoinTree)> {
    let g = any.as_gnf()?;
    let jt = join_tree(&g.dependency_hypergraph())?;
    Some((g, jt))
}

fn emit_set(
    any: &AnyGame,
    kind: EquilibriumKind,
    profiles: Vec<Vec<Action>>,
    witness: Option<CoalitionWitness>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let doc = EquilibriaDoc {
        kind,
        profiles,
        witness,
    };
    write!(stdout, "{}", serialize_equilibria(any, &doc))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve_cmd(
    any: &AnyGame,
    mode: Mode,
    selector: Selector,
    method: Method,
    decomp: Option<Decomp>,
    root: Option<Player>,
    guard: &Guard,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let source = build_source(any, method, decomp, guard)?;

    // Fast paths that avoid full enumeration.
    if mode == Mode::Nash || mode == Mode::Pareto {
        match (&source, selector) {
            (NashSource::Tree(tree), Selector::Exists) => {
                // A Pareto equilibrium exists iff any equilibrium does.
                return if tree.exists() {
                    Ok(())
                } else {
                    Err(Failure::No)
                };
            }
            (NashSource::Tree(tree), Selector::Count) if mode == Mode::Nash => {
                writeln!(stdout, "{}", tree.count_equilibria()?)?;
                return Ok(());
            }
            (NashSource::Tree(tree), Selector::One) => {
                // The selection walk returns an undominated equilibrium, so
                // it serves both the nash and pareto selectors.
                let g = any.as_gnf().expect("tree source implies graphical form");
                let picked = tree.select_equilibrium(g, root)?;
                let kind = match mode {
                    Mode::Nash => EquilibriumKind::Nash,
                    _ => EquilibriumKind::Pareto,
                };
                return match picked {
                    Some(profile) => {
                        let dense = profile.to_dense(g.player_count())?;
                        emit_set(any, kind, vec![dense], None, stdout)
                    }
                    None => {
                        emit_set(any, kind, vec![], None, stdout)?;
                        Err(Failure::No)
                    }
                };
            }
            _ => {}
        }
    }
    if mode == Mode::Strong && selector == Selector::Exists {
        if let Some((g, jt)) = acyclic_join_tree(any) {
            let (exists, _) = strong_exists_acyclic(g, &jt)?;
            return if exists { Ok(()) } else { Err(Failure::No) };
        }
    }

    let ne = match &source {
        NashSource::Tree(tree) => tree.enumerate_equilibria()?,
        NashSource::Set(set) => set.clone(),
    };

    let result: EquilibriumSet = match mode {
        Mode::Nash => ne,
        Mode::Pareto => pareto_filter(any, &ne),
        Mode::Strong => {
            let mut strong = Vec::new();
            let acyclic = acyclic_join_tree(any);
            for x in ne.iter() {
                let is_strong = match &acyclic {
                    Some((g, jt)) => strong_check_acyclic(g, jt, &Profile::from_dense(x))?.strong,
                    None => strong_refutation(any, x, guard)?.is_none(),
                };
                if is_strong {
                    strong.push(x.to_vec());
                    if selector == Selector::Exists {
                        break;
                    }
                }
            }
            EquilibriumSet::new(EquilibriumKind::Strong, strong)
        }
    };

    let kind = match mode {
        Mode::Nash => EquilibriumKind::Nash,
        Mode::Pareto => EquilibriumKind::Pareto,
        Mode::Strong => EquilibriumKind::Strong,
    };
    match selector {
        Selector::Exists => {
            if result.is_empty() {
                Err(Failure::No)
            } else {
                Ok(())
            }
        }
        Selector::Count => {
            writeln!(stdout, "{}", result.len())?;
            Ok(())
        }
        Selector::All => emit_set(
            any,
            kind,
            result.iter().map(|x| x.to_vec()).collect(),
            None,
            stdout,
        ),
        Selector::One => match result.first() {
            Some(x) => emit_set(any, kind, vec![x.to_vec()], None, stdout),
            None => {
                emit_set(any, kind, vec![], None, stdout)?;
                Err(Failure::No)
            }
        },
    }
}

fn check_cmd(
    any: &AnyGame,
    x: &Profile,
    mode: Mode,
    guard: &Guard,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let dense = x.to_dense(any.player_count())?;
    match mode {
        Mode::Nash => {
            let ok = is_nash_check(any, x)?;
            emit_set(
                any,
                EquilibriumKind::Nash,
                if ok { vec![dense] } else { vec![] },
                None,
                stdout,
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::No)
            }
        }
        Mode::Pareto => {
            let ne = match any.as_gnf() {
                Some(g) => match solve_auto(g, &limits_from(guard)) {
                    Ok(tree) => tree.enumerate_equilibria().map_err(Failure::from)?,
                    Err(SolveError::GuardExceeded { .. }) => brute_nash(any, guard)?,
                    Err(e) => return Err(e.into()),
                },
                None => brute_nash(any, guard)?,
            };
            let ok = ne.contains_dense(&dense) && is_pareto_check(any, x, &ne)?;
            emit_set(
                any,
                EquilibriumKind::Pareto,
                if ok { vec![dense] } else { vec![] },
                None,
                stdout,
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::No)
            }
        }
        Mode::Strong => {
            let (ok, witness) = match acyclic_join_tree(any) {
                Some((g, jt)) => {
                    let res = strong_check_acyclic(g, &jt, x)?;
                    (res.strong, res.witness)
                }
                None => match strong_refutation(any, &dense, guard)? {
                    Some(w) => (false, Some(w)),
                    None => (true, None),
                },
            };
            emit_set(
                any,
                EquilibriumKind::Strong,
                if ok { vec![dense] } else { vec![] },
                witness,
                stdout,
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::No)
            }
        }
    }
}

fn validate_cmd(any: &AnyGame, parsed: &Decomp, stdout: &mut dyn Write) -> Result<(), Failure> {
    let outcome: Result<serde_json::Value, DecompError> = match parsed {
        Decomp::JoinTree(jt) => validate_join_tree(&any.dependency_hypergraph(), jt)
            .map(|()| serde_json::json!({"kind": "jointree", "valid": true})),
        Decomp::Tree(td) => validate_tree_decomposition(&any.dependency_graph(), td)
            .map(|width| serde_json::json!({"kind": "tree", "valid": true, "width": width})),
        Decomp::Hypertree(hd) => validate_hypertree_decomposition(&any.dependency_hypergraph(), hd)
            .map(|report| {
                serde_json::json!({
                    "kind": "hypertree",
                    "valid": true,
                    "width": report.width,
                    "complete": report.complete,
                })
            }),
    };
    match outcome {
        Ok(report) => {
            let mut text = serde_json::to_string_pretty(&report).expect("serializable");
            text.push('\n');
            write!(stdout, "{text}")?;
            Ok(())
        }
        Err(e) => {
            // The document parsed but does not decompose this game.
            let mut text = serde_json::to_string_pretty(&serde_json::json!({
                "kind": parsed.kind(),
                "valid": false,
                "reason": e.to_string(),
            }))
            .expect("serializable");
            text.push('\n');
            write!(stdout, "{text}")?;
            Err(Failure::No)
        }
    }
}

fn stats_cmd(any: &AnyGame, stdout: &mut dyn Write) -> Result<(), Failure> {
    let metrics = any.metrics();
    let h = any.dependency_hypergraph();
    let g = any.dependency_graph();
    let acyclic = join_tree(&h).is_some();
    let td = tree_decomposition_heuristic(&g);
    let hw_heuristic: u64 = if acyclic { 1 } else { (td.width() + 1) as u64 };
    let report = serde_json::json!({
        "players": any.player_count(),
        "representation": match any { AnyGame::Gnf(_) => "gnf", AnyGame::Snf(_) => "snf" },
        "size_norm": metrics.size_norm,
        "max_neigh": metrics.max_neigh,
        "max_act": metrics.max_act,
        "intricacy": metrics.intricacy_string(),
        "dependency_edges": g.edge_count(),
        "hypergraph_acyclic": acyclic,
        "treewidth_heuristic": td.width(),
        "hypertree_width_heuristic": hw_heuristic,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    write!(stdout, "{text}")?;
    Ok(())
}

/// Convenience used by tests and doc examples: run the CLI on string
/// arguments with the given stdin bytes, capturing stdout and stderr.
pub fn run_captured(args: &[&str], stdin_bytes: &[u8]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut input = stdin_bytes;
    let mut out: Vec<u8> = Vec::new();
    let mut err: Vec<u8> = Vec::new();
    let code = cli_main(&argv, &mut input, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}
