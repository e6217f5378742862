//! Command-line interface. [`run`] does all the work and returns the text to
//! print with the exit code, so tests can drive it without a process.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpcore::decisions::{self, Stats, Verdict, Witness};
use mpcore::game::{Coalition, Game, StrategyProfile};
use mpcore::gr1::{parse_gr1, Gr1Spec};
use mpcore::oracle::{self, BruteAnswer, BruteForceBudget};
use mpcore::payoff::{compute_payoff, induced_lasso};
use mpcore::rational::{fmt_vec, parse_vec, RatVec};
use mpcore::reductions;
use mpcore::values::value_set;
use mpcore::Budget;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{parse_game, parse_profile, vec_json, write_game, write_profile};
use crate::instances::{parse_automata, parse_qbf2, parse_qbf3};
use crate::report::*;

#[derive(Debug, Parser)]
#[command(name = "mpgame", version, about = "Cooperative queries on concurrent mean-payoff games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the structured result instead of a one-line summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock time to the statistics (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Worker threads for the brute-force cross-checks of `verify --paranoid`.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Simple cycles enumerated per strongly connected component.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_cycles: usize,
    /// Counter-strategies enumerated for an explicit value set.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_p2_strategies: usize,
    /// Polyhedra kept while distributing intersections over unions.
    #[arg(long, global = true, default_value_t = 20_000)]
    pub max_parts: usize,
    /// Largest dimension handed to facet enumeration.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_facet_dim: usize,
    /// State subsets examined by ecore/acore.
    #[arg(long, global = true, default_value_t = 65_536)]
    pub max_subsets: usize,
    /// Nodes explored by the strategy and half-space searches.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_search_nodes: usize,
    /// Memoryless strategy tuples the brute-force oracles may enumerate.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub oracle_profiles: usize,
    /// Denominator of the convex coefficients tried by the oracles.
    #[arg(long, global = true, default_value_t = 4)]
    pub oracle_denominator: usize,
    /// Cycle averages the oracles keep per counter-strategy.
    #[arg(long, global = true, default_value_t = 64)]
    pub oracle_cycle_points: usize,
}

impl BudgetArgs {
    pub fn core(&self) -> Budget {
        Budget {
            max_cycles: self.max_cycles,
            max_p2_strategies: self.max_p2_strategies,
            max_parts: self.max_parts,
            max_facet_dim: self.max_facet_dim,
            max_subsets: self.max_subsets,
            max_search_nodes: self.max_search_nodes,
        }
    }

    pub fn oracle(&self) -> BruteForceBudget {
        BruteForceBudget {
            max_memoryless_profiles: self.oracle_profiles,
            max_denominator: self.oracle_denominator,
            max_cycle_points: self.oracle_cycle_points,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean payoff of a strategy profile.
    Payoff {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Can some coalition strictly improve on a payoff vector from a state?
    Dominated {
        #[arg(long)]
        game: PathBuf,
        /// Start state (default: the initial state).
        #[arg(long)]
        state: Option<String>,
        /// Payoff vector in player order, e.g. "2,1,0" or "1/4,1/4".
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Does some coalition have a beneficial deviation from the profile?
    Bendev {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Is the profile in the core?
    Membership {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Is the core non-empty?
    Nonempty {
        #[arg(long)]
        game: PathBuf,
    },
    /// Does some core outcome satisfy the GR(1) spec?
    Ecore {
        #[arg(long)]
        game: PathBuf,
        /// Spec text such as "GF a -> GF b & GF c", or @file.
        #[arg(long)]
        spec: String,
    },
    /// Does every core outcome satisfy the GR(1) spec?
    Acore {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        spec: String,
    },
    /// Payoffs a coalition can enforce, as a union of polyhedra.
    Values {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated player names.
        #[arg(long)]
        coalition: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Writes a generated instance and an `.expected.json` sidecar.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Formula text or automata JSON (not used by `gadget`).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-checks a result written with --json.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        result: PathBuf,
        /// Also run the brute-force oracles.
        #[arg(long)]
        paranoid: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Qsat2,
    Qsat3,
    Dfa,
    Gadget,
}

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_game(path: &Path) -> Result<Game, CliError> {
    parse_game(&read(path)?)
}

pub fn load_profile(g: &Game, path: &Path) -> Result<StrategyProfile, CliError> {
    parse_profile(g, &read(path)?)
}

fn load_spec(arg: &str) -> Result<Gr1Spec, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(p) => read(Path::new(p))?,
        None => arg.to_string(),
    };
    Ok(parse_gr1(text.trim())?)
}

fn start_state(g: &Game, state: &Option<String>) -> Result<usize, CliError> {
    match state {
        Some(s) => state_from_name(g, s),
        None => Ok(g.init()),
    }
}

fn parse_vector(g: &Game, text: &str) -> Result<RatVec, CliError> {
    let x = parse_vec(text)?;
    if x.len() != g.num_players() {
        return Err(CliError::Usage(format!(
            "vector has {} entries but the game has {} players",
            x.len(),
            g.num_players()
        )));
    }
    Ok(x)
}

struct Ctx<'a> {
    cli: &'a Cli,
    started: Instant,
}

impl Ctx<'_> {
    fn stats(&self, s: &Stats) -> Value {
        stats_json(s, self.cli.timings.then(|| self.started.elapsed().as_millis()))
    }

    /// `answer` with an optional witness, printed per the output mode.
    fn finish(&self, g: &Game, command: &str, v: &Verdict, query: Value) -> Output {
        let witness = v.witness.as_ref().map_or(Value::Null, |w| witness_json(g, w));
        let text = if self.cli.json {
            pretty(&query_result(command, v.answer, query, witness, self.stats(&v.stats)))
        } else {
            match &v.witness {
                Some(w) => format!("{} {}\n", yes_no(v.answer), witness_line(g, w)),
                None => format!("{}\n", yes_no(v.answer)),
            }
        };
        Output {
            text,
            code: if v.answer { 0 } else { 1 },
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialises");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Ctx {
        cli,
        started: Instant::now(),
    };
    let budget = cli.budget.core();
    match &cli.command {
        Command::Payoff { game, profile } => {
            let g = load_game(game)?;
            let p = load_profile(&g, profile)?;
            let x = compute_payoff(&g, &p)?;
            let lasso = induced_lasso(&g, &p)?;
            let text = if cli.json {
                let mut w = lasso_json(&g, &lasso);
                w["kind"] = json!("payoff");
                w["payoff"] = vec_json(&x);
                pretty(&query_result("payoff", true, json!({}), w, ctx.stats(&Stats::default())))
            } else {
                format!("{}\n", fmt_vec(&x))
            };
            Ok(Output { text, code: 0 })
        }
        Command::Dominated { game, state, vector } => {
            let g = load_game(game)?;
            let s = start_state(&g, state)?;
            let x = parse_vector(&g, vector)?;
            let v = decisions::dominated(&g, s, &x, &budget)?;
            let q = json!({ "state": g.states()[s], "vector": vec_json(&x) });
            Ok(ctx.finish(&g, "dominated", &v, q))
        }
        Command::Bendev { game, profile } => {
            let g = load_game(game)?;
            let p = load_profile(&g, profile)?;
            let v = decisions::exists_beneficial_deviation(&g, &p, &budget)?;
            let q = json!({ "payoff": vec_json(&compute_payoff(&g, &p)?) });
            Ok(ctx.finish(&g, "bendev", &v, q))
        }
        Command::Membership { game, profile } => {
            let g = load_game(game)?;
            let p = load_profile(&g, profile)?;
            let v = decisions::membership(&g, &p, &budget)?;
            let q = json!({ "payoff": vec_json(&compute_payoff(&g, &p)?) });
            Ok(ctx.finish(&g, "membership", &v, q))
        }
        Command::Nonempty { game } => {
            let g = load_game(game)?;
            let v = decisions::core_nonempty(&g, &budget)?;
            Ok(ctx.finish(&g, "nonempty", &v, json!({})))
        }
        Command::Ecore { game, spec } | Command::Acore { game, spec } => {
            let g = load_game(game)?;
            let phi = load_spec(spec)?;
            let (name, v) = match &cli.command {
                Command::Ecore { .. } => ("ecore", decisions::e_core_gr1(&g, &phi, &budget)?),
                _ => ("acore", decisions::a_core_gr1(&g, &phi, &budget)?),
            };
            Ok(ctx.finish(&g, name, &v, json!({ "spec": phi.to_string() })))
        }
        Command::Values { game, coalition, state } => {
            let g = load_game(game)?;
            let names: Vec<String> = coalition.split(',').map(|s| s.trim().to_string()).collect();
            let c = coalition_from_names(&g, &names)?;
            let s = start_state(&g, state)?;
            let vs = value_set(&g, &c, s, &budget)?;
            let union = vs.union.normalized();
            let vars: Vec<String> = coalition_names(&g, &c).iter().map(|p| var_name(p)).collect();
            let text = if cli.json {
                let q = json!({ "coalition": coalition_names(&g, &c), "state": g.states()[s] });
                let mut w = union_json(&union);
                w["kind"] = json!("polyhedra");
                pretty(&query_result("values", true, q, w, ctx.stats(&Stats::default())))
            } else {
                format!("{}\n", union_str(&union, &vars))
            };
            Ok(Output { text, code: 0 })
        }
        Command::Gen { kind, input, out } => generate(*kind, input.as_deref(), out),
        Command::Verify {
            game,
            profile,
            result,
            paranoid,
        } => {
            let g = load_game(game)?;
            let p = profile.as_deref().map(|f| load_profile(&g, f)).transpose()?;
            let res: Value = serde_json::from_str(&read(result)?)?;
            let check = verify(&g, p.as_ref(), &res, *paranoid, cli)?;
            let text = if cli.json {
                let w = json!({ "checked": res["command"], "reason": check.reason, "oracle": check.oracle });
                pretty(&query_result("verify", check.ok, json!({}), w, ctx.stats(&Stats::default())))
            } else if check.ok {
                format!("verified oracle={}\n", check.oracle)
            } else {
                format!("rejected: {}\n", check.reason)
            };
            Ok(Output {
                text,
                code: if check.ok { 0 } else { 1 },
            })
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn generate(kind: GenKind, input: Option<&Path>, out: &Path) -> Result<Output, CliError> {
    let need = || input.ok_or_else(|| CliError::Usage("this generator needs --input".into()));
    let mut written = Vec::new();
    let (g, sidecar) = match kind {
        GenKind::Qsat2 => {
            let f = parse_qbf2(&read(need()?)?)?;
            let (g, s, x) = reductions::gen_qsat2_dominated(&f)?;
            let side = json!({
                "command": "dominated",
                "formula": f.to_string(),
                "state": g.states()[s],
                "vector": vec_json(&x),
                "expected": yes_no(reductions::qbf2_eval(&f)?),
            });
            (g, side)
        }
        GenKind::Qsat3 => {
            let f = parse_qbf3(&read(need()?)?)?;
            let g = reductions::gen_qsat3_nonemptiness(&f)?;
            let side = json!({
                "command": "nonempty",
                "formula": f.to_string(),
                "expected": yes_no(reductions::qbf3_eval(&f)?),
            });
            (g, side)
        }
        GenKind::Dfa => {
            let automata = parse_automata(&read(need()?)?)?;
            let (g, p) = reductions::gen_dfa_bendev(&automata)?;
            let path = with_suffix(out, ".profile");
            write(&path, &write_profile(&g, &p))?;
            written.push(path);
            // A common accepted word lets the profile reach the best state.
            let side = json!({
                "command": "bendev",
                "expected": yes_no(!reductions::dfa_intersection_nonempty(&automata)?),
            });
            (g, side)
        }
        GenKind::Gadget => (reductions::sink_gadget(), json!({ "command": "nonempty", "expected": "no" })),
    };
    let path = with_suffix(out, ".game");
    write(&path, &write_game(&g))?;
    written.insert(0, path);
    let path = with_suffix(out, ".expected.json");
    write(&path, &pretty(&sidecar))?;
    written.push(path);
    let text: String = written.iter().map(|p| format!("wrote {}\n", p.display())).collect();
    Ok(Output { text, code: 0 })
}

/// Outcome of `verify`.
pub struct Check {
    pub ok: bool,
    pub reason: String,
    /// `confirmed`, `inconclusive`, `contradicted` or `not-run`.
    pub oracle: &'static str,
}

fn fail(reason: impl Into<String>) -> Check {
    Check {
        ok: false,
        reason: reason.into(),
        oracle: "not-run",
    }
}

fn pass(reason: impl Into<String>) -> Check {
    Check {
        ok: true,
        reason: reason.into(),
        oracle: "not-run",
    }
}

fn oracle_word(a: BruteAnswer, expect_yes: bool) -> &'static str {
    match (a, expect_yes) {
        (BruteAnswer::Inconclusive, _) => "inconclusive",
        (BruteAnswer::Yes, true) | (BruteAnswer::No, false) => "confirmed",
        _ => "contradicted",
    }
}

/// Brute-force search for a memoryless deviation by any coalition, spread
/// over `jobs` threads.
fn brute_any_deviation(g: &Game, x: &[mpcore::Rat], ob: &BruteForceBudget, jobs: usize) -> Result<BruteAnswer, CliError> {
    let all = Coalition::all(g.num_players());
    let jobs = jobs.clamp(1, all.len().max(1));
    let answers: Vec<mpcore::Result<BruteAnswer>> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..jobs)
            .map(|t| {
                let all = &all;
                sc.spawn(move || {
                    all.iter()
                        .skip(t)
                        .step_by(jobs)
                        .map(|c| oracle::brute_deviation(g, c, x, ob))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    });
    let mut undecided = false;
    for a in answers {
        match a? {
            BruteAnswer::Yes => return Ok(BruteAnswer::Yes),
            BruteAnswer::Inconclusive => undecided = true,
            BruteAnswer::No => {}
        }
    }
    Ok(if undecided { BruteAnswer::Inconclusive } else { BruteAnswer::No })
}

fn malformed(what: &str) -> CliError {
    CliError::Core(mpcore::Error::Parse(format!("malformed result file: {what}")))
}

fn check_domination(
    g: &Game,
    s: usize,
    x: &[mpcore::Rat],
    w: &Witness,
    paranoid: bool,
    cli: &Cli,
) -> Result<Check, CliError> {
    let Witness::Domination { coalition, z } = w else {
        return Ok(fail("expected a domination witness"));
    };
    if !decisions::verify_domination(g, s, x, coalition, z, &cli.budget.core())? {
        return Ok(fail("the coalition cannot enforce z strictly above the vector"));
    }
    let mut c = pass("coalition enforces z strictly above the vector");
    if paranoid {
        let a = oracle::brute_enforce(g, coalition, s, z, &cli.budget.oracle())?;
        c.oracle = oracle_word(a, true);
        c.ok = c.oracle != "contradicted";
    }
    Ok(c)
}

/// Re-runs a decision whose answer carries no witness and compares.
fn rerun(claimed: bool, actual: bool) -> Check {
    if claimed == actual {
        pass("re-running the decision gives the same answer")
    } else {
        fail("re-running the decision gives a different answer")
    }
}

pub fn verify(g: &Game, p: Option<&StrategyProfile>, res: &Value, paranoid: bool, cli: &Cli) -> Result<Check, CliError> {
    let budget = cli.budget.core();
    let command = res["command"].as_str().ok_or_else(|| malformed("command"))?;
    let answer = match res["answer"].as_str() {
        Some("yes") => true,
        Some("no") => false,
        _ => return Err(malformed("answer")),
    };
    let witness = match &res["witness"] {
        Value::Null => None,
        w => Some(w.clone()),
    };
    let need_profile = || p.ok_or_else(|| CliError::Usage(format!("verifying {command} needs --profile")));
    let parsed = |w: &Value| witness_from_json(g, w);
    match command {
        "payoff" => {
            let x = compute_payoff(g, need_profile()?)?;
            let w = witness.ok_or_else(|| malformed("witness"))?;
            Ok(if vec_from_json(&w["payoff"])? == x {
                pass("payoff recomputed")
            } else {
                fail("payoff differs")
            })
        }
        "dominated" => {
            let s = state_from_name(g, res["query"]["state"].as_str().ok_or_else(|| malformed("state"))?)?;
            let x = vec_from_json(&res["query"]["vector"])?;
            match witness {
                Some(w) if answer => check_domination(g, s, &x, &parsed(&w)?, paranoid, cli),
                _ => Ok(rerun(answer, decisions::dominated(g, s, &x, &budget)?.answer)),
            }
        }
        "bendev" | "membership" => {
            let prof = need_profile()?;
            let x = compute_payoff(g, prof)?;
            let deviation_claimed = (command == "bendev") == answer;
            if deviation_claimed {
                let w = witness.ok_or_else(|| malformed("witness"))?;
                check_domination(g, g.init(), &x, &parsed(&w)?, paranoid, cli)
            } else {
                let mut c = rerun(false, decisions::exists_beneficial_deviation(g, prof, &budget)?.answer);
                if paranoid && c.ok {
                    let a = brute_any_deviation(g, &x, &cli.budget.oracle(), cli.jobs)?;
                    c.oracle = oracle_word(a, false);
                    c.ok = c.oracle != "contradicted";
                }
                Ok(c)
            }
        }
        "nonempty" => match witness {
            Some(w) if answer => {
                let Witness::Payoff(x) = parsed(&w)? else {
                    return Ok(fail("expected a payoff witness"));
                };
                if !decisions::verify_core_payoff(g, &x, &budget)? {
                    return Ok(fail("payoff is dominated or not enforceable"));
                }
                let mut c = pass("payoff is enforceable and undominated");
                if paranoid {
                    let n = g.num_players();
                    let a = oracle::brute_enforce(g, &Coalition::grand(n), g.init(), &x, &cli.budget.oracle())?;
                    c.oracle = oracle_word(a, true);
                    c.ok = c.oracle != "contradicted";
                }
                Ok(c)
            }
            _ => Ok(rerun(answer, decisions::core_nonempty(g, &budget)?.answer)),
        },
        "ecore" | "acore" => {
            let spec = parse_gr1(res["query"]["spec"].as_str().ok_or_else(|| malformed("spec"))?)?;
            let path_expected = (command == "ecore") == answer;
            match witness {
                Some(w) if path_expected => {
                    let Witness::Path(pw) = parsed(&w)? else {
                        return Ok(fail("expected a path witness"));
                    };
                    if !decisions::verify_path_witness(g, &pw, &budget)? {
                        return Ok(fail("circulation witness does not check"));
                    }
                    let sat = decisions::support_satisfies(g, &spec, &pw);
                    let want = command == "ecore";
                    if sat != want || (pw.exact && spec.holds_on(g, &pw.lasso) != want) {
                        return Ok(fail("witness run has the wrong relation to the spec"));
                    }
                    Ok(pass("circulation, payoff and spec re-checked"))
                }
                _ => {
                    let actual = if command == "ecore" {
                        decisions::e_core_gr1(g, &spec, &budget)?.answer
                    } else {
                        decisions::a_core_gr1(g, &spec, &budget)?.answer
                    };
                    Ok(rerun(answer, actual))
                }
            }
        }
        "values" => {
            let names: Vec<String> = res["query"]["coalition"]
                .as_array()
                .ok_or_else(|| malformed("coalition"))?
                .iter()
                .filter_map(|v| v.as_str().map(str::to_string))
                .collect();
            let c = coalition_from_names(g, &names)?;
            let s = state_from_name(g, res["query"]["state"].as_str().ok_or_else(|| malformed("state"))?)?;
            let mut again = union_json(&value_set(g, &c, s, &budget)?.union.normalized());
            again["kind"] = json!("polyhedra");
            Ok(if witness.as_ref() == Some(&again) {
                pass("value set recomputed")
            } else {
                fail("value set differs")
            })
        }
        other => Err(CliError::Usage(format!("cannot verify results of {other:?}"))),
    }
}
