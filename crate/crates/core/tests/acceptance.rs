//! Acceptance suite: one test per top-level correctness criterion, each
//! printing a PASS line with its elapsed time (run with `--nocapture` to
//! see them). Every threshold and time budget is pinned in the assertions.

use std::time::{Duration, Instant};

use purenash::brute::{
    brute_nash, brute_pareto, brute_strong, count_models_cnf, eval_r2qbf, gnf_to_snf, Guard,
};
use purenash::cli::run_captured;
use purenash::decomp::{
    join_tree, td_to_hd, tree_decomposition_heuristic, validate_hypertree_decomposition,
};
use purenash::game::{Action, Game, GnfGame, Player, Profile};
use purenash::generators::fixtures::{chain, clique};
use purenash::generators::{
    gen_qbf_acyclic, gen_qbf_challenger, gen_random, gen_sat_acyclic, gen_sat_clausevar,
    gen_tree_sat, pad_r2qbf, Cnf, CnfLit, QbfLit, R2Qbf, RandomGameParams,
};
use purenash::relation::nash_constraint;
use purenash::solver::{solve_auto, SolveLimits};
use purenash::strong::{is_nash_check, strong_check_acyclic, strong_exists_acyclic};

/// Minimal deterministic generator for the randomized criteria.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn pass(n: u32, name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "criterion {n} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("acceptance {n} ({name}): PASS in {elapsed:?}");
}

fn named_profile(doc: &serde_json::Value) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = doc
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, a)| (k.clone(), a.as_str().unwrap().to_string()))
        .collect();
    v.sort();
    v
}

fn profile_set(out: &str) -> Vec<Vec<(String, String)>> {
    let v: serde_json::Value = serde_json::from_str(out).unwrap();
    let mut set: Vec<Vec<(String, String)>> = v["profiles"]
        .as_array()
        .unwrap()
        .iter()
        .map(named_profile)
        .collect();
    set.sort();
    set
}

fn expected_set(profiles: &[&[(&str, &str)]]) -> Vec<Vec<(String, String)>> {
    let mut set: Vec<Vec<(String, String)>> = profiles
        .iter()
        .map(|p| {
            let mut v: Vec<(String, String)> = p
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            v.sort();
            v
        })
        .collect();
    set.sort();
    set
}

#[test]
fn acceptance_01_friends_exactness() {
    let start = Instant::now();
    let (code, game, _) = run_captured(&["purenash", "gen", "friends"], b"");
    assert_eq!(code, 0);

    let (code, out, _) = run_captured(
        &["purenash", "solve", "-", "--mode", "nash", "--all"],
        game.as_bytes(),
    );
    assert_eq!(code, 0);
    let expected = expected_set(&[
        &[("F", "m"), ("P", "m"), ("R", "o"), ("G", "m"), ("M", "o")],
        &[("F", "m"), ("P", "m"), ("R", "o"), ("G", "o"), ("M", "o")],
        &[("F", "o"), ("P", "o"), ("R", "m"), ("G", "m"), ("M", "m")],
        &[("F", "o"), ("P", "o"), ("R", "m"), ("G", "o"), ("M", "m")],
    ]);
    assert_eq!(profile_set(&out), expected);

    let movie_pair = expected_set(&[
        &[("F", "m"), ("P", "m"), ("R", "o"), ("G", "m"), ("M", "o")],
        &[("F", "m"), ("P", "m"), ("R", "o"), ("G", "o"), ("M", "o")],
    ]);
    for mode in ["pareto", "strong"] {
        let (code, out, _) = run_captured(
            &["purenash", "solve", "-", "--mode", mode, "--all"],
            game.as_bytes(),
        );
        assert_eq!(code, 0, "mode {mode}");
        assert_eq!(profile_set(&out), movie_pair, "mode {mode}");
    }
    pass(1, "friends exactness", start, Duration::from_secs(1));
}

#[test]
fn acceptance_02_constraint_relations_exact() {
    let start = Instant::now();
    let (_, game_text, _) = run_captured(&["purenash", "gen", "friends"], b"");
    let any = purenash::fileio::parse_game(game_text.as_bytes()).unwrap();
    let g = any.as_gnf().unwrap();
    let pl = |n: &str| g.player_by_name(n).unwrap();
    let act = |p: Player, n: &str| g.action_by_name(p, n).unwrap();

    let rows = |names: &[&str], tuples: &[&[&str]]| -> purenash::Relation {
        let scope: Vec<Player> = names.iter().map(|n| pl(n)).collect();
        purenash::Relation::new(
            scope.clone(),
            tuples
                .iter()
                .map(|t| {
                    t.iter()
                        .zip(&scope)
                        .map(|(a, p)| act(*p, a))
                        .collect::<Vec<Action>>()
                })
                .collect::<Vec<_>>(),
        )
        .unwrap()
    };

    let r_f = rows(
        &["F", "P", "R"],
        &[
            &["m", "m", "m"],
            &["m", "m", "o"],
            &["o", "m", "o"],
            &["m", "o", "m"],
            &["o", "o", "m"],
            &["o", "o", "o"],
        ],
    );
    assert_eq!(nash_constraint(g, pl("F")).unwrap(), r_f);

    let all8: Vec<Vec<&str>> = ["m", "o"]
        .iter()
        .flat_map(|g1| {
            ["m", "o"]
                .iter()
                .flat_map(move |p1| ["m", "o"].iter().map(move |f1| vec![*g1, *p1, *f1]))
        })
        .collect();
    let r_g = rows(
        &["G", "P", "F"],
        &all8.iter().map(|t| t.as_slice()).collect::<Vec<_>>(),
    );
    assert_eq!(nash_constraint(g, pl("G")).unwrap(), r_g);

    let r_r = rows(&["R", "F"], &[&["o", "m"], &["m", "o"]]);
    assert_eq!(nash_constraint(g, pl("R")).unwrap(), r_r);
    let r_p = rows(&["P", "F"], &[&["m", "m"], &["o", "o"]]);
    assert_eq!(nash_constraint(g, pl("P")).unwrap(), r_p);
    let r_m = rows(&["M", "R"], &[&["m", "m"], &["o", "o"]]);
    assert_eq!(nash_constraint(g, pl("M")).unwrap(), r_m);
    pass(
        2,
        "constraint relations exact",
        start,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_03_oracle_equivalence_on_random_games() {
    let start = Instant::now();
    let guard = Guard::default();
    let limits = SolveLimits::default();
    for seed in 0..500u64 {
        let g = gen_random(&RandomGameParams {
            seed: 10_000 + seed,
            players: 3 + (seed % 4) as usize,
            max_actions: 3,
            max_neigh: 3,
            payoff_min: 0,
            payoff_max: 4,
        });
        let tree = solve_auto(&g, &limits).unwrap();
        let ne = tree.enumerate_equilibria().unwrap();
        let oracle = brute_nash(&g, &guard).unwrap();
        assert_eq!(ne, oracle, "seed {seed}");

        let picked = tree.select_equilibrium(&g, None).unwrap();
        match picked {
            None => assert!(oracle.is_empty(), "seed {seed}"),
            Some(profile) => {
                let dense = profile.to_dense(g.player_count()).unwrap();
                assert!(oracle.contains_dense(&dense), "seed {seed}");
                let pareto = brute_pareto(&g, &guard).unwrap();
                assert!(pareto.contains_dense(&dense), "seed {seed}");
            }
        }
    }
    pass(
        3,
        "auto pipeline vs oracle, 500 games",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn acceptance_04_strong_check_equivalence() {
    let start = Instant::now();
    let guard = Guard::default();
    let mut tested = 0u32;
    let mut seed = 0u64;
    while tested < 200 {
        seed += 1;
        let g = gen_random(&RandomGameParams {
            seed: 20_000 + seed,
            players: 3 + (seed % 3) as usize,
            max_actions: 2,
            max_neigh: 2,
            payoff_min: 0,
            payoff_max: 3,
        });
        let Some(jt) = join_tree(&g.dependency_hypergraph()) else {
            continue;
        };
        tested += 1;
        let ne = brute_nash(&g, &guard).unwrap();
        let strong_oracle = brute_strong(&g, &guard).unwrap();
        for x in ne.iter() {
            let profile = Profile::from_dense(x);
            let res = strong_check_acyclic(&g, &jt, &profile).unwrap();
            assert_eq!(res.strong, strong_oracle.contains_dense(x), "seed {seed}");
            if let Some(w) = res.witness {
                assert!(w.verify(&g, &profile), "seed {seed}");
            }
        }
    }
    pass(
        4,
        "strong check vs oracle, 200 games",
        start,
        Duration::from_secs(60),
    );
}

fn random_cnf(rng: &mut Rng) -> Cnf {
    let nv = 1 + rng.below(4) as usize;
    let nc = 1 + rng.below(5) as usize;
    let variables: Vec<String> = (1..=nv).map(|i| format!("X{i}")).collect();
    let clauses = (0..nc)
        .map(|_| {
            let len = 1 + rng.below(3.min(nv as u64)) as usize;
            let mut vars: Vec<usize> = Vec::new();
            while vars.len() < len {
                let v = rng.below(nv as u64) as usize;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|var| CnfLit {
                    var,
                    positive: rng.below(2) == 0,
                })
                .collect()
        })
        .collect();
    Cnf { variables, clauses }
}

#[test]
fn acceptance_05_sat_correspondence() {
    let start = Instant::now();
    let guard = Guard::default();
    let mut rng = Rng(501);
    for case in 0..100u32 {
        let phi = random_cnf(&mut rng);
        let models = count_models_cnf(&phi).unwrap();

        let g1 = gen_sat_clausevar(&phi).unwrap();
        let ne1 = brute_nash(&g1, &guard).unwrap();
        assert_eq!(ne1.len() as u64, models, "case {case}");

        let g2 = gen_sat_acyclic(&phi).unwrap();
        let ne2 = brute_nash(&g2, &guard).unwrap();
        assert_eq!(ne2.len() as u64, models, "case {case}");
        let t = g2.player_by_name("T").unwrap();
        let h = g2.player_by_name("H").unwrap();
        for x in ne2.iter() {
            assert_eq!(g2.action_names(t)[x[t.idx()].idx()], "s", "case {case}");
            assert_eq!(g2.action_names(h)[x[h.idx()].idx()], "g", "case {case}");
        }
    }
    pass(
        5,
        "model counts via both reductions, 100 CNFs",
        start,
        Duration::from_secs(120),
    );
}

fn random_qbf(rng: &mut Rng, bias_invalid: bool) -> R2Qbf {
    let ne = 1 + rng.below(2) as usize;
    let nu = 1 + rng.below(2) as usize;
    let exists: Vec<String> = (1..=ne).map(|i| format!("a{i}")).collect();
    let forall: Vec<String> = (1..=nu).map(|i| format!("b{i}")).collect();
    let m = 4; // already a power of two, so padding adds no players
    let mut disjuncts: Vec<Vec<QbfLit>> = (0..m)
        .map(|_| {
            let len = 1 + rng.below(2) as usize;
            (0..len)
                .map(|_| {
                    let positive = rng.below(2) == 0;
                    if rng.below(2) == 0 {
                        QbfLit::exists(rng.below(ne as u64) as usize, positive)
                    } else {
                        QbfLit::forall(rng.below(nu as u64) as usize, positive)
                    }
                })
                .collect()
        })
        .collect();
    if bias_invalid {
        // Random formulas at this size are nearly always valid; threading
        // one universal literal through every disjunct lets a single
        // universal choice falsify the whole matrix, keeping both outcomes
        // represented in the sample.
        for d in &mut disjuncts {
            d.push(QbfLit::forall(0, true));
        }
    }
    R2Qbf {
        exists,
        forall,
        disjuncts,
    }
}

#[test]
fn acceptance_06_qbf_correspondence() {
    let start = Instant::now();
    let guard = Guard::default();
    let mut rng = Rng(601);
    let mut seen_valid = 0u32;
    let mut seen_invalid = 0u32;
    for case in 0..50u32 {
        let xi = pad_r2qbf(&random_qbf(&mut rng, case % 3 == 0)).unwrap();
        let valid = eval_r2qbf(&xi).unwrap();
        if valid {
            seen_valid += 1;
        } else {
            seen_invalid += 1;
        }

        let g = gen_qbf_acyclic(&xi).unwrap();
        let strong = brute_strong(&g, &guard).unwrap();
        assert_eq!(!strong.is_empty(), valid, "case {case} acyclic reduction");

        let gc = gen_qbf_challenger(&xi, true).unwrap();
        assert!(gc.player_count() <= 12, "case {case}");
        let strong = brute_strong(&gc, &guard).unwrap();
        assert_eq!(!strong.is_empty(), valid, "case {case} challenger");
    }
    // The sample must exercise both outcomes to mean anything.
    assert!(seen_valid >= 5 && seen_invalid >= 5);
    pass(
        6,
        "validity via both reductions, 50 formulas",
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn acceptance_07_tree_sat_correspondence() {
    let start = Instant::now();
    // The eight-clause satisfiable formula.
    let v: Vec<String> = (1..=8).map(|i| format!("X{i}")).collect();
    let lit = |name: &str| -> CnfLit {
        let (positive, n) = match name.strip_prefix('!') {
            Some(r) => (false, r),
            None => (true, name),
        };
        CnfLit {
            var: v.iter().position(|x| x == n).unwrap(),
            positive,
        }
    };
    let clause = |ls: &[&str]| ls.iter().map(|l| lit(l)).collect::<Vec<_>>();
    let phi_s = Cnf {
        variables: v.clone(),
        clauses: vec![
            clause(&["X1", "X2"]),
            clause(&["X1", "X3"]),
            clause(&["X1", "!X4", "X8"]),
            clause(&["X4"]),
            clause(&["!X5", "!X6"]),
            clause(&["X1", "X4", "X6"]),
            clause(&["X6", "X7"]),
            clause(&["X8"]),
        ],
    };
    assert!(count_models_cnf(&phi_s).unwrap() > 0);
    let g = gen_tree_sat(&phi_s).unwrap();
    let jt = join_tree(&g.dependency_hypergraph()).expect("tree game is acyclic");
    let (exists, witness) = strong_exists_acyclic(&g, &jt).unwrap();
    assert!(exists);
    let strong_profile = witness.unwrap();
    assert!(is_nash_check(&g, &strong_profile).unwrap());

    // An unsatisfiable four-clause formula: equilibria exist, none strong.
    let v2: Vec<String> = vec!["X1".into(), "X2".into()];
    let lit2 = |name: &str| -> CnfLit {
        let (positive, n) = match name.strip_prefix('!') {
            Some(r) => (false, r),
            None => (true, name),
        };
        CnfLit {
            var: v2.iter().position(|x| x == n).unwrap(),
            positive,
        }
    };
    let phi_u = Cnf {
        variables: v2.clone(),
        clauses: vec![
            vec![lit2("X1"), lit2("X2")],
            vec![lit2("X1"), lit2("!X2")],
            vec![lit2("!X1"), lit2("X2")],
            vec![lit2("!X1"), lit2("!X2")],
        ],
    };
    assert_eq!(count_models_cnf(&phi_u).unwrap(), 0);
    let gu = gen_tree_sat(&phi_u).unwrap();
    let guard = Guard::default();
    assert!(!brute_nash(&gu, &guard).unwrap().is_empty());
    assert!(brute_strong(&gu, &guard).unwrap().is_empty());
    let jt_u = join_tree(&gu.dependency_hypergraph()).unwrap();
    let (exists_u, _) = strong_exists_acyclic(&gu, &jt_u).unwrap();
    assert!(!exists_u);
    pass(
        7,
        "tree-of-clauses strong existence",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn acceptance_08_td_to_hd_bound() {
    let start = Instant::now();
    for seed in 0..100u64 {
        let g = gen_random(&RandomGameParams {
            seed: 80_000 + seed,
            players: 3 + (seed % 5) as usize,
            max_actions: 2,
            max_neigh: 3,
            payoff_min: 0,
            payoff_max: 2,
        });
        let td = tree_decomposition_heuristic(&g.dependency_graph());
        let hd = td_to_hd(&g, &td).unwrap();
        let report = validate_hypertree_decomposition(&g.dependency_hypergraph(), &hd).unwrap();
        assert!(report.complete, "seed {seed}");
        assert_eq!(report.width, td.width() + 1, "seed {seed}");
    }
    pass(
        8,
        "decomposition conversion bound, 100 games",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn acceptance_09_width_separation_on_clique() {
    let start = Instant::now();
    let g = clique(6, 2, 42);
    let h = g.dependency_hypergraph();
    assert!(join_tree(&h).is_some());
    let td = tree_decomposition_heuristic(&g.dependency_graph());
    assert_eq!(td.width(), 5);

    let tree = solve_auto(&g, &SolveLimits::default()).unwrap();
    let ne = tree.enumerate_equilibria().unwrap();
    let oracle = brute_nash(&g, &Guard::default()).unwrap();
    assert_eq!(ne, oracle);
    pass(9, "clique width separation", start, Duration::from_secs(5));
}

#[test]
fn acceptance_10_representation_independence() {
    let start = Instant::now();
    let (_, game_text, _) = run_captured(&["purenash", "gen", "friends"], b"");
    let any = purenash::fileio::parse_game(game_text.as_bytes()).unwrap();
    let g = any.as_gnf().unwrap();
    let guard = Guard::default();
    let snf = gnf_to_snf(g, &guard).unwrap();
    assert_eq!(snf.cell_count(), 32);
    assert_eq!(
        brute_nash(g, &guard).unwrap(),
        brute_nash(&snf, &guard).unwrap()
    );
    assert_eq!(
        brute_pareto(g, &guard).unwrap(),
        brute_pareto(&snf, &guard).unwrap()
    );
    assert_eq!(
        brute_strong(g, &guard).unwrap(),
        brute_strong(&snf, &guard).unwrap()
    );
    pass(
        10,
        "gnf/snf equilibrium sets agree",
        start,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_smoke_long_chain() {
    let start = Instant::now();
    // 200 players, 2 actions each: far beyond brute force, quick through
    // the acyclic pipeline.
    let g: GnfGame = chain(200, 2, 7);
    let tree = purenash::solver::solve_acyclic(&g).unwrap();
    assert!(tree.exists());
    let picked = tree.select_equilibrium(&g, None).unwrap().unwrap();
    assert!(is_nash_check(&g, &picked).unwrap());
    pass(0, "200-player chain smoke", start, Duration::from_secs(5));
}
