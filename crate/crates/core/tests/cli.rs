//! End-to-end command-line tests: in-process runs against the dispatch
//! entry point, plus piped runs of the real binary.

use std::io::Write;
use std::process::{Command, Stdio};

use purenash::cli::run_captured;
use purenash::fileio::serialize_game;
use purenash::game::AnyGame;
use purenash::generators::fixtures::pennies;

fn friends_bytes() -> Vec<u8> {
    let (code, out, err) = run_captured(&["purenash", "gen", "friends"], b"");
    assert_eq!(code, 0, "stderr: {err}");
    out.into_bytes()
}

fn profiles_of(doc: &str) -> Vec<serde_json::Value> {
    let v: serde_json::Value = serde_json::from_str(doc).unwrap();
    v["profiles"].as_array().unwrap().clone()
}

#[test]
fn gen_is_deterministic() {
    let a = friends_bytes();
    let b = friends_bytes();
    assert_eq!(a, b);
    let (c1, o1, _) = run_captured(
        &["purenash", "gen", "random", "--players", "4", "--seed", "7"],
        b"",
    );
    let (c2, o2, _) = run_captured(
        &["purenash", "gen", "random", "--players", "4", "--seed", "7"],
        b"",
    );
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(o1, o2);
}

#[test]
fn solve_friends_all_modes() {
    let game = friends_bytes();
    let (code, out, _) = run_captured(
        &["purenash", "solve", "-", "--mode", "nash", "--all"],
        &game,
    );
    assert_eq!(code, 0);
    let profiles = profiles_of(&out);
    assert_eq!(profiles.len(), 4);

    // Identical runs produce identical bytes.
    let (_, out2, _) = run_captured(
        &["purenash", "solve", "-", "--mode", "nash", "--all"],
        &game,
    );
    assert_eq!(out, out2);

    for mode in ["pareto", "strong"] {
        let (code, out, _) =
            run_captured(&["purenash", "solve", "-", "--mode", mode, "--all"], &game);
        assert_eq!(code, 0);
        let profiles = profiles_of(&out);
        assert_eq!(profiles.len(), 2, "mode {mode}");
        for p in &profiles {
            assert_eq!(p["F"], "m");
            assert_eq!(p["P"], "m");
            assert_eq!(p["R"], "o");
            assert_eq!(p["M"], "o");
        }
    }

    let (code, out, _) = run_captured(
        &["purenash", "solve", "-", "--mode", "nash", "--count"],
        &game,
    );
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "4");

    let (code, _, _) = run_captured(
        &["purenash", "solve", "-", "--mode", "strong", "--exists"],
        &game,
    );
    assert_eq!(code, 0);
}

#[test]
fn selection_respects_root_flag() {
    let game = friends_bytes();
    let (code, out, _) = run_captured(
        &[
            "purenash", "solve", "-", "--mode", "pareto", "--one", "--root", "F",
        ],
        &game,
    );
    assert_eq!(code, 0);
    let profiles = profiles_of(&out);
    assert_eq!(profiles.len(), 1);
    let p = &profiles[0];
    assert_eq!(p["F"], "m");
    assert_eq!(p["P"], "m");
    assert_eq!(p["R"], "o");
    assert_eq!(p["G"], "m");
    assert_eq!(p["M"], "o");
}

#[test]
fn check_strong_opera_profile_yields_witness() {
    let game = friends_bytes();
    let dir = std::env::temp_dir().join(format!("purenash_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game_path = dir.join("friends.json");
    std::fs::write(&game_path, &game).unwrap();
    let profile_path = dir.join("opera.json");
    std::fs::write(
        &profile_path,
        br#"{"G":"o","P":"o","F":"o","R":"m","M":"m"}"#,
    )
    .unwrap();

    let (code, out, _) = run_captured(
        &[
            "purenash",
            "check",
            game_path.to_str().unwrap(),
            profile_path.to_str().unwrap(),
            "--mode",
            "strong",
        ],
        b"",
    );
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["witness"]["coalition"].as_array().unwrap().len() >= 2);

    // The same profile is a plain equilibrium.
    let (code, _, _) = run_captured(
        &[
            "purenash",
            "check",
            game_path.to_str().unwrap(),
            profile_path.to_str().unwrap(),
            "--mode",
            "nash",
        ],
        b"",
    );
    assert_eq!(code, 0);
}

#[test]
fn pennies_has_no_equilibrium() {
    let game = serialize_game(&AnyGame::Gnf(pennies()));
    let (code, _, _) = run_captured(&["purenash", "solve", "-", "--exists"], game.as_bytes());
    assert_eq!(code, 1);
}

#[test]
fn method_acyclic_rejects_cyclic_games() {
    let (_, game, _) = run_captured(&["purenash", "gen", "friends-prime"], b"");
    let (code, _, err) = run_captured(
        &["purenash", "solve", "-", "--method", "acyclic"],
        game.as_bytes(),
    );
    assert_eq!(code, 3, "stderr: {err}");

    // The auto method handles the same game.
    let (code, out, _) = run_captured(&["purenash", "solve", "-", "--count"], game.as_bytes());
    assert_eq!(code, 0);
    let auto_count = out.trim().to_string();
    let (code, out, _) = run_captured(
        &["purenash", "solve", "-", "--count", "--method", "brute"],
        game.as_bytes(),
    );
    assert_eq!(code, 0);
    assert_eq!(out.trim(), auto_count);
}

#[test]
fn guard_exceeded_is_exit_4() {
    let game = friends_bytes();
    let (code, _, _) = run_captured(
        &[
            "purenash", "solve", "-", "--method", "brute", "--guard", "1",
        ],
        &game,
    );
    assert_eq!(code, 4);
}

#[test]
fn decompose_validate_round_trip() {
    let game = friends_bytes();
    let dir = std::env::temp_dir().join(format!("purenash_dec_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game_path = dir.join("friends.json");
    std::fs::write(&game_path, &game).unwrap();

    for kind in ["jointree", "tree", "hypertree"] {
        let out_path = dir.join(format!("{kind}.json"));
        let (code, _, err) = run_captured(
            &[
                "purenash",
                "decompose",
                game_path.to_str().unwrap(),
                "--kind",
                kind,
                "--out",
                out_path.to_str().unwrap(),
            ],
            b"",
        );
        assert_eq!(code, 0, "{kind}: {err}");
        let (code, out, err) = run_captured(
            &[
                "purenash",
                "validate",
                game_path.to_str().unwrap(),
                out_path.to_str().unwrap(),
            ],
            b"",
        );
        assert_eq!(code, 0, "{kind}: {err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["valid"], true);
    }
}

#[test]
fn tree_decomp_rejected_where_hypertree_expected() {
    let game = friends_bytes();
    let dir = std::env::temp_dir().join(format!("purenash_kind_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game_path = dir.join("friends.json");
    std::fs::write(&game_path, &game).unwrap();
    let tree_path = dir.join("tree.json");
    let (code, _, _) = run_captured(
        &[
            "purenash",
            "decompose",
            game_path.to_str().unwrap(),
            "--kind",
            "tree",
            "--out",
            tree_path.to_str().unwrap(),
        ],
        b"",
    );
    assert_eq!(code, 0);
    let (code, _, err) = run_captured(
        &[
            "purenash",
            "solve",
            game_path.to_str().unwrap(),
            "--method",
            "hypertree",
            "--decomp",
            tree_path.to_str().unwrap(),
        ],
        b"",
    );
    assert_eq!(code, 2, "stderr: {err}");
}

#[test]
fn hand_written_hypertree_decomposition_validates() {
    let (_, game, _) = run_captured(&["purenash", "gen", "friends-prime"], b"");
    let dir = std::env::temp_dir().join(format!("purenash_hd_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game_path = dir.join("friends_prime.json");
    std::fs::write(&game_path, &game).unwrap();
    let hd_path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/friends_prime_hd2.json"
    );

    let (code, out, err) = run_captured(
        &["purenash", "validate", game_path.to_str().unwrap(), hd_path],
        b"",
    );
    assert_eq!(code, 0, "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["width"], 2);
    assert_eq!(v["complete"], true);

    // Solving with the supplied decomposition matches the brute oracle.
    let (code, all_hd, _) = run_captured(
        &[
            "purenash",
            "solve",
            game_path.to_str().unwrap(),
            "--method",
            "hypertree",
            "--decomp",
            hd_path,
            "--all",
        ],
        b"",
    );
    assert_eq!(code, 0);
    let (code, all_brute, _) = run_captured(
        &[
            "purenash",
            "solve",
            game_path.to_str().unwrap(),
            "--method",
            "brute",
            "--all",
        ],
        b"",
    );
    assert_eq!(code, 0);
    assert_eq!(all_hd, all_brute);
}

#[test]
fn stats_reports_metrics() {
    let game = friends_bytes();
    let (code, out, _) = run_captured(&["purenash", "stats", "-"], &game);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["players"], 5);
    assert_eq!(v["size_norm"], 50);
    assert_eq!(v["max_neigh"], 2);
    assert_eq!(v["max_act"], 2);
    assert_eq!(v["hypergraph_acyclic"], true);
    assert_eq!(v["hypertree_width_heuristic"], 1);
    let expect = format!("{:.6}", 2.0 / (50f64).log2());
    assert_eq!(v["intricacy"], expect.as_str());
}

#[test]
fn generators_from_formula_files() {
    let cnf = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/simple.cnf");
    for kind in ["sat31", "sat32", "treesat"] {
        let (code, out, err) = run_captured(&["purenash", "gen", kind, cnf], b"");
        assert_eq!(code, 0, "{kind}: {err}");
        let (code, count, _) = run_captured(
            &["purenash", "solve", "-", "--count", "--method", "brute"],
            out.as_bytes(),
        );
        assert_eq!(code, 0);
        if kind != "treesat" {
            // Equilibria of both satisfiability reductions count the models.
            assert_eq!(count.trim(), "3", "{kind}");
        }
    }

    let qbf = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/xi_r.json");
    let (code, out, err) = run_captured(&["purenash", "gen", "qbf37", qbf], b"");
    assert_eq!(code, 0, "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["players"].as_array().unwrap().len(), 24);
    let (code, _, _) = run_captured(&["purenash", "gen", "qbf38", qbf], b"");
    assert_eq!(code, 0);
}

#[test]
fn malformed_inputs_are_exit_2() {
    let (code, _, _) = run_captured(&["purenash", "solve", "-"], b"{not json");
    assert_eq!(code, 2);
    let (code, _, _) = run_captured(&["purenash", "solve", "/nonexistent/path.json"], b"");
    assert_eq!(code, 2);
    let bad = br#"{"format":"gnf-game/1","players":["A"],"actions":{"A":["x"]},
                   "neighbors":{},"utilities":{"A":[{"when":{"A":"x"},"payoff":"oops"}]}}"#;
    let (code, _, err) = run_captured(&["purenash", "solve", "-"], bad);
    assert_eq!(code, 2);
    assert!(err.contains("payoff"));
}

#[test]
fn real_binary_pipeline() {
    let exe = env!("CARGO_BIN_EXE_purenash");
    let gen = Command::new(exe)
        .args(["gen", "friends"])
        .output()
        .expect("spawn gen");
    assert!(gen.status.success());

    let mut solve = Command::new(exe)
        .args(["solve", "--mode", "nash", "--all"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn solve");
    solve
        .stdin
        .as_mut()
        .unwrap()
        .write_all(&gen.stdout)
        .unwrap();
    let out = solve.wait_with_output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["profiles"].as_array().unwrap().len(), 4);

    // Exit code 1 for a game without equilibria.
    let pennies_doc = serialize_game(&AnyGame::Gnf(pennies()));
    let mut exists = Command::new(exe)
        .args(["solve", "--exists"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn exists");
    exists
        .stdin
        .as_mut()
        .unwrap()
        .write_all(pennies_doc.as_bytes())
        .unwrap();
    let out = exists.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
