//! CLI transcripts against checked-in goldens. Set `NOVTEL_UPDATE_GOLDEN=1` to rewrite them.

mod common;

use common::{golden_path, run_cli, GOLDEN_CASES};

#[test]
fn transcripts_match_goldens() {
    let update = std::env::var_os("NOVTEL_UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN_CASES {
        let got = run_cli(args);
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if got != want {
            mismatched.push(format!("{name}:\n--- want\n{want}--- got\n{got}"));
        }
    }
    assert!(mismatched.is_empty(), "{}", mismatched.join("\n"));
}

#[test]
fn key_transcript_lines() {
    let trees = run_cli(&["trees", "--n", "2"]);
    assert!(trees.starts_with("exit 0\nstrata of T_2: 3\n"));
    assert!(trees.contains("facets: 1\nT_1 x T_1\n"));
    let cartan = run_cli(&["cartan", "--space", "s1-antipodal", "--depth", "3"]);
    assert!(cartan.contains("verdict iso\n") && cartan.contains("dims (1,1)\n"));
    let bad = run_cli(&["validate", "{data}/bad_square.json"]);
    assert!(bad.starts_with("exit 1\n"));
    assert!(bad.contains("coefficient of v in dd(s)"));
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["cascade", "rehearse", "--space", "s1-antipodal", "--gap", "1/2", "--seeds", "1"];
    let explicit = run_cli(&[&["--seed", "9"], &args[..]].concat());
    std::env::set_var("NOVTEL_SEED", "9");
    let from_env = run_cli(&args);
    std::env::remove_var("NOVTEL_SEED");
    assert_eq!(explicit, from_env);
    assert!(explicit.contains("seed 9:"));
}
