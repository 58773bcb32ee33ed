//! Golden-file checks: every corpus command must reproduce its stored
//! output byte for byte, twice in a row. Regenerate the files with
//! `GOLDEN_REGEN=1 cargo test -p tr0-cli --test golden` and review the diff.

mod common;

use common::{run_cli, tests_dir, CORPUS};

#[test]
fn corpus_matches_golden_files() {
    let regen = std::env::var_os("GOLDEN_REGEN").is_some();
    let dir = tests_dir().join("golden");
    for &(name, args) in CORPUS {
        let out = run_cli(args);
        assert!(
            out.status.success(),
            "{name}: exit {:?}, stderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        let path = dir.join(name);
        if regen {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path)
            .unwrap_or_else(|e| panic!("{name}: missing golden file ({e})"));
        assert_eq!(
            out.stdout,
            want,
            "{name}: output drifted from the golden file\ngot:\n{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn corpus_is_deterministic() {
    for &(name, args) in CORPUS {
        let a = run_cli(args);
        let b = run_cli(args);
        assert_eq!(a.stdout, b.stdout, "{name}: two runs disagree");
        assert_eq!(a.status.code(), b.status.code(), "{name}: exit codes disagree");
    }
}

#[test]
fn domain_errors_exit_one_with_verbatim_names() {
    let cases: &[(&[&str], &str)] = &[
        (&["tr", "exactness", "fixtures/s3.grp", "--r", "6", "--p", "4"], "NotPrime"),
        (&["tr", "exactness", "fixtures/s3.grp", "--r", "6", "--p", "5"], "NotADivisor"),
        (&["witt", "add", "--set", "{2,4}", "2:1", "2:1"], "NotDivisorClosed"),
        (&["witt", "frobenius", "--set", "{1,2}", "--s", "4", "1:1"], "EmptyTruncation"),
        (&["witt", "restrict", "--set", "{1,2}", "--to", "{1,3}", "1:1"], "NotASubset"),
        (&["rank", "fixtures/s3.grp", "fixtures/shadow_s3.trl"], "Parse"),
        (&["bass", "bezout", "--m", "0"], "ZeroArgument"),
        (&["bass", "sl2", "--k", "0"], "ZeroArgument"),
    ];
    for (args, needle) in cases {
        let out = run_cli(args);
        assert_eq!(out.status.code(), Some(1), "{args:?} should fail with a domain error");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "{args:?}: stderr {stderr:?} lacks {needle:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["group", "classes"],
        &["witt", "add", "--set"],
        &["tr", "apply", "--group", "fixtures/s3.grp", "--op", "X", "--s", "2", "level=1; 0"],
        &["--no-such-flag", "bass", "bezout", "--m", "3"],
    ];
    for args in cases {
        let out = run_cli(args);
        assert_eq!(out.status.code(), Some(2), "{args:?} should be a usage error");
    }
}

#[test]
fn printed_values_reparse() {
    // tr apply output feeds back in as input and is fixed by R_1
    let first = run_cli(&[
        "tr", "apply", "--group", "fixtures/s3.grp", "--op", "V", "--s", "2",
        "level=3; 1*V1[[2,3,1]] + 2*V3[[1,2,3]]",
    ]);
    assert!(first.status.success());
    let elem = String::from_utf8(first.stdout).unwrap();
    let again = run_cli(&[
        "tr", "apply", "--group", "fixtures/s3.grp", "--op", "R", "--s", "1", elem.trim(),
    ]);
    assert!(again.status.success());
    assert_eq!(elem, String::from_utf8(again.stdout).unwrap());

    // witt output reparses: negating twice round-trips through the printout
    let once = run_cli(&["witt", "neg", "--set", "{1,2,4}", "1:7,2:-3,4:2"]);
    assert!(once.status.success());
    let text = String::from_utf8(once.stdout).unwrap();
    let vec_line = text.lines().nth(1).unwrap().strip_prefix("vector: ").unwrap();
    let twice = run_cli(&["witt", "neg", "--set", "{1,2,4}", vec_line]);
    assert!(twice.status.success());
    let text2 = String::from_utf8(twice.stdout).unwrap();
    assert_eq!(text2.lines().nth(1).unwrap(), "vector: 1:7,2:-3,4:2");
}
