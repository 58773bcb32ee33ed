//! Shared corpus for the golden-file and acceptance suites. Every
//! subcommand appears at least once, in both output formats somewhere.

use std::path::PathBuf;
use std::process::{Command, Output};

/// (golden file name, argv) pairs. Paths are relative to the tests dir.
pub const CORPUS: &[(&str, &[&str])] = &[
    ("classes_s3.txt", &["group", "classes", "fixtures/s3.grp"]),
    ("classes_d4.txt", &["group", "classes", "fixtures/d4perm.grp"]),
    ("classes_c4mat.txt", &["group", "classes", "fixtures/c4mat.grp"]),
    ("classes_s3.json", &["--format", "json", "group", "classes", "fixtures/s3.grp"]),
    ("powermap_q8_s2.txt", &["group", "powermap", "fixtures/q8.grp", "--s", "2"]),
    ("powermap_s3_s3.txt", &["group", "powermap", "fixtures/s3.grp", "--s", "3"]),
    ("rank_idem2.txt", &["rank", "fixtures/s3.grp", "fixtures/idem2.mat"]),
    ("rank_idem2.json", &["--format", "json", "rank", "fixtures/s3.grp", "fixtures/idem2.mat"]),
    ("witt_mul.txt", &["witt", "mul", "--set", "divisors-of:4", "2:1", "2:1"]),
    ("witt_add.txt", &["witt", "add", "--set", "{1,2,4}", "1:1,2:2", "1:-1,4:3"]),
    ("witt_neg.txt", &["witt", "neg", "--set", "{1,2}", "1:3,2:-1"]),
    ("witt_sub.txt", &["witt", "sub", "--set", "{1,2}", "1:3,2:1", "1:1,2:4"]),
    ("witt_ghost.txt", &["witt", "ghost", "--set", "{1,2,4}", "2:1,4:-1"]),
    ("witt_ghost.json", &["--format", "json", "witt", "ghost", "--set", "{1,2,4}", "2:1,4:-1"]),
    ("witt_vone.txt", &["witt", "vone", "--set", "divisors-of:6", "--s", "2"]),
    ("witt_frob.txt", &["witt", "frobenius", "--set", "divisors-of:6", "--s", "2", "1:0,2:1"]),
    ("witt_versch.txt", &["witt", "verschiebung", "--set", "divisors-of:6", "--s", "3", "1:5,2:-2"]),
    (
        "witt_restrict.txt",
        &["witt", "restrict", "--set", "divisors-of:12", "--to", "{1,2,4}", "1:1,2:2,3:3,4:4,6:6,12:12"],
    ),
    (
        "tr_apply_f.txt",
        &["tr", "apply", "--group", "fixtures/s3.grp", "--op", "F", "--s", "2", "level=6; 1*V2[[1,3,2]]"],
    ),
    (
        "tr_apply_r.txt",
        &["tr", "apply", "--group", "fixtures/s3.grp", "--op", "R", "--s", "3", "level=6; 1*V1[[2,3,1]] + 4*V3[[1,3,2]]"],
    ),
    (
        "tr_apply_v.txt",
        &["tr", "apply", "--group", "fixtures/s3.grp", "--op", "V", "--s", "2", "level=3; 1*V1[[2,3,1]]"],
    ),
    ("tr_exact_s3.txt", &["tr", "exactness", "fixtures/s3.grp", "--r", "6", "--p", "2"]),
    ("tr_exact_q8.json", &["--format", "json", "tr", "exactness", "fixtures/q8.grp", "--r", "12", "--p", "3"]),
    ("linnell_s3.txt", &["bass", "linnell", "fixtures/s3.grp"]),
    ("linnell_q8.txt", &["bass", "linnell", "fixtures/q8.grp"]),
    ("fixed_shadow.txt", &["bass", "fixedpoint", "fixtures/shadow_s3.trl"]),
    ("fixed_shadow.json", &["--format", "json", "bass", "fixedpoint", "fixtures/shadow_s3.trl"]),
    ("fixed_bad.txt", &["bass", "fixedpoint", "fixtures/bad_s3.trl"]),
    ("sl2_4.txt", &["bass", "sl2", "--k", "4"]),
    ("sl2_2.txt", &["bass", "sl2", "--k", "2"]),
    ("sl2_94.json", &["--format", "json", "bass", "sl2", "--k", "9/4"]),
    ("bezout_3.txt", &["bass", "bezout", "--m", "3"]),
    ("bezout_5.json", &["--format", "json", "bass", "bezout", "--m", "5"]),
];

pub fn tests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tr0"))
        .args(args)
        .current_dir(tests_dir())
        .output()
        .expect("failed to launch the binary")
}
