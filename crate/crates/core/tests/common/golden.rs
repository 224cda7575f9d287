//! CLI invocations with byte-exact expected output in `tests/golden/`.

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub code: i32,
}

const fn ok(name: &'static str, args: &'static [&'static str]) -> Case {
    Case {
        name,
        args,
        env: &[],
        code: 0,
    }
}

const fn fails(name: &'static str, args: &'static [&'static str], code: i32) -> Case {
    Case {
        name,
        args,
        env: &[],
        code,
    }
}

pub const CASES: &[Case] = &[
    ok(
        "extactic_linear",
        &["extactic", "--vars", "x,y", "--field", "x, 2*y", "--k", "1"],
    ),
    ok(
        "extactic_slv1_k1",
        &["extactic", "--field-corpus", "slv:1", "--k", "1"],
    ),
    ok(
        "extactic_slv1_k1_modular",
        &[
            "extactic",
            "--field-corpus",
            "slv:1",
            "--k",
            "1",
            "--engine",
            "modular",
        ],
    ),
    ok(
        "extactic_affine_hamiltonian",
        &[
            "extactic",
            "--field-corpus",
            "hamiltonian:x^2 + y^2",
            "--k",
            "1",
        ],
    ),
    ok(
        "invariant_slv1_z",
        &[
            "invariant-check",
            "--vars",
            "x,y,z",
            "--field-corpus",
            "slv:1",
            "--curve",
            "z",
        ],
    ),
    ok(
        "invariant_slv1_conic",
        &[
            "invariant-check",
            "--field-corpus",
            "slv:1",
            "--curve",
            "4*x^2 - 4*x*y + y^2 - 2*y*z",
        ],
    ),
    ok(
        "invariant_slv1_not",
        &[
            "invariant-check",
            "--field-corpus",
            "slv:1",
            "--curve",
            "x + y",
        ],
    ),
    ok(
        "first_integral_cusp",
        &[
            "first-integral",
            "--field-corpus",
            "hamiltonian:x^3 - y^2",
            "--k",
            "3",
        ],
    ),
    ok(
        "first_integral_slv1",
        &["first-integral", "--field-corpus", "slv:1", "--k", "1"],
    ),
    ok(
        "bound_theorem1",
        &[
            "bound", "theorem1", "--deg-d", "2", "--h0", "6", "--count", "7", "--deg-f", "2",
        ],
    ),
    ok(
        "bound_theorem1_forces",
        &[
            "bound", "theorem1", "--deg-d", "100", "--h0", "3", "--count", "5", "--deg-f", "2",
        ],
    ),
    ok(
        "bound_poin",
        &[
            "bound", "poin", "--deg-d", "2", "--h0", "3", "--count", "4", "--deg-f", "2",
        ],
    ),
    ok(
        "bound_pn",
        &[
            "bound", "pn", "--d", "2", "--k", "2", "--n", "2", "--count", "7",
        ],
    ),
    ok(
        "bound_gen",
        &["bound", "gen", "--d", "2", "--k", "2", "--count", "1"],
    ),
    ok(
        "bound_gen_many_curves",
        &[
            "bound", "gen", "--d", "2", "--k", "2", "--count", "20", "--genus", "0",
        ],
    ),
    ok(
        "bound_cor_plane",
        &[
            "bound", "cor", "--deg-d", "2", "--h0", "6", "--count", "1", "--deg-f", "2", "--genus",
            "0", "--kk", "9", "--kd", "-6", "--chi", "3",
        ],
    ),
    ok(
        "bound_abelian",
        &[
            "bound",
            "abelian",
            "--self-int",
            "6",
            "--n",
            "2",
            "--count",
            "4",
            "--deg-f",
            "3",
            "--deg-d",
            "7",
        ],
    ),
    ok("corpus_slv1", &["corpus", "slv:1"]),
    ok("corpus_slv2", &["corpus", "slv:2"]),
    ok("corpus_pencil", &["corpus", "pencil:x^2 + y;x*y - 1"]),
    ok(
        "parse_slv_component",
        &["parse", "--vars", "x,y,z", "--poly", "x*(y/2 + z)"],
    ),
    ok(
        "parse_slv1_field",
        &[
            "parse",
            "--vars",
            "x,y,z",
            "--field",
            "x*(y/2 + z), y*(x + 2*z), z*(y - 3*x)",
        ],
    ),
    fails(
        "error_syntax",
        &["parse", "--vars", "x,y", "--poly", "x/(y)"],
        2,
    ),
    fails(
        "error_unknown_variable",
        &["parse", "--vars", "x,y", "--poly", "x + w"],
        2,
    ),
    fails(
        "error_zero_denominator",
        &["parse", "--vars", "x,y", "--poly", "x/0"],
        2,
    ),
    fails(
        "error_field_arity",
        &["extactic", "--vars", "x,y,z", "--field", "x, y", "--k", "1"],
        2,
    ),
    fails("error_unknown_flag", &["extactic", "--nonsense"], 2),
    fails(
        "error_pn_hypothesis",
        &[
            "bound", "pn", "--d", "2", "--k", "2", "--n", "2", "--count", "6",
        ],
        3,
    ),
    fails(
        "error_poin_hypothesis",
        &[
            "bound", "poin", "--deg-d", "2", "--h0", "6", "--count", "6", "--deg-f", "2",
        ],
        3,
    ),
    fails(
        "error_abelian_hypothesis",
        &[
            "bound",
            "abelian",
            "--self-int",
            "4",
            "--n",
            "2",
            "--count",
            "2",
            "--deg-f",
            "2",
            "--deg-d",
            "1",
        ],
        3,
    ),
    fails(
        "error_dimension_guard",
        &["extactic", "--field-corpus", "slv:1", "--k", "6"],
        4,
    ),
    Case {
        name: "error_dimension_guard_env",
        args: &["extactic", "--field-corpus", "slv:1", "--k", "1"],
        env: &[("EXTATICA_MAX_DIM", "2")],
        code: 4,
    },
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Exit code plus the stream a case is judged on: stdout for successful
/// runs, stderr otherwise. Panics if a failing run writes to stdout.
pub fn run_case(case: &Case) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_extatica"));
    cmd.args(case.args).env_remove("EXTATICA_MAX_DIM");
    for (k, v) in case.env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    if code == 0 {
        (code, out.stdout)
    } else {
        assert!(
            out.stdout.is_empty(),
            "{}: failing run wrote to stdout",
            case.name
        );
        (code, out.stderr)
    }
}

pub fn expected_output(case: &Case) -> Vec<u8> {
    let path = golden_dir().join(format!("{}.json", case.name));
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
