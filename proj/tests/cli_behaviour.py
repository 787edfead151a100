"""Exit codes, exact outputs, determinism and output formats of the arith_mm tool.

usage: cli_behaviour.py <arith_mm binary> <samples dir>
"""

import json
import os
import subprocess
import sys


def run(exe, args, env=None):
    full_env = dict(os.environ)
    full_env.pop("ARITH_MM_CAPS", None)
    if env:
        full_env.update(env)
    return subprocess.run([exe, *args], capture_output=True, text=True, env=full_env)


def main() -> int:
    exe, samples = sys.argv[1:3]
    s = lambda name: os.path.join(samples, name)
    failures = []

    def check(label, cond, detail=""):
        print(("ok    " if cond else "FAIL  ") + label + ("" if cond else f": {detail}"))
        if not cond:
            failures.append(label)

    # exact reports
    p = run(exe, ["jacobsthal", "30"])
    check("jacobsthal 30", p.returncode == 0 and p.stdout == '{"d":30,"g":6,"kanold":8}\n', p.stdout)
    p = run(exe, ["coprime-shift", "2", "3", "10"])
    check("coprime-shift 2 3 10", p.returncode == 0 and p.stdout == '{"k":3,"value":11,"bound":4}\n', p.stdout)
    p = run(exe, ["lang-orbit", "--N", "5", "--g", "1", "--c", "2", "--point", "1,0"])
    check("lang-orbit squares mod 5", p.returncode == 0 and json.loads(p.stdout)["orbit"] == [[1, 0], [4, 0]], p.stdout)
    p = run(exe, ["delta-bound", "--D", "2", "--Delta", "1", "--c", "1"])
    rep = json.loads(p.stdout) if p.returncode == 0 else {}
    check("delta-bound f = 484 as a string", rep.get("f") == "484", p.stdout)
    check("delta-bound exponents", rep.get("exponents") == {"lambda": "0", "delta": "2", "delta_prime": "0"}, p.stdout)
    p = run(exe, ["delta-bound", "--D", "1", "--Delta", "1", "--c", "1"])
    check("delta-bound threshold 7", p.returncode == 0 and json.loads(p.stdout)["final_delta"] == "7", p.stdout)
    p = run(exe, ["sigma-set", "--D", "1", "--d", "2"])
    check("sigma-set odd residues", p.returncode == 0 and json.loads(p.stdout)["elements"] == ["1", "3", "5", "7", "9", "11", "13"],
          p.stdout)
    p = run(exe, ["idempotent-lift", "--input", s("lift_matrix.json")])
    check("idempotent-lift v = 0", p.returncode == 0 and json.loads(p.stdout)["v"] == [[["0"]]], p.stdout)
    p = run(exe, ["gl-verify", "--input", s("gl_permutation.json")])
    check("gl-verify all checks", p.returncode == 0 and json.loads(p.stdout)["bound_satisfied"] is True, p.stdout)

    # exit codes and one-line machine-readable errors
    def expect_error(label, args, code, kind, env=None):
        p = run(exe, args, env)
        lines = p.stderr.strip().splitlines()
        ok = p.returncode == code and p.stdout == "" and len(lines) == 1
        if ok:
            try:
                ok = json.loads(lines[0])["error"] == kind
            except (ValueError, KeyError):
                ok = False
        check(label, ok, f"exit {p.returncode}, stderr {p.stderr!r}")

    expect_error("jacobsthal 0 -> 1", ["jacobsthal", "0"], 1, "validation")
    expect_error("non-numeric argument -> 1", ["jacobsthal", "x"], 1, "validation")
    expect_error("unknown subcommand -> 1", ["frobnicate"], 1, "validation")
    expect_error("coprime-shift without solution -> 1", ["coprime-shift", "2", "2", "4"], 1, "validation")
    expect_error("non-prime p -> 1", ["delta-bound", "--D", "1", "--Delta", "1", "--c", "1", "--p", "4"], 1, "validation")
    expect_error("malformed input file -> 1", ["gl-verify", "--input", s("does_not_exist.json")], 1, "validation")
    expect_error("threshold unreachable -> 2", ["delta-bound", "--D", "1", "--Delta", "3", "--c", "1"], 2, "cap_exceeded")
    expect_error("ambient above cap -> 2", ["lang-orbit", "--N", "13", "--g", "2", "--point", "1,0,0,0"], 2,
                 "cap_exceeded")
    expect_error("ARITH_MM_CAPS lowers ambient cap -> 2", ["lang-orbit", "--N", "5", "--g", "1", "--point", "1,0"], 2,
                 "cap_exceeded", {"ARITH_MM_CAPS": "10"})
    expect_error("--caps lowers group cap -> 2", ["gl-verify", "--input", s("gl_diagonal.json"), "--caps", ",3"], 2,
                 "cap_exceeded")
    expect_error("malformed ARITH_MM_CAPS -> 1", ["jacobsthal", "3"], 1, "validation", {"ARITH_MM_CAPS": "a,b"})
    p = run(exe, ["lang-orbit", "--N", "13", "--g", "2", "--point", "1,0,0,0"], {"ARITH_MM_CAPS": "30000"})
    check("ARITH_MM_CAPS raises ambient cap", p.returncode == 0, p.stderr)

    # determinism
    for args in (["special-closure", "--input", s("closure_z6.json")],
                 ["delta-bound", "--D", "3", "--Delta", "2", "--c", "1", "--d", "10"],
                 ["selftest", "--only", "5,6"]):
        a, b = run(exe, args), run(exe, args)
        check("byte-identical: " + " ".join(args[:1]), a.returncode == 0 and a.stdout == b.stdout, a.stderr)

    # formats
    p = run(exe, ["--format", "csv", "jacobsthal", "30"])
    check("csv", p.stdout == "key,value\nd,30\ng,6\nkanold,8\n", p.stdout)
    p = run(exe, ["jacobsthal", "30", "--format", "text"])
    check("text after subcommand", p.stdout == "d: 30\ng: 6\nkanold: 8\n", p.stdout)
    p = run(exe, ["--format", "yaml", "jacobsthal", "30"])
    check("unknown format -> 1", p.returncode == 1, p.stderr)

    print(f"{len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
