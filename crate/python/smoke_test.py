"""Builds the extension with cargo and exercises it from Python.

Run from the repository root: python3 python/smoke_test.py
"""

import importlib.util
import pathlib
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "keyrecycle-py"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libkeyrecycle_py.so"
    dest = pathlib.Path(tempfile.mkdtemp()) / "keyrecycle.so"
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("keyrecycle", dest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    kr = build()

    fam = kr.HashFamily.mul(2)
    assert fam == kr.HashFamily("mul:m=2")
    assert (fam.key_count, fam.message_count, fam.tag_count) == (4, 4, 4)
    assert Fraction(fam.epsilon()["epsilon"]) == Fraction(1, 4)
    assert Fraction(fam.lift().epsilon("asu2")["epsilon"]) == Fraction(1, 4)
    assert kr.field_mul(2, 0b10, 0b10) == 0b11

    tag = kr.authenticate(fam, 0b11, 0b01, 0b10)
    assert tag == 0
    assert kr.verify(fam, 0b11, 0b01, 0b10, tag) == 0b10
    assert kr.verify(fam, 0b11, 0b01, 0b10, tag ^ 1) is None
    wire = kr.encode_wire(fam, 0b10, tag)
    assert kr.decode_wire(fam, wire) == (0b10, tag)

    stream = kr.KeyStream(fam, 2, [1, 3])
    assert stream.next_key() == (2, 1)
    assert stream.consumed_bits == 2

    wc = kr.uc_worst_case(fam, recycle=True)
    assert wc["distance"] == "1/4"
    assert kr.impersonation_distance(fam, 0, 0) == "1/4"

    rep = kr.attack(fam, 2)
    assert Fraction(rep["success"]) == Fraction(1, 2)
    assert rep["entropy_bits"] == 0.5 and rep["entropy_matches_formula"]
    assert kr.key_entropy(fam, 0)[0] == 2.0

    successes, rate, ok = kr.attack_montecarlo(kr.HashFamily.mul(6), 8, 20000, seed=3)
    assert ok, rate

    bound, ledger = kr.compose(kr.HashFamily.mul(4), 3, 2, "1/100")
    assert bound == "81/200"
    assert ledger.splitlines()[0] == "round,component,epsilon,cumulative"
    assert kr.compose_distance(fam, 2, 2) == "1/1"
    assert kr.compose_distance(fam, 2, 2, "identity") == "0/1"

    try:
        kr.HashFamily("mul:m=99")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid width accepted")
    try:
        kr.HashFamily.mul(16).epsilon()
    except kr.BudgetExceededError:
        pass
    else:
        raise AssertionError("budget not enforced")

    print("python smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
