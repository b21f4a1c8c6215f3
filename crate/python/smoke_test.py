"""Smoke test for the trackcoh_py extension.

Builds the cdylib with cargo, copies it next to a temporary import path as
trackcoh_py.so and drives each entry point on the shipped fixtures.
Run with: pytest python/smoke_test.py
"""

import importlib
import json
import pathlib
import shutil
import subprocess
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="module")
def trackcoh(tmp_path_factory):
    subprocess.run(["cargo", "build", "-p", "trackcoh-py"], cwd=ROOT, check=True)
    built = ROOT / "target" / "debug" / "libtrackcoh_py.so"
    dest = tmp_path_factory.mktemp("ext")
    shutil.copy(built, dest / "trackcoh_py.so")
    sys.path.insert(0, str(dest))
    try:
        yield importlib.import_module("trackcoh_py")
    finally:
        sys.path.remove(str(dest))


def test_validate(trackcoh):
    code, report, summary = trackcoh.validate(str(FIXTURES / "t1.json"))
    assert code == 0
    assert json.loads(report)["status"] == "ok"
    assert summary.startswith("validate: ok")
    code, _, _ = trackcoh.validate(str(FIXTURES / "corrupt" / "chain_not_discrete.json"))
    assert code == 1


def test_cohomology_of_involution(trackcoh):
    code, report, _ = trackcoh.cohomology(str(FIXTURES / "aut2.json"), "const:Z/2", degree=1, depth=2, bound=1)
    assert code == 0
    groups = json.loads(report)["results"]["groups"]
    assert [g["group"] for g in groups] == ["Z/2", "Z/2"]


def test_truncation_and_degree_guard(trackcoh):
    assert trackcoh.resolve(str(FIXTURES / "square.json"), depth=2, bound=1)[0] == 3
    assert trackcoh.cohomology(str(FIXTURES / "t1.json"), "const:Z", degree=3, depth=2)[0] == 4
    with pytest.raises(ValueError):
        trackcoh.cohomology(str(FIXTURES / "t1.json"), "const:Z", kind="other")


def test_les_fault_detected(trackcoh):
    path = str(FIXTURES / "aut2.json")
    assert trackcoh.les(path, "const:Z", depth=3, bound=1)[0] == 0
    assert trackcoh.les(path, "const:Z", depth=3, bound=1, fault="double")[0] == 1
