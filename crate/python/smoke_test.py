"""Smoke test for the pydistinctq extension.

Build first with
    cargo build -p distinctq-python --release --features extension-module
or install the package with maturin. The compiled library is looked up in
PYDISTINCTQ_LIB, then in target/release.
"""

import importlib.machinery
import importlib.util
import json
import os
import sys
from pathlib import Path


def load():
    try:
        import pydistinctq

        return pydistinctq
    except ImportError:
        pass
    root = Path(__file__).resolve().parent.parent
    lib = Path(os.environ.get("PYDISTINCTQ_LIB", root / "target" / "release" / "libpydistinctq.so"))
    if not lib.exists():
        sys.exit(f"extension not found at {lib}; build it first")
    loader = importlib.machinery.ExtensionFileLoader("pydistinctq", str(lib))
    spec = importlib.util.spec_from_loader("pydistinctq", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    dq = load()

    report = json.loads(dq.bound_report("Ch"))
    assert report["d"] == 3 and report["q_lower"]["value"] == 4, report

    v = json.loads(dq.verdict("Ch"))
    assert v["status"] == "known_exception" and v["sum_bound"] == 8, v

    tag = json.loads(dq.classify_tree("Ch"))
    assert tag == {"variant": "double_star_path", "k": 2, "m": 1, "n": 1}, tag
    assert dq.q_tree_complement("Ch") == 4

    cert = json.loads(dq.certify_tree_complement("FhCGG"))
    assert cert["certificate"]["verified"]["status"] == "verified", cert

    q, values = dq.spectrum([[0.0, 1.0], [1.0, 0.0]])
    assert q == 2 and abs(values[0] + 1.0) < 1e-12

    holds, nullity = dq.strong_property([[0.0, 1.0], [1.0, 0.0]])
    assert holds and nullity == 0
    holds, _ = dq.strong_property([[1.0, 0.0], [0.0, 1.0]], mode="smp")
    assert not holds

    assert "hc_ssp" in dq.bank_names()
    assert dq.bank_failures() == []

    survey = json.loads(dq.survey(7))
    assert survey["pairs_after_cycle_filter"] == 24 and survey["passed"], survey["failures"]

    try:
        dq.bound_report("!!")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid graph6 accepted")

    print("pydistinctq smoke test passed")


if __name__ == "__main__":
    main()
