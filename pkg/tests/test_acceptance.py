"""Acceptance checks: one test per criterion, one PASS/FAIL line per claim.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from ibc.experiments import run

# criterion number, experiment, runtime limit in seconds (None: no limit stated)
CRITERIA = [
    (1, "recovery-optimality", 60.0),
    (2, "homogeneity", 10.0),
    (3, "nonadaptive-projection", None),
    (4, "relative-error", None),
    (5, "kashin", 120.0),
    (6, "bisection", None),
    (7, "product-space", None),
    (8, "kurtosis", None),
    (9, "sobolev-cone", 60.0),
    (10, "rescaling", None),
    (11, "korobov", 120.0),
]


@pytest.mark.parametrize("number, name, limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, name, limit):
    res = run(name)
    for c in res.claims:
        print(f"criterion {number:2d} {name}: {c.line()}")
    if limit is not None:
        ok = res.runtime <= limit
        print(f"criterion {number:2d} {name}: [{'PASS' if ok else 'FAIL'}] runtime: "
              f"observed {res.runtime:.2f} s <= {limit:g} s")
        assert ok
    failed = [c.name for c in res.claims if not c.passed]
    assert not failed, failed
