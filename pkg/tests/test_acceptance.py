"""Acceptance matrix: one PASS/FAIL line per criterion.

Tolerances are pinned inside :mod:`homred.suite`; ``RunConfig(tol=None)``
keeps them.  The lines are collected in ``SUMMARY`` and printed at the end
of the session by ``conftest.py``.
"""

import pytest

from homred.suite import CRITERIA, RunConfig, run_criterion

CONFIG = RunConfig(points=20, seed=0)

SUMMARY: dict[int, list[str]] = {}

TITLES = {
    1: "solvable tensor on real hyperbolic space",
    2: "four-dimensional hyperbolic family",
    3: "Hopf S3 over S2",
    4: "Hopf S7 over CP3, u(4) tensor",
    5: "Hopf S7 over CP3, sp(2)+u(1) family",
    6: "fibre geometry",
    7: "equivariant map dimensions",
    8: "Sasakian suite",
    9: "property suites",
}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    results = run_criterion(k, CONFIG)
    failed = [r for r in results if not r.passed]
    status = "PASS" if not failed else "FAIL"
    lines = [f"criterion {k} {status}: {TITLES[k]} ({len(results) - len(failed)}/{len(results)} checks)"]
    for r in failed:
        if r.residual is not None:
            shown = f"residual {r.residual:.3e} > {r.tolerance:.1e}"
        else:
            shown = f"observed {r.observed!r}, expected {r.expected!r}"
        lines.append(f"    failed {r.name}: {shown} {r.detail}".rstrip())
    SUMMARY[k] = lines
    print("\n".join(lines))
    assert results
    assert not failed, ", ".join(r.name for r in failed)
