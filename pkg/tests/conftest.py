from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from homolog.algebra import build_algebra
from homolog.corpus import load_corpus

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

P = 32003


@pytest.fixture(scope="session")
def corpus():
    """The built-in corpus, loaded once; resolutions are cached on its modules."""
    return {inst.name: inst for inst in load_corpus("builtin:paper-examples")}


@pytest.fixture(scope="session")
def rings():
    """Small rings reused across module tests."""
    return {
        "dual": build_algebra(0, ["x"], ["x^2"]),
        "ci22": build_algebra(0, ["x", "y"], ["x^2", "y^2"]),
        "m2": build_algebra(P, ["x", "y"], ["x^2", "x*y", "y^2"]),
        "sq2": build_algebra(P, ["x1", "x2", "y"], ["x1^2", "x1*x2", "x2^2", "y^2"]),
        "ci23": build_algebra(P, ["x", "y"], ["x^2", "y^3"]),
        "gf2": build_algebra(2, ["x", "y"], ["x^2", "y^2"]),
    }


ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    """One PASS/FAIL line per acceptance criterion, echoed now and in the summary."""
    ACCEPTANCE.append((criterion, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")
