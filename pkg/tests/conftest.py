import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile(
    "ci", deadline=None, max_examples=400, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rationals(max_num=40, max_den=12, allow_zero=True):
    low = 0 if allow_zero else 1
    return st.builds(Fraction, st.integers(low, max_num), st.integers(1, max_den))


def ring_costs(min_n=1, max_n=6, **kw):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(rationals(**kw), min_size=n + 1, max_size=n + 1))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "::test_criterion_" not in rep.nodeid:
                continue
            detail = dict(rep.user_properties).get("detail")
            if detail is None:
                continue
            num = int(rep.nodeid.split("::test_criterion_")[1][:2])
            lines.append((num, f"criterion {num}: {'PASS' if rep.passed else 'FAIL'}  {detail}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
