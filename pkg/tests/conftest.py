from __future__ import annotations

from hypothesis import HealthCheck, settings

from acceptance_log import RESULTS

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(RESULTS, key=lambda s: int(s[1:])):
        verdict, title = RESULTS[label]
        terminalreporter.write_line(f"{label:<4} {verdict}  {title}")
