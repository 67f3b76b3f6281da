import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    reports = getattr(terminalreporter.config, "_acceptance_reports", None)
    if not reports:
        return
    for title, report in reports:
        terminalreporter.section(title)
        for line in report.lines():
            terminalreporter.write_line(line)
