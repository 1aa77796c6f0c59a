import helpers
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[
        HealthCheck.too_slow,
        HealthCheck.data_too_large,
        HealthCheck.filter_too_much,
        HealthCheck.function_scoped_fixture,
    ],
)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not helpers.GATE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(helpers.GATE):
        ok, detail = helpers.GATE[name]
        verdict = "PASS" if ok else "FAIL"
        line = f"{verdict}  {name}"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
