from hypothesis import settings

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")

# filled by test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_addoption(parser):
    parser.addoption("--conjecture-n5", action="store_true", help="also run the n=5 conjecture test (about a minute)")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split(".")[0]), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
