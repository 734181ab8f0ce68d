import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import settings  # noqa: E402

settings.register_profile("lab", max_examples=40, deadline=None)
settings.load_profile("lab")


def pytest_terminal_summary(terminalreporter):
    from verdicts import VERDICTS

    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[n])
