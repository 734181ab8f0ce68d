"""PASS/FAIL lines of the acceptance criteria, collected for the terminal summary."""
VERDICTS: dict[int, str] = {}


def record(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    VERDICTS[number] = line
    print(line)
    return line
