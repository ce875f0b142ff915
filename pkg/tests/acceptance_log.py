"""Collects one summary line per acceptance criterion for the terminal report."""

LINES: list[str] = []


def record(line: str):
    LINES.append(line)
    print(line)
