import contextlib
import logging
import sys
from typing import Iterable, Iterator, List, Optional, TextIO

from models.schemas import CheckReport
from utils.kernel import Code, format_code, read_prefix


@contextlib.contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """The --out target: a file, or stdout for None and "-"."""
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8") as f:
        yield f
    logging.info(f"Output written to {path}")


@contextlib.contextmanager
def open_input(path: Optional[str]) -> Iterator[TextIO]:
    """The --input source: a file, or stdin for None and "-". Lines are read on demand."""
    if path is None or path == "-":
        yield sys.stdin
        return
    with open(path, "r", encoding="utf-8") as f:
        yield f


def load_prefix(path: Optional[str]) -> List[Code]:
    """Read a whole name prefix in the one-natural-per-line format."""
    with open_input(path) as lines:
        return read_prefix(lines)


def write_entry(out: TextIO, value: Code) -> None:
    out.write(f"{format_code(value)}\n")
    out.flush()


def render_report(report: CheckReport) -> str:
    return "".join(f"{line}\n" for line in report.lines())


def summarize(report: CheckReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return (f"{status} {report.subject}: {len(report.violations)} violations, "
            f"{report.checked} checked, {report.skipped} skipped")


def write_reports(out: TextIO, reports: Iterable[CheckReport]) -> bool:
    """Write every violation line and log one summary per report. True iff all passed."""
    passed = True
    for report in reports:
        out.write(render_report(report))
        logging.info(summarize(report))
        passed = passed and report.passed
    out.flush()
    return passed
