from __future__ import annotations

from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
LANGS = ("en", "es", "ru", "fi", "tr")

_acceptance: dict[str, tuple[bool, str]] = {}


def pyphen_dict(name: str) -> Path:
    pyphen = pytest.importorskip("pyphen")
    path = Path(pyphen.__file__).parent / "dictionaries" / name
    if not path.exists():
        pytest.skip(f"{name} not shipped with pyphen")
    return path


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def report():
    """Record one acceptance line: report(key, ok, detail)."""

    def record(key: str, ok: bool, detail: str = "") -> None:
        _acceptance[key] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance, key=lambda k: int(k.split()[0])):
        ok, detail = _acceptance[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}".rstrip())
