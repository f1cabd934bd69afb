"""Tests for the command-line front end."""

from __future__ import annotations

import json
import logging

import pytest

from app import logging_setup
from app.api.cli import main, render_text
from app.services.smooth_service import CurveContext
from tests.conftest import FERMAT


@pytest.fixture(autouse=True)
def _reset_logging(monkeypatch):
    """Handlers bound to a captured stderr must not outlive the test."""
    root = logging.getLogger()
    before = list(root.handlers)
    monkeypatch.setattr(logging_setup, "_CONFIGURED", False)
    yield
    for handler in root.handlers[:]:
        if handler not in before:
            root.removeHandler(handler)


def _run(capsys, *argv: str) -> tuple[int, dict]:
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


class TestReports:
    """Successful commands print one JSON document."""
    def test_symprod(self, capsys) -> None:
        """Schema tag and exact integers."""
        code, data = _run(capsys, "symprod", "--k", "3")
        assert code == 0
        assert data["schema"] == 1
        assert data["matrix"][1][1] == 21
        assert data["genus_gamma"] == 4

    def test_symprod_text(self, capsys) -> None:
        """--text renders the table followed by key/value lines."""
        assert main(["symprod", "--k", "3", "--text"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].split() == ["H", "Gamma", "K", "Delta"]
        assert "genus_gamma:" in out
        assert "schema" not in out

    def test_smooth_reports_singular_curve(self, capsys) -> None:
        """The smoothness command succeeds and carries the verdict."""
        code, data = _run(capsys, "smooth", "--curve", FERMAT)
        assert code == 0
        assert data["smooth"] is False
        assert len(data["witnesses"]) == 2

    def test_grid_test_from_file(self, capsys, tmp_path, grid_cubic: CurveContext) -> None:
        """@path reads the curve from a file."""
        path = tmp_path / "curve.txt"
        path.write_text(grid_cubic.h.to_text() + "\n", encoding="utf-8")
        code, data = _run(capsys, "grid-test", "--curve", f"@{path}")
        assert code == 0
        assert data["is_grid"] is True

    def test_h0(self, capsys, grid_cubic: CurveContext) -> None:
        """Dimension next to the Riemann-Roch value."""
        code, data = _run(capsys, "h0", "--curve", grid_cubic.h.to_text(), "--a", "3", "--b", "0")
        assert code == 0
        assert data["dimension"] == data["riemann_roch"] == 6

    def test_secant_rank(self, capsys) -> None:
        """Rank 4k."""
        code, data = _run(capsys, "secant-rank", "--k", "3", "--seed", "1")
        assert code == 0
        assert data["rank"] == data["expected"] == 12

    def test_sample_grid(self, capsys) -> None:
        """Seeded grid samples over F_101."""
        code, data = _run(capsys, "sample-grid", "--k", "3", "--count", "2", "--field", "Fp:101", "--seed", "4")
        assert code == 0
        assert data["field"] == "Fp:101"
        assert [s["is_grid"] for s in data["samples"]] == [True, True]


class TestErrors:
    """Failures print an error document and exit non-zero."""
    def test_parse_error(self, capsys) -> None:
        """Exit 2 with the position."""
        code, data = _run(capsys, "smooth", "--curve", "x0 +")
        assert code == 2
        assert data["error"]["type"] == "ParseError"
        assert data["error"]["detail"]["position"] == 4

    def test_not_smooth(self, capsys) -> None:
        """Torsion on a singular curve exits 3."""
        code, data = _run(capsys, "torsion", "--curve", FERMAT, "--nmax", "3")
        assert code == 3
        assert data["error"]["type"] == "NotSmooth"

    @pytest.mark.parametrize("argv", [["symprod"], ["no-such-command"], ["symprod", "--k", "three"]])
    def test_usage_error(self, capsys, argv: list[str]) -> None:
        """Bad arguments exit 2."""
        code, data = _run(capsys, *argv)
        assert code == 2
        assert data["error"]["type"] == "UsageError"

    def test_grilled_without_torsion(self, capsys, random_cubic: CurveContext) -> None:
        """The searched orders are listed."""
        code, data = _run(capsys, "grilled", "--curve", random_cubic.h.to_text(), "--nmax", "4")
        assert code == 1
        assert data["error"]["type"] == "NoTorsionSection"
        assert data["error"]["detail"]["tried"] == [3, 4]

    def test_invalid_prime(self, capsys) -> None:
        """Survey primes must exceed 2k."""
        code, data = _run(capsys, "survey-fp", "--p", "5", "--trials", "1")
        assert code == 1
        assert data["error"]["type"] == "InvalidPrime"

    def test_missing_file(self, capsys, tmp_path) -> None:
        """An unreadable @path is a usage error."""
        code, data = _run(capsys, "smooth", "--curve", f"@{tmp_path / 'missing.txt'}")
        assert code == 2
        assert data["error"]["detail"]["path"].endswith("missing.txt")

    def test_text_error(self, capsys) -> None:
        """--text prints the error as key/value lines."""
        assert main(["smooth", "--curve", "x0 +", "--text"]) == 2
        out = capsys.readouterr().out
        assert "type:" in out
        assert "ParseError" in out


class TestRenderText:
    """Plain-text rendering."""
    def test_alignment(self) -> None:
        """Keys are padded to a common width; nested mappings are indented."""
        lines = render_text({"schema": 1, "k": 3, "smooth": True, "grid": {"rank": 2}})
        assert lines == ["k:      3", "smooth: yes", "grid:", "  rank: 2"]
