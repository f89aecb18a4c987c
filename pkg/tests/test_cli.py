"""Tests for the command line interface and the text reports."""

import pytest
from click.testing import CliRunner
from gmpy2 import mpq

from quartic_bitangents.cli import main
from quartic_bitangents.curve import dualize
from quartic_bitangents.fixtures import FIXTURE_NAMES, load_all_fixtures, load_fixture
from quartic_bitangents.locus import bitangent_locus
from quartic_bitangents.quartic import newton_subdivision
from quartic_bitangents import report as rpt


@pytest.fixture()
def runner():
    return CliRunner()


class TestFixtures:
    def test_all_six_load_and_are_smooth(self):
        fixtures = load_all_fixtures()
        assert len(fixtures) == 6
        for q in fixtures:
            assert is_smooth(q)

    def test_unknown_fixture_rejected(self):
        from quartic_bitangents.errors import UnsupportedInputError
        from quartic_bitangents.fixtures import load_fixture

        with pytest.raises(UnsupportedInputError):
            load_fixture("no-such-curve")


def is_smooth(q):
    from quartic_bitangents.quartic import is_tropically_smooth

    return is_tropically_smooth(newton_subdivision(q))


class TestTropicalize:
    def test_fixture_by_name(self, runner):
        result = runner.invoke(main, ["tropicalize", "one-oval"])
        assert result.exit_code == 0
        assert "smooth true" in result.output
        assert "cells 16" in result.output
        assert "genus 3" in result.output

    def test_svg_written(self, runner, tmp_path):
        out = tmp_path / "curve.svg"
        result = runner.invoke(main, ["tropicalize", "one-oval", "--svg", str(out)])
        assert result.exit_code == 0
        text = out.read_text()
        assert text.startswith("<svg")
        assert text.rstrip().endswith("</svg>")

    def test_file_path_input(self, runner, tmp_path):
        from quartic_bitangents.quartic import serialize_quartic

        doc = tmp_path / "c.qrt"
        doc.write_text(serialize_quartic(load_fixture("one-oval")))
        result = runner.invoke(main, ["tropicalize", str(doc)])
        assert result.exit_code == 0

    def test_missing_file_exit_2(self, runner):
        result = runner.invoke(main, ["tropicalize", "/does/not/exist.qrt"])
        assert result.exit_code == 2

    def test_malformed_document_exit_2(self, runner, tmp_path):
        doc = tmp_path / "bad.qrt"
        doc.write_text("coefficient 9 9 1 0\n")
        result = runner.invoke(main, ["tropicalize", str(doc)])
        assert result.exit_code == 2


class TestClasses:
    def test_seven_classes_reported(self, runner):
        result = runner.invoke(main, ["classes", "one-oval"])
        assert result.exit_code == 0
        assert "classes 7" in result.output

    def test_svg_written(self, runner, tmp_path):
        out = tmp_path / "classes.svg"
        result = runner.invoke(main, ["classes", "one-oval", "--svg", str(out)])
        assert result.exit_code == 0
        assert "<svg" in out.read_text()


class TestBitangents:
    def test_twenty_eight_lines(self, runner):
        result = runner.invoke(main, ["bitangents", "one-oval", "--t", "1/2"])
        assert result.exit_code == 0
        assert "bitangents 28" in result.output
        assert "real 4" in result.output

    def test_invalid_t_exit_2(self, runner):
        result = runner.invoke(main, ["bitangents", "one-oval", "--t", "3/2"])
        assert result.exit_code == 2
        result = runner.invoke(main, ["bitangents", "one-oval", "--t", "abc"])
        assert result.exit_code == 2


class TestTopology:
    def test_one_oval(self, runner):
        result = runner.invoke(
            main, ["topology", "one-oval", "--t", "1/2", "--grid", "16"]
        )
        assert result.exit_code == 0
        assert "ovals 1" in result.output
        assert "nested false" in result.output


class TestReports:
    def test_subdivision_report_fields(self):
        q = load_fixture("one-oval")
        sub = newton_subdivision(q)
        text = rpt.subdivision_report(q, sub)
        lines = text.splitlines()
        assert lines[0] == "name one-oval"
        assert lines[1] == "smooth true"
        assert lines[2] == "cells 16"
        assert sum(1 for l in lines if l.startswith("cell ")) == 16

    def test_classes_report_deterministic(self):
        q = load_fixture("one-oval")
        curve = dualize(newton_subdivision(q), q)
        classes = bitangent_locus(curve)
        assert rpt.classes_report(q, classes) == rpt.classes_report(q, classes)

    def test_topology_report_fields(self):
        from quartic_bitangents.avoidance import TopologyReport

        q = load_fixture("one-oval")
        top = TopologyReport(2, 3, (1, 2), True)
        text = rpt.topology_report(q, mpq(1, 2), top)
        assert "ovals 2" in text
        assert "nested true" in text
        assert "depths 1 2" in text
