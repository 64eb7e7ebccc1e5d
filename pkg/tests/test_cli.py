from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from endoscope.chars import AddChar
from endoscope.cli import RunConfig, emit_kl_table, main, run_suite
from endoscope.gf import make_tower


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_default_suite_passes():
    code, text = run_suite(RunConfig())
    assert code == 0
    payload = json.loads(text)
    assert payload["schema"] == 1
    assert all(r["outcome"] in ("pass", "skipped") for r in payload["reports"])


def test_suite_rejects_even_characteristic(capsys):
    code, _ = run(capsys, "suite", "--p", "2")
    assert code == 2


def test_term_cap_produces_skipped_rows():
    code, text = run_suite(RunConfig(term_cap=10))
    payload = json.loads(text)
    skipped = [r for r in payload["reports"] if r["outcome"] == "skipped"]
    assert code == 0
    assert any(r.get("reason") == "term cap exceeded" for r in skipped)


def test_suite_deterministic_across_threads():
    a = run_suite(RunConfig(jobs=1))
    b = run_suite(RunConfig(jobs=3))
    assert a == b


def test_kl_table_rows():
    tw = make_tower(3)
    text = emit_kl_table(tw, [(1, 0)], AddChar(tw.base, 1))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 2
    assert sum(r["Kl^1,0"].endswith("*") for r in rows) == 2
    tw5 = make_tower(5)
    grid = [(n, m) for n in range(3) for m in range(3)]
    rows = list(csv.DictReader(io.StringIO(emit_kl_table(tw5, grid, AddChar(tw5.base, 1)))))
    assert len(rows) == 4 and len(rows[0]) == 10


def test_sums_kl_command(capsys):
    code, out = run(capsys, "sums", "kl", "--q", "3", "--n", "1", "--a", "2")
    assert code == 0
    value = json.loads(out)["reports"][0]["values"]["value"]
    assert value["coeffs"] == [-2, 0]


def test_char_both_methods(capsys):
    code, out = run(capsys, "char", "gl-odd", "--q", "3", "--comps", "1,1,x", "--zeta", "-1")
    assert code == 0
    vals = json.loads(out)["reports"][0]["values"]
    assert vals["equal"] is True


def test_char_nongeneric_is_config_error(capsys):
    code, _ = run(capsys, "char", "gl-odd", "--q", "3", "--comps", "1,1,1")
    assert code == 2


def test_padic_components(capsys):
    code, out = run(capsys, "padic", "components", "--witness", "one-plus-phi", "--N", "3", "--u", "2")
    assert code == 0
    assert json.loads(out)["reports"][0]["values"]["generic"] is True


def test_padic_matrix_input(capsys):
    code, out = run(capsys, "padic", "classify", "--matrix", "[[1,0],[0,1]]")
    assert code == 0
    assert json.loads(out)["reports"][0]["values"]["level"] == "I++"


def test_endo_commands(capsys):
    assert run(capsys, "endo", "verify-ecr", "--q", "3", "--b", "2", "--omega-prime", "j=1")[0] == 0
    assert run(capsys, "endo", "parity", "--q", "5", "--parity", "odd")[0] == 0
    code, out = run(capsys, "endo", "lift", "--q", "3", "--kappa", "-1", "--format", "text")
    assert code == 0 and out.startswith("PASS")


def test_verify_appendix_command(capsys):
    assert run(capsys, "sums", "verify-appendix", "--q", "3", "--max-total", "2")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "endoscope", "endo", "uniqueness", "--q", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["reports"][0]["outcome"] == "pass"


@pytest.mark.parametrize("argv", [["sums", "kl", "--q", "4"], ["sums", "kl", "--q", "6"]])
def test_bad_field_size(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_short_forms_and_prime_flags(capsys, tmp_path):
    assert run(capsys, "lift", "--parity", "even", "--n", "2", "--q", "3", "--b", "2", "--omega-prime", "j=1", "--kappa", "1")[0] == 0
    assert run(capsys, "verify", "ecr", "--parity", "odd", "--n", "1", "--q", "3", "--all")[0] == 0
    code, out = run(capsys, "sums", "kl", "--p", "3", "--f", "2", "--n", "1", "--a", "x")
    assert code == 0 and json.loads(out)["reports"][0]["inputs"]["q"] == 9
    table = tmp_path / "kl.csv"
    assert run(capsys, "sums", "verify-appendix", "--p", "3", "--max-n", "1", "--max-total", "1", "--table-csv", str(table))[0] == 0
    assert len(table.read_text().splitlines()) == 3
