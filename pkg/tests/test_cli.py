import subprocess
import sys

import pytest

from lotsizer import PartSpec, PlanningInstance
from lotsizer.cli import main
from lotsizer.data_io import read_plan, write_instance


def test_validate_case_study(capsys):
    assert main(["validate"]) == 0
    assert "OK" in capsys.readouterr().out


def test_solve_writes_plan(tmp_path, capsys):
    assert main(["solve", "--semantics", "pairwise", "--out-dir", str(tmp_path)]) == 0
    plan = read_plan(tmp_path / "plan.csv")
    assert len(plan) > 0
    assert "pairwise" in capsys.readouterr().out


def test_solve_consolidated_explicit_out(tmp_path):
    out = tmp_path / "sub" / "cons.csv"
    assert main(["solve", "--semantics", "consolidated", "--out", str(out)]) == 0
    assert out.exists()


def test_unknown_flag_is_usage_error(capsys):
    assert main(["solve", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_subcommand(capsys):
    assert main([]) == 2


def test_infeasible_instance(tmp_path, capsys):
    inst = PlanningInstance.from_arrays([PartSpec(5, 2, 1.0, 1.0)], [[0, 4, 1]], [[1, 1, 1]])
    write_instance(inst, tmp_path)
    assert main(["solve", "--data-dir", str(tmp_path), "--out-dir", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "part 5" in err and "period 2" in err
    assert main(["validate", "--data-dir", str(tmp_path)]) == 1


def test_strict_prices_fail(capsys):
    assert main(["validate", "--strict-prices"]) == 1
    assert "198 missing price cells" in capsys.readouterr().err


def test_safety_stock_subcommand(tmp_path):
    out = tmp_path / "ss.csv"
    assert main(["safety-stock", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "part_id,period,ss"
    assert len(rows) == 1 + 22 * 12
    assert "3,1,17" in rows and "12,1,201.42" in rows and "8,1,16" in rows


def test_safety_stock_custom_level(tmp_path):
    out = tmp_path / "ss.csv"
    assert main(["safety-stock", "--service-level", "0.975", "--horizon", "2", "--out", str(out)]) == 0
    assert "3,2,20" in out.read_text().splitlines()  # 1.96 * 7.28 * sqrt(2) = 20.18


def test_export_lp(tmp_path):
    out = tmp_path / "model.lp"
    assert main(["export-lp", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("\\") and text.rstrip().endswith("End")


def test_report_formats(tmp_path, capsys):
    assert main(["solve", "--out-dir", str(tmp_path)]) == 0
    capsys.readouterr()
    plan = str(tmp_path / "plan.csv")
    assert main(["report", "--plan", plan, "--format", "csv", "--reference", "case-study"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "part_id,purchasing,ordering,holding,total,reference,delta"
    assert out[-1].startswith("all,") and ",4423918.29," in out[-1]
    assert main(["report", "--plan", plan, "--part", "3", "--format", "text"]) == 0
    assert "Part 3" in capsys.readouterr().out
    assert main(["report", "--plan", plan, "--part", "99"]) == 1


def test_report_rejects_infeasible_plan(tmp_path, capsys):
    p = tmp_path / "plan.csv"
    p.write_text("part_id,need_period,order_period,quantity\n3,3,1,1\n")
    assert main(["report", "--plan", str(p)]) == 1
    assert "coverage" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lotsizer", "validate"], capture_output=True, text=True)
    assert res.returncode == 0 and "OK" in res.stdout
