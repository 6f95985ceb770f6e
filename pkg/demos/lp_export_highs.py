"""Write the case-study MIP as an LP file and hand it to HiGHS.

Needs ``highspy`` (installed with the ``test`` extra)."""

import tempfile
from pathlib import Path

import highspy

from lotsizer import build, export_lp, solve_pairwise
from lotsizer.data_io import load_case_study
from lotsizer.mip_builder import evaluate_objective

instance = load_case_study()
model = build(instance)
print(f"{model.n_vars} variables ({model.n_pairs} binaries), {model.n_rows} rows, big-M {model.big_m:g}")

path = Path(tempfile.mkdtemp()) / "case_study.lp"
export_lp(model, path)

h = highspy.Highs()
h.setOptionValue("output_flag", False)
h.readModel(str(path))
h.run()
highs_obj = h.getInfo().objective_function_value

ours = evaluate_objective(model, solve_pairwise(instance)).total
print(f"HiGHS {highs_obj:,.2f}   closed form {ours:,.2f}")
