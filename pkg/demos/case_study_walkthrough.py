"""Solve the bundled 22-part trailer case study and compare against the
published per-part totals."""

from lotsizer import CostSemantics, check_plan, render_part_report, render_total_report, solve
from lotsizer.data_io import case_study_reference, load_case_study

instance = load_case_study()
print(f"{instance.n_parts} parts over {instance.horizon} weeks\n")

# Each need period is bought from its cheapest legal order period,
# price plus holding, with one ordering charge per (need, order) pair.
plan = solve(instance, CostSemantics.PAIRWISE)
assert check_plan(instance, plan).ok

print(render_part_report(instance, plan, 3).to_text())

per_part, grand = case_study_reference()
report = render_total_report(instance, plan, CostSemantics.PAIRWISE, per_part, grand)
print(report.to_text())
print(f"grand total {report.grand_total:,.2f}, published {grand:,.2f}, delta {report.grand_delta:+,.2f}")
