"""How safety stock moves with service level, demand spread and lead time."""

from lotsizer import ServicePolicy, safety_stock
from lotsizer.data_io import case_study_dir, read_parts
from lotsizer.safety_stock import part_safety_stock

parts = read_parts(case_study_dir() / "parts.csv")

print("part  uom   sigma  L   95%     99%")
for p in parts:
    at95 = part_safety_stock(p, ServicePolicy())
    at99 = part_safety_stock(p, ServicePolicy(service_level=0.99))
    print(f"{p.part_id:4d}  {p.uom.value:4s} {p.demand_sigma:6.2f}  {p.lead_time}  {at95:6g}  {at99:6g}")

# Doubling sigma doubles the buffer; lead time enters as a square root.
for lt in (1, 2, 4, 9):
    print(f"L={lt}: {safety_stock(1.645, 10.0, lt, 'none'):.3f}")
