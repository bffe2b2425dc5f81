"""The verified inequality pipeline: the 16-row table and derived constants.

The sign of the ray integral N_t(1,0) = int r^(-3/2) g(r^(3/2) N) dr is
controlled by a telescoping lower bound built from the profile with slope
nu0 = 1.86 and the weight g(z) = 2z - |z|^(4/3) z.  This script rebuilds the
whole table, prints it next to the reference values, and evaluates every
derived check: the main margin, the capped upper integral, the partial-sum
constant C1, and the linear push-up bound.
"""

from exwave import verify

rows, summary, prof = verify.build_table1()

print("  k      range      y_k       lambda_k   min g     product   contribution")
for row in rows:
    print(f" {row.k:2d}  {row.z_lo:4.2f}-{row.z_hi:5.3f}  {row.y_k:.6f}  "
          f"{row.lambda_k:.6f}  {row.min_g:.6f}  {row.product_k:.6f}  {row.contribution_k:.6f}")
print(f"\n total = {summary.total:.6f}   (reference 0.792065)")
print(f" sup phi = {summary.sup_phi:.6f}, y0 = {summary.y0:.6f}, "
      f"kappa0 = {summary.kappa0:.6f}, g- = {summary.g_minus:.6f}")

print("\n=== derived checks ===")
item = verify.check_main_inequality(rows, summary)
print(f"main inequality margin: total - g- = {item.computed:.6f} > 0.25  -> {item.passed}")

iv, ib, value = verify.check_upper_integral(prof)
print(f"capped upper integral = {value:.6f}  (reference 1.85024, strictly < 1.86)"
      f"  -> {iv.passed and ib.passed}")

c1, neut, third = verify.check_C1(rows, summary)
print(f"C1 = {c1.computed:.6f} (reference 0.184221); "
      f"C1/3 = {third.computed:.6f} > 0.055 -> {third.passed}; "
      f"rows 1-11 sum = {neut.computed:.6f} >= g- -> {neut.passed}")

pv, pf, po = verify.check_pushup()
print(f"push-up integral I* = {pv.computed:.6f} (reference 0.604556); "
      f"(99/50) I* = {pf.computed:.5f} > 1.1 -> {pf.passed}")

print("\n=== full report ===")
report = verify.run_all()
for it in report.items:
    print(f"  [{'PASS' if it.passed else 'FAIL'}] {it.name}: {it.computed:.8g}")
print("overall:", "PASS" if report.overall else "FAIL")
