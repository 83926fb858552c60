"""Walk through priority-weight derivation on a six-criterion matrix.

Builds a pairwise comparison matrix from its upper triangle, derives the
priority vector by power iteration, and prints the consistency diagnostics
under both shipped random-index tables.
"""

from mceval import ahp

labels = ["Helpfulness", "Relevance", "Accuracy", "Level of Details",
          "Academic Standard", "Experimental Details"]

# Upper triangle of the comparison matrix; the lower triangle is filled in
# with reciprocals automatically.
upper = {
    (0, 1): 1 / 3, (0, 2): 1, (0, 3): 2, (0, 4): 1 / 3, (0, 5): 1 / 3,
    (1, 2): 1, (1, 3): 4, (1, 4): 3, (1, 5): 1 / 2,
    (2, 3): 1, (2, 4): 1, (2, 5): 1,
    (3, 4): 1 / 2, (3, 5): 1 / 2,
    (4, 5): 1,
}

matrix = ahp.JudgmentMatrix.from_upper_triangle(labels, upper)
weights, report = ahp.derive_weights(matrix)

print("priority weights:")
for label, w in weights.as_dict().items():
    print(f"  {label:22s} {w:.4f}")

print(f"\nlambda_max = {report.lambda_max:.4f}  "
      f"(converged in {report.iterations} iterations)")
print(f"CI = {report.ci:.5f}")

for name, table in (("Saaty", ahp.SAATY_RI), ("alternate", ahp.ALTERNATE_RI)):
    cfg = ahp.AhpConfig(ri_table=dict(table))
    cons = ahp.consistency(report.lambda_max, matrix.n, cfg)
    verdict = "acceptable" if cons.passed else "too inconsistent"
    print(f"CR = {cons.cr:.4f} under the {name} RI table ({verdict})")
