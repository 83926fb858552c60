"""Bibliographic export to instruction pairs.

Parses a tab-separated export, keeps keyword-matched records, drops
duplicates, and prints the resulting title -> abstract pairs plus a stats
summary.
"""

from pathlib import Path

from mceval import corpus

ROOT = Path(__file__).resolve().parents[1]
SAMPLE = ROOT / "tests" / "fixtures" / "wos_sample.txt"

records, diagnostics = corpus.parse_records(SAMPLE)
for diag in diagnostics:
    print(f"warning: line {diag.line}: {diag.message}")

matched = corpus.filter_records(records, corpus.KeywordFilter())
unique, removed = corpus.dedupe(matched)
pairs, skipped = corpus.build_pairs(unique)

print(f"\nparsed {len(records)}, kept {len(matched)} after keyword filter, "
      f"{removed} duplicates removed, {skipped} without abstracts\n")

for pair in pairs:
    print(f"  input:  {pair.input}")
    print(f"  output: {pair.output[:70]}...")

stats = corpus.stats(unique, skipped_no_abstract=skipped,
                     duplicates_removed=removed)
print()
print(corpus.stats_report(stats), end="")
