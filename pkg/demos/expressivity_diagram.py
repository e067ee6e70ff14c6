"""Verify every cell of the expressivity table and write the Hasse diagram.

Run: python3 demos/expressivity_diagram.py [out.dot]
"""

import sys
import time

from objspec.hasse import derive_hasse, emit_dot, relation_table, verify_all

start = time.perf_counter()
report = verify_all()
print(f"verified in {time.perf_counter() - start:.1f}s: {report.counts()}")
print(f"fixtures: {sum(r.passed for r in report.fixtures.values())}/{len(report.fixtures)} pass")
print(f"embedding edges: {sum(r.passed for r in report.edges.values())}/{len(report.edges)} pass")
for note in report.citation_notes:
    print(f"note: {note}")
for failure in report.failures:
    print(f"FAILURE: {failure}")

graph = derive_hasse(relation_table())
print(f"\n{len(graph.classes)} equivalence classes, bottom to top:")
for a, b in graph.edges:
    print(f"  {', '.join(graph.classes[a]):<20} < {', '.join(graph.classes[b])}")

out = sys.argv[1] if len(sys.argv) > 1 else "expressivity.dot"
with open(out, "w") as fh:
    fh.write(emit_dot(graph))
print(f"\nDOT written to {out}")
