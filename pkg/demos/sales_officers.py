"""Walk through the sales-officer log: one pattern, its segments and its metrics.

Run from the repository root:  python demos/sales_officers.py
"""

from pathlib import Path

from lpmine import EventLog, MinerConfig, evaluate, export_dot, mine, to_petri_net
from lpmine.petrinet import add_backloop
from lpmine.segmentation import segment
from lpmine.tree import and_, seq

DATA = Path(__file__).resolve().parent.parent / "tests" / "data" / "fig1_traces.txt"


def load() -> EventLog:
    return EventLog(tuple(line.split()) for line in DATA.read_text().splitlines() if line.strip())


def main():
    log = load()
    print(f"{len(log)} traces, {sum(len(t) for t, _ in log)} events, activities {sorted(log.alphabet)}")

    # register a call (A), then investigate business (B) and legal (C) aspects in any order
    pattern = seq("A", and_("B", "C"))
    net = add_backloop(to_petri_net(pattern))
    for trace, _ in log:
        projected = [a for a in trace if a in "ABC"]
        s = segment(net, projected)
        shown = " | ".join("".join(x) for x in s.segments)
        print(f"  {''.join(trace):<12} -> {s.k} instance(s): {shown}")

    report = evaluate(pattern, log)
    print(f"support {report.support:.4f}  confidence {report.confidence:.4f}  "
          f"language fit {report.language_fit:.2f}  determinism {report.determinism:.4f}  "
          f"coverage {report.coverage:.4f}")
    for a, fit in report.per_activity.items():
        print(f"  {a}: {fit.fit}/{fit.total}")
    print(export_dot(to_petri_net(pattern), report))

    # the same pattern should come out of a search, among its competitors
    result = mine(log, MinerConfig(min_support=0.9, min_leaves=3, max_iterations=3, min_determinism=0.8))
    print(f"search evaluated {result.candidates_evaluated} candidates, pruned {result.candidates_pruned} expansions")
    for rank, model in enumerate(result.selected[:5], start=1):
        print(f"  {rank}. {model.tree}  score {model.report.weighted_score:.4f}")


if __name__ == "__main__":
    main()
