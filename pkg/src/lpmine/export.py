"""DOT and JSON renderings of mining results.

Both writers are deterministic: identical inputs give byte-identical text.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .metrics import METRIC_NAMES, QualityReport
from .miner import MiningResult
from .petrinet import AcceptingPetriNet, _id_key
from .tree import to_text

SCHEMA_VERSION = 1
_DIGITS = 6


def _dot_id(ident: str) -> str:
    return '"' + ident.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(apn: AcceptingPetriNet, report: QualityReport | None = None) -> str:
    """Graphviz digraph of ``apn``; visible transitions show ``fit/total`` when a report is given."""
    net = apn.net
    initial = set(apn.initial.places())
    final = set().union(*(m.places() for m in apn.finals)) if apn.finals else set()
    lines = ["digraph lpm {", "  rankdir=LR;"]
    for p in sorted(net.places, key=_id_key):
        attrs = ['shape=circle', 'label=""', "width=0.35", "fixedsize=true"]
        if p in initial:
            attrs[1] = 'label="&#9679;"'
        if p in final:
            attrs[0] = "shape=doublecircle"
        lines.append(f"  {_dot_id(p)} [{', '.join(attrs)}];")
    for t in sorted(net.transitions, key=_id_key):
        label = net.labels[t]
        if label is None:
            lines.append(f'  {_dot_id(t)} [shape=box, style=filled, fillcolor=black, label="", width=0.15];')
            continue
        text = label
        if report is not None and label in report.per_activity:
            fit = report.per_activity[label]
            text = f"{label} {fit.fit}/{fit.total}"
        lines.append(f"  {_dot_id(t)} [shape=box, label={_dot_id(text)}];")
    for src, dst in sorted(net.flow, key=lambda arc: (_id_key(arc[0]), _id_key(arc[1]))):
        lines.append(f"  {_dot_id(src)} -> {_dot_id(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _num(x: float) -> float:
    return round(float(x), _DIGITS)


def _config_echo(result: MiningResult) -> dict:
    cfg = asdict(result.config)
    cfg["weights"] = dict(zip(METRIC_NAMES, map(_num, result.config.weights.as_tuple())))
    return cfg


def export_json(result: MiningResult) -> str:
    """Ranked results as a versioned JSON document (numbers rounded to 6 places)."""
    results = []
    for rank, model in enumerate(result.selected, start=1):
        r = model.report
        results.append(
            {
                "rank": rank,
                "tree": to_text(model.tree),
                "score": _num(r.weighted_score),
                "support": _num(r.support),
                "confidence": _num(r.confidence),
                "per_activity": {a: {"fit": f.fit, "total": f.total} for a, f in r.per_activity.items()},
                "language_fit": _num(r.language_fit),
                "language_fit_bound": r.language_fit_bound,
                "determinism": _num(r.determinism),
                "coverage": _num(r.coverage),
                "k_total": r.k_total,
            }
        )
    doc = {
        "version": SCHEMA_VERSION,
        "config": _config_echo(result),
        "iterations_run": result.iterations_run,
        "candidates_evaluated": result.candidates_evaluated,
        "candidates_pruned": result.candidates_pruned,
        "results": results,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
