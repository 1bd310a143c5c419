"""Machine- and human-readable renderings of analysis reports and tables."""

from __future__ import annotations

import json
from typing import Sequence

from . import __version__
from .bin_model import BinTally
from .conformance import ConformanceReport
from .engine import CycleProportions
from .reproduce import Table

__all__ = [
    "analysis_dict",
    "render",
    "render_analysis_text",
    "render_vector",
    "render_table",
    "fmt",
]

FORMATS = ("table", "json", "tsv")


def fmt(v: float) -> str:
    return f"{v:.6f}" if abs(v) >= 1e-4 or v == 0 else f"{v:.6g}"


def analysis_dict(t: BinTally, rep: ConformanceReport, per_cycle: Sequence[CycleProportions] | None,
                  meta: dict | None = None, skipped: int = 0) -> dict:
    src = rep.theoretical_source
    out = {
        "scheme": t.scheme.describe(),
        "counts": {
            "by_rank": [int(v) for v in t.rank_totals],
            "in_range": t.in_range,
            "total": t.total,
            "per_cycle": {str(c): list(row) for c, row in t.per_cycle_counts.items()}
            if per_cycle is not None else None,
        },
        "proportions": list(rep.empirical.values),
        "per_cycle": [
            {"cycle": cp.cycle_index, "count": cp.count, "proportions": list(cp.proportions.values)}
            for cp in per_cycle
        ] if per_cycle is not None else None,
        "coverage": t.coverage,
        "exclusions": {
            "below_range": t.below_range,
            "above_range": t.above_range,
            "nonpositive": t.excluded_nonpositive,
            "malformed_skipped": skipped,
        },
        "theory": {"source": src.to_dict(), "vector": list(rep.theoretical.values),
                   "caveat": rep.caveat},
        "metrics": {"mad": rep.mad, "max_abs_dev": rep.max_abs_dev, "ssd": rep.ssd},
        "verdict": {"label": rep.verdict.value, "metric": "mad", "threshold": rep.threshold},
        "meta": {"version": __version__, **(meta or {})},
    }
    return out


def _scheme_line(s: dict) -> str:
    e = s["expansion"]
    growth = (f"F={e['factor']:g}" if e["type"] == "constant"
              else f"F_i=[{', '.join(f'{f:g}' for f in e['factors'])}]")
    return f"D={s['bins']} {growth} S={s['start']:g} W={s['width']:g}"


def render_analysis_text(d: dict) -> str:
    lines = [f"scheme: {_scheme_line(d['scheme'])}"]
    n = len(d["proportions"])
    header = "      " + "".join(f"{'bin ' + str(i + 1):>11}" for i in range(n))
    lines.append(header)
    lines.append("count " + "".join(f"{c:>11d}" for c in d["counts"]["by_rank"]))
    lines.append("share " + "".join(f"{fmt(v):>11}" for v in d["proportions"]))
    lines.append("law   " + "".join(f"{fmt(v):>11}" for v in d["theory"]["vector"]))
    src = d["theory"]["source"]
    lines.append(f"law source: {', '.join(f'{k}={v}' for k, v in src.items())}")
    if d["theory"]["caveat"]:
        lines.append(f"caveat: {d['theory']['caveat']}")
    m = d["metrics"]
    lines.append(f"mad={fmt(m['mad'])} max_abs_dev={fmt(m['max_abs_dev'])} ssd={m['ssd']:.6g}")
    v = d["verdict"]
    lines.append(f"verdict: {v['label']} (mad ≤ {v['threshold']:g})")
    ex = d["exclusions"]
    lines.append(f"in range {d['counts']['in_range']} of {d['counts']['total']} "
                 f"(coverage {d['coverage']:.6f}); below {ex['below_range']}, "
                 f"above {ex['above_range']}, nonpositive {ex['nonpositive']}, "
                 f"malformed skipped {ex['malformed_skipped']}")
    if d["per_cycle"]:
        lines.append("per cycle:")
        for row in d["per_cycle"]:
            lines.append(f"  c={row['cycle']:<6d} n={row['count']:<9d}"
                         + " ".join(fmt(v) for v in row["proportions"]))
    return "\n".join(lines)


def render_analysis_tsv(d: dict) -> str:
    out = ["section\tkey\t" + "\t".join(f"bin{i + 1}" for i in range(len(d["proportions"])))]
    out.append("counts\tall\t" + "\t".join(str(c) for c in d["counts"]["by_rank"]))
    out.append("proportions\tall\t" + "\t".join(repr(v) for v in d["proportions"]))
    out.append("theory\tall\t" + "\t".join(repr(v) for v in d["theory"]["vector"]))
    for row in d["per_cycle"] or []:
        out.append(f"per_cycle\t{row['cycle']}\t" + "\t".join(repr(v) for v in row["proportions"]))
    for k, v in d["metrics"].items():
        out.append(f"metric\t{k}\t{v!r}")
    out.append(f"verdict\t{d['verdict']['label']}\t{d['verdict']['threshold']!r}")
    out.append(f"coverage\t\t{d['coverage']!r}")
    for k, v in d["exclusions"].items():
        out.append(f"exclusion\t{k}\t{v}")
    return "\n".join(out)


def render_vector(label: str, values: Sequence[float], fmt_name: str, extra: dict | None = None,
                  first: int = 1) -> str:
    """``first`` is the label of the first entry: 1 for bins/first digits, 0 for second digits."""
    if fmt_name == "json":
        return json.dumps({"law": label, "vector": list(values), "first_index": first,
                           **(extra or {})}, indent=2)
    if fmt_name == "tsv":
        return "\n".join(f"{i + first}\t{v!r}" for i, v in enumerate(values))
    lines = [label]
    lines += [f"  {i + first:>3}  {v:.6f}" for i, v in enumerate(values)]
    return "\n".join(lines)


def render_table(t: Table, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(t.to_dict(), indent=2)
    if fmt_name == "tsv":
        rows = ["label\t" + "\t".join(t.columns) + "\tmad\tmax_abs_dev\tnote"]
        for r in t.rows:
            vals = "\t".join(repr(v) for v in r.values) if r.values else "\t" * (len(t.columns) - 1)
            rows.append(f"{r.label}\t{vals}\t{'' if r.mad is None else repr(r.mad)}\t"
                        f"{'' if r.max_abs_dev is None else repr(r.max_abs_dev)}\t{r.note}")
        if t.law:
            rows.append(f"{t.law_label}\t" + "\t".join(repr(v) for v in t.law) + "\t\t\t")
        return "\n".join(rows)
    width = max(len(label) for label in [r.label for r in t.rows] + [t.law_label]) + 2
    lines = [t.title, " " * width + "".join(f"{c:>8}" for c in t.columns) + "     mad   maxdev"]
    for r in t.rows:
        if r.values is None:
            lines.append(f"{r.label:<{width}}[{r.note}]")
            continue
        cells = "".join(f"{100 * v:>7.1f}%" for v in r.values)
        dev = (f"{100 * r.mad:>7.2f}pp{100 * r.max_abs_dev:>7.2f}pp" if r.mad is not None else "")
        lines.append(f"{r.label:<{width}}{cells}{dev}")
    if t.law:
        lines.append(f"{t.law_label:<{width}}" + "".join(f"{100 * v:>7.1f}%" for v in t.law))
    lines += [f"note: {n}" for n in t.notes]
    return "\n".join(lines)


def render(d: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(d, indent=2)
    if fmt_name == "tsv":
        return render_analysis_tsv(d)
    return render_analysis_text(d)
