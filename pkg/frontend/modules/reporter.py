"""
Модуль для формирования отчетов: текст для человека и JSON для машин
"""
import json
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from backend.oracle import TheoremSweepReport
from backend.soft_core import SoftPoint, SoftSet, format_soft_set
from backend.soft_mapping import CONDITION_NAMES, ContinuityReport
from backend.soft_topology import CheckReport, PointTopology, SoftTopology
from frontend.modules.data_loader import ProblemFile
from frontend.modules.serializer import serialize_violation


def bool_text(value: Optional[bool]) -> str:
    if value is None:
        return "skipped"
    return "true" if value else "false"


def describe_set(a: SoftSet, problem: Optional[ProblemFile] = None) -> str:
    """'F1 = {e1↦{h1}, e2↦∅}' для объявленных множеств, иначе только значение"""
    name = problem.name_of(a) if problem is not None else None
    if name is None:
        return format_soft_set(a)
    return f"{name} = {format_soft_set(a)}"


def set_to_json(a: SoftSet, problem: Optional[ProblemFile] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"value": {e: list(xs) for e, xs in a.assignment().items()}}
    name = problem.name_of(a) if problem is not None else None
    if name is not None:
        payload["name"] = name
    return payload


def _value_text(value: Any, problem: Optional[ProblemFile]) -> str:
    if isinstance(value, SoftSet):
        return describe_set(value, problem)
    if isinstance(value, bool):
        return bool_text(value)
    if isinstance(value, tuple):
        return "{" + ",".join(str(v) for v in value) + "}"
    return str(value)


def _value_json(value: Any, problem: Optional[ProblemFile]) -> Any:
    if isinstance(value, SoftSet):
        return set_to_json(value, problem)
    if isinstance(value, SoftPoint):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def witness_lines(report: CheckReport, problem: Optional[ProblemFile] = None) -> List[str]:
    return [f"witness {w.label}: {_value_text(w.value, problem)}" for w in report.witnesses]


def report_json(report: CheckReport, problem: Optional[ProblemFile] = None) -> Dict[str, Any]:
    return {
        "verdict": report.verdict,
        "witnesses": {w.label: _value_json(w.value, problem) for w in report.witnesses},
    }


def continuity_lines(report: ContinuityReport, problem: Optional[ProblemFile] = None) -> List[str]:
    """
    Текстовый отчет о шести условиях непрерывности

    Если все вычисленные условия совпали, они печатаются одной строкой.
    """
    values = report.conditions()
    head = f"soft continuous: {bool_text(report.verdict)}"
    if report.complete and report.all_agree:
        lines = [f"{head}; conditions (1)..(6): {bool_text(report.verdict)}"]
    elif report.all_agree:
        lines = [f"{head}; conditions (1)..(3): {bool_text(report.verdict)}; (4)..(6): skipped"]
    else:
        lines = [head]
        lines += [f"({i}) {name}: {bool_text(values[name])}" for i, name in enumerate(CONDITION_NAMES, start=1)]
    for name in CONDITION_NAMES:
        for w in report.witnesses.get(name, ()):
            lines.append(f"witness {name} {w.label}: {_value_text(w.value, problem)}")
    return lines


def continuity_json(report: ContinuityReport, problem: Optional[ProblemFile] = None) -> Dict[str, Any]:
    return {
        "verdict": report.verdict,
        "conditions": report.conditions(),
        "complete": report.complete,
        "all_agree": report.all_agree,
        "witnesses": {name: {w.label: _value_json(w.value, problem) for w in ws}
                      for name, ws in report.witnesses.items() if ws},
    }


def point_topology_text(pt: PointTopology) -> str:
    parts = []
    for mask in pt.opens:
        elements = pt.elements(mask)
        if mask == pt.full_mask:
            parts.append("X")
        elif not elements:
            parts.append("∅")
        else:
            parts.append("{" + ",".join(elements) + "}")
    return "{" + ", ".join(parts) + "}"


def topology_to_json(tau: SoftTopology, problem: Optional[ProblemFile] = None) -> List[Dict[str, Any]]:
    return [set_to_json(o, problem) for o in tau.opens]


def topologies_table(topologies: Iterable[SoftTopology]) -> pd.DataFrame:
    """Таблица топологий: номер, число открытых множеств, сами множества"""
    rows = [{"index": i, "size": len(tau), "opens": "; ".join(format_soft_set(o) for o in tau.opens)}
            for i, tau in enumerate(topologies, start=1)]
    return pd.DataFrame(rows, columns=["index", "size", "opens"])


def sweep_table(reports: Iterable[TheoremSweepReport]) -> pd.DataFrame:
    """Сводка переборов: по строке на утверждение"""
    rows = []
    for report in reports:
        row = {"theorem": report.theorem}
        row.update(report.counts)
        row["violations"] = len(report.violations)
        rows.append(row)
    return pd.DataFrame(rows)


def sweep_json(report: TheoremSweepReport) -> Dict[str, Any]:
    return {
        "theorem": report.theorem,
        "counts": dict(sorted(report.counts.items())),
        "violations": [{"detail": v.detail, "problem": serialize_violation(v)} for v in report.violations],
    }


def sweep_lines(report: TheoremSweepReport, limit: int = 3) -> List[str]:
    counts = ", ".join(f"{k}={v}" for k, v in report.counts.items())
    lines = [f"{report.theorem}: {len(report.violations)} violation(s); {counts}"]
    for violation in report.violations[:limit]:
        lines.append("")
        lines.append(serialize_violation(violation).rstrip())
    hidden = len(report.violations) - limit
    if hidden > 0:
        lines.append("")
        lines.append(f"... and {hidden} more")
    return lines


def dumps(payload: Dict[str, Any]) -> str:
    """Один JSON-документ; порядок ключей фиксирован"""
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)
