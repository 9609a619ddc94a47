"""
Запись задач в канонический текстовый формат .soft
"""
from typing import List, Optional

from backend.oracle import Violation
from backend.soft_core import SoftContext, SoftSet
from backend.soft_mapping import SoftMapping
from backend.soft_topology import SoftTopology
from frontend.modules.data_loader import MapDecl, ProblemFile, TopologyDecl


def _context_block(ctx: SoftContext, first: Optional[SoftContext]) -> List[str]:
    lines = [f"[context {ctx.name}]", "universe: " + " ".join(ctx.universe)]
    if first is None or not first.same_parameters(ctx):
        lines.append("parameters: " + " ".join(ctx.parameters))
    return lines


def _set_block(name: str, a: SoftSet, ctx_name: str, first_name: str) -> List[str]:
    header = f"[set {name}]" if ctx_name == first_name else f"[set {name} over {ctx_name}]"
    lines = [header]
    for parameter, elements in a.assignment().items():
        lines.append(f"{parameter}: {' '.join(elements)}".rstrip())
    return lines


def _topology_block(decl: TopologyDecl, first_name: str) -> List[str]:
    header = f"[topology {decl.name}]" if decl.context == first_name else f"[topology {decl.name} over {decl.context}]"
    body = decl.directive if decl.directive is not None else " ".join(decl.members)
    return [header, body] if body else [header]


def _map_block(decl: MapDecl) -> List[str]:
    lines = [f"[map {decl.name}]", f"source: {decl.source}", f"target: {decl.target}"]
    lines += [f"{x} -> {y}" for x, y in decl.mapping.as_dict().items()]
    return lines


def serialize_problem(problem: ProblemFile, comments: Optional[List[str]] = None) -> str:
    """
    Канонический текст задачи: контексты, множества, топологии, отображения

    Повторный разбор результата дает ту же задачу.
    """
    blocks: List[List[str]] = []
    if comments:
        blocks.append([f"# {c}" for c in comments])
    first = None
    for ctx in problem.contexts.values():
        blocks.append(_context_block(ctx, first))
        first = first or ctx
    first_name = problem.context.name
    for name, a in problem.sets.items():
        blocks.append(_set_block(name, a, problem.set_contexts[name], first_name))
    for decl in problem.topology_decls.values():
        blocks.append(_topology_block(decl, first_name))
    for decl in problem.maps.values():
        blocks.append(_map_block(decl))
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"


def _add_topology(problem: ProblemFile, name: str, tau: SoftTopology, prefix: str, ctx_name: str) -> None:
    members = []
    index = 0
    for o in tau.opens:
        if o.is_null:
            members.append('null')
        elif o.is_absolute:
            members.append('absolute')
        else:
            index += 1
            set_name = f"{prefix}{index}"
            problem.sets[set_name] = o
            problem.set_contexts[set_name] = ctx_name
            members.append(set_name)
    problem.topology_decls[name] = TopologyDecl(name, ctx_name, tuple(members))
    problem.topologies[name] = tau


def instance_problem(tau: SoftTopology, tau_prime: Optional[SoftTopology] = None,
                     mapping: Optional[SoftMapping] = None,
                     soft_set: Optional[SoftSet] = None) -> ProblemFile:
    """
    Собирает задачу из готовых объектов (например, из контрпримера перебора)

    Аргументы:
        tau: топология источника (множества получают имена F1, F2, ...)
        tau_prime: топология цели (G1, G2, ...)
        mapping: отображение f из tau в tau_prime
        soft_set: отдельное мягкое множество A над контекстом tau

    Возвращает:
        ProblemFile с топологиями tau, tau_prime и отображением f
    """
    problem = ProblemFile()
    source = tau.context
    problem.contexts[source.name] = source
    if tau_prime is not None and tau_prime.context != source:
        target = tau_prime.context
        if target.name == source.name:
            target = target.with_universe(target.universe, 'Y' if source.name != 'Y' else 'Z')
            tau_prime = SoftTopology.from_masks(target, tau_prime.open_masks)
            if mapping is not None:
                mapping = SoftMapping(mapping.source, target, mapping.images)
        problem.contexts[target.name] = target

    _add_topology(problem, 'tau', tau, 'F', source.name)
    if tau_prime is not None:
        target_name = source.name if tau_prime.context == source else tau_prime.context.name
        _add_topology(problem, 'tau_prime', tau_prime, 'G', target_name)
    if soft_set is not None:
        problem.sets['A'] = soft_set
        problem.set_contexts['A'] = source.name
    if mapping is not None:
        if tau_prime is None:
            raise ValueError("для отображения нужна топология цели")
        problem.maps['f'] = MapDecl('f', 'tau', 'tau_prime', mapping)
    return problem


def serialize_violation(violation: Violation) -> str:
    """Контрпример перебора как файл задачи, который можно передать в CLI"""
    problem = instance_problem(violation.tau, violation.tau_prime, violation.mapping, violation.soft_set)
    comments = [f"{violation.theorem}: {violation.detail}"]
    if violation.label:
        comments.append(f"источник: {violation.label}")
    return serialize_problem(problem, comments)
