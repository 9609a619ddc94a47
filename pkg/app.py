"""
Командная строка для проверки мягких топологий и мягких отображений

Коды выхода: 0 - утверждение верно или вычисление выполнено,
1 - утверждение неверно (печатается свидетель), 2 - ошибка во входных данных.
"""
import contextlib
import io
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import click
from pydantic import ValidationError

from backend.config import Settings, configure_logging, get_settings
from backend.errors import ConsistencyError, SoftTopologyError
from backend.oracle import (THEOREMS, EnumerationBudget, Instance, closure_under_ops, enumerate_point_maps,
                            enumerate_soft_sets, enumerate_soft_topologies, make_context,
                            random_soft_topology, sweep_shapes, sweep_theorem)
from backend.soft_core import SoftPoint, SoftSet, format_soft_set, point_as_soft_set
from backend.soft_mapping import (all_induced_maps_continuous, check_soft_closed_map,
                                  check_soft_continuous_at, check_soft_open_map, induced_map_closed,
                                  induced_map_continuous, induced_map_open, points_failing_continuity,
                                  theorem1_report, theorem5_equivalences)
from backend.soft_topology import (SoftTopology, closure_operators_agree, induced_topology, interior_points,
                                   is_soft_neighbourhood, parameterwise_closure, soft_closure, soft_interior,
                                   union_all)
from frontend.modules.data_loader import ProblemFile, find_examples, parse_problem
from frontend.modules.reporter import (bool_text, continuity_json, continuity_lines, describe_set, dumps,
                                       point_topology_text, report_json, set_to_json, sweep_json, sweep_lines,
                                       sweep_table, topologies_table, topology_to_json, witness_lines)
from frontend.modules.serializer import instance_problem, serialize_problem

logger = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2

# обратная импликация для f_α неверна при |E| > 1, контрпримеры ожидаемы
EXPECTED_VIOLATIONS = ('THM2_CONVERSE',)


@dataclass
class Session:
    """Общие параметры запуска"""

    settings: Settings
    budget: EnumerationBudget
    as_json: bool
    n_jobs: int

    def load(self, path: str, validate: bool = True) -> ProblemFile:
        return parse_problem(path, validate=validate, max_soft_sets=self.budget.max_soft_sets)


class SoftTopGroup(click.Group):
    """Группа команд, переводящая ошибки входных данных в код выхода 2"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except ConsistencyError:
            # ошибка реализации, не входных данных
            logger.critical("❌ Эквивалентные проверки разошлись")
            raise
        except (SoftTopologyError, ValidationError) as e:
            logger.error(f"❌ {e}")
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INPUT_ERROR)


def _emit(session: Session, lines: List[str], payload: dict) -> None:
    if session.as_json:
        click.echo(dumps(payload))
    else:
        click.echo("\n".join(lines))


def _finish(ctx: click.Context, verdict: bool) -> None:
    if not verdict:
        ctx.exit(EXIT_FALSE)


def _operand(problem: ProblemFile, tau: SoftTopology, set_names: Sequence[str],
             points: Sequence[str]) -> SoftSet:
    """Объединение указанных множеств и мягких точек"""
    if not set_names and not points:
        raise click.UsageError("укажите хотя бы один --set или --point")
    parts = [problem.soft_set(name) for name in set_names]
    parts += [point_as_soft_set(tau.context, SoftPoint.parse(text)) for text in points]
    return union_all(tau.context, parts)


set_option = click.option('--set', 'set_names', multiple=True, help="Имя мягкого множества из файла")
point_option = click.option('--point', 'points', multiple=True, help="Мягкая точка вида x@e")
topology_option = click.option('--topology', 'topology_name', default=None, help="Имя топологии (по умолчанию первая)")
map_option = click.option('--map', 'map_name', default=None, help="Имя отображения (по умолчанию первое)")
problem_argument = click.argument('problem_path', type=click.Path(dir_okay=False))


@click.group(cls=SoftTopGroup)
@click.option('--json', 'as_json', is_flag=True, help="Один JSON-документ в stdout")
@click.option('--budget', type=int, default=None, help="Наибольшее число перебираемых мягких множеств")
@click.option('--seed', type=int, default=None, help="Зерно генератора случайных топологий")
@click.option('--jobs', type=int, default=None, help="Число процессов для перебора")
@click.option('--verbose', '-v', is_flag=True, help="Подробный лог в stderr")
@click.pass_context
def cli(ctx: click.Context, as_json: bool, budget: Optional[int], seed: Optional[int],
        jobs: Optional[int], verbose: bool):
    """Проверка мягких топологий и мягких отображений на конечных примерах"""
    settings = get_settings()
    configure_logging('INFO' if verbose else settings.log_level)
    enumeration_budget = EnumerationBudget(
        max_soft_sets=settings.max_soft_sets if budget is None else budget,
        max_topologies=settings.max_topologies,
        rng_seed=settings.seed if seed is None else seed,
    )
    ctx.obj = Session(settings, enumeration_budget, as_json, settings.n_jobs if jobs is None else jobs)


# ========== ТОПОЛОГИИ ==========

@cli.command('check-topology')
@problem_argument
@topology_option
@click.option('--repair', is_flag=True, help="Показать наименьшую топологию, содержащую набор")
@click.pass_context
def check_topology(ctx: click.Context, problem_path: str, topology_name: Optional[str], repair: bool):
    """Проверка аксиом мягкой топологии"""
    session: Session = ctx.obj
    problem = session.load(problem_path, validate=False)
    if topology_name is None:
        if not problem.topology_decls:
            raise click.UsageError("в файле нет ни одной топологии")
        topology_name = next(iter(problem.topology_decls))
    report = problem.topology_report(topology_name)
    lines = [f"soft topology {topology_name}: {bool_text(report.verdict)}"] + witness_lines(report, problem)
    payload = {"command": "check-topology", "topology": topology_name, **report_json(report, problem)}
    if repair and not report.verdict:
        decl = problem.topology_decls[topology_name]
        repaired = closure_under_ops(problem.contexts[decl.context], problem.members(topology_name))
        lines.append(f"repaired {topology_name}: {len(repaired)} open sets")
        lines += [f"  {describe_set(o, problem)}" for o in repaired.opens]
        payload["repaired"] = topology_to_json(repaired, problem)
    _emit(session, lines, payload)
    _finish(ctx, report.verdict)


@cli.command('closure')
@problem_argument
@topology_option
@set_option
@point_option
@click.pass_context
def closure(ctx: click.Context, problem_path: str, topology_name, set_names, points):
    """Мягкое замыкание объединения указанных множеств и точек"""
    problem = ctx.obj.load(problem_path)
    tau = problem.topology(topology_name)
    a = _operand(problem, tau, set_names, points)
    result = soft_closure(tau, a)
    _emit(ctx.obj, [format_soft_set(result)],
          {"command": "closure", "operand": set_to_json(a, problem), "result": set_to_json(result, problem)})


@cli.command('interior')
@problem_argument
@topology_option
@set_option
@point_option
@click.pass_context
def interior(ctx: click.Context, problem_path: str, topology_name, set_names, points):
    """Мягкая внутренность объединения указанных множеств и точек"""
    problem = ctx.obj.load(problem_path)
    tau = problem.topology(topology_name)
    a = _operand(problem, tau, set_names, points)
    result = soft_interior(tau, a)
    _emit(ctx.obj, [format_soft_set(result)],
          {"command": "interior", "operand": set_to_json(a, problem), "result": set_to_json(result, problem)})


@cli.command('param-topology')
@problem_argument
@topology_option
@click.option('--param', 'params', multiple=True, help="Параметр α (по умолчанию все)")
@click.pass_context
def param_topology(ctx: click.Context, problem_path: str, topology_name, params):
    """Индуцированные топологии τ_α"""
    problem = ctx.obj.load(problem_path)
    tau = problem.topology(topology_name)
    name = topology_name or problem.topology_name(tau)
    lines, payload = [], {"command": "param-topology", "topology": name, "induced": {}}
    for alpha in params or tau.context.parameters:
        pt = induced_topology(tau, alpha)
        lines.append(f"{name}_{alpha} = {point_topology_text(pt)}")
        payload["induced"][alpha] = [list(pt.elements(m)) for m in pt.opens]
    _emit(ctx.obj, lines, payload)


@cli.command('param-closure')
@problem_argument
@topology_option
@set_option
@point_option
@click.pass_context
def param_closure(ctx: click.Context, problem_path: str, topology_name, set_names, points):
    """Поэлементное замыкание и его сравнение с мягким замыканием"""
    problem = ctx.obj.load(problem_path)
    tau = problem.topology(topology_name)
    a = _operand(problem, tau, set_names, points)
    pw = parameterwise_closure(tau, a)
    cl = soft_closure(tau, a)
    agree = closure_operators_agree(tau, a)
    lines = [f"parameterwise closure: {format_soft_set(pw)}",
             f"soft closure: {format_soft_set(cl)}",
             f"agree: {bool_text(agree)}"]
    _emit(ctx.obj, lines, {"command": "param-closure", "parameterwise_closure": set_to_json(pw, problem),
                           "soft_closure": set_to_json(cl, problem), "agree": agree})


@cli.command('neighbourhood')
@problem_argument
@topology_option
@click.option('--set', 'set_name', required=True, help="Имя мягкого множества G")
@click.option('--point', 'point', required=True, help="Мягкая точка вида x@e")
@click.pass_context
def neighbourhood(ctx: click.Context, problem_path: str, topology_name, set_name: str, point: str):
    """Является ли множество мягкой окрестностью точки"""
    problem = ctx.obj.load(problem_path)
    tau = problem.topology(topology_name)
    g = problem.soft_set(set_name)
    p = SoftPoint.parse(point)
    verdict = is_soft_neighbourhood(tau, g, p)
    inner = interior_points(tau, g)
    lines = [f"soft neighbourhood of {p}: {bool_text(verdict)}",
             "interior points: " + (", ".join(str(q) for q in inner) or "none")]
    _emit(ctx.obj, lines, {"command": "neighbourhood", "point": str(p), "verdict": verdict,
                           "interior_points": [str(q) for q in inner]})
    _finish(ctx, verdict)


# ========== ОТОБРАЖЕНИЯ ==========

def _load_map(session: Session, problem_path: str, map_name: Optional[str]):
    problem = session.load(problem_path)
    decl = problem.mapping(map_name)
    return problem, decl, problem.topology(decl.source), problem.topology(decl.target)


@cli.command('check-continuous')
@problem_argument
@map_option
@click.option('--point', 'point', default=None, help="Проверить непрерывность только в мягкой точке x@e")
@click.pass_context
def check_continuous(ctx: click.Context, problem_path: str, map_name, point: Optional[str]):
    """Мягкая непрерывность: шесть эквивалентных условий"""
    session: Session = ctx.obj
    problem, decl, tau, tau_prime = _load_map(ctx.obj, problem_path, map_name)
    f = decl.mapping

    if point is not None:
        p = SoftPoint.parse(point)
        report = check_soft_continuous_at(f, tau, tau_prime, p)
        lines = [f"soft continuous at {p}: {bool_text(report.verdict)}"] + witness_lines(report, problem)
        _emit(session, lines, {"command": "check-continuous", "point": str(p), **report_json(report, problem)})
        _finish(ctx, report.verdict)
        return

    report = theorem1_report(f, tau, tau_prime, session.budget.max_soft_sets, allow_partial=True,
                             order=problem.members(decl.target))
    induced = {alpha: induced_map_continuous(f, tau, tau_prime, alpha) for alpha in f.source.parameters}
    failing = points_failing_continuity(f, tau, tau_prime)
    lines = continuity_lines(report, problem)
    lines += [f"f_{alpha} continuous: {bool_text(v)}" for alpha, v in induced.items()]
    if failing:
        lines.append("failing points: " + ", ".join(str(p) for p in failing))
    payload = {"command": "check-continuous", "map": decl.name, **continuity_json(report, problem),
               "induced": induced, "all_induced_continuous": all_induced_maps_continuous(f, tau, tau_prime),
               "failing_points": [str(p) for p in failing]}
    _emit(session, lines, payload)
    _finish(ctx, report.verdict)


def _map_property(ctx: click.Context, problem_path: str, map_name: Optional[str], kind: str) -> None:
    problem, decl, tau, tau_prime = _load_map(ctx.obj, problem_path, map_name)
    f = decl.mapping
    order = problem.members(decl.source)
    if kind == 'open':
        report = check_soft_open_map(f, tau, tau_prime, order)
        induced = {alpha: induced_map_open(f, tau, tau_prime, alpha) for alpha in f.source.parameters}
    else:
        report = check_soft_closed_map(f, tau, tau_prime, order)
        induced = {alpha: induced_map_closed(f, tau, tau_prime, alpha) for alpha in f.source.parameters}
    lines = [f"soft {kind}: {bool_text(report.verdict)}"] + witness_lines(report, problem)
    lines += [f"f_{alpha} {kind}: {bool_text(v)}" for alpha, v in induced.items()]
    payload = {"command": f"check-{kind}", "map": decl.name, **report_json(report, problem), "induced": induced}
    _emit(ctx.obj, lines, payload)
    _finish(ctx, report.verdict)


@cli.command('check-open')
@problem_argument
@map_option
@click.pass_context
def check_open(ctx: click.Context, problem_path: str, map_name):
    """Мягкая открытость отображения"""
    _map_property(ctx, problem_path, map_name, 'open')


@cli.command('check-closed')
@problem_argument
@map_option
@click.pass_context
def check_closed(ctx: click.Context, problem_path: str, map_name):
    """Мягкая замкнутость отображения"""
    _map_property(ctx, problem_path, map_name, 'closed')


@cli.command('check-homeo')
@problem_argument
@map_option
@click.pass_context
def check_homeo(ctx: click.Context, problem_path: str, map_name):
    """Мягкий гомеоморфизм"""
    problem, decl, tau, tau_prime = _load_map(ctx.obj, problem_path, map_name)
    f = decl.mapping
    if not f.is_bijective:
        _emit(ctx.obj, ["soft homeomorphism: false (f is not a bijection)"],
              {"command": "check-homeo", "map": decl.name, "verdict": False, "bijective": False})
        _finish(ctx, False)
        return
    report = theorem5_equivalences(f, tau, tau_prime)
    verdict = report.witness('homeomorphism')
    lines = [f"soft homeomorphism: {bool_text(verdict)}",
             f"continuous and closed: {bool_text(report.witness('continuous_and_closed'))}",
             f"continuous and open: {bool_text(report.witness('continuous_and_open'))}"]
    _emit(ctx.obj, lines, {"command": "check-homeo", "map": decl.name, "verdict": verdict, "bijective": True,
                           "equivalences": {w.label: w.value for w in report.witnesses},
                           "equivalences_agree": report.verdict})
    _finish(ctx, verdict)


# ========== ОРАКУЛ ==========

def _extra_instances(session: Session, paths: Sequence[str]) -> List[Instance]:
    instances = []
    for path in paths:
        problem = session.load(path)
        if problem.maps:
            for decl in problem.maps.values():
                instances.append(Instance(problem.topology(decl.source), problem.topology(decl.target),
                                          decl.mapping, label=f"{path}:{decl.name}"))
        else:
            instances += [Instance(tau, label=f"{path}:{name}") for name, tau in problem.topologies.items()]
    return instances


@cli.command('sweep')
@click.argument('theorem_id')
@click.option('--max-source', default=2, show_default=True, help="Наибольший |X|")
@click.option('--max-target', default=2, show_default=True, help="Наибольший |Y|")
@click.option('--max-parameters', default=1, show_default=True, help="Наибольший |E|")
@click.option('--include', 'include', multiple=True, type=click.Path(dir_okay=False),
              help="Файл задачи с дополнительными экземплярами")
@click.option('--examples', 'with_examples', is_flag=True, help="Добавить все примеры из SOFTTOP_DATA_DIR/examples")
@click.option('--limit', default=3, show_default=True, help="Сколько контрпримеров печатать")
@click.pass_context
def sweep(ctx: click.Context, theorem_id: str, max_source: int, max_target: int, max_parameters: int,
          include: Tuple[str, ...], with_examples: bool, limit: int):
    """Перебор всех малых экземпляров для утверждения (или ALL)"""
    session: Session = ctx.obj
    theorem_id = theorem_id.upper()
    shapes = sweep_shapes(max_source, max_target, max_parameters)
    paths = list(include)
    if with_examples:
        paths += find_examples(session.settings.data_dir)
    extra = _extra_instances(session, paths)
    ids = THEOREMS if theorem_id == 'ALL' else (theorem_id,)
    reports = [sweep_theorem(t, shapes, session.budget, extra, session.n_jobs) for t in ids]
    failed = any(r.violations for r in reports if r.theorem not in EXPECTED_VIOLATIONS or theorem_id != 'ALL')

    if theorem_id == 'ALL':
        table = sweep_table(reports)
        _emit(session, [table.to_string(index=False)], {"command": "sweep", "reports": [sweep_json(r) for r in reports]})
    else:
        _emit(session, sweep_lines(reports[0], limit), {"command": "sweep", **sweep_json(reports[0])})
    _finish(ctx, not failed)


@cli.command('enumerate')
@click.option('--universe-size', default=2, show_default=True, help="|X|")
@click.option('--parameters', 'width', default=1, show_default=True, help="|E|")
@click.option('--kind', type=click.Choice(['topologies', 'sets', 'maps']), default='topologies', show_default=True)
@click.option('--target-size', default=None, type=int, help="|Y| для --kind maps (по умолчанию |X|)")
@click.pass_context
def enumerate_command(ctx: click.Context, universe_size: int, width: int, kind: str, target_size: Optional[int]):
    """Полный перебор мягких множеств, топологий или отображений"""
    session: Session = ctx.obj
    source = make_context(universe_size, width)
    if kind == 'topologies':
        topologies = enumerate_soft_topologies(source, session.budget)
        table = topologies_table(topologies)
        lines = [f"soft topologies over |X|={universe_size}, |E|={width}: {len(topologies)}", table.to_string(index=False)]
        items = [[format_soft_set(o) for o in tau.opens] for tau in topologies]
    elif kind == 'sets':
        sets = enumerate_soft_sets(source, session.budget)
        items = [format_soft_set(a) for a in sets]
        lines = [f"soft sets over |X|={universe_size}, |E|={width}: {len(sets)}"] + items
    else:
        target = make_context(target_size or universe_size, width, 'y', 'Y')
        maps = enumerate_point_maps(source, target)
        items = [f.as_dict() for f in maps]
        lines = [f"point maps X -> Y: {len(maps)}"]
        lines += [", ".join(f"{x}->{y}" for x, y in f.as_dict().items()) for f in maps]
    _emit(session, lines, {"command": "enumerate", "kind": kind, "count": len(items), "items": items})


@cli.command('random-topology')
@click.option('--universe-size', default=3, show_default=True, help="|X|")
@click.option('--parameters', 'width', default=2, show_default=True, help="|E|")
@click.option('--generators', default=3, show_default=True, help="Число случайных образующих")
@click.pass_context
def random_topology(ctx: click.Context, universe_size: int, width: int, generators: int):
    """Случайная мягкая топология в формате файла задачи"""
    session: Session = ctx.obj
    ctx_x = make_context(universe_size, width, 'h', 'X')
    tau = random_soft_topology(ctx_x, session.budget.rng_seed, generators)
    text = serialize_problem(instance_problem(tau), [f"seed {session.budget.rng_seed}, generators {generators}"])
    _emit(session, [text.rstrip()], {"command": "random-topology", "seed": session.budget.rng_seed,
                                     "generators": generators, "opens": topology_to_json(tau)})


@cli.command('export')
@problem_argument
@click.pass_context
def export(ctx: click.Context, problem_path: str):
    """Канонический текст файла задачи"""
    problem = ctx.obj.load(problem_path)
    text = serialize_problem(problem)
    _emit(ctx.obj, [text.rstrip()], {"command": "export", "problem": text})


def run_command(command: str, args: Sequence[str] = (), options: Sequence[str] = ()) -> Tuple[int, str]:
    """
    Выполняет команду без выхода из процесса

    Аргументы:
        command: имя команды (check-continuous, sweep, ...)
        args: аргументы команды
        options: общие флаги (--json, --budget, ...)

    Возвращает:
        (код выхода, текст отчета из stdout)
    """
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        try:
            code = cli.main([*options, command, *args], prog_name='softtop', standalone_mode=False)
        except click.ClickException as e:
            e.show()
            code = e.exit_code
    return code or EXIT_TRUE, buffer.getvalue()


if __name__ == '__main__':
    cli()
