"""
Оракул: полный перебор и случайная генерация мягких множеств, топологий
и отображений; проверка утверждений о мягких отображениях на малых примерах
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from backend.errors import ConsistencyError, ContextMismatch, InstanceTooLarge, UnknownTheorem
from backend.soft_core import SoftContext, SoftSet, soft_subset
from backend.soft_mapping import (SoftMapping, all_induced_maps_continuous, closed_map_via_closure,
                                  induced_map_closed, induced_map_continuous, induced_map_open,
                                  is_soft_closed_map, is_soft_continuous, is_soft_open_map,
                                  open_map_via_interior, theorem1_report, theorem3_hypothesis,
                                  theorem5_equivalences)
from backend.soft_topology import (SoftTopology, _first_violation, closure_operators_agree,
                                   induced_topologies, parameterwise_closure, soft_closure,
                                   validate_point_topology)

logger = logging.getLogger(__name__)

# перебор топологий возможен только при |X|·|E| <= 4 (не более 2^14 наборов)
MAX_ENUMERABLE_BITS = 4

PAIR_THEOREMS = ('THM1', 'THM2', 'THM2_CONVERSE', 'THM3', 'THM4', 'THM5', 'PROP3')
SINGLE_THEOREMS = ('PROP1', 'PROP2', 'COR1')
THEOREMS = PAIR_THEOREMS + SINGLE_THEOREMS

# размер порции топологий источника на одну задачу joblib
CHUNK_SIZE = 16


class EnumerationBudget(BaseModel):
    """Ограничения перебора и зерно генератора"""

    model_config = ConfigDict(frozen=True)

    max_soft_sets: int = Field(default=2 ** 16, ge=1)
    max_topologies: int = Field(default=10 ** 6, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=2 ** 64)

    @classmethod
    def from_settings(cls, settings) -> "EnumerationBudget":
        return cls(max_soft_sets=settings.max_soft_sets,
                   max_topologies=settings.max_topologies,
                   rng_seed=settings.seed)


def make_context(size: int, width: int, prefix: str = 'x', name: str = 'X') -> SoftContext:
    """Контекст с элементами x1..xn и параметрами e1..em"""
    return SoftContext(tuple(f"{prefix}{i + 1}" for i in range(size)),
                       tuple(f"e{j + 1}" for j in range(width)), name=name)


# ========== ПЕРЕБОР ==========

def enumerate_soft_sets(ctx: SoftContext, budget: Optional[EnumerationBudget] = None) -> List[SoftSet]:
    """Все 2^(|X|·|E|) мягких множеств; Φ первое, X̃ последнее"""
    budget = budget or EnumerationBudget()
    if 2 ** ctx.bit_count > budget.max_soft_sets:
        raise InstanceTooLarge(f"2^{ctx.bit_count} мягких множеств превышает бюджет {budget.max_soft_sets}")
    return [SoftSet(ctx, m) for m in range(ctx.full_mask + 1)]


@lru_cache(maxsize=None)
def _cached_topologies(ctx: SoftContext) -> Tuple[SoftTopology, ...]:
    full = ctx.full_mask
    middle = list(range(1, full))
    found = []
    # Φ и X̃ фиксированы, перебираются подмножества остальных 2^n - 2 множеств
    for choice in range(1 << len(middle)):
        masks = [0]
        masks.extend(m for k, m in enumerate(middle) if choice >> k & 1)
        masks.append(full)
        if _first_violation(masks, full) is None:
            found.append(tuple(masks))
    found.sort(key=lambda masks: (len(masks), masks))
    logger.info(f"✅ Контекст {ctx.size}x{ctx.width}: найдено {len(found)} мягких топологий")
    return tuple(SoftTopology.from_masks(ctx, masks) for masks in found)


def enumerate_soft_topologies(ctx: SoftContext,
                              budget: Optional[EnumerationBudget] = None) -> List[SoftTopology]:
    """
    Все мягкие топологии над контекстом, каждая ровно один раз

    Аргументы:
        ctx: контекст с |X|·|E| <= 4
        budget: ограничения перебора

    Возвращает:
        Список топологий, упорядоченный по (числу открытых множеств, маскам)
    """
    budget = budget or EnumerationBudget()
    if ctx.bit_count > MAX_ENUMERABLE_BITS:
        raise InstanceTooLarge(f"перебор топологий доступен только при |X|·|E| <= {MAX_ENUMERABLE_BITS}, "
                               f"получено {ctx.bit_count}")
    candidates = 2 ** max(2 ** ctx.bit_count - 2, 0)
    if candidates > budget.max_topologies:
        raise InstanceTooLarge(f"{candidates} наборов-кандидатов превышает бюджет {budget.max_topologies}")
    return list(_cached_topologies(ctx))


def enumerate_point_maps(source: SoftContext, target: SoftContext) -> List[SoftMapping]:
    """Все |Y|^|X| отображений в лексикографическом порядке образов"""
    return [SoftMapping(source, target, images)
            for images in itertools.product(target.universe, repeat=source.size)]


def enumerate_bijections(source: SoftContext, target: SoftContext) -> List[SoftMapping]:
    if source.size != target.size:
        return []
    return [SoftMapping(source, target, images)
            for images in itertools.permutations(target.universe)]


# ========== СЛУЧАЙНАЯ ГЕНЕРАЦИЯ ==========

def random_soft_set(ctx: SoftContext, rng: np.random.Generator) -> SoftSet:
    bits = rng.integers(0, 2, size=ctx.bit_count)
    mask = 0
    for i, bit in enumerate(bits):
        if bit:
            mask |= 1 << i
    return SoftSet(ctx, mask)


def closure_under_ops(ctx: SoftContext, collection: Iterable[SoftSet]) -> SoftTopology:
    """
    Наименьшая мягкая топология, содержащая набор

    Добавляет Φ и X̃ и замыкает набор относительно бинарных объединений
    и пересечений до неподвижной точки.
    """
    masks = {0, ctx.full_mask}
    for a in collection:
        if a.context is not ctx and a.context != ctx:
            raise ContextMismatch(f"мягкое множество {a!r} не принадлежит контексту {ctx.name}")
        masks.add(a.mask)
    while True:
        current = sorted(masks)
        added = set()
        for i, a in enumerate(current):
            for b in current[i + 1:]:
                added.add(a | b)
                added.add(a & b)
        added -= masks
        if not added:
            break
        masks |= added
    return SoftTopology.from_masks(ctx, masks)


def random_soft_topology(ctx: SoftContext, seed: int, generator_count: int) -> SoftTopology:
    """Замыкание generator_count случайных мягких множеств; одно зерно - одна топология"""
    if generator_count < 0:
        raise ValueError("generator_count не может быть отрицательным")
    rng = np.random.default_rng(seed)
    generators = [random_soft_set(ctx, rng) for _ in range(generator_count)]
    return closure_under_ops(ctx, generators)


# ========== ОТЧЕТЫ ПЕРЕБОРА ==========

@dataclass(frozen=True)
class Instance:
    """Экземпляр для проверки: топология, вторая топология и отображение (если нужны)"""

    tau: SoftTopology
    tau_prime: Optional[SoftTopology] = None
    mapping: Optional[SoftMapping] = None
    label: str = ""


@dataclass(frozen=True)
class Violation:
    """Контрпример к проверяемому утверждению"""

    theorem: str
    detail: str
    tau: SoftTopology
    tau_prime: Optional[SoftTopology] = None
    mapping: Optional[SoftMapping] = None
    soft_set: Optional[SoftSet] = None
    label: str = ""

    def sort_key(self) -> Tuple:
        ctx = self.tau.context
        key = [ctx.width, ctx.size, len(self.tau), sorted(self.tau.open_masks)]
        if self.tau_prime is not None:
            key += [self.tau_prime.context.size, len(self.tau_prime), sorted(self.tau_prime.open_masks)]
        if self.mapping is not None:
            key.append(list(self.mapping.images))
        if self.soft_set is not None:
            key.append(self.soft_set.mask)
        key += [self.detail, self.label]
        return tuple(repr(k) if isinstance(k, list) else k for k in key)


@dataclass
class TheoremSweepReport:
    """Итог перебора по одному утверждению"""

    theorem: str
    counts: Dict[str, int] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def sweep_shapes(max_source: int = 2, max_target: int = 2, max_parameters: int = 2) -> List[Tuple[int, int, int]]:
    """Все тройки (|X|, |Y|, |E|) в пределах границ"""
    return [(x, y, e)
            for e in range(1, max_parameters + 1)
            for x in range(1, max_source + 1)
            for y in range(1, max_target + 1)]


# ========== ПРОВЕРКИ ОТДЕЛЬНЫХ ЭКЗЕМПЛЯРОВ ==========

def _fmt(values: Dict[str, Optional[bool]]) -> str:
    return " ".join(f"{name}={'-' if v is None else int(v)}" for name, v in values.items())


def _check_thm1(f, tau, tau_prime, budget, cache) -> List[str]:
    report = theorem1_report(f, tau, tau_prime, budget.max_soft_sets)
    return [] if report.all_agree else [f"условия не совпали: {_fmt(report.conditions())}"]


def _check_thm2(f, tau, tau_prime, budget, cache) -> List[str]:
    if not is_soft_continuous(f, tau, tau_prime):
        return []
    bad = [a for a in f.source.parameters if not induced_map_continuous(f, tau, tau_prime, a)]
    return [f"f_{a} не непрерывно" for a in bad]


def _check_thm2_converse(f, tau, tau_prime, budget, cache) -> List[str]:
    if all_induced_maps_continuous(f, tau, tau_prime) and not is_soft_continuous(f, tau, tau_prime):
        return ["все f_α непрерывны, но f не мягко непрерывно"]
    return []


def _check_thm3(f, tau, tau_prime, budget, cache) -> List[str]:
    hypothesis = cache.get(('thm3', tau))
    if hypothesis is None:
        hypothesis = cache[('thm3', tau)] = theorem3_hypothesis(tau, budget.max_soft_sets)
    if not hypothesis:
        return []
    soft = is_soft_continuous(f, tau, tau_prime)
    induced = all_induced_maps_continuous(f, tau, tau_prime)
    return [] if soft == induced else [f"мягкая непрерывность={soft}, непрерывность всех f_α={induced}"]


def _check_thm4(f, tau, tau_prime, budget, cache) -> List[str]:
    problems = []
    is_open = is_soft_open_map(f, tau, tau_prime)
    via_interior = open_map_via_interior(f, tau, tau_prime, budget.max_soft_sets)
    if is_open != via_interior:
        problems.append(f"открытость={is_open}, критерий через внутренность={via_interior}")
    is_closed = is_soft_closed_map(f, tau, tau_prime)
    via_closure = closed_map_via_closure(f, tau, tau_prime, budget.max_soft_sets)
    if is_closed != via_closure:
        problems.append(f"замкнутость={is_closed}, критерий через замыкание={via_closure}")
    return problems


def _check_thm5(f, tau, tau_prime, budget, cache) -> List[str]:
    report = theorem5_equivalences(f, tau, tau_prime)
    if report.verdict:
        return []
    return ["условия гомеоморфизма не совпали: " + " ".join(f"{w.label}={w.value}" for w in report.witnesses)]


def _check_prop3(f, tau, tau_prime, budget, cache) -> List[str]:
    problems = []
    if is_soft_open_map(f, tau, tau_prime):
        problems += [f"f открыто, но f_{a} не открыто" for a in f.source.parameters
                     if not induced_map_open(f, tau, tau_prime, a)]
    if is_soft_closed_map(f, tau, tau_prime):
        problems += [f"f замкнуто, но f_{a} не замкнуто" for a in f.source.parameters
                     if not induced_map_closed(f, tau, tau_prime, a)]
    return problems


PAIR_CHECKS: Dict[str, Callable] = {
    'THM1': _check_thm1,
    'THM2': _check_thm2,
    'THM2_CONVERSE': _check_thm2_converse,
    'THM3': _check_thm3,
    'THM4': _check_thm4,
    'THM5': _check_thm5,
    'PROP3': _check_prop3,
}


def _check_prop1(tau: SoftTopology, budget) -> List[Tuple[Optional[SoftSet], str]]:
    problems = []
    for alpha, pt in zip(tau.context.parameters, induced_topologies(tau)):
        report = validate_point_topology(pt)
        if not report.verdict:
            problems.append((None, f"τ_{alpha} не топология: аксиома {report.witness('axiom')}"))
    return problems


def _check_prop2(tau: SoftTopology, budget) -> List[Tuple[Optional[SoftSet], str]]:
    problems = []
    for a in enumerate_soft_sets(tau.context, budget):
        if not soft_subset(parameterwise_closure(tau, a), soft_closure(tau, a)):
            problems.append((a, "поэлементное замыкание не содержится в мягком замыкании"))
    return problems


def _check_cor1(tau: SoftTopology, budget) -> List[Tuple[Optional[SoftSet], str]]:
    problems = []
    for a in enumerate_soft_sets(tau.context, budget):
        try:
            closure_operators_agree(tau, a)
        except ConsistencyError as e:
            problems.append((a, e.message))
    return problems


SINGLE_CHECKS: Dict[str, Callable] = {
    'PROP1': _check_prop1,
    'PROP2': _check_prop2,
    'COR1': _check_cor1,
}


def _maps_for(theorem: str, source: SoftContext, target: SoftContext) -> List[SoftMapping]:
    if theorem == 'THM5':
        return enumerate_bijections(source, target)
    return enumerate_point_maps(source, target)


def _soft_sets_per_instance(theorem: str, f: SoftMapping) -> int:
    if theorem == 'THM1':
        return 2 ** f.source.bit_count + 2 * 2 ** f.target.bit_count
    if theorem == 'THM4':
        return 2 * 2 ** f.source.bit_count
    return 0


def _run_pair_instances(theorem: str, instances: Iterable[Tuple[SoftTopology, SoftTopology, SoftMapping, str]],
                        budget: EnumerationBudget) -> Tuple[Dict[str, int], List[Violation]]:
    check = PAIR_CHECKS[theorem]
    counts = {'mappings': 0, 'soft_sets': 0, 'instances': 0}
    violations = []
    cache: Dict = {}
    for tau, tau_prime, f, label in instances:
        counts['mappings'] += 1
        counts['instances'] += 1
        counts['soft_sets'] += _soft_sets_per_instance(theorem, f)
        for detail in check(f, tau, tau_prime, budget, cache):
            violations.append(Violation(theorem, detail, tau, tau_prime, f, label=label))
    if theorem == 'THM3':
        counts['soft_sets'] += sum(2 ** key[1].context.bit_count for key in cache)
    return counts, violations


def _run_single_instances(theorem: str, taus: Iterable[Tuple[SoftTopology, str]],
                          budget: EnumerationBudget) -> Tuple[Dict[str, int], List[Violation]]:
    check = SINGLE_CHECKS[theorem]
    counts = {'mappings': 0, 'soft_sets': 0, 'instances': 0}
    violations = []
    for tau, label in taus:
        counts['instances'] += 1
        if theorem != 'PROP1':
            counts['soft_sets'] += 2 ** tau.context.bit_count
        for soft_set, detail in check(tau, budget):
            violations.append(Violation(theorem, detail, tau, soft_set=soft_set, label=label))
    return counts, violations


def _pair_chunk(theorem: str, shape: Tuple[int, int, int], start: int, stop: int,
                budget: EnumerationBudget) -> Tuple[Dict[str, int], List[Violation]]:
    """Задача для одного процесса: топологии источника с номерами [start, stop)"""
    x, y, e = shape
    source = make_context(x, e, 'x', 'X')
    target = make_context(y, e, 'y', 'Y')
    taus = enumerate_soft_topologies(source, budget)[start:stop]
    tau_primes = enumerate_soft_topologies(target, budget)
    maps = _maps_for(theorem, source, target)
    instances = ((tau, tau_prime, f, "") for tau in taus for tau_prime in tau_primes for f in maps)
    return _run_pair_instances(theorem, instances, budget)


def _single_chunk(theorem: str, shape: Tuple[int, int], start: int, stop: int,
                  budget: EnumerationBudget) -> Tuple[Dict[str, int], List[Violation]]:
    x, e = shape
    ctx = make_context(x, e, 'x', 'X')
    taus = enumerate_soft_topologies(ctx, budget)[start:stop]
    return _run_single_instances(theorem, ((tau, "") for tau in taus), budget)


def _merge(total: Dict[str, int], part: Dict[str, int]) -> None:
    for key, value in part.items():
        total[key] = total.get(key, 0) + value


def sweep_theorem(theorem_id: str, ctx_sizes: Sequence[Tuple[int, int, int]],
                  budget: Optional[EnumerationBudget] = None,
                  extra_instances: Sequence[Instance] = (),
                  n_jobs: int = 1) -> TheoremSweepReport:
    """
    Проверяет утверждение на всех перечислимых экземплярах

    Аргументы:
        theorem_id: один из THEOREMS
        ctx_sizes: тройки (|X|, |Y|, |E|); для утверждений об одной топологии
            используются контексты (|X|, |E|) и (|Y|, |E|)
        budget: ограничения перебора
        extra_instances: дополнительные экземпляры (например, из файлов задач)
        n_jobs: число процессов joblib

    Возвращает:
        TheoremSweepReport с точными счетчиками и отсортированными контрпримерами
    """
    if theorem_id not in THEOREMS:
        raise UnknownTheorem(f"неизвестное утверждение {theorem_id!r}; доступны: {', '.join(THEOREMS)}")
    budget = budget or EnumerationBudget()
    counts = {'contexts': 0, 'topologies': 0, 'topology_pairs': 0,
              'mappings': 0, 'soft_sets': 0, 'instances': 0}
    tasks = []

    if theorem_id in PAIR_THEOREMS:
        for shape in ctx_sizes:
            x, y, e = shape
            source = make_context(x, e, 'x', 'X')
            target = make_context(y, e, 'y', 'Y')
            n_source = len(enumerate_soft_topologies(source, budget))
            n_target = len(enumerate_soft_topologies(target, budget))
            counts['contexts'] += 1
            counts['topologies'] += n_source + n_target
            counts['topology_pairs'] += n_source * n_target
            for start in range(0, n_source, CHUNK_SIZE):
                tasks.append(delayed(_pair_chunk)(theorem_id, shape, start, start + CHUNK_SIZE, budget))
    else:
        singles = sorted({(x, e) for x, _, e in ctx_sizes} | {(y, e) for _, y, e in ctx_sizes})
        for shape in singles:
            n = len(enumerate_soft_topologies(make_context(*shape), budget))
            counts['contexts'] += 1
            counts['topologies'] += n
            for start in range(0, n, CHUNK_SIZE):
                tasks.append(delayed(_single_chunk)(theorem_id, shape, start, start + CHUNK_SIZE, budget))

    logger.info(f"🔄 {theorem_id}: {len(tasks)} задач, n_jobs={n_jobs}")
    violations: List[Violation] = []
    for part_counts, part_violations in Parallel(n_jobs=n_jobs)(tasks):
        _merge(counts, part_counts)
        violations.extend(part_violations)

    if extra_instances:
        if theorem_id in PAIR_THEOREMS:
            pairs = []
            for inst in extra_instances:
                if inst.tau_prime is None or inst.mapping is None:
                    continue
                if theorem_id == 'THM5' and not inst.mapping.is_bijective:
                    continue
                pairs.append((inst.tau, inst.tau_prime, inst.mapping, inst.label))
                counts['topology_pairs'] += 1
            part_counts, part_violations = _run_pair_instances(theorem_id, pairs, budget)
        else:
            taus = []
            for inst in extra_instances:
                taus.append((inst.tau, inst.label))
                if inst.tau_prime is not None:
                    taus.append((inst.tau_prime, inst.label))
            part_counts, part_violations = _run_single_instances(theorem_id, taus, budget)
        _merge(counts, part_counts)
        violations.extend(part_violations)

    violations.sort(key=Violation.sort_key)
    if violations:
        logger.warning(f"⚠️ {theorem_id}: найдено {len(violations)} контрпримеров")
    else:
        logger.info(f"✅ {theorem_id}: контрпримеров нет ({counts['instances']} экземпляров)")
    return TheoremSweepReport(theorem_id, counts, violations)
