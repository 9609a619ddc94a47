"""
Мягкие топологии: проверка аксиом, замкнутые множества, замыкание и внутренность,
поэлементное (по параметрам) замыкание и индуцированные топологии τ_α
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from backend.errors import AxiomViolation, ConsistencyError, ContextMismatch, InstanceTooLarge
from backend.soft_core import (SoftContext, SoftPoint, SoftSet, _require_same_context,
                               absolute_soft_set, contains_point, iter_bits, null_soft_set,
                               point_at_bit, soft_union)


@dataclass(frozen=True)
class Witness:
    """Именованный объект, объясняющий результат проверки"""

    label: str
    value: Any


@dataclass(frozen=True)
class CheckReport:
    """Вердикт проверки и свидетели нарушения"""

    verdict: bool
    witnesses: Tuple[Witness, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'witnesses', tuple(self.witnesses))
        if not self.verdict and not self.witnesses:
            raise ValueError("отрицательный вердикт без свидетеля")

    def __bool__(self) -> bool:
        return self.verdict

    def witness(self, label: str, default: Any = None) -> Any:
        for w in self.witnesses:
            if w.label == label:
                return w.value
        return default

    @classmethod
    def ok(cls) -> "CheckReport":
        return cls(True)

    @classmethod
    def fail(cls, **witnesses: Any) -> "CheckReport":
        return cls(False, tuple(Witness(label, value) for label, value in witnesses.items()))


def _first_violation(masks: Sequence[int], full: int) -> Optional[Tuple]:
    """
    Ищет первое нарушение аксиом топологии на наборе масок

    Аргументы:
        masks: маски мягких множеств, отсортированные по возрастанию
        full: маска X̃

    Возвращает:
        None или кортеж (аксиома, левое, правое)
    """
    present = set(masks)
    if 0 not in present:
        return ("null", None, None)
    if full not in present:
        return ("absolute", None, None)
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a | b not in present:
                return ("union", a, b)
            if a & b not in present:
                return ("intersection", a, b)
    return None


def _masks_of(ctx: SoftContext, candidate: Iterable[SoftSet]) -> List[int]:
    masks = set()
    for a in candidate:
        if a.context is not ctx and a.context != ctx:
            raise ContextMismatch(f"мягкое множество {a!r} не принадлежит контексту {ctx.name}")
        masks.add(a.mask)
    return sorted(masks)


def validate_topology(ctx: SoftContext, candidate: Iterable[SoftSet]) -> CheckReport:
    """
    Проверяет три аксиомы мягкой топологии

    Для конечного набора замкнутость относительно бинарных объединений
    равносильна замкнутости относительно любых объединений.

    Возвращает:
        CheckReport; при нарушении свидетели: axiom, left, right, result
    """
    masks = _masks_of(ctx, candidate)
    violation = _first_violation(masks, ctx.full_mask)
    if violation is None:
        return CheckReport.ok()
    axiom, a, b = violation
    if axiom == "null":
        return CheckReport.fail(axiom="contains-null", missing=null_soft_set(ctx))
    if axiom == "absolute":
        return CheckReport.fail(axiom="contains-absolute", missing=absolute_soft_set(ctx))
    result = a | b if axiom == "union" else a & b
    return CheckReport.fail(axiom=axiom, left=SoftSet(ctx, a), right=SoftSet(ctx, b),
                            result=SoftSet(ctx, result))


@dataclass(frozen=True)
class SoftTopology:
    """Мягкая топология τ над контекстом; открытые множества в каноническом порядке"""

    context: SoftContext
    opens: Tuple[SoftSet, ...]
    _open_masks: FrozenSet[int] = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)
    _closure_memo: Dict[int, int] = field(init=False, repr=False, compare=False)
    _interior_memo: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = _masks_of(self.context, self.opens)
        violation = _first_violation(masks, self.context.full_mask)
        if violation is not None:
            report = validate_topology(self.context, self.opens)
            raise AxiomViolation(f"набор не является мягкой топологией (аксиома {report.witness('axiom')})",
                                 report=report)
        object.__setattr__(self, 'opens', tuple(SoftSet(self.context, m) for m in masks))
        object.__setattr__(self, '_open_masks', frozenset(masks))
        object.__setattr__(self, '_hash', hash((self.context, tuple(masks))))
        object.__setattr__(self, '_closure_memo', {})
        object.__setattr__(self, '_interior_memo', {})

    @classmethod
    def from_masks(cls, ctx: SoftContext, masks: Iterable[int]) -> "SoftTopology":
        return cls(ctx, tuple(SoftSet(ctx, m) for m in masks))

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.opens)

    def __iter__(self) -> Iterator[SoftSet]:
        return iter(self.opens)

    def __contains__(self, a: SoftSet) -> bool:
        return self.is_open(a)

    @property
    def open_masks(self) -> FrozenSet[int]:
        return self._open_masks

    def is_open(self, a: SoftSet) -> bool:
        _require_same_context(a, self.opens[0])
        return a.mask in self._open_masks

    def closed_sets(self) -> List[SoftSet]:
        full = self.context.full_mask
        return [SoftSet(self.context, m) for m in sorted(full ^ o for o in self._open_masks)]


def discrete_topology(ctx: SoftContext, max_soft_sets: int = 2 ** 16) -> SoftTopology:
    """Все мягкие множества открыты"""
    if 2 ** ctx.bit_count > max_soft_sets:
        raise InstanceTooLarge(f"дискретная топология содержит 2^{ctx.bit_count} множеств")
    return SoftTopology.from_masks(ctx, range(ctx.full_mask + 1))


def indiscrete_topology(ctx: SoftContext) -> SoftTopology:
    """{Φ, X̃}"""
    return SoftTopology.from_masks(ctx, (0, ctx.full_mask))


def _check_member(tau: SoftTopology, a: SoftSet) -> None:
    if a.context is not tau.context and a.context != tau.context:
        raise ContextMismatch(f"мягкое множество над {a.context.name}, а топология над {tau.context.name}")


def is_soft_closed(tau: SoftTopology, a: SoftSet) -> bool:
    """Множество замкнуто, если его дополнение открыто"""
    _check_member(tau, a)
    return tau.context.full_mask ^ a.mask in tau.open_masks


def _closure_mask(tau: SoftTopology, mask: int) -> int:
    cached = tau._closure_memo.get(mask)
    if cached is not None:
        return cached
    full = tau.context.full_mask
    result = full
    # пересечение всех замкнутых надмножеств
    for o in tau.open_masks:
        closed = full ^ o
        if mask & ~closed == 0:
            result &= closed
    tau._closure_memo[mask] = result
    return result


def _interior_mask(tau: SoftTopology, mask: int) -> int:
    cached = tau._interior_memo.get(mask)
    if cached is not None:
        return cached
    result = 0
    # объединение всех открытых подмножеств
    for o in tau.open_masks:
        if o & ~mask == 0:
            result |= o
    tau._interior_memo[mask] = result
    return result


def soft_closure(tau: SoftTopology, a: SoftSet) -> SoftSet:
    _check_member(tau, a)
    return SoftSet(a.context, _closure_mask(tau, a.mask))


def soft_interior(tau: SoftTopology, a: SoftSet) -> SoftSet:
    _check_member(tau, a)
    return SoftSet(a.context, _interior_mask(tau, a.mask))


@dataclass(frozen=True)
class PointTopology:
    """Обычная топология на конечном множестве; открытые множества - маски по universe"""

    universe: Tuple[str, ...]
    opens: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'opens', tuple(sorted(set(self.opens))))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.universe)) - 1

    def subsets(self) -> List[FrozenSet[str]]:
        return [frozenset(self.elements(m)) for m in self.opens]

    def elements(self, mask: int) -> Tuple[str, ...]:
        return tuple(x for i, x in enumerate(self.universe) if mask >> i & 1)

    def mask_of(self, elements: Iterable[str]) -> int:
        index = {x: i for i, x in enumerate(self.universe)}
        return sum(1 << index[x] for x in set(elements))

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def is_closed(self, mask: int) -> bool:
        return self.full_mask ^ mask in self.opens

    def closure(self, mask: int) -> int:
        full = self.full_mask
        result = full
        for o in self.opens:
            closed = full ^ o
            if mask & ~closed == 0:
                result &= closed
        return result

    def interior(self, mask: int) -> int:
        result = 0
        for o in self.opens:
            if o & ~mask == 0:
                result |= o
        return result


def validate_point_topology(pt: PointTopology) -> CheckReport:
    """Проверка аксиом обычной топологии (используется при проверке индуцированных τ_α)"""
    violation = _first_violation(list(pt.opens), pt.full_mask)
    if violation is None:
        return CheckReport.ok()
    axiom, a, b = violation
    witnesses = {"axiom": axiom}
    if a is not None:
        witnesses.update(left=pt.elements(a), right=pt.elements(b))
    return CheckReport.fail(**witnesses)


def induced_topology(tau: SoftTopology, alpha: str) -> PointTopology:
    """τ_α = {F(α) : (F, E) ∈ τ}"""
    ctx = tau.context
    p = ctx.parameter_index(alpha)
    return PointTopology(ctx.universe, tuple(ctx.block(o, p) for o in tau.open_masks))


def induced_topologies(tau: SoftTopology) -> List[PointTopology]:
    """τ_α для всех α в порядке объявления параметров"""
    return [induced_topology(tau, alpha) for alpha in tau.context.parameters]


def _parameterwise_closure_mask(ctx: SoftContext, induced: Sequence[PointTopology], mask: int) -> int:
    result = 0
    for p, pt in enumerate(induced):
        result |= pt.closure(ctx.block(mask, p)) << (p * ctx.size)
    return result


def parameterwise_closure(tau: SoftTopology, a: SoftSet) -> SoftSet:
    """(F̄, E): значение на α - замыкание F(α) в τ_α"""
    _check_member(tau, a)
    return SoftSet(a.context, _parameterwise_closure_mask(tau.context, induced_topologies(tau), a.mask))


def corollary1_criterion(tau: SoftTopology, a: SoftSet) -> bool:
    """Дополнение поэлементного замыкания открыто"""
    pw = parameterwise_closure(tau, a)
    return tau.context.full_mask ^ pw.mask in tau.open_masks


def closure_operators_agree(tau: SoftTopology, a: SoftSet) -> bool:
    """
    Совпадают ли поэлементное замыкание и мягкое замыкание

    Результат сверяется с критерием через открытость дополнения;
    расхождение означает ошибку реализации и приводит к ConsistencyError.
    """
    direct = parameterwise_closure(tau, a) == soft_closure(tau, a)
    criterion = corollary1_criterion(tau, a)
    if direct != criterion:
        raise ConsistencyError(f"замыкания для {a!r}: сравнение дало {direct}, критерий дал {criterion}")
    return direct


def is_soft_neighbourhood(tau: SoftTopology, g: SoftSet, p: SoftPoint) -> bool:
    """Существует открытое F с p ∈ F ⊆ g"""
    _check_member(tau, g)
    for o in tau.opens:
        if o.mask & ~g.mask == 0 and contains_point(o, p):
            return True
    return False


def interior_points(tau: SoftTopology, g: SoftSet) -> List[SoftPoint]:
    """Все мягкие внутренние точки g в каноническом порядке"""
    _check_member(tau, g)
    ctx = tau.context
    return [point_at_bit(ctx, bit) for bit in iter_bits(g.mask)
            if is_soft_neighbourhood(tau, g, point_at_bit(ctx, bit))]


def union_all(ctx: SoftContext, sets: Iterable[SoftSet]) -> SoftSet:
    result = null_soft_set(ctx)
    for a in sets:
        result = soft_union(result, a)
    return result
