"""
Мягкие отображения: образы и прообразы, проверки мягкой непрерывности,
мягкой открытости/замкнутости и мягкого гомеоморфизма
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from backend.errors import ContextMismatch, InstanceTooLarge, MissingElement, NotBijective
from backend.soft_core import (SoftContext, SoftPoint, SoftSet, iter_bits, point_at_bit)
from backend.soft_topology import (CheckReport, PointTopology, SoftTopology, Witness,
                                   _closure_mask, _interior_mask, _parameterwise_closure_mask,
                                   induced_topologies, induced_topology)

logger = logging.getLogger(__name__)

# таблицы образов блоков строятся, пока 2^|X| не больше этого порога
_TABLE_LIMIT_BITS = 12


@dataclass(frozen=True)
class SoftMapping:
    """
    Отображение f: X -> Y, поднятое на мягкие множества по параметрам

    Поле images хранит f(x) для каждого x из source.universe в порядке объявления.
    """

    source: SoftContext
    target: SoftContext
    images: Tuple[str, ...]
    _image_index: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _image_table: Optional[Tuple[int, ...]] = field(init=False, repr=False, compare=False)
    _preimage_table: Optional[Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.source.same_parameters(self.target):
            raise ContextMismatch(f"у {self.source.name} и {self.target.name} разные множества параметров")
        images = tuple(self.images)
        if len(images) != self.source.size:
            raise MissingElement(f"отображение задано на {len(images)} из {self.source.size} элементов")
        index = tuple(self.target.element_index(y) for y in images)
        object.__setattr__(self, 'images', images)
        object.__setattr__(self, '_image_index', index)
        image_table = None
        if self.source.size <= _TABLE_LIMIT_BITS:
            image_table = tuple(self._block_image_direct(b) for b in range(1 << self.source.size))
        preimage_table = None
        if self.target.size <= _TABLE_LIMIT_BITS:
            preimage_table = tuple(self._block_preimage_direct(b) for b in range(1 << self.target.size))
        object.__setattr__(self, '_image_table', image_table)
        object.__setattr__(self, '_preimage_table', preimage_table)

    @classmethod
    def from_dict(cls, source: SoftContext, target: SoftContext,
                  point_map: Mapping[str, str]) -> "SoftMapping":
        """
        Строит отображение по словарю x -> f(x)

        Аргументы:
            source: контекст (X, E)
            target: контекст (Y, E) с тем же E
            point_map: значения на всех элементах X

        Возвращает:
            Проверенный SoftMapping
        """
        for x in point_map:
            source.element_index(x)
        missing = [x for x in source.universe if x not in point_map]
        if missing:
            raise MissingElement(f"отображение не определено на элементе {missing[0]!r}")
        return cls(source, target, tuple(point_map[x] for x in source.universe))

    def __call__(self, element: str) -> str:
        return self.images[self.source.element_index(element)]

    def as_dict(self) -> Dict[str, str]:
        return dict(zip(self.source.universe, self.images))

    @property
    def is_injective(self) -> bool:
        return len(set(self._image_index)) == len(self._image_index)

    @property
    def is_surjective(self) -> bool:
        return len(set(self._image_index)) == self.target.size

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def inverse(self) -> "SoftMapping":
        """Обратное отображение Y -> X"""
        if not self.is_bijective:
            raise NotBijective("обратное отображение существует только для биекции")
        back = {y: x for x, y in zip(self.source.universe, self.images)}
        return SoftMapping.from_dict(self.target, self.source, back)

    def _block_image_direct(self, block: int) -> int:
        result = 0
        for i in iter_bits(block):
            result |= 1 << self._image_index[i]
        return result

    def _block_preimage_direct(self, block: int) -> int:
        result = 0
        for i, j in enumerate(self._image_index):
            if block >> j & 1:
                result |= 1 << i
        return result

    def block_image(self, block: int) -> int:
        """Образ подмножества X (маска блока) - подмножество Y"""
        if self._image_table is not None:
            return self._image_table[block]
        return self._block_image_direct(block)

    def block_preimage(self, block: int) -> int:
        if self._preimage_table is not None:
            return self._preimage_table[block]
        return self._block_preimage_direct(block)

    def image_mask(self, mask: int) -> int:
        src, dst = self.source, self.target
        result = 0
        for p in range(src.width):
            result |= self.block_image(src.block(mask, p)) << (p * dst.size)
        return result

    def preimage_mask(self, mask: int) -> int:
        src, dst = self.source, self.target
        result = 0
        for p in range(dst.width):
            result |= self.block_preimage(dst.block(mask, p)) << (p * src.size)
        return result

    def image_bit(self, bit: int) -> int:
        """Номер бита мягкой точки (f(x)_e, E) по номеру бита (x_e, E)"""
        p, i = divmod(bit, self.source.size)
        return p * self.target.size + self._image_index[i]


def _same(a: SoftContext, b: SoftContext) -> bool:
    return a is b or a == b


def _check_mapping(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> None:
    if not _same(tau.context, f.source):
        raise ContextMismatch(f"топология источника задана над {tau.context.name}, а не над {f.source.name}")
    if not _same(tau_prime.context, f.target):
        raise ContextMismatch(f"топология цели задана над {tau_prime.context.name}, а не над {f.target.name}")


def _opens_in_order(tau: SoftTopology, order: Optional[Sequence[SoftSet]]) -> List[int]:
    """Открытые маски: сначала в заданном порядке, затем оставшиеся канонически"""
    if order is None:
        return sorted(tau.open_masks)
    seen = []
    for a in order:
        if a.mask in tau.open_masks and a.mask not in seen:
            seen.append(a.mask)
    rest = sorted(tau.open_masks.difference(seen))
    return seen + rest


def _check_budget(ctx: SoftContext, max_soft_sets: int) -> None:
    if 2 ** ctx.bit_count > max_soft_sets:
        raise InstanceTooLarge(f"перебор 2^{ctx.bit_count} мягких множеств над {ctx.name} "
                               f"превышает бюджет {max_soft_sets}")


def soft_image(f: SoftMapping, a: SoftSet) -> SoftSet:
    """f(F)(e) = {f(x) : x ∈ F(e)}"""
    if not _same(a.context, f.source):
        raise ContextMismatch(f"мягкое множество над {a.context.name}, а отображение из {f.source.name}")
    return SoftSet(f.target, f.image_mask(a.mask))


def soft_preimage(f: SoftMapping, b: SoftSet) -> SoftSet:
    """f^{-1}(G)(e) = {x : f(x) ∈ G(e)}"""
    if not _same(b.context, f.target):
        raise ContextMismatch(f"мягкое множество над {b.context.name}, а отображение в {f.target.name}")
    return SoftSet(f.source, f.preimage_mask(b.mask))


# ========== НЕПРЕРЫВНОСТЬ ==========

def _point_failure(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                   bit: int, open_images: Dict[int, int]) -> Optional[int]:
    """Первая открытая окрестность образа точки без подходящей окрестности точки"""
    target_bit = f.image_bit(bit)
    for h in sorted(tau_prime.open_masks):
        if not h >> target_bit & 1:
            continue
        if not any(o >> bit & 1 and image & ~h == 0 for o, image in open_images.items()):
            return h
    return None


def check_soft_continuous_at(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                             p: SoftPoint) -> CheckReport:
    """
    Непрерывность в мягкой точке

    Достаточно перебирать открытые окрестности образа: всякая окрестность
    содержит открытую окрестность той же точки.
    """
    _check_mapping(f, tau, tau_prime)
    if not f.source.has_element(p.element) or not f.source.has_parameter(p.parameter):
        raise ContextMismatch(f"мягкая точка {p} не принадлежит контексту {f.source.name}")
    bit = f.source.bit(p.element, p.parameter)
    open_images = {o: f.image_mask(o) for o in tau.open_masks}
    h = _point_failure(f, tau, tau_prime, bit, open_images)
    if h is None:
        return CheckReport.ok()
    return CheckReport.fail(point=p, neighbourhood=SoftSet(f.target, h))


def is_soft_continuous_at(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                          p: SoftPoint) -> bool:
    return check_soft_continuous_at(f, tau, tau_prime, p).verdict


def check_soft_continuous(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                          order: Optional[Sequence[SoftSet]] = None) -> CheckReport:
    """
    Прообраз каждого открытого множества открыт

    order задает порядок просмотра открытых множеств цели (например, порядок
    объявления в файле); по умолчанию канонический.
    """
    _check_mapping(f, tau, tau_prime)
    for g in _opens_in_order(tau_prime, order):
        pre = f.preimage_mask(g)
        if pre not in tau.open_masks:
            return CheckReport.fail(open=SoftSet(f.target, g), preimage=SoftSet(f.source, pre))
    return CheckReport.ok()


def is_soft_continuous(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> bool:
    return check_soft_continuous(f, tau, tau_prime).verdict


CONDITION_NAMES = (
    'pointwise',
    'open_preimages',
    'closed_preimages',
    'image_closure',
    'preimage_closure',
    'preimage_interior',
)


@dataclass(frozen=True)
class ContinuityReport:
    """Шесть условий непрерывности; None - условие пропущено из-за бюджета"""

    pointwise: bool
    open_preimages: bool
    closed_preimages: bool
    image_closure: Optional[bool]
    preimage_closure: Optional[bool]
    preimage_interior: Optional[bool]
    witnesses: Dict[str, Tuple[Witness, ...]] = field(default_factory=dict, compare=False)

    def conditions(self) -> Dict[str, Optional[bool]]:
        return {name: getattr(self, name) for name in CONDITION_NAMES}

    @property
    def verdict(self) -> bool:
        return self.open_preimages

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.conditions().values())

    @property
    def all_agree(self) -> bool:
        values = {v for v in self.conditions().values() if v is not None}
        return len(values) <= 1


def _condition_pointwise(f, tau, tau_prime) -> Tuple[bool, Tuple[Witness, ...]]:
    open_images = {o: f.image_mask(o) for o in tau.open_masks}
    for bit in range(f.source.bit_count):
        h = _point_failure(f, tau, tau_prime, bit, open_images)
        if h is not None:
            return False, (Witness('point', point_at_bit(f.source, bit)),
                           Witness('neighbourhood', SoftSet(f.target, h)))
    return True, ()


def _condition_closed_preimages(f, tau, tau_prime) -> Tuple[bool, Tuple[Witness, ...]]:
    full_x, full_y = f.source.full_mask, f.target.full_mask
    for closed in sorted(full_y ^ o for o in tau_prime.open_masks):
        pre = f.preimage_mask(closed)
        if full_x ^ pre not in tau.open_masks:
            return False, (Witness('closed', SoftSet(f.target, closed)),
                           Witness('preimage', SoftSet(f.source, pre)))
    return True, ()


def _condition_image_closure(f, tau, tau_prime) -> Tuple[bool, Tuple[Witness, ...]]:
    # f(cl F) ⊆ cl f(F) для всех F над X
    for a in range(f.source.full_mask + 1):
        lhs = f.image_mask(_closure_mask(tau, a))
        rhs = _closure_mask(tau_prime, f.image_mask(a))
        if lhs & ~rhs:
            return False, (Witness('set', SoftSet(f.source, a)),)
    return True, ()


def _condition_preimage_closure(f, tau, tau_prime) -> Tuple[bool, Tuple[Witness, ...]]:
    # cl f^{-1}(G) ⊆ f^{-1}(cl G) для всех G над Y
    for b in range(f.target.full_mask + 1):
        lhs = _closure_mask(tau, f.preimage_mask(b))
        rhs = f.preimage_mask(_closure_mask(tau_prime, b))
        if lhs & ~rhs:
            return False, (Witness('set', SoftSet(f.target, b)),)
    return True, ()


def _condition_preimage_interior(f, tau, tau_prime) -> Tuple[bool, Tuple[Witness, ...]]:
    # f^{-1}(int G) ⊆ int f^{-1}(G) для всех G над Y
    for b in range(f.target.full_mask + 1):
        lhs = f.preimage_mask(_interior_mask(tau_prime, b))
        rhs = _interior_mask(tau, f.preimage_mask(b))
        if lhs & ~rhs:
            return False, (Witness('set', SoftSet(f.target, b)),)
    return True, ()


def theorem1_report(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                    max_soft_sets: int = 2 ** 16, allow_partial: bool = False,
                    order: Optional[Sequence[SoftSet]] = None) -> ContinuityReport:
    """
    Независимо вычисляет шесть эквивалентных условий мягкой непрерывности

    Аргументы:
        f: отображение
        tau, tau_prime: топологии источника и цели
        max_soft_sets: бюджет перебора для условий (4)-(6)
        allow_partial: при превышении бюджета вернуть None для (4)-(6) вместо исключения
        order: порядок просмотра открытых множеств цели для свидетеля условия (2)

    Возвращает:
        ContinuityReport
    """
    _check_mapping(f, tau, tau_prime)
    witnesses = {}

    pointwise, w = _condition_pointwise(f, tau, tau_prime)
    witnesses['pointwise'] = w
    continuity = check_soft_continuous(f, tau, tau_prime, order)
    witnesses['open_preimages'] = continuity.witnesses
    closed_preimages, w = _condition_closed_preimages(f, tau, tau_prime)
    witnesses['closed_preimages'] = w

    results: Dict[str, Optional[bool]] = {'image_closure': None, 'preimage_closure': None,
                                          'preimage_interior': None}
    try:
        _check_budget(f.source, max_soft_sets)
        _check_budget(f.target, max_soft_sets)
    except InstanceTooLarge:
        if not allow_partial:
            raise
        logger.warning("⚠️ Условия (4)-(6) пропущены: превышен бюджет перебора")
    else:
        for name, condition in (('image_closure', _condition_image_closure),
                                ('preimage_closure', _condition_preimage_closure),
                                ('preimage_interior', _condition_preimage_interior)):
            results[name], witnesses[name] = condition(f, tau, tau_prime)

    return ContinuityReport(
        pointwise=pointwise,
        open_preimages=continuity.verdict,
        closed_preimages=closed_preimages,
        witnesses=witnesses,
        **results,
    )


# ========== ИНДУЦИРОВАННЫЕ ОТОБРАЖЕНИЯ f_α ==========

def _induced_pair(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                  alpha: str) -> Tuple[PointTopology, PointTopology]:
    _check_mapping(f, tau, tau_prime)
    return induced_topology(tau, alpha), induced_topology(tau_prime, alpha)


def induced_map_continuous(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology, alpha: str) -> bool:
    """f_α: (X, τ_α) -> (Y, τ'_α) непрерывно"""
    pt, pt_prime = _induced_pair(f, tau, tau_prime, alpha)
    return all(pt.is_open(f.block_preimage(u)) for u in pt_prime.opens)


def induced_map_open(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology, alpha: str) -> bool:
    pt, pt_prime = _induced_pair(f, tau, tau_prime, alpha)
    return all(pt_prime.is_open(f.block_image(u)) for u in pt.opens)


def induced_map_closed(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology, alpha: str) -> bool:
    pt, pt_prime = _induced_pair(f, tau, tau_prime, alpha)
    return all(pt_prime.is_closed(f.block_image(pt.full_mask ^ u)) for u in pt.opens)


def all_induced_maps_continuous(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> bool:
    return all(induced_map_continuous(f, tau, tau_prime, alpha) for alpha in f.source.parameters)


def check_theorem3_hypothesis(tau: SoftTopology, max_soft_sets: int = 2 ** 16) -> CheckReport:
    """Для каждого F дополнение поэлементного замыкания (F̄, E) открыто"""
    ctx = tau.context
    _check_budget(ctx, max_soft_sets)
    induced = induced_topologies(tau)
    for a in range(ctx.full_mask + 1):
        pw = _parameterwise_closure_mask(ctx, induced, a)
        if ctx.full_mask ^ pw not in tau.open_masks:
            return CheckReport.fail(set=SoftSet(ctx, a), parameterwise_closure=SoftSet(ctx, pw))
    return CheckReport.ok()


def theorem3_hypothesis(tau: SoftTopology, max_soft_sets: int = 2 ** 16) -> bool:
    return check_theorem3_hypothesis(tau, max_soft_sets).verdict


# ========== ОТКРЫТЫЕ И ЗАМКНУТЫЕ ОТОБРАЖЕНИЯ ==========

def check_soft_open_map(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                        order: Optional[Sequence[SoftSet]] = None) -> CheckReport:
    """Образ каждого открытого множества открыт"""
    _check_mapping(f, tau, tau_prime)
    for o in _opens_in_order(tau, order):
        image = f.image_mask(o)
        if image not in tau_prime.open_masks:
            return CheckReport.fail(open=SoftSet(f.source, o), image=SoftSet(f.target, image))
    return CheckReport.ok()


def check_soft_closed_map(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                          order: Optional[Sequence[SoftSet]] = None) -> CheckReport:
    """Образ каждого замкнутого множества замкнут; order - порядок открытых множеств τ"""
    _check_mapping(f, tau, tau_prime)
    full_x, full_y = f.source.full_mask, f.target.full_mask
    for closed in (full_x ^ o for o in _opens_in_order(tau, order)):
        image = f.image_mask(closed)
        if full_y ^ image not in tau_prime.open_masks:
            return CheckReport.fail(closed=SoftSet(f.source, closed), image=SoftSet(f.target, image))
    return CheckReport.ok()


def is_soft_open_map(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> bool:
    return check_soft_open_map(f, tau, tau_prime).verdict


def is_soft_closed_map(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> bool:
    return check_soft_closed_map(f, tau, tau_prime).verdict


def check_open_map_via_interior(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                                max_soft_sets: int = 2 ** 16) -> CheckReport:
    """f(int F) ⊆ int f(F) для всех F над X"""
    _check_mapping(f, tau, tau_prime)
    _check_budget(f.source, max_soft_sets)
    for a in range(f.source.full_mask + 1):
        lhs = f.image_mask(_interior_mask(tau, a))
        rhs = _interior_mask(tau_prime, f.image_mask(a))
        if lhs & ~rhs:
            return CheckReport.fail(set=SoftSet(f.source, a))
    return CheckReport.ok()


def check_closed_map_via_closure(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                                 max_soft_sets: int = 2 ** 16) -> CheckReport:
    """cl f(F) ⊆ f(cl F) для всех F над X"""
    _check_mapping(f, tau, tau_prime)
    _check_budget(f.source, max_soft_sets)
    for a in range(f.source.full_mask + 1):
        lhs = _closure_mask(tau_prime, f.image_mask(a))
        rhs = f.image_mask(_closure_mask(tau, a))
        if lhs & ~rhs:
            return CheckReport.fail(set=SoftSet(f.source, a))
    return CheckReport.ok()


def open_map_via_interior(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                          max_soft_sets: int = 2 ** 16) -> bool:
    return check_open_map_via_interior(f, tau, tau_prime, max_soft_sets).verdict


def closed_map_via_closure(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology,
                           max_soft_sets: int = 2 ** 16) -> bool:
    return check_closed_map_via_closure(f, tau, tau_prime, max_soft_sets).verdict


# ========== ГОМЕОМОРФИЗМ ==========

def is_soft_homeomorphism(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> bool:
    """Биекция, непрерывная вместе с обратной; не биекция - просто False"""
    _check_mapping(f, tau, tau_prime)
    if not f.is_bijective:
        return False
    return is_soft_continuous(f, tau, tau_prime) and is_soft_continuous(f.inverse(), tau_prime, tau)


def theorem5_equivalences(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> CheckReport:
    """
    Для биекции сравнивает: гомеоморфизм, непрерывность+замкнутость, непрерывность+открытость

    Возвращает:
        CheckReport; verdict - все три значения совпали, свидетели - сами значения
    """
    _check_mapping(f, tau, tau_prime)
    if not f.is_bijective:
        raise NotBijective("условия сравниваются только для биекции")
    continuous = is_soft_continuous(f, tau, tau_prime)
    values = (
        ('homeomorphism', is_soft_homeomorphism(f, tau, tau_prime)),
        ('continuous_and_closed', continuous and is_soft_closed_map(f, tau, tau_prime)),
        ('continuous_and_open', continuous and is_soft_open_map(f, tau, tau_prime)),
    )
    verdict = len({v for _, v in values}) == 1
    return CheckReport(verdict, tuple(Witness(label, value) for label, value in values))


def points_failing_continuity(f: SoftMapping, tau: SoftTopology, tau_prime: SoftTopology) -> List[SoftPoint]:
    """Все мягкие точки, в которых f не является мягко непрерывным"""
    _check_mapping(f, tau, tau_prime)
    open_images = {o: f.image_mask(o) for o in tau.open_masks}
    return [point_at_bit(f.source, bit) for bit in range(f.source.bit_count)
            if _point_failure(f, tau, tau_prime, bit, open_images) is not None]
