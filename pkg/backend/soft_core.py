"""
Мягкие множества над фиксированным конечным контекстом и их алгебра

Мягкое множество (F, E) хранится как битовая маска длины |X|·|E|:
бит с номером p·|X| + i отвечает элементу X[i] в значении F(E[p]).
Порядок битов совпадает с порядком объявления параметров и элементов,
поэтому сравнение масок дает детерминированный канонический порядок.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from backend.errors import (ContextMismatch, InvalidContext, MissingParameter,
                            UnknownElement, UnknownParameter)


@dataclass(frozen=True)
class SoftContext:
    """Пара (универсум X, множество параметров E)"""

    universe: Tuple[str, ...]
    parameters: Tuple[str, ...]
    name: str = field(default="X", compare=False)
    _element_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _parameter_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        universe = tuple(str(x) for x in self.universe)
        parameters = tuple(str(e) for e in self.parameters)
        if not universe:
            raise InvalidContext(f"универсум {self.name} пуст")
        if not parameters:
            raise InvalidContext("множество параметров пусто")
        for kind, items in (("элемент", universe), ("параметр", parameters)):
            seen = set()
            for item in items:
                if item in seen:
                    raise InvalidContext(f"{kind} {item!r} объявлен дважды")
                seen.add(item)
        object.__setattr__(self, 'universe', universe)
        object.__setattr__(self, 'parameters', parameters)
        object.__setattr__(self, '_element_index', {x: i for i, x in enumerate(universe)})
        object.__setattr__(self, '_parameter_index', {e: p for p, e in enumerate(parameters)})

    @property
    def size(self) -> int:
        return len(self.universe)

    @property
    def width(self) -> int:
        return len(self.parameters)

    @property
    def bit_count(self) -> int:
        """|X|·|E| - число мягких точек"""
        return len(self.universe) * len(self.parameters)

    @property
    def full_mask(self) -> int:
        return (1 << self.bit_count) - 1

    @property
    def block_mask(self) -> int:
        """Маска всего X внутри одного параметрического блока"""
        return (1 << len(self.universe)) - 1

    def element_index(self, element: str) -> int:
        try:
            return self._element_index[element]
        except KeyError:
            raise UnknownElement(f"элемент {element!r} не принадлежит {self.name}") from None

    def parameter_index(self, parameter: str) -> int:
        try:
            return self._parameter_index[parameter]
        except KeyError:
            raise UnknownParameter(f"параметр {parameter!r} не принадлежит E") from None

    def has_element(self, element: str) -> bool:
        return element in self._element_index

    def has_parameter(self, parameter: str) -> bool:
        return parameter in self._parameter_index

    def bit(self, element: str, parameter: str) -> int:
        return self.parameter_index(parameter) * len(self.universe) + self.element_index(element)

    def subset_mask(self, elements: Iterable[str]) -> int:
        """Маска подмножества X (внутри одного блока)"""
        mask = 0
        for element in elements:
            mask |= 1 << self.element_index(element)
        return mask

    def elements_of(self, block: int) -> Tuple[str, ...]:
        """Элементы подмножества X по маске блока, в порядке объявления"""
        return tuple(x for i, x in enumerate(self.universe) if block >> i & 1)

    def block(self, mask: int, p: int) -> int:
        """Значение F(E[p]) мягкого множества с маской mask"""
        return (mask >> (p * len(self.universe))) & self.block_mask

    def with_universe(self, universe: Iterable[str], name: str) -> "SoftContext":
        """Новый контекст с тем же E (например, Y для отображения X -> Y)"""
        return SoftContext(tuple(universe), self.parameters, name=name)

    def same_parameters(self, other: "SoftContext") -> bool:
        return self.parameters == other.parameters


@dataclass(frozen=True)
class SoftSet:
    """Мягкое множество: тотальное отображение E -> P(X)"""

    context: SoftContext
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.context.full_mask:
            raise UnknownElement(f"маска {self.mask} выходит за пределы контекста {self.context.name}")

    def __getitem__(self, parameter: str) -> Tuple[str, ...]:
        p = self.context.parameter_index(parameter)
        return self.context.elements_of(self.context.block(self.mask, p))

    def assignment(self) -> Dict[str, Tuple[str, ...]]:
        ctx = self.context
        return {e: ctx.elements_of(ctx.block(self.mask, p)) for p, e in enumerate(ctx.parameters)}

    @property
    def is_null(self) -> bool:
        return self.mask == 0

    @property
    def is_absolute(self) -> bool:
        return self.mask == self.context.full_mask

    def __or__(self, other: "SoftSet") -> "SoftSet":
        return soft_union(self, other)

    def __and__(self, other: "SoftSet") -> "SoftSet":
        return soft_intersection(self, other)

    def __invert__(self) -> "SoftSet":
        return soft_complement(self)

    def __sub__(self, other: "SoftSet") -> "SoftSet":
        return soft_difference(self, other)

    def __le__(self, other: "SoftSet") -> bool:
        return soft_subset(self, other)

    def __ge__(self, other: "SoftSet") -> bool:
        return soft_subset(other, self)

    def __repr__(self) -> str:
        return f"SoftSet({format_soft_set(self)})"


@dataclass(frozen=True, order=True)
class SoftPoint:
    """Мягкая точка (x_e, E): {x} на параметре e и пусто на остальных"""

    element: str
    parameter: str

    @classmethod
    def parse(cls, text: str) -> "SoftPoint":
        """Разбирает запись вида 'h3@e1'"""
        element, sep, parameter = text.strip().partition('@')
        if not sep or not element or not parameter:
            raise UnknownElement(f"мягкая точка записывается как элемент@параметр, получено {text!r}")
        return cls(element, parameter)

    def __str__(self) -> str:
        return f"{self.element}@{self.parameter}"


def _require_same_context(a: SoftSet, b: SoftSet) -> None:
    if a.context is not b.context and a.context != b.context:
        raise ContextMismatch(f"мягкие множества заданы над разными контекстами "
                              f"({a.context.name} и {b.context.name})")


def make_soft_set(ctx: SoftContext, assignment: Mapping[str, Iterable[str]]) -> SoftSet:
    """
    Строит мягкое множество по отображению параметр -> подмножество X

    Аргументы:
        ctx: контекст (X, E)
        assignment: значения F(e) для всех e из E; пропуски не допускаются

    Возвращает:
        Проверенный SoftSet
    """
    values = {}
    for parameter, elements in assignment.items():
        p = ctx.parameter_index(parameter)
        values[p] = ctx.subset_mask(elements)
    for p, parameter in enumerate(ctx.parameters):
        if p not in values:
            raise MissingParameter(f"не задано значение для параметра {parameter!r}")
    mask = 0
    for p, block in values.items():
        mask |= block << (p * ctx.size)
    return SoftSet(ctx, mask)


def null_soft_set(ctx: SoftContext) -> SoftSet:
    """Φ"""
    return SoftSet(ctx, 0)


def absolute_soft_set(ctx: SoftContext) -> SoftSet:
    """X̃"""
    return SoftSet(ctx, ctx.full_mask)


def soft_point(ctx: SoftContext, element: str, parameter: str) -> SoftSet:
    return SoftSet(ctx, 1 << ctx.bit(element, parameter))


def point_as_soft_set(ctx: SoftContext, p: SoftPoint) -> SoftSet:
    return soft_point(ctx, p.element, p.parameter)


def soft_points(ctx: SoftContext) -> List[SoftPoint]:
    """Все |X|·|E| мягких точек в каноническом порядке (по номеру бита)"""
    return [SoftPoint(x, e) for e in ctx.parameters for x in ctx.universe]


def point_at_bit(ctx: SoftContext, bit: int) -> SoftPoint:
    p, i = divmod(bit, ctx.size)
    return SoftPoint(ctx.universe[i], ctx.parameters[p])


def points_of(a: SoftSet) -> List[SoftPoint]:
    return [point_at_bit(a.context, bit) for bit in iter_bits(a.mask)]


def iter_bits(mask: int) -> Iterator[int]:
    """Номера единичных битов по возрастанию"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def soft_union(a: SoftSet, b: SoftSet) -> SoftSet:
    _require_same_context(a, b)
    return SoftSet(a.context, a.mask | b.mask)


def soft_intersection(a: SoftSet, b: SoftSet) -> SoftSet:
    _require_same_context(a, b)
    return SoftSet(a.context, a.mask & b.mask)


def soft_complement(a: SoftSet) -> SoftSet:
    """F'(e) = X - F(e) для всех e"""
    return SoftSet(a.context, a.context.full_mask ^ a.mask)


def soft_difference(a: SoftSet, b: SoftSet) -> SoftSet:
    _require_same_context(a, b)
    return SoftSet(a.context, a.mask & ~b.mask)


def soft_subset(a: SoftSet, b: SoftSet) -> bool:
    """Поэлементное включение: a(e) ⊆ b(e) для каждого e"""
    _require_same_context(a, b)
    return a.mask & ~b.mask == 0


def contains_point(a: SoftSet, p: SoftPoint) -> bool:
    """(x_e, E) ∈ (F, E) тогда и только тогда, когда x ∈ F(e)"""
    ctx = a.context
    if not ctx.has_element(p.element) or not ctx.has_parameter(p.parameter):
        raise ContextMismatch(f"мягкая точка {p} не принадлежит контексту {ctx.name}")
    return bool(a.mask >> ctx.bit(p.element, p.parameter) & 1)


def format_subset(ctx: SoftContext, elements: Tuple[str, ...]) -> str:
    if len(elements) == ctx.size:
        return ctx.name
    if not elements:
        return "∅"
    return "{" + ",".join(elements) + "}"


def format_soft_set(a: SoftSet) -> str:
    """Запись вида {e1↦{h1,h2}, e2↦{h3}}"""
    parts = [f"{e}↦{format_subset(a.context, elements)}" for e, elements in a.assignment().items()]
    return "{" + ", ".join(parts) + "}"
