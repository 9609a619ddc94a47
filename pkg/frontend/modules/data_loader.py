"""
Модуль для загрузки файлов задач (.soft)

Формат построчный:

    # комментарий
    [context]                 контекст X (имя по умолчанию - X)
    universe: h1 h2 h3
    parameters: e1 e2

    [context Y]               второй контекст; параметры наследуются
    universe: a b

    [set F1]                  мягкое множество над первым контекстом
    e1: h1 h2
    e2:                       пустое значение допустимо

    [set G1 over Y]
    e1: a
    e2: a b

    [topology tau]            имена множеств через пробел; null и absolute встроены
    null absolute F1

    [topology tau_prime over Y]
    discrete                  или indiscrete

    [map f]
    source: tau
    target: tau_prime
    h1 -> a
"""
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from backend.errors import (AxiomViolation, ProblemFileError, ProblemSyntaxError,
                            SoftTopologyError, UnknownName)
from backend.soft_core import SoftContext, SoftSet, absolute_soft_set, make_soft_set, null_soft_set
from backend.soft_mapping import SoftMapping
from backend.soft_topology import (CheckReport, SoftTopology, discrete_topology, indiscrete_topology,
                                   validate_topology)

logger = logging.getLogger(__name__)

SECTION_KINDS = ('context', 'set', 'topology', 'map')
BUILTIN_SETS = ('null', 'absolute')
DIRECTIVES = ('discrete', 'indiscrete')
RESERVED = BUILTIN_SETS + DIRECTIVES

_HEADER = re.compile(r'^\[\s*(\w+)(?:\s+([^\s\]]+))?(?:\s+over\s+([^\s\]]+))?\s*\]$')
_NAME = re.compile(r"^[A-Za-z_][\w'.-]*$")


@dataclass
class TopologyDecl:
    """Объявленная топология в том виде, как она записана в файле"""

    name: str
    context: str
    members: Tuple[str, ...] = ()
    directive: Optional[str] = None
    line: int = 0


@dataclass
class MapDecl:
    """Объявленное отображение со ссылками на топологии источника и цели"""

    name: str
    source: str
    target: str
    mapping: SoftMapping
    line: int = 0


@dataclass
class ProblemFile:
    """Разобранный файл задачи; словари сохраняют порядок объявления"""

    path: Optional[str] = None
    contexts: Dict[str, SoftContext] = field(default_factory=dict)
    sets: Dict[str, SoftSet] = field(default_factory=dict)
    set_contexts: Dict[str, str] = field(default_factory=dict)
    topology_decls: Dict[str, TopologyDecl] = field(default_factory=dict)
    topologies: Dict[str, SoftTopology] = field(default_factory=dict)
    maps: Dict[str, MapDecl] = field(default_factory=dict)
    max_soft_sets: int = 2 ** 16

    @property
    def context(self) -> SoftContext:
        """Первый объявленный контекст"""
        return next(iter(self.contexts.values()))

    def soft_set(self, name: str) -> SoftSet:
        try:
            return self.sets[name]
        except KeyError:
            raise UnknownName(f"мягкое множество {name!r} не объявлено") from None

    def topology(self, name: Optional[str] = None) -> SoftTopology:
        """Топология по имени; без имени - первая объявленная"""
        if name is None:
            if not self.topologies:
                raise UnknownName("в файле нет ни одной топологии")
            return next(iter(self.topologies.values()))
        if name in self.topology_decls and name not in self.topologies:
            raise AxiomViolation(f"набор {name} не является мягкой топологией",
                                 report=self.topology_report(name))
        try:
            return self.topologies[name]
        except KeyError:
            raise UnknownName(f"топология {name!r} не объявлена") from None

    def topology_name(self, tau: SoftTopology) -> Optional[str]:
        for name, candidate in self.topologies.items():
            if candidate == tau:
                return name
        return None

    def mapping(self, name: Optional[str] = None) -> MapDecl:
        if name is None:
            if not self.maps:
                raise UnknownName("в файле нет ни одного отображения")
            return next(iter(self.maps.values()))
        try:
            return self.maps[name]
        except KeyError:
            raise UnknownName(f"отображение {name!r} не объявлено") from None

    def members(self, name: str) -> List[SoftSet]:
        """Множества топологии в порядке объявления (с раскрытием директив)"""
        if name not in self.topology_decls:
            raise UnknownName(f"топология {name!r} не объявлена")
        decl = self.topology_decls[name]
        ctx = self.contexts[decl.context]
        if decl.directive == 'discrete':
            try:
                return list(discrete_topology(ctx, self.max_soft_sets).opens)
            except SoftTopologyError as e:
                raise e.at(decl.line)
        if decl.directive == 'indiscrete':
            return list(indiscrete_topology(ctx).opens)
        return [self._member(ctx, member) for member in decl.members]

    def topology_report(self, name: str) -> CheckReport:
        decl = self.topology_decls[name]
        return validate_topology(self.contexts[decl.context], self.members(name))

    def _member(self, ctx: SoftContext, name: str) -> SoftSet:
        if name == 'null':
            return null_soft_set(ctx)
        if name == 'absolute':
            return absolute_soft_set(ctx)
        return self.soft_set(name)

    def name_of(self, a: SoftSet) -> Optional[str]:
        """Имя, под которым множество объявлено в файле (или null/absolute)"""
        for name, candidate in self.sets.items():
            if candidate == a:
                return name
        if a.is_null:
            return 'null'
        if a.is_absolute:
            return 'absolute'
        return None


@dataclass
class _Section:
    kind: str
    name: Optional[str]
    over: Optional[str]
    line: int
    entries: List[Tuple[int, int, str]] = field(default_factory=list)


def _split_sections(lines: List[str]) -> List[_Section]:
    sections: List[_Section] = []
    current = None

    for number, raw in enumerate(lines, start=1):
        # Отбрасываем комментарии
        line = raw.split('#', 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        column = len(line) - len(line.lstrip()) + 1

        if stripped.startswith('['):
            match = _HEADER.match(stripped)
            if not match:
                raise ProblemSyntaxError(f"некорректный заголовок секции {stripped!r}", line=number, column=column)
            kind, name, over = match.groups()
            if kind not in SECTION_KINDS:
                raise ProblemSyntaxError(f"неизвестная секция {kind!r}", line=number, column=column)
            if kind != 'context' and name is None:
                raise ProblemSyntaxError(f"секции {kind} нужно имя", line=number, column=column)
            if kind == 'context' and over is not None:
                raise ProblemSyntaxError("контекст не может быть задан над другим контекстом",
                                         line=number, column=column)
            if name is not None and not _NAME.match(name):
                raise ProblemSyntaxError(f"недопустимое имя {name!r}", line=number, column=column)
            current = _Section(kind, name, over, number)
            sections.append(current)
        elif current is None:
            raise ProblemSyntaxError("строка вне секции", line=number, column=column)
        else:
            current.entries.append((number, column, stripped))

    return sections


def _key_value(entry: Tuple[int, int, str]) -> Tuple[str, List[str]]:
    number, column, text = entry
    key, sep, value = text.partition(':')
    if not sep or not key.strip():
        raise ProblemSyntaxError(f"ожидалась строка вида 'ключ: значения', получено {text!r}",
                                 line=number, column=column)
    return key.strip(), value.split()


def _build_context(section: _Section, first: Optional[SoftContext]) -> SoftContext:
    name = section.name or 'X'
    values: Dict[str, List[str]] = {}
    for entry in section.entries:
        key, items = _key_value(entry)
        if key not in ('universe', 'parameters'):
            raise ProblemSyntaxError(f"в секции context допустимы universe и parameters, получено {key!r}",
                                     line=entry[0], column=entry[1])
        if key in values:
            raise ProblemSyntaxError(f"ключ {key!r} указан дважды", line=entry[0], column=entry[1])
        values[key] = items
    if 'universe' not in values:
        raise ProblemSyntaxError(f"в контексте {name} не задан universe", line=section.line)
    parameters = values.get('parameters')
    if parameters is None:
        if first is None:
            raise ProblemSyntaxError(f"в контексте {name} не заданы parameters", line=section.line)
        parameters = list(first.parameters)
    elif first is not None and tuple(parameters) != first.parameters:
        raise ProblemSyntaxError(f"параметры контекста {name} должны совпадать с параметрами {first.name}",
                                 line=section.line)
    try:
        return SoftContext(tuple(values['universe']), tuple(parameters), name=name)
    except SoftTopologyError as e:
        raise e.at(section.line)


def _resolve_context(problem: ProblemFile, section: _Section) -> Tuple[str, SoftContext]:
    if section.over is None:
        return problem.context.name, problem.context
    if section.over not in problem.contexts:
        raise UnknownName(f"контекст {section.over!r} не объявлен", line=section.line)
    return section.over, problem.contexts[section.over]


def _build_set(section: _Section, ctx: SoftContext) -> SoftSet:
    assignment: Dict[str, List[str]] = {}
    for entry in section.entries:
        number, column, _ = entry
        parameter, elements = _key_value(entry)
        if parameter in assignment:
            raise ProblemSyntaxError(f"параметр {parameter!r} указан дважды", line=number, column=column)
        try:
            ctx.parameter_index(parameter)
            ctx.subset_mask(elements)
        except SoftTopologyError as e:
            raise e.at(number, column)
        assignment[parameter] = elements
    try:
        return make_soft_set(ctx, assignment)
    except SoftTopologyError as e:
        raise e.at(section.line)


def _build_topology_decl(problem: ProblemFile, section: _Section) -> TopologyDecl:
    ctx_name, _ = _resolve_context(problem, section)
    members: List[str] = []
    directive = None
    for number, line_column, text in section.entries:
        for match in re.finditer(r"\S+", text):
            token, column = match.group(), line_column + match.start()
            if token in DIRECTIVES:
                if directive is not None or members:
                    raise ProblemSyntaxError(f"директива {token!r} должна быть единственной строкой топологии",
                                             line=number, column=column)
                directive = token
                continue
            if directive is not None:
                raise ProblemSyntaxError(f"после директивы {directive!r} имена не допускаются",
                                         line=number, column=column)
            if token not in BUILTIN_SETS:
                if token not in problem.sets:
                    raise UnknownName(f"мягкое множество {token!r} не объявлено", line=number, column=column)
                if problem.set_contexts[token] != ctx_name:
                    raise UnknownName(f"мягкое множество {token!r} задано не над {ctx_name}",
                                      line=number, column=column)
            members.append(token)
    return TopologyDecl(section.name, ctx_name, tuple(members), directive, section.line)


def _build_map(problem: ProblemFile, section: _Section) -> MapDecl:
    refs: Dict[str, str] = {}
    point_map: Dict[str, str] = {}
    arrows: List[Tuple[int, int, str, str]] = []
    for number, column, text in section.entries:
        if '->' in text:
            left, _, right = text.partition('->')
            if len(left.split()) != 1 or len(right.split()) != 1:
                raise ProblemSyntaxError(f"ожидалась строка вида 'x -> y', получено {text!r}",
                                         line=number, column=column)
            x, y = left.strip(), right.strip()
            if x in point_map:
                raise ProblemSyntaxError(f"значение на {x!r} задано дважды", line=number, column=column)
            point_map[x] = y
            arrows.append((number, column, x, y))
            continue
        key, values = _key_value((number, column, text))
        if key not in ('source', 'target') or len(values) != 1:
            raise ProblemSyntaxError("в секции map допустимы 'source: имя', 'target: имя' и 'x -> y'",
                                     line=number, column=column)
        if values[0] not in problem.topology_decls:
            raise UnknownName(f"топология {values[0]!r} не объявлена", line=number, column=column)
        refs[key] = values[0]
    for key in ('source', 'target'):
        if key not in refs:
            raise ProblemSyntaxError(f"в отображении {section.name} не указан {key}", line=section.line)

    source = problem.contexts[problem.topology_decls[refs['source']].context]
    target = problem.contexts[problem.topology_decls[refs['target']].context]
    for number, column, x, y in arrows:
        try:
            source.element_index(x)
            target.element_index(y)
        except SoftTopologyError as e:
            raise e.at(number, column)
    try:
        mapping = SoftMapping.from_dict(source, target, point_map)
    except SoftTopologyError as e:
        raise e.at(section.line)
    return MapDecl(section.name, refs['source'], refs['target'], mapping, section.line)


def parse_text(text: str, path: Optional[str] = None, validate: bool = True,
               max_soft_sets: int = 2 ** 16) -> ProblemFile:
    """
    Разбирает текст файла задачи

    Аргументы:
        text: содержимое файла
        path: путь (для сообщений)
        validate: при True нарушение аксиом в любой топологии - AxiomViolation;
            при False такие топологии остаются только в topology_decls
        max_soft_sets: предел для директивы discrete

    Возвращает:
        ProblemFile
    """
    problem = ProblemFile(path=path, max_soft_sets=max_soft_sets)
    sections = _split_sections(text.splitlines())
    declared = set()

    # контексты объявляются раньше остального, поэтому строим их первыми
    for section in sections:
        if section.kind != 'context':
            continue
        first = problem.context if problem.contexts else None
        ctx = _build_context(section, first)
        if ctx.name in problem.contexts:
            raise ProblemSyntaxError(f"контекст {ctx.name} объявлен дважды", line=section.line)
        problem.contexts[ctx.name] = ctx
    if not problem.contexts:
        raise ProblemSyntaxError("в файле не объявлен ни один контекст", line=1)

    for section in sections:
        if section.kind == 'context':
            continue
        if section.name in RESERVED:
            raise ProblemSyntaxError(f"имя {section.name!r} зарезервировано", line=section.line)
        key = (section.kind == 'map', section.name)
        if key in declared:
            raise ProblemSyntaxError(f"имя {section.name!r} объявлено дважды", line=section.line)
        declared.add(key)

        if section.kind == 'set':
            ctx_name, ctx = _resolve_context(problem, section)
            problem.sets[section.name] = _build_set(section, ctx)
            problem.set_contexts[section.name] = ctx_name
        elif section.kind == 'topology':
            decl = _build_topology_decl(problem, section)
            problem.topology_decls[decl.name] = decl
            report = problem.topology_report(decl.name)
            if report.verdict:
                problem.topologies[decl.name] = SoftTopology(problem.contexts[decl.context],
                                                             tuple(problem.members(decl.name)))
            elif validate:
                raise AxiomViolation(f"набор {decl.name} не является мягкой топологией "
                                     f"(аксиома {report.witness('axiom')})",
                                     report=report, line=section.line)
            else:
                logger.warning(f"⚠️ Набор {decl.name} не является мягкой топологией")
        else:
            problem.maps[section.name] = _build_map(problem, section)

    logger.info(f"✅ Загружено: {len(problem.contexts)} контекст(а), {len(problem.sets)} множеств, "
                f"{len(problem.topology_decls)} топологий, {len(problem.maps)} отображений")
    return problem


def parse_problem(filepath: str, validate: bool = True, max_soft_sets: int = 2 ** 16) -> ProblemFile:
    """
    Загружает файл задачи

    Аргументы:
        filepath: путь к .soft файлу в UTF-8
        validate: проверять ли аксиомы топологий
        max_soft_sets: предел для директивы discrete

    Возвращает:
        ProblemFile
    """
    if not os.path.exists(filepath):
        raise ProblemFileError(f"файл {filepath} не найден")
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ProblemFileError(f"файл {filepath} не в кодировке UTF-8: {e.reason}") from None
    return parse_text(text, path=filepath, validate=validate, max_soft_sets=max_soft_sets)


def find_examples(data_dir: str) -> List[str]:
    """Файлы примеров из src_data/examples в порядке имен"""
    folder = os.path.join(data_dir, 'examples')
    if not os.path.isdir(folder):
        return []
    return sorted(os.path.join(folder, name) for name in os.listdir(folder) if name.endswith('.soft'))
