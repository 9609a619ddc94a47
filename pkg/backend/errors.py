"""
Иерархия исключений для мягких множеств, топологий и файлов задач
"""
from typing import Optional


class SoftTopologyError(Exception):
    """Базовое исключение библиотеки"""

    def __init__(self, message: str, *, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def at(self, line: Optional[int], column: Optional[int] = None) -> "SoftTopologyError":
        """Привязывает ошибку к позиции в файле (если позиция еще не задана)"""
        if self.line is None:
            self.line = line
            self.column = column
        return self

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"строка {self.line}: {self.message}"
        return f"строка {self.line}, позиция {self.column}: {self.message}"


class InvalidContext(SoftTopologyError):
    """Пустой универсум/множество параметров или повторяющиеся идентификаторы"""


class ContextMismatch(SoftTopologyError):
    """Объекты относятся к разным контекстам"""


class UnknownParameter(SoftTopologyError):
    """Параметр отсутствует в E"""


class UnknownElement(SoftTopologyError):
    """Элемент отсутствует в универсуме"""


class MissingParameter(SoftTopologyError):
    """Мягкое множество задано не для всех параметров"""


class MissingElement(SoftTopologyError):
    """Точечное отображение не определено на каком-то элементе"""


class InstanceTooLarge(SoftTopologyError):
    """Перебор превышает бюджет"""


class NotBijective(SoftTopologyError):
    """Отображение не является биекцией"""


class UnknownTheorem(SoftTopologyError):
    """Неизвестный идентификатор теоремы для перебора"""


class ConsistencyError(SoftTopologyError):
    """Две эквивалентные проверки дали разный результат"""


class ProblemFileError(SoftTopologyError):
    """Ошибка во входном файле задачи"""


class ProblemSyntaxError(ProblemFileError):
    """Синтаксическая ошибка в файле задачи"""


class UnknownName(ProblemFileError):
    """Ссылка на необъявленное имя"""


class AxiomViolation(SoftTopologyError):
    """Набор мягких множеств нарушает аксиомы топологии"""

    def __init__(self, message: str, report=None, **kwargs):
        super().__init__(message, **kwargs)
        self.report = report
