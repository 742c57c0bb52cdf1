"""Исключения wpheight.

Каждое исключение несёт машиночитаемую причину ``reason``; CLI выводит её
в ``--json`` и использует как ключ в отчёте ``db ingest``.
"""


class WeightedError(ValueError):
    """Базовая ошибка предметной области (код выхода CLI: 1)."""

    reason = 'domain-error'

    def __init__(self, message: str = '', reason: str = None):
        super().__init__(message)
        if reason:
            self.reason = reason


class InvalidWeightsError(WeightedError):
    reason = 'invalid-weights'


class InvalidScalarError(WeightedError):
    reason = 'invalid-scalar'


class NonRationalResultError(WeightedError):
    reason = 'non-rational-result'


class UndefinedValuationError(WeightedError):
    reason = 'undefined-valuation'


class ZeroPointError(WeightedError):
    reason = 'zero-point'


class ArityError(WeightedError):
    reason = 'arity'


class WeightsMismatchError(WeightedError):
    reason = 'weights-mismatch'


class UnknownPresetError(WeightedError):
    reason = 'unknown-preset'


class DegenerateModuliError(WeightedError):
    reason = 'degenerate-moduli'


class RecordFormatError(WeightedError):
    reason = 'malformed'


class DerivedMismatchError(WeightedError):
    """Сохранённые производные поля записи не совпадают с пересчитанными."""

    reason = 'derived-mismatch'


class NonIntegralError(WeightedError):
    """Результат действия ⋆ имеет нецелые координаты там, где нужен целый кортеж."""

    reason = 'non-integral'
