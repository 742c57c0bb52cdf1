"""Пресеты пространств модулей гиперэллиптических кривых (инварианты Игусы, октавики рода 3)."""

from dataclasses import dataclass
from typing import Iterable, List, Optional

from .errors import ArityError, DegenerateModuliError, UnknownPresetError, WeightsMismatchError
from .wcore import Weights, WeightedTuple, make_weights


@dataclass(frozen=True)
class ModuliPreset:
    """
    Именованный набор весов с условием невырожденности.

    Attributes:
        name: Имя пресета (часть контракта CLI и файлов БД)
        weights: Веса
        nonvanishing_index: Индекс координаты, которая должна быть ненулевой (дискриминант)
        description: Краткое описание для ``wpheight presets``
    """

    name: str
    weights: Weights
    nonvanishing_index: Optional[int] = None
    description: str = ''

    def __post_init__(self):
        if self.nonvanishing_index is not None and not 0 <= self.nonvanishing_index < len(self.weights):
            raise ArityError(f"Индекс {self.nonvanishing_index} вне диапазона весов ({self.weights})")


GENUS2_WEIGHTS = make_weights((2, 4, 6, 10))
GENUS2_HALF_WEIGHTS = make_weights((1, 2, 3, 5))

PRESETS = {
    'genus2-igusa': ModuliPreset(
        'genus2-igusa', GENUS2_WEIGHTS, 3,
        'Род 2: [J2 : J4 : J6 : J10], J10 != 0'),
    'genus2-half': ModuliPreset(
        'genus2-half', GENUS2_HALF_WEIGHTS, 3,
        'Род 2 в WP(1,2,3,5): те же инварианты, веса делённые на 2'),
    'genus3-octavic': ModuliPreset(
        'genus3-octavic', make_weights((2, 3, 4, 5, 6, 7)), None,
        'Род 3, гиперэллиптические: [J2 : ... : J7]'),
    'genus3-octavic-extended': ModuliPreset(
        'genus3-octavic-extended', make_weights((2, 3, 4, 5, 6, 7, 8)), None,
        'Род 3, гиперэллиптические: [J2 : ... : J8]'),
}


def preset(name: str) -> ModuliPreset:
    """Возвращает пресет по имени."""
    try:
        return PRESETS[name]
    except KeyError:
        known = ', '.join(PRESETS)
        raise UnknownPresetError(f"Неизвестный пресет '{name}'. Доступны: {known}") from None


def list_presets() -> List[ModuliPreset]:
    return list(PRESETS.values())


def moduli_point(p, coords: Iterable[int]) -> WeightedTuple:
    """
    Проверенная точка пространства модулей.

    Args:
        p: ModuliPreset или его имя
        coords: Целые координаты (инварианты)

    Raises:
        ArityError: неверное число координат
        DegenerateModuliError: обязательная координата равна нулю
    """
    if not isinstance(p, ModuliPreset):
        p = preset(p)
    coords = tuple(coords)
    if len(coords) != len(p.weights):
        raise ArityError(
            f"Пресет {p.name} ожидает {len(p.weights)} координат, получено {len(coords)}")
    i = p.nonvanishing_index
    t = WeightedTuple(p.weights, coords)
    if i is not None and t.x[i] == 0:
        raise DegenerateModuliError(f"Пресет {p.name}: координата {i} должна быть ненулевой")
    return t


def reinterpret_half(t: WeightedTuple) -> WeightedTuple:
    """Те же координаты над весами (1,2,3,5) вместо (2,4,6,10)."""
    if t.w != GENUS2_WEIGHTS:
        raise WeightsMismatchError(f"Ожидаются веса ({GENUS2_WEIGHTS}), получено ({t.w})")
    return WeightedTuple(GENUS2_HALF_WEIGHTS, t.x)


def reinterpret_double(t: WeightedTuple) -> WeightedTuple:
    """Обратное к reinterpret_half: (1,2,3,5) → (2,4,6,10)."""
    if t.w != GENUS2_HALF_WEIGHTS:
        raise WeightsMismatchError(f"Ожидаются веса ({GENUS2_HALF_WEIGHTS}), получено ({t.w})")
    return WeightedTuple(GENUS2_WEIGHTS, t.x)
