"""
База точек модулей: загрузка, канонизация, группировка твистов, дедупликация и экспорт.

Формат файла — JSON Lines (UTF-8, LF): одна запись на строку::

    {"label": "x6-1", "preset": "genus2-igusa", "coords": ["240", "1620", "119880", "46656"],
     "derived": {"canonical": [...], "height": {...}, "abs_height": {...}, "twist_key": "..."}}

Вместо ``preset`` допускается ``weights`` (список или строка "2,4,6,10").
Неизвестные поля сохраняются при перезаписи.
"""

import json
import logging
import os
import tempfile
from collections import Counter, OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from .errors import DerivedMismatchError, RecordFormatError, WeightedError
from .moduli import moduli_point, preset as get_preset
from .wcore import WeightedTuple, Weights, make_weights
from .wheight import HeightValue, abs_height, height
from .wnormal import Mode, canonical

logger = logging.getLogger(__name__)

KNOWN_FIELDS = ('label', 'preset', 'weights', 'coords', 'derived')


def _key(w: Weights, coords: Iterable[int]) -> str:
    return f"{w}|{','.join(str(v) for v in coords)}"


@dataclass
class PointRecord:
    """
    Запись базы: исходная точка и производные поля.

    Attributes:
        label: Метка записи
        point: Исходный кортеж (координаты как во входных данных)
        preset: Имя пресета или None, если веса заданы явно
        canonical: Каноническая форма над Q
        height: Высота 𝔥
        abs_height: Абсолютная высота 𝔥̃
        twist_key: Ключ класса твистов (веса + каноническая абсолютная форма)
        extra: Неизвестные поля исходной строки
    """

    label: str
    point: WeightedTuple
    preset: Optional[str] = None
    canonical: Tuple[int, ...] = ()
    height: Optional[HeightValue] = None
    abs_height: Optional[HeightValue] = None
    twist_key: str = ''
    extra: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, label: str, point: WeightedTuple, preset: Optional[str] = None,
              extra: Optional[Dict[str, Any]] = None) -> 'PointRecord':
        """Создаёт запись и вычисляет производные поля."""
        bar = canonical(point, Mode.ABSOLUTE)
        return cls(
            label=label,
            point=point,
            preset=preset,
            canonical=canonical(point).coords,
            height=height(point),
            abs_height=abs_height(point),
            twist_key=_key(point.w, bar.coords),
            extra=dict(extra or {}),
        )

    @property
    def weights(self) -> Weights:
        return self.point.w

    @property
    def point_key(self) -> str:
        return _key(self.weights, self.canonical)

    def derived_json(self) -> Dict[str, Any]:
        return {
            'canonical': [str(v) for v in self.canonical],
            'height': self.height.to_json(),
            'abs_height': self.abs_height.to_json(),
            'twist_key': self.twist_key,
        }

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'label': self.label}
        if self.preset:
            data['preset'] = self.preset
        else:
            data['weights'] = list(self.weights.q)
        data['coords'] = [str(v) for v in self.point.x]
        data['derived'] = self.derived_json()
        data.update(self.extra)
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def _check_derived(record: PointRecord, stored: Any):
    if not isinstance(stored, dict):
        raise RecordFormatError("Поле 'derived' должно быть объектом")
    fresh = record.derived_json()
    for name in ('canonical', 'twist_key'):
        if name in stored and stored[name] != fresh[name]:
            raise DerivedMismatchError(f"{record.label}: поле derived.{name} не совпадает с пересчётом")
    for name in ('height', 'abs_height'):
        if name not in stored:
            continue
        try:
            value = HeightValue.from_json(stored[name])
        except (KeyError, TypeError, ValueError) as e:
            raise RecordFormatError(f"{record.label}: неверное поле derived.{name}: {e}") from None
        if value != getattr(record, name):
            raise DerivedMismatchError(f"{record.label}: поле derived.{name} не совпадает с пересчётом")


def parse_record(data: Union[bytes, str, Dict[str, Any]]) -> PointRecord:
    """
    Разбирает одну запись (строку JSON в UTF-8, текст или словарь) и вычисляет производные поля.

    Raises:
        RecordFormatError: строка не разбирается или нет обязательных полей
        WeightedError: точка недопустима для своих весов (причина — в ``reason``)
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as e:
            raise RecordFormatError(f"Строка не в UTF-8: {e}") from None
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise RecordFormatError(f"Неверный JSON: {e}") from None
    if not isinstance(data, dict):
        raise RecordFormatError("Запись должна быть JSON-объектом")
    label = data.get('label')
    coords = data.get('coords')
    if not isinstance(label, str) or not label:
        raise RecordFormatError("Нет метки 'label'")
    if not isinstance(coords, list) or not coords:
        raise RecordFormatError(f"{label}: нет списка 'coords'")
    if not all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in coords):
        raise RecordFormatError(f"{label}: координаты должны быть десятичными строками")

    preset_name = data.get('preset')
    if preset_name is not None:
        if not isinstance(preset_name, str):
            raise RecordFormatError(f"{label}: поле 'preset' должно быть строкой")
        point = moduli_point(get_preset(preset_name), coords)
    elif 'weights' in data:
        weights = data['weights']
        if not isinstance(weights, (str, list)):
            raise RecordFormatError(f"{label}: поле 'weights' должно быть списком или строкой")
        point = WeightedTuple(make_weights(weights), tuple(coords))
    else:
        raise RecordFormatError(f"{label}: нужно поле 'preset' или 'weights'")

    extra = {k: v for k, v in data.items() if k not in KNOWN_FIELDS}
    record = PointRecord.build(label, point, preset_name, extra)
    if 'derived' in data:
        _check_derived(record, data['derived'])
    return record


@dataclass
class IngestReport:
    """Итог загрузки: принятые записи, отказы по причинам, повторные метки."""

    accepted: int = 0
    rejected: Counter = field(default_factory=Counter)
    duplicate_labels: List[str] = field(default_factory=list)
    errors: List[Tuple[int, str, str]] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            'accepted': self.accepted,
            'rejected': dict(sorted(self.rejected.items())),
            'duplicate_labels': list(self.duplicate_labels),
        }


class Database:
    """Коллекция записей в памяти с индексом по меткам."""

    def __init__(self, records: Optional[Iterable[PointRecord]] = None):
        self.records: List[PointRecord] = []
        self._labels: Dict[str, List[PointRecord]] = {}
        for record in records or ():
            self.add(record)

    def add(self, record: PointRecord) -> bool:
        """Добавляет запись; возвращает True, если метка уже встречалась."""
        seen = self._labels.setdefault(record.label, [])
        duplicate = bool(seen)
        if duplicate and any(r.point.x != record.point.x for r in seen):
            logger.warning("Метка %s повторяется с другими координатами", record.label)
        seen.append(record)
        self.records.append(record)
        return duplicate

    def by_label(self, label: str) -> List[PointRecord]:
        return list(self._labels.get(label, ()))

    def ingest(self, lines: Iterable[Union[bytes, str, Dict[str, Any]]], workers: int = 1) -> IngestReport:
        """
        Загружает записи; ошибочные строки отклоняются, обработка продолжается.

        Args:
            lines: Строки JSON Lines (байты UTF-8 или текст) или словари
            workers: Число потоков разбора; порядок записей сохраняется
        """
        report = IngestReport()
        items = [(n, item) for n, item in enumerate(lines, 1)
                 if not (isinstance(item, (bytes, str)) and not item.strip())]

        def parse(entry):
            n, item = entry
            try:
                return n, parse_record(item), None
            except WeightedError as e:
                return n, None, e

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(parse, items))
        else:
            results = [parse(entry) for entry in items]

        for n, record, error in results:
            if error is not None:
                report.rejected[error.reason] += 1
                report.errors.append((n, error.reason, str(error)))
                logger.info("Строка %d отклонена (%s): %s", n, error.reason, error)
                continue
            if self.add(record):
                report.duplicate_labels.append(record.label)
            report.accepted += 1
            logger.debug("Строка %d принята: %s", n, record.label)
        return report

    @classmethod
    def load(cls, path: Union[str, Path], workers: int = 1) -> Tuple['Database', IngestReport]:
        """Читает файл базы и перестраивает индексы в памяти."""
        db = cls()
        with open(path, 'rb') as f:
            report = db.ingest(f, workers=workers)
        return db, report

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def ingest(lines: Iterable[Union[bytes, str, Dict[str, Any]]], workers: int = 1) -> Tuple[Database, IngestReport]:
    db = Database()
    report = db.ingest(lines, workers=workers)
    return db, report


def _height_key(record: PointRecord, which: Mode):
    return record.height if which is Mode.RATIONAL else record.abs_height


def dedupe(records: Iterable[PointRecord], mode: Union[Mode, str] = Mode.RATIONAL) -> List[PointRecord]:
    """
    Одна запись на класс эквивалентности.

    RATIONAL — по канонической форме над Q, остаётся первая запись;
    ABSOLUTE — по ключу твистов, остаётся запись минимальной высоты
    (при равенстве — с меньшими каноническими координатами, затем более ранняя).
    """
    mode = Mode(mode)
    groups: 'OrderedDict[str, List[Tuple[int, PointRecord]]]' = OrderedDict()
    for n, record in enumerate(records):
        key = record.point_key if mode is Mode.RATIONAL else record.twist_key
        groups.setdefault(key, []).append((n, record))
    if mode is Mode.RATIONAL:
        return [members[0][1] for members in groups.values()]
    return [_elect(members) for members in groups.values()]


def _elect(members: List[Tuple[int, PointRecord]]) -> PointRecord:
    return min(members, key=lambda m: (m[1].height, m[1].canonical, m[0]))[1]


def sort_by_height(records: Iterable[PointRecord], which: Union[Mode, str] = Mode.RATIONAL) -> List[PointRecord]:
    """Устойчивая сортировка по точной высоте, затем по канонической форме и метке."""
    which = Mode(which)
    return sorted(records, key=lambda r: (_height_key(r, which), r.canonical, r.label))


@dataclass
class TwistGroup:
    """Класс твистов: записи с общим ключом и минимальный представитель."""

    key: str
    members: List[PointRecord]
    representative: PointRecord

    @property
    def minimal_coords(self) -> Tuple[int, ...]:
        """Каноническая абсолютная форма p̄ группы."""
        return tuple(int(v) for v in self.key.split('|', 1)[1].split(','))

    def to_json(self) -> Dict[str, Any]:
        return {
            'twist_key': self.key,
            'minimal': [str(v) for v in self.minimal_coords],
            'abs_height': self.representative.abs_height.to_json(),
            'representative': self.representative.label,
            'members': [r.label for r in self.members],
        }


def twist_groups(records: Iterable[PointRecord]) -> List[TwistGroup]:
    """Разбиение записей по ключу твистов в порядке первого появления."""
    groups: 'OrderedDict[str, List[Tuple[int, PointRecord]]]' = OrderedDict()
    for n, record in enumerate(records):
        groups.setdefault(record.twist_key, []).append((n, record))
    return [TwistGroup(key, [r for _, r in members], _elect(members))
            for key, members in groups.items()]


def export(records: Iterable[PointRecord], path: Union[str, Path]) -> int:
    """
    Атомарно записывает записи в файл: временный файл в той же директории и ``os.replace``.

    Returns:
        Число записанных записей
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', suffix='.tmp', dir=str(path.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
            for record in records:
                f.write(record.dumps() + '\n')
                count += 1
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug("Записано %d записей в %s", count, path)
    return count


def append(records: Iterable[PointRecord], path: Union[str, Path]) -> int:
    """Дописывает записи в конец файла базы."""
    count = 0
    with open(path, 'a', encoding='utf-8', newline='\n') as f:
        for record in records:
            f.write(record.dumps() + '\n')
            count += 1
    return count
