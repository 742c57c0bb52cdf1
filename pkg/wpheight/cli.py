"""CLI интерфейс для wpheight."""

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from . import __version__
from . import wpdb
from .config_loader import load_config, apply_config
from .errors import WeightedError
from .moduli import list_presets, moduli_point, preset as get_preset
from .wcore import FactoredRadical, WeightedTuple, is_well_formed, make_weights
from .wheight import HeightValue, abs_height, enumerate_bounded, height, twists_up_to
from .wnormal import (
    Mode,
    abs_wgcd,
    canonical,
    is_twist,
    normalize,
    normalize_abs,
    same_point,
    twist_scalar,
    wgcd,
)

logger = logging.getLogger('wpheight')

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

HEIGHT_BOUND = re.compile(r'^(\d+)\^\(1/(\d+)\)$')


def parse_bound(text: str) -> Union[Fraction, HeightValue]:
    """Граница высоты: целое, дробь ``a/b`` или радикал ``b^(1/q)``."""
    text = text.strip()
    m = HEIGHT_BOUND.match(text)
    if m:
        return HeightValue(int(m.group(1)), int(m.group(2)))
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"неверная граница '{text}': ожидается a/b или b^(1/q)")
    return value


def _radical_json(s: FactoredRadical) -> Dict[str, str]:
    return {str(p): f"{e.numerator}/{e.denominator}" for p, e in s.factors}


def _scalar_json(scalar) -> Union[str, Dict[str, str]]:
    return _radical_json(scalar) if isinstance(scalar, FactoredRadical) else str(scalar)


def _coords_json(coords: Sequence[int]) -> List[str]:
    return [str(v) for v in coords]


def _coords_text(coords: Sequence[int]) -> str:
    return '[' + ', '.join(str(v) for v in coords) + ']'


def _setup_logging(verbose: bool, debug: bool):
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_argument_group('вывод и отладка')
    out.add_argument('--json', action='store_true', default=None,
                     help='Один JSON-объект на stdout (целые — десятичными строками)')
    out.add_argument('--verbose', action='store_true', help='Расширенный вывод')
    out.add_argument('--debug', '-d', action='store_true',
                     help='Служебные сообщения: факторизация, перебор, загрузка базы')
    out.add_argument('--no-config', action='store_true',
                     help='Не читать .wpheight.json / .wpheight.yml')
    return common


def _point_parser() -> argparse.ArgumentParser:
    point = argparse.ArgumentParser(add_help=False)
    grp = point.add_argument_group('точка')
    space = grp.add_mutually_exclusive_group()
    space.add_argument('--weights', '-w', metavar='Q0,Q1,...',
                       help='Веса через запятую, например 2,4,6,10')
    space.add_argument('--preset', metavar='NAME',
                       help='Пресет: genus2-igusa, genus2-half, genus3-octavic, genus3-octavic-extended')
    grp.add_argument('--point', '-p', required=True, metavar='X0,X1,...',
                     help='Координаты через запятую; отрицательные: --point=-40,45,-555,-6')
    return point


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    point = _point_parser()

    parser = argparse.ArgumentParser(
        prog='wpheight',
        description='wpheight — взвешенный НОД, нормализация и высоты точек взвешенных проективных пространств над Q.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Примеры:
  wpheight wgcd --weights 2,4,6,10 --point 75,5625,421875,2373046875
  wpheight abs-height --preset genus2-igusa --point 240,1620,119880,46656
  wpheight twists --preset genus2-igusa --point 240,1620,119880,46656 --bound '240^(1/2)'
  wpheight enumerate --weights 1,2 --bound 3/2
  wpheight db ingest points.jsonl --output db.jsonl
  wpheight help""",
    )
    parser.add_argument('--version', '-v', action='version',
                        version=f"wpheight {__version__}")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    simple = {
        'wgcd': 'Взвешенный НОД',
        'abs-wgcd': 'Абсолютный взвешенный НОД (радикал)',
        'normalize': 'Нормализация над Q',
        'abs-normalize': 'Нормализация над алгебраическим замыканием',
        'height': 'Взвешенная высота',
        'abs-height': 'Абсолютная взвешенная высота',
    }
    for name, text in simple.items():
        sub.add_parser(name, parents=[point, common], help=text, description=text)

    p = sub.add_parser('canonical', parents=[point, common], help='Канонический представитель')
    p.add_argument('--mode', choices=['rational', 'absolute'], default=None)

    p = sub.add_parser('twists', parents=[point, common], help='Твисты точки до границы высоты')
    p.add_argument('--bound', type=parse_bound, default=None,
                   help='a/b или b^(1/q); по умолчанию — высота самой точки')

    for name, text in (('same', 'Совпадают ли точки над Q'),
                       ('twist-check', 'Являются ли точки твистами')):
        p = sub.add_parser(name, parents=[point, common], help=text, description=text)
        p.add_argument('--other', required=True, metavar='Y0,Y1,...',
                       help='Координаты второй точки (те же веса)')

    p = sub.add_parser('enumerate', parents=[common], help='Все точки высоты <= bound')
    space = p.add_mutually_exclusive_group()
    space.add_argument('--weights', '-w', metavar='Q0,Q1,...')
    space.add_argument('--preset', metavar='NAME')
    p.add_argument('--bound', type=parse_bound, required=True, help='Граница: целое или a/b')
    p.add_argument('--mode', choices=['rational', 'absolute'], default=None)
    p.add_argument('--threads', type=int, default=None, metavar='N',
                   help='Число потоков перебора (порядок вывода не меняется)')

    p = sub.add_parser('well-formed', parents=[common], help='Проверка well-formed весов')
    space = p.add_mutually_exclusive_group()
    space.add_argument('--weights', '-w', metavar='Q0,Q1,...')
    space.add_argument('--preset', metavar='NAME')

    sub.add_parser('presets', parents=[common], help='Список пресетов')
    sub.add_parser('help', help='Подробная справка (MANUAL.md)')

    db = sub.add_parser('db', help='Работа с базой точек (JSON Lines)')
    db_sub = db.add_subparsers(dest='db_command', metavar='ACTION')
    db_sub.required = True
    for name, text in (('ingest', 'Загрузить записи, вывести отчёт'),
                       ('dedupe', 'Одна запись на класс точек'),
                       ('sort', 'Сортировка по высоте'),
                       ('twist-groups', 'Группы твистов'),
                       ('export', 'Перезаписать базу с пересчитанными полями')):
        p = db_sub.add_parser(name, parents=[common], help=text, description=text)
        p.add_argument('input', nargs='?', default=None, metavar='FILE',
                       help="Файл базы; '-' или пусто — stdin (или database из конфига)")
        p.add_argument('--output', '-o', default=None, metavar='FILE',
                       help='Записать результат в файл (атомарно)')
        p.add_argument('--threads', type=int, default=None, metavar='N')
        if name in ('dedupe', 'sort'):
            p.add_argument('--mode', choices=['rational', 'absolute'], default=None)
    return parser


class _Context:
    """Аргументы командной строки, дополненные конфигурацией."""

    def __init__(self, args: argparse.Namespace, config: Dict[str, Any]):
        self.args = args
        self.config = config
        flag = getattr(args, "json", None)
        self.json = bool(flag if flag is not None else config.get("json", False))
        self.mode = Mode(getattr(args, 'mode', None) or config.get('mode', 'rational'))
        threads = getattr(args, 'threads', None)
        self.threads = threads if threads is not None else config.get('threads', 1)

    def weights(self):
        args = self.args
        if getattr(args, 'preset', None):
            return get_preset(args.preset).weights
        if getattr(args, 'weights', None):
            return make_weights(args.weights)
        if self.config.get('preset'):
            return get_preset(self.config['preset']).weights
        if self.config.get('weights'):
            return make_weights(self.config['weights'])
        raise _UsageError('укажите --weights или --preset')

    def point(self, text: str) -> WeightedTuple:
        coords = [c for c in text.replace(' ', '').split(',') if c != '']
        name = getattr(self.args, 'preset', None)
        if not name and not getattr(self.args, 'weights', None):
            name = self.config.get('preset')
        if name:
            return moduli_point(get_preset(name), coords)
        return WeightedTuple(self.weights(), tuple(coords))


class _UsageError(Exception):
    pass


def _emit(ctx: _Context, data: Dict[str, Any], lines: List[str]):
    if ctx.json:
        print(json.dumps(data, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _base(command: str, t: WeightedTuple) -> Dict[str, Any]:
    return {'command': command, 'weights': list(t.w.q), 'point': _coords_json(t.x)}


def _cmd_point(ctx: _Context) -> int:
    command = ctx.args.command
    t = ctx.point(ctx.args.point)
    data = _base(command, t)

    if command == 'wgcd':
        d = wgcd(t)
        data['wgcd'] = str(d)
        _emit(ctx, data, [str(d)])
    elif command == 'abs-wgcd':
        s = abs_wgcd(t)
        data['abs_wgcd'] = _radical_json(s)
        _emit(ctx, data, [str(s)])
    elif command in ('normalize', 'abs-normalize', 'canonical'):
        if command == 'normalize':
            result = normalize(t)
        elif command == 'abs-normalize':
            result = normalize_abs(t)
        else:
            result = canonical(t, ctx.mode)
            data['mode'] = result.mode.value
            data['sign_class'] = result.sign.k
        data['normalized'] = _coords_json(result.coords)
        data['scalar'] = _scalar_json(result.scalar)
        _emit(ctx, data, [_coords_text(result.coords), f"снятый скаляр: {result.scalar}"])
    elif command in ('height', 'abs-height'):
        h = height(t) if command == 'height' else abs_height(t)
        data['height'] = h.to_json()
        _emit(ctx, data, [str(h), f"base={h.base} root={h.root}"])
    elif command == 'twists':
        bound = ctx.args.bound if ctx.args.bound is not None else height(t)
        twists = twists_up_to(t, bound)
        items = []
        lines = []
        for tw in twists:
            h = height(tw.tuple)
            items.append({'point': _coords_json(tw.coords), 'scalar': _radical_json(tw.scalar),
                          'height': h.to_json()})
            lines.append(f"{_coords_text(tw.coords)}  λ={tw.scalar}  h={h}")
        data['bound'] = bound.to_json() if isinstance(bound, HeightValue) else str(bound)
        data['twists'] = items
        _emit(ctx, data, lines)
    elif command == 'same':
        other = ctx.point(ctx.args.other)
        result = same_point(t, other)
        data['other'] = _coords_json(other.x)
        data['same_point'] = result
        _emit(ctx, data, ['да' if result else 'нет'])
    elif command == 'twist-check':
        other = ctx.point(ctx.args.other)
        result = is_twist(t, other)
        scalar = twist_scalar(t, other)
        data['other'] = _coords_json(other.x)
        data['is_twist'] = result
        data['scalar'] = _radical_json(scalar) if scalar is not None else None
        lines = ['да' if result else 'нет']
        if scalar is not None:
            lines.append(f"λ = {scalar}")
        _emit(ctx, data, lines)
    return EXIT_OK


def _cmd_enumerate(ctx: _Context) -> int:
    w = ctx.weights()
    bound = ctx.args.bound
    if isinstance(bound, HeightValue):
        raise _UsageError('для enumerate граница задаётся целым или дробью a/b')
    points = list(enumerate_bounded(w, bound, ctx.mode, workers=max(1, ctx.threads)))
    data = {
        'command': 'enumerate', 'weights': list(w.q), 'bound': str(bound),
        'mode': ctx.mode.value, 'count': len(points),
        'points': [_coords_json(p.coords) for p in points],
    }
    _emit(ctx, data, [_coords_text(p.coords) for p in points])
    return EXIT_OK


def _cmd_well_formed(ctx: _Context) -> int:
    w = ctx.weights()
    result = is_well_formed(w)
    data = {'command': 'well-formed', 'weights': list(w.q), 'gcd': w.r, 'well_formed': result}
    _emit(ctx, data, [f"({w}): {'well-formed' if result else 'не well-formed'}, r = {w.r}"])
    return EXIT_OK


def _cmd_presets(ctx: _Context) -> int:
    presets = list_presets()
    data = {'command': 'presets', 'presets': [
        {'name': p.name, 'weights': list(p.weights.q), 'nonvanishing_index': p.nonvanishing_index}
        for p in presets]}
    lines = [f"{p.name:<26} ({p.weights})  {p.description}" for p in presets]
    _emit(ctx, data, lines)
    return EXIT_OK


def _cmd_help(ctx: _Context) -> int:
    pkg_dir = Path(__file__).resolve().parent
    for manual_path in [pkg_dir / 'MANUAL.md', pkg_dir.parent / 'MANUAL.md']:
        if manual_path.exists():
            print(manual_path.read_text(encoding='utf-8'))
            return EXIT_OK
    print("Справка: wpheight --help")
    return EXIT_OK


def _read_db_input(ctx: _Context):
    source = ctx.args.input or ctx.config.get('database') or '-'
    workers = max(1, ctx.threads)
    if source == '-':
        return wpdb.ingest(sys.stdin.buffer, workers=workers)
    return wpdb.Database.load(source, workers=workers)


def _write_records(ctx: _Context, records: List[wpdb.PointRecord]):
    if ctx.args.output:
        count = wpdb.export(records, ctx.args.output)
        logger.info("Записано %d записей в %s", count, ctx.args.output)
    elif not ctx.json:
        for record in records:
            print(record.dumps())


def _cmd_db(ctx: _Context) -> int:
    action = ctx.args.db_command
    db, report = _read_db_input(ctx)
    for line_no, reason, message in report.errors:
        logger.warning("строка %d: %s (%s)", line_no, message, reason)
    data: Dict[str, Any] = {'command': f'db {action}', 'report': report.to_json()}

    if action == 'ingest':
        if ctx.args.output:
            wpdb.export(db.records, ctx.args.output)
        if ctx.json:
            print(json.dumps(data, ensure_ascii=False))
        else:
            rejected = ', '.join(f"{k}: {v}" for k, v in sorted(report.rejected.items())) or 'нет'
            print(f"Принято: {report.accepted}")
            print(f"Отклонено: {rejected}")
            if report.duplicate_labels:
                print(f"Повторные метки: {', '.join(report.duplicate_labels)}")
        return EXIT_OK

    if action == 'twist-groups':
        groups = wpdb.twist_groups(db.records)
        data['groups'] = [g.to_json() for g in groups]
        lines = [f"{_coords_text(g.minimal_coords)}  {len(g.members)}: {', '.join(r.label for r in g.members)}"
                 for g in groups]
        _emit(ctx, data, lines)
        return EXIT_OK

    if action == 'dedupe':
        records = wpdb.dedupe(db.records, ctx.mode)
    elif action == 'sort':
        records = wpdb.sort_by_height(db.records, ctx.mode)
    else:
        records = list(db.records)
    _write_records(ctx, records)
    if ctx.json:
        data['records'] = [r.to_json() for r in records]
        print(json.dumps(data, ensure_ascii=False))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Выполняет команду и возвращает код выхода: 0 — успех, 1 — ошибка данных, 2 — ошибка вызова.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _setup_logging(getattr(args, 'verbose', False), getattr(args, 'debug', False))

    config: Dict[str, Any] = {}
    if args.command != 'help' and not getattr(args, 'no_config', False):
        raw, base = load_config(Path.cwd())
        if raw and base:
            config = apply_config(raw, base)
            logger.info("Загружена конфигурация из %s", base)

    handlers = {
        'enumerate': _cmd_enumerate,
        'well-formed': _cmd_well_formed,
        'presets': _cmd_presets,
        'help': _cmd_help,
        'db': _cmd_db,
    }
    handler = handlers.get(args.command, _cmd_point)

    ctx = None
    try:
        ctx = _Context(args, config)
        return handler(ctx)
    except _UsageError as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WeightedError as e:
        if ctx is not None and ctx.json:
            print(json.dumps({'error': {'reason': e.reason, 'message': str(e)}}, ensure_ascii=False))
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except KeyboardInterrupt:
        print("\nПрервано пользователем", file=sys.stderr)
        return 130


def main():
    """Главная функция CLI."""
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
