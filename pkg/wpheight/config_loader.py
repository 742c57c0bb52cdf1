"""Загрузка конфигурации из .wpheight.json или .wpheight.yml."""

import json
import logging
from pathlib import Path
from typing import Optional, Dict, Any, Tuple, Union

logger = logging.getLogger(__name__)

# Порядок важен: JSON читается без сторонних зависимостей
CONFIG_NAMES = ['.wpheight.json', '.wpheight.yml', '.wpheight.yaml']
MODES = ('rational', 'absolute')
MAX_LEVELS = 32


def _read_config(path: Path) -> Optional[Dict[str, Any]]:
    """
    Читает файл конфигурации; YAML — через PyYAML, если он установлен.
    YAML без PyYAML читается как JSON (JSON — подмножество YAML).
    """
    text = path.read_text(encoding='utf-8', errors='replace')
    if path.suffix.lower() in ('.yml', '.yaml'):
        try:
            import yaml
            return yaml.safe_load(text)
        except ImportError:
            logger.debug("PyYAML не установлен, %s читается как JSON", path.name)
        except Exception as e:
            logger.warning("Не удалось разобрать %s: %s", path, e)
            return None
    try:
        return json.loads(text)
    except ValueError as e:
        logger.warning("Не удалось разобрать %s: %s", path, e)
        return None


def find_config(start_dir: Union[str, Path]) -> Optional[Path]:
    """
    Ищет конфигурационный файл в start_dir и родительских директориях.

    Args:
        start_dir: Директория для начала поиска (обычно текущая)

    Returns:
        Path к конфигу или None
    """
    current = Path(start_dir).resolve()
    for _ in range(MAX_LEVELS):
        for name in CONFIG_NAMES:
            candidate = current / name
            if candidate.is_file():
                return candidate
        if current.parent == current:
            break
        current = current.parent
    return None


def load_config(start_dir: Union[str, Path] = '.') -> Tuple[Optional[Dict[str, Any]], Optional[Path]]:
    """
    Загружает конфигурацию.

    Args:
        start_dir: Директория, с которой начинается поиск

    Returns:
        Tuple (config_dict, config_base_dir) or (None, None)
    """
    config_path = find_config(start_dir)
    if not config_path:
        return None, None
    try:
        config = _read_config(config_path)
    except OSError as e:
        logger.warning("Не удалось прочитать %s: %s", config_path, e)
        return None, None
    if not config or not isinstance(config, dict):
        return None, None
    logger.debug("Конфигурация %s: %s", config_path, sorted(config))
    return config, config_path.parent


def _as_bool(val: Any) -> bool:
    return bool(val) if isinstance(val, bool) else str(val).lower() in ('1', 'true', 'yes', 'on')


def apply_config(config: Dict[str, Any], base_dir: Path) -> Dict[str, Any]:
    """
    Применяет конфигурацию: нормализует значения и пути.
    Некорректные значения пропускаются.

    Args:
        config: Сырая конфигурация
        base_dir: Базовая директория (где найден конфиг) для относительных путей

    Returns:
        Обработанная конфигурация
    """
    result = {}

    if 'preset' in config:
        result['preset'] = str(config['preset'])

    if 'weights' in config:
        weights = config['weights']
        if isinstance(weights, list):
            result['weights'] = ','.join(str(w) for w in weights)
        else:
            result['weights'] = str(weights)

    if 'mode' in config:
        mode = str(config['mode']).lower()
        if mode in MODES:
            result['mode'] = mode
        else:
            logger.warning("Неизвестный режим в конфиге: %s", config['mode'])

    if 'threads' in config:
        try:
            threads = int(config['threads'])
            if threads >= 1:
                result['threads'] = threads
        except (TypeError, ValueError):
            logger.warning("Неверное значение threads в конфиге: %r", config['threads'])

    if 'json' in config:
        result['json'] = _as_bool(config['json'])

    if 'database' in config:
        db_path = Path(str(config['database']))
        if not db_path.is_absolute():
            db_path = base_dir / db_path
        result['database'] = str(db_path)

    return result
