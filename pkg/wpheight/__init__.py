"""wpheight - взвешенный НОД, нормализация и высоты точек взвешенных проективных пространств над Q."""

__version__ = "1.0.0"

import sys

# Координаты и высоты хранятся десятичными строками произвольной длины.
if hasattr(sys, 'set_int_max_str_digits'):
    sys.set_int_max_str_digits(0)

from .errors import WeightedError
from .wcore import (
    FactoredRadical,
    RationalTuple,
    Support,
    Weights,
    WeightedTuple,
    is_well_formed,
    make_weights,
    star,
    star_radical,
    support,
    valuation,
)
from .wnormal import (
    Mode,
    NormalizedPoint,
    SignClass,
    abs_wgcd,
    canonical,
    is_absolutely_normalized,
    is_normalized,
    is_twist,
    normalize,
    normalize_abs,
    same_point,
    sign_twist,
    twist_scalar,
    wgcd,
)
from .wheight import (
    HeightValue,
    abs_height,
    cmp_bound,
    cmp_height,
    coordinate_bounds,
    count_bounded,
    enumerate_bounded,
    height,
    twists_up_to,
)
from .moduli import ModuliPreset, list_presets, moduli_point, preset, reinterpret_double, reinterpret_half
