"""Built-in IFS presets.

* ``interval3`` — three maps x/2, (x+1)/2, (x+2)/2 on the interval [0, 2]
  (heavily overlapping; the canonical worked example).
* ``gasket3`` — three ratio-1/2 homotheties at the corners of the triangle
  (0,0), (2,0), (1,2) (rational apex; pieces touch at midpoints, OSC).
* ``interval2-osc`` — x/3 and (x+2)/3: disjoint pieces, pure tree case.
* ``mixed-ratio`` — ratios {1/2, 1/4}, 1-based display labels, exercising
  the variable-ratio level sets.
* ``example2-1d(k_max)`` — three ratio-1/3 maps on the line, one translated
  by a truncated lacunary value; the family whose cylinder gaps decay.
* ``example2-2d(k_max)`` — five ratio-1/3 maps in the plane: triangle
  corners + center, plus one at a lacunary horizontal offset.

The lacunary truncation uses exponents n_k = 1 + k(k+1)/2 (2, 4, 7, 11, …)
and T(k_max) = Σ_{k=1..k_max} 3^{−n_k}; results for those presets are valid
to level n_{k_max} − 1, beyond which the truncated system's cylinders touch
exactly and diverge from the untruncated family.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .similitude import IfsSpec, similitude


def lacunary_exponent(k: int) -> int:
    return 1 + k * (k + 1) // 2


def lacunary_sum(k_max: int) -> Fraction:
    return sum((Fraction(1, 3**lacunary_exponent(k)) for k in range(1, k_max + 1)), Fraction(0))


def designated_levels(k_max: int) -> tuple[int, ...]:
    """The probe levels n_k at which the lacunary presets' gap structure
    changes; valid for analysis up to n_{k_max} − 1."""
    return tuple(lacunary_exponent(k) for k in range(1, k_max + 1))


def truncated_ck(k: int, k_max: int) -> Fraction:
    """The gap constant c_k of the truncated lacunary family:
    c_k = 1 + Σ_{j=k+2..k_max} 3^{−(n_j − n_{k+1})} (1 at the truncation
    boundary, approaching the untruncated constant as k_max grows)."""
    nk1 = lacunary_exponent(k + 1)
    return Fraction(1) + sum(
        (Fraction(1, 3 ** (lacunary_exponent(j) - nk1)) for j in range(k + 2, k_max + 1)),
        Fraction(0),
    )


def interval3() -> IfsSpec:
    return IfsSpec(
        maps=(
            similitude(Fraction(1, 2), [0]),
            similitude(Fraction(1, 2), [Fraction(1, 2)]),
            similitude(Fraction(1, 2), [1]),
        ),
        name="interval3",
    )


def gasket3() -> IfsSpec:
    corners = [(0, 0), (2, 0), (1, 2)]
    return IfsSpec(
        maps=tuple(
            similitude(Fraction(1, 2), [Fraction(cx, 2), Fraction(cy, 2)]) for cx, cy in corners
        ),
        name="gasket3",
    )


def interval2_osc() -> IfsSpec:
    return IfsSpec(
        maps=(
            similitude(Fraction(1, 3), [0]),
            similitude(Fraction(1, 3), [Fraction(2, 3)]),
        ),
        name="interval2-osc",
    )


def mixed_ratio() -> IfsSpec:
    return IfsSpec(
        maps=(
            similitude(Fraction(1, 2), [0]),
            similitude(Fraction(1, 4), [Fraction(3, 4)]),
        ),
        label_base=1,
        name="mixed-ratio",
    )


def example2_1d(k_max: int = 4) -> IfsSpec:
    """Three ratio-1/3 maps on the line with one lacunary offset.

    S_0 and S_1 generate the Cantor set in [0, 1]; S_2 is translated by
    x0 = 1/2 − T(k_max), a truncated lacunary point just left of 1/2, so
    S_2's piece approaches but never quite aligns with the Cantor gaps.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    x0 = Fraction(1, 2) - lacunary_sum(k_max)
    return IfsSpec(
        maps=(
            similitude(Fraction(1, 3), [0]),
            similitude(Fraction(1, 3), [Fraction(2, 3)]),
            similitude(Fraction(1, 3), [x0]),
        ),
        name=f"example2-1d({k_max})",
        metadata={"k_max": k_max, "x0": x0, "designated_levels": designated_levels(k_max)},
    )


def example2_2d(k_max: int = 4) -> IfsSpec:
    """Five ratio-1/3 maps in the plane: triangle corners and center, plus
    one at a truncated lacunary horizontal offset (index 3)."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    x0 = Fraction(1, 2) - lacunary_sum(k_max)
    third = Fraction(1, 3)
    return IfsSpec(
        maps=(
            similitude(third, [0, 0]),
            similitude(third, [Fraction(2, 3), 0]),
            similitude(third, [third, Fraction(2, 3)]),
            similitude(third, [x0, 0]),
            similitude(third, [third, third]),
        ),
        name=f"example2-2d({k_max})",
        metadata={"k_max": k_max, "x0": x0, "designated_levels": designated_levels(k_max)},
    )


_PLAIN = {
    "interval3": interval3,
    "gasket3": gasket3,
    "interval2-osc": interval2_osc,
    "mixed-ratio": mixed_ratio,
}

_PARAM = {
    "example2-1d": example2_1d,
    "example2-2d": example2_2d,
}

PRESET_NAMES = sorted(_PLAIN) + sorted(f"{n}(k_max)" for n in _PARAM)


def get_preset(name: str) -> IfsSpec:
    """Look up a preset; parameterized ones take the form ``name(k)``."""
    if name in _PLAIN:
        return _PLAIN[name]()
    m = re.fullmatch(r"([\w-]+)\((\d+)\)", name)
    if m and m.group(1) in _PARAM:
        return _PARAM[m.group(1)](int(m.group(2)))
    if name in _PARAM:
        return _PARAM[name]()
    raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
