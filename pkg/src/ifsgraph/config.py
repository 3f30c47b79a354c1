"""Run configuration: TOML parsing with exact "p/q" rationals.

A config file either names a preset or spells out the maps:

.. code-block:: toml

    preset = "interval3"      # or give [[maps]] tables instead
    depth = 4
    view = "E"                # E | Ed
    mode = "strict"           # strict | optimistic

    [caps]
    refine_depth = 12
    witness_pre = 6
    witness_per = 3

    [[maps]]                  # only without `preset`
    ratio = "1/2"
    translation = ["0", "1/2"]
    orthogonal = [["1", "0"], ["0", "1"]]   # optional, identity default

All numeric map data are strings parsed as exact rationals ("p/q" or "p").
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .graph import View
from .intersect import Caps
from .presets import get_preset
from .rational import parse_fraction
from .similitude import IfsSpec, Mat, Similitude, Vec


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    ifs: IfsSpec
    depth: int = 3
    view: View = View.E
    mode: str = "strict"
    caps: Caps = dc_field(default_factory=Caps)
    max_classes: int = 2_000_000
    options: dict = dc_field(default_factory=dict)


def _rational(value, field: str):
    try:
        return parse_fraction(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{field}: not a rational 'p/q' value: {value!r}") from exc


def _parse_map(entry: dict, idx: int) -> Similitude:
    where = f"maps[{idx}]"
    if "ratio" not in entry or "translation" not in entry:
        raise ConfigError(f"{where}: 'ratio' and 'translation' are required")
    ratio = _rational(entry["ratio"], f"{where}.ratio")
    if not 0 < ratio < 1:
        raise ConfigError(f"{where}.ratio: must be in (0, 1), got {ratio}")
    translation: Vec = tuple(
        _rational(v, f"{where}.translation") for v in entry["translation"]
    )
    orthogonal: Mat | None = None
    if "orthogonal" in entry:
        rows = entry["orthogonal"]
        orthogonal = tuple(
            tuple(_rational(v, f"{where}.orthogonal") for v in row) for row in rows
        )
    try:
        from .similitude import similitude

        return similitude(ratio, translation, orthogonal)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax error: {exc}") from exc
    return config_from_dict(data)


def config_from_dict(data: dict) -> RunConfig:
    if "preset" in data and "maps" in data:
        raise ConfigError("give either 'preset' or 'maps', not both")
    if "preset" in data:
        try:
            ifs = get_preset(data["preset"])
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from exc
    elif "maps" in data:
        entries = data["maps"]
        if not isinstance(entries, list) or len(entries) < 2:
            raise ConfigError("maps: at least two [[maps]] tables required")
        maps = tuple(_parse_map(e, i) for i, e in enumerate(entries))
        ifs = IfsSpec(
            maps=maps,
            label_base=int(data.get("label_base", 0)),
            name=str(data.get("name", "custom")),
        )
    else:
        raise ConfigError("config needs a 'preset' or [[maps]] tables")

    depth = data.get("depth", 3)
    if not isinstance(depth, int) or depth < 0:
        raise ConfigError(f"depth: must be a nonnegative integer, got {depth!r}")

    view_name = data.get("view", "E")
    try:
        view = View(view_name)
    except ValueError as exc:
        raise ConfigError(f"view: must be 'E' or 'Ed', got {view_name!r}") from exc

    mode = data.get("mode", "strict")
    if mode not in ("strict", "optimistic"):
        raise ConfigError(f"mode: must be 'strict' or 'optimistic', got {mode!r}")

    caps_data = data.get("caps", {})
    valid = {
        "refine_depth",
        "witness_pre",
        "witness_per",
        "map_witness_len",
        "frontier_cap",
        "automaton_states",
    }
    unknown = set(caps_data) - valid
    if unknown:
        raise ConfigError(f"caps: unknown keys {sorted(unknown)}")
    try:
        caps = Caps(**caps_data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"caps: {exc}") from exc

    max_classes = data.get("max_classes", 2_000_000)
    if not isinstance(max_classes, int) or max_classes <= 0:
        raise ConfigError("max_classes: must be a positive integer")

    known = {
        "preset", "maps", "name", "label_base", "depth", "view", "mode", "caps", "max_classes",
    }
    options = {k: v for k, v in data.items() if k not in known}
    return RunConfig(
        ifs=ifs, depth=depth, view=view, mode=mode, caps=caps,
        max_classes=max_classes, options=options,
    )
