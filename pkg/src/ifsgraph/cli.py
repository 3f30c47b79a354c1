"""Command-line interface.

Commands: ``build`` (graph exports), ``analyze`` (hyperbolicity report),
``boundary`` (Hölder/Gromov diagnostics), ``gaps`` (condition (H) gap
table), ``report`` (combined summary).  Outputs are deterministic: the same
config always produces byte-identical files.

Exit statuses: 0 success, 2 configuration error, 3 strict-mode Unknown
abort, 4 resource-cap abort.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import boundary as bd
from . import graph as gr
from . import hyperbolic as hyp
from .config import ConfigError, RunConfig, config_from_dict, parse_config
from .graph import UnknownVerdictError, View
from .rational import format_fraction

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNKNOWN = 3
EXIT_RESOURCE = 4


def _fmt(x: float) -> str:
    """Approximate reals printed with 12 significant digits."""
    return f"{x:.12g}"


def _fraction_json(value):
    if isinstance(value, Fraction):
        return {"exact": format_fraction(value), "approx": _fmt(float(value))}
    return value


def _write(out_dir: Path, name: str, text: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text, encoding="utf-8")
    print(f"wrote {out_dir / name}")


def _build_graph(cfg: RunConfig) -> gr.AugmentedGraph:
    return gr.build_graph(
        cfg.ifs, cfg.depth, mode=cfg.mode, caps=cfg.caps, max_classes=cfg.max_classes
    )


def cmd_build(cfg: RunConfig, out: Path) -> int:
    g = _build_graph(cfg)
    _write(out, f"graph_{cfg.view.value}.dot", gr.to_dot(g, cfg.view))
    buf = io.StringIO()
    gr.to_edge_csv(g, buf)
    _write(out, "edges.csv", buf.getvalue())
    _write(out, "summary.json", gr.summary_json(g))
    return EXIT_OK


def cmd_analyze(cfg: RunConfig, out: Path) -> int:
    g = _build_graph(cfg)
    report = hyp.compute_report(g)
    payload = report.to_dict()
    payload["degree_report"] = {
        v.value: gr.degree_report(g, v) for v in (View.E, View.E_DIAMOND)
    }
    payload["wsc_gamma_per_level"] = gr.wsc_gamma_estimate(
        cfg.ifs, cfg.depth, max_classes=cfg.max_classes
    )
    payload["condition_c"] = hyp.condition_c_diagnostic(g)
    _write(out, "hyperbolicity.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _default_pairs(cfg: RunConfig) -> list[tuple[bd.BoundaryAddress, bd.BoundaryAddress]]:
    n = cfg.ifs.nmaps
    addrs = [bd.BoundaryAddress.make((), (i,)) for i in range(n)]
    return [(addrs[i], addrs[j]) for i in range(n) for j in range(i + 1, n)]


def cmd_boundary(cfg: RunConfig, out: Path) -> int:
    g = _build_graph(cfg)
    delta = hyp.delta_hyperbolicity(g, cfg.view)
    a = hyp.default_a(delta)
    pairs = _default_pairs(cfg)
    upper = bd.holder_upper_check(g, pairs, a, view=cfg.view)
    lower = bd.bilipschitz_lower_check(g, pairs, a, view=cfg.view)
    lines = ["pair,distance,gromov_exact,gromov_approx,rho_alpha,upper_ratio,flagged"]
    for row in upper["rows"]:
        label = f"{row['pair'][0]} vs {row['pair'][1]}"
        gromov = row.get("gromov", Fraction(0))
        lines.append(
            ",".join(
                [
                    f'"{label}"',
                    _fmt(row["distance"]),
                    format_fraction(gromov),
                    _fmt(float(gromov)),
                    _fmt(row["rho_alpha"]),
                    _fmt(row["ratio"]),
                    str(row["flagged"]).lower(),
                ]
            )
        )
    _write(out, "boundary.csv", "\n".join(lines) + "\n")
    payload = {
        "a": _fmt(a),
        "alpha": _fmt(upper["alpha"]),
        "L": upper["L"],
        "theoretical_constant": _fmt(upper["theoretical_constant"]),
        "worst_upper_ratio": _fmt(upper["worst_ratio"]),
        "upper_ok": upper["ok"],
        "min_lower_ratio": _fmt(lower["min_ratio"]) if math.isfinite(lower["min_ratio"]) else "inf",
    }
    _write(out, "holder.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_gaps(cfg: RunConfig, out: Path) -> int:
    g = _build_graph(cfg)
    rows = bd.condition_h_report(g)
    trend = bd.classify_gap_trend(rows)
    lines = ["level,min_normalized_gap_exact,min_normalized_gap_approx,disjoint_pairs,partial"]
    payload_rows = []
    for row in rows:
        gap = row.min_normalized_gap
        lines.append(
            ",".join(
                [
                    str(row.level),
                    format_fraction(gap) if gap is not None else "",
                    _fmt(float(gap)) if gap is not None else "",
                    str(row.disjoint_pairs),
                    str(row.partial).lower(),
                ]
            )
        )
        payload_rows.append(
            {
                "level": row.level,
                "min_normalized_gap": _fraction_json(gap),
                "pairs_checked": row.pairs_checked,
                "disjoint_pairs": row.disjoint_pairs,
                "partial": row.partial,
            }
        )
    _write(out, "gaps.csv", "\n".join(lines) + "\n")
    _write(
        out,
        "gaps.json",
        json.dumps({"trend": trend, "rows": payload_rows}, indent=2, sort_keys=True) + "\n",
    )
    return EXIT_OK


def cmd_report(cfg: RunConfig, out: Path) -> int:
    g = _build_graph(cfg)
    report = hyp.compute_report(g)
    rows = bd.condition_h_report(g)
    payload = {
        "ifs": cfg.ifs.name,
        "depth": cfg.depth,
        "vertices": g.nvertices,
        "hyperbolicity": report.to_dict(),
        "condition_h_trend": bd.classify_gap_trend(rows),
        "gaps": [
            {"level": r.level, "min_normalized_gap": _fraction_json(r.min_normalized_gap)}
            for r in rows
        ],
        "summary": json.loads(gr.summary_json(g)),
    }
    _write(out, "report.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "boundary": cmd_boundary,
    "gaps": cmd_gaps,
    "report": cmd_report,
}


def _parse_caps_flag(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        if not value:
            raise ConfigError(f"--caps: expected key=value, got {part!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError as exc:
            raise ConfigError(f"--caps {key}: integer required, got {value!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ifsgraph", description=__doc__)
    p.add_argument("command", choices=sorted(_COMMANDS))
    p.add_argument("--config", type=Path, help="TOML config file")
    p.add_argument("--preset", help="preset name, e.g. interval3 or example2-1d(4)")
    p.add_argument("--depth", type=int, help="number of levels to build")
    p.add_argument("--view", choices=["E", "Ed"], help="edge view")
    p.add_argument("--mode", choices=["strict", "optimistic"], help="Unknown handling")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--caps", help="comma list of cap overrides, e.g. refine_depth=10")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = parse_config(args.config.read_text(encoding="utf-8"))
        elif args.preset:
            cfg = config_from_dict({"preset": args.preset})
        else:
            raise ConfigError("either --config or --preset is required")
        if args.depth is not None:
            cfg.depth = args.depth
        if args.view:
            cfg.view = View(args.view)
        if args.mode:
            cfg.mode = args.mode
        if args.caps:
            from dataclasses import asdict

            from .intersect import Caps

            try:
                cfg.caps = Caps(**(asdict(cfg.caps) | _parse_caps_flag(args.caps)))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"--caps: {exc}") from exc
        env_cap = os.environ.get("IFSGRAPH_MAX_CLASSES")
        if env_cap:
            cfg.max_classes = int(env_cap)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args.out)
    except UnknownVerdictError as exc:
        print(f"strict-mode abort: {exc}", file=sys.stderr)
        for i, j in exc.pairs[:20]:
            print(f"  undecided pair: vertex {i} vs vertex {j}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ResourceWarning as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
