"""Command-line entry point.

Exit status: 0 on success, 1 when a check reports an inconsistency (the
diff is printed), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .modalg import Window

COMMANDS = ("blocks", "e2", "run-ss", "duality", "pairing", "check-dn", "render", "selftest")
FORMATS = ("json", "table", "svg")


@dataclass
class RunConfig:
    command: str
    window: Window | None = None
    n: int = 3
    format: str = "table"
    block: str | None = None
    golden: str | None = None
    out: str | None = None
    errata: bool = False
    einf: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def golden_dir(self) -> str | None:
        return self.golden or None


def parse_window(text: str) -> Window:
    """xmin:xmax or xmin:xmax:ymin:ymax; two values give a square."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None
    if len(parts) == 2:
        parts = parts * 2
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"window needs 2 or 4 values, got {text!r}")
    try:
        return Window(*parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{exc}: {text!r}") from None


def threads() -> int:
    """Worker cap from RGRADE_THREADS (default: CPU count)."""
    raw = os.environ.get("RGRADE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rgrade", description="RO(C2)-graded local cohomology and duality checks")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int, default=3, help="height (default 3)")
    p.add_argument("--window", type=parse_window, default=None, help="xmin:xmax[:ymin:ymax]")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--block", choices=("BB", "NB"), default=None)
    p.add_argument("--golden", nargs="?", const="", default=None, metavar="DIR",
                   help="compare against golden files (bare flag: the packaged ones)")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--errata", action="store_true", help="apply recorded errata when comparing E2 tables")
    p.add_argument("--einf", action="store_true", help="render E-infinity instead of E2")
    return p


def _join_negative_values(argv: list[str]) -> list[str]:
    # let "--window -64:64" through; argparse would read -64:64 as a flag
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--window" and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def config_from_args(argv: list[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(_join_negative_values(argv))
    if ns.n < 1:
        parser.error("--n must be at least 1")
    if ns.n != 3 and ns.command not in ("check-dn", "selftest"):
        parser.error("block data exist for n = 3 only")
    return RunConfig(ns.command, ns.window, ns.n, ns.format, ns.block, ns.golden, ns.out, ns.errata, ns.einf)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, text)


def _blocks(cfg: RunConfig) -> tuple[int, str]:
    from .blocks import block
    from .render import render_block_table

    kinds = [cfg.block] if cfg.block else ["BB", "NB"]
    if cfg.format == "json":
        return 0, json.dumps([block(k).to_json() for k in kinds], indent=1)
    out = []
    for k in kinds:
        out.append(f"{k}\n" + render_block_table(block(k), range(0, 32)))
    return 0, "\n\n".join(out)


def _e2(cfg: RunConfig) -> tuple[int, str]:
    from .golden import compare_e2, e2_golden, engine_e2_cells
    from .render import render_e2_table

    kinds = [cfg.block] if cfg.block else ["BB", "NB"]
    status, out, data = 0, [], []
    for k in kinds:
        cells = engine_e2_cells(k)
        golden = e2_golden(k, cfg.golden_dir)
        if cfg.format == "json":
            data.append({"block": k, "cells": cells})
        else:
            for t in golden["tables"]:
                lo, hi = t["rows"]
                cols = t["columns"]
                out.append(f"{t['id']}\n" + render_e2_table(cells, range(lo, hi + 1), range(cols[0], cols[-1] + 1)))
        if cfg.golden is not None or cfg.errata:
            cmp = compare_e2(k, golden, cfg.errata, cells)
            out.append("\n".join([cmp.summary()] + [f"  {m}" for m in cmp.mismatches]))
            if not cmp.ok:
                status = 1
    if cfg.format == "json":
        out.insert(0, json.dumps(data, indent=1))
    return status, "\n\n".join(out)


def _run_ss(cfg: RunConfig) -> tuple[int, str]:
    from .duality import analyze_block
    from .golden import compare_differentials, golden_differentials

    kinds = [cfg.block] if cfg.block else ["BB", "NB"]
    analyses = {k: analyze_block(k) for k in kinds}
    status = 1 if any(a.problems for a in analyses.values()) else 0
    if cfg.format == "json":
        text = json.dumps([a.to_json() for a in analyses.values()], indent=1)
    else:
        lines = []
        for k, a in analyses.items():
            lines.append(f"{k} at U^{a.power}: {len(a.differentials)} differentials")
            for d in a.differentials:
                lines.append(f"  d{d.page}: {d.source.describe()}  ->  {d.target.describe()}")
            lines.append(f"{k}: {len(a.extensions)} extensions")
            for r in a.extensions:
                lines.append(f"  {r.kind} at {r.degree} (row {r.row}): {r.result}")
            lines.extend(f"  problem: {p}" for p in a.problems)
        text = "\n".join(lines)
    if cfg.golden is not None:
        golden = [g for g in golden_differentials(cfg.golden_dir) if g["block"] in kinds]
        diffs = compare_differentials({k: a.differentials for k, a in analyses.items()}, golden)
        text += f"\n{len(diffs)} differences from golden records"
        text += "".join(f"\n  {d}" for d in diffs)
        status = status or int(bool(diffs))
    return status, text


def _duality(cfg: RunConfig) -> tuple[int, str]:
    from .duality import verify_gorenstein_duality

    window = cfg.window or Window.square(-64, 64)
    start = time.perf_counter()
    report = verify_gorenstein_duality(window, cfg.n)
    took = time.perf_counter() - start
    if cfg.format == "json":
        text = json.dumps(dict(report.to_json(), seconds=round(took, 2)), indent=1)
    else:
        lines = [report.summary(), f"{len(report.mismatches)} mismatches"]
        lines.extend(f"  {v}: abutment {a}, dual {b}" for v, a, b in report.mismatches[:50])
        text = "\n".join(lines)
    return (0 if report.ok else 1), text


def _pairing(cfg: RunConfig) -> tuple[int, str]:
    from .duality import compare_pairings, pairing_table, render_pairing_table
    from .golden import golden_pairing

    records = pairing_table(cfg.n)
    status = 0 if all(r.sums_ok() for r in records) else 1
    if cfg.format == "json":
        text = json.dumps([r.to_json() for r in records], indent=1)
    else:
        text = render_pairing_table(records)
    if cfg.golden is not None:
        diffs = compare_pairings(records, golden_pairing(cfg.golden_dir))
        text += f"\n{len(diffs)} rows differ from the golden table"
        text += "".join(f"\n  {d}" for d in diffs)
        status = status or int(bool(diffs))
    return status, text


def _check_dn(cfg: RunConfig) -> tuple[int, str]:
    from .lastdiff import CertificateFailure, _certificate, last_differential_certificate

    if cfg.n < 2:
        return 2, "rgrade: the last differential is d_n with n >= 2"
    try:
        cert = last_differential_certificate(cfg.n)
    except CertificateFailure:
        cert = _certificate(cfg.n, 0)  # print the failing checks
    text = json.dumps(cert.to_json(), indent=1) if cfg.format == "json" else cert.text()
    return (0 if cert.ok else 1), text


def _render(cfg: RunConfig) -> tuple[int, str]:
    from .render import coefficient_svg, e2_svg

    window = cfg.window or Window.square(-40, 40)
    if cfg.block:
        return 0, e2_svg(cfg.block, window, cfg.einf)
    return 0, coefficient_svg(window)


def _oracle_diff(name: str, window: tuple, n: int) -> tuple[str, list[str]]:
    from .localcoh import compare_with_oracle

    diffs = compare_with_oracle(name, Window(*window), n=n)
    return name, [f"H^{i} at {v}: closed form {a}, oracle {b}" for i, v, a, b in diffs]


def _selftest(cfg: RunConfig) -> tuple[int, str]:
    from .modalg import iter_standard_names

    window = cfg.window or Window.square(-40, 40)
    names = list(iter_standard_names(cfg.n)) if cfg.n == 3 else ["P", "Pb0", "(2)P"]
    start = time.perf_counter()
    args = [(name, tuple(window.to_json()), cfg.n) for name in names]
    workers = min(threads(), len(names))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_oracle_diff, *zip(*args)))
    else:
        results = [_oracle_diff(*a) for a in args]
    took = time.perf_counter() - start
    bad = [(name, d) for name, d in results if d]
    if cfg.format == "json":
        text = json.dumps({"window": window.to_json(), "modules": {name: d for name, d in results},
                           "seconds": round(took, 2)}, indent=1)
    else:
        lines = [f"{name}: {'ok' if not d else f'{len(d)} differences'}" for name, d in results]
        for name, d in bad:
            lines.extend(f"  {name} {x}" for x in d[:20])
        lines.append(f"{len(results) - len(bad)}/{len(results)} modules agree on {window.to_json()} "
                     f"({took:.1f} s, {workers} workers)")
        text = "\n".join(lines)
    return (1 if bad else 0), text


HANDLERS = {"blocks": _blocks, "e2": _e2, "run-ss": _run_ss, "duality": _duality, "pairing": _pairing,
            "check-dn": _check_dn, "render": _render, "selftest": _selftest}


def run(cfg: RunConfig) -> int:
    if cfg.format == "svg" and cfg.command != "render":
        print("rgrade: --format svg applies to render only", file=sys.stderr)
        return 2
    status, text = HANDLERS[cfg.command](cfg)
    if cfg.out:
        Path(cfg.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return status


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
