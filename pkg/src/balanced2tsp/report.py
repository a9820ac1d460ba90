"""Benchmark gap tables and SVG drawings of solutions."""

from __future__ import annotations

import csv
import io
import math
import time
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .instance import Instance, read_instance
from .pipeline import preset, run_pipeline
from .tours import TwoTourSequence


@dataclass(frozen=True)
class BestKnown:
    pc: float
    pc_h: Optional[float] = None


@dataclass(frozen=True)
class BenchRow:
    instance: str
    preset: str
    length: float
    seconds: float
    best: Optional[BestKnown] = None

    @property
    def gap_pct(self) -> Optional[float]:
        return None if self.best is None else gap_pct(self.length, self.best.pc)

    @property
    def gap_pct_h(self) -> Optional[float]:
        if self.best is None or self.best.pc_h is None:
            return None
        return gap_pct(self.length, self.best.pc_h)


def gap_pct(length: float, best: float) -> float:
    """Percentage gap to a reference length; negative means shorter."""
    return (length - best) / best * 100.0


def _same(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)


def read_best_known(path) -> dict:
    """Parse lines ``name PC [PC/h]``; blank lines and ``#`` comments are ignored."""
    table = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) not in (2, 3):
            raise ValueError(f"{path}:{lineno}: expected 'name PC [PC/h]'")
        try:
            values = [float(x) for x in line[1:]]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: lengths must be numbers") from None
        table[line[0]] = BestKnown(*values)
    return table


def summarize(rows: Sequence[BenchRow], which: str = "pc") -> Optional[dict]:
    """Mean/best/worst gap and (<, =, >) counts over rows with a reference."""
    pairs = []
    for r in rows:
        ref = None
        if r.best is not None:
            ref = r.best.pc if which == "pc" else r.best.pc_h
        if ref is not None:
            pairs.append((r.length, ref))
    if not pairs:
        return None
    gaps = [gap_pct(x, ref) for x, ref in pairs]
    eq = sum(_same(x, ref) for x, ref in pairs)
    lt = sum(x < ref and not _same(x, ref) for x, ref in pairs)
    return {
        "mean": math.fsum(gaps) / len(gaps),
        "best": min(gaps),
        "worst": max(gaps),
        "counts": (lt, eq, len(pairs) - lt - eq),
        "n": len(pairs),
    }


def load_instances(instance_dir) -> list[Instance]:
    """Every readable instance file in a directory, sorted by name."""
    out = []
    for path in sorted(Path(instance_dir).iterdir()):
        if not path.is_file() or path.name.startswith("."):
            continue
        try:
            out.append(read_instance(path))
        except (OSError, ValueError) as exc:
            warnings.warn(f"skipping {path.name}: {exc}")
    return out


def run_bench(instances: Sequence[Instance], presets: Sequence[str], best_known: Optional[dict] = None,
              init: str = "ks", progress=None) -> list[BenchRow]:
    best_known = best_known or {}
    rows = []
    for name in presets:
        cfg = preset(name, init=init)
        for inst in instances:
            t0 = time.perf_counter()
            rec = run_pipeline(inst, cfg)
            row = BenchRow(inst.name, name, rec.length, time.perf_counter() - t0, best_known.get(inst.name))
            if progress is not None:
                progress(row)
            rows.append(row)
    return rows


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.6f}"


def bench_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "preset", "length", "gap_pct", "seconds"])
    for r in sorted(rows, key=lambda r: (r.instance, r.preset)):
        w.writerow([r.instance, r.preset, _fmt(r.length), _fmt(r.gap_pct), _fmt(r.seconds)])
    return buf.getvalue()


def gap_table(rows: Sequence[BenchRow], presets: Sequence[str]) -> str:
    """Summary per preset: Mean/Best/Worst % and #(<,=,>) against PC and PC/h."""
    header = f"{'':<14}" + "".join(f"{p + ' PC':>18}{p + ' PC/h':>18}" for p in presets)
    lines = [header]
    sums = {}
    for p in presets:
        sel = [r for r in rows if r.preset == p]
        sums[p] = (summarize(sel, "pc"), summarize(sel, "pc_h"))
        secs = [r.seconds for r in sel]
        sums[p] += (math.fsum(secs) / len(secs) if secs else None,)
    for label, key in (("Mean %", "mean"), ("Best %", "best"), ("Worst %", "worst"), ("#(<,=,>)", "counts")):
        line = f"{label:<14}"
        for p in presets:
            for s in sums[p][:2]:
                if s is None:
                    cell = "-"
                elif key == "counts":
                    cell = "({},{},{})".format(*s["counts"])
                else:
                    cell = f"{s[key]:+.6f}"
                line += f"{cell:>18}"
        lines.append(line)
    line = f"{'t_mean s':<14}"
    for p in presets:
        t = sums[p][2]
        line += f"{'-' if t is None else f'{t:.6f}':>36}"
    lines.append(line)
    return "\n".join(lines)


def per_instance_table(rows: Sequence[BenchRow], presets: Sequence[str]) -> str:
    """Per-instance layout: instance, PC, PC/h, then length and time per preset."""
    by = {(r.instance, r.preset): r for r in rows}
    names = sorted({r.instance for r in rows})
    head = f"{'instance':<24}{'PC':>16}{'PC/h':>16}"
    for p in presets:
        head += f"{p + ' length':>22}{p + ' time':>16}"
    lines = [head]
    for name in names:
        best = next((r.best for r in rows if r.instance == name and r.best is not None), None)
        line = f"{name:<24}{_fmt(best.pc if best else None) or '-':>16}"
        line += f"{_fmt(best.pc_h if best else None) or '-':>16}"
        for p in presets:
            r = by.get((name, p))
            line += f"{_fmt(r.length) if r else '-':>22}{_fmt(r.seconds) if r else '-':>16}"
        lines.append(line)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

PANEL = 400.0
MARGIN = 20.0


def render_svg(inst: Instance, q: TwoTourSequence, path=None) -> str:
    """Two side-by-side panels, one tour each; fixed nodes are drawn as
    squares in both panels. Returns the SVG text and writes it to ``path``
    when given."""
    if inst.coords is None:
        raise ValueError("instance has no coordinates to draw")
    xy = [(float(x), float(y)) for x, y in inst.coords]
    xs, ys = [p[0] for p in xy], [p[1] for p in xy]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (PANEL - 2 * MARGIN) / span

    def at(v: int, panel: int) -> tuple[float, float]:
        x = MARGIN + (xy[v][0] - min(xs)) * scale + panel * PANEL
        # flip y so the picture is not mirrored
        y = PANEL - MARGIN - (xy[v][1] - min(ys)) * scale
        return x, y

    fixed = set(inst.fixed)
    width = 2 * PANEL
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" '
        f'height="{PANEL:.0f}" viewBox="0 0 {width:.0f} {PANEL:.0f}">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{PANEL:.0f}" fill="white"/>',
        f'<line x1="{PANEL:.0f}" y1="0" x2="{PANEL:.0f}" y2="{PANEL:.0f}" stroke="#999999"/>',
    ]
    colors = ("#1f5fbf", "#bf3f1f")
    for panel, tour in enumerate((q.tour1, q.tour2)):
        pts = " ".join("{:.3f},{:.3f}".format(*at(v, panel)) for v in tour + [0])
        out.append(f'<polyline class="tour{panel + 1}" points="{pts}" fill="none" '
                   f'stroke="{colors[panel]}" stroke-width="1.5"/>')
        on_tour = set(tour)
        for v in range(inst.n):
            x, y = at(v, panel)
            if v in fixed:
                out.append(f'<rect class="fixed" x="{x - 4:.3f}" y="{y - 4:.3f}" width="8" height="8" '
                           f'fill="black"/>')
            else:
                fill = colors[panel] if v in on_tour else "#dddddd"
                out.append(f'<circle class="node" cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{fill}"/>')
        out.append(f'<text x="{panel * PANEL + 8:.0f}" y="16" font-family="sans-serif" '
                   f'font-size="12">tour {panel + 1}: {len(tour)} nodes</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
