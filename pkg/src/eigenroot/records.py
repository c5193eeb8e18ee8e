"""CSV, JSON and SVG emitters. Every file is written atomically."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import gmpy2

from .operators import Classification
from .poly import format_fraction

SCHEMA_VERSION = 1
SCAN_COLUMNS = ("n", "r", "ratio", "collision")
LEMMA_COLUMNS = ("lemma", "n", "A", "j", "lhs", "rhs", "holds", "seed")
MEASURE_COLUMNS = ("index", "re", "im")
SVG_SIZE = 600
SVG_MARGIN = 0.10
DOT_RADIUS = 1


def atomic_write(path, data: str | bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def big_str(x, digits: int = 20) -> str:
    """Decimal string for an mpfr (or plain number)."""
    if x is None:
        return ""
    if isinstance(x, (int, Fraction)):
        return str(x)
    return gmpy2.mpfr(x).__format__(f".{digits}g")


def complex_pair(z, digits: int = 20) -> list[str]:
    z = gmpy2.mpc(z)
    return [big_str(z.real, digits), big_str(z.imag, digits)]


def _csv_text(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: row.get(k, "") for k in columns})
    return buf.getvalue()


def scan_rows(records) -> list[dict]:
    return [{"n": r.n, "r": big_str(r.r), "ratio": big_str(r.ratio), "collision": int(r.collision)}
            for r in records]


def scan_csv(records) -> str:
    return _csv_text(SCAN_COLUMNS, scan_rows(records))


def lemma_csv(reports) -> str:
    return _csv_text(LEMMA_COLUMNS, [r.row() for r in reports])


def measure_csv(measure) -> str:
    rows = [{"index": i, "re": a, "im": b} for i, (a, b) in enumerate(complex_pair(z) for z in measure.atoms)]
    return _csv_text(MEASURE_COLUMNS, rows)


def classification_dict(c: Classification) -> dict:
    return {"kind": c.kind.value, "j0": c.j0, "d": None if c.d is None else format_fraction(c.d),
            "A": sorted(c.A), "jm": c.jm}


@dataclass
class RunRecord:
    operator: str
    classification: dict
    command: str
    parameters: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    version: str = ""
    timing: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def d(self) -> Fraction | None:
        raw = self.classification.get("d")
        return None if raw is None else Fraction(raw)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(**data)


def curve_json(curve, locus=None, samples: Sequence = ()) -> str:
    from .curve import _as_bivariate, format_bivariate

    F = _as_bivariate(curve)
    data = {
        "schema_version": SCHEMA_VERSION,
        "equation": format_bivariate(F),
        "coefficients": [{"z": zp, "y": yp, "c": format_fraction(c)} for (zp, yp), c in sorted(F.items())],
        "branch_samples": [{"z": complex_pair(b.z), "y": complex_pair(b.y), "residual": big_str(b.residual, 6)}
                           for b in samples],
    }
    if locus is not None:
        data["discriminant"] = {
            "resultant_degree": locus.resultant_degree,
            "points": [complex_pair(p) for p in locus.points],
            "degenerations": [complex_pair(p) for p in locus.degenerations],
        }
    return json.dumps(data, indent=2) + "\n"


# -- SVG ------------------------------------------------------------------

def svg_bounds(points: Sequence[complex]) -> tuple[float, float, float, float]:
    """Square plotting box (xmin, xmax, ymin, ymax): data and origin, plus 10% margin."""
    xs = [p.real for p in points] + [0.0]
    ys = [p.imag for p in points] + [0.0]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    half = max(max(xs) - min(xs), max(ys) - min(ys)) / 2
    half = half * (1 + 2 * SVG_MARGIN) if half > 0 else 1.0
    return cx - half, cx + half, cy - half, cy + half


def svg_text(measure, title: str) -> str:
    if not measure.atoms:
        raise ValueError("refusing to plot an empty measure")
    pts = [complex(z) for z in measure.atoms]
    xmin, xmax, ymin, ymax = svg_bounds(pts)
    scale = SVG_SIZE / (xmax - xmin)

    def px(x):
        return f"{(x - xmin) * scale:.3f}"

    def py(y):
        return f"{(ymax - y) * scale:.3f}"

    meta = {"xmin": xmin, "xmax": xmax, "ymin": ymin, "ymax": ymax, "n": measure.n,
            "d": format_fraction(measure.d), "count": len(pts)}
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f"<title>{escape(title)}</title>",
        f"<metadata>{escape(json.dumps(meta, sort_keys=True))}</metadata>",
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="0" y1="{py(0.0)}" x2="{SVG_SIZE}" y2="{py(0.0)}" stroke="#888" stroke-width="0.5"/>',
        f'<line x1="{px(0.0)}" y1="0" x2="{px(0.0)}" y2="{SVG_SIZE}" stroke="#888" stroke-width="0.5"/>',
        '<g fill="black">',
    ]
    lines += [f'<circle cx="{px(p.real)}" cy="{py(p.imag)}" r="{DOT_RADIUS}"/>' for p in pts]
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def svg_metadata(text: str) -> dict:
    start = text.index("<metadata>") + len("<metadata>")
    end = text.index("</metadata>")
    from xml.sax.saxutils import unescape

    return json.loads(unescape(text[start:end]))


def emit_svg(measure, path, title: str) -> Path:
    return atomic_write(path, svg_text(measure, title))
