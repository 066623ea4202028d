"""CSV and SVG writers.

CSV: header row, ``,`` separators, LF line endings, 17 significant digits.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from ..qubits import BASIS

FLOAT_FMT = "{:.17g}"

TRAJECTORY_COLUMNS = ["t", "concurrence", "trace_dev", "herm_dev", "min_eig"] + [
    f"rho_{a}_{b}_{part}" for a in BASIS for b in BASIS for part in ("re", "im")
]
COEFFICIENT_COLUMNS = ["t", "delta_re", "delta_im", "mu_re", "mu_im", "alpha_re", "alpha_im"]
ESD_COLUMNS = ["index", "t_start", "t_end", "revived"]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return FLOAT_FMT.format(float(x) + 0.0)  # no "-0" in output


def write_csv(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body]) if body else np.empty((0, len(header)))
    return header, data


def trajectory_rows(traj, conc):
    flat = traj.states.reshape(len(traj.times), 16)
    parts = np.empty((len(traj.times), 32))
    parts[:, 0::2] = flat.real
    parts[:, 1::2] = flat.imag
    for i, t in enumerate(traj.times):
        yield [t, conc[i], traj.trace_dev[i], traj.herm_dev[i], traj.min_eig[i], *parts[i]]


def write_trajectory_csv(path, traj, conc):
    return write_csv(path, TRAJECTORY_COLUMNS, trajectory_rows(traj, conc))


def write_coefficients_csv(path, table):
    v = table.values
    rows = (
        [t, d.real, d.imag, m.real, m.imag, a.real, a.imag]
        for t, (d, m, a) in zip(table.grid, v)
    )
    return write_csv(path, COEFFICIENT_COLUMNS, rows)


def write_esd_csv(path, report):
    rows = (
        [i, a, b, ok]
        for i, ((a, b), ok) in enumerate(zip(report.dead_intervals, report.revived))
    )
    return write_csv(path, ESD_COLUMNS, rows)


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o)}")


_COLORS = {"markov": "#1f77b4", "nonmarkov": "#d62728", "markov_unsqueezed": "#2ca02c"}
_DASH = {"markov": "6,4", "nonmarkov": "", "markov_unsqueezed": "2,3"}


def write_concurrence_svg(path, series: dict, title: str = "", width: int = 640, height: int = 400):
    """Overlay concurrence curves, one polyline per regime, every sample plotted.

    ``series`` maps regime name to ``(times, concurrence)``.
    """
    ml, mr, mt, mb = 60, 20, 30, 45
    pw, ph = width - ml - mr, height - mt - mb
    t_hi = max((float(np.max(t)) for t, _ in series.values() if len(t)), default=1.0) or 1.0
    c_hi = max(1.0, max((float(np.max(c)) for _, c in series.values() if len(c)), default=1.0))

    def sx(t):
        return ml + pw * t / t_hi

    def sy(c):
        return mt + ph * (1 - c / c_hi)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(6):
        t = t_hi * k / 5
        x = sx(t)
        out.append(f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle">{t:g}</text>')
        c = c_hi * k / 5
        y = sy(c)
        out.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{c:.2g}</text>')
    out.append(
        f'<text x="{ml + pw / 2}" y="{height - 8}" font-size="12" text-anchor="middle">'
        "t (units of 1/omega0)</text>"
    )
    out.append(
        f'<text x="15" y="{mt + ph / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 15 {mt + ph / 2})">C(t)</text>'
    )
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>')
    for i, (regime, (t, c)) in enumerate(series.items()):
        pts = " ".join(f"{sx(a):.3f},{sy(b):.3f}" for a, b in zip(t, c))
        dash = _DASH.get(regime, "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline data-regime="{escape(regime)}" data-points="{len(t)}" fill="none" '
            f'stroke="{_COLORS.get(regime, "black")}" stroke-width="1.5"{dash_attr} points="{pts}"/>'
        )
        out.append(
            f'<text x="{ml + pw - 10}" y="{mt + 16 + 14 * i}" font-size="11" text-anchor="end" '
            f'fill="{_COLORS.get(regime, "black")}">{escape(regime)}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return path
