"""Command-line scenario runner.

::

    tord run SCENARIO --out DIR [--svg] [--max-steps N] [--tol X]
    tord sweep SCENARIO --axis PATH --values v1,v2,... --out DIR
    tord spectral --eta-list 0.1,0.01 --x-range=-10:10:21 --out DIR

Exit status is 0 on success, 1 for invalid input and 2 when a refinement
fails to converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analyze, propagate, scenario as scn, spectral
from .errors import ConvergenceError, TordError
from .matcore import frobenius_distance

EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE = 0, 1, 2


def fmt(x) -> str:
    return f"{float(x):.16e}"


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, doc):
    path.write_text(json.dumps(doc, indent=2, allow_nan=True) + "\n", encoding="utf-8")


def write_svg(path: Path, t, series, labels, title):
    """Minimal static line chart; no external plotting dependency."""
    width, height, pad = 640, 360, 48
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
    t = np.asarray(t, dtype=float)
    t0, t1 = float(t.min()), float(t.max())
    span = (t1 - t0) or 1.0
    ymin = min(0.0, float(np.min(series)))
    ymax = max(1.0, float(np.max(series)))

    def px(tv, yv):
        x = pad + (tv - t0) / span * (width - 2 * pad)
        y = height - pad - (yv - ymin) / (ymax - ymin) * (height - 2 * pad)
        return f"{x:.2f},{y:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<polyline fill="none" stroke="black" points="{px(t0, ymin)} {px(t1, ymin)}"/>',
        f'<polyline fill="none" stroke="black" points="{px(t0, ymin)} {px(t0, ymax)}"/>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="11">{t0:g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="11" text-anchor="end">{t1:g}</text>',
    ]
    for k, (ys, label) in enumerate(zip(series, labels)):
        color = colors[k % len(colors)]
        pts = " ".join(px(tv, yv) for tv, yv in zip(t, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - pad + 4}" y="{pad + 14 * k}" font-size="11" fill="{color}">{label}</text>')
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def _pop_header(n):
    return [f"p_{i + 1}" for i in range(n)]


class Runner:
    """Executes the tasks of one scenario and accumulates the report."""

    def __init__(self, sc: scn.Scenario, doc: dict, out: Path, svg=False, overrides=None):
        self.sc, self.doc, self.out, self.svg = sc, doc, out, svg
        self.overrides = overrides
        self.report = {"scenario": sc.name}
        self.task_out = {}
        self._exact = None

    @property
    def kw(self):
        return {"tol": self.sc.settings["tol"], "max_steps": self.sc.settings["max_steps"]}

    def exact(self, samples=101):
        if self._exact is None or self._exact[0] != samples:
            res = propagate.evolve_exact(self.sc.system, self.sc.grid, self.sc.psi0(), samples=samples, **self.kw)
            self._exact = (samples, res)
        return self._exact[1]

    def run(self):
        for i, task in enumerate(self.sc.tasks):
            self.task_out[str(i)] = getattr(self, "task_" + task["type"])(i, task)
        self.report["tasks"] = self.task_out
        write_json(self.out / "report.json", self.report)

    def task_evolve(self, i, task):
        res = self.exact(task["samples"])
        n = self.sc.system.dim
        write_csv(self.out / "populations.csv", ["t"] + _pop_header(n), res.population_trace)
        if self.svg:
            tr = res.population_trace
            write_svg(self.out / "populations.svg", tr[:, 0], tr[:, 1:].T, _pop_header(n), self.sc.name)
        self.report["unitarity_defect"] = res.unitarity_defect
        return {
            "type": "evolve",
            "steps": res.steps,
            "unitarity_defect": res.unitarity_defect,
            "final_populations": [float(p) for p in res.final_populations],
        }

    def _ordering(self):
        rep = analyze.ordering_report(
            self.sc.system,
            self.sc.grid,
            self.sc.settings["pair_samples"],
            degeneracy_tol=self.sc.settings["degeneracy_tol"],
            **self.kw,
        )
        self.report.update(rep.as_dict())
        return rep.as_dict()

    def task_compare(self, i, task):
        return {"type": "compare", **self._ordering()}

    def task_report(self, i, task):
        out = {"type": "report", **self._ordering()}
        out["reciprocity_defect"] = analyze.reciprocity_check(self.sc.system, self.sc.grid, **self.kw)
        self.report["reciprocity_defect"] = out["reciprocity_defect"]
        return out

    def task_dyson(self, i, task):
        n = task["n"]
        terms = propagate.dyson_terms(self.sc.system, n, self.sc.grid)
        partial = sum(terms)
        return {
            "type": "dyson",
            "n": n,
            "term_norm": float(np.linalg.norm(terms[n])),
            "partial_sum_error": frobenius_distance(partial, self.exact().u),
        }

    def task_split(self, i, task):
        tav, dt = propagate.second_order_split(self.sc.system, self.sc.grid)
        d2 = propagate.dyson_term(self.sc.system, 2, self.sc.grid)
        self.report["delta_t_norm"] = float(np.linalg.norm(dt))
        return {
            "type": "split",
            "tav_norm": float(np.linalg.norm(tav)),
            "delta_t_norm": float(np.linalg.norm(dt)),
            "identity_residual": frobenius_distance(tav + dt, d2),
        }

    def task_spectral(self, i, task):
        a, b, n = task["x_range"]
        rows = run_spectral(np.linspace(a, b, n), task["etas"], self.out, suffix=f"_task{i}")
        return {"type": "spectral", "rows": rows}

    def task_sweep(self, i, task):
        table = sweep_rows(self.doc, task["axis"], task["values"], overrides=self.overrides)
        write_sweep(self.out / f"sweep_task{i}.csv", table, self.sc.system.dim)
        return {"type": "sweep", "axis": task["axis"], "rows": len(table)}


def sweep_rows(doc, axis, values, overrides=None):
    """``(value, ordering_error, delta_t_norm, final_populations)`` per value, in input order."""
    if not values:
        raise scn.ScenarioError("values", "sweep needs at least one value")
    rows = []
    for v in values:
        sub = scn.with_value(doc, axis, v)
        sc = scn.from_dict(sub)
        if overrides:
            sc.settings.update(overrides)
        kw = {"tol": sc.settings["tol"], "max_steps": sc.settings["max_steps"]}
        rep = analyze.ordering_report(
            sc.system, sc.grid, sc.settings["pair_samples"], degeneracy_tol=sc.settings["degeneracy_tol"], **kw
        )
        res = propagate.evolve_exact(sc.system, sc.grid, sc.psi0(), samples=2, **kw)
        rows.append((float(v), rep.ordering_error, rep.delta_t_norm, res.final_populations))
    return rows


def write_sweep(path, table, dim):
    header = ["value", "ordering_error", "delta_t_norm"] + _pop_header(dim)
    write_csv(path, header, [[v, oe, dt, *pops] for v, oe, dt, pops in table])


def run_spectral(x, etas, out: Path, suffix="", svg=False):
    table = spectral.eta_sweep(x, etas)
    rows, summary = [], []
    for row in table:
        res = row.result
        sgn = spectral.sign_transform(x, row.eta)
        for k in range(x.size):
            rows.append(
                [row.eta, x[k], res.values[k].real, res.values[k].imag, res.delta_part[k], res.pv_part[k], sgn[k]]
            )
        summary.append(
            {"eta": row.eta, "lorentzian_mass": row.lorentzian_mass, "pv_deviation": row.pv_deviation}
        )
    write_csv(
        out / f"spectral{suffix}.csv",
        ["eta", "x", "theta_re", "theta_im", "delta_part", "pv_part", "sign_transform"],
        rows,
    )
    write_csv(
        out / f"eta_sweep{suffix}.csv",
        ["eta", "lorentzian_mass", "pv_deviation"],
        [[s["eta"], s["lorentzian_mass"], s["pv_deviation"]] for s in summary],
    )
    if svg:
        series = [r.result.pv_part for r in table]
        write_svg(out / f"spectral{suffix}.svg", x, series, [f"eta={r.eta:g}" for r in table], "pv part")
    return summary


def _floats(text, what):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise scn.ScenarioError(what, f"cannot parse {text!r} as comma-separated numbers") from None


def _x_range(text):
    parts = text.split(":")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise scn.ScenarioError("--x-range", f"expected a:b:n, got {text!r}") from None
    if n < 1:
        raise scn.ScenarioError("--x-range", "count must be positive")
    return np.linspace(a, b, n)


def build_parser():
    p = argparse.ArgumentParser(prog="tord", description="Quantify quantum time ordering in small driven systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", required=True, type=Path, help="output directory")
        sp.add_argument("--max-steps", type=int, default=None, help="refinement cap on time steps")
        sp.add_argument("--tol", type=float, default=None, help="convergence tolerance (Frobenius)")

    run = sub.add_parser("run", help="execute the tasks of a scenario file")
    run.add_argument("scenario", type=Path)
    run.add_argument("--svg", action="store_true", help="also write SVG line charts")
    common(run)

    sw = sub.add_parser("sweep", help="vary one scenario parameter")
    sw.add_argument("scenario", type=Path)
    sw.add_argument("--axis", required=True, help="dotted parameter path, e.g. kicks.0.theta")
    sw.add_argument("--values", required=True, help="comma-separated values")
    common(sw)

    sp = sub.add_parser("spectral", help="regulated step/sign transforms over an energy grid")
    sp.add_argument("--eta-list", required=True, help="comma-separated, strictly decreasing")
    sp.add_argument("--x-range", required=True, help="start:stop:count (write --x-range=-10:10:21)")
    sp.add_argument("--out", required=True, type=Path)
    sp.add_argument("--svg", action="store_true")
    return p


def _overrides(args):
    out = {}
    if getattr(args, "max_steps", None) is not None:
        out["max_steps"] = args.max_steps
    if getattr(args, "tol", None) is not None:
        out["tol"] = args.tol
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "spectral":
            etas = _floats(args.eta_list, "--eta-list")
            x = _x_range(args.x_range)
            args.out.mkdir(parents=True, exist_ok=True)
            summary = run_spectral(spectral.energy_grid(x), etas, args.out, svg=args.svg)
            write_json(args.out / "report.json", {"spectral": summary})
            return EXIT_OK

        sc, doc = scn.load(args.scenario)
        over = _overrides(args)
        sc.settings.update(over)
        args.out.mkdir(parents=True, exist_ok=True)
        if args.command == "run":
            Runner(sc, doc, args.out, svg=args.svg, overrides=over or None).run()
        else:
            values = _floats(args.values, "--values")
            table = sweep_rows(doc, args.axis, values, overrides=over or None)
            write_sweep(args.out / "sweep.csv", table, sc.system.dim)
        return EXIT_OK
    except ConvergenceError as exc:
        print(f"tord: {exc}", file=sys.stderr)
        for steps, change in exc.trace:
            print(f"  steps={steps} change={change:.3e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (TordError, OSError) as exc:
        print(f"tord: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
