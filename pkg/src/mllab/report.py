"""Grid runs over the check registry and their text/JSON/CSV reports.

A JSON report has two parts. ``body`` is fully determined by the inputs (same
grid, config and seed give byte-identical bodies); ``meta`` carries the start
time, wall time and the sha256 of the serialized body.

Per-check summary fields: ``count`` (= pass + fail + guard_excluded),
``pass``, ``fail``, ``guard_excluded`` (guard + unresolved records), ``guard``,
``unresolved``, ``skipped`` (grid points outside the check's domain, not
recorded), ``min_residual``, ``min_rel_residual`` and ``argmin`` (parameters of
the most negative relative residual).
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict
from datetime import datetime, timezone
import hashlib
import io
import itertools
import json
import math
import os

from . import __version__
from .errors import DomainError
from .inequalities import CHECKS, FAIL, GUARD, PASS, UNRESOLVED

CSV_HEADER = ("equation_id", "alpha", "beta", "beta2", "gamma", "q", "n", "z", "residual",
              "scale", "passed", "status")

_CHUNK = 256


def worker_count():
    """MLLAB_THREADS caps the pool; 0 or unset means one worker per CPU."""
    raw = os.environ.get("MLLAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def check_ids(spec):
    """Expand ``all`` or a comma list into registry ids, validating each."""
    if isinstance(spec, str):
        spec = [s.strip() for s in spec.split(",") if s.strip()]
    if not spec or list(spec) == ["all"]:
        return list(CHECKS)
    unknown = [s for s in spec if s not in CHECKS]
    if unknown:
        raise DomainError(f"unknown check id(s): {', '.join(unknown)}", param="checks")
    return list(spec)


def _tasks(cid, grid):
    info = CHECKS[cid]
    axes = [grid.axis(a, real_line=info.real_line) for a in info.axes]
    return [(cid, vals) for vals in itertools.product(*axes)]


def _run_chunk(chunk, cfg):
    out = []
    for cid, vals in chunk:
        try:
            out.append(CHECKS[cid].func(*vals, cfg=cfg))
        except DomainError:
            out.append(None)
    return out


def run_checks(ids, grid, cfg, workers=None):
    """Run every check over its grid axes.

    Returns ``(records, skipped)``: records sorted by ``CheckRecord.sort_key`` and
    a dict of per-check counts of domain-excluded points.
    """
    tasks = [t for cid in ids for t in _tasks(cid, grid)]
    chunks = [tasks[i:i + _CHUNK] for i in range(0, len(tasks), _CHUNK)]
    workers = workers or worker_count()
    if workers == 1 or len(chunks) <= 1:
        results = [_run_chunk(c, cfg) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _run_chunk(c, cfg), chunks))
    records, skipped = [], dict.fromkeys(ids, 0)
    for chunk, res in zip(chunks, results):
        for (cid, _), rec in zip(chunk, res):
            if rec is None:
                skipped[cid] += 1
            else:
                records.append(rec)
    records.sort(key=lambda r: r.sort_key())
    return records, skipped


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def record_dict(r):
    p = r.params
    return {"equation_id": r.equation_id, "family": p.family.value, "alpha": p.alpha,
            "beta": p.beta, "beta2": r.beta2, "gamma": p.gamma, "q": p.q, "n": r.n, "z": r.z,
            "residual": r.residual, "scale": r.scale, "rel_residual": r.rel_residual,
            "tol_used": r.tol_used, "passed": r.passed, "status": r.status, "note": r.note}


def summarize(ids, records, skipped):
    out = {}
    for cid in ids:
        out[cid] = {"anchor": CHECKS[cid].anchor, "count": 0, "pass": 0, "fail": 0,
                    "guard_excluded": 0, "guard": 0, "unresolved": 0,
                    "skipped": skipped.get(cid, 0), "min_residual": None,
                    "min_rel_residual": None, "argmin": None}
    for r in records:
        s = out[r.equation_id]
        s["count"] += 1
        if r.status == PASS:
            s["pass"] += 1
        elif r.status == FAIL:
            s["fail"] += 1
        else:
            s["guard_excluded"] += 1
            s[GUARD if r.status == GUARD else UNRESOLVED] += 1
            continue
        if s["min_rel_residual"] is None or r.rel_residual < s["min_rel_residual"]:
            s["min_rel_residual"] = r.rel_residual
            s["min_residual"] = r.residual
            d = record_dict(r)
            s["argmin"] = {k: d[k] for k in ("alpha", "beta", "beta2", "gamma", "q", "n", "z")}
    return out


class RunReport:
    """Deterministic body plus timing metadata."""

    def __init__(self, kind, body, wall_time, started=None):
        self.kind = kind
        self.body = _clean({"tool": "mllab", "version": __version__, "kind": kind, **body})
        self.wall_time = wall_time
        self.started = started or datetime.now(timezone.utc).isoformat(timespec="seconds")

    def body_json(self):
        return json.dumps(self.body, sort_keys=True, separators=(",", ":"))

    @property
    def failures(self):
        return sum(s.get("fail", 0) for s in self.body.get("summary", {}).values())

    def to_json(self):
        meta = {"started": self.started, "wall_time_s": round(self.wall_time, 3),
                "body_sha256": hashlib.sha256(self.body_json().encode()).hexdigest()}
        return json.dumps({"body": self.body, "meta": meta}, sort_keys=True, indent=2)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.body.get("records", []):
            w.writerow(["" if r.get(k) is None else r[k] for k in CSV_HEADER])
        return buf.getvalue()

    def to_text(self):
        lines = [f"mllab {__version__} {self.kind} run, {self.wall_time:.2f} s"]
        if self.kind == "check":
            lines.append(f"{'check':<8} {'count':>6} {'pass':>6} {'fail':>6} {'guard':>6} "
                         f"{'skip':>6}  min rel residual")
            for cid, s in self.body["summary"].items():
                mr = s["min_rel_residual"]
                lines.append(f"{cid:<8} {s['count']:>6} {s['pass']:>6} {s['fail']:>6} "
                             f"{s['guard_excluded']:>6} {s['skipped']:>6}  "
                             f"{'-' if mr is None else format(mr, '.3e')}")
            lines.append(f"total failures: {self.failures}")
        else:
            for rep in self.body.get("probes", []):
                verdict = "ok" if rep["ok"] else "VIOLATED"
                if not rep["in_hypothesis"]:
                    verdict = "(outside)"
                lim = rep.get("limit_at_zero")
                ref = rep.get("limit_reference")
                extra = ""
                if lim is not None and ref is not None:
                    extra = f"  limit {lim:.10g} vs reference {ref:.10g}"
                lines.append(f"{rep['function_id']:<16} {rep['direction']:<10} {verdict:<8} "
                             f"max violation {rep['max_violation']:.3e}{extra}")
            lines.append(f"total failures: {self.failures}")
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_text()


def check_report(ids, records, skipped, grid, cfg, wall_time, include_records=True):
    cfg_d = asdict(cfg)
    cfg_d["summation"] = cfg.summation.value
    body = {"config": {"checks": list(ids), "grid": grid.to_dict(), "series": cfg_d},
            "summary": summarize(ids, records, skipped)}
    if include_records:
        body["records"] = [record_dict(r) for r in records]
    return RunReport("check", body, wall_time)


def probe_report(reports, cfg, wall_time):
    cfg_d = asdict(cfg)
    cfg_d["summation"] = cfg.summation.value
    summary = {}
    for rep in reports:
        s = summary.setdefault(rep.function_id,
                               {"count": 0, "pass": 0, "fail": 0, "outside_hypothesis": 0})
        s["count"] += 1
        if not rep.in_hypothesis:
            s["outside_hypothesis"] += 1
        else:
            s["pass" if rep.ok else "fail"] += 1
    body = {"config": {"series": cfg_d}, "summary": summary,
            "probes": [rep.to_dict() for rep in reports]}
    return RunReport("probe", body, wall_time)
