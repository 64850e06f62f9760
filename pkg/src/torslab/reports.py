"""Verification suites over finite module windows, with deterministic reports.

Each suite inspects one algebra through a bounded catalogue and emits a
report dict: algebra id, field, bound, suite name, and a list of checks.
A check is (claim, status, witness).  Statuses are "pass", "fail", and
"window-limited"; the last marks claims whose witnesses escape the window,
and it is never upgraded to a pass.  Exit codes follow the statuses:
0 all pass, 1 any fail, 2 window-limited results but no failure.

Witness payloads use dimension vectors rather than catalogue indices, so
reports stay meaningful without the window at hand.  All iteration runs
in sorted order and every emitted container is rebuilt deterministically;
two runs on equal inputs produce byte-identical JSON.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .algebra import load_algebra
from .catalogue import BudgetError, Catalogue
from .cones import (
    cone_of_subcat,
    difference_cone,
    intersect_trivially,
    is_strongly_convex,
    numerically_disjoint,
    separating_functional,
)
from .presentations import map_from_coeffs, presentation_space
from .presentations import tbar_of_map as _tbar_of_map
from .silting import (
    direct_sum_complex,
    enumerate_silting,
    induced_torsion_pairs,
    rigidity,
    silting_cone,
)
from .stability import classes_in, quadruple
from .torsion import (
    cocompact_witness,
    compact_witness,
    enumerate_torsion_classes,
    fac_single_witness,
    functorially_finite,
    mask_of,
    right_perp,
    sub_single_witness,
    t_of,
    window_stable,
)

# cost cap for the single-map realization sweep inside the semistable suite
TBAR_SWEEP_COST = 8192
TBAR_LEVEL_MAX = 2


class ReportError(Exception):
    pass


def _check(claim, status, witness=None):
    return {"claim": claim, "status": status, "witness": witness}


def _report(algebra_id, algebra, bound, suite, checks):
    counts = {"pass": 0, "fail": 0, "window-limited": 0}
    for c in checks:
        counts[c["status"]] += 1
    return {
        "algebra": algebra_id,
        "field": algebra.p,
        "bound": list(bound),
        "suite": suite,
        "checks": checks,
        "counts": counts,
    }


def exit_code(report):
    counts = report["counts"]
    if counts["fail"]:
        return 1
    if counts["window-limited"]:
        return 2
    return 0


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError("not JSON serializable: %r" % (obj,))


def render_json(obj, timings=None):
    if timings is not None:
        obj = dict(obj)
        obj["timings"] = timings
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def refield(text, p):
    """Algebra file text with its field line replaced."""
    lines = []
    for line in text.splitlines():
        if line.strip().startswith("field"):
            line = "field p=%d" % p
        lines.append(line)
    return "\n".join(lines) + "\n"


def _dims(cat, idx):
    if idx is None:
        return None
    return list(cat.dims_of(idx))


def _grid_points(grid, n):
    lo, hi = grid
    if lo > hi:
        raise ReportError("empty grid %r" % (grid,))
    return list(itertools.product(range(lo, hi + 1), repeat=n))


def _ample(algebra, bound, classes, cat):
    """Window-stability certificate, or None when bound+1 exceeds the budget."""
    try:
        return window_stable(algebra, bound, classes, cat)
    except BudgetError:
        return None


class _WitnessBox:
    """Per-mask memo of the five single-module witnesses."""

    def __init__(self, cat):
        self.cat = cat
        self.memo = {}

    def get(self, tmask):
        got = self.memo.get(tmask)
        if got is None:
            cat = self.cat
            fmask = right_perp(cat, tmask)
            got = {
                "fac": fac_single_witness(cat, tmask),
                "sub": sub_single_witness(cat, fmask),
                "compact": compact_witness(cat, tmask),
                "cocompact": cocompact_witness(cat, tmask),
            }
            got["ff"] = got["fac"] is not None and got["sub"] is not None
            self.memo[tmask] = got
        return got


def _witness_dims(cat, wit):
    return {
        "fac": _dims(cat, wit["fac"]),
        "sub": _dims(cat, wit["sub"]),
        "compact": _dims(cat, wit["compact"]),
        "cocompact": _dims(cat, wit["cocompact"]),
    }


# -- the Smalo equivalence suite ----------------------------------------------------


def suite_smalo(algebra, bound, algebra_id="algebra"):
    """Single-witness equivalence on every enumerated torsion class.

    For each class the suite hunts four witnesses: a module whose factor
    closure is the class, a module whose submodule closure is the paired
    torsion-free class, and the compact and cocompact generators.  The
    first two stand or fall together, and whenever they stand the class
    must also be bicompact.  Requires an ample bound: the class census
    has to be stable under raising every coordinate of the bound by one.
    """
    cat = Catalogue(algebra, bound)
    classes = enumerate_torsion_classes(cat)
    cert = _ample(algebra, bound, classes, cat)
    if cert is None or not cert["stable"]:
        raise ReportError(
            "no ample-bound certificate for %s at %r" % (algebra_id, bound)
        )
    checks = [
        _check(
            "torsion-window-stable",
            "pass",
            {"classes": len(classes), "classes-at-next-bound": cert["count_big"]},
        )
    ]
    box = _WitnessBox(cat)
    for k, tmask in enumerate(classes):
        wit = box.get(tmask)
        payload = _witness_dims(cat, wit)
        payload["size"] = bin(tmask).count("1")
        fac_ok = wit["fac"] is not None
        sub_ok = wit["sub"] is not None
        if fac_ok and sub_ok:
            # the conclusion: a functorially finite class is bicompact
            good = wit["compact"] is not None and wit["cocompact"] is not None
            status = "pass" if good else "fail"
        else:
            # with an ample window a missing witness is genuine, and the
            # two single-witness conditions must agree
            status = "fail"
        checks.append(_check("smalo-class[%d]" % k, status, payload))
    return _report(algebra_id, algebra, bound, "smalo", checks)


# -- the semistable suite -----------------------------------------------------------


def _tbar_map_search(cat, theta, target):
    """Level of a single presentation map whose perp class hits the target.

    Sweeps every map at levels 1..TBAR_LEVEL_MAX while the sweep stays
    under the cost cap.  Returns a dict with the searched flag and the
    first realizing level, if any.
    """
    A = cat.algebra
    p = A.p
    for level in range(1, TBAR_LEVEL_MAX + 1):
        scaled = tuple(level * t for t in theta)
        space = presentation_space(A, scaled)
        if p ** space["dim"] * max(len(cat), 1) > TBAR_SWEEP_COST:
            return {"searched": False, "level": None}
        for coeffs in itertools.product(range(p), repeat=space["dim"]):
            U = map_from_coeffs(A, space, coeffs)
            if _tbar_of_map(cat, U) == target:
                return {"searched": True, "level": level}
    return {"searched": True, "level": None}


def suite_semistable(algebra, bound, grid=(-4, 4), depth=6, algebra_id="algebra"):
    """Rigidity against the six torsion-class predicates, on a lattice grid.

    For every grid weight the suite locates the weight in the enumerated
    g-vector fan and evaluates, with window witnesses, the predicates:
    strict class bicompact, compact, functorially finite, and weak class
    bicompact, cocompact, functorially finite.  A rigid weight must carry
    all six witnesses; a witness that escapes the window demotes the check
    to window-limited unless the bound is ample, in which case the absence
    is genuine and the check fails.  Rigid weights are also cross-checked:
    the cohomology of the witnessing face induces exactly the two classes
    the weight cuts out, and where the sweep is affordable the weak class
    is realized as the perp class of one presentation map.
    """
    cat = Catalogue(algebra, bound)
    classes = enumerate_torsion_classes(cat)
    cert = _ample(algebra, bound, classes, cat)
    ample = bool(cert and cert["stable"])
    graph = enumerate_silting(algebra, depth)
    by_key = {v["key"]: v["summands"] for v in graph["vertices"]}
    box = _WitnessBox(cat)
    face_memo = {}
    checks = []
    npass = nlimited = 0
    for theta in _grid_points(grid, algebra.n):
        verdict = rigidity(theta, graph)
        quad = quadruple(cat, theta)
        wt = box.get(quad.T)
        wb = box.get(quad.Tbar)
        predicates = {
            "T-bicompact": wt["compact"] is not None and wt["cocompact"] is not None,
            "T-compact": wt["compact"] is not None,
            "T-ff": wt["ff"],
            "Tbar-bicompact": wb["compact"] is not None
            and wb["cocompact"] is not None,
            "Tbar-cocompact": wb["cocompact"] is not None,
            "Tbar-ff": wb["ff"],
        }
        payload = {
            "theta": list(theta),
            "verdict": verdict["verdict"],
            "depth": verdict["depth"],
            "rays": [list(r) for r in verdict["rays"]]
            if verdict["rays"] is not None
            else None,
            "predicates": predicates,
            "T-witnesses": _witness_dims(cat, wt),
            "Tbar-witnesses": _witness_dims(cat, wb),
            "strict-inclusion": quad.T != quad.Tbar,
        }
        status = "pass"
        if quad.T & ~quad.Tbar:
            status = "fail"
        all_witnessed = all(predicates.values())
        if verdict["verdict"] == "rigid":
            face = verdict["rays"]
            if face:
                got = face_memo.get(face)
                if got is None:
                    summands = [
                        c for c in by_key[verdict["vertex"]] if c.g_vector() in face
                    ]
                    got = induced_torsion_pairs(cat, direct_sum_complex(summands, algebra))
                    face_memo[face] = got
                payload["coherent"] = got == (quad.Tbar, quad.T)
                if not payload["coherent"]:
                    status = "fail"
            payload["tbar-map"] = _tbar_map_search(cat, theta, quad.Tbar)
            if not all_witnessed and status == "pass":
                status = "fail" if ample and graph["complete"] else "window-limited"
        elif verdict["verdict"] == "not_rigid":
            # everything equivalent to rigidity must break somewhere
            if all_witnessed and status == "pass":
                status = "fail" if ample else "window-limited"
        else:
            status = "window-limited" if status == "pass" else status
        if status == "pass":
            npass += 1
        elif status == "window-limited":
            nlimited += 1
        checks.append(
            _check("semistable[%s]" % ",".join(str(t) for t in theta), status, payload)
        )
    checks.append(
        _check(
            "semistable-grid-summary",
            "pass",
            {
                "grid": list(grid),
                "points": len(checks),
                "full-pass": npass,
                "window-limited": nlimited,
                "graph-complete": graph["complete"],
                "ample": ample,
            },
        )
    )
    return _report(algebra_id, algebra, bound, "semistable", checks)


# -- the numerical disjointness suite -----------------------------------------------


def suite_numdis(algebra, bound, algebra_id="algebra"):
    """Four-way separation equivalence on every enumerated torsion pair.

    Numerical disjointness decided by facet enumeration, trivial cone
    intersection decided by the simplex path, strong convexity of the
    difference cone, and existence of a separating weight must all agree;
    each separator is re-verified against the classes it claims to split.
    A pair that is bicompact and disjoint in the window must then carry a
    functorial-finiteness witness, and on a relation-free algebra every
    bicompact class must already have a factor-closure witness.
    """
    cat = Catalogue(algebra, bound)
    classes = enumerate_torsion_classes(cat)
    cert = _ample(algebra, bound, classes, cat)
    ample = bool(cert and cert["stable"])
    box = _WitnessBox(cat)
    hereditary = algebra.relations == ()
    checks = []
    for k, tmask in enumerate(classes):
        fmask = right_perp(cat, tmask)
        ct = cone_of_subcat(cat, tmask)
        cf = cone_of_subcat(cat, fmask)
        disjoint, certificate = numerically_disjoint(cat, tmask, fmask)
        trivial, _ = intersect_trivially(ct, cf)
        convex = is_strongly_convex(difference_cone(ct, cf))
        separator = separating_functional(ct, cf)
        legs = (disjoint, trivial, convex, separator is not None)
        agree = all(legs) or not any(legs)
        verified = None
        if separator is not None:
            verified = classes_in(cat, separator, tmask, fmask)
        payload = {
            "size": bin(tmask).count("1"),
            "disjoint": disjoint,
            "legs": list(legs),
            "separator": list(separator) if separator is not None else None,
            "separator-verified": verified,
        }
        if not disjoint:
            payload["common-class"] = list(certificate[1])
        bad = not agree or verified is False
        checks.append(_check("numdis-pair[%d]" % k, "fail" if bad else "pass", payload))
        wit = box.get(tmask)
        bicompact = wit["compact"] is not None and wit["cocompact"] is not None
        if disjoint and bicompact:
            status = "pass" if wit["ff"] else ("fail" if ample else "window-limited")
            checks.append(
                _check(
                    "numdis-bicompact-ff[%d]" % k,
                    status,
                    _witness_dims(cat, wit),
                )
            )
        if hereditary and bicompact:
            status = (
                "pass"
                if wit["fac"] is not None
                else ("fail" if ample else "window-limited")
            )
            checks.append(
                _check(
                    "hereditary-bicompact-fac[%d]" % k,
                    status,
                    {"fac": _dims(cat, wit["fac"])},
                )
            )
    return _report(algebra_id, algebra, bound, "numdis", checks)


# -- the brick finiteness suite -----------------------------------------------------


def _semibrick_spans(cat):
    """Generated class per semibrick, smallest sets first."""
    spans = []
    for sb in sorted(cat.semibricks(), key=lambda s: (len(s), s)):
        spans.append((sb, t_of(cat, mask_of(sb))))
    return spans


def suite_brickfinite(algebra, bound, algebra_id="algebra"):
    """Census evidence for brick finiteness and the per-class predicate chain.

    Counts bricks at the bound and one step above it, counts torsion
    classes, and evaluates four predicates per class: functorially finite,
    bicompact, compact, widely generated.  The chain ff implies bicompact
    implies compact implies widely generated is asserted per class.  The
    all-classes equivalences are asserted only when the census is stable;
    a growing census flags brick-infinite evidence instead and leaves the
    universally quantified claims unasserted.
    """
    cat = Catalogue(algebra, bound)
    classes = enumerate_torsion_classes(cat)
    nbricks = len(cat.bricks())
    cert = _ample(algebra, bound, classes, cat)
    try:
        big = Catalogue(algebra, tuple(b + 1 for b in bound))
        nbricks_big = len(big.bricks())
    except BudgetError:
        nbricks_big = None
    stable = nbricks_big == nbricks and bool(cert and cert["stable"])
    checks = [
        _check(
            "brick-census",
            "pass" if nbricks_big == nbricks else "window-limited",
            {"bricks": nbricks, "bricks-at-next-bound": nbricks_big},
        ),
        _check(
            "tors-census",
            "pass" if cert and cert["stable"] else "window-limited",
            {
                "classes": len(classes),
                "classes-at-next-bound": cert["count_big"] if cert else None,
            },
        ),
    ]
    box = _WitnessBox(cat)
    spans = _semibrick_spans(cat)
    span_of = {}
    for sb, mask in spans:
        if mask not in span_of:
            span_of[mask] = sb
    per_class = []
    chain_bad = []
    for k, tmask in enumerate(classes):
        wit = box.get(tmask)
        widely = span_of.get(tmask)
        flags = {
            "ff": wit["ff"],
            "bicompact": wit["compact"] is not None and wit["cocompact"] is not None,
            "compact": wit["compact"] is not None,
            "widely-generated": widely is not None,
        }
        per_class.append(flags)
        if (flags["ff"] and not flags["bicompact"]) or (
            flags["bicompact"] and not flags["compact"]
        ) or (flags["compact"] and not flags["widely-generated"]):
            chain_bad.append(k)
    checks.append(
        _check(
            "predicate-chain",
            "fail" if chain_bad else "pass",
            {"violations": chain_bad},
        )
    )
    totals = {
        key: sum(1 for f in per_class if f[key])
        for key in ("ff", "bicompact", "compact", "widely-generated")
    }
    totals["classes"] = len(classes)
    if stable:
        universal = all(all(f.values()) for f in per_class)
        checks.append(
            _check(
                "brickfinite-equivalences",
                "pass" if universal else "fail",
                totals,
            )
        )
    else:
        totals["asserted"] = False
        checks.append(_check("brickfinite-equivalences", "window-limited", totals))
    return _report(algebra_id, algebra, bound, "brickfinite", checks)


# -- the conjecture evidence scan ---------------------------------------------------


def suite_scan(algebra_text, grid=(-4, 4), fields=(2, 3, 5), depth=6, bound=None,
               algebra_id="algebra"):
    """Semibrick growth at non-rigid lattice weights, across base fields.

    Reparses the algebra over each requested prime, walks the grid, and
    keeps the weights whose rigidity verdict is not rigid.  For each such
    weight and field the suite extracts the smallest semibrick generating
    the weak semistable class in the window, re-verifies pairwise hom
    orthogonality and brickness by direct computation, and tabulates the
    semibrick sizes.  Growing sizes across fields are the desk-scale
    shadow of an infinite semibrick.
    """
    algebras = {}
    for p in sorted(fields):
        algebras[p] = load_algebra(refield(algebra_text, p))
    n = algebras[sorted(fields)[0]].n
    if bound is None:
        bound = (1,) * n
    checks = []
    sizes = {}
    for p in sorted(fields):
        A = algebras[p]
        graph = enumerate_silting(A, depth)
        cat = Catalogue(A, bound)
        for theta in _grid_points(grid, n):
            verdict = rigidity(theta, graph)
            if verdict["verdict"] == "rigid":
                continue
            quad = quadruple(cat, theta)
            sb = None
            for cand, mask in _semibrick_spans(cat):
                if mask == quad.Tbar:
                    sb = cand
                    break
            claim = "scan-evidence[p=%d][%s]" % (p, ",".join(str(t) for t in theta))
            if sb is None:
                checks.append(
                    _check(
                        claim,
                        "window-limited",
                        {"theta": list(theta), "verdict": verdict["verdict"]},
                    )
                )
                continue
            orthogonal = all(
                cat.hom_dim(i, j) == 0 for i in sb for j in sb if i != j
            )
            bricks = all(cat.is_brick(i) for i in sb)
            spans = t_of(cat, mask_of(sb)) == quad.Tbar
            good = orthogonal and bricks and spans
            payload = {
                "theta": list(theta),
                "verdict": verdict["verdict"],
                "size": len(sb),
                "semibrick": [list(cat.dims_of(i)) for i in sb],
                "orthogonal": orthogonal,
                "bricks": bricks,
                "generates": spans,
            }
            checks.append(_check(claim, "pass" if good else "fail", payload))
            sizes.setdefault(theta, {})[p] = len(sb)
    for theta in sorted(sizes):
        by_p = sizes[theta]
        seq = [by_p[p] for p in sorted(by_p)]
        checks.append(
            _check(
                "scan-growth[%s]" % ",".join(str(t) for t in theta),
                "pass",
                {
                    "theta": list(theta),
                    "fields": sorted(by_p),
                    "sizes": seq,
                    "growing": all(a < b for a, b in zip(seq, seq[1:])),
                },
            )
        )
    if not checks:
        checks.append(_check("scan-no-evidence", "pass", {"points": 0}))
    A0 = algebras[sorted(fields)[0]]
    rep = _report(algebra_id, A0, bound, "scan", checks)
    rep["fields"] = sorted(fields)
    return rep


# -- fan export and the rank 2 picture ----------------------------------------------


def fan_json(algebra, depth, algebra_id="algebra"):
    """Enumerated g-vector fan: one integer ray matrix per cone."""
    graph = enumerate_silting(algebra, depth)
    cones = []
    for v in graph["vertices"]:
        cone = silting_cone(v["summands"])
        cones.append(
            {
                "key": [list(g) for g in v["key"]],
                "rays": [list(r) for r in cone.generators],
                "depth": v["depth"],
            }
        )
    return {
        "algebra": algebra_id,
        "field": algebra.p,
        "depth": depth,
        "complete": graph["complete"],
        "cones": cones,
    }


_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#aec7e8",
    "#ffbb78", "#98df8a", "#d62728", "#ff9896", "#c5b0d5", "#8c564b",
    "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7", "#dbdb8d",
)


def wallchamber_svg(algebra, bound=None, window=(-5, 5), depth=6):
    """Rank 2 wall-and-chamber picture as an SVG string.

    Samples weights on a half-integer grid over the window, colors each
    sample by the pair of window classes it cuts out, and overlays the
    rays of the enumerated fan.  Styling is fixed; equal inputs give
    byte-identical output.
    """
    if algebra.n != 2:
        raise ReportError("wall-chamber pictures need exactly 2 vertices")
    if bound is None:
        bound = (2, 2)
    cat = Catalogue(algebra, bound)
    lo, hi = window
    if lo >= hi:
        raise ReportError("empty window %r" % (window,))
    steps = 2 * (hi - lo) + 1
    size = 560.0
    margin = 40.0
    plot = size - 2 * margin
    cell = plot / steps
    scale = plot / float(hi - lo)

    def px(x):
        return margin + (float(x) - lo) * scale

    def py(y):
        return margin + (hi - float(y)) * scale

    colors = {}
    rects = []
    for j in range(steps):
        y = Fraction(hi) - Fraction(j, 2)
        for i in range(steps):
            x = Fraction(lo) + Fraction(i, 2)
            quad = quadruple(cat, (x, y))
            key = (quad.T, quad.Tbar)
            if key not in colors:
                colors[key] = _PALETTE[len(colors) % len(_PALETTE)]
            rects.append(
                '<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f" fill="%s"/>'
                % (px(x) - cell / 2, py(y) - cell / 2, cell, cell, colors[key])
            )
    rays = set()
    for v in enumerate_silting(algebra, depth)["vertices"]:
        rays.update(silting_cone(v["summands"]).generators)
    lines = [
        '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#dddddd" stroke-width="1"/>'
        % (px(lo), py(0), px(hi), py(0)),
        '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#dddddd" stroke-width="1"/>'
        % (px(0), py(lo), px(0), py(hi)),
    ]
    for ray in sorted(rays):
        gx, gy = ray
        stretch = Fraction(hi) / max(abs(gx), abs(gy))
        lines.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#222222" stroke-width="2"/>'
            % (px(0), py(0), px(gx * stretch), py(gy * stretch))
        )
    body = "\n".join(
        [
            '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
            'viewBox="0 0 %d %d">' % (int(size), int(size), int(size), int(size)),
            '<rect x="0" y="0" width="%d" height="%d" fill="#ffffff"/>'
            % (int(size), int(size)),
        ]
        + rects
        + lines
        + ["</svg>"]
    )
    return body + "\n"
