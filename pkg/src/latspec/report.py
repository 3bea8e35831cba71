"""Poset files, the analysis pipeline, and its JSON/SVG outputs.

Poset file format, one directive per line, ``#`` starts a comment::

    elements 8          # required first directive
    cover 1 2           # Hasse edge, lower then upper (1-based)
    f 1 1               # value: integer or p/q, one per element
    subset 1 2 3        # optional, defaults to every element
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from . import divisor
from .bounds import (
    GcdLcmBound,
    Inapplicable,
    fibonacci_bound,
    gcd_lcm_bound,
    gerschgorin_disks,
    global_bounds,
    in_union,
    kn_constants,
    pencil_constants,
)
from .errors import CycleError, HypothesisError, LatspecError, OrderingError, ParseError, PosetError
from .factory import FactorizationBundle, WeightedSubset, definiteness, factorize
from .poset import FinitePoset, PointFunction, check_subset, from_covers
from .rational import fraction_str
from .spectral import inertia_prediction, solve

RESIDUAL_TOLERANCE = 1e-9
CONTAINMENT_SLACK = 1e-8
RECIPROCAL_TOLERANCE = 1e-8
# eigenvalues closer than this (relative) are treated as one repeated value
CLUSTER_RADIUS = 1e-4
BOUND_FAMILIES = ("global", "disks", "fibonacci", "gcdlcm")
FIXTURES = ("example1", "example2")

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_INT = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class PosetInput:
    """Parsed poset file; ``subset`` indexes the (possibly re-sorted) poset."""

    poset: FinitePoset
    f: PointFunction
    subset: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]


def _tokens(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.group(0), m.start() + 1


def _parse_index(tok, col, lineno, n):
    if not _INT.match(tok):
        raise ParseError("expected an element index, got %r" % tok, lineno, col)
    v = int(tok)
    if n is not None and not 1 <= v <= n:
        raise ParseError("element index %d out of range 1..%d" % (v, n), lineno, col)
    return v


def parse_poset_file(text: str, *, strict: bool = False) -> PosetInput:
    n = None
    covers: list[tuple[int, int]] = []
    cover_lines: list[int] = []
    values: dict[int, Fraction] = {}
    subset = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        (word, col), args = toks[0], toks[1:]
        # tolerate "cover: 1 2" and "f: 1 = 3"
        word = word.rstrip(":")
        if word == "f" and len(args) == 3 and args[1][0] == "=":
            args = [args[0], args[2]]
        if n is None and word != "elements":
            raise ParseError("first directive must be 'elements'", lineno, col)
        if word == "elements":
            if n is not None:
                raise ParseError("'elements' given twice", lineno, col)
            if len(args) != 1:
                raise ParseError("'elements' takes one argument", lineno, col)
            n = _parse_index(args[0][0], args[0][1], lineno, None)
            if n < 1:
                raise ParseError("a poset needs at least one element", lineno, args[0][1])
        elif word == "cover":
            if len(args) != 2:
                raise ParseError("'cover' takes two indices", lineno, col)
            a = _parse_index(*args[0], lineno, n)
            b = _parse_index(*args[1], lineno, n)
            if a == b:
                raise ParseError("cycle: element %d cannot cover itself" % a, lineno, args[1][1])
            covers.append((a, b))
            cover_lines.append(lineno)
        elif word == "f":
            if len(args) != 2:
                raise ParseError("'f' takes an index and a value", lineno, col)
            i = _parse_index(*args[0], lineno, n)
            tok, vcol = args[1]
            if not _RATIONAL.match(tok):
                raise ParseError("value must be an integer or p/q, got %r" % tok, lineno, vcol)
            try:
                v = Fraction(tok)
            except ZeroDivisionError:
                raise ParseError("zero denominator", lineno, vcol) from None
            if i in values:
                raise ParseError("duplicate value for element %d" % i, lineno, col)
            values[i] = v
        elif word == "subset":
            if subset is not None:
                raise ParseError("'subset' given twice", lineno, col)
            if not args:
                raise ParseError("'subset' needs at least one index", lineno, col)
            subset = [_parse_index(*a, lineno, n) for a in args]
            if len(set(subset)) != len(subset):
                raise ParseError("repeated element in subset", lineno, col)
        else:
            raise ParseError("unknown directive %r" % word, lineno, col)
    if n is None:
        raise ParseError("missing 'elements' directive", 1, 1)
    missing = [i for i in range(1, n + 1) if i not in values]
    if missing:
        raise ParseError("no value given for element %d" % missing[0], len(text.splitlines()) or 1, 1)
    try:
        poset, pf = from_covers(
            n, [(a - 1, b - 1) for a, b in covers], [values[i] for i in range(1, n + 1)], strict=strict
        )
    except CycleError as exc:
        cyc = set(exc.cycle)
        line = next((ln for (a, b), ln in zip(covers, cover_lines) if a - 1 in cyc and b - 1 in cyc), 1)
        raise ParseError(str(exc), line, 1) from exc
    except OrderingError:
        raise
    except PosetError as exc:
        raise ParseError(str(exc), cover_lines[-1] if cover_lines else 1, 1) from exc
    pos = {orig: k for k, orig in enumerate(poset.labels)}
    if subset is None:
        S = tuple(range(n))
    else:
        S = tuple(pos[i - 1] for i in subset)
        if list(S) != sorted(S):
            if strict:
                raise ParseError("subset is not listed in a linear extension", len(text.splitlines()), 1)
            S = tuple(sorted(S))
        check_subset(poset, S)
    return PosetInput(poset, pf, S, tuple(covers))


def format_poset_file(poset: FinitePoset, f: PointFunction, subset: Sequence[int] | None = None) -> str:
    """Canonical file text for a poset in its current indexing."""
    lines = ["elements %d" % poset.n]
    lines += ["cover %d %d" % (a + 1, b + 1) for a, b in sorted(poset.covers)]
    lines += ["f %d %s" % (i + 1, fraction_str(v)) for i, v in enumerate(f.values)]
    if subset is not None and tuple(subset) != tuple(range(poset.n)):
        lines.append("subset " + " ".join(str(i + 1) for i in subset))
    return "\n".join(lines) + "\n"


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise LatspecError("unknown fixture %r (available: %s)" % (name, ", ".join(FIXTURES)))
    return resources.files("latspec").joinpath("fixtures", name + ".poset").read_text(encoding="utf-8")


def parse_f_spec(spec: str):
    """``pow:alpha`` -> (callable returning a Fraction, exact flag)."""
    kind, _, arg = spec.partition(":")
    if kind != "pow" or not arg:
        raise LatspecError("unsupported f spec %r (expected pow:<alpha>)" % spec)
    if _INT.match(arg):
        a = int(arg)
        return (lambda x: Fraction(x) ** a), True
    try:
        alpha = float(arg)
    except ValueError:
        raise LatspecError("bad exponent in f spec %r" % spec) from None
    if not math.isfinite(alpha):
        raise LatspecError("bad exponent in f spec %r" % spec)
    return (lambda x: Fraction(float(x) ** alpha)), False


def parse_integer_set(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise LatspecError("integer set must be comma separated integers: %r" % text) from None
    if not vals or any(v < 1 for v in vals):
        raise LatspecError("integer set must be nonempty and positive")
    return sorted(set(vals))


@dataclass
class AnalysisRequest:
    poset_text: str | None = None
    integers: Sequence[int] | None = None
    f_spec: str = "pow:1"
    closure: bool = False
    which: str = "primal"
    bounds: Sequence[str] | None = None
    strict_order: bool = False
    kn_method: str = "closed_form"
    source_name: str | None = None

    def __post_init__(self):
        if (self.poset_text is None) == (self.integers is None):
            raise LatspecError("give exactly one of a poset file or an integer set")
        if self.which not in ("primal", "dual", "both"):
            raise LatspecError("which must be primal, dual or both")
        if self.bounds is None:
            self.bounds = BOUND_FAMILIES if self.integers is not None else BOUND_FAMILIES[:3]
        unknown = set(self.bounds) - set(BOUND_FAMILIES)
        if unknown:
            raise LatspecError("unknown bound families: %s" % ", ".join(sorted(unknown)))
        if "gcdlcm" in self.bounds and self.integers is None:
            raise LatspecError("gcdlcm bounds need an integer set source")

    @property
    def problems(self) -> tuple[str, ...]:
        return ("primal", "dual") if self.which == "both" else (self.which,)


@dataclass
class ReportDocument:
    data: dict[str, Any]
    bundle: FactorizationBundle | None = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.data["assertions"])

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"


def _bound_json(b):
    if isinstance(b, Inapplicable):
        return {"inapplicable": b.reason}
    return b


def _disk_json(disks):
    return [{"center": fraction_str(d.center), "radius": fraction_str(d.radius)} for d in disks]


def _opt_frac(x):
    return None if x is None else fraction_str(x)


def _clusters(values, radius):
    groups: list[list[complex]] = []
    for z in values:
        hits = [g for g in groups if any(abs(z - w) <= radius for w in g)]
        groups = [g for g in groups if g not in hits] + [[z] + [w for g in hits for w in g]]
    return [(sum(g) / len(g), len(g)) for g in groups]


def match_reciprocal(primal, dual, tol) -> bool:
    """Nonzero primal eigenvalues are the reciprocals of the dual ones, as multisets.

    Repeated eigenvalues are grouped first and compared by centroid, since
    binary64 splits a k-fold defective eigenvalue by about eps**(1/k) while
    the centroid stays accurate.
    """
    a = [complex(z) for z in primal]
    b = [1 / complex(z) for z in dual if z != 0]
    if len(a) != len(b):
        return False
    scale = max([1.0] + [abs(z) for z in a])
    ca, cb = _clusters(a, CLUSTER_RADIUS * scale), _clusters(b, CLUSTER_RADIUS * scale)
    if sorted(n for _, n in ca) != sorted(n for _, n in cb):
        return False
    for z, n in ca:
        k = min(range(len(cb)), key=lambda i: abs(cb[i][0] - z))
        if cb[k][1] != n or abs(cb[k][0] - z) > tol * scale:
            return False
        cb.pop(k)
    return True


def _build_input(request: AnalysisRequest):
    if request.poset_text is not None:
        parsed = parse_poset_file(request.poset_text, strict=request.strict_order)
        poset, f, S = parsed.poset, parsed.f, parsed.subset
        echo = {
            "source": request.source_name or "poset",
            "elements": poset.n,
            "covers": [list(c) for c in parsed.covers],
            "f": [fraction_str(f[poset.labels.index(k)]) for k in range(poset.n)],
            "subset": [poset.labels[s] + 1 for s in S],
        }
        labels = [k + 1 for k in poset.labels]
        return poset, f, S, echo, labels, None
    ints = list(request.integers)
    fn, exact = parse_f_spec(request.f_spec)
    S_ints = divisor.factor_closure(ints) if request.closure else ints
    ambient = divisor.factor_closure(S_ints)
    poset = divisor.divisor_poset(ambient)
    f = PointFunction(tuple(fn(x) for x in ambient), exact)
    pos = {x: k for k, x in enumerate(ambient)}
    S = tuple(pos[x] for x in S_ints)
    echo = {"source": "integers", "set": ints, "f": request.f_spec, "closure": request.closure,
            "f_exact": exact}
    return poset, f, S, echo, list(ambient), S_ints


def run(request: AnalysisRequest) -> ReportDocument:
    """Factorize, solve, bound, and check every containment claim.

    Hypothesis failures inside a bound family are reported in place; only
    errors that prevent factorization propagate.
    """
    poset, f, S, echo, labels, S_ints = _build_input(request)
    echo.update({"which": request.which, "bounds": sorted(request.bounds), "kn": request.kn_method})
    ws = WeightedSubset(poset, S, f)
    bundle = factorize(ws)
    n = bundle.n
    assertions: list[dict] = []

    def check(name, ok):
        assertions.append({"name": name, "pass": bool(ok)})

    meet_def, join_def = definiteness(bundle)
    factors = {
        "E": ["".join(str(int(x)) for x in row) for row in bundle.E],
        "D": [fraction_str(x) for x in bundle.d],
        "L": None if bundle.l is None else [fraction_str(x) for x in bundle.l],
        "R": [fraction_str(x) for x in bundle.r],
        "flags": {
            "meet_closed": bundle.meet_closed,
            "lower_closed": bundle.lower_closed,
            "semimultiplicative": bundle.semimultiplicative,
            "meet_identity": bundle.meet_identity,
            "join_identity": bundle.join_identity,
            "f_exact": f.exact,
        },
        "definiteness": {"meet": meet_def.value, "join": None if join_def is None else join_def.value},
    }
    if bundle.meet_identity is not None:
        check("factorization.meet_identity", bundle.meet_identity)
    if bundle.join_identity is not None and bundle.semimultiplicative and bundle.meet_closed:
        check("factorization.join_identity", bundle.join_identity)

    pc = pencil_constants(bundle)
    try:
        kn = kn_constants(n, request.kn_method)
    except ValueError as exc:
        raise LatspecError(str(exc)) from exc
    constants = {
        "M_f": fraction_str(pc.M_f), "m_f": fraction_str(pc.m_f),
        "M_g": _opt_frac(pc.M_g), "m_g": _opt_frac(pc.m_g),
        "c_f": _opt_frac(pc.c_f), "C_f": _opt_frac(pc.C_f),
        "min_abs_f": fraction_str(pc.min_abs_f), "max_abs_f": fraction_str(pc.max_abs_f),
        "kn": {"n": kn.n, "c_n": kn.c_n, "C_n": kn.C_n, "method": kn.method},
    }

    spectrum_json = []
    bounds_json: dict[str, dict] = {fam: {} for fam in request.bounds if fam != "gcdlcm"}
    inertia_json = {}
    spectra = {}
    for prob in request.problems:
        try:
            sp = solve(bundle, prob)
        except HypothesisError as exc:
            for fam in bounds_json:
                bounds_json[fam][prob] = {"inapplicable": str(exc)}
            inertia_json[prob] = {"inapplicable": str(exc)}
            continue
        spectra[prob] = sp
        spectrum_json += [
            {"problem": prob, "re": z.real, "im": z.imag, "residual": r}
            for z, r in zip(sp.eigenvalues, sp.residuals)
        ]
        check("%s.residuals" % prob, max(sp.residuals) <= RESIDUAL_TOLERANCE)
        mags = [abs(z) for z in sp.eigenvalues]
        nz = [abs(z) for z in sp.nonzero()]

        if "global" in request.bounds:
            gb = global_bounds(bundle, kn, prob)
            bounds_json["global"][prob] = {"upper": _bound_json(gb.upper), "lower": _bound_json(gb.lower)}
            if not isinstance(gb.upper, Inapplicable):
                check("%s.global.upper" % prob, max(mags) <= gb.upper * (1 + CONTAINMENT_SLACK))
            if not isinstance(gb.lower, Inapplicable) and nz:
                check("%s.global.lower" % prob, min(nz) >= gb.lower * (1 - CONTAINMENT_SLACK))
        if "disks" in request.bounds:
            entry = {}
            for form in ("pencil", "reduced"):
                try:
                    dk = gerschgorin_disks(bundle, prob, form)
                except HypothesisError as exc:
                    entry[form] = {"inapplicable": str(exc)}
                    continue
                entry[form] = _disk_json(dk)
                check("%s.disks.%s" % (prob, form),
                      all(in_union(z, dk, CONTAINMENT_SLACK) for z in sp.eigenvalues))
            bounds_json["disks"][prob] = entry
        if "fibonacci" in request.bounds:
            fb = fibonacci_bound(bundle, prob)
            bounds_json["fibonacci"][prob] = _bound_json(fb)
            if not isinstance(fb, Inapplicable):
                check("%s.fibonacci" % prob, max(mags) <= fb * (1 + CONTAINMENT_SLACK))

        pred = inertia_prediction(bundle, prob)
        if pred.applicable:
            inertia_json[prob] = {"predicted": list(pred.counts), "computed": list(sp.inertia) if sp.inertia else None}
            check("%s.inertia" % prob, sp.inertia is not None and tuple(sp.inertia) == pred.counts)
        else:
            inertia_json[prob] = {"inapplicable": pred.reason,
                                  "computed": list(sp.inertia) if sp.inertia else None}

    if "primal" in spectra and "dual" in spectra:
        check("duality.reciprocal",
              match_reciprocal(spectra["primal"].nonzero(), spectra["dual"].eigenvalues, RECIPROCAL_TOLERANCE))

    if "gcdlcm" in request.bounds and S_ints is not None:
        bounds_json["gcdlcm"] = _gcdlcm_section(S_ints, bundle, spectra.get("primal"), check)

    data = {
        "input": echo,
        "ordering": {
            "linear_extension": labels,
            "reindexed": labels != sorted(labels),
            "subset": [labels[s] for s in S],
        },
        "factors": factors,
        "constants": constants,
        "spectrum": spectrum_json,
        "inertia": inertia_json,
        "bounds": bounds_json,
        "assertions": assertions,
    }
    return ReportDocument(data, bundle)


def _gcdlcm_section(S_ints, bundle, primal, check):
    try:
        g: GcdLcmBound = gcd_lcm_bound(S_ints, bundle=bundle)
    except (ValueError, HypothesisError) as exc:
        return {"inapplicable": str(exc)}
    check("gcdlcm.rows_equal_two_pow_omega", g.row_sums == g.two_pow_omega)
    check("gcdlcm.chain", g.certified <= g.omega_form <= g.tau_form)
    if primal is not None:
        check("gcdlcm.certified", primal.max_abs <= g.certified * (1 + CONTAINMENT_SLACK))
    xn = S_ints[-1]
    if xn > 70:
        check("gcdlcm.robin", 2 ** divisor.omega(xn) <= divisor.robin_bound(xn))
    return {
        "certified": g.certified,
        "omega_form": g.omega_form,
        "tau_form": g.tau_form,
        "row_sums": list(g.row_sums),
        "two_pow_omega": list(g.two_pow_omega),
        "tau_sum": g.tau_sum,
        "annotations": {"sqrt_form": g.sqrt_form, "robin_form": g.robin_form},
    }


# -- SVG -----------------------------------------------------------------------------------


def _fmt(x: float) -> str:
    s = "%.6f" % x
    s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def disk_geometry(report: ReportDocument | dict, problem: str = "primal", form: str = "pencil") -> dict:
    data = report.data if isinstance(report, ReportDocument) else report
    disks = data["bounds"].get("disks", {}).get(problem, {}).get(form)
    if not isinstance(disks, list):
        raise LatspecError("report has no %s %s disks" % (problem, form))
    circles = [{"cx": float(Fraction(d["center"])), "cy": 0.0, "r": float(Fraction(d["radius"]))} for d in disks]
    points = [{"re": s["re"], "im": s["im"]} for s in data["spectrum"] if s["problem"] == problem]
    return {"problem": problem, "form": form, "disks": circles, "eigenvalues": points}


def emit_disks_svg(report: ReportDocument | dict, path, problem: str = "primal", form: str = "pencil") -> tuple[Path, Path]:
    """Write the disks and eigenvalues as SVG, plus ``<stem>.geometry.json`` beside it."""
    geom = disk_geometry(report, problem, form)
    xs = [c["cx"] - c["r"] for c in geom["disks"]] + [c["cx"] + c["r"] for c in geom["disks"]]
    ys = [-c["r"] for c in geom["disks"]] + [c["r"] for c in geom["disks"]]
    xs += [p["re"] for p in geom["eigenvalues"]] + [0.0]
    ys += [p["im"] for p in geom["eigenvalues"]] + [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = 0.08 * span
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    size = 600.0
    sc = size / max(x1 - x0, y1 - y0)
    W, H = (x1 - x0) * sc, (y1 - y0) * sc

    def X(x):
        return (x - x0) * sc

    def Y(y):
        return (y1 - y) * sc

    mk = 4.0
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" viewBox="0 0 %s %s">'
        % (_fmt(W), _fmt(H + 24), _fmt(W), _fmt(H + 24)),
        '<g id="axes" stroke="#999" stroke-width="1">',
        '<line x1="0" y1="%s" x2="%s" y2="%s"/>' % (_fmt(Y(0)), _fmt(W), _fmt(Y(0))),
        '<line x1="%s" y1="0" x2="%s" y2="%s"/>' % (_fmt(X(0)), _fmt(X(0)), _fmt(H)),
        "</g>",
        '<g id="labels" font-family="sans-serif" font-size="11" fill="#444">',
        '<text x="2" y="%s">Re %s</text>' % (_fmt(H + 14), _fmt(x0)),
        '<text x="%s" y="%s" text-anchor="end">Re %s</text>' % (_fmt(W - 2), _fmt(H + 14), _fmt(x1)),
        '<text x="%s" y="12">Im %s</text>' % (_fmt(X(0) + 3), _fmt(y1)),
        "</g>",
        '<g id="disks" fill="none" stroke="#1f77b4" stroke-width="1.2">',
    ]
    out += ['<circle cx="%s" cy="%s" r="%s"/>' % (_fmt(X(c["cx"])), _fmt(Y(0)), _fmt(c["r"] * sc))
            for c in geom["disks"]]
    out += ["</g>", '<g id="eigenvalues" stroke="#d62728" stroke-width="1.5">']
    for p in geom["eigenvalues"]:
        cx, cy = X(p["re"]), Y(p["im"])
        out.append('<path d="M%s %sL%s %sM%s %sL%s %s"/>' % (
            _fmt(cx - mk), _fmt(cy - mk), _fmt(cx + mk), _fmt(cy + mk),
            _fmt(cx - mk), _fmt(cy + mk), _fmt(cx + mk), _fmt(cy - mk)))
    out += ["</g>", "</svg>"]
    path = Path(path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    side = path.with_name(path.stem + ".geometry.json")
    side.write_text(json.dumps(geom, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path, side
