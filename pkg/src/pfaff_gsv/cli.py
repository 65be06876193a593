"""Command-line front end: ``pfaff-gsv <command> <problem-file>``.

Problem files are JSON::

    {
      "ring": {"variables": ["x0", "x1", "x2"], "homogeneous": true},
      "pfaff": {"rank": 1, "terms": [[["x0"], "x1*x2"], [["x1"], "-2*x0*x2"], [["x2"], "x0*x1"]]},
      "variety": ["x0*x2 - x1^2"],
      "components": [{"kind": "point", "coordinates": [1, 0, 0]}],
      "options": {"order": "grevlex", "max_order": 64, "truncation": 32, "caps": "max_pairs=50000"}
    }

Exit codes: 0 every verdict passes, 1 a mathematical verdict is false,
2 invalid input, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import config
from .errors import InvalidInput, ParseError, PfaffError, ValidationError
from .forms import DiffForm
from .gsv import GSVResult, aleksandrov_decomposition, gsv_index, verify_decomposition
from .groebner import radical_membership
from .order import DEFAULT_MAX_ORDER, DEFAULT_TRUNCATION, DivisorWitness, SeriesWitness, SmoothPointWitness
from .pfaff import (
    CompleteIntersection,
    DivisorOnV,
    ParametrizedPoint,
    PfaffProblem,
    PfaffSystem,
    Point,
    check_invariance,
    is_smooth,
    pfaff_degree,
    reducedness_warnings,
)
from .poly import LEX, GREVLEX, MAX_MINOR_RANK, Polynomial, parse_polynomial
from .projective import (
    degree_formula_check,
    degree_formula_right,
    indices_in_charts,
    logarithmic_example,
    poincare_bound_check,
)

COMMANDS = ("check-invariance", "gsv", "decompose", "verify-degree-formula", "poincare", "gen-log-example")
ORDERS = {"grevlex": GREVLEX, "lex": LEX}


# -- loading ---------------------------------------------------------------

class _Source:
    """Raw problem text, used to anchor diagnostics to a line."""

    def __init__(self, text: str):
        self.text = text

    def line_of(self, needle: str) -> int | None:
        if not needle:
            return None
        quoted = json.dumps(needle)
        for number, line in enumerate(self.text.splitlines(), 1):
            if quoted in line or needle in line:
                return number
        return None

    def key_line(self, key: str) -> int | None:
        return self.line_of(f'"{key}"')

    def parse(self, text, names, what: str) -> Polynomial:
        if not isinstance(text, (str, int)):
            raise ValidationError(what, f"expected a polynomial string, got {type(text).__name__}")
        text = str(text)
        try:
            return parse_polynomial(text, names)
        except ParseError as exc:
            raise exc.at_line(self.line_of(text)) from None

    def fail(self, invariant: str, detail: str, key: str | None = None) -> ValidationError:
        line = self.key_line(key) if key else None
        suffix = f" (line {line})" if line else ""
        return ValidationError(invariant, detail + suffix)


def _fraction(value, where: str) -> Fraction:
    try:
        if isinstance(value, float):
            raise ValueError
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValidationError("rational coordinate", f"{where}: {value!r} is not an integer or a/b string") from None


def _chart(value, names, src: _Source):
    if value is None:
        return None
    if isinstance(value, str):
        if value not in names:
            raise src.fail("chart", f"unknown chart variable {value!r}", "chart")
        return names.index(value)
    if isinstance(value, int) and 0 <= value < len(names):
        return value
    raise src.fail("chart", f"chart must be a variable name or index, got {value!r}", "chart")


def _degree(value, src: _Source):
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise src.fail("declared degree", f"degree must be a positive integer, got {value!r}", "degree")
    return value


def _component(rec, names, src: _Source, truncation: int):
    if not isinstance(rec, dict):
        raise src.fail("component record", "each component must be an object", "components")
    kind = rec.get("kind")
    chart = _chart(rec.get("chart"), names, src)
    degree = _degree(rec.get("degree"), src)
    if kind == "point":
        coords = rec.get("coordinates")
        if not isinstance(coords, list):
            raise src.fail("point", "a point needs a 'coordinates' list", "coordinates")
        return Point(tuple(_fraction(c, "coordinates") for c in coords), chart, degree)
    if kind == "divisor":
        return DivisorOnV(src.parse(rec.get("h"), names, "divisor equation"), chart, degree)
    if kind == "parametrized":
        t = rec.get("parameter", "t")
        if not isinstance(t, str) or t in names:
            raise src.fail("parameter", f"branch parameter must be a fresh name, got {t!r}", "parameter")
        series = rec.get("param")
        if not isinstance(series, list):
            raise src.fail("parametrized", "a branch needs a 'param' list of series", "param")
        param = tuple(src.parse(s, [t], "branch series") for s in series)
        center = rec.get("center")
        if center is None:
            center = tuple(p.evaluate([0]) for p in param)
        elif not isinstance(center, list):
            raise src.fail("parametrized", "center must be a list", "center")
        else:
            center = tuple(_fraction(c, "center") for c in center)
        trunc = rec.get("truncation", truncation)
        if not isinstance(trunc, int) or trunc < 1:
            raise src.fail("truncation", f"truncation must be a positive integer, got {trunc!r}", "truncation")
        return ParametrizedPoint(center, param, trunc, chart, degree)
    raise src.fail("component kind", f"unknown kind {kind!r} (point, divisor or parametrized)", "kind")


def _ring(data, src: _Source):
    ring = data.get("ring")
    if not isinstance(ring, dict):
        raise src.fail("ring", "missing 'ring' object", "ring")
    names = ring.get("variables")
    if not isinstance(names, list) or not names or not all(isinstance(n, str) and n.isidentifier() for n in names):
        raise src.fail("ring", "'variables' must be a non-empty list of identifiers", "variables")
    if len(set(names)) != len(names):
        raise src.fail("ring", "variable names must be distinct", "variables")
    homogeneous = ring.get("homogeneous", False)
    if not isinstance(homogeneous, bool):
        raise src.fail("ring", "'homogeneous' must be true or false", "homogeneous")
    return list(names), homogeneous


def _form(data, names, homogeneous, src: _Source) -> PfaffSystem:
    pf = data.get("pfaff")
    if not isinstance(pf, dict):
        raise src.fail("pfaff", "missing 'pfaff' object", "pfaff")
    rank = pf.get("rank")
    terms = pf.get("terms")
    if not isinstance(rank, int) or rank < 1:
        raise src.fail("pfaff", "'rank' must be a positive integer", "rank")
    if rank > MAX_MINOR_RANK:
        raise src.fail("supported rank", f"rank {rank} exceeds the supported maximum {MAX_MINOR_RANK}", "rank")
    if not isinstance(terms, list) or not terms:
        raise src.fail("pfaff", "'terms' must be a non-empty list of [index, coefficient] pairs", "terms")
    out: dict = {}
    for entry in terms:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
            raise src.fail("pfaff term", f"expected [[names...], coefficient], got {entry!r}", "terms")
        index, coef = entry
        for v in index:
            if v not in names:
                raise ParseError(f"undeclared variable {v!r} in a multi-index", line=src.line_of(f'"{v}"'))
        if len(index) != rank:
            raise src.fail("pfaff term", f"multi-index {index} does not have rank {rank}", "terms")
        form = DiffForm(len(names), rank, {tuple(names.index(v) for v in index): src.parse(coef, names, "coefficient")})
        for key, value in form.items():
            out[key] = out[key] + value if key in out else value
    return PfaffSystem(DiffForm(len(names), rank, out), homogeneous)


def _options(data, src: _Source) -> dict:
    opts = data.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise src.fail("options", "'options' must be an object", "options")
    out = {}
    if "order" in opts:
        if opts["order"] not in ORDERS:
            raise src.fail("options", "order must be 'lex' or 'grevlex'", "order")
        out["order"] = opts["order"]
    for key in ("max_order", "truncation"):
        if key in opts:
            if not isinstance(opts[key], int) or opts[key] < 1:
                raise src.fail("options", f"{key} must be a positive integer", key)
            out[key] = opts[key]
    if "caps" in opts:
        out["caps"] = config.parse_caps(str(opts["caps"]))
    return out


def _read(path) -> tuple[dict, _Source]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed problem file: {exc.msg}", position=exc.colno - 1, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("problem file must hold a JSON object", line=1)
    return data, _Source(text)


def load_problem(path, truncation: int | None = None) -> PfaffProblem:
    """Parse and validate a problem file; ``truncation`` overrides the file default."""
    data, src = _read(path)
    return _build(data, src, truncation)[0]


def _build(data, src: _Source, truncation: int | None = None):
    names, homogeneous = _ring(data, src)
    opts = _options(data, src)
    omega = _form(data, names, homogeneous, src)
    eqs = data.get("variety")
    if not isinstance(eqs, list) or not eqs:
        raise src.fail("variety", "'variety' must be a non-empty list of equations", "variety")
    V = CompleteIntersection(tuple(src.parse(e, names, "equation") for e in eqs), homogeneous)
    trunc = truncation or opts.get("truncation", DEFAULT_TRUNCATION)
    comps = data.get("components", []) or []
    if not isinstance(comps, list):
        raise src.fail("components", "'components' must be a list", "components")
    components = tuple(_component(c, names, src, trunc) for c in comps)
    return PfaffProblem(omega, V, components, tuple(names)), opts


# -- rendering -------------------------------------------------------------

def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _component_json(S, names) -> dict:
    out: dict = {"kind": S.kind}
    if isinstance(S, Point):
        out["coordinates"] = [_num(c) for c in S.coordinates]
    elif isinstance(S, DivisorOnV):
        out["h"] = S.h.to_str(names)
    else:
        out["center"] = [_num(c) for c in S.center]
        out["param"] = [p.to_str(["t"]) for p in S.param]
        out["truncation"] = S.truncation
    if S.chart is not None:
        out["chart"] = names[S.chart]
    if S.degree is not None:
        out["degree"] = S.degree
    return out


def _form_json(form: DiffForm, names) -> list:
    return [[[names[i] for i in idx], c.to_str(names)] for idx, c in sorted(form.items())]


def _witness_json(w, names):
    if isinstance(w, DivisorWitness):
        return {"h_power": w.m, "mu": w.mu.to_str(names), "cofactors": [c.to_str(names) for c in w.cofactors]}
    if isinstance(w, SmoothPointWitness):
        return {"m": w.m, "cofactors": [c.to_str(names) for c in w.cofactors]}
    if isinstance(w, SeriesWitness):
        return {"leading_coefficient": _num(w.coefficient), "truncation": w.truncation}
    return None


def _gsv_json(res: GSVResult, names, certs: bool) -> dict:
    rows = []
    for I, (a, b) in sorted(res.per_minor.items()):
        row = {"minor": [names[i] for i in I], "ord_coefficient": a.as_json(), "ord_minor": b.as_json()}
        if certs:
            D = res.decompositions[I]
            row["witness_coefficient"] = _witness_json(a.witness, names)
            row["witness_minor"] = _witness_json(b.witness, names)
            row["decomposition"] = {"g": D.g.to_str(names), "xi": D.xi.to_str(names), "eta": _form_json(D.eta, names)}
        rows.append(row)
    out = {"index": res.index, "method": res.method, "minors": rows}
    if res.inadmissible:
        out["inadmissible"] = [{"minor": [names[i] for i in I], "reason": r} for I, r in sorted(res.inadmissible.items())]
    return out


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)} : {_scalar(v)}")
    else:
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}- [{i}]")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


# -- commands --------------------------------------------------------------

def _cmd_check_invariance(problem: PfaffProblem, args) -> tuple[dict, bool]:
    names = problem.names
    res = check_invariance(problem.omega, problem.variety)
    out: dict = {"invariant": bool(res)}
    if not res:
        out["failed_equation"] = res.failed_equation
        out["failed_coefficient"] = [names[i] for i in res.failed_index]
    elif args.with_certificates:
        out["certificate"] = [[_form_json(t, names) for t in row] for row in res.certificate.theta]
    warnings = reducedness_warnings(problem.variety)
    if warnings:
        out["warnings"] = warnings
    return out, bool(res)


def _require_components(problem):
    if not problem.components:
        raise InvalidInput("this command needs at least one component in the problem file")


def _cmd_gsv(problem: PfaffProblem, args) -> tuple[dict, bool]:
    _require_components(problem)
    names = list(problem.names)
    rows = []
    if problem.homogeneous:
        for e in indices_in_charts(problem.omega, problem.variety, problem.components, args.max_order):
            chart_names = names[: e.chart] + names[e.chart + 1:]
            row = {"component": _component_json(e.component, names), "chart": names[e.chart]}
            row.update(_gsv_json(e.result, chart_names, args.with_certificates))
            rows.append(row)
    else:
        for S in problem.components:
            res = gsv_index(problem.omega, problem.variety, S, max_order=args.max_order)
            row = {"component": _component_json(S, names)}
            row.update(_gsv_json(res, names, args.with_certificates))
            rows.append(row)
    return {"components": rows}, True


def _cmd_decompose(problem: PfaffProblem, args) -> tuple[dict, bool]:
    names = problem.names
    V = problem.variety
    rows = []
    ok = True
    for I, delta in V.minors().items():
        label = [names[i] for i in I]
        if delta.is_zero() or radical_membership(delta, V.ideal):
            rows.append({"minor": label, "admissible": False})
            continue
        D = aleksandrov_decomposition(problem.omega, V, I)
        verdict = verify_decomposition(D, problem.omega, V)
        ok = ok and bool(verdict)
        row = {"minor": label, "admissible": True, "verified": bool(verdict),
               "g": D.g.to_str(names), "xi": D.xi.to_str(names), "eta": _form_json(D.eta, names)}
        if not verdict:
            row["failed"] = verdict.failed
        if args.with_certificates:
            row["eta_components"] = [_form_json(c, names) for c in D.eta_components]
        rows.append(row)
    return {"decompositions": rows}, ok


def _require_projective(problem):
    if not problem.homogeneous:
        raise InvalidInput("this command needs a homogeneous (projective) problem")


def _cmd_degree_formula(problem: PfaffProblem, args) -> tuple[dict, bool]:
    _require_projective(problem)
    report = degree_formula_check(problem.omega, problem.variety, problem.components, args.max_order)
    out = report.as_json()
    names = list(problem.names)
    for row, e in zip(out["components"], report.per_component):
        chart_names = names[: e.chart] + names[e.chart + 1:]
        row["chart"] = names[e.chart]
        row["component"] = _component_json(e.component, names)
        row["gsv"] = _gsv_json(e.result, chart_names, args.with_certificates)
    return out, report.match


def _cmd_poincare(problem: PfaffProblem, args) -> tuple[dict, bool]:
    _require_projective(problem)
    entries = indices_in_charts(problem.omega, problem.variety, problem.components, args.max_order)
    smooth = is_smooth(problem.variety)
    report = poincare_bound_check(problem.omega, problem.variety, entries, smooth=smooth)
    ok = report.status != "VIOLATED" and report.refined_status != "VIOLATED"
    return report.as_json(), ok


COMMAND_TABLE = {
    "check-invariance": _cmd_check_invariance,
    "gsv": _cmd_gsv,
    "decompose": _cmd_decompose,
    "verify-degree-formula": _cmd_degree_formula,
    "poincare": _cmd_poincare,
}


def generate_log_problem(data: dict, src: _Source) -> dict:
    """Problem file for sum_j (-1)^j d_j f_j df_0^..^df_j-hat^..^df_k with V = {f_1 = .. = f_k = 0}."""
    names, _ = _ring(data, src)
    factors = data.get("factors")
    if not isinstance(factors, list) or len(factors) < 2:
        raise src.fail("factors", "gen-log-example needs a 'factors' list f_0..f_k (k >= 1)", "factors")
    fs = [src.parse(f, names, "factor") for f in factors]
    omega = logarithmic_example(fs)
    out = {
        "ring": {"variables": names, "homogeneous": True},
        "pfaff": {"rank": omega.rank, "terms": _form_json(omega.form, names)},
        "variety": [f.to_str(names) for f in fs[1:]],
    }
    if "components" in data:
        out["components"] = data["components"]
    out["info"] = {
        "degree": pfaff_degree(omega),
        "multidegree": [f.degree() for f in fs],
        "degree_formula_right": degree_formula_right(pfaff_degree(omega), [f.degree() for f in fs[1:]]),
    }
    return out


def run_command(command: str, path, args) -> tuple[dict, int]:
    """Execute one command; returns (report, exit code)."""
    report: dict = {"command": command, "problem": str(path)}
    try:
        if command == "gen-log-example":
            data, src = _read(path)
            return generate_log_problem(data, src), 0
        data, src = _read(path)
        problem, opts = _build(data, src, args.truncation)
        if args.max_order is None:
            args.max_order = opts.get("max_order", DEFAULT_MAX_ORDER)
        order = ORDERS[args.order or opts.get("order", "grevlex")]
        settings = opts.get("caps", config.Settings())
        env = os.environ.get(config.CAPS_ENV)
        if env:
            settings = config.parse_caps(env, settings)
        with config.using(max_pairs=settings.max_pairs, max_degree=settings.max_degree, order=order):
            body, ok = COMMAND_TABLE[command](problem, args)
        report.update(body)
        report["pass"] = ok
        return report, 0 if ok else 1
    except PfaffError as exc:
        report["pass"] = False
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return report, exc.exit_code
    except RecursionError:  # pragma: no cover
        report["pass"] = False
        report["error"] = {"type": "ResourceCapExceeded", "message": "expression too deeply nested"}
        return report, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pfaff-gsv", description="GSV-indices and degree formulas for Pfaff systems with invariant varieties."
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help="JSON problem file")
    p.add_argument("--json", action="store_true", help="emit the machine-readable report")
    p.add_argument("--order", choices=sorted(ORDERS), default=None, help="monomial order for Groebner bases")
    p.add_argument("--max-order", type=int, default=None, help="give up on vanishing orders above N")
    p.add_argument("--truncation", type=int, default=None, help="default series truncation for branches")
    p.add_argument("--with-certificates", action="store_true", help="include cofactors and eta coefficients")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("max_order", "truncation"):
        value = getattr(args, flag)
        if value is not None and value < 1:
            print(f"pfaff-gsv: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    report, code = run_command(args.command, args.problem, args)
    if args.json or args.command == "gen-log-example":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print("\n".join(_text(report)))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
