"""JSON formats and the inline series syntax.

Series literal::

    {"n": 2, "terms": [[[1, 0], "1"], [[0, 2], "5"]], "D": 16}

means x1 + 5*x2^2 + O(deg 16); without ``"D"`` it is a polynomial.  A map
file adds a domain header::

    {"domain": {"kind": "truncated_adic", "m": 5, "N": 8},
     "components": [<series literal or inline string>, ...], "D": 16}

Inline syntax: ``3 - 5*x1^2*x2 + x2``, ``1+5x``; ``x``, ``y``, ``z`` stand for
x1, x2, x3 and ``**`` is accepted for ``^``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .adic import TOP, Domain, parse_domain
from .maps import PolyMap
from .series import TateSeries


class ParseError(ValueError):
    """Malformed input; ``position`` is a character offset or ``line:col``."""

    def __init__(self, message: str, position=None, source: str | None = None):
        where = f" at {position}" if position is not None else ""
        src = f"{source}: " if source else ""
        super().__init__(f"{src}{message}{where}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d*|y|z)|(?P<pow>\*\*|\^)|(?P<op>[-+*]))"
)
_NAMED = {"x": 1, "y": 2, "z": 3}


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()


def _var_index(name: str) -> int:
    if name in _NAMED:
        return _NAMED[name]
    return int(name[1:])


def parse_terms(text: str) -> list[tuple[dict[int, int], Fraction]]:
    """Parse into ``[(var_index -> exponent, coefficient)]`` (1-based indices)."""
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty series", 0)
    terms = []
    i = 0
    sign = 1
    expect_term = True
    coeff, mono = Fraction(1), {}
    seen_factor = False

    def flush(pos):
        if not seen_factor:
            raise ParseError("missing term", pos)
        terms.append((dict(mono), sign * coeff))

    while i < len(toks):
        kind, val, pos = toks[i]
        if kind == "op" and val in "+-" and (expect_term or seen_factor):
            if seen_factor:
                flush(pos)
                coeff, mono, seen_factor = Fraction(1), {}, False
                sign = 1
            if val == "-":
                sign = -sign
            expect_term = True
            i += 1
            continue
        if kind == "op" and val == "*":
            if not seen_factor:
                raise ParseError("'*' without a left operand", pos)
            i += 1
            continue
        if kind == "num":
            coeff *= Fraction(val)
        elif kind == "var":
            idx = _var_index(val)
            if idx < 1:
                raise ParseError("variables are numbered from x1", pos)
            e = 1
            if i + 1 < len(toks) and toks[i + 1][0] == "pow":
                if i + 2 >= len(toks) or toks[i + 2][0] != "num" or "/" in toks[i + 2][1]:
                    raise ParseError("exponent must be a nonnegative integer", toks[i + 1][2])
                e = int(toks[i + 2][1])
                i += 2
            mono[idx] = mono.get(idx, 0) + e
        else:
            raise ParseError(f"unexpected {val!r}", pos)
        seen_factor = True
        expect_term = False
        i += 1
    flush(len(text))
    return terms


def parse_series(text: str, domain: Domain, n: int | None = None, cap: int | None = None) -> TateSeries:
    terms = parse_terms(text)
    used = max((k for mono, _ in terms for k in mono), default=1)
    if n is None:
        n = used
    elif used > n:
        raise ParseError(f"variable x{used} used in a {n}-variable series")
    acc = {}
    for mono, c in terms:
        exp = tuple(mono.get(k + 1, 0) for k in range(n))
        acc[exp] = acc.get(exp, 0) + c
    return TateSeries(n, acc, cap, domain)


# --------------------------------------------------------------------------
# JSON


def _coef_str(c) -> str:
    return str(c)


def series_to_json(f: TateSeries, with_domain: bool = False) -> dict:
    out = {"n": f.n, "terms": [[list(e), _coef_str(c)] for e, c in f.sorted_terms()]}
    if f.cap is not None:
        out["D"] = f.cap
    if with_domain:
        out["domain"] = f.domain.to_json()
    return out


def series_from_json(obj, domain: Domain | None = None, n: int | None = None, cap=None) -> TateSeries:
    if isinstance(obj, str):
        if domain is None:
            raise ParseError("inline series needs a domain")
        return parse_series(obj, domain, n, cap)
    if not isinstance(obj, dict):
        raise ParseError(f"expected a series object, got {type(obj).__name__}")
    if "domain" in obj:
        domain = Domain.from_json(obj["domain"])
    if domain is None:
        raise ParseError("series has no domain")
    try:
        nn = int(obj.get("n", n))
        terms = [(tuple(int(e) for e in exp), Fraction(str(c))) for exp, c in obj["terms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed series literal: {exc}") from None
    D = obj.get("D", cap)
    return TateSeries.from_terms(terms, nn, domain, None if D is None else int(D))


def map_to_json(F: PolyMap) -> dict:
    out = {
        "domain": F.domain.to_json(),
        "n": F.n,
        "components": [series_to_json(f) for f in F.components],
    }
    return out


def map_from_json(obj, domain: Domain | None = None) -> PolyMap:
    if isinstance(obj, list):
        obj = {"components": obj}
    if not isinstance(obj, dict) or "components" not in obj:
        raise ParseError("map file needs a 'components' array")
    if "domain" in obj:
        domain = Domain.from_json(obj["domain"]) if isinstance(obj["domain"], dict) else parse_domain(obj["domain"])
    if domain is None:
        raise ParseError("map has no domain header")
    comps = obj["components"]
    n = int(obj.get("n", len(comps)))
    cap = obj.get("D")
    return PolyMap([series_from_json(c, domain, n, cap) for c in comps])


def load_json(path: str | Path):
    path = Path(path)
    text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}", str(path)) from None


def load_map(path: str | Path, domain: Domain | None = None) -> PolyMap:
    try:
        return map_from_json(load_json(path), domain)
    except ParseError as exc:
        if str(path) in str(exc):
            raise
        raise ParseError(str(exc), source=str(path)) from None


def dump_json(obj) -> str:
    """Deterministic JSON text (sorted keys, TOP spelled out)."""
    return json.dumps(_encode(obj), indent=2, sort_keys=True)


def _encode(obj):
    if isinstance(obj, float) and obj == TOP:
        return "TOP"
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, TateSeries):
        return series_to_json(obj)
    if isinstance(obj, PolyMap):
        return map_to_json(obj)
    return obj
