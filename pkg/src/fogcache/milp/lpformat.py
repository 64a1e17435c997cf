"""Reader and writer for the CPLEX LP text format (the subset this package emits).

Writer layout, fixed so that output is byte-for-byte reproducible::

    \\Problem name: <name>
    Minimize
     obj: <terms>
    Subject To
     <name>: <terms> <sense> <rhs>
    Bounds
     <one line per variable, sorted by name>
    Generals
     <integer variables, sorted by name>
    End

Terms are written ``+ 2.5 x`` / ``- y`` with variables sorted by name and
numbers in shortest round-trip form.  Long expressions wrap onto
continuation lines that start with a sign.  Characters that are not legal
in LP names are escaped as ``~XX`` (hex code point; ``~uXXXXXX`` beyond
ASCII) and unescaped by the reader.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .problem import CONTINUOUS, EQ, GE, INTEGER, LE, Constraint, MilpProblem, Variable


class LpSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnsupportedLpFeature(LpSyntaxError):
    pass


_LEGAL = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
             "!\"#$%&()/,.;?@_`'{}|")
_MAX_LINE = 250

_SECTIONS = {
    "minimize": "min", "minimum": "min", "min": "min",
    "maximize": "max", "maximum": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "bound": "bounds",
    "generals": "gen", "general": "gen", "gen": "gen", "integers": "gen",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "end": "end",
    "semi-continuous": "semi", "semis": "semi", "semi": "semi",
    "sos": "sos", "pwl": "pwl", "lazy constraints": "lazy", "user cuts": "cuts",
}
_UNSUPPORTED_SECTIONS = {
    "max": "maximization objectives",
    "semi": "semi-continuous variables",
    "sos": "SOS constraints",
    "pwl": "piecewise-linear constraints",
    "lazy": "lazy constraints",
    "cuts": "user cuts",
}
_SENSE_TOKENS = {"<=": LE, "=<": LE, "<": LE, ">=": GE, "=>": GE, ">": GE, "=": EQ}


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def escape_name(name: str) -> str:
    if not name:
        raise ValueError("empty names cannot be written")
    out = []
    for ch in name:
        if ch in _LEGAL:
            out.append(ch)
        elif ord(ch) < 128:
            out.append(f"~{ord(ch):02X}")
        else:
            out.append(f"~u{ord(ch):06X}")
    text = "".join(out)
    first = name[0]
    if (first.isdigit() or first == "." or _is_number(text)
            or text.lower() in _SECTIONS or text.lower() == "free"):
        head = f"~{ord(first):02X}" if ord(first) < 128 else f"~u{ord(first):06X}"
        text = head + text[len(out[0]):]
    return text


_ESCAPE_RE = re.compile(r"~u([0-9A-F]{6})|~([0-9A-F]{2})")


def unescape_name(text: str) -> str:
    def repl(m):
        return chr(int(m.group(1) or m.group(2), 16))

    leftover = _ESCAPE_RE.sub("", text)
    if "~" in leftover:
        raise ValueError(f"bad escape sequence in {text!r}")
    return _ESCAPE_RE.sub(repl, text)


def format_number(value: float) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _format_terms(label: str, terms, tail: str = "") -> list[str]:
    pieces = []
    for var, coef in sorted(terms, key=lambda t: escape_name(t[0])):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        name = escape_name(var)
        pieces.append(f"{sign} {name}" if mag == 1.0 else f"{sign} {format_number(mag)} {name}")
    if tail:
        pieces.append(tail)
    lines = []
    current = f" {label}:"
    for piece in pieces:
        if len(current) + 1 + len(piece) > _MAX_LINE and current.strip() and not current.endswith(":"):
            lines.append(current)
            current = "   " + piece
        else:
            current = f"{current} {piece}"
    lines.append(current)
    return lines


def _format_bound(var: Variable) -> str:
    name = escape_name(var.name)
    lo, hi = var.lower, var.upper
    if lo == hi:
        return f" {name} = {format_number(lo)}"
    if lo == -math.inf and hi == math.inf:
        return f" {name} free"
    if hi == math.inf:
        return f" {name} >= {format_number(lo)}"
    lo_text = "-inf" if lo == -math.inf else format_number(lo)
    return f" {lo_text} <= {name} <= {format_number(hi)}"


def format_lp(problem: MilpProblem) -> str:
    lines = [f"\\Problem name: {problem.name}", "Minimize"]
    lines += _format_terms("obj", problem.objective)
    lines.append("Subject To")
    for con in problem.constraints:
        tail = f"{con.sense} {format_number(con.rhs)}"
        lines += _format_terms(escape_name(con.name), con.terms, tail)
    lines.append("Bounds")
    ordered = sorted(problem.variables, key=lambda v: escape_name(v.name))
    lines += [_format_bound(v) for v in ordered]
    integers = [escape_name(v.name) for v in ordered if v.is_integer]
    if integers:
        lines.append("Generals")
        current = ""
        for name in integers:
            if current and len(current) + 1 + len(name) > _MAX_LINE:
                lines.append(current)
                current = ""
            current = f"{current} {name}"
        lines.append(current)
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(problem: MilpProblem, path: str | Path) -> None:
    Path(path).write_bytes(format_lp(problem).encode("utf-8"))


def _parse_expression(tokens: list[str], lineno: int) -> list[tuple[str, float]]:
    terms = []
    sign = 1.0
    coef = None
    pending = False
    for tok in tokens:
        if tok in ("+", "-"):
            if coef is not None:
                raise LpSyntaxError(lineno, f"sign {tok!r} after a coefficient")
            sign = sign * (-1.0 if tok == "-" else 1.0)
            pending = True
        elif _is_number(tok):
            if coef is not None:
                raise LpSyntaxError(lineno, f"two coefficients in a row near {tok!r}")
            coef = float(tok)
            pending = True
        else:
            if "[" in tok or "]" in tok or "^" in tok:
                raise UnsupportedLpFeature(lineno, "quadratic terms are not supported")
            if tok.startswith("->") or tok == "->":
                raise UnsupportedLpFeature(lineno, "indicator constraints are not supported")
            if any(ch in tok for ch in "<>=:*"):
                raise LpSyntaxError(lineno, f"unexpected token {tok!r}")
            terms.append((unescape_name(tok), sign * (1.0 if coef is None else coef)))
            sign, coef, pending = 1.0, None, False
    if pending:
        raise LpSyntaxError(lineno, "expression ends with a dangling sign or coefficient")
    return terms


def _parse_number(tokens: list[str], lineno: int) -> float:
    text = "".join(tokens)
    try:
        value = float(text)
    except ValueError:
        raise LpSyntaxError(lineno, f"expected a number, got {' '.join(tokens)!r}") from None
    return value


def _parse_bound_value(tok: str, lineno: int) -> float:
    low = tok.lower()
    if low in ("-inf", "-infinity"):
        return -math.inf
    if low in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    return _parse_number([tok], lineno)


def _statements(lines):
    """Group (lineno, text) pairs into statements; sign-led lines continue one."""
    stmt = None
    for lineno, text in lines:
        if stmt is not None and text[:1] in "+-" and not _is_number(text.split()[0]):
            stmt[1].append(text)
            continue
        if stmt is not None:
            yield stmt[0], " ".join(stmt[1])
        stmt = (lineno, [text])
    if stmt is not None:
        yield stmt[0], " ".join(stmt[1])


def parse_lp(path: str | Path) -> MilpProblem:
    return parse_lp_text(Path(path).read_text(encoding="utf-8"))


def parse_lp_text(text: str) -> MilpProblem:
    name = "problem"
    sections: dict[str, list[tuple[int, str]]] = {k: [] for k in ("min", "st", "bounds", "gen", "bin")}
    current = None
    ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("\\"):
            m = re.match(r"\\\s*Problem name:\s*(.*)$", raw)
            if m:
                name = m.group(1).strip() or name
            continue
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise LpSyntaxError(lineno, "content after End")
        key = _SECTIONS.get(" ".join(line.lower().split()))
        if key is not None:
            if key in _UNSUPPORTED_SECTIONS:
                raise UnsupportedLpFeature(lineno, f"{_UNSUPPORTED_SECTIONS[key]} are not supported")
            if key == "end":
                ended = True
            current = key
            continue
        if current is None:
            raise LpSyntaxError(lineno, "content before the objective section")
        sections[current].append((lineno, line))

    objective: list[tuple[str, float]] = []
    for count, (lineno, stmt) in enumerate(_statements(sections["min"])):
        if count:
            raise LpSyntaxError(lineno, "more than one objective")
        if ":" in stmt:
            stmt = stmt.split(":", 1)[1]
        objective = _parse_expression(stmt.split(), lineno)

    constraints = []
    for lineno, stmt in _statements(sections["st"]):
        if ":" not in stmt:
            raise LpSyntaxError(lineno, "constraints must be named ('name: ...')")
        label, body = stmt.split(":", 1)
        tokens = body.split()
        positions = [i for i, tok in enumerate(tokens) if any(ch in tok for ch in "<>=")]
        if len(positions) != 1:
            if len(positions) > 1:
                raise UnsupportedLpFeature(lineno, "ranged constraints are not supported")
            raise LpSyntaxError(lineno, "missing relation operator")
        pos = positions[0]
        if tokens[pos] not in _SENSE_TOKENS:
            raise LpSyntaxError(lineno, f"malformed relation token {tokens[pos]!r}")
        terms = _parse_expression(tokens[:pos], lineno)
        rhs = _parse_number(tokens[pos + 1:], lineno)
        constraints.append(
            Constraint(unescape_name(label.strip()), tuple(terms), _SENSE_TOKENS[tokens[pos]], rhs)
        )

    bounds: dict[str, list[float]] = {}
    order: list[str] = []

    def declare(var):
        if var not in bounds:
            bounds[var] = [0.0, math.inf]
            order.append(var)
        return bounds[var]

    for var, _ in objective:
        declare(var)
    for con in constraints:
        for var, _ in con.terms:
            declare(var)

    for lineno, stmt in _statements(sections["bounds"]):
        toks = stmt.split()
        if len(toks) == 2 and toks[1].lower() == "free":
            b = declare(unescape_name(toks[0]))
            b[0], b[1] = -math.inf, math.inf
        elif len(toks) == 3 and toks[1] in _SENSE_TOKENS:
            b = declare(unescape_name(toks[0]))
            value = _parse_bound_value(toks[2], lineno)
            sense = _SENSE_TOKENS[toks[1]]
            if sense == EQ:
                b[0] = b[1] = value
            elif sense == GE:
                b[0] = value
            else:
                b[1] = value
        elif len(toks) == 5 and _SENSE_TOKENS.get(toks[1]) == LE and _SENSE_TOKENS.get(toks[3]) == LE:
            b = declare(unescape_name(toks[2]))
            b[0] = _parse_bound_value(toks[0], lineno)
            b[1] = _parse_bound_value(toks[4], lineno)
        else:
            raise LpSyntaxError(lineno, f"unrecognized bound {stmt!r}")

    kinds = {}
    for lineno, stmt in sections["gen"]:
        for tok in stmt.split():
            var = unescape_name(tok)
            declare(var)
            kinds[var] = INTEGER
    for lineno, stmt in sections["bin"]:
        for tok in stmt.split():
            var = unescape_name(tok)
            b = declare(var)
            kinds[var] = INTEGER
            b[0], b[1] = max(b[0], 0.0), min(b[1], 1.0)

    variables = tuple(
        Variable(var, kinds.get(var, CONTINUOUS), bounds[var][0], bounds[var][1])
        for var in sorted(order, key=escape_name)
    )
    return MilpProblem(variables, tuple(constraints), tuple(objective), name)
