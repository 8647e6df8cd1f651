"""Reader and writer for the subset of the SteinLib STP format we need.

Supported: ``SECTION Graph`` with ``Nodes``, ``Edges`` and ``E u v w`` lines,
``SECTION Terminals`` with ``Terminals`` and ``T v`` lines, and an optional
``Root v``.  Weights may be integers or ``p/q`` rationals.  STP vertex ids
are 1-based; instances use 0-based ids.  Other sections are skipped.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Instance, ValidationError, validate_instance


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        if "/" in tok:
            p, q = tok.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad edge weight {tok!r}", lineno) from None


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def parse_stp(text: str) -> Instance:
    n = None
    declared_edges = None
    edges: list[tuple[int, int, Fraction, int]] = []
    terminals: list[tuple[int, int]] = []
    root = None
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        key = toks[0].lower()
        if key == "section":
            if len(toks) < 2:
                raise ParseError("SECTION without a name", lineno)
            section = toks[1].lower()
            continue
        if key in ("end", "eof"):
            section = None
            continue
        if section == "graph":
            if key == "nodes":
                n = _parse_int(toks[1], lineno)
            elif key == "edges":
                declared_edges = _parse_int(toks[1], lineno)
            elif key in ("e", "a"):
                if len(toks) != 4:
                    raise ParseError("edge line needs 'E u v w'", lineno)
                u, v = _parse_int(toks[1], lineno), _parse_int(toks[2], lineno)
                edges.append((u, v, _parse_weight(toks[3], lineno), lineno))
            else:
                raise ParseError(f"unknown Graph keyword {toks[0]!r}", lineno)
        elif section == "terminals":
            if key == "terminals":
                continue
            if key == "t":
                terminals.append((_parse_int(toks[1], lineno), lineno))
            elif key == "root":
                root = (_parse_int(toks[1], lineno), lineno)
            else:
                raise ParseError(f"unknown Terminals keyword {toks[0]!r}", lineno)
        elif key == "root":
            root = (_parse_int(toks[1], lineno), lineno)

    if n is None:
        raise ParseError("missing 'Nodes' in SECTION Graph")
    if declared_edges is not None and declared_edges != len(edges):
        raise ParseError(f"'Edges {declared_edges}' but {len(edges)} edge lines")
    for u, v, _, lineno in edges:
        for w in (u, v):
            if not 1 <= w <= n:
                raise ParseError(f"vertex {w} out of range 1..{n}", lineno)
    for t, lineno in terminals:
        if not 1 <= t <= n:
            raise ParseError(f"terminal {t} out of range 1..{n}", lineno)
    if root is not None and not 1 <= root[0] <= n:
        raise ParseError(f"root {root[0]} out of range 1..{n}", root[1])
    return validate_instance(
        n,
        [(u - 1, v - 1, w) for u, v, w, _ in edges],
        [t - 1 for t, _ in terminals],
        None if root is None else root[0] - 1,
    )


def _fmt_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def serialize_stp(inst: Instance) -> str:
    lines = [
        "33D32945 STP File, STP Format Version 1.0",
        "",
        "SECTION Graph",
        f"Nodes {inst.n}",
        f"Edges {len(inst.edges)}",
    ]
    lines += [f"E {u + 1} {v + 1} {_fmt_weight(c)}" for u, v, c in inst.edges]
    lines += ["END", "", "SECTION Terminals", f"Terminals {len(inst.terminals)}"]
    lines += [f"T {t + 1}" for t in sorted(inst.terminals)]
    lines += [f"Root {inst.root + 1}", "END", "", "EOF", ""]
    return "\n".join(lines)


__all__ = ["ParseError", "ValidationError", "parse_stp", "serialize_stp"]
