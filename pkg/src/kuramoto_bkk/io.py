"""JSON readers and writers for systems, polytopes and cell lists."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .polynomial import LaurentPolynomial, PolynomialSyntaxError, SpanSpace, format_polynomial, parse_polynomial
from .polytope import Polytope


class InputError(ValueError):
    """Bad user input; the message names the file and location."""


def _load_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def _line_of(text: str, needle: str) -> int | None:
    for k, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return k
    return None


def parse_system(data: dict, source: str = "<system>", text: str = "") -> list[SpanSpace]:
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"{source}: 'n' must be a positive integer")
    spaces = data.get("spaces")
    if not isinstance(spaces, list) or not spaces:
        raise InputError(f"{source}: 'spaces' must be a nonempty list")
    out = []
    for i, sp in enumerate(spaces):
        gens = sp.get("generators") if isinstance(sp, dict) else None
        if not isinstance(gens, list) or not gens:
            raise InputError(f"{source}: space {i}: 'generators' must be a nonempty list")
        polys = []
        for j, g in enumerate(gens):
            where = f"{source}: space {i}, generator {j}"
            if not isinstance(g, str):
                raise InputError(f"{where}: expected a polynomial string")
            line = _line_of(text, json.dumps(g)) if text else None
            if line is not None:
                where = f"{source}:{line}: space {i}, generator {j}"
            try:
                f = parse_polynomial(g, n)
            except PolynomialSyntaxError as exc:
                raise InputError(f"{where}: {exc}") from None
            if f.is_zero():
                raise InputError(f"{where}: generator is the zero polynomial")
            polys.append(f)
        out.append(SpanSpace(n, tuple(polys)))
    return out


def read_system(path: str | Path) -> list[SpanSpace]:
    data = _load_json(path)
    return parse_system(data, str(path), Path(path).read_text())


def system_to_json(spaces: Sequence[SpanSpace]) -> dict:
    return {
        "n": spaces[0].n,
        "spaces": [{"generators": [format_polynomial(g) for g in L.generators]} for L in spaces],
    }


def write_system(spaces: Sequence[SpanSpace], path: str | Path) -> None:
    Path(path).write_text(json.dumps(system_to_json(spaces), indent=2) + "\n")


def concrete_system(spaces: Sequence[SpanSpace], seed: int) -> tuple[list[LaurentPolynomial], bool]:
    """One polynomial per space: the generator itself if it is alone, else a
    random combination.  The flag tells whether any sampling happened."""
    from .polynomial import random_element

    out = []
    sampled = False
    for i, L in enumerate(spaces):
        if L.m == 1:
            out.append(L.generators[0])
        else:
            out.append(random_element(L, seed, stream=i).polynomial)
            sampled = True
    return out, sampled


def polytope_to_json(P: Polytope) -> dict:
    return P.to_json()


def polytope_from_json(data: dict) -> Polytope:
    try:
        return Polytope.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad polytope JSON: {exc}") from None


def read_polytope(path: str | Path) -> Polytope:
    return polytope_from_json(_load_json(path))

