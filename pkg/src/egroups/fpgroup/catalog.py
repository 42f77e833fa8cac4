"""Built-in presentations."""

from __future__ import annotations

from ..coordgroup import GroupParams
from .words import Presentation, parse_presentation

THM2E_II = "x^4=y^4=[y,z]=1, x^2=z^2=[x,y], (xz)^2=y^2"
THM2E_III = "x^4=z^4=[y,z]=1, x^2=y^2=[x,y], [x,z]=z^2"

KEYS = ("coord", "thm2e_i", "thm2e_ii", "thm2e_iii", "q8xc2n")


def _monomial(names, exps) -> str:
    parts = [f"{n}^{e}" if e != 1 else n for n, e in zip(names, exps) if e]
    return " ".join(parts) or "1"


def coord_presentation_text(params: GroupParams) -> str:
    p, r, t = params.p, params.r, params.t
    M, Pt, Pr = p ** (r + t), p**t, p**r
    x = ("x", "y", "z")
    lines = [
        "gens: x y z",
        f"rel: x^{M} = y^{M} = z^{M} = 1",
        f"rel: [x^{Pt},y] = [x^{Pt},z] = [y^{Pt},x] = [y^{Pt},z] = [z^{Pt},x] = [z^{Pt},y] = 1",
    ]
    rows = params.T.rows()
    for (u, v), row in zip((("x", "y"), ("x", "z"), ("y", "z")), rows):
        lines.append(f"rel: [{u},{v}] = {_monomial(x, [Pr * e for e in row])}")
    return "\n".join(lines) + "\n"


def q8xc2n_text(n: int) -> str:
    es = [f"e{i}" for i in range(1, n + 1)]
    lines = [f"gens: a b {' '.join(es)}".rstrip(), "rel: a^4 = 1, a^2 = b^2, b^-1 a^-1 b a^-1 = 1"]
    for i, e in enumerate(es):
        lines.append(f"rel: {e}^2 = [{e},a] = [{e},b] = 1")
        for f in es[i + 1:]:
            lines.append(f"rel: [{e},{f}] = 1")
    return "\n".join(lines) + "\n"


def builtin_presentation(key: str, *, params: GroupParams | None = None, n: int | None = None) -> Presentation:
    if key == "coord":
        if params is None:
            raise ValueError("'coord' needs params")
        return parse_presentation(coord_presentation_text(params), name=params.descriptor())
    if key == "thm2e_i":
        return parse_presentation(q8xc2n_text(1), name="Q8xC2")
    if key == "thm2e_ii":
        return parse_presentation(f"gens: x y z\nrel: {THM2E_II}\n", name="thm2e_ii")
    if key == "thm2e_iii":
        return parse_presentation(f"gens: x y z\nrel: {THM2E_III}\n", name="thm2e_iii")
    if key == "q8xc2n":
        if n is None or n < 0:
            raise ValueError("'q8xc2n' needs n >= 0")
        return parse_presentation(q8xc2n_text(n), name=f"Q8xC2^{n}")
    raise KeyError(f"unknown presentation key {key!r}; known: {', '.join(KEYS)}")
