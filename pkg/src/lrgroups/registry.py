"""The six discrete 2-arc-transitive groups of the 4-valent tree with
local action Sym(4), as amalgams ``A = L *_B R``.

Each entry carries the presentation of ``A`` verbatim, the generator subsets
of ``L`` (vertex stabiliser), ``B`` (arc stabiliser) and ``R`` (edge
stabiliser), and the subgroups the LR analysis is expected to produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentation import Presentation, PresentationError, Word, parse_presentation, parse_word_list


@dataclass(frozen=True)
class AmalgamSpec:
    name: str
    presentation: Presentation
    L_gens: tuple[str, ...]
    B_gens: tuple[str, ...]
    R_gens: tuple[str, ...]
    arc_reverser: str = "a"
    d: int = 4
    # highest s for which A can be s-arc-transitive
    max_arc_transitivity: int = 3
    arc_transitivity_label: str = "2 or 3"
    constants: dict = field(default_factory=dict, compare=False)
    # expected answers (generator lists as text over the presentation)
    x_classes: tuple[str, ...] = ()
    lr_group: str | None = None
    normaliser: str | None = None
    lr_classes: tuple[str, ...] = ()

    def __post_init__(self):
        b, l, r = set(self.B_gens), set(self.L_gens), set(self.R_gens)
        if not (b <= l and b <= r and r == b | {self.arc_reverser}):
            raise ValueError(f"{self.name}: inconsistent subgroup generator sets")

    def words(self, text: str) -> list[Word]:
        return parse_word_list(text, self.presentation.generators)

    def constant(self, name: str) -> Word:
        return self.presentation.word(self.constants[name])


_S4 = """
gens: x y s t a
rels: x^2, y^2, s^3, t^2, a^2, [x,y], s^t=s^-1, x^s=y, y^s=xy, x^t=y, [s,a], [t,a]
"""

_C3S4 = """
gens: x y c d t a
rels: x^2, y^2, c^3, d^3, t^2, a^2, [x,y], [c,d],
      [c,x], [c,y], (tc)^2, (td)^2, x^d=y, y^d=xy, x^t=y, c^a=d, [a,t]
"""

_C3S4STAR = """
gens: x y c d t a
rels: x^2, y^2, c^3, d^3, t^2, a^2=t, [x,y], [c,d],
      [c,x], [c,y], (tc)^2, (td)^2, x^d=y, y^d=xy, x^t=y, c^a=d, d^a=c^-1
"""

_S3S4 = """
gens: x y c d r s a
rels: x^2, y^2, c^3, d^3, r^2, s^2, a^2, [x,y], [c,d], [r,s], [c,x], [c,y],
      c^r=c^-1, [d,r], [c,s], d^s=d^-1, x^d=y, y^d=xy, x^s=y, [r,x], [r,y], c^a=d, s^a=r
"""

_4AT = """
gens: t c d e x y a
rels: t^2, c^3, d^3, e^3, x^2, y^2, a^2, [c,d], [c,e], [d,e]=c, [x,y], (cx)^2,
      (dx)^2, [e,x], (cy)^2, [d,y], (ey)^2, c^t=d^-1,
      y(et)^2e^-1te^-1, (et)^4x, (ca)^2, d^a=e, x^a=y
"""

_7AT = """
gens: h p q r s t b c k a
rels: h^4, p^3, q^3, r^3, s^3, t^3, b^3, c^2, k^2, a^2, kh^2,
      [p,q], [p,r], [p,s], [p,t], [p,b], [q,r], [q,s], [q,t], [q,b],
      [r,s], [r,t], [b,s], [s,t]=p, [b,r]=q, [t,b]=qrsp^-1,
      [k,c], (tk)^2, (rk)^2, [p,k], (qk)^2, (sk)^2, [b,k], (tc)^2, [r,c], (pc)^2, (qc)^2, [s,c], (bc)^2,
      [p,h], q^h=q^-1r, r^h=qr, s^h=pq^-1r^-1s^-1t^-1, t^h=p^-1qr^-1s^-1t,
      (hbc)^2, (hb)^3, p^a=q^-1, r^a=s^-1, t^a=b^-1, [c,a], k^a=ck
"""

PRESENTATION_TEXT = {
    "S4": _S4,
    "C3xS4": _C3S4,
    "C3xS4star": _C3S4STAR,
    "S3xS4": _S3S4,
    "4AT": _4AT,
    "7AT": _7AT,
}

NAMES = tuple(PRESENTATION_TEXT)
LR_ADMITTING = NAMES[:5]


def _build(name: str) -> AmalgamSpec:
    pres = parse_presentation(PRESENTATION_TEXT[name])
    if name == "S4":
        return AmalgamSpec(
            name, pres, ("x", "y", "s", "t"), ("s", "t"), ("s", "t", "a"),
            x_classes=("xy, t",),
            lr_group="xy, t, a, a^x", normaliser="x, y, t, a",
            lr_classes=("xy, t, a, a^x",),
        )
    if name in ("C3xS4", "C3xS4star"):
        return AmalgamSpec(
            name, pres, ("x", "y", "c", "d", "t"), ("c", "d", "t"), ("c", "d", "t", "a"),
            x_classes=("xy, t",),
            lr_group="xy, t, a, a^x", normaliser="x, y, t, a",
            lr_classes=("xy, t, a, a^x",),
        )
    if name == "S3xS4":
        return AmalgamSpec(
            name, pres, ("x", "y", "c", "d", "r", "s"), ("c", "d", "r", "s"), ("c", "d", "r", "s", "a"),
            x_classes=("xy, s", "xy, sr", "rxy, s", "xy, r, s"),
            lr_group="xy, s, r, a, a^x", normaliser="x, y, s, r, a",
            lr_classes=("xy, sr, a, a^x", "xy, a, a^x, s, r"),
        )
    if name == "4AT":
        return AmalgamSpec(
            name, pres, ("t", "x", "y", "c", "d", "e"), ("x", "y", "c", "d", "e"),
            ("x", "y", "c", "d", "e", "a"),
            max_arc_transitivity=4, arc_transitivity_label="4",
            x_classes=("x, y, t",),
            lr_group="t, x, y, a, (ca)^((cet)^-1)",
            normaliser="t, x, y, ete, a, (ca)^((cet)^-1)",
            lr_classes=("t, x, y, a, (ca)^((cet)^-1)",),
        )
    if name == "7AT":
        return AmalgamSpec(
            name, pres, ("h", "p", "q", "r", "s", "t", "b", "c", "k"),
            ("p", "q", "r", "s", "t", "b", "c", "k"),
            ("p", "q", "r", "s", "t", "b", "c", "k", "a"),
            max_arc_transitivity=7, arc_transitivity_label="7",
            constants={"alpha": "pcq"},
            x_classes=("pcq, (pcq)^h",),
        )
    raise KeyError(name)


_CACHE: dict[str, AmalgamSpec] = {}


class UnknownAmalgam(KeyError):
    pass


def get_amalgam(name: str) -> AmalgamSpec:
    if name not in PRESENTATION_TEXT:
        raise UnknownAmalgam(f"unknown amalgam {name!r}; expected one of {', '.join(NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]
