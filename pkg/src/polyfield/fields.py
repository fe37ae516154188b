"""Planar polynomial vector fields in the logarithmic basis.

A field is stored as a finite sum over lattice points ``(m, n)``:

    sum of  x^m y^n (a * x d/dx + b * y d/dy)

with rational coefficient pairs ``(a, b)``.  Admissibility keeps every term
polynomial in Cartesian components: an ``a`` coefficient requires ``m >= -1``
and ``n >= 0``; a ``b`` coefficient requires ``m >= 0`` and ``n >= -1``.
Converting a polynomial pair (P, Q) = (dx, dy) always lands inside these
constraints, and the zero pair is dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

LatticePoint = tuple[int, int]
CoefPair = tuple[Fraction, Fraction]


class FieldError(ValueError):
    """Base class for field-construction problems."""


class InternalConsistencyError(RuntimeError):
    """A structural fact the theory guarantees failed to hold at runtime."""


class AdmissibilityError(FieldError):
    pass


class ParseError(FieldError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True, order=True)
class WeightVector:
    """A pair of positive coprime integer weights."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("weights must be positive integers")
        from math import gcd

        if gcd(self.alpha, self.beta) != 1:
            raise ValueError("weights must be coprime")

    def level(self, p: LatticePoint) -> int:
        return self.alpha * p[0] + self.beta * p[1]

    def as_tuple(self) -> tuple[int, int]:
        return (self.alpha, self.beta)


def _check_admissible(p: LatticePoint, a: Fraction, b: Fraction) -> None:
    m, n = p
    if a != 0 and (m < -1 or n < 0):
        raise AdmissibilityError(
            f"coefficient a at {p} would make the x-component non-polynomial"
        )
    if b != 0 and (m < 0 or n < -1):
        raise AdmissibilityError(
            f"coefficient b at {p} would make the y-component non-polynomial"
        )


class PlanarField:
    """Immutable planar field in the logarithmic basis."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[LatticePoint, CoefPair]):
        cleaned: dict[LatticePoint, CoefPair] = {}
        for p, (a, b) in terms.items():
            p = (int(p[0]), int(p[1]))
            a, b = Fraction(a), Fraction(b)
            if a == 0 and b == 0:
                continue
            _check_admissible(p, a, b)
            cleaned[p] = (a, b)
        self._terms = dict(sorted(cleaned.items()))

    # -- construction ------------------------------------------------------

    @classmethod
    def from_components(cls, P: Mapping, Q: Mapping) -> "PlanarField":
        """Build from Cartesian components dx = P(x, y), dy = Q(x, y)."""
        terms: dict[LatticePoint, list[Fraction]] = {}
        for (i, j), c in P.items():
            key = (i - 1, j)
            terms.setdefault(key, [Fraction(0), Fraction(0)])[0] += Fraction(c)
        for (i, j), c in Q.items():
            key = (i, j - 1)
            terms.setdefault(key, [Fraction(0), Fraction(0)])[1] += Fraction(c)
        return cls({k: (v[0], v[1]) for k, v in terms.items()})

    @classmethod
    def zero(cls) -> "PlanarField":
        return cls({})

    # -- access ------------------------------------------------------------

    def items(self) -> Iterator[tuple[LatticePoint, CoefPair]]:
        return iter(self._terms.items())

    def terms(self) -> dict[LatticePoint, CoefPair]:
        return dict(self._terms)

    def coeffs(self, p: LatticePoint) -> CoefPair:
        return self._terms.get(p, (Fraction(0), Fraction(0)))

    def support(self) -> tuple[LatticePoint, ...]:
        return tuple(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def components(self) -> tuple[dict, dict]:
        """Cartesian components (P, Q) as bivariate coefficient dicts."""
        P: dict = {}
        Q: dict = {}
        for (m, n), (a, b) in self._terms.items():
            if a != 0:
                P[(m + 1, n)] = P.get((m + 1, n), Fraction(0)) + a
            if b != 0:
                Q[(m, n + 1)] = Q.get((m, n + 1), Fraction(0)) + b
        return ({k: v for k, v in P.items() if v != 0},
                {k: v for k, v in Q.items() if v != 0})

    def evaluate(self, x, y) -> tuple[Fraction, Fraction]:
        x, y = Fraction(x), Fraction(y)
        P, Q = self.components()
        pv = sum((c * x**i * y**j for (i, j), c in P.items()), Fraction(0))
        qv = sum((c * x**i * y**j for (i, j), c in Q.items()), Fraction(0))
        return pv, qv

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "PlanarField") -> "PlanarField":
        out = {p: [a, b] for p, (a, b) in self._terms.items()}
        for p, (a, b) in other._terms.items():
            cur = out.setdefault(p, [Fraction(0), Fraction(0)])
            cur[0] += a
            cur[1] += b
        return PlanarField({p: (v[0], v[1]) for p, v in out.items()})

    def scaled(self, c) -> "PlanarField":
        c = Fraction(c)
        return PlanarField({p: (c * a, c * b) for p, (a, b) in self._terms.items()})

    def restricted(self, points: Iterable[LatticePoint]) -> "PlanarField":
        keep = set(points)
        return PlanarField({p: ab for p, ab in self._terms.items() if p in keep})

    def __eq__(self, other) -> bool:
        return isinstance(other, PlanarField) and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        return f"PlanarField({format_field(self)!r})"


# ---------------------------------------------------------------------------
# parsing
#
#   field := "dx" "=" poly ";" "dy" "=" poly
#   poly  := sign? term (("+" | "-") term)*
#   term  := coeff? ("*"? var ("^" uint)?)*
#   coeff := uint ("/" uint)?
#
# Variables are the single letters x and y; juxtaposed letters multiply
# ("xy^2" is x * y^2).  Repeated variables accumulate exponents.

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "=;+-*/^":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1]!r}", tok[2])
        return tok

    def parse_field(self) -> PlanarField:
        self._expect_name("dx")
        self.expect("=", "'='")
        P = self.parse_poly()
        self.expect(";", "';'")
        self._expect_name("dy")
        self.expect("=", "'='")
        Q = self.parse_poly()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return PlanarField.from_components(P, Q)

    def _expect_name(self, name: str):
        tok = self.advance()
        if tok[0] != "name" or tok[1] != name:
            raise ParseError(f"expected '{name}', found {tok[1]!r}", tok[2])

    def parse_poly(self) -> dict:
        out: dict = {}
        sign = 1
        tok = self.peek()
        if tok[0] in "+-":
            self.advance()
            sign = -1 if tok[0] == "-" else 1
        self._accumulate(out, sign)
        while True:
            tok = self.peek()
            if tok[0] in "+-":
                self.advance()
                self._accumulate(out, -1 if tok[0] == "-" else 1)
            else:
                break
        return {k: v for k, v in out.items() if v != 0}

    def _accumulate(self, out: dict, sign: int):
        coeff, (i, j) = self.parse_term()
        key = (i, j)
        out[key] = out.get(key, Fraction(0)) + sign * coeff

    def parse_term(self) -> tuple[Fraction, tuple[int, int]]:
        tok = self.peek()
        coeff = Fraction(1)
        have_any = False
        if tok[0] == "num":
            self.advance()
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.advance()
                den_tok = self.expect("num", "a denominator")
                den = int(den_tok[1])
                if den == 0:
                    raise ParseError("zero denominator", den_tok[2])
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            have_any = True
        i = j = 0
        while True:
            tok = self.peek()
            if tok[0] == "*":
                self.advance()
                tok = self.peek()
                if tok[0] != "name":
                    raise ParseError(f"expected a variable after '*', found {tok[1]!r}", tok[2])
            if tok[0] != "name":
                break
            self.advance()
            letters = tok[1]
            if letters in ("dx", "dy"):
                raise ParseError(f"unexpected keyword '{letters}' inside a polynomial", tok[2])
            if any(ch not in "xy" for ch in letters):
                raise ParseError(f"unknown variable {letters!r}", tok[2])
            for k, ch in enumerate(letters):
                exp = 1
                if k == len(letters) - 1 and self.peek()[0] == "^":
                    self.advance()
                    exp_tok = self.expect("num", "an exponent")
                    exp = int(exp_tok[1])
                if ch == "x":
                    i += exp
                else:
                    j += exp
            have_any = True
        if not have_any:
            tok = self.peek()
            raise ParseError(f"expected a term, found {tok[1]!r}", tok[2])
        return coeff, (i, j)


def parse_field(text: str) -> PlanarField:
    """Parse ``dx = <poly>; dy = <poly>`` into a :class:`PlanarField`."""
    return _Parser(text).parse_field()


# ---------------------------------------------------------------------------
# printing


def _format_poly(P: Mapping) -> str:
    if not P:
        return "0"
    parts = []
    for (i, j), c in sorted(P.items(), reverse=True):
        factors = []
        if i:
            factors.append("x" if i == 1 else f"x^{i}")
        if j:
            factors.append("y" if j == 1 else f"y^{j}")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        parts.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(parts)
    if text.startswith("+ "):
        return text[2:]
    return "-" + text[2:]


def format_field(f: PlanarField) -> str:
    """Canonical text form; ``parse_field`` round-trips it exactly."""
    P, Q = f.components()
    return f"dx = {_format_poly(P)}; dy = {_format_poly(Q)}"


# ---------------------------------------------------------------------------
# quasi-homogeneous structure


def decompose(f: PlanarField, w: WeightVector) -> list[tuple[int, PlanarField]]:
    """Split into weighted-level slices, ascending by level."""
    buckets: dict[int, dict] = {}
    for p, ab in f.items():
        buckets.setdefault(w.level(p), {})[p] = ab
    return [(d, PlanarField(buckets[d])) for d in sorted(buckets)]


def max_level(f: PlanarField, w: WeightVector) -> int:
    if f.is_zero:
        raise FieldError("zero field has no weighted levels")
    return max(w.level(p) for p in f.support())


def top_slice(f: PlanarField, w: WeightVector) -> PlanarField:
    d = max_level(f, w)
    return PlanarField({p: ab for p, ab in f.items() if w.level(p) == d})


# ---------------------------------------------------------------------------
# shear


def _binomial(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def _subst_x_plus_ly(poly: Mapping, lam: Fraction) -> dict:
    """Substitute x -> x + lam*y in a bivariate coefficient dict."""
    out: dict = {}
    for (i, j), c in poly.items():
        for k in range(i + 1):
            key = (i - k, j + k)
            add = c * _binomial(i, k) * lam**k
            v = out.get(key, Fraction(0)) + add
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
    return out


def shear(f: PlanarField, lam) -> PlanarField:
    """Push the field through the unimodular change x~ = x - lam*y, y~ = y.

    In the new coordinates the components become
    P~ = P(x + lam*y, y) - lam*Q(x + lam*y, y) and Q~ = Q(x + lam*y, y).
    """
    lam = Fraction(lam)
    P, Q = f.components()
    Pn = _subst_x_plus_ly(P, lam)
    Qn = _subst_x_plus_ly(Q, lam)
    Pt: dict = dict(Pn)
    for k, c in Qn.items():
        v = Pt.get(k, Fraction(0)) - lam * c
        if v == 0:
            Pt.pop(k, None)
        else:
            Pt[k] = v
    return PlanarField.from_components(Pt, Qn)


def make_favorable(f: PlanarField) -> tuple[PlanarField, Fraction]:
    """Shear until the Newton polytope gains a negative-slope top segment
    whose arrival vertex sits in column m = -1 or m = 0.

    Returns ``(field, lambda)`` with lambda = 0 when the input already
    qualifies.  Raises :class:`FieldError` when no shear can help (fields
    of the form a*y^n d/dx keep a one-point support under every shear).
    """
    from . import polytope as _polytope

    if f.is_zero:
        raise FieldError("zero field has no Newton polytope")

    def favorable_with_vertex(g: PlanarField) -> bool:
        p = _polytope.build_polytope(g)
        if not _polytope.is_favorable(p):
            return False
        feats = _polytope.main_features(p)
        return feats.ph[0] in (-1, 0) and feats.ph[1] >= 0

    if favorable_with_vertex(f):
        return f, Fraction(0)
    for k in range(1, 51):
        for lam in (Fraction(k), Fraction(-k)):
            g = shear(f, lam)
            if favorable_with_vertex(g):
                return g, lam
    raise FieldError("no shear with |lambda| <= 50 makes the polytope favorable")
