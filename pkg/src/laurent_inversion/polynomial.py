"""Sparse Laurent polynomials with integer coefficients.

A polynomial is an immutable map from exponent tuples (all of the same
length, entries may be negative) to non-zero Python ints.  Coefficients are
arbitrary precision, which matters for periods: the coefficients of high
powers of a mirror overflow 64 bits very quickly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

DEFAULT_NAMES = ("x", "y", "z", "w")


class DimensionMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class NotDivisible(ArithmeticError):
    pass


def _add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPolynomial:
    __slots__ = ("_terms", "_dim", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None, dim: int | None = None):
        clean: dict[Exponent, int] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if dim is None:
                dim = len(e)
            elif len(e) != dim:
                raise DimensionMismatch(f"exponent {e} does not have length {dim}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean
        self._dim = 0 if dim is None else dim
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict[Exponent, int], dim: int) -> "LaurentPolynomial":
        # terms must already be clean
        p = cls.__new__(cls)
        p._terms = terms
        p._dim = dim
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPolynomial":
        e = tuple(exponent)
        return cls._raw({e: coeff} if coeff else {}, len(e))

    @classmethod
    def constant(cls, c: int, dim: int) -> "LaurentPolynomial":
        return cls._raw({(0,) * dim: c} if c else {}, dim)

    @classmethod
    def variable(cls, i: int, dim: int) -> "LaurentPolynomial":
        e = [0] * dim
        e[i] = 1
        return cls.monomial(e)

    # -- accessors ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def support(self) -> list[Exponent]:
        return sorted(self._terms)

    def coefficient(self, exponent: Sequence[int]) -> int:
        return self._terms.get(tuple(exponent), 0)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self._dim, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self._dim}

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other._dim != self._dim:
                raise DimensionMismatch(f"dimensions {self._dim} and {other._dim} differ")
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other, self._dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(out, self._dim)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()}, self._dim)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPolynomial._raw({}, self._dim)
            return LaurentPolynomial._raw({e: c * other for e, c in self._terms.items()}, self._dim)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, d: int):
        if not isinstance(d, int):
            return NotImplemented
        if d < 0:
            if not self.is_monomial():
                raise NotDivisible("only monomials have negative powers")
            (e, c), = self._terms.items()
            if abs(c) != 1:
                raise NotDivisible("monomial with non-unit coefficient is not invertible")
            return LaurentPolynomial.monomial(tuple(-v * -d for v in e), c ** -d)
        result = LaurentPolynomial.constant(1, self._dim)
        base = self
        while d:
            if d & 1:
                result = mul(result, base)
            d >>= 1
            if d:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_term() == other
        if isinstance(other, LaurentPolynomial):
            return self._dim == other._dim and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({format_polynomial(self)!r}, dim={self._dim})"

    def __str__(self):
        return format_polynomial(self)

    # -- convenience --------------------------------------------------------

    def shift(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial ``x^exponent``."""
        e0 = tuple(exponent)
        return LaurentPolynomial._raw({_add(e, e0): c for e, c in self._terms.items()}, self._dim)

    def map_exponents(self, matrix: Sequence[Sequence[int]], shift: Sequence[int] | None = None,
                      ) -> "LaurentPolynomial":
        """Send each exponent e to ``matrix @ e + shift``, collecting like terms.

        The matrix need not be square or invertible; terms that collide are
        added together.
        """
        out_dim = len(matrix)
        s = tuple(shift) if shift is not None else (0,) * out_dim
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            img = tuple(sum(a * b for a, b in zip(row, e)) + s[i] for i, row in enumerate(matrix))
            out[img] = out.get(img, 0) + c
        return LaurentPolynomial({k: v for k, v in out.items() if v}, out_dim)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a point with non-zero rational coordinates."""
        total = Fraction(0)
        for e, c in self._terms.items():
            v = Fraction(c)
            for x, k in zip(point, e):
                v *= Fraction(x) ** k
            total += v
        return total

    def newton_polytope(self):
        from .lattice import convex_hull
        if not self._terms:
            raise ValueError("the zero polynomial has no Newton polytope")
        return convex_hull(self._terms)


def mul(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    """Exact sparse product of two Laurent polynomials."""
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimensions {f.dim} and {g.dim} differ")
    if len(f) > len(g):
        f, g = g, f
    out: dict[Exponent, int] = {}
    gt = list(g._terms.items())
    for e1, c1 in f._terms.items():
        for e2, c2 in gt:
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPolynomial._raw({e: c for e, c in out.items() if c}, f.dim)


def constant_term(f: LaurentPolynomial) -> int:
    return f.constant_term()


def exact_divide(g: LaurentPolynomial, h: LaurentPolynomial) -> LaurentPolynomial:
    """Return q with ``q * h == g`` in the Laurent polynomial ring.

    Uses leading terms in lexicographic order.  Every term of the quotient
    must lie in the box ``bbox(g) - lead(h)``, which makes the loop finite;
    leaving the box, or meeting a leading coefficient that does not divide,
    raises :class:`NotDivisible`.
    """
    if g.dim != h.dim:
        raise DimensionMismatch(f"dimensions {g.dim} and {h.dim} differ")
    if h.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_zero():
        return g
    lead_e = max(h._terms)
    lead_c = h._terms[lead_e]
    n = g.dim
    lo = [min(e[i] for e in g._terms) - lead_e[i] for i in range(n)]
    hi = [max(e[i] for e in g._terms) - lead_e[i] for i in range(n)]
    rem = dict(g._terms)
    quotient: dict[Exponent, int] = {}
    ht = list(h._terms.items())
    while rem:
        e = max(rem)
        c = rem[e]
        q, r = divmod(c, lead_c)
        if r:
            raise NotDivisible(f"coefficient {c} not divisible by {lead_c}")
        qe = tuple(a - b for a, b in zip(e, lead_e))
        if any(v < l or v > u for v, l, u in zip(qe, lo, hi)):
            raise NotDivisible("quotient leaves the Newton box of the dividend")
        quotient[qe] = q
        for he, hc in ht:
            k = tuple(a + b for a, b in zip(qe, he))
            v = rem.get(k, 0) - q * hc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPolynomial._raw(quotient, n)


# ---------------------------------------------------------------------------
# periods


def classical_period(f: LaurentPolynomial, dmax: int, prune: bool = False) -> list[int]:
    """Return ``[c_0, ..., c_dmax]`` where ``c_d`` is the constant term of ``f**d``.

    With ``prune=True`` the running power only keeps exponents ``e`` for which
    ``-e`` lies in ``(dmax - d) * Newt(f)``: any other term can never be
    cancelled back to the origin by the remaining factors.  Both strategies
    return identical sequences.
    """
    if dmax < 0:
        raise ValueError("dmax must be non-negative")
    coeffs = [1]
    if dmax == 0:
        return coeffs
    if f.is_zero():
        return coeffs + [0] * dmax
    n = f.dim
    keep = None
    if prune:
        poly = f.newton_polytope()
        ineqs = poly.inequalities
        eqs = poly.equations

        def keep(e: Exponent, k: int) -> bool:
            # -e in k*P  <=>  b*k - a.e >= 0 for each facet (b, a); likewise equalities
            for b, *a in ineqs:
                if b * k - sum(x * y for x, y in zip(a, e)) < 0:
                    return False
            for b, *a in eqs:
                if b * k - sum(x * y for x, y in zip(a, e)) != 0:
                    return False
            return True

    power = LaurentPolynomial.constant(1, n)
    for d in range(1, dmax + 1):
        power = mul(power, f)
        if keep is not None:
            left = dmax - d
            power = LaurentPolynomial._raw(
                {e: c for e, c in power._terms.items() if keep(e, left)}, n)
        coeffs.append(power.constant_term())
    return coeffs


def shifted_period_term(f: LaurentPolynomial, c: int, d: int) -> int:
    """Constant term of ``(f + c)**d`` from the period of ``f`` by the binomial theorem."""
    period = classical_period(f, d)
    return sum(comb(d, j) * c ** j * period[d - j] for j in range(d + 1))


# ---------------------------------------------------------------------------
# monomial changes of variables


def _det(m: Sequence[Sequence[int]]) -> int:
    from .lattice.linalg import det
    return det(m)


def monomial_change(f: LaurentPolynomial, matrix: Sequence[Sequence[int]],
                    shift: Sequence[int] | None = None) -> LaurentPolynomial:
    """Apply ``e -> matrix @ e + shift`` to every exponent of ``f``.

    ``matrix`` must be unimodular, so the result is the same polynomial up to
    an invertible change of torus coordinates (and a monomial factor when
    ``shift`` is non-zero).
    """
    n = f.dim
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    if abs(_det(matrix)) != 1:
        raise ValueError("matrix is not unimodular")
    return f.map_exponents(matrix, shift)


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_HEADER = re.compile(r"\s*vars\s*:\s*([^;]*);")


def _tokenize(text: str, start: int) -> list[tuple[str, object, int]]:
    tokens = []
    pos = start
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace
            break
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("int", int(num), m.start(1)))
        elif name is not None:
            tokens.append(("var", name, m.start(2)))
        elif sym is not None:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}", m.start(3))
            tokens.append((sym, sym, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, variables: list[str]):
        self.tokens = tokens
        self.i = 0
        self.index = {v: k for k, v in enumerate(variables)}
        self.n = len(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> LaurentPolynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> LaurentPolynomial:
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            if self.take()[0] == "*":
                value = value * self.factor()
            else:
                value = value * self.divisor()
        return value

    def exponent(self) -> int:
        if self.peek()[0] != "^":
            return 1
        self.take()
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        return sign * self.take("int")[1]

    def var(self, name: str, pos: int) -> list[int]:
        if name not in self.index:
            raise ParseError(f"variable {name!r} is not declared", pos)
        e = [0] * self.n
        e[self.index[name]] = 1
        return e

    def factor(self) -> LaurentPolynomial:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return LaurentPolynomial.constant(value, self.n)
        if kind == "var":
            self.take()
            e = self.var(value, pos)
            k = self.exponent()
            return LaurentPolynomial.monomial([v * k for v in e])
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            k_pos = self.peek()[2]
            k = self.exponent()
            if k < 0 and not (inner.is_monomial() and abs(next(iter(inner.terms.values()))) == 1):
                raise ParseError("negative powers are only allowed for monomials", k_pos)
            return inner ** k
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", pos)

    def divisor(self) -> LaurentPolynomial:
        kind, value, pos = self.peek()
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            inner = inner ** self.exponent()
            if not inner.is_monomial() or abs(next(iter(inner.terms.values()))) != 1:
                raise ParseError("division is only allowed by a monomial", pos)
            return inner ** -1
        if kind == "int":
            if value == 1:
                self.take()
                return LaurentPolynomial.constant(1, self.n)
            raise ParseError("division by an integer is not allowed", pos)
        if kind != "var":
            raise ParseError("expected a monomial after '/'", pos)
        e = [0] * self.n
        while True:
            _, name, p = self.take("var")
            k = self.exponent()
            e = [a + k * b for a, b in zip(e, self.var(name, p))]
            if self.peek()[0] != "*" or self.tokens[self.i + 1][0] != "var":
                break
            self.take()
        return LaurentPolynomial.monomial([-v for v in e])


def parse_with_variables(text: str, variables: Sequence[str] | None = None,
                         ) -> tuple[LaurentPolynomial, list[str]]:
    """Parse ``text`` and also return the variable order that was used.

    Variables are ordered by first appearance, unless the text starts with a
    header ``vars: x,y,z;`` or ``variables`` is passed; in those cases any
    other name is an error.
    """
    start = 0
    m = _HEADER.match(text)
    if m:
        declared = [v.strip() for v in m.group(1).split(",") if v.strip()]
        if variables is not None and list(variables) != declared:
            raise ParseError(f"header declares {declared}, expected {list(variables)}", 0)
        variables = declared
        start = m.end()
    tokens = _tokenize(text, start)
    if variables is None:
        seen: dict[str, None] = {}
        for kind, value, _ in tokens:
            if kind == "var":
                seen.setdefault(value, None)
        variables = list(seen)
    variables = list(variables)
    if len(set(variables)) != len(variables):
        raise ParseError("repeated variable name", 0)
    if tokens[0][0] == "end":
        raise ParseError("empty expression", tokens[0][2])
    parser = _Parser(tokens, variables)
    result = parser.expr()
    parser.take("end")
    return result, variables


def parse(text: str, variables: Sequence[str] | None = None) -> LaurentPolynomial:
    return parse_with_variables(text, variables)[0]


def default_variables(n: int) -> list[str]:
    if n <= len(DEFAULT_NAMES):
        return list(DEFAULT_NAMES[:n])
    return [f"x{i}" for i in range(n)]


def _monomial_text(names: Sequence[str], e: Exponent) -> tuple[str, str]:
    num, den = [], []
    for name, k in zip(names, e):
        if k:
            target = num if k > 0 else den
            target.append(name if abs(k) == 1 else f"{name}^{abs(k)}")
    return "*".join(num), "*".join(den)


def format_polynomial(f: LaurentPolynomial, variables: Sequence[str] | None = None,
                      header: bool = False) -> str:
    """Render ``f`` in the grammar accepted by :func:`parse`.

    Denominators with more than one factor are parenthesised, so the output
    reads the same way under the usual precedence rules.
    """
    names = list(variables) if variables is not None else default_variables(f.dim)
    if len(names) != f.dim:
        raise DimensionMismatch(f"{len(names)} names for {f.dim} variables")
    pieces = []
    for e, c in sorted(f.items(), key=lambda t: (-sum(abs(v) for v in t[0]), t[0]), reverse=True):
        num, den = _monomial_text(names, e)
        a = abs(c)
        if num:
            body = num if a == 1 else f"{a}*{num}"
        else:
            body = str(a)
        if den:
            body += f"/({den})" if "*" in den else f"/{den}"
        pieces.append(("-" if c < 0 else "+", body))
    if not pieces:
        text = "0"
    else:
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
    if header:
        text = f"vars: {','.join(names)}; {text}"
    return text


def dumps_records(f: LaurentPolynomial) -> str:
    """Canonical form: one ``c e1 ... en`` line per term, sorted by exponent."""
    return "".join(f"{c} {' '.join(map(str, e))}".rstrip() + "\n" for e, c in f)


def loads_records(text: str, dim: int | None = None) -> LaurentPolynomial:
    terms: dict[Exponent, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            c, *e = (int(v) for v in line.split())
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers") from None
        if dim is None:
            dim = len(e)
        elif len(e) != dim:
            raise DimensionMismatch(f"line {lineno}: expected {dim} exponents")
        e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return LaurentPolynomial(terms, dim)


def sum_polynomials(polys: Iterable[LaurentPolynomial], dim: int) -> LaurentPolynomial:
    total = LaurentPolynomial.constant(0, dim)
    for p in polys:
        total = total + p
    return total
