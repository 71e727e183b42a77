"""Exact Laurent polynomials in one variable q with integer coefficients.

Quantum integers, factorials and binomials live here too.  Everything is
exact; there is no floating point anywhere in the package.
"""
from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Mapping


class DivisionError(ArithmeticError):
    """Raised when an exact division in Z[q, q^-1] is impossible."""


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} (column {pos + 1})" if text else message)


class LaurentPoly:
    """Sparse Laurent polynomial stored as a map exponent -> nonzero int.

    Instances are immutable and hashable.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        c: dict[int, int] = {}
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, v in items:
                if not isinstance(e, int) or not isinstance(v, int):
                    raise TypeError("exponents and coefficients must be ints")
                s = c.get(e, 0) + v
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __reduce__(self):
        return (LaurentPoly, (dict(self._c),))

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        # c must already be free of zero coefficients
        p = cls.__new__(cls)
        object.__setattr__(p, "_c", c)
        object.__setattr__(p, "_hash", None)
        return p

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    # -- inspection
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self._c.items()))
            object.__setattr__(self, "_hash", h)
        return h

    # -- ring operations
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                del c[e]
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if self.is_monomial():
                (e, v), = self._c.items()
                if v in (1, -1):
                    return LaurentPoly.monomial(e * k, v ** -k)
            raise DivisionError("only unit monomials have negative powers")
        r = ONE
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def shift(self, exponent: int) -> "LaurentPoly":
        """Multiply by q**exponent."""
        return LaurentPoly._raw({e + exponent: v for e, v in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution q -> q^-1."""
        return LaurentPoly._raw({-e: v for e, v in self._c.items()})

    def at(self, x):
        """Evaluate at q = x (x may be an int or Fraction)."""
        return sum(v * x ** e for e, v in self._c.items())

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        return exact_div(self, other)

    def __floordiv__(self, other):
        return exact_div(self, _coerce(other))

    # -- text
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"LaurentPoly({to_text(self)!r})"

    def to_json(self) -> dict[str, int]:
        return {str(e): v for e, v in self.items()}

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict):
            raise PolyParseError("polynomial JSON must be an object")
        out = {}
        for k, v in obj.items():
            try:
                e = int(k)
            except ValueError:
                raise PolyParseError(f"bad exponent key {k!r}") from None
            if not isinstance(v, int) or isinstance(v, bool):
                raise PolyParseError(f"coefficient for {k!r} is not an integer")
            out[e] = v
        return cls(out)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)


def _coerce(x) -> LaurentPoly | None:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return LaurentPoly.const(x)
    return None


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1)


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def scale_by_monomial(p: LaurentPoly, exponent: int) -> LaurentPoly:
    return p.shift(exponent)


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient num/den in Z[q, q^-1]; raise DivisionError otherwise."""
    if den.is_zero():
        raise DivisionError("division by zero polynomial")
    if num.is_zero():
        return ZERO
    rem = dict(num._c)
    dtop = den.max_exp()
    dlead = den._c[dtop]
    floor = num.min_exp() - den.min_exp()
    quot: dict[int, int] = {}
    while rem:
        top = max(rem)
        if top - dtop < floor:
            raise DivisionError(f"{num} is not divisible by {den}")
        c, r = divmod(rem[top], dlead)
        if r:
            raise DivisionError(f"{num} is not divisible by {den}")
        s = top - dtop
        quot[s] = c
        for e, v in den._c.items():
            k = e + s
            x = rem.get(k, 0) - c * v
            if x:
                rem[k] = x
            else:
                rem.pop(k, None)
    return LaurentPoly._raw(quot)


# -- quantum numbers

@lru_cache(maxsize=None)
def qnum(a: int) -> LaurentPoly:
    """Balanced quantum integer [a]; [0] = 0 and [-a] = -[a]."""
    if a == 0:
        return ZERO
    if a < 0:
        return -qnum(-a)
    return LaurentPoly._raw({a - 1 - 2 * i: 1 for i in range(a)})


@lru_cache(maxsize=None)
def qfac(b: int) -> LaurentPoly:
    if b < 0:
        raise ValueError("qfac needs a nonnegative argument")
    r = ONE
    for i in range(2, b + 1):
        r = r * qnum(i)
    return r


@lru_cache(maxsize=None)
def qbin(a: int, b: int) -> LaurentPoly:
    if b < 0:
        raise ValueError("qbin needs b >= 0")
    num = ONE
    for i in range(b):
        num = num * qnum(a - i)
    return exact_div(num, qfac(b))


def is_positive_normalized(p: LaurentPoly) -> bool:
    """Membership in 1 + q N[q]."""
    if p.coeff(0) != 1:
        return False
    return all(e > 0 and v > 0 for e, v in p.items() if e != 0)


def quantum_integer_of(p: LaurentPoly) -> int | None:
    """Return a with p == [a], or None."""
    if p.is_zero():
        return 0
    top = p.max_exp()
    sign = 1 if p.coeff(top) > 0 else -1
    a = top + 1
    return sign * a if p == qnum(sign * a) else None


def pretty(p: LaurentPoly) -> str:
    """Bracket notation when p is a quantum integer, else the canonical text."""
    a = quantum_integer_of(p)
    if a is not None and a > 0:
        return f"[{a}]"
    return to_text(p)


# -- text form

def _mono(e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    return f"q^{e}"


def to_text(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (e, v) in enumerate(p.items()):
        sign = "-" if v < 0 else "+"
        a = abs(v)
        m = _mono(e)
        body = str(a) if not m else (m if a == 1 else f"{a}{m}")
        if i == 0:
            parts.append(("-" if v < 0 else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def parse_poly(text: str) -> LaurentPoly:
    """Parse `poly := term (('+'|'-') term)*`, `term := int? ('q' ('^' int)?)?`."""
    s = text
    i = 0
    n = len(s)
    out: dict[int, int] = {}

    def skip(j):
        while j < n and s[j].isspace():
            j += 1
        return j

    def read_int(j, allow_sign=False):
        j = skip(j)
        st = j
        if allow_sign and j < n and s[j] in "+-":
            j += 1
        while j < n and s[j].isdigit():
            j += 1
        digits = s[st:j]
        if not digits or digits in "+-":
            raise PolyParseError("expected integer", s, st)
        return int(digits), j

    i = skip(i)
    if i == n:
        raise PolyParseError("empty polynomial", s, i)
    sign = 1
    if s[i] in "+-":
        sign = -1 if s[i] == "-" else 1
        i += 1
    while True:
        i = skip(i)
        start = i
        coeff = None
        if i < n and s[i].isdigit():
            coeff, i = read_int(i)
            i = skip(i)
        exp = 0
        if i < n and s[i] == "q":
            i += 1
            exp = 1
            j = skip(i)
            if j < n and s[j] == "^":
                exp, i = read_int(j + 1, allow_sign=True)
        elif coeff is None:
            raise PolyParseError("expected term", s, start)
        c = sign * (1 if coeff is None else coeff)
        out[exp] = out.get(exp, 0) + c
        i = skip(i)
        if i == n:
            break
        if s[i] not in "+-":
            raise PolyParseError(f"unexpected character {s[i]!r}", s, i)
        sign = -1 if s[i] == "-" else 1
        i += 1
    return LaurentPoly(out)
