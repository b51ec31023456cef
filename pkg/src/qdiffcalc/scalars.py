"""Exact coefficient field: rational functions in one or two indeterminates.

A :class:`Scalar` is a reduced fraction ``num/den`` of polynomials with
rational coefficients in the variables ``t`` (and ``s`` for the two-variable
ring).  Polynomial arithmetic and gcds are delegated to FLINT's multivariate
rational polynomials; this module owns normalization, the Laurent view of
numerators, printing/parsing and specialization.

Canonical form (stored): ``gcd(num, den) = 1`` and ``den`` is monic with
respect to graded-lexicographic order (t > s).  Monomial factors of ``den``
are presented as negative exponents of the numerator by
:meth:`Scalar.laurent_parts`, which gives the documented canonical pair
(Laurent numerator, true-polynomial denominator).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

import flint

__all__ = [
    "ScalarRing",
    "Scalar",
    "LaurentPoly",
    "ZeroDivisorError",
    "SpecializationError",
    "RING_T",
    "RING_TS",
    "parse_scalar",
]


class ZeroDivisorError(ZeroDivisionError):
    """Division by the zero scalar."""

    def __init__(self, msg: str = "zero divisor"):
        super().__init__(msg)


class SpecializationError(ValueError):
    """Denominator vanishes at the requested point."""

    def __init__(self, msg: str = "bad specialization"):
        super().__init__(msg)


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, flint.fmpz):
        return flint.fmpq(int(c))
    raise TypeError(f"cannot convert {type(c).__name__} to a rational")


def _fraction(c) -> Fraction:
    c = flint.fmpq(c)
    return Fraction(int(c.p), int(c.q))


class ScalarRing:
    """Field of rational functions Q(t) or Q(t, s)."""

    def __init__(self, names: tuple[str, ...]):
        if len(names) not in (1, 2):
            raise ValueError("one or two variables supported")
        self.names = tuple(names)
        self.nvars = len(names)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")
        self._pone = self.ctx.from_dict({(0,) * self.nvars: 1})
        self._pzero = self.ctx.from_dict({})
        self.zero = Scalar(self, self._pzero, self._pone)
        self.one = Scalar(self, self._pone, self._pone)

    def __repr__(self):
        return f"ScalarRing({', '.join(self.names)})"

    def __reduce__(self):
        return (_ring_for, (self.names,))

    def gen(self, i: int = 0) -> "Scalar":
        exps = [0] * self.nvars
        exps[i] = 1
        return Scalar(self, self.ctx.from_dict({tuple(exps): 1}), self._pone)

    def gens(self) -> tuple["Scalar", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ring is self:
                return value
            if value.ring.nvars < self.nvars:
                return self.embed(value)
            raise TypeError("cannot coerce two-variable scalar into one-variable ring")
        if isinstance(value, str):
            return parse_scalar(value, self)
        c = _to_fmpq(value)
        if c == 0:
            return self.zero
        return Scalar(self, self.ctx.from_dict({(0,) * self.nvars: c}), self._pone)

    def monomial(self, exps: Iterable[int], coeff=1) -> "Scalar":
        """``coeff * t^e0 (* s^e1)``; exponents may be negative."""
        exps = tuple(exps)
        c = _to_fmpq(coeff)
        if c == 0:
            return self.zero
        pos = tuple(max(e, 0) for e in exps)
        neg = tuple(max(-e, 0) for e in exps)
        return Scalar(self, self.ctx.from_dict({pos: c}), self.ctx.from_dict({neg: 1}))

    def from_terms(self, terms: Mapping[tuple[int, ...], object]) -> "Scalar":
        """Laurent polynomial from an exponent-tuple -> coefficient map."""
        terms = {tuple(k): _to_fmpq(v) for k, v in terms.items() if v != 0}
        if not terms:
            return self.zero
        shift = [min(k[i] for k in terms) for i in range(self.nvars)]
        shift = [min(s, 0) for s in shift]
        num = self.ctx.from_dict(
            {tuple(k[i] - shift[i] for i in range(self.nvars)): v for k, v in terms.items()}
        )
        den = self.ctx.from_dict({tuple(-s for s in shift): 1})
        return Scalar._make(self, num, den)

    def embed(self, x: "Scalar") -> "Scalar":
        """Map a one-variable scalar into this ring (t -> t)."""
        def lift(p):
            return self.ctx.from_dict({k + (0,) * (self.nvars - len(k)): v for k, v in p.to_dict().items()})
        return Scalar(self, lift(x.num), lift(x.den))


class Scalar:
    """Immutable element of Q(t) or Q(t, s) in reduced form."""

    __slots__ = ("ring", "num", "den", "_hash")

    def __init__(self, ring: ScalarRing, num, den):
        # trusted constructor: callers pass reduced data
        self.ring = ring
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _make(ring: ScalarRing, num, den) -> "Scalar":
        if den.is_zero():
            raise ZeroDivisorError()
        if num.is_zero():
            return ring.zero
        if not den.is_one():
            if den.is_constant():
                c = den.leading_coefficient()
                return Scalar(ring, num / c, ring._pone)
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            c = den.leading_coefficient()
            if c != 1:
                num = num / c
                den = den / c
        return Scalar(ring, num, den)

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring is self.ring:
                return other
            return self.ring(other)
        return self.ring(other)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_one():
                n = self.num + o.num
                return Scalar(self.ring, n, self.den) if not n.is_zero() else self.ring.zero
            return Scalar._make(self.ring, self.num + o.num, self.den)
        if self.den.is_one():
            return Scalar(self.ring, self.num * o.den + o.num, o.den)
        if o.den.is_one():
            return Scalar(self.ring, self.num + o.num * self.den, self.den)
        g = self.den.gcd(o.den)
        if g.is_one():
            # coprime denominators: the sum is already reduced
            n = self.num * o.den + o.num * self.den
            return Scalar(self.ring, n, self.den * o.den) if not n.is_zero() else self.ring.zero
        d1 = self.den / g
        d2 = o.den / g
        return Scalar._make(self.ring, self.num * d2 + o.num * d1, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ring, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.ring.zero
        if self.den.is_one() and o.den.is_one():
            return Scalar(self.ring, self.num * o.num, self.den)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1 = n1 / g
                d2 = d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2 = n2 / g
                d1 = d1 / g
        return Scalar(self.ring, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisorError()
        c = self.num.leading_coefficient()
        return Scalar(self.ring, self.den / c, self.num / c)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.ring.one
        return Scalar(self.ring, self.num ** e, self.den ** e)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.ring is not self.ring:
                try:
                    other = self._coerce(other)
                except TypeError:
                    return False
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == self.ring(other).num
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if self.den.is_one() and self.num.is_constant():
                self._hash = hash(_fraction(self.num.leading_coefficient()) if not self.num.is_zero() else 0)
            else:
                self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        """True when the denominator is a monomial."""
        return len(self.den.to_dict()) == 1

    # -- canonical views ---------------------------------------------------
    def laurent_parts(self) -> tuple["LaurentPoly", "LaurentPoly"]:
        """(Laurent numerator, true-polynomial denominator) canonical pair."""
        content = self.den.term_content()
        shift = next(iter(content.to_dict()))
        den0 = self.den / content
        num_terms = {
            tuple(e[i] - shift[i] for i in range(self.ring.nvars)): _fraction(c)
            for e, c in self.num.to_dict().items()
        }
        lc = _fraction(den0.leading_coefficient())
        num_terms = {k: v / lc for k, v in num_terms.items()}
        den_terms = {tuple(e): _fraction(c) / lc for e, c in den0.to_dict().items()}
        return LaurentPoly(self.ring.nvars, num_terms), LaurentPoly(self.ring.nvars, den_terms)

    def normalize(self) -> "Scalar":
        return Scalar._make(self.ring, self.num, self.den)

    def as_laurent(self) -> "LaurentPoly":
        num, den = self.laurent_parts()
        if den.terms != {(0,) * self.ring.nvars: Fraction(1)}:
            raise ValueError("not a Laurent polynomial")
        return num

    def constant_value(self) -> Fraction:
        if not (self.den.is_one() and self.num.is_constant()):
            raise ValueError("not a constant")
        return _fraction(self.num.leading_coefficient()) if not self.num.is_zero() else Fraction(0)

    # -- evaluation --------------------------------------------------------
    def specialize(self, assignment: Mapping[str, object], modulus: int | None = None):
        """Evaluate at a point.  Returns a Fraction, or an int in [0, p) with a modulus."""
        vals = [assignment[n] for n in self.ring.names]
        if modulus is None:
            pt = [_to_fmpq(Fraction(v)) for v in vals]
            d = self.den(*pt)
            if d == 0:
                raise SpecializationError()
            return _fraction(self.num(*pt) / d)
        p = modulus
        pt = [int(v) % p for v in vals]
        d = _eval_mod(self.den, pt, p)
        if d == 0:
            raise SpecializationError()
        return _eval_mod(self.num, pt, p) * pow(d, -1, p) % p

    # -- printing ----------------------------------------------------------
    def __str__(self):
        num, den = self.laurent_parts()
        if den.is_one():
            return str(num)
        ns = str(num)
        if len(num.terms) > 1:
            ns = f"({ns})"
        ds = str(den)
        if len(den.terms) > 1 or not den.is_monomial_coeff_one():
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __reduce__(self):
        return (_rebuild, (self.ring.names, str(self)))


def _eval_mod(poly, pt: list[int], p: int) -> int:
    acc = 0
    for e, c in poly.to_dict().items():
        c = flint.fmpq(c)
        v = int(c.p) % p * pow(int(c.q), -1, p) % p
        for x, k in zip(pt, e):
            v = v * pow(x, k, p) % p
        acc += v
    return acc % p


class LaurentPoly:
    """Laurent polynomial as an exponent-tuple -> Fraction map (no zero entries)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object]):
        self.nvars = nvars
        self.terms = {tuple(k): Fraction(v) for k, v in terms.items() if v != 0}

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_one(self) -> bool:
        return self.terms == {(0,) * self.nvars: Fraction(1)}

    def is_monomial_coeff_one(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == 1

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(k[i] for k in self.terms) for i in range(self.nvars))

    def to_scalar(self, ring: ScalarRing) -> Scalar:
        return ring.from_terms(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        names = _NAMES[self.nvars]
        keys = sorted(self.terms, key=lambda k: (sum(k), k), reverse=True)
        parts = []
        for k in keys:
            c = self.terms[k]
            mono = []
            for n, e in zip(names, k):
                if e == 1:
                    mono.append(n)
                elif e != 0:
                    mono.append(f"{n}^{e}")
            m = "*".join(mono)
            a = abs(c)
            if not m:
                body = str(a)
            elif a == 1:
                body = m
            else:
                body = f"{a}*{m}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


_NAMES = {1: ("t",), 2: ("t", "s")}

RING_T = ScalarRing(("t",))
RING_TS = ScalarRing(("t", "s"))


def _ring_for(names):
    return RING_T if tuple(names) == ("t",) else RING_TS


def _rebuild(names, text):
    return parse_scalar(text, _ring_for(names))


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def parse_scalar(text: str, ring: ScalarRing = RING_T) -> Scalar:
    """Parse expressions like ``(t^4 - 1)/(t^2 + 1)`` or ``3/4*t^-2 + s``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1):
            tokens.append(("num", int(m.group(1))))
        elif m.group(2):
            tokens.append(("var", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        if peek() == ("op", "-"):
            take()
            val = -term()
        else:
            if peek() == ("op", "+"):
                take()
            val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while True:
            tok = peek()
            if tok in (("op", "*"), ("op", "/")):
                take()
                rhs = factor()
                val = val * rhs if tok[1] == "*" else val / rhs
            elif tok[0] in ("num", "var") or tok == ("op", "("):
                val = val * factor()
            else:
                return val

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            tok = take()
            if tok[0] == "num":
                e = tok[1]
            elif tok == ("op", "("):
                neg = 1
                if peek() == ("op", "-"):
                    take()
                    neg = -1
                e = neg * take()[1]
                if take() != ("op", ")"):
                    raise ValueError(f"malformed exponent in {text!r}")
            else:
                raise ValueError(f"malformed exponent in {text!r}")
            return base ** (sign * e)
        return base

    def atom():
        tok = take()
        if tok[0] == "num":
            return ring(tok[1])
        if tok[0] == "var":
            if tok[1] not in ring.names:
                raise ValueError(f"unknown variable {tok[1]!r}")
            return ring.gen(ring.names.index(tok[1]))
        if tok == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return val
        if tok == ("op", "-"):
            return -factor()
        raise ValueError(f"unexpected token {tok[1]!r} in {text!r}")

    val = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return val
