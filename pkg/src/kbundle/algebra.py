"""Exact coefficient fields, sparse multivariate polynomials, monomial orders,
and the polynomial-expression parser.

Coefficients are `fractions.Fraction` over the rationals or canonical integers
in [0, p) over a prime field.  Nothing in this package touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


class AlgebraError(ValueError):
    """Base class for exact-algebra input errors."""


class RingMismatchError(AlgebraError):
    pass


class CoefficientError(AlgebraError):
    """Coefficient not representable in the requested field (e.g. 1/2 in F_2)."""


class PolyParseError(AlgebraError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position + 1})")
        self.position = position


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (char == 0) or the prime field Z/char.

    Elements are plain Fractions resp. ints in [0, char); the methods below are
    the single place where coefficient arithmetic happens.
    """

    char: int = 0

    def __post_init__(self):
        if self.char < 0:
            raise AlgebraError(f"invalid characteristic {self.char}")
        if self.char > 0 and not is_prime(self.char):
            raise AlgebraError(f"characteristic {self.char} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.char > 0

    def zero(self):
        return 0 if self.char else Fraction(0)

    def one(self):
        return 1 if self.char else Fraction(1)

    def from_int(self, n: int):
        return n % self.char if self.char else Fraction(n)

    def from_fraction(self, x: Fraction):
        if self.char == 0:
            return Fraction(x)
        num, den = x.numerator, x.denominator
        if den % self.char == 0:
            raise CoefficientError(
                f"coefficient {x} is not representable in F_{self.char}")
        return num * pow(den, -1, self.char) % self.char

    def add(self, a, b):
        return (a + b) % self.char if self.char else a + b

    def sub(self, a, b):
        return (a - b) % self.char if self.char else a - b

    def mul(self, a, b):
        return (a * b) % self.char if self.char else a * b

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return pow(a, -1, self.char) if self.char else Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        return str(a)

    def __str__(self):
        return "QQ" if self.char == 0 else f"F_{self.char}"


QQ = FieldSpec(0)


# ---------------------------------------------------------------------------
# Monomials are bare exponent tuples; these helpers are the whole interface.
# ---------------------------------------------------------------------------

def mono_deg(m: tuple) -> int:
    return sum(m)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_gcd(a: tuple, b: tuple) -> tuple:
    return tuple(min(x, y) for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_quot(a: tuple, b: tuple) -> tuple:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> Iterator[tuple]:
    """All exponent tuples of the given total degree, in descending-lex order."""
    if degree < 0:
        return
    if nvars == 1:
        yield (degree,)
        return
    for e in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - e):
            yield (e,) + rest


MONOMIAL_ORDERS = ("degrevlex", "deglex", "lex")


def monomial_sort_key(order: str):
    """Sort key with larger key == larger monomial in the given order."""
    if order == "degrevlex":
        return lambda m: (sum(m), tuple(-e for e in reversed(m)))
    if order == "deglex":
        return lambda m: (sum(m), m)
    if order == "lex":
        return lambda m: m
    raise AlgebraError(f"unknown monomial order {order!r}")


def monomial_heap_key(order: str):
    """Min-heap key: smaller key == larger monomial (for largest-first pops)."""
    if order == "degrevlex":
        return lambda m: (-sum(m), tuple(reversed(m)))
    if order == "deglex":
        return lambda m: (-sum(m), tuple(-e for e in m))
    if order == "lex":
        return lambda m: tuple(-e for e in m)
    raise AlgebraError(f"unknown monomial order {order!r}")


def default_variables(nvars: int) -> tuple:
    """X,Y,Z for three variables, X0..XN otherwise."""
    if nvars == 3:
        return ("X", "Y", "Z")
    return tuple(f"X{i}" for i in range(nvars))


@dataclass(frozen=True)
class PolyRing:
    """A polynomial ring: variable names, exact field, active monomial order."""

    variables: tuple
    field: FieldSpec = QQ
    order: str = "degrevlex"

    def __post_init__(self):
        if len(self.variables) == 0:
            raise AlgebraError("ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise AlgebraError("duplicate variable names")
        if self.order not in MONOMIAL_ORDERS:
            raise AlgebraError(f"unknown monomial order {self.order!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def mono_key(self):
        return monomial_sort_key(self.order)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one()})

    def constant(self, c) -> "Poly":
        c = self.field.from_fraction(Fraction(c)) if not isinstance(c, Fraction) \
            else self.field.from_fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def variable(self, i: int) -> "Poly":
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {mono: self.field.one()})

    def monomial(self, mono: tuple, coeff=None) -> "Poly":
        coeff = self.field.one() if coeff is None else coeff
        return Poly(self, {tuple(mono): coeff} if coeff else {})

    def __str__(self):
        return f"{self.field}[{','.join(self.variables)}]"


def make_ring(nvars: int = 3, field: FieldSpec = QQ, order: str = "degrevlex",
              variables=None) -> PolyRing:
    names = tuple(variables) if variables is not None else default_variables(nvars)
    return PolyRing(names, field, order)


class Poly:
    """Sparse polynomial: map from exponent tuple to nonzero field scalar.

    Immutable by convention; every operation returns a fresh value.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return bool(self.terms) and all(mono_deg(m) == 0 for m in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self):
        """Total degree; None for the zero polynomial (which carries no degree)."""
        if not self.terms:
            return None
        return max(mono_deg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_deg(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """Degree of a homogeneous polynomial; None if zero; error if mixed."""
        degs = {mono_deg(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("polynomial is not homogeneous")
        return degs.pop()

    def num_terms(self) -> int:
        return len(self.terms)

    def leading(self):
        """(monomial, coefficient) of the largest term in the ring order."""
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        m = max(self.terms, key=self.ring.mono_key)
        return m, self.terms[m]

    def sorted_terms(self):
        key = self.ring.mono_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"operands live in different rings: {self.ring} vs {other.ring}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        fld = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = fld.add(out.get(m, fld.zero()), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        fld = self.ring.field
        return Poly(self.ring, {m: fld.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        fld = self.ring.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = fld.add(out.get(m, fld.zero()), fld.mul(c1, c2))
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(self.ring, out)

    def scale(self, c) -> "Poly":
        fld = self.ring.field
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: fld.mul(v, c) for m, v in self.terms.items()})

    def mul_monomial(self, mono: tuple, coeff=None) -> "Poly":
        fld = self.ring.field
        coeff = fld.one() if coeff is None else coeff
        if not coeff:
            return self.ring.zero()
        return Poly(self.ring, {mono_mul(m, mono): fld.mul(c, coeff)
                                for m, c in self.terms.items()})

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        _, lc = self.leading()
        return self.scale(self.ring.field.inv(lc))

    def evaluate(self, point):
        """Exact evaluation at a tuple of field scalars."""
        if len(point) != self.ring.nvars:
            raise AlgebraError("evaluation point has wrong length")
        fld = self.ring.field
        total = fld.zero()
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = fld.mul(v, x ** e if fld.char == 0 else pow(x, e, fld.char))
            total = fld.add(total, v)
        return total

    # -- equality / printing -------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        fld = self.ring.field
        names = self.ring.variables
        pieces = []
        for m, c in self.sorted_terms():
            factors = [n if e == 1 else f"{n}^{e}"
                       for n, e in zip(names, m) if e > 0]
            if fld.char == 0:
                negative = c < 0
                mag = -c if negative else c
                if not factors:
                    body = fld.format(mag)
                elif mag == 1:
                    body = "*".join(factors)
                else:
                    body = "*".join([fld.format(mag)] + factors)
            else:
                negative = False
                if not factors:
                    body = fld.format(c)
                elif c == 1:
                    body = "*".join(factors)
                else:
                    body = "*".join([fld.format(c)] + factors)
            pieces.append(("-" if negative else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


def substitute_powers(p: Poly, k: int) -> Poly:
    """Substitute every variable by its k-th power (exponent vectors scale by k)."""
    if k < 1:
        raise AlgebraError(f"power substitution needs k >= 1, got {k}")
    if k == 1:
        return p
    return Poly(p.ring, {tuple(e * k for e in m): c for m, c in p.terms.items()})


def monomial_family_gcd(polys) -> tuple:
    """Componentwise-min exponent vector of a family of monomials."""
    monos = []
    for p in polys:
        if not p.is_monomial():
            raise AlgebraError("gcd of monomial family requires monomials")
        monos.append(next(iter(p.terms)))
    g = monos[0]
    for m in monos[1:]:
        g = mono_gcd(g, m)
    return g


# ---------------------------------------------------------------------------
# Parser.  Grammar (whitespace insignificant, juxtaposition not allowed):
#   expr   := ['+'|'-'] term (('+'|'-') term)*
#   term   := atom ('*' atom)*
#   atom   := NUMBER ['/' NUMBER] | VARIABLE ['^' NUMBER]
# ---------------------------------------------------------------------------

def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


def parse_polynomial(text: str, ring: PolyRing) -> Poly:
    """Parse an expression into the canonical sparse polynomial.

    Parsing, printing, then re-parsing is a fixed point on canonical forms.
    """
    tokens = _tokenize(text)
    pos = 0
    var_index = {name: i for i, name in enumerate(ring.variables)}
    fld = ring.field

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_atom():
        kind, value, at = peek()
        if kind == "num":
            advance()
            num = value
            if peek()[0] == "/":
                advance()
                kind2, den, at2 = peek()
                if kind2 != "num":
                    raise PolyParseError("expected denominator after '/'", at2)
                advance()
                if den == 0:
                    raise PolyParseError("zero denominator", at2)
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            return fld.from_fraction(coeff), (0,) * ring.nvars
        if kind == "name":
            advance()
            if value not in var_index:
                raise PolyParseError(f"unknown variable {value!r}", at)
            exp = 1
            if peek()[0] == "^":
                advance()
                kind2, e, at2 = peek()
                if kind2 != "num":
                    raise PolyParseError("expected integer exponent after '^'", at2)
                advance()
                exp = e
            mono = tuple(exp if j == var_index[value] else 0
                         for j in range(ring.nvars))
            return fld.one(), mono
        raise PolyParseError("expected a coefficient or a variable", at)

    def parse_term():
        coeff, mono = parse_atom()
        while peek()[0] == "*":
            advance()
            c2, m2 = parse_atom()
            coeff = fld.mul(coeff, c2)
            mono = mono_mul(mono, m2)
        return coeff, mono

    terms = {}

    def accumulate(sign, coeff, mono):
        if sign < 0:
            coeff = fld.neg(coeff)
        s = fld.add(terms.get(mono, fld.zero()), coeff)
        if s:
            terms[mono] = s
        else:
            terms.pop(mono, None)

    sign = 1
    kind, _, _ = peek()
    if kind in ("+", "-"):
        sign = -1 if kind == "-" else 1
        advance()
    coeff, mono = parse_term()
    accumulate(sign, coeff, mono)
    while peek()[0] in ("+", "-"):
        kind, _, _ = advance()
        coeff, mono = parse_term()
        accumulate(-1 if kind == "-" else 1, coeff, mono)
    kind, _, at = peek()
    if kind != "end":
        raise PolyParseError("unexpected trailing input", at)
    return Poly(ring, terms)


def parse_many(texts, ring: PolyRing):
    return tuple(parse_polynomial(t, ring) for t in texts)
