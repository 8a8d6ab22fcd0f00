"""Sparse multivariate polynomials over an exact scalar field.

Polynomials live in a :class:`PolyRing` (a field plus an ordered tuple of
variable names) and store only nonzero terms, keyed by exponent vectors.
The term order used for printing and leading terms is graded lexicographic
in the declared variable order, so string output is canonical and
``ring.parse(str(p)) == p`` exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .scalars import Scalar, ScalarField

LAMBDA = "lambda"  # reserved deformation-parameter variable name


class ContextError(ValueError):
    """Operands do not share a variable context."""


class DivisionError(ArithmeticError):
    """Exact division failed; carries the offending remainder term."""

    def __init__(self, message: str, remainder: "Poly | None" = None):
        super().__init__(message)
        self.remainder = remainder


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message)
        self.pos = pos


class PolyRing:
    """A polynomial ring: scalar field + ordered variable names."""

    __slots__ = ("field", "variables", "_index")

    def __init__(self, field: ScalarField, variables: tuple[str, ...] | list[str]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ContextError(f"duplicate variable names in {variables}")
        if "zeta" in variables:
            raise ContextError("'zeta' is reserved for the field root of unity")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9']*", v):
                raise ContextError(f"bad variable name {v!r}")
        self.field = field
        self.variables = variables
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyRing):
            return NotImplemented
        return self.field == other.field and self.variables == other.variables

    def __hash__(self) -> int:
        return hash((self.field, self.variables))

    def __repr__(self) -> str:
        return f"{self.field!r}[{', '.join(self.variables)}]"

    # -- constructors ---------------------------------------------------------

    def poly(self, terms: dict[tuple[int, ...], Scalar]) -> "Poly":
        clean = {}
        for exps, coeff in terms.items():
            if len(exps) != self.nvars:
                raise ContextError(f"exponent vector {exps} does not match arity {self.nvars}")
            c = self.field.scalar(coeff)
            if not c.is_zero():
                clean[tuple(exps)] = c
        return Poly(self, clean)

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def const(self, value) -> "Poly":
        c = self.field.scalar(value)
        if c.is_zero():
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        if name not in self._index:
            raise ContextError(f"unknown variable {name!r} in {self!r}")
        exps = [0] * self.nvars
        exps[self._index[name]] = 1
        return Poly(self, {tuple(exps): self.field.one})

    def monomial(self, exps: tuple[int, ...], coeff=1) -> "Poly":
        return self.poly({tuple(exps): self.field.scalar(coeff)})

    def embed(self, p: "Poly") -> "Poly":
        """Carry a polynomial from a subring (matched by variable names)."""
        if p.ring == self:
            return p
        missing = [v for v in p.ring.variables if v not in self._index]
        if missing:
            raise ContextError(f"cannot embed: variables {missing} absent from {self!r}")
        slots = [self._index[v] for v in p.ring.variables]
        terms = {}
        for exps, c in p.terms.items():
            new = [0] * self.nvars
            for s, e in zip(slots, exps):
                new[s] = e
            terms[tuple(new)] = self.field.scalar(c)
        return self.poly(terms)

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()


def _grade_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Poly:
    """A sparse multivariate polynomial; immutable after construction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[tuple[int, ...], Scalar]):
        self.ring = ring
        self.terms = terms

    # -- predicates and views ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.constant_value() is not None and self.as_scalar().is_one()

    def constant_value(self) -> Scalar | None:
        """The scalar value if this is a constant, else None."""
        if not self.terms:
            return self.ring.field.zero
        if len(self.terms) == 1:
            (exps, c), = self.terms.items()
            if all(e == 0 for e in exps):
                return c
        return None

    def as_scalar(self) -> Scalar:
        c = self.constant_value()
        if c is None:
            raise ContextError(f"{self} is not a constant")
        return c

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.ring._index[var]
        return max((e[i] for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: _grade_key(kv[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, ...], Scalar]:
        if not self.terms:
            raise ZeroDivisionError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grade_key)
        return exps, self.terms[exps]

    # -- ring operations --------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise ContextError(f"operands live in {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for exps, c in o.terms.items():
            s = terms.get(exps)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, ...], Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "Poly":
        c = self.ring.field.scalar(c)
        if c.is_zero():
            return self.ring.zero
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = self.ring.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset((e, str(c)) for e, c in self.terms.items())))

    # -- substitution and evaluation ---------------------------------------------

    def substitute(self, var: str, value) -> "Poly":
        """Replace one variable by a polynomial (Horner in that variable)."""
        val = self._coerce(value)
        if val is None:
            raise TypeError(f"cannot substitute {value!r}")
        coeffs = self.coefficients_in(var)
        if not coeffs:
            return self
        result = self.ring.zero
        for k in range(max(coeffs), -1, -1):
            result = result * val + coeffs.get(k, self.ring.zero)
        return result

    def evaluate(self, point: dict[str, object]) -> Scalar:
        """Evaluate with every variable assigned a scalar."""
        missing = [v for v in self.ring.variables if v not in point]
        if missing:
            raise ContextError(f"evaluate needs values for {missing}")
        vals = [self.ring.field.scalar(point[v]) for v in self.ring.variables]
        total = self.ring.field.zero
        for exps, c in self.terms.items():
            acc = c
            for v, e in zip(vals, exps):
                if e:
                    acc = acc * v**e
            total = total + acc
        return total

    def coefficient_in(self, var: str, k: int) -> "Poly":
        """The coefficient of var**k, as a polynomial with that slot cleared."""
        i = self.ring._index[var]
        out = {}
        for exps, c in self.terms.items():
            if exps[i] == k:
                e = list(exps)
                e[i] = 0
                out[tuple(e)] = c
        return Poly(self.ring, out)

    def coefficients_in(self, var: str) -> dict[int, "Poly"]:
        i = self.ring._index[var]
        buckets: dict[int, dict] = {}
        for exps, c in self.terms.items():
            e = list(exps)
            k = e[i]
            e[i] = 0
            buckets.setdefault(k, {})[tuple(e)] = c
        return {k: Poly(self.ring, t) for k, t in buckets.items()}

    def divmod_in(self, var: str, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Long division by a divisor that is monic in ``var``."""
        self._check(divisor)
        d = divisor.degree_in(var)
        if d < 0:
            raise DivisionError("division by zero polynomial")
        lead = divisor.coefficient_in(var, d)
        if not lead.is_one():
            raise DivisionError(f"divisor is not monic in {var}: leading coefficient {lead}")
        v = self.ring.var(var)
        quo = self.ring.zero
        rem = self
        while rem.degree_in(var) >= d:
            k = rem.degree_in(var)
            top = rem.coefficient_in(var, k)
            piece = top * v ** (k - d)
            quo = quo + piece
            rem = rem - piece * divisor
        return quo, rem

    # -- printing -------------------------------------------------------------

    def _term_str(self, exps: tuple[int, ...], coeff: Scalar) -> str:
        factors = []
        for v, e in zip(self.ring.variables, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        cs = str(coeff)
        if coeff.n_terms() > 1:
            cs = f"({cs})"
        if not factors:
            return cs
        mono = "*".join(factors)
        if coeff.is_one():
            return mono
        if (-coeff).is_one():
            return f"-{mono}"
        return f"{cs}*{mono}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = [self._term_str(e, c) for e, c in self.sorted_terms()]
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def exact_divide(p: Poly, q: Poly) -> Poly:
    """Return s with q*s == p, or raise DivisionError naming the remainder."""
    p._check(q)
    if q.is_zero():
        raise DivisionError("exact division by zero")
    quo_terms: dict[tuple[int, ...], Scalar] = {}
    rem = p
    q_exps, q_coeff = q.leading()
    while not rem.is_zero():
        r_exps, r_coeff = rem.leading()
        diff = tuple(a - b for a, b in zip(r_exps, q_exps))
        if any(d < 0 for d in diff):
            raise DivisionError(
                f"non-exact division: remainder term {Poly(p.ring, {r_exps: r_coeff})}",
                remainder=rem,
            )
        c = r_coeff / q_coeff
        quo_terms[diff] = c
        rem = rem - Poly(p.ring, {diff: c}) * q
    return Poly(p.ring, quo_terms)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[-+*^()]))"
)


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip():
                    raise ParseError(f"bad character {text[pos]!r} in polynomial", pos)
                break
            pos = m.end()
            for kind in ("num", "name", "op"):
                if m.group(kind) is not None:
                    self.tokens.append((kind, m.group(kind), m.start(kind)))
                    break
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected {val!r} in polynomial", pos)
        return p

    def expr(self) -> Poly:
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Poly:
        p = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.unary()
            else:
                return p

    def unary(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> Poly:
        p = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a natural number", pos)
            return p ** int(val)
        return p

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "name":
            if val == "zeta":
                return self.ring.const(self.ring.field.zeta)
            try:
                return self.ring.var(val)
            except ContextError:
                raise ParseError(f"unknown variable {val!r}", pos) from None
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val, pos = self.take()
            if val != ")":
                raise ParseError("missing closing parenthesis", pos)
            return p
        raise ParseError(f"unexpected token {val!r}", pos)
