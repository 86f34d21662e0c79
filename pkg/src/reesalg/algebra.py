"""Prime fields, monomial orders, polynomial rings and ring maps.

Polynomials are stored as ``{exponent tuple: coefficient}`` dicts with
coefficients reduced into ``range(p)``.  Every variable carries a bidegree
``(x-degree, t-degree)``; ordinary graded rings simply use t-degree 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from operator import add
from typing import Callable, Iterable, Sequence

DEFAULT_CHARACTERISTIC = 32003


class AlgebraError(ValueError):
    pass


class PolynomialParseError(AlgebraError):
    def __init__(self, message: str, column: int, token: str):
        super().__init__(f"{message} (column {column}, token {token!r})")
        self.message = message
        self.column = column
        self.token = token


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        if not is_prime(self.characteristic):
            raise AlgebraError(f"characteristic {self.characteristic} is not prime")

    def inv(self, a: int) -> int:
        return pow(a, -1, self.characteristic)

    def symmetric(self, a: int) -> int:
        p = self.characteristic
        a %= p
        return a - p if a > p // 2 else a


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order, realised as a sort key on exponent tuples.

    ``kind`` is one of ``degrevlex``, ``lex``, ``block`` or ``weighted``.
    A block order compares the first ``split`` variables with ``inner[0]``
    and breaks ties on the rest with ``inner[1]``.  A weighted order compares
    ``weights . e`` first and breaks ties with ``inner[0]``.
    """

    kind: str = "degrevlex"
    split: int = 0
    inner: tuple["MonomialOrder", ...] = ()
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block", "weighted"):
            raise AlgebraError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and len(self.inner) != 2:
            raise AlgebraError("block order needs two inner orders")
        if self.kind == "weighted" and len(self.inner) != 1:
            raise AlgebraError("weighted order needs one tiebreak order")

    @classmethod
    def block(cls, split: int, first: "MonomialOrder" = None, second: "MonomialOrder" = None):
        return cls("block", split=split, inner=(first or cls(), second or cls()))

    @classmethod
    def weighted(cls, weights: Sequence[int], tiebreak: "MonomialOrder" = None):
        return cls("weighted", weights=tuple(weights), inner=(tiebreak or cls(),))

    def key_function(self, degree_weights: Sequence[int]) -> Callable[[tuple], tuple]:
        """Sort key: larger key means larger monomial.

        ``degree_weights`` are the positive weights used for the degree part
        of degrevlex (the ring's total degrees).
        """
        n = len(degree_weights)
        w = tuple(degree_weights)
        if self.kind == "degrevlex":
            if all(x == 1 for x in w):
                def key(e):
                    return (sum(e),) + tuple(-x for x in reversed(e))
            else:
                def key(e):
                    return (sum(map(int.__mul__, w, e)),) + tuple(-x for x in reversed(e))
            return key
        if self.kind == "lex":
            return tuple
        if self.kind == "block":
            s = self.split
            k1 = self.inner[0].key_function(w[:s])
            k2 = self.inner[1].key_function(w[s:])
            return lambda e: k1(e[:s]) + k2(e[s:])
        ww = self.weights
        if len(ww) != n:
            raise AlgebraError("weight vector length does not match variable count")
        k1 = self.inner[0].key_function(w)
        return lambda e: (sum(map(int.__mul__, ww, e)),) + k1(e)

    def describe(self) -> str:
        if self.kind == "block":
            return f"block({self.split},{self.inner[0].describe()},{self.inner[1].describe()})"
        if self.kind == "weighted":
            return f"weighted({list(self.weights)},{self.inner[0].describe()})"
        return self.kind


DEGREVLEX = MonomialOrder()
LEX = MonomialOrder("lex")


class KeyCache(dict):
    """Memoising wrapper so ``max(terms, key=cache.__getitem__)`` runs in C."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        super().__init__()
        self.fn = fn

    def __missing__(self, k):
        v = self[k] = self.fn(k)
        return v


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

Bidegree = tuple[int, int]


@dataclass(frozen=True, eq=False)
class PolyRing:
    field: FieldSpec
    var_names: tuple[str, ...]
    var_bidegrees: tuple[Bidegree, ...]
    order: MonomialOrder = DEGREVLEX
    affine: bool = False

    def __post_init__(self):
        if len(set(self.var_names)) != len(self.var_names):
            raise AlgebraError("variable names must be distinct")
        if len(self.var_names) != len(self.var_bidegrees):
            raise AlgebraError("one bidegree per variable required")
        for name in self.var_names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise AlgebraError(f"bad variable name {name!r}")
        for d in self.var_bidegrees:
            if d[0] < 0 or d[1] < 0:
                raise AlgebraError("bidegrees must be non-negative")
            if not self.affine and d == (0, 0):
                raise AlgebraError("zero bidegree vector for a variable")

    # identity is structural so independently built rings compare equal
    def _sig(self):
        return (self.field.characteristic, self.var_names, self.var_bidegrees,
                self.order, self.affine)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._sig() == other._sig()

    def __hash__(self):
        return hash(self._sig())

    @property
    def p(self) -> int:
        return self.field.characteristic

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """Positive total weights used by degree-compatible orders."""
        if self.affine:
            return (1,) * self.nvars
        return tuple(a + b for a, b in self.var_bidegrees)

    @cached_property
    def key(self) -> KeyCache:
        return KeyCache(self.order.key_function(self.weights))

    @cached_property
    def zero_exps(self) -> tuple:
        return (0,) * self.nvars

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.var_names)}

    def is_bigraded(self) -> bool:
        return any(d[1] for d in self.var_bidegrees)

    def exps_bidegree(self, e) -> Bidegree:
        x = t = 0
        for a, (dx, dt) in zip(e, self.var_bidegrees):
            if a:
                x += a * dx
                t += a * dt
        return (x, t)

    def var(self, name: str) -> "Polynomial":
        try:
            i = self.index[name]
        except KeyError:
            raise AlgebraError(f"unknown variable {name!r}") from None
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    @property
    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.var_names]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {self.zero_exps: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        c = coeff % self.p
        return Polynomial(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        return Polynomial(self, _Parser(self, text).parse())

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.var_names, self.var_bidegrees, order, self.affine)

    def __repr__(self):
        vs = ", ".join(self.var_names)
        return f"PolyRing(F_{self.p}[{vs}], {self.order.describe()})"


def make_ring(field: FieldSpec | int, names: Iterable[str], bidegrees=None,
              order: MonomialOrder = DEGREVLEX) -> PolyRing:
    """Build a ring; ``bidegrees`` defaults to ``(1, 0)`` for every variable.

    Plain integers in ``bidegrees`` are read as x-degrees.
    """
    if isinstance(field, int):
        field = FieldSpec(field)
    names = tuple(names)
    if bidegrees is None:
        bidegrees = [(1, 0)] * len(names)
    bd = tuple((d, 0) if isinstance(d, int) else (int(d[0]), int(d[1])) for d in bidegrees)
    return PolyRing(field, names, bd, order)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable polynomial over a prime field."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            raise AlgebraError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_add(self.terms, other.terms, self.ring.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_sub(self.terms, other.terms, self.ring.p))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_mul(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exps in self.terms)

    def lead_exps(self) -> tuple:
        return max(self.terms, key=self.ring.key.__getitem__)

    def lead_coeff(self) -> int:
        return self.terms[self.lead_exps()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.lead_coeff())
        return self.scale(inv)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})

    def bidegrees(self) -> set:
        return {self.ring.exps_bidegree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def bidegree(self) -> Bidegree:
        degs = self.bidegrees()
        if len(degs) != 1:
            raise AlgebraError(f"{self} is not bihomogeneous")
        return next(iter(degs))

    def degree(self) -> int:
        """Maximal total x-degree (x-grading only)."""
        return max(self.ring.exps_bidegree(e)[0] for e in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: self.ring.key[it[0]], reverse=True)

    def substitute(self, images: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Evaluate at ``images`` (one per variable) in ``target``."""
        target = target or images[0].ring
        return Polynomial(target, substitute_terms(self.terms, [g.terms for g in images],
                                                   target.zero_exps, target.p))

    def __str__(self):
        return format_terms(self.terms, self.ring)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_add(a: dict, b: dict, p: int) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    for e, c in b.items():
        v = (r.get(e, 0) + c) % p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def poly_sub(a: dict, b: dict, p: int) -> dict:
    r = dict(a)
    for e, c in b.items():
        v = (r.get(e, 0) - c) % p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def poly_mul(a: dict, b: dict, p: int) -> dict:
    if len(a) > len(b):
        a, b = b, a
    r: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(map(add, ea, eb))
            v = (r.get(e, 0) + ca * cb) % p
            if v:
                r[e] = v
            else:
                r.pop(e, None)
    return r


def substitute_terms(terms: dict, images: list[dict], one_exps: tuple, p: int) -> dict:
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            if k == 1:
                powers[key] = images[i]
            else:
                half = power(i, k // 2)
                sq = poly_mul(half, half, p)
                powers[key] = poly_mul(sq, images[i], p) if k % 2 else sq
        return powers[key]

    out: dict = {}
    for e, c in terms.items():
        acc = {one_exps: c}
        for i, k in enumerate(e):
            if k:
                acc = poly_mul(acc, power(i, k), p)
                if not acc:
                    break
        out = poly_add(out, acc, p)
    return out


def format_terms(terms: dict, ring: PolyRing) -> str:
    if not terms:
        return "0"
    field = ring.field
    parts = []
    for e, c in sorted(terms.items(), key=lambda it: ring.key[it[0]], reverse=True):
        c = field.symmetric(c)
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(ring.var_names, e) if k
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    """Recursive descent over ``+ - * ^ ( )``, integers and variables."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.p = ring.p
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                break
            col = m.start(m.lastindex) + 1
            if m.group(1):
                self.tokens.append(("int", m.group(1), col))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), col))
            else:
                self.tokens.append(("op", m.group(3), col))
            pos = m.end()
        self.i = 0
        self.end_col = len(text) + 1

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", self.end_col)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg, tok):
        raise PolynomialParseError(msg, tok[2], tok[1])

    def parse(self) -> dict:
        if not self.tokens:
            self.fail("empty polynomial", self.peek())
        r = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token", self.peek())
        return r

    def expr(self):
        sign = 1
        if self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = {e: (-c) % self.p for e, c in acc.items()}
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = poly_add(acc, t, self.p) if op == "+" else poly_sub(acc, t, self.p)
        return acc

    def term(self):
        acc = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = poly_mul(acc, self.power(), self.p)
            elif t[0] in ("name", "int") or (t[0] == "op" and t[1] == "("):
                acc = poly_mul(acc, self.power(), self.p)  # implicit product
            else:
                return acc

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                self.fail("exponent must be a non-negative integer", t)
            k = int(t[1])
            r = {self.ring.zero_exps: 1}
            for _ in range(k):
                r = poly_mul(r, base, self.p)
            return r
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            c = int(t[1]) % self.p
            return {self.ring.zero_exps: c} if c else {}
        if t[0] == "name":
            i = self.ring.index.get(t[1])
            if i is None:
                self.fail("undeclared variable", t)
            e = [0] * self.ring.nvars
            e[i] = 1
            return {tuple(e): 1}
        if t[0] == "op" and t[1] == "(":
            r = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail("expected ')'", close)
            return r
        if t[0] == "op" and t[1] == "-":
            return {e: (-c) % self.p for e, c in self.atom().items()}
        self.fail("unexpected token", t)


# ---------------------------------------------------------------------------
# ring maps and charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RingMap:
    source: PolyRing
    target: PolyRing
    images: tuple[Polynomial, ...]
    target_relations: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if len(self.images) != self.source.nvars:
            raise AlgebraError("one image per source variable required")
        for g in self.images + self.target_relations:
            if g.ring != self.target:
                raise AlgebraError("images must live in the target ring")

    def __call__(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source:
            raise AlgebraError("polynomial not in the source ring")
        return f.substitute(list(self.images), self.target)

    def is_degree_preserving(self) -> bool:
        for g, d in zip(self.images, self.source.var_bidegrees):
            if g and g.bidegrees() != {d}:
                return False
        return True


def dehomogenize_chart(ring: PolyRing, relations: Sequence[Polynomial], chart_var: str):
    """Set ``chart_var`` to 1: the coordinate ring of the chart where it is nonzero.

    Returns the ring on the remaining variables (affine; x-degrees dropped,
    t-degrees kept) and the dehomogenised relations.
    """
    if chart_var not in ring.index:
        raise AlgebraError(f"unknown variable {chart_var!r}")
    i = ring.index[chart_var]
    if ring.var_bidegrees[i] != (1, 0):
        raise AlgebraError(f"{chart_var} is not a base variable; charts come from Proj of the base")
    keep = [j for j in range(ring.nvars) if j != i]
    new = PolyRing(ring.field, tuple(ring.var_names[j] for j in keep),
                   tuple((0, ring.var_bidegrees[j][1]) for j in keep),
                   DEGREVLEX, affine=True)
    out = []
    for f in relations:
        if f.ring != ring:
            raise AlgebraError("relation not in the given ring")
        terms: dict = {}
        for e, c in f.terms.items():
            ee = tuple(e[j] for j in keep)
            v = (terms.get(ee, 0) + c) % ring.p
            if v:
                terms[ee] = v
            else:
                terms.pop(ee, None)
        out.append(Polynomial(new, terms))
    return new, out


def homogenize(f: Polynomial, ring: PolyRing, chart_var: str) -> Polynomial:
    """Inverse of dehomogenisation with respect to the x-grading of ``ring``."""
    i = ring.index[chart_var]
    others = [n for n in ring.var_names if n != chart_var]
    src_idx = [f.ring.index[n] for n in others]
    raw = []
    for e, c in f.terms.items():
        full = [0] * ring.nvars
        for n, j in zip(others, src_idx):
            full[ring.index[n]] = e[j]
        raw.append((full, c))
    top = max(ring.exps_bidegree(tuple(full))[0] for full, _ in raw) if raw else 0
    terms = {}
    for full, c in raw:
        full[i] = top - ring.exps_bidegree(tuple(full))[0]
        terms[tuple(full)] = c
    return Polynomial(ring, terms)
