"""Finite fields GF(p^k) with table-driven, vectorised arithmetic.

Elements are encoded as integers ``0 <= code < q``: the residue vector
``(c_0, ..., c_{k-1})`` of the representative polynomial ``c_0 + c_1 x + ...``
maps to ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.  Arrays of codes (``int64``)
are the working currency of the whole package; :class:`FieldElement` wraps a
single code for scalar use.
"""

from __future__ import annotations

import functools
import itertools
import re
from typing import Iterable, Sequence

import numpy as np

MAX_P = 13
MAX_K = 3

# Conway polynomials, monic, coefficients low degree first.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
}


class FieldError(ValueError):
    """Invalid field parameters or an illegal operation (e.g. division by zero)."""


class ParseError(ValueError):
    """Malformed field or element string; ``pos`` is the 0-based offending column."""

    def __init__(self, msg: str, text: str = "", pos: int = 0):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = [c % p for c in poly]
    deg = len(poly) - 1
    if deg < 1 or poly[-1] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(poly, list(low) + [1], p):
                return False
    return True


class FiniteField:
    """GF(p^k) with precomputed addition, multiplication, negation and inverse tables."""

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus) if modulus is not None else None
        self.weights = p ** np.arange(k, dtype=np.int64)
        codes = np.arange(self.q, dtype=np.int64)
        self.digits = (codes[:, None] // self.weights[None, :]) % p
        self.mult_tensor = self._mult_tensor()
        self.add_t = self._encode((self.digits[:, None, :] + self.digits[None, :, :]) % p)
        self.neg_t = self._encode((-self.digits) % p)
        self.mul_t = self._mul_table()
        self.inv_t = np.zeros(self.q, dtype=np.int64)
        nz, inv = np.nonzero(self.mul_t[1:, 1:] == 1)
        self.inv_t[nz + 1] = inv + 1
        self.frob_t = self.pow(codes, p)

    # -- construction helpers -------------------------------------------------

    def _mult_tensor(self) -> np.ndarray:
        """T[i, j, :] = coefficients of x^i * x^j reduced mod the modulus."""
        k, p = self.k, self.p
        powers = np.zeros((2 * k - 1, k), dtype=np.int64)
        powers[:k] = np.eye(k, dtype=np.int64)
        if k > 1:
            low = -np.array(self.modulus[:k], dtype=np.int64) % p  # x^k in terms of 1..x^{k-1}
            for d in range(k, 2 * k - 1):
                prev = powers[d - 1]
                shifted = np.concatenate([[0], prev[:-1]])
                powers[d] = (shifted + prev[-1] * low) % p
        i, j = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
        return powers[i + j]

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.weights

    def _mul_table(self) -> np.ndarray:
        q, D = self.q, self.digits
        if self.k == 1:
            a = np.arange(q, dtype=np.int64)
            return np.outer(a, a) % self.p
        out = np.empty((q, q), dtype=np.int64)
        step = max(1, 2**20 // (q * self.k))
        for lo in range(0, q, step):
            blk = np.einsum("ai,bj,ijm->abm", D[lo:lo + step], D, self.mult_tensor) % self.p
            out[lo:lo + step] = self._encode(blk)
        return out

    # -- identity ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"FiniteField({self.spec_string()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def spec_string(self) -> str:
        """Canonical ``p``, or ``p^k:c0,...,ck`` for extension fields."""
        if self.k == 1:
            return str(self.p)
        return f"{self.p}^{self.k}:" + ",".join(map(str, self.modulus))

    @property
    def order(self) -> int:
        return self.q

    # -- vectorised arithmetic on code arrays -------------------------------

    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.add_t[a, self.neg_t[b]]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise FieldError("division by zero")
        return self.inv_t[a]

    def div(self, a, b):
        return self.mul_t[a, self.inv(b)]

    def frob(self, a):
        return self.frob_t[a]

    def pow(self, a, e: int):
        """Elementwise ``a**e`` by square-and-multiply; negative ``e`` inverts first."""
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.inv(a), -e
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.mul_t[result, base]
            base = self.mul_t[base, base]
            e >>= 1
        return result

    def scal(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return int(n) % self.p

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        if axis is None:
            return self._encode(self.digits[a.ravel()].sum(axis=0) % self.p)
        axis = axis if axis >= 0 else a.ndim + axis
        return self._encode(self.digits[a].sum(axis=axis) % self.p)

    def einsum(self, subscripts: str, x, y):
        """Field analogue of ``np.einsum`` for two operands (lowercase labels only)."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.k == 1:
            return np.einsum(subscripts, x, y) % self.p
        ins, out = subscripts.split("->")
        sx, sy = ins.split(",")
        res = np.einsum(f"{sx}Y,{sy}Z,YZX->{out}X", self.digits[x], self.digits[y],
                        self.mult_tensor, optimize=True) % self.p
        return self._encode(res)

    def dot(self, x, y):
        return self.sum(self.mul(np.asarray(x), np.asarray(y)))

    def scatter_sum(self, x, targets, size: int):
        """Sum the columns of ``x`` (N, T) into ``size`` buckets given by ``targets``."""
        onehot = np.zeros((len(targets), size), dtype=np.int64)
        onehot[np.arange(len(targets)), targets] = 1
        return self.einsum("nt,ts->ns", x, onehot)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(1, self.q, size=shape, dtype=np.int64)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def all_vectors(self, n: int) -> np.ndarray:
        """Every vector of F^n, shape (q**n, n), first coordinate varying slowest."""
        grids = np.meshgrid(*([self.elements()] * n), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1) if n else np.zeros((1, 0), np.int64)

    # -- scalars ---------------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.code(value))

    def code(self, value) -> int:
        """Code of a FieldElement, string, coefficient sequence or number.

        Python ints are integers (reduced into the prime field); numpy integer
        scalars are taken to be element codes already.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value.code
        if isinstance(value, np.integer):
            if not 0 <= value < self.q:
                raise FieldError(f"code {value} out of range for GF({self.q})")
            return int(value)
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            return self.parse(value)
        coeffs = list(value)
        if len(coeffs) > self.k:
            raise FieldError(f"expected at most {self.k} coefficients")
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def codes(self, values: Iterable) -> np.ndarray:
        """Vector of codes; an integer ndarray is taken as codes unchanged."""
        if isinstance(values, np.ndarray) and values.dtype.kind in "iu":
            if values.size and (values.min() < 0 or values.max() >= self.q):
                raise FieldError(f"codes out of range for GF({self.q})")
            return values.astype(np.int64)
        return np.array([self.code(v) for v in values], dtype=np.int64)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of ``x`` in GF(p)[x]/(modulus)."""
        if self.k == 1:
            raise FieldError("prime field has no generator symbol x")
        return FieldElement(self, self.p)

    # -- text ----------------------------------------------------------------

    def format(self, code: int) -> str:
        code = int(code)
        if self.k == 1:
            return str(code)
        coeffs = [(code // self.p**i) % self.p for i in range(self.k)]
        terms = []
        for d in range(self.k - 1, -1, -1):
            c = coeffs[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
            if d == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    _TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<x>x)|(?P<op>[-+*^]))")

    def parse(self, text: str) -> int:
        """Parse sums of terms ``c``, ``c*x^e``, ``cx^e``, ``x``; ``x`` only for k > 1."""
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            mt = self._TOKEN.match(stripped, pos)
            if not mt:
                raise ParseError("unexpected character", text, pos)
            kind = mt.lastgroup
            tokens.append((kind, mt.group(kind), mt.start(kind)))
            pos = mt.end()
        if not tokens:
            raise ParseError("empty element", text, 0)
        acc = 0
        i = 0
        expect_term = True
        while i < len(tokens):
            sign = 1
            while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
                if tokens[i][1] == "-":
                    sign = -sign
                i += 1
                expect_term = True
            if i >= len(tokens):
                raise ParseError("dangling sign", text, len(stripped))
            if not expect_term:
                raise ParseError("expected + or -", text, tokens[i][2])
            coef, degree = 1, 0
            kind, val, at = tokens[i]
            if kind == "num":
                coef = int(val)
                i += 1
                if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "x":
                        raise ParseError("expected x after *", text,
                                         tokens[i][2] if i < len(tokens) else len(stripped))
                kind = tokens[i][0] if i < len(tokens) and tokens[i][0] == "x" else None
                if kind:
                    at = tokens[i][2]
            if kind == "x":
                if self.k == 1:
                    raise ParseError("symbol x is not allowed in a prime field", text, at)
                degree = 1
                i += 1
                if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "num":
                        raise ParseError("expected exponent", text,
                                         tokens[i][2] if i < len(tokens) else len(stripped))
                    degree = int(tokens[i][1])
                    i += 1
            elif kind is not None:
                raise ParseError("expected a term", text, at)
            monomial = int(self.pow(self.p, degree)) if degree else 1
            acc = int(self.add(acc, self.mul(monomial, (sign * coef) % self.p)))
            expect_term = False
        return acc


class FieldElement:
    """Immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", int(code))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        F = self.field
        return tuple(int(d) for d in F.digits[self.code])

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed fields")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.code(other)
        return NotImplemented

    def _wrap(self, code) -> FieldElement:
        return FieldElement(self.field, int(code))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.code))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.code, int(e)))

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.code))

    def frobenius(self) -> FieldElement:
        return self._wrap(self.field.frob(self.code))

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.code == o

    def __hash__(self) -> int:
        return hash((self.field, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"FieldElement({self.field.format(self.code)!r}, {self.field.spec_string()})"

    def __str__(self) -> str:
        return self.field.format(self.code)


def arith(x: FieldElement, y: FieldElement | int | None, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, sub, mul, div, neg, inv, pow}; ``pow`` takes an int ``y``."""
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    if op == "pow":
        return x ** int(y)
    if isinstance(y, FieldElement) and y.field != x.field:
        raise FieldError("mixed fields")
    ops = {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__, "div": x.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](y)


def frobenius(x: FieldElement) -> FieldElement:
    return x.frobenius()


@functools.lru_cache(maxsize=None)
def _make(p: int, k: int, modulus: tuple[int, ...] | None) -> FiniteField:
    return FiniteField(p, k, modulus)


def field_make(p: int, k: int = 1, modulus: Sequence[int] | None = None, *,
               max_p: int = MAX_P, max_k: int = MAX_K) -> FiniteField:
    """Validated, cached GF(p^k).  ``modulus`` is monic, low degree first."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p > max_p or k > max_k:
        raise FieldError(f"unsupported size GF({p}^{k}); bounds are p <= {max_p}, k <= {max_k}")
    if k == 1:
        if modulus is not None and len(modulus) not in (0, 2):
            raise FieldError("prime field takes no modulus")
        return _make(p, 1, None)
    if modulus is None:
        if (p, k) not in CONWAY:
            raise FieldError(f"no built-in modulus for GF({p}^{k}); supply one")
        modulus = CONWAY[p, k]
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {k}")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    return _make(p, k, modulus)


_SPEC = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*(?::\s*(.*))?)?\s*$")


def parse_field(text: str, **bounds) -> FiniteField:
    """Parse ``p``, ``p^k`` or ``p^k:c0,c1,...,ck``."""
    mt = _SPEC.match(text)
    if not mt:
        bad = next((i for i, ch in enumerate(text) if not (ch.isdigit() or ch in "^:, ")), 0)
        raise ParseError("malformed field spec", text, bad)
    p = int(mt.group(1))
    k = int(mt.group(2) or 1)
    modulus = None
    if mt.group(3) is not None:
        parts = mt.group(3).split(",")
        try:
            modulus = [int(c) for c in parts]
        except ValueError:
            raise ParseError("modulus coefficients must be integers", text, mt.start(3)) from None
    return field_make(p, k, modulus, **bounds)
