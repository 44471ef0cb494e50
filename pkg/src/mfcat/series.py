"""Exact multivariate arithmetic in k[x1..xn] and its degree-truncated completion.

A series is a dict from exponent vectors to nonzero field scalars. A context
with ``truncation=None`` is the pure polynomial ring (nothing is ever
dropped); a finite truncation N silently discards all products of total
degree exceeding N, realizing the degree-N quotient of the completion.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .errors import ContextMismatchError, PreconditionError
from .fields import QQ


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return tuple("xyz"[:n])
    return tuple(f"x{i + 1}" for i in range(n))


class RingCtx:
    """Shared context for series: variable names, coefficient field, truncation.

    Contexts compare by value so a deserialized context is interchangeable
    with the one it was written from. Mixed-context arithmetic raises.
    """

    __slots__ = ("names", "field", "truncation")

    def __init__(self, names, field=QQ, truncation=None):
        if isinstance(names, int):
            names = default_names(names)
        names = tuple(names)
        if len(names) < 1:
            raise PreconditionError("a ring context needs at least one variable")
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate variable names in {names}")
        if truncation is not None and truncation < 1:
            raise PreconditionError("finite truncation must be >= 1")
        self.names = names
        self.field = field
        self.truncation = truncation

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def with_truncation(self, truncation):
        return RingCtx(self.names, self.field, truncation)

    def doubled(self) -> "RingCtx":
        """Context of the two-sided ring: original variables then primed copies."""
        return RingCtx(
            self.names + tuple(f"{n}'" for n in self.names), self.field, self.truncation
        )

    def __eq__(self, other):
        return (
            isinstance(other, RingCtx)
            and self.names == other.names
            and self.field == other.field
            and self.truncation == other.truncation
        )

    def __hash__(self):
        return hash((self.names, self.field, self.truncation))

    def __repr__(self):
        trunc = "inf" if self.truncation is None else self.truncation
        return f"RingCtx({','.join(self.names)}; {self.field!r}; trunc={trunc})"


def _check_ctx(a: "Series", b: "Series"):
    if a.ctx != b.ctx:
        raise ContextMismatchError(f"context mismatch: {a.ctx!r} vs {b.ctx!r}")


class Series:
    """Element of k[x1..xn] (or its degree-truncated completion). Immutable."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingCtx, terms: dict):
        cap = ctx.truncation
        zero = ctx.field.zero
        clean = {}
        for exp, coeff in terms.items():
            if coeff == zero:
                continue
            if cap is not None and sum(exp) > cap:
                continue
            clean[tuple(exp)] = coeff
        self.ctx = ctx
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: RingCtx) -> "Series":
        return Series(ctx, {})

    @staticmethod
    def constant(ctx: RingCtx, value) -> "Series":
        return Series(ctx, {(0,) * ctx.n_vars: ctx.field.of(value)})

    @staticmethod
    def one(ctx: RingCtx) -> "Series":
        return Series.constant(ctx, 1)

    @staticmethod
    def variable(ctx: RingCtx, i: int) -> "Series":
        if not 0 <= i < ctx.n_vars:
            raise PreconditionError(f"variable index {i} out of range")
        exp = [0] * ctx.n_vars
        exp[i] = 1
        return Series(ctx, {tuple(exp): ctx.field.one})

    @staticmethod
    def monomial(ctx: RingCtx, exp, coeff=1) -> "Series":
        return Series(ctx, {tuple(exp): ctx.field.of(coeff)})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), self.ctx.field.zero)

    def residue(self):
        """Constant term, i.e. the image in the residue field."""
        return self.terms.get((0,) * self.ctx.n_vars, self.ctx.field.zero)

    def total_degree(self) -> int:
        """Max total degree of a term; -1 for the zero series."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Min total degree of a term; large sentinel for zero."""
        return min((sum(e) for e in self.terms), default=1 << 30)

    def in_maximal_ideal(self) -> bool:
        return self.residue() == self.ctx.field.zero

    def in_maximal_ideal_square(self) -> bool:
        return self.order() >= 2

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        _check_ctx(self, other)
        field = self.ctx.field
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = field.add(out.get(exp, field.zero), c)
            if s == field.zero:
                out.pop(exp, None)
            else:
                out[exp] = s
        return Series(self.ctx, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        neg = self.ctx.field.neg
        return Series(self.ctx, {e: neg(c) for e, c in self.terms.items()})

    def scale(self, scalar):
        field = self.ctx.field
        c0 = field.of(scalar)
        if c0 == field.zero:
            return Series.zero(self.ctx)
        return Series(self.ctx, {e: field.mul(c0, c) for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        _check_ctx(self, other)
        field = self.ctx.field
        cap = self.ctx.truncation
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if cap is not None and d1 + sum(e2) > cap:
                    continue
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = field.add(out.get(exp, field.zero), field.mul(c1, c2))
                if s == field.zero:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return Series(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PreconditionError("negative powers are not ring elements")
        result = Series.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Series) and self.ctx == other.ctx and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- calculus ------------------------------------------------------------

    def partial_derivative(self, i: int) -> "Series":
        if not 0 <= i < self.ctx.n_vars:
            raise PreconditionError(f"variable index {i} out of range")
        field = self.ctx.field
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            out[tuple(new)] = field.mul(field.of(exp[i]), c)
        return Series(self.ctx, out)

    def split_by_variable(self, i: int):
        """Write self = x_i * quotient + remainder with remainder free of x_i."""
        if not 0 <= i < self.ctx.n_vars:
            raise PreconditionError(f"variable index {i} out of range")
        quot, rem = {}, {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                rem[exp] = c
            else:
                new = list(exp)
                new[i] -= 1
                quot[tuple(new)] = c
        return Series(self.ctx, quot), Series(self.ctx, rem)

    def set_zero(self, indices) -> "Series":
        """Substitute x_i = 0 for every index in `indices`."""
        idx = set(indices)
        out = {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        return Series(self.ctx, out)

    def relabel(self, new_ctx: RingCtx, var_map) -> "Series":
        """Push into `new_ctx`, sending variable i to variable var_map[i]."""
        if self.ctx.field != new_ctx.field:
            raise ContextMismatchError("relabel cannot change the coefficient field")
        out = {}
        for exp, c in self.terms.items():
            new = [0] * new_ctx.n_vars
            for i, e in enumerate(exp):
                if e:
                    new[var_map[i]] += e
            out[tuple(new)] = c
        return Series(new_ctx, out)

    def __repr__(self):
        return f"Series({format_series(self)})"


def format_series(s: Series) -> str:
    if s.is_zero():
        return "0"
    field = s.ctx.field
    parts = []
    for exp in sorted(s.terms, key=monomial_sort_key):
        c = s.terms[exp]
        mono = "*".join(
            f"{name}^{e}" if e > 1 else name
            for name, e in zip(s.ctx.names, exp)
            if e
        )
        cs = field.to_str(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = f"-{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = cs
        parts.append(term)
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


# -- monomial enumeration ----------------------------------------------------


def monomial_sort_key(exp):
    """Graded order, largest-first-variable listed first within a degree."""
    return (sum(exp), tuple(-e for e in exp))


def monomials_of_degree(n_vars: int, degree: int):
    """All exponent vectors of total degree exactly `degree`, canonical order."""
    out = []
    for combo in combinations_with_replacement(range(n_vars), degree):
        exp = [0] * n_vars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    out.sort(key=monomial_sort_key)
    return out


def monomial_basis(ctx_or_n, max_degree: int):
    """All exponent vectors of total degree <= max_degree in graded-lex order."""
    if max_degree < 0:
        raise PreconditionError("max_degree must be >= 0")
    n = ctx_or_n.n_vars if isinstance(ctx_or_n, RingCtx) else int(ctx_or_n)
    out = []
    for d in range(max_degree + 1):
        out.extend(monomials_of_degree(n, d))
    return out


# -- the two-sided ring -------------------------------------------------------


def embed_left(s: Series, doubled: RingCtx) -> Series:
    """Include k[x] into k[x] (x) k[x] as the left factor."""
    return s.relabel(doubled, tuple(range(s.ctx.n_vars)))


def embed_right(s: Series, doubled: RingCtx) -> Series:
    """Include k[x] into k[x] (x) k[x] as the right (primed) factor."""
    n = s.ctx.n_vars
    return s.relabel(doubled, tuple(range(n, 2 * n)))


def difference_quotient(w: Series, i: int, doubled: RingCtx | None = None) -> Series:
    """The i-th divided difference of w in the two-sided ring.

    Returns (w(y1..y_{i-1}, x_i..x_n) - w(y1..y_i, x_{i+1}..x_n)) / (x_i - y_i),
    where y_j denotes the primed copy of x_j. The division is exact; summing
    (x_i - y_i) times the quotients over all i telescopes to w(x) - w(y).
    """
    n = w.ctx.n_vars
    if not 0 <= i < n:
        raise PreconditionError(f"variable index {i} out of range")
    if doubled is None:
        doubled = w.ctx.doubled()
    field = w.ctx.field
    out = {}
    for exp, c in w.terms.items():
        if exp[i] == 0:
            continue
        base = [0] * (2 * n)
        for j in range(i):
            base[n + j] = exp[j]
        for j in range(i + 1, n):
            base[j] = exp[j]
        # (x_i^a - y_i^a) / (x_i - y_i) = sum_t x_i^t y_i^(a-1-t)
        for t in range(exp[i]):
            e = list(base)
            e[i] += t
            e[n + i] += exp[i] - 1 - t
            key = tuple(e)
            s = field.add(out.get(key, field.zero), c)
            if s == field.zero:
                out.pop(key, None)
            else:
                out[key] = s
    return Series(doubled, out)
