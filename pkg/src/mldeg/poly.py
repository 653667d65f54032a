"""Exact multivariate polynomial arithmetic over arbitrary-precision rationals.

Coefficients are fractions.Fraction throughout; no floats enter the kernel.
A polynomial is a map from exponent vectors to coefficients, kept canonical
(no zero coefficients stored), with graded-lexicographic order fixed for
printing and for every deterministic iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd

ROLES = ("unknown", "lagrange", "count", "constant")


class ContextMismatchError(ValueError):
    """Operands live in different variable contexts."""


class NonExactDivisionError(ArithmeticError):
    """Exact division requested but the divisor does not divide the dividend."""


@dataclass(frozen=True)
class VarContext:
    """An ordered tuple of named variables with roles.

    Roles: unknown (model/parameter variables), lagrange (at most one
    multiplier symbol), count (observation symbols), constant (K_e, radicals).
    """

    names: tuple[str, ...]
    roles: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) != len(self.roles):
            raise ValueError("names and roles must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        for r in self.roles:
            if r not in ROLES:
                raise ValueError(f"unknown role {r!r}")
        if self.roles.count("lagrange") > 1:
            raise ValueError("at most one lagrange variable")

    @classmethod
    def of(cls, *pairs: tuple[str, str]) -> "VarContext":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"variable {name!r} not in context {self.names}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def drop(self, names) -> "VarContext":
        gone = set(names)
        keep = [(n, r) for n, r in zip(self.names, self.roles) if n not in gone]
        return VarContext(tuple(n for n, _ in keep), tuple(r for _, r in keep))

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)


def _gl_key(exponents: tuple[int, ...]):
    # graded lexicographic: total degree first, then lexicographic on the vector
    return (sum(exponents), exponents)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected rational scalar, got {type(value).__name__}")


class MPoly:
    """Multivariate polynomial with Fraction coefficients over a VarContext."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: VarContext, terms: dict):
        self.ctx = ctx
        clean = {}
        width = len(ctx)
        for exp, coeff in terms.items():
            coeff = _as_fraction(coeff)
            if coeff == 0:
                continue
            if len(exp) != width or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for context of width {width}")
            clean[tuple(exp)] = coeff
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> "MPoly":
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx: VarContext, value) -> "MPoly":
        return cls(ctx, {(0,) * len(ctx): _as_fraction(value)})

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> "MPoly":
        exp = [0] * len(ctx)
        exp[ctx.index(name)] = 1
        return cls(ctx, {tuple(exp): Fraction(1)})

    # -- inspection --------------------------------------------------------

    def items(self):
        """Terms in descending graded-lex order."""
        return [(e, self._terms[e]) for e in sorted(self._terms, key=_gl_key, reverse=True)]

    def term_map(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        i = self.ctx.index(name)
        return max(e[i] for e in self._terms)

    def valuation_in(self, name: str) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        i = self.ctx.index(name)
        return min(e[i] for e in self._terms)

    def uses(self, name: str) -> bool:
        i = self.ctx.index(name)
        return any(e[i] > 0 for e in self._terms)

    def coeff_of_power(self, name: str, k: int) -> "MPoly":
        """Coefficient of name**k, as a polynomial with that exponent zeroed."""
        i = self.ctx.index(name)
        out = {}
        for exp, c in self._terms.items():
            if exp[i] == k:
                e = list(exp)
                e[i] = 0
                out[tuple(e)] = c
        return MPoly(self.ctx, out)

    def as_univariate(self, name: str) -> dict:
        """Map power -> coefficient polynomial (exponent of name zeroed)."""
        i = self.ctx.index(name)
        buckets: dict[int, dict] = {}
        for exp, c in self._terms.items():
            e = list(exp)
            k = e[i]
            e[i] = 0
            buckets.setdefault(k, {})[tuple(e)] = c
        return {k: MPoly(self.ctx, t) for k, t in buckets.items()}

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"context mismatch: {self.ctx.names} vs {other.ctx.names}"
                )
            return other
        return MPoly.const(self.ctx, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return MPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, Fraction(0)) + c1 * c2
        return MPoly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.ctx, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self._terms.items())))

    # -- calculus / maps ----------------------------------------------------

    def partial_derivative(self, name: str) -> "MPoly":
        i = self.ctx.index(name)
        out = {}
        for exp, c in self._terms.items():
            if exp[i] == 0:
                continue
            e = list(exp)
            e[i] -= 1
            out[tuple(e)] = out.get(tuple(e), Fraction(0)) + c * exp[i]
        return MPoly(self.ctx, out)

    def substitute(self, bindings: dict) -> "MPoly":
        """Simultaneous substitution; bound variables that end up unused are
        dropped from the context of the result."""
        values = {}
        for name, value in bindings.items():
            i = self.ctx.index(name)
            if isinstance(value, MPoly):
                values[i] = self._coerce(value)
            else:
                values[i] = MPoly.const(self.ctx, value)
        result = MPoly.zero(self.ctx)
        for exp, c in self._terms.items():
            kept = list(exp)
            factor = MPoly.const(self.ctx, c)
            for i, image in values.items():
                if exp[i]:
                    factor = factor * image ** exp[i]
                kept[i] = 0
            result = result + factor * MPoly(self.ctx, {tuple(kept): Fraction(1)})
        unused = [self.ctx.names[i] for i in values if not result.uses(self.ctx.names[i])]
        if unused:
            result = result.cast(self.ctx.drop(unused))
        return result

    def cast(self, new_ctx: VarContext) -> "MPoly":
        """Re-express over new_ctx; every variable actually used must exist there."""
        mapping = []
        for i, name in enumerate(self.ctx.names):
            mapping.append(new_ctx.names.index(name) if name in new_ctx else None)
        out = {}
        for exp, c in self._terms.items():
            e = [0] * len(new_ctx)
            for i, k in enumerate(exp):
                if k == 0:
                    continue
                j = mapping[i]
                if j is None:
                    raise ValueError(f"variable {self.ctx.names[i]!r} used but absent from target context")
                e[j] = k
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + c
        return MPoly(new_ctx, out)

    def compose(self, images: dict, target_ctx: VarContext) -> "MPoly":
        """Total ring map: every context variable must be sent to an MPoly
        over target_ctx (or a rational scalar)."""
        sent = []
        for name in self.ctx.names:
            if name not in images:
                raise ValueError(f"no image given for {name!r}")
            value = images[name]
            if not isinstance(value, MPoly):
                value = MPoly.const(target_ctx, value)
            elif value.ctx != target_ctx:
                raise ContextMismatchError("image not over target context")
            sent.append(value)
        result = MPoly.zero(target_ctx)
        for exp, c in self._terms.items():
            term = MPoly.const(target_ctx, c)
            for i, k in enumerate(exp):
                if k:
                    term = term * sent[i] ** k
            result = result + term
        return result

    def eval_complex(self, point: dict) -> complex:
        """Evaluate at a complex point binding every variable that appears.

        Terms are accumulated in descending graded-lex order with cached
        variable powers, so identical inputs give bit-identical results.
        """
        powers: list[list[complex]] = []
        for i, name in enumerate(self.ctx.names):
            top = max((e[i] for e in self._terms), default=0)
            if top and name not in point:
                raise ValueError(f"unbound variable {name!r}")
            v = complex(point[name]) if name in point else 0j
            row = [1.0 + 0j]
            for _ in range(top):
                row.append(row[-1] * v)
            powers.append(row)
        total = 0j
        for exp in sorted(self._terms, key=_gl_key, reverse=True):
            term = complex(self._terms[exp])
            for i, k in enumerate(exp):
                if k:
                    term *= powers[i][k]
            total += term
        return total

    def eval_exact(self, point: dict) -> Fraction:
        """Exact evaluation at a rational point binding every variable."""
        values = []
        for name in self.ctx.names:
            if name not in point:
                raise ValueError(f"unbound variable {name!r}")
            values.append(_as_fraction(point[name]))
        total = Fraction(0)
        for exp in sorted(self._terms, key=_gl_key, reverse=True):
            term = self._terms[exp]
            for i, k in enumerate(exp):
                if k:
                    term *= values[i] ** k
            total += term
        return total

    # -- printing -----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms, key=_gl_key, reverse=True):
            c = self._terms[exp]
            factors = []
            for name, k in zip(self.ctx.names, exp):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"MPoly({self})"


def degree_profile(a: MPoly, name: str) -> tuple[int, int]:
    """(degree, valuation) of a nonzero polynomial in one variable."""
    if a.is_zero():
        raise ValueError("degree profile of the zero polynomial is undefined")
    return a.degree_in(name), a.valuation_in(name)


def exact_divide(a: MPoly, b: MPoly) -> MPoly:
    """Quotient a/b when b divides a exactly; NonExactDivisionError otherwise.

    Standard single-divisor reduction in graded-lex order: the leading term
    of the running remainder must always be divisible by the leading term of
    b, which characterizes exact divisibility over an integral domain.
    """
    if b.ctx != a.ctx:
        raise ContextMismatchError("operands in different contexts")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return MPoly.zero(a.ctx)
    if b.is_constant():
        c = b.constant_value()
        return MPoly(a.ctx, {e: q / c for e, q in a.term_map().items()})
    bt = b.term_map()
    lead_b = max(bt, key=_gl_key)
    cb = bt[lead_b]
    rem = a.term_map()
    quo: dict = {}
    while rem:
        lead_r = max(rem, key=_gl_key)
        diff = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(d < 0 for d in diff):
            raise NonExactDivisionError("non-exact division (corrupt elimination state)")
        qc = rem[lead_r] / cb
        quo[diff] = qc
        for eb, c in bt.items():
            key = tuple(x + y for x, y in zip(diff, eb))
            new = rem.get(key, Fraction(0)) - qc * c
            if new == 0:
                rem.pop(key, None)
            else:
                rem[key] = new
    return MPoly(a.ctx, quo)


@dataclass(frozen=True)
class PolyMatrix:
    """Rectangular matrix of MPoly entries sharing one context."""

    entries: tuple[tuple[MPoly, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        width = len(self.entries[0])
        ctx = self.entries[0][0].ctx
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for e in row:
                if e.ctx != ctx:
                    raise ContextMismatchError("matrix entries in different contexts")

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0])

    @property
    def ctx(self) -> VarContext:
        return self.entries[0][0].ctx


def determinant_fraction_free(m: PolyMatrix) -> MPoly:
    """Determinant by the Bareiss fraction-free elimination.

    Every division performed is exact by the Bareiss identity, so the
    computation stays inside the polynomial ring; row swaps flip the sign.
    """
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    a = [list(row) for row in m.entries]
    if n == 1:
        return a[0][0]
    ctx = m.ctx
    sign = 1
    prev = MPoly.const(ctx, 1)
    zero = MPoly.zero(ctx)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev)
            a[i][k] = zero
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_matrix(f: MPoly, g: MPoly, name: str) -> PolyMatrix:
    """Sylvester matrix of f and g viewed as univariate in name.

    Layout: deg(g) shifted rows of f's coefficients (highest power first),
    then deg(f) shifted rows of g's.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("sylvester matrix of a zero polynomial")
    df = f.degree_in(name)
    dg = g.degree_in(name)
    if df + dg < 1:
        raise ValueError("both polynomials have degree 0 in the eliminated variable")
    ctx = f.ctx
    zero = MPoly.zero(ctx)
    fc = f.as_univariate(name)
    gc = g.as_univariate(name)
    frow = [fc.get(k, zero) for k in range(df, -1, -1)]
    grow = [gc.get(k, zero) for k in range(dg, -1, -1)]
    size = df + dg
    rows = []
    for i in range(dg):
        rows.append(tuple([zero] * i + frow + [zero] * (size - len(frow) - i)))
    for i in range(df):
        rows.append(tuple([zero] * i + grow + [zero] * (size - len(grow) - i)))
    return PolyMatrix(tuple(rows))


def resultant(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Resultant in name, as the Bareiss determinant of the Sylvester matrix.

    Sign is not normalized; callers compare up to a nonzero rational scalar.
    """
    return determinant_fraction_free(sylvester_matrix(f, g, name))


# -- dense univariate helpers over the rationals ----------------------------


def _require_univariate(f: MPoly, name: str):
    i = f.ctx.index(name)
    for exp in f.term_map():
        for j, k in enumerate(exp):
            if j != i and k != 0:
                raise ValueError(f"polynomial is not univariate in {name!r}")


def dense_coeffs(f: MPoly, name: str) -> list[Fraction]:
    """Ascending coefficient list of a univariate polynomial."""
    _require_univariate(f, name)
    if f.is_zero():
        return []
    i = f.ctx.index(name)
    out = [Fraction(0)] * (f.degree_in(name) + 1)
    for exp, c in f.term_map().items():
        out[exp[i]] = c
    return out


def from_dense(ctx: VarContext, name: str, coeffs) -> MPoly:
    i = ctx.index(name)
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * len(ctx)
            e[i] = k
            terms[tuple(e)] = _as_fraction(c)
    return MPoly(ctx, terms)


def _dense_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _dense_divmod(a: list[Fraction], b: list[Fraction]):
    a = _dense_trim(list(a))
    b = _dense_trim(list(b))
    if not b:
        raise ZeroDivisionError("dense division by zero")
    m = len(b)
    if len(a) < m:
        return [], a
    q = [Fraction(0)] * (len(a) - m + 1)
    inv = 1 / b[-1]
    while len(a) >= m:
        k = len(a) - m
        f = a[-1] * inv
        q[k] = f
        for i in range(m):
            a[i + k] -= f * b[i]
        a.pop()
        _dense_trim(a)
    return q, a


def _dense_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [
        (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]
    return _dense_trim(out)


def _dense_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _dense_trim(list(a)), _dense_trim(list(b))
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _dense_derivative(a: list[Fraction]) -> list[Fraction]:
    return [c * k for k, c in enumerate(a)][1:]


def univariate_gcd(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Monic gcd of two univariate rational polynomials (Euclid)."""
    _require_univariate(f, name)
    _require_univariate(g, name)
    if f.ctx != g.ctx:
        raise ContextMismatchError("operands in different contexts")
    d = _dense_gcd(dense_coeffs(f, name), dense_coeffs(g, name))
    return from_dense(f.ctx, name, d)


def squarefree_part(f: MPoly, name: str) -> MPoly:
    """f divided by gcd(f, f'), made monic: same roots, multiplicity one."""
    _require_univariate(f, name)
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    a = dense_coeffs(f, name)
    g = _dense_gcd(a, _dense_derivative(a))
    q, r = _dense_divmod(a, g)
    assert not _dense_trim(r)
    lead = q[-1]
    return from_dense(f.ctx, name, [c / lead for c in q])


def squarefree_decomposition(f: MPoly, name: str) -> list[tuple[MPoly, int]]:
    """Yun's algorithm: f = c * prod(p_i ** i) with the p_i squarefree, monic.

    Factors of multiplicity i with degree 0 are omitted, so the product of
    the returned factors (with multiplicities) is f up to a rational scalar.
    """
    _require_univariate(f, name)
    if f.is_zero():
        raise ValueError("decomposition of the zero polynomial")
    a = dense_coeffs(f, name)
    if len(a) == 1:
        return []
    a = [c / a[-1] for c in a]
    ap = _dense_derivative(a)
    g = _dense_gcd(a, ap)
    b, _ = _dense_divmod(a, g)
    c, _ = _dense_divmod(ap, g)
    d = _dense_sub(c, _dense_derivative(b))
    out = []
    i = 1
    while len(b) > 1:
        # gcd(b, 0) is monic b, which is exactly the last factor case
        p = _dense_gcd(b, d)
        if len(p) > 1:
            out.append((from_dense(f.ctx, name, p), i))
        b, _ = _dense_divmod(b, p)
        c, _ = _dense_divmod(d, p)
        d = _dense_sub(c, _dense_derivative(b))
        i += 1
    return out


# -- pseudo-division for coefficients that carry constant symbols ------------


def pseudo_rem(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Pseudo-remainder of f by g in name (coefficients may be polynomials)."""
    if g.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    dg = g.degree_in(name)
    lc_g = g.coeff_of_power(name, dg)
    r = f
    while not r.is_zero() and r.degree_in(name) >= dg:
        dr = r.degree_in(name)
        lc_r = r.coeff_of_power(name, dr)
        shift = MPoly.var(f.ctx, name) ** (dr - dg)
        r = lc_g * r - lc_r * shift * g
    return r


def _rational_content(f: MPoly) -> Fraction:
    num = 0
    den = 1
    for c in f.term_map().values():
        num = _int_gcd(num, c.numerator)
        den = den * c.denominator // _int_gcd(den, c.denominator)
    return Fraction(num, den) if num else Fraction(1)


def gcd_degree_in(f: MPoly, g: MPoly, name: str) -> int:
    """Degree in name of gcd(f, g) over the fraction field of the remaining
    variables, via a pseudo-remainder sequence; contents never change it."""
    if f.is_zero():
        return g.degree_in(name) if not g.is_zero() else 0
    if g.is_zero():
        return f.degree_in(name)
    a, b = f, g
    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while not b.is_zero() and b.degree_in(name) > 0:
        r = pseudo_rem(a, b, name)
        if not r.is_zero():
            r = exact_divide(r, MPoly.const(r.ctx, _rational_content(r)))
        a, b = b, r
    if b.is_zero():
        return a.degree_in(name)
    return 0
