"""Truncated power series in s (s^2 = t) and omega-polynomial engine.

Everything the generating function needs — determinant factors via
exp(trace(log(.))) on pencil powers, cosh of a matrix pencil, matrix
exponentials — expanded to a requested order with exact coefficients.
Determinants of series-valued matrices are never computed by cofactor
expansion; only traces of matrix powers enter.

Truncation discipline: producing the coefficients a_0..a_k needs s-order
2k and omega-degree 2k.  Limits are fixed once per computation and every
operation truncates against them.  In every polynomial built here each
omega variable carries exactly one factor of s, so the s-order of a term
equals its omega-degree until the Gaussian average collapses the omegas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import GaussianRational, Matrix, ONE, ZERO

_GR = GaussianRational.of


@dataclass(frozen=True)
class SeriesLimits:
    """Central truncation limits: max omega-degree and max s-order."""

    omega_degree: int
    s_order: int

    def __post_init__(self):
        if self.omega_degree < 0 or self.s_order < 0:
            raise ValueError("truncation limits must be non-negative")


def limits_for_order(k_max: int) -> SeriesLimits:
    return SeriesLimits(2 * k_max, 2 * k_max)


class TruncSeries:
    """Truncated series sum_k c[k] s^k; coefficients beyond `order` dropped."""

    __slots__ = ("order", "c")

    def __init__(self, order: int, coeffs=()):
        c = [ZERO] * (order + 1)
        for k, x in enumerate(coeffs):
            if k > order:
                break
            c[k] = _GR(x)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "c", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls(order, [ONE])

    @classmethod
    def monomial(cls, order: int, k: int, coeff=1) -> "TruncSeries":
        c = [ZERO] * (order + 1)
        if k <= order:
            c[k] = _GR(coeff)
        return cls(order, c)

    def coeff(self, k: int) -> GaussianRational:
        return self.c[k] if k <= self.order else ZERO

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(order, self.c[: order + 1])

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.c)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.c == other.c

    def __hash__(self):
        return hash((self.order, self.c))

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.order, other.order)
        return TruncSeries(n, [self.c[k] + other.c[k] for k in range(n + 1)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.order, other.order)
        return TruncSeries(n, [self.c[k] - other.c[k] for k in range(n + 1)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.order, [-x for x in self.c])

    def scale(self, v) -> "TruncSeries":
        v = _GR(v)
        return TruncSeries(self.order, [v * x for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        out = [ZERO] * (n + 1)
        for i, a in enumerate(self.c):
            if i > n or a.is_zero():
                continue
            for j in range(0, n - i + 1):
                b = other.c[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(n, out)

    __rmul__ = __mul__

    def exp(self) -> "TruncSeries":
        """exp of a series with zero constant term."""
        if not self.c[0].is_zero():
            raise ValueError("series exp needs a zero constant term")
        out = TruncSeries.one(self.order)
        power = TruncSeries.one(self.order)
        fact = 1
        for j in range(1, self.order + 1):
            power = power * self
            if power.is_zero():
                break
            fact *= j
            out = out + power.scale(GaussianRational(1) / GaussianRational(fact))
        return out

    def log(self) -> "TruncSeries":
        """log of a series with unit constant term."""
        if self.c[0] != ONE:
            raise ValueError("series log needs a unit constant term")
        u = self - TruncSeries.one(self.order)
        out = TruncSeries.zero(self.order)
        power = TruncSeries.one(self.order)
        for j in range(1, self.order + 1):
            power = power * u
            if power.is_zero():
                break
            sign = 1 if j % 2 == 1 else -1
            out = out + power.scale(GaussianRational(sign) / GaussianRational(j))
        return out

    def __repr__(self):
        parts = [f"{x!r}*s^{k}" for k, x in enumerate(self.c) if not x.is_zero()]
        return " + ".join(parts) if parts else "0"


class MatrixSeries:
    """Matrix-valued truncated series in s, stored sparsely by s-power."""

    __slots__ = ("dim", "order", "terms")

    def __init__(self, dim: int, order: int, terms=None):
        clean = {}
        for k, m in (terms or {}).items():
            if k <= order and not m.is_zero():
                clean[k] = m
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixSeries is immutable")

    @classmethod
    def identity(cls, dim: int, order: int) -> "MatrixSeries":
        return cls(dim, order, {0: Matrix.identity(dim)})

    @classmethod
    def from_matrix(cls, m: Matrix, order: int, power: int = 0) -> "MatrixSeries":
        return cls(m.rows, order, {power: m})

    @classmethod
    def from_scalar_series(cls, ts: TruncSeries, dim: int) -> "MatrixSeries":
        eye = Matrix.identity(dim)
        return cls(dim, ts.order, {
            k: eye.scale(x) for k, x in enumerate(ts.c) if not x.is_zero()
        })

    def coeff(self, k: int) -> Matrix:
        return self.terms.get(k, Matrix.zeros(self.dim, self.dim))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MatrixSeries):
            return NotImplemented
        return self.dim == other.dim and self.order == other.order and self.terms == other.terms

    def __add__(self, other: "MatrixSeries") -> "MatrixSeries":
        n = min(self.order, other.order)
        out = {}
        for k in sorted(set(self.terms) | set(other.terms)):
            if k > n:
                continue
            a, b = self.terms.get(k), other.terms.get(k)
            out[k] = a + b if a is not None and b is not None else (a if a is not None else b)
        return MatrixSeries(self.dim, n, out)

    def __neg__(self) -> "MatrixSeries":
        return MatrixSeries(self.dim, self.order, {k: -m for k, m in self.terms.items()})

    def scale(self, v) -> "MatrixSeries":
        v = _GR(v)
        return MatrixSeries(self.dim, self.order, {k: m.scale(v) for k, m in self.terms.items()})

    def matmul(self, other: "MatrixSeries") -> "MatrixSeries":
        n = min(self.order, other.order)
        out = {}
        for i in sorted(self.terms):
            if i > n:
                continue
            a = self.terms[i]
            for j in sorted(other.terms):
                if i + j > n:
                    break
                prod = a * other.terms[j]
                k = i + j
                out[k] = out[k] + prod if k in out else prod
        return MatrixSeries(self.dim, n, out)

    def scale_series(self, ts: TruncSeries) -> "MatrixSeries":
        n = min(self.order, ts.order)
        out = {}
        for i in sorted(self.terms):
            if i > n:
                continue
            m = self.terms[i]
            for j in range(0, n - i + 1):
                x = ts.c[j]
                if x.is_zero():
                    continue
                k = i + j
                add = m.scale(x)
                out[k] = out[k] + add if k in out else add
        return MatrixSeries(self.dim, n, out)

    def trace(self) -> TruncSeries:
        return TruncSeries(self.order, [
            self.terms[k].trace() if k in self.terms else ZERO
            for k in range(self.order + 1)
        ])

    def truncate(self, order: int) -> "MatrixSeries":
        return MatrixSeries(self.dim, order, {k: m for k, m in self.terms.items() if k <= order})

    def __repr__(self):
        return f"MatrixSeries(dim={self.dim}, powers={sorted(self.terms)})"


def _mono_key(mono):
    # graded-lex: total degree first, then lexicographic
    return (sum(mono), mono)


def _series_value_product(v1: "MatrixSeries", v2: "MatrixSeries") -> "MatrixSeries":
    """Product of term values; a dim-1 value acts as a scalar series."""
    if v1.dim == v2.dim:
        return v1.matmul(v2)
    if v1.dim == 1:
        return v2.scale_series(v1.trace())
    if v2.dim == 1:
        return v1.scale_series(v2.trace())
    raise ValueError(f"incompatible value dimensions {v1.dim} and {v2.dim}")


class SeriesPoly:
    """Polynomial in omega^1..omega^p with MatrixSeries coefficients.

    Monomials are exponent tuples of length p; iteration is always in
    graded-lex order so reductions are deterministic.
    """

    __slots__ = ("p", "dim", "limits", "terms")

    def __init__(self, p: int, dim: int, limits: SeriesLimits, terms=None):
        clean = {}
        for mono, ms in (terms or {}).items():
            if sum(mono) > limits.omega_degree or ms.is_zero():
                continue
            clean[mono] = ms
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "limits", limits)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesPoly is immutable")

    @classmethod
    def one(cls, p: int, dim: int, limits: SeriesLimits) -> "SeriesPoly":
        mono = (0,) * p
        return cls(p, dim, limits, {mono: MatrixSeries.identity(dim, limits.s_order)})

    @classmethod
    def zero(cls, p: int, dim: int, limits: SeriesLimits) -> "SeriesPoly":
        return cls(p, dim, limits, {})

    def iter_sorted(self):
        for mono in sorted(self.terms, key=_mono_key):
            yield mono, self.terms[mono]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SeriesPoly):
            return NotImplemented
        return (
            self.p == other.p
            and self.dim == other.dim
            and self.limits == other.limits
            and self.terms == other.terms
        )

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        self._check_compatible(other)
        out = dict(self.terms)
        for mono, ms in other.terms.items():
            out[mono] = out[mono] + ms if mono in out else ms
        return SeriesPoly(self.p, self.dim, self.limits, out)

    def scale(self, v) -> "SeriesPoly":
        return SeriesPoly(self.p, self.dim, self.limits, {
            mono: ms.scale(v) for mono, ms in self.terms.items()
        })

    def _check_compatible(self, other: "SeriesPoly"):
        if self.p != other.p:
            raise ValueError("omega variable counts differ")
        if self.limits != other.limits:
            raise ValueError("truncation limits inconsistent")

    def __mul__(self, other: "SeriesPoly") -> "SeriesPoly":
        self._check_compatible(other)
        out = {}
        for m1, v1 in self.iter_sorted():
            d1 = sum(m1)
            for m2, v2 in other.iter_sorted():
                if d1 + sum(m2) > self.limits.omega_degree:
                    continue
                mono = tuple(a + b for a, b in zip(m1, m2))
                prod = _series_value_product(v1, v2)
                if prod.is_zero():
                    continue
                out[mono] = out[mono] + prod if mono in out else prod
        dim = self.dim if self.dim != 1 else other.dim
        return SeriesPoly(self.p, dim, self.limits, out)

    def trace(self) -> "SeriesPoly":
        out = {}
        for mono, ms in self.terms.items():
            tr = ms.trace()
            if not tr.is_zero():
                out[mono] = MatrixSeries.from_scalar_series(tr, 1)
        return SeriesPoly(self.p, 1, self.limits, out)

    def constant_term(self) -> MatrixSeries:
        mono = (0,) * self.p
        return self.terms.get(mono, MatrixSeries(self.dim, self.limits.s_order, {}))

    def exp_scalar(self) -> "SeriesPoly":
        """exp of a scalar-valued (dim 1) polynomial with no constant term."""
        if self.dim != 1:
            raise ValueError("exp_scalar only applies to scalar-valued polynomials")
        if (0,) * self.p in self.terms:
            raise ValueError("exp_scalar needs a vanishing constant term")
        out = SeriesPoly.one(self.p, 1, self.limits)
        power = SeriesPoly.one(self.p, 1, self.limits)
        fact = 1
        jmax = max(self.limits.omega_degree, self.limits.s_order)
        for j in range(1, jmax + 1):
            power = power * self
            if power.is_zero():
                break
            fact *= j
            out = out + power.scale(GaussianRational(1) / GaussianRational(fact))
        return out

    def truncated(self, limits: SeriesLimits) -> "SeriesPoly":
        return SeriesPoly(self.p, self.dim, limits, {
            mono: ms.truncate(limits.s_order)
            for mono, ms in self.terms.items()
            if sum(mono) <= limits.omega_degree
        })


def omega_pencil(mats, limits: SeriesLimits, scale=1) -> SeriesPoly:
    """Degree-one polynomial sum_i omega^i * (s * scale * A_i)."""
    p = len(mats)
    dim = mats[0].rows if p else 1
    scale = _GR(scale)
    terms = {}
    for i, a in enumerate(mats):
        if a.rows != a.cols or a.rows != dim:
            raise ValueError("pencil matrices must be square of a common size")
        mono = tuple(1 if j == i else 0 for j in range(p))
        terms[mono] = MatrixSeries(dim, limits.s_order, {1: a.scale(scale)})
    return SeriesPoly(p, dim, limits, terms)


def log_sinhc_coeffs(order: int) -> TruncSeries:
    """Series of log(sinh(x)/x): x^2/6 - x^4/180 + x^6/2835 - ...

    Only even powers appear; computed by exact series log of sinh(x)/x.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    coeffs = []
    for k in range(order + 1):
        coeffs.append(GaussianRational(1) / GaussianRational(math.factorial(k + 1))
                      if k % 2 == 0 else ZERO)
    return TruncSeries(order, coeffs).log()


def det_sinhc_pencil(mats, scale, exponent, limits: SeriesLimits) -> SeriesPoly:
    """det(sinhc(s*scale*A(omega)))^exponent as a scalar-valued polynomial.

    Computed as exp(exponent * sum_m c_m tr[(s*scale*A(omega))^(2m)]) with
    c_m the log-sinhc coefficients; cofactor expansion never appears.
    """
    p = len(mats)
    if p == 0:
        return SeriesPoly.one(0, 1, limits)
    mmax2 = min(limits.omega_degree, limits.s_order)
    logc = log_sinhc_coeffs(mmax2)
    pen = omega_pencil(mats, limits, scale)
    acc = SeriesPoly.zero(p, 1, limits)
    power = SeriesPoly.one(p, pen.dim, limits)
    for j in range(1, mmax2 + 1):
        power = power * pen
        if power.is_zero():
            break
        if j % 2 == 0:
            cm = logc.coeff(j)
            if not cm.is_zero():
                acc = acc + power.trace().scale(cm)
    return acc.scale(exponent).exp_scalar()


def cosh_pencil(mats, dim: int, limits: SeriesLimits) -> SeriesPoly:
    """cosh(s*R(omega)) = sum_m s^(2m) R(omega)^(2m) / (2m)!, matrix-valued."""
    p = len(mats)
    out = SeriesPoly.one(p, dim, limits)
    if p == 0:
        return out
    pen = omega_pencil(mats, limits, 1)
    power = SeriesPoly.one(p, dim, limits)
    fact = 1
    for j in range(1, min(limits.omega_degree, limits.s_order) + 1):
        power = power * pen
        if power.is_zero():
            break
        fact *= j
        if j % 2 == 0:
            out = out + power.scale(GaussianRational(1) / GaussianRational(fact))
    return out


def matrix_exp_series(m: Matrix, limits: SeriesLimits) -> MatrixSeries:
    """exp(t*M) = sum_k t^k M^k / k! with t = s^2, truncated."""
    if not m.is_square:
        raise ValueError("matrix exponential needs a square matrix")
    out = MatrixSeries.identity(m.rows, limits.s_order)
    power = Matrix.identity(m.rows)
    fact = 1
    for k in range(1, limits.s_order // 2 + 1):
        power = power * m
        if power.is_zero():
            break
        fact *= k
        term = power.scale(GaussianRational(1) / GaussianRational(fact))
        out = out + MatrixSeries.from_matrix(term, limits.s_order, 2 * k)
    return out


def det_sinhc_numeric(b: Matrix, exponent, limits: SeriesLimits) -> TruncSeries:
    """det(sinh(t*B)/(t*B))^exponent as a series in t (= s^2), via tr-log.

    B is the antisymmetric purely-imaginary twist matrix; only whole even
    powers of t appear and all coefficients are real rationals.
    """
    if not b.is_square:
        raise ValueError("twist matrix must be square")
    order = limits.s_order
    mmax = order // 4
    logc = log_sinhc_coeffs(2 * mmax) if mmax else None
    acc = TruncSeries.zero(order)
    power = Matrix.identity(b.rows)
    for m in range(1, mmax + 1):
        power = power * b * b
        if power.is_zero():
            break
        cm = logc.coeff(2 * m)
        acc = acc + TruncSeries.monomial(order, 4 * m, cm * power.trace())
    return acc.scale(exponent).exp()
