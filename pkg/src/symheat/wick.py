"""Gaussian averages over the holonomy variables as formal Wick moments.

The average <.> carries weight exp(-<w, beta w>/4) normalized to <1> = 1,
for ANY invertible symmetric rational beta — indefinite and negative
definite included.  Realizing the average through the Wick pairing rules
(each pair contributes 2 beta^{ij}) makes the contour bookkeeping of the
compact/noncompact cases unnecessary: the resulting coefficients are the
same polynomials either way.

Two independent evaluation routes are provided: average_monomial
enumerates perfect matchings; symmetrized_moment evaluates the closed
form (2k)!/k! beta^((i1 i2 ... i2k-1 i2k)) through coefficient extraction
from powers of the quadratic form (never touching the matching
recursion).  Their exact agreement is an acceptance criterion.
"""
from __future__ import annotations

import math

from .exact import GaussianRational, Matrix, ZERO, invert
from .series import MatrixSeries, SeriesPoly

_GR = GaussianRational.of


class GaussianWeight:
    """Inverse covariance data beta^{ik} for the holonomy average."""

    __slots__ = ("p", "beta", "beta_inv", "_pairing_cache", "_q_powers")

    def __init__(self, beta: Matrix, beta_inv: Matrix):
        if beta.rows != beta.cols or beta_inv.rows != beta.rows:
            raise ValueError("beta and its inverse must be square of equal size")
        if beta.transpose() != beta:
            raise ValueError("beta must be symmetric")
        if beta * beta_inv != Matrix.identity(beta.rows):
            raise ValueError("beta_inv is not the exact inverse of beta")
        self.p = beta.rows
        self.beta = beta
        self.beta_inv = beta_inv
        self._pairing_cache = {}
        self._q_powers = {}

    @classmethod
    def from_beta(cls, beta: Matrix) -> "GaussianWeight":
        if beta.rows == 0:
            return cls(Matrix.zeros(0, 0), Matrix.zeros(0, 0))
        return cls(beta, invert(beta))


def average_monomial(indices, w: GaussianWeight) -> GaussianRational:
    """<w^{i1} ... w^{im}> by summing 2 beta^{ij} over perfect matchings.

    Odd-length monomials average to zero.  Results are cached per weight
    on the sorted index multiset.
    """
    m = len(indices)
    if m % 2 == 1:
        return ZERO
    if m == 0:
        return GaussianRational(1)
    key = tuple(sorted(indices))
    cached = w._pairing_cache.get(key)
    if cached is None:
        cached = _pairing_sum(key, w)
        w._pairing_cache[key] = cached
    return cached


def _pairing_sum(idx: tuple, w: GaussianWeight) -> GaussianRational:
    if not idx:
        return GaussianRational(1)
    first, rest = idx[0], idx[1:]
    acc = ZERO
    for j in range(len(rest)):
        pair = w.beta_inv[first, rest[j]]
        if pair.is_zero():
            continue
        sub = rest[:j] + rest[j + 1 :]
        acc = acc + _GR(2) * pair * _pairing_sum(sub, w)
    return acc


def symmetrized_moment(indices, w: GaussianWeight) -> GaussianRational:
    """(2k)!/k! beta^((i1 i2 ... i2k-1 i2k)) evaluated through the
    moment-generating quadratic form.

    With Q(J) = beta^{ij} J_i J_j the closed form equals
    m! * [J^m] Q(J)^k / k!  where m! is the product of the multiplicities
    of the requested index multiset — a direct evaluation of the
    symmetrized product that never enumerates pairings.
    """
    m = len(indices)
    if m % 2 == 1:
        raise ValueError("symmetrized moment needs an even index count")
    if m == 0:
        return GaussianRational(1)
    k = m // 2
    counts = [0] * w.p
    for i in indices:
        counts[i] += 1
    target = tuple(counts)
    qk = _q_power(w, k)
    coeff = qk.get(target, ZERO)
    mult_fact = 1
    for c in counts:
        mult_fact *= math.factorial(c)
    return coeff * _GR(mult_fact) / _GR(math.factorial(k))


def _q_power(w: GaussianWeight, k: int) -> dict:
    """Q(J)^k as {exponent tuple: coefficient}, cached per weight."""
    if k in w._q_powers:
        return w._q_powers[k]
    p = w.p
    if 1 not in w._q_powers:
        q1 = {}
        for i in range(p):
            for j in range(i, p):
                x = w.beta_inv[i, j]
                if x.is_zero():
                    continue
                mono = tuple((2 if l == i else 0) if i == j else
                             (1 if l in (i, j) else 0) for l in range(p))
                q1[mono] = x if i == j else _GR(2) * x
        w._q_powers[1] = q1
    out = w._q_powers[1]
    for _ in range(k - 1):
        nxt = {}
        for m1 in sorted(out):
            c1 = out[m1]
            for m2 in sorted(w._q_powers[1]):
                c2 = w._q_powers[1][m2]
                mono = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                nxt[mono] = nxt[mono] + prod if mono in nxt else prod
        out = nxt
    w._q_powers[k] = out
    return out


def mono_to_indices(mono) -> tuple:
    """Exponent tuple to explicit index list: (2, 0, 1) -> (0, 0, 2)."""
    out = []
    for i, e in enumerate(mono):
        out.extend([i] * e)
    return tuple(out)


def average_poly(poly: SeriesPoly, w: GaussianWeight) -> MatrixSeries:
    """Average each omega-monomial; only even powers of s survive.

    Accumulation runs in graded-lex monomial order so the result is
    deterministic regardless of how the polynomial was assembled.
    """
    if poly.p != w.p:
        raise ValueError("polynomial and weight have different variable counts")
    out = MatrixSeries(poly.dim, poly.limits.s_order, {})
    for mono, ms in poly.iter_sorted():
        mom = average_monomial(mono_to_indices(mono), w)
        if mom.is_zero():
            continue
        out = out + ms.scale(mom)
    return out
