"""Symmetric-space algebraic model built from curvature data.

The primary datum is the factorized curvature (E, beta): a list of p
antisymmetric n x n matrices E^i and a symmetric invertible p x p matrix
beta with R_abcd = beta_ik E^i_ab E^k_cd.  Everything else — holonomy
generators D_i, structure constants F^j_ik, the combined (n+p)-dimensional
algebra with its invariant metric, curvature contractions — is derived
exactly.  Frame indices of the flat factor come first by convention, so
the flat/curved projectors are diagonal 0/1 matrices.

Sign convention: the unit n-sphere has scalar curvature n(n-1) > 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact import (
    GaussianRational,
    Matrix,
    ZERO,
    commutator,
    invert,
    rational,
    solve_columns,
)

_GR = GaussianRational.of
_QUARTER = GaussianRational(rational(-1, 4))


class ModelBuildError(ValueError):
    """Raised when curvature data cannot produce a consistent model."""


@dataclass(frozen=True)
class CurvatureData:
    """Input data (n, p, E^i, beta) plus the flat-factor dimension."""

    n: int
    p: int
    E: tuple
    beta: Matrix
    flat_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(self.E))
        if len(self.E) != self.p:
            raise ModelBuildError(f"expected {self.p} E matrices, got {len(self.E)}")
        if self.p > self.n * (self.n - 1) // 2:
            raise ModelBuildError("p exceeds n(n-1)/2")
        if not (0 <= self.flat_dim <= self.n):
            raise ModelBuildError("flat_dim out of range")
        for i, e in enumerate(self.E):
            if e.rows != self.n or e.cols != self.n:
                raise ModelBuildError(f"E^{i} is not {self.n}x{self.n}")
        if self.beta.rows != self.p or self.beta.cols != self.p:
            raise ModelBuildError("beta has the wrong shape")


@dataclass
class SymmetricSpaceModel:
    """Curvature data with all derived exact structure.

    F is stored as p matrices F_i with (F_i)[j, k] = F^j_ik, C as N
    adjoint matrices with (C_A)[B, C] = C^B_AC, N = n + p.
    """

    data: CurvatureData
    D: tuple
    F: tuple
    C: tuple
    gamma: Matrix
    gamma_inv: Matrix
    riemann: tuple
    ricci: Matrix
    scalar_R: GaussianRational
    R_G: GaussianRational
    R_H: GaussianRational
    h: Matrix
    q: Matrix

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def p(self) -> int:
        return self.data.p

    @property
    def N(self) -> int:
        return self.data.n + self.data.p

    @property
    def beta(self) -> Matrix:
        return self.data.beta

    @property
    def flat_dim(self) -> int:
        return self.data.flat_dim


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self):
        return [
            {"check": c.name, "pass": c.passed, **({"detail": c.detail} if c.detail else {})}
            for c in self.checks
        ]


def _structure_constant(model_parts, upper: int, lo1: int, lo2: int) -> GaussianRational:
    """C^upper_{lo1 lo2}: indices 0..n-1 tangent, n..N-1 holonomy."""
    n, E, D, F = model_parts
    ut, l1t, l2t = upper < n, lo1 < n, lo2 < n
    if not ut and l1t and l2t:
        return E[upper - n][lo1, lo2]
    if ut and not l1t and l2t:
        return D[lo1 - n][upper, lo2]
    if ut and l1t and not l2t:
        return -D[lo2 - n][upper, lo1]
    if not ut and not l1t and not l2t:
        return F[lo1 - n][upper - n, lo2 - n]
    return ZERO


def build_model(data: CurvatureData) -> SymmetricSpaceModel:
    """Derive the full model from (E, beta); exact throughout.

    The structure constants F^j_ik are obtained by solving the holonomy
    bracket [D_i, D_k] = F^j_ik D_j; the D_i must be linearly independent
    for the solution to be unique, and any residual is an error.
    """
    n, p, E, beta = data.n, data.p, data.E, data.beta
    _check_data(data)

    # D_i = -sum_k beta_ik E^k (the delta metric raises the first index)
    D = []
    for i in range(p):
        acc = Matrix.zeros(n)
        for k in range(p):
            b = beta[i, k]
            if not b.is_zero():
                acc = acc + E[k].scale(-b)
        D.append(acc)
    D = tuple(D)

    F = _solve_structure_constants(n, p, D)

    C = tuple(
        Matrix.from_rows(
            [
                [_structure_constant((n, E, D, F), b, a, c) for c in range(n + p)]
                for b in range(n + p)
            ]
        )
        for a in range(n + p)
    )

    gamma_rows = [[ZERO] * (n + p) for _ in range(n + p)]
    for a in range(n):
        gamma_rows[a][a] = GaussianRational(1)
    for i in range(p):
        for k in range(p):
            gamma_rows[n + i][n + k] = beta[i, k]
    gamma = Matrix.from_rows(gamma_rows)
    try:
        beta_inv = invert(beta) if p else Matrix.zeros(0, 0)
    except ValueError as exc:
        raise ModelBuildError(f"beta is singular: {exc}") from exc
    gamma_inv_rows = [[ZERO] * (n + p) for _ in range(n + p)]
    for a in range(n):
        gamma_inv_rows[a][a] = GaussianRational(1)
    for i in range(p):
        for k in range(p):
            gamma_inv_rows[n + i][n + k] = beta_inv[i, k]
    gamma_inv = Matrix.from_rows(gamma_inv_rows)

    riemann = tuple(
        tuple(
            tuple(
                tuple(
                    sum(
                        (
                            beta[i, k] * E[i][a, b] * E[k][c, d]
                            for i in range(p)
                            for k in range(p)
                            if not beta[i, k].is_zero()
                        ),
                        ZERO,
                    )
                    for d in range(n)
                )
                for c in range(n)
            )
            for b in range(n)
        )
        for a in range(n)
    )
    ricci = Matrix.from_rows(
        [
            [sum((riemann[a][b][a][d] for a in range(n)), ZERO) for d in range(n)]
            for b in range(n)
        ]
    )
    scalar_R = ricci.trace()

    # R_G = -(1/4) gamma^{AB} tr(C_A C_B); R_H likewise over the holonomy block
    R_G = ZERO
    for a in range(n + p):
        for b in range(n + p):
            g = gamma_inv[a, b]
            if not g.is_zero():
                R_G = R_G + g * (C[a] * C[b]).trace()
    R_G = _QUARTER * R_G
    R_H = ZERO
    for i in range(p):
        for k in range(p):
            g = beta_inv[i, k]
            if not g.is_zero():
                R_H = R_H + g * (F[i] * F[k]).trace()
    R_H = _QUARTER * R_H

    q = Matrix.diag([1 if a < data.flat_dim else 0 for a in range(n)])
    h = Matrix.identity(n) - q

    return SymmetricSpaceModel(
        data=data, D=D, F=F, C=C, gamma=gamma, gamma_inv=gamma_inv,
        riemann=riemann, ricci=ricci, scalar_R=scalar_R, R_G=R_G, R_H=R_H,
        h=h, q=q,
    )


def _check_data(data: CurvatureData):
    for i, e in enumerate(data.E):
        if e.transpose() != -e:
            raise ModelBuildError(f"E^{i} is not antisymmetric")
        for a in range(data.flat_dim):
            for b in range(data.n):
                if not e[a, b].is_zero():
                    raise ModelBuildError(
                        f"E^{i} touches flat direction ({a},{b})"
                    )
    if data.beta.transpose() != data.beta:
        raise ModelBuildError("beta is not symmetric")


def _solve_structure_constants(n: int, p: int, D) -> tuple:
    """Solve [D_i, D_k] = F^j_ik D_j exactly for all pairs at once."""
    if p == 0:
        return tuple()
    basis = Matrix.from_rows(
        [[D[j][a, b] for j in range(p)] for a in range(n) for b in range(n)]
    )
    pairs = [(i, k) for i in range(p) for k in range(i + 1, p)]
    columns = []
    for i, k in pairs:
        com = commutator(D[i], D[k])
        columns.append([com[a, b] for a in range(n) for b in range(n)])
    F = [[[ZERO] * p for _ in range(p)] for _ in range(p)]  # F[i][j][k] = F^j_ik
    if columns:
        sols = solve_columns(basis, columns)
    else:
        sols = []
        # p == 1: the only bracket is [D_1, D_1] = 0, but D_1 itself must be
        # independent (nonzero) for the holonomy basis to be usable
        test = solve_columns(basis, [[ZERO] * (n * n)])
        if test[0].status == "nonunique":
            raise ModelBuildError("holonomy generators D_i are linearly dependent")
    for (i, k), sol in zip(pairs, sols):
        if sol.status == "nonunique":
            raise ModelBuildError(
                f"holonomy generators D_i are linearly dependent (pair {(i + 1, k + 1)})"
            )
        if sol.status == "inconsistent":
            raise ModelBuildError(
                f"bracket [D_{i + 1}, D_{k + 1}] does not close on the D_j"
            )
        for j in range(p):
            F[i][j][k] = sol.solution[j]
            F[k][j][i] = -sol.solution[j]
    return tuple(Matrix.from_rows(F[i]) for i in range(p))


# ---------------------------------------------------------------------------
# validation


def validate_model(m: SymmetricSpaceModel) -> ValidationReport:
    """Run every exact structural check; failures are report entries."""
    checks = []
    n, p, N = m.n, m.p, m.N
    E, D, F, C, R = m.data.E, m.D, m.F, m.C, m.riemann

    def add(name, passed, detail=""):
        checks.append(CheckResult(name, passed, detail if not passed else ""))

    bad = [i for i, e in enumerate(E) if e.transpose() != -e]
    add("e-antisymmetry", not bad, f"E indices {bad}")

    add("beta-symmetric", m.beta.transpose() == m.beta)
    try:
        invert(m.beta) if p else None
        add("beta-invertible", True)
    except ValueError:
        add("beta-invertible", False, "beta is singular")

    bad = [
        i
        for i, d in enumerate(D)
        if d != -sum((E[k].scale(m.beta[i, k]) for k in range(p)), Matrix.zeros(n))
    ]
    add("d-from-e-beta", not bad, f"D indices {bad}")
    bad = [i for i, d in enumerate(D) if not d.trace().is_zero()]
    add("d-traceless", not bad, f"D indices {bad}")

    ok = True
    detail = ""
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    want = sum(
                        (m.beta[i, k] * E[i][a, b] * E[k][c, d]
                         for i in range(p) for k in range(p)),
                        ZERO,
                    )
                    if R[a][b][c][d] != want:
                        ok, detail = False, f"entry {(a, b, c, d)}"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    add("riemann-from-e-beta", ok, detail)

    ok, detail = _riemann_integrability(n, R)
    add("riemann-integrability", ok, detail)

    ok, detail = True, ""
    for i in range(p):
        for k in range(i + 1, p):
            want = sum((D[j].scale(F[i][j, k]) for j in range(p)), Matrix.zeros(n))
            if commutator(D[i], D[k]) != want:
                ok, detail = False, f"pair {(i, k)}"
                break
        if not ok:
            break
    add("holonomy-bracket", ok, detail)

    ok, detail = True, ""
    for i in range(p):
        for k in range(p):
            lhs = E[i] * D[k]
            lhs = lhs - lhs.transpose()
            rhs = sum((E[j].scale(F[k][i, j]) for j in range(p)), Matrix.zeros(n))
            if lhs != rhs:
                ok, detail = False, f"pair {(i, k)}"
                break
        if not ok:
            break
    add("e-d-f-compatibility", ok, detail)

    ok, detail = True, ""
    for j in range(p):
        bf = m.beta * F[j]
        if bf.transpose() != -bf:
            ok, detail = False, f"index {j}"
            break
    add("beta-f-invariance", ok, detail)

    ok, detail = True, ""
    for a in range(N):
        for b in range(a + 1, N):
            # C^c_ab = (C_a)[c, b]
            want = sum(
                (C[c].scale(C[a][c, b]) for c in range(N)), Matrix.zeros(N)
            )
            if commutator(C[a], C[b]) != want:
                ok, detail = False, f"pair {(a, b)}"
                break
        if not ok:
            break
    add("adjoint-closure", ok, detail)

    ok, detail = True, ""
    for c in range(N):
        gc = m.gamma * C[c]
        if gc.transpose() != -gc:
            ok, detail = False, f"index {c}"
            break
    add("gamma-invariance", ok, detail)

    ok, detail = True, ""
    nflat = m.flat_dim
    for e in range(nflat):
        for i, Ei in enumerate(E):
            if any(not Ei[e, b].is_zero() for b in range(n)):
                ok, detail = False, f"E^{i} row {e}"
        for i, Di in enumerate(D):
            if any(not Di[e, b].is_zero() for b in range(n)) or any(
                not Di[a, e].is_zero() for a in range(n)
            ):
                ok, detail = False, f"D_{i} direction {e}"
        for a in range(n):
            for c in range(n):
                for d in range(n):
                    if not R[e][a][c][d].is_zero():
                        ok, detail = False, f"R row {e}"
    add("flat-projector-annihilation", ok, detail)

    return ValidationReport(tuple(checks))


def _riemann_integrability(n: int, R) -> tuple[bool, str]:
    """R^{fg}_{ea} R^e_{bcd} antisymmetrized combination must vanish."""
    for f in range(n):
        for g in range(n):
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        for d in range(n):
                            acc = ZERO
                            for e in range(n):
                                acc = acc + (
                                    R[f][g][e][a] * R[e][b][c][d]
                                    - R[f][g][e][b] * R[e][a][c][d]
                                    + R[f][g][e][c] * R[e][d][a][b]
                                    - R[f][g][e][d] * R[e][c][a][b]
                                )
                            if not acc.is_zero():
                                return False, f"indices {(f, g, a, b, c, d)}"
    return True, ""


# ---------------------------------------------------------------------------
# catalog


def sphere(n: int, radius=1) -> SymmetricSpaceModel:
    """Round n-sphere of the given rational radius."""
    return build_model(_constant_curvature_data(n, radius, +1))


def hyperbolic(n: int, radius=1) -> SymmetricSpaceModel:
    """Hyperbolic n-space, the negative-curvature dual of the sphere."""
    return build_model(_constant_curvature_data(n, radius, -1))


def flat(n0: int) -> SymmetricSpaceModel:
    """Flat factor R^{n0}: no curvature, empty holonomy."""
    data = CurvatureData(n=n0, p=0, E=(), beta=Matrix.zeros(0, 0), flat_dim=n0)
    return build_model(data)


def _constant_curvature_data(n: int, radius, sign: int) -> CurvatureData:
    a = rational(radius)
    if a <= 0:
        raise ModelBuildError("radius must be a positive rational")
    E = []
    for c in range(n):
        for d in range(c + 1, n):
            rows = [[ZERO] * n for _ in range(n)]
            rows[c][d] = GaussianRational(1)
            rows[d][c] = GaussianRational(-1)
            E.append(Matrix.from_rows(rows))
    p = len(E)
    beta = Matrix.identity(p).scale(rational(sign) / (a * a))
    return CurvatureData(n=n, p=p, E=tuple(E), beta=beta, flat_dim=0)


def product(models) -> SymmetricSpaceModel:
    """Product space; flat directions of all factors are moved to the front."""
    models = list(models)
    if not models:
        raise ModelBuildError("product of zero factors")
    n_total = sum(m.n for m in models)
    flat_total = sum(m.flat_dim for m in models)
    # global index of each factor coordinate, flat coordinates first
    index_map = []
    flat_seen = 0
    curved_seen = 0
    for m in models:
        local = []
        for a in range(m.n):
            if a < m.flat_dim:
                local.append(flat_seen)
                flat_seen += 1
            else:
                local.append(flat_total + curved_seen)
                curved_seen += 1
        index_map.append(local)

    E = []
    for fi, m in enumerate(models):
        for e in m.data.E:
            rows = [[ZERO] * n_total for _ in range(n_total)]
            for a in range(m.n):
                for b in range(m.n):
                    if not e[a, b].is_zero():
                        rows[index_map[fi][a]][index_map[fi][b]] = e[a, b]
            E.append(Matrix.from_rows(rows))
    p_total = len(E)
    beta_rows = [[ZERO] * p_total for _ in range(p_total)]
    off = 0
    for m in models:
        for i in range(m.p):
            for k in range(m.p):
                beta_rows[off + i][off + k] = m.beta[i, k]
        off += m.p
    data = CurvatureData(
        n=n_total, p=p_total, E=tuple(E),
        beta=Matrix.from_rows(beta_rows) if p_total else Matrix.zeros(0, 0),
        flat_dim=flat_total,
    )
    return build_model(data)


def catalog_space(name: str, params: dict) -> SymmetricSpaceModel:
    """Build a catalog model from a descriptor name and parameter dict."""
    if name == "sphere":
        return sphere(int(params["n"]), rational(params.get("radius", 1)))
    if name == "hyperbolic":
        return hyperbolic(int(params["n"]), rational(params.get("radius", 1)))
    if name == "flat":
        return flat(int(params["n"]))
    if name == "product":
        factors = params.get("factors", [])
        if not factors:
            raise ModelBuildError("product needs a 'factors' list")
        return product([space_from_descriptor(f) for f in factors])
    raise ModelBuildError(f"unknown catalog space {name!r}")


def space_from_descriptor(obj: dict) -> SymmetricSpaceModel:
    """Parse the JSON space descriptor (catalog or explicit form)."""
    if "catalog" in obj:
        return catalog_space(obj["catalog"], obj.get("params", {}))
    if "explicit" in obj:
        body = obj["explicit"]
        data = CurvatureData(
            n=int(body["n"]),
            p=int(body["p"]),
            E=tuple(Matrix.from_json(e) for e in body["E"]),
            beta=Matrix.from_json(body["beta"]) if int(body["p"]) else Matrix.zeros(0, 0),
            flat_dim=int(body.get("flat_dim", 0)),
        )
        return build_model(data)
    raise ModelBuildError("space descriptor needs 'catalog' or 'explicit'")
