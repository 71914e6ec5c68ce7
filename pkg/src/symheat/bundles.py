"""Homogeneous twisted bundle data: fiber generators, holonomy action, twist.

A fiber representation consists of so(n) generators G_ab acting on the
fiber, an optional abelian twist B_ab (fiber-scalar, purely imaginary,
supported on the flat directions only), and the derived objects: holonomy
generators R_i = -(1/2) D^a_ib G^b_a, the Casimir R^2, and the total
curvature Omega_ab = -E^i_ab R_i + B_ab.

The purely imaginary convention for B encodes a real magnetic-type field
strength: the twist matrix then has real eigenvalues, so its sinh-type
determinant factor has real rational series coefficients.

Spinor generators are assembled from Kronecker products of the three
standard 2x2 Hermitian matrices, keeping every entry inside the Gaussian
rationals; the explicit catalog covers n <= 6.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact import GaussianRational, I_UNIT, Matrix, ZERO, commutator, rational
from .spaces import CheckResult, SymmetricSpaceModel, ValidationReport

PAULI_X = Matrix.from_rows([[0, 1], [1, 0]])
PAULI_Y = Matrix.from_rows([[ZERO, -I_UNIT], [I_UNIT, ZERO]])
PAULI_Z = Matrix.from_rows([[1, 0], [0, -1]])

SPINOR_MAX_DIM = 6


class BundleError(ValueError):
    """Raised when fiber data violates a structural constraint."""


@dataclass
class FiberRep:
    """Fiber representation tied to a symmetric-space model.

    G is the full antisymmetric table G[a][b] (dimV x dimV matrices with
    G[b][a] = -G[a][b]); B is the n x n fiber-scalar twist; R holds the
    p holonomy generators; Omega the total curvature table.
    """

    model: SymmetricSpaceModel
    dimV: int
    G: tuple
    B: Matrix
    R: tuple
    casimir: Matrix
    Omega: tuple


def _normalize_generators(n: int, dimV: int, G) -> tuple:
    """Accept {(a, b): M} with a < b or a full table; return the full table."""
    table = [[Matrix.zeros(dimV) for _ in range(n)] for _ in range(n)]
    if isinstance(G, dict):
        for (a, b), m in G.items():
            if not (0 <= a < b < n):
                raise BundleError(f"generator key {(a, b)} out of range")
            table[a][b] = m
            table[b][a] = -m
    else:
        rows = list(G)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise BundleError("generator table must be n x n")
        for a in range(n):
            for b in range(n):
                table[a][b] = rows[a][b]
    for a in range(n):
        for b in range(n):
            m = table[a][b]
            if m.rows != dimV or m.cols != dimV:
                raise BundleError(f"generator ({a},{b}) has the wrong shape")
    return tuple(tuple(row) for row in table)


def validate_rep(model: SymmetricSpaceModel, rep: FiberRep) -> ValidationReport:
    """Exact checks on an assembled fiber representation."""
    checks = []
    n, p = model.n, model.p
    G, B, R = rep.G, rep.B, rep.R

    def add(name, passed, detail=""):
        checks.append(CheckResult(name, passed, detail if not passed else ""))

    ok, detail = True, ""
    for a in range(n):
        if not G[a][a].is_zero():
            ok, detail = False, f"diagonal ({a},{a})"
        for b in range(n):
            if G[a][b] != -G[b][a]:
                ok, detail = False, f"pair ({a},{b})"
    add("fiber-g-antisymmetry", ok, detail)

    ok, detail = True, ""
    eye = Matrix.identity(rep.dimV)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    want = Matrix.zeros(rep.dimV)
                    if b == c:
                        want = want + G[a][d]
                    if a == c:
                        want = want - G[b][d]
                    if b == d:
                        want = want - G[a][c]
                    if a == d:
                        want = want + G[b][c]
                    if commutator(G[a][b], G[c][d]) != want:
                        ok, detail = False, f"indices {(a, b, c, d)}"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    add("fiber-so-n-relations", ok, detail)

    ok, detail = True, ""
    if B.transpose() != -B:
        ok, detail = False, "B not antisymmetric"
    for a in range(n):
        for b in range(n):
            x = B[a, b]
            if not x.is_zero():
                if x.re != 0:
                    ok, detail = False, f"B({a},{b}) not purely imaginary"
                if a >= model.flat_dim or b >= model.flat_dim:
                    ok, detail = False, f"B({a},{b}) on a curved direction"
    add("twist-flat-support", ok, detail)

    ok, detail = True, ""
    for i in range(p):
        for k in range(i + 1, p):
            want = sum(
                (R[j].scale(model.F[i][j, k]) for j in range(p)),
                Matrix.zeros(rep.dimV),
            )
            if commutator(R[i], R[k]) != want:
                ok, detail = False, f"pair {(i, k)}"
                break
        if not ok:
            break
    add("fiber-holonomy-bracket", ok, detail)

    ok, detail = True, ""
    for i in range(p):
        if not commutator(rep.casimir, R[i]).is_zero():
            ok, detail = False, f"index {i}"
            break
    add("casimir-centrality", ok, detail)

    # parallel-curvature integrability of the holonomy part of Omega:
    # with curlyE_ab = -E^i_ab R_i,
    # [curlyE_cd, curlyE_ab] = R^f_acd curlyE_fb + R^f_bcd curlyE_af
    ok, detail = True, ""
    curly = [
        [
            sum((R[i].scale(-model.data.E[i][a, b]) for i in range(p)),
                Matrix.zeros(rep.dimV))
            for b in range(n)
        ]
        for a in range(n)
    ]
    riem = model.riemann
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    want = Matrix.zeros(rep.dimV)
                    for f in range(n):
                        rf = riem[f][a][c][d]
                        if not rf.is_zero():
                            want = want + curly[f][b].scale(rf)
                        rf = riem[f][b][c][d]
                        if not rf.is_zero():
                            want = want + curly[a][f].scale(rf)
                    if commutator(curly[c][d], curly[a][b]) != want:
                        ok, detail = False, f"indices {(a, b, c, d)}"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    add("fiber-curvature-integrability", ok, detail)

    return ValidationReport(tuple(checks))


def build_rep(model: SymmetricSpaceModel, G, B: Matrix | None = None,
              dimV: int | None = None) -> FiberRep:
    """Assemble and check a fiber representation.

    G may be a dict {(a, b): matrix} for a < b or a full n x n table; B
    defaults to zero.  Raises BundleError when the so(n) relations, the
    twist support constraint, or the holonomy bracket fail.
    """
    n, p = model.n, model.p
    if dimV is None:
        if isinstance(G, dict):
            if not G:
                raise BundleError("cannot infer the fiber dimension from empty G")
            dimV = next(iter(G.values())).rows
        else:
            dimV = G[0][0].rows
    table = _normalize_generators(n, dimV, G)
    if B is None:
        B = Matrix.zeros(n)
    if B.rows != n or B.cols != n:
        raise BundleError("twist matrix must be n x n")

    # R_i = -(1/2) D^a_ib G^b_a
    R = []
    for i in range(p):
        acc = Matrix.zeros(dimV)
        d = model.D[i]
        for a in range(n):
            for b in range(n):
                x = d[a, b]
                if not x.is_zero():
                    acc = acc + table[b][a].scale(x)
        R.append(acc.scale(rational(-1, 2)))
    R = tuple(R)

    # Casimir R^2 = (1/4) R^abcd G_ab G_cd
    casimir = Matrix.zeros(dimV)
    riem = model.riemann
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    x = riem[a][b][c][d]
                    if not x.is_zero():
                        casimir = casimir + (table[a][b] * table[c][d]).scale(x)
    casimir = casimir.scale(rational(1, 4))

    omega = tuple(
        tuple(
            sum((R[i].scale(-model.data.E[i][a, b]) for i in range(p)),
                Matrix.zeros(dimV)) + Matrix.identity(dimV).scale(B[a, b])
            for b in range(n)
        )
        for a in range(n)
    )

    rep = FiberRep(model=model, dimV=dimV, G=table, B=B, R=R,
                   casimir=casimir, Omega=omega)
    report = validate_rep(model, rep)
    if not report.ok:
        raise BundleError(f"fiber checks failed: {', '.join(report.failed())}")
    return rep


# ---------------------------------------------------------------------------
# catalog representations


def gamma_matrices(n: int) -> list[Matrix]:
    """Dirac matrices for n <= 6 with entries in {0, +-1, +-i}.

    Built recursively by Kronecker doubling; all gamma_a are Hermitian and
    satisfy {gamma_a, gamma_b} = 2 delta_ab.
    """
    if not 1 <= n <= SPINOR_MAX_DIM:
        raise BundleError(f"spinor catalog covers 1 <= n <= {SPINOR_MAX_DIM}")
    gammas = [PAULI_X, PAULI_Y]
    while len(gammas) + 2 <= n:
        dim = gammas[0].rows
        eye = Matrix.identity(dim)
        nxt = [PAULI_X.kron(g) for g in gammas]
        nxt.append(PAULI_X.kron(_chirality(gammas)))
        nxt.append(PAULI_Y.kron(eye))
        gammas = nxt
    if len(gammas) < n:
        gammas.append(_chirality(gammas))
    return gammas[:n] if n > 1 else [Matrix.identity(1)]


def _chirality(gammas: list[Matrix]) -> Matrix:
    """Product (-i)^m gamma_1 ... gamma_2m, Hermitian with square one."""
    m = len(gammas) // 2
    acc = Matrix.identity(gammas[0].rows)
    for g in gammas:
        acc = acc * g
    phase = GaussianRational(1)
    for _ in range(m):
        phase = phase * GaussianRational(0, -1)
    return acc.scale(phase)


def spin_generator_table(n: int) -> dict:
    """G_ab = (1/4)[gamma_a, gamma_b] for a < b."""
    gammas = gamma_matrices(n)
    return {
        (a, b): commutator(gammas[a], gammas[b]).scale(rational(1, 4))
        for a in range(n)
        for b in range(a + 1, n)
    }


def vector_generator_table(n: int) -> dict:
    """(X_ab)^c_d = delta^c_a delta_bd - delta^c_b delta_ad for a < b."""
    out = {}
    for a in range(n):
        for b in range(a + 1, n):
            rows = [[ZERO] * n for _ in range(n)]
            rows[a][b] = GaussianRational(1)
            rows[b][a] = GaussianRational(-1)
            out[(a, b)] = Matrix.from_rows(rows)
    return out


def twist_matrix(model: SymmetricSpaceModel, blocks) -> Matrix:
    """Abelian twist from 2x2 block strengths on the leading flat directions.

    Block j with strength b occupies flat coordinates (2j, 2j+1) and
    contributes B[2j, 2j+1] = i*b.
    """
    blocks = [rational(b) for b in blocks]
    if 2 * len(blocks) > model.flat_dim:
        raise BundleError(
            f"twist needs {2 * len(blocks)} flat directions, "
            f"model has {model.flat_dim}"
        )
    rows = [[ZERO] * model.n for _ in range(model.n)]
    for j, b in enumerate(blocks):
        rows[2 * j][2 * j + 1] = GaussianRational(0, b)
        rows[2 * j + 1][2 * j] = GaussianRational(0, -b)
    return Matrix.from_rows(rows)


def scalar_rep(model: SymmetricSpaceModel, twist=None) -> FiberRep:
    G = [[Matrix.zeros(1) for _ in range(model.n)] for _ in range(model.n)]
    B = twist_matrix(model, twist) if twist else None
    return build_rep(model, G, B, dimV=1)


def vector_rep(model: SymmetricSpaceModel, twist=None) -> FiberRep:
    B = twist_matrix(model, twist) if twist else None
    return build_rep(model, vector_generator_table(model.n), B, dimV=model.n)


def spinor_rep(model: SymmetricSpaceModel, twist=None) -> FiberRep:
    if model.n > SPINOR_MAX_DIM:
        raise BundleError(f"spinor catalog covers n <= {SPINOR_MAX_DIM}")
    B = twist_matrix(model, twist) if twist else None
    dimV = 2 ** (model.n // 2)
    return build_rep(model, spin_generator_table(model.n), B, dimV=dimV)


def tensor_product_rep(rep1: FiberRep, rep2: FiberRep) -> FiberRep:
    """Fiber tensor product: G_ab = G1_ab (x) I + I (x) G2_ab, twists add."""
    if rep1.model is not rep2.model and rep1.model.data != rep2.model.data:
        raise BundleError("tensor factors live over different models")
    model = rep1.model
    n = model.n
    e1 = Matrix.identity(rep1.dimV)
    e2 = Matrix.identity(rep2.dimV)
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            table[(a, b)] = rep1.G[a][b].kron(e2) + e1.kron(rep2.G[a][b])
    return build_rep(model, table, rep1.B + rep2.B, dimV=rep1.dimV * rep2.dimV)


def catalog_rep(model: SymmetricSpaceModel, name: str, *, twist=None,
                factors=None) -> FiberRep:
    """Catalog dispatch: scalar, vector, spinor, tensor_product, u1_twist."""
    if name == "scalar":
        return scalar_rep(model, twist)
    if name == "vector":
        return vector_rep(model, twist)
    if name == "spinor":
        return spinor_rep(model, twist)
    if name == "u1_twist":
        if not twist:
            raise BundleError("u1_twist needs at least one block strength")
        if model.flat_dim < 2:
            raise BundleError("u1_twist needs flat_dim >= 2")
        return scalar_rep(model, twist)
    if name == "tensor_product":
        if not factors or len(factors) < 2:
            raise BundleError("tensor_product needs at least two factor names")
        reps = [catalog_rep(model, f) for f in factors]
        out = reps[0]
        for r in reps[1:]:
            out = tensor_product_rep(out, r)
        if twist:
            out = build_rep(model, {
                (a, b): out.G[a][b] for a in range(model.n)
                for b in range(a + 1, model.n)
            }, twist_matrix(model, twist), dimV=out.dimV)
        return out
    raise BundleError(f"unknown catalog bundle {name!r}")


def rep_from_descriptor(model: SymmetricSpaceModel, bundle: dict | None,
                        twist: dict | None = None) -> FiberRep:
    """Parse the JSON bundle + twist descriptors."""
    blocks = (twist or {}).get("blocks")
    bundle = bundle or {"catalog": "scalar"}
    if "catalog" in bundle:
        name = bundle["catalog"]
        factors = bundle.get("factors")
        return catalog_rep(model, name, twist=blocks, factors=factors)
    if "explicit" in bundle:
        body = bundle["explicit"]
        dimV = int(body["dimV"])
        table = {}
        for key, mat in body.get("G", {}).items():
            a, b = (int(x) for x in key.split(","))
            table[(a - 1, b - 1)] = Matrix.from_json(mat)
        B = twist_matrix(model, blocks) if blocks else None
        return build_rep(model, table if table else
                         [[Matrix.zeros(dimV)] * model.n for _ in range(model.n)],
                         B, dimV=dimV)
    raise BundleError("bundle descriptor needs 'catalog' or 'explicit'")
