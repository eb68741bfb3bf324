"""Per-flag verification suite behind the ``check`` command.

Every check re-derives a structural property from raw data instead of
trusting cached fields: orthogonality goes back to ambient matrices, the
Ricci tensor is recomputed in rotated frames, Einstein candidates are
re-certified from their curvature reports, and the variational
characterization is probed with central finite differences on the
volume-normalized scalar curvature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .curvature import curvature, diagonal_ricci, scalar_curvature, u_map
from .einstein import (
    DEFECT_TOL,
    closed_form_solutions,
    numeric_solutions,
    solve,
)
from .errors import NoCatalogEntry, NotPositiveDefinite, UnimplementedCase
from .flag import parse_flag_spec
from .invariant import Frame, make_metric, metric_space, orthonormal_frame

__all__ = ["CheckResult", "run_checks", "CHECK_NAMES"]

_SEED = 20240516


class _Failure(Exception):
    """Raised by a check body when the verified property does not hold."""


def _require(cond, message):
    if not cond:
        raise _Failure(message)


@dataclass
class CheckResult:
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    detail: str = ""


class _Context:
    """Shared per-flag data, built lazily so cheap checks stay cheap."""

    def __init__(self, spec):
        self.spec = spec
        self.model = spec.algebra
        self.rng = np.random.default_rng(_SEED)
        self._space = None
        self._closed = None
        self._numeric = None
        self._set = None

    @property
    def space(self):
        if self._space is None:
            self._space = metric_space(self.spec)
        return self._space

    @property
    def dec(self):
        return self.space.dec

    @property
    def closed(self):
        """Catalog solutions, or None when the family is bound-only."""
        if self._closed is None:
            try:
                self._closed = closed_form_solutions(self.spec)
            except NoCatalogEntry:
                self._closed = "none"
        return None if self._closed == "none" else self._closed

    @property
    def numeric(self):
        if self._numeric is None:
            self._numeric = numeric_solutions(self.spec)
        return self._numeric

    @property
    def solutions(self):
        if self._set is None:
            self._set = solve(self.spec)
        return self._set.solutions

    def sample_coeffs(self, mixed=True):
        """A random positive-definite coefficient vector."""
        space = self.space
        c = np.zeros(space.dim)
        c[: space.n_sub] = np.exp(self.rng.uniform(-0.8, 0.8, space.n_sub))
        for k, (i, j, _) in enumerate(space.pairs):
            if mixed:
                f = self.rng.uniform(-0.85, 0.85)
                c[space.n_sub + k] = f * np.sqrt(
                    c[i] * c[j]
                )
        return c


# ---------------------------------------------------------------------------
# algebra


def _check_ambient_ad_invariance(ctx):
    m = ctx.model
    worst = 0.0
    for _ in range(20):
        x, y, z = (ctx.rng.standard_normal(m.n) for _ in range(3))
        x, y, z = (v / np.linalg.norm(v) for v in (x, y, z))
        a = m.ambient_inner_coords(m.bracket_coords(z, x), y)
        b = m.ambient_inner_coords(x, m.bracket_coords(z, y))
        worst = max(worst, abs(a + b))
    _require(worst < 1e-10, f"ad-invariance residual {worst:.2e}")
    return f"max |([z,x],y)+(x,[z,y])| = {worst:.1e} over 20 random triples"


def _check_killing_trace_ratio(ctx):
    m = ctx.model
    # Flattened dot products give tr(M_e M_f^T) = -tr(M_e M_f) for the
    # skew basis matrices, i.e. exactly the positive trace-form gram.
    mats = np.stack([e.matrix.astype(float).reshape(-1) for e in m.basis])
    G = mats @ mats.T
    K = -np.asarray(m.killing_matrix, dtype=float)
    ratios = np.sort(scipy.linalg.eigh(K, G, eigvals_only=True))
    scale = max(ratios[-1], 1.0)
    _require(ratios[0] > -1e-9 * scale, f"negative ratio {ratios[0]:.2e}")
    clusters = [[ratios[0]]]
    for r in ratios[1:]:
        if r - clusters[-1][-1] > 1e-6 * scale:
            clusters.append([])
        clusters[-1].append(r)
    limit = {"A": 1, "B": 2, "C": 2, "D": 1}[m.family]
    _require(
        len(clusters) <= limit,
        f"{len(clusters)} distinct Killing/trace ratios, expected <= {limit}",
    )
    spread = max(c[-1] - c[0] for c in clusters)
    _require(spread < 1e-9 * scale, f"ratio spread {spread:.2e} within a factor")
    vals = ", ".join(f"{c[0]:.6g}" for c in clusters)
    return f"{len(clusters)} constant ratio(s): {vals}"


def _check_jacobi(ctx):
    m = ctx.model
    worst = 0.0
    for _ in range(20):
        x, y, z = (ctx.rng.standard_normal(m.n) for _ in range(3))
        x, y, z = (v / np.linalg.norm(v) for v in (x, y, z))
        s = (
            m.bracket_coords(x, m.bracket_coords(y, z))
            + m.bracket_coords(y, m.bracket_coords(z, x))
            + m.bracket_coords(z, m.bracket_coords(x, y))
        )
        worst = max(worst, float(np.linalg.norm(s)))
    _require(worst < 1e-10, f"Jacobi residual {worst:.2e}")
    return f"max cyclic-sum norm = {worst:.1e} over 20 random triples"


def _check_orthogonal_basis(ctx):
    m = ctx.model
    n = m.n
    if n <= 40:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        pairs = [
            tuple(sorted(ctx.rng.choice(n, 2, replace=False))) for _ in range(500)
        ]
    worst = 0.0
    for i, j in pairs:
        worst = max(
            worst,
            abs(m.ambient_inner_matrices(m.basis[i].matrix, m.basis[j].matrix)),
        )
    _require(worst < 1e-12, f"off-diagonal ambient pairing {worst:.2e}")
    diag_err = 0.0
    for i in range(n):
        v = m.ambient_inner_matrices(m.basis[i].matrix, m.basis[i].matrix)
        _require(v > 0, f"non-positive squared norm at index {i}")
        diag_err = max(diag_err, abs(v - m.gram[i]))
    _require(diag_err < 1e-12, f"gram mismatch {diag_err:.2e}")
    return f"basis orthogonal ({len(pairs)} pairs), gram positive"


# ---------------------------------------------------------------------------
# flag decomposition


def _check_tangent_complement(ctx):
    dec, m = ctx.dec, ctx.model
    rows = np.vstack([s.orthonormal for s in dec.submodules])
    w = float(ctx.spec.inner_scale) * m.gram
    G = (rows * w) @ rows.T
    err = np.max(np.abs(G - np.eye(rows.shape[0])))
    _require(err < 1e-12, f"summand frames not g0-orthonormal: {err:.2e}")
    iso = list(dec.isotropy_indices)
    leak = np.max(np.abs(rows[:, iso])) if iso else 0.0
    _require(leak < 1e-12, f"tangent vectors touch isotropy coords: {leak:.2e}")
    _require(
        rows.shape[0] + len(iso) == m.n,
        f"dim mismatch: {rows.shape[0]} tangent + {len(iso)} isotropy != {m.n}",
    )
    return (
        f"{rows.shape[0]} tangent + {len(iso)} isotropy coordinates fill "
        f"the {m.n}-dim algebra orthogonally"
    )


def _check_isotropy_stability(ctx):
    dec, m = ctx.dec, ctx.model
    iso = list(dec.isotropy_indices)
    if not iso:
        return "isotropy algebra is trivial"
    w = float(ctx.spec.inner_scale) * m.gram
    worst = 0.0
    for _ in range(10):
        z = np.zeros(m.n)
        z[iso] = ctx.rng.standard_normal(len(iso))
        z /= np.linalg.norm(z)
        for sub in dec.submodules:
            R = sub.orthonormal
            B = np.array([m.bracket_coords(z, r) for r in R])
            coeffs = (R * w) @ B.T
            resid = B - coeffs.T @ R
            r = float(np.sqrt(np.sum((resid * w) * resid)))
            worst = max(worst, r)
    _require(worst < 1e-12, f"bracket leaks out of a summand: {worst:.2e}")
    return f"[k, W_i] stays in W_i, max leak {worst:.1e}"


def _expected_dims(spec):
    fam, l, p = spec.family, spec.rank, tuple(spec.partition)
    plus = spec.includes_last_root
    if fam == "A":
        if l == 3 and p == (2, 2):
            return {"M1": 2, "M2": 2}
        out = {}
        for mi in range(2, len(p) + 1):
            for ni in range(1, mi):
                out[f"M{mi}{ni}"] = p[mi - 1] * p[ni - 1]
        return out
    if fam == "B":
        if not plus:
            if l == 4:
                return {"V1": 4, "T1": 3, "T2": 3}
            return {"V1": l, "U1": l * (l - 1) // 2}
        d = p[0]
        if d == 1:
            return {"V1_1": l - 1, "V1_2": l}
        return {"U1": d * (d - 1) // 2, "V1_1": d * (l - d), "V1_2": d * (l - d + 1)}
    if fam == "C":
        if not plus:
            return {"V1": 1, "U1": l * (l + 1) // 2 - 1}
        d = p[0]
        out = {"V1": 1, "M21": 2 * d * (l - d)}
        if d >= 2:
            out["U1"] = d * (d + 1) // 2 - 1
        return out
    # D
    if not plus and p == (l,):
        return {"T1": 3, "S1": 3} if l == 4 else {"U1": l * (l - 1) // 2}
    if plus and l == 4 and p == (3, 1):
        return {"T1": 3, "S1": 3}
    if not plus and p == (l - 1, 1):
        return {"U1": (l - 1) * (l - 2) // 2, "W21": l - 1, "U21": l - 1}
    if not plus and p == (1, l - 1):
        return {"U2": (l - 1) * (l - 2) // 2, "W21": l - 1, "U21": l - 1}
    if plus and len(p) == 3:
        return {"V2": (l - 1) * (l - 2) // 2, "M1": l - 1, "N1": l - 1}
    if plus and len(p) == 2:
        d = p[0]
        out = {"M21_1": d * (l - d), "M21_2": d * (l - d)}
        if d >= 2:
            out["U1"] = d * (d - 1) // 2
        return out
    return None


def _check_summand_dimensions(ctx):
    dec = ctx.dec
    for s in dec.submodules:
        _require(
            s.orthonormal.shape[0] == s.dim,
            f"{s.name}: stored dim {s.dim} != frame rows {s.orthonormal.shape[0]}",
        )
        rank = np.linalg.matrix_rank(s.orthonormal, tol=1e-9)
        _require(rank == s.dim, f"{s.name}: rank {rank} != dim {s.dim}")
    expected = _expected_dims(ctx.spec)
    _require(expected is not None, "no dimension formula catalogued for this shape")
    found = {s.name: s.dim for s in dec.submodules}
    _require(
        found == expected,
        f"dims {found} do not match the block-size formulas {expected}",
    )
    total = sum(found.values())
    return f"dims {found} match the block-size formulas (total {total})"


def _check_equivalence_classes(ctx):
    dec, space = ctx.dec, ctx.space
    for cls in dec.equiv_classes:
        _require(len(cls) == 2, f"class {cls} is not a pair")
        i, j = cls
        _require(
            dec.submodules[i].dim == dec.submodules[j].dim,
            f"paired summands {i},{j} have different dimensions",
        )
    declared = {tuple(sorted(c)) for c in dec.equiv_classes}
    realized = {tuple(sorted((i, j))) for i, j, _ in space.pairs}
    _require(
        declared == realized,
        f"declared classes {declared} != intertwined pairs {realized}",
    )
    if declared:
        names = ", ".join(
            f"{dec.submodules[i].name}~{dec.submodules[j].name}"
            for i, j in sorted(declared)
        )
        return f"equivalent pairs: {names}; all other summands inequivalent"
    return "all summands pairwise inequivalent"


# ---------------------------------------------------------------------------
# invariant-metric family


def _check_commutant_dimension(ctx):
    space = ctx.space
    want = space.n_sub + len(space.pairs)
    _require(
        space.dim == want,
        f"metric family has dim {space.dim}, expected {want}",
    )
    worst = 0.0
    for A in space.operators:
        for Gm in list(space.reps) + list(space.signs):
            worst = max(worst, float(np.max(np.abs(Gm @ A - A @ Gm))))
    _require(worst < 1e-10, f"an operator fails to commute: {worst:.2e}")
    return (
        f"{space.dim} = {space.n_sub} summands + {len(space.pairs)} pairs, "
        f"operator commutation residual {worst:.1e}"
    )


def _check_metric_invariance(ctx):
    space = ctx.space
    worst = 0.0
    for _ in range(3):
        A = space.metric_matrix(ctx.sample_coeffs())
        scale = float(np.max(np.abs(A)))
        for G in space.reps:
            worst = max(worst, float(np.max(np.abs(G.T @ A + A @ G))) / scale)
        for S in space.signs:
            worst = max(worst, float(np.max(np.abs(S.T @ A @ S - A))) / scale)
    _require(worst < 1e-10, f"sampled metric not isotropy-invariant: {worst:.2e}")
    return f"sampled metrics invariant under isotropy, residual {worst:.1e}"


def _check_frame_orthonormal(ctx):
    space = ctx.space
    worst = 0.0
    smin = np.inf
    for _ in range(3):
        met = make_metric(space, ctx.sample_coeffs())
        fr = orthonormal_frame(met)
        V = fr.vectors
        worst = max(worst, float(np.max(np.abs(V.T @ met.matrix @ V - np.eye(V.shape[0])))))
        smin = min(smin, float(np.linalg.svd(V, compute_uv=False)[-1]))
    _require(worst < 1e-12, f"frame fails g-orthonormality: {worst:.2e}")
    _require(smin > 1e-9, f"frame does not span the tangent space: sigma_min {smin:.2e}")
    return f"V^T A V = I to {worst:.1e}; frame spans the tangent space"


# ---------------------------------------------------------------------------
# curvature


def _check_frame_independence(ctx):
    space = ctx.space
    met = make_metric(space, ctx.sample_coeffs())
    base = curvature(met)
    fr = orthonormal_frame(met)
    d = space.tangent_dim
    Q, _ = np.linalg.qr(ctx.rng.standard_normal((d, d)))
    rotated = Frame(met, fr.vectors @ Q, fr.eigenvalues, fr.groups, fr.partners)
    other = curvature(met, frame=rotated)
    err = float(np.max(np.abs(other.ricci_tangent - base.ricci_tangent)))
    serr = abs(other.scalar - base.scalar) / (1.0 + abs(base.scalar))
    _require(err < 1e-10, f"Ricci depends on the frame: {err:.2e}")
    _require(serr < 1e-10, f"scalar depends on the frame: {serr:.2e}")
    return f"random rotated frame changes Ricci by {err:.1e}"


def _check_ricci_equivariance(ctx):
    space = ctx.space
    met = make_metric(space, ctx.sample_coeffs())
    P = curvature(met).ricci_tangent
    scale = float(np.max(np.abs(P))) + 1.0
    worst = 0.0
    for S in space.signs:
        worst = max(worst, float(np.max(np.abs(S.T @ P @ S - P))) / scale)
    for G in space.reps:
        worst = max(worst, float(np.max(np.abs(G.T @ P + P @ G))) / scale)
        R = scipy.linalg.expm(0.7 * G)
        worst = max(worst, float(np.max(np.abs(R.T @ P @ R - P))) / scale)
    _require(worst < 1e-10, f"Ricci not isotropy-equivariant: {worst:.2e}")
    return f"Ric(Ad(k)X, Ad(k)Y) = Ric(X, Y) to {worst:.1e}"


def _check_scalar_trace(ctx):
    space = ctx.space
    met = make_metric(space, ctx.sample_coeffs())
    rep = curvature(met)
    sym = float(np.max(np.abs(rep.ricci - rep.ricci.T)))
    _require(sym < 1e-10, f"Ricci not symmetric: {sym:.2e}")
    tr = float(np.trace(rep.ricci))
    err = abs(rep.scalar - tr) / (1.0 + abs(rep.scalar))
    _require(err < 1e-10, f"scalar != trace of Ricci: {err:.2e}")
    err2 = abs(rep.scalar - rep.scalar_direct) / (1.0 + abs(rep.scalar))
    _require(err2 < 1e-10, f"scalar route disagreement: {err2:.2e}")
    return f"scalar = tr Ric = direct formula to {max(err, err2):.1e}"


def _check_diagonal_route(ctx):
    space = ctx.space
    c = ctx.sample_coeffs(mixed=False)
    met = make_metric(space, c)
    fast = diagonal_ricci(met) * c[: space.n_sub]
    full = curvature(met).coefficients[: space.n_sub]
    err = float(np.max(np.abs(fast - full))) / (1.0 + float(np.max(np.abs(full))))
    _require(err < 1e-10, f"block-sum route disagrees with the frame route: {err:.2e}")
    return f"triple-sum Ricci matches the frame computation to {err:.1e}"


def _check_curvature_scaling(ctx):
    space = ctx.space
    c = ctx.sample_coeffs()
    r1 = curvature(make_metric(space, c))
    t = 2.7
    r2 = curvature(make_metric(space, t * c))
    ric_err = float(np.max(np.abs(r2.ricci_tangent - r1.ricci_tangent)))
    sc_err = abs(t * r2.scalar - r1.scalar) / (1.0 + abs(r1.scalar))
    cn_err = abs(r2.normalized_constant - r1.normalized_constant) / (
        1.0 + abs(r1.normalized_constant)
    )
    _require(ric_err < 1e-10, f"Ricci form not scale-invariant: {ric_err:.2e}")
    _require(sc_err < 1e-10, f"scalar does not scale as 1/t: {sc_err:.2e}")
    _require(cn_err < 1e-10, f"normalized constant not scale-free: {cn_err:.2e}")
    return "Ric(t g) = Ric(g), S(t g) = S(g)/t, c-hat scale-free"


def _check_connection_term(ctx):
    space = ctx.space
    d = space.tangent_dim
    normal = make_metric(space, _normal_coeffs(space))
    worst = 0.0
    for _ in range(4):
        x, y = ctx.rng.standard_normal((2, d))
        worst = max(worst, float(np.linalg.norm(u_map(normal, x, y))))
    _require(worst < 1e-10, f"U != 0 for the normal metric: {worst:.2e}")
    met = make_metric(space, ctx.sample_coeffs())
    A = met.matrix
    t = space.structure
    err = 0.0
    for _ in range(4):
        x, y, w = ctx.rng.standard_normal((3, d))
        u = u_map(met, x, y)
        sym = float(np.linalg.norm(u - u_map(met, y, x)))
        lhs = 2.0 * float(u @ (A @ w))
        bwx = np.einsum("a,b,abc->c", w, x, t)
        bwy = np.einsum("a,b,abc->c", w, y, t)
        rhs = float(bwx @ (A @ y)) + float(bwy @ (A @ x))
        err = max(err, sym, abs(lhs - rhs) / (1.0 + abs(rhs)))
    _require(err < 1e-10, f"defining identity of U fails: {err:.2e}")
    return f"U vanishes for the normal metric; defining identity holds to {err:.1e}"


def _normal_coeffs(space):
    c = np.zeros(space.dim)
    c[: space.n_sub] = 1.0
    return c


# ---------------------------------------------------------------------------
# Einstein solutions


def _check_solution_certificates(ctx):
    sols = ctx.solutions
    if not sols:
        return "no invariant Einstein metric (nothing to certify)"
    worst_defect = 0.0
    for s in sols:
        worst_defect = max(worst_defect, s.defect)
        _require(s.defect < DEFECT_TOL, f"{s.rule_id}: defect {s.defect:.2e}")
        evs = np.linalg.eigvalsh(s.metric.matrix)
        _require(evs[0] > 0, f"{s.rule_id}: not positive definite")
        gauge = s.coeffs[ctx.space.n_sub - 1]
        _require(abs(gauge - 1.0) < 1e-9, f"{s.rule_id}: gauge coefficient {gauge}")
    for a in range(len(sols)):
        for b in range(a + 1, len(sols)):
            diff = np.max(np.abs(sols[a].coeffs - sols[b].coeffs)) / max(
                1.0, float(np.max(np.abs(sols[a].coeffs)))
            )
            _require(diff > 1e-6, f"solutions {a} and {b} are homothetic")
    return f"{len(sols)} solution(s), max defect {worst_defect:.1e}, all SPD, no duplicates"


def _check_catalog_agreement(ctx):
    if ctx.closed is None:
        return "bound-only family: no exact branch catalog to compare"
    closed, numeric = ctx.closed, ctx.numeric
    _require(
        len(closed) == len(numeric),
        f"catalog finds {len(closed)} solutions, numeric search {len(numeric)}",
    )
    used = set()
    for s in closed:
        best, bidx = np.inf, None
        for k, t in enumerate(numeric):
            if k in used:
                continue
            d = float(np.max(np.abs(s.coeffs - t.coeffs))) / max(
                1.0, float(np.max(np.abs(s.coeffs)))
            )
            if d < best:
                best, bidx = d, k
        _require(
            best < 1e-7,
            f"{s.rule_id}: closest numeric root differs by {best:.2e}",
        )
        used.add(bidx)
    return f"{len(closed)} exact branches each matched by a numeric root to 1e-7"


def _check_mixing_relations(ctx):
    space = ctx.space
    if not (space.n_sub == 3 and len(space.pairs) == 1):
        return "no intertwined coefficient here (nothing to test)"
    i, j, _ = space.pairs[0]
    k0 = ({0, 1, 2} - {i, j}).pop()
    tested = 0
    for s in ctx.solutions:
        b = s.coeffs[3]
        if abs(b) < 1e-8:
            continue
        tested += 1
        xi = np.linalg.eigvalsh(np.array([[s.coeffs[i], b], [b, s.coeffs[j]]]))
        xi0 = s.coeffs[k0]
        r1 = abs(2.0 * xi[0] * xi[1] - xi0 * xi0)
        r2 = abs(xi[0] + xi[1] - 2.0 * np.sqrt(2.0 * xi[0] * xi[1]))
        _require(r1 < 1e-9 * (1.0 + xi0 * xi0), f"{s.rule_id}: 2*xi1*xi2 != xi0^2 ({r1:.2e})")
        _require(r2 < 1e-9 * (1.0 + abs(xi[0] + xi[1])), f"{s.rule_id}: eigenvalue sum relation fails ({r2:.2e})")
    if tested == 0:
        return "no non-diagonal solution (relations vacuous)"
    return f"xi-relations hold on {tested} non-diagonal solution(s)"


def _check_count_bounds(ctx):
    spec = ctx.spec
    fam, l, p = spec.family, spec.rank, tuple(spec.partition)
    count = len(ctx.solutions)
    if fam == "B" and spec.includes_last_root and p[0] >= 2:
        d = p[0]
        bound = 3 if d == 2 else 4
        _require(count <= bound, f"count {count} exceeds the bound {bound}")
        if d != 2 and count >= 1:
            q = l * l * (l - 2) ** 2 - 2 * (d - 1) ** 2 * (d - 2) * (2 * l - d)
            _require(
                q > 0,
                f"solutions exist but the existence inequality fails (q = {q})",
            )
            return f"count {count} <= {bound}; existence inequality holds (q = {q} > 0)"
        return f"count {count} <= {bound}"
    if fam == "C" and spec.includes_last_root and p[0] >= 2:
        _require(count <= 2, f"count {count} exceeds the bound 2")
        return f"count {count} <= 2"
    if fam == "A" and len(p) == 3 and l != 3:
        _require(count <= 4, f"count {count} exceeds the bound 4")
        return f"count {count} <= 4"
    return f"count {count}; no published bound for this shape"


def _check_variational_critical(ctx):
    space = ctx.space
    h = 1e-6

    def vol_scalar(c):
        A = space.metric_matrix(c)
        det = float(np.linalg.det(A))
        return scalar_curvature(make_metric(space, c / det ** (1.0 / A.shape[0])))

    def grad_inf(c):
        g = np.zeros(space.dim)
        for k in range(space.dim):
            cp, cm = c.copy(), c.copy()
            cp[k] += h
            cm[k] -= h
            g[k] = (vol_scalar(cp) - vol_scalar(cm)) / (2.0 * h)
        return float(np.max(np.abs(g)))

    at_sol = 0.0
    for s in ctx.solutions:
        at_sol = max(at_sol, grad_inf(np.array(s.coeffs, dtype=float)))
        _require(
            at_sol < 1e-5,
            f"{s.rule_id}: scalar curvature not critical (|grad| = {at_sol:.2e})",
        )
    if space.dim == 1:
        # The volume-1 slice is a single point; criticality is vacuous.
        return "one-parameter family: every metric is homothetic to the solution"
    probes = [np.array(s.coeffs, dtype=float) for s in ctx.solutions]
    if not probes:
        probes = [_normal_coeffs(space)]
    off_min = np.inf
    for c in probes:
        cp = c.copy()
        cp[0] *= 1.3
        try:
            g = grad_inf(cp)
        except NotPositiveDefinite:
            continue
        off_min = min(off_min, g)
        _require(
            g > 1e-2,
            f"perturbed metric looks critical (|grad| = {g:.2e})",
        )
    if ctx.solutions:
        return (
            f"|grad S| <= {at_sol:.1e} at solutions, >= {off_min:.1e} at "
            f"perturbed points (volume-1 slice)"
        )
    return f"no solutions; perturbed-point gradient >= {off_min:.1e}"


_CHECKS = [
    ("ambient-ad-invariance", _check_ambient_ad_invariance),
    ("killing-trace-ratio", _check_killing_trace_ratio),
    ("jacobi-identity", _check_jacobi),
    ("orthogonal-basis", _check_orthogonal_basis),
    ("tangent-complement", _check_tangent_complement),
    ("isotropy-stability", _check_isotropy_stability),
    ("summand-dimensions", _check_summand_dimensions),
    ("equivalence-classes", _check_equivalence_classes),
    ("commutant-dimension", _check_commutant_dimension),
    ("metric-invariance", _check_metric_invariance),
    ("frame-orthonormal", _check_frame_orthonormal),
    ("ricci-frame-independence", _check_frame_independence),
    ("ricci-equivariance", _check_ricci_equivariance),
    ("scalar-trace", _check_scalar_trace),
    ("diagonal-route", _check_diagonal_route),
    ("curvature-scaling", _check_curvature_scaling),
    ("connection-term", _check_connection_term),
    ("solution-certificates", _check_solution_certificates),
    ("catalog-agreement", _check_catalog_agreement),
    ("mixing-relations", _check_mixing_relations),
    ("count-bounds", _check_count_bounds),
    ("variational-critical", _check_variational_critical),
]

CHECK_NAMES = [name for name, _ in _CHECKS]


def run_checks(spec):
    """Run every invariant check for one flag.

    Parameters
    ----------
    spec : FlagSpec or str

    Returns
    -------
    list of CheckResult
        One entry per check, in a fixed order.  A check failure is
        recorded, not raised; :class:`UnimplementedCase` from the flag
        construction itself propagates so callers can distinguish
        "unsupported" from "broken".
    """
    if isinstance(spec, str):
        spec = parse_flag_spec(spec)
    ctx = _Context(spec)
    ctx.space  # construct eagerly: UnimplementedCase should propagate
    results = []
    for name, fn in _CHECKS:
        try:
            results.append(CheckResult(name, True, fn(ctx) or ""))
        except _Failure as exc:
            results.append(CheckResult(name, False, str(exc)))
        except UnimplementedCase:
            raise
        except Exception as exc:  # noqa: BLE001 - checks must not abort the suite
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
