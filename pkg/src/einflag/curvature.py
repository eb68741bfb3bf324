"""Ricci curvature of invariant metrics.

Everything runs through an orthonormal frame of the metric.  With frame
structure constants ``T[a,b,c] = g([F_a, F_b]_m, F_c)`` the Ricci tensor of
a homogeneous space of a compact Lie group is

    Ric[a,b] = -1/2 sum_{i,c} T[a,i,c] T[b,i,c]
               + 1/4 sum_{i,j} T[i,j,a] T[i,j,b]
               - 1/2 B(F_a, F_b)
               - 1/2 sum_c Z_c (T[c,a,b] + T[c,b,a])

where B is the Killing form of the transitive group and Z_c = sum_i T[c,i,i]
is the trace vector of the metric.  Z vanishes identically on a reductive
quotient, but it is cheap, so it is computed rather than assumed.
"""

from dataclasses import dataclass, field

import numpy as np

from .invariant import orthonormal_frame

__all__ = [
    "CurvatureReport",
    "curvature",
    "frame_structure",
    "group_ricci",
    "diagonal_ricci",
    "scalar_curvature",
    "u_map",
]


def frame_structure(frame):
    """Structure constants of the bracket over a metric-orthonormal frame.

    Parameters
    ----------
    frame : Frame

    Returns
    -------
    ndarray
        ``T[a, b, c] = g([F_a, F_b]_m, F_c)``, antisymmetric in the first
        two slots.  The last slot is lowered with the metric itself, so T
        is fully antisymmetric exactly when the metric is naturally
        reductive.
    """
    space = frame.metric.space
    V = frame.vectors
    t = space.structure
    # g-components of a tangent vector are read off against A V = V^{-T}
    W = np.linalg.inv(V)
    mid = np.einsum("ia,jb,ijk->abk", V, V, t, optimize=True)
    return np.einsum("abk,ck->abc", mid, W, optimize=True)


@dataclass
class CurvatureReport:
    """Curvature data of one invariant metric.

    Attributes
    ----------
    ricci : ndarray
        Ricci tensor over the orthonormal frame; the metric is Einstein
        exactly when this is a multiple of the identity.
    ricci_tangent : ndarray
        The same bilinear form over the tangent basis.
    coefficients : ndarray
        Expansion of the Ricci form in the metric-space parametrization
        (one slot per summand, then one per equivalent pair).
    scalar : float
        Scalar curvature, the frame trace of ``ricci``.
    scalar_direct : float
        Scalar curvature recomputed from the independent sum formula
        ``-1/4 sum T^2 - 1/2 tr B - |Z|^2``; agreement with ``scalar`` is
        a consistency check, not a definition.
    einstein_constant : float
        Best-fit constant ``scalar / dim``.
    einstein_defect : float
        Frobenius distance of ``ricci`` from ``einstein_constant * I``.
    normalized_constant : float
        Scale-invariant constant ``einstein_constant * det(A)^(1/dim)``.
    trace_vector : ndarray
        The frame components of Z.
    """

    metric: object
    frame: object = field(repr=False)
    ricci: np.ndarray = field(repr=False)
    ricci_tangent: np.ndarray = field(repr=False)
    coefficients: np.ndarray
    scalar: float
    scalar_direct: float
    einstein_constant: float
    einstein_defect: float
    normalized_constant: float
    trace_vector: np.ndarray = field(repr=False)

    def __str__(self):
        return (
            f"curvature(S={self.scalar:.6g}, c={self.einstein_constant:.6g}, "
            f"defect={self.einstein_defect:.3g})"
        )


def _form_coefficients(space, form):
    """Expand an invariant symmetric form over the metric-space operators.

    The projector and intertwiner operators are mutually Frobenius
    orthogonal, so the expansion is a plain inner-product projection.
    """
    coeffs = []
    for op in space.operators:
        coeffs.append(np.tensordot(form, op) / np.tensordot(op, op))
    return np.array(coeffs)


def curvature(metric, frame=None):
    """Full curvature report of an invariant metric.

    Parameters
    ----------
    metric : InvariantMetric
    frame : Frame, optional
        A metric-orthonormal frame to evaluate in.  Defaults to the
        canonical eigenframe; any other metric-orthonormal frame must give
        the same tangent-coordinate Ricci form, which the verification
        suite exploits.

    Returns
    -------
    CurvatureReport
    """
    space = metric.space
    if frame is None:
        frame = orthonormal_frame(metric)
    T = frame_structure(frame)
    V = frame.vectors
    d = space.tangent_dim

    K = V.T @ space.killing @ V
    Z = np.einsum("cii->c", T)
    ric = (
        -0.5 * np.einsum("aic,bic->ab", T, T, optimize=True)
        + 0.25 * np.einsum("ija,ijb->ab", T, T, optimize=True)
        - 0.5 * K
        - 0.5 * (np.einsum("c,cab->ab", Z, T) + np.einsum("c,cba->ab", Z, T))
    )

    scalar = float(np.trace(ric))
    scalar_direct = float(
        -0.25 * np.einsum("abc,abc->", T, T) - 0.5 * np.trace(K) - Z @ Z
    )
    c = scalar / d
    defect = float(np.linalg.norm(ric - c * np.eye(d)))
    _, logdet = np.linalg.slogdet(metric.matrix)
    normalized = c * float(np.exp(logdet / d))

    Vinv = np.linalg.inv(V)
    ric_tan = Vinv.T @ ric @ Vinv
    coeffs = _form_coefficients(space, ric_tan)

    return CurvatureReport(
        metric=metric,
        frame=frame,
        ricci=ric,
        ricci_tangent=ric_tan,
        coefficients=coeffs,
        scalar=scalar,
        scalar_direct=scalar_direct,
        einstein_constant=c,
        einstein_defect=defect,
        normalized_constant=normalized,
        trace_vector=Z,
    )


def scalar_curvature(metric):
    """Scalar curvature of an invariant metric."""
    return curvature(metric).scalar


def u_map(metric, x, y):
    """Symmetric bilinear term of the Levi-Civita connection on the tangent space.

    For tangent coordinate vectors ``x`` and ``y`` this returns the
    coordinates of ``U(x, y)``, defined against a metric-orthonormal frame
    ``(F_a)`` by

        U(x, y) = 1/2 * sum_a ( g([F_a, x]_m, y) + g([F_a, y]_m, x) ) F_a.

    ``U`` is symmetric in its arguments, and it vanishes identically when
    the metric is the normal one (the structure constants are then fully
    antisymmetric).
    """
    space = metric.space
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    frame = orthonormal_frame(metric)
    V = frame.vectors
    t = space.structure
    A = metric.matrix
    # bx[a, c] = coordinates of the tangent part of [F_a, x]
    bx = np.einsum("ia,j,ijc->ac", V, x, t, optimize=True)
    by = np.einsum("ia,j,ijc->ac", V, y, t, optimize=True)
    alpha = 0.5 * (bx @ (A @ y) + by @ (A @ x))
    return V @ alpha


def group_ricci(report, tol=1e-8):
    """Per-summand Ricci eigenvalues read off the frame diagonal.

    The frame columns of one summand share an eigenvalue of the metric
    operator, and invariance forces the Ricci diagonal to be constant on
    each such group.  Returns the group values in summand order; a spread
    above ``tol`` within a group raises ValueError.
    """
    diag = np.diag(report.ricci)
    out = []
    for cols in report.frame.groups:
        vals = diag[list(cols)]
        if vals.max() - vals.min() > tol * max(1.0, np.abs(vals).max()):
            raise ValueError("Ricci diagonal is not constant on a summand")
        out.append(vals.mean())
    return np.array(out)


def diagonal_ricci(metric):
    """Per-summand Ricci values of a diagonal metric from block triple sums.

    A fast path that never builds the frame: with [ijk] the sum of squared
    structure constants taken over summand blocks,

        r_k = kappa_k/(2 x_k)
              - 1/(2 x_k d_k) sum_{j,c} (x_c/x_j) [kjc]
              + x_k/(4 d_k)   sum_{i,j} [ijk]/(x_i x_j)

    where kappa_k is the (sign-reversed) Killing constant of the summand.
    Raises ValueError when the metric has a non-zero mixing coefficient.
    """
    space = metric.space
    n_sub = space.n_sub
    coeffs = metric.coeffs
    if space.dim > n_sub and np.max(np.abs(coeffs[n_sub:])) > 1e-14:
        raise ValueError("fast path only applies to diagonal metrics")
    x = coeffs[:n_sub]
    t2 = space.structure**2
    dims = np.array([s.stop - s.start for s in space.slices])
    triple = np.zeros((n_sub, n_sub, n_sub))
    for i, si in enumerate(space.slices):
        for j, sj in enumerate(space.slices):
            for k, sk in enumerate(space.slices):
                triple[i, j, k] = t2[si, sj, sk].sum()
    kdiag = np.diag(space.killing)
    out = np.zeros(n_sub)
    for k in range(n_sub):
        kappa = -kdiag[space.slices[k]].mean()
        ratio = np.outer(1.0 / x, x)  # ratio[j, c] = x_c / x_j
        r = kappa / (2.0 * x[k])
        r -= (ratio * triple[k]).sum() / (2.0 * x[k] * dims[k])
        r += x[k] / (4.0 * dims[k]) * (triple[:, :, k] / np.outer(x, x)).sum()
        out[k] = r
    return out
