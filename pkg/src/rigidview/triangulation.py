"""Two-camera triangulation through row-deleted cofactor vectors.

For a camera pair (j, k) and image points u_j, u_k the 6x6 matrix

    B = [ A_j  u_j  0  ]
        [ A_k  0   u_k ]

has the kernel vector (X, -lambda_j, -lambda_k) when the two back-projected
lines meet in the world point X.  For rank-5 B the kernel is recovered by
Cramer's rule: deleting any row i and taking signed maximal minors yields a
vector whose first four coordinates represent X.  The recovery is available
exactly over rationals and with tolerances over floats.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .cameras import CameraRig, ImageTuple, ProjectivePoint, multiview_membership
from .linalg import EXACT, FLOAT, Mat, rank, signed_maximal_minors


class NotInVarietyError(ValueError):
    """The image tuple is not a consistent set of views."""


class NotTriangulableError(ValueError):
    """No camera pair determines the world point (epipole pair, two cameras)."""


class AmbiguousTriangulationError(ValueError):
    """Float-backend candidates disagree beyond the consistency tolerance."""


class BMatrix:
    """The 6x6 triangulation matrix of a camera pair with its source data."""

    __slots__ = ("mat", "j", "k", "u_j", "u_k")

    def __init__(self, mat: Mat, j: int, k: int, u_j: ProjectivePoint, u_k: ProjectivePoint):
        self.mat = mat
        self.j = j
        self.k = k
        self.u_j = u_j
        self.u_k = u_k

    def __repr__(self):
        return f"BMatrix(pair=({self.j}, {self.k}))"


class TriangulationWitness:
    __slots__ = ("j", "k", "row")

    def __init__(self, j: int, k: int, row: int):
        self.j = j
        self.k = k
        self.row = row

    def __repr__(self):
        return f"TriangulationWitness(pair=({self.j}, {self.k}), row={self.row})"


class TriangulationSolution:
    """Recovered world point with the scales of the witness pair.

    The stored representatives satisfy A_j X = lambda_j u_j and
    A_k X = lambda_k u_k exactly on the exact backend.
    """

    __slots__ = ("point", "lambdas", "witness", "rank_of_b")

    def __init__(self, point: ProjectivePoint, lambdas: tuple,
                 witness: TriangulationWitness, rank_of_b: int):
        self.point = point
        self.lambdas = lambdas
        self.witness = witness
        self.rank_of_b = rank_of_b

    def __repr__(self):
        return f"TriangulationSolution(point={self.point!r}, witness={self.witness!r})"


def assemble_b(rig: CameraRig, j: int, k: int,
               u_j: ProjectivePoint, u_k: ProjectivePoint) -> BMatrix:
    """Build the 6x6 block matrix [A_j u_j 0; A_k 0 u_k]."""
    if j == k:
        raise ValueError("camera indices must differ")
    backend = rig.backend
    zero = 0.0 if backend == FLOAT else 0
    aj = rig.camera(j).matrix
    ak = rig.camera(k).matrix
    rows = [list(aj.data[r]) + [u_j[r], zero] for r in range(3)]
    rows += [list(ak.data[r]) + [zero, u_k[r]] for r in range(3)]
    return BMatrix(Mat(rows), j, k, u_j, u_k)


def wedge5(b: BMatrix, i: int) -> tuple:
    """Signed maximal minors of B with row i (0-based) deleted.

    The result spans the kernel of the remaining 5x6 matrix; component sign
    convention follows :func:`rigidview.linalg.signed_maximal_minors`.
    """
    return signed_maximal_minors(b.mat.delete_row(i))


def wedge5_point(b: BMatrix, i: int, tol: float | None = None) -> Optional[ProjectivePoint]:
    """First four coordinates of the row-i cofactor vector as a world point,
    or None when they all vanish (the flagged zero case, not an error)."""
    w = wedge5(b, i)[:4]
    if b.mat.backend == EXACT:
        if all(x == 0 for x in w):
            return None
    else:
        scale = max(abs(x) for x in b.mat.data[0]) or 1.0
        cut = (tol if tol is not None else 0.0)
        if max(abs(x) for x in w) <= cut * scale:
            return None
        if all(x == 0.0 for x in w):
            return None
    return ProjectivePoint(w)


def is_triangulable(rig: CameraRig, points: Sequence[ProjectivePoint],
                    tol: float | None = None) -> Optional[TriangulationWitness]:
    """Find a camera pair whose triangulation matrix has rank 5, together
    with a row index giving a nonzero recovered point.

    Returns the witness, or None when every pair degenerates (for two
    cameras this happens exactly at the epipole pair).  Raises
    :class:`NotInVarietyError` when the tuple is not consistent.
    """
    membership = multiview_membership(rig, points, tol)
    if not membership.ok:
        raise NotInVarietyError("tuple fails the consistency rank test")
    return _find_witness(rig, points, tol)


def _find_witness(rig, points, tol):
    for j in range(rig.n):
        for k in range(j + 1, rig.n):
            b = assemble_b(rig, j, k, points[j], points[k])
            if rank(b.mat, tol).rank != 5:
                continue
            for i in range(6):
                if wedge5_point(b, i, tol) is not None:
                    return TriangulationWitness(j, k, i)
    return None


def triangulate(rig: CameraRig, points: Sequence[ProjectivePoint],
                tol: float | None = None,
                consistency_tol: float = 1e-6) -> TriangulationSolution:
    """Recover the world point behind a consistent image tuple.

    Scans camera pairs lexicographically and rows first-to-last, takes the
    first valid witness, and cross-checks every other nonzero row candidate
    of that pair: on the exact backend they must agree up to scale
    identically, on the float backend within ``consistency_tol`` of angular
    distance.
    """
    membership = multiview_membership(rig, points, tol)
    if not membership.ok:
        raise NotInVarietyError("tuple fails the consistency rank test")
    witness = _find_witness(rig, points, tol)
    if witness is None:
        raise NotTriangulableError("no camera pair has a rank-5 triangulation matrix")
    b = assemble_b(rig, witness.j, witness.k, points[witness.j], points[witness.k])
    chosen = None
    for i in range(6):
        w = wedge5(b, i)
        candidate = wedge5_point(b, i, tol)
        if candidate is None:
            continue
        if chosen is None:
            chosen = (w, candidate)
            if b.mat.backend == FLOAT:
                continue
        else:
            if b.mat.backend == EXACT:
                if not _proportional_exact(chosen[1].coords, candidate.coords):
                    raise AmbiguousTriangulationError(
                        f"rows {witness.row} and {i} give different points")
            elif _angular_distance(chosen[1].coords, candidate.coords) > consistency_tol:
                raise AmbiguousTriangulationError(
                    f"rows {witness.row} and {i} disagree beyond tolerance")
    w, point = chosen
    lambdas = (-w[4], -w[5])
    rank_of_b = rank(b.mat, tol).rank
    return TriangulationSolution(point, lambdas, witness, rank_of_b)


def _proportional_exact(a, b) -> bool:
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


def _angular_distance(a, b) -> float:
    na = sum(float(x) * float(x) for x in a) ** 0.5
    nb = sum(float(x) * float(x) for x in b) ** 0.5
    av = [float(x) / na for x in a]
    bv = [float(x) / nb for x in b]
    d_plus = sum((x - y) ** 2 for x, y in zip(av, bv)) ** 0.5
    d_minus = sum((x + y) ** 2 for x, y in zip(av, bv)) ** 0.5
    return min(d_plus, d_minus)
