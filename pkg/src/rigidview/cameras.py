"""Cameras, rigs, focal points, epipoles, fundamental matrices.

A camera is a rank-3 3x4 matrix mapping world points in P^3 to image points
in P^2.  A rig is an ordered list of at least two cameras over one scalar
backend, with eagerly computed caches: focal points (camera kernels),
epipoles (images of the other cameras' focal points), fundamental matrices
(extracted from the 6x6 two-camera determinant), and a general-position
validation record.  Degenerate rigs are constructible on purpose; the
violations are recorded rather than rejected, because negative tests and
special-position scenarios need them.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import (
    DEFAULT_RANK_TOL,
    EXACT,
    FLOAT,
    BackendError,
    Mat,
    Scalar,
    ShapeError,
    decode_scalar,
    det,
    encode_scalar,
    integer_cleared,
    nullspace,
    rank,
)


class ProjectionError(ValueError):
    """Raised when projecting a camera's own focal point."""


class ProjectivePoint:
    """Homogeneous coordinate vector: length 4 for world points, 3 for image
    points.  Equality is up to nonzero scale, never componentwise; the stored
    representative is kept exactly as given."""

    __slots__ = ("coords", "backend")

    def __init__(self, coords: Iterable[Scalar]):
        coords = tuple(coords)
        if len(coords) not in (3, 4):
            raise ShapeError("projective points have 3 (image) or 4 (world) coordinates")
        has_float = any(isinstance(x, float) for x in coords)
        has_frac = any(isinstance(x, Fraction) for x in coords)
        if has_float and has_frac:
            raise BackendError("cannot mix Fraction and float coordinates")
        if has_float:
            coords = tuple(float(x) for x in coords)
        if all(x == 0 for x in coords):
            raise ValueError("all coordinates are zero")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "backend", FLOAT if has_float else EXACT)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def canonical(self) -> tuple:
        """Canonical exact representative: coprime integers, first nonzero positive."""
        if self.backend != EXACT:
            raise BackendError("canonical form is defined on the exact backend")
        ints = integer_cleared(self.coords)
        lead = next(x for x in ints if x != 0)
        return ints if lead > 0 else tuple(-x for x in ints)

    def scaled(self, c: Scalar) -> "ProjectivePoint":
        if c == 0:
            raise ValueError("scale must be nonzero")
        return ProjectivePoint(tuple(c * x for x in self.coords))

    def to_float(self) -> "ProjectivePoint":
        return ProjectivePoint(tuple(float(x) for x in self.coords))

    def same_as(self, other: "ProjectivePoint", tol: float | None = None) -> bool:
        return projectively_equal(self, other, tol)

    def __repr__(self):
        return f"ProjectivePoint({list(self.coords)})"

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.backend == EXACT and other.backend == EXACT:
            return len(self) == len(other) and self.canonical() == other.canonical()
        return NotImplemented

    def __hash__(self):
        if self.backend != EXACT:
            raise BackendError("float points are not hashable")
        return hash(self.canonical())


def projectively_equal(a: ProjectivePoint, b: ProjectivePoint, tol: float | None = None) -> bool:
    """Scale-invariant equality.  Exact backend compares canonical forms;
    float backend compares unit-scaled vectors up to sign within ``tol``."""
    if len(a) != len(b):
        return False
    if a.backend == EXACT and b.backend == EXACT:
        return a.canonical() == b.canonical()
    if tol is None:
        tol = DEFAULT_RANK_TOL
    av = [float(x) for x in a.coords]
    bv = [float(x) for x in b.coords]
    na = sum(x * x for x in av) ** 0.5
    nb = sum(x * x for x in bv) ** 0.5
    av = [x / na for x in av]
    bv = [x / nb for x in bv]
    lead = max(range(len(av)), key=lambda i: abs(av[i]))
    if av[lead] * bv[lead] < 0:
        bv = [-x for x in bv]
    return max(abs(x - y) for x, y in zip(av, bv)) <= tol


ImageTuple = tuple  # tuple of n image-plane ProjectivePoint


class Camera:
    """A 3x4 projection matrix with its cached focal point (the kernel).

    Rank-deficient matrices are representable (focal_point is then None) so
    that rigs can record the violation instead of refusing construction.
    """

    __slots__ = ("matrix", "rank", "focal_point")

    def __init__(self, matrix: Mat, tol: float | None = None):
        if (matrix.rows, matrix.cols) != (3, 4):
            raise ShapeError("camera matrices are 3x4")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rank", rank(matrix, tol).rank)
        focal = None
        if self.rank == 3:
            kern = nullspace(matrix, tol)
            if len(kern) == 1:
                focal = ProjectivePoint(kern[0])
        object.__setattr__(self, "focal_point", focal)

    def __setattr__(self, name, value):
        raise AttributeError("Camera is immutable")

    @property
    def backend(self) -> str:
        return self.matrix.backend

    def project(self, x: ProjectivePoint, tol: float | None = None) -> ProjectivePoint:
        if len(x) != 4:
            raise ShapeError("projection expects a world point")
        image = self.matrix.apply(x.coords)
        if self.backend == FLOAT:
            scale = max(abs(e) for r in self.matrix.data for e in r) * max(abs(c) for c in x.coords)
            cutoff = (tol if tol is not None else DEFAULT_RANK_TOL) * max(scale, 1.0)
            if max(abs(c) for c in image) <= cutoff:
                raise ProjectionError("point coincides with the focal point")
        elif all(c == 0 for c in image):
            raise ProjectionError("point coincides with the focal point")
        return ProjectivePoint(image)

    def __repr__(self):
        return f"Camera(rank={self.rank}, backend={self.backend})"


class GeneralPositionReport:
    """Validation record for a rig's focal-point configuration."""

    __slots__ = ("ok", "violations")

    def __init__(self, violations: Sequence[str]):
        self.violations = tuple(violations)
        self.ok = not self.violations

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"GeneralPositionReport(ok={self.ok}, violations={list(self.violations)})"


class MembershipResult:
    """Outcome of the consistency test for an image tuple.

    ``ok`` is True when the stacked system admits a world point; ``point`` is
    the recovered world point when the kernel is one-dimensional, ``lambdas``
    the per-camera scales, and ``zero_lambdas`` the cameras whose scale
    vanished (the world point sits on that camera's focal plane limit).
    """

    __slots__ = ("ok", "rank", "point", "lambdas", "zero_lambdas")

    def __init__(self, ok, rank, point=None, lambdas=None, zero_lambdas=()):
        self.ok = ok
        self.rank = rank
        self.point = point
        self.lambdas = lambdas
        self.zero_lambdas = tuple(zero_lambdas)

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"MembershipResult(ok={self.ok}, rank={self.rank})"


class CameraRig:
    """An ordered configuration of n >= 2 cameras with eager caches.

    Caches: focal points, all ordered epipoles e[(k, j)] = A_k applied to the
    focal point of camera j, fundamental matrices for unordered pairs, and
    the general-position record.  Immutable after construction, safe to share.
    """

    __slots__ = ("cameras", "tol", "general_position", "_epipoles", "_fundamentals")

    def __init__(self, matrices: Sequence[Mat | Camera], tol: float | None = None):
        cams = tuple(m if isinstance(m, Camera) else Camera(m, tol) for m in matrices)
        if len(cams) < 2:
            raise ValueError("a rig needs at least two cameras")
        backends = {c.backend for c in cams}
        if len(backends) != 1:
            raise BackendError("all cameras in a rig must share one backend")
        object.__setattr__(self, "cameras", cams)
        object.__setattr__(self, "tol", tol)
        epipoles = {}
        for k, j in itertools.permutations(range(len(cams)), 2):
            fj = cams[j].focal_point
            e = None
            if fj is not None:
                coords = cams[k].matrix.apply(fj.coords)
                if any(c != 0 for c in coords):
                    e = ProjectivePoint(coords)
            epipoles[(k, j)] = e
        object.__setattr__(self, "_epipoles", epipoles)
        fundamentals = {}
        for j, k in itertools.combinations(range(len(cams)), 2):
            fundamentals[(j, k)] = _extract_fundamental(cams[j].matrix, cams[k].matrix)
        object.__setattr__(self, "_fundamentals", fundamentals)
        object.__setattr__(self, "general_position", _validate_focal_points(cams, tol))

    def __setattr__(self, name, value):
        raise AttributeError("CameraRig is immutable")

    @property
    def n(self) -> int:
        return len(self.cameras)

    @property
    def backend(self) -> str:
        return self.cameras[0].backend

    def camera(self, j: int) -> Camera:
        return self.cameras[j]

    def focal_point(self, j: int) -> Optional[ProjectivePoint]:
        return self.cameras[j].focal_point

    def epipole(self, k: int, j: int) -> Optional[ProjectivePoint]:
        """The image of focal point j in the image plane of camera k."""
        if k == j:
            raise ValueError("epipoles are defined for distinct camera indices")
        return self._epipoles[(k, j)]

    def fundamental(self, j: int, k: int) -> Mat:
        """The 3x3 matrix F with u_j^T F u_k equal to the 6x6 two-camera determinant."""
        if j == k:
            raise ValueError("fundamental matrices need distinct cameras")
        if j < k:
            return self._fundamentals[(j, k)]
        return self._fundamentals[(k, j)].transpose()

    def __repr__(self):
        return f"CameraRig(n={self.n}, backend={self.backend}, general_position={self.general_position.ok})"


def _extract_fundamental(aj: Mat, ak: Mat) -> Mat:
    """Coefficient extraction: F[a][b] is the two-camera determinant evaluated
    at unit image vectors e_a, e_b."""
    backend = aj.backend
    zero, one = (0.0, 1.0) if backend == FLOAT else (0, 1)
    rows = []
    for a in range(3):
        row = []
        for b in range(3):
            m = []
            for r in range(3):
                m.append(list(aj.data[r]) + [one if r == a else zero, zero])
            for r in range(3):
                m.append(list(ak.data[r]) + [zero, one if r == b else zero])
            row.append(det(Mat(m)))
        rows.append(row)
    return Mat(rows)


def _validate_focal_points(cams, tol) -> GeneralPositionReport:
    violations = []
    for i, c in enumerate(cams):
        if c.rank < 3:
            violations.append(f"camera {i} is rank deficient (rank {c.rank})")
    focals = [c.focal_point for c in cams]
    if any(f is None for f in focals):
        return GeneralPositionReport(violations)
    for i, j in itertools.combinations(range(len(cams)), 2):
        if projectively_equal(focals[i], focals[j], tol):
            violations.append(f"focal points {i} and {j} coincide")
    for trip in itertools.combinations(range(len(cams)), 3):
        stacked = Mat([focals[i].coords for i in trip])
        if rank(stacked, tol).rank < 3:
            violations.append(f"focal points {trip} are collinear")
    for quad in itertools.combinations(range(len(cams)), 4):
        stacked = Mat([focals[i].coords for i in quad])
        if rank(stacked, tol).rank < 4:
            violations.append(f"focal points {quad} are coplanar")
    return GeneralPositionReport(violations)


def forward_map(rig: CameraRig, x: ProjectivePoint, tol: float | None = None) -> ImageTuple:
    """Project a world point through every camera of the rig."""
    return tuple(cam.project(x, tol) for cam in rig.cameras)


def multiview_membership(rig: CameraRig, points: Sequence[ProjectivePoint],
                         tol: float | None = None) -> MembershipResult:
    """Test whether an image tuple is a consistent set of n views.

    Stacks the block rows [A_j | 0 .. u_j .. 0] into a 3n x (4+n) matrix;
    the tuple is consistent exactly when the rank stays at most n+3, in
    which case a kernel vector carries the world point and the scales.
    """
    n = rig.n
    if len(points) != n:
        raise ShapeError(f"expected {n} image points, got {len(points)}")
    if any(len(p) != 3 for p in points):
        raise ShapeError("image points have 3 coordinates")
    backend = rig.backend
    zero = 0.0 if backend == FLOAT else 0
    rows = []
    for j, cam in enumerate(rig.cameras):
        for r in range(3):
            extra = [zero] * n
            extra[j] = points[j][r]
            rows.append(list(cam.matrix.data[r]) + extra)
    stacked = Mat(rows)
    if tol is None:
        tol = rig.tol
    r = rank(stacked, tol).rank
    if r > n + 3:
        return MembershipResult(False, r)
    kern = nullspace(stacked, tol)
    if len(kern) != 1:
        return MembershipResult(True, r)
    v = kern[0]
    world = v[:4]
    if all(c == 0 for c in world):
        return MembershipResult(True, r)
    lambdas = tuple(-c for c in v[4:])
    if backend == EXACT:
        zeros = tuple(j for j, lam in enumerate(lambdas) if lam == 0)
    else:
        scale = max(abs(c) for c in lambdas) or 1.0
        cut = (tol if tol is not None else DEFAULT_RANK_TOL) * scale
        zeros = tuple(j for j, lam in enumerate(lambdas) if abs(lam) <= cut)
    return MembershipResult(True, r, ProjectivePoint(world), lambdas, zeros)


class RigidMotion:
    """A 4x4 world motion [R t; 0 1] with R orthogonal of determinant one.

    The exact backend admits rational rotations (see :func:`cayley_rotation`).
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: Mat, tol: float | None = None):
        if (matrix.rows, matrix.cols) != (4, 4):
            raise ShapeError("rigid motions are 4x4")
        r = matrix.submatrix(range(3), range(3))
        bottom = matrix.row(3)
        rtr = r.transpose() @ r
        if matrix.backend == EXACT:
            if tuple(bottom) != (0, 0, 0, 1):
                raise ValueError("bottom row must be (0, 0, 0, 1)")
            if rtr != Mat.identity(3) or det(r) != 1:
                raise ValueError("rotation block must be orthogonal with determinant 1")
        else:
            t = tol if tol is not None else 1e-9
            if max(abs(b - e) for b, e in zip(bottom, (0.0, 0.0, 0.0, 1.0))) > t:
                raise ValueError("bottom row must be (0, 0, 0, 1)")
            err = max(abs(rtr[i, j] - (1.0 if i == j else 0.0)) for i in range(3) for j in range(3))
            if err > t or abs(det(r) - 1.0) > t:
                raise ValueError("rotation block must be orthogonal with determinant 1")
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("RigidMotion is immutable")

    @classmethod
    def from_parts(cls, rotation: Mat, translation: Sequence[Scalar]) -> "RigidMotion":
        zero, one = (0.0, 1.0) if rotation.backend == FLOAT else (0, 1)
        rows = [list(rotation.data[i]) + [translation[i]] for i in range(3)]
        rows.append([zero, zero, zero, one])
        return cls(Mat(rows))

    @classmethod
    def identity(cls, backend: str = EXACT) -> "RigidMotion":
        return cls(Mat.identity(4, backend))


def cayley_rotation(a: Scalar, b: Scalar, c: Scalar) -> Mat:
    """Exact rational rotation (I - S)(I + S)^-1 for the skew matrix built
    from (a, b, c); always orthogonal with determinant one."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    s = Mat([[0, -c, b], [c, 0, -a], [-b, a, 0]])
    i3 = Mat.identity(3)
    i_minus = Mat([[i3[r, q] - s[r, q] for q in range(3)] for r in range(3)])
    i_plus = Mat([[i3[r, q] + s[r, q] for q in range(3)] for r in range(3)])
    return i_minus @ _inverse3(i_plus)


def _inverse3(m: Mat) -> Mat:
    d = det(m)
    if d == 0:
        raise ValueError("matrix is singular")
    cof = []
    for i in range(3):
        row = []
        for j in range(3):
            sub = m.delete_row(i).delete_col(j)
            sign = 1 if (i + j) % 2 == 0 else -1
            row.append(Fraction(sign * det(sub), 1) / d)
        cof.append(row)
    return Mat(cof).transpose()


def invert(m: Mat, tol: float | None = None) -> Mat:
    """Inverse of a small square matrix via Gauss-Jordan."""
    if not m.is_square():
        raise ShapeError("inverse needs a square matrix")
    n = m.rows
    if m.backend == EXACT:
        a = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0) for j in range(n)]
             for i, r in enumerate(m.data)]
    else:
        a = [[float(x) for x in r] + [1.0 if i == j else 0.0 for j in range(n)]
             for i, r in enumerate(m.data)]
    for k in range(n):
        piv_row = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv_row][k] == 0:
            raise ValueError("matrix is singular")
        if m.backend == FLOAT and abs(a[piv_row][k]) <= (tol if tol is not None else 0.0):
            raise ValueError("matrix is singular within tolerance")
        a[k], a[piv_row] = a[piv_row], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    inv = [r[n:] for r in a]
    if m.backend == EXACT:
        inv = [[x.numerator if x.denominator == 1 else x for x in r] for r in inv]
    return Mat(inv)


def apply_right_action(rig: CameraRig, motion: RigidMotion | Mat) -> CameraRig:
    """New rig with every camera multiplied on the right by a world transform."""
    n_mat = motion.matrix if isinstance(motion, RigidMotion) else motion
    if (n_mat.rows, n_mat.cols) != (4, 4):
        raise ShapeError("right action expects a 4x4 transform")
    if rig.backend == EXACT:
        if det(n_mat) == 0:
            raise ValueError("transform is singular")
    elif rank(n_mat, rig.tol).rank < 4:
        raise ValueError("transform is singular within tolerance")
    return CameraRig([cam.matrix @ n_mat for cam in rig.cameras], rig.tol)


def apply_left_action(rig: CameraRig, mats: Sequence[Mat]) -> CameraRig:
    """New rig with camera j multiplied on the left by the invertible 3x3 mats[j]."""
    if len(mats) != rig.n:
        raise ShapeError("need one 3x3 matrix per camera")
    for m in mats:
        if (m.rows, m.cols) != (3, 3):
            raise ShapeError("left action expects 3x3 transforms")
        if rig.backend == EXACT:
            if det(m) == 0:
                raise ValueError("transform is singular")
        elif rank(m, rig.tol).rank < 3:
            raise ValueError("transform is singular within tolerance")
    return CameraRig([m @ cam.matrix for m, cam in zip(mats, rig.cameras)], rig.tol)


def rig_to_json(rig: CameraRig) -> dict:
    """JSON document for a rig: row-major camera entries, rationals as 'p/q'."""
    return {"cameras": [[encode_scalar(x) for row in cam.matrix.data for x in row]
                        for cam in rig.cameras]}


def rig_from_json(doc: dict, backend: str | None = None, tol: float | None = None) -> CameraRig:
    cams = doc["cameras"]
    if backend is None:
        has_str = any(isinstance(x, str) for flat in cams for x in flat)
        backend = EXACT if has_str else (
            EXACT if all(isinstance(x, int) for flat in cams for x in flat) else FLOAT)
    mats = []
    for flat in cams:
        if len(flat) != 12:
            raise ShapeError("each camera needs 12 row-major entries")
        vals = [decode_scalar(x, backend) for x in flat]
        mats.append(Mat([vals[0:4], vals[4:8], vals[8:12]]))
    return CameraRig(mats, tol)
