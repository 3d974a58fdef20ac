"""Distance constraints on world points and the equation families that cut
out their images.

The central object is the biquadric Q vanishing on pairs of world points at
a fixed Euclidean distance, together with its order-4 polarization tensor T.
Substituting triangulation cofactor vectors for the two world points turns
T into degree-8 image-space constraints ("octics"); families of those, plus
bilinear and trilinear consistency residuals, give set-level membership
tests for image pairs of distance-linked points.  Everything evaluates over
both scalar backends; vanishing tests are exact on rationals and
norm-normalized on floats.
"""

from __future__ import annotations

import itertools
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .cameras import CameraRig, ProjectivePoint, multiview_membership
from .linalg import EXACT, FLOAT, Mat, Scalar, ShapeError, det, encode_scalar
from .triangulation import assemble_b, triangulate, wedge5, _find_witness


class Family(str, Enum):
    """Constraint-family tags."""

    MULTIVIEW_BILINEAR = "bilinear"
    MULTIVIEW_TRILINEAR = "trilinear"
    OCTIC_FULL = "octic_full"
    OCTIC_NINE = "octic_nine"
    OCTIC_SIXTEEN = "octic_sixteen"
    COPLANAR = "coplanar"
    PAIRWISE_DISTANCE = "pairwise_distance"
    GENERAL_DE = "general_de"


class ChowFactorError(ValueError):
    """The symmetric matrix does not factor into a real rational point pair."""

    def __init__(self, message, reason):
        super().__init__(message)
        self.reason = reason


class BihomForm:
    """A bihomogeneous form of bidegree (d, e) in two blocks of four world
    coordinates, stored as a sparse exponent-to-coefficient map."""

    __slots__ = ("bidegree", "coeffs")

    def __init__(self, bidegree, coeffs):
        d, e = bidegree
        clean = {}
        for (alpha, beta), c in coeffs.items():
            alpha, beta = tuple(alpha), tuple(beta)
            if len(alpha) != 4 or len(beta) != 4:
                raise ShapeError("exponent vectors have length 4")
            if sum(alpha) != d or sum(beta) != e:
                raise ValueError(f"exponents {(alpha, beta)} do not match bidegree {(d, e)}")
            if c != 0:
                clean[(alpha, beta)] = c
        self.bidegree = (d, e)
        self.coeffs = clean

    def evaluate(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        total = 0
        for (alpha, beta), c in self.coeffs.items():
            term = c
            for xi, a in zip(x, alpha):
                if a:
                    term = term * xi ** a
            for yi, b in zip(y, beta):
                if b:
                    term = term * yi ** b
            total = total + term
        return total

    def __eq__(self, other):
        return (isinstance(other, BihomForm)
                and self.bidegree == other.bidegree
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"BihomForm(bidegree={self.bidegree}, terms={len(self.coeffs)})"


def unit_distance_form() -> BihomForm:
    """The (2,2) form vanishing exactly on pairs of affine points at distance 1:
    sum of (X_i Y_3 - Y_i X_3)^2 for i < 3, minus X_3^2 Y_3^2."""
    return distance_form(1)


def distance_form(d: Scalar) -> BihomForm:
    """Distance-d variant: the final coefficient becomes -d^2."""
    if d == 0:
        raise ValueError("distance must be nonzero")
    return distance_form_squared(d * d)


def distance_form_squared(s: Scalar) -> BihomForm:
    """Distance form parametrized by the squared distance, so configurations
    with rational squared (but irrational) distances stay exact."""
    if s <= 0:
        raise ValueError("squared distance must be positive")
    e3 = (0, 0, 0, 1)
    coeffs = {}
    for i in range(3):
        ei = tuple(1 if t == i else 0 for t in range(4))
        two_i = tuple(2 if t == i else 0 for t in range(4))
        two_3 = (0, 0, 0, 2)
        mixed = tuple(a + b for a, b in zip(ei, e3))
        coeffs[(two_i, two_3)] = coeffs.get((two_i, two_3), 0) + 1
        coeffs[(two_3, two_i)] = coeffs.get((two_3, two_i), 0) + 1
        coeffs[(mixed, mixed)] = coeffs.get((mixed, mixed), 0) - 2
    coeffs[((0, 0, 0, 2), (0, 0, 0, 2))] = -s
    return BihomForm((2, 2), coeffs)


def pairwise_distance_form(i: int, j: int, d: Scalar) -> BihomForm:
    """Distance form linking points i and j of a multi-point configuration.
    The form itself is index-free; the labels matter only to the caller."""
    if i == j:
        raise ValueError("point indices must differ")
    return distance_form(d)


def _exp_to_pair(alpha):
    idx = []
    for t, a in enumerate(alpha):
        idx.extend([t] * a)
    return tuple(idx)


class QuadTensor:
    """Order-4 tensor, symmetric within slot pairs (1,2) and (3,4), whose
    diagonal restriction T(X, X, Y, Y) reproduces a (2,2) form."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = dict(entries)

    def value(self, a, b, c, d) -> Scalar:
        total = 0
        for ((p, q), (r, s)), coef in self.entries.items():
            left = a[p] * b[q]
            if p != q:
                left = left + a[q] * b[p]
            right = c[r] * d[s]
            if r != s:
                right = right + c[s] * d[r]
            total = total + coef * left * right
        return total

    def __repr__(self):
        return f"QuadTensor(entries={len(self.entries)})"


def polarize(q: BihomForm) -> QuadTensor:
    """Unique slot-symmetric multilinear tensor with T(X,X,Y,Y) = Q(X,Y),
    obtained by polarizing the X-block and then the Y-block: each monomial
    coefficient is split evenly over the symmetric index placements."""
    if q.bidegree != (2, 2):
        raise ValueError(f"polarization needs bidegree (2, 2), got {q.bidegree}")
    entries = {}
    for (alpha, beta), c in q.coeffs.items():
        p, qq = _exp_to_pair(alpha)
        r, s = _exp_to_pair(beta)
        mult = (1 if p == qq else 2) * (1 if r == s else 2)
        entries[((p, qq), (r, s))] = Fraction(c) / mult if mult > 1 else c
    return QuadTensor(entries)


def wedge_table(rig: CameraRig, points, pairs):
    """Cofactor 4-vectors for every requested camera pair and row index."""
    table = {}
    for (j, k) in pairs:
        b = assemble_b(rig, j, k, points[j], points[k])
        table[(j, k)] = [wedge5(b, i)[:4] for i in range(6)]
    return table


def octic_value(rig: CameraRig, tensor: QuadTensor,
                u_sel, v_sel, u, v) -> Scalar:
    """One degree-8 constraint value.

    ``u_sel = (j1, k1, i1, i2)`` picks the camera pair and two row indices on
    the u side, ``v_sel`` likewise on the v side; the value is the tensor
    applied to the four cofactor vectors.  As a function of the image points
    it is homogeneous of degree 2 in each of the four involved points.
    """
    j1, k1, i1, i2 = u_sel
    j2, k2, i3, i4 = v_sel
    bu = assemble_b(rig, j1, k1, u[j1], u[k1])
    bv = assemble_b(rig, j2, k2, v[j2], v[k2])
    return tensor.value(wedge5(bu, i1)[:4], wedge5(bu, i2)[:4],
                        wedge5(bv, i3)[:4], wedge5(bv, i4)[:4])


def trilinear_residuals(rig: CameraRig, j: int, k: int, l: int,
                        u_j: ProjectivePoint, u_k: ProjectivePoint,
                        u_l: ProjectivePoint) -> tuple:
    """All 7x7 minors of the stacked 9x7 three-camera matrix; they vanish
    simultaneously exactly when the triple is consistent with one world point."""
    if len({j, k, l}) != 3:
        raise ValueError("camera indices must be distinct")
    backend = rig.backend
    zero = 0.0 if backend == FLOAT else 0
    rows = []
    for idx, (cam, pt) in enumerate(((j, u_j), (k, u_k), (l, u_l))):
        m = rig.camera(cam).matrix
        for r in range(3):
            extra = [zero, zero, zero]
            extra[idx] = pt[r]
            rows.append(list(m.data[r]) + extra)
    stacked = Mat(rows)
    out = []
    for rowset in itertools.combinations(range(9), 7):
        out.append(det(stacked.submatrix(rowset, range(7))))
    return tuple(out)


def _camera_pairs(n):
    return list(itertools.combinations(range(n), 2))


def _octic_indices(rig: CameraRig, family: Family):
    pairs = _camera_pairs(rig.n)
    if family == Family.OCTIC_FULL:
        row_pairs = [(i1, i2) for i1 in range(6) for i2 in range(i1, 6)]
        return [((j1, k1, i1, i2), (j2, k2, i3, i4))
                for (j1, k1) in pairs for (j2, k2) in pairs
                for (i1, i2) in row_pairs for (i3, i4) in row_pairs]
    if family == Family.OCTIC_NINE:
        return [((j1, k1, i, i), (j2, k2, kk, kk))
                for (j1, k1) in pairs for (j2, k2) in pairs
                for i in range(3) for kk in range(3)]
    if family == Family.OCTIC_SIXTEEN:
        if rig.n < 3:
            raise ValueError("the sixteen-polynomial family needs at least three cameras")
        chosen = [(0, 1), (0, 2)]
        return [((j1, k1, i, i), (j2, k2, kk, kk))
                for (j1, k1) in chosen for (j2, k2) in chosen
                for i in range(2) for kk in range(2)]
    raise ValueError(f"not an octic family: {family}")


class ConstraintSystem:
    """An enumerable, evaluable family of constraint polynomials for a rig.

    ``indices`` lists one entry per evaluator; ``evaluate`` returns the
    values in the same order.  Pair families evaluate on (u, v); the
    coplanar family on four tuples; the pairwise-distance family on three.
    """

    __slots__ = ("rig", "family", "indices", "params")

    def __init__(self, rig, family, indices, params):
        self.rig = rig
        self.family = family
        self.indices = tuple(indices)
        self.params = params

    def __len__(self):
        return len(self.indices)

    def evaluate(self, *tuples) -> list:
        fam = self.family
        rig = self.rig
        if fam in (Family.OCTIC_FULL, Family.OCTIC_NINE, Family.OCTIC_SIXTEEN):
            u, v = tuples
            tensor = self.params["tensor"]
            pairs_u = {sel[0][:2] for sel in self.indices}
            pairs_v = {sel[1][:2] for sel in self.indices}
            tu = wedge_table(rig, u, pairs_u)
            tv = wedge_table(rig, v, pairs_v)
            out = []
            for (j1, k1, i1, i2), (j2, k2, i3, i4) in self.indices:
                out.append(tensor.value(tu[(j1, k1)][i1], tu[(j1, k1)][i2],
                                        tv[(j2, k2)][i3], tv[(j2, k2)][i4]))
            return out
        if fam == Family.MULTIVIEW_BILINEAR:
            u, v = tuples
            out = []
            for side, j, k in self.indices:
                pts = u if side == "u" else v
                out.append(det(assemble_b(rig, j, k, pts[j], pts[k]).mat))
            return out
        if fam == Family.MULTIVIEW_TRILINEAR:
            u, v = tuples
            cache = {}
            out = []
            for side, (j, k, l), minor in self.indices:
                pts = u if side == "u" else v
                key = (side, j, k, l)
                if key not in cache:
                    cache[key] = trilinear_residuals(rig, j, k, l, pts[j], pts[k], pts[l])
                rowsets = list(itertools.combinations(range(9), 7))
                out.append(cache[key][rowsets.index(minor)])
            return out
        if fam == Family.COPLANAR:
            cam_pairs = self.params["pairs"]
            tables = [wedge_table(rig, t, [p])[p] for t, p in zip(tuples, cam_pairs)]
            out = []
            for (i, j, k, l) in self.indices:
                cols = [tables[0][i], tables[1][j], tables[2][k], tables[3][l]]
                out.append(det(Mat.from_cols(cols)))
            return out
        if fam == Family.PAIRWISE_DISTANCE:
            out = []
            for (a, bpt), u_sel, v_sel in self.indices:
                tensor = self.params["tensors"][(a, bpt)]
                out.append(octic_value(rig, tensor, u_sel, v_sel, tuples[a], tuples[bpt]))
            return out
        if fam == Family.GENERAL_DE:
            u, v = tuples
            form = self.params["form"]
            out = []
            for (j1, k1, i), (j2, k2, kk) in self.indices:
                out.append(general_constraint_value(rig, form, (j1, k1, i), (j2, k2, kk), u, v))
            return out
        raise ValueError(f"unknown family {fam}")

    def evaluate_report(self, *tuples) -> list:
        vals = self.evaluate(*tuples)
        return [{"indices": _index_json(idx), "value": encode_scalar(v) if not isinstance(v, float) else v}
                for idx, v in zip(self.indices, vals)]

    def to_json(self) -> dict:
        return {"family": self.family.value, "indices": [_index_json(i) for i in self.indices]}

    def __repr__(self):
        return f"ConstraintSystem(family={self.family.value}, size={len(self)})"


def _index_json(idx):
    if isinstance(idx, tuple):
        return [_index_json(x) for x in idx]
    return idx


def constraint_system(rig: CameraRig, family: Family | str, **params) -> ConstraintSystem:
    """Build the evaluator family of the given tag.

    Octic families take an optional ``form`` (default: unit distance); the
    pairwise family needs ``d12, d13, d23``; the coplanar family accepts
    per-tuple camera ``pairs`` and ``rows``; the general family needs a
    bihomogeneous ``form``.
    """
    family = Family(family)
    if family in (Family.OCTIC_FULL, Family.OCTIC_NINE, Family.OCTIC_SIXTEEN):
        form = params.get("form") or unit_distance_form()
        return ConstraintSystem(rig, family, _octic_indices(rig, family),
                                {"form": form, "tensor": polarize(form)})
    if family == Family.MULTIVIEW_BILINEAR:
        idx = [("u", j, k) for j, k in _camera_pairs(rig.n)]
        idx += [("v", j, k) for j, k in _camera_pairs(rig.n)]
        return ConstraintSystem(rig, family, idx, {})
    if family == Family.MULTIVIEW_TRILINEAR:
        if rig.n < 3:
            raise ValueError("trilinear constraints need at least three cameras")
        idx = []
        for side in ("u", "v"):
            for trip in itertools.combinations(range(rig.n), 3):
                for rowset in itertools.combinations(range(9), 7):
                    idx.append((side, trip, rowset))
        return ConstraintSystem(rig, family, idx, {})
    if family == Family.COPLANAR:
        pairs = params.get("pairs") or (((0, 1),) * 4)
        rows = params.get("rows") or (tuple(range(6)),) * 4
        idx = [(i, j, k, l) for i in rows[0] for j in rows[1] for k in rows[2] for l in rows[3]]
        return ConstraintSystem(rig, family, idx, {"pairs": tuple(pairs), "rows": tuple(rows)})
    if family == Family.PAIRWISE_DISTANCE:
        if "s12" in params:
            forms = {(0, 1): distance_form_squared(params["s12"]),
                     (0, 2): distance_form_squared(params["s13"]),
                     (1, 2): distance_form_squared(params["s23"])}
        else:
            forms = {(0, 1): distance_form(params["d12"]),
                     (0, 2): distance_form(params["d13"]),
                     (1, 2): distance_form(params["d23"])}
        cam_pairs = _camera_pairs(rig.n)
        idx = []
        for pts in ((0, 1), (0, 2), (1, 2)):
            for (j1, k1) in cam_pairs:
                for (j2, k2) in cam_pairs:
                    for i in range(3):
                        for kk in range(3):
                            idx.append((pts, (j1, k1, i, i), (j2, k2, kk, kk)))
        tensors = {key: polarize(f) for key, f in forms.items()}
        return ConstraintSystem(rig, family, idx, {"forms": forms, "tensors": tensors})
    if family == Family.GENERAL_DE:
        form = params["form"]
        if form.bidegree == (0, 0):
            raise ValueError("bidegree must be positive")
        cam_pairs = _camera_pairs(rig.n)
        idx = [((j1, k1, i), (j2, k2, kk))
               for (j1, k1) in cam_pairs for (j2, k2) in cam_pairs
               for i in range(3) for kk in range(3)]
        return ConstraintSystem(rig, family, idx, {"form": form})
    raise ValueError(f"unknown family {family}")


def general_constraint_value(rig: CameraRig, form: BihomForm, u_sel, v_sel, u, v) -> Scalar:
    """Evaluate a (d, e) form at two cofactor vectors (the diagonal
    specialization: all d left slots take the same u-side vector)."""
    j1, k1, i = u_sel
    j2, k2, kk = v_sel
    bu = assemble_b(rig, j1, k1, u[j1], u[k1])
    bv = assemble_b(rig, j2, k2, v[j2], v[k2])
    return form.evaluate(wedge5(bu, i)[:4], wedge5(bv, kk)[:4])


def coplanar_residuals(rig: CameraRig, tuples4, pairs=None, rows=None) -> list:
    """4x4 determinants of stacked cofactor vectors of four image tuples;
    all vanish when the four world points are coplanar."""
    if len(tuples4) != 4:
        raise ShapeError("need exactly four image tuples")
    pairs = pairs or ((0, 1),) * 4
    rows = rows or (tuple(range(6)),) * 4
    tables = [wedge_table(rig, t, [p])[p] for t, p in zip(tuples4, pairs)]
    out = []
    for i in rows[0]:
        for j in rows[1]:
            for k in rows[2]:
                for l in rows[3]:
                    cols = [tables[0][i], tables[1][j], tables[2][k], tables[3][l]]
                    out.append(det(Mat.from_cols(cols)))
    return out


DEFAULT_VANISH_TOL = 1e-7


def _norm(coords):
    return sum(float(x) * float(x) for x in coords) ** 0.5


def _octic_normalizer(index, u, v):
    (j1, k1, _, _), (j2, k2, _, _) = index
    return (_norm(u[j1].coords) * _norm(u[k1].coords)
            * _norm(v[j2].coords) * _norm(v[k2].coords)) ** 2


def rigid_pair_oracle(rig: CameraRig, u, v, form: Optional[BihomForm] = None,
                      tol: float | None = None) -> bool:
    """Direct membership test for an image pair of distance-linked points.

    Both tuples must be consistent; when both triangulate, the recovered
    world points must satisfy the constraint form; a non-triangulable side
    (two cameras, the epipole pair) is accepted whenever the other side is
    consistent, matching the closure components of the image.
    """
    if form is None:
        form = unit_distance_form()
    mu = multiview_membership(rig, u, tol)
    mv = multiview_membership(rig, v, tol)
    if not (mu.ok and mv.ok):
        return False
    wu = _find_witness(rig, u, tol)
    wv = _find_witness(rig, v, tol)
    if wu is None or wv is None:
        if rig.n == 2:
            return True
        raise RuntimeError("non-triangulable tuple with three or more cameras; "
                           "the oracle needs a general-position rig")
    x = triangulate(rig, u, tol).point
    y = triangulate(rig, v, tol).point
    value = form.evaluate(x.coords, y.coords)
    if rig.backend == EXACT:
        return value == 0
    t = tol if tol is not None else DEFAULT_VANISH_TOL
    d, e = form.bidegree
    return abs(value) <= t * (_norm(x.coords) ** d) * (_norm(y.coords) ** e)


def rigid_pair_by_equations(rig: CameraRig, u, v,
                            family: Family | str = Family.OCTIC_FULL,
                            form: Optional[BihomForm] = None,
                            tol: float | None = None) -> bool:
    """Equation-side membership: both tuples consistent and every octic of
    the family vanishing (exactly, or below the normalized float threshold)."""
    family = Family(family)
    if family not in (Family.OCTIC_FULL, Family.OCTIC_NINE, Family.OCTIC_SIXTEEN):
        raise ValueError("membership by equations uses an octic family")
    if not (multiview_membership(rig, u, tol).ok and multiview_membership(rig, v, tol).ok):
        return False
    system = constraint_system(rig, family, form=form)
    values = system.evaluate(u, v)
    if rig.backend == EXACT:
        return all(val == 0 for val in values)
    t = tol if tol is not None else DEFAULT_VANISH_TOL
    for idx, val in zip(system.indices, values):
        if abs(val) > t * max(_octic_normalizer(idx, u, v), 1e-300):
            return False
    return True


def collinearity_discriminant(d12: Scalar, d13: Scalar, d23: Scalar) -> Scalar:
    """Product of the four triangle-degeneracy factors; zero exactly when
    the three pairwise distances force collinear points."""
    for d in (d12, d13, d23):
        if d <= 0:
            raise ValueError("distances must be positive")
    return ((d12 + d13 + d23) * (d12 + d13 - d23)
            * (d12 - d13 + d23) * (-d12 + d13 + d23))


def squared_distance_discriminant(s12: Scalar, s13: Scalar, s23: Scalar) -> Scalar:
    """The same discriminant written in squared distances:
    2(s12 s13 + s12 s23 + s13 s23) - s12^2 - s13^2 - s23^2."""
    return 2 * (s12 * s13 + s12 * s23 + s13 * s23) - s12 * s12 - s13 * s13 - s23 * s23


def triangle_inequality_ok(d12: Scalar, d13: Scalar, d23: Scalar) -> bool:
    for d in (d12, d13, d23):
        if d <= 0:
            raise ValueError("distances must be positive")
    return d12 < d13 + d23 and d13 < d12 + d23 and d23 < d12 + d13


def chow_map(u: ProjectivePoint, v: ProjectivePoint) -> Mat:
    """Symmetric 3x3 matrix of the split conic with the two linear factors u
    and v: the outer product u v^T plus its transpose.  Always singular."""
    if len(u) != 3 or len(v) != 3:
        raise ShapeError("chow map expects image points")
    return Mat([[u[i] * v[j] + u[j] * v[i] for j in range(3)] for i in range(3)])


def _adjugate3(m: Mat) -> Mat:
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            sub = m.delete_row(j).delete_col(i)
            sign = 1 if (i + j) % 2 == 0 else -1
            row.append(sign * det(sub))
        rows.append(row)
    return Mat(rows)


def _sqrt_exact(x):
    f = Fraction(x)
    if f < 0:
        raise ChowFactorError("negative square", "complex")
    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ChowFactorError("square root is irrational", "irrational")
    r = Fraction(rn, rd)
    return r.numerator if r.denominator == 1 else r


def chow_factor(a: Mat, tol: float | None = None) -> tuple:
    """Recover the unordered point pair behind a split symmetric matrix.

    Locates the singular point of the degenerate conic through the adjugate,
    adds its skew matrix to split off a rank-1 outer product, and reads off
    the two factors.  Raises :class:`ChowFactorError` for full-rank input,
    complex-conjugate splits, or irrational splits.
    """
    if (a.rows, a.cols) != (3, 3):
        raise ShapeError("expected a 3x3 matrix")
    if a.transpose() != a:
        raise ValueError("matrix must be symmetric")
    exact = a.backend == EXACT
    t = tol if tol is not None else 1e-9
    scale = max(abs(float(x)) for r in a.data for x in r) or 1.0
    d = det(a)
    if (exact and d != 0) or (not exact and abs(d) > t * scale ** 3):
        raise ChowFactorError("matrix has rank 3", "rank3")
    adj = _adjugate3(a)
    n = adj.scaled(-1)
    n_is_zero = (all(x == 0 for r in n.data for x in r) if exact
                 else all(abs(x) <= t * scale ** 2 for r in n.data for x in r))
    if n_is_zero:
        # rank one: a double line 2c * u u^T
        diag = [(abs(a[i, i]), i) for i in range(3)]
        best, i = max(diag)
        if (exact and best == 0) or (not exact and best <= t * scale):
            raise ChowFactorError("zero matrix", "rank3")
        u = ProjectivePoint(a.row(i))
        return (u, u)
    diag = [(n[i, i], i) for i in range(3)]
    best, j = max(diag)
    if (exact and best <= 0) or (not exact and best <= t * scale ** 2):
        raise ChowFactorError("conjugate complex factors", "complex")
    if exact:
        s = _sqrt_exact(best)
        p = [Fraction(x) / s for x in n.col(j)]
    else:
        s = best ** 0.5
        p = [x / s for x in n.col(j)]
    zero = 0.0 if not exact else 0
    skew = Mat([[zero, -p[2], p[1]],
                [p[2], zero, -p[0]],
                [-p[1], p[0], zero]])
    r = Mat([[a[i, q] + skew[i, q] for q in range(3)] for i in range(3)])
    row = max(range(3), key=lambda i: max(abs(float(x)) for x in r.row(i)))
    col = max(range(3), key=lambda i: max(abs(float(x)) for x in r.col(i)))
    u = ProjectivePoint(r.row(row))
    v = ProjectivePoint(r.col(col))
    if exact:
        check = chow_map(u, v)
        if not _proportional_mats(check, a):
            raise ChowFactorError("factorization check failed", "complex")
        return tuple(sorted((u, v), key=lambda pt: pt.canonical()))
    return (u, v)


def _proportional_mats(x: Mat, y: Mat) -> bool:
    flat_x = [e for r in x.data for e in r]
    flat_y = [e for r in y.data for e in r]
    for i in range(9):
        for j in range(i + 1, 9):
            if flat_x[i] * flat_y[j] != flat_x[j] * flat_y[i]:
                return False
    return True
