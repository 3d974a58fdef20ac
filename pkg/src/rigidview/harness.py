"""Seeded random generation, randomized verification experiments, numeric
dimension estimates, and constrained refinement.

Every operation here is a pure function of (seed, config): sampling uses
``random.Random`` exclusively, sub-seeds are derived per sample, and reports
round-trip to canonical JSON byte-for-byte (the wall-clock field is the one
excluded, deliberately, from the reproducibility contract).
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from fractions import Fraction
from typing import Optional

import numpy as np

from .cameras import (
    CameraRig,
    ProjectivePoint,
    RigidMotion,
    apply_left_action,
    apply_right_action,
    cayley_rotation,
    forward_map,
    invert,
)
from .constraints import (
    Family,
    constraint_system,
    coplanar_residuals,
    polarize,
    rigid_pair_by_equations,
    rigid_pair_oracle,
    squared_distance_discriminant,
    triangle_inequality_ok,
    unit_distance_form,
)
from .linalg import FLOAT, Mat, det, rank
from .polyspace import (
    all_octics_symbolic,
    generator_count,
    ideal_component_basis,
    random_rank_prime,
    span_dimension,
)
from .triangulation import assemble_b, is_triangulable, wedge5


class SamplingError(RuntimeError):
    """A bounded redraw loop was exhausted."""


class InfeasibleScenarioError(ValueError):
    """The requested constraint configuration has no real points."""


class UnstableDimensionError(RuntimeError):
    """Jacobian ranks disagreed across base points."""

    def __init__(self, ranks):
        super().__init__(f"unstable dimension estimate: ranks {sorted(set(ranks))}")
        self.ranks = tuple(ranks)


def _as_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


MAX_REDRAWS = 1000


def random_camera(seed, height: int = 20, signed: bool = False) -> Mat:
    """Random integer 3x4 camera matrix, redrawn until it has rank 3.

    Entries are uniform over [0, height) by default; ``signed=True`` draws
    from [-height, height] instead.
    """
    if height < 2:
        raise ValueError("height must be at least 2")
    rng = _as_rng(seed)
    for _ in range(MAX_REDRAWS):
        if signed:
            m = Mat([[rng.randint(-height, height) for _ in range(4)] for _ in range(3)])
        else:
            m = Mat([[rng.randrange(height) for _ in range(4)] for _ in range(3)])
        if rank(m).rank == 3:
            return m
    raise SamplingError("could not draw a rank-3 camera")


def random_rig(seed, n: int, height: int = 20, signed: bool = False) -> CameraRig:
    """Random rig whose focal points pass the general-position checks."""
    if n < 2:
        raise ValueError("need at least two cameras")
    rng = _as_rng(seed)
    for _ in range(MAX_REDRAWS):
        rig = CameraRig([random_camera(rng, height, signed) for _ in range(n)])
        if rig.general_position.ok:
            return rig
    raise SamplingError("could not draw a general-position rig")


def random_affine_point(seed, bound: int = 100) -> ProjectivePoint:
    """Random rational world point in the affine chart (last coordinate 1);
    numerators and denominators stay within ``bound``."""
    rng = _as_rng(seed)
    coords = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
                   for _ in range(3))
    return ProjectivePoint(coords + (Fraction(1),))


def stereo_direction(p, q) -> tuple:
    """Rational point of the unit sphere: (2p, 2q, p^2+q^2-1)/(p^2+q^2+1)."""
    p, q = Fraction(p), Fraction(q)
    s = p * p + q * q + 1
    return (2 * p / s, 2 * q / s, (p * p + q * q - 1) / s)


def sample_unit_pair(seed, bound: int = 100):
    """Pair of affine rational world points at exact unit distance."""
    rng = _as_rng(seed)
    x = random_affine_point(rng, bound)
    p = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    direction = stereo_direction(p, q)
    y = tuple(a + b for a, b in zip(x.coords[:3], direction)) + (Fraction(1),)
    return x, ProjectivePoint(y)


def sample_scaled_pair(seed, t, bound: int = 100):
    """Pair at exact distance |t| (squared distance t^2)."""
    rng = _as_rng(seed)
    x = random_affine_point(rng, bound)
    p = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    direction = stereo_direction(p, q)
    y = tuple(a + Fraction(t) * b for a, b in zip(x.coords[:3], direction)) + (Fraction(1),)
    return x, ProjectivePoint(y)


def _canonical_tuple(points) -> tuple:
    return tuple(ProjectivePoint(pt.canonical()) for pt in points)


def sample_member_pair(rig: CameraRig, seed, bound: int = 100):
    """Unit-distance world pair whose images are both triangulable; returns
    (u, v, x, y) with integer-cleared image tuples."""
    rng = _as_rng(seed)
    for _ in range(MAX_REDRAWS):
        x, y = sample_unit_pair(rng, bound)
        try:
            u = _canonical_tuple(forward_map(rig, x))
            v = _canonical_tuple(forward_map(rig, y))
        except ValueError:
            continue
        if is_triangulable(rig, u) and is_triangulable(rig, v):
            return u, v, x, y
    raise SamplingError("could not sample a triangulable member pair")


def sample_nonmember_pair(rig: CameraRig, seed, bound: int = 100):
    """World pair at distance != 1 (images lie in the consistency variety
    but violate the unit-distance constraint)."""
    rng = _as_rng(seed)
    for _ in range(MAX_REDRAWS):
        t = Fraction(rng.randint(2, 10), rng.randint(1, 3))
        if t == 1:
            continue
        x, y = sample_scaled_pair(rng, t, bound)
        try:
            u = _canonical_tuple(forward_map(rig, x))
            v = _canonical_tuple(forward_map(rig, y))
        except ValueError:
            continue
        if is_triangulable(rig, u) and is_triangulable(rig, v):
            return u, v, x, y
    raise SamplingError("could not sample a nonmember pair")


class Scene:
    """A rig with world data and the derived image data.

    With zero noise the image tuples are the exact forward images; with
    positive ``sigma`` the images are floats with Gaussian noise added to the
    normalized affine image coordinates.
    """

    __slots__ = ("rig", "world_points", "constraint", "image_tuples", "sigma", "seed")

    def __init__(self, rig, world_points, image_tuples, constraint=None,
                 sigma=0.0, seed=0):
        self.rig = rig
        self.world_points = tuple(world_points)
        self.image_tuples = tuple(image_tuples)
        self.constraint = constraint
        self.sigma = sigma
        self.seed = seed

    def __repr__(self):
        return (f"Scene(points={len(self.world_points)}, sigma={self.sigma}, "
                f"seed={self.seed})")


def make_scene(rig: CameraRig, world_points, sigma: float = 0.0, seed=0,
               constraint=None) -> Scene:
    rng = _as_rng(seed)
    tuples = []
    for x in world_points:
        images = forward_map(rig, x)
        if sigma == 0.0:
            tuples.append(tuple(images))
            continue
        noisy = []
        for pt in images:
            w = [float(c) for c in pt.coords]
            if abs(w[2]) < 1e-12:
                raise SamplingError("image point at infinity; cannot add affine noise")
            ax, ay = w[0] / w[2], w[1] / w[2]
            noisy.append(ProjectivePoint((ax + rng.gauss(0.0, sigma),
                                          ay + rng.gauss(0.0, sigma), 1.0)))
        tuples.append(tuple(noisy))
    return Scene(rig, world_points, tuples, constraint, sigma,
                 seed if isinstance(seed, int) else 0)


# ---------------------------------------------------------------------------
# numeric dimension estimates


SCENARIO_RIGID_PAIR = "rigid_pair"
SCENARIO_COPLANAR_4 = "coplanar_4"
SCENARIO_PAIRWISE_3 = "pairwise_3"


def _unit_direction_float(p, q):
    s = p * p + q * q + 1.0
    return np.array([2 * p / s, 2 * q / s, (p * p + q * q - 1.0) / s])


def _orthonormal_complement(w):
    axis = np.array([0.0, 0.0, 1.0])
    if abs(float(np.dot(w, axis))) > 0.9:
        axis = np.array([1.0, 0.0, 0.0])
    m1 = np.cross(w, axis)
    m1 = m1 / np.linalg.norm(m1)
    m2 = np.cross(w, m1)
    return m1, m2


def _project_affine_all(rig, points):
    """Float image vectors of several world points under every camera."""
    out = []
    for x in points:
        hom = np.append(x, 1.0)
        for cam in rig.cameras:
            a = np.array([[float(e) for e in row] for row in cam.matrix.data])
            out.append(a @ hom)
    return out


def _scenario_map(rig, scenario, params):
    if scenario == SCENARIO_RIGID_PAIR:
        def f(theta):
            x = theta[:3]
            y = x + _unit_direction_float(theta[3], theta[4])
            return _project_affine_all(rig, [x, y])
        def base(rng):
            return np.array([rng.uniform(-1, 1) for _ in range(3)]
                            + [rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)])
        return 5, f, base
    if scenario == SCENARIO_COPLANAR_4:
        def f(theta):
            alpha, beta, c = theta[0], theta[1], theta[2]
            n_vec = np.array([math.cos(alpha) * math.cos(beta),
                              math.sin(alpha) * math.cos(beta),
                              math.sin(beta)])
            e1, e2 = _orthonormal_complement(n_vec)
            p0 = c * n_vec
            pts = [p0 + theta[3 + 2 * i] * e1 + theta[4 + 2 * i] * e2 for i in range(4)]
            return _project_affine_all(rig, pts)
        def base(rng):
            return np.array([rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6),
                             rng.uniform(0.8, 1.6)]
                            + [rng.uniform(-1, 1) for _ in range(8)])
        return 11, f, base
    if scenario == SCENARIO_PAIRWISE_3:
        d12, d13, d23 = (float(params["d12"]), float(params["d13"]),
                         float(params["d23"]))
        for d in (d12, d13, d23):
            if d <= 0:
                raise ValueError("distances must be positive")
        xloc = (d12 * d12 + d13 * d13 - d23 * d23) / (2 * d12)
        ysq = d13 * d13 - xloc * xloc
        if ysq < -1e-12:
            raise InfeasibleScenarioError(
                "pairwise distances violate the triangle inequality; no real points")
        yloc = math.sqrt(max(ysq, 0.0))
        def f(theta):
            x1 = theta[:3]
            w = _unit_direction_float(theta[3], theta[4])
            m1, m2 = _orthonormal_complement(w)
            x2 = x1 + d12 * w
            phi = theta[5]
            x3 = x1 + xloc * w + yloc * (math.cos(phi) * m1 + math.sin(phi) * m2)
            return _project_affine_all(rig, [x1, x2, x3])
        def base(rng):
            return np.array([rng.uniform(-1, 1) for _ in range(3)]
                            + [rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7),
                               rng.uniform(0, 2 * math.pi)])
        return 6, f, base
    raise ValueError(f"unknown scenario {scenario}")


def _chart_jacobian_rank(f, theta, step, tol):
    base_imgs = f(theta)
    charts = []
    for w in base_imgs:
        c = int(np.argmax(np.abs(w)))
        if abs(w[c]) < 1e-9:
            return None
        charts.append(c)

    def g(th):
        out = []
        for w, c in zip(f(th), charts):
            if abs(w[c]) < 1e-12:
                return None
            out.extend(w[i] / w[c] for i in range(3) if i != c)
        return np.array(out)

    k = len(theta)
    cols = []
    for j in range(k):
        e = np.zeros(k)
        e[j] = step
        plus = g(theta + e)
        minus = g(theta - e)
        if plus is None or minus is None:
            return None
        cols.append((plus - minus) / (2 * step))
    jac = Mat(np.column_stack(cols).tolist())
    return rank(jac, tol).rank


def numeric_dimension(rig: CameraRig, scenario: str, params: Optional[dict] = None,
                      seed=0, base_points: int = 5, step: float = 1e-6,
                      tol: float = 1e-6) -> int:
    """Dimension of the image of a constrained configuration space.

    Parametrizes the scenario, pushes it through every camera into affine
    image charts, and returns the Jacobian rank (central differences) at
    ``base_points`` random feasible base points.  All ranks must agree,
    otherwise :class:`UnstableDimensionError` is raised.
    """
    if rig.backend != FLOAT:
        raise ValueError("numeric dimension estimates need a float rig")
    rng = _as_rng(seed)
    _, f, base = _scenario_map(rig, scenario, params or {})
    ranks = []
    attempts = 0
    while len(ranks) < base_points and attempts < 20 * base_points:
        attempts += 1
        r = _chart_jacobian_rank(f, base(rng), step, tol)
        if r is not None:
            ranks.append(r)
    if len(ranks) < base_points:
        raise SamplingError("could not find enough feasible base points")
    if len(set(ranks)) != 1:
        raise UnstableDimensionError(ranks)
    return ranks[0]


# ---------------------------------------------------------------------------
# constrained refinement


class RefineResult:
    __slots__ = ("x", "y", "residual", "initial_residual", "iterations", "converged")

    def __init__(self, x, y, residual, initial_residual, iterations, converged):
        self.x = tuple(x)
        self.y = tuple(y)
        self.residual = residual
        self.initial_residual = initial_residual
        self.iterations = iterations
        self.converged = converged

    def __repr__(self):
        return (f"RefineResult(residual={self.residual:.3e}, "
                f"initial={self.initial_residual:.3e}, iters={self.iterations})")


def _camera_arrays(rig):
    return [np.array([[float(e) for e in row] for row in cam.matrix.data])
            for cam in rig.cameras]


def _reprojection_residuals(cams, obs_u, obs_v, x, y):
    out = []
    for a, (ox, oy) in zip(cams, obs_u):
        h = a @ np.append(x, 1.0)
        out.extend((h[0] / h[2] - ox, h[1] / h[2] - oy))
    for a, (ox, oy) in zip(cams, obs_v):
        h = a @ np.append(y, 1.0)
        out.extend((h[0] / h[2] - ox, h[1] / h[2] - oy))
    return np.array(out)


def _linear_triangulate(cams, obs):
    rows = []
    for a, (ox, oy) in zip(cams, obs):
        rows.append(ox * a[2] - a[0])
        rows.append(oy * a[2] - a[1])
    m = np.array(rows)
    _, _, vt = np.linalg.svd(m)
    h = vt[-1]
    if abs(h[3]) < 1e-12:
        h = h + vt[-2]
    return h[:3] / h[3]


def _rotation_to(direction):
    d = direction / np.linalg.norm(direction)
    m1, m2 = _orthonormal_complement(d)
    return np.column_stack([m1, m2, -d])


def refine_rigid_pair(rig: CameraRig, obs_u, obs_v, max_iter: int = 100,
                      step_tol: float = 1e-10, damping: float = 1e-3,
                      fd_step: float = 1e-7) -> RefineResult:
    """Local minimization of the summed squared reprojection error of a
    point pair subject to unit distance.

    The pair is parametrized as (X, direction chart), so the constraint
    holds throughout; damped Gauss-Newton steps are accepted only when the
    cost decreases, so the returned residual never exceeds the residual of
    the projected initial estimate.  At return the difference vector is
    rescaled to unit length once more.
    """
    if rig.backend != FLOAT:
        raise ValueError("refinement runs on the float backend")
    cams = _camera_arrays(rig)
    obs_u = [tuple(map(float, o)) for o in obs_u]
    obs_v = [tuple(map(float, o)) for o in obs_v]
    x0 = _linear_triangulate(cams, obs_u)
    y0 = _linear_triangulate(cams, obs_v)
    d = y0 - x0
    norm = np.linalg.norm(d)
    if norm < 1e-12:
        d = np.array([0.0, 0.0, 1.0])
        norm = 1.0
    d = d / norm
    rot = _rotation_to(d)

    def unpack(theta):
        x = theta[:3]
        y = x + rot @ _unit_direction_float(theta[3], theta[4])
        return x, y

    def cost_vec(theta):
        x, y = unpack(theta)
        return _reprojection_residuals(cams, obs_u, obs_v, x, y)

    theta = np.concatenate([x0, [0.0, 0.0]])
    r = cost_vec(theta)
    initial_cost = float(r @ r)
    cost = initial_cost
    lam = damping
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        jac = np.empty((len(r), 5))
        for j in range(5):
            e = np.zeros(5)
            e[j] = fd_step
            jac[:, j] = (cost_vec(theta + e) - cost_vec(theta - e)) / (2 * fd_step)
        grad = jac.T @ r
        hess = jac.T @ jac
        stepped = False
        for _ in range(12):
            try:
                delta = np.linalg.solve(hess + lam * np.eye(5), -grad)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            cand = theta + delta
            rc = cost_vec(cand)
            cc = float(rc @ rc)
            if cc < cost:
                theta, r, cost = cand, rc, cc
                lam = max(lam / 3, 1e-12)
                stepped = True
                break
            lam *= 10
        if not stepped:
            break
        if np.linalg.norm(delta) < step_tol:
            converged = True
            break
    x, y = unpack(theta)
    d = y - x
    y = x + d / np.linalg.norm(d)
    final = _reprojection_residuals(cams, obs_u, obs_v, x, y)
    final_cost = float(final @ final)
    if final_cost > initial_cost:
        x, y = unpack(np.concatenate([x0, [0.0, 0.0]]))
        d = y - x
        y = x + d / np.linalg.norm(d)
        final_cost = initial_cost
        converged = False
    return RefineResult(x, y, final_cost, initial_cost, iterations, converged)


# ---------------------------------------------------------------------------
# experiments


class ExperimentReport:
    """Deterministic record of one randomized verification run."""

    __slots__ = ("tag", "config", "samples", "passed", "failures", "details",
                 "seed", "wall_clock_s")

    def __init__(self, tag, config, samples, passed, failures, details, seed,
                 wall_clock_s):
        self.tag = tag
        self.config = config
        self.samples = samples
        self.passed = passed
        self.failures = failures
        self.details = details
        self.seed = seed
        self.wall_clock_s = wall_clock_s

    def to_json(self) -> dict:
        return {"experiment": self.tag, "config": self.config,
                "samples": self.samples, "passed": self.passed,
                "failures": self.failures, "details": self.details,
                "seed": self.seed, "wall_clock_s": self.wall_clock_s}

    def canonical_json(self) -> str:
        """Byte-reproducible form: everything except the wall clock."""
        doc = self.to_json()
        doc.pop("wall_clock_s")
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def __repr__(self):
        return f"ExperimentReport({self.tag}, passed={self.passed}, samples={self.samples})"


def _sub_seed(seed, index) -> str:
    return f"{seed}:{index}"


def _ns_list(config, default):
    n = config.get("n", default)
    return [n] if isinstance(n, int) else list(n)


def _exp_vanish(config, seed):
    ns = _ns_list(config, [2, 3, 4])
    samples = config.get("samples", 12)
    failures, done = [], 0
    per_n = {str(n): 0 for n in ns}
    for idx in range(samples):
        n = ns[idx % len(ns)]
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, n, config.get("height", 20))
        u, v, _, _ = sample_member_pair(rig, rng)
        done += 1
        per_n[str(n)] += 1
        octics = constraint_system(rig, Family.OCTIC_FULL)
        bad = sum(1 for val in octics.evaluate(u, v) if val != 0)
        bilin = constraint_system(rig, Family.MULTIVIEW_BILINEAR)
        bad += sum(1 for val in bilin.evaluate(u, v) if val != 0)
        if n >= 3:
            tril = constraint_system(rig, Family.MULTIVIEW_TRILINEAR)
            bad += sum(1 for val in tril.evaluate(u, v) if val != 0)
        if bad:
            failures.append({"sample": idx, "n": n, "nonzero": bad})
    return done, failures, {"per_n": per_n}


def _exp_separate(config, seed):
    ns = _ns_list(config, [2])
    samples = config.get("samples", 20)
    failures, done = [], 0
    for idx in range(samples):
        n = ns[idx % len(ns)]
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, n, config.get("height", 20))
        u, v, _, _ = sample_nonmember_pair(rig, rng)
        done += 1
        nine = constraint_system(rig, Family.OCTIC_NINE)
        some_nonzero = any(val != 0 for val in nine.evaluate(u, v))
        oracle = rigid_pair_oracle(rig, u, v)
        if not some_nonzero or oracle:
            failures.append({"sample": idx, "n": n,
                             "nonzero_found": some_nonzero, "oracle": oracle})
    return done, failures, {}


def _mixed_corpus_case(rig, rng, kind):
    if kind == 0:
        u, v, _, _ = sample_member_pair(rig, rng)
    elif kind == 1:
        u, v, _, _ = sample_nonmember_pair(rig, rng)
    else:
        u, _, _, _ = sample_member_pair(rig, rng)
        v = _canonical_tuple((rig.epipole(0, 1), rig.epipole(1, 0)))
    return u, v


def _exp_thm_equiv(config, seed, family=Family.OCTIC_FULL, default_ns=(2, 3)):
    ns = _ns_list(config, list(default_ns))
    samples = config.get("samples", 30)
    failures, done = [], 0
    kinds_per_n = {2: (0, 1, 2), 3: (0, 1), 4: (0, 1)}
    for idx in range(samples):
        n = ns[idx % len(ns)]
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, n, config.get("height", 20))
        kinds = kinds_per_n.get(n, (0, 1))
        kind = kinds[(idx // len(ns)) % len(kinds)]
        u, v = _mixed_corpus_case(rig, rng, kind)
        done += 1
        eq = rigid_pair_by_equations(rig, u, v, family)
        oracle = rigid_pair_oracle(rig, u, v)
        if eq != oracle:
            failures.append({"sample": idx, "n": n, "kind": kind,
                             "equations": eq, "oracle": oracle})
    return done, failures, {"family": family.value}


def _exp_cor34(config, seed):
    config = dict(config)
    config.setdefault("n", 3)
    config.setdefault("samples", 20)
    return _exp_thm_equiv(config, seed, family=Family.OCTIC_SIXTEEN, default_ns=(3,))


def _exp_span(config, seed):
    rigs = config.get("rigs", config.get("samples", 1))
    failures, details = [], {"dims": []}
    tensor = polarize(unit_distance_form())
    for idx in range(rigs):
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, 2, config.get("height", 20))
        octics = all_octics_symbolic(rig, tensor)
        component = ideal_component_basis(rig)
        dims = None
        for _attempt in range(3):
            p = random_rank_prime(rng)
            d_octics = span_dimension(octics, p)
            d_comp = span_dimension(component, p)
            d_union = span_dimension(component + octics, p)
            dims = (d_octics, d_union - d_comp)
            if dims == (126, 9):
                break
        details["dims"].append({"rig": idx, "span": dims[0], "quotient": dims[1]})
        if dims != (126, 9):
            failures.append({"rig": idx, "span": dims[0], "quotient": dims[1]})
    return rigs, failures, details


def _exp_counts(config, seed):
    expected = {2: 11, 3: 177, 4: 1176, 5: 4940}
    failures = []
    for n, want in expected.items():
        got = generator_count(n).total
        if got != want:
            failures.append({"n": n, "total": got, "expected": want})
    for n in range(2, 13):
        gc = generator_count(n)
        if sum(c.count for c in gc.classes) != gc.total:
            failures.append({"n": n, "reason": "class sum mismatch"})
    return len(expected) + 11, failures, {"totals": {str(n): generator_count(n).total
                                                     for n in expected}}


def _exp_epipole(config, seed):
    rigs = config.get("rigs", config.get("samples", 5))
    probes = config.get("probes", 10)
    failures = []
    for idx in range(rigs):
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, 2, config.get("height", 20))
        ep = _canonical_tuple((rig.epipole(0, 1), rig.epipole(1, 0)))
        b = assemble_b(rig, 0, 1, ep[0], ep[1])
        if rank(b.mat).rank != 4:
            failures.append({"rig": idx, "reason": "epipole pair rank != 4"})
            continue
        if is_triangulable(rig, ep) is not None:
            failures.append({"rig": idx, "reason": "epipole pair triangulable"})
            continue
        for p_idx in range(probes):
            x = random_affine_point(random.Random(_sub_seed(seed, (idx, p_idx))), 50)
            try:
                u = _canonical_tuple(forward_map(rig, x))
            except ValueError:
                continue
            if u[0] == ep[0] and u[1] == ep[1]:
                continue
            bb = assemble_b(rig, 0, 1, u[0], u[1])
            if rank(bb.mat).rank != 5:
                failures.append({"rig": idx, "probe": p_idx, "reason": "variety point not rank 5"})
            octics = constraint_system(rig, Family.OCTIC_FULL)
            if any(val != 0 for val in octics.evaluate(u, ep)):
                failures.append({"rig": idx, "probe": p_idx,
                                 "reason": "octic nonzero on epipole component"})
    return rigs, failures, {}


def _exp_group_action(config, seed):
    samples = config.get("samples", 5)
    failures = []
    for idx in range(samples):
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, 2, config.get("height", 20))
        rot = cayley_rotation(Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
                              Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
                              Fraction(rng.randint(-3, 3), rng.randint(1, 4)))
        motion = RigidMotion.from_parts(rot, tuple(rng.randint(-5, 5) for _ in range(3)))
        moved = apply_right_action(rig, motion)
        n_inv = invert(motion.matrix)
        x_probe = random_affine_point(rng, 20)
        left = forward_map(moved, x_probe)
        right = forward_map(rig, ProjectivePoint(motion.matrix.apply(x_probe.coords)))
        if any(a.coords != b.coords for a, b in zip(left, right)):
            failures.append({"sample": idx, "reason": "map identity failed"})
            continue
        for kind, sampler in (("member", sample_member_pair), ("nonmember", sample_nonmember_pair)):
            u, v, x, y = sampler(rig, random.Random(_sub_seed(seed, (idx, kind))))
            um = _canonical_tuple(forward_map(moved, ProjectivePoint(n_inv.apply(x.coords))))
            vm = _canonical_tuple(forward_map(moved, ProjectivePoint(n_inv.apply(y.coords))))
            if (rigid_pair_by_equations(moved, um, vm, Family.OCTIC_NINE)
                    != rigid_pair_by_equations(rig, u, v, Family.OCTIC_NINE)):
                failures.append({"sample": idx, "kind": kind, "reason": "right action verdict"})
            mats = [Mat([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
                    for _ in range(rig.n)]
            mats = [m if det(m) != 0 else Mat.identity(3) for m in mats]
            moved_left = apply_left_action(rig, mats)
            ul = _canonical_tuple(ProjectivePoint(m.apply(p.coords)) for m, p in zip(mats, u))
            vl = _canonical_tuple(ProjectivePoint(m.apply(p.coords)) for m, p in zip(mats, v))
            if (rigid_pair_by_equations(moved_left, ul, vl, Family.OCTIC_NINE)
                    != rigid_pair_by_equations(rig, u, v, Family.OCTIC_NINE)):
                failures.append({"sample": idx, "kind": kind, "reason": "left action verdict"})
    return samples, failures, {}


def _sample_coplanar_points(rng):
    p0 = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)]
    e1 = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)]
    e2 = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)]
    pts = []
    for _ in range(4):
        s = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        coords = tuple(a + s * b + t * c for a, b, c in zip(p0, e1, e2)) + (Fraction(1),)
        pts.append(ProjectivePoint(coords))
    return pts


def _exp_coplanar(config, seed):
    samples = config.get("samples", 5)
    failures = []
    for idx in range(samples):
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, 2, config.get("height", 20))
        pts = _sample_coplanar_points(rng)
        try:
            tuples4 = [_canonical_tuple(forward_map(rig, p)) for p in pts]
        except ValueError:
            continue
        if any(val != 0 for val in coplanar_residuals(rig, tuples4)):
            failures.append({"sample": idx, "reason": "coplanar residual nonzero"})
        generic = [random_affine_point(rng, 20) for _ in range(4)]
        try:
            tuples_g = [_canonical_tuple(forward_map(rig, p)) for p in generic]
        except ValueError:
            continue
        if all(val == 0 for val in coplanar_residuals(rig, tuples_g)):
            failures.append({"sample": idx, "reason": "generic quadruple all zero"})
    return samples, failures, {}


def _exp_pairwise_triangle(config, seed):
    samples = config.get("samples", 5)
    failures = []
    for idx in range(samples):
        rng = random.Random(_sub_seed(seed, idx))
        rig = random_rig(rng, 2, config.get("height", 20))
        pts = [random_affine_point(rng, 10) for _ in range(3)]
        sq = {}
        for a, b in itertools.combinations(range(3), 2):
            diff = [pa - pb for pa, pb in zip(pts[a].coords[:3], pts[b].coords[:3])]
            sq[(a, b)] = sum(d * d for d in diff)
        if any(s == 0 for s in sq.values()):
            continue
        system = constraint_system(rig, Family.PAIRWISE_DISTANCE,
                                   s12=sq[(0, 1)], s13=sq[(0, 2)], s23=sq[(1, 2)])
        tuples3 = [_canonical_tuple(forward_map(rig, p)) for p in pts]
        if any(val != 0 for val in system.evaluate(*tuples3)):
            failures.append({"sample": idx, "reason": "pairwise system nonzero on configuration"})
        disc = squared_distance_discriminant(sq[(0, 1)], sq[(0, 2)], sq[(1, 2)])
        d12, d13, d23 = (math.sqrt(float(sq[(0, 1)])), math.sqrt(float(sq[(0, 2)])),
                         math.sqrt(float(sq[(1, 2)])))
        strict = triangle_inequality_ok(d12, d13, d23)
        if (disc == 0) == strict:
            failures.append({"sample": idx, "reason": "discriminant/triangle disagreement"})
        # collinear sample: the discriminant must vanish identically
        col = [pts[0],
               ProjectivePoint(tuple(a + (b - a) / 2 for a, b in zip(pts[0].coords, pts[1].coords))),
               pts[1]]
        sq_col = {}
        for a, b in itertools.combinations(range(3), 2):
            diff = [pa - pb for pa, pb in zip(col[a].coords[:3], col[b].coords[:3])]
            sq_col[(a, b)] = sum(d * d for d in diff)
        if squared_distance_discriminant(sq_col[(0, 1)], sq_col[(0, 2)], sq_col[(1, 2)]) != 0:
            failures.append({"sample": idx, "reason": "collinear discriminant nonzero"})
    return samples, failures, {}


EXPERIMENTS: dict = {
    "VANISH": _exp_vanish,
    "SEPARATE": _exp_separate,
    "THM32_EQUIV": _exp_thm_equiv,
    "COR34_SIXTEEN": _exp_cor34,
    "SPAN_126_9": _exp_span,
    "COUNTS": _exp_counts,
    "EPIPOLE_COMPONENT": _exp_epipole,
    "GROUP_ACTION": _exp_group_action,
    "COPLANAR": _exp_coplanar,
    "PAIRWISE_TRIANGLE": _exp_pairwise_triangle,
}


def run_experiment(tag: str, config: Optional[dict] = None) -> ExperimentReport:
    """Run one named experiment deterministically from (tag, config, seed)."""
    if tag not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {tag!r}; known: {sorted(EXPERIMENTS)}")
    config = dict(config or {})
    seed = config.get("seed", 0)
    start = time.perf_counter()
    samples, failures, details = EXPERIMENTS[tag](config, seed)
    elapsed = time.perf_counter() - start
    return ExperimentReport(tag, config, samples, not failures, failures,
                            details, seed, elapsed)
