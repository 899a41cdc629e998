"""Seeded random group elements and normal-form builders."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import gram_schmidt
from .errors import BadRecipe
from .qmatrix import Form, QMatrix, direct_sum, to_siegel
from .quaternion import ONE, Quaternion

ZERO = Quaternion()

KINDS = (
    "identity",
    "compact",
    "elliptic",
    "hyperbolic",
    "vertical",
    "non-vertical",
    "non-unipotent-2",
    "non-unipotent-3",
)

_ALIASES = {
    "parabolic-vertical": "vertical",
    "parabolic-non-vertical": "non-vertical",
    "parabolic-non-unipotent-2": "non-unipotent-2",
    "parabolic-non-unipotent-3": "non-unipotent-3",
    "loxodromic": "hyperbolic",
    "sp_n": "compact",
}

KIND_NAMES = tuple(sorted(set(KINDS) | set(_ALIASES)))

# separation kept between random unit eigenvalue angles (and from 0, pi)
ANGLE_GAP = 0.05


def canonical_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise BadRecipe(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


def random_quaternion(rng: np.random.Generator) -> Quaternion:
    return Quaternion(*rng.normal(size=4))


def random_unit(rng: np.random.Generator) -> Quaternion:
    q = random_quaternion(rng)
    return q / q.norm()


def random_imaginary_unit(rng: np.random.Generator) -> Quaternion:
    q = Quaternion(0.0, *rng.normal(size=3))
    return q / q.norm()


def random_sp(n: int, rng: np.random.Generator) -> QMatrix:
    """Random element of Sp(n): orthonormalised Gaussian quaternion matrix."""
    if n == 0:
        return QMatrix.zeros(0, 0, Form.POSITIVE)
    Z = QMatrix.from_real(rng.normal(size=(n, n, 4)))
    return gram_schmidt(Z).with_form(Form.POSITIVE)


def boost(size: int, t: float) -> QMatrix:
    m = np.eye(size)
    m[:2, :2] = [[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]]
    return QMatrix(m)


def random_sp_n1(n: int, rng: np.random.Generator, form: Form = Form.BALL,
                 max_boost: float = 1.0) -> QMatrix:
    """Random element of Sp(n,1) as ``k1 a k2``; ``a`` is a boost of rapidity
    at most ``max_boost`` so that conditioning stays moderate."""
    size = n + 1

    def k():
        return direct_sum(QMatrix.scalar(random_unit(rng), 1), random_sp(n, rng))

    g = (k() @ boost(size, rng.uniform(-max_boost, max_boost)) @ k()).with_form(Form.BALL)
    return to_siegel(g) if form is Form.SIEGEL else g


def random_angles(count: int, rng: np.random.Generator, gap: float = ANGLE_GAP) -> np.ndarray:
    """Angles in (gap, pi - gap) whose pairwise distances exceed ``gap``."""
    if count == 0:
        return np.zeros(0)
    for _ in range(1000):
        th = rng.uniform(2 * gap, math.pi - 2 * gap, size=count)
        if count == 1 or np.min(np.diff(np.sort(th))) > gap:
            return th
    raise BadRecipe(f"cannot place {count} separated angles")


def u_vertical(s: Quaternion, lam: complex = 1.0) -> QMatrix:
    """``lam * [[1, 0], [s, 1]]`` in the Siegel model."""
    L = Quaternion.from_pair(lam)
    return QMatrix.from_entries([[L, ZERO], [L * s, L]], Form.SIEGEL)


def u_non_vertical(s: Quaternion, a: Quaternion, lam: complex = 1.0) -> QMatrix:
    """``lam * [[1, 0, 0], [s, 1, conj(a)], [a, 0, 1]]`` in the Siegel model."""
    L = Quaternion.from_pair(lam)
    return QMatrix.from_entries(
        [[L, ZERO, ZERO], [L * s, L, L * a.conj()], [L * a, ZERO, L]], Form.SIEGEL)


def hyperbolic_block(r: float, theta: float) -> QMatrix:
    return QMatrix.diag([r * np.exp(1j * theta), np.exp(1j * theta) / r], Form.SIEGEL)


@dataclass
class ElementRecipe:
    """What to generate.  ``n`` is the group parameter: Sp(n) or Sp(n,1).

    ``params`` may fix ``lam`` (complex), ``r``, ``theta``, ``s`` and ``a``
    (quaternions as ``[w, x, y, z]``), and ``angles`` (eigenvalue angles of
    the compact block).  With explicit parameters the normal form is returned
    unconjugated unless ``conjugate`` is set.
    """

    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    conjugate: bool | None = None
    model: Form | None = None


@dataclass
class Generated:
    element: QMatrix
    normal_form: QMatrix
    conjugator: QMatrix
    recipe: ElementRecipe

    def provenance(self) -> dict:
        r = self.recipe
        return {
            "kind": canonical_kind(r.kind),
            "n": r.n,
            "seed": r.seed,
            "params": _jsonable(r.params),
            "normal_form": self.normal_form.entries(),
            "conjugator": self.conjugator.entries(),
        }


def _jsonable(params: dict) -> dict:
    out = {}
    for key, v in params.items():
        if isinstance(v, complex):
            out[key] = [v.real, v.imag]
        elif isinstance(v, Quaternion):
            out[key] = v.to_list()
        elif isinstance(v, np.ndarray):
            out[key] = v.tolist()
        else:
            out[key] = v
    return out


def _get_quat(params, key, default):
    if key not in params:
        return default
    v = params[key]
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    if isinstance(v, complex):
        return Quaternion.from_pair(v)
    if len(v) == 2:
        return Quaternion(float(v[0]), float(v[1]))
    return Quaternion.from_list(v)


def _get_complex(params, key, default):
    if key not in params:
        return default
    v = params[key]
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _compact_diag(count: int, rng, params) -> QMatrix:
    if "angles" in params:
        th = np.asarray(params["angles"], dtype=float)
        if len(th) != count:
            raise BadRecipe(f"expected {count} angles, got {len(th)}")
    else:
        th = random_angles(count, rng)
    return QMatrix.diag(np.exp(1j * th))


def random_element(recipe: ElementRecipe) -> Generated:
    """Build the requested normal form and conjugate it by a seeded random
    group element.  Identical recipes give bit-identical output."""
    kind = canonical_kind(recipe.kind)
    n, p = int(recipe.n), dict(recipe.params)
    if n < 1:
        raise BadRecipe("n must be at least 1")
    rng = np.random.default_rng(recipe.seed)
    conjugate = recipe.conjugate
    if conjugate is None:
        conjugate = not p

    if kind == "compact":
        form = Form.POSITIVE
        nf = _compact_diag(n, rng, p).with_form(form)
    elif kind in ("identity", "elliptic"):
        form = Form.BALL
        if kind == "identity":
            nf = QMatrix.identity(n + 1)
        else:
            nf = _compact_diag(n + 1, rng, p)
        nf = nf.with_form(form)
    else:
        form = Form.SIEGEL
        nf = _siegel_normal_form(kind, n, rng, p)

    target = recipe.model or form
    if target is not form:
        if form is Form.POSITIVE:
            raise BadRecipe("compact elements live in Sp(n) only")
        from .qmatrix import transport
        nf = transport(nf, target)
        form = target

    if conjugate:
        if form is Form.POSITIVE:
            x = random_sp(n, rng)
        else:
            x = random_sp_n1(n, rng, form)
    else:
        x = QMatrix.identity(nf.rows, form)
    g = (x @ nf @ x.inv()).with_form(form)
    # conjugator maps g back onto its normal form
    return Generated(g, nf.with_form(form), x.inv().with_form(form), recipe)


def _lam_and_block(count: int, rng, p):
    """Null eigenvalue and compact block, with angles drawn jointly so that
    the classes stay separated."""
    if "lam" in p:
        return _get_complex(p, "lam", None), _compact_diag(count, rng, p)
    th = random_angles(count + 1, rng)
    lam = complex(np.exp(1j * th[0]))
    if "angles" in p:
        return lam, _compact_diag(count, rng, p)
    return lam, QMatrix.diag(np.exp(1j * th[1:]))


def _siegel_normal_form(kind: str, n: int, rng, p) -> QMatrix:
    if kind == "hyperbolic":
        r = float(p.get("r", rng.uniform(1.1, 4.0)))
        theta = float(p.get("theta", rng.uniform(0.0, math.pi)))
        if r <= 1.0:
            raise BadRecipe("hyperbolic needs r > 1")
        return direct_sum(hyperbolic_block(r, theta), _compact_diag(n - 1, rng, p)).with_form(Form.SIEGEL)

    if kind in ("vertical", "non-unipotent-2"):
        if kind == "vertical":
            lam = 1.0
            s = _get_quat(p, "s", random_imaginary_unit(rng) * rng.uniform(0.5, 2.0))
            B = QMatrix.identity(n - 1)
        else:
            lam, B = _lam_and_block(n - 1, rng, p)
            if abs(lam.imag) > 1e-12:
                s = _get_quat(p, "s", Quaternion(0.0, rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)))
            else:
                s = _get_quat(p, "s", random_imaginary_unit(rng) * rng.uniform(0.5, 2.0))
        if abs(s.w) > 1e-12 or s.norm() == 0.0:
            raise BadRecipe("vertical parameter s must be nonzero and purely imaginary")
        if abs(abs(lam) - 1.0) > 1e-12:
            raise BadRecipe("lam must have modulus one")
        if abs(lam.imag) > 1e-12 and (abs(s.y) > 1e-12 or abs(s.z) > 1e-12):
            raise BadRecipe("with non-real lam, s must be complex")
        return direct_sum(u_vertical(s, lam), B).with_form(Form.SIEGEL)

    if kind in ("non-vertical", "non-unipotent-3"):
        if n < 2:
            raise BadRecipe("non-vertical kinds need n >= 2")
        if kind == "non-vertical":
            lam = 1.0
            a = _get_quat(p, "a", random_quaternion(rng))
            s = _get_quat(p, "s", Quaternion(a.norm2() / 2) + random_imaginary_unit(rng) * rng.normal())
            B = QMatrix.identity(n - 2)
        else:
            lam, B = _lam_and_block(n - 2, rng, p)
            a = _get_quat(p, "a", Quaternion.from_pair(complex(*rng.normal(size=2))))
            s = _get_quat(p, "s", Quaternion(a.norm2() / 2, rng.normal()))
        if a.norm() == 0.0 or abs(2 * s.w - a.norm2()) > 1e-9 * max(1.0, a.norm2()):
            raise BadRecipe("non-vertical parameters need a != 0 and s + conj(s) = |a|^2")
        if abs(lam.imag) > 1e-12 and any(abs(t) > 1e-12 for t in (a.y, a.z, s.y, s.z)):
            raise BadRecipe("with non-real lam, s and a must be complex")
        return direct_sum(u_non_vertical(s, a, lam), B).with_form(Form.SIEGEL)

    raise BadRecipe(f"unhandled kind {kind!r}")
