"""Closed planar loops given by finite Fourier series and their arclength frames.

A :class:`Curve` stores ``x(θ) = a0 + Σ a_k cos kθ + b_k sin kθ`` (same for
``y``) with θ ∈ [0, 2π). :func:`build_frame` reparametrizes by arclength on
a uniform grid and evaluates tangent, normal and curvature (with its first
two arclength derivatives) in closed form.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GeometryError(ValueError):
    """Invalid curve data or a violated tubular-neighbourhood condition."""


class TubeOverlapWarning(UserWarning):
    """Non-adjacent cross-sections of the tube intersect."""


REGULARITY_TOL = 1e-9
VALIDATION_GRID = 1024


@dataclass(frozen=True)
class Curve:
    """Trigonometric loop. ``xc[k], xs[k]`` are cos/sin coefficients of x (``xs[0]`` unused)."""

    xc: np.ndarray
    xs: np.ndarray
    yc: np.ndarray
    ys: np.ndarray
    period: float = field(default=2 * np.pi, init=False)

    def __post_init__(self):
        arrays = [np.array(a, dtype=float).ravel() for a in (self.xc, self.xs, self.yc, self.ys)]
        n = max(len(a) for a in arrays)
        if n < 2:
            raise GeometryError("a loop needs at least one non-constant Fourier mode")
        padded = []
        for a in arrays:
            p = np.zeros(n)
            p[: len(a)] = a
            p.setflags(write=False)
            padded.append(p)
        if not all(np.all(np.isfinite(p)) for p in padded):
            raise GeometryError("non-finite Fourier coefficient")
        for name, p in zip(("xc", "xs", "yc", "ys"), padded):
            object.__setattr__(self, name, p)
        self._validate()

    @property
    def n_coeffs(self) -> int:
        """Highest harmonic K_c."""
        return len(self.xc) - 1

    def derivatives(self, theta, order: int) -> tuple[np.ndarray, np.ndarray]:
        """``order``-th θ-derivative of (x, y) at ``theta``."""
        theta = np.asarray(theta, dtype=float)
        k = np.arange(self.n_coeffs + 1, dtype=float)
        phase = np.multiply.outer(theta, k) + order * np.pi / 2
        c, s = np.cos(phase), np.sin(phase)
        scale = k ** order
        # d^n/dθ^n cos(kθ) = k^n cos(kθ + nπ/2), likewise for sin
        x = c @ (scale * self.xc) + s @ (scale * self.xs)
        y = c @ (scale * self.yc) + s @ (scale * self.ys)
        return x, y

    def __call__(self, theta):
        return self.derivatives(theta, 0)

    def speed(self, theta) -> np.ndarray:
        dx, dy = self.derivatives(theta, 1)
        return np.hypot(dx, dy)

    def scaled(self, factor: float) -> "Curve":
        return Curve(factor * self.xc, factor * self.xs, factor * self.yc, factor * self.ys)

    def rotated(self, angle: float) -> "Curve":
        c, s = np.cos(angle), np.sin(angle)
        return Curve(c * self.xc - s * self.yc, c * self.xs - s * self.ys,
                     s * self.xc + c * self.yc, s * self.xs + c * self.ys)

    def reversed(self) -> "Curve":
        """Same loop traversed in the opposite direction (θ → -θ)."""
        return Curve(self.xc, -self.xs, self.yc, -self.ys)

    def shifted(self, dtheta: float) -> "Curve":
        """Same loop with the parameter origin moved to θ = dtheta."""
        k = np.arange(self.n_coeffs + 1)
        c, s = np.cos(k * dtheta), np.sin(k * dtheta)
        # cos(k(θ+d)) = cos kθ cos kd - sin kθ sin kd
        return Curve(self.xc * c + self.xs * s, self.xs * c - self.xc * s,
                     self.yc * c + self.ys * s, self.ys * c - self.yc * s)

    def _validate(self, n: int = VALIDATION_GRID) -> None:
        theta = np.linspace(0.0, self.period, n, endpoint=False)
        speed = self.speed(theta)
        scale = max(np.max(np.abs(np.concatenate([self.xc, self.xs, self.yc, self.ys]))), 1e-300)
        if np.min(speed) < REGULARITY_TOL * scale:
            raise GeometryError(f"curve is not regular: min |γ'| = {np.min(speed):.3e}")
        x, y = self(theta)
        length = np.mean(speed) * self.period
        if _has_close_nonadjacent(x, y, 1e-6 * length):
            raise GeometryError("curve self-intersects on the validation grid")


def _has_close_nonadjacent(x, y, tol) -> bool:
    n = len(x)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, n - gap)
    d2 = (x[:, None] - x[None, :]) ** 2 + (y[:, None] - y[None, :]) ** 2
    return bool(np.any(d2[gap > n // 16] < tol * tol))


def make_circle(radius: float) -> Curve:
    if not radius > 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    return Curve([0.0, radius], [0.0, 0.0], [0.0, 0.0], [0.0, radius])


def make_ellipse(a: float, b: float) -> Curve:
    if not (a > 0 and b > 0):
        raise GeometryError(f"ellipse axes must be positive, got a={a}, b={b}")
    return Curve([0.0, a], [0.0, 0.0], [0.0, 0.0], [0.0, b])


def make_curve(name: str, *params: float) -> Curve:
    """Builtin curve by name: ``circle R`` or ``ellipse a b``."""
    builders = {"circle": (make_circle, 1), "ellipse": (make_ellipse, 2)}
    if name not in builders:
        raise GeometryError(f"unknown builtin curve {name!r}; choose from {sorted(builders)}")
    fn, nargs = builders[name]
    if len(params) != nargs:
        raise GeometryError(f"{name} takes {nargs} parameter(s), got {len(params)}")
    return fn(*params)


# -- text serialization ----------------------------------------------------

def format_curve(curve: Curve) -> str:
    lines = []
    for label, c, s in (("x", curve.xc, curve.xs), ("y", curve.yc, curve.ys)):
        vals = [c[0]]
        for k in range(1, curve.n_coeffs + 1):
            vals += [c[k], s[k]]
        lines.append(f"{label}: " + " ".join(repr(float(v)) for v in vals))
    return "\n".join(lines) + "\n"


def parse_curve(text: str) -> Curve:
    """Parse ``x: a0 a1 b1 a2 b2 ...`` / ``y: ...`` lines (``#`` starts a comment)."""
    rows = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("x", "y"):
            raise GeometryError(f"malformed curve line: {raw!r}")
        if key in rows:
            raise GeometryError(f"duplicate {key!r} line")
        try:
            vals = [float(v) for v in rest.split()]
        except ValueError as exc:
            raise GeometryError(f"non-numeric coefficient in line {raw!r}") from exc
        if len(vals) % 2 == 0:
            raise GeometryError(f"{key}: expected a0 followed by (a_k, b_k) pairs, got {len(vals)} values")
        rows[key] = vals
    if set(rows) != {"x", "y"}:
        raise GeometryError("curve file needs both 'x:' and 'y:' lines")
    parts = []
    for key in ("x", "y"):
        v = rows[key]
        parts += [np.array([v[0]] + v[1::2]), np.array([0.0] + v[2::2])]
    return Curve(*parts)


def read_curve(path) -> Curve:
    return parse_curve(Path(path).read_text(encoding="utf-8"))


def write_curve(curve: Curve, path) -> None:
    Path(path).write_text(format_curve(curve), encoding="utf-8")


# -- arclength frame -------------------------------------------------------

@dataclass(frozen=True)
class ArclengthFrame:
    """Uniform arclength sampling of a loop: s_i = i·ℓ/N_s."""

    length: float
    s: np.ndarray
    theta: np.ndarray
    gamma: np.ndarray      # (2, N_s)
    tangent: np.ndarray    # (2, N_s)
    normal: np.ndarray     # (2, N_s), tangent rotated by +90°
    kappa: np.ndarray
    dkappa: np.ndarray
    d2kappa: np.ndarray

    @property
    def n_s(self) -> int:
        return len(self.s)

    @property
    def ds(self) -> float:
        return self.length / self.n_s

    @property
    def n_complex(self) -> np.ndarray:
        """Normal as a complex number ν₁ + iν₂."""
        return self.normal[0] + 1j * self.normal[1]

    @property
    def kappa_max(self) -> float:
        return float(np.max(np.abs(self.kappa)))

    def total_curvature(self) -> float:
        return float(np.sum(self.kappa) * self.ds)

    def index_of(self, s: float, tol: float = 1e-9) -> int:
        """Grid index of arclength ``s`` (which must lie on the grid modulo ℓ)."""
        x = (s % self.length) / self.ds
        i = int(round(x)) % self.n_s
        if abs(x - round(x)) > tol * max(1.0, self.n_s):
            raise GeometryError(f"s={s} is not on the frame grid")
        return i


def _length_series(curve: Curve, tol: float = 1e-13):
    """Fourier coefficients of |γ'(θ)| sampled finely enough to reach ``tol``."""
    n = 256
    prev = None
    while True:
        theta = 2 * np.pi * np.arange(n) / n
        c = np.fft.rfft(curve.speed(theta)) / n
        length = 2 * np.pi * c[0].real
        if prev is not None and abs(length - prev) <= tol * length and np.max(np.abs(c[-n // 8:])) <= tol * abs(c[0]):
            return c, length
        if n >= 1 << 20:
            raise GeometryError("arclength quadrature did not converge")
        prev = length
        n *= 2


def _cumulative_length(c: np.ndarray, theta: np.ndarray) -> np.ndarray:
    # S(θ) = ∫_0^θ |γ'| = c0 θ + Σ_{n≥1} 2 Re[c_n (e^{inθ} - 1)/(in)]
    n = np.arange(1, len(c))
    e = np.exp(1j * np.multiply.outer(theta, n)) - 1.0
    return c[0].real * theta + 2 * np.real(e @ (c[1:] / (1j * n)))


def build_frame(curve: Curve, n_s: int = 512) -> ArclengthFrame:
    """Arclength frame on a uniform grid of ``n_s`` points.

    Loops traversed clockwise are reversed first so that the total
    curvature is +2π and the normal points to the enclosed region.
    """
    if n_s < 64 or n_s & (n_s - 1):
        raise GeometryError(f"N_s must be a power of two >= 64, got {n_s}")
    c, length = _length_series(curve)
    x1, y1 = curve.derivatives(np.linspace(0, 2 * np.pi, 64, endpoint=False), 1)
    x2, y2 = curve.derivatives(np.linspace(0, 2 * np.pi, 64, endpoint=False), 2)
    if np.mean((x1 * y2 - y1 * x2) / np.hypot(x1, y1) ** 2) < 0:
        curve = curve.reversed()

    s = length * np.arange(n_s) / n_s
    # bisection on the monotone cumulative length, all grid points at once
    lo = np.zeros(n_s)
    hi = np.full(n_s, 2 * np.pi)
    speed_max = 2 * np.sum(np.abs(c))
    while np.max(hi - lo) * speed_max > 1e-14 * length:
        mid = 0.5 * (lo + hi)
        below = _cumulative_length(c, mid) < s
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    theta = 0.5 * (lo + hi)
    theta[0] = 0.0

    d = [curve.derivatives(theta, k) for k in range(5)]
    (x0, y0), (x1, y1), (x2, y2), (x3, y3), (x4, y4) = d
    u = x1 ** 2 + y1 ** 2
    v = np.sqrt(u)
    du = 2 * (x1 * x2 + y1 * y2)
    ddu = 2 * (x2 ** 2 + x1 * x3 + y2 ** 2 + y1 * y3)
    J = x1 * y2 - y1 * x2
    dJ = x1 * y3 - y1 * x3
    ddJ = x2 * y3 + x1 * y4 - y2 * x3 - y1 * x4
    kappa = J * u ** -1.5
    k_t = dJ * u ** -1.5 - 1.5 * J * u ** -2.5 * du
    k_tt = (ddJ * u ** -1.5 - 3 * dJ * u ** -2.5 * du
            + 3.75 * J * u ** -3.5 * du ** 2 - 1.5 * J * u ** -2.5 * ddu)
    dkappa = k_t / v
    d2kappa = k_tt / u - k_t * du / (2 * u ** 2)

    tangent = np.array([x1, y1]) / v
    normal = np.array([-tangent[1], tangent[0]])
    frame = ArclengthFrame(length=float(length), s=s, theta=theta, gamma=np.array([x0, y0]),
                           tangent=tangent, normal=normal, kappa=kappa,
                           dkappa=dkappa, d2kappa=d2kappa)
    for arr in (s, theta, frame.gamma, tangent, normal, kappa, dkappa, d2kappa):
        arr.setflags(write=False)
    if abs(frame.total_curvature() - 2 * np.pi) > 1e-8:
        raise GeometryError(f"total curvature {frame.total_curvature():.12f} != 2π; loop is not simple")
    return frame


def tube_overlaps(frame: ArclengthFrame, eps: float) -> bool:
    """Sample check: do cross-sections at grid points more than N_s/16 apart intersect?"""
    p0 = frame.gamma - eps * frame.normal
    p1 = frame.gamma + eps * frame.normal
    d = p1 - p0
    n = frame.n_s
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    far = np.minimum(gap, n - gap) > n // 16

    def cross(ax, ay, bx, by):
        return ax * by - ay * bx

    rx = p0[0][None, :] - p0[0][:, None]
    ry = p0[1][None, :] - p0[1][:, None]
    denom = cross(d[0][:, None], d[1][:, None], d[0][None, :], d[1][None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = cross(rx, ry, d[0][None, :], d[1][None, :]) / denom
        tb = cross(rx, ry, d[0][:, None], d[1][:, None]) / denom
    # open, non-parallel segments with a margin: at ε = 1/κ circle sections only touch at the center
    m = 1e-9
    hit = (np.abs(denom) > 1e-10 * 4 * eps * eps) & (ta > m) & (ta < 1 - m) & (tb > m) & (tb < 1 - m)
    return bool(np.any(hit & far))


def epsilon_max(frame: ArclengthFrame) -> float:
    """Local injectivity threshold 1/max|κ|; warns if the sampled tube self-overlaps there."""
    kmax = frame.kappa_max
    eps = np.inf if kmax == 0 else 1.0 / kmax
    if np.isfinite(eps) and tube_overlaps(frame, eps):
        warnings.warn(f"tube of half-width {eps:.6g} self-overlaps on the sample grid; "
                      "the global diffeomorphism threshold is smaller", TubeOverlapWarning, stacklevel=2)
    return float(eps)


def tubular_map(frame: ArclengthFrame, eps: float, s, t):
    """Φ_ε(s, t) = γ(s) + ε t ν(s) for grid arclengths ``s`` and t ∈ (-1, 1)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TubeOverlapWarning)
        emax = epsilon_max(frame)
    if not 0 < eps < emax:
        raise GeometryError(f"ε={eps} outside (0, {emax:.6g})")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1):
        raise GeometryError("t must lie in [-1, 1]")
    i = np.vectorize(frame.index_of)(s)
    return frame.gamma[:, i] + eps * t * frame.normal[:, i]


def tubular_jacobian(frame: ArclengthFrame, eps: float, t) -> np.ndarray:
    """det DΦ_ε = ε(1 - εtκ(s)) on the grid, shape (len(t), N_s)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return eps * (1.0 - eps * np.multiply.outer(t, frame.kappa))
