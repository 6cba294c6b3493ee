"""Angle sequences, the line sequences they generate, and rotation schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import special

from .geom import LineSubspace, RotationOp, direction, rotation_between

HALF_PI = 0.5 * math.pi
KINDS = ("harmonic", "power", "geometric", "periodic", "oscillating", "explicit")


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class AngleSequence:
    """A rule producing angles alpha_m in (0, pi/2], m = 1, 2, ...

    ``params`` by kind:
      harmonic    c            alpha_m = c / m
      power       c, p         alpha_m = c / m**p
      geometric   c, q         alpha_m = c * q**m
      periodic    angles       the list repeated forever
      explicit    angles       the list, then nothing (a finite process)
      oscillating c, endpoint  the line angle walks back and forth in
                               [0, endpoint] with steps c / m, clamped at the ends
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SequenceError(f"unknown angle sequence kind {self.kind!r}")
        p = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", p)
        need = {"harmonic": 1, "power": 2, "geometric": 2, "oscillating": 2}
        if self.kind in need and len(p) != need[self.kind]:
            raise SequenceError(f"{self.kind} takes {need[self.kind]} parameters, got {len(p)}")
        if self.kind in ("periodic", "explicit") and not p:
            raise SequenceError("angle list is empty")
        if self.kind == "geometric" and not 0.0 < p[1] < 1.0:
            raise SequenceError("geometric ratio must lie in (0, 1)")
        if self.kind == "power" and p[1] <= 0:
            raise SequenceError("power exponent must be positive")
        if self.kind == "oscillating" and not 0.0 < p[1] <= HALF_PI:
            raise SequenceError("oscillation endpoint must lie in (0, pi/2]")

    @classmethod
    def harmonic(cls, c: float = 1.0) -> "AngleSequence":
        return cls("harmonic", (c,))

    @classmethod
    def power(cls, c: float, p: float) -> "AngleSequence":
        return cls("power", (c, p))

    @classmethod
    def geometric(cls, c: float = 0.5, q: float = 0.9) -> "AngleSequence":
        return cls("geometric", (c, q))

    @classmethod
    def periodic(cls, angles: Sequence[float]) -> "AngleSequence":
        return cls("periodic", tuple(angles))

    @classmethod
    def explicit(cls, angles: Sequence[float]) -> "AngleSequence":
        return cls("explicit", tuple(angles))

    @classmethod
    def oscillating(cls, endpoint: float, c: float = 1.0) -> "AngleSequence":
        return cls("oscillating", (c, endpoint))

    @property
    def length(self) -> float:
        """Number of terms (infinite except for explicit lists)."""
        return len(self.params) if self.kind == "explicit" else math.inf

    @property
    def sum_diverges(self) -> bool:
        k, p = self.kind, self.params
        if k in ("harmonic", "periodic", "oscillating"):
            return True
        if k == "power":
            return p[1] <= 1.0
        return False

    @property
    def sumsq_converges(self) -> bool:
        k, p = self.kind, self.params
        if k in ("harmonic", "geometric", "explicit", "oscillating"):
            return True
        if k == "power":
            return p[1] > 0.5
        return False

    def values(self, M: int) -> np.ndarray:
        """alpha_1 .. alpha_M (fewer for a shorter explicit list)."""
        if M < 0:
            raise SequenceError("M must be non-negative")
        k, p = self.kind, self.params
        m = np.arange(1, M + 1, dtype=float)
        if k == "harmonic":
            a = p[0] / m
        elif k == "power":
            a = p[0] / m ** p[1]
        elif k == "geometric":
            a = p[0] * p[1] ** m
        elif k == "periodic":
            a = np.resize(np.array(p), M)
        elif k == "explicit":
            a = np.array(p[:M])
        else:
            a = np.abs(np.diff(_oscillation(p[0], p[1], M)))
        # geometric and power terms are positive in exact arithmetic; a zero is underflow
        _check_range(a, allow_underflow=k in ("geometric", "power"))
        return a


def _check_range(a: np.ndarray, allow_underflow: bool = False):
    bad = ~((a > 0.0) & (a <= HALF_PI))
    if allow_underflow:
        bad &= a != 0.0
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise SequenceError(f"alpha_{i + 1} = {a[i]!r} is outside (0, pi/2]")


def _oscillation(c: float, endpoint: float, M: int) -> np.ndarray:
    """Line angles gamma_0 = 0, gamma_1, ..., gamma_M bouncing inside [0, endpoint]."""
    g = np.empty(M + 1)
    g[0] = 0.0
    target = endpoint
    for m in range(1, M + 1):
        step = c / m
        prev = g[m - 1]
        if abs(target - prev) <= step:
            g[m] = target
            target = 0.0 if target == endpoint else endpoint
        else:
            g[m] = prev + math.copysign(step, target - prev)
    return g


@dataclass(frozen=True, eq=False)
class DirectionSequence:
    """Normals u_0 .. u_M with lines H_m = u_m-perp.

    ``betas[m]`` is the polar angle of ``u_m`` (unwrapped, so consecutive
    differences are the alphas) and ``alphas[m - 1]`` the angle between u_{m-1}
    and u_m.
    """

    betas: np.ndarray
    alphas: np.ndarray
    source: AngleSequence | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.alphas)

    @classmethod
    def from_line_angles(cls, angles, theta0: float | None = None) -> "DirectionSequence":
        """Sequence whose m-th line has polar angle ``angles[m-1]``.

        Lines are unoriented, so each normal is flipped to stay within pi/2 of
        its predecessor; ``theta0`` is the angle of the line H_0 (defaults to
        the first line).
        """
        t = np.asarray(angles, dtype=float)
        if t.ndim != 1 or len(t) == 0:
            raise SequenceError("need a non-empty list of line angles")
        theta0 = float(t[0]) if theta0 is None else float(theta0)
        b = np.empty(len(t) + 1)
        b[0] = theta0 + HALF_PI
        for m, th in enumerate(t, start=1):
            cand = th + HALF_PI
            # bring the candidate normal within pi/2 of the previous one
            b[m] = cand + math.pi * round((b[m - 1] - cand) / math.pi)
        return cls(b, np.abs(np.diff(b)))

    @property
    def normals(self) -> np.ndarray:
        return np.column_stack([np.cos(self.betas), np.sin(self.betas)])

    def normal(self, m: int) -> np.ndarray:
        return direction(self.betas[m])

    def line(self, m: int) -> LineSubspace:
        return LineSubspace.from_angle(self.betas[m] - HALF_PI)

    def line_angles(self) -> np.ndarray:
        return np.mod(self.betas - HALF_PI, math.pi)

    @property
    def total_turn(self) -> float:
        return float(np.sum(self.alphas))


def generate_sequence(A: AngleSequence, M: int, beta0: float = 0.0) -> DirectionSequence:
    """u_m = (cos beta_m, sin beta_m) with beta_m = beta0 + alpha_1 + ... + alpha_m.

    The oscillating kind instead walks the line angle between 0 and its
    endpoint, so beta_m = beta0 + pi/2 + gamma_m and the two endpoint lines are
    the accumulation points.
    """
    if M < 1:
        raise SequenceError("M must be at least 1")
    if A.kind == "oscillating":
        g = _oscillation(A.params[0], A.params[1], M)
        a = np.abs(np.diff(g))
        _check_range(a)
        b = beta0 + HALF_PI + g
        hits = {"low": int(np.sum(g[1:] == 0.0)), "high": int(np.sum(g[1:] == A.params[1]))}
        return DirectionSequence(b, a, A, {"endpoint_visits": hits})
    a = A.values(M)
    b = beta0 + np.concatenate([[0.0], np.cumsum(a)])
    return DirectionSequence(b, a, A)


def random_directions(M: int, seed: int) -> DirectionSequence:
    """M lines with uniformly distributed angles, reproducible from ``seed``."""
    rng = np.random.default_rng(np.uint64(seed))
    return DirectionSequence.from_line_angles(rng.uniform(0.0, math.pi, size=M))


class GammaBound(NamedTuple):
    value: float
    lower_bound: float
    tail_sumsq: float
    terms: int


def _tail_sumsq(A: AngleSequence, M: int) -> float:
    """Sum of alpha_m**2 over m > M, in closed form, rounded up slightly."""
    k, p = A.kind, A.params
    if k == "explicit":
        return float(np.sum(np.square(p[M:])))
    if k == "harmonic":
        s = p[0] ** 2 * float(special.polygamma(1, M + 1))
    elif k == "power":
        s = p[0] ** 2 * float(special.zeta(2.0 * p[1], M + 1))
    elif k == "geometric":
        s = p[0] ** 2 * p[1] ** (2 * (M + 1)) / (1.0 - p[1] ** 2)
    elif k == "oscillating":
        s = p[0] ** 2 * float(special.polygamma(1, M + 1))
    else:
        return math.inf
    return s * (1.0 + 1e-12)


def gamma_product(A: AngleSequence, M: int) -> GammaBound:
    """Truncated product of cos(alpha_m), m <= M, and a lower bound for the full product.

    The tail is bounded with cos x >= exp(-x**2), valid for 0 <= x <= 1; if
    some alpha_m >= 1 lies beyond M, the head is extended exactly until the
    tail starts below 1 (every generator here is non-increasing from there).
    For the oscillating kind the clamped steps never exceed c/m, so the
    harmonic tail is an upper bound for their squares.
    """
    if M < 1:
        raise SequenceError("M must be at least 1")
    n = int(min(M, A.length))
    head = A.values(n)
    logs = np.log(np.cos(head))
    value = math.exp(math.fsum(logs))
    if not A.sumsq_converges:
        return GammaBound(value, 0.0, math.inf, n)
    ext = n
    if math.isfinite(A.length):
        ext = int(A.length)
    else:
        # first index whose generic term (and every later one) is below 1
        while _term_bound(A, ext + 1) >= 1.0:
            ext += 1
    more = A.values(ext)[n:]
    # exact factors between M and the start of the certified tail
    lower = value * math.exp(math.fsum(np.log(np.cos(more)))) if len(more) else value
    tail = _tail_sumsq(A, ext)
    return GammaBound(value, lower * math.exp(-tail), tail, n)


def _term_bound(A: AngleSequence, m: int) -> float:
    k, p = A.kind, A.params
    if k in ("harmonic", "oscillating"):
        return p[0] / m
    if k == "power":
        return p[0] / m ** p[1]
    if k == "geometric":
        return p[0] * p[1] ** m
    return 0.0


def _step_rotation(R_prev: RotationOp, u: np.ndarray) -> RotationOp:
    n = len(u)
    e1 = np.zeros(n)
    e1[0] = 1.0
    return rotation_between(R_prev.apply(u), e1)


def rotation_schedule(D: DirectionSequence, normals: np.ndarray | None = None) -> list[RotationOp]:
    """R_0 = I, R_m = A_m R_{m-1} where A_m takes R_{m-1} u_m to e1.

    ``normals`` may supply u_0..u_M explicitly (any dimension); by default the
    planar normals of ``D`` are used. Element m of the result is R_m.
    """
    U = D.normals if normals is None else np.asarray(normals, dtype=float)
    R = RotationOp.identity(U.shape[1])
    out = [R]
    for m in range(1, len(U)):
        A = _step_rotation(R, U[m])
        R = A @ R
        out.append(R)
    return out


def cauchy_bound(alphas: np.ndarray, m: int, k: int) -> float:
    """2 * sum_{j=m+1}^{m+k} sin(|alpha_j| / 2), alphas indexed from alpha_1."""
    a = np.asarray(alphas, dtype=float)[m:m + k]
    return 2.0 * math.fsum(np.sin(np.abs(a) / 2.0))
