"""Radial test functions f(z, t) = F(|z|, t) on H^n.

Every function knows where it lives (breakpoints in r and t, a lambda extent
beyond which its central Fourier transform is negligible) so the transform
can build a quadrature grid without guessing.
"""
import math

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .geometry import graded_breaks, sphere_area, symmetric_breaks

# exp(-46) ~ 1e-20: decay cut for Gaussian extents
_DECAY = 46.0


class RadialFunction:
    n = 1
    parity = None  # "even", "odd" or None in t
    kind = "profile"

    def profile(self, r, t):
        raise NotImplementedError

    def __call__(self, r, t):
        return self.profile(r, t)

    # geometry of the support
    def r_breaks(self):
        raise NotImplementedError

    def t_breaks(self):
        raise NotImplementedError

    @property
    def lam_extent(self):
        raise NotImplementedError

    def central_fourier(self, lam, r, t_nodes=None, t_weights=None):
        """f^lam(r) = int F(r, t) exp(i lam t) dt, shape (len(lam), len(r))."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if t_nodes is None:
            from .geometry import gauss_panels
            t_nodes, t_weights = gauss_panels(self.t_breaks(), 16)
        vals = np.asarray(self.profile(r[:, None], t_nodes[None, :]), dtype=float) * np.ones((r.size, t_nodes.size))
        ph = lam[:, None] * t_nodes[None, :]
        c = (np.cos(ph) * t_weights) @ vals.T
        if self.parity == "even":
            return c.astype(complex)
        s = (np.sin(ph) * t_weights) @ vals.T
        if self.parity == "odd":
            return 1j * s
        return c + 1j * s

    def dilate(self, s):
        if not s > 0:
            raise ValueError("dilation factor must be positive")
        base = self
        return Profile(lambda r, t: base.profile(s * r, s * s * t), self.n,
                       self.r_breaks() / s, self.t_breaks() / (s * s),
                       self.lam_extent * s * s, self.parity, kind=f"dilate({s})")

    def scale(self, c):
        base = self
        return Profile(lambda r, t: c * base.profile(r, t), self.n, self.r_breaks(),
                       self.t_breaks(), self.lam_extent, self.parity, kind=f"scale({c})")

    def __add__(self, other):
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        rb = np.union1d(self.r_breaks(), other.r_breaks())
        tb = np.union1d(self.t_breaks(), other.t_breaks())
        par = self.parity if self.parity == other.parity else None
        a, b = self, other
        return Profile(lambda r, t: a.profile(r, t) + b.profile(r, t), self.n, rb, tb,
                       max(self.lam_extent, other.lam_extent), par, kind="sum")

    def times_t(self):
        base = self
        flip = {"even": "odd", "odd": "even"}.get(self.parity)
        return Profile(lambda r, t: t * base.profile(r, t), self.n, self.r_breaks(),
                       self.t_breaks(), self.lam_extent, flip, kind="t*f")

    def dt(self):
        raise NotImplementedError(f"{self.kind} has no t-derivative")

    def l1_norm(self):
        return None

    def l2_norm_sq(self):
        return None


class Profile(RadialFunction):
    """A radial function from a callable plus its support geometry."""

    def __init__(self, func, n, r_breaks, t_breaks, lam_extent, parity=None, kind="profile"):
        self.func = func
        self.n = int(n)
        self._rb = np.asarray(r_breaks, dtype=float)
        self._tb = np.asarray(t_breaks, dtype=float)
        self._lam = float(lam_extent)
        self.parity = parity
        self.kind = kind

    def profile(self, r, t):
        return self.func(r, t)

    def r_breaks(self):
        return self._rb

    def t_breaks(self):
        return self._tb

    @property
    def lam_extent(self):
        return self._lam


class Gaussian(RadialFunction):
    """amp * exp(-a|z|^2 - b t^2)."""

    kind = "gaussian"
    parity = "even"

    def __init__(self, a, b, n=1, amp=1.0):
        if not (a > 0 and b > 0):
            raise ValueError("Gaussian needs a, b > 0")
        self.a, self.b, self.n, self.amp = float(a), float(b), int(n), float(amp)

    def __repr__(self):
        return f"Gaussian(a={self.a}, b={self.b}, n={self.n}, amp={self.amp})"

    def profile(self, r, t):
        return self.amp * np.exp(-self.a * np.asarray(r) ** 2 - self.b * np.asarray(t) ** 2)

    def r_breaks(self):
        return graded_breaks(math.sqrt(_DECAY / self.a), 8)

    def t_breaks(self):
        return symmetric_breaks(math.sqrt(_DECAY / self.b), 8)

    @property
    def lam_extent(self):
        # |f^lam|^2 ~ exp(-lam^2 / 2b)
        return math.sqrt(2.0 * self.b * _DECAY)

    def central_fourier(self, lam, r, t_nodes=None, t_weights=None):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        g = self.amp * math.sqrt(math.pi / self.b) * np.exp(-lam ** 2 / (4 * self.b))
        return (g[:, None] * np.exp(-self.a * r ** 2)[None, :]).astype(complex)

    def dilate(self, s):
        if not s > 0:
            raise ValueError("dilation factor must be positive")
        return Gaussian(self.a * s * s, self.b * s ** 4, self.n, self.amp)

    def scale(self, c):
        return Gaussian(self.a, self.b, self.n, self.amp * c)

    def dt(self):
        a, b, amp = self.a, self.b, self.amp
        return Profile(lambda r, t: -2 * b * amp * t * np.exp(-a * np.asarray(r) ** 2 - b * np.asarray(t) ** 2),
                       self.n, self.r_breaks(), self.t_breaks(), self.lam_extent, "odd", kind="dt gaussian")

    def l1_norm(self):
        return abs(self.amp) * (math.pi / self.a) ** self.n * math.sqrt(math.pi / self.b)

    def l2_norm_sq(self):
        return self.amp ** 2 * (math.pi / (2 * self.a)) ** self.n * math.sqrt(math.pi / (2 * self.b))

    def lp_norm(self, p):
        return abs(self.amp) * ((math.pi / (p * self.a)) ** self.n * math.sqrt(math.pi / (p * self.b))) ** (1.0 / p)

    # level sets {|f| > M} for rearrangements
    def level_radius(self, M):
        L = math.log(abs(self.amp) / M) if M < abs(self.amp) else 0.0
        return math.sqrt(L / self.a)

    def level_halfwidth(self, r, M):
        L = math.log(abs(self.amp) / M) if M < abs(self.amp) else 0.0
        return np.sqrt(np.maximum(L - self.a * np.asarray(r) ** 2, 0.0) / self.b)


class BumpIndicator(RadialFunction):
    """amp on {|z| < R_z, |t| < R_t}, zero elsewhere."""

    kind = "bump"
    parity = "even"

    def __init__(self, Rz, Rt, n=1, amp=1.0):
        if not (Rz > 0 and Rt > 0):
            raise ValueError("BumpIndicator needs R_z, R_t > 0")
        self.Rz, self.Rt, self.n, self.amp = float(Rz), float(Rt), int(n), float(amp)

    def __repr__(self):
        return f"BumpIndicator(Rz={self.Rz}, Rt={self.Rt}, n={self.n})"

    def profile(self, r, t):
        r = np.asarray(r)
        t = np.asarray(t)
        return self.amp * ((r < self.Rz) & (np.abs(t) < self.Rt)).astype(float)

    def r_breaks(self):
        return graded_breaks(self.Rz, 4)

    def t_breaks(self):
        return symmetric_breaks(self.Rt, 4)

    @property
    def lam_extent(self):
        return 40.0 / self.Rt

    def central_fourier(self, lam, r, t_nodes=None, t_weights=None):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        g = self.amp * 2.0 * self.Rt * np.sinc(lam * self.Rt / math.pi)
        return (g[:, None] * (r < self.Rz)[None, :]).astype(complex)

    def dilate(self, s):
        if not s > 0:
            raise ValueError("dilation factor must be positive")
        return BumpIndicator(self.Rz / s, self.Rt / (s * s), self.n, self.amp)

    def scale(self, c):
        return BumpIndicator(self.Rz, self.Rt, self.n, self.amp * c)

    def measure(self):
        return math.pi ** self.n * self.Rz ** (2 * self.n) / math.factorial(self.n) * 2 * self.Rt

    def l1_norm(self):
        return abs(self.amp) * self.measure()

    def l2_norm_sq(self):
        return self.amp ** 2 * self.measure()

    def level_radius(self, M):
        return self.Rz if M < abs(self.amp) else 0.0

    def level_halfwidth(self, r, M):
        inside = (np.asarray(r) < self.Rz) & (M < abs(self.amp))
        return np.where(inside, self.Rt, 0.0)


class SampledGrid(RadialFunction):
    """F sampled on an r x t grid; bilinear in between, zero outside the box."""

    kind = "sampled"

    def __init__(self, r_grid, t_grid, values, n=1, parity=None):
        r_grid = np.asarray(r_grid, dtype=float)
        t_grid = np.asarray(t_grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if values.shape != (r_grid.size, t_grid.size):
            raise ValueError("values must have shape (len(r_grid), len(t_grid))")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        if r_grid[0] != 0.0:
            raise ValueError("r grid must start at 0")
        self.r_grid, self.t_grid, self.values, self.n = r_grid, t_grid, values, int(n)
        self.parity = parity
        self._interp = RegularGridInterpolator((r_grid, t_grid), values, method="linear",
                                               bounds_error=False, fill_value=0.0)

    @classmethod
    def from_function(cls, f, r_grid, t_grid):
        vals = f.profile(np.asarray(r_grid)[:, None], np.asarray(t_grid)[None, :])
        return cls(r_grid, t_grid, vals, f.n, f.parity)

    def profile(self, r, t):
        r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
        pts = np.stack([r.ravel(), t.ravel()], axis=-1)
        return self._interp(pts).reshape(r.shape)

    def r_breaks(self):
        return self.r_grid

    def t_breaks(self):
        return self.t_grid

    @property
    def lam_extent(self):
        return 2 * math.pi / np.min(np.diff(self.t_grid))


def zero_function(n=1):
    return Gaussian(1.0, 1.0, n, amp=0.0)


def lp_norm_numeric(f, p, grid):
    from .geometry import integrate_hn_radial
    return integrate_hn_radial(lambda r, t: np.abs(f.profile(r, t)) ** p, f.n, grid) ** (1.0 / p)


def ball_volume(n, R):
    """Volume of {|z| < R} in C^n."""
    return math.pi ** n * R ** (2 * n) / math.factorial(n)


__all__ = ["RadialFunction", "Profile", "Gaussian", "BumpIndicator", "SampledGrid",
           "zero_function", "lp_norm_numeric", "ball_volume", "sphere_area"]
