"""Green's function of an infinite dielectric nanofiber (radial component).

Atoms sit at radius rho_a outside a cylinder of radius r and permittivity
eps, with radial dipoles.  The rho-rho component of the scattered Green's
function between two axial positions is written as an angular-momentum sum
of axial wave-vector integrals,

    G_sc(dz) = (1/k0^2) * sum_m  int dk  g_m(k) exp(i k dz),

where g_m is assembled from outgoing-wave coefficients (a_m, b_m) that
solve a 4x4 boundary-matching system at the fiber surface for each (m, k).
The integrand carries a pole at the guided HE11 wave vector +-k_1d on the
real axis and branch points at +-k0.  Splitting off the full pole residue
gives the guided part  G_1d(dz) = g * exp(i k_1d |dz|); the remainder plus
the vacuum tensor is the non-guided part G'.

Numerically the real-line integral is folded to k >= 0, the light-line
branch points are flattened by sqrt substitutions, the pole is removed by
residue subtraction (its principal value reduces to a sine-integral
closed form), and the smooth pieces are stored once as panel data --
Gauss-Legendre nodes plus Chebyshev fits -- so that every atom separation
reuses the same expensive Bessel evaluations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.optimize import brentq
from scipy.special import h1vp, hankel1, jv, jvp, kv, kvp

_GL64_X, _GL64_W = np.polynomial.legendre.leggauss(64)
_CHEB_N = 17  # stored Chebyshev coefficients per panel (degree 16)
_CHEB_X = np.cos(np.pi * np.arange(2 * _CHEB_N) / (2 * _CHEB_N - 1))  # 34 pts
_MOMENT_SWITCH = 30.0  # phase beyond which Gauss nodes under-resolve cos(k dz)


class FiberError(RuntimeError):
    pass


def _perp_wavenumbers(k_par, k0, eps):
    """Transverse wave numbers outside/inside with Im >= 0 (physical sheet)."""
    kperp = np.sqrt(k0**2 - np.asarray(k_par, dtype=complex) ** 2)
    kperp = np.where(kperp.imag < 0, -kperp, kperp)
    k1 = np.sqrt(eps * k0**2 - np.asarray(k_par, dtype=complex) ** 2)
    k1 = np.where(k1.imag < 0, -k1, k1)
    return kperp, k1


def _mode_amplitudes(m, k_par, radius, eps, rho_a, k0=1.0):
    """Outgoing-wave coefficients (a_m, b_m) of the scattered field.

    Solves the tangential-field continuity system at the fiber surface for
    a unit radial dipole at (rho_a, 0, 0).  Broadcasts over matching shapes
    of ``m`` and ``k_par``; returns complex arrays of that shape.
    """
    m = np.asarray(m, dtype=float)
    k_par = np.asarray(k_par, dtype=complex)
    m, k_par = np.broadcast_arrays(m, k_par)
    kp, k1 = _perp_wavenumbers(k_par, k0, eps)
    R = radius
    xs, x1 = kp * R, k1 * R
    J, Jp = jv(m, xs), jvp(m, xs)
    H, Hp = hankel1(m, xs), h1vp(m, xs)
    J1, J1p = jv(m, x1), jvp(m, x1)
    Ha, Hap = hankel1(m, kp * rho_a), h1vp(m, kp * rho_a)

    # incident longitudinal fields at the surface: E_z = aE*J_m(kp rho), etc.
    aE = (k_par * kp / (8.0 * np.pi)) * Hap
    ah = -(1j * k0 * m / (8.0 * np.pi * rho_a)) * Ha

    imk = 1j * m * k_par / R
    shape = m.shape
    A = np.zeros(shape + (4, 4), dtype=complex)
    rhs = np.zeros(shape + (4,), dtype=complex)
    # unknowns [a, b, c, d]: scattered (E, h) outside, regular (E, h) inside
    A[..., 0, 0] = H
    A[..., 0, 2] = -J1
    rhs[..., 0] = -aE * J
    A[..., 1, 1] = H
    A[..., 1, 3] = -J1
    rhs[..., 1] = -ah * J
    A[..., 2, 0] = imk / kp**2 * H
    A[..., 2, 1] = -(k0 / kp) * Hp
    A[..., 2, 2] = -imk / k1**2 * J1
    A[..., 2, 3] = (k0 / k1) * J1p
    rhs[..., 2] = -imk / kp**2 * aE * J + (k0 / kp) * ah * Jp
    A[..., 3, 0] = (k0 / kp) * Hp
    A[..., 3, 1] = imk / kp**2 * H
    A[..., 3, 2] = -(k0 * eps / k1) * J1p
    A[..., 3, 3] = -imk / k1**2 * J1
    rhs[..., 3] = -(k0 / kp) * aE * Jp - imk / kp**2 * ah * J

    # column equilibration: the inside solutions grow like exp(|k1| R)
    scale = np.max(np.abs(A), axis=-2)
    scale[scale == 0] = 1.0
    try:
        sol = np.linalg.solve(A / scale[..., None, :], rhs[..., None]).squeeze(-1)
    except np.linalg.LinAlgError as exc:
        raise FiberError("boundary-matching system is singular") from exc
    sol = sol / scale
    return sol[..., 0], sol[..., 1]


def _system_determinant(m, k_par, radius, eps, rho_a, k0=1.0):
    """Determinant of the boundary system (pole denominator), column scaled."""
    m = np.asarray(m, dtype=float)
    k_par = np.asarray(k_par, dtype=complex)
    m, k_par = np.broadcast_arrays(m, k_par)
    kp, k1 = _perp_wavenumbers(k_par, k0, eps)
    R = radius
    J1, J1p = jv(m, k1 * R), jvp(m, k1 * R)
    H, Hp = hankel1(m, kp * R), h1vp(m, kp * R)
    imk = 1j * m * k_par / R
    shape = m.shape
    A = np.zeros(shape + (4, 4), dtype=complex)
    A[..., 0, 0] = H
    A[..., 0, 2] = -J1
    A[..., 1, 1] = H
    A[..., 1, 3] = -J1
    A[..., 2, 0] = imk / kp**2 * H
    A[..., 2, 1] = -(k0 / kp) * Hp
    A[..., 2, 2] = -imk / k1**2 * J1
    A[..., 2, 3] = (k0 / k1) * J1p
    A[..., 3, 0] = (k0 / kp) * Hp
    A[..., 3, 1] = imk / kp**2 * H
    A[..., 3, 2] = -(k0 * eps / k1) * J1p
    A[..., 3, 3] = -imk / k1**2 * J1
    scale = np.max(np.abs(A), axis=-2)
    scale[scale == 0] = 1.0
    return np.linalg.det(A / scale[..., None, :])


def hybrid_mode_equation(beta, radius, eps, k0=1.0, m=1):
    """Real dispersion function of the guided hybrid modes (vacuum cladding).

    F(beta) = [J'/(uJ) + K'/(wK)] [eps J'/(uJ) + K'/(wK)]
              - m^2 (beta/k0)^2 (1/u^2 + 1/w^2)^2,

    with u = R sqrt(eps k0^2 - beta^2) and w = R sqrt(beta^2 - k0^2); the
    bound modes are its roots on (k0, sqrt(eps) k0).
    """
    u = radius * np.sqrt(eps * k0**2 - beta**2)
    w = radius * np.sqrt(beta**2 - k0**2)
    ju = jv(m, u) * u
    kw = kv(m, w) * w
    a = jvp(m, u) / ju + kvp(m, w) / kw
    b = eps * jvp(m, u) / ju + kvp(m, w) / kw
    return a * b - m**2 * (beta / k0) ** 2 * (1.0 / u**2 + 1.0 / w**2) ** 2


def mode_integrand(m: int, k_par: complex, fiber: "FiberSpec") -> complex:
    """Scattered-field integrand g_m(k) of the rho-rho Green's function.

    Defined so that G_sc(dz) = (1/k0^2) sum_m int dk g_m(k) e^{i k dz};
    see the module docstring.  ``k_par`` may be complex (off the real axis
    the branch of the transverse wave number continues with Im >= 0).
    """
    out = _integrand_batch(np.asarray([m]), np.asarray([k_par], dtype=complex),
                           fiber.radius, fiber.eps, fiber.rho_a)
    val = complex(out[0, 0])
    if not np.isfinite(val):
        raise FiberError(f"mode integrand overflowed at m={m}, k={k_par}")
    return val


def _integrand_batch(m_arr, k_arr, radius, eps, rho_a, k0=1.0):
    """g_m(k) on the outer product of ``m_arr`` (M,) and ``k_arr`` (K,)."""
    M = np.asarray(m_arr, dtype=float)[:, None]
    K = np.asarray(k_arr, dtype=complex)[None, :]
    a, b = _mode_amplitudes(M, K, radius, eps, rho_a, k0)
    kp, _ = _perp_wavenumbers(K, k0, eps)
    Ha = hankel1(M, kp * rho_a)
    Hap = h1vp(M, kp * rho_a)
    return (1j / kp**2) * (K * kp * a * Hap + (1j * k0 * M / rho_a) * b * Ha)


def vacuum_integrand(m_arr, k_arr, rho_a, k0=1.0):
    """Same-form integrand of the vacuum dipole field at the atom's radius.

    Summing (1/k0^2) * mult_m * 2 * int_0^{k0} Im[...] dk over m recovers
    Im G0_rho_rho(0) = k0/(6 pi); used as a consistency check of the
    cylindrical expansion.
    """
    M = np.asarray(m_arr, dtype=float)[:, None]
    K = np.asarray(k_arr, dtype=complex)[None, :]
    kp, _ = _perp_wavenumbers(K, k0, 1.0)
    Ja = jv(M, kp * rho_a)
    Jap = jvp(M, kp * rho_a)
    Hap = h1vp(M, kp * rho_a)
    Ha = hankel1(M, kp * rho_a)
    aE = (K * kp / (8.0 * np.pi)) * Hap
    ah = -(1j * k0 * M / (8.0 * np.pi * rho_a)) * Ha
    return (1j / kp**2) * (K * kp * aE * Jap + (1j * k0 * M / rho_a) * ah * Ja)


def vacuum_greens_rho(dz, k0=1.0):
    """Transverse (rho-rho) free-space Green's function along the axis."""
    z = np.abs(np.asarray(dz, dtype=float))
    kr = k0 * z
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.exp(1j * kr) * (kr**2 + 1j * kr - 1.0) / (4.0 * np.pi * k0**2 * z**3)
    return g


# --- panel machinery ---------------------------------------------------------

@dataclass
class _Panel:
    """One smooth piece of the folded k >= 0 integration path.

    ``kind`` is "linear" (k = mid + half*x), "sqrt" (k = edge + sgn*u^2,
    which flattens the light-line branch point), or "polewin" (symmetric
    principal-value window around the guided pole at ``edge``, parametrized
    by u = k - edge > 0 with both sides stored; the pole cancels exactly in
    the even combination, so no residue accuracy is needed).  Node values
    of g_m are stored for all m at Gauss nodes, plus Chebyshev coefficients
    for the high-oscillation moment path on linear panels.
    """
    kind: str
    p0: float
    p1: float
    edge: float = 0.0
    sgn: float = 1.0
    k_gl: np.ndarray | None = None
    w_gl: np.ndarray | None = None
    vals_gl: np.ndarray | None = None
    vals_lo: np.ndarray | None = None  # polewin: values at k = edge - u
    cheb: np.ndarray | None = None  # (n_m, _CHEB_N), linear panels only

    def k_of_x(self, x):
        mid, half = 0.5 * (self.p0 + self.p1), 0.5 * (self.p1 - self.p0)
        p = mid + half * x
        if self.kind == "linear":
            return p, half * np.ones_like(x)
        if self.kind == "polewin":
            return self.edge + p, half * np.ones_like(x)
        # sqrt panel: parameter is u, k = edge + sgn*u^2, dk = 2u du
        return self.edge + self.sgn * p**2, half * 2.0 * p * self.sgn

    @property
    def k_span(self):
        if self.kind in ("linear", "polewin"):
            return abs(self.p1 - self.p0)
        return abs(self.p1**2 - self.p0**2)


def _eval_on_panel(panel, filler):
    """Fill Gauss values and (for linear panels) Chebyshev coefficients."""
    k_gl, jac = panel.k_of_x(_GL64_X)
    panel.k_gl = k_gl.astype(float)
    panel.w_gl = _GL64_W * jac
    panel.vals_gl = filler(panel.k_gl)
    if panel.kind == "polewin":
        u = panel.k_gl - panel.edge
        panel.vals_lo = filler((panel.edge - u).astype(float))
    if panel.kind == "linear":
        k_ch, _ = panel.k_of_x(_CHEB_X)
        vals = filler(k_ch.astype(float))
        coef = np.array([_cheb.chebfit(_CHEB_X, v, _CHEB_N - 1) for v in vals])
        panel.cheb = coef


def _cheb_tail_ok(filler, panel, tol):
    k_ch, _ = panel.k_of_x(_CHEB_X)
    vals = filler(k_ch.astype(float))
    full = np.array([_cheb.chebfit(_CHEB_X, v, 2 * _CHEB_N - 1) for v in vals])
    tail = np.abs(full[:, _CHEB_N:]).sum()
    return tail * panel.k_span < tol


def _subdivide(panel):
    mid = 0.5 * (panel.p0 + panel.p1)
    left = _Panel(panel.kind, panel.p0, mid, panel.edge, panel.sgn)
    right = _Panel(panel.kind, mid, panel.p1, panel.edge, panel.sgn)
    return [left, right]


def _oscillatory_panel_integral(panel, dz, mult):
    """sum_m mult_m * int_panel g_m(k) cos(k dz) dk for one panel.

    The "polewin" kind returns the principal value across the guided pole:
    with u = k - k_1d > 0 and f_pm = f(k_1d +- u),

        PV int f cos(k dz) dk = cos(k_1d dz) int (f+ + f-) cos(u dz) du
                              - sin(k_1d dz) int (f+ - f-) sin(u dz) du,

    where the first combination is pole-free and the second is tamed by
    the sin factor.
    """
    if panel.kind == "polewin":
        u = panel.k_gl - panel.edge
        fsum = mult @ (panel.vals_gl + panel.vals_lo)
        fdiff = mult @ (panel.vals_gl - panel.vals_lo)
        C = np.sum(panel.w_gl * fsum * np.cos(u * dz))
        S = np.sum(panel.w_gl * fdiff * np.sin(u * dz))
        return np.cos(panel.edge * dz) * C - np.sin(panel.edge * dz) * S
    if panel.kind == "sqrt" or abs(dz) * panel.k_span <= _MOMENT_SWITCH:
        w = panel.w_gl * np.cos(panel.k_gl * dz)
        return (panel.vals_gl * w).sum(axis=1) @ mult
    # high-oscillation path: cosine/sine moments of the Chebyshev fit.
    # With k = mid + half*x,  cos(k dz) splits into cos/sin moments of x^j,
    # mu_j = int x^j e^{iwx} dx (upward recurrence, stable for |w| > j).
    mid, half = 0.5 * (panel.p0 + panel.p1), 0.5 * (panel.p1 - panel.p0)
    mono = np.array([_cheb.cheb2poly(c) for c in panel.cheb])
    w = half * dz
    mu = np.empty(_CHEB_N, dtype=complex)
    eiw, emiw = np.exp(1j * w), np.exp(-1j * w)
    mu[0] = 2.0 * np.sin(w) / w
    for j in range(1, _CHEB_N):
        mu[j] = (eiw - (-1) ** j * emiw) / (1j * w) - (j / (1j * w)) * mu[j - 1]
    proj = mono @ mu.real * np.cos(mid * dz) - mono @ mu.imag * np.sin(mid * dz)
    return half * (mult @ proj)


# --- fiber specification and derived constants -------------------------------

@dataclass
class FiberSpec:
    """Nanofiber parameters (units of 1/k0) and derived guided-mode constants.

    Defaults follow k0*r = 1.2, rho_a = 1.5*r, eps = 4.  Heavy work (pole
    search, panel table) happens lazily and is cached on the instance.
    """

    radius: float = 1.2
    eps: float = 4.0
    rho_a: float = 1.8
    m_max: int = 40
    tol: float = 1e-9
    k0: float = 1.0
    gamma0: float = 1.0
    zmax: float = 330.0  # largest separation the panel table must resolve
    m_tail: float = 1e-8

    def __post_init__(self):
        if not (self.rho_a > self.radius > 0):
            raise ValueError("need rho_a > radius > 0")
        if self.eps <= 1:
            raise ValueError("need eps > 1 (guiding requires a dense fiber)")
        self._memo: dict[float, tuple[complex, complex]] = {}

    # -- guided pole -----------------------------------------------------

    @cached_property
    def k_1d(self) -> float:
        return guided_pole(self)

    @cached_property
    def _residue(self) -> complex:
        """Residue of g_1(k) at the guided pole (complex-step + Richardson)."""
        def probe(delta):
            k = self.k_1d + 1j * delta
            val = _integrand_batch(np.asarray([1.0]), np.asarray([k]),
                                   self.radius, self.eps, self.rho_a, self.k0)
            return 1j * delta * complex(val[0, 0])
        d = 1e-6 * self.k0
        r1, r2 = probe(d), probe(2 * d)
        return 2.0 * r1 - r2

    @cached_property
    def _m_list(self) -> np.ndarray:
        """Angular momenta 0..m_eff chosen by the relative tail criterion."""
        m_all = np.arange(0, self.m_max + 1)
        k_probe = np.array([0.3 * self.k0, 0.8 * self.k0, 1.5 * self.k0])
        vals = np.abs(_integrand_batch(m_all, k_probe, self.radius, self.eps,
                                       self.rho_a, self.k0)).max(axis=1)
        vals = np.nan_to_num(vals, nan=0.0, posinf=0.0)  # overflowed m's are spent
        if not np.any(vals > 0):
            raise FiberError("all angular momenta overflowed; fiber too large")
        running = np.cumsum(vals * np.where(m_all == 0, 1, 2))
        keep = vals * 2 > self.m_tail * running[-1]
        m_eff = int(m_all[keep].max()) + 2
        return np.arange(0, min(m_eff, self.m_max) + 1)

    @cached_property
    def _table(self):
        return _build_panel_table(self)

    # -- derived single-atom constants ------------------------------------

    @cached_property
    def _self_terms(self):
        guided, nonguided = _assemble(self, np.array([0.0]))
        return complex(guided[0]), complex(nonguided[0])

    @cached_property
    def gamma_1d(self) -> float:
        g, _ = self._self_terms
        val = 6.0 * np.pi / self.k0 * g.imag * self.gamma0
        if val <= 0:
            raise FiberError("guided decay rate came out non-positive")
        return val

    @cached_property
    def gamma_prime(self) -> float:
        _, ng = self._self_terms
        # vacuum self-term contributes exactly Gamma0 to the imaginary part
        val = self.gamma0 + 6.0 * np.pi / self.k0 * ng.imag * self.gamma0
        if val <= 0:
            raise FiberError("radiative decay rate came out non-positive")
        return val

    @cached_property
    def j_prime(self) -> float:
        _, ng = self._self_terms
        return -3.0 * np.pi / self.k0 * ng.real * self.gamma0

    @property
    def lambda_1d(self) -> float:
        return 2.0 * np.pi / self.k_1d

    @property
    def optical_depth_per_atom(self) -> float:
        return 2.0 * self.gamma_1d / self.gamma_prime


def guided_pole(fiber: FiberSpec) -> float:
    """Wave vector of the HE11 guided mode on (k0, sqrt(eps)*k0).

    Bracketed root of the real hybrid-mode dispersion function, refined by
    Brent iteration to 1e-10 relative; the bracket scan also enforces that
    the fiber is single-mode (exactly one root).
    """
    k0 = fiber.k0
    lo, hi = k0 * (1 + 1e-9), np.sqrt(fiber.eps) * k0 * (1 - 1e-9)
    grid = np.linspace(lo, hi, 600)
    f = hybrid_mode_equation(grid, fiber.radius, fiber.eps, k0)
    sign_changes = np.flatnonzero(np.sign(f[:-1]) != np.sign(f[1:]))
    if sign_changes.size != 1:
        raise FiberError(f"expected a single guided mode, found "
                         f"{sign_changes.size} dispersion roots")
    i = sign_changes[0]
    root = brentq(lambda b: float(hybrid_mode_equation(
        b, fiber.radius, fiber.eps, k0)), grid[i], grid[i + 1],
        xtol=1e-12, rtol=1e-12)
    return float(root)


def _build_panel_table(fiber: FiberSpec):
    """Adaptive panel representation of all g_m on the folded path k >= 0."""
    k0, eps = fiber.k0, fiber.eps
    k1d = fiber.k_1d
    res = fiber._residue
    m_list = fiber._m_list
    keps = np.sqrt(eps) * k0
    kappa_tail = -np.log(1e-14) / (2.0 * (fiber.rho_a - fiber.radius))
    kmax = float(np.hypot(k0, kappa_tail))
    edge = 0.12 * k0
    wp = min(0.05 * k0, 0.25 * (keps - k1d), 0.25 * (k1d - k0))

    def filler(k_nodes):
        vals = _integrand_batch(m_list, k_nodes, fiber.radius, fiber.eps,
                                fiber.rho_a, k0)
        if not np.all(np.isfinite(vals)):
            raise FiberError("integrand overflowed while building panels")
        return vals

    # skip the branch points themselves; the omitted mass is O(u_eps) since
    # the sqrt substitution makes the integrand bounded in u
    u_eps = 1e-7 * np.sqrt(k0)
    panels = [
        _Panel("linear", 0.0, k0 - edge),
        _Panel("sqrt", np.sqrt(edge), u_eps, edge=k0, sgn=-1.0),
        _Panel("sqrt", u_eps, np.sqrt(edge), edge=k0, sgn=1.0),
        _Panel("linear", k0 + edge, k1d - wp),
        _Panel("linear", k1d + wp, keps - 1e-9 * k0),
        _Panel("linear", keps + 1e-9 * k0, 2.0 * keps),
        _Panel("linear", 2.0 * keps, max(kmax, 3.0 * keps)),
    ]
    # refine by Chebyshev-tail criterion, then enforce the oscillation bound
    accepted = []
    stack = panels[::-1]
    guard = 0
    while stack:
        guard += 1
        if guard > 4000:
            raise FiberError("panel refinement did not converge")
        p = stack.pop()
        if abs(p.p1 - p.p0) < 1e-9:
            accepted.append(p)
            continue
        if _cheb_tail_ok(filler, p, fiber.tol):
            accepted.append(p)
        else:
            stack.extend(_subdivide(p)[::-1])
    # symmetric principal-value windows around the pole (see _Panel docstring)
    accepted.append(_Panel("polewin", 0.0, wp / 3.0, edge=k1d))
    accepted.append(_Panel("polewin", wp / 3.0, wp, edge=k1d))
    final = []
    max_span = max(12.0 / max(fiber.zmax, 1.0), 1e-6)
    for p in accepted:
        if p.kind == "sqrt" and p.k_span > max_span:
            parts = int(np.ceil(p.k_span / max_span))
            us = np.linspace(p.p0, p.p1, parts + 1)
            final.extend(_Panel("sqrt", a, b, p.edge, p.sgn)
                         for a, b in zip(us[:-1], us[1:]))
        else:
            final.append(p)
    for p in final:
        _eval_on_panel(p, filler)
    mult = np.where(m_list == 0, 1.0, 2.0)
    return {"panels": final, "mult": mult, "wp": wp, "res": res, "k1d": k1d}


def _assemble(fiber: FiberSpec, separations):
    """(guided, non-guided scattered) Green's values for |dz| separations."""
    tab = fiber._table
    mult = tab["mult"]
    res, k1d, wp = tab["res"], tab["k1d"], tab["wp"]
    k0 = fiber.k0
    guided = np.empty(len(separations), dtype=complex)
    nonguided = np.empty(len(separations), dtype=complex)
    for i, dz in enumerate(np.abs(np.asarray(separations, dtype=float))):
        total = 0.0 + 0.0j
        for p in tab["panels"]:
            total += _oscillatory_panel_integral(p, dz, mult)
        total *= 2.0  # fold k<0 by evenness of g_m
        # conversion from the principal value to the physical contour
        # (+k_1d pole above, -k_1d below the path); factor 2 covers m = +-1
        pole_phys = 2.0 * (2.0 * np.pi * res * np.sin(k1d * dz))
        nonguided[i] = (total + pole_phys) / k0**2
        guided[i] = 2.0 * (2j * np.pi * res) * np.exp(1j * k1d * dz) / k0**2
    return guided, nonguided


@dataclass(frozen=True)
class FiberCouplings:
    """Guided and non-guided Green's values per atom separation (units k0).

    ``guided`` has the exact plane-wave form amp * exp(i k_1d |dz|); the
    radiative values include the vacuum contribution for dz > 0 and the
    regularized self-term (Re G0 dropped, Im G0 = k0/6pi) at dz = 0.
    """

    separations: np.ndarray
    guided: np.ndarray
    radiative: np.ndarray
    k_1d: float
    gamma_1d: float
    gamma_prime: float
    j_prime: float
    version: str = "fiber-couplings-v1"

    def to_json(self) -> str:
        return json.dumps({
            "version": self.version,
            "k_1d": self.k_1d,
            "gamma_1d": self.gamma_1d,
            "gamma_prime": self.gamma_prime,
            "j_prime": self.j_prime,
            "separations": list(map(float, self.separations)),
            "guided": [[v.real, v.imag] for v in self.guided],
            "radiative": [[v.real, v.imag] for v in self.radiative],
        })

    @staticmethod
    def from_json(text: str) -> "FiberCouplings":
        doc = json.loads(text)
        if doc.get("version") != "fiber-couplings-v1":
            raise ValueError(f"unsupported cache version {doc.get('version')!r}")
        g = np.array([complex(a, b) for a, b in doc["guided"]])
        r = np.array([complex(a, b) for a, b in doc["radiative"]])
        return FiberCouplings(np.asarray(doc["separations"], dtype=float),
                              g, r, doc["k_1d"], doc["gamma_1d"],
                              doc["gamma_prime"], doc["j_prime"])


def fiber_couplings(z_separations, fiber: FiberSpec) -> FiberCouplings:
    """Evaluate guided and radiative Green's values at the given separations.

    Results are memoized per separation on the FiberSpec, so a uniform
    N-atom chain costs only N distinct quadratures across all later calls.
    """
    seps = np.unique(np.round(np.abs(np.asarray(z_separations, dtype=float)), 12))
    if seps.size and seps.max() > fiber.zmax:
        raise FiberError(f"separation {seps.max():.1f} exceeds the panel "
                         f"table range zmax={fiber.zmax}; enlarge FiberSpec.zmax")
    missing = [s for s in seps if s not in fiber._memo]
    if missing:
        guided, scat = _assemble(fiber, missing)
        vac = np.where(np.asarray(missing) > 0,
                       vacuum_greens_rho(np.asarray(missing), fiber.k0),
                       1j * fiber.k0 / (6.0 * np.pi))
        for s, g, sc, v in zip(missing, guided, scat, vac):
            fiber._memo[s] = (g, sc + v)
    guided = np.array([fiber._memo[s][0] for s in seps])
    radiative = np.array([fiber._memo[s][1] for s in seps])
    return FiberCouplings(seps, guided, radiative, fiber.k_1d, fiber.gamma_1d,
                          fiber.gamma_prime, fiber.j_prime)


def guided_hamiltonian(z_positions, fiber: FiberSpec) -> np.ndarray:
    """H_1d matrix: -(i Gamma_1d / 2) exp(i k_1d |z_i - z_j|), units Gamma0."""
    z = np.asarray(z_positions, dtype=float)
    dz = np.abs(z[:, None] - z[None, :])
    return -0.5j * fiber.gamma_1d * np.exp(1j * fiber.k_1d * dz)


def radiative_hamiltonian(z_positions, fiber: FiberSpec) -> np.ndarray:
    """H' matrix: -(3 pi / k0) G'(|z_i - z_j|) Gamma0, diag J' - i Gamma'/2."""
    z = np.asarray(z_positions, dtype=float)
    dz = np.abs(z[:, None] - z[None, :])
    cpl = fiber_couplings(dz.ravel(), fiber)
    lookup = dict(zip(cpl.separations, cpl.radiative))
    keys = np.round(dz, 12)
    vals = np.array([lookup[k] for k in keys.ravel()]).reshape(dz.shape)
    return -(3.0 * np.pi / fiber.k0) * fiber.gamma0 * vals
