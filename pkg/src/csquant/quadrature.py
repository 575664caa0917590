"""Thin wrapper over QUADPACK that turns non-convergence into an exception."""
import warnings

from scipy import integrate

from .errors import QuadratureError

# Adaptive quadrature target used for Fourier/cosine coefficients.
COEFF_TOL = 1e-10


def adaptive_quad(func, a, b, tol=COEFF_TOL, limit=200, **kwargs):
    """Integrate ``func`` over [a, b] to absolute accuracy ``tol``.

    Extra keyword arguments (``weight``, ``wvar``, ``points``, ``args``) are
    forwarded to :func:`scipy.integrate.quad`.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(func, a, b, epsabs=tol, epsrel=0.0, limit=limit, **kwargs)
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                value, err = integrate.quad(func, a, b, epsabs=tol, epsrel=0.0, limit=limit, **kwargs)
            if err > tol:
                raise QuadratureError(f"quadrature did not converge: {exc}", achieved=err) from None
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}", achieved=err)
    return value
