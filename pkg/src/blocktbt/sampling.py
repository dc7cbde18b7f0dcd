"""Seeded generic evaluation points.

Points are drawn from the annulus ``0.1 <= |z| <= 0.6`` and rejected when
they come within ``1e-3`` of a resolvent pole (``+-i/2``) or of the pole of
the Moebius map (``1``).  Pairs ``(lam, mu)`` are additionally rejected when
``|lam_p - mu_p| < 1e-3`` for either coordinate.
"""

import logging

from .errors import ESingular, GSingular
from .rng import XorShift64Star

log = logging.getLogger(__name__)

R_MIN, R_MAX = 0.1, 0.6
SEPARATION = 1e-3
FORBIDDEN = (0.5j, -0.5j, 1.0)
MAX_ATTEMPTS = 8


class PointStream:
    def __init__(self, seed):
        self.seed = seed
        self._rng = XorShift64Star(seed)

    def point(self):
        while True:
            z = self._rng.annulus_point(R_MIN, R_MAX)
            if all(abs(z - f) >= SEPARATION for f in FORBIDDEN):
                return z

    def pair(self):
        """Two points, e.g. ``lam = (lam1, lam2)``."""
        return (self.point(), self.point())

    def lam_mu(self):
        while True:
            lam, mu = self.pair(), self.pair()
            if all(abs(a - b) >= SEPARATION for a, b in zip(lam, mu)):
                return lam, mu

    def x_y(self):
        return self.pair(), self.pair()


def lam_mu_pairs(seed, count):
    stream = PointStream(seed)
    return [stream.lam_mu() for _ in range(count)]


def with_retry(fn, stream, draw="lam_mu", attempts=MAX_ATTEMPTS):
    """Call ``fn(*getattr(stream, draw)())`` until ``G``/``E`` are invertible at the point.

    Returns ``(result, point)``; re-raises the last singularity after
    ``attempts`` failures.
    """
    last = None
    for attempt in range(attempts):
        point = getattr(stream, draw)()
        try:
            return fn(*point), point
        except (GSingular, ESingular) as exc:
            log.info("singular at sample point %s (attempt %d): %s", point, attempt + 1, exc)
            last = exc
    raise last
