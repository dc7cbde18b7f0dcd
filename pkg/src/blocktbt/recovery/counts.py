"""How many numbers each description of ``T^{-1}`` needs."""

from dataclasses import dataclass

from ..structured import TOEPLITZ3D


@dataclass(frozen=True)
class InfoCount:
    full_T_entries: int
    naive_recovery_entries: dict
    minimal_entries: int

    def as_dict(self):
        return {
            "full_T_entries": self.full_T_entries,
            "naive_recovery_entries": {f"p{p}": v for p, v in self.naive_recovery_entries.items()},
            "minimal_entries": self.minimal_entries,
        }


def info_count(dims, class_tag):
    """Entry counts for ``T``, for ``(R Pi_p, PiHat_p R)`` and for ``(G12, K)``.

    ``T`` itself needs ``(2m1-1)(2m2-1)(2m3-1)`` numbers in the 3-D Toeplitz
    case and ``(2m1-1)(2m2-1) m3^2`` otherwise.  Recovering ``R`` from a
    single identity needs ``4 m^2 / m_p``; the pair ``G12``, ``K`` holds
    ``5 m1 m2 m3^2``.
    """
    m1, m2, m3 = dims
    m = m1 * m2 * m3
    if class_tag == TOEPLITZ3D:
        full = (2 * m1 - 1) * (2 * m2 - 1) * (2 * m3 - 1)
        ps = (1, 2, 3)
    else:
        full = (2 * m1 - 1) * (2 * m2 - 1) * m3 * m3
        ps = (1, 2)
    naive = {p: 4 * m * m // (m1, m2, m3)[p - 1] for p in ps}
    return InfoCount(full, naive, 5 * m1 * m2 * m3 * m3)
