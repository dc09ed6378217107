"""Parameters of a strictly stable Lévy process given by its Lévy density."""
import logging
import math
from dataclasses import dataclass, field

from ..core.errors import RejectAsymmetricCauchy, RejectRange, RejectSubordinator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StableParams:
    """
    The process (alpha, c_plus, c_minus) with every derived constant.

    The Lévy density is c_plus x^{-(alpha+1)} on x > 0 and
    c_minus |x|^{-(alpha+1)} on x < 0. Construction validates the triple, so
    an instance is always admissible.

    Attributes:
        alpha: stability index in (0, 2)
        c_plus: positive-jump intensity
        c_minus: negative-jump intensity
        rho: positivity parameter P(X_1 > 0)
        eta: 1 / alpha
        beta: skewness (c_plus - c_minus) / (c_plus + c_minus)
        tail_A: tail constant, P(X_1 > x) ~ (tail_A / alpha) x^{-alpha}
        gamma: dispersion, Re psi(theta) = -gamma |theta|^alpha
        zeta: beta tan(pi alpha / 2), the skew of the exponent (0 at alpha = 1)
    """

    alpha: float
    c_plus: float
    c_minus: float
    rho: float = field(init=False)
    eta: float = field(init=False)
    beta: float = field(init=False)
    tail_A: float = field(init=False)
    gamma: float = field(init=False)
    zeta: float = field(init=False)

    def __post_init__(self):
        alpha, c_plus, c_minus = self.alpha, self.c_plus, self.c_minus

        if not (math.isfinite(alpha) and 0.0 < alpha < 2.0):
            raise RejectRange(f"alpha must lie in (0, 2), got {alpha!r}")
        if not (math.isfinite(c_plus) and c_plus >= 0.0):
            raise RejectRange(f"c_plus must be finite and >= 0, got {c_plus!r}")
        if not (math.isfinite(c_minus) and c_minus >= 0.0):
            raise RejectRange(f"c_minus must be finite and >= 0, got {c_minus!r}")
        if c_plus + c_minus <= 0.0:
            raise RejectRange("c_plus + c_minus must be > 0")
        if alpha < 1.0 and c_minus == 0.0:
            raise RejectSubordinator(
                "alpha < 1 with c_minus = 0: X is a subordinator"
            )
        if alpha < 1.0 and c_plus == 0.0:
            raise RejectSubordinator(
                "alpha < 1 with c_plus = 0: -X is a subordinator, so |X| is one"
            )
        if alpha == 1.0 and c_plus != c_minus:
            raise RejectAsymmetricCauchy(
                "alpha = 1 requires c_plus = c_minus for strict stability"
            )

        total = c_plus + c_minus
        beta = (c_plus - c_minus) / total
        if alpha == 1.0:
            zeta = 0.0
            gamma = total * math.pi / 2.0
        else:
            zeta = beta * math.tan(math.pi * alpha / 2.0)
            gamma = -math.gamma(-alpha) * math.cos(math.pi * alpha / 2.0) * total
        rho = 0.5 + math.atan(zeta) / (math.pi * alpha)

        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "eta", 1.0 / alpha)
        object.__setattr__(self, "tail_A", float(c_plus))

    # =========================================================================
    # REGIME HELPERS
    # =========================================================================

    @property
    def has_positive_jumps(self) -> bool:
        return self.c_plus > 0.0

    @property
    def is_symmetric(self) -> bool:
        return self.c_plus == self.c_minus

    @property
    def is_spectrally_negative(self) -> bool:
        return self.c_plus == 0.0

    @property
    def alpha_rho(self) -> float:
        return self.alpha * self.rho

    def reflected(self) -> "StableParams":
        """Parameters of -X: the jump intensities swap sides."""
        return StableParams(self.alpha, self.c_minus, self.c_plus)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "c_plus": self.c_plus,
            "c_minus": self.c_minus,
            "rho": self.rho,
            "eta": self.eta,
            "beta": self.beta,
            "tail_A": self.tail_A,
        }


def validate_params(alpha: float, c_plus: float, c_minus: float) -> StableParams:
    """
    Validate raw user input and derive rho, eta, beta and A.

    Raises:
        RejectRange: alpha outside (0, 2), negative or all-zero intensities
        RejectSubordinator: alpha < 1 with one-sided jumps
        RejectAsymmetricCauchy: alpha = 1 with c_plus != c_minus
    """
    params = StableParams(float(alpha), float(c_plus), float(c_minus))
    logger.debug(
        "validated alpha=%g c_plus=%g c_minus=%g -> rho=%.12g",
        params.alpha, params.c_plus, params.c_minus, params.rho,
    )
    return params
