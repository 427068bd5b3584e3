"""Home-MEG model parameters and published presets."""
import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import DegenerateChainError, ParameterDomainError

# Best-fit values for six real-world contact traces (time step 86.4 s).
PRESETS: dict[str, dict[str, float]] = {
    "mit-cell": {"p": 7.5e-5, "q": 3.3e-3, "alpha": 1.8e-1, "gamma": 7.8e-3},
    "mit-bt": {"p": 4.5e-5, "q": 1.5e-4, "alpha": 1.2e-3, "gamma": 8.6e-7},
    "infocom06": {"p": 3e-3, "q": 2.5e-2, "alpha": 7e-2, "gamma": 3e-4},
    "vehicular": {"p": 4.1e-4, "q": 7.9e-3, "alpha": 2.1e-2, "gamma": 7.7e-5},
    "ucsd": {"p": 1.1e-4, "q": 1.3e-2, "alpha": 10e-2, "gamma": 1e-5},
    "cambridge": {"p": 2.5e-4, "q": 8.3e-3, "alpha": 4.7e-2, "gamma": 4.6e-4},
}


class HomeMegParams(BaseModel):
    """Parameters of H(n, p, q, alpha, gamma).

    p is the Non-Home -> Home probability, q the Home -> Non-Home
    probability, alpha and gamma the contact probabilities in Home and
    Non-Home. p = q = 0 is a valid (reducible) chain; operations that need
    the stationary distribution reject it themselves.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of nodes")
    p: float = Field(..., ge=0.0, le=1.0, description="P(Non-Home -> Home)")
    q: float = Field(..., ge=0.0, le=1.0, description="P(Home -> Non-Home)")
    alpha: float = Field(..., ge=0.0, le=1.0, description="P(contact | Home)")
    gamma: float = Field(..., ge=0.0, le=1.0, description="P(contact | Non-Home)")

    @classmethod
    def create(cls, **values: Any) -> "HomeMegParams":
        """Build parameters, reporting domain violations as ParameterDomainError."""
        try:
            return cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"]) or "params"
            raise ParameterDomainError(field, first.get("input"), first["msg"]) from e

    @property
    def num_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def p_hat(self) -> float:
        """One-step connection probability from a Non-Home state."""
        return self.p * self.alpha + (1.0 - self.p) * self.gamma

    @property
    def q_hat(self) -> float:
        """One-step connection probability from a Home state."""
        return (1.0 - self.q) * self.alpha + self.q * self.gamma

    def with_n(self, n: int) -> "HomeMegParams":
        return self.model_copy(update={"n": n})


def preset_params(name: str, n: int = 2) -> HomeMegParams:
    """Parameters of a named best-fit preset (mit-cell, infocom06, ...)."""
    key = name.strip().lower()
    if key not in PRESETS:
        raise ParameterDomainError(
            "preset", name, f"unknown preset, choose one of {', '.join(sorted(PRESETS))}"
        )
    return HomeMegParams.create(n=n, **PRESETS[key])


def corollary_params(n: int, eps: float) -> HomeMegParams:
    """Sparse regime alpha = n^eps/n, gamma = 1/n^2, p = 1/n^(1+eps), q = 1/n."""
    if not 0.0 < eps < 1.0:
        raise ParameterDomainError("eps", eps, "must lie in (0, 1)")
    if n < 2:
        raise ParameterDomainError("n", n, "corollary regime needs n >= 2")
    return HomeMegParams.create(
        n=n,
        alpha=n ** eps / n,
        gamma=1.0 / n ** 2,
        p=1.0 / n ** (1.0 + eps),
        q=1.0 / n,
    )


def home_probability(params: HomeMegParams) -> float:
    """Stationary probability p/(p+q) of the Home location state."""
    total = params.p + params.q
    if total == 0.0:
        raise DegenerateChainError(params.p, params.q)
    return params.p / total


def derived_columns(params: HomeMegParams) -> dict[str, float]:
    """p_H, alpha/gamma and p+q as reported next to fitted parameters."""
    ratio = params.alpha / params.gamma if params.gamma > 0.0 else math.inf
    return {
        "p_H": home_probability(params),
        "alpha_over_gamma": ratio,
        "p_plus_q": params.p + params.q,
    }
