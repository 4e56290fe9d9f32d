from pydantic import BaseModel, ConfigDict
from typing import Optional
import numpy as np


class PsiProfile(BaseModel):
    """Spectral data of a pair (rho, sigma) that every psi evaluation reads.

    Index pairs (i, j) with r_i > 0, s_j > 0 and W_ij > 0 are flattened into
    the ``log_r``, ``log_s`` and ``log_w`` vectors so that
    psi(alpha) = logsumexp(alpha * log_r + (1 - alpha) * log_s + log_w).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    r: np.ndarray
    s: np.ndarray
    W: np.ndarray
    log_r: np.ndarray
    log_s: np.ndarray
    log_w: np.ndarray

    identical: bool
    orthogonal: bool
    supp_rho_le_sigma: bool
    supp_sigma_le_rho: bool
    psi_affine: bool
    kappa: Optional[float] = None
    eta: Optional[float] = None

    @property
    def log_ratio(self) -> np.ndarray:
        return self.log_r - self.log_s
