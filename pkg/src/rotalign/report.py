import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class Strategy(enum.Enum):
    PLANAR_CLOSED_FORM = "planar_closed_form"
    NEWTON_THEN_SPECTRAL = "newton_then_spectral"
    SVD_KABSCH_UMEYAMA = "svd_kabsch_umeyama"


@dataclass(frozen=True)
class SolveReport:
    rotation: np.ndarray
    achieved_trace: float
    strategy: Strategy
    newton_iterations: int = 0
    fell_back: bool = False
    # sum_i w_i |U q_i - p_i|^2; None when solving a bare matrix
    residual: Optional[float] = None
