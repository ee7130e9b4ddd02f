from dataclasses import dataclass, field

import numpy as np


@dataclass(eq=False)
class ChannelEstimate:
    """Output of an estimator.

    ``H_hat`` is the cascaded estimate; component estimates are filled in
    by the schemes that produce them. ``slots`` counts the pilot slots the
    estimator consumed for this user.
    """

    scheme: str
    slots: int
    H_hat: np.ndarray = None
    h_d_hat: np.ndarray = None
    G_hat: np.ndarray = None
    h_r_hat: np.ndarray = None
    converged: bool = True
    info: dict = field(default_factory=dict)
