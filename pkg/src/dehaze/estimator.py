"""Scikit-learn style transformer around the dehazing pipeline.

The pipeline is stateless, so fit only validates hyperparameters and
transform maps frames to dehazed frames. Wrapping it as a transformer
makes parameter sweeps and composition with sklearn tooling (clone,
get_params, Pipeline) work out of the box.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .imageops import float_to_u8
from .pipeline import DEFAULT_STREAM_SIZE, DehazeParams, dehaze_frame


class Dehazer(BaseEstimator, TransformerMixin):
    """Dehaze uint8 RGB frames as an sklearn transformer.

    Parameters mirror DehazeParams. resize_to="auto" resolves to the
    stream default (640, 480) in video mode and native resolution in
    image mode; pass None to force native size or (width, height) to
    force a working size.

    transform accepts a single (H, W, 3) frame or a batch (N, H, W, 3).
    uint8 input gives uint8 output; float input in [0, 1] is quantized
    on the way in and returned as float64 in [0, 1].
    """

    def __init__(
        self,
        mode="video",
        patch_radius=7,
        top_fraction=0.001,
        alpha=0.8,
        omega=0.5,
        t_min=0.05,
        guided_radius=40,
        guided_eps=1e-3,
        gamma=1.2,
        white_balance=None,
        resize_to="auto",
    ):
        self.mode = mode
        self.patch_radius = patch_radius
        self.top_fraction = top_fraction
        self.alpha = alpha
        self.omega = omega
        self.t_min = t_min
        self.guided_radius = guided_radius
        self.guided_eps = guided_eps
        self.gamma = gamma
        self.white_balance = white_balance
        self.resize_to = resize_to

    def _resolved_params(self):
        if self.resize_to == "auto":
            resize = DEFAULT_STREAM_SIZE if self.mode == "video" else None
        else:
            resize = self.resize_to
        params = DehazeParams(
            mode=self.mode,
            patch_radius=self.patch_radius,
            top_fraction=self.top_fraction,
            alpha=self.alpha,
            omega=self.omega,
            t_min=self.t_min,
            guided_radius=self.guided_radius,
            guided_eps=self.guided_eps,
            gamma=self.gamma,
            white_balance=self.white_balance,
            resize_to=resize,
        )
        params.validate()
        return params

    def fit(self, X=None, y=None):
        """Validate hyperparameters; the pipeline learns nothing."""
        self._resolved_params()
        return self

    def transform(self, X):
        """Dehaze one frame or a batch of frames."""
        params = self._resolved_params()
        arr = np.asarray(X)
        if arr.ndim == 3:
            return self._transform_one(arr, params)
        if arr.ndim == 4:
            out = [self._transform_one(frame, params) for frame in arr]
            return np.stack(out)
        raise ValueError(
            f"expected (H, W, 3) or (N, H, W, 3) input, got shape {arr.shape}"
        )

    def _transform_one(self, frame, params):
        if frame.dtype == np.uint8:
            return dehaze_frame(frame, params)
        if np.issubdtype(frame.dtype, np.floating):
            out = dehaze_frame(float_to_u8(frame), params)
            return out.astype(np.float64) / 255.0
        raise ValueError(f"expected uint8 or float frames, got dtype {frame.dtype}")
