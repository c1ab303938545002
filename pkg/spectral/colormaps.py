# Python imports
from dataclasses import dataclass
from typing import Tuple

# Third party imports
import numpy as np

# Local imports
from .exceptions import ColormapError

RGB = Tuple[float, float, float]


def quantize(channel) -> np.ndarray:
    """round(255 * c), half away from zero, for c in [0, 1]."""
    return np.floor(np.asarray(channel, dtype=np.float64) * 255.0 + 0.5).astype(np.uint8)


@dataclass(frozen=True)
class LinearColormap:
    start_color: RGB
    end_color: RGB
    domain_lo: float
    domain_hi: float

    def __post_init__(self):
        if not self.domain_hi > self.domain_lo:
            raise ColormapError(f"domain_hi ({self.domain_hi}) must exceed domain_lo ({self.domain_lo})")
        for color in (self.start_color, self.end_color):
            if len(color) != 3 or any(not 0.0 <= c <= 1.0 for c in color):
                raise ColormapError(f"Colors are RGB triples in [0, 1], got {color}")

    def colors(self, values) -> np.ndarray:
        """Float RGB in [0, 1] with a trailing channel axis; values outside the domain clamp."""
        values = np.asarray(values, dtype=np.float64)
        t = np.clip((values - self.domain_lo) / (self.domain_hi - self.domain_lo), 0.0, 1.0)
        channels = [s + t * (e - s) for s, e in zip(self.start_color, self.end_color)]
        return np.stack(channels, axis=-1)

    def apply(self, values) -> np.ndarray:
        return quantize(self.colors(values))


@dataclass(frozen=True)
class SegmentedColormap:
    """Piecewise-linear map made of adjoining ``LinearColormap`` segments."""

    segments: Tuple[LinearColormap, ...]

    def __post_init__(self):
        if not self.segments:
            raise ColormapError('A segmented colormap needs at least one segment')
        for left, right in zip(self.segments, self.segments[1:]):
            if left.domain_hi != right.domain_lo:
                raise ColormapError(f"Segments must adjoin: {left.domain_hi} != {right.domain_lo}")

    @classmethod
    def from_stops(cls, stops):
        """``stops`` is an ordered sequence of (value, rgb)."""
        return cls(tuple(
            LinearColormap(start_color=c0, end_color=c1, domain_lo=v0, domain_hi=v1)
            for (v0, c0), (v1, c1) in zip(stops, stops[1:])
        ))

    @property
    def domain_lo(self):
        return self.segments[0].domain_lo

    @property
    def domain_hi(self):
        return self.segments[-1].domain_hi

    def colors(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        breaks = np.array([segment.domain_hi for segment in self.segments[:-1]])
        which = np.searchsorted(breaks, values, side='right')

        out = np.zeros(values.shape + (3,), dtype=np.float64)
        for index, segment in enumerate(self.segments):
            mask = which == index
            if mask.any():
                out[mask] = segment.colors(values[mask])
        return out

    def apply(self, values) -> np.ndarray:
        return quantize(self.colors(values))


WHITE = (1.0, 1.0, 1.0)
RED = (1.0, 0.0, 0.0)
YELLOW = (1.0, 1.0, 0.0)
GREEN = (0.0, 1.0, 0.0)
BLUE = (0.0, 0.0, 1.0)

NDVI_COLORMAP = SegmentedColormap.from_stops([(-1.0, RED), (0.0, YELLOW), (1.0, GREEN)])
NDWI_COLORMAP = LinearColormap(start_color=WHITE, end_color=BLUE, domain_lo=-0.8, domain_hi=0.8)
NDMI_COLORMAP = LinearColormap(start_color=RED, end_color=BLUE, domain_lo=-1.0, domain_hi=1.0)


def apply_colormap(index, colormap) -> np.ndarray:
    """Quantized (height, width, 3) uint8 pixels for an index grid."""
    return colormap.apply(index)
