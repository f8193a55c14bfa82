"""Level-1 two-dimensional dual-tree complex wavelet transform.

One decomposition level, six oriented complex subbands at half resolution,
computed from two parallel filter trees whose outputs are offset by one
input sample (a half-sample offset after decimation). The input is filtered
at full resolution with odd-length biorthogonal filters under symmetric
extension; the four polyphase components of each directional plane are then
combined into the two complex subbands of an orientation pair.

Subband orientation angles follow the direction of intensity variation
(the frequency vector), measured in degrees from the column axis toward
increasing row index. A grating ``cos(2*pi*f*(x*cos(t) + y*sin(t)))`` with
``t = 75 deg`` therefore lands in the +75 subband.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DataError
from .video_io import LumaFrame

# i = 1..6 of the subband stack, frequency-direction convention
ORIENTATION_DEGREES = (15, 45, 75, -75, -45, -15)

SQRT2 = np.sqrt(2.0)

# Default level-1 bank: near-symmetric biorthogonal (5,7)-tap pair.
# Lowpass (-1, 5, 12, 5, -1)/20, highpass from the 7-tap dual lowpass
# (-3, -15, 73, 170, 73, -15, -3)/280 by alternate-sign modulation.
_NEAR_SYM_5_7_LO = np.array([-1.0, 5.0, 12.0, 5.0, -1.0]) / 20.0
_NEAR_SYM_5_7_HI = np.array([-3.0, 15.0, 73.0, -170.0, 73.0, 15.0, -3.0]) / 280.0

# Antonini 9/7 pair, the classic alternative for level 1.
_ANTONINI_LO = np.array([
    0.0267487574108101, -0.0168641184428747, -0.0782232665289905,
    0.2668641184428729, 0.6029490182363593, 0.2668641184428769,
    -0.0782232665289884, -0.0168641184428753, 0.0267487574108096,
])
_ANTONINI_HI = np.array([
    0.0456358815571251, -0.0287717631142493, -0.2956358815571280,
    0.5575435262285023, -0.2956358815571233, -0.0287717631142531,
    0.0456358815571261,
])

BUILTIN_BANKS = ("near-sym-5-7", "antonini-9-7")


@dataclass(frozen=True)
class _Filter:
    """Tap list plus the index treated as t=0 when filtering."""

    taps: np.ndarray
    anchor: int


def _group_delay(taps: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Group delay of a causal FIR tap list at frequencies ``omega``."""
    n = np.arange(taps.size)
    h = taps @ np.exp(-1j * np.outer(n, omega))
    g = (n * taps) @ np.exp(-1j * np.outer(n, omega))
    return np.real(g / h)


@dataclass(frozen=True)
class FilterBank:
    """Two analysis filter pairs, one per tree, for the level-1 transform.

    Tree b must run one input sample ahead of tree a so the decimated
    outputs interleave at half-sample offsets; the constructor verifies this
    numerically on the group-delay difference of both filter pairs.
    """

    lowpass_a: _Filter
    highpass_a: _Filter
    lowpass_b: _Filter
    highpass_b: _Filter
    name: str = "custom"

    def __post_init__(self) -> None:
        for f in (self.lowpass_a, self.highpass_a,
                  self.lowpass_b, self.highpass_b):
            if f.taps.size == 0:
                raise DataError(f"filter bank {self.name!r}: empty tap list")
            if not np.all(np.isfinite(f.taps)):
                raise DataError(f"filter bank {self.name!r}: non-finite taps")
        for off, name in ((self.delay_offset("lowpass"), "lowpass"),
                          (self.delay_offset("highpass"), "highpass")):
            if abs(abs(off) - 1.0) > 1e-6:
                raise DataError(
                    f"filter bank {self.name!r}: {name} trees are offset by "
                    f"{off:.8f} samples, expected one sample (half a sample "
                    f"at the decimated rate)"
                )

    def delay_offset(self, which: str) -> float:
        """Worst-case tree-b minus tree-a group delay over the passband."""
        fa = self.lowpass_a if which == "lowpass" else self.highpass_a
        fb = self.lowpass_b if which == "lowpass" else self.highpass_b
        omega = np.linspace(0.2 * np.pi, 0.8 * np.pi, 64)
        da = _group_delay(fa.taps, omega) - fa.anchor
        db = _group_delay(fb.taps, omega) - fb.anchor
        diff = db - da
        return float(diff[np.argmax(np.abs(np.abs(diff) - 1.0))])

    @classmethod
    def from_primary_pair(cls, lowpass: np.ndarray, highpass: np.ndarray,
                          name: str = "custom") -> "FilterBank":
        """Build both trees from one odd-length lowpass/highpass pair.

        Tree a anchors each filter at its center tap; tree b reuses the same
        taps anchored one sample later, which advances its output by one
        input sample.
        """
        lo = np.asarray(lowpass, dtype=np.float64)
        hi = np.asarray(highpass, dtype=np.float64)
        a_lo = (lo.size - 1) // 2
        a_hi = (hi.size - 1) // 2
        return cls(
            lowpass_a=_Filter(lo, a_lo),
            highpass_a=_Filter(hi, a_hi),
            lowpass_b=_Filter(lo, a_lo + 1),
            highpass_b=_Filter(hi, a_hi + 1),
            name=name,
        )


def default_bank() -> FilterBank:
    return builtin_bank("near-sym-5-7")


def builtin_bank(name: str) -> FilterBank:
    if name == "near-sym-5-7":
        return FilterBank.from_primary_pair(
            _NEAR_SYM_5_7_LO, _NEAR_SYM_5_7_HI, name=name)
    if name == "antonini-9-7":
        return FilterBank.from_primary_pair(
            _ANTONINI_LO, _ANTONINI_HI, name=name)
    raise DataError(f"unknown builtin filter bank {name!r}; "
                    f"available: {BUILTIN_BANKS}")


def load_filter_bank(path: str) -> FilterBank:
    """Read a bank from a plain-text tap-list file.

    Sections are introduced by ``[tree_a.lowpass]``, ``[tree_a.highpass]``,
    ``[tree_b.lowpass]``, ``[tree_b.highpass]``; each section holds one
    coefficient per line, optionally preceded by ``anchor: <int>``. Tree-b
    sections may be omitted, in which case tree b is derived from tree a by
    a one-sample advance. ``#`` starts a comment.
    """
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = sections.setdefault(line[1:-1].strip(), [])
            elif current is None:
                raise DataError(f"{path}: coefficient before any section header")
            else:
                current.append(line)

    def parse(name: str) -> _Filter | None:
        lines = sections.get(name)
        if lines is None:
            return None
        anchor = None
        taps = []
        for line in lines:
            if line.startswith("anchor:"):
                anchor = int(line.split(":", 1)[1])
            else:
                try:
                    taps.append(float(line))
                except ValueError:
                    raise DataError(f"{path}: bad coefficient {line!r} in [{name}]")
        arr = np.array(taps, dtype=np.float64)
        if arr.size == 0:
            raise DataError(f"{path}: section [{name}] has no coefficients")
        return _Filter(arr, (arr.size - 1) // 2 if anchor is None else anchor)

    lo_a = parse("tree_a.lowpass")
    hi_a = parse("tree_a.highpass")
    if lo_a is None or hi_a is None:
        raise DataError(f"{path}: [tree_a.lowpass] and [tree_a.highpass] required")
    lo_b = parse("tree_b.lowpass")
    hi_b = parse("tree_b.highpass")
    if lo_b is None:
        lo_b = _Filter(lo_a.taps, lo_a.anchor + 1)
    if hi_b is None:
        hi_b = _Filter(hi_a.taps, hi_a.anchor + 1)
    return FilterBank(lo_a, hi_a, lo_b, hi_b, name=path)


@dataclass(frozen=True)
class SubbandSet:
    """Six oriented complex subbands plus a real lowpass, all half resolution.

    ``coeffs`` has shape (6, ceil(H/2), ceil(W/2)) ordered per
    ORIENTATION_DEGREES; ``pixel_shape`` is the (H, W) of the source frame.
    """

    coeffs: np.ndarray
    lowpass: np.ndarray
    pixel_shape: tuple[int, int]

    @property
    def grid_shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1:]


def _conv_axis(x: np.ndarray, f: _Filter, axis: int) -> np.ndarray:
    """Anchored convolution along one axis under symmetric extension.

    Computes ``y[n] = sum_k taps[k] * x_ext[n + anchor - k]`` so the output
    has the same length as the input and carries the filter's declared
    delay.
    """
    taps = f.taps
    left = taps.size - 1 - f.anchor
    right = f.anchor
    if left < 0 or right < 0:
        raise DataError(f"filter anchor {f.anchor} outside taps of "
                        f"length {taps.size}")
    if x.shape[axis] < taps.size:
        raise DataError(
            f"input extent {x.shape[axis]} along axis {axis} shorter than "
            f"{taps.size}-tap filter"
        )
    pad = [(0, 0)] * x.ndim
    pad[axis] = (left, right)
    xe = np.pad(x, pad, mode="symmetric")
    win = sliding_window_view(xe, taps.size, axis=axis)
    return win @ taps[::-1]


def forward_level1(frame: LumaFrame | np.ndarray, bank: FilterBank) -> SubbandSet:
    """Level-1 dual-tree decomposition of one luma frame.

    Frames with an odd dimension are extended by duplicating the last
    row/column so every subband comes out at ceil(H/2) x ceil(W/2).
    """
    if isinstance(frame, LumaFrame):
        x = frame.samples.astype(np.float64)
    else:
        x = np.asarray(frame, dtype=np.float64)
    pixel_shape = x.shape
    if x.shape[0] % 2:
        x = np.vstack([x, x[-1:]])
    if x.shape[1] % 2:
        x = np.hstack([x, x[:, -1:]])

    # Vertical (axis 0) passes for each tree, then horizontal (axis 1).
    col = {
        ("lo", "a"): _conv_axis(x, bank.lowpass_a, 0),
        ("lo", "b"): _conv_axis(x, bank.lowpass_b, 0),
        ("hi", "a"): _conv_axis(x, bank.highpass_a, 0),
        ("hi", "b"): _conv_axis(x, bank.highpass_b, 0),
    }

    def plane(vkind: str, vtree: str, hkind: str, htree: str) -> np.ndarray:
        hf = {("lo", "a"): bank.lowpass_a, ("lo", "b"): bank.lowpass_b,
              ("hi", "a"): bank.highpass_a, ("hi", "b"): bank.highpass_b}
        full = _conv_axis(col[(vkind, vtree)], hf[(hkind, htree)], 1)
        return full[0::2, 0::2]

    def oriented_pair(vkind: str, hkind: str) -> tuple[np.ndarray, np.ndarray]:
        # Polyphase quads: (row tree, col tree) = (a,a), (a,b), (b,a), (b,b)
        u_aa = plane(vkind, "a", hkind, "a")
        u_ab = plane(vkind, "a", hkind, "b")
        u_ba = plane(vkind, "b", hkind, "a")
        u_bb = plane(vkind, "b", hkind, "b")
        p = (u_aa + 1j * u_ab) / SQRT2
        q = (u_bb - 1j * u_ba) / SQRT2
        return p - q, p + q

    # Variation mostly horizontal -> +-15, diagonal -> +-45, vertical -> +-75.
    b_m15, b_p15 = oriented_pair("lo", "hi")
    b_m45, b_p45 = oriented_pair("hi", "hi")
    b_m75, b_p75 = oriented_pair("hi", "lo")
    coeffs = np.stack([b_p15, b_p45, b_p75, b_m75, b_m45, b_m15])

    lowpass = plane("lo", "a", "lo", "a")
    return SubbandSet(coeffs=coeffs, lowpass=lowpass, pixel_shape=pixel_shape)


def magnitudes(sb: SubbandSet) -> np.ndarray:
    """Element-wise modulus of each subband: shape (6, Hh, Wh)."""
    return np.abs(sb.coeffs)


def upsample_replicate(grid: np.ndarray, target: tuple[int, int]) -> np.ndarray:
    """Bring a half-resolution grid to pixel resolution by 2x2 replication.

    Odd target dimensions drop the final replicated row/column.
    """
    h, w = target
    gh, gw = grid.shape
    if gh != -(-h // 2) or gw != -(-w // 2):
        raise DataError(
            f"grid shape {grid.shape} does not match half-resolution of "
            f"target {target}"
        )
    up = np.repeat(np.repeat(grid, 2, axis=0), 2, axis=1)
    return up[:h, :w]
