"""The seven descriptor families and their assembly into feature vectors.

Families and their dimensions, in canonical concatenation order:

    raw 3072, hist 48, dct 192, hog 324, lbp 16, glcm 16, wavelet 5

Presets: baseline = raw+hist+dct (3312), advanced = hog+lbp+glcm+wavelet
(361), mixed = all seven (3673).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ImageRecord
from .transforms import dct2, dwt2

CANONICAL_FAMILIES = ("raw", "hist", "dct", "hog", "lbp", "glcm", "wavelet")
FAMILY_DIMS = {
    "raw": 3072,
    "hist": 48,
    "dct": 192,
    "hog": 324,
    "lbp": 16,
    "glcm": 16,
    "wavelet": 5,
}
PRESETS = {
    "baseline": ("raw", "hist", "dct"),
    "advanced": ("hog", "lbp", "glcm", "wavelet"),
    "mixed": CANONICAL_FAMILIES,
}

_GRAY_FAMILIES = frozenset({"hog", "lbp", "glcm", "wavelet"})


@dataclass(frozen=True)
class FeatureSpec:
    """An ordered subset of descriptor families."""

    families: tuple[str, ...]

    @classmethod
    def from_tag(cls, tag: str) -> "FeatureSpec":
        if tag in PRESETS:
            return cls(families=PRESETS[tag])
        requested = tag.split("+")
        for fam in requested:
            if fam not in FAMILY_DIMS:
                raise ValueError(f"unknown feature family {fam!r}")
        # Canonical order regardless of how the tag lists them.
        families = tuple(f for f in CANONICAL_FAMILIES if f in requested)
        return cls(families=families)

    @property
    def tag(self) -> str:
        for name, fams in PRESETS.items():
            if self.families == fams:
                return name
        return "+".join(self.families)

    @property
    def dim(self) -> int:
        return sum(FAMILY_DIMS[f] for f in self.families)


def to_grayscale(image: ImageRecord) -> np.ndarray:
    """BT.601 luma: 0.299 R + 0.587 G + 0.114 B, kept as reals in [0, 255]."""
    px = image.pixels.astype(np.float64)
    return 0.299 * px[:, :, 0] + 0.587 * px[:, :, 1] + 0.114 * px[:, :, 2]


def extract_raw(image: ImageRecord) -> np.ndarray:
    """Pixel intensities / 255, row-major, channel-interleaved."""
    return image.pixels.astype(np.float64).ravel() / 255.0


def extract_hist(image: ImageRecord) -> np.ndarray:
    """Per-channel 16-bin histograms, each channel l1-normalized."""
    out = np.empty(48)
    for ch in range(3):
        bins = np.bincount(image.pixels[:, :, ch].ravel() // 16, minlength=16)
        out[16 * ch : 16 * (ch + 1)] = bins / 1024.0
    return out


def extract_dct(image: ImageRecord) -> np.ndarray:
    """Top-left 8x8 block of each channel's orthonormal DCT (channel / 255)."""
    out = np.empty(192)
    for ch in range(3):
        coeffs = dct2(image.pixels[:, :, ch].astype(np.float64) / 255.0)
        out[64 * ch : 64 * (ch + 1)] = coeffs[:8, :8].ravel()
    return out


_N_ORIENT = 9
_CELL = 8
_EPS_HOG = 1e-12


def _hog_gradients(gray: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central differences with edge replication."""
    gx = np.empty_like(gray)
    gx[:, 1:-1] = gray[:, 2:] - gray[:, :-2]
    gx[:, 0] = gray[:, 1] - gray[:, 0]
    gx[:, -1] = gray[:, -1] - gray[:, -2]
    gy = np.empty_like(gray)
    gy[1:-1, :] = gray[2:, :] - gray[:-2, :]
    gy[0, :] = gray[1, :] - gray[0, :]
    gy[-1, :] = gray[-1, :] - gray[-2, :]
    return gx, gy


def extract_hog(gray: np.ndarray) -> np.ndarray:
    """HOG: 9 unsigned orientations, 8x8 cells, 2x2-cell blocks, L2-Hys.

    A horizontal gradient maps to orientation 90 degrees.  Votes are split
    between the two nearest bin centers (10, 30, ..., 170 degrees) with
    circular wraparound over 180.
    """
    gx, gy = _hog_gradients(gray)
    mag = np.hypot(gx, gy)
    theta = np.degrees(np.arctan2(gx, gy)) % 180.0

    t = theta / 20.0 - 0.5
    k0f = np.floor(t)
    w_hi = t - k0f
    k0 = k0f.astype(np.int64) % _N_ORIENT
    k1 = (k0 + 1) % _N_ORIENT

    rows, cols = np.indices(gray.shape)
    cell = (rows // _CELL) * 4 + cols // _CELL
    n_slots = 16 * _N_ORIENT
    hist = np.bincount(
        (cell * _N_ORIENT + k0).ravel(),
        weights=(mag * (1.0 - w_hi)).ravel(),
        minlength=n_slots,
    )
    hist += np.bincount(
        (cell * _N_ORIENT + k1).ravel(),
        weights=(mag * w_hi).ravel(),
        minlength=n_slots,
    )
    cells = hist.reshape(4, 4, _N_ORIENT)

    out = np.empty(324)
    pos = 0
    for by in range(3):
        for bx in range(3):
            v = cells[by : by + 2, bx : bx + 2].ravel()
            v = v / np.sqrt(np.sum(v * v) + _EPS_HOG)
            v = np.minimum(v, 0.2)
            v = v / np.sqrt(np.sum(v * v) + _EPS_HOG)
            out[pos : pos + 36] = v
            pos += 36
    return out


# Neighbor order p = 0..7 for the LBP code, counter-clockwise from east.
_LBP_OFFSETS = ((0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1))


def lbp_codes(gray: np.ndarray) -> np.ndarray:
    """8-neighbor LBP codes for the 30x30 interior."""
    center = gray[1:-1, 1:-1]
    codes = np.zeros(center.shape, dtype=np.int64)
    for p, (dr, dc) in enumerate(_LBP_OFFSETS):
        neighbor = gray[1 + dr : 31 + dr, 1 + dc : 31 + dc]
        codes += (neighbor - center >= 0).astype(np.int64) << p
    return codes


def _uniform_table() -> np.ndarray:
    table = np.empty(256, dtype=np.int64)
    for code in range(256):
        bits = [(code >> p) & 1 for p in range(8)]
        transitions = sum(bits[p] != bits[(p + 1) % 8] for p in range(8))
        table[code] = sum(bits) if transitions <= 2 else 9
    return table


_UNIFORM = _uniform_table()


def extract_lbp(gray: np.ndarray) -> np.ndarray:
    """Uniform-LBP histogram over 16 bins, density-normalized.

    Uniform codes only span 0..9, so bins 10..15 are structurally zero; they
    are kept to preserve the 16-bin layout.
    """
    mapped = _UNIFORM[lbp_codes(gray)]
    return np.bincount(mapped.ravel(), minlength=16) / 900.0


_GLCM_OFFSETS = ((0, 1), (-1, 1), (-1, 0), (-1, -1))  # 0, 45, 90, 135 degrees
_GLCM_LEVELS = 32


def extract_glcm(gray: np.ndarray) -> np.ndarray:
    """Haralick stats (contrast, homogeneity, energy, correlation) x 4 angles.

    Symmetric, normalized co-occurrence at distance 1; 32 gray levels.
    Correlation is defined as 1 when either marginal variance vanishes.
    """
    q = np.minimum(_GLCM_LEVELS - 1, np.floor(gray / 8.0)).astype(np.int64)
    n = _GLCM_LEVELS
    levels = np.arange(n, dtype=np.float64)
    diff2 = (levels[:, None] - levels[None, :]) ** 2
    out = np.empty(16)
    for a, (dr, dc) in enumerate(_GLCM_OFFSETS):
        r0, r1 = max(0, -dr), q.shape[0] - max(0, dr)
        c0, c1 = max(0, -dc), q.shape[1] - max(0, dc)
        src = q[r0:r1, c0:c1]
        dst = q[r0 + dr : r1 + dr, c0 + dc : c1 + dc]
        counts = np.bincount((src * n + dst).ravel(), minlength=n * n)
        counts = counts + np.bincount((dst * n + src).ravel(), minlength=n * n)
        p = counts.reshape(n, n) / counts.sum()

        contrast = float(np.sum(diff2 * p))
        homogeneity = float(np.sum(p / (1.0 + diff2)))
        energy = float(np.sqrt(np.sum(p * p)))
        pi = p.sum(axis=1)
        pj = p.sum(axis=0)
        mu_i = float(levels @ pi)
        mu_j = float(levels @ pj)
        sig_i = float(np.sqrt((levels - mu_i) ** 2 @ pi))
        sig_j = float(np.sqrt((levels - mu_j) ** 2 @ pj))
        if sig_i * sig_j == 0.0:
            correlation = 1.0
        else:
            correlation = float(
                np.sum((levels[:, None] - mu_i) * (levels[None, :] - mu_j) * p)
                / (sig_i * sig_j)
            )
        out[4 * a : 4 * a + 4] = (contrast, homogeneity, energy, correlation)
    return out


def extract_wavelet(gray: np.ndarray) -> np.ndarray:
    """Mean energies of the db2 detail bands plus mean/std of the A band."""
    a, lh, hl, hh = dwt2(gray)
    energy = lambda band: float(np.mean(band * band))
    return np.array([energy(lh), energy(hl), energy(hh), float(a.mean()), float(a.std())])


def assemble_features(image: ImageRecord, spec: FeatureSpec) -> np.ndarray:
    """Concatenate the active family outputs in canonical order."""
    gray = to_grayscale(image) if _GRAY_FAMILIES & set(spec.families) else None
    parts = []
    for fam in spec.families:
        if fam == "raw":
            parts.append(extract_raw(image))
        elif fam == "hist":
            parts.append(extract_hist(image))
        elif fam == "dct":
            parts.append(extract_dct(image))
        elif fam == "hog":
            parts.append(extract_hog(gray))
        elif fam == "lbp":
            parts.append(extract_lbp(gray))
        elif fam == "glcm":
            parts.append(extract_glcm(gray))
        elif fam == "wavelet":
            parts.append(extract_wavelet(gray))
    return np.concatenate(parts)


def extract_matrix(records, spec: FeatureSpec) -> np.ndarray:
    """Feature matrix with one row per record, rows in input order."""
    out = np.empty((len(records), spec.dim))
    for i, rec in enumerate(records):
        out[i] = assemble_features(rec, spec)
    return out
