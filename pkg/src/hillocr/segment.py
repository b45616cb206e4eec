"""Glyph segmentation and 5x7 feature extraction.

The chain runs threshold -> Sobel edges -> 2x2 dilation -> hole filling ->
8-connected labeling -> bounding boxes -> reading order, then crops each
glyph tight against the binarized ink and samples it onto a 5x7 grid.
Foreground is always ``1`` = ink once :func:`binarize` has run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .raster import GrayImage, write_image

FEATURE_COLS = 5
FEATURE_ROWS = 7
CELL = 10
NORM_WIDTH = FEATURE_COLS * CELL
NORM_HEIGHT = FEATURE_ROWS * CELL
DEFAULT_TAU = 0.5


class EmptyGlyph(ValueError):
    pass


class BinaryImage:
    """Row-major {0, 1} raster; ``bits`` has shape ``(height, width)``."""

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.ndim != 2:
            raise ValueError(f"binary image must be 2-D, got shape {arr.shape}")
        self.bits = (arr != 0).astype(np.uint8)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"BinaryImage({self.width}x{self.height}, ink={self.count()})"

    def to_gray(self) -> GrayImage:
        return GrayImage(self.bits * 255)


@dataclass(frozen=True)
class GlyphBox:
    x: int
    y: int
    w: int
    h: int
    label: int
    index: int = -1

    @property
    def center_y(self) -> float:
        return self.y + self.h / 2

    def area(self) -> int:
        return self.w * self.h


def otsu_threshold(img: GrayImage) -> int:
    """Level ``t`` maximizing between-class variance of ``{<= t}`` vs ``{> t}``.

    Scores are compared exactly in integers, so equal variances tie and the
    lowest level wins. A constant image returns its own value.
    """
    hist = np.bincount(img.pixels.ravel(), minlength=256).tolist()
    total = sum(hist)
    total_sum = sum(i * c for i, c in enumerate(hist))
    nonzero = [i for i, c in enumerate(hist) if c]
    if len(nonzero) == 1:
        return nonzero[0]
    # variance_b(t) * total^2 = (total*s0 - n0*S)^2 / (n0*n1); keep it as a fraction.
    best_t, best_num, best_den = 0, -1, 1
    n0 = s0 = 0
    for t in range(256):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (total * s0 - n0 * total_sum) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def binarize(img: GrayImage, level: int) -> BinaryImage:
    """Split at ``level`` and mark the minority class as ink.

    Pixels ``<= level`` are the dark class. Dark is ink unless it is the
    strict majority, in which case the light class becomes ink.
    """
    dark = img.pixels <= level
    n_dark = int(dark.sum())
    if n_dark > dark.size - n_dark:
        return BinaryImage(~dark)
    return BinaryImage(dark)


def sobel_edges(img: BinaryImage) -> BinaryImage:
    """Mark pixels with a non-zero 3x3 Sobel gradient (replicated borders)."""
    p = np.pad(img.bits.astype(np.int32), 1, mode="edge")
    h, w = img.bits.shape

    def s(dy, dx):
        return p[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    gx = (s(-1, 1) + 2 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2 * s(0, -1) + s(1, -1))
    gy = (s(1, -1) + 2 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2 * s(-1, 0) + s(-1, 1))
    return BinaryImage((gx != 0) | (gy != 0))


def dilate(img: BinaryImage) -> BinaryImage:
    """2x2 square dilation, origin at the top-left cell of the element."""
    b = img.bits.astype(bool)
    out = b.copy()
    out[1:, :] |= b[:-1, :]
    out[:, 1:] |= b[:, :-1]
    out[1:, 1:] |= b[:-1, :-1]
    return BinaryImage(out)


def _runs(row: np.ndarray) -> list[tuple[int, int]]:
    d = np.diff(np.concatenate(([0], row.astype(np.int8), [0])))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return list(zip(starts.tolist(), ends.tolist()))


def _label(bits: np.ndarray, connectivity: int) -> tuple[np.ndarray, int]:
    # Run-length union-find. Runs are produced in raster order, so numbering
    # roots on first sight yields raster-scan first-encounter labels.
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    reach = 1 if connectivity == 8 else 0
    parent: list[int] = []

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    runs: list[tuple[int, int, int]] = []
    prev: list[int] = []
    for y in range(bits.shape[0]):
        cur = []
        j = 0
        for x0, x1 in _runs(bits[y]):
            idx = len(runs)
            runs.append((y, x0, x1))
            parent.append(idx)
            cur.append(idx)
            while j < len(prev) and runs[prev[j]][2] + reach <= x0:
                j += 1
            k = j
            while k < len(prev) and runs[prev[k]][1] < x1 + reach:
                a, b = find(idx), find(prev[k])
                if a != b:
                    parent[max(a, b)] = min(a, b)
                k += 1
        prev = cur

    labels = np.zeros(bits.shape, dtype=np.int32)
    ids: dict[int, int] = {}
    for idx, (y, x0, x1) in enumerate(runs):
        root = find(idx)
        if root not in ids:
            ids[root] = len(ids) + 1
        labels[y, x0:x1] = ids[root]
    return labels, len(ids)


def label_components(img: BinaryImage, connectivity: int = 8) -> tuple[np.ndarray, int]:
    return _label(img.bits, connectivity)


def fill_holes(img: BinaryImage) -> BinaryImage:
    """Fill background regions that are not 4-connected to the image border."""
    bg = img.bits == 0
    labels, n = _label(bg, 4)
    if n == 0:
        return BinaryImage(img.bits)
    border = np.concatenate((labels[0], labels[-1], labels[:, 0], labels[:, -1]))
    outside = np.zeros(n + 1, dtype=bool)
    outside[border] = True
    outside[0] = False  # label 0 is the original foreground
    return BinaryImage(~outside[labels])


def bounding_boxes(labels: np.ndarray, count: int) -> list[GlyphBox]:
    if count == 0:
        return []
    ys, xs = np.nonzero(labels)
    lab = labels[ys, xs]
    x0 = np.full(count + 1, np.iinfo(np.int64).max)
    y0 = x0.copy()
    x1 = np.full(count + 1, -1)
    y1 = x1.copy()
    np.minimum.at(x0, lab, xs)
    np.minimum.at(y0, lab, ys)
    np.maximum.at(x1, lab, xs)
    np.maximum.at(y1, lab, ys)
    return [
        GlyphBox(int(x0[i]), int(y0[i]), int(x1[i] - x0[i] + 1), int(y1[i] - y0[i] + 1), i)
        for i in range(1, count + 1)
    ]


def reading_order(boxes: list[GlyphBox], img_height: int | None = None) -> list[GlyphBox]:
    """Group boxes into text rows, then order rows top-down and boxes left-right.

    Two boxes share a row when their vertical centers differ by less than
    half the median box height. ``img_height`` is accepted for API symmetry
    and unused.
    """
    if not boxes:
        return []
    half = float(np.median([b.h for b in boxes])) / 2
    rows: list[list[GlyphBox]] = []
    anchor = None
    for b in sorted(boxes, key=lambda b: (b.center_y, b.x)):
        if anchor is None or abs(b.center_y - anchor) >= half:
            rows.append([])
            anchor = b.center_y
        rows[-1].append(b)
    ordered = [b for row in rows for b in sorted(row, key=lambda b: b.x)]
    return [replace(b, index=i) for i, b in enumerate(ordered)]


def crop_tight(img: BinaryImage, box: GlyphBox) -> BinaryImage:
    sub = img.bits[box.y:box.y + box.h, box.x:box.x + box.w]
    rows = np.flatnonzero(sub.any(axis=1))
    cols = np.flatnonzero(sub.any(axis=0))
    if rows.size == 0:
        raise EmptyGlyph(f"no ink inside box at ({box.x}, {box.y}) size {box.w}x{box.h}")
    return BinaryImage(sub[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1])


def normalize_glyph(glyph: BinaryImage) -> np.ndarray:
    """Nearest-neighbour resample to 50 wide by 70 high."""
    if glyph.count() == 0:
        raise EmptyGlyph("glyph has no ink")
    h, w = glyph.bits.shape
    ri = (np.arange(NORM_HEIGHT) * h) // NORM_HEIGHT
    ci = (np.arange(NORM_WIDTH) * w) // NORM_WIDTH
    return glyph.bits[np.ix_(ri, ci)]


def features_from_normalized(norm: np.ndarray, tau: float = DEFAULT_TAU) -> np.ndarray:
    frac = norm.reshape(FEATURE_ROWS, CELL, FEATURE_COLS, CELL).mean(axis=(1, 3))
    return (frac >= tau).astype(np.float64).ravel()


def extract_features(glyph: BinaryImage, tau: float = DEFAULT_TAU) -> np.ndarray:
    """35-vector (7 rows x 5 columns, row-major) of block majority votes."""
    return features_from_normalized(normalize_glyph(glyph), tau)


@dataclass
class Segmentation:
    binary: BinaryImage
    mask: BinaryImage
    labels: np.ndarray
    count: int
    boxes: list[GlyphBox] = field(default_factory=list)

    def glyphs(self) -> list[BinaryImage]:
        return [crop_tight(self.binary, b) for b in self.boxes]


def segment(img: GrayImage, direct: bool = False, dump_dir=None) -> Segmentation:
    """Run the full chain; ``direct`` labels the binarized image as-is.

    With ``dump_dir`` set, each intermediate stage is written there as P5.
    """
    stages: list[tuple[str, GrayImage]] = [("gray", img)]
    binary = binarize(img, otsu_threshold(img))
    stages.append(("binary", binary.to_gray()))
    if direct:
        mask = binary
    else:
        edges = sobel_edges(binary)
        dilated = dilate(edges)
        mask = fill_holes(dilated)
        stages += [("edges", edges.to_gray()), ("dilated", dilated.to_gray()), ("filled", mask.to_gray())]
    labels, count = label_components(mask)
    boxes = reading_order(bounding_boxes(labels, count), img.height)
    if dump_dir is not None:
        out = Path(dump_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, (name, stage) in enumerate(stages):
            write_image(stage, out / f"{i:02d}-{name}.pgm")
    return Segmentation(binary, mask, labels, count, boxes)
