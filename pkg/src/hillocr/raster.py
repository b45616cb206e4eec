"""Netpbm image I/O and glyph rendering.

Readers accept P2/P5 (gray) and P3/P6 (color) with maxval 255; color is
folded to gray with BT.601 luma weights. The writer always emits binary
P5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .font import DEFAULT_FONT, GLYPH_HEIGHT, GLYPH_WIDTH, GlyphFont

LUMA = (0.2989, 0.5870, 0.1140)
INK = 0
PAPER = 255


class ParseError(ValueError):
    def __init__(self, msg: str, offset: int):
        self.offset = offset
        super().__init__(f"{msg} (at byte offset {offset})")


class GrayImage:
    """8-bit grayscale raster; ``pixels`` has shape ``(height, width)``."""

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.pixels = arr

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True)
class RenderSpec:
    scale: int = 10
    spacing: int = 20
    margin: int = 20
    per_row: int = 10

    def __post_init__(self):
        if self.scale < 1 or self.spacing < 1 or self.per_row < 1 or self.margin < 0:
            raise ValueError(f"invalid render spec: {self}")


_MAGIC = {b"P2": (1, False), b"P5": (1, True), b"P3": (3, False), b"P6": (3, True)}


def _header_tokens(data: bytes, pos: int, count: int) -> tuple[list[tuple[int, bytes]], int]:
    # Returns ``count`` tokens with their offsets, plus the offset just past the last one.
    toks = []
    while len(toks) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ParseError("unexpected end of header", pos)
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        toks.append((start, data[start:pos]))
    return toks, pos


def decode_netpbm(data: bytes) -> GrayImage:
    magic = data[:2]
    if magic not in _MAGIC:
        raise ParseError(f"unsupported magic {magic!r}", 0)
    channels, binary = _MAGIC[magic]
    toks, pos = _header_tokens(data, 2, 3)
    vals = []
    for off, tok in toks:
        if not tok.isdigit():
            raise ParseError(f"expected integer, got {tok!r}", off)
        vals.append(int(tok))
    w, h, maxval = vals
    if w < 1 or h < 1:
        raise ParseError(f"bad dimensions {w}x{h}", toks[0][0])
    if maxval != 255:
        raise ParseError(f"maxval must be 255, got {maxval}", toks[2][0])
    n = w * h * channels
    if binary:
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise ParseError("missing whitespace after maxval", pos)
        start = pos + 1
        raw = data[start:start + n]
        if len(raw) < n:
            raise ParseError(f"truncated pixel data: expected {n} bytes, got {len(raw)}", start + len(raw))
        samples = np.frombuffer(raw, dtype=np.uint8)
    else:
        body = data[pos:]
        fields = body.split()
        if len(fields) < n:
            raise ParseError(f"truncated pixel data: expected {n} samples, got {len(fields)}", len(data))
        try:
            samples = np.array([int(f) for f in fields[:n]], dtype=np.int64)
        except ValueError:
            raise ParseError("non-integer sample in ASCII raster", pos) from None
        if samples.min() < 0 or samples.max() > 255:
            raise ParseError("sample exceeds maxval", pos)
    if channels == 1:
        return GrayImage(samples.reshape(h, w).astype(np.uint8))
    rgb = samples.reshape(h, w, 3).astype(np.float64)
    gray = rgb[..., 0] * LUMA[0] + rgb[..., 1] * LUMA[1] + rgb[..., 2] * LUMA[2]
    return GrayImage(np.clip(np.floor(gray + 0.5), 0, 255).astype(np.uint8))


def encode_p5(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes()


def read_image(path) -> GrayImage:
    return decode_netpbm(Path(path).read_bytes())


def write_image(img: GrayImage, path) -> None:
    Path(path).write_bytes(encode_p5(img))


def render_text(text: str, font: GlyphFont = DEFAULT_FONT, spec: RenderSpec = RenderSpec()) -> GrayImage:
    """Draw ``text`` as black glyphs on white, wrapping every ``spec.per_row`` cells.

    Spaces occupy a cell but leave it blank.
    """
    text = text.upper()
    for c in text:
        if c != " " and c not in font:
            raise ValueError(f"cannot render character {c!r}")
    if not text:
        raise ValueError("nothing to render")
    gw, gh = GLYPH_WIDTH * spec.scale, GLYPH_HEIGHT * spec.scale
    cols = min(len(text), spec.per_row)
    rows = math.ceil(len(text) / spec.per_row)
    width = 2 * spec.margin + cols * gw + (cols - 1) * spec.spacing
    height = 2 * spec.margin + rows * gh + (rows - 1) * spec.spacing
    canvas = np.full((height, width), PAPER, dtype=np.uint8)
    block = np.ones((spec.scale, spec.scale), dtype=np.uint8)
    for i, c in enumerate(text):
        if c == " ":
            continue
        r, k = divmod(i, spec.per_row)
        y = spec.margin + r * (gh + spec.spacing)
        x = spec.margin + k * (gw + spec.spacing)
        ink = np.kron(font[c], block).astype(bool)
        canvas[y:y + gh, x:x + gw][ink] = INK
    return GrayImage(canvas)
