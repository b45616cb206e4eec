"""End-to-end flows: training corpus, OCR, and image -> plaintext decoding."""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from . import hill
from .font import DEFAULT_FONT, GlyphFont
from .neuralnet import (
    DEFAULT_HIDDEN,
    N_CLASSES,
    Dataset,
    Mlp,
    TrainConfig,
    TrainResult,
    classify,
    forward,
    init_mlp,
    train,
)
from .raster import GrayImage, RenderSpec, render_text, write_image
from .segment import (
    CELL,
    DEFAULT_TAU,
    FEATURE_COLS,
    FEATURE_ROWS,
    crop_tight,
    extract_features,
    features_from_normalized,
    normalize_glyph,
    segment,
)

ALPHABET = string.ascii_uppercase


class EmptyImage(ValueError):
    pass


class SelectionError(ValueError):
    pass


class LowConfidence(ValueError):
    pass


@dataclass
class Recognition:
    text: str
    confidences: list[float]
    count: int


@dataclass
class DecodeReport:
    recognized: str
    confidences: list[float]
    ciphertext: str
    plaintext: str


def one_hot(letter: str) -> np.ndarray:
    t = np.zeros(N_CLASSES)
    t[ALPHABET.index(letter)] = 1.0
    return t


def normalized_glyph(letter: str, font: GlyphFont = DEFAULT_FONT, spec: RenderSpec = RenderSpec()) -> np.ndarray:
    """Render one letter alone and run it through segmentation to a 50x70 bitmap."""
    seg = segment(render_text(letter, font, spec))
    if seg.count != 1:
        raise ValueError(f"letter {letter!r} segmented into {seg.count} components")
    return normalize_glyph(crop_tight(seg.binary, seg.boxes[0]))


def build_corpus(letters=ALPHABET, copies: int = 4, noise: float = 0.0, seed: int = 0,
                 font: GlyphFont = DEFAULT_FONT, spec: RenderSpec = RenderSpec(),
                 tau: float = DEFAULT_TAU) -> Dataset:
    """Rendered training set, ``copies`` rows of every letter.

    Noise flips whole 10x10 feature cells of the normalized glyph, each with
    probability ``noise``, before features are extracted.
    """
    letters = sorted(set(letters.upper()) if isinstance(letters, str) else {c.upper() for c in letters})
    if not letters:
        raise ValueError("empty letter set")
    if copies < 1:
        raise ValueError("copies must be >= 1")
    if not 0 <= noise < 0.5:
        raise ValueError("noise probability must lie in [0, 0.5)")
    rng = np.random.default_rng(seed)
    clean = {c: normalized_glyph(c, font, spec) for c in letters}
    cell = np.ones((CELL, CELL), dtype=np.uint8)
    X, T = [], []
    for _ in range(copies):
        for c in letters:
            flips = (rng.random((FEATURE_ROWS, FEATURE_COLS)) < noise).astype(np.uint8)
            glyph = clean[c] ^ np.kron(flips, cell)
            X.append(features_from_normalized(glyph, tau))
            T.append(one_hot(c))
    return Dataset(np.array(X), np.array(T))


def train_model(data: Dataset, hidden: int = DEFAULT_HIDDEN, cfg: TrainConfig = TrainConfig()) -> TrainResult:
    return train(init_mlp(hidden, cfg.seed), data, cfg)


def recognize(img: GrayImage, net: Mlp, direct: bool = False, dump_dir=None) -> Recognition:
    seg = segment(img, direct=direct, dump_dir=dump_dir)
    if seg.count == 0:
        raise EmptyImage("no glyphs found in image")
    feats = np.array([extract_features(g) for g in seg.glyphs()])
    _, out = forward(net, feats)
    idx = [classify(net, f) for f in feats]
    return Recognition(
        "".join(ALPHABET[i] for i in idx),
        [float(o.max()) for o in out],
        seg.count,
    )


def ocr_image(img: GrayImage, net: Mlp, direct: bool = False) -> str:
    return recognize(img, net, direct).text


def decode_image(img: GrayImage, net: Mlp, key: hill.HillKey, skip: int = 0, take: int | None = None,
                 min_confidence: float | None = None, direct: bool = False, dump_dir=None) -> DecodeReport:
    """OCR the image, slice glyphs ``[skip, skip+take)`` and Hill-decrypt them."""
    rec = recognize(img, net, direct, dump_dir)
    n = len(rec.text)
    if take is None:
        take = n - skip
    if skip < 0 or take < 0 or skip + take > n:
        raise SelectionError(f"range skip={skip} take={take} outside {n} recognized glyphs")
    if take % key.n:
        raise SelectionError(f"selected {take} glyphs, not a multiple of key size {key.n}")
    if min_confidence is not None:
        low = [i for i, c in enumerate(rec.confidences) if c < min_confidence]
        if low:
            raise LowConfidence(
                f"glyphs {low} below confidence {min_confidence}: "
                + ", ".join(f"{rec.text[i]}={rec.confidences[i]:.3f}" for i in low)
            )
    cipher = rec.text[skip:skip + take]
    return DecodeReport(rec.text, rec.confidences, cipher, hill.decrypt(cipher, key))


def encrypt_to_image(text: str, key: hill.HillKey, spec: RenderSpec = RenderSpec(), path=None,
                     font: GlyphFont = DEFAULT_FONT) -> GrayImage:
    cipher = hill.encrypt(text, key)
    if not cipher:
        raise ValueError("nothing to render: empty message")
    img = render_text(cipher, font, spec)
    if path is not None:
        write_image(img, path)
    return img
