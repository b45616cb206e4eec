"""Hill-cipher messages rendered as glyph images and recovered by OCR."""

from .hill import HillKey, decrypt, encrypt, keygen
from .neuralnet import Mlp, TrainConfig, init_mlp, train
from .pipeline import DecodeReport, build_corpus, decode_image, encrypt_to_image, ocr_image
from .raster import GrayImage, RenderSpec, read_image, render_text, write_image

__version__ = "0.1.0"

__all__ = [
    "DecodeReport",
    "GrayImage",
    "HillKey",
    "Mlp",
    "RenderSpec",
    "TrainConfig",
    "build_corpus",
    "decode_image",
    "decrypt",
    "encrypt",
    "encrypt_to_image",
    "init_mlp",
    "keygen",
    "ocr_image",
    "read_image",
    "render_text",
    "train",
    "write_image",
]
