"""Embedded 5x7 block font for A-Z.

Glyphs are drawn so that each one is 4-connected and touches all four
edges of its 5x7 cell. Both properties matter downstream: a glyph must
survive segmentation as a single blob, and its tight crop must be the
full cell so the 5x7 feature grid reproduces the bitmap exactly.
"""

from __future__ import annotations

import numpy as np

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7

_GLYPHS = {
    "A": ["#####", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"],
    "B": ["####.", "#..#.", "#..#.", "#####", "#...#", "#...#", "#####"],
    "C": ["#####", "#....", "#....", "#....", "#....", "#....", "#####"],
    "D": ["####.", "#..##", "#...#", "#...#", "#...#", "#..##", "####."],
    "E": ["#####", "#....", "#....", "####.", "#....", "#....", "#####"],
    "F": ["#####", "#....", "#....", "####.", "#....", "#....", "#...."],
    "G": ["#####", "#....", "#....", "#..##", "#...#", "#...#", "#####"],
    "H": ["#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"],
    "I": ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"],
    "J": ["#####", "...#.", "...#.", "...#.", "...#.", "#..#.", "####."],
    "K": ["#...#", "#..##", "#.##.", "###..", "#.##.", "#..##", "#...#"],
    "L": ["#....", "#....", "#....", "#....", "#....", "#....", "#####"],
    "M": ["#####", "#.#.#", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"],
    "N": ["#...#", "##..#", "###.#", "#.###", "#..##", "#...#", "#...#"],
    "O": ["#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"],
    "P": ["#####", "#...#", "#...#", "#####", "#....", "#....", "#...."],
    "Q": ["#####", "#...#", "#...#", "#...#", "#.###", "#..##", "#####"],
    "R": ["#####", "#...#", "#...#", "#####", "#.##.", "#..##", "#...#"],
    "S": ["#####", "#....", "#....", "#####", "....#", "....#", "#####"],
    "T": ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."],
    "U": ["#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"],
    "V": ["#...#", "#...#", "#...#", "##.##", ".#.#.", ".###.", "..#.."],
    "W": ["#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", "#####"],
    "X": ["#...#", "##.##", ".###.", "..#..", ".###.", "##.##", "#...#"],
    "Y": ["#...#", "##.##", ".###.", "..#..", "..#..", "..#..", "..#.."],
    "Z": ["#####", "...##", "..##.", ".##..", "##...", "#....", "#####"],
}


class GlyphFont:
    """Mapping from letter to a 7x5 ``uint8`` bitmap, 1 = ink."""

    def __init__(self, glyphs: dict[str, np.ndarray]):
        self._glyphs = {k: np.asarray(v, dtype=np.uint8) for k, v in glyphs.items()}
        for k, g in self._glyphs.items():
            if g.shape != (GLYPH_HEIGHT, GLYPH_WIDTH):
                raise ValueError(f"glyph {k!r} has shape {g.shape}")
            if not g.any():
                raise ValueError(f"glyph {k!r} has no ink")

    def __getitem__(self, letter: str) -> np.ndarray:
        return self._glyphs[letter]

    def __contains__(self, letter: str) -> bool:
        return letter in self._glyphs

    def letters(self) -> list[str]:
        return sorted(self._glyphs)


def _parse(rows: list[str]) -> np.ndarray:
    return np.array([[c == "#" for c in r] for r in rows], dtype=np.uint8)


DEFAULT_FONT = GlyphFont({k: _parse(v) for k, v in _GLYPHS.items()})
