"""Backend selection and the bitset-table wrappers the DP uses.

The compiled extension (cyclab._speedups) is preferred; set CYC_FORCE_PURE=1
to force the pure-Python kernels, e.g. for the benchmark or to sanity-check a
suspicious result against the reference implementation.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("CYC_FORCE_PURE"):
    _impl = _pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND: str = _impl.BACKEND
_COMPILED = BACKEND == "compiled"

if _COMPILED:
    import numpy as _np


def find_cycle(adj, n, required, allowed, first_u=-1, first_v=-1, step_limit=0):
    return _impl.find_cycle(adj, n, required, allowed, first_u, first_v, step_limit)


def yes_pac_scan(adj, n, r_vertices, k, step_limit=0, max_subsets=0):
    return _impl.yes_pac_scan(adj, n, r_vertices, k, step_limit, max_subsets)


def canonical_form(n, adj):
    if _COMPILED and n <= 11:
        return _impl.canonical_form(n, adj)
    return _pure.canonical_form(n, adj)


def _words(nbits: int) -> int:
    return max(1, (nbits + 63) // 64)


def _to_arr(x: int, words: int):
    return _np.frombuffer(bytearray(x.to_bytes(words * 8, "little")), dtype="<u8")


def _from_arr(arr) -> int:
    return int.from_bytes(arr.tobytes(), "little")


class InsertTable:
    """Per child pairing id, the OR-mask of parent pairing ids it can become."""

    def __init__(self, images, out_bits: int):
        self.images = list(images)
        self.out_bits = out_bits
        self.in_words = _words(len(self.images))
        self.out_words = _words(out_bits)
        self._mat = None

    def apply(self, sig: int) -> int:
        if _COMPILED:
            if self._mat is None:
                self._mat = _np.zeros((len(self.images), self.out_words), dtype=_np.uint64)
                for i, img in enumerate(self.images):
                    self._mat[i] = _to_arr(img, self.out_words)
            out = _np.zeros(self.out_words, dtype=_np.uint64)
            _impl.or_images_arr(_to_arr(sig, self.in_words), self._mat, out)
            return _from_arr(out)
        return _pure.or_images(sig, self.images)


class ForgetTable:
    """Per child pairing id, the parent pairing id it dissolves to (-1 dies)."""

    def __init__(self, mapping, out_bits: int):
        self.mapping = list(mapping)
        self.out_bits = out_bits
        self.in_words = _words(len(self.mapping))
        self.out_words = _words(out_bits)
        self._arr = None

    def apply(self, sig: int) -> int:
        if _COMPILED:
            if self._arr is None:
                self._arr = _np.asarray(self.mapping, dtype=_np.int32)
            out = _np.zeros(self.out_words, dtype=_np.uint64)
            _impl.map_bits_arr(_to_arr(sig, self.in_words), self._arr, out)
            return _from_arr(out)
        return _pure.map_bits(sig, self.mapping)


class JoinTable:
    """Sparse (left id, right id) -> parent id relation in CSR-by-left shape."""

    def __init__(self, n_in: int, pairs, out_bits: int):
        rows: list[list[tuple[int, int]]] = [[] for _ in range(n_in)]
        for a, b, p in pairs:
            rows[a].append((b, p))
        offs = [0]
        cols: list[int] = []
        pars: list[int] = []
        for row in rows:
            row.sort()
            for b, p in row:
                cols.append(b)
                pars.append(p)
            offs.append(len(cols))
        self.offs = offs
        self.cols = cols
        self.pars = pars
        self.in_words = _words(n_in)
        self.out_words = _words(out_bits)
        self._masks = None
        self._np = None

    def apply(self, sig1: int, sig2: int) -> int:
        if _COMPILED:
            if self._np is None:
                self._np = (
                    _np.asarray(self.offs, dtype=_np.int64),
                    _np.asarray(self.cols, dtype=_np.int32),
                    _np.asarray(self.pars, dtype=_np.int32),
                )
            out = _np.zeros(self.out_words, dtype=_np.uint64)
            _impl.join_rows_arr(
                _to_arr(sig1, self.in_words), _to_arr(sig2, self.in_words),
                self._np[0], self._np[1], self._np[2], out,
            )
            return _from_arr(out)
        if self._masks is None:
            self._masks = [1 << p for p in self.pars]
        return _pure.join_rows(sig1, sig2, self.offs, self.cols, self._masks)
