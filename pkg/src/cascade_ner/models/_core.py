"""Feature-id indexing and averaged weight tables."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class FeatureIndex:
    """Maps sorted unsigned 64-bit feature hashes to dense row numbers."""

    def __init__(self, ids):
        self.ids = np.unique(np.asarray(ids, dtype=np.uint64))

    def __len__(self):
        return len(self.ids)

    def rows(self, ids) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.uint64)
        if not len(self.ids) or not len(ids):
            return np.zeros(0, dtype=np.intp)
        pos = np.searchsorted(self.ids, ids)
        pos[pos == len(self.ids)] = 0
        return pos[self.ids[pos] == ids]

    def matrix(self, id_lists) -> sp.csr_matrix:
        """One CSR row per feature-id array; unknown ids are dropped."""
        indptr = [0]
        indices = []
        for ids in id_lists:
            r = self.rows(ids)
            indices.append(r)
            indptr.append(indptr[-1] + len(r))
        indices = np.concatenate(indices) if indices else np.zeros(0, dtype=np.intp)
        data = np.ones(len(indices))
        return sp.csr_matrix((data, indices, indptr), shape=(len(id_lists), len(self)))


class AveragedTable:
    """Perceptron weights with the lazy-averaging accumulator trick.

    ``average()`` returns ``w - u / c`` where ``u`` accumulates each update
    scaled by the instance counter ``c``.
    """

    def __init__(self, shape):
        self.w = np.zeros(shape)
        self.u = np.zeros(shape)
        self.c = 1

    def add(self, index, delta):
        self.w[index] += delta
        self.u[index] += self.c * delta

    def tick(self):
        self.c += 1

    def average(self) -> np.ndarray:
        return self.w - self.u / self.c
