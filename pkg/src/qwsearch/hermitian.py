"""Dense Hermitian matrices."""

from __future__ import annotations

from typing import Any

import numpy as np

from .errors import SymmetryError

# relative deviation from Hermitian symmetry accepted (and removed) at construction
SYMMETRY_TOL = 1e-12


class HermitianMatrix:
    """Immutable dense Hermitian matrix.

    The stored entries satisfy ``entry(j, k) == conj(entry(k, j))`` exactly:
    input within ``SYMMETRY_TOL`` of Hermitian is symmetrized, anything
    further off raises :class:`SymmetryError`. Real input stays real.
    """

    __slots__ = ("_data",)

    def __init__(self, entries: Any, tol: float = SYMMETRY_TOL):
        if isinstance(entries, HermitianMatrix):
            self._data = entries._data
            return
        a = np.array(entries)
        if a.dtype.kind in "biu":
            a = a.astype(float)
        elif a.dtype.kind not in "fc":
            raise SymmetryError(f"unsupported matrix dtype {a.dtype}")
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise SymmetryError(f"matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise SymmetryError("matrix has non-finite entries")
        if np.iscomplexobj(a) and not np.any(a.imag):
            a = a.real.copy()
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        if dev > tol * scale:
            raise SymmetryError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3g})")
        a = (a + a.conj().T) / 2
        a.setflags(write=False)
        self._data = a

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._data

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self._data)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy() if copy else self._data
        return self._data.astype(dtype)

    def __getitem__(self, idx):
        return self._data[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.all(self._data == other._data))

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        kind = "real" if self.is_real else "complex"
        return f"HermitianMatrix(dim={self.dim}, {kind})"

    def to_document(self) -> dict:
        """Row-major list of ``[re, im]`` pairs."""
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self._data.astype(complex)]
        return {"dim": self.dim, "matrix": rows}

    @classmethod
    def from_document(cls, doc: dict) -> "HermitianMatrix":
        try:
            rows = doc["matrix"]
        except (KeyError, TypeError):
            raise SymmetryError("matrix document needs a 'matrix' field") from None
        try:
            a = np.array(rows, dtype=float)
        except (TypeError, ValueError):
            raise SymmetryError("matrix entries must be numbers or [re, im] pairs") from None
        if a.ndim == 3:
            if a.shape[2] != 2:
                raise SymmetryError("complex entries must be [re, im] pairs")
            a = a[..., 0] + 1j * a[..., 1]
        return cls(a)
