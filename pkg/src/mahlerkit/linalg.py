"""Exact linear algebra over Q used by the solvers and the guessing kernel.

Vectors are lists of Fraction.  The workhorse is an incremental echelon
form that consumes rows one at a time, which lets the callers abort early:
an inconsistent inhomogeneous system is usually detected after about as
many rows as there are unknowns, and a homogeneous system with full column
rank is recognized as soon as every column carries a pivot.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class Echelon:
    """Row echelon accumulator over Q with an optional augmented column."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, tuple[list[Fraction], Fraction]] = {}
        self.inconsistent = False

    def add_row(self, row: list[Fraction], rhs: Fraction = ZERO) -> None:
        """Reduce a row against the current pivots and absorb what is left."""
        row = row[:]
        for col in sorted(self.pivot_rows):
            c = row[col]
            if c != 0:
                prow, prhs = self.pivot_rows[col]
                for j in range(col, self.ncols):
                    if prow[j] != 0:
                        row[j] -= c * prow[j]
                rhs -= c * prhs
        for col in range(self.ncols):
            if row[col] != 0:
                inv = 1 / row[col]
                row = [x * inv for x in row]
                rhs *= inv
                self.pivot_rows[col] = (row, rhs)
                return
        if rhs != 0:
            self.inconsistent = True

    def rank(self) -> int:
        return len(self.pivot_rows)

    def full_column_rank(self) -> bool:
        return len(self.pivot_rows) == self.ncols

    def _back_substitute(self) -> None:
        # Clear pivot columns above each pivot so free columns read off directly.
        cols = sorted(self.pivot_rows, reverse=True)
        for col in cols:
            prow, prhs = self.pivot_rows[col]
            for other in cols:
                if other >= col:
                    continue
                orow, orhs = self.pivot_rows[other]
                c = orow[col]
                if c != 0:
                    for j in range(self.ncols):
                        if prow[j] != 0:
                            orow[j] -= c * prow[j]
                    self.pivot_rows[other] = (orow, orhs - c * prhs)

    def solution(self) -> list[Fraction] | None:
        """A particular solution with all free variables set to 0."""
        if self.inconsistent:
            return None
        self._back_substitute()
        x = [ZERO] * self.ncols
        for col, (_, rhs) in self.pivot_rows.items():
            x[col] = rhs
        return x

    def nullspace(self) -> list[list[Fraction]]:
        """Echelonized kernel basis, one vector per free column, in order."""
        self._back_substitute()
        pivots = set(self.pivot_rows)
        basis = []
        for free in range(self.ncols):
            if free in pivots:
                continue
            v = [ZERO] * self.ncols
            v[free] = ONE
            for col, (prow, _) in self.pivot_rows.items():
                if prow[free] != 0:
                    v[col] = -prow[free]
            basis.append(v)
        return basis


def solve_system(rows, rhs_values, ncols: int) -> list[Fraction] | None:
    """Solve A x = b exactly; None when inconsistent."""
    ech = Echelon(ncols)
    for row, rhs in zip(rows, rhs_values):
        ech.add_row(row, rhs)
        if ech.inconsistent:
            return None
    return ech.solution()


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    ech = Echelon(ncols)
    for row in rows:
        ech.add_row(row)
        if ech.full_column_rank():
            return []
    return ech.nullspace()
