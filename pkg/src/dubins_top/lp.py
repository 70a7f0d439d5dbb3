"""Dense revised simplex for small maximization LPs with bounded columns.

Rows are fixed when the program is created; columns (with individual
[lower, upper] bounds) may be appended at any time, which is the access
pattern of column generation.  The solver is two-phase primal simplex on
the bounded-variable form, keeps the basis between solves for warm starts,
and switches to Bland's rule after ``5 * (rows + cols)`` degenerate pivots
to guarantee termination.
"""

import math
from dataclasses import dataclass

import numpy as np

#: Primal/dual feasibility tolerance used throughout the solver stack.
TOL = 1e-6
#: Entries smaller than this never pivot.
PIVOT_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LESS_EQUAL = "<="
GREATER_EQUAL = ">="


@dataclass
class LpSolution:
    status: str
    objective: float
    primal: np.ndarray  # one value per structural column
    duals: np.ndarray  # one value per row; <= rows yield >= 0, >= rows <= 0
    basis: tuple | None  # opaque warm-start token for the next solve
    iterations: int = 0


class _Unbounded(Exception):
    pass


class LinearProgram:
    """max c.x subject to row senses/rhs and column bounds."""

    def __init__(self, senses, rhs):
        senses = list(senses)
        rhs = [float(v) for v in rhs]
        if len(senses) != len(rhs):
            raise ValueError("senses and rhs must have equal length")
        for s in senses:
            if s not in (LESS_EQUAL, GREATER_EQUAL):
                raise ValueError(f"unsupported row sense {s!r}")
        self.senses = senses
        self.rhs = np.array(rhs, dtype=float)
        self.columns: list[np.ndarray] = []
        self.objective: list[float] = []
        self.lower: list[float] = []
        self.upper: list[float] = []

    @property
    def num_rows(self) -> int:
        return len(self.senses)

    @property
    def num_cols(self) -> int:
        return len(self.columns)

    def add_column(self, objective: float, row_coeffs, lower: float = 0.0, upper: float = math.inf) -> int:
        coeffs = np.asarray(row_coeffs, dtype=float)
        if coeffs.shape != (self.num_rows,):
            raise ValueError(f"expected {self.num_rows} row coefficients, got {coeffs.shape}")
        if lower > upper:
            raise ValueError("lower bound exceeds upper bound")
        self.columns.append(coeffs)
        self.objective.append(float(objective))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        return self.num_cols - 1

    # -- internal ----------------------------------------------------------

    def _extended(self):
        """Structural columns followed by one slack per row."""
        m, n = self.num_rows, self.num_cols
        A = np.zeros((m, n + m))
        for j, col in enumerate(self.columns):
            A[:, j] = col
        for i, sense in enumerate(self.senses):
            A[i, n + i] = 1.0 if sense == LESS_EQUAL else -1.0
        c = np.concatenate([np.array(self.objective, dtype=float), np.zeros(m)])
        lb = np.concatenate([np.array(self.lower, dtype=float), np.zeros(m)])
        ub = np.concatenate([np.array(self.upper, dtype=float), np.full(m, math.inf)])
        return A, c, lb, ub

    def _symbolic(self, index: int):
        n = self.num_cols
        return ("c", index) if index < n else ("s", index - n)

    def _from_symbolic(self, token):
        kind, idx = token
        if kind == "c":
            if not 0 <= idx < self.num_cols:
                return None
            return idx
        if kind == "s" and 0 <= idx < self.num_rows:
            return self.num_cols + idx
        return None

    def solve(self, warm_start=None) -> LpSolution:
        m = self.num_rows
        A, c, lb, ub = self._extended()
        state = None
        if warm_start is not None:
            state = self._restore(warm_start, A, lb, ub)
        iterations = 0
        if state is None:
            state, phase1_iters, feasible = self._phase1(A, lb, ub)
            iterations += phase1_iters
            if not feasible:
                return LpSolution(INFEASIBLE, math.nan, np.full(self.num_cols, math.nan),
                                  np.full(m, math.nan), None, iterations)
            A, lb, ub = state.pop("arrays")
        basis, at_upper = state["basis"], state["at_upper"]
        cost = np.zeros(A.shape[1])
        cost[: len(c)] = c
        try:
            iterations += self._simplex(A, cost, lb, ub, basis, at_upper)
        except _Unbounded:
            return LpSolution(UNBOUNDED, math.inf, np.full(self.num_cols, math.nan),
                              np.full(m, math.nan), None, iterations)
        x = self._values(A, lb, ub, basis, at_upper)
        duals = np.linalg.solve(A[:, basis].T, cost[basis]) if m else np.zeros(0)
        primal = x[: self.num_cols].copy()
        token = (
            tuple(self._symbolic(j) for j in basis if j < self.num_cols + m),
            frozenset(self._symbolic(j) for j in range(self.num_cols + m)
                      if j not in set(basis) and at_upper[j] and math.isfinite(ub[j])),
        )
        return LpSolution(OPTIMAL, float(cost[: len(c)] @ x[: len(c)]), primal, duals, token, iterations)

    def _restore(self, token, A, lb, ub):
        """Rebuild basis state from a warm-start token; None when unusable."""
        m = self.num_rows
        basis_syms, upper_syms = token
        if len(basis_syms) != m:
            return None
        basis = []
        for sym in basis_syms:
            idx = self._from_symbolic(sym)
            if idx is None:
                return None
            basis.append(idx)
        if len(set(basis)) != m:
            return None
        at_upper = np.zeros(A.shape[1], dtype=bool)
        for sym in upper_syms:
            idx = self._from_symbolic(sym)
            if idx is None:
                return None
            at_upper[idx] = True
        try:
            x = self._values(A, lb, ub, basis, at_upper)
        except np.linalg.LinAlgError:
            return None
        if np.any(x[basis] < lb[basis] - TOL) or np.any(x[basis] > ub[basis] + TOL):
            return None
        return {"basis": basis, "at_upper": at_upper}

    def _phase1(self, A, lb, ub):
        """Find a basic feasible solution, adding artificials where the
        all-slack basis is infeasible."""
        m, n_ext = A.shape
        if m == 0:
            return {"basis": [], "at_upper": np.zeros(n_ext, dtype=bool),
                    "arrays": (A, lb, ub)}, 0, True
        x_struct = lb[: self.num_cols]
        residual = self.rhs - A[:, : self.num_cols] @ x_struct
        basis = []
        art_cols, art_rows = [], []
        for i, sense in enumerate(self.senses):
            slack_val = residual[i] if sense == LESS_EQUAL else -residual[i]
            if slack_val >= 0.0:
                basis.append(self.num_cols + i)
            else:
                col = np.zeros(m)
                col[i] = 1.0 if residual[i] > 0 else -1.0
                art_cols.append(col)
                art_rows.append(i)
                basis.append(n_ext + len(art_cols) - 1)
        if not art_cols:
            at_upper = np.zeros(n_ext, dtype=bool)
            return {"basis": basis, "at_upper": at_upper, "arrays": (A, lb, ub)}, 0, True

        A1 = np.hstack([A, np.column_stack(art_cols)])
        lb1 = np.concatenate([lb, np.zeros(len(art_cols))])
        ub1 = np.concatenate([ub, np.full(len(art_cols), math.inf)])
        cost1 = np.zeros(A1.shape[1])
        cost1[n_ext:] = -1.0
        at_upper = np.zeros(A1.shape[1], dtype=bool)
        iters = self._simplex(A1, cost1, lb1, ub1, basis, at_upper)
        x = self._values(A1, lb1, ub1, basis, at_upper)
        if float(np.sum(x[n_ext:])) > TOL:
            return None, iters, False
        # Pin artificials at zero; they may linger in the basis, degenerate.
        ub1[n_ext:] = 0.0
        return {"basis": basis, "at_upper": at_upper, "arrays": (A1, lb1, ub1)}, iters, True

    def _values(self, A, lb, ub, basis, at_upper):
        x = np.where(at_upper & np.isfinite(ub), ub, lb).astype(float)
        if basis:
            x[basis] = 0.0
            nonbasic_part = A @ x
            x[basis] = np.linalg.solve(A[:, basis], self.rhs - nonbasic_part)
        return x

    def _simplex(self, A, cost, lb, ub, basis, at_upper):
        """Bounded-variable primal simplex; mutates basis/at_upper in place."""
        m, n_ext = A.shape
        bland_after = 5 * (m + self.num_cols)
        degenerate = 0
        bland = False
        iterations = 0
        max_iterations = 2000 + 200 * (m + n_ext)
        basic_set = set(basis)
        while True:
            iterations += 1
            if iterations > max_iterations:
                raise RuntimeError("simplex iteration cap exceeded")
            x = self._values(A, lb, ub, basis, at_upper)
            B = A[:, basis]
            pi = np.linalg.solve(B.T, cost[basis]) if m else np.zeros(0)
            reduced = cost - (pi @ A if m else 0.0)

            entering = -1
            best_score = TOL
            for j in range(n_ext):
                if j in basic_set or lb[j] == ub[j]:
                    continue
                d = reduced[j]
                if (not at_upper[j] and d > TOL) or (at_upper[j] and d < -TOL):
                    if bland:
                        entering = j
                        break
                    if abs(d) > best_score:
                        best_score = abs(d)
                        entering = j
            if entering == -1:
                return iterations

            sigma = -1.0 if at_upper[entering] else 1.0
            w = np.linalg.solve(B, A[:, entering]) if m else np.zeros(0)
            # How far can the entering variable move?
            t_best = ub[entering] - lb[entering]
            leave_pos = -1
            leave_to_upper = False
            for i in range(m):
                wi = sigma * w[i]
                var = basis[i]
                if wi > PIVOT_TOL:
                    t = max((x[var] - lb[var]) / wi, 0.0)
                    to_upper = False
                elif wi < -PIVOT_TOL:
                    if not math.isfinite(ub[var]):
                        continue
                    t = max((ub[var] - x[var]) / -wi, 0.0)
                    to_upper = True
                else:
                    continue
                if t < t_best - PIVOT_TOL or (
                    t < t_best + PIVOT_TOL and leave_pos >= 0 and var < basis[leave_pos]
                ):
                    t_best = t
                    leave_pos = i
                    leave_to_upper = to_upper
            if math.isinf(t_best):
                raise _Unbounded()
            if t_best < PIVOT_TOL:
                degenerate += 1
                if degenerate > bland_after:
                    bland = True
            if leave_pos == -1:
                # The entering variable runs to its other bound; basis unchanged.
                at_upper[entering] = not at_upper[entering]
                continue
            leaving = basis[leave_pos]
            basic_set.discard(leaving)
            basic_set.add(entering)
            basis[leave_pos] = entering
            at_upper[leaving] = leave_to_upper
            at_upper[entering] = False
