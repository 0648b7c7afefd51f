"""External-solver adapter: free-format MPS in, normalized solution out.

Runs as a subprocess (``python -m flowgraph.highs_adapter model.mps out.sol
[seed]``) so the reference simplex can be cross-checked against an
unrelated engine (scipy's HiGHS).  The MPS parser here is written from the
format description and shares no code with the writer in :mod:`.lp`, so
the write/parse round trip exercises two genuinely different routes.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix


@dataclass
class _ParsedMps:
    row_sense: dict = field(default_factory=dict)  # name -> L | G | E
    row_order: list = field(default_factory=list)
    objective_row: str = ""
    columns: dict = field(default_factory=dict)  # col -> {row: coef}
    col_order: list = field(default_factory=list)
    rhs: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)
    integer: set = field(default_factory=set)


def parse_free_mps(path: str) -> _ParsedMps:
    parsed = _ParsedMps()
    section = None
    in_integer = False
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0].upper()
                continue
            fields = line.split()
            if section == "ROWS":
                sense, name = fields[0].upper(), fields[1]
                if sense == "N":
                    parsed.objective_row = name
                else:
                    parsed.row_sense[name] = sense
                    parsed.row_order.append(name)
            elif section == "COLUMNS":
                if len(fields) >= 3 and fields[1] == "'MARKER'":
                    in_integer = fields[2] == "'INTORG'"
                    continue
                col = fields[0]
                if col not in parsed.columns:
                    parsed.columns[col] = {}
                    parsed.col_order.append(col)
                    if in_integer:
                        parsed.integer.add(col)
                for row, coef in zip(fields[1::2], fields[2::2]):
                    parsed.columns[col][row] = float(coef)
            elif section == "RHS":
                for row, coef in zip(fields[1::2], fields[2::2]):
                    parsed.rhs[row] = float(coef)
            elif section == "RANGES":
                for row, coef in zip(fields[1::2], fields[2::2]):
                    parsed.ranges[row] = float(coef)
            elif section == "BOUNDS":
                kind, col = fields[0].upper(), fields[2]
                val = float(fields[3]) if len(fields) > 3 else 0.0
                if kind == "UP":
                    parsed.upper[col] = val
                elif kind == "LO":
                    parsed.lower[col] = val
                elif kind == "FX":
                    parsed.lower[col] = val
                    parsed.upper[col] = val
                elif kind == "FR":
                    parsed.lower[col] = -np.inf
                    parsed.upper[col] = np.inf
                elif kind == "MI":
                    parsed.lower[col] = -np.inf
                elif kind == "PL":
                    parsed.upper[col] = np.inf
                else:
                    raise ValueError(f"unsupported bound kind {kind}")
    return parsed


def solve(path: str):
    p = parse_free_mps(path)
    n = len(p.col_order)
    col_index = {c: j for j, c in enumerate(p.col_order)}
    cost = np.zeros(n)
    rows_ub, b_ub, rows_eq, b_eq = [], [], [], []

    def row_vector(row_name, sign=1.0):
        vec = np.zeros(n)
        for col, coefs in p.columns.items():
            if row_name in coefs:
                vec[col_index[col]] = sign * coefs[row_name]
        return vec

    for col, coefs in p.columns.items():
        if p.objective_row in coefs:
            cost[col_index[col]] = coefs[p.objective_row]
    for name in p.row_order:
        sense = p.row_sense[name]
        rhs = p.rhs.get(name, 0.0)
        if sense == "E":
            rows_eq.append(row_vector(name))
            b_eq.append(rhs)
        elif sense == "L":
            rows_ub.append(row_vector(name))
            b_ub.append(rhs)
            if name in p.ranges:  # rhs - |range| <= a.x <= rhs
                rows_ub.append(row_vector(name, -1.0))
                b_ub.append(-(rhs - abs(p.ranges[name])))
        else:  # G: rhs <= a.x (<= rhs + |range|)
            rows_ub.append(row_vector(name, -1.0))
            b_ub.append(-rhs)
            if name in p.ranges:
                rows_ub.append(row_vector(name))
                b_ub.append(rhs + abs(p.ranges[name]))
    bounds = [
        (p.lower.get(c, 0.0), p.upper.get(c, np.inf)) for c in p.col_order
    ]
    result = linprog(
        cost,
        A_ub=csr_matrix(np.array(rows_ub)) if rows_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=csr_matrix(np.array(rows_eq)) if rows_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=bounds,
        method="highs",
    )
    return p, result


def main(argv: list[str]) -> int:
    if len(argv) < 2:
        print("usage: highs_adapter <model.mps> <out.sol> [seed]", file=sys.stderr)
        return 2
    mps_path, out_path = argv[0], argv[1]
    p, result = solve(mps_path)
    with open(out_path, "w", encoding="utf-8") as fh:
        if result.status == 0:
            fh.write("status optimal\n")
            fh.write(f"obj {float(result.fun)!r}\n")
            for col, val in zip(p.col_order, result.x):
                fh.write(f"{col} {float(val)!r}\n")
        elif result.status == 2:
            fh.write("status infeasible\n")
        elif result.status == 3:
            fh.write("status unbounded\n")
        else:
            fh.write("status iteration_limit\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
